"""
SCLIC: Small dense linear programming

Dense two-phase tableau simplex with Bland's anti-cycling rule. Problems
are given as

    maximize   c.x
    subject to A x = b
               x_i >= l_i   (l_i may be -inf for free variables)

No presolve is done - at this scale determinism and auditability matter
more than speed.
"""
import logging

import numpy as np

from .errors import NumericFailure, ScaleExceeded
from .utils import tolerances

LOG = logging.getLogger(__name__)

MAX_VARIABLES = 512
MAX_CONSTRAINTS = 512

class LpProblem:
    """
    Linear program in equality form with variable lower bounds
    """

    def __init__(self, objective, a_eq, b_eq, lower=None):
        self.objective = np.asarray(objective, dtype=float).ravel()
        n = self.objective.size
        self.a_eq = np.asarray(a_eq, dtype=float).reshape(-1, n)
        self.b_eq = np.asarray(b_eq, dtype=float).ravel()
        if self.a_eq.shape[0] != self.b_eq.size:
            raise ValueError(f"{self.a_eq.shape[0]} constraint rows but {self.b_eq.size} right hand sides")
        if lower is None:
            lower = np.zeros(n)
        self.lower = np.asarray(lower, dtype=float).ravel()
        if self.lower.size != n:
            raise ValueError(f"{self.lower.size} lower bounds for {n} variables")
        if np.any(np.isposinf(self.lower)) or np.any(np.isnan(self.lower)):
            raise ValueError("Lower bounds must be finite or -inf")

    @property
    def num_variables(self):
        return self.objective.size

    @property
    def num_constraints(self):
        return self.b_eq.size

class LpOutcome:
    status = None

    def __repr__(self):
        return f"{type(self).__name__}()"

class Optimal(LpOutcome):
    status = "optimal"

    def __init__(self, solution, value):
        self.solution = solution
        self.value = value

    def __repr__(self):
        return f"Optimal(value={self.value}, solution={self.solution.tolist()})"

class Infeasible(LpOutcome):
    status = "infeasible"

class Unbounded(LpOutcome):
    status = "unbounded"

class _Tableau:
    """
    Simplex tableau for: minimize c.x s.t. A x = b, x >= 0, b >= 0

    The last row holds reduced costs and minus the objective value
    """

    def __init__(self, a, b, tol):
        self.tol = tol
        self.rows, self.cols = a.shape
        self.tab = np.zeros((self.rows + 1, self.cols + 1))
        self.tab[:-1, :-1] = a
        self.tab[:-1, -1] = b
        self.basis = np.full(self.rows, -1, dtype=int)
        self.max_pivots = 50 * (self.rows + self.cols) + 100

    def set_costs(self, costs):
        """Set reduced costs for the current basis from the cost vector"""
        cost_basis = costs[self.basis]
        self.tab[-1, :-1] = costs - cost_basis @ self.tab[:-1, :-1]
        self.tab[-1, -1] = -cost_basis @ self.tab[:-1, -1]

    def pivot(self, row, col):
        self.tab[row] /= self.tab[row, col]
        factors = self.tab[:, col].copy()
        factors[row] = 0
        self.tab -= np.outer(factors, self.tab[row])
        self.basis[row] = col

    def run(self, allowed):
        """
        Run Bland's rule simplex over the allowed columns

        :return: True if optimal, False if unbounded
        """
        for _ in range(self.max_pivots):
            reduced = self.tab[-1, :-1]
            candidates = np.flatnonzero(allowed & (reduced < -self.tol))
            if candidates.size == 0:
                return True
            col = candidates[0]
            column = self.tab[:-1, col]
            rows = np.flatnonzero(column > self.tol)
            if rows.size == 0:
                return False
            ratios = self.tab[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.tol * max(1.0, abs(best))]
            row = ties[np.argmin(self.basis[ties])]
            self.pivot(row, col)
        raise NumericFailure(f"Simplex did not terminate within {self.max_pivots} pivots")

def _standard_form(problem):
    """
    Substitute x = l + x' for bounded variables and x = x+ - x- for free ones

    :return: Tuple of (A, b, c, recover) where recover maps a standard form
             solution back to the original variables
    """
    free = np.isneginf(problem.lower)
    shift = np.where(free, 0.0, problem.lower)
    a = np.hstack([problem.a_eq, -problem.a_eq[:, free]])
    c = np.concatenate([problem.objective, -problem.objective[free]])
    b = problem.b_eq - problem.a_eq @ shift
    free_idx = np.flatnonzero(free)
    n = problem.num_variables

    def recover(x_std):
        x = x_std[:n] + shift
        x[free_idx] -= x_std[n:]
        return x

    return a, b, c, recover

def lp_solve(problem, tol=None):
    """
    Solve a linear program (maximization)

    :param problem: LpProblem
    :param tol: Pivot and feasibility tolerance, defaults to the LP tolerance
    :return: Optimal, Infeasible or Unbounded
    :raise ScaleExceeded: For more than 512 variables or constraints
    """
    tol = tolerances.get().lp if tol is None else tol
    if problem.num_variables > MAX_VARIABLES or problem.num_constraints > MAX_CONSTRAINTS:
        raise ScaleExceeded(f"LP with {problem.num_variables} variables and {problem.num_constraints} "
                            f"constraints exceeds {MAX_VARIABLES}x{MAX_CONSTRAINTS}")

    a, b, c, recover = _standard_form(problem)
    # Internally we minimize
    c = -c
    flip = b < 0
    a[flip] *= -1
    b[flip] *= -1
    rows, cols = a.shape
    scale = max(1.0, np.abs(b).max(initial=0.0))

    if rows == 0:
        if np.any(c < -tol):
            return Unbounded()
        x_std = np.zeros(cols)
        x = recover(x_std)
        return Optimal(x, float(problem.objective @ x))

    # Phase I: artificial variables for every row
    tableau = _Tableau(np.hstack([a, np.eye(rows)]), b, tol)
    tableau.basis[:] = np.arange(cols, cols + rows)
    phase1_costs = np.concatenate([np.zeros(cols), np.ones(rows)])
    tableau.set_costs(phase1_costs)
    tableau.run(np.ones(cols + rows, dtype=bool))
    infeasibility = -tableau.tab[-1, -1]
    if infeasibility > tol * scale * max(1, rows):
        LOG.debug(f"LP infeasible: phase I optimum {infeasibility:.3e}")
        return Infeasible()

    # Drive remaining (zero level) artificials out of the basis, dropping redundant rows
    keep_rows = np.ones(rows + 1, dtype=bool)
    for row in range(rows):
        if tableau.basis[row] < cols:
            continue
        entries = np.abs(tableau.tab[row, :cols])
        nonzero = np.flatnonzero(entries > tol)
        if nonzero.size > 0:
            tableau.pivot(row, nonzero[0])
        else:
            LOG.debug(f"Dropping redundant constraint row {row}")
            keep_rows[row] = False

    # Phase II on the original columns
    tableau.tab = np.hstack([tableau.tab[keep_rows][:, :cols], tableau.tab[keep_rows][:, -1:]])
    tableau.basis = tableau.basis[keep_rows[:-1]]
    tableau.rows = tableau.basis.size
    tableau.set_costs(c)
    if not tableau.run(np.ones(cols, dtype=bool)):
        return Unbounded()

    x_std = np.zeros(cols)
    x_std[tableau.basis] = tableau.tab[:-1, -1]
    # Polish the basic solution against the original constraints
    kept = np.flatnonzero(keep_rows[:-1])
    basis_matrix = a[kept][:, tableau.basis]
    try:
        polished = np.linalg.solve(basis_matrix, b[kept])
        if np.all(polished >= -tol * scale):
            x_std[tableau.basis] = np.maximum(polished, 0)
    except np.linalg.LinAlgError:
        LOG.debug("Singular basis while polishing LP solution")
    x = recover(x_std)
    return Optimal(x, float(problem.objective @ x))

def is_feasible(a_eq, b_eq, lower=None, tol=None):
    """
    :return: Feasible point of {A x = b, x >= lower} or None if infeasible
    """
    a_eq = np.atleast_2d(np.asarray(a_eq, dtype=float))
    problem = LpProblem(np.zeros(a_eq.shape[1]), a_eq, b_eq, lower)
    outcome = lp_solve(problem, tol)
    if isinstance(outcome, Optimal):
        return outcome.solution
    return None
