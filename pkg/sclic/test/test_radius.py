import math

import numpy as np
import pytest
import scipy.optimize

from sclic.certify.radius import MAX_DELTA, cone_width_delta, stability_radius_A
from sclic.convex.cones import ConeRep, RayDirection, analytic_margin
from sclic.convex.dd import dd_convert
from sclic.convex.sets import contains, sample_cone
from sclic.errors import NotApplicable, RayNotInterior
from sclic.linalg import LinearMap

from .data import FAST

def test_radius_full_space():
    K = ConeRep.from_generators([[1, 0], [-1, 0], [0, 1], [0, -1]])
    assert(stability_radius_A(LinearMap(np.eye(2)), K, FAST) == pytest.approx(1.0, abs=2e-6))

def test_radius_orthant():
    K = ConeRep(2, np.eye(2))
    assert(stability_radius_A(LinearMap(np.eye(2)), K, FAST) == pytest.approx(1.0, abs=2e-6))

def test_radius_wedge():
    K = ConeRep.from_generators([[2, 1], [1, 2]])
    radius = stability_radius_A(LinearMap([[1, 0]]), K, FAST)
    assert(radius == pytest.approx(1 / math.sqrt(5), abs=2e-6))
    assert(radius < 1 / math.sqrt(5))

def test_radius_soc():
    radius = stability_radius_A(LinearMap([[0, 0, 1]]), ConeRep.second_order(3), FAST)
    assert(radius == pytest.approx(1 / math.sqrt(2), abs=1e-5))

def test_radius_zero_cone():
    assert(math.isinf(stability_radius_A(LinearMap([[1, 1]]), ConeRep.zero(2), FAST)))

def test_radius_not_applicable():
    with pytest.raises(NotApplicable):
        stability_radius_A(LinearMap([[1, -1]]), ConeRep(2, np.eye(2)), FAST)

def test_radius_lower_bound():
    rng = np.random.default_rng(21)
    for _ in range(5):
        gens = np.abs(rng.standard_normal((4, 3))) + 0.1
        K = dd_convert(ConeRep.from_generators(gens))
        T = LinearMap(rng.standard_normal((3, 3)))
        radius = stability_radius_A(T, K, FAST)
        points = sample_cone(K, rng, 2000)
        units = points / np.linalg.norm(points, axis=1)[:, None]
        assert(np.linalg.norm(units @ T.matrix.T, axis=1).min() >= radius)

def _slice_minimum(T, gens, rng, starts=30):
    """
    Reference minimum of |Tv| over unit vectors of cone(gens) by multistart SLSQP
    over the generator weights
    """
    k = len(gens)
    image = gens @ T.matrix.T

    def ratio(weights):
        return np.sum((weights @ image) ** 2) / np.sum((weights @ gens) ** 2)

    inits = list(np.eye(k)) + list(rng.dirichlet(np.ones(k), starts))
    constraint = {"type": "eq", "fun": lambda weights: np.sum(weights) - 1}
    best = min(ratio(w) for w in np.eye(k))
    for init in inits:
        res = scipy.optimize.minimize(ratio, init, method="SLSQP", bounds=[(0, 1)] * k,
                                      constraints=[constraint], options={"ftol": 1e-14, "maxiter": 500})
        weights = np.clip(res.x, 0, None)
        if weights.sum() > 0:
            best = min(best, ratio(weights / weights.sum()))
    return math.sqrt(best)

def test_radius_matches_reference_minimum():
    rng = np.random.default_rng(41)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        gens = np.abs(rng.standard_normal((int(rng.integers(n, n + 3)), n))) + 0.05
        T = LinearMap(rng.standard_normal((n, n)))
        radius = stability_radius_A(T, ConeRep.from_generators(gens), FAST)
        reference = _slice_minimum(T, gens, rng)
        assert(radius <= reference)
        assert(abs(radius - reference) <= 1e-4)

def test_radius_matches_angle_grid():
    rng = np.random.default_rng(43)
    for _ in range(10):
        lo = rng.uniform(0, math.pi)
        hi = lo + rng.uniform(0.1, math.pi - 0.1)
        gens = np.array([[math.cos(lo), math.sin(lo)], [math.cos(hi), math.sin(hi)]])
        T = LinearMap(rng.standard_normal((2, 2)))
        angles = np.linspace(lo, hi, 200001)
        units = np.column_stack([np.cos(angles), np.sin(angles)])
        reference = np.linalg.norm(units @ T.matrix.T, axis=1).min()
        radius = stability_radius_A(T, ConeRep.from_generators(gens), FAST)
        assert(abs(radius - reference) <= 1e-4)

def test_radius_scaling():
    K = ConeRep.from_generators([[2, 1], [1, 2]])
    T = LinearMap([[1, 0.5]])
    base = stability_radius_A(T, K, FAST)
    for alpha in (0.5, 4.0):
        scaled = stability_radius_A(alpha * T, K, FAST)
        assert(abs(scaled - alpha * base) <= 1e-6 * abs(alpha - 1) + 1e-9)

def test_width_orthant():
    delta = cone_width_delta(ConeRep(2, np.eye(2)), RayDirection([1, 1]), FAST)
    assert(delta == pytest.approx(1 / math.sqrt(2)))

def test_width_soc_axis():
    assert(cone_width_delta(ConeRep.second_order(3), [0, 0, 1], FAST) == pytest.approx(math.sqrt(2) / 2))

def test_width_soc_off_axis():
    angle = 0.3
    u = [math.sin(angle), 0, math.cos(angle)]
    assert(cone_width_delta(ConeRep.second_order(3), u, FAST) == pytest.approx(math.sin(math.pi / 4 - angle)))

def test_width_rsoc_axis():
    delta = cone_width_delta(ConeRep.rotated_second_order(3), [1, 0, 1], FAST)
    assert(delta == pytest.approx(1 / math.sqrt(3)))

def test_width_rsoc_off_axis():
    K = ConeRep.rotated_second_order(3)
    u = RayDirection([2, 0.3, 1]).u
    delta = cone_width_delta(K, u, FAST)
    assert(0 < delta < 1)
    # Directions at the claimed angle stay inside the cone
    rng = np.random.default_rng(23)
    dirs = rng.standard_normal((500, 3))
    dirs -= np.outer(dirs @ u, u)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    vecs = math.sqrt(1 - delta**2) * u + delta * dirs
    assert(np.all(analytic_margin(K, vecs) >= -1e-9))

def test_width_polyhedral_neighbourhood():
    K = dd_convert(ConeRep.from_generators([[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 1, 1]]))
    u = RayDirection([1, 0.5, 0.5]).u
    delta = cone_width_delta(K, u, FAST)
    rng = np.random.default_rng(25)
    dirs = rng.standard_normal((500, 3))
    dirs -= np.outer(dirs @ u, u)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    for vec in math.sqrt(1 - delta**2) * u + delta * dirs:
        assert(contains(K, vec, 1e-9))

def test_width_subspace_cone():
    K = ConeRep.from_generators([[1, 0], [-1, 0]])
    assert(cone_width_delta(K, [1, 0], FAST) == MAX_DELTA)

def test_width_boundary_ray():
    with pytest.raises(RayNotInterior):
        cone_width_delta(ConeRep(2, np.eye(2)), [1, 0], FAST)
    with pytest.raises(RayNotInterior):
        cone_width_delta(ConeRep.second_order(3), [1, 0, 1], FAST)
