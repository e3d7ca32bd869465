"""
SCLIC: Numerical tolerances and search effort

All tolerances are relative unless stated otherwise. One record is passed
down through every operation so that a run is reproducible from its
(inputs, seed, tolerances) triple.
"""
import dataclasses

@dataclasses.dataclass(frozen=True)
class Tolerances:
    """
    :ivar rank: Singular values below rank * sigma_max count as zero
    :ivar residual: Accepted residual of a linear solve, relative to max(1, |y|)
    :ivar orthogonality: Gram-Schmidt drop threshold
    :ivar lp: Pivot / feasibility tolerance of the simplex solver
    :ivar snap: Values below this are snapped to zero in the double description
    :ivar membership: Slack allowed by membership oracles
    :ivar kernel: Bound on |Tv| for v to count as a kernel vector
    :ivar radius_slack: Absolute safety slack subtracted from stability radii
    :ivar oracle_samples: Number of samples used by dense-sampling oracles
    :ivar width_directions: Number of random directions used to validate a cone width
    """
    rank: float = 1e-9
    residual: float = 1e-9
    orthogonality: float = 1e-12
    lp: float = 1e-9
    snap: float = 1e-10
    membership: float = 1e-9
    kernel: float = 1e-8
    radius_slack: float = 1e-6
    oracle_samples: int = 100000
    width_directions: int = 4096

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value <= 0:
                raise ValueError(f"Tolerance {field.name} must be positive, got {value}")
        if self.rank >= 1:
            raise ValueError(f"Rank tolerance must be in (0, 1), got {self.rank}")

    def replace(self, **kwargs):
        """
        :return: Copy of this record with the given fields changed
        """
        return dataclasses.replace(self, **kwargs)

    @classmethod
    def from_args(cls, args):
        """
        Build tolerances from parsed command line arguments

        Only arguments which were actually given override the defaults
        """
        kwargs = {}
        for arg, field in (("tol_rank", "rank"), ("tol_lp", "lp")):
            value = getattr(args, arg, None)
            if value is not None:
                kwargs[field] = value
        return cls(**kwargs)

DEFAULT = Tolerances()

def get(tolerances=None):
    """
    :return: Given tolerances, or the defaults if None
    """
    return DEFAULT if tolerances is None else tolerances
