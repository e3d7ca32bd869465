"""
SCLIC: Certificate types

A certificate classifies a linear map against a closed convex set:

 - KernelTrivial: the asymptotic cone meets the kernel only at zero
 - RelIntKernel: the kernel passes through the relative interior of the
   asymptotic cone and the map has maximal rank on its hull
 - Uncertified: neither, with the reason why

Uncertified does not mean the image is not closed, only that no stability
certificate was found.
"""
import enum
import math

import numpy as np

class UncertifiedReason(enum.Enum):
    RANK_DEFICIENT_ON_Y = "RankDeficientOnY"
    KERNEL_TOUCHES_BOUNDARY = "KernelTouchesBoundary"

def _list(vec):
    return None if vec is None else [float(v) for v in vec]

def _number(value):
    """JSON has no infinity, unbounded values are written as null"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)

class Certificate:
    """
    Base class for certificates

    :ivar label: Short class name used in survey tables
    """
    label = None
    certified = False

    def to_dict(self):
        return {"certificate": type(self).__name__}

    def same_class(self, other):
        """
        :return: True if other is the same kind of certificate (and reason, if uncertified)
        """
        return self.label == other.label

class KernelTrivial(Certificate):
    """
    :ivar radius: Perturbation radius in operator norm within which the certificate
                  persists. Infinite for bounded sets, None if not computed
    """
    label = "kernel_trivial"
    certified = True

    def __init__(self, radius=None):
        if radius is not None and not radius > 0:
            raise ValueError(f"Stability radius must be positive, got {radius}")
        self.radius = radius

    def to_dict(self):
        ret = Certificate.to_dict(self)
        ret["radius"] = _number(self.radius)
        return ret

    def __repr__(self):
        return f"KernelTrivial(radius={self.radius})"

class RelIntKernel(Certificate):
    """
    :ivar ray: RayDirection in the relative interior of the cone and in the kernel
    :ivar delta: Width of a neighbourhood of the ray inside the cone, in (0, 1)
    :ivar rank_restriction: Rank of the map restricted to the hull of the cone
    """
    label = "relint_kernel"
    certified = True

    def __init__(self, ray, delta, rank_restriction):
        if delta is not None and not 0 < delta < 1:
            raise ValueError(f"Cone width must be in (0, 1), got {delta}")
        self.ray = ray
        self.delta = delta
        self.rank_restriction = int(rank_restriction)

    def to_dict(self):
        ret = Certificate.to_dict(self)
        ret.update({
            "ray": _list(self.ray.u),
            "delta": _number(self.delta),
            "rank_restriction": self.rank_restriction,
        })
        return ret

    def __repr__(self):
        return f"RelIntKernel(ray={self.ray.u.tolist()}, delta={self.delta}, rank={self.rank_restriction})"

class Uncertified(Certificate):
    """
    :ivar reason: UncertifiedReason
    :ivar witness: Optional unit vector in the asymptotic cone and the kernel but not
                   in the relative interior of the cone
    """

    def __init__(self, reason, witness=None):
        self.reason = UncertifiedReason(reason)
        self.witness = None if witness is None else np.asarray(witness, dtype=float)

    @property
    def label(self):
        if self.reason == UncertifiedReason.RANK_DEFICIENT_ON_Y:
            return "rank_deficient"
        return "kernel_touches_boundary"

    def to_dict(self):
        ret = Certificate.to_dict(self)
        ret["reason"] = self.reason.value
        ret["witness"] = _list(self.witness)
        return ret

    def __repr__(self):
        return f"Uncertified({self.reason.value}, witness={_list(self.witness)})"

LABELS = ["kernel_trivial", "relint_kernel", "rank_deficient", "kernel_touches_boundary"]

class PreimageWitness:
    """
    Explicit preimage w = x_min + t u of a target y inside the asymptotic cone
    """

    def __init__(self, x_min, t, w, delta, margin):
        self.x_min = x_min
        self.t = t
        self.w = w
        self.delta = delta
        self.margin = margin

    def to_dict(self):
        return {
            "x_min": _list(self.x_min),
            "t": float(self.t),
            "w": _list(self.w),
            "delta": float(self.delta),
            "margin": float(self.margin),
        }

class NeighborhoodCheck:
    """
    Fraction of random perturbations of a map which keep the same certificate class

    :ivar vacuous: True if no samples were drawn, in which case fraction is 1
    """

    def __init__(self, fraction, samples, radius):
        self.fraction = fraction
        self.samples = samples
        self.radius = radius

    @property
    def vacuous(self):
        return self.samples == 0

    def to_dict(self):
        return {
            "fraction": float(self.fraction),
            "samples": int(self.samples),
            "radius": _number(self.radius),
            "vacuous": self.vacuous,
        }

    def __repr__(self):
        return f"NeighborhoodCheck(fraction={self.fraction}, samples={self.samples}, radius={self.radius})"
