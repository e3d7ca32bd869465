import math

import numpy as np
import pytest

from sclic.certify.certificates import KernelTrivial
from sclic.certify.classify import classify
from sclic.certify.neighborhood import neighborhood_check, perturbation
from sclic.convex.sets import Polyhedron, SecondOrderCone
from sclic.errors import NotApplicable
from sclic.linalg import LinearMap
from sclic.utils.utils import stream_rng

from .data import FAST, orthant, random_cone_pairs

def test_perturbation_within_radius():
    T = LinearMap([[1, 2, 3], [4, 5, 6]])
    for idx in range(50):
        S = perturbation(T, 0.3, stream_rng(0, idx))
        assert((S - T).operator_norm < 0.3)

def test_kernel_trivial_persists():
    T = LinearMap(np.eye(2))
    certificate = classify(T, orthant(), FAST)
    check = neighborhood_check(T, orthant(), 0.99 * certificate.radius, 50, seed=1, tolerances=FAST,
                               certificate=certificate)
    assert(check.fraction == 1.0)
    assert(check.samples == 50)
    assert(not check.vacuous)

def test_relint_kernel_persists():
    T = LinearMap([[1, 0, 0], [0, 1, 0]])
    check = neighborhood_check(T, SecondOrderCone(3), 1e-3, 50, seed=2, tolerances=FAST)
    assert(check.fraction == 1.0)

def test_bounded_set_persists():
    X = Polyhedron([[0, 0], [1, 2]])
    check = neighborhood_check(LinearMap([[1, 1]]), X, 10.0, 20, tolerances=FAST)
    assert(check.fraction == 1.0)

def test_large_radius_allowed():
    T = LinearMap(np.eye(2))
    check = neighborhood_check(T, orthant(), 10.0, 30, seed=3, tolerances=FAST)
    assert(0 <= check.fraction <= 1)

def test_vacuous():
    check = neighborhood_check(LinearMap(np.eye(2)), orthant(), 0.5, 0, tolerances=FAST)
    assert(check.fraction == 1.0)
    assert(check.vacuous)
    assert(check.to_dict()["vacuous"])

def test_deterministic_and_parallel():
    T = LinearMap([[1, -1]])
    first = neighborhood_check(T, orthant(), 0.5, 40, seed=4, tolerances=FAST)
    second = neighborhood_check(T, orthant(), 0.5, 40, seed=4, workers=3, tolerances=FAST)
    assert(first.fraction == second.fraction)

def test_not_certified():
    with pytest.raises(NotApplicable):
        neighborhood_check(LinearMap([[1, 0]]), orthant(), 0.1, 10, tolerances=FAST)

def test_bad_arguments():
    with pytest.raises(ValueError):
        neighborhood_check(LinearMap(np.eye(2)), orthant(), 0, 10, tolerances=FAST)
    with pytest.raises(ValueError):
        neighborhood_check(LinearMap(np.eye(2)), orthant(), 0.1, -1, tolerances=FAST)

def test_perturbation_fills_ball():
    T = LinearMap([[1, 2, 3], [4, 5, 6]])
    sizes = [(perturbation(T, 0.3, stream_rng(1, idx)) - T).operator_norm for idx in range(200)]
    assert(max(sizes) < 0.3)
    assert(max(sizes) > 0.27)
    assert(min(sizes) < 0.2)

def test_kernel_trivial_random_pairs_persist():
    kept, total, pairs = 0, 0, 0
    for idx, (T, X) in enumerate(random_cone_pairs(60, seed=29)):
        certificate = classify(T, X, FAST)
        if not isinstance(certificate, KernelTrivial) or not math.isfinite(certificate.radius):
            continue
        check = neighborhood_check(T, X, 0.99 * certificate.radius, 50, seed=idx, tolerances=FAST,
                                   certificate=certificate)
        kept += round(check.fraction * check.samples)
        total += check.samples
        pairs += 1
        if pairs == 20:
            break
    assert(pairs == 20)
    assert(kept / total >= 0.999)
