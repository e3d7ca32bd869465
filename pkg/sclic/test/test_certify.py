import math

import numpy as np
import pytest

from sclic.certify.certificates import (KernelTrivial, NeighborhoodCheck, RelIntKernel, Uncertified,
                                        UncertifiedReason)
from sclic.certify.classify import classify, classify_cone
from sclic.certify.conditions import (cone_kernel_vector, kernel_cone_trivial, kernel_in_hull,
                                      rank_restriction, ri_kernel_nonempty)
from sclic.convex.cones import ConeRep, RayDirection
from sclic.convex.sets import (Polyhedron, PolyhedralCone, RotatedSecondOrderCone, SecondOrderCone,
                               Translate, asymptotic_cone, contains, polyhedral_image, ri_contains,
                               sample_cone)
from sclic.errors import InputError
from sclic.linalg import LinearMap, orthonormalize

from .data import FAST, golden_pairs, orthant, random_cone_pairs, uncertified_pairs

ORTHANT = ConeRep(2, np.eye(2))

def test_kernel_trivial_injective():
    result = kernel_cone_trivial(LinearMap(np.eye(2)), ORTHANT)
    assert(result.trivial)
    assert(result.witness is None)

def test_kernel_diagonal_witness():
    result = kernel_cone_trivial(LinearMap([[1, -1]]), ORTHANT)
    assert(not result.trivial)
    assert(result.witness == pytest.approx([1 / math.sqrt(2)] * 2))

def test_kernel_rsoc_witness():
    result = kernel_cone_trivial(LinearMap([[0, 1, 0], [0, 0, 1]]), ConeRep.rotated_second_order(3))
    assert(not result.trivial)
    assert(result.witness == pytest.approx([1, 0, 0]))

def test_kernel_soc_trivial():
    # Kernel of (x, y, z) -> (z) is the (x, y) plane which only meets the cone at zero
    result = kernel_cone_trivial(LinearMap([[0, 0, 1]]), ConeRep.second_order(3))
    assert(result.trivial)

def test_kernel_zero_cone():
    assert(kernel_cone_trivial(LinearMap([[0, 0]]), ConeRep.zero(2)).trivial)

def test_cone_kernel_vector():
    gens = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert(cone_kernel_vector(gens, [[1, 0]]) is None)
    vec = cone_kernel_vector(gens, [[1, -1]])
    assert(vec is not None)
    assert(vec[0] == pytest.approx(vec[1]))
    assert(vec[0] > 0)

def test_kernel_in_hull():
    K = ConeRep.from_generators([[1, 0, 0], [0, 1, 0]])
    kernel = kernel_in_hull(LinearMap([[1, 1, 5]]), K)
    assert(kernel.dim == 1)
    assert(np.abs(kernel.basis[0]) == pytest.approx([1 / math.sqrt(2), 1 / math.sqrt(2), 0]))

def test_ri_kernel_diagonal():
    result = ri_kernel_nonempty(LinearMap([[1, -1]]), ORTHANT)
    assert(result.nonempty)
    assert(result.ray == pytest.approx([1 / math.sqrt(2)] * 2))

def test_ri_kernel_boundary():
    result = ri_kernel_nonempty(LinearMap([[1, 0]]), ORTHANT)
    assert(not result.nonempty)
    assert(result.ray is None)

def test_ri_kernel_soc():
    result = ri_kernel_nonempty(LinearMap([[1, 0, 0], [0, 1, 0]]), ConeRep.second_order(3))
    assert(result.nonempty)
    assert(result.ray == pytest.approx([0, 0, 1]))

def test_ri_kernel_rsoc():
    result = ri_kernel_nonempty(LinearMap([[0, 1, 0], [0, 0, 1]]), ConeRep.rotated_second_order(3))
    assert(not result.nonempty)

def test_ri_kernel_subspace_cone():
    K = ConeRep.from_generators([[1, 0, 0], [-1, 0, 0]])
    result = ri_kernel_nonempty(LinearMap([[0, 1, 0]]), K)
    assert(result.nonempty)
    assert(np.abs(result.ray) == pytest.approx([1, 0, 0]))

def test_rank_restriction():
    T = LinearMap(np.eye(3))
    assert(rank_restriction(T, orthonormalize([[1, 0, 0], [0, 1, 0]])) == 2)
    assert(rank_restriction(LinearMap([[1, 0, 0]]), orthonormalize([[0, 1, 0], [0, 0, 1]])) == 0)
    assert(rank_restriction(LinearMap([[1, 0, 0], [0, 1, 0]]), orthonormalize([[1, 1, 0]])) == 1)
    assert(rank_restriction(T, orthonormalize([], ambient_dim=3)) == 0)

@pytest.mark.parametrize("name,T,X,label", golden_pairs())
def test_golden_classification(name, T, X, label):
    certificate = classify(T, X, FAST)
    assert(certificate.label == label)
    assert(certificate.certified == (label in ("kernel_trivial", "relint_kernel")))

@pytest.mark.parametrize("name,T,X,label", golden_pairs())
def test_scaling_invariance(name, T, X, label):
    for alpha in (0.01, 3.0, 250.0):
        assert(classify(alpha * T, X, FAST, with_payload=False).label == label)

def test_classify_rsoc_witness():
    certificate = classify(LinearMap([[0, 1, 0], [0, 0, 1]]), RotatedSecondOrderCone(3), FAST)
    assert(isinstance(certificate, Uncertified))
    assert(certificate.reason == UncertifiedReason.KERNEL_TOUCHES_BOUNDARY)
    assert(certificate.witness == pytest.approx([1, 0, 0]))

@pytest.mark.parametrize("name,T,X", uncertified_pairs())
def test_uncertified_witness(name, T, X):
    certificate = classify(T, X, FAST)
    K = asymptotic_cone(X)
    w = certificate.witness
    assert(np.linalg.norm(w) == pytest.approx(1))
    assert(np.linalg.norm(T(w)) < 1e-8)
    assert(contains(K, w, 1e-8))
    assert(not ri_contains(K, w))

def test_classify_soc_delta():
    certificate = classify(LinearMap([[1, 0, 0], [0, 1, 0]]), SecondOrderCone(3), FAST)
    assert(isinstance(certificate, RelIntKernel))
    assert(certificate.ray.u == pytest.approx([0, 0, 1]))
    assert(certificate.delta == pytest.approx(math.sqrt(2) / 2))
    assert(certificate.rank_restriction == 2)

def test_classify_orthant_diagonal_delta():
    certificate = classify(LinearMap([[1, -1]]), orthant(), FAST)
    assert(isinstance(certificate, RelIntKernel))
    assert(certificate.delta == pytest.approx(1 / math.sqrt(2)))

def test_classify_polytope_radius():
    certificate = classify(LinearMap([[1, 2]]), Polyhedron([[0, 0], [1, 1]]), FAST)
    assert(isinstance(certificate, KernelTrivial))
    assert(math.isinf(certificate.radius))
    assert(certificate.to_dict()["radius"] is None)

def test_classify_identity_radius():
    certificate = classify(LinearMap(np.eye(2)), orthant(), FAST)
    assert(isinstance(certificate, KernelTrivial))
    assert(certificate.radius == pytest.approx(1 - 1e-6, abs=1e-9))

def test_classify_rank_deficient():
    certificate = classify(LinearMap([[1, 0, 0], [2, 0, 0]]), SecondOrderCone(3), FAST)
    assert(isinstance(certificate, Uncertified))
    assert(certificate.reason == UncertifiedReason.RANK_DEFICIENT_ON_Y)
    assert(certificate.label == "rank_deficient")

def test_classify_without_payload():
    certificate = classify(LinearMap(np.eye(2)), orthant(), FAST, with_payload=False)
    assert(isinstance(certificate, KernelTrivial))
    assert(certificate.radius is None)
    certificate = classify(LinearMap([[1, -1]]), orthant(), FAST, with_payload=False)
    assert(certificate.delta is None)

def test_classify_dimension_mismatch():
    with pytest.raises(InputError):
        classify(LinearMap([[1, 0, 0]]), orthant())

def test_classify_cone_direct():
    certificate = classify_cone(LinearMap([[1, -1]]), asymptotic_cone(orthant()), FAST)
    assert(certificate.label == "relint_kernel")

def test_certificate_validation():
    with pytest.raises(ValueError):
        KernelTrivial(0)
    with pytest.raises(ValueError):
        RelIntKernel(RayDirection([1, 0]), 1.0, 1)

def test_certificate_dicts():
    data = RelIntKernel(RayDirection([0, 0, 2]), 0.5, 2).to_dict()
    assert(data == {"certificate": "RelIntKernel", "ray": [0, 0, 1], "delta": 0.5, "rank_restriction": 2})
    data = Uncertified(UncertifiedReason.KERNEL_TOUCHES_BOUNDARY, [0, 1]).to_dict()
    assert(data == {"certificate": "Uncertified", "reason": "KernelTouchesBoundary", "witness": [0, 1]})
    assert(KernelTrivial(2.5).to_dict() == {"certificate": "KernelTrivial", "radius": 2.5})

def test_same_class():
    assert(KernelTrivial(1.0).same_class(KernelTrivial()))
    assert(not KernelTrivial(1.0).same_class(Uncertified("KernelTouchesBoundary")))
    assert(not Uncertified("RankDeficientOnY").same_class(Uncertified("KernelTouchesBoundary")))

def test_neighborhood_check_vacuous():
    check = NeighborhoodCheck(1.0, 0, 0.5)
    assert(check.vacuous)
    assert(check.to_dict()["vacuous"])

def _kernel_trivial_pairs():
    return [
        ("orthant_identity", LinearMap(np.eye(2)), orthant()),
        ("wedge", LinearMap([[1, 0.5], [0.3, 1]]), PolyhedralCone.from_generators([[2, 1], [1, 2]])),
        ("soc_last_coordinate", LinearMap([[0, 0, 1]]), SecondOrderCone(3)),
        ("triangle", LinearMap([[1, 2]]), Polyhedron([[0, 0], [1, 0], [0, 1]])),
    ]

@pytest.mark.parametrize("name,T,X", _kernel_trivial_pairs())
def test_radius_scales_linearly(name, T, X):
    base = classify(T, X, FAST)
    assert(isinstance(base, KernelTrivial))
    for alpha in (0.5, 2.0, 10.0):
        scaled = classify(alpha * T, X, FAST)
        assert(isinstance(scaled, KernelTrivial))
        if math.isinf(base.radius):
            assert(math.isinf(scaled.radius))
        else:
            # Only the absolute slack taken off the radius does not scale
            assert(abs(scaled.radius - alpha * base.radius) <= 1e-6 * abs(alpha - 1) + 1e-8 * alpha)

@pytest.mark.parametrize("name,T,X,label", golden_pairs())
def test_translation_invariance(name, T, X, label):
    rng = np.random.default_rng(17)
    certificate = classify(T, X, FAST)
    for _ in range(3):
        offset = 5 * rng.standard_normal(X.ambient_dim)
        moved = classify(T, Translate(X, offset), FAST)
        assert(moved.label == certificate.label)
        if isinstance(certificate, KernelTrivial) and math.isfinite(certificate.radius):
            assert(moved.radius == pytest.approx(certificate.radius))

def test_translation_invariance_random():
    rng = np.random.default_rng(5)
    for T, X in random_cone_pairs(15, seed=5):
        offset = rng.standard_normal(X.ambient_dim)
        assert(classify(T, Translate(X, offset), FAST, with_payload=False).label
               == classify(T, X, FAST, with_payload=False).label)

def _exclusivity_cases():
    cases = [(T, asymptotic_cone(X)) for _, T, X, _ in golden_pairs()]
    cases += [(T, asymptotic_cone(X)) for T, X in random_cone_pairs(30, seed=11)]
    rng = np.random.default_rng(13)
    for K in (ConeRep.second_order(3), ConeRep.rotated_second_order(3), ConeRep.second_order(4)):
        for m in range(1, K.ambient_dim):
            cases += [(LinearMap(rng.standard_normal((m, K.ambient_dim))), K) for _ in range(4)]
    return cases

def test_conditions_exclusive():
    for T, K in _exclusivity_cases():
        trivial = kernel_cone_trivial(T, K, FAST).trivial
        interior = ri_kernel_nonempty(T, K, FAST).nonempty
        assert(not (trivial and interior))

def _polyhedral_cases():
    rng = np.random.default_rng(19)
    cases = [(T, X) for _, T, X, _ in golden_pairs() if isinstance(X, (Polyhedron, PolyhedralCone))]
    cases += [(LinearMap([[1, 0, 0], [2, 0, 0]]), orthant(3)),
              (LinearMap([[0, 1, 0]]), Polyhedron([[0, 0, 0], [1, 1, 0]], [[1, 0, 0], [0, 0, 1]]))]
    cases += random_cone_pairs(10, seed=23)
    for _ in range(5):
        points = rng.standard_normal((3, 3))
        rays = np.abs(rng.standard_normal((2, 3))) + 0.05
        cases.append((LinearMap(rng.standard_normal((2, 3))), Polyhedron(points, rays)))
    return cases

def test_polyhedral_ground_truth():
    rng = np.random.default_rng(37)
    uncertified = 0
    for T, X in _polyhedral_cases():
        certificate = classify(T, X, FAST, with_payload=False)
        image = polyhedral_image(T, X)
        K = asymptotic_cone(X, FAST)
        if isinstance(X, PolyhedralCone):
            x0 = np.zeros(X.ambient_dim)
        else:
            x0 = rng.dirichlet(np.ones(len(X.points))) @ X.points
        x0 = x0 + sample_cone(K, rng, 1)[0]
        d = sample_cone(K, rng, 1)[0]
        w = getattr(certificate, "witness", None)
        if w is None:
            w = d
        for k in (1.0, 10.0, 100.0):
            assert(contains(image, T(x0 + k * w + d / k), 1e-7))
        if not certificate.certified:
            uncertified += 1
            if certificate.witness is not None:
                # Images along the kernel witness converge to T(x0), which stays in the image
                assert(np.linalg.norm(T(w)) < 1e-8)
                assert(contains(image, T(x0), 1e-7))
    assert(uncertified >= 3)
