"""Koszul engine against classical closed forms and the Molien engine."""

import pytest

from rankfilt.cartan import (
    EngineMismatch,
    KoszulComplex,
    ResourceLimit,
    cartan_cohomology,
    default_cutoff,
    invariant_dims,
    poincare,
)
from rankfilt.orbitspace import (
    Block,
    Bunch,
    OrbitDescriptor,
    Wreath,
    flag_poincare_oracle,
    molien_poincare,
)
from rankfilt.poly import Poly, prod


def stiefel_oracle(k, l, cutoff):
    """P(U(k)/U(k-l)) = prod_{i=k-l+1}^{k} (1 + t^(2i-1)), truncated."""
    return prod(Poly({0: 1, 2 * i - 1: 1}) for i in range(k - l + 1, k + 1)).truncate(cutoff)


def pu_oracle(k, cutoff=None):
    """P(PU(k)) = prod_{i=2}^{k} (1 + t^(2i-1))."""
    p = prod(Poly({0: 1, 2 * i - 1: 1}) for i in range(2, k + 1))
    return p if cutoff is None else p.truncate(cutoff)


def test_projective_spaces():
    for k in range(2, 6):
        d = OrbitDescriptor(k, (Block(1),), k - 1)
        got = cartan_cohomology(d, 2 * k)
        assert got.agrees(Poly({2 * i: 1 for i in range(k)}))


def test_stiefel_closed_forms():
    for k in range(1, 5):
        for l in range(1, k + 1):
            d = OrbitDescriptor(k, (), k - l)
            cutoff = 2 * k
            assert cartan_cohomology(d, cutoff).agrees(stiefel_oracle(k, l, cutoff))


def test_pu_closed_forms():
    for k in range(2, 5):
        d = OrbitDescriptor(k, (Block(1, k),), 0)
        cutoff = k * k
        got = cartan_cohomology(d, cutoff)
        assert got.agrees(pu_oracle(k, cutoff))


def test_pu2_differential_shape():
    # d(y1) = 2u, d(y2) = u^2 for the central circle inside U(2)
    kc = KoszulComplex(OrbitDescriptor(2, (Block(1, 2),), 0))
    assert kc.chern[0] == {(1,): 2}
    assert kc.chern[1] == {(2,): 1}


def test_point_and_full_group():
    point = OrbitDescriptor(3, (Block(3),), 0)
    assert cartan_cohomology(point, 8).agrees(Poly({0: 1}))
    u3 = OrbitDescriptor(3, (), 0)
    assert cartan_cohomology(u3, 9).agrees(
        prod(Poly({0: 1, 2 * i - 1: 1}) for i in (1, 2, 3)).truncate(9)
    )


def test_d_squared_zero():
    cases = [
        OrbitDescriptor(3, (Block(1, 3),), 0),
        OrbitDescriptor(3, (Block(1), Block(1)), 1),
        OrbitDescriptor(4, (Block(1, 2),), 2),
        OrbitDescriptor(2, (), 1),
    ]
    for d in cases:
        KoszulComplex(d).verify_d_squared(range(0, 7))


def test_chern_images_homogeneous():
    kc = KoszulComplex(OrbitDescriptor(4, (Block(2, 1), Block(1)), 1))
    for i, rho in enumerate(kc.chern, start=1):
        for mono in rho:
            assert kc._mono_degree(mono) == 2 * i


def test_invariant_dims_examples():
    # trivial finite part: same as the plain computation
    flag = OrbitDescriptor(2, (Block(1), Block(1)), 0)
    kc = KoszulComplex(flag)
    assert invariant_dims(kc, 6) == kc.cohomology_dims(6, invariants=False)

    pairs = KoszulComplex(OrbitDescriptor(2, (Wreath(Block(1), 2),), 0))
    assert invariant_dims(pairs, 10) == [1] + [0] * 10

    mixed = KoszulComplex(OrbitDescriptor(3, (Wreath(Block(1), 2), Block(1)), 0))
    dims = invariant_dims(mixed, 8)
    assert dims == [1, 0, 1, 0, 1, 0, 0, 0, 0]


def test_euler_characteristic_audit():
    # per degree: dim C^d = dim H^d + rank d_d + rank d_(d-1)
    for desc in [
        OrbitDescriptor(3, (Block(1, 3),), 0),
        OrbitDescriptor(3, (Wreath(Block(1), 2), Block(1)), 0),
        OrbitDescriptor(4, (Block(1, 2),), 2),
    ]:
        kc = KoszulComplex(desc)
        cutoff = 8
        dims = kc.dims(cutoff)
        coh = kc.cohomology_dims(cutoff)
        for d in range(cutoff + 1):
            below = kc.differential_rank(d - 1) if d > 0 else 0
            assert dims[d] == coh[d] + kc.differential_rank(d) + below
            assert coh[d] >= 0


def test_tensor_block_with_complement():
    # embeddings of C^2 in C^4 modulo the scalar circle: Cartan route only
    d = OrbitDescriptor(4, (Block(1, 2),), 2)
    p = cartan_cohomology(d, 12)
    assert p[0] == 1
    assert all(c >= 0 for c in p.coeffs.values())


def test_engine_agreement_sample():
    cases = [
        OrbitDescriptor(3, (Block(2), Block(1)), 0),
        OrbitDescriptor(3, (Wreath(Block(1), 3),), 0),
        OrbitDescriptor(4, (Wreath(Block(1), 2),), 2),
        OrbitDescriptor(4, (Wreath(Bunch((Block(1), Block(1))), 2),), 0),
        OrbitDescriptor(4, (Block(2), Block(2)), 0),
    ]
    for d in cases:
        exact = molien_poincare(d)
        trunc = cartan_cohomology(d, 14)
        assert exact.agrees(trunc), d.canonical_string()


def test_dispatcher_routes_and_checks():
    flag = OrbitDescriptor(3, (Block(2), Block(1)), 0)
    p = poincare(flag)
    assert p.is_exact() and p == flag_poincare_oracle((2, 1))
    # explicit cutoff in auto mode runs the dual-engine comparison
    assert poincare(flag, cutoff=10) == p
    stiefel = OrbitDescriptor(2, (), 1)
    q = poincare(stiefel, cutoff=7)
    assert q.truncation == 7 and q.agrees(Poly({0: 1, 3: 1}))
    assert poincare(stiefel).truncation == default_cutoff(stiefel)
    with pytest.raises(ValueError):
        poincare(flag, engine="nonsense")


def test_dispatcher_mismatch_raises(monkeypatch):
    import rankfilt.cartan as cartan_mod

    flag = OrbitDescriptor(2, (Block(1), Block(1)), 0)
    monkeypatch.setattr(cartan_mod, "molien_poincare", lambda d: Poly({0: 1, 2: 7}))
    cartan_mod.memo.clear()
    with pytest.raises(EngineMismatch):
        poincare(flag, cutoff=6)
    cartan_mod.memo.clear()


def test_resource_limit_reports_degree():
    d = OrbitDescriptor(4, (Block(1), Block(1), Block(1), Block(1)), 0)
    with pytest.raises(ResourceLimit) as exc:
        cartan_cohomology(d, 12, basis_budget=3)
    assert exc.value.degree >= 0
    assert exc.value.budget == 3


def test_concurrent_evaluation_is_consistent():
    # distinct degrees and descriptors may be evaluated from several threads;
    # the shared memo must serve consistent polynomials
    import threading

    descriptors = [
        OrbitDescriptor(3, (Block(1, 3),), 0),
        OrbitDescriptor(3, (Wreath(Block(1), 2), Block(1)), 0),
        OrbitDescriptor(4, (Block(1, 2),), 2),
    ]
    results = [[None] * len(descriptors) for _ in range(4)]
    errors = []

    def work(slot):
        try:
            for i, d in enumerate(descriptors):
                results[slot][i] = poincare(d, cutoff=10, engine="cartan")
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(s,)) for s in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for slot in range(1, 4):
        assert results[slot] == results[0]
