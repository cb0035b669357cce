import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twdeligne import nerve
from twdeligne.abelian import FgAbGroup, IntMatrix, cohomology_at
from twdeligne.nerve import DeltaSet, TwistCocycle, twist_classes_mod2, validate
from twdeligne.twisted_cochain import (
    Q,
    RZ,
    Z,
    CochainComplex,
    DivisibleDescriptor,
    Fp,
    InternalDeltaSquaredNonzero,
    LiftFailure,
    Ring,
    TwistInvalid,
    bockstein,
    bockstein_lift,
    bockstein_source,
    coboundary_matrices,
    coefficient_map,
    gauge_complex_iso,
    rz_cohomology,
    twisted_coboundary,
    twisted_cohomology,
    untwisted_coboundary,
)

Z2 = FgAbGroup(0, (2,))
ZZ = FgAbGroup(1)
O = FgAbGroup()


def double_cover(K: DeltaSet, eta: TwistCocycle) -> DeltaSet:
    """The two-sheeted cover of ``K`` defined by ``eta``.

    A lift of a cell is labelled by the sheet of its vertex 0. Faces ``d_i``
    with ``i >= 1`` keep vertex 0; ``d_0`` moves to vertex 1 and so crosses
    sheets exactly when ``eta`` is -1 on the leading edge.
    """
    cells, faces = [], []
    for k in range(K.dimension + 1):
        cs, fs = [], {}
        for c in K.cells_of(k):
            for s in (0, 1):
                name = f"{c}@{s}"
                cs.append(name)
                if k:
                    out = []
                    for i, f in enumerate(K.faces[k][c]):
                        t = s if i else (s if eta[K.edge01(k, c)] == 1 else 1 - s)
                        out.append(f"{f}@{t}")
                    fs[name] = out
        cells.append(cs)
        faces.append(fs)
    return DeltaSet(cells, faces)


def plain_dims(K, ring):
    cx = CochainComplex.from_matrices([untwisted_coboundary(K, k) for k in range(K.dimension)]
                                      or [IntMatrix.zeros(0, K.ncells(0))], ring)
    return [cx.group(k).free_rank for k in range(K.dimension + 1)]


# --- values that double as classical checks ----------------------------------

CASES = [
    ("annulus3", "mobius", (O, Z2)),
    ("annulus3", "trivial", (ZZ, ZZ)),
    ("circle:5", "mobius", (O, Z2)),
    ("rp2", "trivial", (ZZ, O, Z2)),
    ("rp2", "w1", (O, Z2, ZZ)),
    ("rp3", "trivial", (ZZ, O, Z2, ZZ)),
    ("rp3", "w1", (O, Z2, O, Z2)),
    ("rp:4", "w1", (O, Z2, O, Z2, ZZ)),
    ("rp:4", "trivial", (ZZ, O, Z2, O, Z2)),
    ("sphere2", "trivial", (ZZ, O, ZZ)),
    ("point", "trivial", (ZZ,)),
    ("simplex:3", "trivial", (ZZ, O, O, O)),
]


def twist_for(K, spec, name):
    if name == "trivial":
        return TwistCocycle.trivial(K)
    if name == "mobius":
        return TwistCocycle({e: -1 for e in K.cells_of(1)})
    return twist_classes_mod2(K)[1]


@pytest.mark.parametrize("spec, tw, expected", CASES)
def test_integral_groups(spec, tw, expected):
    K = nerve.build(spec)
    eta = twist_for(K, spec, tw)
    assert tuple(twisted_cohomology(K, eta, Z, k) for k in range(K.dimension + 1)) == expected


@pytest.mark.parametrize("spec", ["annulus3", "circle:4", "rp2", "rp3", "sphere2", "rp:4"])
def test_rational_dims_against_double_cover(spec):
    K = nerve.build(spec)
    for eta in twist_classes_mod2(K):
        C = double_cover(K, eta)
        validate(C)
        assert C.euler_characteristic() == 2 * K.euler_characteristic()
        for ring in (Q, Fp(3)):
            cover = plain_dims(C, ring)
            base = [twisted_cohomology(K, TwistCocycle.trivial(K), ring, k)
                    for k in range(K.dimension + 1)]
            tw = [twisted_cohomology(K, eta, ring, k) for k in range(K.dimension + 1)]
            assert cover == [a + b for a, b in zip(base, tw)]


def test_annulus_rational_vanishes():
    K, eta = nerve.annulus3(), nerve.mobius_twist()
    assert [twisted_cohomology(K, eta, Q, k) for k in (0, 1)] == [0, 0]
    assert [twisted_cohomology(K, eta, Fp(2), k) for k in (0, 1)] == [1, 1]


def test_out_of_range_degrees_are_zero():
    K, eta = nerve.annulus3(), nerve.mobius_twist()
    assert twisted_cohomology(K, eta, Z, 5) == O
    assert twisted_cohomology(K, eta, Q, -1) == 0
    assert twisted_cohomology(K, eta, RZ, 7).is_trivial()


def test_twisted_coboundary_by_hand():
    K = nerve.annulus3()
    d = twisted_coboundary(K, nerve.mobius_twist(), 0)
    # (delta a)(UV) = eta(UV) a(V) - a(U), cells ordered U, V, W
    assert d.tolist() == [[-1, -1, 0], [-1, 0, -1], [0, -1, -1]]
    assert twisted_coboundary(K, TwistCocycle.trivial(K), 0) == untwisted_coboundary(K, 0)


@pytest.mark.parametrize("spec", ["rp2", "rp3", "sphere2", "simplex:3", "rp:4"])
def test_delta_squared_is_zero(spec):
    K = nerve.build(spec)
    for eta in twist_classes_mod2(K):
        for k in range(K.dimension - 1):
            assert (twisted_coboundary(K, eta, k + 1) @ twisted_coboundary(K, eta, k)).is_zero()


def test_invalid_twist_is_rejected():
    K = nerve.simplex(2)
    bad = TwistCocycle({e: -1 if i == 0 else 1 for i, e in enumerate(K.cells_of(1))})
    with pytest.raises(TwistInvalid):
        coboundary_matrices(K, bad, Z)
    with pytest.raises(TwistInvalid):
        coboundary_matrices(K, TwistCocycle({}), Z)


def test_from_matrices_checks_delta_squared():
    with pytest.raises(InternalDeltaSquaredNonzero):
        CochainComplex.from_matrices([IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]])])


def test_ring_parse_and_render():
    assert Ring.parse("z") == Z and Ring.parse("Q") == Q and Ring.parse("rz") == RZ
    assert Ring.parse("fp:5") == Fp(5) and str(Fp(5)) == "F5" and Fp(5).token == "fp:5"
    with pytest.raises(ValueError):
        Ring.parse("fp:4")
    with pytest.raises(ValueError):
        Ring.parse("c")


def test_divisible_descriptor_text():
    assert str(DivisibleDescriptor(0, Z2)) == "Z/2"
    assert str(DivisibleDescriptor(1)) == "R/Z"
    assert str(DivisibleDescriptor(2, Z2)) == "Z/2 (+) (R/Z)^2"
    assert str(DivisibleDescriptor()) == "0"
    for s in ("Z/2 (+) (R/Z)^2", "R/Z", "0", "Z/2 (+) Z/4"):
        assert str(DivisibleDescriptor.parse(s)) == s


def test_rz_model():
    K = nerve.annulus3()
    assert rz_cohomology(K, nerve.mobius_twist(), 0) == DivisibleDescriptor(0, Z2)
    assert rz_cohomology(K, nerve.mobius_twist(), 1).is_trivial()
    assert rz_cohomology(K, TwistCocycle.trivial(K), 1) == DivisibleDescriptor(1)
    R = nerve.rp2()
    assert str(rz_cohomology(R, TwistCocycle.trivial(R), 1)) == "Z/2"


def test_coefficient_map_z_to_q_kills_torsion():
    K = nerve.rp2()
    w1 = twist_classes_mod2(K)[1]
    j = coefficient_map(K, w1, 2, Q)
    assert j.source == ZZ and j.rank() == 1
    j1 = coefficient_map(K, w1, 1, Q)
    assert j1.source == Z2 and j1.target == O


def test_bockstein_annulus():
    K, eta = nerve.annulus3(), nerve.mobius_twist()
    b = bockstein(K, eta, 0)
    assert b.source == Z2 and b.target == Z2 and b.matrix == ((1,),)


@pytest.mark.parametrize("spec", ["rp2", "rp3", "rp:4", "annulus3"])
def test_bockstein_lifts_are_integral(spec):
    K = nerve.build(spec)
    for eta in twist_classes_mod2(K):
        cx = coboundary_matrices(K, eta, Z)
        for k in range(K.dimension + 1):
            src = bockstein_source(K, eta, k)
            assert src.group == rz_cohomology(K, eta, k).torsion
            for c in src.lifts:
                bockstein_lift(cx, k, c)


def test_bockstein_lift_failure():
    K, eta = nerve.annulus3(), nerve.mobius_twist()
    cx = coboundary_matrices(K, eta, Z)
    with pytest.raises(LiftFailure):
        bockstein_lift(cx, 0, (Fraction(1, 3), 0, 0))


@settings(max_examples=20)
@given(st.sampled_from(["annulus3", "rp2", "rp3"]), st.integers(0, 2 ** 32))
def test_gauge_intertwiner(spec, seed):
    K = nerve.build(spec)
    rng = random.Random(seed)
    for eta in twist_classes_mod2(K):
        s = {v: rng.choice((1, -1)) for v in K.cells_of(0)}
        eta2 = eta.gauge(K, s)
        iso = gauge_complex_iso(K, s)
        for k in range(K.dimension):
            assert iso[k + 1] @ twisted_coboundary(K, eta, k) == \
                twisted_coboundary(K, eta2, k) @ iso[k]
        for k in range(K.dimension + 1):
            assert twisted_cohomology(K, eta, Z, k) == twisted_cohomology(K, eta2, Z, k)


def test_cochain_complex_from_matrices_top_degree():
    cx = CochainComplex.from_matrices([IntMatrix.from_rows([[2]])])
    assert cx.top == 1 and cx.group(1) == Z2 and cx.group(0) == O
    assert cohomology_at(cx.delta(1), cx.delta(0)) == Z2
