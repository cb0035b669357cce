import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twdeligne import nerve
from twdeligne.nerve import (
    BrokenFaceReference,
    DeltaSet,
    MissingEdgeValue,
    NotFaceClosed,
    SimplicialIdentityViolation,
    SubComplex,
    TwistCocycle,
    cohomologous,
    gauge_between,
    restrict,
    star,
    twist_classes_mod2,
    validate,
    validate_twist,
)

ALL = ["point", "circle:3", "circle:5", "annulus3", "sphere2", "rp2", "rp3", "simplex:3", "rp:4"]


@pytest.mark.parametrize("spec", ALL)
def test_builders_validate(spec):
    K = nerve.build(spec)
    rep = validate(K)
    assert rep.counts == tuple(K.ncells(k) for k in range(K.dimension + 1))


@pytest.mark.parametrize("spec, counts, chi", [
    ("point", (1,), 1),
    ("annulus3", (3, 3), 0),
    ("circle:4", (4, 4), 0),
    ("sphere2", (4, 6, 4), 2),
    ("rp2", (6, 15, 10), 1),
    ("rp3", (4, 12, 16, 8), 0),
    ("simplex:3", (4, 6, 4, 1), 1),
])
def test_cell_counts_and_euler(spec, counts, chi):
    K = nerve.build(spec)
    assert validate(K).counts == counts
    assert K.euler_characteristic() == chi


def test_rp_cell_counts_formula():
    from math import comb
    for n in (1, 2, 3, 4):
        K = nerve.rp(n)
        assert tuple(K.ncells(k) for k in range(n + 1)) == \
            tuple(comb(n + 1, k + 1) * 2 ** k for k in range(n + 1))


def test_rp2_is_a_closed_surface():
    K = nerve.rp2()
    # every edge lies on exactly two triangles and every vertex link is a cycle
    uses = {e: 0 for e in K.cells_of(1)}
    for t in K.cells_of(2):
        for e in K.faces[2][t]:
            uses[e] += 1
    assert set(uses.values()) == {2}
    for v in K.cells_of(0):
        link_edges = [t for t in K.cells_of(2) if v in K.vertices(2, t)]
        assert len(link_edges) == 5


def test_annulus3_shape():
    K = nerve.annulus3()
    assert K.ncells(0) == 3 and K.ncells(1) == 3 and K.dimension == 1
    eta = nerve.mobius_twist()
    assert all(eta[e] == -1 for e in K.cells_of(1))
    assert validate_twist(K, eta)


def test_missing_face_reference():
    K = DeltaSet([["a"], ["e"]], [{}, {"e": ["a", "b"]}])
    with pytest.raises(BrokenFaceReference):
        validate(K)


def test_wrong_face_count():
    K = DeltaSet([["a", "b"], ["e"]], [{}, {"e": ["a"]}])
    with pytest.raises(BrokenFaceReference):
        validate(K)


def test_simplicial_identity_violation():
    # triangle whose faces do not share the right vertices
    cells = [["a", "b", "c"], ["ab", "bc", "ac"], ["t"]]
    faces = [{}, {"ab": ["b", "a"], "bc": ["c", "b"], "ac": ["c", "a"]},
             {"t": ["ab", "ac", "bc"]}]  # correct would be (bc, ac, ab)
    with pytest.raises(SimplicialIdentityViolation):
        validate(DeltaSet(cells, faces))
    faces[2]["t"] = ["bc", "ac", "ab"]
    validate(DeltaSet(cells, faces))


def test_twist_cocycle_law_and_missing_value():
    K = nerve.simplex(2)
    assert validate_twist(K, TwistCocycle.trivial(K))
    bad = TwistCocycle({e: -1 if i == 0 else 1 for i, e in enumerate(K.cells_of(1))})
    assert not validate_twist(K, bad)
    with pytest.raises(MissingEdgeValue):
        validate_twist(K, TwistCocycle({}))
    with pytest.raises(ValueError):
        TwistCocycle({"x": 2})


@pytest.mark.parametrize("spec, nclasses", [
    ("point", 1), ("simplex:3", 1), ("sphere2", 1), ("annulus3", 2), ("circle:4", 2),
    ("rp2", 2), ("rp3", 2),
])
def test_twist_classes(spec, nclasses):
    K = nerve.build(spec)
    reps = twist_classes_mod2(K)
    assert len(reps) == nclasses
    assert reps[0].is_trivial()
    for eta in reps:
        assert validate_twist(K, eta)
    for a in range(len(reps)):
        for b in range(len(reps)):
            assert cohomologous(K, reps[a], reps[b]) == (a == b)


def test_mobius_twist_class_is_nontrivial():
    K = nerve.annulus3()
    assert not cohomologous(K, nerve.mobius_twist(), TwistCocycle.trivial(K))
    # one -1 on a single edge is in the same class
    one = TwistCocycle({"UV": -1, "UW": 1, "VW": 1})
    assert cohomologous(K, nerve.mobius_twist(), one)


@settings(max_examples=30)
@given(st.sampled_from(["annulus3", "rp2", "rp3", "sphere2"]), st.integers(0, 2 ** 32))
def test_gauge_keeps_cocycle_and_class(spec, seed):
    K = nerve.build(spec)
    rng = random.Random(seed)
    for eta in twist_classes_mod2(K):
        s = {v: rng.choice((1, -1)) for v in K.cells_of(0)}
        eta2 = eta.gauge(K, s)
        assert validate_twist(K, eta2)
        s2 = gauge_between(K, eta, eta2)
        assert s2 is not None and eta.gauge(K, s2) == eta2


def test_subcomplex_closure_star_restrict():
    K = nerve.rp2()
    S = star(K, "1")
    assert S.is_face_closed()
    assert len(S.cells[2]) == 5 and len(S.cells[0]) == 6
    sub, _ = restrict(K, S)
    validate(sub)
    assert sub.euler_characteristic() == 1  # a disk
    T = SubComplex.closure(K, [(2, K.cells_of(2)[0])])
    assert T.count() == 7
    assert (S | T).is_face_closed() and (S & T).is_face_closed()
    broken = SubComplex.of(K, [[], [K.cells_of(1)[0]]])
    with pytest.raises(NotFaceClosed):
        restrict(K, broken)


def test_disjoint_union_and_union_twist():
    A, B = nerve.annulus3(), nerve.point()
    D = nerve.disjoint_union(A, B)
    validate(D)
    assert D.ncells(0) == 4 and D.cells_of(0)[-1] == "V:p"
    eta = nerve.union_twist(nerve.mobius_twist(), TwistCocycle({}))
    assert validate_twist(D, eta)


def test_build_rejects_unknown():
    with pytest.raises(ValueError):
        nerve.build("torus")
