import pytest

from twdeligne import nerve
from twdeligne.abelian import FgAbGroup
from twdeligne.deligne import (
    DeligneDescriptor,
    FormsSummand,
    ZeroDegreeRequest,
    deligne_group,
    deligne_sheaf_cohomology,
    diamond,
)
from twdeligne.nerve import TwistCocycle, twist_classes_mod2
from twdeligne.twisted_cochain import DivisibleDescriptor


def w1(K):
    return twist_classes_mod2(K)[1]


def test_annulus_descriptors():
    K, eta = nerve.annulus3(), nerve.mobius_twist()
    d1 = deligne_group(K, eta, 1)
    assert str(d1) == "Z/2 (+) Forms(0)"
    d0 = deligne_group(K, eta, 0)
    assert str(d0) == "0" and d0.forms is None
    assert "monodromy" in d0.note


def test_projective_descriptors():
    R2, R3 = nerve.rp2(), nerve.rp3()
    assert str(deligne_group(R2, w1(R2), 2)) == "Z (+) Forms(1)"
    assert str(deligne_group(R3, w1(R3), 3)) == "Z/2 (+) Forms(2)"
    assert str(deligne_group(R3, w1(R3), 1)) == "Z/2 (+) Forms(0)"


@pytest.mark.parametrize("spec", ["point", "simplex:2", "simplex:3"])
def test_contractible_descriptors(spec):
    K = nerve.build(spec)
    eta = TwistCocycle.trivial(K)
    assert str(deligne_group(K, eta, 0)) == "Z"
    for n in range(1, 4):
        assert str(deligne_group(K, eta, n)) == f"Forms({n - 1})"


def test_descriptor_parse_roundtrip():
    for deg, text in ((1, "Z/2 (+) Forms(0)"), (2, "Z (+) Forms(1)"), (3, "Forms(2)"), (0, "Z")):
        d = DeligneDescriptor.parse(deg, text)
        assert str(d) == text
    assert DeligneDescriptor(1, FgAbGroup(0, (2,)), FormsSummand(0), "a") == \
        DeligneDescriptor(1, FgAbGroup(0, (2,)), FormsSummand(0), "b")
    with pytest.raises(ValueError):
        DeligneDescriptor(0, FgAbGroup(1), FormsSummand(0))
    with pytest.raises(ValueError):
        FormsSummand(-1)


def test_sheaf_cohomology_branches():
    K = nerve.rp3()
    eta = w1(K)
    with pytest.raises(ZeroDegreeRequest):
        deligne_sheaf_cohomology(K, eta, 1, 0)
    # k > 0: H^{n+k}(Z_eta)
    assert deligne_sheaf_cohomology(K, eta, 1, 2) == FgAbGroup(0, (2,))
    assert deligne_sheaf_cohomology(K, eta, 2, 5) == FgAbGroup()
    # k < 0: H^{n+k-1} of the R/Z model
    assert deligne_sheaf_cohomology(K, eta, 2, -1) == DivisibleDescriptor(0, FgAbGroup(0, (2,)))
    assert deligne_sheaf_cohomology(K, eta, 1, -1).is_trivial()


@pytest.mark.parametrize("spec", ["annulus3", "rp2", "rp3", "sphere2", "point", "circle:4"])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_diamond_all_classes(spec, n):
    K = nerve.build(spec)
    for eta in twist_classes_mod2(K):
        rep = diamond(K, eta, n)
        assert rep.passed, [c.line() for c in rep.checks if not c.passed]
        assert len(rep.checks) == 7


def test_diamond_bockstein_image_is_torsion():
    K = nerve.rp2()
    rep = diamond(K, w1(K), 2)
    # H^1 of the R/Z model is 0 here, and H^2(Z_eta) = Z has no torsion
    assert rep.bockstein.source == FgAbGroup()
    rep = diamond(K, TwistCocycle.trivial(K), 2)
    assert rep.bockstein.source == FgAbGroup(0, (2,))
    assert rep.bockstein.target == FgAbGroup(0, (2,))
    assert rep.bockstein.matrix == ((1,),)


def test_diamond_rejects_degree_zero():
    with pytest.raises(ValueError):
        diamond(nerve.point(), TwistCocycle({}), 0)
