import json
from fractions import Fraction

import pytest

from logcob.cobordism import (
    GENERATORS,
    CobordismError,
    FormalSum,
    Inconsistent,
    InvalidPair,
    MissingRestriction,
    MissingSelfDescriptor,
    Provenance,
    Relation,
    add,
    bundle_pair,
    check_relation,
    decompose3,
    extended_invariants,
    generator_matrix,
    normal_cone_relation,
    product,
    scale,
    z_product,
)
from logcob.dtseries import z_series
from logcob.logchern import WrongDimension, c_lambda, invariant_catalog, nu
from logcob.varieties import (
    DivisorComponent,
    Product,
    Proj,
    ProjBundle,
    SncPair,
    build_chow,
    builtin,
    section_classes,
)


def invariants_of(p):
    return {inv.name: inv(p) for inv in invariant_catalog(p.dimension)}


# -- formal sums --------------------------------------------------------------


def test_formal_sum_merges_and_drops_zeros():
    a, b = builtin("p3"), builtin("p3_h")
    s = FormalSum([(1, a), (2, b), (-1, a)])
    assert s.terms == ((Fraction(2), b),)
    assert add(s, FormalSum.single(a)) == FormalSum([(1, a), (2, b)])
    assert scale(Fraction(1, 2), s) == FormalSum.single(b)
    assert (s - s).terms == ()
    assert str(FormalSum()) == "0"
    assert len(-s) == 1


def test_formal_sum_evaluate():
    s = FormalSum([(1, builtin("p3")), (-1, builtin("op2_1"))])
    assert s.evaluate(nu) == -8


# -- products -----------------------------------------------------------------


def test_product_of_points():
    pp = product(builtin("p1_pt"), builtin("p1_pt"))
    assert pp.ambient == Product(Proj(1), Proj(1))
    assert [(d.name, str(d.cls)) for d in pp.boundary] == [("l.pt", "l.H"), ("r.pt", "r.H")]


def test_product_with_point_is_unit():
    p = builtin("p3_h")
    q = product(p, builtin("pt"))
    assert invariants_of(q) == invariants_of(p)


def test_product_whitney():
    # c(1,1) of (P1,pt)^2: (c1 of each factor pulled back)^2 = (a + b)^2 = 2ab
    pp = product(builtin("p1_pt"), builtin("p1_pt"))
    assert c_lambda(pp, (1, 1)) == 2
    assert c_lambda(pp, (2,)) == 1


def test_cube_is_an_eighth():
    p1_pt = builtin("p1_pt")
    cube = product(product(p1_pt, p1_pt), p1_pt)
    full = builtin("p1cubed")
    mine, theirs = invariants_of(cube), invariants_of(full)
    assert all(mine[k] == Fraction(1, 8) * theirs[k] for k in theirs)
    assert z_series(cube, 10) == z_product(FormalSum([(Fraction(1, 8), full)]), 10)


# -- bundle pairs -------------------------------------------------------------


def test_bundle_pair_trivial_twist():
    p2 = builtin("p2")
    b = bundle_pair(p2, build_chow(Proj(2)).zero())
    assert b.ambient == ProjBundle(Proj(2), build_chow(Proj(2)).zero())
    assert [d.name for d in b.boundary] == ["E"]
    assert invariants_of(b) == invariants_of(builtin("p2xp1_fiber"))


def test_bundle_pair_f1():
    b = bundle_pair(builtin("p1"), build_chow(Proj(1)).gen("H"))
    pl, _ = section_classes(b.ambient)
    assert b.boundary[0].cls == pl
    assert (pl * pl).integrate() == -1
    assert invariants_of(b) == invariants_of(builtin("f1_sec"))


def test_bundle_pair_trivial_over_point():
    b = bundle_pair(builtin("p1_pt"), build_chow(Proj(1)).zero())
    assert [str(d.cls) for d in b.boundary] == ["xi", "H"]
    assert invariants_of(b) == invariants_of(builtin("p1xp1_ab"))


def test_bundle_pair_section_name_is_fresh():
    base = SncPair(Proj(1), (DivisorComponent("E", build_chow(Proj(1)).gen("H")),))
    b = bundle_pair(base, build_chow(Proj(1)).zero())
    assert [d.name for d in b.boundary] == ["E'", "E"]


# -- relations ----------------------------------------------------------------


def test_point_relation_on_p1():
    r = normal_cone_relation(builtin("p1_pt"), "pt")
    assert r.lhs == builtin("p1")
    assert len(r.rhs) == 2
    assert all(invariants_of(p) == invariants_of(builtin("p1_pt")) for _, p in r.rhs)
    report = check_relation(r)
    assert report.passed
    assert [(row.invariant, row.lhs, row.rhs) for row in report.rows] == [("c(1)", 2, 2)]


def test_hyperplane_relation_on_p3():
    r = normal_cone_relation(builtin("p3_h"), "H")
    assert r.lhs == builtin("p3")
    (c0, first), (c1, bundle) = r.rhs.terms
    assert (c0, c1) == (1, 1) and first == builtin("p3_h")
    assert bundle.ambient == builtin("op2_1").ambient
    assert nu(bundle) == -12
    assert nu(r.lhs) == nu(first) + nu(bundle)
    assert check_relation(r).passed


def test_two_hyperplanes_relation():
    r = normal_cone_relation(builtin("p3_hh"), "H2")
    assert r.lhs.boundary == (builtin("p3_hh").component("H1"),)
    bundle = r.rhs.terms[1][1]
    assert [d.name for d in bundle.boundary] == ["H2", "H1"]
    assert [str(d.cls) for d in bundle.boundary] == ["xi - H", "H"]
    assert check_relation(r).passed


def test_wrong_section_breaks_additivity():
    # using P(O) instead of P(L) for the bundle boundary must be caught
    p = builtin("p3_h")
    good = normal_cone_relation(p, "H")
    bundle = good.rhs.terms[1][1]
    _, po = section_classes(bundle.ambient)
    wrong = SncPair(bundle.ambient, (DivisorComponent("H", po),))
    bad = Relation(good.lhs, FormalSum([(1, p), (1, wrong)]))
    report = check_relation(bad)
    assert not report.passed
    failed = {row.invariant for row in report.rows if not row.ok}
    # both sections are copies of P^2, so the Euler characteristic of the complement cannot tell them apart
    assert "c(3)" not in failed
    assert {"c(2,1)", "nu", "alpha[i=1,k=1,(1)]"} <= failed


def test_relation_errors():
    ring = build_chow(Proj(3))
    with pytest.raises(MissingSelfDescriptor):
        normal_cone_relation(SncPair(Proj(3), (DivisorComponent("H", ring.gen("H")),)), "H")
    with pytest.raises(MissingRestriction):
        normal_cone_relation(SncPair(Proj(3), (DivisorComponent("H", ring.gen("H"), Proj(2)),)), "H")


def test_relation_json():
    data = normal_cone_relation(builtin("p3_h"), "H").to_json()
    assert data["provenance"] == {"kind": "normal-cone", "detail": "H"}
    assert [t["coefficient"] for t in data["rhs"]] == ["1", "1"]
    json.dumps(data)
    assert str(Provenance("normal-cone", "H")) == "normal-cone[H]"


def test_check_relation_subset_of_invariants():
    r = normal_cone_relation(builtin("p3_h"), "H")
    report = check_relation(r, invariant_catalog(3)[:1])
    assert [row.invariant for row in report.rows] == ["c(3)"]


def test_corpus_is_additive(corpus3, corpus_low):
    assert len(corpus3) >= 10
    for r in corpus3 + corpus_low:
        report = check_relation(r)
        assert report.passed, [row for row in report.rows if not row.ok]


def test_corpus_z_multiplicative(corpus3):
    for r in corpus3:
        assert z_series(r.lhs, 10) == z_product(r.rhs, 10)


# -- decomposition ------------------------------------------------------------


def test_generator_matrix_rank():
    m = generator_matrix("standard")
    assert len(m) == 5 and all(len(row) == 5 for row in m)
    assert decompose3(builtin("p3")).rank == 4
    assert decompose3(builtin("p3"), basis="hyperplane").rank == 4


@pytest.mark.parametrize("basis", sorted(GENERATORS))
def test_generators_decompose_to_themselves(basis):
    for j, name in enumerate(GENERATORS[basis]):
        d = decompose3(builtin(name), basis=basis)
        expected = [Fraction(0)] * 5
        expected[j] = Fraction(1)
        assert list(d.coefficients) == expected, name
        assert d.verified


def test_decompose_two_hyperplanes_against_chain():
    p = builtin("p3_hh")
    d = decompose3(p)
    assert d.verified
    assert dict(zip(d.generators, d.coefficients)) == {
        "p3": Fraction(5, 6),
        "p2xp1": 0,
        "p1cubed": Fraction(1, 12),
        "op2_1": Fraction(-4, 3),
        "f1xp1": 0,
    }
    # explicit chain: (P3,H1) = p3_hh + B and p3 = p3_h + op2_1
    bundle = normal_cone_relation(p, "H2").rhs.terms[1][1]
    chain = FormalSum([(1, builtin("p3")), (-1, builtin("op2_1")), (-1, bundle)])
    combo = d.as_formal_sum()
    for inv in extended_invariants():
        assert chain.evaluate(inv) == combo.evaluate(inv) == inv(p), inv.name
    assert z_product(chain, 8) == z_product(combo, 8) == z_series(p, 8)


def test_decompose_hyperplane_basis():
    d = decompose3(builtin("p3_h"), basis="standard")
    assert dict(zip(d.generators, d.coefficients))["op2_1"] == -1
    assert decompose3(builtin("p3_hh"), basis="hyperplane").verified


def test_decompose_relation_terms(corpus3):
    for r in corpus3:
        for _, p in r.rhs:
            assert decompose3(p).verified, str(p)


def test_decompose_errors():
    with pytest.raises(WrongDimension):
        decompose3(builtin("p2"))
    with pytest.raises(CobordismError):
        decompose3(builtin("p3"), basis="mystery")
    ring = build_chow(Proj(3))
    bad = DivisorComponent("H", ring.gen("H"), Proj(2), {"H": 2 * build_chow(Proj(2)).gen("H")})
    with pytest.raises(InvalidPair):
        decompose3(SncPair(Proj(3), (bad,)))


def test_inconsistent_is_a_cobordism_error():
    assert issubclass(Inconsistent, CobordismError)
