import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logcob.chowring import (
    BadPointClass,
    BadRule,
    DegreeMismatch,
    NonConfluent,
    PolynomialSyntaxError,
    RingMismatch,
    UnknownGenerator,
    add,
    graded_part,
    integrate,
    make_ring,
    mul,
    normal_form,
    parse_polynomial,
    scale,
)
from logcob.varieties import Proj, build_chow, builtin_pairs


@pytest.fixture
def p3():
    return make_ring(["H"], 3, [("H^4", "0")], "H^3")


@pytest.fixture
def p1p1():
    return make_ring(["a", "b"], 2, [("a^2", "0"), ("b^2", "0")], "a*b")


@pytest.fixture
def op2():
    return make_ring(["h", "xi"], 3, [("h^3", "0"), ("xi^2", "h*xi")], "h^2*xi")


# -- construction -------------------------------------------------------------


def test_make_ring_examples(p3, p1p1, op2):
    assert p3.dimension == 3 and str(p3.point_class()) == "H^3"
    assert str(p1p1.point_class()) == "a*b"
    assert op2.generators == ("h", "xi")


def test_point_of_wrong_degree_rejected():
    with pytest.raises(BadPointClass):
        make_ring(["h", "xi"], 3, [("h^3", "0"), ("xi^2", "h*xi")], "h*xi")


def test_reducible_point_rejected():
    with pytest.raises(BadPointClass):
        make_ring(["h", "xi"], 3, [("h^3", "0"), ("xi^2", "h*xi")], "h*xi^2")


def test_point_must_span_top_degree():
    # without a rule on b the top degree has a, b^2 ... several monomials
    with pytest.raises(BadPointClass):
        make_ring(["a", "b"], 2, [("a^2", "0")], "a*b")


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        make_ring(["H"], 2, [("H^3", "H")], "H^2")


def test_increasing_rule_rejected():
    # with xi declared first, h is the more significant generator
    with pytest.raises(BadRule):
        make_ring(["xi", "h"], 3, [("h^3", "0"), ("xi^2", "h*xi")], "h^2*xi")


def test_lhs_must_be_pure_power():
    with pytest.raises(BadRule):
        make_ring(["a", "b"], 2, [("a*b", "0")], "a*b")


def test_non_confluent_same_generator():
    with pytest.raises(NonConfluent):
        make_ring(["a", "b"], 2, [("b^2", "a*b"), ("b^2", "0")], "a*b")


def test_non_confluent_overlap():
    # b^3 -> 0 directly, but b*b^2 -> a*b^2 -> a^2*b, and a^2 is not killed below degree 4
    with pytest.raises(NonConfluent):
        make_ring(["a", "b"], 4, [("b^2", "a*b"), ("b^3", "0"), ("a^5", "0")], "a^4")


def test_unknown_generator_in_rule():
    with pytest.raises(UnknownGenerator):
        make_ring(["H"], 3, [("K^4", "0")], "H^3")


def test_ring_equality_is_structural(p3):
    assert p3 == make_ring(["H"], 3, [("H^4", "0")], "H^3")
    assert p3 == build_chow(Proj(3))
    assert hash(p3) == hash(build_chow(Proj(3)))


# -- normal forms -------------------------------------------------------------


def test_normal_form_examples(p3, p1p1, op2):
    assert normal_form(p3, "H^5").is_zero()
    assert str(normal_form(op2, "xi^3")) == "h^2*xi"
    assert str(normal_form(p1p1, "(a+b)^2")) == "2*a*b"


def test_xi_cubed_by_hand(op2):
    # xi^3 = xi*(h xi) = h*xi^2 = h*(h xi) = h^2 xi
    xi, h = op2.gen("xi"), op2.gen("h")
    assert xi ** 3 == h * h * xi
    assert normal_form(op2, "xi^3") == normal_form(op2, "h^2*xi")


def test_unknown_generator(p3):
    with pytest.raises(UnknownGenerator):
        normal_form(p3, "K^2")


def test_parse_rationals_and_dotted_names():
    poly = parse_polynomial("3/2*l.H^2 - r.H + 1/3", ["l.H", "r.H"])
    assert poly == {(2, 0): Fraction(3, 2), (0, 1): Fraction(-1), (0, 0): Fraction(1, 3)}


@pytest.mark.parametrize("bad", ["H/H", "H^H", "H^(1/2)", "2.5*H", "H +", "f(H)"])
def test_parse_errors(p3, bad):
    with pytest.raises((PolynomialSyntaxError, UnknownGenerator)):
        normal_form(p3, bad)


def test_string_round_trip(builtin_rings):
    for ring in builtin_rings.values():
        c = ring.element(1)
        for g in ring.generators:
            c = c * (1 + Fraction(3, 2) * ring.gen(g))
        c = c - Fraction(1, 7) * ring.one()
        assert ring.element(str(c)) == c


# -- ring operations ----------------------------------------------------------


def test_ring_ops_examples(p3):
    H = p3.gen("H")
    assert mul(H ** 2, H) == p3.element("H^3")
    assert graded_part(p3.element("1 + 4*H + 6*H^2"), 1) == 4 * H
    assert add(H, -H).is_zero()
    assert scale(Fraction(1, 2), 2 * H) == H


def test_ring_mismatch(p3, p1p1):
    with pytest.raises(RingMismatch):
        mul(p3.gen("H"), p1p1.gen("a"))
    with pytest.raises(RingMismatch):
        p3.gen("H") + p1p1.gen("a")
    with pytest.raises(RingMismatch):
        integrate(p3, p1p1.gen("a"))


def test_integrate_examples(p3, op2):
    assert integrate(p3, p3.element("H^3")) == 1
    cube = build_chow(builtin_pairs()["p1cubed"].ambient)
    a, b, c = (cube.gen(g) for g in cube.generators)
    assert integrate(cube, 8 * a * b * c) == 8
    assert integrate(op2, op2.gen("xi") ** 3) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_perfect_pairing_projective_space(n):
    ring = build_chow(Proj(n))
    H = ring.gen("H")
    for a in range(n + 1):
        for b in range(n + 1):
            assert integrate(ring, H ** a * H ** b) == (1 if a + b == n else 0)


def test_fundamental_class_integrates_to_zero(builtin_rings):
    for name, ring in builtin_rings.items():
        if ring.dimension > 0:
            assert integrate(ring, ring.one()) == 0, name
        else:
            assert integrate(ring, ring.one()) == 1


def test_top_degree_normal_basis_is_point(builtin_rings):
    for ring in builtin_rings.values():
        assert ring.normal_basis(ring.dimension) == [ring.point]
        assert ring.normal_basis(ring.dimension + 1) == []


# -- properties ---------------------------------------------------------------

RING_NAMES = ["p3", "p2xp1", "p1cubed", "op2_1", "f1xp1", "f1", "p1xp1"]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def raw_polys(ring):
    k = len(ring.generators)
    monos = st.tuples(*[st.integers(0, 4)] * k)
    return st.dictionaries(monos, coeffs, max_size=6)


def _random_poly(rng, nvars):
    return {
        tuple(rng.randint(0, 4) for _ in range(nvars)): Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        for _ in range(rng.randint(0, 6))
    }


def test_normal_form_idempotent_all_builtins(builtin_rings):
    rng = random.Random(20260)
    for name, ring in builtin_rings.items():
        for _ in range(1000):
            c = normal_form(ring, _random_poly(rng, len(ring.generators)))
            assert normal_form(ring, dict(c.terms)) == c, name
            assert all(ring.is_irreducible(m) for m in c.terms), name


@pytest.mark.parametrize("name", RING_NAMES)
def test_algebra_laws(name):
    ring = builtin_pairs()[name].ring

    @settings(max_examples=60, deadline=None)
    @given(raw_polys(ring), raw_polys(ring), raw_polys(ring))
    def check(x, y, z):
        a, b, c = (normal_form(ring, p) for p in (x, y, z))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a - a == ring.zero()

    check()


@pytest.mark.parametrize("name", RING_NAMES)
def test_reduction_commutes_with_multiplication(name):
    from logcob.chowring import _pmul

    ring = builtin_pairs()[name].ring

    @settings(max_examples=60, deadline=None)
    @given(raw_polys(ring), raw_polys(ring))
    def check(x, y):
        assert normal_form(ring, _pmul(x, y)) == normal_form(ring, x) * normal_form(ring, y)

    check()
