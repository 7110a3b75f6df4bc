"""Graded quotient rings over Q with rewrite-rule normal forms.

A ring is presented by degree-1 generators, one dimension ``n`` and a list of
rules ``g^e = p`` whose left side is a pure power of a generator.  Monomials
are compared in graded lexicographic order taken in declaration order, with
later generators more significant (so ``{h, xi}`` with ``xi^2 = h*xi`` is a
valid presentation); every right side must be strictly smaller than its left
side, so rewriting terminates.  Confluence is checked when the ring is built.

Everything of degree above ``n`` is zero, and the degree-``n`` part is spanned
by a single irreducible monomial, the point class, which integrates to 1.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Mapping, Sequence, Union

from .errors import LogcobError

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]
Scalar = Union[int, Fraction]


class ChowRingError(LogcobError):
    pass


class NonConfluent(ChowRingError):
    pass


class DegreeMismatch(ChowRingError):
    pass


class BadPointClass(ChowRingError):
    pass


class BadRule(ChowRingError):
    pass


class UnknownGenerator(ChowRingError):
    pass


class RingMismatch(ChowRingError):
    pass


class PolynomialSyntaxError(ChowRingError):
    pass


def _order_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m[::-1])


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _padd(a: Poly, b: Mapping[Monomial, Fraction], factor: Fraction = Fraction(1)) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + factor * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _ppow(a: Poly, e: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: Fraction(1)}
    for _ in range(e):
        out = _pmul(out, a)
    return out


# ---------------------------------------------------------------------------
# Polynomial strings
# ---------------------------------------------------------------------------


def _dotted_name(node: ast.AST) -> str | None:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Attribute):
        head = _dotted_name(node.value)
        return None if head is None else f"{head}.{node.attr}"
    return None


def parse_polynomial(text: str, generators: Sequence[str]) -> Poly:
    """Parse ``text`` such as ``"3/2*xi*H^2 - H"`` into an unreduced polynomial.

    Generator names may contain dots (``l.H``).  Division is only allowed by
    a nonzero constant and exponents must be non-negative integer constants.
    """
    index = {g: i for i, g in enumerate(generators)}
    nvars = len(generators)
    unit = (0,) * nvars
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise PolynomialSyntaxError(f"cannot parse {text!r}: {exc.msg}") from None

    def constant(poly: Poly) -> Fraction | None:
        if not poly:
            return Fraction(0)
        if set(poly) == {unit}:
            return poly[unit]
        return None

    def walk(node: ast.AST) -> Poly:
        name = _dotted_name(node)
        if name is not None:
            if name not in index:
                raise UnknownGenerator(f"unknown generator {name!r} (have {list(generators)})")
            m = [0] * nvars
            m[index[name]] = 1
            return {tuple(m): Fraction(1)}
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return {unit: Fraction(node.value)} if node.value else {}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            if isinstance(node.op, ast.USub):
                return {m: -c for m, c in inner.items()}
            return inner
        if isinstance(node, ast.BinOp):
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return _padd(left, right)
            if isinstance(node.op, ast.Sub):
                return _padd(left, right, Fraction(-1))
            if isinstance(node.op, ast.Mult):
                return _pmul(left, right)
            if isinstance(node.op, ast.Div):
                d = constant(right)
                if d is None or d == 0:
                    raise PolynomialSyntaxError(f"division by a non-constant or zero in {text!r}")
                return {m: c / d for m, c in left.items()}
            if isinstance(node.op, ast.Pow):
                e = constant(right)
                if e is None or e.denominator != 1 or e < 0:
                    raise PolynomialSyntaxError(f"exponent must be a non-negative integer in {text!r}")
                return _ppow(left, int(e), nvars)
        raise PolynomialSyntaxError(f"unsupported syntax in {text!r}")

    return walk(tree.body)


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial, generators: Sequence[str]) -> str:
    parts = []
    for g, e in zip(generators, m):
        if e == 1:
            parts.append(g)
        elif e > 1:
            parts.append(f"{g}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(poly: Mapping[Monomial, Fraction], generators: Sequence[str]) -> str:
    if not poly:
        return "0"
    # ascending degree; inside a degree the most significant monomial leads
    ordered = sorted(poly.items(), key=lambda mc: (sum(mc[0]), tuple(-e for e in mc[0][::-1])))
    out = []
    for i, (m, c) in enumerate(ordered):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if sum(m) == 0:
            body = _format_coeff(a)
        elif a == 1:
            body = format_monomial(m, generators)
        else:
            body = f"{_format_coeff(a)}*{format_monomial(m, generators)}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# Rings
# ---------------------------------------------------------------------------

RuleSide = Union[str, Mapping[Monomial, Scalar]]


class Rule:
    """A rewrite rule ``generator^exponent -> rhs``."""

    __slots__ = ("generator", "exponent", "rhs")

    def __init__(self, generator: int, exponent: int, rhs: Mapping[Monomial, Fraction]):
        self.generator = generator
        self.exponent = exponent
        self.rhs = tuple(sorted(rhs.items()))

    def _key(self):
        return (self.generator, self.exponent, self.rhs)

    def __eq__(self, other):
        return isinstance(other, Rule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Rule({self.generator}, {self.exponent}, {dict(self.rhs)})"


class ChowRing:
    """Immutable presented ring; build it with :func:`make_ring`."""

    def __init__(
        self,
        generators: Sequence[str],
        dimension: int,
        rules: Sequence[Rule],
        point: Monomial,
    ):
        if len(set(generators)) != len(generators):
            raise ChowRingError(f"duplicate generator names in {list(generators)}")
        if dimension < 0:
            raise ChowRingError("dimension must be non-negative")
        self.generators: tuple[str, ...] = tuple(generators)
        self.dimension = dimension
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.point: Monomial = tuple(point)
        self._index = {g: i for i, g in enumerate(self.generators)}
        self._cache: dict[Monomial, Poly] = {}
        self._hash = hash((self.generators, self.dimension, self.rules, self.point))
        self._check_rules()
        self._check_confluence()
        self._check_point()

    # -- validation ---------------------------------------------------------

    def rule_lhs(self, rule: Rule) -> Monomial:
        m = [0] * len(self.generators)
        m[rule.generator] = rule.exponent
        return tuple(m)

    def _check_rules(self) -> None:
        for rule in self.rules:
            lhs = self.rule_lhs(rule)
            for m, _ in rule.rhs:
                if sum(m) != rule.exponent:
                    raise DegreeMismatch(
                        f"rule {self.format_rule(rule)}: right side has degree {sum(m)}, left side {rule.exponent}"
                    )
                if _order_key(m) >= _order_key(lhs):
                    raise BadRule(f"rule {self.format_rule(rule)}: right side is not smaller than the left side")

    def _check_confluence(self) -> None:
        for i, r1 in enumerate(self.rules):
            for r2 in self.rules[i + 1:]:
                overlap = list(_mono_mul(self.rule_lhs(r1), self.rule_lhs(r2)))
                if r1.generator == r2.generator:
                    overlap[r1.generator] = max(r1.exponent, r2.exponent)
                overlap = tuple(overlap)
                a = self.reduce(self._apply(r1, overlap))
                b = self.reduce(self._apply(r2, overlap))
                if a != b:
                    raise NonConfluent(
                        f"rules {self.format_rule(r1)} and {self.format_rule(r2)} reduce "
                        f"{format_monomial(overlap, self.generators)} to "
                        f"{format_poly(a, self.generators)} and {format_poly(b, self.generators)}"
                    )

    def _check_point(self) -> None:
        p = self.point
        if len(p) != len(self.generators) or any(e < 0 for e in p):
            raise BadPointClass("point class is not a monomial in the generators")
        shown = format_monomial(p, self.generators)
        if sum(p) != self.dimension:
            raise BadPointClass(f"point class {shown} has degree {sum(p)}, expected {self.dimension}")
        if self.reduce({p: Fraction(1)}) != {p: Fraction(1)}:
            raise BadPointClass(f"point class {shown} is reducible")
        top = self.normal_basis(self.dimension)
        if top != [p]:
            raise BadPointClass(
                f"top degree is spanned by {[format_monomial(m, self.generators) for m in top]}, not by {shown} alone"
            )

    def format_rule(self, rule: Rule) -> str:
        lhs = format_monomial(self.rule_lhs(rule), self.generators)
        return f"{lhs} = {format_poly(dict(rule.rhs), self.generators)}"

    # -- reduction ----------------------------------------------------------

    def _apply(self, rule: Rule, m: Monomial) -> Poly:
        rest = list(m)
        rest[rule.generator] -= rule.exponent
        rest = tuple(rest)
        return {_mono_mul(rest, r): c for r, c in rule.rhs}

    def _reduce_monomial(self, m: Monomial) -> Poly:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        if sum(m) > self.dimension:
            out: Poly = {}
        else:
            for rule in self.rules:
                if m[rule.generator] >= rule.exponent:
                    out = self.reduce(self._apply(rule, m))
                    break
            else:
                out = {m: Fraction(1)}
        self._cache[m] = out
        return out

    def reduce(self, poly: Mapping[Monomial, Scalar]) -> Poly:
        out: Poly = {}
        for m, c in poly.items():
            if c:
                out = _padd(out, self._reduce_monomial(m), Fraction(c))
        return out

    def is_irreducible(self, m: Monomial) -> bool:
        return sum(m) <= self.dimension and all(m[r.generator] < r.exponent for r in self.rules)

    def monomials(self, degree: int) -> list[Monomial]:
        """All monomials of the given degree, reducible or not."""
        k = len(self.generators)
        out = []
        for combo in combinations_with_replacement(range(k), degree):
            m = [0] * k
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
        return sorted(out, key=_order_key, reverse=True)

    def normal_basis(self, degree: int) -> list[Monomial]:
        return [m for m in self.monomials(degree) if self.is_irreducible(m)]

    # -- element constructors -----------------------------------------------

    def element(self, poly: Union[str, Mapping[Monomial, Scalar], "ChowClass", Scalar]) -> "ChowClass":
        if isinstance(poly, ChowClass):
            if poly.ring != self:
                raise RingMismatch("class belongs to a different ring")
            return poly
        if isinstance(poly, str):
            poly = parse_polynomial(poly, self.generators)
        elif isinstance(poly, (int, Fraction)):
            poly = {(0,) * len(self.generators): Fraction(poly)}
        return ChowClass(self, self.reduce(poly))

    def gen(self, name: str) -> "ChowClass":
        if name not in self._index:
            raise UnknownGenerator(f"unknown generator {name!r}")
        m = [0] * len(self.generators)
        m[self._index[name]] = 1
        return self.element({tuple(m): 1})

    def one(self) -> "ChowClass":
        return self.element(1)

    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def point_class(self) -> "ChowClass":
        return ChowClass(self, {self.point: Fraction(1)})

    def integrate(self, cls: "ChowClass") -> Fraction:
        if cls.ring != self:
            raise RingMismatch("class belongs to a different ring")
        return cls._terms.get(self.point, Fraction(0))

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, ChowRing)
            and self._hash == other._hash
            and self.generators == other.generators
            and self.dimension == other.dimension
            and self.rules == other.rules
            and self.point == other.point
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        rules = ", ".join(self.format_rule(r) for r in self.rules)
        pt = format_monomial(self.point, self.generators)
        return f"ChowRing([{', '.join(self.generators)}], dim={self.dimension}, rules=[{rules}], point={pt})"


class ChowClass:
    """An element of a :class:`ChowRing`, always stored in normal form."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: ChowRing, terms: Poly):
        self.ring = ring
        self._terms = terms
        self._hash = None

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def _coerce(self, other) -> "ChowClass":
        if isinstance(other, ChowClass):
            if other.ring != self.ring:
                raise RingMismatch("operands live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowClass(self.ring, _padd(self._terms, other._terms))

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowClass(self.ring, _padd(self._terms, other._terms, Fraction(-1)))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChowClass(self.ring, {m: c * other for m, c in self._terms.items()} if other else {})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowClass(self.ring, self.ring.reduce(_pmul(self._terms, other._terms)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = self.ring.one()
        for _ in range(e):
            out = out * self
        return out

    def graded_part(self, degree: int) -> "ChowClass":
        return ChowClass(self.ring, {m: c for m, c in self._terms.items() if sum(m) == degree})

    def degrees(self) -> set[int]:
        return {sum(m) for m in self._terms}

    def is_zero(self) -> bool:
        return not self._terms

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(m) == degree for m in self._terms)

    def integrate(self) -> Fraction:
        return self.ring.integrate(self)

    def __eq__(self, other):
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self._terms, self.ring.generators)

    def __repr__(self):
        return f"ChowClass({self})"


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------


def make_ring(
    generators: Sequence[str],
    dimension: int,
    rules: Sequence[tuple[RuleSide, RuleSide]],
    canonical_point: Union[str, Monomial],
) -> ChowRing:
    """Build and validate a ring from polynomial strings or monomial dicts.

    >>> R = make_ring(["H"], 3, [("H^4", "0")], "H^3")
    >>> str(R.element("H^2") * R.gen("H"))
    'H^3'
    """
    gens = tuple(generators)

    def to_poly(side: RuleSide) -> Poly:
        if isinstance(side, str):
            return parse_polynomial(side, gens)
        return {tuple(m): Fraction(c) for m, c in side.items() if c}

    built = []
    for lhs, rhs in rules:
        lp = to_poly(lhs)
        if len(lp) != 1:
            raise BadRule(f"left side {lhs!r} is not a single monomial")
        (m, c), = lp.items()
        support = [i for i, e in enumerate(m) if e]
        if c != 1 or len(support) != 1:
            raise BadRule(f"left side {lhs!r} must be a pure power of one generator")
        built.append(Rule(support[0], m[support[0]], to_poly(rhs)))

    if isinstance(canonical_point, str):
        pp = parse_polynomial(canonical_point, gens)
        if len(pp) != 1 or next(iter(pp.values())) != 1:
            raise BadPointClass(f"point class {canonical_point!r} is not a monomial")
        point = next(iter(pp))
    else:
        point = tuple(canonical_point)
    return ChowRing(gens, dimension, built, point)


def normal_form(ring: ChowRing, polynomial) -> ChowClass:
    return ring.element(polynomial)


def _same_ring(a: ChowClass, b: ChowClass) -> None:
    if a.ring != b.ring:
        raise RingMismatch("operands live in different rings")


def add(a: ChowClass, b: ChowClass) -> ChowClass:
    _same_ring(a, b)
    return a + b


def mul(a: ChowClass, b: ChowClass) -> ChowClass:
    _same_ring(a, b)
    return a * b


def scale(q: Scalar, c: ChowClass) -> ChowClass:
    return c * Fraction(q)


def graded_part(c: ChowClass, degree: int) -> ChowClass:
    return c.graded_part(degree)


def integrate(ring: ChowRing, c: ChowClass) -> Fraction:
    return ring.integrate(c)


def substitute(cls: ChowClass, target: ChowRing, images: Mapping[str, ChowClass]) -> ChowClass:
    """Apply the ring map sending each generator name to ``images[name]``.

    The map is evaluated on the normal-form representative; the caller is
    responsible for it being well defined on the quotient.
    """
    src = cls.ring
    missing = [g for g in src.generators if g not in images]
    if missing and any(any(m[src._index[g]] for m in cls._terms) for g in missing):
        raise UnknownGenerator(f"no image given for generators {missing}")
    powers: dict[tuple[int, int], ChowClass] = {}

    def power(i: int, e: int) -> ChowClass:
        key = (i, e)
        if key not in powers:
            powers[key] = target.element(images[src.generators[i]]) ** e
        return powers[key]

    out = target.zero()
    for m, c in cls._terms.items():
        term = target.one()
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
        out = out + term * c
    return out
