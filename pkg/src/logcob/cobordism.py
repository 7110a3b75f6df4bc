"""Double point relations between snc pairs and invariant-level decomposition.

Relations are never checked by building the degeneration itself; they are
checked by evaluating every implemented invariant on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Optional, Sequence, Union

import sympy

from .chowring import ChowClass
from .dtseries import DEFAULT_ORDER, RationalSeries, format_rational, pow_rational, z_series
from .errors import LogcobError
from .logchern import (
    Invariant,
    Partition,
    WrongDimension,
    alpha,
    c_lambda,
    invariant_catalog,
    nu,
    nu_closed_form,
    nu_tensor,
)
from .varieties import (
    DivisorComponent,
    Product,
    ProjBundle,
    SncPair,
    build_chow,
    builtin,
    bundle_generator,
    bundle_section,
    pair_to_json,
    pullback,
    validate_pair,
)

Scalar = Union[int, Fraction]


class CobordismError(LogcobError):
    pass


class MissingSelfDescriptor(CobordismError):
    pass


class MissingRestriction(CobordismError):
    pass


class Inconsistent(CobordismError):
    pass


class InvalidPair(CobordismError):
    pass


# ---------------------------------------------------------------------------
# Formal sums
# ---------------------------------------------------------------------------


class FormalSum:
    """A finite Q-linear combination of pairs, compared structurally."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Scalar, SncPair]] = ()):
        merged: dict[SncPair, Fraction] = {}
        for c, p in terms:
            merged[p] = merged.get(p, Fraction(0)) + Fraction(c)
        self.terms: tuple[tuple[Fraction, SncPair], ...] = tuple((c, p) for p, c in merged.items() if c)

    @classmethod
    def single(cls, p: SncPair) -> "FormalSum":
        return cls([(1, p)])

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + other.terms)

    def __neg__(self) -> "FormalSum":
        return FormalSum((-c, p) for c, p in self.terms)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __rmul__(self, q: Scalar) -> "FormalSum":
        return FormalSum((Fraction(q) * c, p) for c, p in self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and dict((p, c) for c, p in self.terms) == dict(
            (p, c) for c, p in other.terms
        )

    def __hash__(self):
        return hash(frozenset((p, c) for c, p in self.terms))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def evaluate(self, invariant) -> Fraction:
        return sum((c * invariant(p) for c, p in self.terms), Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{format_rational(c)}*{p}" for c, p in self.terms)


def add(a: FormalSum, b: FormalSum) -> FormalSum:
    return a + b


def scale(q: Scalar, a: FormalSum) -> FormalSum:
    return q * a


def _product_component(d: DivisorComponent, v: Product, side: str, other) -> DivisorComponent:
    prefix = "l." if side == "left" else "r."
    cls = pullback(d.cls, v, side)
    if d.self_descriptor is None or d.restriction is None:
        return DivisorComponent(prefix + d.name, cls)
    sub = Product(d.self_descriptor, other) if side == "left" else Product(other, d.self_descriptor)
    ring = build_chow(sub)
    images = {prefix + g: pullback(img, sub, side) for g, img in d.restriction}
    keep = "r." if side == "left" else "l."
    for g in build_chow(other).generators:
        images[keep + g] = ring.gen(keep + g)
    return DivisorComponent(prefix + d.name, cls, sub, images)


def product(a: SncPair, b: SncPair) -> SncPair:
    """(X, D) . (Y, E) = (X x Y, D x Y + X x E); component names get ``l.``/``r.``."""
    v = Product(a.ambient, b.ambient)
    comps = [_product_component(d, v, "left", b.ambient) for d in a.boundary]
    comps += [_product_component(e, v, "right", a.ambient) for e in b.boundary]
    return SncPair(v, tuple(comps))


# ---------------------------------------------------------------------------
# Bundle pairs and normal cone relations
# ---------------------------------------------------------------------------


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def bundle_pair(base_pair: SncPair, twist: ChowClass, section_name: str = "E") -> SncPair:
    """(X, D, L) -> (P(L + O), P(L) + pullback of D).

    The section P(L) comes first in the boundary.  Pulled-back components keep
    their names and, when the base component has a restriction map, get one
    onto the corresponding bundle over that component.
    """
    v = ProjBundle(base_pair.ambient, twist)
    section = bundle_section(v, _fresh(section_name, {d.name for d in base_pair.boundary}))
    xi = bundle_generator(v)
    comps = [section]
    for d in base_pair.boundary:
        cls = pullback(d.cls, v, "base")
        if d.self_descriptor is None or d.restriction is None:
            comps.append(DivisorComponent(d.name, cls))
            continue
        sub = ProjBundle(d.self_descriptor, d.restrict(twist))
        images = {g: pullback(img, sub, "base") for g, img in d.restriction}
        images[xi] = build_chow(sub).gen(bundle_generator(sub))
        comps.append(DivisorComponent(d.name, cls, sub, images))
    return SncPair(v, tuple(comps))


@dataclass(frozen=True)
class Provenance:
    kind: str
    detail: str = ""

    def to_json(self) -> dict[str, str]:
        return {"kind": self.kind, "detail": self.detail}

    def __str__(self):
        return f"{self.kind}[{self.detail}]" if self.detail else self.kind


@dataclass(frozen=True)
class Relation:
    """``lhs = rhs`` in the cobordism group."""

    lhs: SncPair
    rhs: FormalSum
    provenance: Provenance = field(default_factory=lambda: Provenance("user"))

    def as_formal_difference(self) -> FormalSum:
        return FormalSum.single(self.lhs) - self.rhs

    def to_json(self) -> dict[str, Any]:
        return {
            "lhs": pair_to_json(self.lhs),
            "rhs": [{"coefficient": format_rational(c), "pair": pair_to_json(p)} for c, p in self.rhs],
            "provenance": self.provenance.to_json(),
        }


def normal_cone_relation(p: SncPair, component: str) -> Relation:
    """Relation from deforming ``p``'s ambient to the normal cone of a component.

    (X, D - D_k) = (X, D) + (P(N + O), P(N) + pullback of D_j|D_k for j != k)
    """
    d = p.component(component)
    if d.self_descriptor is None:
        raise MissingSelfDescriptor(f"component {component!r} has no self descriptor")
    if d.restriction is None:
        raise MissingRestriction(f"component {component!r} has no restriction map")
    rest = tuple(x for x in p.boundary if x.name != component)
    normal = d.restrict(d.cls)
    traces = tuple(DivisorComponent(x.name, d.restrict(x.cls)) for x in rest)
    bundle = bundle_pair(SncPair(d.self_descriptor, traces), normal, section_name=component)
    return Relation(SncPair(p.ambient, rest), FormalSum([(1, p), (1, bundle)]), Provenance("normal-cone", component))


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckRow:
    invariant: str
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class RelationReport:
    relation: Relation
    rows: tuple[CheckRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)


def check_relation(r: Relation, invariants: Optional[Sequence[Invariant]] = None) -> RelationReport:
    """Evaluate each invariant on both sides of ``r`` and compare exactly."""
    if invariants is None:
        invariants = invariant_catalog(r.lhs.dimension)
    rows = tuple(CheckRow(inv.name, inv(r.lhs), r.rhs.evaluate(inv)) for inv in invariants)
    return RelationReport(r, rows)


def z_product(s: FormalSum, order: int = DEFAULT_ORDER, sign_convention: str = "minus-q") -> RationalSeries:
    """prod Z(p)^c over the terms of ``s``."""
    out = RationalSeries.constant(1, order)
    for c, p in s:
        out = out * pow_rational(z_series(p, order, sign_convention), c)
    return out


# ---------------------------------------------------------------------------
# Decomposition over the threefold generators
# ---------------------------------------------------------------------------

GENERATORS = {
    "standard": ("p3", "p2xp1", "p1cubed", "op2_1", "f1xp1"),
    "hyperplane": ("p3", "p2xp1", "p1cubed", "p3_h", "f1xp1"),
}

SOLVE_INVARIANTS = (
    Invariant("c(3)", lambda p: c_lambda(p, Partition.of(3))),
    Invariant("c(2,1)", lambda p: c_lambda(p, Partition.of(2, 1))),
    Invariant("c(1,1,1)", lambda p: c_lambda(p, Partition.of(1, 1, 1))),
    Invariant("alpha[i=1,k=1,(1)]", lambda p: alpha(p, 1, 1, Partition.of(1))),
    Invariant("nu", nu),
)


def extended_invariants() -> list[Invariant]:
    """Invariants used to audit a decomposition, beyond the solving set."""
    out = list(invariant_catalog(3))
    out.append(Invariant("nu[tensor]", nu_tensor))
    out.append(Invariant("nu[c3-c1c2]", nu_closed_form))
    return out


@dataclass(frozen=True)
class Decomposition:
    pair: SncPair
    generators: tuple[str, ...]
    coefficients: tuple[Fraction, ...]
    invariant_names: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]  # rows: invariants, columns: generators
    rank: int
    residuals: tuple[CheckRow, ...]
    z_order: int
    z_ok: bool

    @property
    def verified(self) -> bool:
        return self.z_ok and all(r.ok for r in self.residuals)

    def as_formal_sum(self) -> FormalSum:
        return FormalSum((c, builtin(g)) for c, g in zip(self.coefficients, self.generators))


def _to_sympy(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows])


def _solve_exact(matrix: sympy.Matrix, target: sympy.Matrix) -> Optional[list[Fraction]]:
    try:
        sol, params = matrix.gauss_jordan_solve(target)
    except ValueError:
        return None
    if params.shape[0]:
        sol = sol.subs({s: 0 for s in params})
    return [Fraction(int(x.p), int(x.q)) for x in sol]


def generator_matrix(basis: str = "standard") -> tuple[tuple[Fraction, ...], ...]:
    names = GENERATORS[basis]
    return tuple(tuple(inv(builtin(g)) for g in names) for inv in SOLVE_INVARIANTS)


def decompose3(p: SncPair, basis: str = "standard", z_order: int = 6) -> Decomposition:
    """Express ``p`` over the threefold generators at the level of invariants.

    Among all exact solutions of ``G x = v(p)`` one of minimal support is
    returned (first in generator order among those of that size).  The result
    is then audited on the extended invariant set and on the Z series.
    """
    if p.dimension != 3:
        raise WrongDimension(f"expected a threefold pair, got dimension {p.dimension}")
    failures = [r for r in validate_pair(p) if not r.ok]
    if failures:
        raise InvalidPair("; ".join(f"{r.component}/{r.check}: {r.detail}" for r in failures))
    if basis not in GENERATORS:
        raise CobordismError(f"unknown generator basis {basis!r}; choose from {sorted(GENERATORS)}")
    names = GENERATORS[basis]
    gens = [builtin(g) for g in names]
    matrix = generator_matrix(basis)
    target = [inv(p) for inv in SOLVE_INVARIANTS]
    G = _to_sympy(matrix)
    v = _to_sympy([[x] for x in target])

    coefficients = None
    for size in range(len(names) + 1):
        for support in combinations(range(len(names)), size):
            if size == 0:
                if all(x == 0 for x in target):
                    coefficients = [Fraction(0)] * len(names)
                    break
                continue
            sol = _solve_exact(G[:, list(support)], v)
            if sol is not None:
                coefficients = [Fraction(0)] * len(names)
                for j, x in zip(support, sol):
                    coefficients[j] = x
                break
        if coefficients is not None:
            break
    if coefficients is None:
        raise Inconsistent(f"invariant vector {[format_rational(x) for x in target]} is not in the generator span")

    combo = FormalSum(zip(coefficients, gens))
    residuals = tuple(CheckRow(inv.name, inv(p), combo.evaluate(inv)) for inv in extended_invariants())
    z_ok = z_series(p, z_order) == z_product(combo, z_order)
    return Decomposition(
        pair=p,
        generators=names,
        coefficients=tuple(coefficients),
        invariant_names=tuple(inv.name for inv in SOLVE_INVARIANTS),
        matrix=matrix,
        rank=G.rank(),
        residuals=residuals,
        z_order=z_order,
        z_ok=z_ok,
    )
