"""Variety descriptors, their Chow rings, and snc pairs.

Three constructors cover everything needed here: ``Proj(n)``, binary
``Product`` and ``ProjBundle(base, twist)`` for P(O + L) with c1(L) = twist.

Projective bundle convention: ``xi = c1(O(1))`` satisfies
``xi^2 - c1(E) xi + c2(E) = 0``, so for E = O + L the relation is
``xi^2 = twist * xi``.  The section P(L) has class ``xi - twist`` and normal
bundle L^-1; the section P(O) has class ``xi`` and normal bundle L.

Generator names are deterministic: ``Proj`` contributes ``H``; ``Product``
prefixes its factors' names with ``l.`` and ``r.``; ``ProjBundle`` keeps the
base names and appends a bundle generator (``xi``, or ``xi1``, ``xi2`` ...
when the base already uses ``xi``), which is the most significant one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Mapping, Optional, Sequence, Union

from .chowring import ChowClass, ChowRing, ChowRingError, Rule, format_monomial, substitute
from .errors import LogcobError


class VarietyError(LogcobError):
    pass


class NotABundle(VarietyError):
    pass


class DescriptorError(VarietyError):
    pass


@dataclass(frozen=True)
class Proj:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise DescriptorError(f"Proj needs a non-negative integer, got {self.n!r}")

    @property
    def dimension(self) -> int:
        return self.n

    def __str__(self):
        return f"P^{self.n}" if self.n else "pt"


@dataclass(frozen=True)
class Product:
    left: "VarietyDescriptor"
    right: "VarietyDescriptor"

    @property
    def dimension(self) -> int:
        return self.left.dimension + self.right.dimension

    def __str__(self):
        return f"({self.left} x {self.right})"


@dataclass(frozen=True)
class ProjBundle:
    base: "VarietyDescriptor"
    twist: ChowClass

    def __post_init__(self):
        if self.twist.ring != build_chow(self.base):
            raise DescriptorError("bundle twist must be a class on the base ring")
        if not self.twist.is_homogeneous(1):
            raise DescriptorError(f"bundle twist {self.twist} is not a degree-1 class")

    @property
    def dimension(self) -> int:
        return self.base.dimension + 1

    def __str__(self):
        return f"P(O + O({self.twist})) over {self.base}"


VarietyDescriptor = Union[Proj, Product, ProjBundle]



def generator_names(v: VarietyDescriptor) -> tuple[str, ...]:
    return build_chow(v).generators


def bundle_generator(v: ProjBundle) -> str:
    """Name of the generator ``xi`` that ``v`` adds on top of its base."""
    taken = set(generator_names(v.base))
    if "xi" not in taken:
        return "xi"
    k = 1
    while f"xi{k}" in taken:
        k += 1
    return f"xi{k}"


def _shift(rule: Rule, offset: int, width: int) -> Rule:
    def move(m):
        return (0,) * offset + m + (0,) * (width - offset - len(m))

    return Rule(rule.generator + offset, rule.exponent, {move(m): c for m, c in rule.rhs})


@lru_cache(maxsize=None)
def build_chow(v: VarietyDescriptor) -> ChowRing:
    """Chow ring of ``v`` from the standard cellular presentations."""
    if isinstance(v, Proj):
        return ChowRing(["H"], v.n, [Rule(0, v.n + 1, {})], (v.n,))
    if isinstance(v, Product):
        a, b = build_chow(v.left), build_chow(v.right)
        gens = [f"l.{g}" for g in a.generators] + [f"r.{g}" for g in b.generators]
        width = len(gens)
        rules = [_shift(r, 0, width) for r in a.rules]
        rules += [_shift(r, len(a.generators), width) for r in b.rules]
        return ChowRing(gens, a.dimension + b.dimension, rules, a.point + b.point)
    if isinstance(v, ProjBundle):
        base = build_chow(v.base)
        gens = list(base.generators) + [bundle_generator(v)]
        width = len(gens)
        # xi^2 = twist * xi
        rhs = {m + (1,): c for m, c in v.twist.terms.items()}
        rules = [_shift(r, 0, width) for r in base.rules] + [Rule(width - 1, 2, rhs)]
        return ChowRing(gens, base.dimension + 1, rules, base.point + (1,))
    raise DescriptorError(f"not a variety descriptor: {v!r}")


def pullback_images(v: VarietyDescriptor, factor: str) -> dict[str, ChowClass]:
    """Generator images for pulling classes back from a factor of ``v``.

    ``factor`` is ``"left"``/``"right"`` for a Product or ``"base"`` for a
    ProjBundle.
    """
    ring = build_chow(v)
    if isinstance(v, Product) and factor in ("left", "right"):
        src = v.left if factor == "left" else v.right
        prefix = "l." if factor == "left" else "r."
        return {g: ring.gen(prefix + g) for g in generator_names(src)}
    if isinstance(v, ProjBundle) and factor == "base":
        return {g: ring.gen(g) for g in generator_names(v.base)}
    raise VarietyError(f"{v} has no factor {factor!r}")


def pullback(cls: ChowClass, v: VarietyDescriptor, factor: str) -> ChowClass:
    return substitute(cls, build_chow(v), pullback_images(v, factor))


def tangent_chern(v: VarietyDescriptor) -> ChowClass:
    """Total Chern class of the tangent bundle of ``v``."""
    ring = build_chow(v)
    if isinstance(v, Proj):
        return (1 + ring.gen("H")) ** (v.n + 1)
    if isinstance(v, Product):
        return pullback(tangent_chern(v.left), v, "left") * pullback(tangent_chern(v.right), v, "right")
    if isinstance(v, ProjBundle):
        xi = ring.gen(bundle_generator(v))
        twist = pullback(v.twist, v, "base")
        # relative Euler sequence: c(T_rel) = (1 + xi)(1 + xi - twist) = 1 + 2 xi - twist
        return pullback(tangent_chern(v.base), v, "base") * (1 + 2 * xi - twist)
    raise DescriptorError(f"not a variety descriptor: {v!r}")


def section_classes(v: VarietyDescriptor) -> tuple[ChowClass, ChowClass]:
    """Classes of the sections ``(P(L), P(O))`` of a bundle P(O + L)."""
    if not isinstance(v, ProjBundle):
        raise NotABundle(f"{v} is not a projective bundle")
    ring = build_chow(v)
    xi = ring.gen(bundle_generator(v))
    return xi - pullback(v.twist, v, "base"), xi


# ---------------------------------------------------------------------------
# Pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DivisorComponent:
    """A boundary component given by its class.

    ``restriction`` maps every ambient generator name to a class on the
    component's own ring; it is stored as a sorted tuple so components hash.
    """

    name: str
    cls: ChowClass
    self_descriptor: Optional[VarietyDescriptor] = None
    restriction: Optional[tuple[tuple[str, ChowClass], ...]] = None

    def __post_init__(self):
        if isinstance(self.restriction, Mapping):
            object.__setattr__(self, "restriction", tuple(sorted(self.restriction.items())))
        if self.restriction is not None:
            if self.self_descriptor is None:
                raise DescriptorError(f"component {self.name!r} has a restriction but no self descriptor")
            target = build_chow(self.self_descriptor)
            for g, img in self.restriction:
                if img.ring != target:
                    raise DescriptorError(f"restriction image of {g} on {self.name!r} is not on the component's ring")

    @property
    def restriction_map(self) -> dict[str, ChowClass] | None:
        return None if self.restriction is None else dict(self.restriction)

    def restrict(self, cls: ChowClass) -> ChowClass:
        if self.restriction is None:
            raise VarietyError(f"component {self.name!r} carries no restriction map")
        return substitute(cls, build_chow(self.self_descriptor), self.restriction_map)


@dataclass(frozen=True)
class SncPair:
    ambient: VarietyDescriptor
    boundary: tuple[DivisorComponent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        names = [d.name for d in self.boundary]
        if len(set(names)) != len(names):
            raise DescriptorError(f"boundary component names are not distinct: {names}")
        ring = build_chow(self.ambient)
        for d in self.boundary:
            if d.cls.ring != ring:
                raise DescriptorError(f"class of component {d.name!r} is not on the ambient ring")
            if not d.cls.is_homogeneous(1):
                raise DescriptorError(f"class of component {d.name!r} is not of degree 1: {d.cls}")

    @property
    def ring(self) -> ChowRing:
        return build_chow(self.ambient)

    @property
    def dimension(self) -> int:
        return self.ambient.dimension

    def component(self, name: str) -> DivisorComponent:
        for d in self.boundary:
            if d.name == name:
                return d
        raise VarietyError(f"no boundary component named {name!r} (have {[d.name for d in self.boundary]})")

    def __str__(self):
        if not self.boundary:
            return f"({self.ambient}, empty)"
        parts = ", ".join(f"{d.name}=[{d.cls}]" for d in self.boundary)
        return f"({self.ambient}, {parts})"


@dataclass(frozen=True)
class CheckResult:
    component: str
    check: str
    ok: bool
    detail: str = ""


def validate_pair(p: SncPair) -> list[CheckResult]:
    """Check every restriction map for pushforward and relation compatibility.

    Components without a restriction map are reported as skipped (ok).
    Failures are returned, never raised.
    """
    ring = p.ring
    n = p.dimension
    results: list[CheckResult] = []
    for d in p.boundary:
        if d.restriction is None:
            results.append(CheckResult(d.name, "restriction", True, "no restriction map; skipped"))
            continue
        images = d.restriction_map
        target = build_chow(d.self_descriptor)
        missing = [g for g in ring.generators if g not in images]
        if missing:
            results.append(CheckResult(d.name, "restriction", False, f"no image for {missing}"))
            continue
        if target.dimension != n - 1:
            results.append(
                CheckResult(d.name, "dimension", False, f"component has dimension {target.dimension}, expected {n - 1}")
            )
            continue
        bad_deg = [g for g, img in images.items() if not img.is_homogeneous(1)]
        results.append(
            CheckResult(d.name, "degree", not bad_deg, f"non degree-1 images for {bad_deg}" if bad_deg else "")
        )
        rule_failures = []
        for rule in ring.rules:
            left = substitute(ChowClass(ring, {ring.rule_lhs(rule): Fraction(1)}), target, images)
            right = substitute(ring.element(dict(rule.rhs)), target, images)
            if left != right:
                rule_failures.append(f"{ring.format_rule(rule)}: {left} != {right}")
        results.append(CheckResult(d.name, "relations", not rule_failures, "; ".join(rule_failures)))
        push_failures = []
        for m in ring.monomials(n - 1):
            beta = ring.element({m: 1})
            down = target.integrate(substitute(ChowClass(ring, {m: Fraction(1)}), target, images))
            up = ring.integrate(beta * d.cls)
            if up != down:
                push_failures.append(f"{format_monomial(m, ring.generators)}: {down} != {up}")
        results.append(CheckResult(d.name, "pushforward", not push_failures, "; ".join(push_failures)))
    return results


def pair_is_valid(p: SncPair) -> bool:
    return all(r.ok for r in validate_pair(p))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def descriptor_to_json(v: VarietyDescriptor) -> dict[str, Any]:
    if isinstance(v, Proj):
        return {"kind": "proj", "n": v.n}
    if isinstance(v, Product):
        return {"kind": "product", "factors": [descriptor_to_json(v.left), descriptor_to_json(v.right)]}
    if isinstance(v, ProjBundle):
        return {"kind": "projbundle", "base": descriptor_to_json(v.base), "twist": str(v.twist)}
    raise DescriptorError(f"not a variety descriptor: {v!r}")


def descriptor_from_json(data: Mapping[str, Any]) -> VarietyDescriptor:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise DescriptorError(f"descriptor must be an object with a 'kind': {data!r}")
    kind = data["kind"]
    try:
        if kind == "proj":
            return Proj(int(data["n"]))
        if kind == "product":
            factors = [descriptor_from_json(f) for f in data["factors"]]
            if len(factors) < 2:
                raise DescriptorError("a product needs at least two factors")
            out = factors[0]
            for f in factors[1:]:
                out = Product(out, f)
            return out
        if kind == "projbundle":
            base = descriptor_from_json(data["base"])
            twist = build_chow(base).element(str(data.get("twist", "0")))
            return ProjBundle(base, twist)
    except KeyError as exc:
        raise DescriptorError(f"descriptor of kind {kind!r} is missing {exc}") from None
    raise DescriptorError(f"unknown descriptor kind {kind!r}")


def component_to_json(d: DivisorComponent) -> dict[str, Any]:
    out: dict[str, Any] = {"name": d.name, "class": str(d.cls)}
    if d.self_descriptor is not None:
        out["self"] = descriptor_to_json(d.self_descriptor)
    if d.restriction is not None:
        out["restriction"] = {g: str(c) for g, c in d.restriction}
    return out


def pair_to_json(p: SncPair) -> dict[str, Any]:
    out = descriptor_to_json(p.ambient)
    out["divisors"] = [component_to_json(d) for d in p.boundary]
    return out


def pair_from_json(data: Mapping[str, Any]) -> SncPair:
    ambient = descriptor_from_json(data)
    ring = build_chow(ambient)
    comps = []
    for item in data.get("divisors", []):
        try:
            name = str(item["name"])
            cls = ring.element(str(item["class"]))
        except KeyError as exc:
            raise DescriptorError(f"divisor entry is missing {exc}") from None
        self_desc = descriptor_from_json(item["self"]) if "self" in item else None
        restriction = None
        if "restriction" in item:
            if self_desc is None:
                raise DescriptorError(f"divisor {name!r} has a restriction but no 'self'")
            target = build_chow(self_desc)
            restriction = {g: target.element(str(t)) for g, t in item["restriction"].items()}
        comps.append(DivisorComponent(name, cls, self_desc, restriction))
    return SncPair(ambient, tuple(comps))


def dumps_pair(p: SncPair) -> str:
    return json.dumps(pair_to_json(p), sort_keys=True)


# ---------------------------------------------------------------------------
# Builtin library
# ---------------------------------------------------------------------------


def _hyperplane(ring: ChowRing, name: str, n: int) -> DivisorComponent:
    sub = Proj(n - 1)
    return DivisorComponent(name, ring.gen("H"), sub, {"H": build_chow(sub).gen("H")})


def _point_of_p1(name: str = "pt") -> DivisorComponent:
    ring = build_chow(Proj(1))
    pt = Proj(0)
    return DivisorComponent(name, ring.gen("H"), pt, {"H": build_chow(pt).zero()})


def _fiber(ambient: Product, side: str, name: str) -> DivisorComponent:
    """Divisor pulled back from a point on a P^1 factor of a product."""
    ring = build_chow(ambient)
    if side == "right":
        assert ambient.right == Proj(1)
        sub = ambient.left
        images = {f"l.{g}": build_chow(sub).gen(g) for g in generator_names(sub)}
        images["r.H"] = build_chow(sub).zero()
        return DivisorComponent(name, ring.gen("r.H"), sub, images)
    assert ambient.left == Proj(1)
    sub = ambient.right
    images = {f"r.{g}": build_chow(sub).gen(g) for g in generator_names(sub)}
    images["l.H"] = build_chow(sub).zero()
    return DivisorComponent(name, ring.gen("l.H"), sub, images)


def bundle_section(v: ProjBundle, name: str) -> DivisorComponent:
    """The section P(L) of ``v`` as a boundary component isomorphic to the base."""
    cls_pl, _ = section_classes(v)
    base = build_chow(v.base)
    images = {g: base.gen(g) for g in base.generators}
    # xi restricts to zero on P(L) because xi * (xi - twist) = 0
    images[bundle_generator(v)] = base.zero()
    return DivisorComponent(name, cls_pl, v.base, images)


def _builtin_table() -> dict[str, SncPair]:
    P0, P1, P2, P3 = Proj(0), Proj(1), Proj(2), Proj(3)
    r3 = build_chow(P3)
    p1xp1 = Product(P1, P1)
    p2xp1 = Product(P2, P1)
    p1cubed = Product(p1xp1, P1)
    op2_1 = ProjBundle(P2, build_chow(P2).gen("H"))
    f1 = ProjBundle(P1, build_chow(P1).gen("H"))
    f1xp1 = Product(f1, P1)

    # the P(L) section of F1, times P^1
    f1_sec = bundle_section(f1, "E")
    sub = Product(P1, P1)
    sub_ring = build_chow(sub)
    images = {f"l.{g}": pullback(img, sub, "left") for g, img in f1_sec.restriction}
    images["r.H"] = sub_ring.gen("r.H")
    f1xp1_div = DivisorComponent("E", pullback(f1_sec.cls, f1xp1, "left"), sub, images)

    p2xp1_ring = build_chow(p2xp1)
    p2_line = Product(P1, P1)
    line_ring = build_chow(p2_line)
    # (line x P^1) inside P^2 x P^1
    p2xp1_side = DivisorComponent(
        "S", p2xp1_ring.gen("l.H"), p2_line, {"l.H": line_ring.gen("l.H"), "r.H": line_ring.gen("r.H")}
    )

    p1xp1_ring = build_chow(p1xp1)
    return {
        "pt": SncPair(P0),
        "p1": SncPair(P1),
        "p1_pt": SncPair(P1, (_point_of_p1(),)),
        "p2": SncPair(P2),
        "p2_line": SncPair(P2, (_hyperplane(build_chow(P2), "L", 2),)),
        "p1xp1": SncPair(p1xp1),
        "p1xp1_a": SncPair(p1xp1, (_fiber(p1xp1, "left", "A"),)),
        "p1xp1_ab": SncPair(p1xp1, (_fiber(p1xp1, "left", "A"), _fiber(p1xp1, "right", "B"))),
        "f1": SncPair(f1),
        "f1_sec": SncPair(f1, (bundle_section(f1, "E"),)),
        "p3": SncPair(P3),
        "p2xp1": SncPair(p2xp1),
        "p1cubed": SncPair(p1cubed),
        "p3_h": SncPair(P3, (_hyperplane(r3, "H", 3),)),
        "p3_hh": SncPair(P3, (_hyperplane(r3, "H1", 3), _hyperplane(r3, "H2", 3))),
        "p3_hhh": SncPair(P3, tuple(_hyperplane(r3, f"H{i}", 3) for i in (1, 2, 3))),
        "op2_1": SncPair(op2_1, (bundle_section(op2_1, "E"),)),
        "f1xp1": SncPair(f1xp1, (f1xp1_div,)),
        "p2xp1_fiber": SncPair(p2xp1, (_fiber(p2xp1, "right", "F"),)),
        "p2xp1_p1xp1": SncPair(p2xp1, (p2xp1_side,)),
        "p2xp1_both": SncPair(p2xp1, (_fiber(p2xp1, "right", "F"), p2xp1_side)),
        "p1cubed_a": SncPair(p1cubed, (_fiber(p1cubed, "right", "C"),)),
    }


@lru_cache(maxsize=1)
def _cached_builtins() -> dict[str, SncPair]:
    return _builtin_table()


def builtin_pairs() -> dict[str, SncPair]:
    """Named library of pairs used throughout the tests and the CLI."""
    return dict(_cached_builtins())


def builtin(name: str) -> SncPair:
    table = builtin_pairs()
    if name not in table:
        raise VarietyError(f"unknown builtin pair {name!r}; choose from {sorted(table)}")
    return table[name]


__all__ = [
    "ChowRingError",
    "CheckResult",
    "DescriptorError",
    "DivisorComponent",
    "NotABundle",
    "Proj",
    "Product",
    "ProjBundle",
    "SncPair",
    "VarietyDescriptor",
    "VarietyError",
    "build_chow",
    "builtin",
    "builtin_pairs",
    "bundle_generator",
    "bundle_section",
    "descriptor_from_json",
    "descriptor_to_json",
    "generator_names",
    "pair_from_json",
    "pair_to_json",
    "pullback",
    "section_classes",
    "tangent_chern",
    "validate_pair",
]
