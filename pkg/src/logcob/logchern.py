"""Logarithmic Chern classes and the numerical invariants built from them.

At the level of total Chern classes the log tangent bundle of ``(X, D)`` is

    c(T^log) = c(T_X) / prod_i (1 + [D_i])

which is what :func:`log_tangent_chern` computes.  The restriction of
``c(T^log_X)`` to a stratum is used as the log Chern class of that stratum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterator, Sequence

from .chowring import ChowClass
from .errors import LogcobError
from .varieties import SncPair, tangent_chern


class LogChernError(LogcobError):
    pass


class RankMismatch(LogChernError):
    pass


class WrongDimension(LogChernError):
    pass


class WeightMismatch(LogChernError):
    pass


class DegreeInfeasible(LogChernError):
    pass


class EvenExponent(LogChernError):
    pass


class InvariantMismatch(LogChernError):
    """Two independent routes to the same number disagreed."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("()")
        if not text:
            return cls(())
        return cls(tuple(int(t) for t in text.split(",") if t.strip()))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"

    def __iter__(self):
        return iter(self.parts)


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for parts in rec(n, n if largest is None else largest):
        yield Partition(parts)


@dataclass(frozen=True)
class LogChernData:
    pair: SncPair
    total: ChowClass

    def c(self, k: int) -> ChowClass:
        return self.total.graded_part(k)

    def classes(self) -> list[ChowClass]:
        """``[c_0, c_1, ..., c_n]``."""
        return [self.c(k) for k in range(self.pair.dimension + 1)]


def _inverse_one_plus(x: ChowClass) -> ChowClass:
    # x has positive degree, so the geometric series stops at the dimension
    out = x.ring.one()
    term = x.ring.one()
    for _ in range(x.ring.dimension):
        term = term * (-x)
        out = out + term
    return out


def log_tangent_chern(p: SncPair) -> LogChernData:
    total = tangent_chern(p.ambient)
    for d in p.boundary:
        total = total * _inverse_one_plus(d.cls)
    return LogChernData(p, total)


def tensor_line_chern(chern_of_e: Sequence[ChowClass], rank: int, line: ChowClass) -> list[ChowClass]:
    """Chern classes ``c_0..c_r`` of ``E (x) L`` from those of ``E`` and ``c1(L)``.

    c_k(E (x) L) = sum_{i<=k} C(r-i, k-i) c_i(E) c1(L)^(k-i)
    """
    if rank < 1:
        raise RankMismatch(f"rank must be at least 1, got {rank}")
    if len(chern_of_e) != rank + 1:
        raise RankMismatch(f"expected {rank + 1} Chern classes c_0..c_{rank}, got {len(chern_of_e)}")
    powers = [line.ring.one()]
    for _ in range(rank):
        powers.append(powers[-1] * line)
    out = []
    for k in range(rank + 1):
        ck = line.ring.zero()
        for i in range(k + 1):
            ck = ck + comb(rank - i, k - i) * (chern_of_e[i] * powers[k - i])
        out.append(ck)
    return out


def _require_dim3(p: SncPair) -> None:
    if p.dimension != 3:
        raise WrongDimension(f"expected a threefold pair, got dimension {p.dimension}")


def nu_tensor(p: SncPair) -> Fraction:
    """Integral of c_3(T^log (x) K^log) via the twist formula."""
    _require_dim3(p)
    data = log_tangent_chern(p)
    cs = data.classes()
    twisted = tensor_line_chern(cs, 3, -cs[1])
    return twisted[3].integrate()


def nu_closed_form(p: SncPair) -> Fraction:
    """Integral of (c_3 - c_1 c_2)(T^log)."""
    _require_dim3(p)
    data = log_tangent_chern(p)
    return (data.c(3) - data.c(1) * data.c(2)).integrate()


def nu(p: SncPair) -> Fraction:
    a, b = nu_tensor(p), nu_closed_form(p)
    if a != b:
        raise InvariantMismatch(f"nu routes disagree on {p}: tensor {a}, closed form {b}")
    return a


def c_lambda(p: SncPair, lam: Partition | Sequence[int]) -> Fraction:
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    if lam.weight != p.dimension:
        raise WeightMismatch(f"partition {lam} has weight {lam.weight}, dimension is {p.dimension}")
    data = log_tangent_chern(p)
    prod = p.ring.one()
    for part in lam:
        prod = prod * data.c(part)
    return prod.integrate()


def alpha(p: SncPair, i: int, k: int, lam: Partition | Sequence[int]) -> Fraction:
    """Sum over codimension-k strata V of the integral of c_k(N_V)^i c_lam(T^log_V).

    A stratum is an intersection of k distinct boundary components; its
    class and the top Chern class of its normal bundle are both the product
    of the component classes, so each stratum contributes
    ``(prod D_j)^(i+1) * c_lam(T^log_X)`` integrated over X.
    """
    lam = lam if isinstance(lam, Partition) else Partition(tuple(lam))
    if i < 1 or i % 2 == 0:
        raise EvenExponent(f"exponent i must be an odd positive integer, got {i}")
    if k < 1:
        raise DegreeInfeasible(f"stratum codimension k must be positive, got {k}")
    need = p.dimension - (i + 1) * k
    if need < 0 or lam.weight != need:
        raise DegreeInfeasible(
            f"partition {lam} has weight {lam.weight}; degree forces {need} for n={p.dimension}, i={i}, k={k}"
        )
    data = log_tangent_chern(p)
    c_lam = p.ring.one()
    for part in lam:
        c_lam = c_lam * data.c(part)
    total = Fraction(0)
    for subset in combinations(p.boundary, k):
        stratum = p.ring.one()
        for d in subset:
            stratum = stratum * d.cls
        total += (stratum ** (i + 1) * c_lam).integrate()
    return total


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Invariant:
    name: str
    evaluate: Callable[[SncPair], Fraction]

    def __call__(self, p: SncPair) -> Fraction:
        return self.evaluate(p)


def admissible_alpha_indices(n: int) -> list[tuple[int, int, Partition]]:
    out = []
    k = 1
    while 2 * k <= n:
        i = 1
        while (i + 1) * k <= n:
            for lam in partitions(n - (i + 1) * k):
                out.append((i, k, lam))
            i += 2
        k += 1
    return out


def invariant_catalog(n: int) -> list[Invariant]:
    """Every implemented invariant for pairs of dimension ``n``."""
    out = [Invariant(f"c{lam}", lambda p, lam=lam: c_lambda(p, lam)) for lam in partitions(n)]
    if n == 3:
        out.append(Invariant("nu", nu))
    for i, k, lam in admissible_alpha_indices(n):
        out.append(Invariant(f"alpha[i={i},k={k},{lam}]", lambda p, i=i, k=k, lam=lam: alpha(p, i, k, lam)))
    return out
