"""Truncated power series in q with exact rational coefficients.

Includes the MacMahon function, a brute-force plane partition counter used
as its oracle, and the degree-zero series ``Z(X, D) = M(-q)^nu(X, D)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import LogcobError
from .logchern import nu
from .varieties import SncPair

Scalar = Union[int, Fraction]

DEFAULT_ORDER = 10
ORACLE_LIMIT = 12


class SeriesError(LogcobError):
    pass


class BadConstantTerm(SeriesError):
    pass


class OutOfRange(SeriesError):
    pass


@dataclass(frozen=True)
class RationalSeries:
    """Coefficients of q^0 .. q^order; everything beyond is unknown."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a series needs at least its constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Iterable[Scalar], order: int | None = None) -> "RationalSeries":
        cs = list(coeffs)
        if order is not None:
            cs = (cs + [0] * (order + 1))[: order + 1]
        return cls(tuple(cs))

    @classmethod
    def constant(cls, c: Scalar, order: int) -> "RationalSeries":
        return cls.of([c], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series known to order {self.order} up to {order}")
        return RationalSeries(self.coeffs[: order + 1])

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        n = min(self.order, other.order)
        return RationalSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)))

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        return self + (-other)

    def __mul__(self, other) -> "RationalSeries":
        if isinstance(other, (int, Fraction)):
            return RationalSeries(tuple(c * other for c in self.coeffs))
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return RationalSeries(tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)))

    __rmul__ = __mul__

    def __pow__(self, r: Scalar) -> "RationalSeries":
        return pow_rational(self, r)

    def __str__(self):
        return ", ".join(format_rational(c) for c in self.coeffs)


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def add(f: RationalSeries, g: RationalSeries) -> RationalSeries:
    return f + g


def mul(f: RationalSeries, g: RationalSeries) -> RationalSeries:
    return f * g


def exp(f: RationalSeries) -> RationalSeries:
    """exp(f) for f(0) = 0, from g' = f' g."""
    if f[0] != 0:
        raise BadConstantTerm(f"exp needs constant term 0, got {format_rational(f[0])}")
    n = f.order
    g = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        g[m] = sum((k * f[k] * g[m - k] for k in range(1, m + 1)), Fraction(0)) / m
    return RationalSeries(tuple(g))


def log(g: RationalSeries) -> RationalSeries:
    """log(g) for g(0) = 1, from g f' = g'."""
    if g[0] != 1:
        raise BadConstantTerm(f"log needs constant term 1, got {format_rational(g[0])}")
    n = g.order
    f = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        f[m] = g[m] - sum((k * f[k] * g[m - k] for k in range(1, m)), Fraction(0)) / m
    return RationalSeries(tuple(f))


def pow_rational(f: RationalSeries, r: Scalar) -> RationalSeries:
    if f[0] != 1:
        raise BadConstantTerm(f"rational powers need constant term 1, got {format_rational(f[0])}")
    return exp(log(f) * Fraction(r))


def substitute_neg(f: RationalSeries) -> RationalSeries:
    """f(-q)."""
    return RationalSeries(tuple(c if k % 2 == 0 else -c for k, c in enumerate(f.coeffs)))


def macmahon(order: int) -> RationalSeries:
    """prod_{n>=1} (1 - q^n)^(-n), truncated at ``order``."""
    if order < 0:
        raise OutOfRange("order must be non-negative")
    coeffs = [1] + [0] * order
    for n in range(1, order + 1):
        for _ in range(n):
            # multiply by 1/(1 - q^n): running sum with stride n
            for k in range(n, order + 1):
                coeffs[k] += coeffs[k - n]
    return RationalSeries(tuple(coeffs))


def plane_partition_count(n: int) -> int:
    """Count plane partitions of ``n`` by enumerating them row by row.

    Each row is a weakly decreasing sequence bounded entrywise by the row
    above it and no longer than it.
    """
    if not 0 <= n <= ORACLE_LIMIT:
        raise OutOfRange(f"enumeration is limited to 0 <= n <= {ORACLE_LIMIT}, got {n}")

    def rows_below(above: Sequence[int], budget: int):
        # all nonempty rows fitting under ``above`` with sum <= budget
        def build(pos: int, cap: int, left: int, row: list[int]):
            if row:
                yield tuple(row)
            if pos == len(above):
                return
            for v in range(min(cap, above[pos], left), 0, -1):
                row.append(v)
                yield from build(pos + 1, v, left - v, row)
                row.pop()

        yield from build(0, budget, budget, [])

    def count(above: Sequence[int], left: int) -> int:
        if left == 0:
            return 1
        return sum(count(row, left - sum(row)) for row in rows_below(above, left))

    return count((n,) * n, n) if n else 1


def z_series(p: SncPair, order: int = DEFAULT_ORDER, sign_convention: str = "minus-q") -> RationalSeries:
    """Degree-zero series M(-q)^nu (or M(q)^nu with ``sign_convention="plus-q"``)."""
    base = macmahon(order)
    if sign_convention == "minus-q":
        base = substitute_neg(base)
    elif sign_convention != "plus-q":
        raise SeriesError(f"unknown sign convention {sign_convention!r}")
    return pow_rational(base, nu(p))
