"""Truncated power-series arithmetic.

A :class:`TruncatedSeries` is a finite list of Taylor coefficients
``a_0 .. a_N`` about the origin.  All operations truncate at the shorter
operand: coefficients beyond what the inputs determine are never invented.
Coefficients may be floats or exact rationals (``fractions.Fraction``);
the arithmetic only uses ring operations plus division by ``a_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InsufficientOrder, NonzeroInnerConstant, ZeroLinearCoefficient

#: Order used by convenience constructors when the caller does not care.
DEFAULT_ORDER = 8


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``a_0 .. a_N`` of a Taylor expansion about 0."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise InsufficientOrder("a series needs at least one coefficient")
        for c in coeffs:
            if not math.isfinite(float(c)):
                raise ValueError(f"non-finite coefficient {c!r}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def truncated(self, order: int) -> "TruncatedSeries":
        """Drop coefficients above ``order``."""
        if order < 0:
            raise InsufficientOrder("order must be nonnegative")
        return TruncatedSeries(self.coeffs[: order + 1])

    def padded(self, order: int) -> "TruncatedSeries":
        """Extend with explicit zero coefficients up to ``order``.

        Padding asserts the underlying function is polynomial through
        ``order``; use only when that is actually known.
        """
        if order <= self.order:
            return self.truncated(order)
        return TruncatedSeries(self.coeffs + (0,) * (order - self.order))

    def evaluate(self, x: float) -> float:
        """Horner evaluation of the truncated polynomial."""
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def multiply(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at ``min(order(s), order(t))``."""
    n = min(s.order, t.order)
    out = []
    for k in range(n + 1):
        out.append(sum(s.coeffs[i] * t.coeffs[k - i] for i in range(k + 1)))
    return TruncatedSeries(tuple(out))


def _truncated_product(a: list, b: tuple, n: int) -> list:
    # plain convolution of coefficient lists, kept to order n
    out = [0] * (n + 1)
    for i, ai in enumerate(a):
        if i > n:
            break
        top = min(n - i, len(b) - 1)
        for j in range(top + 1):
            out[i + j] += ai * b[j]
    return out


def compose(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``s(t(x))`` up to the common truncation order.

    Requires ``t(0) = 0``; otherwise every output coefficient would depend
    on the unknown tail of ``s``.
    """
    if t.coeffs[0] != 0:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    n = min(s.order, t.order)
    # Horner over the outer coefficients; t has valuation >= 1, so outer
    # coefficients beyond order n cannot reach the kept range.
    acc = [0] * (n + 1)
    for k in range(n, -1, -1):
        acc = _truncated_product(acc, t.coeffs, n)
        acc[0] = acc[0] + s.coeffs[k]
    return TruncatedSeries(tuple(acc))


def differentiate(s: TruncatedSeries) -> TruncatedSeries:
    """Derivative series; the order drops by one."""
    if s.order == 0:
        return TruncatedSeries((0 * s.coeffs[0],))
    return TruncatedSeries(tuple(k * s.coeffs[k] for k in range(1, s.order + 1)))


def normalized(s: TruncatedSeries) -> TruncatedSeries:
    """The series of ``(f - a0)/a1``: coefficients ``(0, 1, a2/a1, ...)``."""
    a1 = s.coeffs[1] if s.order >= 1 else 0
    if s.order < 1 or a1 == 0:
        raise ZeroLinearCoefficient("normalization requires a1 != 0")
    return TruncatedSeries((0, 1) + tuple(c / a1 for c in s.coeffs[2:]))


def reversion(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse in the normalized variable.

    With ``phi = (f - a0)/a1`` this returns ``b`` such that
    ``x = phi + b2*phi^2 + ... + bN*phi^N`` satisfies ``s(x(phi)) = a0 + a1*phi``
    through the truncation order.  Solved order by order from the
    composition identity, O(N^3) coefficient operations.
    """
    c = normalized(s).coeffs  # c0 = 0, c1 = 1
    n = s.order
    b = [0 * c[1], c[1]] + [0 * c[1]] * (n - 1)
    # powers[k] holds the coefficients of (c(x))^k up to order n
    powers = [None, list(c)]
    for k in range(2, n + 1):
        powers.append(_truncated_product(powers[k - 1], c, n))
    for m in range(2, n + 1):
        # [x^m] sum_k b_k c(x)^k must vanish; the k = m term contributes b_m
        b[m] = -sum(b[k] * powers[k][m] for k in range(1, m))
    return TruncatedSeries(tuple(b))


def beta_series(s: TruncatedSeries) -> TruncatedSeries:
    """Flow rate ``df/dx`` re-expressed in ``phi = (f - a0)/a1``.

    Composes the derivative of ``s`` with the reversion of ``s``; the result
    has order ``N - 1`` and its leading coefficient equals ``a1`` exactly.
    """
    if s.order < 1:
        raise InsufficientOrder("beta series needs order >= 1")
    return compose(differentiate(s), reversion(s))
