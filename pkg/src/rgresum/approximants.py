"""Closed-form flow approximants built from a few Taylor coefficients.

Given ``f(x) = a0 + a1 x + a2 x^2 (+ a3 x^3)``, each approximant solves the
autonomous flow ``df/dx = beta(f)`` exactly after truncating either the
flow rate ``beta`` or the inverse map ``x(f)``:

* ``beta2``  -- linear beta:      a0 + a1^2/(2 a2) * (exp(2 a2 x / a1) - 1)
* ``beta3``  -- quadratic beta:   a0 + a1^2 / (a1 * K(x) - a2) with
  ``K(x) = kappa * coth(kappa * x)`` continued evenly through kappa^2 <= 0
* ``x2``     -- quadratic x(f):   a0 + 2 a1 x / (1 + sqrt(1 - 4 (a2/a1) x))
* ``xcf2``   -- continued-fraction convergent: a0 + a1 x / (1 - (a2/a1) x)

``taylor2``/``taylor3`` evaluate the plain truncated polynomial for
comparison.  All members reproduce the input coefficients through their
construction order, and unlike the polynomial they stay one-to-one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    ConvergenceFailure,
    DomainError,
    InsufficientOrder,
    ZeroLinearCoefficient,
)
from .numerics import adaptive_quadrature, bracket_root, find_root
from .series import TruncatedSeries, beta_series

#: |a2/a1| below this evaluates the a2 -> 0 analytic limit (a straight line
#: for beta2/x2/xcf2; all three formulas have removable singularities there).
DEGENERATE_A2 = 1e-10

_XCF2_POLE_BAND = 1e-12


class ApproximantKind(enum.Enum):
    TAYLOR2 = "taylor2"
    TAYLOR3 = "taylor3"
    BETA2 = "beta2"
    BETA3 = "beta3"
    X2 = "x2"
    XCF2 = "xcf2"

    @property
    def construction_order(self) -> int:
        return 3 if self in (ApproximantKind.TAYLOR3, ApproximantKind.BETA3) else 2


@dataclass(frozen=True)
class FittedApproximant:
    """An approximant kind plus the constants taken from the input series."""

    kind: ApproximantKind
    a0: float
    a1: float
    a2: float
    a3: float | None = None
    kappa_sq: float | None = None
    domain_note: str = ""

    @property
    def degenerate_a2(self) -> bool:
        return abs(self.a2) < DEGENERATE_A2 * abs(self.a1)


@dataclass(frozen=True)
class AccuracyRow:
    """One (abscissa, approximation, reference) record with its signed
    relative error in percent."""

    abscissa: float
    approx_value: float
    oracle_value: float
    delta_percent: float
    method: str = ""
    error: str | None = None


def delta_percent(approx: float, oracle: float) -> float:
    if oracle == 0.0:
        return math.nan
    return (approx - oracle) / oracle * 100.0


def fit(a: TruncatedSeries, kind: ApproximantKind) -> FittedApproximant:
    """Extract the constants an approximant needs from a Taylor series."""
    need = kind.construction_order
    if a.order < need:
        raise InsufficientOrder(f"{kind.value} needs order >= {need}, got {a.order}")
    a0, a1, a2 = (float(a[0]), float(a[1]), float(a[2]))
    if a1 == 0.0:
        raise ZeroLinearCoefficient("approximants require a1 != 0")
    a3 = float(a[3]) if need >= 3 else None
    kappa_sq = None
    note = ""
    if kind is ApproximantKind.BETA3:
        kappa_sq = 3.0 * ((a2 / a1) ** 2 - a3 / a1)
        note = "first branch of the flow kernel; poles where a1*K(x) = a2"
    elif kind is ApproximantKind.X2:
        note = "requires 1 - 4*(a2/a1)*x >= 0"
    elif kind is ApproximantKind.XCF2:
        note = "simple pole at x = a1/a2"
    elif kind is ApproximantKind.BETA2:
        note = "entire in x"
    else:
        note = "polynomial"
    if abs(a2) < DEGENERATE_A2 * abs(a1) and kind in (
        ApproximantKind.BETA2,
        ApproximantKind.X2,
        ApproximantKind.XCF2,
    ):
        note = "degenerate a2: evaluates as the linear function a0 + a1*x"
    return FittedApproximant(kind, a0, a1, a2, a3, kappa_sq, note)


def _flow_kernel(kappa_sq: float, x: float) -> float:
    """kappa*coth(kappa*x), an even analytic function of kappa.

    For kappa_sq < 0 this is |kappa|*cot(|kappa|*x); near kappa_sq*x^2 = 0
    a short series keeps the two branches glued to machine precision.
    """
    u = kappa_sq * x * x
    if abs(u) < 1e-4:
        return (1.0 + u / 3.0 - u * u / 45.0 + 2.0 * u**3 / 945.0) / x
    if kappa_sq > 0:
        k = math.sqrt(kappa_sq)
        return k / math.tanh(k * x)
    m = math.sqrt(-kappa_sq)
    s = math.sin(m * x)
    if abs(s) < 1e-12:
        raise DomainError(f"cot pole near |kappa|*x = {m * x}")
    return m * math.cos(m * x) / s


def evaluate(fa: FittedApproximant, x: float) -> float:
    """Value of the fitted closed form at ``x``."""
    a0, a1, a2 = fa.a0, fa.a1, fa.a2
    if x == 0.0:
        return a0
    kind = fa.kind
    if kind is ApproximantKind.TAYLOR2:
        return a0 + x * (a1 + x * a2)
    if kind is ApproximantKind.TAYLOR3:
        return a0 + x * (a1 + x * (a2 + x * fa.a3))
    if fa.degenerate_a2 and kind is not ApproximantKind.BETA3:
        return a0 + a1 * x
    if kind is ApproximantKind.BETA2:
        return a0 + a1 * a1 / (2.0 * a2) * math.expm1(2.0 * a2 * x / a1)
    if kind is ApproximantKind.X2:
        r = 1.0 - 4.0 * (a2 / a1) * x
        if r < 0.0:
            raise DomainError(f"x2 domain ends where 1 - 4*(a2/a1)*x < 0 (x = {x})")
        return a0 + 2.0 * a1 * x / (1.0 + math.sqrt(r))
    if kind is ApproximantKind.XCF2:
        den = 1.0 - (a2 / a1) * x
        if abs(den) < _XCF2_POLE_BAND:
            raise DomainError(f"xcf2 pole at x = a1/a2 (x = {x})")
        return a0 + a1 * x / den
    if kind is ApproximantKind.BETA3:
        kernel = _flow_kernel(fa.kappa_sq, x)
        den = a1 * kernel - a2
        if abs(den) <= 1e-12 * (abs(a1 * kernel) + abs(a2)):
            raise DomainError(f"beta3 approximant pole at x = {x}")
        return a0 + a1 * a1 / den
    raise ValueError(f"unknown kind {kind}")


def delta_table(
    a: TruncatedSeries,
    oracle: Callable[[float], float],
    kinds: Sequence[ApproximantKind],
    grid: Sequence[float],
) -> list[AccuracyRow]:
    """One accuracy row per (kind, abscissa) against the supplied oracle.

    Evaluation failures mark the row invalid instead of aborting the sweep.
    """
    rows = []
    for kind in kinds:
        fa = fit(a, kind)
        for x in grid:
            ref = oracle(x)
            try:
                val = evaluate(fa, x)
            except DomainError as exc:
                rows.append(
                    AccuracyRow(x, math.nan, ref, math.nan, kind.value, str(exc))
                )
                continue
            rows.append(AccuracyRow(x, val, ref, delta_percent(val, ref), kind.value))
    return rows


# ---------------------------------------------------------------------------
# Numeric flow construction: the generic route the closed forms shortcut.
# ---------------------------------------------------------------------------

_QUAD_REL_TOL = 1e-12
_ROOT_TOL = 1e-13
_PHI_LIMIT = 1e9


def _beta_poly(a: TruncatedSeries, beta_order: int) -> list[float]:
    if beta_order < 1:
        raise ValueError("beta_order must be >= 1")
    if a.order < beta_order + 1:
        raise InsufficientOrder(
            f"series order {a.order} cannot determine beta through order {beta_order}"
        )
    bs = beta_series(a)
    return [float(c) for c in bs.coeffs[: beta_order + 1]]


def generic_rg_value(
    a: TruncatedSeries,
    x: float,
    beta_order: int = 2,
    f0: float | None = None,
) -> float:
    """Flow value at ``x`` computed numerically instead of in closed form.

    Integrates ``dX = dphi / (beta(phi)/a1)`` from 0 with ``X(a0) = 0`` and
    inverts ``X`` by a bracketed root search, expanding the bracket
    geometrically (toward the nearest zero of beta when there is one).
    With ``beta_order`` 1 or 2 this must agree with the beta2/beta3 closed
    forms to about 1e-9; it exists to cross-check them and the flow's
    composition law.
    """
    a0 = float(a[0])
    a1 = float(a[1])
    if a1 == 0.0:
        raise ZeroLinearCoefficient("flow construction requires a1 != 0")
    beta = _beta_poly(a, beta_order)
    q = [c / a1 for c in beta]  # q(0) = 1; dX/dphi = 1/q(phi)

    def q_at(phi: float) -> float:
        acc = 0.0
        for c in reversed(q):
            acc = acc * phi + c
        return acc

    def x_of_phi(phi: float) -> float:
        if phi == 0.0:
            return 0.0
        return adaptive_quadrature(lambda t: 1.0 / q_at(t), 0.0, phi, _QUAD_REL_TOL)

    target = float(x)
    if f0 is not None:
        target += x_of_phi((float(f0) - a0) / a1)
    if target == 0.0:
        return a0

    direction = 1.0 if target > 0 else -1.0
    phi_limit = _nearest_positive_ray_zero(q, direction)

    phi_hi = None
    if phi_limit is None:
        step = direction * max(1.0, abs(target))
        for _ in range(60):
            if x_of_phi(step) * direction >= target * direction:
                phi_hi = step
                break
            step *= 2.0
            if abs(step) > _PHI_LIMIT:
                break
        if phi_hi is None:
            raise ConvergenceFailure("flow target beyond the reachable range")
    else:
        for k in range(1, 54):
            cand = phi_limit * (1.0 - 0.5**k)
            if x_of_phi(cand) * direction >= target * direction:
                phi_hi = cand
                break
        if phi_hi is None:
            raise ConvergenceFailure("flow target too close to the beta zero")

    lo, hi = (0.0, phi_hi) if direction > 0 else (phi_hi, 0.0)

    def residual(p: float) -> float:
        return x_of_phi(p) - target

    phi_star = find_root(residual, bracket_root(residual, lo, hi), _ROOT_TOL)
    return a0 + a1 * phi_star


def _nearest_positive_ray_zero(q: list[float], direction: float) -> float | None:
    """Closest zero of the polynomial q on the chosen side of 0, else None."""
    zeros: list[float] = []
    if len(q) == 3 and q[2] != 0.0:
        c0, c1, c2 = q
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc >= 0.0:
            r = math.sqrt(disc)
            zeros = [(-c1 - r) / (2.0 * c2), (-c1 + r) / (2.0 * c2)]
    elif len(q) >= 2 and q[1] != 0.0:
        zeros = [-q[0] / q[1]]
    candidates = [z for z in zeros if z * direction > 0.0]
    if not candidates:
        return None
    return min(candidates, key=abs)


def check_group_property(
    a: TruncatedSeries, x: float, x1: float, beta_order: int = 2
) -> float:
    """Residual of the composition law F(x + x1; f0) = F(x; F(x1; f0))."""
    whole = generic_rg_value(a, x + x1, beta_order)
    inner = generic_rg_value(a, x1, beta_order)
    chained = generic_rg_value(a, x, beta_order, f0=inner)
    return abs(whole - chained)


def check_infinitesimal_operator(
    a: TruncatedSeries, x: float, h: float, beta_order: int = 2
) -> float:
    """Residual of dF/dx - beta(f) * dF/df at f = a0, via central differences.

    The exact flow satisfies this identity, so the residual is O(h^2)
    finite-difference error.
    """
    from .numerics import central_difference

    a0 = float(a[0])
    a1 = float(a[1])
    d_dx = central_difference(lambda t: generic_rg_value(a, t, beta_order), x, h)
    d_df = central_difference(
        lambda f: generic_rg_value(a, x, beta_order, f0=f), a0, h
    )
    return abs(d_dx - a1 * d_df)  # beta at f0 = a0 is exactly a1
