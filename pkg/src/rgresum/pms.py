"""Variational trial-parameter machinery shared by the two benchmark models.

Both models trade their coupling ``g`` for a bounded variable ``x`` in
``[0, 1)`` through a stationarity relation with a tunable exponent-matching
parameter ``p``:

* partition integral:   g = (2 / 5p) * x / (1 - x)^2
* quartic oscillator:   g = (1 / 6p) * x / (1 - x)^(3/2)

``p = 1`` is the plain minimal-sensitivity choice; ``fit_p`` instead picks
``p`` so the approximant reproduces the exact strong-coupling amplitude.
The improved approximant itself is the quadratic-bracket flow closed form
applied after the substitution, times the model's kinematic prefactor.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import approximants
from .errors import ConvergenceFailure, DomainError, NegativeCoupling, NoRootInBracket
from .numerics import RootBracket, find_root
from .series import TruncatedSeries

_SQRT3 = math.sqrt(3.0)
#: inversion results are clamped here before use in (1-x) powers so that
#: last-digit rounding can never produce a spurious domain error
_X_CEILING = 1.0 - 1e-15

_FIT_BRACKET = (0.5, 5.0)
_FIT_SCAN_STEP = 0.05
_FIT_RESIDUAL_TOL = 1e-10


class PmsModel(enum.Enum):
    PARTITION_PHI4 = "partition"
    QUARTIC_OSCILLATOR = "oscillator"


@dataclass(frozen=True)
class PmsRelation:
    """A model tag plus the trial parameter of its g <-> x substitution."""

    model: PmsModel
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"trial parameter must be positive, got {self.p}")

    @property
    def g_c(self) -> float | None:
        """Cubic-branch threshold of the oscillator inversion."""
        if self.model is PmsModel.QUARTIC_OSCILLATOR:
            return 1.0 / (9.0 * _SQRT3 * self.p)
        return None


@dataclass(frozen=True)
class StrongCouplingAsym:
    """Leading strong-coupling term plus correction terms.

    ``corrections`` holds (coefficient, exponent) pairs quoted in each
    model's conventional form: absolute powers of g for the partition
    integral, powers relative to the leading g^(1/3) prefactor for the
    oscillator.
    """

    leading_coeff: float
    leading_exponent: float
    corrections: tuple[tuple[float, float], ...]

    def __post_init__(self):
        exps = [self.leading_exponent] + [e for _, e in self.corrections]
        if any(b >= a for a, b in zip(exps, exps[1:])):
            raise ValueError(f"exponents must strictly decrease, got {exps}")


def relation_g_of_x(rel: PmsRelation, x: float) -> float:
    """Coupling produced by the trial substitution; monotone on [0, 1)."""
    if not 0.0 <= x < 1.0:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    if rel.model is PmsModel.PARTITION_PHI4:
        return (2.0 / (5.0 * rel.p)) * x / (1.0 - x) ** 2
    return (1.0 / (6.0 * rel.p)) * x / (1.0 - x) ** 1.5


def invert_relation(rel: PmsRelation, g: float) -> float:
    """The x in [0, 1) reaching coupling ``g``.

    Partition: the quadratic inversion written in its cancellation-free
    form.  Oscillator: the closed-form cubic branches (trigonometric below
    g_c, real-radical above, continuous at g_c) followed by a short Newton
    polish of the cubic in t = sqrt(1 - x) to pin the last digits.
    """
    if g < 0:
        raise NegativeCoupling(f"coupling must be nonnegative, got {g}")
    if g == 0:
        return 0.0
    p = rel.p
    if rel.model is PmsModel.PARTITION_PHI4:
        u = 5.0 * p * g
        x = u / (1.0 + u + math.sqrt(1.0 + 2.0 * u))
        # one Newton step on (2/5p) x - g (1-x)^2 = 0, stable at both ends
        for _ in range(2):
            h = (2.0 / (5.0 * p)) * x - g * (1.0 - x) ** 2
            x -= h / (2.0 / (5.0 * p) + 2.0 * g * (1.0 - x))
        return min(max(x, 0.0), _X_CEILING)

    r = g / rel.g_c
    if r <= 1.0:
        alpha = math.acos(2.0 * r * r - 1.0)
        y = 2.0 * math.cos(alpha / 3.0) - 1.0
    else:
        big = 2.0 * r * r - 1.0 + 2.0 * r * math.sqrt(r * r - 1.0)
        a_plus = big ** (1.0 / 3.0)
        y = a_plus + 1.0 / a_plus - 1.0  # the conjugate radical is 1/a_plus
    t = 0.5 * _SQRT3 * abs(y) / r  # t = sqrt(1 - x)
    for _ in range(2):
        c = 6.0 * p * g * t**3 + t * t - 1.0
        t -= c / (18.0 * p * g * t * t + 2.0 * t)
    return min(max(1.0 - t * t, 0.0), _X_CEILING)


def modified_series_value(model: PmsModel, g: float, x: float, order: int) -> float:
    """First- or second-order trial-split value at arbitrary (g, x).

    Used for the stationarity check that generates the p = 1 relations.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    if g < 0:
        raise DomainError(f"coupling must be nonnegative, got {g}")
    if model is PmsModel.PARTITION_PHI4:
        root = math.sqrt(1.0 - x)
        first = root * (1.0 + 0.5 * x - 0.75 * g * (1.0 - x) ** 2)
        if order == 1:
            return first
        second = root * (
            0.375 * x * x
            - (15.0 / 8.0) * g * x * (1.0 - x) ** 2
            + (105.0 / 32.0) * g * g * (1.0 - x) ** 4
        )
        return first + second
    inv_root = (1.0 - x) ** -0.5
    first = 0.5 * (1.0 - 0.5 * x + 1.5 * (1.0 - x) ** 1.5 * g) * inv_root
    if order == 1:
        return first
    bracket = (x - 6.0 * (1.0 - x) ** 1.5 * g) ** 2 + 6.0 * (1.0 - x) ** 3 * g * g
    return first - bracket * inv_root / 16.0


def derived_bracket_series(rel: PmsRelation) -> TruncatedSeries:
    """Quadratic bracket (1, A, B) left after the trial substitution.

    Substituting the p-relation into the second-order trial split removes
    the explicit g dependence; what remains multiplies the model prefactor.
    """
    p = rel.p
    if rel.model is PmsModel.PARTITION_PHI4:
        a = 0.5 - 3.0 / (10.0 * p)
        b = 0.375 - 0.75 / p + 21.0 / (40.0 * p * p)
    else:
        a = -0.5 + 1.0 / (4.0 * p)
        b = -((1.0 - 1.0 / p) ** 2 + 1.0 / (6.0 * p * p)) / 8.0
    return TruncatedSeries((1.0, a, b))


def _shape_factors(rel: PmsRelation) -> tuple[float, float]:
    """(Q, R) amplitude and exponent factors of the improved closed form."""
    p = rel.p
    if rel.model is PmsModel.PARTITION_PHI4:
        lin = 1.0 + 2.5 * (p - 1.0)
        quad = 1.0 + 2.5 * (p - 1.0) ** 2
        if lin == 0.0:
            raise DomainError("improved form is singular at p = 3/5")
        return lin * lin / quad, quad / (p * lin)
    if p <= 0.5:
        raise DomainError(f"oscillator improved form needs p > 1/2, got {p}")
    quad = 1.0 + 6.0 * (p - 1.0) ** 2
    return (2.0 * p - 1.0) ** 2 / quad, quad / (p * (2.0 * p - 1.0))


def improved_rg_value(rel: PmsRelation, g: float) -> float:
    """The p-parameterized flow approximant over the whole coupling range.

    At p = 1 both shape factors collapse to 1 and the plain
    minimal-sensitivity form is recovered.
    """
    q_amp, r_exp = _shape_factors(rel)
    x = invert_relation(rel, g)
    if rel.model is PmsModel.PARTITION_PHI4:
        return math.sqrt(1.0 - x) * (
            1.0 + (2.0 / 15.0) * q_amp * math.expm1(1.5 * r_exp * x)
        )
    return 0.5 * (1.0 - 1.5 * q_amp * math.expm1(r_exp * x / 6.0)) / math.sqrt(1.0 - x)


def strong_limit_coeff(rel: PmsRelation) -> float:
    """Scaled g -> infinity limit of the improved approximant.

    Partition: limit of g^(1/4) * I(g); oscillator: limit of g^(-1/3) * e(g).
    """
    q_amp, r_exp = _shape_factors(rel)
    if rel.model is PmsModel.PARTITION_PHI4:
        return (2.0 / (5.0 * rel.p)) ** 0.25 * (
            1.0 + (2.0 / 15.0) * q_amp * math.expm1(1.5 * r_exp)
        )
    return (0.75 * rel.p) ** (1.0 / 3.0) * (
        1.0 - 1.5 * q_amp * math.expm1(r_exp / 6.0)
    )


def pipeline_equivalence_residual(rel: PmsRelation, g: float) -> float:
    """|improved closed form - prefactor * beta2(derived bracket)|.

    The improved approximant is exactly the linear-beta flow closed form
    applied to the derived bracket series; this residual cross-validates
    the two code paths and should sit at rounding level (<= 1e-10).
    """
    x = invert_relation(rel, g)
    fa = approximants.fit(derived_bracket_series(rel), approximants.ApproximantKind.BETA2)
    bracket_value = approximants.evaluate(fa, x)
    if rel.model is PmsModel.PARTITION_PHI4:
        alt = math.sqrt(1.0 - x) * bracket_value
    else:
        alt = 0.5 * bracket_value / math.sqrt(1.0 - x)
    return abs(improved_rg_value(rel, g) - alt)


def fit_p(model: PmsModel, target_leading_coeff: float) -> float:
    """Trial parameter matching the exact strong-coupling amplitude.

    Scans [0.5, 5] for sign changes of the matching residual and refines
    each by bracketed root search; candidates that converge onto a pole of
    the residual (the shape factors are singular at one interior p) are
    rejected by the final residual check.
    """
    if not target_leading_coeff > 0:
        raise DomainError("target strong-coupling amplitude must be positive")

    def residual(p: float) -> float | None:
        try:
            return strong_limit_coeff(PmsRelation(model, p)) - target_leading_coeff
        except (DomainError, OverflowError, ZeroDivisionError):
            return None

    lo, hi = _FIT_BRACKET
    grid = []
    n_steps = round((hi - lo) / _FIT_SCAN_STEP)
    for i in range(n_steps + 1):
        p = lo + (hi - lo) * i / n_steps
        grid.append((p, residual(p)))
    for (p0, r0), (p1, r1) in zip(grid, grid[1:]):
        if r0 is None or r1 is None:
            continue
        if r0 == 0.0:
            return p0
        if r0 * r1 > 0:
            continue

        def pinned(p: float) -> float:
            r = residual(p)
            return math.inf if r is None else r

        try:
            root = find_root(pinned, RootBracket(p0, p1, r0, r1), 1e-12)
        except ConvergenceFailure:
            continue
        final = residual(root)
        if final is not None and abs(final) <= _FIT_RESIDUAL_TOL:
            return root
    raise NoRootInBracket(
        f"no matching p in [{lo}, {hi}] for target {target_leading_coeff}"
    )
