"""Acceptance gate: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see every line.
Criteria and tolerances are fixed here; nothing is calibrated at runtime.
"""

import math

import pytest

from numdiff import one_sided_poly_coeffs, taylor_coeffs_fd
from rgresum.approximants import (
    ApproximantKind,
    check_group_property,
    check_infinitesimal_operator,
    delta_table,
    evaluate,
    fit,
)
from rgresum.models import (
    OSCILLATOR_STRONG_COEFF,
    PARTITION_STRONG_COEFF,
    OscillatorOracleConfig,
    error_profile,
    oscillator_exact,
    paper_delta_suite,
    partition_exact,
    partition_weak_series,
)
from rgresum.pms import (
    PmsModel,
    PmsRelation,
    fit_p,
    improved_rg_value,
    invert_relation,
    pipeline_equivalence_residual,
    relation_g_of_x,
    strong_limit_coeff,
)
from rgresum.series import TruncatedSeries

PARTITION = PmsModel.PARTITION_PHI4
OSCILLATOR = PmsModel.QUARTIC_OSCILLATOR

LOG1P = TruncatedSeries((0.0, 1.0, -0.5, 1.0 / 3.0))
XSQRT = TruncatedSeries((0.0, 1.0, -0.5, 0.375))

# reference accuracy figures for the two closed-form test functions at x = 1
# (signed percent); taylor rows carry the tighter tolerance
REFERENCE_DELTAS = [
    # (series, oracle, method, reference delta, tolerance)
    ("log1p", ApproximantKind.BETA2, -8.8, 0.5),
    ("log1p", ApproximantKind.BETA3, 1.6, 0.5),
    ("log1p", ApproximantKind.X2, 5.3, 0.5),
    ("log1p", ApproximantKind.XCF2, -3.8, 0.5),
    ("log1p", ApproximantKind.TAYLOR2, -27.8, 0.2),
    ("log1p", ApproximantKind.TAYLOR3, 20.2, 0.2),
    ("x_over_sqrt1p", ApproximantKind.BETA2, -10.3, 0.5),
    ("x_over_sqrt1p", ApproximantKind.BETA3, 3.4, 0.5),
    ("x_over_sqrt1p", ApproximantKind.X2, 3.5, 0.5),
    ("x_over_sqrt1p", ApproximantKind.XCF2, -5.4, 0.5),
    ("x_over_sqrt1p", ApproximantKind.TAYLOR2, -28.9, 0.2),
    ("x_over_sqrt1p", ApproximantKind.TAYLOR3, 24.0, 0.2),
]

_CASES = {
    "log1p": (LOG1P, lambda x: math.log1p(x)),
    "x_over_sqrt1p": (XSQRT, lambda x: x / math.sqrt(1.0 + x)),
}

_fitted_p_cache: dict[PmsModel, float] = {}


def fitted_p(model: PmsModel) -> float:
    if model not in _fitted_p_cache:
        target = PARTITION_STRONG_COEFF if model is PARTITION else OSCILLATOR_STRONG_COEFF
        _fitted_p_cache[model] = fit_p(model, target)
    return _fitted_p_cache[model]


def _finish(number: int, title: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"[acceptance] criterion {number} ({title}): {status}")
    if failures:
        pytest.fail("\n".join(failures), pytrace=False)


def log_grid(lo: float, hi: float, count: int) -> list[float]:
    step = math.log(hi / lo) / (count - 1)
    return [lo * math.exp(step * i) for i in range(count)]


def test_criterion_1_closed_form_accuracy_table():
    failures = []
    for name, kind, reference, tol in REFERENCE_DELTAS:
        series, oracle = _CASES[name]
        value = evaluate(fit(series, kind), 1.0)
        delta = (value - oracle(1.0)) / oracle(1.0) * 100.0
        gap = abs(abs(delta) - abs(reference))
        if gap > tol:
            failures.append(
                f"{name}/{kind.value}: computed delta {delta:+.4f}% vs reference "
                f"{reference:+.1f}%, magnitude gap {gap:.4f} > {tol}"
            )
        if math.copysign(1.0, delta) != math.copysign(1.0, reference):
            failures.append(
                f"{name}/{kind.value}: sign mismatch, computed {delta:+.4f}% "
                f"vs reference {reference:+.1f}%"
            )
    _finish(1, "accuracy table for log1p and x/sqrt(1+x) at x=1", failures)


def test_criterion_2_partition_reconstruction_from_three_terms():
    failures = []
    rows = {r.method: abs(r.delta_percent) for r in paper_delta_suite(PARTITION)}
    bands = {
        "taylor2": (350.0, 370.0),
        "beta2": (16.0, 20.0),
        "x2": (5.0, 9.0),
        "xcf2": (9.0, 12.0),
    }
    for method, (lo, hi) in bands.items():
        if not lo <= rows[method] <= hi:
            failures.append(f"partition {method}: |delta| = {rows[method]:.3f}% outside [{lo}, {hi}]")
    _finish(2, "partition integral deltas at g=1", failures)


def test_criterion_3_oscillator_reconstruction_from_three_terms():
    failures = []
    rows = {r.method: abs(r.delta_percent) for r in paper_delta_suite(OSCILLATOR)}
    bands = {
        "taylor2": (260.0, 280.0),
        "beta2": (23.0, 27.0),
        "x2": (0.2, 0.8),
        "xcf2": (15.0, 19.0),
    }
    for method, (lo, hi) in bands.items():
        if not lo <= rows[method] <= hi:
            failures.append(f"oscillator {method}: |delta| = {rows[method]:.3f}% outside [{lo}, {hi}]")
    _finish(3, "oscillator deltas at g=1", failures)


def test_criterion_4_optimal_trial_parameter_fits():
    failures = []
    p_part = fitted_p(PARTITION)
    if abs(p_part - 1.779643) > 1e-3:
        failures.append(f"partition p = {p_part:.6f}, expected 1.779643 +/- 1e-3")
    p_osc = fitted_p(OSCILLATOR)
    if abs(p_osc - 1.472032) > 1e-3:
        failures.append(f"oscillator p = {p_osc:.6f}, expected 1.472032 +/- 1e-3")
    _finish(4, "strong-coupling matched trial parameters", failures)


def test_criterion_5_fitted_parameter_global_error():
    failures = []
    grid = log_grid(1e-2, 1e2, 60)
    budgets = {PARTITION: 0.10, OSCILLATOR: 0.01}
    for model, budget in budgets.items():
        rows = error_profile(model, fitted_p(model), grid)
        worst = max(abs(r.delta_percent) for r in rows)
        if worst > budget:
            failures.append(
                f"{model.value}: max |delta| = {worst:.4f}% over g in [1e-2, 1e2], budget {budget}%"
            )
    _finish(5, "fitted-parameter global error over 60-point grid", failures)


def test_criterion_6_unit_parameter_limits():
    failures = []
    part_row = error_profile(PARTITION, 1.0, [1e6])[0]
    if abs(abs(part_row.delta_percent) - 13.8) > 0.3:
        failures.append(f"partition |delta|(1e6) = {abs(part_row.delta_percent):.3f}%, expected 13.8 +/- 0.3")
    osc_row = error_profile(OSCILLATOR, 1.0, [1e6])[0]
    if abs(abs(osc_row.delta_percent) - 0.99) > 0.05:
        failures.append(f"oscillator |delta|(1e6) = {abs(osc_row.delta_percent):.3f}%, expected 0.99 +/- 0.05")
    part_coeff = strong_limit_coeff(PmsRelation(PARTITION, 1.0))
    if abs(part_coeff - 1.164456) > 2e-4:
        failures.append(f"partition strong amplitude {part_coeff:.7f}, expected 1.164456 +/- 2e-4")
    osc_coeff = strong_limit_coeff(PmsRelation(OSCILLATOR, 1.0))
    if abs(osc_coeff - 0.661395) > 2e-4:
        failures.append(f"oscillator strong amplitude {osc_coeff:.7f}, expected 0.661395 +/- 2e-4")
    _finish(6, "unimproved p=1 strong-coupling behavior", failures)


def test_criterion_7_property_suites():
    failures = []

    # every approximant reproduces its input coefficients to its order
    for kind in ApproximantKind:
        fa = fit(LOG1P, kind)
        got = taylor_coeffs_fd(lambda x: evaluate(fa, x))
        for k in range(kind.construction_order + 1):
            expected = float(LOG1P[k])
            if abs(got[k] - expected) > 1e-7 * max(1.0, abs(expected)):
                failures.append(
                    f"series match {kind.value} coefficient {k}: {got[k]!r} vs {expected!r}"
                )

    # composition law of the translation flow
    for series, x, x1 in ((LOG1P, 0.3, 0.4), (XSQRT, 0.1, 0.1)):
        residual = check_group_property(series, x, x1)
        if residual > 1e-9:
            failures.append(f"composition-law residual {residual:.2e} > 1e-9")

    # generator identity with second-order step decay
    res_h = check_infinitesimal_operator(LOG1P, 0.5, 1e-4)
    if res_h > 1e-6:
        failures.append(f"generator residual {res_h:.2e} > 1e-6 at h=1e-4")
    ratio = check_infinitesimal_operator(LOG1P, 0.5, 2e-3) / check_infinitesimal_operator(
        LOG1P, 0.5, 1e-3
    )
    if not 3.0 <= ratio <= 5.0:
        failures.append(f"generator residual decay ratio {ratio:.2f} not ~4 (O(h^2))")

    # substitution round trips (strict band; x*(g) is representable there)
    grids = {PARTITION: log_grid(1e-4, 1e6, 41), OSCILLATOR: log_grid(1e-4, 1e4, 41)}
    for model, grid in grids.items():
        for p in (0.8, 1.0, 1.472032, 1.779643, 2.0):
            rel = PmsRelation(model, p)
            worst = max(
                abs(relation_g_of_x(rel, invert_relation(rel, g)) - g) / g for g in grid
            )
            if worst > 1e-12:
                failures.append(f"round trip {model.value} p={p}: {worst:.2e} > 1e-12")

    # the improved closed form is the linear-beta flow of the derived bracket
    for model in PmsModel:
        for p in (0.8, 1.0, 1.472032, 1.779643):
            rel = PmsRelation(model, p)
            worst = max(pipeline_equivalence_residual(rel, g) for g in log_grid(1e-3, 1e3, 7))
            if worst > 1e-10:
                failures.append(f"pipeline equivalence {model.value} p={p}: {worst:.2e} > 1e-10")

    # improved approximants keep the exact weak-coupling series through g^2
    weak = {PARTITION: (1.0, -0.75, 105.0 / 32.0), OSCILLATOR: (0.5, 0.75, -21.0 / 8.0)}
    for model, expected in weak.items():
        for p in (0.8, 1.0, 1.472032, 1.779643, 2.0):
            rel = PmsRelation(model, p)
            c = one_sided_poly_coeffs(
                lambda x: improved_rg_value(rel, relation_g_of_x(rel, x)), 5, 0.004
            )
            if model is PARTITION:
                d1, d2 = 2.5 * p, -12.5 * p * p
            else:
                d1, d2 = 6.0 * p, -54.0 * p * p
            in_g = (c[0], c[1] * d1, c[1] * d2 + c[2] * d1 * d1)
            for got, want in zip(in_g, expected):
                if abs(got - want) > 1e-6 * abs(want):
                    failures.append(
                        f"weak-coupling coincidence {model.value} p={p}: {got!r} vs {want!r}"
                    )

    _finish(7, "structural property suites", failures)


def test_criterion_8_oracle_integrity():
    failures = []
    if abs(oscillator_exact(0.0) - 0.5) > 1e-12:
        failures.append(f"oscillator e(0) = {oscillator_exact(0.0)!r}, expected 0.5 +/- 1e-12")

    for g in (0.0, 0.01, 1.0, 10.0):
        small = oscillator_exact(g, OscillatorOracleConfig(basis_size=32))
        large = oscillator_exact(g, OscillatorOracleConfig(basis_size=64))
        if abs(large - small) > 1e-10 * max(1.0, abs(large)):
            failures.append(f"basis doubling at g={g}: shift {abs(large - small):.2e}")

    overlap = abs(partition_exact(0.01) - partition_weak_series(5).evaluate(0.01))
    if overlap > 1e-6:
        failures.append(f"partition weak overlap at g=0.01: {overlap:.2e} > 1e-6")

    scaled_part = partition_exact(1e6) * 1e6**0.25
    if abs(scaled_part - 1.0227656) > 1e-3:
        failures.append(f"scaled partition oracle at 1e6: {scaled_part:.7f} vs 1.0227656")
    scaled_osc = oscillator_exact(1e6) * 1e-2
    if abs(scaled_osc - 0.667986) > 1e-3:
        failures.append(f"scaled oscillator oracle at 1e6: {scaled_osc:.7f} vs 0.667986")

    _finish(8, "oracle integrity", failures)
