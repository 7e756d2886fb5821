"""Shared numerical kernels: adaptive quadrature, bracketed root finding,
a dense symmetric eigensolver, and finite-difference derivatives.

Everything here is pure: callers supply callbacks and tolerances, nothing
keeps state between calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceFailure, NoRootInBracket

_MAX_QUAD_DEPTH = 60
_MAX_ROOT_ITER = 200
_MAX_JACOBI_SWEEPS = 100


@dataclass(frozen=True)
class RootBracket:
    """An interval with a sign change: ``f(lo) * f(hi) <= 0``."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise NoRootInBracket(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise NoRootInBracket(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})"
            )


def bracket_root(f: Callable[[float], float], lo: float, hi: float) -> RootBracket:
    """Evaluate the endpoints and build a :class:`RootBracket`."""
    return RootBracket(lo, hi, f(lo), f(hi))


def adaptive_quadrature(f, a: float, b: float, rel_tol: float) -> float:
    """Integral of ``f`` over ``[a, b]`` via adaptive Simpson subdivision.

    The Richardson error estimate ``(S_fine - S_coarse)/15`` controls
    acceptance and is added back as a correction.  The tolerance is
    relative to a coarse estimate of the whole integral; if that estimate
    is zero the tolerance is applied absolutely.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    # coarse composite Simpson only to set the absolute error budget
    m = 16
    xs = [a + (b - a) * i / m for i in range(m + 1)]
    fs = [f(x) for x in xs]
    h = (b - a) / m
    coarse = h / 3 * (fs[0] + fs[-1] + 4 * sum(fs[1:-1:2]) + 2 * sum(fs[2:-1:2]))
    budget = rel_tol * max(abs(coarse), 1.0e-300)
    if coarse == 0.0:
        budget = rel_tol

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6 * (f0 + 4 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        x1 = 0.5 * (x0 + x2)
        lm = 0.5 * (x0 + x1)
        rm = 0.5 * (x1 + x2)
        flm = f(lm)
        frm = f(rm)
        left = simpson(x0, x1, f0, flm, f1)
        right = simpson(x1, x2, f1, frm, f2)
        err = left + right - whole
        if abs(err) <= 15 * tol:
            return left + right + err / 15
        if depth >= _MAX_QUAD_DEPTH:
            raise ConvergenceFailure(
                f"quadrature subdivision limit reached on [{x0}, {x2}]"
            )
        half = 0.5 * tol
        return recurse(x0, x1, f0, flm, f1, left, half, depth + 1) + recurse(
            x1, x2, f1, frm, f2, right, half, depth + 1
        )

    fa, fmid, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fmid, fb)
    return sign * recurse(a, b, fa, fmid, fb, whole, budget, 0)


def find_root(f, bracket: RootBracket, tol: float, max_iter: int = _MAX_ROOT_ITER) -> float:
    """Hybrid secant/bisection root finder that never leaves the bracket.

    Returns x with ``|f(x)| <= tol`` or bracket width ``<= tol * max(1, |x|)``.
    A bisection step is forced whenever the interpolated step escapes the
    bracket or fails to halve it over two consecutive iterations.
    """
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    width_two_ago = hi - lo
    for iteration in range(max_iter):
        if f_hi != f_lo:
            x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        else:
            x = 0.5 * (lo + hi)
        stalled = iteration >= 2 and (hi - lo) > 0.5 * width_two_ago
        if not (lo < x < hi) or stalled:
            x = 0.5 * (lo + hi)
        width_two_ago = hi - lo
        fx = f(x)
        if abs(fx) <= tol or (hi - lo) <= tol * max(1.0, abs(x)):
            return x
        if f_lo * fx <= 0:
            hi, f_hi = x, fx
        else:
            lo, f_lo = x, fx
    raise ConvergenceFailure(f"root finder exceeded {max_iter} iterations")


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix with exact ``A[i,j] == A[j,i]`` storage."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix is not exactly symmetric")
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_bands(cls, diag, *off_bands) -> "SymmetricMatrix":
        """Build from the main diagonal plus upper off-diagonals 1, 2, ...

        Each band is mirrored, so symmetry holds exactly by construction.
        """
        n = len(diag)
        a = np.diag(np.asarray(diag, dtype=float))
        for k, band in enumerate(off_bands, start=1):
            band = np.asarray(band, dtype=float)[: n - k]
            a += np.diag(band, k) + np.diag(band, -k)
        return cls(a)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def _off_norm(a: np.ndarray) -> float:
    return math.sqrt(max(0.0, np.sum(a * a) - np.sum(np.diag(a) ** 2)))


def symmetric_eigen_smallest(m: SymmetricMatrix, tol: float) -> float:
    """Smallest eigenvalue by cyclic Jacobi rotations.

    Sweeps over all index pairs, rotating away off-diagonal entries, until
    the off-diagonal Frobenius norm falls below ``tol`` times the matrix
    norm.  Small pivots (harmless at the current sweep's scale) are skipped.
    """
    n = m.dimension
    if n > 1024:
        raise ValueError("dimension capped at 1024")
    a = m.entries.copy()
    if n == 1:
        return float(a[0, 0])
    norm = math.sqrt(np.sum(a * a))
    if norm == 0.0:
        return 0.0
    target = tol * norm
    for _ in range(_MAX_JACOBI_SWEEPS):
        off = _off_norm(a)
        if off <= target:
            return float(np.min(np.diag(a)))
        skip = off / (n * n)  # pivots below this cannot dominate the sweep
        for i in range(n - 1):
            for j in range(i + 1, n):
                apq = a[i, j]
                if abs(apq) <= skip:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                row_i = a[i, :].copy()
                row_j = a[j, :].copy()
                a[i, :] = c * row_i - s * row_j
                a[j, :] = s * row_i + c * row_j
                col_i = a[:, i].copy()
                col_j = a[:, j].copy()
                a[:, i] = c * col_i - s * col_j
                a[:, j] = s * col_i + c * col_j
                a[i, j] = 0.0
                a[j, i] = 0.0
    raise ConvergenceFailure("Jacobi sweeps did not reach the off-diagonal target")


def central_difference(f, x: float, h: float, order: int = 1) -> float:
    """Central finite difference of first or second order, O(h^2) accurate."""
    if h <= 0:
        raise ValueError("step h must be positive")
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    if order == 2:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    raise ValueError("order must be 1 or 2")
