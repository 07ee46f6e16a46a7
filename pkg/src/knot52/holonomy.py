"""Holonomy eigenvalues, the slope function g, its limits, and the slope solver.

``A_s = sqrt t`` and ``B_s`` are the (1,1)-entries of the diagonal images of
the meridian and the longitude. ``g(s) = -log B_s / log A_s``, and an
``r = p/q`` filling factors through ``rho_s`` exactly when ``A^p B^q = 1``,
i.e. when ``g(s) = r``.

All closed forms accept numpy arrays as well as scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from knot52.errors import (
    BracketNotFound,
    GridTooSmall,
    NonPositiveParameter,
    SlopeOutOfRange,
    ToleranceNotReached,
)
from knot52.rep import relation_residual

SCAN_POINTS = 512
SCAN_RANGE = (1e-8, 1e8)
MIN_LIMIT_POINTS = 16


def _as_s(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~(arr > 0)):
        raise NonPositiveParameter(f"s must be positive, got {s!r}")
    return arr


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


@dataclass(frozen=True)
class _Pieces:
    s: np.ndarray
    u: np.ndarray  # sqrt(s^2 + 4)
    delta: np.ndarray  # u - s, never formed by subtraction
    T: np.ndarray
    t: np.ndarray
    inv_t: np.ndarray


def _pieces(s) -> _Pieces:
    s = _as_s(s)
    u = np.sqrt(s * s + 4)
    delta = 4 / (u + s)
    T = (2 + 3 * s + 2 * s * s + u) / (2 * s)
    q = np.sqrt(T * T - 4)
    return _Pieces(s, u, delta, T, (T + q) / 2, 2 / (T + q))


def trace_root(s):
    """``t``, the larger root of ``t + 1/t = T``; vectorized."""
    return _out(_pieces(s).t, s)


def eigen_A(s):
    return _out(np.sqrt(_pieces(s).t), s)


def eigen_B(s):
    """Longitude eigenvalue from its closed form, evaluated without cancellation.

    The closed form ``N / ((t-1)^2 t^5)`` is split into two positive terms

        s/(t-1) * F1/((t-1) t) * (F3/t^2)^2 + ((1+s-t)/(t-1))^2 * (F2/t)^2

    with ``F1 = 1-(2+s)t+t^2``, ``F2 = s-(1+s)^2 t+s t^2`` and
    ``F3 = s-(2+2s+s^2)t+(1+s)t^2``. Using ``t + 1/t = T`` each factor has a
    form free of subtraction between large terms:

        F1/t = T-2-s = (2 + delta)/(2s)
        F2/t = sT-(1+s)^2 = delta/2
        F3/t = (s+1+u)/2 + (2+u)/(2s) - 1/t
        t-s-1 = 1 + (2+delta)/(2s) - 1/t

    where ``u = sqrt(s^2+4)`` and ``delta = u - s = 4/(u+s)``. The literal
    polynomial form (:func:`eigen_B_literal`) loses about ``log10(s)`` digits
    for large ``s``.
    """
    p = _pieces(s)
    a = (2 + p.delta) / (2 * p.s)
    c = 0.5 * (p.s + 1 + p.u) + (2 + p.u) / (2 * p.s) - p.inv_t
    f4 = 1 + a - p.inv_t
    tm1 = p.t - 1
    first = p.s * a * c * c / (tm1 * tm1 * p.t * p.t)
    second = (f4 * p.delta / (2 * tm1)) ** 2
    return _out(first + second, s)


def longitude_numerator(s, t):
    """``N`` such that ``B = N / ((t-1)^2 t^5)``, verbatim polynomial in ``s, t``."""
    return (
        s * (1 - (2 + s) * t + t**2) * (s - (2 + 2 * s + s**2) * t + (1 + s) * t**2) ** 2
        + (1 + s - t) ** 2 * t**3 * (s - (1 + s) ** 2 * t + s * t**2) ** 2
    )


def eigen_B_literal(s):
    p = _pieces(s)
    return _out(longitude_numerator(p.s, p.t) / ((p.t - 1) ** 2 * p.t**5), s)


def excess(s):
    """``t - s - 2``, which is positive and tends to 0 as ``s -> inf``."""
    p = _pieces(s)
    naive = p.t - p.s - 2
    # For s >= 1: t-s-2 = (q^2 - m^2) / (2 (q + m)) with q = sqrt(T^2-4),
    # m = 2s+4-T > 0, and q^2 - m^2 = 2 delta + (8 + 4 delta)/s.
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.sqrt(p.T * p.T - 4)
        m = p.s + 2.5 - (2 + p.u) / (2 * p.s)
        stable = (2 * p.delta + (8 + 4 * p.delta) / p.s) / (2 * (q + m))
    return _out(np.where(p.s >= 1, stable, naive), s)


def g(s):
    p = _pieces(s)
    return _out(-2 * np.log(eigen_B(p.s)) / np.log(p.t), s)


@dataclass(frozen=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        if self.q == 0:
            raise ValueError("slope denominator must be nonzero")
        fr = Fraction(self.p, self.q)
        object.__setattr__(self, "p", fr.numerator)
        object.__setattr__(self, "q", fr.denominator)

    @classmethod
    def parse(cls, text: str) -> Slope:
        num, sep, den = text.strip().partition("/")
        try:
            return cls(int(num), int(den) if sep else 1)
        except ValueError as exc:
            raise ValueError(f"cannot parse slope {text!r}: {exc}") from None

    @property
    def value(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def filling_residual(s, slope: Slope) -> float:
    """``|A^p B^q - 1|``, formed in log space so large exponents cannot overflow."""
    p = _pieces(s)
    log_a = 0.5 * np.log(p.t)
    log_b = np.log(eigen_B(p.s))
    return _out(np.abs(np.expm1(slope.p * log_a + slope.q * log_b)), s)


def filling_log(s, slope: Slope) -> float:
    """``p log A + q log B``; zero exactly at a filling."""
    p = _pieces(s)
    return _out(slope.p * 0.5 * np.log(p.t) + slope.q * np.log(eigen_B(p.s)), s)


@dataclass
class LimitReport:
    name: str
    direction: str  # "0+", "inf" or "both"
    grid: list[float]
    values: list[float]
    target: float
    tolerance: float
    converged: bool
    note: str = ""


def _tail_converges(dist: np.ndarray, tol: float) -> bool:
    """Last three distances each beat the fourth-from-last; the final one is within tol."""
    return bool(np.all(np.isfinite(dist)) and np.all(dist[-3:] < dist[-4]) and dist[-1] <= tol)


def _report(name, direction, grid, values, target, tol, extra_ok=True, note="",
            dist=None) -> LimitReport:
    values = np.asarray(values, dtype=float)
    if dist is None:
        dist = np.abs(values - target)
    ok = _tail_converges(np.abs(dist), tol) and bool(extra_ok)
    return LimitReport(name, direction, [float(x) for x in grid],
                       [float(v) for v in values], target, tol, ok, note)


def limit_grids(points: int = MIN_LIMIT_POINTS, decades: float = 8.0):
    """Descending grid toward 0 and ascending grid toward infinity."""
    if points < MIN_LIMIT_POINTS:
        raise GridTooSmall(f"need at least {MIN_LIMIT_POINTS} points per direction, got {points}")
    to_zero = np.logspace(-1, -decades, points)
    return to_zero, 1 / to_zero


def limit_suite(points: int = MIN_LIMIT_POINTS, tol: float = 1e-3,
                tol_slow: float = 1e-2) -> list[LimitReport]:
    """Evaluate the nine boundary limits of the representation family."""
    zero, inf = limit_grids(points)
    pz, pi = _pieces(zero), _pieces(inf)
    ex = excess(inf)
    g_zero, g_inf = g(zero), g(inf)
    return [
        _report("t -> inf (tracked as 1/t -> 0)", "0+", zero, pz.inv_t, 0.0, tol),
        _report("s t -> 2", "0+", zero, pz.s * pz.t, 2.0, tol),
        _report("t - s -> 2, with t - s > 2", "inf", inf, 2 + ex, 2.0, tol,
                extra_ok=np.all(ex > 0), dist=ex),
        _report("s / t -> 1", "inf", inf, pi.s / pi.t, 1.0, tol),
        _report("s (t - s - 2) -> 0", "inf", inf, pi.s * ex, 0.0, tol),
        _report("t (t - s - 2) -> 0", "inf", inf, pi.t * ex, 0.0, tol),
        _report("B_s -> 1", "0+", zero, eigen_B(zero), 1.0, tol),
        _report("N t^-5 -> 1", "inf", inf, eigen_B(inf) * (pi.t - 1) ** 2, 1.0, tol_slow),
        _report("g -> 0 at 0+ and g -> 4 at inf", "both", zero,
                np.maximum(np.abs(g_zero), np.abs(4 - g_inf)), 0.0, tol,
                note="value k is max(|g(s_k)|, |4 - g(1/s_k)|)"),
    ]


@dataclass
class SlopeCertificate:
    slope: Slope
    s_star: float
    g_residual: float
    filling_residual: float
    relation_residual: float
    bracket: tuple[float, float]
    iterations: int
    brackets: list[tuple[float, float]] = field(default_factory=list)
    lift_omega_residual: float | None = None
    lift_gamma_residual: float | None = None


def scan_brackets(r: float, points: int = SCAN_POINTS,
                  s_range: tuple[float, float] = SCAN_RANGE) -> list[tuple[float, float]]:
    """All adjacent pairs of a log-spaced grid on which ``g - r`` changes sign."""
    grid = np.logspace(math.log10(s_range[0]), math.log10(s_range[1]), points)
    f = g(grid) - r
    sign = np.sign(f)
    idx = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    return [(float(grid[i]), float(grid[i + 1])) for i in idx]


def bisect(fn, lo: float, hi: float, tol: float, max_iter: int = 200):
    """Bisect a sign change of ``fn`` on ``[lo, hi]``.

    Returns ``(x, |fn(x)|, iterations)`` once ``|fn(x)| <= tol`` or the
    bracket stops shrinking in floating point, whichever comes first.
    """
    f_lo = fn(lo)
    best = (lo, abs(f_lo))
    f_hi = fn(hi)
    if abs(f_hi) < best[1]:
        best = (hi, abs(f_hi))
    it = 0
    while best[1] > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        it += 1
        f_mid = fn(mid)
        if abs(f_mid) < best[1]:
            best = (mid, abs(f_mid))
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return best[0], best[1], it


def solve_slope(slope: Slope, tol: float = 1e-12, points: int = SCAN_POINTS,
                s_range: tuple[float, float] = SCAN_RANGE) -> SlopeCertificate:
    """Find ``s*`` with ``|g(s*) - p/q| <= tol``.

    Scans ``g`` on a log grid, bisects the sign change with the smallest
    ``s``, and records every bracket found. No monotonicity of ``g`` is
    assumed.
    """
    r = slope.value
    if not 0 < r < 4:
        raise SlopeOutOfRange(f"slope {slope} = {r:g} is outside the supported interval (0, 4)")
    brackets = scan_brackets(r, points, s_range)
    if not brackets:
        raise BracketNotFound(f"g - {slope} has no sign change on the scan grid")
    lo, hi = brackets[0]
    s_star, resid, iters = bisect(lambda s: g(s) - r, lo, hi, tol)
    if resid > tol:
        raise ToleranceNotReached(
            f"best |g(s) - {slope}| = {resid:.3e} at s = {s_star!r}; tolerance {tol:g} unattainable")
    return SlopeCertificate(
        slope=slope,
        s_star=s_star,
        g_residual=resid,
        filling_residual=filling_residual(s_star, slope),
        relation_residual=relation_residual(s_star),
        bracket=(lo, hi),
        iterations=iters,
        brackets=brackets,
    )
