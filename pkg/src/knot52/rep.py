"""The one-parameter family of SL(2,R) representations of the 5_2 knot group.

For ``s > 0`` the trace parameter ``T`` is the root of the Riley polynomial
``phi(s, T) = s T^2 - (2s^2+3s+2) T + s^3+3s^2+4s+3`` given in closed form,
and ``t`` is the larger root of ``t + 1/t = T``. The generators map to

    x -> diag(sqrt t, 1/sqrt t)
    y -> [[(t-s-1)/d, s/d^2 - 1], [-s, (s+1-1/t)/d]],   d = sqrt t - 1/sqrt t.

Binary64 is the default. Passing ``dps`` evaluates the matrices and the
word products with mpmath at that many decimal digits and converts the
result back to floats; the longitude word is badly conditioned near the ends
of ``s in [1e-6, 1e6]`` and needs it there.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass

import mpmath

from knot52.algebra import (
    LONGITUDE,
    RELATOR_LEFT,
    RELATOR_RIGHT,
    Assignment,
    GroupWord,
    Matrix2x2,
    word_evaluate,
)
from knot52.errors import NonPositiveParameter

EXTENDED_DPS = 34


def _check_s(s) -> None:
    if not s > 0:
        raise NonPositiveParameter(f"s must be positive, got {s!r}")


def _precision(dps: int | None):
    return mpmath.workdps(dps) if dps else nullcontext()


def _lift_scalar(s, dps: int | None):
    return mpmath.mpf(s) if dps else float(s)


def _sqrt(x):
    return mpmath.sqrt(x) if isinstance(x, mpmath.mpf) else math.sqrt(x)


def _T(s):
    return (2 + 3 * s + 2 * s**2 + _sqrt(s**2 + 4)) / (2 * s)


def _t(T):
    return (T + _sqrt(T**2 - 4)) / 2


def param_T(s: float) -> float:
    _check_s(s)
    return _T(float(s))


def param_t(s: float) -> float:
    _check_s(s)
    return _t(_T(float(s)))


def riley_phi(s: float, T: float) -> float:
    return s * T**2 - (2 * s**2 + 3 * s + 2) * T + s**3 + 3 * s**2 + 4 * s + 3


@dataclass(frozen=True)
class RepParams:
    s: float
    T: float
    t: float

    @classmethod
    def from_s(cls, s: float) -> RepParams:
        _check_s(s)
        T = _T(float(s))
        t = _t(T)
        assert T > 4 and t > 3, (s, T, t)
        return cls(float(s), T, t)

    @property
    def phi(self) -> float:
        return riley_phi(self.s, self.T)

    @property
    def phi_bound(self) -> float:
        return 1e-9 * max(1.0, self.s**3)


@dataclass(frozen=True)
class RepValue:
    X: Matrix2x2
    Y: Matrix2x2
    params: RepParams

    def assignment(self) -> Assignment:
        return Assignment(self.X, self.Y)


def _generators(s, t) -> tuple[Matrix2x2, Matrix2x2]:
    r = _sqrt(t)
    d = r - 1 / r
    X = Matrix2x2.diag(r, 1 / r)
    Y = Matrix2x2((t - s - 1) / d, s / d**2 - 1, -s, (s + 1 - 1 / t) / d)
    return X, Y


def build_rep(s: float, t: float | None = None) -> RepValue:
    """Binary64 images of the generators.

    ``t`` overrides the constrained value; it exists so tests can break the
    Riley constraint on purpose and watch the relation fail.
    """
    params = RepParams.from_s(s)
    if t is not None:
        params = RepParams(params.s, t + 1 / t, float(t))
    X, Y = _generators(params.s, params.t)
    return RepValue(X, Y, params)


def _evaluate(word: GroupWord, s, t=None, dps: int | None = None) -> Matrix2x2:
    _check_s(s)
    with _precision(dps):
        sv = _lift_scalar(s, dps)
        tv = _t(_T(sv)) if t is None else _lift_scalar(t, dps)
        X, Y = _generators(sv, tv)
        m = word_evaluate(word, Assignment(X, Y))
        return m.map(float)


def rho(word: GroupWord, s: float, dps: int | None = None) -> Matrix2x2:
    """``rho_s(word)`` as a binary64 matrix."""
    return _evaluate(word, s, dps=dps)


def normalized_diff(a: Matrix2x2, b: Matrix2x2) -> float:
    # entries grow like powers of t, so compare relative to the largest one
    return a.max_abs_diff(b) / max(1.0, a.max_abs(), b.max_abs())


def relation_residual(s: float, t: float | None = None, dps: int | None = None) -> float:
    """``||rho(wx) - rho(yw)||_max``, divided by the largest entry when that exceeds 1."""
    left = _evaluate(RELATOR_LEFT, s, t, dps)
    right = _evaluate(RELATOR_RIGHT, s, t, dps)
    return normalized_diff(left, right)


def longitude_matrix(s: float, dps: int | None = None) -> Matrix2x2:
    return _evaluate(LONGITUDE, s, dps=dps)


def offdiag_relative(m: Matrix2x2) -> float:
    return max(abs(m.a12), abs(m.a21)) / m.max_abs()


def nonabelian_residual(s: float) -> float:
    rep = build_rep(s)
    return (rep.X @ rep.Y).max_abs_diff(rep.Y @ rep.X)
