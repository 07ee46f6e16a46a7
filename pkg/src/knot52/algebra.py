"""2x2 matrices, the SL(2,R) -> SU(1,1) conjugation, and group words.

Matrices carry arbitrary scalars (float, complex, or mpmath numbers), so the
same code runs in binary64 or in extended precision. Group words are
evaluated in any carrier that provides ``@``, ``inverse()`` and
``identity()``; both :class:`Matrix2x2` and the covering-group element in
:mod:`knot52.cover` qualify.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from knot52.errors import DegenerateAlpha, NonUnimodular

TOL_DET = 1e-9


@dataclass(frozen=True)
class Matrix2x2:
    a11: Any
    a12: Any
    a21: Any
    a22: Any

    @classmethod
    def identity(cls) -> Matrix2x2:
        return cls(1, 0, 0, 1)

    @classmethod
    def diag(cls, a, d) -> Matrix2x2:
        return cls(a, 0, 0, d)

    def entries(self) -> tuple:
        return (self.a11, self.a12, self.a21, self.a22)

    def map(self, fn: Callable) -> Matrix2x2:
        return Matrix2x2(*(fn(e) for e in self.entries()))

    def __matmul__(self, other: Matrix2x2) -> Matrix2x2:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return Matrix2x2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __sub__(self, other: Matrix2x2) -> Matrix2x2:
        return Matrix2x2(*(x - y for x, y in zip(self.entries(), other.entries())))

    def __add__(self, other: Matrix2x2) -> Matrix2x2:
        return Matrix2x2(*(x + y for x, y in zip(self.entries(), other.entries())))

    def scale(self, k) -> Matrix2x2:
        return self.map(lambda e: k * e)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def trace(self):
        return self.a11 + self.a22

    def inverse(self) -> Matrix2x2:
        # adjugate over the computed determinant, never assumed to be 1
        dt = self.det()
        return Matrix2x2(self.a22 / dt, -self.a12 / dt, -self.a21 / dt, self.a11 / dt)

    def max_abs(self) -> float:
        return float(max(abs(e) for e in self.entries()))

    def max_abs_diff(self, other: Matrix2x2) -> float:
        return (self - other).max_abs()

    def is_real(self) -> bool:
        return all(_imag(e) == 0 for e in self.entries())

    def is_su11(self, tol: float = TOL_DET) -> bool:
        a, b, c, d = self.entries()
        return (
            abs(d - a.conjugate()) <= tol * max(1.0, abs(a))
            and abs(c - b.conjugate()) <= tol * max(1.0, abs(b))
            and abs(abs(a) ** 2 - abs(b) ** 2 - 1) <= tol * max(1.0, abs(a) ** 2)
        )


def _imag(x) -> float:
    return getattr(x, "imag", 0)


def mat_mul(a: Matrix2x2, b: Matrix2x2) -> Matrix2x2:
    return a @ b


def to_su11(m: Matrix2x2, tol_det: float = TOL_DET) -> Matrix2x2:
    """Conjugate a real unimodular matrix into SU(1,1) by ``J m J^-1``.

    ``J = [[1, -i], [1, i]]``; the result is written out entrywise so the
    conjugate-pair structure holds exactly for real input.

    Raises
    ------
    NonUnimodular
        If ``|det m - 1| > tol_det``.
    """
    if not m.is_real():
        raise ValueError("to_su11 expects a real matrix")
    if abs(m.det() - 1) > tol_det:
        raise NonUnimodular(f"|det - 1| = {float(abs(m.det() - 1)):.3e} exceeds {tol_det:g}")
    a, b, c, d = (getattr(e, "real", e) for e in m.entries())
    alpha = ((a + d) + (b - c) * 1j) / 2
    beta = ((a - d) - (b + c) * 1j) / 2
    return Matrix2x2(alpha, beta, beta.conjugate(), alpha.conjugate())


def su11_params(u: Matrix2x2, tol: float = TOL_DET) -> tuple[complex, float]:
    """Return ``(gamma, omega)`` with ``gamma = beta/alpha`` and
    ``omega = arg(alpha)`` normalized to ``[-pi, pi)``."""
    alpha, beta = complex(u.a11), complex(u.a12)
    if abs(alpha) < 1 - tol:
        raise DegenerateAlpha(f"|alpha| = {abs(alpha):.17g} < 1")
    omega = cmath.phase(alpha)
    if omega >= math.pi:
        omega -= 2 * math.pi
    return beta / alpha, omega


def su11_from_params(gamma: complex, omega: float) -> Matrix2x2:
    alpha = cmath.exp(1j * omega) / math.sqrt(1 - abs(gamma) ** 2)
    beta = gamma * alpha
    return Matrix2x2(alpha, beta, beta.conjugate(), alpha.conjugate())


@dataclass(frozen=True)
class GroupWord:
    """A word in the free group on ``x`` and ``y``, stored fully expanded.

    ``letters`` is a tuple of ``(generator, exponent)`` pairs with
    exponent +1 or -1. :meth:`parse` reads the compact notation where an
    upper-case letter is the inverse generator, e.g. ``"xyXY"`` is the
    commutator ``x y x^-1 y^-1``.
    """

    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        for gen, exp in self.letters:
            if gen not in ("x", "y") or exp not in (1, -1):
                raise ValueError(f"bad letter ({gen!r}, {exp!r})")

    @classmethod
    def parse(cls, text: str) -> GroupWord:
        letters = []
        for ch in text:
            if ch in "xy":
                letters.append((ch, 1))
            elif ch in "XY":
                letters.append((ch.lower(), -1))
            elif not ch.isspace():
                raise ValueError(f"unknown letter {ch!r} in {text!r}")
        return cls(tuple(letters))

    @classmethod
    def power(cls, gen: str, n: int) -> GroupWord:
        return cls(((gen, 1 if n > 0 else -1),) * abs(n))

    def __add__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def __mul__(self, n: int) -> GroupWord:
        if n < 0:
            return self.inverse() * (-n)
        return GroupWord(self.letters * n)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(g if e == 1 else g.upper() for g, e in self.letters)

    def inverse(self) -> GroupWord:
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def exponent_sum(self, gen: str | None = None) -> int:
        return sum(e for g, e in self.letters if gen is None or g == gen)

    def split(self, k: int) -> tuple[GroupWord, GroupWord]:
        return GroupWord(self.letters[:k]), GroupWord(self.letters[k:])


# Two-bridge presentation <x, y | w x = y w> of the 5_2 knot group.
W = GroupWord.parse("xyXYxy")
W_STAR = GroupWord.parse("yxYXyx")
LONGITUDE = GroupWord.power("x", -4) + W_STAR + W
RELATOR_LEFT = W + GroupWord.parse("x")
RELATOR_RIGHT = GroupWord.parse("y") + W


@dataclass(frozen=True)
class Assignment:
    """Images of the two generators in some group carrier."""

    value_x: Any
    value_y: Any

    def lookup(self, gen: str):
        return self.value_x if gen == "x" else self.value_y


def word_evaluate(word: GroupWord | Iterable[tuple[str, int]], assignment: Assignment):
    """Multiply the assigned letters left to right.

    The empty word evaluates to the carrier identity.
    """
    letters = word.letters if isinstance(word, GroupWord) else tuple(word)
    images = {
        ("x", 1): assignment.value_x,
        ("y", 1): assignment.value_y,
    }
    needed = {(g, e) for g, e in letters if e == -1}
    for g, _ in needed:
        images[(g, -1)] = assignment.lookup(g).inverse()
    result = assignment.value_x.identity()
    for letter in letters:
        result = result @ images[letter]
    return result
