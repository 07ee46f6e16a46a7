"""The universal covering group of SL(2,R) in (gamma, omega) coordinates.

An element is a pair ``(gamma, omega)`` with ``|gamma| < 1`` and real,
unbounded ``omega``. It projects to the SU(1,1) matrix with
``alpha = e^{i omega} / sqrt(1 - |gamma|^2)`` and ``beta = gamma alpha``;
the kernel of the projection is ``{(0, 2 m pi)}``. Products never reduce
``omega`` modulo ``2 pi``; tracking the winding is the whole point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from knot52.algebra import (
    LONGITUDE,
    Assignment,
    GroupWord,
    Matrix2x2,
    su11_from_params,
    su11_params,
    to_su11,
    word_evaluate,
)
from knot52.errors import DiskBoundaryOverflow
from knot52.holonomy import Slope, SlopeCertificate, eigen_A, eigen_B
from knot52.rep import build_rep

DISK_MARGIN = 1e-14
WOOD_WINDOW = 1.5 * math.pi


@dataclass(frozen=True)
class CoverElement:
    gamma: complex
    omega: float

    def __post_init__(self):
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "omega", float(self.omega))
        if not abs(self.gamma) < 1 - DISK_MARGIN:
            raise DiskBoundaryOverflow(f"|gamma| = {abs(self.gamma):.17g} is not inside the unit disk")

    @classmethod
    def identity(cls) -> CoverElement:
        return cls(0j, 0.0)

    @classmethod
    def from_su11(cls, u: Matrix2x2) -> CoverElement:
        return cls(*su11_params(u))

    def __matmul__(self, other: CoverElement) -> CoverElement:
        return cover_mul(self, other)

    def inverse(self) -> CoverElement:
        return cover_inv(self)

    def project(self) -> Matrix2x2:
        return project(self)

    def shift(self, omega: float) -> CoverElement:
        return CoverElement(self.gamma, self.omega + omega)

    def distance(self, other: CoverElement) -> float:
        return max(abs(self.gamma - other.gamma), abs(self.omega - other.omega))


def cover_mul(a: CoverElement, b: CoverElement) -> CoverElement:
    e = cmath.exp(-2j * b.omega)
    num = 1 + a.gamma * b.gamma.conjugate() * e
    den = 1 + a.gamma.conjugate() * b.gamma / e
    # num and den are conjugate with positive real part for |gamma| < 1,
    # so the principal log never meets its branch cut
    if not (num.real > 0 and den.real > 0):
        raise DiskBoundaryOverflow(f"log argument left the right half-plane: {num!r}, {den!r}")
    gamma = (b.gamma + a.gamma * e) / num
    if not abs(gamma) < 1 - DISK_MARGIN:
        raise DiskBoundaryOverflow(f"product has |gamma| = {abs(gamma):.17g}")
    omega = a.omega + b.omega + (cmath.log(num / den) / 2j).real
    return CoverElement(gamma, omega)


def cover_inv(a: CoverElement) -> CoverElement:
    return CoverElement(-a.gamma * cmath.exp(2j * a.omega), -a.omega)


def project(a: CoverElement) -> Matrix2x2:
    return su11_from_params(a.gamma, a.omega)


def kernel_element(m: int) -> CoverElement:
    return CoverElement(0j, 2 * math.pi * m)


def cover_pow(a: CoverElement, n: int) -> CoverElement:
    if n < 0:
        a, n = a.inverse(), -n
    result = CoverElement.identity()
    while n:
        if n & 1:
            result = result @ a
        n >>= 1
        if n:
            a = a @ a
    return result


@dataclass(frozen=True)
class CoverAssignment:
    lift_x: CoverElement
    lift_y: CoverElement
    twist: int = 0

    def assignment(self) -> Assignment:
        return Assignment(self.lift_x, self.lift_y)


def lift_rep(s: float, twist: int = 0) -> CoverAssignment:
    """Lift the generator images of ``rho_s`` to the covering group.

    Each generator gets the lift with ``omega`` in ``[-pi, pi)``; for ``x``
    that is ``((t-1)/(t+1), 0)``. A nonzero ``twist`` multiplies both lifts
    by the central element ``(0, -2 pi twist)``, the image of a meridian
    under a homomorphism to the kernel (``x`` and ``y`` are conjugate, so it
    must agree on both).
    """
    rep = build_rep(s)
    lx = CoverElement.from_su11(to_su11(rep.X))
    ly = CoverElement.from_su11(to_su11(rep.Y))
    if twist:
        lx, ly = lx.shift(-2 * math.pi * twist), ly.shift(-2 * math.pi * twist)
    return CoverAssignment(lx, ly, twist)


def lifted_word(word: GroupWord, s: float, twist: int = 0) -> CoverElement:
    return word_evaluate(word, lift_rep(s, twist).assignment())


def lifted_longitude(s: float, twist: int = 0) -> CoverElement:
    return lifted_word(LONGITUDE, s, twist)


def longitude_gamma(s: float) -> float:
    b2 = eigen_B(s) ** 2
    return (b2 - 1) / (b2 + 1)


def interleave(p: int, q: int, log_a: float, log_b: float) -> list[str]:
    """Order the factors of ``x^p lambda^q`` so partial products stay small.

    Greedily appends whichever factor moves ``i log_a + j log_b`` closest to
    zero. ``x`` and ``lambda`` commute, so every ordering is the same group
    element.
    """
    step_x, step_l = (1 if p > 0 else -1), (1 if q > 0 else -1)
    dx, dl = step_x * log_a, step_l * log_b
    left_x, left_l = abs(p), abs(q)
    acc = 0.0
    order = []
    while left_x or left_l:
        take_x = left_x and (not left_l or abs(acc + dx) <= abs(acc + dl))
        if take_x:
            order.append("x")
            left_x -= 1
            acc += dx
        else:
            order.append("l")
            left_l -= 1
            acc += dl
    return order


def normalize_lift(lift: CoverAssignment) -> CoverAssignment:
    """Remove the meridian twist so the lift of ``x`` has ``omega = 0``.

    Reads ``l`` off ``omega(x) = 2 l pi`` and multiplies both generators by
    ``(0, -2 l pi)``. Words with zero total exponent sum are unaffected.
    """
    ell = round(lift.lift_x.omega / (2 * math.pi))
    shift = -2 * math.pi * ell
    return CoverAssignment(lift.lift_x.shift(shift), lift.lift_y.shift(shift), lift.twist + ell)


def _filling(lift: CoverAssignment, s: float, slope: Slope) -> CoverElement:
    lam = word_evaluate(LONGITUDE, lift.assignment())
    factors = {
        "x": lift.lift_x if slope.p > 0 else lift.lift_x.inverse(),
        "l": lam if slope.q > 0 else lam.inverse(),
    }
    result = CoverElement.identity()
    for key in interleave(slope.p, slope.q, math.log(eigen_A(s)), math.log(eigen_B(s))):
        result = result @ factors[key]
    return result


def lifted_filling(s: float, slope: Slope, twist: int = 0) -> CoverElement:
    """The lift of ``x^p lambda^q``; it is ``(0, 0)`` at a solution of ``g(s) = p/q``.

    Computing ``x^p`` on its own drives ``|gamma|`` to 1 in binary64 once
    ``A^(2p)`` passes about 1e16, so the factors are interleaved instead.
    """
    return _filling(lift_rep(s, twist), s, slope)


@dataclass
class LiftCheck:
    """Lifted peripheral data at one ``s``.

    The longitude fields come from the lift with the requested twist; the
    filling fields come from the normalized lift, as the filling argument
    requires. ``raw_filling_omega`` keeps the unnormalized value, which is
    ``-2 pi twist p`` at a solution.
    """

    s: float
    slope: Slope
    twist: int
    longitude_gamma: complex
    longitude_omega: float
    longitude_gamma_expected: float
    in_wood_window: bool
    filling_gamma: complex
    filling_omega: float
    raw_filling_omega: float

    @property
    def longitude_gamma_residual(self) -> float:
        return abs(self.longitude_gamma - self.longitude_gamma_expected)


def check_lift(s: float, slope: Slope, twist: int = 0) -> LiftCheck:
    lift = lift_rep(s, twist)
    lam = word_evaluate(LONGITUDE, lift.assignment())
    fill = _filling(normalize_lift(lift), s, slope)
    return LiftCheck(
        s=s,
        slope=slope,
        twist=twist,
        longitude_gamma=lam.gamma,
        longitude_omega=lam.omega,
        longitude_gamma_expected=longitude_gamma(s),
        in_wood_window=abs(lam.omega) < WOOD_WINDOW,
        filling_gamma=fill.gamma,
        filling_omega=fill.omega,
        raw_filling_omega=_filling(lift, s, slope).omega,
    )


def attach_lift(cert: SlopeCertificate, twist: int = 0) -> SlopeCertificate:
    fill = lifted_filling(cert.s_star, cert.slope, twist)
    return replace(cert, lift_omega_residual=abs(fill.omega), lift_gamma_residual=abs(fill.gamma))
