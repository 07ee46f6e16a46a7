"""Numerical certificates for SL(2,R) representations of the 5_2 knot group."""

__version__ = "0.1.0"

from knot52.algebra import (
    LONGITUDE,
    W,
    W_STAR,
    Assignment,
    GroupWord,
    Matrix2x2,
    su11_params,
    to_su11,
    word_evaluate,
)
from knot52.cover import CoverElement, cover_inv, cover_mul, lift_rep, lifted_filling, lifted_longitude, project
from knot52.holonomy import Slope, eigen_A, eigen_B, g, limit_suite, solve_slope
from knot52.rep import build_rep, param_T, param_t, relation_residual, riley_phi
