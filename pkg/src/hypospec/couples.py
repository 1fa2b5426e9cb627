"""Membership tests for power function couples below a spectral ceiling.

A couple (f, g) of positive functions on (0, lam) is admissible for the
abstract commutator bound when the two-point expression

    ((f(x) - f(y)) / (x - y))^2
      + (f(x)^2 / (g(x) (lam - x)) + f(y)^2 / (g(y) (lam - y)))
        * ((g(x) - g(y)) / (x - y))

is <= 0 for all x != y in (0, lam).  This module instantiates
f = (lam - x)^alpha, g = (lam - x)^beta and certifies membership on a grid.
The grid verdict is a numerical certificate, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CoincidentPoints, DomainViolation, ValidationError

#: Absolute acceptance tolerance for scale-normalized residuals.
RESIDUAL_TOL = 1e-10

#: Relative margin excluded at the ceiling and around the diagonal.
EDGE_FRACTION = 1e-3


@dataclass(frozen=True)
class PowerCouple:
    """f(x) = (lam - x)^alpha, g(x) = (lam - x)^beta on the interval (0, lam)."""

    alpha: float
    beta: float
    lam: float

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ValidationError(f"lam = {self.lam} must be positive")

    def f(self, x):
        return (self.lam - x) ** self.alpha

    def g(self, x):
        return (self.lam - x) ** self.beta


@dataclass(frozen=True)
class MembershipResult:
    """Grid certificate for one couple: verdict plus the worst offending point."""

    accepted: bool
    worst_residual: float
    argmax: tuple[float, float]
    grid_points: int
    rejected_by_necessary_condition: bool = False

    @property
    def label(self) -> str:
        return "grid-verified" if self.accepted else "rejected"


def necessary_condition(alpha: float, beta: float) -> bool:
    """Necessary membership condition: beta >= 0 and alpha^2 <= 2*beta."""
    return beta >= 0.0 and alpha**2 <= 2.0 * beta


def couple_condition_residual(pc: PowerCouple, x: float, y: float) -> float:
    """Exact two-point expression; membership requires <= 0 for all x != y."""
    for p in (x, y):
        if not 0.0 < p < pc.lam:
            raise DomainViolation(f"point {p} outside (0, {pc.lam})")
    if x == y:
        raise CoincidentPoints(f"x = y = {x}")
    fx, fy = pc.f(x), pc.f(y)
    gx, gy = pc.g(x), pc.g(y)
    slope_f = (fx - fy) / (x - y)
    slope_g = (gx - gy) / (x - y)
    weight = fx**2 / (gx * (pc.lam - x)) + fy**2 / (gy * (pc.lam - y))
    return slope_f**2 + weight * slope_g


def diagonal_limit_form(pc: PowerCouple, x: float) -> float:
    """Coincident-point limit (f'/f)^2 + (2/(lam - x)) g'/g = (a^2 - 2b)/(lam - x)^2."""
    if not 0.0 < x < pc.lam:
        raise DomainViolation(f"point {x} outside (0, {pc.lam})")
    return (pc.alpha**2 - 2.0 * pc.beta) / (pc.lam - x) ** 2


def _grid_residuals(alpha: float, beta: float, grid_points: int):
    # Unit-ceiling evaluation: the residual is homogeneous of degree
    # 2*alpha - 2 in lam, so the verdict is scale-invariant and the
    # normalized expression stays O(1) on the interior grid.
    unit = PowerCouple(alpha, beta, 1.0)
    eps = EDGE_FRACTION
    xs = np.linspace(eps, 1.0 - eps, grid_points)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    off_diag = np.abs(X - Y) >= eps
    xo, yo = X[off_diag], Y[off_diag]
    fx, fy = unit.f(xo), unit.f(yo)
    gx, gy = unit.g(xo), unit.g(yo)
    slope_f = (fx - fy) / (xo - yo)
    slope_g = (gx - gy) / (xo - yo)
    weight = fx**2 / (gx * (1.0 - xo)) + fy**2 / (gy * (1.0 - yo))
    res_pairs = slope_f**2 + weight * slope_g
    res_diag = (alpha**2 - 2.0 * beta) / (1.0 - xs) ** 2
    return xs, xo, yo, res_pairs, res_diag


def check_membership(
    pc: PowerCouple,
    grid_points: int = 200,
    *,
    tol: float = RESIDUAL_TOL,
    apply_necessary_gate: bool = True,
) -> MembershipResult:
    """Grid membership certificate for a power couple.

    Evaluates the two-point expression on a uniform grid over the open
    square (excluding a thin diagonal band) plus the coincident-point limit
    form along the diagonal.  A couple failing the necessary exponent
    condition is rejected immediately unless the gate is disabled.
    """
    if grid_points < 10:
        raise ValidationError(f"grid_points = {grid_points} must be >= 10")
    if apply_necessary_gate and not necessary_condition(pc.alpha, pc.beta):
        return MembershipResult(False, float("inf"), (float("nan"), float("nan")),
                                grid_points, rejected_by_necessary_condition=True)
    xs, xo, yo, res_pairs, res_diag = _grid_residuals(pc.alpha, pc.beta, grid_points)
    i_pair = int(np.argmax(res_pairs))
    i_diag = int(np.argmax(res_diag))
    if res_pairs[i_pair] >= res_diag[i_diag]:
        worst = float(res_pairs[i_pair])
        arg = (float(xo[i_pair] * pc.lam), float(yo[i_pair] * pc.lam))
    else:
        worst = float(res_diag[i_diag])
        arg = (float(xs[i_diag] * pc.lam), float(xs[i_diag] * pc.lam))
    return MembershipResult(worst <= tol, worst, arg, grid_points)
