"""Universal eigenvalue bound checks for the degenerate operator family.

All operations here are pure arithmetic on an ordered positive eigenvalue
sequence.  They *report* (lhs, rhs, slack, satisfied) and never assert:
an arbitrary input sequence need not be a spectrum, so a violated bound is
a legitimate outcome, not an error.

Index convention: ``k`` is 1-based and the sums run over the first ``k``
eigenvalues, with ``lambda_{k+1} = seq[k]`` in 0-based storage.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AdmissibilityViolation,
    GammaBelowOne,
    HypothesisViolation,
    InsufficientLength,
    MonotonicityViolation,
    NegativeDiscriminant,
    NegativeEntry,
    ValidationError,
    ZeroBaseNegativeExponent,
    ZeroGapWithNonpositiveExponent,
)

#: Default tolerances for the satisfied verdict (double-precision rounding only).
DEFAULT_TOL_REL = 1e-12
DEFAULT_TOL_ABS = 1e-14


class InequalityId(str, enum.Enum):
    """Stable identifiers for every reported inequality (CSV ``inequality`` column)."""

    THM_1_4 = "THM_1_4"
    YANG1_1_5 = "YANG1_1_5"
    PPW_1_6 = "PPW_1_6"
    YANG2_1_7 = "YANG2_1_7"
    THM_1_8 = "THM_1_8"
    COR_1_9 = "COR_1_9"
    COR_1_10 = "COR_1_10"
    COR_1_11 = "COR_1_11"
    COR_1_12 = "COR_1_12"
    LEMMA_2_3 = "LEMMA_2_3"
    LEMMA_2_4_INEQ = "LEMMA_2_4_INEQ"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


class BoundFamily(str, enum.Enum):
    """Which operator family a quadratic gap bound is extracted from."""

    DIRICHLET = "DIRICHLET"
    CLAMPED = "CLAMPED"


@dataclass(frozen=True)
class EigenSequence:
    """Ordered positive eigenvalues, the input to every bound check."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) == 0:
            raise ValidationError("eigenvalue sequence is empty")
        if not self.values[0] > 0.0:
            raise ValidationError(f"lambda_1 = {self.values[0]} must be positive")
        for a, b in zip(self.values, self.values[1:]):
            if b < a:
                raise ValidationError("eigenvalue sequence must be nondecreasing")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]


def as_eigen_sequence(seq: EigenSequence | Iterable[float]) -> EigenSequence:
    if isinstance(seq, EigenSequence):
        return seq
    return EigenSequence(tuple(float(v) for v in seq))


@dataclass(frozen=True)
class ExponentPair:
    """Exponents (alpha, beta) of a power weight; admissible iff alpha^2 <= 2*beta."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if self.beta < 0.0:
            raise ValidationError(f"beta = {self.beta} must be nonnegative")

    @property
    def admissible(self) -> bool:
        return self.alpha**2 <= 2.0 * self.beta

    def require_admissible(self) -> None:
        if not self.admissible:
            raise AdmissibilityViolation(
                f"alpha^2 = {self.alpha ** 2} exceeds 2*beta = {2.0 * self.beta}"
            )


@dataclass(frozen=True)
class BoundReport:
    """One inequality evaluation: both sides, slack = rhs - lhs, verdict.

    ``satisfied`` is equivalent to ``slack >= -(tol_abs + tol_rel*|rhs|)``
    with the tolerances recorded here.
    """

    inequality_id: InequalityId
    k: int
    n: int | None
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    alpha: float | None = None
    beta: float | None = None
    proxy: bool = False
    tol_rel: float = DEFAULT_TOL_REL
    tol_abs: float = DEFAULT_TOL_ABS
    extra: dict = field(default_factory=dict, compare=False)

    def relabel(self, *, proxy: bool | None = None) -> "BoundReport":
        if proxy is None:
            return self
        return BoundReport(
            self.inequality_id, self.k, self.n, self.lhs, self.rhs, self.slack,
            self.satisfied, self.alpha, self.beta, proxy, self.tol_rel,
            self.tol_abs, dict(self.extra),
        )


def _verdict(lhs: float, rhs: float, tol_rel: float, tol_abs: float) -> tuple[float, bool]:
    slack = rhs - lhs
    return slack, slack >= -(tol_abs + tol_rel * abs(rhs))


def _make_report(
    inequality_id: InequalityId,
    k: int,
    n: int | None,
    lhs: float,
    rhs: float,
    tol_rel: float,
    tol_abs: float,
    alpha: float | None = None,
    beta: float | None = None,
) -> BoundReport:
    slack, ok = _verdict(lhs, rhs, tol_rel, tol_abs)
    return BoundReport(inequality_id, k, n, lhs, rhs, slack, ok,
                       alpha=alpha, beta=beta, tol_rel=tol_rel, tol_abs=tol_abs)


def _require_length(seq: EigenSequence, k: int, needed: int) -> None:
    if k < 1:
        raise ValidationError(f"k = {k} must be >= 1")
    if len(seq) < needed:
        raise InsufficientLength(
            f"need at least {needed} eigenvalues for k = {k}, got {len(seq)}"
        )


def _require_positive_n(n: int) -> None:
    if n < 1:
        raise ValidationError(f"n = {n} must be a positive integer")


def gap_powers(seq: EigenSequence | Sequence[float], k: int, exponent: float) -> list[float]:
    """Powers of the spectral gaps, ``[(lambda_{k+1} - lambda_i)^e for i = 1..k]``.

    ``0^e`` is 0 for e > 0; a zero gap with e <= 0 is an error because the
    value is undefined (e < 0) or ambiguous (e = 0) at the top of the window.
    """
    seq = as_eigen_sequence(seq)
    _require_length(seq, k, k + 1)
    top = seq[k]
    gaps = [top - seq[i] for i in range(k)]
    if exponent <= 0.0 and gaps[-1] == 0.0:
        raise ZeroGapWithNonpositiveExponent(
            f"lambda_{k + 1} = lambda_{k} = {top} with exponent {exponent}"
        )
    return [0.0 if (g == 0.0 and exponent > 0.0) else g**exponent for g in gaps]


def check_dirichlet_bound(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    ep: ExponentPair,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """General two-exponent gap bound for the second-order Dirichlet spectrum.

    lhs = sum_i g_i^alpha,
    rhs = sqrt(2/n) * sqrt(sum_i g_i^beta * sum_i g_i^(2a-b-1) * lambda_i),
    with g_i = lambda_{k+1} - lambda_i.
    """
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    ep.require_admissible()
    ga = gap_powers(seq, k, ep.alpha)
    gb = gap_powers(seq, k, ep.beta)
    gc = gap_powers(seq, k, 2.0 * ep.alpha - ep.beta - 1.0)
    lhs = math.fsum(ga)
    rhs = math.sqrt(2.0 / n) * math.sqrt(
        math.fsum(gb) * math.fsum(c * seq[i] for i, c in enumerate(gc))
    )
    return _make_report(InequalityId.THM_1_4, k, n, lhs, rhs, tol_rel, tol_abs,
                        alpha=ep.alpha, beta=ep.beta)


def check_yang_first(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Quadratic-in-gaps bound: sum g_i^2 <= (2/n) sum g_i lambda_i."""
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    g = gap_powers(seq, k, 1.0)
    lhs = math.fsum(gi**2 for gi in g)
    rhs = (2.0 / n) * math.fsum(gi * seq[i] for i, gi in enumerate(g))
    return _make_report(InequalityId.YANG1_1_5, k, n, lhs, rhs, tol_rel, tol_abs)


def check_ppw_gap(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Gap bound: lambda_{k+1} - lambda_k <= (2/(n k)) sum lambda_i."""
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    _require_length(seq, k, k + 1)
    lhs = seq[k] - seq[k - 1]
    rhs = (2.0 / (n * k)) * math.fsum(seq[i] for i in range(k))
    return _make_report(InequalityId.PPW_1_6, k, n, lhs, rhs, tol_rel, tol_abs)


def check_yang_second(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Next-eigenvalue bound: lambda_{k+1} <= (1 + 2/n) * mean(lambda_1..lambda_k)."""
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    _require_length(seq, k, k + 1)
    lhs = seq[k]
    rhs = (1.0 + 2.0 / n) * math.fsum(seq[i] for i in range(k)) / k
    return _make_report(InequalityId.YANG2_1_7, k, n, lhs, rhs, tol_rel, tol_abs)


def check_clamped_bound(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    ep: ExponentPair,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Two-exponent gap bound for the fourth-order spectrum.

    rhs = (2 sqrt(n+1)/n) * [sum g^beta sqrt(lambda)]^(1/2)
                          * [sum g^(2a-b-1) sqrt(lambda)]^(1/2).
    The (2, 2) instance gets its own identifier.
    """
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    ep.require_admissible()
    ga = gap_powers(seq, k, ep.alpha)
    gb = gap_powers(seq, k, ep.beta)
    gc = gap_powers(seq, k, 2.0 * ep.alpha - ep.beta - 1.0)
    lhs = math.fsum(ga)
    sb = math.fsum(b * math.sqrt(seq[i]) for i, b in enumerate(gb))
    sc = math.fsum(c * math.sqrt(seq[i]) for i, c in enumerate(gc))
    rhs = (2.0 * math.sqrt(n + 1.0) / n) * math.sqrt(sb) * math.sqrt(sc)
    ident = InequalityId.COR_1_9 if (ep.alpha, ep.beta) == (2.0, 2.0) else InequalityId.THM_1_8
    return _make_report(ident, k, n, lhs, rhs, tol_rel, tol_abs,
                        alpha=ep.alpha, beta=ep.beta)


def check_clamped_chebyshev_form(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    ep: ExponentPair,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Chebyshev-decoupled variant of the fourth-order bound.

    rhs = (2 sqrt(n+1)/n) * [sum g^beta]^(1/2) * [sum g^(2a-b-1) lambda]^(1/2).
    The (2, 2) instance gets its own identifier.
    """
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    ep.require_admissible()
    ga = gap_powers(seq, k, ep.alpha)
    gb = gap_powers(seq, k, ep.beta)
    gc = gap_powers(seq, k, 2.0 * ep.alpha - ep.beta - 1.0)
    lhs = math.fsum(ga)
    rhs = (2.0 * math.sqrt(n + 1.0) / n) * math.sqrt(math.fsum(gb)) * math.sqrt(
        math.fsum(c * seq[i] for i, c in enumerate(gc))
    )
    ident = InequalityId.COR_1_11 if (ep.alpha, ep.beta) == (2.0, 2.0) else InequalityId.COR_1_10
    return _make_report(ident, k, n, lhs, rhs, tol_rel, tol_abs,
                        alpha=ep.alpha, beta=ep.beta)


def check_clamped_gap(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Fourth-order gap bound: g_k <= (4(n+1)/(n^2 k^2)) (sum sqrt(lambda_i))^2."""
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    _require_length(seq, k, k + 1)
    lhs = seq[k] - seq[k - 1]
    root_sum = math.fsum(math.sqrt(seq[i]) for i in range(k))
    rhs = (4.0 * (n + 1.0) / (n * n * k * k)) * root_sum**2
    return _make_report(InequalityId.COR_1_12, k, n, lhs, rhs, tol_rel, tol_abs)


def lambda_next_upper_bound(
    seq: EigenSequence | Sequence[float],
    k: int,
    n: int,
    family: BoundFamily | str = BoundFamily.DIRICHLET,
) -> float:
    """Largest root of the quadratic implied by the quadratic-in-gaps bound.

    Treat L = lambda_{k+1} as unknown in
    F(L) = sum_i (L - lambda_i)^2 - c * sum_i (L - lambda_i) * lambda_i,
    c = 2/n (DIRICHLET) or 4(n+1)/n^2 (CLAMPED).  Any spectrum satisfying
    the corresponding inequality obeys lambda_{k+1} <= returned value.
    """
    seq = as_eigen_sequence(seq)
    _require_positive_n(n)
    _require_length(seq, k, k)
    family = BoundFamily(family)
    c = 2.0 / n if family is BoundFamily.DIRICHLET else 4.0 * (n + 1.0) / (n * n)
    s1 = math.fsum(seq[i] for i in range(k))
    s2 = math.fsum(seq[i] ** 2 for i in range(k))
    # F(L) = k L^2 - (2 + c) s1 L + (1 + c) s2
    disc = (2.0 + c) ** 2 * s1**2 - 4.0 * k * (1.0 + c) * s2
    if disc < 0.0:
        raise NegativeDiscriminant(
            f"no real root for k = {k}, n = {n}, family = {family.value}"
        )
    return ((2.0 + c) * s1 + math.sqrt(disc)) / (2.0 * k)


def power_mean_check(
    s: Sequence[float],
    gamma: float,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Convexity bound (sum s_i)^gamma <= k^(gamma-1) sum s_i^gamma for gamma >= 1."""
    vals = [float(v) for v in s]
    if not vals:
        raise ValidationError("empty input list")
    if any(v < 0.0 for v in vals):
        raise NegativeEntry("all entries must be nonnegative")
    if gamma < 1.0:
        raise GammaBelowOne(f"gamma = {gamma} must be >= 1")
    kk = len(vals)
    lhs = math.fsum(vals) ** gamma
    rhs = kk ** (gamma - 1.0) * math.fsum(v**gamma for v in vals)
    return _make_report(InequalityId.LEMMA_2_4_INEQ, kk, None, lhs, rhs,
                        tol_rel, tol_abs, alpha=gamma)


def chebyshev_check(
    a: Sequence[float],
    b: Sequence[float],
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Sum-ordering bound sum a_i b_i <= (1/n)(sum a_i)(sum b_i) for anti-monotone pairs.

    The pairing hypothesis (a_k - a_j)(b_k - b_j) <= 0 is checked over all
    index pairs; that O(n^2) scan is the reference semantics.
    """
    av = [float(v) for v in a]
    bv = [float(v) for v in b]
    if len(av) != len(bv):
        raise ValidationError(f"length mismatch: {len(av)} vs {len(bv)}")
    if not av:
        raise ValidationError("empty input lists")
    if any(v < 0.0 for v in av + bv):
        raise NegativeEntry("all entries must be nonnegative")
    nn = len(av)
    for i in range(nn):
        for j in range(i + 1, nn):
            if (av[i] - av[j]) * (bv[i] - bv[j]) > 0.0:
                raise HypothesisViolation(
                    f"pair ({i}, {j}) is co-monotone: a = ({av[i]}, {av[j]}), "
                    f"b = ({bv[i]}, {bv[j]})"
                )
    lhs = math.fsum(x * y for x, y in zip(av, bv))
    rhs = math.fsum(av) * math.fsum(bv) / nn
    return _make_report(InequalityId.LEMMA_2_4_INEQ, nn, nn, lhs, rhs, tol_rel, tol_abs)


def _power(base: float, exponent: float) -> float:
    # 0^0 = 1 by convention; 0^e = 0 for e > 0; negative exponent on 0 is an error
    if base == 0.0:
        if exponent == 0.0:
            return 1.0
        if exponent > 0.0:
            return 0.0
        raise ZeroBaseNegativeExponent(f"0^{exponent} is undefined")
    return base**exponent


def generalized_chebyshev_check(
    A: Sequence[float],
    B: Sequence[float],
    C: Sequence[float],
    ep: ExponentPair,
    *,
    tol_rel: float = DEFAULT_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
) -> BoundReport:
    """Weighted rearrangement bound for monotone triples.

    For A nonincreasing >= 0, B and C nondecreasing >= 0 and alpha^2 <= 2*beta:
    sum A^b B * sum A^(2a-b-1) C <= sum A^b * sum A^(2a-b-1) B C.
    """
    Av = [float(v) for v in A]
    Bv = [float(v) for v in B]
    Cv = [float(v) for v in C]
    if not (len(Av) == len(Bv) == len(Cv)):
        raise ValidationError("A, B, C must have equal lengths")
    if not Av:
        raise ValidationError("empty input lists")
    if any(v < 0.0 for v in Av + Bv + Cv):
        raise NegativeEntry("all entries must be nonnegative")
    if any(x < y for x, y in zip(Av, Av[1:])):
        raise MonotonicityViolation("A must be nonincreasing")
    for name, vec in (("B", Bv), ("C", Cv)):
        if any(x > y for x, y in zip(vec, vec[1:])):
            raise MonotonicityViolation(f"{name} must be nondecreasing")
    ep.require_admissible()
    e1 = ep.beta
    e2 = 2.0 * ep.alpha - ep.beta - 1.0
    p1 = [_power(v, e1) for v in Av]
    p2 = [_power(v, e2) for v in Av]
    lhs = math.fsum(p * b for p, b in zip(p1, Bv)) * math.fsum(
        q * c for q, c in zip(p2, Cv)
    )
    rhs = math.fsum(p1) * math.fsum(q * b * c for q, b, c in zip(p2, Bv, Cv))
    return _make_report(InequalityId.LEMMA_2_4_INEQ, len(Av), None, lhs, rhs,
                        tol_rel, tol_abs, alpha=ep.alpha, beta=ep.beta)


def spectrum_from_array(values: np.ndarray | Sequence[float]) -> EigenSequence:
    """Coerce a solver output array into a validated EigenSequence."""
    return as_eigen_sequence(np.asarray(values, dtype=float).tolist())
