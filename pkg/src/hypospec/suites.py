"""Seeded randomized trial suites for the three combinatorial lemmas.

Each suite draws inputs satisfying the lemma preconditions, evaluates the
corresponding check and counts violations beyond a small relative
tolerance.  Expected violation count: zero, always; a nonzero count means
an implementation bug, not new mathematics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolation
from .inequalities import (
    ExponentPair,
    chebyshev_check,
    generalized_chebyshev_check,
    power_mean_check,
)

#: Relative slack below which a trial counts as a violation.
TRIAL_TOL_REL = 1e-9


@dataclass(frozen=True)
class TrialSummary:
    name: str
    trials: int
    evaluated: int
    skipped: int
    violations: int
    worst_relative_slack: float

    @property
    def clean(self) -> bool:
        return self.violations == 0


def _relative_slack(report) -> float:
    scale = max(abs(report.rhs), abs(report.lhs), 1e-300)
    return report.slack / scale


def generalized_chebyshev_trials(
    trials: int = 10_000,
    seed: int = 0,
    max_len: int = 12,
    entry_high: float = 10.0,
    beta_high: float = 4.0,
    tol_rel: float = TRIAL_TOL_REL,
) -> TrialSummary:
    """Random monotone triples with admissible exponents sampled from a^2 <= 2b."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst = np.inf
    for _ in range(trials):
        k = int(rng.integers(1, max_len + 1))
        A = np.sort(rng.uniform(0.0, entry_high, k))[::-1]
        B = np.sort(rng.uniform(0.0, entry_high, k))
        C = np.sort(rng.uniform(0.0, entry_high, k))
        beta = rng.uniform(0.0, beta_high)
        alpha = rng.uniform(-np.sqrt(2.0 * beta), np.sqrt(2.0 * beta))
        rep = generalized_chebyshev_check(A, B, C, ExponentPair(alpha, beta),
                                          tol_rel=tol_rel)
        worst = min(worst, _relative_slack(rep))
        if not rep.satisfied:
            violations += 1
    return TrialSummary("generalized", trials, trials, 0, violations, float(worst))


def power_mean_trials(
    trials: int = 10_000,
    seed: int = 0,
    max_len: int = 12,
    entry_high: float = 10.0,
    gamma_high: float = 4.0,
    tol_rel: float = TRIAL_TOL_REL,
) -> TrialSummary:
    rng = np.random.default_rng(seed)
    violations = 0
    worst = np.inf
    for _ in range(trials):
        k = int(rng.integers(1, max_len + 1))
        s = rng.uniform(0.0, entry_high, k)
        gamma = rng.uniform(1.0, gamma_high)
        rep = power_mean_check(s, gamma, tol_rel=tol_rel)
        worst = min(worst, _relative_slack(rep))
        if not rep.satisfied:
            violations += 1
    return TrialSummary("power-mean", trials, trials, 0, violations, float(worst))


def chebyshev_trials(
    trials: int = 10_000,
    seed: int = 0,
    max_len: int = 12,
    entry_high: float = 10.0,
    tol_rel: float = TRIAL_TOL_REL,
) -> TrialSummary:
    """Half the draws are anti-monotone by construction; the other half are
    free pairs, so co-monotone samples exercise the precondition path and
    count as skips, never as violations."""
    rng = np.random.default_rng(seed)
    violations = 0
    skipped = 0
    evaluated = 0
    worst = np.inf
    for trial in range(trials):
        k = int(rng.integers(1, max_len + 1))
        a = rng.uniform(0.0, entry_high, k)
        b = rng.uniform(0.0, entry_high, k)
        if trial % 2 == 0:
            a = np.sort(a)[::-1]
            b = np.sort(b)
        try:
            rep = chebyshev_check(a, b, tol_rel=tol_rel)
        except HypothesisViolation:
            skipped += 1
            continue
        evaluated += 1
        worst = min(worst, _relative_slack(rep))
        if not rep.satisfied:
            violations += 1
    return TrialSummary("chebyshev", trials, evaluated, skipped, violations,
                        float(worst if evaluated else 0.0))


def run_all(trials: int = 10_000, seed: int = 0) -> list[TrialSummary]:
    return [
        generalized_chebyshev_trials(trials, seed),
        power_mean_trials(trials, seed + 1),
        chebyshev_trials(trials, seed + 2),
    ]
