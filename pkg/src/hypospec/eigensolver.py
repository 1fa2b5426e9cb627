"""Smallest eigenpairs of sparse symmetric operators, plus the exact
abstract-inequality layer checked on the computed pairs.

The solver is deterministic for a fixed seed: the initial block (and the
Lanczos start vector of the fallback) come from a seeded generator, and the
seed is recorded on the result.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .couples import PowerCouple, check_membership
from .errors import (
    DegenerateGap,
    DomainViolation,
    MembershipNotVerified,
    ValidationError,
    ZeroVector,
)
from .inequalities import (
    DEFAULT_TOL_ABS,
    BoundReport,
    InequalityId,
)

DEFAULT_SEED = 20240801
#: Fraction of N below which the dense path is used outright.
_DENSE_CUTOFF = 600

#: Slack tolerance absorbing eigenpair residual amplification through the
#: quadratic forms of the commutator check.
LEMMA_TOL_REL = 1e-6


@dataclass(frozen=True)
class EigenPairs:
    """Ordered smallest eigenpairs with relative residuals.

    ``converged`` is False when the requested residual tolerance was not
    reached within the iteration budget; the best iterates are still
    returned.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    norm_estimate: float
    seed: int
    converged: bool = True
    method: str = "dense"

    def __len__(self) -> int:
        return len(self.values)


def operator_norm_estimate(A: sp.spmatrix, seed: int = DEFAULT_SEED,
                           iterations: int = 20) -> float:
    """Crude ||A||_2 estimate by a fixed number of power iterations."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[0])
    v /= np.linalg.norm(v)
    est = 1.0
    for _ in range(iterations):
        w = A @ v
        est = float(np.linalg.norm(w))
        if est == 0.0:
            return 0.0
        v = w / est
    return est


def _residuals(A: sp.spmatrix, vals: np.ndarray, vecs: np.ndarray,
               norm_est: float) -> np.ndarray:
    R = A @ vecs - vecs * vals[np.newaxis, :]
    return np.linalg.norm(R, axis=0) / max(norm_est, np.finfo(float).tiny)


def _sorted_pairs(vals: np.ndarray, vecs: np.ndarray, k: int):
    order = np.argsort(vals)[:k]
    return np.asarray(vals)[order], np.asarray(vecs)[:, order]


def smallest_k_eigenpairs(
    A: sp.spmatrix,
    k: int,
    tol: float = 1e-8,
    max_iter: int = 2000,
    seed: int = DEFAULT_SEED,
) -> EigenPairs:
    """k smallest eigenpairs of a symmetric matrix, deterministic per seed.

    Small problems go straight to a dense solve.  Larger ones run a blocked
    preconditioned iteration (block k+2, diagonal preconditioner); if that
    stalls above the residual target the shift-invert Lanczos fallback takes
    over.  On total failure the best iterates are returned with
    ``converged=False``.
    """
    N = A.shape[0]
    if not 0 < k < N:
        raise ValidationError(f"need 0 < k < N, got k = {k}, N = {N}")
    A = A.tocsr()
    norm_est = operator_norm_estimate(A, seed=seed)

    if N <= max(_DENSE_CUTOFF, 5 * (k + 2)):
        vals, vecs = np.linalg.eigh(A.toarray())
        vals, vecs = _sorted_pairs(vals, vecs, k)
        res = _residuals(A, vals, vecs, norm_est)
        return EigenPairs(vals, vecs, res, norm_est, seed, True, "dense")

    rng = np.random.default_rng(seed)
    block = min(k + 2, N - 1)
    X0 = rng.standard_normal((N, block))
    diag = A.diagonal()
    diag = np.where(np.abs(diag) > 1e-30, diag, 1.0)
    M = sp.diags(1.0 / diag)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vals, vecs = spla.lobpcg(A, X0, M=M, tol=tol * norm_est,
                                     maxiter=max_iter, largest=False)
        vals, vecs = _sorted_pairs(vals, vecs, k)
        res = _residuals(A, vals, vecs, norm_est)
        if np.all(res <= tol):
            return EigenPairs(vals, vecs, res, norm_est, seed, True, "lobpcg")
    except Exception:
        vals = vecs = res = None

    # fallback: restarted Lanczos in shift-invert mode near the bottom end
    try:
        v0 = np.random.default_rng(seed + 1).standard_normal(N)
        fvals, fvecs = spla.eigsh(A, k=k, sigma=0.0, which="LM", v0=v0,
                                  maxiter=max_iter, tol=0)
        fvals, fvecs = _sorted_pairs(fvals, fvecs, k)
        fres = _residuals(A, fvals, fvecs, norm_est)
        if np.all(fres <= tol) or res is None or fres.max() < res.max():
            return EigenPairs(fvals, fvecs, fres, norm_est, seed,
                              bool(np.all(fres <= tol)), "lanczos")
    except Exception:
        pass
    if res is None:
        raise ValidationError("both eigensolver paths failed to produce iterates")
    return EigenPairs(vals, vecs, res, norm_est, seed, False, "lobpcg")


def proxy_pairs(pairs: EigenPairs, A2: sp.spmatrix) -> EigenPairs:
    """Eigenpairs of the squared operator: same vectors, squared values."""
    vals = pairs.values**2
    order = np.argsort(vals)
    vals = vals[order]
    vecs = pairs.vectors[:, order]
    norm_est = pairs.norm_estimate**2
    res = _residuals(A2.tocsr(), vals, vecs, max(norm_est, np.finfo(float).tiny))
    return EigenPairs(vals, vecs, res, norm_est, pairs.seed, pairs.converged,
                      pairs.method + "-squared")


def rayleigh_quotient(A: sp.spmatrix, v: np.ndarray) -> float:
    v = np.asarray(v, dtype=float)
    nv = float(v @ v)
    if nv == 0.0:
        raise ZeroVector("Rayleigh quotient of the zero vector")
    return float(v @ (A @ v)) / nv


def verify_lemma_2_5(
    A: sp.spmatrix,
    Ts: list[sp.spmatrix],
    Bs: list[sp.spmatrix],
    pairs: EigenPairs,
    k: int,
    pc: PowerCouple,
    *,
    membership_grid: int = 200,
    tol_rel: float = LEMMA_TOL_REL,
    tol_abs: float = DEFAULT_TOL_ABS,
    skip_membership: bool = False,
) -> BoundReport:
    """Check the abstract commutator inequality on computed eigenpairs.

    With f, g the power couple at ceiling lambda_{k+1}:

      (sum_{i<=k, p} f(l_i) <[T_p, B_p] u_i, u_i>)^2
        <= 4 (sum g(l_i) <[A, B_p] u_i, B_p u_i>)
             (sum f(l_i)^2 / (g(l_i) (l_{k+1} - l_i)) ||T_p u_i||^2)

    This is a finite-dimensional algebraic identity chain, so on exact
    eigenpairs it always holds; the tolerance only absorbs solver residual
    amplification.  The couple must carry lambda_{k+1} as its ceiling and
    pass the grid membership certificate first.
    """
    if len(Ts) != len(Bs):
        raise ValidationError("need matching lists of skew and multiplier operators")
    if len(pairs) < k + 1:
        raise ValidationError(f"need at least {k + 1} eigenpairs, got {len(pairs)}")
    lam_top = float(pairs.values[k])
    if not pairs.values[k] > pairs.values[k - 1]:
        raise DegenerateGap(
            f"lambda_{k + 1} = lambda_{k} = {lam_top}: weights undefined"
        )
    if not pairs.values[0] > 0.0:
        raise DomainViolation("eigenvalues must be positive for the couple domain")
    if abs(pc.lam - lam_top) > 1e-12 * max(1.0, abs(lam_top)):
        raise ValidationError(
            f"couple ceiling {pc.lam} does not match lambda_{k + 1} = {lam_top}"
        )
    if not skip_membership:
        cert = check_membership(pc, membership_grid)
        if not cert.accepted:
            raise MembershipNotVerified(
                f"couple (alpha={pc.alpha}, beta={pc.beta}) failed the grid check "
                f"(worst residual {cert.worst_residual:.3e})"
            )

    A = A.tocsr()
    lhs_sum = 0.0
    first = 0.0
    second = 0.0
    for i in range(k):
        lam = float(pairs.values[i])
        u = pairs.vectors[:, i]
        fv = (lam_top - lam) ** pc.alpha
        gv = (lam_top - lam) ** pc.beta
        Au = A @ u
        for T, B in zip(Ts, Bs):
            Tu = T @ u
            Bu = B @ u
            lhs_sum += fv * float(u @ (T @ Bu) - u @ (B @ Tu))
            first += gv * float((A @ Bu - B @ Au) @ Bu)
            second += fv * fv / (gv * (lam_top - lam)) * float(Tu @ Tu)
    lhs = lhs_sum**2
    rhs = 4.0 * first * second
    slack = rhs - lhs
    ok = slack >= -(tol_abs + tol_rel * abs(rhs))
    return BoundReport(InequalityId.LEMMA_2_3, k, len(Ts) // 2 or None, lhs, rhs,
                       slack, ok, alpha=pc.alpha, beta=pc.beta,
                       tol_rel=tol_rel, tol_abs=tol_abs)
