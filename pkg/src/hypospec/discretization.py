"""Masked finite-difference assembly of the degenerate operator.

The second-order operator is assembled in Gram form

    A = D_X^T D_X + D_Y^T D_Y

from forward-difference factors on the full lattice, with the t-coupling
coefficient averaged at half points.  The Gram form makes A symmetric
positive semidefinite by construction and ties it exactly to the discrete
energy sum ||D_X v||^2 + ||D_Y v||^2.  Homogeneous boundary values are
imposed by exclusion: only nodes with phi < 0 carry unknowns.

Desk-scale restriction: assembly supports n = 1 (grids in R^3).  The bound
checks in :mod:`hypospec.inequalities` are dimension-agnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from .errors import EmptyInterior, InsufficientMargin, ValidationError
from .geometry import DomainSpec, GreinerParams, coupling_weight, levelset

#: Allowed relative asymmetry for matrices treated as symmetric.
SYMMETRY_RTOL = 1e-14


@dataclass(frozen=True)
class Grid:
    """Lattice masked to the interior of a level-set domain.

    ``index`` maps lattice multi-indices to contiguous unknown numbers
    0..N-1 in lexicographic node order, -1 marking exterior nodes.
    """

    box: tuple[tuple[float, float], ...]
    h: tuple[float, ...]
    axes: tuple[np.ndarray, ...]
    index: np.ndarray
    nodes: np.ndarray  # (N, dim) interior node coordinates

    @property
    def N(self) -> int:
        return self.nodes.shape[0]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.index.shape

    @property
    def dim(self) -> int:
        return len(self.axes)


def default_box(dom: DomainSpec, gp: GreinerParams, h) -> tuple[tuple[float, float], ...]:
    """Smallest axis-aligned box holding the domain with a two-spacing margin.

    Faces sit exactly two spacings outside the domain bounds so that lattice
    nodes stay aligned with axis-aligned level sets.
    """
    hs = _per_axis(h, 2 * gp.n + 1)
    return tuple(
        (lo - 2.0 * ha, hi + 2.0 * ha)
        for (lo, hi), ha in zip(dom.bounds(gp), hs)
    )


def _per_axis(h, dim: int) -> tuple[float, ...]:
    if np.isscalar(h):
        hs = (float(h),) * dim
    else:
        hs = tuple(float(v) for v in h)
        if len(hs) != dim:
            raise ValidationError(f"expected {dim} spacings, got {len(hs)}")
    if any(v <= 0.0 for v in hs):
        raise ValidationError("grid spacings must be positive")
    return hs


def build_grid(dom: DomainSpec, gp: GreinerParams, h, box=None) -> Grid:
    """Lattice over ``box`` (default: a snug box around the domain) masked to phi < 0.

    Every interior node must sit at least two spacings from each box face so
    that the one-step difference stencils never leave the lattice; violating
    boxes raise InsufficientMargin.
    """
    if gp.n != 1:
        raise ValidationError("grid assembly supports n = 1 only")
    dim = 2 * gp.n + 1
    hs = _per_axis(h, dim)
    if box is None:
        box = default_box(dom, gp, hs)
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != dim:
        raise ValidationError(f"expected {dim} box axes, got {len(box)}")
    axes = []
    for (lo, hi), ha in zip(box, hs):
        if hi <= lo:
            raise ValidationError(f"empty box axis [{lo}, {hi}]")
        count = int(np.floor((hi - lo) / ha + 1e-9)) + 1
        axes.append(lo + ha * np.arange(count))
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=-1)
    phi = np.asarray(levelset(dom, gp, coords)).reshape([len(a) for a in axes])
    mask = phi < 0.0
    n_int = int(mask.sum())
    if n_int == 0:
        raise EmptyInterior("no lattice node lies inside the domain")
    index = -np.ones(mask.shape, dtype=np.int64)
    index[mask] = np.arange(n_int)
    nodes = coords.reshape(*mask.shape, dim)[mask]
    for a, ((lo, hi), ha) in enumerate(zip(box, hs)):
        cmin = nodes[:, a].min()
        cmax = nodes[:, a].max()
        if cmin - lo < 2.0 * ha - 1e-9 or hi - cmax < 2.0 * ha - 1e-9:
            raise InsufficientMargin(
                f"interior nodes reach within two spacings of the box on axis {a}"
            )
    return Grid(box=box, h=hs, axes=tuple(axes), index=index, nodes=nodes)


def _forward_difference(grid: Grid, axis: int) -> sp.csr_matrix:
    """Forward difference on the full lattice: rows are lattice nodes,
    columns the interior unknowns (exterior values are zero)."""
    shape = grid.shape
    M = int(np.prod(shape))
    h = grid.h[axis]
    lattice = np.arange(M).reshape(shape)
    idx = grid.index.ravel()

    rows, cols, vals = [], [], []
    interior_rows = np.flatnonzero(idx >= 0)
    rows.append(interior_rows)
    cols.append(idx[interior_rows])
    vals.append(np.full(interior_rows.size, -1.0 / h))

    src = [slice(None)] * len(shape)
    dst = [slice(None)] * len(shape)
    src[axis] = slice(0, shape[axis] - 1)
    dst[axis] = slice(1, shape[axis])
    row_ids = lattice[tuple(src)].ravel()
    nbr_cols = grid.index[tuple(dst)].ravel()
    keep = nbr_cols >= 0
    rows.append(row_ids[keep])
    cols.append(nbr_cols[keep])
    vals.append(np.full(int(keep.sum()), 1.0 / h))

    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(M, grid.N),
    )


def _lattice_coords(grid: Grid) -> np.ndarray:
    mesh = np.meshgrid(*grid.axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _coefficients_at(grid: Grid, gp: GreinerParams, coords: np.ndarray):
    """(c_x, c_y) with X = d/dx + c_x d/dt and Y = d/dy - c_y d/dt (n = 1)."""
    x, y = coords[:, 0], coords[:, 1]
    rho = np.hypot(x, y)
    w = coupling_weight(gp, rho)
    return w * y, w * x


def assemble_difference_operators(
    grid: Grid, gp: GreinerParams, *, zero_coefficients: bool = False
) -> list[sp.csr_matrix]:
    """Rectangular forward-difference factors whose Gram sum is the operator.

    Returns [D_X, D_Y] with the t-coupling coefficient averaged between the
    endpoints of each t edge.  With ``zero_coefficients`` the factors are
    the plain per-axis differences [D_x, D_y, D_t]: their Gram sum is the
    standard full-dimensional grid Laplacian used as the solver oracle.
    """
    d_x = _forward_difference(grid, 0)
    d_y = _forward_difference(grid, 1)
    d_t = _forward_difference(grid, 2)
    if zero_coefficients:
        return [d_x, d_y, d_t]
    coords = _lattice_coords(grid)
    cx, cy = _coefficients_at(grid, gp, coords)
    shifted = coords.copy()
    shifted[:, 2] += grid.h[2]
    cx2, cy2 = _coefficients_at(grid, gp, shifted)
    half_x = sp.diags(0.5 * (cx + cx2))
    half_y = sp.diags(0.5 * (cy + cy2))
    return [d_x + half_x @ d_t, d_y - half_y @ d_t]


def assemble_dirichlet_L(
    grid: Grid, gp: GreinerParams, *, zero_coefficients: bool = False
) -> sp.csr_matrix:
    """Symmetric positive semidefinite Gram assembly of the operator."""
    factors = assemble_difference_operators(grid, gp, zero_coefficients=zero_coefficients)
    A = sum((d.T @ d for d in factors), sp.csr_matrix((grid.N, grid.N)))
    A = (A + A.T) * 0.5  # exact symmetry, independent of product entry order
    return A.tocsr()


def assemble_multipliers(grid: Grid) -> list[sp.csr_matrix]:
    """Coordinate multipliers as diagonal matrices, one per x/y axis."""
    dim = grid.dim
    n = (dim - 1) // 2
    return [sp.diags(grid.nodes[:, a]).tocsr() for a in range(2 * n)]


def assemble_skew_fields(grid: Grid, gp: GreinerParams) -> list[sp.csr_matrix]:
    """Centered-difference field operators, exactly skew-symmetric.

    The t-coupling coefficient is applied in the symmetrized order
    (C D_t + D_t C)/2 so skewness holds to the last bit, which the abstract
    commutator check requires exactly; the operators remain O(h^2)
    consistent with the fields in the interior.
    """
    s_x = _centered_difference(grid, 0)
    s_y = _centered_difference(grid, 1)
    s_t = _centered_difference(grid, 2)
    cx, cy = _coefficients_at(grid, gp, grid.nodes)
    Cx = sp.diags(cx)
    Cy = sp.diags(cy)
    t_x = s_x + 0.5 * (Cx @ s_t + s_t @ Cx)
    t_y = s_y - 0.5 * (Cy @ s_t + s_t @ Cy)
    return [t_x.tocsr(), t_y.tocsr()]


def _centered_difference(grid: Grid, axis: int) -> sp.csr_matrix:
    shape = grid.shape
    h = grid.h[axis]
    src = [slice(None)] * len(shape)
    dst = [slice(None)] * len(shape)
    src[axis] = slice(0, shape[axis] - 1)
    dst[axis] = slice(1, shape[axis])
    a = grid.index[tuple(src)].ravel()
    b = grid.index[tuple(dst)].ravel()
    keep = (a >= 0) & (b >= 0)
    a, b = a[keep], b[keep]
    w = np.full(a.size, 1.0 / (2.0 * h))
    rows = np.concatenate([a, b])
    cols = np.concatenate([b, a])
    vals = np.concatenate([w, -w])
    return sp.csr_matrix((vals, (rows, cols)), shape=(grid.N, grid.N))


def clamped_proxy(A: sp.spmatrix) -> sp.csr_matrix:
    """Square of the second-order matrix, the stand-in for the fourth-order problem.

    Eigenvalues are exactly the squares of A's with shared eigenvectors; the
    boundary behavior is Navier-type, not clamped, so downstream reports are
    labeled as proxy results.
    """
    P = (A @ A).tocsr()
    return ((P + P.T) * 0.5).tocsr()


def symmetry_defect(A: sp.spmatrix) -> float:
    """max |A - A^T| over stored entries (0 for exactly symmetric assemblies)."""
    d = (A - A.T).tocoo()
    return float(np.abs(d.data).max()) if d.nnz else 0.0


def require_symmetric(A: sp.spmatrix, rtol: float = SYMMETRY_RTOL) -> None:
    scale = float(np.abs(A.tocoo().data).max()) if A.nnz else 0.0
    if symmetry_defect(A) > rtol * max(scale, 1.0):
        raise ValidationError("matrix is not numerically symmetric")


def write_coordinate_file(A: sp.spmatrix, path) -> None:
    """Export in MatrixMarket coordinate form (1-based triples, symmetric)."""
    scipy.io.mmwrite(str(path), sp.coo_matrix(A), field="real", symmetry="symmetric")
