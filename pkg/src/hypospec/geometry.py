"""Vector-field geometry: horizontal gradients and characteristic points.

The field family on R^(2n+1), coordinates (x_1..x_n, y_1..y_n, t), is

    X_j = d/dx_j + 2 sigma y_j |z|^(2 sigma - 2) d/dt
    Y_j = d/dy_j - 2 sigma x_j |z|^(2 sigma - 2) d/dt

with |z|^2 = sum x_j^2 + y_j^2 and sigma a positive integer (sigma = 1 is
the Heisenberg case).  A boundary point of {phi < 0} is characteristic when
the horizontal gradient (X_1 phi, ..., Y_n phi) vanishes there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyBoundary, MissingDerivatives, ValidationError


@dataclass(frozen=True)
class GreinerParams:
    """Field-family parameters: n coordinate pairs, degeneracy order sigma."""

    n: int = 1
    sigma: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"n = {self.n} must be >= 1")
        if self.sigma < 1:
            raise ValidationError(f"sigma = {self.sigma} must be >= 1")


@dataclass(frozen=True)
class Point:
    """A point of R^(2n+1) split into its (x, y, t) blocks."""

    x: tuple[float, ...]
    y: tuple[float, ...]
    t: float

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValidationError("x and y blocks must have equal length")

    @property
    def z_norm(self) -> float:
        return math.sqrt(math.fsum(v * v for v in self.x) +
                         math.fsum(v * v for v in self.y))

    def coords(self) -> np.ndarray:
        return np.array([*self.x, *self.y, self.t], dtype=float)

    @staticmethod
    def from_coords(c: Sequence[float]) -> "Point":
        c = [float(v) for v in c]
        if len(c) % 2 != 1:
            raise ValidationError("coordinate vector must have odd length 2n+1")
        n = (len(c) - 1) // 2
        return Point(tuple(c[:n]), tuple(c[n:2 * n]), c[2 * n])


class DomainKind(str, enum.Enum):
    TORUS_SHELL = "TORUS_SHELL"
    GREINER_BALL = "GREINER_BALL"
    GENERIC = "GENERIC"


@dataclass(frozen=True)
class TorusShell:
    """Shell (|z| - a)^2 + (t - b)^2 < m^2 around the circle |z| = a, t = b."""

    a: float
    b: float = 0.0
    m: float = 1.0
    kind: DomainKind = DomainKind.TORUS_SHELL

    def __post_init__(self) -> None:
        if not self.a > 0.0:
            raise ValidationError(f"a = {self.a} must be positive")
        if not self.m > 0.0:
            raise ValidationError(f"m = {self.m} must be positive")

    def levelset_profile(self, rho, t):
        return (rho - self.a) ** 2 + (t - self.b) ** 2 - self.m**2

    def bounds(self, gp: GreinerParams) -> list[tuple[float, float]]:
        r = self.a + self.m
        zb = [(-r, r)] * (2 * gp.n)
        return zb + [(self.b - self.m, self.b + self.m)]


@dataclass(frozen=True)
class GreinerBall:
    """Anisotropic ball |z|^(4 sigma) + t^2 < r^(4 sigma)."""

    r: float
    kind: DomainKind = DomainKind.GREINER_BALL

    def __post_init__(self) -> None:
        if not self.r > 0.0:
            raise ValidationError(f"r = {self.r} must be positive")

    def levelset_profile(self, rho, t, sigma: int):
        return rho ** (4 * sigma) + t**2 - self.r ** (4 * sigma)

    def bounds(self, gp: GreinerParams) -> list[tuple[float, float]]:
        tb = self.r ** (2 * gp.sigma)
        zb = [(-self.r, self.r)] * (2 * gp.n)
        return zb + [(-tb, tb)]


@dataclass(frozen=True)
class GenericDomain:
    """Level-set domain {phi < 0} given by a callback on full coordinates.

    ``phi`` takes a coordinate vector of length 2n+1.  ``gradient`` (same
    signature, returning the Euclidean gradient) is optional; without it a
    central-difference step ``fd_step`` must be supplied.
    """

    phi: Callable[[np.ndarray], float]
    box: tuple[tuple[float, float], ...]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None
    fd_step: float | None = None
    kind: DomainKind = field(default=DomainKind.GENERIC)

    def bounds(self, gp: GreinerParams) -> list[tuple[float, float]]:
        if len(self.box) != 2 * gp.n + 1:
            raise ValidationError(
                f"bounding box has {len(self.box)} axes, expected {2 * gp.n + 1}"
            )
        return [tuple(map(float, ax)) for ax in self.box]


DomainSpec = TorusShell | GreinerBall | GenericDomain


def box_domain(side: float, n: int = 1) -> GenericDomain:
    """Open coordinate cube (0, side)^(2n+1) as a generic level set.

    The inside test carries a tiny relative shrink so lattice nodes landing
    on a face by floating-point jitter classify as exterior; used mainly for
    the coefficient-zeroed solver oracle.
    """
    if not side > 0.0:
        raise ValidationError(f"side = {side} must be positive")
    dim = 2 * n + 1
    half = 0.5 * side
    guard = half * (1.0 - 1e-12)

    def phi(c: np.ndarray) -> float:
        return float(np.max(np.abs(np.asarray(c) - half))) - guard

    def grad(c: np.ndarray) -> np.ndarray:
        d = np.asarray(c) - half
        g = np.zeros(dim)
        a = int(np.argmax(np.abs(d)))
        g[a] = np.sign(d[a]) if d[a] != 0.0 else 1.0
        return g

    return GenericDomain(phi=phi, box=((0.0, side),) * dim, gradient=grad)


def levelset(dom: DomainSpec, gp: GreinerParams, coords: np.ndarray):
    """phi at full coordinates; vectorized over trailing point axes."""
    coords = np.asarray(coords, dtype=float)
    n = gp.n
    rho = np.sqrt(np.sum(coords[..., : 2 * n] ** 2, axis=-1))
    t = coords[..., 2 * n]
    if isinstance(dom, TorusShell):
        return dom.levelset_profile(rho, t)
    if isinstance(dom, GreinerBall):
        return dom.levelset_profile(rho, t, gp.sigma)
    if coords.ndim == 1:
        return dom.phi(coords)
    flat = coords.reshape(-1, coords.shape[-1])
    return np.array([dom.phi(c) for c in flat]).reshape(coords.shape[:-1])


def coupling_weight(gp: GreinerParams, rho):
    """2 sigma |z|^(2 sigma - 2), the t-coupling weight of the fields."""
    s = gp.sigma
    if s == 1:
        return 2.0 * np.ones_like(np.asarray(rho, dtype=float))
    return 2.0 * s * np.asarray(rho, dtype=float) ** (2 * s - 2)


def _euclidean_gradient(dom: GenericDomain, coords: np.ndarray) -> np.ndarray:
    if dom.gradient is not None:
        return np.asarray(dom.gradient(coords), dtype=float)
    if dom.fd_step is None:
        raise MissingDerivatives(
            "generic domain needs a gradient callback or fd_step for central differences"
        )
    h = dom.fd_step
    grad = np.empty(len(coords))
    for a in range(len(coords)):
        hi = coords.copy()
        lo = coords.copy()
        hi[a] += h
        lo[a] -= h
        grad[a] = (dom.phi(hi) - dom.phi(lo)) / (2.0 * h)
    return grad


def horizontal_gradient_sq(dom: DomainSpec, p: Point, gp: GreinerParams) -> float:
    """|horizontal gradient of phi|^2 = sum_j (X_j phi)^2 + (Y_j phi)^2 at p.

    The two built-in families use their exact closed forms; only the generic
    path differentiates.
    """
    if len(p.x) != gp.n:
        raise ValidationError(f"point has {len(p.x)} coordinate pairs, expected {gp.n}")
    rho = p.z_norm
    s = gp.sigma
    if isinstance(dom, TorusShell):
        return 4.0 * (rho - dom.a) ** 2 + \
            16.0 * s * s * rho ** (4 * s - 2) * (p.t - dom.b) ** 2
    if isinstance(dom, GreinerBall):
        return 16.0 * s * s * (rho ** (8 * s - 2) + rho ** (4 * s - 2) * p.t**2)
    coords = p.coords()
    grad = _euclidean_gradient(dom, coords)
    n = gp.n
    c = float(coupling_weight(gp, rho))
    total = 0.0
    for j in range(n):
        xj, yj = p.x[j], p.y[j]
        xf = grad[j] + c * yj * grad[2 * n]
        yf = grad[n + j] - c * xj * grad[2 * n]
        total += float(xf**2 + yf**2)
    return total


class Classification(str, enum.Enum):
    NONCHARACTERISTIC = "NONCHARACTERISTIC"
    CHARACTERISTIC = "CHARACTERISTIC"


@dataclass(frozen=True)
class ClassificationResult:
    kind: Classification
    characteristic_points: tuple[Point, ...]
    gradient_scale: float
    tolerance: float

    @property
    def is_characteristic(self) -> bool:
        return self.kind is Classification.CHARACTERISTIC


def boundary_samples(dom: DomainSpec, gp: GreinerParams, samples: int) -> list[Point]:
    """Points on {phi = 0}.

    Built-in families are rotation invariant around the t axis, so the
    profile curve in the (|z|, t) half-plane is parametrized exactly and
    realized along a single representative z direction.  Generic domains
    are sampled by sign-change bisection along axis-parallel grid rays.
    """
    if samples < 100:
        raise ValidationError(f"samples = {samples} must be >= 100")
    n = gp.n
    pts: list[Point] = []

    def embed(rho: float, t: float) -> Point:
        x = (rho,) + (0.0,) * (n - 1)
        y = (0.0,) * n
        return Point(x, y, t)

    if isinstance(dom, TorusShell):
        theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        for th in theta:
            rho = dom.a + dom.m * math.cos(th)
            if rho < 0.0:
                continue
            pts.append(embed(rho, dom.b + dom.m * math.sin(th)))
    elif isinstance(dom, GreinerBall):
        # profile: (rho^(2 sigma))^2 + t^2 = (r^(2 sigma))^2, one arc rho >= 0
        R = dom.r ** (2 * gp.sigma)
        u = np.linspace(-np.pi / 2.0, np.pi / 2.0, samples)
        for ui in u:
            srho = R * math.cos(ui)
            # snap the poles: fp cos(pi/2) ~ 6e-17 would be inflated by the root
            if srho < R * 1e-12:
                pts.append(embed(0.0, math.copysign(R, ui)))
                continue
            pts.append(embed(srho ** (1.0 / (2 * gp.sigma)), R * math.sin(ui)))
    else:
        pts = _generic_boundary(dom, gp, samples)
    if not pts:
        raise EmptyBoundary("no boundary points found in the box")
    return pts


def _generic_boundary(dom: GenericDomain, gp: GreinerParams, samples: int) -> list[Point]:
    bounds = dom.bounds(gp)
    dim = len(bounds)
    per_axis = max(2, int(round(samples ** (1.0 / dim))))
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in bounds]
    pts: list[Point] = []
    for ray_axis in range(dim):
        others = [a for a in range(dim) if a != ray_axis]
        mesh = np.meshgrid(*[axes[a] for a in others], indexing="ij")
        anchors = np.stack([m.ravel() for m in mesh], axis=-1)
        line = axes[ray_axis]
        for anchor in anchors:
            coords = np.empty(dim)
            for pos, a in enumerate(others):
                coords[a] = anchor[pos]
            vals = []
            for v in line:
                coords[ray_axis] = v
                vals.append(dom.phi(coords.copy()))
            vals = np.asarray(vals)
            for i in range(len(line) - 1):
                if vals[i] == 0.0:
                    coords[ray_axis] = line[i]
                    pts.append(Point.from_coords(coords))
                elif vals[i] * vals[i + 1] < 0.0:
                    root = _bisect_root(dom, coords, ray_axis, line[i], line[i + 1])
                    coords[ray_axis] = root
                    pts.append(Point.from_coords(coords))
    return pts


def _bisect_root(dom: GenericDomain, coords: np.ndarray, axis: int,
                 lo: float, hi: float, iters: int = 60) -> float:
    c = coords.copy()
    c[axis] = lo
    flo = dom.phi(c)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        c[axis] = mid
        fm = dom.phi(c)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _cluster(points: list[Point], radius: float = 1e-3) -> list[Point]:
    clusters: list[list[np.ndarray]] = []
    for p in points:
        c = p.coords()
        for cl in clusters:
            if np.linalg.norm(c - cl[0]) <= radius:
                cl.append(c)
                break
        else:
            clusters.append([c])
    return [Point.from_coords(np.mean(cl, axis=0)) for cl in clusters]


def classify_domain(
    dom: DomainSpec,
    gp: GreinerParams,
    samples: int = 2000,
    tol: float | None = None,
) -> ClassificationResult:
    """Classify a domain by scanning its boundary for horizontal-gradient zeros.

    The characteristic threshold defaults to 1e-6 of the median boundary
    gradient magnitude, making the verdict invariant under rescaling phi.
    Nearby hits are merged to their centroid.
    """
    pts = boundary_samples(dom, gp, samples)
    mags = np.array([math.sqrt(horizontal_gradient_sq(dom, p, gp)) for p in pts])
    scale = float(np.median(mags))
    if tol is None:
        tol = 1e-6 * scale if scale > 0.0 else 1e-12
    hits = [p for p, m in zip(pts, mags) if m <= tol]
    if not hits:
        return ClassificationResult(Classification.NONCHARACTERISTIC, (), scale, tol)
    merged = _cluster(hits)
    return ClassificationResult(Classification.CHARACTERISTIC, tuple(merged), scale, tol)
