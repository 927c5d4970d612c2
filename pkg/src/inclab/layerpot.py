"""Single-layer potentials and the boundary trace operator.

Conventions: the fundamental solution G satisfies (Laplacian G) = delta,
so G(x) = (1/2 pi) log|x| in 2D and G(x) = -1/(4 pi |x|) in 3D.  The
single layer is S[phi](x) = integral G(x - y) phi(y) dsigma(y), its normal
derivative jumps by the density,

    dS[phi]/dn (one-sided) = (+-1/2 I + K*) phi,

and K* is the trace operator with kernel <x - y, n(x)> / (omega_d |x-y|^d).
On the unit sphere K*[n_j] = n_j / 6 and on any ellipse K*[n_j] =
(1/2 - a_j) n_j with a_j the depolarization factors; these anchors pin the
sign convention of every routine here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidShapeError, NearBoundaryError
from .geometry import BoundaryGrid, discretize, shape_scale

_CHUNK = 4 << 20  # max pairwise entries held at once during evaluation


@dataclass
class Density:
    """Boundary density given by node values on a grid."""

    values: np.ndarray
    grid: BoundaryGrid


@dataclass
class NpoOperator:
    """Dense Nystrom realization of the trace operator K*."""

    matrix: np.ndarray
    grid: BoundaryGrid

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.matrix @ values


def _values(phi) -> np.ndarray:
    return phi.values if isinstance(phi, Density) else np.asarray(phi, dtype=float)


def _guard(grid: BoundaryGrid, points: np.ndarray) -> None:
    d2 = ((points[:, None, :] - grid.nodes[None, :, :]) ** 2).sum(-1)
    idx = np.argmin(d2, axis=1)
    dist = np.sqrt(d2[np.arange(len(points)), idx])
    bad = dist < 2.0 * grid.spacing[idx]
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NearBoundaryError(
            f"point {points[i]} is {dist[i]:.3e} from the boundary; "
            f"need >= {2 * grid.spacing[idx[i]]:.3e} for this grid"
        )


def single_layer_eval(grid: BoundaryGrid, phi, points: np.ndarray) -> np.ndarray:
    """S[phi] at off-boundary points (guarded against near-boundary loss)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _guard(grid, points)
    return _single_layer_raw(grid, _values(phi), points)


def single_layer_gradient(grid: BoundaryGrid, phi, points: np.ndarray) -> np.ndarray:
    """grad S[phi] at off-boundary points (guarded)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _guard(grid, points)
    return _single_layer_gradient_raw(grid, _values(phi), points)


def _single_layer_raw(grid, values, points):
    q = values * grid.weights
    out = np.empty(len(points))
    step = max(1, _CHUNK // grid.n)
    for i0 in range(0, len(points), step):
        dx = points[i0 : i0 + step, None, :] - grid.nodes[None, :, :]
        r2 = (dx * dx).sum(-1)
        if grid.dim == 2:
            out[i0 : i0 + step] = (np.log(r2) / (4 * np.pi)) @ q
        else:
            out[i0 : i0 + step] = (-1.0 / (4 * np.pi * np.sqrt(r2))) @ q
    return out


def _single_layer_gradient_raw(grid, values, points):
    q = values * grid.weights
    out = np.empty((len(points), grid.dim))
    step = max(1, _CHUNK // grid.n)
    for i0 in range(0, len(points), step):
        dx = points[i0 : i0 + step, None, :] - grid.nodes[None, :, :]
        r2 = (dx * dx).sum(-1)
        if grid.dim == 2:
            ker = 1.0 / (2 * np.pi * r2)
        else:
            ker = 1.0 / (4 * np.pi * r2 * np.sqrt(r2))
        out[i0 : i0 + step] = np.einsum("ps,psd->pd", ker, dx * q[None, :, None])
    return out


def _directional_kernel_sum(grid, q, points, directions):
    """sum_s <x - y_s, dir(x)> / (2 pi |x - y_s|^2) q_s, chunked over x."""
    out = np.empty(len(points))
    sx, sy = grid.nodes[:, 0], grid.nodes[:, 1]
    step = max(1, _CHUNK // grid.n)
    for i0 in range(0, len(points), step):
        dx = points[i0 : i0 + step, 0:1] - sx[None, :]
        dy = points[i0 : i0 + step, 1:2] - sy[None, :]
        num = dx * directions[i0 : i0 + step, 0:1]
        num += dy * directions[i0 : i0 + step, 1:2]
        dx *= dx
        dy *= dy
        dx += dy
        num /= dx
        out[i0 : i0 + step] = (num @ q) / (2 * np.pi)
    return out


def npo_matrix(grid: BoundaryGrid) -> NpoOperator:
    """Assemble the dense K* matrix on a 2D boundary grid.

    Off-diagonal entries are the plain kernel times the target-free weight;
    the diagonal uses the smooth-curve limit kappa/(4 pi) on parametrized
    curves and is zero on polygon grids (the kernel vanishes identically
    along each straight edge).
    """
    if grid.dim != 2:
        raise InvalidShapeError("K* matrices are assembled for 2D grids only")
    dx = grid.nodes[:, None, :] - grid.nodes[None, :, :]
    r2 = (dx * dx).sum(-1)
    np.fill_diagonal(r2, 1.0)
    num = (dx * grid.normals[:, None, :]).sum(-1)
    mat = num / (2 * np.pi * r2) * grid.weights[None, :]
    if grid.curvature is not None:
        np.fill_diagonal(mat, grid.curvature / (4 * np.pi) * grid.weights)
    else:
        np.fill_diagonal(mat, 0.0)
    return NpoOperator(matrix=mat, grid=grid)


# ---------------------------------------------------------------------------
# jump relation check

def upsample_periodic(values: np.ndarray, n_fine: int) -> np.ndarray:
    """Trigonometric interpolation of equispaced periodic samples."""
    n = len(values)
    if n_fine == n:
        return np.asarray(values, dtype=float)
    spec = np.fft.rfft(values)
    if n % 2 == 0:
        spec[-1] *= 0.5  # split the Nyquist bin between +-n/2
    pad = np.zeros(n_fine // 2 + 1, dtype=complex)
    pad[: len(spec)] = spec
    return np.fft.irfft(pad, n=n_fine) * (n_fine / n)


def _fine_grid(grid: BoundaryGrid, h: float) -> BoundaryGrid:
    # Trapezoid sums for targets at distance h lose accuracy like
    # exp(-n h / max speed); size the evaluation grid so that error ~ 2e-6.
    need = 13.0 * float(np.max(grid.speed)) / h
    n_fine = 1 << int(np.ceil(np.log2(max(need, 4096))))
    return discretize(grid.shape, min(n_fine, 1 << 19))


def jump_check(grid: BoundaryGrid, phi, h: float | None = None) -> float:
    """Verify the one-sided normal derivative jump of the single layer.

    The derivative limits are formed from probes at x +- h n(x) and
    x +- 2h n(x) with Richardson extrapolation, evaluated on a refined copy
    of the grid (the density is carried over by trigonometric
    interpolation) so the probes stay several node spacings away from the
    quadrature.  Returns the max mismatch against (+-1/2 I + K*) phi.
    """
    if grid.params is None:
        raise InvalidShapeError("jump_check needs a smooth parametrized grid")
    values = _values(phi)
    if h is None:
        h = 1e-4 * shape_scale(grid.shape)
    fine = _fine_grid(grid, h)
    q = upsample_periodic(values, fine.n) * fine.weights

    probes = np.concatenate([grid.nodes + s * h * grid.normals for s in (1, 2, -1, -2)])
    dirs = np.concatenate([grid.normals] * 4)
    g = _directional_kernel_sum(fine, q, probes, dirs).reshape(4, grid.n)
    d_plus = 2 * g[0] - g[1]
    d_minus = 2 * g[2] - g[3]

    kphi = npo_matrix(grid).apply(values)
    mis_plus = np.abs(d_plus - (0.5 * values + kphi))
    mis_minus = np.abs(d_minus - (-0.5 * values + kphi))
    return float(max(mis_plus.max(), mis_minus.max()))


# ---------------------------------------------------------------------------
# Green identity on closed surfaces

def green_identity_check(grid: BoundaryGrid, points: np.ndarray) -> float:
    """Residual of the closed-surface identity

        int (x_j - y_j) <x - y, n(y)> / |x-y|^3 dsigma(y)
            = - int n_j(y) / |x-y| dsigma(y),

    valid for x strictly inside; returns the max absolute residual over
    the requested interior points and components j.
    """
    if grid.dim != 3:
        raise InvalidShapeError("the identity is checked on 3D surface grids")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _guard(grid, points)
    worst = 0.0
    for x in points:
        dx = x[None, :] - grid.nodes
        r = np.linalg.norm(dx, axis=1)
        flux = (dx * grid.normals).sum(-1) / r**3
        lhs = (dx * (flux * grid.weights)[:, None]).sum(axis=0)
        rhs = -(grid.normals / r[:, None] * grid.weights[:, None]).sum(axis=0)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
