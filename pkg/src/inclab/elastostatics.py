"""Kelvin fundamental solution and hydrostatic trace identities.

For an isotropic elastic medium the matrix fundamental solution (Kelvin
matrix) couples a point force to the displacement field.  This module
evaluates that matrix, forms conormal derivatives (tractions) of linear
displacement fields, and verifies the interior identities that relate the
elastic single layer of the hydrostatic traction to a plain inverse-distance
moment of the normal — the computational core of the elastic uniformity
argument for ellipsoids.

Both sides of each identity are evaluated literally: the right-hand sides
use the plain positive kernel 1/(4 pi |x-y|), making the checks independent
of any global sign convention chosen elsewhere for harmonic layer
potentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidShapeError
from .geometry import BoundaryGrid
from .layerpot import _guard

__all__ = [
    "LameParams",
    "IdentityReport",
    "kelvin_matrix",
    "conormal_linear",
    "elastic_single_layer",
    "plain_kernel_moment",
    "trace_identity_check",
    "kolosov",
]


@dataclass(frozen=True)
class LameParams:
    """Isotropic elastic constants of the matrix and inclusion phases.

    ``lam, mu`` describe the background (matrix) material and
    ``lam_inc, mu_inc`` the inclusion.  Admissibility requires strong
    ellipticity of both phases and that the phase contrasts of the two
    moduli do not pull in opposite directions.
    """

    lam: float
    mu: float
    lam_inc: float
    mu_inc: float

    def __post_init__(self):
        d = 3
        if not self.mu > 0:
            raise ConfigError("mu must be positive")
        if not d * self.lam + 2 * self.mu > 0:
            raise ConfigError("3*lam + 2*mu must be positive")
        if not self.mu_inc > 0:
            raise ConfigError("mu_inc must be positive")
        if not d * self.lam_inc + 2 * self.mu_inc > 0:
            raise ConfigError("3*lam_inc + 2*mu_inc must be positive")
        if (self.lam - self.lam_inc) * (self.mu - self.mu_inc) < 0:
            raise ConfigError(
                "(lam - lam_inc) * (mu - mu_inc) must be >= 0: the two "
                "moduli contrasts must not have opposite signs"
            )


def _alphas(lam: float, mu: float) -> tuple[float, float]:
    """Kelvin coefficients; their sum is 1/mu, their difference 1/(2mu+lam)."""
    a1 = 0.5 * (1.0 / mu + 1.0 / (2.0 * mu + lam))
    a2 = 0.5 * (1.0 / mu - 1.0 / (2.0 * mu + lam))
    return a1, a2


def kelvin_matrix(x, lam: float, mu: float) -> np.ndarray:
    """Matrix fundamental solution at displacement(s) ``x`` (3-vectors).

    Returns shape (3, 3) for a single point or (m, 3, 3) for a batch;
    symmetric and homogeneous of degree -1 in ``x``.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    if pts.shape[-1] != 3:
        raise ConfigError("the Kelvin matrix is defined for 3-vectors")
    r = np.linalg.norm(pts, axis=-1)
    if np.any(r == 0.0):
        raise ConfigError("the Kelvin matrix is singular at the origin")
    a1, a2 = _alphas(lam, mu)
    eye = np.eye(3)
    out = (
        -a1 / (4 * np.pi) * eye[None, :, :] / r[:, None, None]
        - a2 / (4 * np.pi) * pts[:, :, None] * pts[:, None, :] / (r**3)[:, None, None]
    )
    return out[0] if single else out


def conormal_linear(A, lam: float, mu: float, n) -> np.ndarray:
    """Traction of the linear displacement field x -> Ax across normal n.

    Evaluates lam * tr(A) * n + mu * (A + A^T) n; accepts a single unit
    normal (d,) or a stack (m, d).
    """
    A = np.asarray(A, dtype=float)
    n = np.asarray(n, dtype=float)
    sym = A + A.T
    return lam * np.trace(A) * n + mu * n @ sym.T


def elastic_single_layer(
    grid: BoundaryGrid,
    psi: np.ndarray,
    points,
    lam: float,
    mu: float,
) -> np.ndarray:
    """Kelvin single layer of a vector density at interior points.

    ``psi`` holds one 3-vector per node; returns one 3-vector per
    evaluation point.  Points must respect the near-boundary margin.
    """
    if grid.dim != 3:
        raise InvalidShapeError("the Kelvin layer is evaluated on 3D surface grids")
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (grid.n, 3):
        raise ConfigError("density must supply one 3-vector per grid node")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _guard(grid, points)
    a1, a2 = _alphas(lam, mu)
    out = np.empty((len(points), 3))
    wpsi = psi * grid.weights[:, None]
    for i, x in enumerate(points):
        dx = x[None, :] - grid.nodes
        r = np.linalg.norm(dx, axis=1)
        iso = -(a1 / (4 * np.pi)) * (wpsi / r[:, None]).sum(axis=0)
        proj = (dx * wpsi).sum(axis=1) / r**3
        rad = -(a2 / (4 * np.pi)) * (dx * proj[:, None]).sum(axis=0)
        out[i] = iso + rad
    return out


def plain_kernel_moment(grid: BoundaryGrid, values: np.ndarray, points) -> np.ndarray:
    """Boundary integral of values against the kernel 1/(4 pi |x-y|).

    The positive-kernel functional used verbatim on the right-hand sides
    of the trace identities; ``values`` may be (n,) or (n, c).
    """
    if grid.dim != 3:
        raise InvalidShapeError("the plain kernel moment is a 3D surface integral")
    values = np.asarray(values, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    _guard(grid, points)
    flat = values if values.ndim == 2 else values[:, None]
    out = np.empty((len(points), flat.shape[1]))
    wvals = flat * grid.weights[:, None]
    for i, x in enumerate(points):
        r = np.linalg.norm(x[None, :] - grid.nodes, axis=1)
        out[i] = (wvals / r[:, None]).sum(axis=0)
    out /= 4 * np.pi
    return out if values.ndim == 2 else out[:, 0]


@dataclass
class IdentityReport:
    """Relative residuals of the hydrostatic trace identities.

    Each residual is max |lhs - rhs| over points and components, divided
    by the largest right-hand-side magnitude (or by the Kelvin-layer
    magnitude for the all-zero difference case of equal phases).
    """

    matrix_phase: float
    inclusion_phase: float
    difference: float
    green: float


def _relative(lhs: np.ndarray, rhs: np.ndarray, floor: float) -> float:
    scale = max(float(np.max(np.abs(rhs))), floor)
    return float(np.max(np.abs(lhs - rhs))) / scale


def trace_identity_check(
    grid: BoundaryGrid,
    params: LameParams,
    points,
) -> IdentityReport:
    """Check the interior identities tying Kelvin layers to plain moments.

    The hydrostatic displacement x -> x has traction (2 mu + 3 lam) n in
    each phase; its Kelvin single layer (matrix-phase kernel) must equal
    the corresponding multiple of the plain inverse-distance moment of
    the normal.  The difference identity and the closed-surface Green
    identity for the inverse-distance kernel are checked alongside.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    eye = np.eye(3)
    trac = conormal_linear(eye, params.lam, params.mu, grid.normals)
    trac_inc = conormal_linear(eye, params.lam_inc, params.mu_inc, grid.normals)
    layer = elastic_single_layer(grid, trac, points, params.lam, params.mu)
    layer_inc = elastic_single_layer(grid, trac_inc, points, params.lam, params.mu)
    moments = plain_kernel_moment(grid, grid.normals, points)

    denom = 2 * params.mu + params.lam
    coef = -(2 * params.mu + 3 * params.lam) / denom
    coef_inc = -(2 * params.mu_inc + 3 * params.lam_inc) / denom
    floor = 1e-300
    res_matrix = _relative(layer, coef * moments, floor)
    res_inc = _relative(layer_inc, coef_inc * moments, floor)
    diff_lhs = layer_inc - layer
    diff_rhs = (coef_inc - coef) * moments
    if np.max(np.abs(diff_rhs)) == 0.0:
        res_diff = float(np.max(np.abs(diff_lhs)))
    else:
        res_diff = _relative(diff_lhs, diff_rhs, floor)

    green_lhs = np.empty_like(points)
    green_rhs = np.empty_like(points)
    for i, x in enumerate(points):
        dx = x[None, :] - grid.nodes
        r = np.linalg.norm(dx, axis=1)
        flux = (dx * grid.normals).sum(-1) / r**3
        green_lhs[i] = (dx * (flux * grid.weights)[:, None]).sum(axis=0)
        green_rhs[i] = -((grid.normals / r[:, None]) * grid.weights[:, None]).sum(axis=0)
    worst_green = _relative(green_lhs, green_rhs, floor)

    return IdentityReport(
        matrix_phase=res_matrix,
        inclusion_phase=res_inc,
        difference=res_diff,
        green=worst_green,
    )


def kolosov(lam: float, mu: float) -> float:
    """Plane-elasticity material constant (lam + 3 mu)/(lam + mu)."""
    if lam + mu == 0:
        raise ConfigError("lam + mu must be nonzero")
    return (lam + 3.0 * mu) / (lam + mu)
