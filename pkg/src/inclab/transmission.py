"""Conductivity transmission solves and interior-field uniformity checks.

A bounded inclusion with conductivity ratio ``k`` sits in a background of
conductivity 1 under a uniform applied field ``a``.  The potential is
represented as the applied linear field plus a single layer potential whose
density solves a second-kind boundary integral equation driven by the
adjoint double-layer operator.  This module solves that equation, evaluates
the interior gradient, and quantifies how uniform it is — the property that
distinguishes ellipses among all inclusion shapes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SolveError
from .geometry import (
    BoundaryGrid,
    InteriorSample,
    ShapeSpec,
    discretize,
    interior_points,
    shape_center,
    shape_dim,
    shape_scale,
)
from .errors import InvalidShapeError
from .layerpot import (
    Density,
    _directional_kernel_sum,
    _fine_grid,
    npo_matrix,
    single_layer_eval,
    single_layer_gradient,
    upsample_periodic,
)

__all__ = [
    "Contrast",
    "FieldReport",
    "LambdaReport",
    "DecayReport",
    "solve_density",
    "interior_field",
    "default_interior_sample",
    "lambda_map",
    "k_independence_check",
    "flux_continuity_check",
    "decay_check",
]


@dataclass(frozen=True)
class Contrast:
    """Conductivity ratio of the inclusion relative to the background."""

    k: float

    def __post_init__(self):
        if not (self.k > 0.0) or self.k == 1.0:
            raise ConfigError("contrast k must be positive and different from 1")

    @property
    def coupling(self) -> float:
        """Scalar multiple of the identity in the boundary equation.

        Always exceeds 1/2 in absolute value for admissible k, keeping the
        boundary operator away from the adjoint double-layer spectrum.
        """
        return (self.k + 1.0) / (2.0 * (self.k - 1.0))


def _as_contrast(k) -> Contrast:
    return k if isinstance(k, Contrast) else Contrast(float(k))


@dataclass
class FieldReport:
    """Interior gradient statistics for one applied direction.

    ``delta`` is the maximum relative deviation of the sampled gradient
    from its mean — zero exactly when the interior field is uniform.
    """

    mean_gradient: np.ndarray
    delta: float
    density: Density


@dataclass
class LambdaReport:
    """Applied-direction -> mean-interior-gradient linear map.

    ``uniform`` records whether every basis direction produced a gradient
    deviation below the requested tolerance; when False the matrix is still
    the mean-gradient matrix but does not represent a pointwise field map.
    """

    matrix: np.ndarray
    deltas: np.ndarray
    uniform: bool
    invertible: bool


@dataclass
class DecayReport:
    """Far-field magnitude ratio test for the perturbation potential."""

    radii: tuple[float, float]
    magnitudes: tuple[float, float]
    ratio: float
    expected: float
    rel_error: float
    passed: bool


def solve_density(grid: BoundaryGrid, k, a) -> Density:
    """Solve the boundary equation for the layer density of direction ``a``.

    Dense direct solve of the Nystrom system; the relative residual must
    come back at 1e-10 or better, otherwise a SolveError is raised.
    """
    contrast = _as_contrast(k)
    a = np.asarray(a, dtype=float)
    if a.shape != (grid.dim,):
        raise ConfigError(f"direction must be a {grid.dim}-vector")
    op = npo_matrix(grid)
    system = contrast.coupling * np.eye(grid.n) - op.matrix
    rhs = grid.normals @ a
    values = np.linalg.solve(system, rhs)
    scale = max(1.0, float(np.max(np.abs(rhs))))
    residual = float(np.max(np.abs(system @ values - rhs))) / scale
    if residual > 1e-10:
        raise SolveError(
            f"boundary solve residual {residual:.3e} exceeds 1e-10; "
            "the system is unexpectedly ill-conditioned"
        )
    return Density(values, grid)


def interior_field(
    grid: BoundaryGrid,
    phi: Density,
    a,
    sample: InteriorSample,
) -> FieldReport:
    """Evaluate the total gradient on an interior sample and aggregate it."""
    a = np.asarray(a, dtype=float)
    grads = a[None, :] + single_layer_gradient(grid, phi, sample.points)
    mean = grads.mean(axis=0)
    denom = float(np.linalg.norm(mean))
    if denom == 0.0:
        raise SolveError("mean interior gradient vanished; cannot normalize")
    delta = float(np.max(np.linalg.norm(grads - mean, axis=1))) / denom
    return FieldReport(mean_gradient=mean, delta=delta, density=phi)


def default_interior_sample(
    shape: ShapeSpec,
    grid: BoundaryGrid,
    count: int = 40,
) -> InteriorSample:
    """Interior sample clear of the near-boundary evaluation guard."""
    margin = max(0.12 * shape_scale(shape), 3.0 * float(np.max(grid.spacing)))
    return interior_points(shape, count, margin)


def lambda_map(
    grid: BoundaryGrid,
    k,
    sample: InteriorSample | None = None,
    uniform_tol: float = 1e-6,
) -> LambdaReport:
    """Matrix of mean interior gradients over the basis of applied fields.

    Columns correspond to applied directions e_1..e_d.  The map is
    invertible for every admissible contrast; the report records the
    numerical verdict rather than assuming it.
    """
    contrast = _as_contrast(k)
    if sample is None:
        sample = default_interior_sample(grid.shape, grid)
    d = grid.dim
    cols = []
    deltas = []
    for j in range(d):
        a = np.zeros(d)
        a[j] = 1.0
        phi = solve_density(grid, contrast, a)
        rep = interior_field(grid, phi, a, sample)
        cols.append(rep.mean_gradient)
        deltas.append(rep.delta)
    matrix = np.stack(cols, axis=1)
    deltas = np.asarray(deltas)
    det = float(np.linalg.det(matrix))
    invertible = abs(det) > 1e-12
    return LambdaReport(
        matrix=matrix,
        deltas=deltas,
        uniform=bool(np.all(deltas <= uniform_tol)),
        invertible=invertible,
    )


def k_independence_check(
    shape: ShapeSpec,
    ks,
    n: int = 256,
    sample: InteriorSample | None = None,
) -> list[dict]:
    """Gradient-uniformity deviation per contrast and basis direction.

    Returns one record per (k, direction) pair with the mean gradient and
    its relative deviation; uniform shapes keep every deviation small for
    every admissible contrast simultaneously.
    """
    ks = [float(k) for k in ks]
    if len(ks) < 2:
        raise ConfigError("need at least two contrast values to compare")
    contrasts = [_as_contrast(k) for k in ks]
    grid = discretize(shape, n)
    if sample is None:
        sample = default_interior_sample(shape, grid)
    d = grid.dim
    records = []
    for contrast in contrasts:
        for j in range(d):
            a = np.zeros(d)
            a[j] = 1.0
            phi = solve_density(grid, contrast, a)
            rep = interior_field(grid, phi, a, sample)
            records.append(
                {
                    "k": contrast.k,
                    "direction": j + 1,
                    "mean_gradient": tuple(float(v) for v in rep.mean_gradient),
                    "delta": rep.delta,
                }
            )
    return records


def flux_continuity_check(
    grid: BoundaryGrid,
    phi: Density,
    k,
    a,
    h: float | None = None,
) -> float:
    """Max mismatch of k x (interior normal flux) against the exterior flux.

    Normal derivatives are probed by Richardson-extrapolated one-sided
    differences of the full potential at offsets h and 2h along the normal.
    """
    contrast = _as_contrast(k)
    a = np.asarray(a, dtype=float)
    if grid.params is None:
        raise InvalidShapeError("flux_continuity_check needs a smooth parametrized grid")
    if h is None:
        h = 1e-4 * shape_scale(grid.shape)
    fine = _fine_grid(grid, h)
    q = upsample_periodic(phi.values, fine.n) * fine.weights
    probes = np.concatenate([grid.nodes + s * h * grid.normals for s in (1, 2, -1, -2)])
    dirs = np.concatenate([grid.normals] * 4)
    g = _directional_kernel_sum(fine, q, probes, dirs).reshape(4, grid.n)
    applied = grid.normals @ a
    outer = applied + 2.0 * g[0] - g[1]
    inner = applied + 2.0 * g[2] - g[3]
    scale = max(1.0, float(np.max(np.abs(outer))))
    return float(np.max(np.abs(contrast.k * inner - outer))) / scale


def decay_check(
    shape: ShapeSpec,
    k,
    a,
    n: int = 256,
    factors: tuple[float, float] = (10.0, 20.0),
    n_angles: int = 32,
    rel_tol: float = 0.2,
) -> DecayReport:
    """Ratio test for the far-field decay of the perturbation potential.

    The perturbation decays like distance^(1-d); doubling the evaluation
    radius should therefore scale its magnitude by 2^(1-d).  The report
    compares the measured ratio against that power law.
    """
    contrast = _as_contrast(k)
    a = np.asarray(a, dtype=float)
    grid = discretize(shape, n)
    phi = solve_density(grid, contrast, a)
    scale = shape_scale(shape)
    center = shape_center(shape)
    d = grid.dim
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    if d == 2:
        dirs = np.stack([np.cos(t), np.sin(t)], axis=1)
    else:
        u = np.linspace(-0.9, 0.9, 8)
        tt = 2 * np.pi * np.arange(8) / 8
        U, T = np.meshgrid(u, tt, indexing="ij")
        s = np.sqrt(1 - U * U)
        dirs = np.stack([s * np.cos(T), s * np.sin(T), U], axis=-1).reshape(-1, 3)
    mags = []
    radii = tuple(f * scale for f in factors)
    for radius in radii:
        pts = center[None, :] + radius * dirs
        vals = single_layer_eval(grid, phi, pts)
        mags.append(float(np.max(np.abs(vals))))
    ratio = mags[0] / mags[1]
    expected = (radii[1] / radii[0]) ** (d - 1)
    rel_error = abs(ratio / expected - 1.0)
    return DecayReport(
        radii=radii,
        magnitudes=(mags[0], mags[1]),
        ratio=ratio,
        expected=expected,
        rel_error=rel_error,
        passed=rel_error <= rel_tol,
    )
