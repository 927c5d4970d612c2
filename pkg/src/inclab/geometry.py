"""Shape descriptions, boundary grids, and interior sampling.

Shapes are plain dataclasses.  ``discretize`` turns a shape into a
quadrature-ready boundary grid: equispaced-parameter trapezoid nodes for
smooth curves (spectrally accurate), per-edge Gauss-Legendre panels with
dyadic grading into the corners for polygons, and a Gauss-Legendre x
trapezoid product grid for ellipsoids.  All normals are outward unit
vectors; all weights are positive and sum to the surface measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySampleError, InvalidShapeError, ResolutionError

# Gauss-Legendre order per polygon panel and grading depth into corners.
PANEL_ORDER = 8
CORNER_DEPTH = 6


@dataclass(frozen=True)
class Ellipse:
    """Ellipse with semi-axes ``a``, ``b``, optional center and rotation."""

    a: float
    b: float
    center: tuple[float, float] = (0.0, 0.0)
    rotation: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise InvalidShapeError("ellipse semi-axes must be positive")


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, vertices in counterclockwise order."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise InvalidShapeError("polygon needs at least 3 planar vertices")
        object.__setattr__(self, "vertices", tuple(map(tuple, v)))
        if _signed_area(v) <= 0:
            raise InvalidShapeError("polygon vertices must be counterclockwise")
        if not _is_simple(v):
            raise InvalidShapeError("polygon must be simple (no self-intersection)")


@dataclass(frozen=True)
class FourierStar:
    """Star-shaped curve r(t) = r0 (1 + sum eps_m cos mt + del_m sin mt).

    ``modes`` is a sequence of (m, cos_coefficient, sin_coefficient) with
    integer m >= 2; the radius must stay strictly positive.
    """

    r0: float
    modes: tuple[tuple[int, float, float], ...] = ()

    def __post_init__(self):
        if not self.r0 > 0:
            raise InvalidShapeError("base radius must be positive")
        norm = []
        for m, c, s in self.modes:
            if int(m) != m or m < 2:
                raise InvalidShapeError("star modes must be integers >= 2")
            norm.append((int(m), float(c), float(s)))
        object.__setattr__(self, "modes", tuple(norm))
        t = np.linspace(0.0, 2 * np.pi, 4096, endpoint=False)
        if np.min(_star_radius(self, t)) <= 0:
            raise InvalidShapeError("star radius must stay strictly positive")


@dataclass(frozen=True)
class Ellipsoid:
    """Axis-aligned ellipsoid with semi-axes ``c1, c2, c3 > 0``."""

    c1: float
    c2: float
    c3: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0 and self.c3 > 0):
            raise InvalidShapeError("ellipsoid semi-axes must be positive")


@dataclass(frozen=True)
class Box:
    """Axis-aligned 3D box given by half-extents about a center.

    Supporting shape for volume-potential checks on cornered solids; it has
    no boundary grid.
    """

    half: tuple[float, float, float]
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not all(h > 0 for h in self.half):
            raise InvalidShapeError("box half-extents must be positive")


ShapeSpec = Ellipse | Polygon | FourierStar | Ellipsoid | Box


@dataclass
class BoundaryGrid:
    """Quadrature nodes on a shape boundary.

    Attributes
    ----------
    shape : the generating shape description
    nodes : (n, d) node coordinates
    normals : (n, d) outward unit normals
    weights : (n,) positive quadrature weights, summing to the measure of
        the boundary
    params : (n,) parameter values (smooth 2D curves only)
    speed : (n,) parametrization speed |dy/dt| (smooth 2D curves only)
    curvature : (n,) signed curvature (smooth 2D curves only; positive on
        convex arcs of a counterclockwise curve)
    spacing : (n,) distance to the nearest neighboring node, used by the
        near-boundary evaluation guard
    """

    shape: ShapeSpec
    nodes: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    params: np.ndarray | None = None
    speed: np.ndarray | None = None
    curvature: np.ndarray | None = None
    spacing: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.spacing is None:
            d = np.linalg.norm(np.diff(self.nodes, axis=0, append=self.nodes[:1]), axis=1)
            self.spacing = np.minimum(d, np.roll(d, 1))
        nrm = np.linalg.norm(self.normals, axis=1)
        if np.max(np.abs(nrm - 1.0)) > 1e-12:
            raise InvalidShapeError("normals must be unit vectors")
        if np.any(self.weights <= 0):
            raise InvalidShapeError("quadrature weights must be positive")

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def n(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class InteriorSample:
    """Deterministic interior evaluation points at a safety margin."""

    points: np.ndarray
    margin: float


# ---------------------------------------------------------------------------
# parametrizations

def _star_radius(shape: FourierStar, t: np.ndarray) -> np.ndarray:
    r = np.ones_like(t)
    for m, c, s in shape.modes:
        r = r + c * np.cos(m * t) + s * np.sin(m * t)
    return shape.r0 * r


def _star_radius_derivs(shape: FourierStar, t: np.ndarray):
    r = np.ones_like(t)
    r1 = np.zeros_like(t)
    r2 = np.zeros_like(t)
    for m, c, s in shape.modes:
        cm, sm = np.cos(m * t), np.sin(m * t)
        r += c * cm + s * sm
        r1 += m * (-c * sm + s * cm)
        r2 += m * m * (-c * cm - s * sm)
    return shape.r0 * r, shape.r0 * r1, shape.r0 * r2


def _rotation(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def curve_frame(shape: Ellipse | FourierStar, t: np.ndarray):
    """Positions, outward normals, speed and curvature at parameters ``t``."""
    if isinstance(shape, Ellipse):
        a, b = shape.a, shape.b
        p = np.stack([a * np.cos(t), b * np.sin(t)], axis=1)
        d1 = np.stack([-a * np.sin(t), b * np.cos(t)], axis=1)
        speed = np.linalg.norm(d1, axis=1)
        kappa = a * b / speed**3
        R = _rotation(shape.rotation)
        p = p @ R.T + np.asarray(shape.center)
        d1 = d1 @ R.T
    elif isinstance(shape, FourierStar):
        r, r1, r2 = _star_radius_derivs(shape, t)
        ct, st = np.cos(t), np.sin(t)
        p = np.stack([r * ct, r * st], axis=1)
        d1 = np.stack([r1 * ct - r * st, r1 * st + r * ct], axis=1)
        speed = np.sqrt(r * r + r1 * r1)
        kappa = (r * r + 2 * r1 * r1 - r * r2) / speed**3
    else:
        raise InvalidShapeError(f"not a smooth curve: {type(shape).__name__}")
    normals = np.stack([d1[:, 1], -d1[:, 0]], axis=1) / speed[:, None]
    return p, normals, speed, kappa


# ---------------------------------------------------------------------------
# discretize

def discretize(shape: ShapeSpec, n) -> BoundaryGrid:
    """Build a boundary quadrature grid.

    ``n`` is the node count for smooth curves (>= 64), the per-edge node
    count before corner grading for polygons (>= 16), and either an int
    (polar count; azimuthal is doubled) or an (n_polar, n_azimuth) pair for
    ellipsoids.
    """
    if isinstance(shape, (Ellipse, FourierStar)):
        n = int(n)
        if n < 64:
            raise ResolutionError("smooth curves need n >= 64")
        t = 2 * np.pi * np.arange(n) / n
        p, normals, speed, kappa = curve_frame(shape, t)
        w = speed * (2 * np.pi / n)
        return BoundaryGrid(shape, p, normals, w, params=t, speed=speed, curvature=kappa)
    if isinstance(shape, Polygon):
        return _discretize_polygon(shape, int(n))
    if isinstance(shape, Ellipsoid):
        return _discretize_ellipsoid(shape, n)
    raise InvalidShapeError(f"no boundary grid for {type(shape).__name__}")


def _panel_breaks() -> list[tuple[float, float]]:
    """Dyadic subdivision of [0, 1] toward 0, CORNER_DEPTH levels."""
    cuts = [2.0 ** (-j) for j in range(CORNER_DEPTH, 0, -1)]
    segs = [(0.0, cuts[0])]
    segs += [(cuts[j], cuts[j + 1]) for j in range(len(cuts) - 1)]
    segs.append((cuts[-1], 1.0))
    return segs


def _discretize_polygon(shape: Polygon, n_per_edge: int) -> BoundaryGrid:
    if n_per_edge < 16:
        raise ResolutionError("polygons need n >= 16 per edge")
    verts = np.asarray(shape.vertices, dtype=float)
    q = PANEL_ORDER
    base = max(2, int(np.ceil(n_per_edge / q)))
    bp = np.linspace(0.0, 1.0, base + 1)
    pieces: list[tuple[float, float]] = []
    lo, hi = bp[0], bp[1]
    pieces += [(lo + (hi - lo) * s0, lo + (hi - lo) * s1) for s0, s1 in _panel_breaks()]
    pieces += [(bp[i], bp[i + 1]) for i in range(1, base - 1)]
    lo, hi = bp[-2], bp[-1]
    pieces += [(hi - (hi - lo) * s1, hi - (hi - lo) * s0) for s0, s1 in reversed(_panel_breaks())]
    gx, gw = np.polynomial.legendre.leggauss(q)
    nodes, normals, weights = [], [], []
    m = len(verts)
    for e in range(m):
        v0, v1 = verts[e], verts[(e + 1) % m]
        edge = v1 - v0
        elen = float(np.linalg.norm(edge))
        tang = edge / elen
        nrm = np.array([tang[1], -tang[0]])
        for lo, hi in pieces:
            xs = v0 + (0.5 * (hi - lo) * gx + 0.5 * (hi + lo))[:, None] * edge
            nodes.append(xs)
            normals.append(np.broadcast_to(nrm, (q, 2)))
            weights.append(0.5 * (hi - lo) * gw * elen)
    return BoundaryGrid(
        shape,
        np.concatenate(nodes),
        np.ascontiguousarray(np.concatenate(normals)),
        np.concatenate(weights),
    )


def _discretize_ellipsoid(shape: Ellipsoid, n) -> BoundaryGrid:
    if isinstance(n, tuple):
        n_pol, n_az = n
    else:
        n_pol, n_az = int(n), 2 * int(n)
    if n_pol < 16 or n_az < 32:
        raise ResolutionError("ellipsoids need at least a 16 x 32 grid")
    c1, c2, c3 = shape.c1, shape.c2, shape.c3
    u, wu = np.polynomial.legendre.leggauss(n_pol)
    phi = 2 * np.pi * np.arange(n_az) / n_az
    wphi = 2 * np.pi / n_az
    U, P = np.meshgrid(u, phi, indexing="ij")
    s = np.sqrt(1.0 - U * U)
    rel = np.stack([c1 * s * np.cos(P), c2 * s * np.sin(P), c3 * U], axis=-1).reshape(-1, 3)
    nodes = rel + np.asarray(shape.center)
    jac = np.sqrt(
        (c2 * c3) ** 2 * (1 - U * U) * np.cos(P) ** 2
        + (c1 * c3) ** 2 * (1 - U * U) * np.sin(P) ** 2
        + (c1 * c2) ** 2 * U * U
    )
    weights = (jac * wu[:, None] * wphi).reshape(-1)
    grad = rel / np.array([c1 * c1, c2 * c2, c3 * c3])
    normals = grad / np.linalg.norm(grad, axis=1)[:, None]
    spacing = np.full(len(nodes), max(c1, c2, c3) * np.pi / min(n_pol, n_az // 2))
    return BoundaryGrid(shape, nodes, normals, weights, spacing=spacing)


# ---------------------------------------------------------------------------
# measure

def measure(shape: ShapeSpec) -> float:
    """Area (2D) or volume (3D) enclosed by the shape."""
    if isinstance(shape, Ellipse):
        return np.pi * shape.a * shape.b
    if isinstance(shape, Polygon):
        return float(_signed_area(np.asarray(shape.vertices)))
    if isinstance(shape, FourierStar):
        t = 2 * np.pi * np.arange(4096) / 4096
        r = _star_radius(shape, t)
        return float(0.5 * np.mean(r * r) * 2 * np.pi)
    if isinstance(shape, Ellipsoid):
        return 4.0 / 3.0 * np.pi * shape.c1 * shape.c2 * shape.c3
    if isinstance(shape, Box):
        h = shape.half
        return 8.0 * h[0] * h[1] * h[2]
    raise InvalidShapeError(f"unknown shape {type(shape).__name__}")


def shape_dim(shape: ShapeSpec) -> int:
    return 3 if isinstance(shape, (Ellipsoid, Box)) else 2


def shape_scale(shape: ShapeSpec) -> float:
    """Characteristic linear size (largest center-to-boundary distance)."""
    if isinstance(shape, Ellipse):
        return max(shape.a, shape.b)
    if isinstance(shape, Polygon):
        v = np.asarray(shape.vertices)
        return float(np.max(np.linalg.norm(v - v.mean(axis=0), axis=1)))
    if isinstance(shape, FourierStar):
        t = 2 * np.pi * np.arange(4096) / 4096
        return float(np.max(_star_radius(shape, t)))
    if isinstance(shape, Ellipsoid):
        return max(shape.c1, shape.c2, shape.c3)
    if isinstance(shape, Box):
        return float(np.linalg.norm(shape.half))
    raise InvalidShapeError(f"unknown shape {type(shape).__name__}")


def shape_center(shape: ShapeSpec) -> np.ndarray:
    if isinstance(shape, Ellipse):
        return np.asarray(shape.center, dtype=float)
    if isinstance(shape, Polygon):
        v = np.asarray(shape.vertices)
        x, y = v[:, 0], v[:, 1]
        xr, yr = np.roll(x, -1), np.roll(y, -1)
        cross = x * yr - xr * y
        area = cross.sum() / 2.0
        cx = np.sum((x + xr) * cross) / (6 * area)
        cy = np.sum((y + yr) * cross) / (6 * area)
        return np.array([cx, cy])
    if isinstance(shape, FourierStar):
        return np.zeros(2)
    if isinstance(shape, Ellipsoid):
        return np.asarray(shape.center, dtype=float)
    if isinstance(shape, Box):
        return np.asarray(shape.center, dtype=float)
    raise InvalidShapeError(f"unknown shape {type(shape).__name__}")


# ---------------------------------------------------------------------------
# interior sampling

def _margin_ok(shape: ShapeSpec, pts: np.ndarray, margin: float) -> np.ndarray:
    """True where a point keeps at least ``margin`` distance to the boundary.

    Conservative per shape: analytic bounds for ellipses/ellipsoids/boxes,
    exact edge distances for polygons, dense-polyline distance for stars
    (chords of a curve underestimate the true clearance, never overestimate
    it on the inside).
    """
    eps = 1e-12
    if isinstance(shape, Ellipse):
        R = _rotation(-shape.rotation)
        q = (pts - np.asarray(shape.center)) @ R.T
        rho = np.sqrt((q[:, 0] / shape.a) ** 2 + (q[:, 1] / shape.b) ** 2)
        return min(shape.a, shape.b) * (1.0 - rho) >= margin - eps
    if isinstance(shape, Ellipsoid):
        c = np.array([shape.c1, shape.c2, shape.c3])
        rho = np.sqrt((((pts - np.asarray(shape.center)) / c) ** 2).sum(axis=1))
        return np.min(c) * (1.0 - rho) >= margin - eps
    if isinstance(shape, Box):
        d = np.asarray(shape.half) - np.abs(pts - np.asarray(shape.center))
        return np.min(d, axis=1) >= margin - eps
    if isinstance(shape, Polygon):
        v = np.asarray(shape.vertices)
        inside = _points_in_polygon(pts, v)
        return inside & (_dist_to_segments(pts, v) >= margin - eps)
    if isinstance(shape, FourierStar):
        t = 2 * np.pi * np.arange(2048) / 2048
        r = _star_radius(shape, t)
        poly = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        inside = np.linalg.norm(pts, axis=1) < _star_radius(shape, theta)
        return inside & (_dist_to_segments(pts, poly) >= margin - eps)
    raise InvalidShapeError(f"unknown shape {type(shape).__name__}")


def _bbox(shape: ShapeSpec) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(shape, Box):
        c, h = np.asarray(shape.center), np.asarray(shape.half)
        return c - h, c + h
    if isinstance(shape, Ellipsoid):
        c = np.array([shape.c1, shape.c2, shape.c3])
        ctr = np.asarray(shape.center)
        return ctr - c, ctr + c
    if isinstance(shape, Polygon):
        v = np.asarray(shape.vertices)
        return v.min(axis=0), v.max(axis=0)
    t = 2 * np.pi * np.arange(1024) / 1024
    p, _, _, _ = curve_frame(shape, t)
    return p.min(axis=0), p.max(axis=0)


def interior_points(shape: ShapeSpec, count: int, margin: float) -> InteriorSample:
    """Deterministic quasi-uniform interior points with a boundary margin.

    Candidates come from coarse-to-fine lattices over the margin-shrunk
    bounding box, topped up with scaled copies of the boundary; the first
    ``count`` survivors (uniform stride over the ordered pool) are returned.
    """
    if count < 1:
        raise EmptySampleError("count must be positive")
    d = shape_dim(shape)
    lo, hi = _bbox(shape)
    lo, hi = lo + margin, hi - margin
    if np.any(hi < lo):
        raise EmptySampleError("margin leaves no interior room")
    k0 = int(np.ceil(count ** (1.0 / d)))
    pool: list[np.ndarray] = []
    for k in (k0, k0 + 2, k0 + 4):
        axes = [np.linspace(lo[i], hi[i], k) for i in range(d)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        pool.append(mesh[_margin_ok(shape, mesh, margin)])
        total = np.concatenate(pool)
        if len(_dedupe(total)) >= count:
            break
    cand = _dedupe(np.concatenate(pool))
    if len(cand) < count and d == 2:
        center = shape_center(shape)
        t = 2 * np.pi * np.arange(64) / 64
        if isinstance(shape, Polygon):
            bnd = np.asarray(shape.vertices)
        else:
            bnd, _, _, _ = curve_frame(shape, t)
        for s in (0.85, 0.7, 0.5, 0.3):
            ring = center + s * (bnd - center)
            pool.append(ring[_margin_ok(shape, ring, margin)])
        cand = _dedupe(np.concatenate(pool))
    if len(cand) < count:
        raise EmptySampleError(f"only {len(cand)} interior points fit margin {margin}")
    idx = np.linspace(0, len(cand) - 1, count).round().astype(int)
    return InteriorSample(points=cand[idx], margin=margin)


def _dedupe(pts: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    if len(pts) == 0:
        return pts
    out = [pts[0]]
    for p in pts[1:]:
        if np.min(np.linalg.norm(np.asarray(out) - p, axis=1)) > tol:
            out.append(p)
    return np.asarray(out)


# ---------------------------------------------------------------------------
# polygon helpers

def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(p, q, r), orient(p, q, s)
    d3, d4 = orient(r, s, p), orient(r, s, q)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _is_simple(v: np.ndarray) -> bool:
    m = len(v)
    for i in range(m):
        for j in range(i + 1, m):
            if abs(i - j) in (0, 1) or (i == 0 and j == m - 1):
                continue
            if _segments_cross(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]):
                return False
    return True


def _points_in_polygon(pts: np.ndarray, v: np.ndarray) -> np.ndarray:
    inside = np.zeros(len(pts), dtype=bool)
    m = len(v)
    x, y = pts[:, 0], pts[:, 1]
    for i in range(m):
        x0, y0 = v[i]
        x1, y1 = v[(i + 1) % m]
        crosses = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            hit = crosses & (x < (x1 - x0) * (y - y0) / (y1 - y0) + x0)
        inside ^= hit
    return inside


def _dist_to_segments(pts: np.ndarray, v: np.ndarray) -> np.ndarray:
    m = len(v)
    best = np.full(len(pts), np.inf)
    for i in range(m):
        a, b = v[i], v[(i + 1) % m]
        ab = b - a
        tt = np.clip(((pts - a) @ ab) / (ab @ ab), 0.0, 1.0)
        proj = a + tt[:, None] * ab
        best = np.minimum(best, np.linalg.norm(pts - proj, axis=1))
    return best
