"""Experimental harness for anisotropic spherical contraction.

The contraction acts in geodesic polar coordinates (rho, theta) about a
center c on the unit sphere, with theta measured against a fixed tangent
frame at c:

    rho   -> rho * sqrt(k1^2 cos^2 theta + k2^2 sin^2 theta)
    theta -> atan2(k2 sin theta, k1 cos theta)

for factors k1, k2 in (0, 1].  This is the direct polar analog of the
hyperbolic axis dilation and reduces to the symmetric contraction
rho -> k*rho when k1 == k2.  Convexity within the open hemisphere about c is
assessed through the gnomonic projection, which maps great circles to
straight lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CONTRACTION_DEFINITION = (
    "geodesic-polar contraction about the center: rho scales by "
    "sqrt(k1^2 cos^2 theta + k2^2 sin^2 theta) and theta maps through "
    "atan2(k2 sin theta, k1 cos theta) in a fixed tangent frame; reduces to "
    "the symmetric contraction when k1 == k2"
)

HEMISPHERE_MARGIN = 1e-12
DEFECT_EXCEEDANCE = 1e-6


@dataclass(frozen=True)
class SpherePoint:
    """A unit 3-vector."""

    vec: tuple

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=float)
        if abs(float(v @ v) - 1.0) > 2e-12:
            raise ValueError("sphere point must be a unit vector")

    @classmethod
    def from_vec(cls, v):
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise ValueError("zero vector")
        return cls(tuple(v / n))

    @property
    def xyz(self):
        return np.array(self.vec)


def angular_distance(a, b):
    """Angle between unit vectors, robust near 0 and pi."""
    a = a.xyz if isinstance(a, SpherePoint) else np.asarray(a, dtype=float)
    b = b.xyz if isinstance(b, SpherePoint) else np.asarray(b, dtype=float)
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    out = np.arctan2(cross, dot)
    return float(out) if np.ndim(out) == 0 else out


def tangent_frame(c: SpherePoint, angle=0.0):
    """Deterministic orthonormal tangent frame (e1, e2) at c, rotated by angle."""
    n = c.xyz
    seed = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    if angle:
        ca, sa = math.cos(angle), math.sin(angle)
        e1, e2 = ca * e1 + sa * e2, -sa * e1 + ca * e2
    return e1, e2


def to_polar(c: SpherePoint, p, frame_angle=0.0):
    """Geodesic polar coordinates (rho, theta) of p about c; arrays of shape (...)."""
    e1, e2 = tangent_frame(c, frame_angle)
    n = c.xyz
    v = p.xyz if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)
    x = v @ e1
    y = v @ e2
    z = v @ n
    rho = np.arctan2(np.hypot(x, y), z)
    theta = np.arctan2(y, x)
    return rho, theta


def from_polar(c: SpherePoint, rho, theta, frame_angle=0.0):
    """Inverse of to_polar; returns unit vectors of shape (..., 3)."""
    e1, e2 = tangent_frame(c, frame_angle)
    n = c.xyz
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    sr = np.sin(rho)
    out = (np.cos(rho)[..., None] * n
           + (sr * np.cos(theta))[..., None] * e1
           + (sr * np.sin(theta))[..., None] * e2)
    return out


def contract_polar(k1, k2, rho, theta):
    """The contraction on polar coordinate arrays."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    kc = k1 * np.cos(theta)
    ks = k2 * np.sin(theta)
    return rho * np.hypot(kc, ks), np.arctan2(ks, kc)


def s_contract(c: SpherePoint, k1, k2, p: SpherePoint, frame_angle=0.0) -> SpherePoint:
    """Contract p toward c; p must lie in the open hemisphere about c."""
    if not (0.0 < k1 <= 1.0 and 0.0 < k2 <= 1.0):
        raise ValueError("contraction factors must lie in (0, 1]")
    rho, theta = to_polar(c, p, frame_angle)
    if rho >= math.pi / 2:
        raise ValueError("point outside the open hemisphere about the center")
    rho2, theta2 = contract_polar(k1, k2, rho, theta)
    return SpherePoint.from_vec(from_polar(c, float(rho2), float(theta2), frame_angle))


def contract_many(c: SpherePoint, k1, k2, pts, frame_angle=0.0):
    """Contraction applied to an (N, 3) array of hemisphere points."""
    rho, theta = to_polar(c, pts, frame_angle)
    if np.any(rho >= math.pi / 2):
        raise ValueError("points outside the open hemisphere about the center")
    rho2, theta2 = contract_polar(k1, k2, rho, theta)
    return from_polar(c, rho2, theta2, frame_angle)


def gnomonic(c: SpherePoint, pts, frame_angle=0.0):
    """Central projection of hemisphere points to the tangent plane at c.

    Great circles map to straight lines, so spherical convexity within the
    hemisphere becomes planar convexity.
    """
    e1, e2 = tangent_frame(c, frame_angle)
    n = c.xyz
    v = np.atleast_2d(np.asarray(pts, dtype=float))
    z = v @ n
    if np.any(z <= HEMISPHERE_MARGIN):
        raise ValueError("gnomonic projection requires the open hemisphere")
    return np.stack([v @ e1 / z, v @ e2 / z], axis=-1)


def gnomonic_inverse(c: SpherePoint, uv, frame_angle=0.0):
    e1, e2 = tangent_frame(c, frame_angle)
    n = c.xyz
    uv = np.atleast_2d(np.asarray(uv, dtype=float))
    v = n + uv[:, 0][:, None] * e1 + uv[:, 1][:, None] * e2
    return v / np.linalg.norm(v, axis=-1)[:, None]


@dataclass(frozen=True)
class SphericalPolygon:
    """Convex candidate region: ccw vertices within the open hemisphere about center."""

    vertices: tuple
    center: SpherePoint

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        for v in self.vertices:
            if angular_distance(v, self.center) >= math.pi / 2 - HEMISPHERE_MARGIN:
                raise ValueError("vertex outside the open hemisphere about the center")
        uv = self.gnomonic_vertices()
        x, y = uv[:, 0], uv[:, 1]
        area = 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        if area <= 0.0:
            raise ValueError("polygon must be counterclockwise as seen from the center")

    def gnomonic_vertices(self):
        return gnomonic(self.center, np.array([v.xyz for v in self.vertices]))

    def is_convex(self, tol=1e-12):
        uv = self.gnomonic_vertices()
        a = uv
        b = np.roll(uv, -1, axis=0)
        e = b - a
        d = uv[:, None, :] - a[None, :, :]
        cross = e[None, :, 0] * d[:, :, 1] - e[None, :, 1] * d[:, :, 0]
        return bool(np.all(cross >= -tol))


def great_circle_points(a, b, ts):
    """Samples of the minor great-circle arc between unit vectors a and b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    omega = angular_distance(a, b)
    ts = np.asarray(ts, dtype=float)
    if omega < 1e-12:
        pts = (1.0 - ts)[:, None] * a + ts[:, None] * b
    else:
        so = math.sin(omega)
        pts = (np.sin((1.0 - ts) * omega) / so)[:, None] * a \
            + (np.sin(ts * omega) / so)[:, None] * b
    return pts / np.linalg.norm(pts, axis=-1)[:, None]


# --- sampled spherical regions ----------------------------------------------

@dataclass
class SphericalRegion:
    """Closed boundary loop (N, 3) of a region within a hemisphere, with provenance."""

    boundary: np.ndarray
    center: SpherePoint
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.boundary = np.asarray(self.boundary, dtype=float)
        if np.max(np.abs(self.boundary[0] - self.boundary[-1])) > 1e-12:
            raise ValueError("boundary loop is not closed")


def sample_polygon_boundary(poly: SphericalPolygon, per_edge=24) -> SphericalRegion:
    pts = []
    verts = [v.xyz for v in poly.vertices]
    ts = np.arange(per_edge, dtype=float) / per_edge
    for i in range(len(verts)):
        pts.append(great_circle_points(verts[i], verts[(i + 1) % len(verts)], ts))
    loop = np.vstack(pts)
    loop = np.vstack([loop, loop[:1]])
    return SphericalRegion(loop, poly.center, provenance={
        "kind": "polygon",
        "vertices": [list(v.vec) for v in poly.vertices],
        "per_edge": per_edge,
    })


def contract_polygon(poly: SphericalPolygon, k1, k2, per_edge=24,
                     frame_angle=0.0) -> SphericalRegion:
    """Sampled image of the polygon boundary under the contraction."""
    base = sample_polygon_boundary(poly, per_edge)
    img = contract_many(poly.center, k1, k2, base.boundary, frame_angle)
    return SphericalRegion(img, poly.center, provenance={
        "kind": "contracted-polygon",
        "vertices": [list(v.vec) for v in poly.vertices],
        "k1": float(k1), "k2": float(k2),
        "per_edge": per_edge, "frame_angle": float(frame_angle),
    })


def _winding_contains_2d(loop, probes):
    x0, y0 = loop[:-1, 0], loop[:-1, 1]
    x1, y1 = loop[1:, 0], loop[1:, 1]
    px = probes[:, 0][:, None]
    py = probes[:, 1][:, None]
    is_left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (is_left > 0)
    down = (y0 > py) & (y1 <= py) & (is_left < 0)
    return (up.sum(axis=1) - down.sum(axis=1)) != 0


def _exact_membership(region: SphericalRegion):
    prov = region.provenance
    if prov.get("kind") not in ("polygon", "contracted-polygon"):
        return None
    poly = SphericalPolygon(tuple(SpherePoint(tuple(v)) for v in prov["vertices"]),
                            region.center)
    if not poly.is_convex():
        return None
    kuv = poly.gnomonic_vertices()
    a = kuv
    b = np.roll(kuv, -1, axis=0)
    e = b - a
    inv_k1 = 1.0 / prov.get("k1", 1.0)
    inv_k2 = 1.0 / prov.get("k2", 1.0)
    frame_angle = prov.get("frame_angle", 0.0)
    c = region.center

    def contains(pts):
        rho, theta = to_polar(c, pts, frame_angle)
        rho2, theta2 = contract_polar(inv_k1, inv_k2, rho, theta)
        ok = rho2 < math.pi / 2 - HEMISPHERE_MARGIN
        out = np.zeros(len(pts), dtype=bool)
        if np.any(ok):
            uv = gnomonic(c, from_polar(c, rho2[ok], theta2[ok], frame_angle))
            d = uv[:, None, :] - a[None, :, :]
            cross = e[None, :, 0] * d[:, :, 1] - e[None, :, 1] * d[:, :, 0]
            out[ok] = np.all(cross >= -1e-12, axis=1)
        return out

    return contains


def _vdc(m):
    out = np.empty(m)
    for i in range(m):
        n, denom, v = i + 1, 1.0, 0.0
        while n:
            denom *= 2.0
            v += (n & 1) / denom
            n >>= 1
        out[i] = v
    return out


def s_convexity_defect(region, pair_samples=64, segment_samples=16) -> float:
    """Largest angular outside excursion of sampled great-circle chords.

    Membership is evaluated in the gnomonic chart about the region center
    (exactly, via provenance, when the region is a contracted convex polygon);
    outside samples contribute their angular distance to the boundary loop.
    """
    if isinstance(region, SphericalPolygon):
        region = sample_polygon_boundary(region)
    loop = region.boundary
    n = loop.shape[0] - 1

    per_edge = region.provenance.get("per_edge")
    if per_edge:
        vertex_indices = list(range(0, n, per_edge))
    else:
        vertex_indices = list(np.linspace(0, n - 1, 10, dtype=int))
    pairs = [(vertex_indices[i], vertex_indices[j])
             for i in range(len(vertex_indices))
             for j in range(i + 1, len(vertex_indices))]
    rng = np.random.default_rng(1905)
    for i, j in rng.integers(0, n, size=(pair_samples, 2)):
        if i != j:
            pairs.append((int(i), int(j)))

    ts = _vdc(segment_samples)
    probes = np.vstack([great_circle_points(loop[i], loop[j], ts) for i, j in pairs])

    exact = _exact_membership(region)
    if exact is not None:
        inside = exact(probes)
    else:
        uv_loop = gnomonic(region.center, loop)
        uv_probes = gnomonic(region.center, probes)
        inside = _winding_contains_2d(uv_loop, uv_probes)
    if np.all(inside):
        return 0.0
    out_pts = probes[~inside]
    # angular distance to the (densely sampled) boundary
    dots = np.clip(out_pts @ loop[:-1].T, -1.0, 1.0)
    dist = np.arccos(np.max(dots, axis=1))
    return float(np.max(dist))


def random_convex_spherical_polygon(rng, center=None, rho_max=1.2, n_max=10):
    """Random convex polygon in the open hemisphere about a (random) center."""
    from .convexity import _convex_hull_2d

    if center is None:
        v = rng.normal(size=3)
        center = SpherePoint.from_vec(v)
    m = int(rng.integers(5, n_max + 1))
    sector = 2.0 * math.pi / m
    thetas = (np.arange(m) + rng.uniform(0.0, 1.0, m)) * sector - math.pi
    rhos = rng.uniform(0.1, rho_max, m)
    pts = from_polar(center, rhos, thetas)
    uv = gnomonic(center, pts)
    hull_uv = _convex_hull_2d(uv)
    verts = gnomonic_inverse(center, hull_uv)
    return SphericalPolygon(tuple(SpherePoint.from_vec(v) for v in verts), center)


def conjecture_trial(seed, trials, per_edge=24, pair_samples=64,
                     segment_samples=16, symmetric_every=5):
    """Randomized contraction trials; reports measured defects, presumes nothing.

    Every symmetric_every-th trial forces k1 == k2 (the regime covered by the
    symmetric contraction theorem).  A defect above 1e-6 is re-measured at 4x
    sampling density before being reported as an exceedance, to exclude
    discretization artifacts.  Deterministic: per-trial generators are seeded
    by (seed, trial index).
    """
    results = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        poly = random_convex_spherical_polygon(rng)
        k1 = float(rng.uniform(0.01, 1.0))
        symmetric = (i % symmetric_every == 0)
        k2 = k1 if symmetric else float(rng.uniform(0.01, 1.0))
        region = contract_polygon(poly, k1, k2, per_edge=per_edge)
        defect = s_convexity_defect(region, pair_samples, segment_samples)
        rechecked = None
        if defect > DEFECT_EXCEEDANCE:
            region4 = contract_polygon(poly, k1, k2, per_edge=4 * per_edge)
            rechecked = s_convexity_defect(region4, 4 * pair_samples, 4 * segment_samples)
        results.append({
            "trial": i, "seed": seed, "k1": k1, "k2": k2,
            "symmetric": symmetric, "n_vertices": len(poly.vertices),
            "defect": defect,
            "defect_recheck_4x": rechecked,
            "exceeds": bool((rechecked if rechecked is not None else defect)
                            > DEFECT_EXCEEDANCE),
        })
    sym = [r for r in results if r["symmetric"]]
    asym = [r for r in results if not r["symmetric"]]
    report = {
        "contraction_definition": CONTRACTION_DEFINITION,
        "seed": seed,
        "trials": trials,
        "exceedance_threshold": DEFECT_EXCEEDANCE,
        "results": results,
        "summary": {
            "max_defect": max(r["defect"] for r in results),
            "exceedances": sum(r["exceeds"] for r in results),
            "symmetric": {
                "count": len(sym),
                "max_defect": max(r["defect"] for r in sym) if sym else 0.0,
                "exceedances": sum(r["exceeds"] for r in sym),
            },
            "asymmetric": {
                "count": len(asym),
                "max_defect": max(r["defect"] for r in asym) if asym else 0.0,
                "exceedances": sum(r["exceeds"] for r in asym),
            },
        },
    }
    return report
