"""Hyperbolic convex regions: hulls, convexity tests, and defect measurement.

Sidedness and hulls are computed in the Klein model, where geodesics are
straight chords, so planar convexity machinery applies verbatim.  The
Poincare chart is used for metric quantities only.  Convexity of sampled
regions is quantified by a defect (largest outside excursion of sampled
geodesic chords between boundary points) rather than a boolean, because
curved boundaries are only known at samples.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dilation import DilationParams, dilate_origin_polar, dilate_xy
from .disk import (
    DiskPoint,
    ORIGIN,
    cart_to_polar,
    geodesic_chord_points,
    mobius_translate,
    polar_to_cart,
    translate,
)

SIDEDNESS_TOL = 1e-12
ON_BOUNDARY_TOL = 1e-9
# boolean convexity threshold for measured defects, fixed by config
DEFECT_CONVEX_THRESHOLD = 1e-6


# --- Klein model -------------------------------------------------------------

def to_klein(p):
    """Poincare Cartesian -> Klein: q = 2p / (1 + |p|^2).  Accepts DiskPoint or arrays."""
    if isinstance(p, DiskPoint):
        p = p.xy
    p = np.asarray(p, dtype=float)
    n2 = np.sum(p * p, axis=-1)
    if np.any(n2 >= 1.0):
        raise ValueError("point outside the open unit disk")
    return 2.0 * p / (1.0 + n2)[..., None]


def from_klein(q):
    """Klein -> Poincare Cartesian: p = q / (1 + sqrt(1 - |q|^2))."""
    q = np.asarray(q, dtype=float)
    n2 = np.sum(q * q, axis=-1)
    if np.any(n2 >= 1.0):
        raise ValueError("point outside the open unit disk")
    return q / (1.0 + np.sqrt(1.0 - n2))[..., None]


def from_klein_point(q) -> DiskPoint:
    p = from_klein(q)
    return DiskPoint.from_cart(p[0], p[1])


def _convex_hull_2d(pts):
    """Monotone-chain convex hull; returns counterclockwise vertices, no repeats."""
    pts = np.asarray(pts, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > 1e-15, axis=1)
    pts = pts[keep]
    if len(pts) < 3:
        raise ValueError("need at least 3 distinct points for a hull")

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0.0:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0.0:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise ValueError("degenerate (collinear) input")
    return hull


def _klein_signed_area(kverts):
    x, y = kverts[:, 0], kverts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _segments_intersect(p1, p2, p3, p4):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


# --- geodesic polygons -------------------------------------------------------

@dataclass(frozen=True)
class GeodesicPolygon:
    """Ordered counterclockwise vertices of a simple geodesic polygon."""

    vertices: tuple

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        k = self.klein()
        if _klein_signed_area(k) <= 0.0:
            raise ValueError("polygon must be counterclockwise")
        n = len(k)
        for i in range(n):
            a, b = k[i], k[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_intersect(a, b, k[j], k[(j + 1) % n]):
                    raise ValueError("polygon edges self-intersect")

    @classmethod
    def from_points(cls, points):
        return cls(tuple(points))

    @classmethod
    def from_polar(cls, pairs):
        return cls(tuple(DiskPoint.from_polar(r, th) for r, th in pairs))

    def klein(self):
        return np.array([to_klein(v) for v in self.vertices])

    def polar(self):
        return [(v.r, v.theta) for v in self.vertices]

    def contains(self, p, tol=SIDEDNESS_TOL):
        """Half-plane membership; valid for h-convex polygons only."""
        q = to_klein(p)
        return bool(np.all(_edge_signs(self.klein(), np.atleast_2d(q))[0] >= -tol))


def _edge_signs(kverts, probes):
    """Signed cross products of probes against each directed polygon edge.

    Shape (P, V); positive means left of the edge.
    """
    a = kverts
    b = np.roll(kverts, -1, axis=0)
    e = b - a
    d = probes[:, None, :] - a[None, :, :]
    return e[None, :, 0] * d[:, :, 1] - e[None, :, 1] * d[:, :, 0]


def klein_polygon_contains(kverts, probes, tol=SIDEDNESS_TOL):
    """Vectorized half-plane membership for a convex ccw Klein polygon."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    return np.all(_edge_signs(kverts, probes) >= -tol, axis=1)


def hyperbolic_hull(points) -> GeodesicPolygon:
    """Minimal h-convex polygon containing the points (hull in the Klein model)."""
    if len(points) < 3:
        raise ValueError("need at least 3 points")
    kpts = np.array([to_klein(p) for p in points])
    hull = _convex_hull_2d(kpts)
    return GeodesicPolygon(tuple(from_klein_point(q) for q in hull))


def is_hconvex(poly: GeodesicPolygon, tol=SIDEDNESS_TOL) -> bool:
    """True iff every vertex lies weakly left of every directed edge geodesic."""
    k = poly.klein()
    return bool(np.all(_edge_signs(k, k) >= -tol))


# --- sampled regions ---------------------------------------------------------

@dataclass
class SampledRegion:
    """Closed boundary loop of a Jordan region, with provenance.

    boundary has shape (N, 2) in Cartesian coordinates, first and last rows
    coinciding to 1e-12.  provenance describes how the boundary was produced;
    when it identifies an invertible construction (a polygon, possibly
    dilated), defect measurement can test membership exactly instead of
    against the discretized loop.
    """

    boundary: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.boundary = np.asarray(self.boundary, dtype=float)
        if self.boundary.ndim != 2 or self.boundary.shape[1] != 2:
            raise ValueError("boundary must have shape (N, 2)")
        if self.boundary.shape[0] < 64:
            raise ValueError("boundary needs at least 64 samples")
        if np.max(np.abs(self.boundary[0] - self.boundary[-1])) > 1e-12:
            raise ValueError("boundary loop is not closed")
        if np.any(np.hypot(self.boundary[:, 0], self.boundary[:, 1]) >= 1.0):
            raise ValueError("boundary leaves the open unit disk")

    def check_simple(self):
        """Verify the loop has no self-intersections as a Euclidean polyline."""
        pts = self.boundary[:-1]
        n = len(pts)
        segs_a = pts
        segs_b = np.roll(pts, -1, axis=0)
        lengths = np.hypot(*(segs_b - segs_a).T)
        for i in range(n):
            if lengths[i] < 1e-14:
                continue
            j = np.arange(i + 2, n if i > 0 else n - 1)
            j = j[lengths[j] >= 1e-14]
            if len(j) == 0:
                continue
            a, b = segs_a[i], segs_b[i]
            c, d = segs_a[j], segs_b[j]

            def orient(p, q, r):
                return (q[0] - p[0]) * (r[..., 1] - p[1]) - (q[1] - p[1]) * (r[..., 0] - p[0])

            d1 = orient(a, b, c)
            d2 = orient(a, b, d)
            d3 = (d[:, 0] - c[:, 0]) * (a[1] - c[:, 1]) - (d[:, 1] - c[:, 1]) * (a[0] - c[:, 0])
            d4 = (d[:, 0] - c[:, 0]) * (b[1] - c[:, 1]) - (d[:, 1] - c[:, 1]) * (b[0] - c[:, 0])
            hit = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))
            if np.any(hit):
                raise ValueError(f"boundary self-intersects near segment {i}")
        return True


def winding_contains(loop, probes):
    """Winding-number membership of probes (P, 2) against a closed loop (N, 2)."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    x0, y0 = loop[:-1, 0], loop[:-1, 1]
    x1, y1 = loop[1:, 0], loop[1:, 1]
    px = probes[:, 0][:, None]
    py = probes[:, 1][:, None]
    is_left = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (is_left > 0)
    down = (y0 > py) & (y1 <= py) & (is_left < 0)
    wn = up.sum(axis=1).astype(int) - down.sum(axis=1).astype(int)
    return wn != 0


def polyline_distance(loop, probes):
    """Euclidean distance from each probe to the closed polyline."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    a = loop[:-1]
    b = loop[1:]
    e = b - a
    ee = np.sum(e * e, axis=1)
    ee = np.where(ee < 1e-300, 1.0, ee)
    d = probes[:, None, :] - a[None, :, :]
    t = np.clip(np.sum(d * e[None, :, :], axis=2) / ee[None, :], 0.0, 1.0)
    proj = a[None, :, :] + t[:, :, None] * e[None, :, :]
    dist = np.hypot(probes[:, None, 0] - proj[:, :, 0], probes[:, None, 1] - proj[:, :, 1])
    return np.min(dist, axis=1)


def region_contains(region: SampledRegion, p) -> bool:
    """Winding-number membership; points within 1e-9 of the boundary count inside."""
    if isinstance(p, DiskPoint):
        p = p.xy
    probes = np.atleast_2d(np.asarray(p, dtype=float))
    inside = winding_contains(region.boundary, probes)
    near = polyline_distance(region.boundary, probes) < ON_BOUNDARY_TOL
    out = inside | near
    return bool(out[0]) if out.shape[0] == 1 else out


# --- region construction -----------------------------------------------------

def _sample_polygon_boundary(poly: GeodesicPolygon, samples_per_edge: int):
    """Boundary samples of the polygon, samples_per_edge per edge, closed loop."""
    if samples_per_edge < 16:
        raise ValueError("samples_per_edge must be at least 16")
    ts = np.arange(samples_per_edge, dtype=float) / samples_per_edge
    rs, ths = [], []
    verts = poly.vertices
    n = len(verts)
    for i in range(n):
        u, w = verts[i], verts[(i + 1) % n]
        r, th = geodesic_chord_points(u.r, u.theta, w.r, w.theta, ts)
        rs.append(r)
        ths.append(th)
    return np.concatenate(rs), np.concatenate(ths)


def polygon_region(poly: GeodesicPolygon, samples_per_edge=32) -> SampledRegion:
    """Densely sampled boundary of a geodesic polygon."""
    r, th = _sample_polygon_boundary(poly, samples_per_edge)
    xy = polar_to_cart(r, th)
    boundary = np.vstack([xy, xy[:1]])
    return SampledRegion(boundary, provenance={
        "kind": "polygon",
        "vertices_polar": [[v.r, v.theta] for v in poly.vertices],
        "samples_per_edge": samples_per_edge,
    })


def dilate_region(poly: GeodesicPolygon, params: DilationParams,
                  samples_per_edge=32) -> SampledRegion:
    """Image of a geodesic polygon under a dilation, as a sampled boundary loop."""
    r, th = _sample_polygon_boundary(poly, samples_per_edge)
    xy = dilate_xy(params, polar_to_cart(r, th))
    boundary = np.vstack([xy, xy[:1]])
    return SampledRegion(boundary, provenance={
        "kind": "dilated-polygon",
        "vertices_polar": [[v.r, v.theta] for v in poly.vertices],
        "center_cart": list(params.center.cart),
        "k1": params.k1,
        "k2": params.k2,
        "samples_per_edge": samples_per_edge,
    })


# --- convexity defect --------------------------------------------------------

def van_der_corput(m):
    """First m terms of the base-2 van der Corput sequence; nested prefixes in (0, 1)."""
    out = np.empty(m)
    for i in range(m):
        n, denom, v = i + 1, 1.0, 0.0
        while n:
            denom *= 2.0
            v += (n & 1) / denom
            n >>= 1
        out[i] = v
    return out


def _exact_membership(region: SampledRegion):
    """Membership oracle from provenance, or None when unavailable.

    For a polygon (possibly dilated) the true region is known exactly: a probe
    lies in the image iff its preimage under the dilation lies in the polygon.
    This sidesteps the discretization floor of the sampled loop, which is on
    the order of the boundary sagitta and far above the 1e-6 regime the
    harness must resolve.
    """
    prov = region.provenance
    if prov.get("kind") not in ("polygon", "dilated-polygon"):
        return None
    poly = GeodesicPolygon.from_polar(prov["vertices_polar"])
    if not is_hconvex(poly):
        return None
    if prov["kind"] == "polygon":
        inv_k1 = inv_k2 = 1.0
        center = np.zeros(2)
    else:
        inv_k1, inv_k2 = 1.0 / prov["k1"], 1.0 / prov["k2"]
        center = np.asarray(prov["center_cart"], dtype=float)
    centered_off = float(center @ center) > 0.0
    verts = poly.klein() if not centered_off else np.array(
        [to_klein(mobius_translate(-center, v.xy)) for v in poly.vertices])

    def contains(r, th):
        if centered_off:
            xy = mobius_translate(-center, polar_to_cart(r, th))
            r, th = cart_to_polar(xy)
        r2, th2 = dilate_origin_polar(inv_k1, inv_k2, r, th)
        q = to_klein(polar_to_cart(r2, th2))
        return klein_polygon_contains(verts, q)

    return contains


def _chord_pairs(n_boundary, pair_samples, vertex_indices):
    """Deterministic chord endpoint pairs: all vertex pairs plus a stratified stream.

    The random stream is a fixed-seed prefix so that a larger pair_samples
    extends (never reshuffles) a smaller one, keeping the measured defect
    monotone under refinement.
    """
    pairs = [(vertex_indices[i], vertex_indices[j])
             for i in range(len(vertex_indices))
             for j in range(i + 1, len(vertex_indices))]
    rng = np.random.default_rng(1905)
    extra = rng.integers(0, n_boundary, size=(pair_samples, 2))
    for i, j in extra:
        if i != j:
            pairs.append((int(i), int(j)))
    return pairs


def convexity_defect(region: SampledRegion, pair_samples=128, segment_samples=16) -> float:
    """Largest outside excursion of sampled geodesic chords between boundary points.

    Chords are sampled at segment_samples interior points (nested van der
    Corput parameters along the hyperboloid chord).  A sample inside the
    region contributes 0; an outside sample contributes its Euclidean distance
    to the boundary loop.  Zero, up to discretization, for h-convex regions.
    """
    if pair_samples < 16 or segment_samples < 16:
        raise ValueError("pair_samples and segment_samples must be at least 16")
    loop = region.boundary
    n = loop.shape[0] - 1
    r_bnd, th_bnd = cart_to_polar(loop[:-1])

    spe = region.provenance.get("samples_per_edge")
    if spe and region.provenance.get("vertices_polar"):
        vertex_indices = list(range(0, n, spe))
    else:
        vertex_indices = list(np.linspace(0, n - 1, 12, dtype=int))

    pairs = _chord_pairs(n, pair_samples, vertex_indices)
    ts = van_der_corput(segment_samples)
    exact = _exact_membership(region)

    probes_r, probes_th = [], []
    for i, j in pairs:
        r, th = geodesic_chord_points(r_bnd[i], th_bnd[i], r_bnd[j], th_bnd[j], ts)
        probes_r.append(r)
        probes_th.append(th)
    probes_r = np.concatenate(probes_r)
    probes_th = np.concatenate(probes_th)

    if exact is not None:
        inside = exact(probes_r, probes_th)
    else:
        xy = polar_to_cart(probes_r, probes_th)
        inside = winding_contains(loop, xy)
        inside |= polyline_distance(loop, xy) < ON_BOUNDARY_TOL
    if np.all(inside):
        return 0.0
    outside_xy = polar_to_cart(probes_r[~inside], probes_th[~inside])
    return float(np.max(polyline_distance(loop, outside_xy)))


# --- random generation -------------------------------------------------------

def random_hconvex_polygon(rng, center: DiskPoint = ORIGIN,
                           r_range=(0.2, 3.0), max_vertices=12) -> GeodesicPolygon:
    """Random h-convex polygon strictly containing the requested center.

    Points are drawn in polar coordinates of the frame translated to the
    center, with angles stratified over m >= 5 sectors so that consecutive
    angular gaps stay below pi and the center is interior to the hull.
    """
    m = int(rng.integers(5, max_vertices + 1))
    sector = 2.0 * math.pi / m
    thetas = (np.arange(m) + rng.uniform(0.0, 1.0, m)) * sector - math.pi
    radii = rng.uniform(r_range[0], r_range[1], m)
    pts = [DiskPoint.from_polar(r, th) for r, th in zip(radii, thetas)]
    if center.r > 0.0:
        pts = [translate(center, p) for p in pts]
    return hyperbolic_hull(pts)


# --- serialization -----------------------------------------------------------

def region_to_json(region: SampledRegion) -> str:
    doc = {"boundary": region.boundary.tolist(), "provenance": region.provenance}
    return json.dumps(doc, sort_keys=True)


def region_from_json(text: str) -> SampledRegion:
    doc = json.loads(text)
    region = SampledRegion(np.asarray(doc["boundary"], dtype=float),
                           provenance=doc.get("provenance", {}))
    region.check_simple()
    return region


def polygon_to_json(poly: GeodesicPolygon) -> str:
    return json.dumps({"vertices_polar": [[v.r, v.theta] for v in poly.vertices]},
                      sort_keys=True)


def polygon_from_json(text: str) -> GeodesicPolygon:
    return GeodesicPolygon.from_polar(json.loads(text)["vertices_polar"])
