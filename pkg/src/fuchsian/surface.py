"""Fundamental polygon, side-index maps, generators, and polygon intersection.

A compact genus-g surface is presented by an (8g-4)-sided polygon whose
sides are labeled counterclockwise and glued by the pairing sigma.  Side i
runs from vertex V_i to V_{i+1}; extending it to the circle at infinity
gives the ideal endpoints P_i (behind V_i) and Q_{i+1} (beyond V_{i+1}),
and the cyclic boundary order is P_1, Q_1, P_2, Q_2, ...

Indices are 1-based everywhere, with arithmetic mod 8g-4 mapped back into
{1, ..., 8g-4}.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circle import (
    TOL,
    TWO_PI,
    CirclePoint,
    MoebiusMap,
    ccw_distance,
    from_three_points,
    geodesic_circle,
    geodesic_endpoints,
)
from .errors import ConstructionError, DegeneratePointsError


def _wrap(i: int, n: int) -> int:
    return (i - 1) % n + 1


def sigma(i: int, g: int) -> int:
    """Side pairing: 4g-i mod 8g-4 for odd i, 2-i mod 8g-4 for even i."""
    n = 8 * g - 4
    if not 1 <= i <= n:
        raise IndexError(f"side index {i} out of range 1..{n}")
    return _wrap(4 * g - i, n) if i % 2 else _wrap(2 - i, n)


def tau(i: int, g: int) -> int:
    """Index shift by half the side count: i + (4g-2) mod 8g-4."""
    n = 8 * g - 4
    if not 1 <= i <= n:
        raise IndexError(f"side index {i} out of range 1..{n}")
    return _wrap(i + 4 * g - 2, n)


def rho(i: int, g: int) -> int:
    """Vertex cycle sigma(i)+1; has order four."""
    n = 8 * g - 4
    return _wrap(sigma(i, g) + 1, n)


@dataclass(frozen=True)
class SideIndexMaps:
    """The involutions sigma, tau and the shift rho on side indices."""

    genus: int
    n: int = field(init=False)

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        object.__setattr__(self, "n", 8 * self.genus - 4)

    def wrap(self, i: int) -> int:
        return _wrap(i, self.n)

    def sigma(self, i: int) -> int:
        return sigma(self.wrap(i), self.genus)

    def tau(self, i: int) -> int:
        return tau(self.wrap(i), self.genus)

    def rho(self, i: int) -> int:
        return rho(self.wrap(i), self.genus)

    def tau_sigma(self, i: int) -> int:
        return self.tau(self.sigma(i))


@dataclass(frozen=True)
class SurfaceGroup:
    """Polygon data plus the generators identifying its sides.

    vertices[k] is V_{k+1}; P[k], Q[k] are the ideal points P_{k+1}, Q_{k+1};
    generators[k] is T_{k+1}.  Use the 1-based accessors v/p/q/t, which wrap.
    """

    genus: int
    vertices: tuple[complex, ...]
    P: tuple[CirclePoint, ...]
    Q: tuple[CirclePoint, ...]
    generators: tuple[MoebiusMap, ...]
    maps: SideIndexMaps
    offset: float = 0.0

    @property
    def n(self) -> int:
        return self.maps.n

    def v(self, i: int) -> complex:
        return self.vertices[self.maps.wrap(i) - 1]

    def p(self, i: int) -> CirclePoint:
        return self.P[self.maps.wrap(i) - 1]

    def q(self, i: int) -> CirclePoint:
        return self.Q[self.maps.wrap(i) - 1]

    def t(self, i: int) -> MoebiusMap:
        return self.generators[self.maps.wrap(i) - 1]

    def sigma(self, i: int) -> int:
        return self.maps.sigma(i)

    def tau(self, i: int) -> int:
        return self.maps.tau(i)

    def tau_sigma(self, i: int) -> int:
        return self.maps.tau_sigma(i)

    def wrap(self, i: int) -> int:
        return self.maps.wrap(i)

    def side_circle(self, i: int) -> tuple[complex, float] | None:
        """Center/radius of the circle extending side i (None for a diameter)."""
        return geodesic_circle(self.v(i), self.v(i + 1))

    def boundary_points_in_order(self) -> list[CirclePoint]:
        out = []
        for i in range(1, self.n + 1):
            out.append(self.p(i))
            out.append(self.q(i))
        return out

    def to_json(self) -> str:
        doc = {
            "genus": self.genus,
            "offset": self.offset,
            "vertices": [[z.real, z.imag] for z in self.vertices],
            "generators": [
                {"a": [m.a.real, m.a.imag], "c": [m.c.real, m.c.imag]}
                for m in self.generators
            ],
            "sigma": [self.sigma(i) for i in range(1, self.n + 1)],
            "tau": [self.tau(i) for i in range(1, self.n + 1)],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SurfaceGroup":
        doc = json.loads(text)
        g = int(doc["genus"])
        vertices = tuple(complex(x, y) for x, y in doc["vertices"])
        gens = tuple(
            MoebiusMap(complex(*d["a"]), complex(*d["c"])).normalized()
            for d in doc["generators"]
        )
        surface = assemble_surface(g, vertices, gens, offset=float(doc.get("offset", 0.0)))
        report = verify_group_relations(surface)
        if not report.passed:
            raise ConstructionError(
                f"deserialized surface fails relations: {report.failures[0][0]}"
            )
        return surface


def assemble_surface(
    genus: int,
    vertices: Sequence[complex],
    generators: Sequence[MoebiusMap],
    offset: float = 0.0,
) -> SurfaceGroup:
    """Build a SurfaceGroup from externally supplied vertices and generators.

    The ideal endpoints are recomputed from the vertices.  No invariants are
    checked here; callers gate on verify_group_relations.
    """
    maps = SideIndexMaps(genus)
    n = maps.n
    if len(vertices) != n or len(generators) != n:
        raise ValueError(f"expected {n} vertices and generators")
    p_pts: list[CirclePoint | None] = [None] * n
    q_pts: list[CirclePoint | None] = [None] * n
    for i in range(1, n + 1):
        backward, forward = geodesic_endpoints(vertices[i - 1], vertices[i % n])
        p_pts[i - 1] = backward
        q_pts[i % n] = forward
    return SurfaceGroup(
        genus=genus,
        vertices=tuple(vertices),
        P=tuple(p_pts),  # type: ignore[arg-type]
        Q=tuple(q_pts),  # type: ignore[arg-type]
        generators=tuple(generators),
        maps=maps,
        offset=offset,
    )


def regular_vertex_radius(genus: int) -> float:
    """Euclidean vertex radius of the regular right-angled (8g-4)-gon.

    cosh R = cot(pi/N) * cot(pi/4) for the hyperbolic circumradius R of a
    regular N-gon with interior angle pi/2; the Euclidean radius in the
    disk model is tanh(R/2).
    """
    n = 8 * genus - 4
    cosh_r = 1.0 / math.tan(math.pi / n)
    return math.tanh(0.5 * math.acosh(cosh_r))


def build_regular_surface(genus: int, offset: float = 0.0) -> SurfaceGroup:
    """The regular Ford (8g-4)-gon with its side-pairing generators.

    Vertices sit at Euclidean radius regular_vertex_radius(genus) on rays at
    angles 2*pi*(k-1)/N + offset.  Generators are interpolated through
    P_i -> Q_{sigma(i)+1}, Q_{i+1} -> P_{sigma(i)}, V_i -> V_{sigma(i)+1}
    and the result is validated against all group relations.
    """
    if genus < 2:
        raise ValueError("genus must be at least 2")
    maps = SideIndexMaps(genus)
    n = maps.n
    r = regular_vertex_radius(genus)
    vertices = [r * cmath.exp(1j * (TWO_PI * k / n + offset)) for k in range(n)]

    p_pts: list[CirclePoint | None] = [None] * n
    q_pts: list[CirclePoint | None] = [None] * n
    for i in range(1, n + 1):
        backward, forward = geodesic_endpoints(vertices[i - 1], vertices[i % n])
        p_pts[i - 1] = backward
        q_pts[i % n] = forward

    gens: list[MoebiusMap] = []
    for i in range(1, n + 1):
        si = sigma(i, genus)
        gens.append(
            from_three_points(
                [
                    (p_pts[i - 1].value, q_pts[_wrap(si + 1, n) - 1].value),
                    (q_pts[i % n].value, p_pts[si - 1].value),
                    (vertices[i - 1], vertices[_wrap(si + 1, n) - 1]),
                ]
            )
        )

    surface = SurfaceGroup(
        genus=genus,
        vertices=tuple(vertices),
        P=tuple(p_pts),  # type: ignore[arg-type]
        Q=tuple(q_pts),  # type: ignore[arg-type]
        generators=tuple(gens),
        maps=maps,
        offset=offset,
    )
    report = verify_group_relations(surface)
    if not report.passed:
        name, dev = report.failures[0]
        raise ConstructionError(f"construction violates {name} (deviation {dev:.3g})")
    return surface


@dataclass
class RelationReport:
    """Per-relation deviations from the identities a surface group must satisfy."""

    entries: list[tuple[str, float]] = field(default_factory=list)
    tol: float = TOL

    def add(self, name: str, deviation: float):
        self.entries.append((name, deviation))

    @property
    def failures(self) -> list[tuple[str, float]]:
        return [(n, d) for n, d in self.entries if d > self.tol]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def max_deviation(self) -> float:
        return max((d for _, d in self.entries), default=0.0)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [
            f"{status}: {len(self.entries)} relations, max deviation {self.max_deviation:.3g}"
        ]
        lines += [f"  FAIL {n}: {d:.3g}" for n, d in self.failures]
        return "\n".join(lines)


def interior_angle(surface: SurfaceGroup, i: int) -> float:
    """Interior angle of the polygon at vertex V_i, between sides i-1 and i."""
    v = surface.v(i)

    def tangent_toward(side: int, target: complex) -> complex:
        circ = surface.side_circle(side)
        if circ is None:
            return (target - v) / abs(target - v)
        center, _ = circ
        t = 1j * (v - center)
        t /= abs(t)
        if (t.conjugate() * (target - v)).real < 0.0:
            t = -t
        return t

    t_prev = tangent_toward(surface.wrap(i - 1), surface.v(i - 1))
    t_next = tangent_toward(i, surface.v(i + 1))
    dot = (t_prev.conjugate() * t_next).real
    return math.acos(max(-1.0, min(1.0, dot)))


def verify_group_relations(surface: SurfaceGroup, tol: float = TOL) -> RelationReport:
    """Check pairing and vertex relations, endpoint images, cyclic order, angles."""
    report = RelationReport(tol=tol)
    n = surface.n
    ident = MoebiusMap.identity()
    for i in range(1, n + 1):
        si = surface.sigma(i)
        report.add(
            f"T_sigma({i})*T_{i} = Id",
            (surface.t(si) @ surface.t(i)).distance_to(ident),
        )
    for i in range(1, n + 1):
        r1 = surface.maps.rho(i)
        r2 = surface.maps.rho(r1)
        r3 = surface.maps.rho(r2)
        word = surface.t(r3) @ surface.t(r2) @ surface.t(r1) @ surface.t(i)
        report.add(f"four-term relation at {i}", word.distance_to(ident))
    for i in range(1, n + 1):
        si = surface.sigma(i)
        img_p = surface.t(i).apply(surface.p(i))
        img_q = surface.t(i).apply(surface.q(i + 1))
        report.add(
            f"T_{i}(P_{i}) = Q_{surface.wrap(si + 1)}",
            abs(math.remainder(img_p.angle - surface.q(si + 1).angle, TWO_PI)),
        )
        report.add(
            f"T_{i}(Q_{surface.wrap(i + 1)}) = P_{si}",
            abs(math.remainder(img_q.angle - surface.p(si).angle, TWO_PI)),
        )
    pts = surface.boundary_points_in_order()
    base = pts[0].angle
    gaps = [ccw_distance(base, pt.angle) for pt in pts]
    order_ok = all(gaps[k] < gaps[k + 1] for k in range(len(gaps) - 1))
    report.add("boundary order P_1,Q_1,P_2,Q_2,...", 0.0 if order_ok else 1.0)
    for i in range(1, n + 1):
        report.add(
            f"interior angle at V_{i} = pi/2",
            abs(interior_angle(surface, i) - 0.5 * math.pi),
        )
    return report


# -- geodesic vs polygon ----------------------------------------------------
#
# The fundamental polygon is the set of disk points lying outside every
# side circle (the circles extending the sides are orthogonal to the unit
# circle and, by the extension condition, never cross the polygon
# interior).  A geodesic crosses each side circle at most once inside the
# disk: both circles are orthogonal to the unit circle, so their radical
# line passes through the origin and their two intersection points are
# inverses through the unit circle, leaving at most one interior crossing.
# Clipping by all sides therefore yields a single feasible parameter
# interval [lo, hi]; its length decides inside/boundary/outside and the
# binding constraints name the entry and exit sides.


@dataclass(frozen=True)
class GeodesicTrace:
    """Clipping of the geodesic u->w against the polygon.

    status is 'inside', 'boundary' or 'outside'.  For 'inside', entry_side
    and exit_side name the sides crossed first and last in the direction of
    w, and lo/hi are the crossing parameters in [0, 1] along the in-disk
    arc.  vertex_exit flags an exit parameter shared by two sides.
    """

    status: str
    entry_side: int | None = None
    exit_side: int | None = None
    lo: float = 0.0
    hi: float = 1.0
    vertex_exit: bool = False
    vertex_entry: bool = False


class _GeodesicParam:
    """The in-disk part of the geodesic u -> w, parametrized by s in [0, 1]."""

    def __init__(self, u: CirclePoint, w: CirclePoint):
        circ = geodesic_circle(u.value, w.value)
        if circ is None:
            self.center = None
            self.direction = w.value
        else:
            self.center, self.radius = circ
            self.phi_u = cmath.phase(u.value - self.center)
            phi_w = cmath.phase(w.value - self.center)
            self.delta = math.remainder(phi_w - self.phi_u, TWO_PI)

    def point(self, s: float) -> complex:
        if self.center is None:
            return (2.0 * s - 1.0) * self.direction
        return self.center + self.radius * cmath.exp(1j * (self.phi_u + s * self.delta))

    def param_of(self, z: complex) -> float:
        if self.center is None:
            return 0.5 * ((z * self.direction.conjugate()).real + 1.0)
        return math.remainder(cmath.phase(z - self.center) - self.phi_u, TWO_PI) / self.delta


def _side_cut(par: _GeodesicParam, c: complex, r: float) -> tuple[str, float]:
    """Constraint of one side circle on the geodesic parameter.

    Returns ('none', 0) for no effect, ('dead', 0) when the whole geodesic
    lies inside the side circle, ('lo', s) when the part s' < s is inside
    it, or ('hi', s) when the part s' > s is inside it.
    """
    if par.center is None:
        e = par.direction
    else:
        d = c - par.center
        if abs(d) < 1e-14:
            return ("none", 0.0)  # coincident circles; caller handles this
        e = 1j * d / abs(d)
    # The radical line {t*e} passes through the origin; intersections with
    # the side circle solve t^2 - 2*b*t + 1 = 0, so they are inverses
    # through the unit circle and at most one is interior.
    b = (e.conjugate() * c).real
    disc = b * b - 1.0
    if disc <= 0.0 or abs(t := (b - math.copysign(math.sqrt(disc), b))) >= 1.0:
        inside = abs(par.point(0.5) - c) < r
        return ("dead", 0.0) if inside else ("none", 0.0)
    s = par.param_of(t * e)
    far = 0.0 if s > 0.5 else 1.0
    inside_far = abs(par.point(far) - c) < r
    if far == 0.0:
        return ("lo", s) if inside_far else ("hi", s)
    return ("hi", s) if inside_far else ("lo", s)


def trace_geodesic(
    surface: SurfaceGroup, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> GeodesicTrace:
    """Clip the geodesic from u to w against all polygon sides."""
    if abs(math.remainder(u.angle - w.angle, TWO_PI)) <= tol:
        raise DegeneratePointsError("geodesic endpoints coincide")
    par = _GeodesicParam(u, w)
    lo, hi = 0.0, 1.0
    lo_side = hi_side = None
    lo_cuts: list[float] = []
    hi_cuts: list[float] = []
    for i in range(1, surface.n + 1):
        c, r = surface.side_circle(i)  # type: ignore[misc]
        kind, s = _side_cut(par, c, r)
        if kind == "dead":
            return GeodesicTrace(status="outside")
        if kind == "lo":
            lo_cuts.append(s)
            if s > lo:
                lo, lo_side = s, i
        elif kind == "hi":
            hi_cuts.append(s)
            if s < hi:
                hi, hi_side = s, i
    if lo_side is None and hi_side is None:
        return GeodesicTrace(status="outside")
    if hi - lo < -tol:
        return GeodesicTrace(status="outside", lo=lo, hi=hi)
    if hi - lo <= tol:
        return GeodesicTrace(status="boundary", lo=lo, hi=hi)
    return GeodesicTrace(
        status="inside",
        entry_side=lo_side,
        exit_side=hi_side,
        lo=lo,
        hi=hi,
        vertex_exit=sum(1 for s in hi_cuts if abs(s - hi) <= tol) > 1,
        vertex_entry=sum(1 for s in lo_cuts if abs(s - lo) <= tol) > 1,
    )


def geodesic_intersects_polygon(
    surface: SurfaceGroup, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> str:
    """'inside' | 'boundary' | 'outside' for the geodesic u -> w vs the polygon."""
    circ = geodesic_circle(u.value, w.value)
    for i in range(1, surface.n + 1):
        side = surface.side_circle(i)
        if circ is None or side is None:
            continue
        if abs(circ[0] - side[0]) <= 1e-7 and abs(circ[1] - side[1]) <= 1e-7:
            return "boundary"  # the geodesic extends side i
    return trace_geodesic(surface, u, w, tol=tol).status


def point_in_polygon(surface: SurfaceGroup, z: complex, tol: float = TOL) -> bool:
    """True iff z lies in the closed fundamental polygon."""
    if abs(z) >= 1.0:
        return False
    for i in range(1, surface.n + 1):
        center, rad = surface.side_circle(i)  # type: ignore[misc]
        if abs(z - center) < rad - tol:
            return False
    return True


# -- vectorized polygon clipping (hot path for samplers) ---------------------


class GeodesicClipper:
    """Vectorized membership/exit-side computation for many boundary pairs.

    Antipodal pairs (true diameters) are nudged by 1e-11 so a single
    circle-arc code path serves every sample; the induced endpoint error is
    below the package tolerance and the nudged set has measure zero.
    """

    def __init__(self, surface: SurfaceGroup):
        self.surface = surface
        n = surface.n
        self.centers = np.empty(n, dtype=complex)
        self.radii = np.empty(n)
        for i in range(1, n + 1):
            c, r = surface.side_circle(i)  # type: ignore[misc]
            self.centers[i - 1] = c
            self.radii[i - 1] = r

    def clip(self, u_angles, w_angles):
        """Feasible interval [lo, hi] plus entry/exit sides (1-based, 0 = none).

        Returns (lo, hi, entry, exit, lo_ties, hi_ties); ties count how many
        sides achieve the binding parameter within 1e-9 (2+ means a vertex).
        """
        u_angles = np.asarray(u_angles, dtype=float)
        w_angles = np.asarray(w_angles, dtype=float)
        gap = np.remainder(w_angles - u_angles, TWO_PI)
        w_angles = np.where(np.abs(gap - math.pi) < 1e-11, w_angles + 1e-11, w_angles)
        u = np.exp(1j * u_angles)
        w = np.exp(1j * w_angles)

        det = u.real * w.imag - w.real * u.imag
        det = np.where(np.abs(det) < 1e-300, 1e-300, det)
        center = (w.imag - u.imag) / det + 1j * ((u.real - w.real) / det)
        rad = np.sqrt(np.maximum(np.abs(center) ** 2 - 1.0, 1e-300))

        phi_u = np.angle(u - center)
        phi_w = np.angle(w - center)
        delta = np.remainder(phi_w - phi_u + math.pi, TWO_PI) - math.pi
        delta = np.where(delta == 0.0, 1e-300, delta)

        m = len(u)
        lo = np.zeros(m)
        hi = np.ones(m)
        entry = np.zeros(m, dtype=np.int64)
        exit_ = np.zeros(m, dtype=np.int64)
        dead = np.zeros(m, dtype=bool)

        cross_list = []
        s_list = []
        bad_left_list = []
        for k in range(len(self.centers)):
            c = self.centers[k]
            r = self.radii[k]
            d = c - center
            abs_d = np.maximum(np.abs(d), 1e-300)
            e = 1j * d / abs_d
            b = (np.conj(e) * c).real
            disc = b * b - 1.0
            has_root = disc > 0.0
            root = np.sqrt(np.maximum(disc, 0.0))
            t = b - np.copysign(root, b)
            cross = has_root & (np.abs(t) < 1.0)
            z = t * e
            s = (np.remainder(np.angle(z - center) - phi_u + math.pi, TWO_PI) - math.pi) / delta
            inside_u = (np.conj(u) * c).real > 1.0
            inside_w = (np.conj(w) * c).real > 1.0
            bad_left = np.where(s > 0.5, inside_u, ~inside_w)
            dead |= ~cross & inside_u & inside_w

            raise_lo = cross & bad_left & (s > lo)
            lo = np.where(raise_lo, s, lo)
            entry = np.where(raise_lo, k + 1, entry)
            lower_hi = cross & ~bad_left & (s < hi)
            hi = np.where(lower_hi, s, hi)
            exit_ = np.where(lower_hi, k + 1, exit_)

            cross_list.append(cross)
            s_list.append(s)
            bad_left_list.append(bad_left)

        lo_ties = np.zeros(m, dtype=np.int64)
        hi_ties = np.zeros(m, dtype=np.int64)
        for cross, s, bad_left in zip(cross_list, s_list, bad_left_list):
            lo_ties += (cross & bad_left & (np.abs(s - lo) <= 1e-9)).astype(np.int64)
            hi_ties += (cross & ~bad_left & (np.abs(s - hi) <= 1e-9)).astype(np.int64)

        entry = np.where(dead, 0, entry)
        exit_ = np.where(dead, 0, exit_)
        hi = np.where(dead, lo, hi)
        return lo, hi, entry, exit_, lo_ties, hi_ties

    def status_codes(self, u_angles, w_angles, tol: float = TOL) -> np.ndarray:
        """1 = inside, 0 = boundary touch, -1 = outside."""
        lo, hi, entry, exit_, _, _ = self.clip(u_angles, w_angles)
        inside = (hi - lo > tol) & (entry > 0) & (exit_ > 0)
        touched = (entry > 0) | (exit_ > 0)
        return np.where(inside, 1, np.where(np.abs(hi - lo) <= tol, np.where(touched, 0, -1), -1))
