"""Geometric map, conjugacy to the rectangle model, coding, and transitions.

The geometric map acts on pairs (u, w) whose geodesic crosses the polygon,
applying the generator of the exit side to both coordinates.  It is
conjugate to the rectangle-domain extension map by a piecewise-Moebius
bijection that is the identity on the common part and moves the "bulges"
of the curvilinear domain onto the "corners" of the rectangle domain.

Iterating the extension map and recording sigma(branch) at each step codes
a geodesic by a bi-infinite word; the partition into the half-intervals
(P_i, Q_i), (Q_i, P_{i+1}) is Markov for the circle map, and merging each
pair gives a sofic presentation on the side alphabet.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .circle import TOL, TWO_PI, Arc, CirclePoint, MoebiusMap
from .errors import (
    BijectivityError,
    DegeneratePointsError,
    MarkovError,
    OutsideDomainError,
)
from .boundary import (
    ExtremalParams,
    RectDomain,
    SolvedParams,
    extension_step,
    extension_step_many,
    inverse_step,
)
from .surface import GeodesicClipper, SurfaceGroup, trace_geodesic


def geo_step(
    surface: SurfaceGroup, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> tuple[CirclePoint, CirclePoint, int]:
    """Apply the exit-side generator to a geodesic crossing the polygon."""
    trace = trace_geodesic(surface, u, w, tol)
    if trace.status != "inside":
        raise OutsideDomainError(f"geodesic does not cross the polygon ({trace.status})")
    if trace.vertex_exit:
        raise DegeneratePointsError("geodesic exits through a vertex")
    t = surface.t(trace.exit_side)
    return t.apply(u), t.apply(w), trace.exit_side


# -- bulges and corners -------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """One bulge or corner: a bounding box plus its defining memberships."""

    name: str  # e.g. "B_3" (lower bulge), "B^3" (upper), "C_3", "C^3"
    index: int
    box_x: Arc
    box_y: Arc


@dataclass(frozen=True)
class RegionTable:
    """Bounding boxes of all bulges and corners for one parameter choice.

    Lower bulge/corner i live in [Q_{i+1}, Q_{i+2}] x [P_i, P_{i+1}];
    upper bulge/corner i live in [P_{i-1}, P_i] x [Q_i, Q_{i+1}].  Bulges
    are the parts of the curvilinear domain outside the rectangle domain;
    corners are the parts of the rectangle domain outside the curvilinear
    one.
    """

    solved: SolvedParams
    domain: RectDomain
    lower: tuple[Region, ...]
    upper: tuple[Region, ...]

    @property
    def surface(self) -> SurfaceGroup:
        return self.solved.surface


def build_regions(solved: SolvedParams, domain: RectDomain) -> RegionTable:
    s = solved.surface
    lower = []
    upper = []
    for i in range(1, s.n + 1):
        lower.append(
            Region(
                name=f"B_{i}",
                index=i,
                box_x=Arc(s.q(i + 1), s.q(i + 2), True, True),
                box_y=Arc(s.p(i), s.p(i + 1), True, True),
            )
        )
        upper.append(
            Region(
                name=f"B^{i}",
                index=i,
                box_x=Arc(s.p(i - 1), s.p(i), True, True),
                box_y=Arc(s.q(i), s.q(i + 1), True, True),
            )
        )
    return RegionTable(solved=solved, domain=domain, lower=tuple(lower), upper=tuple(upper))


def locate_region(
    regions: RegionTable, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> tuple[str, int | None]:
    """('core'|'bulge_lower'|'bulge_upper'|'outside'|'boundary', index)."""
    s = regions.surface
    status = trace_geodesic(s, u, w, tol).status
    if status == "outside":
        return ("outside", None)
    if status == "boundary":
        return ("boundary", None)
    if regions.domain.contains(u, w):
        return ("core", None)
    for reg in regions.lower:
        if reg.box_x.contains(u, tol) and reg.box_y.contains(w, tol):
            return ("bulge_lower", reg.index)
    for reg in regions.upper:
        if reg.box_x.contains(u, tol) and reg.box_y.contains(w, tol):
            return ("bulge_upper", reg.index)
    return ("boundary", None)


def _phi_map(solved: SolvedParams, kind: str, i: int) -> MoebiusMap:
    s = solved.surface
    if kind == "bulge_lower":
        return solved.u(s.tau(i) + 1)
    if kind == "bulge_upper":
        return solved.u(s.tau(i))
    return MoebiusMap.identity()


def apply_phi(
    regions: RegionTable, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> tuple[CirclePoint, CirclePoint]:
    """The conjugacy: identity on the core, a vertex word on each bulge."""
    kind, i = locate_region(regions, u, w, tol)
    if kind == "outside":
        raise OutsideDomainError("conjugacy applied outside the curvilinear domain")
    if kind in ("core", "boundary"):
        return u, w
    m = _phi_map(regions.solved, kind, i)
    return m.apply(u), m.apply(w)


def reduce_geodesic(
    regions: RegionTable, u: CirclePoint, w: CirclePoint, tol: float = TOL
) -> tuple[CirclePoint, CirclePoint, int | None]:
    """Replace a polygon-crossing geodesic by its equivalent domain member.

    Returns (u', w', j) where j is the index of the vertex word applied,
    or None when the geodesic was already in the rectangle domain.
    """
    kind, i = locate_region(regions, u, w, tol)
    if kind == "outside":
        raise OutsideDomainError("geodesic does not cross the polygon")
    if kind in ("core", "boundary"):
        return u, w, None
    s = regions.surface
    j = s.wrap(s.tau(i) + 1) if kind == "bulge_lower" else s.tau(i)
    m = _phi_map(regions.solved, kind, i)
    return m.apply(u), m.apply(w), j


# -- conjugacy verification ---------------------------------------------------


@dataclass
class ConjugacyReport:
    samples: int = 0
    checked: int = 0
    skipped_boundary: int = 0
    max_deviation: float = 0.0
    failures: int = 0
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.failures == 0

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "checked": self.checked,
            "skipped_boundary": self.skipped_boundary,
            "max_deviation": self.max_deviation,
            "failures": self.failures,
            "seed": self.seed,
            "passed": self.passed,
        }


class _RegionLocator:
    """Vectorized region location for conjugacy sampling."""

    def __init__(self, regions: RegionTable):
        s = regions.surface
        self.s = s
        self.regions = regions
        self.clipper = GeodesicClipper(s)
        self.p_angles = np.array([s.p(i).angle for i in range(1, s.n + 1)])
        self.q_angles = np.array([s.q(i).angle for i in range(1, s.n + 1)])
        self.u_maps = [regions.solved.u(i) for i in range(1, s.n + 1)]

    def letter_between(self, thetas: np.ndarray, anchors: np.ndarray) -> np.ndarray:
        """1-based k with theta in [anchors_k, anchors_{k+1})."""
        base = anchors[0]
        rel = np.remainder(thetas - base, TWO_PI)
        breaks = np.remainder(anchors - base, TWO_PI)
        order = np.argsort(breaks)
        idx = np.searchsorted(breaks[order], rel, side="right") - 1
        return order[idx % len(anchors)] + 1

    def in_box(self, thetas, start_angles, end_angles, tol=TOL):
        width = np.remainder(end_angles - start_angles, TWO_PI)
        rel = np.remainder(thetas - start_angles, TWO_PI)
        return (rel <= width + tol) | (rel >= TWO_PI - tol)

    def classify(self, u_thetas, w_thetas, inside_geo, in_domain):
        """Codes: 0 core, 1 lower bulge, 2 upper bulge, -1 undecided; plus index."""
        s = self.s
        n = s.n
        code = np.full(len(u_thetas), -1, dtype=np.int64)
        index = np.zeros(len(u_thetas), dtype=np.int64)
        code[inside_geo & in_domain] = 0
        rest = inside_geo & ~in_domain
        if rest.any():
            i_low = self.letter_between(w_thetas, self.p_angles)  # w in [P_i, P_{i+1})
            x0 = self.q_angles[i_low % n]  # Q_{i+1}
            x1 = self.q_angles[(i_low + 1) % n]  # Q_{i+2}
            low_ok = rest & self.in_box(u_thetas, x0, x1)
            code[low_ok] = 1
            index[low_ok] = i_low[low_ok]
            i_up = self.letter_between(w_thetas, self.q_angles)  # w in [Q_j, Q_{j+1})
            x0u = self.p_angles[(i_up - 2) % n]  # P_{j-1}
            x1u = self.p_angles[(i_up - 1) % n]  # P_j
            up_ok = rest & ~low_ok & self.in_box(u_thetas, x0u, x1u)
            code[up_ok] = 2
            index[up_ok] = i_up[up_ok]
        return code, index

    def phi_many(self, u_thetas, w_thetas, code, index):
        """Apply the conjugacy given classification codes."""
        s = self.s
        u2 = np.array(u_thetas, dtype=float, copy=True)
        w2 = np.array(w_thetas, dtype=float, copy=True)
        for kind, tau_shift in ((1, 1), (2, 0)):
            mask = code == kind
            if not mask.any():
                continue
            for i in np.unique(index[mask]):
                m = self.u_maps[(s.tau(int(i)) + tau_shift - 1) % s.n]
                sel = mask & (index == i)
                zu = np.exp(1j * u2[sel])
                zw = np.exp(1j * w2[sel])
                u2[sel] = np.remainder(
                    np.angle((m.a * zu + np.conj(m.c)) / (m.c * zu + np.conj(m.a))), TWO_PI
                )
                w2[sel] = np.remainder(
                    np.angle((m.a * zw + np.conj(m.c)) / (m.c * zw + np.conj(m.a))), TWO_PI
                )
        return u2, w2


def sample_curvilinear(
    regions: RegionTable, rng: np.random.Generator, k: int, margin: float = 1e-7
) -> tuple[np.ndarray, np.ndarray]:
    """Rejection-sample k pairs inside the curvilinear domain, off boundaries.

    Points within `margin` of the domain's boundary curves, of the
    rectangle edges, or of the partition points are rejected, so samples
    classify robustly on both sides of the conjugacy.
    """
    loc = _RegionLocator(regions)
    out_u: list[np.ndarray] = []
    out_w: list[np.ndarray] = []
    need = k
    while need > 0:
        batch = max(4 * need, 256)
        u = rng.random(batch) * TWO_PI
        w = rng.random(batch) * TWO_PI
        lo, hi, entry, exit_, lo_ties, hi_ties = loc.clipper.clip(u, w)
        good = (hi - lo > margin) & (entry > 0) & (exit_ > 0)
        good &= (lo_ties < 2) & (hi_ties < 2)
        good &= regions.domain.boundary_distance_many(u, w) > margin
        good &= regions.solved.params.boundary_distance(w) > margin
        u, w = u[good], w[good]
        out_u.append(u[:need])
        out_w.append(w[:need])
        need -= min(need, len(u))
    return np.concatenate(out_u), np.concatenate(out_w)


def verify_conjugacy(
    solved: SolvedParams,
    domain: RectDomain,
    samples: int = 10_000,
    seed: int = 0,
    tol: float = TOL,
    margin: float = 1e-7,
) -> ConjugacyReport:
    """Check conjugacy(geo step) == extension step(conjugacy) on samples."""
    regions = build_regions(solved, domain)
    loc = _RegionLocator(regions)
    rng = np.random.default_rng(seed)
    report = ConjugacyReport(samples=samples, seed=seed)

    u, w = sample_curvilinear(regions, rng, samples, margin)
    lo, hi, entry, exit_, lo_ties, hi_ties = loc.clipper.clip(u, w)
    ok = (hi - lo > margin) & (exit_ > 0) & (hi_ties < 2)

    # geometric step
    a = np.array([solved.surface.t(i).a for i in range(1, solved.surface.n + 1)])
    c = np.array([solved.surface.t(i).c for i in range(1, solved.surface.n + 1)])
    ae, ce = a[exit_ - 1], c[exit_ - 1]
    zu, zw = np.exp(1j * u), np.exp(1j * w)
    gu = np.remainder(np.angle((ae * zu + np.conj(ce)) / (ce * zu + np.conj(ae))), TWO_PI)
    gw = np.remainder(np.angle((ae * zw + np.conj(ce)) / (ce * zw + np.conj(ae))), TWO_PI)

    # classify both p and geo(p); skip any sample whose classification is
    # ambiguous or whose image sits within the margin of a boundary
    in_dom_p = regions.domain.contains_many(u, w)
    code_p, idx_p = loc.classify(u, w, np.ones_like(ok, bool), in_dom_p)
    glo, ghi, gentry, gexit, glt, ght = loc.clipper.clip(gu, gw)
    g_inside = (ghi - glo > margin) & (gentry > 0) & (gexit > 0)
    in_dom_g = regions.domain.contains_many(gu, gw)
    code_g, idx_g = loc.classify(gu, gw, g_inside, in_dom_g)
    ok &= (code_p >= 0) & (code_g >= 0)
    ok &= regions.domain.boundary_distance_many(gu, gw) > margin
    ok &= solved.params.boundary_distance(gw) > margin

    report.skipped_boundary = int((~ok).sum())
    if not ok.any():
        return report

    pu, pw = loc.phi_many(u[ok], w[ok], code_p[ok], idx_p[ok])
    left_u, left_w = loc.phi_many(gu[ok], gw[ok], code_g[ok], idx_g[ok])
    right_u, right_w, _ = extension_step_many(solved.params, pu, pw)

    du = np.abs(np.remainder(left_u - right_u + math.pi, TWO_PI) - math.pi)
    dw = np.abs(np.remainder(left_w - right_w + math.pi, TWO_PI) - math.pi)
    dev = np.maximum(du, dw)
    report.checked = int(ok.sum())
    report.max_deviation = float(dev.max())
    report.failures = int((dev > tol).sum())
    return report


# -- coding -------------------------------------------------------------------


@dataclass(frozen=True)
class CodingSeq:
    """Finite window of the bi-infinite code of a geodesic."""

    center: tuple[float, float]  # (u, w) angles
    future: tuple[int, ...]  # symbols n_0, n_1, ...
    past: tuple[int, ...]  # symbols n_-1, n_-2, ...
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "center": [self.center[0], self.center[1]],
            "future": list(self.future),
            "past": list(self.past),
            "truncated": self.truncated,
        }


def code_geodesic(
    solved: SolvedParams,
    domain: RectDomain,
    u: CirclePoint,
    w: CirclePoint,
    n_future: int,
    n_past: int,
    tol: float = TOL,
) -> CodingSeq:
    """Symbols sigma(branch) along the forward and backward orbits.

    The orbit must stay clear of the partition points; when it comes
    within tol of one, the affected side is truncated and flagged.
    """
    if not domain.contains(u, w):
        raise OutsideDomainError("coding requires a point of the rectangle domain")
    s = solved.surface
    params = solved.params
    future: list[int] = []
    past: list[int] = []
    truncated = False

    cu, cw = u, w
    for _ in range(n_future):
        if params.boundary_distance(np.array([cw.angle]))[0] <= tol:
            truncated = True
            break
        cu, cw, i = extension_step(params, cu, cw)
        future.append(s.sigma(i))

    cu, cw = u, w
    for _ in range(n_past):
        try:
            cu, cw, i = inverse_step(solved, domain, cu, cw, tol)
        except (OutsideDomainError, BijectivityError):
            truncated = True
            break
        if params.boundary_distance(np.array([cw.angle]))[0] <= tol:
            truncated = True
            break
        past.append(s.sigma(i))

    return CodingSeq(
        center=(u.angle, w.angle),
        future=tuple(future),
        past=tuple(past),
        truncated=truncated,
    )


# -- Markov partition and sofic presentation ----------------------------------


@dataclass(frozen=True)
class TransitionMatrix:
    """0/1 transitions of the circle map on the 16g-8 half-intervals.

    Interval 2i-1 is (P_i, Q_i); interval 2i is (Q_i, P_{i+1}).  Row k has
    an entry at j iff the image of interval k covers interval j; rows are
    contiguous blocks.  branch[k] is the generator index the map applies
    on interval k, and label[k] = sigma(branch[k]) is the emitted symbol.
    """

    genus: int
    matrix: np.ndarray
    branch: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def row_entries(self, k: int) -> list[int]:
        return [int(j) + 1 for j in np.nonzero(self.matrix[k - 1])[0]]

    def to_text(self) -> str:
        return "\n".join(
            "".join("1" if self.matrix[r, c] else "0" for c in range(self.size))
            for r in range(self.size)
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "genus": self.genus,
                "intervals": self.size,
                "adjacency": {str(k): self.row_entries(k) for k in range(1, self.size + 1)},
                "branch": list(self.branch),
            },
            indent=2,
        )


def _wrap2(k: int, m: int) -> int:
    return (k - 1) % m + 1


def markov_transition_matrix(
    solved_or_params: SolvedParams | ExtremalParams, tol: float = TOL
) -> TransitionMatrix:
    """Build and numerically validate the half-interval transition matrix.

    Row contents follow the verified closed forms; every row's endpoint
    images are re-checked numerically and a mismatch raises MarkovError.
    """
    params = (
        solved_or_params.params
        if isinstance(solved_or_params, SolvedParams)
        else solved_or_params
    )
    s = params.surface
    n = s.n
    m = 2 * n
    matrix = np.zeros((m, m), dtype=bool)
    branch: list[int] = [0] * m

    def interval_endpoints(k: int) -> tuple[CirclePoint, CirclePoint]:
        i = (k + 1) // 2
        if k % 2:
            return s.p(i), s.q(i)
        return s.q(i), s.p(i + 1)

    def fill_block(row: int, start: int, count: int):
        for j in range(count):
            matrix[row - 1, _wrap2(start + j, m) - 1] = True

    for i in range(1, n + 1):
        si = s.sigma(i)
        # odd row 2i-1: interval (P_i, Q_i)
        row = 2 * i - 1
        if params.choice(i) == "P":
            branch[row - 1] = i
            expected = (s.q(si + 1), s.q(si + 2))
            fill_block(row, 2 * si + 2, 2)
        else:
            branch[row - 1] = s.wrap(i - 1)
            k = s.tau_sigma(i)
            expected = (s.p(k), s.p(k + 1))
            fill_block(row, 2 * k - 1, 2)
        a, b = interval_endpoints(row)
        t = s.t(branch[row - 1])
        for actual, claim, name in (
            (t.apply(a), expected[0], "left"),
            (t.apply(b), expected[1], "right"),
        ):
            if abs(math.remainder(actual.angle - claim.angle, TWO_PI)) > tol:
                raise MarkovError(f"row {row}: {name} endpoint image mismatch")
        # even row 2i: interval (Q_i, P_{i+1})
        row = 2 * i
        branch[row - 1] = i
        expected = (s.q(si + 2), s.p(si - 1))
        fill_block(row, 2 * si + 4, 2 * n - 7)
        a, b = interval_endpoints(row)
        t = s.t(i)
        for actual, claim, name in (
            (t.apply(a), expected[0], "left"),
            (t.apply(b), expected[1], "right"),
        ):
            if abs(math.remainder(actual.angle - claim.angle, TWO_PI)) > tol:
                raise MarkovError(f"row {row}: {name} endpoint image mismatch")

    return TransitionMatrix(genus=s.genus, matrix=matrix, branch=tuple(branch))


@dataclass(frozen=True)
class SoficGraph:
    """Edge-labeled presentation on the side alphabet {1..8g-4}."""

    genus: int
    graph: nx.MultiDiGraph = field(compare=False)

    @property
    def n(self) -> int:
        return 8 * self.genus - 4

    def edges(self) -> list[tuple[int, int, int]]:
        return sorted(
            (u, v, data["label"]) for u, v, data in self.graph.edges(data=True)
        )

    def is_strongly_connected(self) -> bool:
        return nx.is_strongly_connected(self.graph)

    def accepts(self, states: list[int], labels: list[int]) -> bool:
        """True iff consecutive states are joined by edges with the labels."""
        for a, b, lab in zip(states, states[1:], labels):
            data = self.graph.get_edge_data(a, b, default=None)
            if not data or not any(d.get("label") == lab for d in data.values()):
                return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "genus": self.genus,
                "vertices": list(range(1, self.n + 1)),
                "edges": [
                    {"from": u, "to": v, "label": lab} for u, v, lab in self.edges()
                ],
            },
            indent=2,
        )


def sofic_amalgamate(params: ExtremalParams, matrix: TransitionMatrix) -> SoficGraph:
    """Merge interval pairs 2k-1, 2k into the letter k and keep edge labels."""
    s = params.surface
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(1, s.n + 1))
    seen = set()
    for row in range(1, matrix.size + 1):
        src = (row + 1) // 2
        lab = s.sigma(matrix.branch[row - 1])
        for col in matrix.row_entries(row):
            dst = (col + 1) // 2
            key = (src, dst, lab)
            if key not in seen:
                seen.add(key)
                g.add_edge(src, dst, label=lab)
    return SoficGraph(genus=s.genus, graph=g)


def refine_to_matrix(params: ExtremalParams, graph: SoficGraph) -> set[tuple[int, int, int]]:
    """The (src_letter, dst_letter, label) triples of a transition matrix."""
    return set(graph.edges())
