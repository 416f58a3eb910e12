"""Extremal parameters, the corner-point solver, and the natural extension.

An extremal parameter choice picks A_i in {P_i, Q_i} for every side.  The
circle map applies T_i on [A_i, A_{i+1}); its two-coordinate extension
applies the same generator to both coordinates, with the index chosen by
the second coordinate.  The extension is a bijection of a finite union of
rectangles whose corners are the solved points G_i, H_i, D_i:

    G_sigma(i) = T_i G_{i-2}            if A_i = P_i
    G_sigma(i) = T_{tau(i)+1} G_tau(i)  if A_i = Q_i,   G_i in [P_i, P_{i+1}]

    U_i = T_sigma(i-1) T_tau(i) = T_sigma(i) T_{tau(i)-1}
    H_i = U_i G_{tau(i)-1}              D_i = T_{tau_sigma(i)+1} G_tau_sigma(i)

and the domain is the union over i of

    [H_{i+1}, G_{i-2}] x [P_i, Q_i]  u  [H_{i+1}, G_{i-1}] x [Q_i, P_{i+1}].

Membership uses the half-open convention (closed lower/left, open
upper/right) so that the rectangles genuinely partition the domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .circle import TOL, TWO_PI, Arc, CirclePoint, MoebiusMap, ccw_distance, wrap_angle
from .errors import (
    BijectivityError,
    ContradictionError,
    OutsideDomainError,
    RangeError,
)
from .surface import SurfaceGroup
from .words import BasePoint, GroupWord, prepend


class IndexType(IntEnum):
    """How an index resolves in the corner-point system.

    P_CYCLE and Q_CYCLE sit on a loop or two-cycle of the equation graph
    and resolve to a single endpoint; P_CHAIN and Q_CHAIN recurse along a
    chain that provably terminates on a cycle index.
    """

    P_CYCLE = 1
    P_CHAIN = 2
    Q_CYCLE = 3
    Q_CHAIN = 4


@dataclass(frozen=True)
class ExtremalParams:
    """A choice A_i in {P_i, Q_i} for each side, as a word over {P, Q}."""

    surface: SurfaceGroup
    word: str
    points: tuple[CirclePoint, ...] = field(init=False)

    def __post_init__(self):
        n = self.surface.n
        w = self.word.upper()
        if len(w) != n or any(ch not in "PQ" for ch in w):
            raise ValueError(f"parameter word must have length {n} over {{P,Q}}: {self.word!r}")
        object.__setattr__(self, "word", w)
        pts = tuple(
            self.surface.p(i) if w[i - 1] == "P" else self.surface.q(i)
            for i in range(1, n + 1)
        )
        object.__setattr__(self, "points", pts)
        base = pts[0].angle
        breaks = np.array([ccw_distance(base, p.angle) for p in pts])
        object.__setattr__(self, "_base", base)
        object.__setattr__(self, "_breaks", breaks)
        object.__setattr__(
            self, "_gen_a", np.array([self.surface.t(i).a for i in range(1, n + 1)])
        )
        object.__setattr__(
            self, "_gen_c", np.array([self.surface.t(i).c for i in range(1, n + 1)])
        )

    @property
    def n(self) -> int:
        return self.surface.n

    def choice(self, i: int) -> str:
        return self.word[self.surface.wrap(i) - 1]

    def a(self, i: int) -> CirclePoint:
        return self.points[self.surface.wrap(i) - 1]

    def branch(self, x: CirclePoint | float) -> int:
        """The index i with x in [A_i, A_{i+1}), exact half-open convention."""
        theta = x.angle if isinstance(x, CirclePoint) else wrap_angle(x)
        s = ccw_distance(self._base, theta)
        idx = int(np.searchsorted(self._breaks, s, side="right")) - 1
        return idx % self.n + 1

    def branch_many(self, thetas: np.ndarray) -> np.ndarray:
        s = np.remainder(np.asarray(thetas, dtype=float) - self._base, TWO_PI)
        idx = np.searchsorted(self._breaks, s, side="right") - 1
        return idx % self.n + 1

    def boundary_distance(self, thetas: np.ndarray) -> np.ndarray:
        """Angular distance to the nearest partition point A_i."""
        s = np.remainder(np.asarray(thetas, dtype=float)[:, None] - self._base, TWO_PI)
        d = np.abs(s - self._breaks[None, :])
        d = np.minimum(d, TWO_PI - d)
        return d.min(axis=1)


def extremal_params(surface: SurfaceGroup, word: str) -> ExtremalParams:
    return ExtremalParams(surface, word)


def classify_type(params: ExtremalParams, i: int) -> IndexType:
    """Type of index i, determined by the choices at sigma(i) and i+2 / tau(i)."""
    s = params.surface
    if params.choice(s.sigma(i)) == "P":
        return IndexType.P_CYCLE if params.choice(i + 2) == "P" else IndexType.P_CHAIN
    return IndexType.Q_CYCLE if params.choice(s.tau(i)) == "Q" else IndexType.Q_CHAIN


def solve_g(params: ExtremalParams, order: list[int] | None = None) -> list[GroupWord]:
    """Solve the corner-point system for G_1..G_N as canonical words.

    Cycle indices resolve directly to an endpoint; chain indices follow
    their single defining equation.  A chain that revisits an unresolved
    index would contradict the solvability guarantee, so it raises.  The
    result does not depend on the resolution order (each entry is a pure
    function of its index); `order` exists so tests can assert that.
    """
    s = params.surface
    maps = s.maps
    n = s.n
    memo: dict[int, GroupWord] = {}

    def resolve(start: int):
        stack = [start]
        active = set()
        while stack:
            i = stack[-1]
            if i in memo:
                stack.pop()
                continue
            t = classify_type(params, i)
            if t is IndexType.P_CYCLE:
                memo[i] = GroupWord((), BasePoint("P", s.wrap(i + 1)))
                stack.pop()
                continue
            if t is IndexType.Q_CYCLE:
                memo[i] = GroupWord((), BasePoint("P", i))
                stack.pop()
                continue
            if t is IndexType.P_CHAIN:
                letter, target = s.sigma(i), s.wrap(s.sigma(i) - 2)
            else:
                letter, target = s.wrap(s.tau_sigma(i) + 1), s.tau_sigma(i)
            if target in memo:
                memo[i] = prepend(maps, letter, memo[target])
                stack.pop()
                continue
            if target in active:
                raise ContradictionError(
                    f"corner-point chain through {i} revisits {target}; "
                    "the defining system admits no such cycle"
                )
            active.add(i)
            stack.append(target)

    for i in order if order is not None else range(1, n + 1):
        resolve(i)
    for i in range(1, n + 1):
        resolve(i)
    return [memo[i] for i in range(1, n + 1)]


@dataclass(frozen=True)
class SolvedPoint:
    word: GroupWord
    point: CirclePoint

    def to_json(self) -> dict:
        doc = self.word.to_json()
        doc["angle"] = self.point.angle
        return doc


@dataclass(frozen=True)
class SolvedParams:
    """The solved corner data for one extremal parameter choice."""

    params: ExtremalParams
    types: tuple[IndexType, ...]
    G: tuple[SolvedPoint, ...]
    H: tuple[SolvedPoint, ...]
    D: tuple[SolvedPoint, ...]
    U: tuple[MoebiusMap, ...]

    @property
    def surface(self) -> SurfaceGroup:
        return self.params.surface

    def g(self, i: int) -> CirclePoint:
        return self.G[self.surface.wrap(i) - 1].point

    def h(self, i: int) -> CirclePoint:
        return self.H[self.surface.wrap(i) - 1].point

    def d(self, i: int) -> CirclePoint:
        return self.D[self.surface.wrap(i) - 1].point

    def g_word(self, i: int) -> GroupWord:
        return self.G[self.surface.wrap(i) - 1].word

    def h_word(self, i: int) -> GroupWord:
        return self.H[self.surface.wrap(i) - 1].word

    def d_word(self, i: int) -> GroupWord:
        return self.D[self.surface.wrap(i) - 1].word

    def u(self, i: int) -> MoebiusMap:
        return self.U[self.surface.wrap(i) - 1]

    def to_json(self) -> str:
        doc = {
            "genus": self.surface.genus,
            "params": self.params.word,
            "solution": [
                {
                    "index": i + 1,
                    "type": int(self.types[i]),
                    "G": self.G[i].to_json(),
                    "H": self.H[i].to_json(),
                    "D": self.D[i].to_json(),
                }
                for i in range(self.surface.n)
            ],
        }
        return json.dumps(doc, indent=2)


def _in_closed_arc(x: CirclePoint, a: CirclePoint, b: CirclePoint, tol: float) -> bool:
    return Arc(a, b, True, True).contains(x, tol)


def compute_h_d(
    params: ExtremalParams, g_words: list[GroupWord], tol: float = TOL
) -> tuple[list[GroupWord], list[GroupWord], list[MoebiusMap]]:
    """H_i = U_i G_{tau(i)-1} and D_i = T_{tau_sigma(i)+1} G_{tau_sigma(i)}.

    U_i is computed both ways and must agree; range violations raise.
    """
    s = params.surface
    maps = s.maps
    n = s.n
    h_words: list[GroupWord] = []
    d_words: list[GroupWord] = []
    u_maps: list[MoebiusMap] = []
    for i in range(1, n + 1):
        u_map = s.t(s.sigma(i - 1)) @ s.t(s.tau(i))
        u_alt = s.t(s.sigma(i)) @ s.t(s.wrap(s.tau(i) - 1))
        if u_map.distance_to(u_alt) > tol:
            raise ContradictionError(f"the two expressions for U_{i} disagree")
        u_maps.append(u_map)
        gw = g_words[s.wrap(s.tau(i) - 1) - 1]
        hw = prepend(maps, s.tau(i), gw)
        hw = prepend(maps, s.sigma(i - 1), hw)
        h_words.append(hw)
        gw2 = g_words[s.tau_sigma(i) - 1]
        d_words.append(prepend(maps, s.wrap(s.tau_sigma(i) + 1), gw2, deep=True))
    return h_words, d_words, u_maps


def solve(surface: SurfaceGroup, word: str, tol: float = TOL) -> SolvedParams:
    """Solve a parameter word end to end, with all range invariants checked."""
    params = ExtremalParams(surface, word)
    g_words = solve_g(params)
    types = tuple(classify_type(params, i) for i in range(1, surface.n + 1))
    g_pts = [w.evaluate(surface) for w in g_words]
    for i in range(1, surface.n + 1):
        if not _in_closed_arc(g_pts[i - 1], surface.p(i), surface.p(i + 1), tol):
            raise RangeError(f"G_{i} lies outside [P_{i}, P_{surface.wrap(i + 1)}]")
    h_words, d_words, u_maps = compute_h_d(params, g_words, tol)
    h_pts = [w.evaluate(surface) for w in h_words]
    d_pts = [w.evaluate(surface) for w in d_words]
    for i in range(1, surface.n + 1):
        if not _in_closed_arc(h_pts[i - 1], surface.q(i), surface.q(i + 1), tol):
            raise RangeError(f"H_{i} lies outside [Q_{i}, Q_{surface.wrap(i + 1)}]")
        if not _in_closed_arc(d_pts[i - 1], surface.p(i), surface.q(i), tol):
            raise RangeError(f"D_{i} lies outside [P_{i}, Q_{i}]")
        sp1 = surface.wrap(surface.sigma(i) + 1)
        img = surface.t(surface.sigma(i)).apply(h_pts[sp1 - 1])
        if abs(math.remainder(img.angle - d_pts[i - 1].angle, TWO_PI)) > tol:
            raise RangeError(f"D_{i} != T_sigma({i}) H_{sp1}")
    return SolvedParams(
        params=params,
        types=types,
        G=tuple(SolvedPoint(w, p) for w, p in zip(g_words, g_pts)),
        H=tuple(SolvedPoint(w, p) for w, p in zip(h_words, h_pts)),
        D=tuple(SolvedPoint(w, p) for w, p in zip(d_words, d_pts)),
        U=tuple(u_maps),
    )


# -- the boundary map and its two-coordinate extension ------------------------


def boundary_step(params: ExtremalParams, x: CirclePoint) -> tuple[CirclePoint, int]:
    """One application of the circle map: T_i(x) for x in [A_i, A_{i+1})."""
    i = params.branch(x)
    return params.surface.t(i).apply(x), i


def extension_step(
    params: ExtremalParams, u: CirclePoint, w: CirclePoint
) -> tuple[CirclePoint, CirclePoint, int]:
    """One application of the two-coordinate extension; the index is chosen by w."""
    if abs(math.remainder(u.angle - w.angle, TWO_PI)) <= TOL:
        raise OutsideDomainError("extension map requires u != w")
    i = params.branch(w)
    t = params.surface.t(i)
    return t.apply(u), t.apply(w), i


def extension_step_many(params: ExtremalParams, u_thetas, w_thetas):
    """Vectorized extension step on angle arrays; returns (u', w', index)."""
    idx = params.branch_many(w_thetas)
    ai = params._gen_a[idx - 1]
    ci = params._gen_c[idx - 1]
    zu = np.exp(1j * np.asarray(u_thetas, dtype=float))
    zw = np.exp(1j * np.asarray(w_thetas, dtype=float))
    u2 = (ai * zu + np.conj(ci)) / (ci * zu + np.conj(ai))
    w2 = (ai * zw + np.conj(ci)) / (ci * zw + np.conj(ai))
    return np.remainder(np.angle(u2), TWO_PI), np.remainder(np.angle(w2), TWO_PI), idx


# -- the rectangle domain -----------------------------------------------------


@dataclass(frozen=True)
class DomainRect:
    """One axis-aligned rectangle of a domain on the two-torus of angle pairs."""

    x: Arc
    y: Arc
    strip: int
    kind: str  # "lower" for [P_i, Q_i] strips, "upper" for [Q_i, P_{i+1}]

    @property
    def width(self) -> float:
        return self.x.length

    @property
    def height(self) -> float:
        return self.y.length

    @property
    def degenerate(self) -> bool:
        # An intended-zero extent can round microscopically past 2*pi.
        return (
            self.width <= TOL
            or self.height <= TOL
            or self.width >= TWO_PI - TOL
            or self.height >= TWO_PI - TOL
        )

    def contains(self, u: CirclePoint, w: CirclePoint, tol: float = 0.0) -> bool:
        return self.x.contains(u, tol) and self.y.contains(w, tol)


class RectDomain:
    """A finite union of rectangles with half-open membership semantics.

    The y-arcs of the rectangles tile the circle (indexed lookups go
    through searchsorted); the x-arcs are arbitrary.
    """

    def __init__(self, rects: list[DomainRect]):
        self.rects = rects
        self._y_base = rects[0].y.start.angle
        starts = np.array([ccw_distance(self._y_base, r.y.start.angle) for r in rects])
        order = np.argsort(starts, kind="stable")
        self._y_breaks = starts[order]
        self._slot_to_rect = np.asarray(order, dtype=np.int64)
        self._x0 = np.array([r.x.start.angle for r in rects])
        self._xw = np.array([r.x.length for r in rects])
        self._y0 = np.array([r.y.start.angle for r in rects])
        self._yw = np.array([r.y.length for r in rects])
        self._areas = self._xw * self._yw

    @property
    def area(self) -> float:
        return float(self._areas.sum())

    def locate(self, u: CirclePoint, w: CirclePoint) -> int | None:
        """Index of the rectangle containing (u, w), or None."""
        hits = self.locate_many(np.array([u.angle]), np.array([w.angle]))
        return int(hits[0]) if hits[0] >= 0 else None

    def locate_many(self, u_thetas, w_thetas) -> np.ndarray:
        """Vectorized locate; -1 where outside."""
        wv = np.remainder(np.asarray(w_thetas, dtype=float) - self._y_base, TWO_PI)
        slot = np.searchsorted(self._y_breaks, wv, side="right") - 1
        slot = slot % len(self.rects)
        ridx = self._slot_to_rect[slot]
        s = np.remainder(np.asarray(u_thetas, dtype=float) - self._x0[ridx], TWO_PI)
        inside = s < self._xw[ridx]
        return np.where(inside, ridx, -1)

    def contains(self, u: CirclePoint, w: CirclePoint) -> bool:
        return self.locate(u, w) is not None

    def contains_many(self, u_thetas, w_thetas) -> np.ndarray:
        return self.locate_many(u_thetas, w_thetas) >= 0

    def distance_many(self, u_thetas, w_thetas) -> np.ndarray:
        """Chebyshev angular distance to the closed union, 0 for members."""
        u = np.asarray(u_thetas, dtype=float)[:, None]
        w = np.asarray(w_thetas, dtype=float)[:, None]

        su = np.remainder(u - self._x0[None, :], TWO_PI)
        du = np.where(su <= self._xw[None, :], 0.0, np.minimum(su - self._xw[None, :], TWO_PI - su))
        sw = np.remainder(w - self._y0[None, :], TWO_PI)
        dw = np.where(sw <= self._yw[None, :], 0.0, np.minimum(sw - self._yw[None, :], TWO_PI - sw))
        return np.maximum(du, dw).min(axis=1)

    def boundary_distance_many(self, u_thetas, w_thetas) -> np.ndarray:
        """Angular distance to the nearest rectangle edge line (for skip flags)."""
        u = np.asarray(u_thetas, dtype=float)[:, None]
        w = np.asarray(w_thetas, dtype=float)[:, None]
        xe = np.concatenate([self._x0, np.remainder(self._x0 + self._xw, TWO_PI)])
        ye = np.concatenate([self._y0, np.remainder(self._y0 + self._yw, TWO_PI)])
        du = np.abs(np.remainder(u - xe[None, :] + math.pi, TWO_PI) - math.pi).min(axis=1)
        dw = np.abs(np.remainder(w - ye[None, :] + math.pi, TWO_PI) - math.pi).min(axis=1)
        return np.minimum(du, dw)

    def sample(self, rng: np.random.Generator, k: int) -> tuple[np.ndarray, np.ndarray]:
        """k points uniform on the union (area-weighted over rectangles)."""
        p = self._areas / self._areas.sum()
        ridx = rng.choice(len(self.rects), size=k, p=p)
        u = np.remainder(self._x0[ridx] + rng.random(k) * self._xw[ridx], TWO_PI)
        w = np.remainder(self._y0[ridx] + rng.random(k) * self._yw[ridx], TWO_PI)
        return u, w


def build_domain(solved: SolvedParams) -> RectDomain:
    """The 2N-rectangle domain of the natural extension.

    Lower strip i: [H_{i+1}, G_{i-2}] x [P_i, Q_i]; upper strip i:
    [H_{i+1}, G_{i-1}] x [Q_i, P_{i+1}].  Degenerate rectangles (empty
    x-extent) are retained so counts and labels stay stable.
    """
    s = solved.surface
    rects = []
    for i in range(1, s.n + 1):
        rects.append(
            DomainRect(
                x=Arc(solved.h(i + 1), solved.g(i - 2)),
                y=Arc(s.p(i), s.q(i)),
                strip=i,
                kind="lower",
            )
        )
        rects.append(
            DomainRect(
                x=Arc(solved.h(i + 1), solved.g(i - 1)),
                y=Arc(s.q(i), s.p(i + 1)),
                strip=i,
                kind="upper",
            )
        )
    return RectDomain(rects)


build_omega = build_domain


def invariant_measure(rect: DomainRect) -> float:
    """Mass of du dw / |e^{iu} - e^{iw}|^2 on a rectangle, in closed form.

    The antiderivative of 1/(4 sin^2((u-w)/2)) gives
    log( sin((b-d)/2) sin((a-c)/2) / ( sin((a-d)/2) sin((b-c)/2) ) )
    for the rectangle [a,b] x [c,d]; the arguments never vanish on
    rectangles that avoid the diagonal.
    """
    a = rect.x.start.angle
    b = a + rect.x.length
    c = rect.y.start.angle
    # Lift the y-arc so differences are taken consistently on the cover.
    c = a + math.remainder(c - a, TWO_PI)
    d = c + rect.y.length

    def s(x):
        return abs(math.sin(0.5 * x))

    return math.log(s(b - d) * s(a - c) / (s(a - d) * s(b - c)))


# -- the inverse step ---------------------------------------------------------


def inverse_step(
    solved: SolvedParams,
    domain: RectDomain,
    u: CirclePoint,
    w: CirclePoint,
    tol: float = TOL,
) -> tuple[CirclePoint, CirclePoint, int]:
    """The unique preimage in the domain of a domain point.

    Searches the N candidates (T_sigma(i) u, T_sigma(i) w); the right one
    lands in the domain with its w-coordinate in [A_i, A_{i+1}).  Returns
    the preimage and the branch index i it will be mapped forward with.
    """
    if not domain.contains(u, w):
        raise OutsideDomainError("inverse requested for a point outside the domain")
    s = solved.surface
    params = solved.params
    hits = []
    for i in range(1, s.n + 1):
        t_inv = s.t(s.sigma(i))
        u2 = t_inv.apply(u)
        w2 = t_inv.apply(w)
        if params.branch(w2) != i:
            continue
        if domain.contains(u2, w2):
            hits.append((u2, w2, i))
    if len(hits) == 1:
        return hits[0]
    if not hits:
        raise BijectivityError("no preimage found inside the domain")
    # Distinct candidates within tolerance of each other are a rounding
    # artifact on a shared rectangle edge, not a bijectivity failure.
    base = hits[0]
    for other in hits[1:]:
        if (
            abs(math.remainder(base[0].angle - other[0].angle, TWO_PI)) > tol
            or abs(math.remainder(base[1].angle - other[1].angle, TWO_PI)) > tol
        ):
            raise BijectivityError(f"multiple preimages found: branches {[h[2] for h in hits]}")
    return base


def inverse_step_many(solved: SolvedParams, domain: RectDomain, u_thetas, w_thetas):
    """Vectorized inverse; returns (u', w', branch, hit_count)."""
    s = solved.surface
    params = solved.params
    m = len(u_thetas)
    zu = np.exp(1j * np.asarray(u_thetas, dtype=float))
    zw = np.exp(1j * np.asarray(w_thetas, dtype=float))
    best_u = np.zeros(m)
    best_w = np.zeros(m)
    best_i = np.zeros(m, dtype=np.int64)
    count = np.zeros(m, dtype=np.int64)
    for i in range(1, s.n + 1):
        t_inv = s.t(s.sigma(i))
        a, c = t_inv.a, t_inv.c
        u2 = np.remainder(np.angle((a * zu + np.conj(c)) / (c * zu + np.conj(a))), TWO_PI)
        w2 = np.remainder(np.angle((a * zw + np.conj(c)) / (c * zw + np.conj(a))), TWO_PI)
        ok = (params.branch_many(w2) == i) & domain.contains_many(u2, w2)
        newhit = ok & (count == 0)
        best_u = np.where(newhit, u2, best_u)
        best_w = np.where(newhit, w2, best_w)
        best_i = np.where(newhit, i, best_i)
        count += ok.astype(np.int64)
    return best_u, best_w, best_i, count


# -- bijectivity verification -------------------------------------------------


@dataclass
class BijectivityReport:
    """Outcome of the analytic and Monte Carlo bijectivity checks."""

    analytic_checked: bool = False
    corner_failures: list[str] = field(default_factory=list)
    tiling_failures: list[str] = field(default_factory=list)
    degeneracy_failures: list[str] = field(default_factory=list)
    max_corner_deviation: float = 0.0
    mc_checked: bool = False
    mc_samples: int = 0
    mc_image_misses: int = 0
    mc_injectivity_collisions: int = 0
    mc_preimage_misses: int = 0
    mc_preimage_ambiguous: int = 0
    boundary_flags: int = 0
    seed: int | None = None

    @property
    def analytic_passed(self) -> bool:
        return self.analytic_checked and not (
            self.corner_failures or self.tiling_failures or self.degeneracy_failures
        )

    @property
    def mc_passed(self) -> bool:
        return self.mc_checked and not (
            self.mc_image_misses
            or self.mc_injectivity_collisions
            or self.mc_preimage_misses
            or self.mc_preimage_ambiguous
        )

    @property
    def passed(self) -> bool:
        ok = True
        if self.analytic_checked:
            ok = ok and self.analytic_passed
        if self.mc_checked:
            ok = ok and self.mc_passed
        return ok

    def to_json(self) -> dict:
        return {
            "analytic_checked": self.analytic_checked,
            "analytic_passed": self.analytic_passed if self.analytic_checked else None,
            "corner_failures": self.corner_failures,
            "tiling_failures": self.tiling_failures,
            "degeneracy_failures": self.degeneracy_failures,
            "max_corner_deviation": self.max_corner_deviation,
            "mc_checked": self.mc_checked,
            "mc_passed": self.mc_passed if self.mc_checked else None,
            "mc_samples": self.mc_samples,
            "mc_image_misses": self.mc_image_misses,
            "mc_injectivity_collisions": self.mc_injectivity_collisions,
            "mc_preimage_misses": self.mc_preimage_misses,
            "mc_preimage_ambiguous": self.mc_preimage_ambiguous,
            "boundary_flags": self.boundary_flags,
            "seed": self.seed,
            "passed": self.passed,
        }


def _angdiff(a: float, b: float) -> float:
    return abs(math.remainder(a - b, TWO_PI))


def verify_bijectivity(
    solved: SolvedParams,
    domain: RectDomain,
    mode: str = "both",
    samples: int = 1000,
    seed: int = 0,
    tol: float = TOL,
) -> BijectivityReport:
    """Verify that the extension map is a bijection of its rectangle domain.

    Analytic mode recomputes every image rectangle from its corners,
    matches them against the solved points by name, and re-tiles each
    horizontal strip from the image pieces.  Monte Carlo mode checks
    forward membership, injectivity and preimage existence on samples.
    """
    report = BijectivityReport(seed=seed)
    if mode in ("analytic", "both"):
        _verify_analytic(solved, report, tol)
    if mode in ("mc", "both"):
        _verify_monte_carlo(solved, domain, report, samples, seed, tol)
    return report


def _corner_check(report, name, actual: CirclePoint, expected: CirclePoint, tol):
    dev = _angdiff(actual.angle, expected.angle)
    report.max_corner_deviation = max(report.max_corner_deviation, dev)
    if dev > tol:
        report.corner_failures.append(f"{name} off by {dev:.3g}")


def _verify_analytic(solved: SolvedParams, report: BijectivityReport, tol: float):
    s = solved.surface
    n = s.n
    params = solved.params
    report.analytic_checked = True

    for i in range(1, n + 1):
        si = s.sigma(i)
        t = s.t(i)
        # Image of the upper rectangle [H_{i+1}, G_{i-1}] x [Q_i, P_{i+1}].
        _corner_check(report, f"T_{i} H_{s.wrap(i + 1)} = D_{si}", t.apply(solved.h(i + 1)), solved.d(si), tol)
        _corner_check(report, f"T_{i} G_{s.wrap(i - 1)} = D_{s.wrap(si + 1)}", t.apply(solved.g(i - 1)), solved.d(si + 1), tol)
        _corner_check(report, f"T_{i} Q_{i} = Q_{s.wrap(si + 2)}", t.apply(s.q(i)), s.q(si + 2), tol)
        _corner_check(report, f"T_{i} P_{s.wrap(i + 1)} = P_{s.wrap(si - 1)}", t.apply(s.p(i + 1)), s.p(si - 1), tol)
        # Image of the lower rectangle [H_{i+1}, G_{i-2}] x [P_i, Q_i].
        if params.choice(i) == "P":
            _corner_check(report, f"T_{i} G_{s.wrap(i - 2)} = G_{si}", t.apply(solved.g(i - 2)), solved.g(si), tol)
            _corner_check(report, f"T_{i} P_{i} = Q_{s.wrap(si + 1)}", t.apply(s.p(i)), s.q(si + 1), tol)
        else:
            t1 = s.t(i - 1)
            k = s.tau_sigma(i)
            _corner_check(report, f"T_{s.wrap(i - 1)} H_{s.wrap(i + 1)} = H_{s.wrap(k + 1)}", t1.apply(solved.h(i + 1)), solved.h(k + 1), tol)
            _corner_check(report, f"T_{s.wrap(i - 1)} G_{s.wrap(i - 2)} = D_{s.wrap(k + 2)}", t1.apply(solved.g(i - 2)), solved.d(k + 2), tol)
            _corner_check(report, f"T_{s.wrap(i - 1)} P_{i} = P_{k}", t1.apply(s.p(i)), s.p(k), tol)
            _corner_check(report, f"T_{s.wrap(i - 1)} Q_{i} = P_{s.wrap(k + 1)}", t1.apply(s.q(i)), s.p(k + 1), tol)

    # Degeneracy happens exactly where the image decomposition drops a piece.
    for m in range(1, n + 1):
        head_deg = _angdiff(solved.h(m + 1).angle, solved.d(m + 2).angle) <= tol
        head_expected = params.choice(s.tau_sigma(m)) == "P"
        if head_deg != head_expected:
            report.degeneracy_failures.append(
                f"[H_{s.wrap(m + 1)}, D_{s.wrap(m + 2)}] degenerate={head_deg} "
                f"but choice at tau_sigma({m}) is {params.choice(s.tau_sigma(m))}"
            )
        for j in (m - 2, m - 1):
            tail_deg = _angdiff(solved.g(j).angle, solved.d(j).angle) <= tol
            tail_expected = params.choice(s.sigma(j)) == "Q"
            if tail_deg != tail_expected:
                report.degeneracy_failures.append(
                    f"[D_{s.wrap(j)}, G_{s.wrap(j)}] degenerate={tail_deg} "
                    f"but choice at sigma({j}) is {params.choice(s.sigma(j))}"
                )

    # Re-tile each strip from the image pieces and compare widths.
    for m in range(1, n + 1):
        for kind in ("lower", "upper"):
            end = m - 2 if kind == "lower" else m - 1
            pieces = [(solved.h(m + 1), solved.d(m + 2), f"[H_{s.wrap(m+1)},D_{s.wrap(m+2)}]")]
            j = s.wrap(m + 2)
            while j != s.wrap(end):
                pieces.append((solved.d(j), solved.d(j + 1), f"[D_{s.wrap(j)},D_{s.wrap(j+1)}]"))
                j = s.wrap(j + 1)
            pieces.append((solved.d(end), solved.g(end), f"[D_{s.wrap(end)},G_{s.wrap(end)}]"))
            total = 0.0
            prev_end: CirclePoint | None = None
            for a, b, label in pieces:
                width = ccw_distance(a.angle, b.angle)
                if width > TWO_PI - n * tol:
                    width = 0.0  # degenerate piece rounded microscopically past zero
                elif width > math.pi:
                    # a genuinely reversed piece would wrap most of the circle
                    report.tiling_failures.append(
                        f"strip {m} {kind}: piece {label} reversed (width {width:.3g})"
                    )
                    width = 0.0
                if prev_end is not None and _angdiff(prev_end.angle, a.angle) > tol:
                    report.tiling_failures.append(
                        f"strip {m} {kind}: gap before {label}"
                    )
                prev_end = b
                total += width
            strip_width = ccw_distance(solved.h(m + 1).angle, solved.g(end).angle)
            if strip_width > TWO_PI - n * tol:
                strip_width = 0.0
            if abs(total - strip_width) > n * tol:
                report.tiling_failures.append(
                    f"strip {m} {kind}: pieces cover {total:.12f} of {strip_width:.12f}"
                )


def _verify_monte_carlo(
    solved: SolvedParams,
    domain: RectDomain,
    report: BijectivityReport,
    samples: int,
    seed: int,
    tol: float,
):
    params = solved.params
    rng = np.random.default_rng(seed)
    report.mc_checked = True
    report.mc_samples = samples

    u, w = domain.sample(rng, samples)
    u2, w2, _ = extension_step_many(params, u, w)
    near_edge = domain.boundary_distance_many(u2, w2) <= 10 * tol
    report.boundary_flags += int(near_edge.sum())
    inside = domain.contains_many(u2, w2) | near_edge
    report.mc_image_misses = int((~inside).sum())

    order = np.lexsort((w2, u2))
    du = np.abs(np.diff(u2[order]))
    dw = np.abs(np.diff(w2[order]))
    close_img = (du <= tol) & (dw <= tol)
    if close_img.any():
        pu = np.abs(np.diff(u[order]))
        pw = np.abs(np.diff(w[order]))
        separated_pre = (pu > 10 * tol) | (pw > 10 * tol)
        report.mc_injectivity_collisions = int((close_img & separated_pre).sum())

    tu, tw = domain.sample(rng, samples)
    _, _, _, count = inverse_step_many(solved, domain, tu, tw)
    edge = domain.boundary_distance_many(tu, tw) <= 10 * tol
    report.boundary_flags += int(edge.sum())
    report.mc_preimage_misses = int(((count == 0) & ~edge).sum())
    report.mc_preimage_ambiguous = int(((count > 1) & ~edge).sum())
