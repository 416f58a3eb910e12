"""The dual parameter choice and the domain of its natural extension.

For every extremal choice, the points D_i solved from the corner system
form a second parameter choice (generally not extremal) whose boundary map
runs the original extension backwards: flipping coordinates carries the
domain onto the dual domain, and applying the flip before and after the
inverse extension step gives exactly the dual forward step.  The dual
domain has both a three-rectangle-per-strip description driven by the
second coordinate and a vertical-strip description that is literally the
flipped rectangle domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .boundary import (
    DomainRect,
    RectDomain,
    SolvedParams,
    build_domain,
    inverse_step_many,
    solve,
)
from .circle import TOL, TWO_PI, Arc, CirclePoint, ccw_distance, wrap_angle
from .errors import ConstructionError, OutsideDomainError
from .surface import SurfaceGroup
from .words import GroupWord


@dataclass(frozen=True)
class DualParams:
    """The dual choice: one point in [P_i, Q_i] per side, with its words."""

    solved: SolvedParams  # provenance: the extremal choice this is dual to

    @property
    def surface(self) -> SurfaceGroup:
        return self.solved.surface

    @property
    def source_word(self) -> str:
        return self.solved.params.word

    @property
    def n(self) -> int:
        return self.surface.n

    def d(self, i: int) -> CirclePoint:
        return self.solved.d(i)

    def d_word(self, i: int) -> GroupWord:
        return self.solved.d_word(i)

    @cached_property
    def _breaks(self) -> np.ndarray:
        base = self.d(1).angle
        return np.array([ccw_distance(base, self.d(i).angle) for i in range(1, self.n + 1)])

    @cached_property
    def _angles(self) -> np.ndarray:
        return np.array([self.d(i).angle for i in range(1, self.n + 1)])

    @cached_property
    def _gen(self) -> tuple[np.ndarray, np.ndarray]:
        s = self.surface
        return (
            np.array([s.t(i).a for i in range(1, s.n + 1)]),
            np.array([s.t(i).c for i in range(1, s.n + 1)]),
        )

    def branch(self, w: CirclePoint | float) -> int:
        theta = w.angle if isinstance(w, CirclePoint) else wrap_angle(w)
        rel = ccw_distance(self.d(1).angle, theta)
        idx = int(np.searchsorted(self._breaks, rel, side="right")) - 1
        return idx % self.n + 1

    def branch_many(self, thetas) -> np.ndarray:
        rel = np.remainder(np.asarray(thetas, dtype=float) - self.d(1).angle, TWO_PI)
        idx = np.searchsorted(self._breaks, rel, side="right") - 1
        return idx % self.n + 1

    def boundary_distance(self, thetas) -> np.ndarray:
        d = np.abs(
            np.remainder(
                np.asarray(thetas, dtype=float)[:, None] - self._angles[None, :] + math.pi,
                TWO_PI,
            )
            - math.pi
        )
        return d.min(axis=1)

    def extremal_word(self, tol: float = TOL) -> str | None:
        """The {P,Q} word matching the dual points, or None if non-extremal."""
        s = self.surface
        out = []
        for i in range(1, self.n + 1):
            di = self.d(i)
            if abs(math.remainder(di.angle - s.p(i).angle, TWO_PI)) <= tol:
                out.append("P")
            elif abs(math.remainder(di.angle - s.q(i).angle, TWO_PI)) <= tol:
                out.append("Q")
            else:
                return None
        return "".join(out)

    def to_json(self) -> str:
        doc = json.loads(self.solved.to_json())
        doc["source_params"] = self.source_word
        doc["dual"] = [
            dict(self.d_word(i).to_json(), angle=self.d(i).angle)
            for i in range(1, self.n + 1)
        ]
        return json.dumps(doc, indent=2)


def dual_params(solved: SolvedParams) -> DualParams:
    return DualParams(solved=solved)


@dataclass(frozen=True)
class DualDomain:
    """Domain of the dual extension, in both decompositions.

    horizontal strips (driven by the second coordinate, one per index i):
        wide  [Q_{i+2}, P_{i-1}] x [D_i, D_{i+1})
        head  [P_{i-1}, P_i]     x [H_i, D_{i+1})   empty iff A_{sigma(i)+1} = P
        tail  [Q_{i+1}, Q_{i+2}] x [D_i, G_i)       empty iff A_{sigma(i)} = Q
    The vertical-strip view is the coordinate flip of the primal domain.
    """

    dual: DualParams
    vertical: RectDomain  # stored flipped: its (x, y) is our (w, u)
    wide: tuple[DomainRect, ...]
    head: tuple[DomainRect, ...]
    tail: tuple[DomainRect, ...]

    @property
    def surface(self) -> SurfaceGroup:
        return self.dual.surface

    def rectangles(self) -> list[DomainRect]:
        return list(self.wide) + list(self.head) + list(self.tail)

    def contains_vertical(self, u: CirclePoint, w: CirclePoint) -> bool:
        return self.vertical.contains(w, u)

    def contains_vertical_many(self, u_thetas, w_thetas) -> np.ndarray:
        return self.vertical.contains_many(w_thetas, u_thetas)

    def contains_horizontal(self, u: CirclePoint, w: CirclePoint) -> bool:
        return bool(self.contains_horizontal_many(np.array([u.angle]), np.array([w.angle]))[0])

    def contains_horizontal_many(self, u_thetas, w_thetas) -> np.ndarray:
        dual = self.dual
        s = self.surface
        n = s.n
        u = np.asarray(u_thetas, dtype=float)
        w = np.asarray(w_thetas, dtype=float)
        i = dual.branch_many(w)

        def in_arc(theta, a0, a1):
            width = np.remainder(a1 - a0, TWO_PI)
            # An intended-empty arc can round microscopically past 2*pi.
            width = np.where(width > TWO_PI - 1e-9, 0.0, width)
            rel = np.remainder(theta - a0, TWO_PI)
            return rel < width

        q_ang = np.array([s.q(k).angle for k in range(1, n + 1)])
        p_ang = np.array([s.p(k).angle for k in range(1, n + 1)])
        d_ang = np.array([dual.d(k).angle for k in range(1, n + 1)])
        h_ang = np.array([dual.solved.h(k).angle for k in range(1, n + 1)])
        g_ang = np.array([dual.solved.g(k).angle for k in range(1, n + 1)])

        qi1 = q_ang[i % n]  # Q_{i+1}
        qi2 = q_ang[(i + 1) % n]  # Q_{i+2}
        pm1 = p_ang[(i - 2) % n]  # P_{i-1}
        pi = p_ang[(i - 1) % n]  # P_i
        di = d_ang[(i - 1) % n]
        di1 = d_ang[i % n]
        hi = h_ang[(i - 1) % n]
        gi = g_ang[(i - 1) % n]

        in_wide = in_arc(u, qi2, pm1)
        in_head = in_arc(u, pm1, pi) & in_arc(w, hi, di1)
        in_tail = in_arc(u, qi1, qi2) & in_arc(w, di, gi)
        return in_wide | in_head | in_tail

    def sample(self, rng: np.random.Generator, k: int):
        w, u = self.vertical.sample(rng, k)
        return u, w


def build_omega_dual(solved: SolvedParams, tol: float = TOL) -> DualDomain:
    """Assemble the dual domain and check its structure.

    Verifies that the vertical strips are the flip of the primal strips
    and that head/tail rectangles degenerate exactly under the conditions
    read off the parameter word; a mismatch raises ConstructionError.
    """
    s = solved.surface
    dual = dual_params(solved)
    n = s.n
    params = solved.params

    vertical = build_domain(solved)  # the flip: V_i = phi(lower strip i), etc.

    wide, head, tail = [], [], []
    for i in range(1, n + 1):
        wide.append(
            DomainRect(
                x=Arc(s.q(i + 2), s.p(i - 1)),
                y=Arc(dual.d(i), dual.d(i + 1)),
                strip=i,
                kind="wide",
            )
        )
        head.append(
            DomainRect(
                x=Arc(s.p(i - 1), s.p(i)),
                y=Arc(solved.h(i), dual.d(i + 1)),
                strip=i,
                kind="head",
            )
        )
        tail.append(
            DomainRect(
                x=Arc(s.q(i + 1), s.q(i + 2)),
                y=Arc(dual.d(i), solved.g(i)),
                strip=i,
                kind="tail",
            )
        )

    def near(a: CirclePoint, b: CirclePoint) -> bool:
        return abs(math.remainder(a.angle - b.angle, TWO_PI)) <= tol

    for i in range(1, n + 1):
        head_empty = near(solved.h(i), dual.d(i + 1))
        if head_empty != (params.choice(s.sigma(i) + 1) == "P"):
            raise ConstructionError(
                f"dual head rectangle {i}: empty={head_empty} contradicts the "
                f"choice at sigma({i})+1"
            )
        tail_empty = near(dual.d(i), solved.g(i))
        if tail_empty != (params.choice(s.sigma(i)) == "Q"):
            raise ConstructionError(
                f"dual tail rectangle {i}: empty={tail_empty} contradicts the "
                f"choice at sigma({i})"
            )

    # The vertical strips must be exactly the flipped primal strips.
    for i in range(1, n + 1):
        lower = vertical.rects[2 * (i - 1)]
        if not (near(lower.y.start, s.p(i)) and near(lower.x.start, solved.h(i + 1))):
            raise ConstructionError(f"vertical strip {i} does not flip onto the primal strip")

    return DualDomain(dual=dual, vertical=vertical, wide=tuple(wide), head=tuple(head), tail=tuple(tail))


def dual_step(
    dual: DualParams, u: CirclePoint, w: CirclePoint
) -> tuple[CirclePoint, CirclePoint, int]:
    """One application of the dual extension; the index is chosen by w."""
    if abs(math.remainder(u.angle - w.angle, TWO_PI)) <= TOL:
        raise OutsideDomainError("dual extension requires u != w")
    i = dual.branch(w)
    t = dual.surface.t(i)
    return t.apply(u), t.apply(w), i


def dual_step_many(dual: DualParams, u_thetas, w_thetas):
    idx = dual.branch_many(w_thetas)
    a, c = dual._gen
    ai, ci = a[idx - 1], c[idx - 1]
    zu = np.exp(1j * np.asarray(u_thetas, dtype=float))
    zw = np.exp(1j * np.asarray(w_thetas, dtype=float))
    u2 = (ai * zu + np.conj(ci)) / (ci * zu + np.conj(ai))
    w2 = (ai * zw + np.conj(ci)) / (ci * zw + np.conj(ai))
    return np.remainder(np.angle(u2), TWO_PI), np.remainder(np.angle(w2), TWO_PI), idx


# -- verification -------------------------------------------------------------


@dataclass
class DualityReport:
    samples: int = 0
    flip_failures: int = 0
    image_corner_failures: list[str] = field(default_factory=list)
    identity_checked: int = 0
    identity_failures: int = 0
    identity_max_deviation: float = 0.0
    skipped: int = 0
    code_checked: int = 0
    code_failures: int = 0
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return (
            self.flip_failures == 0
            and not self.image_corner_failures
            and self.identity_checked > 0
            and self.identity_failures == 0
            and self.code_failures == 0
        )

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "flip_failures": self.flip_failures,
            "image_corner_failures": self.image_corner_failures,
            "identity_checked": self.identity_checked,
            "identity_failures": self.identity_failures,
            "identity_max_deviation": self.identity_max_deviation,
            "skipped": self.skipped,
            "code_checked": self.code_checked,
            "code_failures": self.code_failures,
            "seed": self.seed,
            "passed": self.passed,
        }


def _angdiff(a: float, b: float) -> float:
    return abs(math.remainder(a - b, TWO_PI))


def verify_dual_images(
    solved: SolvedParams, dual_domain: DualDomain, tol: float = TOL
) -> list[str]:
    """Corner checks for the images of the dual rectangles.

    The wide rectangle maps onto an upper vertical strip; the tail maps
    onto a lower vertical strip when the choice at sigma(i) is P; the head
    maps onto the next lower strip when the choice at sigma(i)+1 is Q.
    """
    s = solved.surface
    dual = dual_domain.dual
    params = solved.params
    fails: list[str] = []

    def check(name: str, actual: CirclePoint, expected: CirclePoint):
        dev = _angdiff(actual.angle, expected.angle)
        if dev > tol:
            fails.append(f"{name} off by {dev:.3g}")

    for i in range(1, s.n + 1):
        t = s.t(i)
        j = s.sigma(i)
        check(f"T_{i} Q_{s.wrap(i + 2)} = Q_{j}", t.apply(s.q(i + 2)), s.q(j))
        check(f"T_{i} P_{s.wrap(i - 1)} = P_{s.wrap(j + 1)}", t.apply(s.p(i - 1)), s.p(j + 1))
        check(f"T_{i} D_{i} = H_{s.wrap(j + 1)}", t.apply(dual.d(i)), solved.h(j + 1))
        check(f"T_{i} D_{s.wrap(i + 1)} = G_{s.wrap(j - 1)}", t.apply(dual.d(i + 1)), solved.g(j - 1))
        if params.choice(j) == "P":
            check(f"T_{i} G_{i} = G_{s.wrap(j - 2)}", t.apply(solved.g(i)), solved.g(j - 2))
            check(f"T_{i} Q_{s.wrap(i + 1)} = P_{j}", t.apply(s.q(i + 1)), s.p(j))
        if params.choice(j + 1) == "Q":
            check(f"T_{i} H_{i} = H_{s.wrap(j + 2)}", t.apply(solved.h(i)), solved.h(j + 2))
            check(f"T_{i} P_{i} = Q_{s.wrap(j + 1)}", t.apply(s.p(i)), s.q(j + 1))
    return fails


def verify_duality(
    solved: SolvedParams,
    domain: RectDomain,
    dual_domain: DualDomain,
    samples: int = 10_000,
    seed: int = 0,
    tol: float = TOL,
    code_samples: int = 50,
    code_depth: int = 6,
) -> DualityReport:
    """Check the flip of domains and the defining inverse identity.

    (a) flipped membership both ways on samples plus the structural image
    corners; (b) flip(inverse step(p)) == dual step(flip(p)) away from the
    dual partition points; (c) the backward digits of the primal code equal
    the forward branch indices of the dual orbit of the first coordinate.
    """
    rng = np.random.default_rng(seed)
    report = DualityReport(samples=samples, seed=seed)
    dual = dual_domain.dual
    params = solved.params

    report.image_corner_failures = verify_dual_images(solved, dual_domain, tol)

    # (a) membership flip, both directions, plus agreement of the two
    # decompositions of the dual domain.
    u, w = domain.sample(rng, samples)
    margin = domain.boundary_distance_many(u, w) > 10 * tol
    flip_in = dual_domain.contains_vertical_many(w, u)
    report.flip_failures += int((~flip_in & margin).sum())
    du, dw = dual_domain.sample(rng, samples)
    dmargin = dual_domain.vertical.boundary_distance_many(dw, du) > 10 * tol
    back_in = domain.contains_many(dw, du)
    report.flip_failures += int((~back_in & dmargin).sum())

    # (b) the defining identity, on points away from the dual partition.
    u, w = domain.sample(rng, samples)
    keep = dual.boundary_distance(u) > 10 * tol
    keep &= domain.boundary_distance_many(u, w) > 10 * tol
    report.skipped = int((~keep).sum())
    u, w = u[keep], w[keep]
    pu, pw, bidx, count = inverse_step_many(solved, domain, u, w)
    good = count == 1
    fu, fw, _ = dual_step_many(dual, w[good], u[good])
    dev = np.maximum(
        np.abs(np.remainder(fu - pw[good] + math.pi, TWO_PI) - math.pi),
        np.abs(np.remainder(fw - pu[good] + math.pi, TWO_PI) - math.pi),
    )
    report.identity_checked = int(good.sum())
    report.skipped += int((~good).sum())
    if report.identity_checked:
        report.identity_max_deviation = float(dev.max())
        report.identity_failures = int((dev > tol).sum())

    # (c) backward digits of the primal code match the dual orbit branches.
    from .coding import code_geodesic  # local import; coding stays dual-free

    cu, cw = domain.sample(rng, max(code_samples, 1))
    for k in range(len(cu)):
        p_u, p_w = CirclePoint(cu[k]), CirclePoint(cw[k])
        seq = code_geodesic(solved, domain, p_u, p_w, 0, code_depth)
        if seq.truncated or len(seq.past) < code_depth:
            report.skipped += 1
            continue
        x = p_u
        branches = []
        bad = False
        for _ in range(code_depth):
            if dual.boundary_distance(np.array([x.angle]))[0] <= 10 * tol:
                bad = True
                break
            j = dual.branch(x)
            branches.append(j)
            x = dual.surface.t(j).apply(x)
        if bad:
            report.skipped += 1
            continue
        report.code_checked += 1
        if list(seq.past) != branches:
            report.code_failures += 1
    return report


# -- the named example families ----------------------------------------------


def family_words(genus: int) -> dict[str, str]:
    """The four parameter families with easily described duals."""
    n = 8 * genus - 4
    return {
        "all_P": "P" * n,
        "all_Q": "Q" * n,
        "alternating_PQ": ("PQ" * n)[:n],
        "alternating_QP": ("QP" * n)[:n],
        "self_dual_PPQQ": ("PPQQ" * n)[:n],
        "self_dual_QQPP": ("QQPP" * n)[:n],
    }


@dataclass
class FamilyCheck:
    name: str
    word: str
    dual_word: str | None
    expected_dual: str
    pointwise_ok: bool
    double_dual_ok: bool

    @property
    def passed(self) -> bool:
        return self.pointwise_ok and self.double_dual_ok and self.dual_word == self.expected_dual


def dual_family_check(surface: SurfaceGroup, tol: float = TOL) -> list[FamilyCheck]:
    """Construct the named families and verify their dual relationships."""
    words = family_words(surface.genus)
    expected = {
        "all_P": words["all_Q"],
        "all_Q": words["all_P"],
        "alternating_PQ": words["alternating_QP"],
        "alternating_QP": words["alternating_PQ"],
        "self_dual_PPQQ": words["self_dual_PPQQ"],
        "self_dual_QQPP": words["self_dual_QQPP"],
    }
    out = []
    for name, word in words.items():
        solved = solve(surface, word, tol)
        dual = dual_params(solved)
        dword = dual.extremal_word(tol)
        pointwise_ok = dword == expected[name]
        double_ok = False
        if dword is not None:
            back = dual_params(solve(surface, dword, tol)).extremal_word(tol)
            double_ok = back == word
        out.append(
            FamilyCheck(
                name=name,
                word=word,
                dual_word=dword,
                expected_dual=expected[name],
                pointwise_ok=pointwise_ok,
                double_dual_ok=double_ok,
            )
        )
    return out
