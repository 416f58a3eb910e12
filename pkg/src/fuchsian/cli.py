"""Command-line front end.

Subcommands:
    surface    emit the surface data as JSON
    solve      solve a parameter word; emit the solution JSON
    omega      emit the rectangle domain as JSON
    dual       emit the dual solution and domain as JSON
    verify     run one verifier: bijectivity | conjugacy | duality | markov
    code       code one geodesic; emit the symbol window as JSON
    sweep      verify every parameter word of a genus (or a random sample)
    attractor  run the exploratory attractor experiment
    render     write an SVG of a domain or of the polygon

Exit codes: 0 on success/pass, 1 on verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

import numpy as np

from . import __version__
from .attractor import attractor_experiment
from .boundary import build_domain, solve, verify_bijectivity
from .circle import TOL, CirclePoint
from .coding import (
    code_geodesic,
    markov_transition_matrix,
    sofic_amalgamate,
    verify_conjugacy,
)
from .duality import build_omega_dual, verify_duality
from .errors import FuchsianError
from .render import (
    omega_dual_spec,
    omega_geo_spec,
    omega_spec,
    polygon_spec,
    render_svg,
)
from .surface import build_regular_surface

USAGE_ERROR = 2
VERIFY_FAILURE = 1


def default_tol() -> float:
    value = os.environ.get("FUCHSIAN_TOL")
    return float(value) if value else TOL


def _add_common(parser: argparse.ArgumentParser, with_params: bool = True):
    parser.add_argument("--genus", type=int, default=2, help="surface genus (>= 2)")
    parser.add_argument("--offset", type=float, default=0.0, help="angular offset of V_1")
    if with_params:
        parser.add_argument("--params", required=True, help="word over {P,Q} of length 8g-4")
    parser.add_argument("--tol", type=float, default=None, help="tolerance override")
    parser.add_argument("--out", default=None, help="output file (default stdout)")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _check_word(word: str, genus: int) -> str | None:
    n = 8 * genus - 4
    w = word.upper()
    if len(w) != n or any(ch not in "PQ" for ch in w):
        return (
            f"parameter word must have length {n} over {{P,Q}} for genus {genus}; "
            f"got {word!r} (length {len(word)})"
        )
    return None


def _prepare(args):
    tol = args.tol if args.tol is not None else default_tol()
    surface = build_regular_surface(args.genus, offset=args.offset)
    if hasattr(args, "params"):
        msg = _check_word(args.params, args.genus)
        if msg:
            print(msg, file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
        solved = solve(surface, args.params.upper(), tol)
        return surface, solved, tol
    return surface, None, tol


def cmd_surface(args) -> int:
    surface = build_regular_surface(args.genus, offset=args.offset)
    _emit(surface.to_json(), args.out)
    return 0


def cmd_solve(args) -> int:
    _, solved, _ = _prepare(args)
    _emit(solved.to_json(), args.out)
    return 0


def cmd_omega(args) -> int:
    _, solved, _ = _prepare(args)
    domain = build_domain(solved)
    doc = {
        "genus": args.genus,
        "params": solved.params.word,
        "rectangles": [
            {
                "strip": r.strip,
                "kind": r.kind,
                "x": [r.x.start.angle, r.x.length],
                "y": [r.y.start.angle, r.y.length],
                "degenerate": r.degenerate,
            }
            for r in domain.rects
        ],
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_dual(args) -> int:
    _, solved, _ = _prepare(args)
    dual_domain = build_omega_dual(solved)
    doc = json.loads(dual_domain.dual.to_json())
    doc["rectangles"] = [
        {
            "strip": r.strip,
            "kind": r.kind,
            "x": [r.x.start.angle, r.x.length],
            "y": [r.y.start.angle, r.y.length],
            "degenerate": r.degenerate,
        }
        for r in dual_domain.rectangles()
    ]
    _emit(json.dumps(doc, indent=2), args.out)
    return 0


def cmd_verify(args) -> int:
    surface, solved, tol = _prepare(args)
    domain = build_domain(solved)
    if args.what == "bijectivity":
        report = verify_bijectivity(
            solved, domain, mode="both", samples=args.samples, seed=args.seed, tol=tol
        )
        doc = report.to_json()
        passed = report.passed
    elif args.what == "conjugacy":
        report = verify_conjugacy(solved, domain, samples=args.samples, seed=args.seed, tol=tol)
        doc = report.to_json()
        passed = report.passed
    elif args.what == "duality":
        dual_domain = build_omega_dual(solved, tol)
        report = verify_duality(
            solved, domain, dual_domain, samples=args.samples, seed=args.seed, tol=tol
        )
        doc = report.to_json()
        passed = report.passed
    else:  # markov
        try:
            tm = markov_transition_matrix(solved, tol)
        except FuchsianError as exc:
            _emit(json.dumps({"passed": False, "error": str(exc)}, indent=2), args.out)
            return VERIFY_FAILURE
        graph = sofic_amalgamate(solved.params, tm)
        if args.matrix_out:
            with open(args.matrix_out, "w") as fh:
                fh.write(tm.to_text() + "\n")
        if args.sofic_out:
            with open(args.sofic_out, "w") as fh:
                fh.write(graph.to_json() + "\n")
        doc = {
            "passed": True,
            "intervals": tm.size,
            "odd_row_entries": sorted({len(tm.row_entries(2 * i - 1)) for i in range(1, surface.n + 1)}),
            "even_row_entries": sorted({len(tm.row_entries(2 * i)) for i in range(1, surface.n + 1)}),
            "adjacency": {str(k): tm.row_entries(k) for k in range(1, tm.size + 1)},
            "sofic_vertices": graph.n,
            "sofic_edges": len(graph.edges()),
            "strongly_connected": graph.is_strongly_connected(),
        }
        passed = True
    _emit(json.dumps(doc, indent=2), args.out)
    return 0 if passed else VERIFY_FAILURE


def cmd_code(args) -> int:
    _, solved, tol = _prepare(args)
    domain = build_domain(solved)
    seq = code_geodesic(
        solved,
        domain,
        CirclePoint(args.u),
        CirclePoint(args.w),
        args.future,
        args.past,
        tol,
    )
    _emit(json.dumps(seq.to_json(), indent=2), args.out)
    return 0


def cmd_sweep(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    surface = build_regular_surface(args.genus, offset=args.offset)
    n = surface.n
    if args.genus == 2 and args.random is None:
        words = ("".join(bits) for bits in itertools.product("PQ", repeat=n))
        total = 2**n
    else:
        count = args.random if args.random is not None else 100
        rng = np.random.default_rng(args.seed)
        words = ("".join(rng.choice(["P", "Q"], size=n)) for _ in range(count))
        total = count
    failures = 0
    lines = []
    for word in words:
        try:
            solved = solve(surface, word, tol)
            domain = build_domain(solved)
            mode = "analytic" if args.analytic_only else "both"
            report = verify_bijectivity(
                solved, domain, mode=mode, samples=args.samples, seed=args.seed, tol=tol
            )
            ok = report.passed
        except FuchsianError as exc:
            ok = False
            lines.append(f"{word} ERROR {exc}")
        else:
            lines.append(f"{word} {'PASS' if ok else 'FAIL'}")
        if not ok:
            failures += 1
    lines.append(f"sweep genus={args.genus} words={total} failures={failures} seed={args.seed}")
    _emit("\n".join(lines), args.out)
    return 0 if failures == 0 else VERIFY_FAILURE


def cmd_attractor(args) -> int:
    _, solved, tol = _prepare(args)
    domain = build_domain(solved)
    report = attractor_experiment(
        solved, domain, iterations=args.iters, samples=args.samples, seed=args.seed, tol=tol
    )
    _emit(json.dumps(report.to_json(), indent=2), args.out)
    return 0 if report.forward_invariant_ok else VERIFY_FAILURE


def cmd_render(args) -> int:
    surface, solved, tol = _prepare(args) if args.what != "polygon" else (
        build_regular_surface(args.genus, offset=args.offset),
        None,
        args.tol or default_tol(),
    )
    if args.what == "polygon":
        spec = polygon_spec(surface)
    elif args.what == "omega":
        spec = omega_spec(solved, build_domain(solved))
    elif args.what == "omega-dual":
        spec = omega_dual_spec(solved, build_omega_dual(solved, tol))
    else:  # omega-geo
        spec = omega_geo_spec(solved.surface if solved else surface)
    _emit(render_svg(spec), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuchsian",
        description="Boundary maps, natural extensions and geodesic coding "
        "for compact hyperbolic surfaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("surface", help="emit surface data as JSON")
    _add_common(p, with_params=False)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("solve", help="solve a parameter word")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("omega", help="emit the rectangle domain")
    _add_common(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("dual", help="emit the dual solution and domain")
    _add_common(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("verify", help="run one verifier")
    p.add_argument("what", choices=["bijectivity", "conjugacy", "duality", "markov"])
    _add_common(p)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--matrix-out", default=None, help="markov only: write the 0/1 grid here")
    p.add_argument("--sofic-out", default=None, help="markov only: write the labeled edge list here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("code", help="code one geodesic")
    _add_common(p)
    p.add_argument("--u", type=float, required=True, help="start angle (radians)")
    p.add_argument("--w", type=float, required=True, help="end angle (radians)")
    p.add_argument("--future", type=int, default=10)
    p.add_argument("--past", type=int, default=10)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("sweep", help="verify many parameter words")
    _add_common(p, with_params=False)
    p.add_argument("--samples", type=int, default=1000, help="Monte Carlo samples per word")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=None, help="number of random words (required for genus > 2)")
    p.add_argument("--analytic-only", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("attractor", help="exploratory attractor experiment")
    _add_common(p)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("render", help="write an SVG")
    p.add_argument("--what", choices=["omega", "omega-dual", "omega-geo", "polygon"], required=True)
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--offset", type=float, default=0.0)
    p.add_argument("--params", default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "render" and args.what != "polygon":
        if not args.params:
            print("render --what omega/omega-dual/omega-geo requires --params", file=sys.stderr)
            return USAGE_ERROR
        msg = _check_word(args.params, args.genus)
        if msg:
            print(msg, file=sys.stderr)
            return USAGE_ERROR
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except FuchsianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VERIFY_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
