#!/usr/bin/env python3
"""Render the standard figure set for one parameter choice.

Writes four SVGs into the output directory: the fundamental polygon, the
curvilinear domain, the rectangle domain (with the curvilinear boundary
overlaid), and the dual domain.
"""

import argparse
import pathlib

from fuchsian.boundary import build_domain, solve
from fuchsian.duality import build_omega_dual
from fuchsian.render import (
    omega_dual_spec,
    omega_geo_spec,
    omega_spec,
    polygon_spec,
    render_svg,
)
from fuchsian.surface import build_regular_surface


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genus", type=int, default=2)
    ap.add_argument("--params", default="PPPPQPQQPPQQ")
    ap.add_argument("--outdir", default="figures")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    surface = build_regular_surface(args.genus)
    solved = solve(surface, args.params)
    domain = build_domain(solved)
    dual_domain = build_omega_dual(solved)

    files = {
        "polygon.svg": render_svg(polygon_spec(surface)),
        "omega_geo.svg": render_svg(omega_geo_spec(surface)),
        "omega.svg": render_svg(omega_spec(solved, domain, with_geo=True)),
        "omega_dual.svg": render_svg(omega_dual_spec(solved, dual_domain)),
    }
    for name, text in files.items():
        (outdir / name).write_text(text)
        print(f"wrote {outdir / name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
