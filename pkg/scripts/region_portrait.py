#!/usr/bin/env python3
"""Basin portrait: classify a z-grid and render it with the separatrices.

    python scripts/region_portrait.py --alpha-re 1 --alpha-im 1 \
        --grid -0.5:2:-1.2:1.2:40 --out out/region.svg
"""

import argparse
import sys

from hypzero.errors import HypzeroError
from hypzero.flows import classify_region, separatrices
from hypzero.kernel import Alpha
from hypzero.verify import GridSpec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha-re", type=float, default=1.0)
    ap.add_argument("--alpha-im", type=float, default=1.0)
    ap.add_argument("--grid", default="-0.5:2:-1.2:1.2:40")
    ap.add_argument("--out", default="out/region.svg")
    args = ap.parse_args()

    alpha = Alpha(args.alpha_re, args.alpha_im)
    grid = GridSpec.parse(args.grid)
    seps = separatrices(alpha)

    size = 640.0
    sx = size / (grid.re1 - grid.re0)
    sy = size / (grid.im1 - grid.im0)

    def xy(w):
        return ((w.real - grid.re0) * sx, (grid.im1 - w.imag) * sy)

    fills = {"InE": "#c0392b", "NotInE": "#2e6da4", "Boundary": "#f1c40f"}
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="0 0 {size:.0f} {size:.0f}">']
    counts = {}
    for z in grid.points():
        if z in (0, 1):
            continue
        try:
            label = classify_region(z, alpha).label
        except HypzeroError:
            label = "Boundary"
        counts[label] = counts.get(label, 0) + 1
        x, y = xy(z)
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{size/grid.steps/3:.1f}" '
                     f'fill="{fills[label]}"/>')
    for sep in seps:
        kept = [p for p in sep.points
                if grid.re0 <= p.real <= grid.re1
                and grid.im0 <= p.imag <= grid.im1]
        if len(kept) > 1:
            pts = " ".join(f"{xy(p)[0]:.1f},{xy(p)[1]:.1f}" for p in kept)
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="#111" stroke-width="1.2"/>')
    parts.append("</svg>")

    import os
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("\n".join(parts))
    print(f"classified {sum(counts.values())} points: {counts}")
    print("wrote", args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
