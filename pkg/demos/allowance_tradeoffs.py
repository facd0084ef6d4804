"""
Show how the wing allowance epsilon trades legibility against length.

Usage:
    python3 demos/allowance_tradeoffs.py [outdir]

The schematic spaces fold lines epsilon apart, so a big allowance makes
a readable picture while a small one approaches the certified length.
This demo prices the figure-eight pile across allowances, shows the
exact point where fold lines would start to collide, and writes one
SVG per legible allowance to outdir (default: the current directory).
"""

import sys
from fractions import Fraction
from pathlib import Path

from ribbonfold import (
    LayoutConfig,
    LayoutOverlap,
    block_counts,
    build_pile,
    emit_svg,
    parse_pd,
    rib_upper_bound,
    ribbon_length,
    run_pipeline,
)

FIG8 = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")
    outdir.mkdir(parents=True, exist_ok=True)

    gn = run_pipeline(parse_pd(FIG8)).normal
    s = build_pile(gn)
    certified = rib_upper_bound(block_counts(gn))
    print(f"figure-eight: {len(s.planes)} planes, {len(s.caps)} caps, "
          f"certified bound {certified}")
    print()
    print(f"{'allowance':>10} {'length':>12} {'over certified':>15} {'drawable':>9}")

    reasons = []
    for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 20),
                Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10 ** 6)):
        ln = ribbon_length(s, eps)
        over = float(ln - certified)
        try:
            svg = emit_svg(s, LayoutConfig(epsilon=eps))
            drawable = "yes"
            name = outdir / f"fig8_eps_{eps.denominator}.svg"
            name.write_text(svg, encoding="utf-8")
        except LayoutOverlap as e:
            drawable = "no"
            reasons.append(str(e))
        print(f"{float(eps):>10g} {float(ln):>12.6f} {over:>15.6f} {drawable:>9}")

    if reasons:
        print()
        print("each rejection explains itself:")
        for reason in reasons:
            print(f"  {reason}")
    print()
    print(f"SVGs for the drawable allowances are in {outdir}/")


if __name__ == "__main__":
    main()
