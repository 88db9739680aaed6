"""Compare scanned positivity brackets for the tangent bundle of F_r with the closed-form threshold.

For L = aF + bH the tangent bundle is Z-positive exactly when
    b > (1/2) sqrt(c^2 / (2ar)^2 + 4(r-2)/r) - c / (4ar),   c = 4a^2 + 4 - r^2.
Usage: python3 scripts/hirzebruch_thresholds.py [--step 1/24] [--bmax 3]
"""
import argparse
import math
from fractions import Fraction

from toricpos.positivity import ample_scan
from toricpos.sheaves import Tangent
from toricpos.varieties import hirzebruch


def threshold(r: int, a: int) -> float:
    c = 4 * a * a + 4 - r * r
    return 0.5 * math.sqrt(c * c / (2 * a * r) ** 2 + 4 * (r - 2) / r) - c / (4 * a * r)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", default="1/24")
    ap.add_argument("--bmax", default="3")
    args = ap.parse_args()
    step, bmax = Fraction(args.step), Fraction(args.bmax)
    bs = [step * k for k in range(1, int(bmax / step) + 1)]
    print(f"{'r':>2} {'a':>2} {'bracket':>16} {'threshold':>10}")
    for r in (3, 4, 5):
        rep = ample_scan(hirzebruch(r).fan, lambda a, b: [b, a, 0, 0], Tangent(), range(1, 6), bs)
        for a in range(1, 6):
            br = rep.brackets[Fraction(a)]
            text = ", ".join(f"[{lo}, {hi}]" for lo, hi in br) or "none"
            print(f"{r:>2} {a:>2} {text:>16} {threshold(r, a):10.6f}")


if __name__ == "__main__":
    main()
