#!/usr/bin/env python3
"""Scan the (k1, k2) plane and tabulate the winding-number phase labels.

Prints a compact text map of (W0, Wpi) and writes the full table as CSV via
the rotorlab CLI conventions. Transition points show up as 'X'.

Example:
    python scripts/phase_diagram_scan.py --kmax 3 --steps 12 --grid 256
"""

import argparse
import sys

import numpy as np

from rotorlab import phase_diagram


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kmax", type=float, default=3.0, help="upper bound in units of pi")
    parser.add_argument("--steps", type=int, default=12)
    parser.add_argument("--grid", type=int, default=512)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="optional CSV path")
    args = parser.parse_args()

    kappas = np.linspace(args.kmax / args.steps, args.kmax, args.steps)
    ks = [float(k) * np.pi for k in kappas]
    points = phase_diagram(ks, ks, grid=args.grid, jobs=args.jobs)

    by_k1 = {}
    for p in points:
        by_k1.setdefault(round(p.k1, 12), []).append(p)

    header = "k1\\k2 " + " ".join(f"{k:6.2f}" for k in kappas)
    print(header)
    for k1, row in by_k1.items():
        cells = []
        for p in row:
            if p.report is None:
                cells.append("     X")
            else:
                cells.append(f"{str(p.report.w0):>3},{str(p.report.wpi):<2}")
        print(f"{k1 / np.pi:5.2f} " + " ".join(cells))

    if args.out:
        lines = ["k1,k2,w0,wpi,status"]
        for p in points:
            w0 = "" if p.report is None else str(float(p.report.w0))
            wpi = "" if p.report is None else str(float(p.report.wpi))
            lines.append(f"{p.k1!r},{p.k2!r},{w0},{wpi},{p.status}")
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
