#!/usr/bin/env python3
"""Generate the CSV datasets behind the four standard figures.

Writes four directories (fig1 .. fig4) under the output root, each holding
the artifacts the frontend figure renderer consumes:

  fig1/  antiresonant rotor spectrum under open+periodic boundaries on
         [-27, 27] plus the occupation vectors of the wrap-induced
         deviating states
  fig2/  double-kick spectrum vs k2 (open vs periodic), winding labels, and
         the edge-state occupations at the k2 = 1.5pi cross-section
  fig3/  boundary-resolved MCD sweep (open / periodic / ideal) at n_max = 30
  fig4/  spin-down distribution difference (periodic - ideal) and mean
         momenta at k2 = 1.8pi, n_max = 60, where boundary contact starts
         around period 8

The full-resolution fig2/fig3 sweeps take a few minutes; pass --fast for a
coarse grid (used by the frontend test fixtures).
"""

import argparse
import sys
from pathlib import Path

from rotorlab.cli import main as rotorlab


def run(args):
    code = rotorlab([str(a) for a in args])
    if code != 0:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figure_data", help="output root directory")
    parser.add_argument("--fast", action="store_true", help="coarse sweeps for smoke runs")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    root = Path(args.out)
    root.mkdir(parents=True, exist_ok=True)
    k2_step = "0.25pi" if args.fast else "0.05pi"
    mcd_step = "0.25pi" if args.fast else "0.05pi"
    grid = 256 if args.fast else 512

    fig1 = root / "fig1"
    (fig1).mkdir(exist_ok=True)
    cfg = fig1 / "config.toml"
    cfg.write_text(
        'model = "qkr"\nbc = ["open", "periodic"]\nn_max = 27\nk = "2rad"\ntau = "2pi"\n'
        "phase_fig1 = true\n"
    )
    run(["spectrum", "--config", cfg, "--out", fig1])
    edge_cfg = fig1 / "edges.toml"
    edge_cfg.write_text('model = "qkr"\nbc = "periodic"\nn_max = 27\nk = "2rad"\ntau = "2pi"\n')
    run(["edges", "--config", edge_cfg, "--out", fig1])

    fig2 = root / "fig2"
    fig2.mkdir(exist_ok=True)
    cfg = fig2 / "config.toml"
    cfg.write_text(
        'model = "dkqr"\nbc = ["open", "periodic"]\nn_max = 30\nk1 = "0.5pi"\n'
        f'k2_start = "0.1pi"\nk2_stop = "3pi"\nk2_step = "{k2_step}"\n'
        f"grid = {grid}\njobs = {args.jobs}\n"
    )
    run(["spectrum", "--config", cfg, "--out", fig2])
    run(["winding", "--config", cfg, "--out", fig2])
    edge_cfg = fig2 / "edges.toml"
    edge_cfg.write_text('model = "dkqr"\nbc = "open"\nn_max = 30\nk1 = "0.5pi"\nk2 = "1.5pi"\n')
    run(["edges", "--config", edge_cfg, "--out", fig2])

    fig3 = root / "fig3"
    fig3.mkdir(exist_ok=True)
    cfg = fig3 / "config.toml"
    cfg.write_text(
        'model = "dkqr"\nbc = ["open", "periodic", "ideal"]\nn_max = 30\npad_nmax = 200\n'
        f'k1 = "1.5pi"\nk2_start = "0.1pi"\nk2_stop = "3pi"\nk2_step = "{mcd_step}"\n'
        "periods = 15\n"
    )
    run(["mcd", "--config", cfg, "--out", fig3])

    fig4 = root / "fig4"
    fig4.mkdir(exist_ok=True)
    cfg = fig4 / "config.toml"
    cfg.write_text(
        'model = "dkqr"\nn_max = 60\npad_nmax = 200\nk1 = "1.5pi"\nk2 = "1.8pi"\nperiods = 15\n'
    )
    run(["distribution", "--config", cfg, "--out", fig4])

    print(f"figure data written under {root}/", file=sys.stderr)


if __name__ == "__main__":
    main()
