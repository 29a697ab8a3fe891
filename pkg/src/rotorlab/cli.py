"""Command-line front end: config-driven jobs writing deterministic CSV/JSON artifacts.

Usage:
    rotorlab <spectrum|edges|winding|mcd|distribution> --config cfg.toml [overrides]

Configs are flat TOML. Kick strengths and tau carry a mandatory unit tag,
either "<x>pi" or "<x>rad" (e.g. k1 = "1.5pi"); CSV output always stores
radians. Exactly one of a point value ("k2") or a sweep (either
"k2_values = [...]" or "k2_start"/"k2_stop"/"k2_step") may be given per
parameter. Files are written atomically (temp file + rename) and every run
emits a manifest.json listing each output with its SHA-256 digest.

Exit codes: 0 success, 2 config error, 3 compute error. Diagnostics go to
stderr only. Reruns of an identical config produce byte-identical data
files; the manifest's wall_time_s field is the one nondeterministic value.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import __version__
from .basis import MomentumBasis, open_bc, periodic_bc
from .errors import RotorlabError
from .floquet import DkqrParams, QkrParams, dkqr_floquet_frame1, qkr_floquet
from .spectral import (
    default_edge_width,
    detect_edge_states,
    detect_flatband_deviators,
    diagonalize,
    edge_weight,
    pair_edge_states,
)
from .topology import phase_diagram
from .transport import DEFAULT_PAD_NMAX, distribution_delta, mcd_sweep, transport_basis

BC_NAMES = ("open", "periodic", "ideal")


class ConfigError(RotorlabError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved, validated experiment parameters (angles in radians)."""

    model: str = "dkqr"
    bcs: tuple[str, ...] = ("open",)
    n_lo: int = -30
    n_hi: int = 30
    pad_nmax: int = DEFAULT_PAD_NMAX
    k: float | None = None
    k_values: tuple[float, ...] | None = None
    tau: float | None = None
    k1: float | None = None
    k2: float | None = None
    k2_values: tuple[float, ...] | None = None
    periods: int = 15
    grid: int = 512
    out: Path = Path(".")
    format: str = "csv"
    phase_fig1: bool = False
    c_of_t: bool = False
    jobs: int = 1


_ANGLE_RE = re.compile(r"^\s*([-+]?[0-9.]+(?:[eE][-+]?[0-9]+)?)\s*(pi|rad)\s*$")


def parse_angle(value, key: str) -> float:
    """'1.5pi' -> 1.5*pi, '2.4rad' -> 2.4; the unit tag is mandatory."""
    if not isinstance(value, str):
        raise ConfigError(f"{key}: unit tag required, write e.g. \"1.5pi\" or \"{value}rad\"")
    m = _ANGLE_RE.match(value)
    if not m:
        raise ConfigError(f"{key}: cannot parse angle {value!r} (expected '<number>pi' or '<number>rad')")
    x = float(m.group(1))
    return x * math.pi if m.group(2) == "pi" else x


def _sweep_values(raw: dict, key: str) -> tuple[float, ...] | None:
    """Resolve '<key>_values' or '<key>_start/_stop/_step' into a value tuple."""
    has_list = f"{key}_values" in raw
    has_range = any(f"{key}_{s}" in raw for s in ("start", "stop", "step"))
    if has_list and has_range:
        raise ConfigError(f"{key}: give either {key}_values or a start/stop/step range, not both")
    if has_list:
        return tuple(parse_angle(v, f"{key}_values") for v in raw[f"{key}_values"])
    if has_range:
        missing = [s for s in ("start", "stop", "step") if f"{key}_{s}" not in raw]
        if missing:
            raise ConfigError(f"{key}: sweep needs {key}_start, {key}_stop and {key}_step")
        start = parse_angle(raw[f"{key}_start"], f"{key}_start")
        stop = parse_angle(raw[f"{key}_stop"], f"{key}_stop")
        step = parse_angle(raw[f"{key}_step"], f"{key}_step")
        if step <= 0 or stop < start:
            raise ConfigError(f"{key}: sweep needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    return None


def _as_int(raw: dict, key: str, default: int) -> int:
    value = raw.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return value


def load_config(path: str | None, overrides: argparse.Namespace) -> ExperimentConfig:
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config parse error: {exc}")

    # command-line overrides replace the corresponding config keys
    if overrides.bc is not None:
        raw["bc"] = overrides.bc
    if overrides.nmax is not None:
        raw["n_max"] = overrides.nmax
        raw.pop("n_lo", None)
        raw.pop("n_hi", None)
    for key in ("k1", "k2"):
        val = getattr(overrides, key)
        if val is not None:
            raw[key] = val
            for suffix in ("_values", "_start", "_stop", "_step"):
                raw.pop(key + suffix, None)
    if overrides.periods is not None:
        raw["periods"] = overrides.periods
    if overrides.grid is not None:
        raw["grid"] = overrides.grid
    if overrides.out is not None:
        raw["out"] = overrides.out
    if overrides.format is not None:
        raw["format"] = overrides.format
    if overrides.jobs is not None:
        raw["jobs"] = overrides.jobs

    model = raw.get("model", "dkqr")
    if model not in ("qkr", "dkqr"):
        raise ConfigError(f"model must be qkr or dkqr, got {model!r}")

    bc_raw = raw.get("bc", "open")
    bcs = tuple(bc_raw) if isinstance(bc_raw, list) else (bc_raw,)
    for bc in bcs:
        if bc not in BC_NAMES:
            raise ConfigError(f"bc must be one of {BC_NAMES}, got {bc!r}")
    if len(set(bcs)) != len(bcs):
        raise ConfigError("bc list has duplicates")

    if "n_max" in raw and ("n_lo" in raw or "n_hi" in raw):
        raise ConfigError("give n_max or the n_lo/n_hi pair, not both")
    if "n_lo" in raw or "n_hi" in raw:
        if not ("n_lo" in raw and "n_hi" in raw):
            raise ConfigError("n_lo and n_hi must be given together")
        n_lo, n_hi = _as_int(raw, "n_lo", 0), _as_int(raw, "n_hi", 0)
    else:
        n_max = _as_int(raw, "n_max", 30)
        n_lo, n_hi = -n_max, n_max

    def point_or_sweep(key):
        point = parse_angle(raw[key], key) if key in raw else None
        sweep = _sweep_values(raw, key)
        if point is not None and sweep is not None:
            raise ConfigError(f"{key}: point value and sweep are mutually exclusive")
        return point, sweep

    k, k_sweep = point_or_sweep("k")
    k2, k2_sweep = point_or_sweep("k2")
    k1 = parse_angle(raw["k1"], "k1") if "k1" in raw else None
    tau = parse_angle(raw["tau"], "tau") if "tau" in raw else None

    fmt = raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    periods = _as_int(raw, "periods", 15)
    grid = _as_int(raw, "grid", 512)
    jobs = _as_int(raw, "jobs", 1)
    pad = _as_int(raw, "pad_nmax", DEFAULT_PAD_NMAX)
    if periods < 1:
        raise ConfigError("periods must be at least 1")
    if jobs < 1:
        raise ConfigError("jobs must be at least 1")

    return ExperimentConfig(
        model=model,
        bcs=bcs,
        n_lo=n_lo,
        n_hi=n_hi,
        pad_nmax=pad,
        k=k,
        k_values=k_sweep,
        tau=tau,
        k1=k1,
        k2=k2,
        k2_values=k2_sweep,
        periods=periods,
        grid=grid,
        out=Path(raw.get("out", ".")),
        format=fmt,
        phase_fig1=bool(raw.get("phase_fig1", False)),
        c_of_t=bool(raw.get("c_of_t", False)),
        jobs=jobs,
    )


# ---------------------------------------------------------------------------
# deterministic writers


def _fmt(value) -> str:
    """Shortest round-trip text for floats; plain str for everything else."""
    if isinstance(value, float) or isinstance(value, np.floating):
        return repr(float(value))
    return "" if value is None else str(value)


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


class ArtifactWriter:
    """Collects output files, writes them atomically, and digests them for the manifest."""

    def __init__(self, out_dir: Path, fmt: str):
        self.out_dir = out_dir
        self.fmt = fmt
        self.outputs: dict[str, str] = {}
        out_dir.mkdir(parents=True, exist_ok=True)

    def table(self, stem: str, header: list[str], rows: list[list]) -> None:
        if self.fmt == "json":
            body = json.dumps(
                [dict(zip(header, [None if c is None else (float(c) if isinstance(c, (float, np.floating)) else c) for c in row])) for row in rows],
                indent=1,
            )
            self._emit(f"{stem}.json", body + "\n")
        else:
            lines = [",".join(header)]
            lines += [",".join(_fmt(c) for c in row) for row in rows]
            self._emit(f"{stem}.csv", "\n".join(lines) + "\n")

    def json_file(self, name: str, obj) -> None:
        self._emit(name, json.dumps(obj, indent=1, sort_keys=True) + "\n")

    def _emit(self, name: str, text: str) -> None:
        path = self.out_dir / name
        _write_atomic(path, text)
        self.outputs[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()

    def manifest(self, command: str, config: ExperimentConfig, jobs: list[dict], t0: float) -> None:
        doc = {
            "command": command,
            "version": __version__,
            "config": {
                k: (str(v) if isinstance(v, Path) else list(v) if isinstance(v, tuple) else v)
                for k, v in vars(config).items()
            },
            "jobs": jobs,
            "wall_time_s": round(time.monotonic() - t0, 6),
            "outputs": dict(sorted(self.outputs.items())),
        }
        path = self.out_dir / "manifest.json"
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
        _write_atomic(path, text)


# ---------------------------------------------------------------------------
# subcommands


def _basis_for(config: ExperimentConfig, bc_name: str) -> MomentumBasis:
    if bc_name == "ideal":
        if (config.n_lo, config.n_hi) != (-config.n_hi, config.n_hi):
            raise ConfigError("ideal bc requires a symmetric window (use n_max)")
        return transport_basis("ideal", config.n_hi, config.pad_nmax)
    bc = open_bc() if bc_name == "open" else periodic_bc()
    return MomentumBasis(config.n_lo, config.n_hi, bc)


def _spectrum_point(config: ExperimentConfig, bc_name: str, kval: float):
    basis = _basis_for(config, bc_name)
    if config.model == "qkr":
        if config.tau is None:
            raise ConfigError("qkr spectrum needs tau")
        u = qkr_floquet(QkrParams(kval, config.tau), basis)
        spec = diagonalize(u, basis)
        k1_col, k2_col = kval, None
    else:
        if config.k1 is None:
            raise ConfigError("dkqr needs k1")
        u = dkqr_floquet_frame1(DkqrParams(config.k1, kval), basis)
        spec = diagonalize(u, basis.with_spin())
        k1_col, k2_col = config.k1, kval
    width = default_edge_width(spec.basis.size)
    rows = []
    for j, phi in enumerate(spec.phases):
        w = edge_weight(spec.vectors[:, j], spec.basis, width)
        row = [j, float(phi), w, k1_col, k2_col, bc_name]
        if config.phase_fig1:
            row.append(float(phi) / 2.0)
        rows.append(row)
    return rows


def _sweep_axis(config: ExperimentConfig) -> list[float]:
    if config.model == "qkr":
        values = config.k_values if config.k_values is not None else (config.k,)
        if values == (None,):
            raise ConfigError("qkr needs k or a k sweep")
    else:
        values = config.k2_values if config.k2_values is not None else (config.k2,)
        if values == (None,):
            raise ConfigError("dkqr needs k2 or a k2 sweep")
    return list(values)


def _spectrum_task(args):
    config, bc_name, kval = args
    return _spectrum_point(config, bc_name, kval)


def _pool_map(fn, tasks, jobs: int):
    """Worker-pool map with results buffered back in task order."""
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, tasks))
    return [fn(t) for t in tasks]


def cmd_spectrum(config: ExperimentConfig, writer: ArtifactWriter) -> list[dict]:
    header = ["index", "phase", "edge_weight", "k1", "k2", "bc"]
    if config.phase_fig1:
        header.append("phase_fig1")
    tasks = [(config, bc_name, kval) for kval in _sweep_axis(config) for bc_name in config.bcs]
    blocks = _pool_map(_spectrum_task, tasks, config.jobs)
    rows = [row for block in blocks for row in block]
    jobs = [
        {"name": f"spectrum k={_fmt(kval)} bc={bc_name}", "status": "ok"}
        for _, bc_name, kval in tasks
    ]
    writer.table("spectrum", header, rows)
    return jobs


def cmd_edges(config: ExperimentConfig, writer: ArtifactWriter) -> list[dict]:
    if len(config.bcs) != 1:
        raise ConfigError("edges takes a single bc")
    basis = _basis_for(config, config.bcs[0])
    if config.model == "dkqr":
        if config.k1 is None or config.k2 is None:
            raise ConfigError("edges needs point values k1 and k2")
        u = dkqr_floquet_frame1(DkqrParams(config.k1, config.k2), basis)
        spec = diagonalize(u, basis.with_spin())
        records = detect_edge_states(spec)
    else:
        # antiresonant-anomaly product: edge-localized states off the flat bands
        if config.k is None or config.tau is None:
            raise ConfigError("qkr edges needs point values k and tau")
        u = qkr_floquet(QkrParams(config.k, config.tau), basis)
        spec = diagonalize(u, basis)
        records = detect_flatband_deviators(spec)
    pairing = pair_edge_states(records)

    writer.table(
        "edges",
        ["index", "phase", "target", "edge_weight", "side"],
        [[r.index, r.phase, r.target, r.edge_weight, r.side] for r in records],
    )
    vec_rows = []
    n_values = spec.basis.n_values()
    spin_dim = spec.basis.spin_dim
    spin_names = ("up", "down") if spin_dim == 2 else ("none",)
    for r in records:
        probs = np.abs(spec.vectors[:, r.index].reshape(spec.basis.size, spin_dim)) ** 2
        for i, n in enumerate(n_values):
            for s, spin in enumerate(spin_names):
                vec_rows.append([r.index, int(n), spin, float(probs[i, s])])
    writer.table("edge_vectors", ["index", "n", "spin", "prob"], vec_rows)
    writer.json_file(
        "pairing.json",
        {
            "pairs_zero": pairing.pairs_zero,
            "pairs_pi": pairing.pairs_pi,
            "members": [list(m) for m in pairing.members],
            "unpaired": list(pairing.unpaired),
        },
    )
    return [{"name": "edges", "status": "ok"}]


def cmd_winding(config: ExperimentConfig, writer: ArtifactWriter) -> list[dict]:
    if config.model != "dkqr":
        raise ConfigError("winding is a dkqr command")
    k1_values = [config.k1] if config.k1 is not None else None
    if k1_values is None:
        raise ConfigError("winding needs k1")
    k2_values = _sweep_axis(config)
    points = phase_diagram(k1_values, k2_values, grid=config.grid, jobs=config.jobs)
    rows = []
    jobs = []
    for pt in points:
        if pt.report is None:
            rows.append([pt.k1, pt.k2, None, None, None, None, None, None, None, pt.status])
        else:
            r = pt.report
            rows.append(
                [pt.k1, pt.k2, r.w1, r.w2, r.w0.numerator, r.w0.denominator,
                 r.wpi.numerator, r.wpi.denominator, r.min_gap_margin, pt.status]
            )
        jobs.append({"name": f"winding k1={_fmt(pt.k1)} k2={_fmt(pt.k2)}", "status": pt.status})
    writer.table(
        "winding",
        ["k1", "k2", "w1", "w2", "w0_num", "w0_den", "wpi_num", "wpi_den", "min_gap_margin", "status"],
        rows,
    )
    return jobs


def _mcd_task(args):
    config, bc_name, k2 = args
    [row] = mcd_sweep(config.k1, [k2], bc_name, config.n_hi, config.periods,
                      config.pad_nmax, keep_traces=config.c_of_t)
    return row


def cmd_mcd(config: ExperimentConfig, writer: ArtifactWriter) -> list[dict]:
    if config.model != "dkqr":
        raise ConfigError("mcd is a dkqr command")
    if config.k1 is None:
        raise ConfigError("mcd needs k1")
    if config.n_lo != -config.n_hi:
        raise ConfigError("mcd runs on a symmetric window (use n_max)")
    tasks = [(config, bc_name, k2) for k2 in _sweep_axis(config) for bc_name in config.bcs]
    results = _pool_map(_mcd_task, tasks, config.jobs)
    rows = []
    detail = []
    jobs = []
    for row in results:
        rows.append([row.k2, row.bc, row.mcd, row.mcd_up, row.mcd_down, row.periods])
        jobs.append({"name": f"mcd k2={_fmt(row.k2)} bc={row.bc}", "status": "ok"})
        if config.c_of_t:
            tr = row.trace
            for t in range(1, config.periods + 1):
                detail.append(
                    [row.k2, row.bc, t, float(tr.c_of_t[t]), float(tr.c_up[t]), float(tr.c_down[t]),
                     float(tr.mean_n[t]), float(tr.mean_n_up[t]), float(tr.mean_n_down[t])]
                )
    writer.table("mcd", ["k2", "bc", "mcd", "mcd_up", "mcd_down", "periods"], rows)
    if config.c_of_t:
        writer.table(
            "c_of_t",
            ["k2", "bc", "t", "c", "c_up", "c_down", "mean_n", "mean_n_up", "mean_n_down"],
            detail,
        )
    return jobs


def cmd_distribution(config: ExperimentConfig, writer: ArtifactWriter) -> list[dict]:
    if config.model != "dkqr":
        raise ConfigError("distribution is a dkqr command")
    if config.k1 is None or config.k2 is None:
        raise ConfigError("distribution needs point values k1 and k2")
    if config.n_lo != -config.n_hi:
        raise ConfigError("distribution runs on a symmetric window (use n_max)")
    n_max = config.n_hi
    delta = distribution_delta(config.k1, config.k2, n_max, config.periods, config.pad_nmax)

    dist_rows = []
    for bc_name, trace in (("periodic", delta.trace_pbc), ("ideal", delta.trace_ideal)):
        n_values = trace.basis.n_values()
        for t in range(config.periods + 1):
            for i, n in enumerate(n_values):
                dist_rows.append(
                    [t, int(n), float(trace.dist_up[t, i]), float(trace.dist_down[t, i]), bc_name]
                )
    writer.table("dist", ["t", "n", "prob_up", "prob_down", "bc"], dist_rows)

    delta_rows = []
    for t in range(config.periods + 1):
        for i, n in enumerate(delta.n_values):
            delta_rows.append(
                [t, int(n), float(delta.delta_down[t, i]),
                 float(delta.mean_n_pbc[t]), float(delta.mean_n_ideal[t])]
            )
    writer.table("delta", ["t", "n", "delta_down", "mean_n_pbc", "mean_n_ideal"], delta_rows)
    return [{"name": "distribution", "status": "ok"}]


COMMANDS = {
    "spectrum": cmd_spectrum,
    "edges": cmd_edges,
    "winding": cmd_winding,
    "mcd": cmd_mcd,
    "distribution": cmd_distribution,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotorlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="TOML config file")
        p.add_argument("--bc", default=None, choices=BC_NAMES)
        p.add_argument("--nmax", type=int, default=None)
        p.add_argument("--k1", default=None, help="e.g. 1.5pi or 4.71rad")
        p.add_argument("--k2", default=None)
        p.add_argument("--periods", type=int, default=None)
        p.add_argument("--grid", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", default=None, choices=("csv", "json"))
        p.add_argument("--jobs", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        config = load_config(args.config, args)
    except ConfigError as exc:
        print(f"rotorlab: config error: {exc}", file=sys.stderr)
        return 2
    try:
        writer = ArtifactWriter(config.out, config.format)
        jobs = COMMANDS[args.command](config, writer)
        writer.manifest(args.command, config, jobs, t0)
    except ConfigError as exc:
        print(f"rotorlab: config error: {exc}", file=sys.stderr)
        return 2
    except RotorlabError as exc:
        print(f"rotorlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"rotorlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
