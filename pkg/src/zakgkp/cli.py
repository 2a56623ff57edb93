"""Command-line front end.

Subcommands: ``zakplot`` (magnitude/phase grids of a state), ``shift-array``
(a panel array of displaced states), ``logical`` (logical-qubit report) and
``sweep`` (approximation-quality table over a list of delta values).

Flags override values from an optional ``key=value`` config file; the
resolved configuration is echoed into a ``.manifest`` next to each output.
All commands are deterministic functions of the configuration.  Exit
codes: 0 success, 2 configuration error, 3 numerical-tolerance failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import gridio, operators, ssd
from .core import ModularWavefunction, tabulated, vacuum, zak_transform
from .errors import (
    ConfigError,
    DegenerateLogicalError,
    OffGridError,
    TruncationError,
    ZakError,
)
from .gkp import (
    DEFAULT_ALPHA,
    GKPCode,
    approx_codeword,
    codeword,
    logical_from_overlap,
    stabilizer_residual,
)

__all__ = ["main"]

DEFAULTS = {
    "alpha": DEFAULT_ALPHA,
    "grid": "256x256",
    "mmax": 16,
    "delta": 0.2,
    "state": "vacuum",
    "format": "csv",
    "method": "trace",
    "seed": None,
    "out": None,
    "jmax": 3,
    "kmax": 3,
    "dx": None,
    "dy": None,
    "deltas": "0.5,0.4,0.3,0.2,0.1",
}

_CONFIG_PARSERS = {
    "alpha": float,
    "grid": str,
    "mmax": int,
    "delta": float,
    "state": str,
    "format": str,
    "method": str,
    "seed": int,
    "out": str,
    "jmax": int,
    "kmax": int,
    "dx": float,
    "dy": float,
    "deltas": str,
}


def _parse_grid(text):
    try:
        nu_text, nv_text = text.lower().split("x")
        nu, nv = int(nu_text), int(nv_text)
    except ValueError as exc:
        raise ConfigError(f"--grid expects NUxNV, got {text!r}") from exc
    if nu <= 0 or nu % 4 != 0 or nv <= 0 or nv % 2 != 0:
        raise ConfigError(f"grid {text!r} must have Nu divisible by 4 and Nv even")
    return nu, nv


def _load_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                if key not in _CONFIG_PARSERS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    values[key] = _CONFIG_PARSERS[key](value)
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve_config(args):
    cfg = dict(DEFAULTS)
    cfg["config_file"] = args.config or ""
    if args.config:
        cfg.update(_load_config_file(args.config))
    for key in _CONFIG_PARSERS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            cfg[key] = value
    if cfg["alpha"] <= 0:
        raise ConfigError(f"alpha must be positive, got {cfg['alpha']!r}")
    if cfg["mmax"] <= 0:
        raise ConfigError(f"mmax must be positive, got {cfg['mmax']!r}")
    if cfg["delta"] <= 0:
        raise ConfigError(f"delta must be positive, got {cfg['delta']!r}")
    if cfg["format"] not in ("csv", "bin"):
        raise ConfigError(f"format must be csv or bin, got {cfg['format']!r}")
    if cfg["method"] not in ("trace", "ec-trace", "overlap"):
        raise ConfigError(f"method must be trace, ec-trace or overlap, got {cfg['method']!r}")
    if not cfg["out"]:
        raise ConfigError("--out is required")
    if cfg["jmax"] < 0 or cfg["kmax"] < 0:
        raise ConfigError("--jmax and --kmax must be nonnegative")
    cfg["nu"], cfg["nv"] = _parse_grid(cfg["grid"])
    return cfg


def _load_table(path):
    xs, values = [], []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#") or line.lower().startswith("x,"):
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ConfigError(f"{path}:{lineno}: expected x,re,im rows")
                try:
                    xs.append(float(parts[0]))
                    values.append(complex(float(parts[1]), float(parts[2])))
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: bad number: {line!r}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read table {path}: {exc}") from exc
    if not xs:
        raise ConfigError(f"table {path} is empty")
    return tabulated(np.array(xs), np.array(values))


def _build_state(cfg, code):
    """Returns ('ideal', IdealZakState) or ('grid', ModularWavefunction)."""
    spec = cfg["state"]
    if spec in ("gkp0", "gkp1"):
        return "ideal", codeword(code, int(spec[-1]))
    grid = code.grid(cfg["nu"], cfg["nv"])
    if spec == "vacuum":
        descriptor = vacuum()
    elif spec.startswith("gkp-approx:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"state {spec!r} must be gkp-approx:DELTA:ELL")
        try:
            delta, ell = float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"state {spec!r} must be gkp-approx:DELTA:ELL") from exc
        if ell not in (0, 1) or delta <= 0:
            raise ConfigError(f"state {spec!r} needs delta > 0 and ell in {{0, 1}}")
        descriptor = approx_codeword(code, ell, delta)
    elif spec.startswith("tabulated:"):
        descriptor = _load_table(spec.split(":", 1)[1])
    else:
        raise ConfigError(f"unknown state spec {spec!r}")
    return "grid", zak_transform(descriptor, grid, cfg["mmax"])


def _manifest_text(command, cfg):
    lines = [f"command={command}"]
    for key in sorted(cfg):
        if key in ("nu", "nv"):
            continue
        value = cfg[key]
        if isinstance(value, float):
            value = gridio.format_float(value)
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def _with_suffix(path, suffix):
    stem, ext = os.path.splitext(path)
    return f"{stem}{suffix}{ext}"


def _save_grid(psi, path, fmt):
    if fmt == "bin":
        gridio.save_grid_binary(psi, path)
    else:
        gridio.save_grid_csv(psi, path)


def cmd_zakplot(cfg):
    code = GKPCode(alpha=cfg["alpha"])
    kind, state = _build_state(cfg, code)
    out = cfg["out"]
    if kind == "ideal":
        gridio.save_point_list_csv(state, out)
    else:
        _save_grid(state, out, cfg["format"])
        magnitude = ModularWavefunction(state.grid, np.abs(state.samples))
        phase = ModularWavefunction(state.grid, np.angle(state.samples))
        _save_grid(magnitude, _with_suffix(out, "_abs"), cfg["format"])
        _save_grid(phase, _with_suffix(out, "_arg"), cfg["format"])
    gridio.atomic_write_text(out + ".manifest", _manifest_text("zakplot", cfg))
    return 0


def cmd_shift_array(cfg):
    code = GKPCode(alpha=cfg["alpha"])
    dx = cfg["dx"] if cfg["dx"] is not None else code.alpha / 3
    dy = cfg["dy"] if cfg["dy"] is not None else math.pi / (2 * code.alpha)
    kind, state = _build_state(cfg, code)
    if kind == "grid":
        try:
            state.grid.u_steps(dx)
            state.grid.v_steps(dy)
        except OffGridError as exc:
            raise ConfigError(f"panel steps must be grid multiples: {exc}") from exc
    out_dir = cfg["out"]
    os.makedirs(out_dir, exist_ok=True)
    ext = ".csv" if kind == "ideal" or cfg["format"] == "csv" else ".bin"
    for j in range(cfg["jmax"] + 1):
        for k in range(cfg["kmax"] + 1):
            panel = operators.apply_X(operators.apply_Z(state, k * dy), j * dx)
            path = os.path.join(out_dir, f"panel_j{j}_k{k}{ext}")
            if kind == "ideal":
                gridio.save_point_list_csv(panel, path)
            else:
                _save_grid(panel, path, cfg["format"])
    extra = dict(cfg)
    extra["dx"], extra["dy"] = dx, dy
    gridio.atomic_write_text(
        os.path.join(out_dir, "manifest"), _manifest_text("shift-array", extra)
    )
    return 0


def cmd_logical(cfg):
    code = GKPCode(alpha=cfg["alpha"])
    _, state = _build_state(cfg, code)
    method = cfg["method"]
    if method == "overlap":
        qubit = logical_from_overlap(state, code)
    elif method == "trace":
        qubit = ssd.gauge_trace(ssd.to_ssd(state, code))
    else:
        qubit = ssd.ec_gauge_trace(ssd.to_ssd(state, code))
    gridio.save_logical_report(qubit, cfg["out"])
    gridio.atomic_write_text(cfg["out"] + ".manifest", _manifest_text("logical", cfg))
    return 0


def cmd_sweep(cfg):
    code = GKPCode(alpha=cfg["alpha"])
    spec = cfg["state"]
    if spec in ("gkp0", "gkp1"):
        target = int(spec[-1])
    elif spec.startswith("gkp-approx:"):
        parts = spec.split(":")
        if len(parts) != 3 or parts[2] not in ("0", "1"):
            raise ConfigError(f"state {spec!r} must be gkp-approx:DELTA:ELL")
        target = int(parts[2])
    else:
        target = 0
    try:
        deltas = [float(d) for d in cfg["deltas"].split(",") if d.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --deltas list {cfg['deltas']!r}") from exc
    if not deltas:
        raise ConfigError("--deltas must list at least one value")
    if any(d <= 0 for d in deltas):
        raise ConfigError("--deltas values must be positive")
    grid = code.grid(cfg["nu"], cfg["nv"])
    lines = ["delta,fidelity,purity,raw_trace,residual_pv,residual_pu"]
    for delta in deltas:
        psi = zak_transform(approx_codeword(code, target, delta), grid, cfg["mmax"])
        qubit = ssd.gauge_trace(ssd.to_ssd(psi, code))
        r1, r2 = stabilizer_residual(psi, code)
        fields = [delta, qubit.fidelity(target), qubit.purity, qubit.raw_trace, r1, r2]
        lines.append(",".join(gridio.format_float(x) for x in fields))
    gridio.atomic_write_text(cfg["out"], "\n".join(lines) + "\n")
    gridio.atomic_write_text(cfg["out"] + ".manifest", _manifest_text("sweep", cfg))
    return 0


_COMMANDS = {
    "zakplot": cmd_zakplot,
    "shift-array": cmd_shift_array,
    "logical": cmd_logical,
    "sweep": cmd_sweep,
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="zakgkp",
        description="Zak-domain numerics for the GKP code",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("zakplot", "write magnitude and phase grids of a state"),
        ("shift-array", "write a panel array of displaced states"),
        ("logical", "write a logical-qubit report"),
        ("sweep", "write an approximation-quality table over delta values"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--alpha", type=float, help="GKP half-period (default sqrt(pi))")
        p.add_argument("--grid", help="samples as NUxNV (default 256x256)")
        p.add_argument("--mmax", type=int, help="comb truncation order (default 16)")
        p.add_argument("--delta", type=float, help="approximation width (default 0.2)")
        p.add_argument(
            "--state",
            help="vacuum | gkp0 | gkp1 | gkp-approx:DELTA:ELL | tabulated:PATH",
        )
        p.add_argument("--out", help="output path (a directory for shift-array)")
        p.add_argument("--format", choices=("csv", "bin"), help="grid file format")
        p.add_argument("--seed", type=int, help="seed echoed into the manifest")
        if name == "logical":
            p.add_argument(
                "--method", choices=("trace", "ec-trace", "overlap"), help="logical map"
            )
        if name == "shift-array":
            p.add_argument("--jmax", type=int, help="largest X panel index (default 3)")
            p.add_argument("--kmax", type=int, help="largest Z panel index (default 3)")
            p.add_argument("--dx", type=float, help="X step (default alpha/3)")
            p.add_argument("--dy", type=float, help="Z step (default pi/(2 alpha))")
        if name == "sweep":
            p.add_argument("--deltas", help="comma-separated delta list")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"zakgkp: config error: {exc}", file=sys.stderr)
        return 2
    except (TruncationError, DegenerateLogicalError, OffGridError) as exc:
        print(f"zakgkp: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ZakError as exc:
        print(f"zakgkp: error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"zakgkp: cannot write output: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
