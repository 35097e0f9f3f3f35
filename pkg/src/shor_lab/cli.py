"""Command-line front end.

Three commands share one JSON config format: "simulate" writes an outcome
distribution, "verify" runs the full verification suite, "sweep" tabulates
closed forms over parameter grids.  Reports never embed wall-clock data, so
identical (config, seed) pairs produce byte-identical output files.

Exit codes: 0 success, 1 verification failures, 2 config errors,
3 resource limits.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import coherence, numerics, shor, theorems, verification

SCHEMA_PREFIX = "shor-lab"
W_PRESETS = ("none", "pi_over_Q", "pi_over_6Q")
F_NAMES = ("wy", "sld")


class ConfigError(ValueError):
    pass


_CONFIG_KEYS = {
    "N", "x", "t", "q_override", "b_mode", "initial", "epsilon_grid",
    "lambda_grid", "theta_grid", "f_name", "w_preset", "seed", "tolerances",
    "output", "format",
}

_INITIAL_KEYS = {
    "hadamard": set(),
    "local_unitary": {"alpha_phase", "beta_phase", "theta"},
    "amplitudes": {"values"},
    "pseudo_pure": {"epsilon", "inner"},
}


@dataclass
class ExperimentConfig:
    N: int
    x: int
    t: Optional[int] = None
    q_override: Optional[int] = None
    b_mode: str = shor.B_COMPACT
    initial: dict = field(default_factory=lambda: {"variant": "hadamard"})
    epsilon_grid: List[float] = field(default_factory=list)
    lambda_grid: List[float] = field(default_factory=list)
    theta_grid: List[float] = field(default_factory=list)
    f_name: str = "wy"
    w_preset: str = "none"
    seed: int = 0
    tolerances: Dict[str, float] = field(default_factory=dict)
    output: Optional[str] = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("N", "x"):
            if key not in raw:
                raise ConfigError(f"missing config key: {key}")
        cfg = cls(**raw)
        if cfg.t is None and cfg.q_override is None:
            raise ConfigError("need t or q_override")
        if cfg.b_mode not in (shor.B_COMPACT, shor.B_FULL):
            raise ConfigError(f"b_mode={cfg.b_mode!r}")
        if cfg.f_name not in F_NAMES:
            raise ConfigError(f"f_name={cfg.f_name!r}")
        if cfg.w_preset not in W_PRESETS:
            raise ConfigError(f"w_preset={cfg.w_preset!r}")
        if cfg.format not in ("csv", "json"):
            raise ConfigError(f"format={cfg.format!r}")
        _validate_initial(cfg.initial)
        if not isinstance(cfg.tolerances, dict):
            raise ConfigError("tolerances must be an object")
        for grid in (cfg.epsilon_grid, cfg.lambda_grid, cfg.theta_grid):
            if not isinstance(grid, list):
                raise ConfigError("grids must be arrays")
        return cfg


def _validate_initial(spec: dict) -> None:
    if not isinstance(spec, dict) or "variant" not in spec:
        raise ConfigError("initial must be an object with a variant")
    variant = spec["variant"]
    if variant not in _INITIAL_KEYS:
        raise ConfigError(f"initial variant {variant!r}")
    extra = set(spec) - _INITIAL_KEYS[variant] - {"variant"}
    if extra:
        raise ConfigError(f"unknown initial keys: {sorted(extra)}")
    missing = _INITIAL_KEYS[variant] - set(spec)
    if missing:
        raise ConfigError(f"missing initial keys: {sorted(missing)}")
    if variant == "pseudo_pure":
        _validate_initial(spec["inner"])
        if spec["inner"]["variant"] == "pseudo_pure":
            raise ConfigError("pseudo_pure cannot nest")


def _initial_state(spec: dict) -> shor.InitialState:
    variant = spec["variant"]
    if variant == "hadamard":
        return shor.Hadamard()
    if variant == "local_unitary":
        return shor.LocalUnitary(spec["alpha_phase"], spec["beta_phase"],
                                 spec["theta"])
    if variant == "amplitudes":
        values = []
        for v in spec["values"]:
            if isinstance(v, (list, tuple)):
                values.append(complex(v[0], v[1]))
            else:
                values.append(complex(v))
        return shor.Amplitudes.of(values)
    return shor.PseudoPure(spec["epsilon"], _initial_state(spec["inner"]))


def _thread_count() -> int:
    raw = os.environ.get("SHOR_LAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"SHOR_LAB_THREADS={raw!r}") from exc
    if n < 0:
        raise ConfigError(f"SHOR_LAB_THREADS={n}")
    return n or (os.cpu_count() or 1)


def _ramp_for(cfg: ExperimentConfig, Q: int) -> Optional[np.ndarray]:
    if cfg.w_preset == "pi_over_Q":
        return coherence.ramp_phases(Q, 1)
    if cfg.w_preset == "pi_over_6Q":
        return coherence.ramp_phases(Q, 6)
    return None


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Optional[str], schema: str, header: Sequence[str],
               rows: Sequence[Sequence], comments: Sequence[str] = ()) -> None:
    lines = [f"#schema={SCHEMA_PREFIX}-{schema}"]
    lines.extend(f"# {c}" for c in comments)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v
                              for v in row))
    text = "\n".join(lines) + "\n"
    _write_text(path, text)


def _write_json(path: Optional[str], payload: dict) -> None:
    _write_text(path, json.dumps(payload, indent=2) + "\n")


def _write_text(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _build_instance(cfg: ExperimentConfig, max_dim: int) -> shor.ShorInstance:
    return shor.ShorInstance.create(cfg.N, cfg.x, t=cfg.t, Q=cfg.q_override,
                                    b_mode=cfg.b_mode, max_dim=max_dim)


def cmd_simulate(cfg: ExperimentConfig, out: Optional[str], fmt: str,
                 max_dim: int) -> int:
    inst = _build_instance(cfg, max_dim)
    initial = _initial_state(cfg.initial)
    ramp = _ramp_for(cfg, inst.Q)
    if ramp is not None:
        if isinstance(initial, shor.PseudoPure):
            raise ConfigError("noisy pipeline needs a pure initial state")
        lam = cfg.lambda_grid[0] if cfg.lambda_grid else 1.0
        alpha = shor.initial_amplitudes(inst, initial)
        dist = coherence.noisy_outcome_distribution(inst, lam, ramp, alpha)
        kind = f"noisy lam={lam:g} preset={cfg.w_preset}"
    elif isinstance(initial, shor.PseudoPure):
        rho1 = shor.prepare_initial(inst, initial)
        rho3 = coherence.shor_unitary_channel(inst).apply(rho1)
        dist = shor.outcome_distribution(inst, rho3)
        kind = f"pseudo_pure eps={initial.epsilon:g}"
    else:
        alpha = shor.initial_amplitudes(inst, initial)
        dist = shor.outcome_distribution(inst, shor.run_pure_pipeline(inst, alpha))
        kind = "pure"
    exact = (shor.success_probability(inst, dist, mode="exact")
             if inst.exact_mode else None)
    cf = shor.success_probability(inst, dist, mode="cf")
    rows = [(k, float(dist[k])) for k in range(inst.Q)]
    comments = [f"pipeline={kind}",
                f"success_exact={_fmt(exact)}",
                f"success_cf={_fmt(cf)}"]
    if fmt == "csv":
        _write_csv(out, "simulate-v1", ("k", "p"), rows, comments)
    else:
        _write_json(out, {
            "schema": f"{SCHEMA_PREFIX}-simulate-v1",
            "pipeline": kind,
            "distribution": [{"k": k, "p": p} for k, p in rows],
            "success": {"exact": exact, "cf": cf},
            "seed": cfg.seed,
        })
    print(f"simulate: {kind}, N={inst.N} x={inst.x} Q={inst.Q} r={inst.r} "
          f"b_mode={inst.b_mode}")
    print(f"  success_exact={_fmt(exact) or 'n/a'} success_cf={_fmt(cf)}")
    return 0


def cmd_verify(cfg: ExperimentConfig, out: Optional[str], fmt: str,
               max_dim: int) -> int:
    inst = _build_instance(cfg, max_dim)
    start = time.monotonic()
    try:
        reports = verification.run_suite(inst, seed=cfg.seed,
                                         tolerances=cfg.tolerances)
    except ValueError as exc:
        if "exact mode required" in str(exc):
            raise ConfigError(str(exc)) from exc
        raise
    elapsed = time.monotonic() - start
    all_pass = all(rep.passed for rep in reports)
    payload = {
        "schema": f"{SCHEMA_PREFIX}-verify-v1",
        "instance": {"N": inst.N, "x": inst.x, "Q": inst.Q, "r": inst.r,
                     "b_mode": inst.b_mode, "d": inst.d},
        "seed": cfg.seed,
        "checks": [rep.to_dict() for rep in reports],
        "all_pass": all_pass,
    }
    if fmt == "json":
        _write_json(out, payload)
    else:
        rows = [(rep.name, rep.kind, rep.lhs, rep.rhs, rep.margin,
                 rep.tolerance, rep.passed) for rep in reports]
        _write_csv(out, "verify-v1",
                   ("name", "kind", "lhs", "rhs", "margin", "tolerance", "pass"),
                   rows)
    for rep in reports:
        flag = "PASS" if rep.passed else "FAIL"
        print(f"{flag} {rep.name} (margin={rep.margin:.3e})")
    print(f"verify: {sum(r.passed for r in reports)}/{len(reports)} checks "
          f"passed in {elapsed:.2f}s")
    return 0 if all_pass else 1


def _sweep_point(inst, cfg, f, point):
    kind, value = point
    if kind == "theta":
        forms = theorems.local_unitary_forms(inst, 0.0, 0.0, value)
        alpha = shor.local_unitary_amplitudes(0.0, 0.0, value, inst.t)
        dist = shor.outcome_distribution(inst, shor.run_pure_pipeline(inst, alpha))
        success = shor.success_probability(inst, dist, mode="exact")
        return (kind, value, forms.coherence, None, forms.decoherence,
                success, forms.success_lower, None)
    if kind == "epsilon":
        uniform = np.full(inst.Q, 1.0 / np.sqrt(inst.Q), dtype=complex)
        forms = theorems.pseudo_pure_forms(inst, uniform, value, f)
        p_pure = theorems.euler_phi(inst.r) / inst.r
        success = theorems.pseudo_pure_success(inst, p_pure, value)
        return (kind, value, forms.coherence_generic, forms.coherence_wy,
                forms.decoherence_generic, success, None, None)
    forms = theorems.noisy_forms(inst, value, f)
    ramp = _ramp_for(cfg, inst.Q)
    if ramp is None:
        ramp = coherence.ramp_phases(inst.Q, 1)
    dist = coherence.noisy_outcome_distribution(inst, value, ramp)
    success = shor.success_probability(inst, dist, mode="exact")
    return (kind, value, forms.coherence_generic, forms.coherence_wy,
            forms.decoherence, success,
            theorems.noisy_success_lower_bound(inst, value),
            theorems.decoherence_success_gap(inst, value))


def cmd_sweep(cfg: ExperimentConfig, out: Optional[str], fmt: str,
              max_dim: int) -> int:
    inst = _build_instance(cfg, max_dim)
    points = ([("theta", v) for v in cfg.theta_grid]
              + [("epsilon", v) for v in cfg.epsilon_grid]
              + [("lambda", v) for v in cfg.lambda_grid])
    if not points:
        raise ConfigError("sweep needs a nonempty grid")
    f = coherence.wy_function() if cfg.f_name == "wy" else coherence.sld_function()
    workers = min(_thread_count(), len(points))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda p: _sweep_point(inst, cfg, f, p), points))
    header = ("sweep", "param", "coherence", "coherence_wy", "decoherence",
              "success", "bound", "gap")
    if fmt == "csv":
        _write_csv(out, "sweep-v1", header, rows,
                   [f"f={cfg.f_name}", f"threads={workers}"])
    else:
        _write_json(out, {
            "schema": f"{SCHEMA_PREFIX}-sweep-v1",
            "f": cfg.f_name,
            "rows": [dict(zip(header, row)) for row in rows],
        })
    print(f"sweep: {len(rows)} points ({workers} threads)")
    return 0


def _gnuplot_script(csv_path: str, command: str) -> str:
    lines = ["set datafile separator ','",
             "set grid",
             f"set title '{SCHEMA_PREFIX} {command}'"]
    if command == "simulate":
        lines += ["set style fill solid 0.4",
                  "set xlabel 'k'", "set ylabel 'P(k)'",
                  f"plot '{csv_path}' using 1:2 with boxes notitle"]
    else:
        lines += ["set xlabel 'param'", "set key outside",
                  f"plot '{csv_path}' using 2:3 with linespoints title 'coherence', \\",
                  f"     '{csv_path}' using 2:5 with linespoints title 'decoherence', \\",
                  f"     '{csv_path}' using 2:6 with linespoints title 'success'"]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shor-lab",
        description="exact order-finding simulator with coherence accounting")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("simulate", "run one pipeline, write P(k)"),
                           ("verify", "run the verification suite"),
                           ("sweep", "tabulate closed forms over grids")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--b-mode", choices=(shor.B_COMPACT, shor.B_FULL),
                       default=None)
        p.add_argument("--max-dim", type=int, default=numerics.DEFAULT_MAX_DIM)
        p.add_argument("--gnuplot", default=None,
                       help="also write a gnuplot script to this path")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        cfg = ExperimentConfig.from_dict(raw)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.b_mode is not None:
            cfg.b_mode = args.b_mode
        out = args.out if args.out is not None else cfg.output
        fmt = args.format if args.format is not None else cfg.format
        handler = {"simulate": cmd_simulate, "verify": cmd_verify,
                   "sweep": cmd_sweep}[args.command]
        code = handler(cfg, out, fmt, args.max_dim)
        if args.gnuplot is not None and fmt == "csv" and out is not None:
            _write_text(args.gnuplot, _gnuplot_script(out, args.command))
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except numerics.DimensionLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
