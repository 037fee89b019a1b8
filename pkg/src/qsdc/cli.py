"""Command-line surface: single-point rates, sweeps, simulations, P_e tables.

Exit codes: 0 success, 1 runtime error (unwritable output, I/O failure),
2 insecure configuration (rate command), 64 usage error. A usage error is
any invalid flag, flag value, or config-file entry, whether argparse or a
domain constructor catches it. Randomized commands take --seed; without it
an auto-chosen seed is printed to standard error so every run stays
reproducible. An optional plain-text config file supplies `key = value`
defaults that explicit flags override.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from ._version import __version__
from .attack import AttackSpec, t_interval
from .disclosure import make_scheme
from .rates import (
    COARSE_GRID,
    CSV_HEADER,
    GS_TOL,
    ModelConfig,
    RateResult,
    SCHEME_ORDER,
    achievable_rate,
    csv_row,
    engine_settings_comment,
    format_csv_float,
    sweep,
)
from .simulate import (
    SessionConfig,
    analytic_decode_error,
    report_to_kv,
    run_cdm06,
    run_model,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INSECURE = 2
EXIT_USAGE = 64

THREADS_ENV = "QSDC_THREADS"


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code pinned to 64."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        val = int(raw)
    except ValueError:
        return 1
    return max(1, val)


def _basis_code(name: str) -> int:
    return {"z": 0, "x": 1}[name]


def _schemes_list(raw: str) -> list[str]:
    names = [s.strip() for s in raw.split(",") if s.strip()]
    for name in names:
        if name not in SCHEME_ORDER:
            raise ValueError(f"unknown scheme {name!r}; choose from {', '.join(SCHEME_ORDER)}")
    if not names:
        raise ValueError("no schemes given")
    return names


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = int(np.random.SeedSequence().entropy) & (2**64 - 1)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _write_text(path: str | None, body: str) -> None:
    if path is None:
        sys.stdout.write(body)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(body)


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Fold `key = value` lines from --config into parser defaults.

    Flags given on the command line still win, because file values only
    become defaults. Unknown keys are a usage error.
    """
    probe = _Parser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return argv
    defaults = {}
    try:
        with open(known.config) as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if "=" not in stripped:
                    parser.error(f"config line {lineno}: expected key = value")
                key, _, value = stripped.partition("=")
                defaults[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    valid = {action.dest for action in parser._actions}
    for key in defaults:
        if key not in valid:
            parser.error(f"unknown config key {key!r}")
    # run the values through each flag's own type converter
    for action in parser._actions:
        if action.dest in defaults:
            raw = defaults[action.dest]
            try:
                value = action.type(raw) if callable(action.type) else raw
            except (TypeError, ValueError) as exc:
                parser.error(f"config key {action.dest}: {exc}")
            if action.choices is not None and value not in action.choices:
                parser.error(f"config key {action.dest}: invalid choice {value!r}")
            parser.set_defaults(**{action.dest: value})
    return argv


# ---------------------------------------------------------------------------
# subcommand bodies


def _model_config(scheme_name: str, n: int, b: int, q_z: float, q_x: float) -> ModelConfig:
    return ModelConfig(scheme=make_scheme(scheme_name, n), n=n, b=b, q_z=q_z, q_x=q_x)


def cmd_rate(args: argparse.Namespace) -> int:
    config = _model_config(args.scheme, args.n, _basis_code(args.b), args.qz, args.qx)
    result = achievable_rate(config, coarse=args.coarse, gs_tol=args.gs_tol)
    body = CSV_HEADER + "\n" + csv_row(config, result) + "\n"
    _write_text(args.out, body)
    return EXIT_INSECURE if result.insecure else EXIT_OK


def _sweep_body(configs: list[ModelConfig], args: argparse.Namespace) -> str:
    results = sweep(configs, threads=args.threads, coarse=args.coarse, gs_tol=args.gs_tol)
    lines = [CSV_HEADER]
    for config, result in zip(configs, results):
        if result.status.startswith("error:"):
            print(f"point failed: {csv_row(config, result)}", file=sys.stderr)
        lines.append(csv_row(config, result))
    lines.append(engine_settings_comment(args.coarse, args.gs_tol))
    return "\n".join(lines) + "\n"


def cmd_sweep_n(args: argparse.Namespace) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise ValueError(f"bad n range [{args.n_min}, {args.n_max}]")
    schemes = _schemes_list(args.schemes)
    b = _basis_code(args.b)
    configs = [
        _model_config(name, n, b, args.qz, args.qx)
        for name in schemes
        for n in range(args.n_min, args.n_max + 1)
    ]
    _write_text(args.out, _sweep_body(configs, args))
    return EXIT_OK


def cmd_sweep_qber(args: argparse.Namespace) -> int:
    if args.steps < 2:
        raise ValueError("lattice needs steps >= 2")
    if not 0.0 <= args.q_min < args.q_max <= 0.5:
        raise ValueError(f"bad lattice range [{args.q_min}, {args.q_max}]")
    schemes = _schemes_list(args.schemes)
    b = _basis_code(args.b)
    grid = np.linspace(args.q_min, args.q_max, args.steps)
    configs = [
        _model_config(name, args.n, b, float(qz), float(qx))
        for name in schemes
        for qz in grid
        for qx in grid
    ]
    _write_text(args.out, _sweep_body(configs, args))
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    t = args.t if args.t is not None else t_interval(args.qz, args.qx)[0]
    attack = AttackSpec(q_z=args.qz, q_x=args.qx, t=t)
    if args.mode == "model":
        config = SessionConfig(
            mode="model",
            attack=attack,
            p=args.p,
            trials=args.trials,
            seed=seed,
            sacrifice_fraction=args.sacrifice,
            scheme=make_scheme(args.scheme, args.n),
            n=args.n,
            b=_basis_code(args.b),
        )
        report = run_model(config)
    else:
        if args.n_prime is None:
            raise ValueError("cdm06 mode needs --n-prime")
        config = SessionConfig(
            mode="cdm06",
            attack=attack,
            p=args.p,
            trials=args.trials,
            seed=seed,
            sacrifice_fraction=args.sacrifice,
            n_prime=args.n_prime,
        )
        report = run_cdm06(config)
    kv = report_to_kv(report)
    sys.stdout.write(kv)
    if args.out is not None:
        keys, values = [], []
        for line in kv.strip().split("\n"):
            key, _, value = line.partition(" =")
            keys.append(key)
            values.append(value.strip())
        _write_text(args.out, ",".join(keys) + "\n" + ",".join(values) + "\n")
    return EXIT_OK


def cmd_cdm06_pe(args: argparse.Namespace) -> int:
    if args.m_min < 1 or args.m_max < args.m_min:
        raise ValueError(f"bad m range [{args.m_min}, {args.m_max}]")
    seed = _resolve_seed(args)
    t = args.t if args.t is not None else t_interval(args.qz, args.qx)[0]
    attack = AttackSpec(q_z=args.qz, q_x=args.qx, t=t)
    lines = ["m,analytic_pe,empirical_pe,std_error"]
    seq = np.random.SeedSequence(seed)
    sub_seeds = [int(s.generate_state(1, np.uint64)[0]) for s in seq.spawn(args.m_max - args.m_min + 1)]
    for m, sub_seed in zip(range(args.m_min, args.m_max + 1), sub_seeds):
        # sessions sized so the target balanced group 2m is realized often
        config = SessionConfig(
            mode="cdm06",
            attack=attack,
            p=args.p,
            trials=args.trials,
            seed=sub_seed,
            sacrifice_fraction=args.sacrifice,
            n_prime=2 * m + 2,
        )
        report = run_cdm06(config)
        analytic = analytic_decode_error(m)
        stats = (report.p_e_by_m or {}).get(m)
        if stats is None or stats[0] == 0:
            lines.append(f"{m},{format_csv_float(analytic)},,")
            continue
        count, errors = stats
        empirical = errors / count
        se = math.sqrt(analytic * (1.0 - analytic) / count)
        lines.append(
            f"{m},{format_csv_float(analytic)},{format_csv_float(empirical)},{format_csv_float(se)}"
        )
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="plain-text key = value defaults file")
    p.add_argument("--out", help="output file path (default: standard output)")


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coarse", type=int, default=COARSE_GRID, help="coarse grid points")
    p.add_argument("--gs-tol", type=float, default=GS_TOL, help="golden-section tolerance")


def _add_attack_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--qz", type=float, default=0.0, help="Z-basis error rate")
    p.add_argument("--qx", type=float, default=0.0, help="X-basis error rate")
    p.add_argument("--t", type=float, default=None, help="attack parameter (default: interval minimum)")


def build_parser() -> _Parser:
    parser = _Parser(prog="qsdc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qsdc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", parents=[], help="one configuration's achievable rate")
    p_rate.add_argument("--scheme", choices=SCHEME_ORDER, required=True)
    p_rate.add_argument("--n", type=int, required=True)
    p_rate.add_argument("--b", choices=("z", "x"), default="z")
    p_rate.add_argument("--qz", type=float, default=0.0)
    p_rate.add_argument("--qx", type=float, default=0.0)
    _add_engine_flags(p_rate)
    _add_common(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_sn = sub.add_parser("sweep-n", help="rates across ensemble sizes")
    p_sn.add_argument("--schemes", default=",".join(SCHEME_ORDER), help="comma-separated scheme list")
    p_sn.add_argument("--n-min", type=int, default=1)
    p_sn.add_argument("--n-max", type=int, default=5)
    p_sn.add_argument("--b", choices=("z", "x"), default="z")
    p_sn.add_argument("--qz", type=float, default=0.0)
    p_sn.add_argument("--qx", type=float, default=0.0)
    p_sn.add_argument("--threads", type=int, default=_default_threads())
    _add_engine_flags(p_sn)
    _add_common(p_sn)
    p_sn.set_defaults(func=cmd_sweep_n)

    p_sq = sub.add_parser("sweep-qber", help="rates across a QBER lattice")
    p_sq.add_argument("--schemes", default=",".join(SCHEME_ORDER))
    p_sq.add_argument("--n", type=int, default=2)
    p_sq.add_argument("--b", choices=("z", "x"), default="z")
    p_sq.add_argument("--q-min", type=float, default=0.0)
    p_sq.add_argument("--q-max", type=float, default=0.1)
    p_sq.add_argument("--steps", type=int, default=11)
    p_sq.add_argument("--threads", type=int, default=_default_threads())
    _add_engine_flags(p_sq)
    _add_common(p_sq)
    p_sq.set_defaults(func=cmd_sweep_qber)

    p_sim = sub.add_parser("simulate", help="Monte Carlo protocol session")
    p_sim.add_argument("--mode", choices=("model", "cdm06"), default="model")
    p_sim.add_argument("--scheme", choices=SCHEME_ORDER, default="full")
    # n = 1 cannot satisfy the one-message-pair-per-ensemble floor, so the
    # smallest workable ensemble is the default
    p_sim.add_argument("--n", type=int, default=2)
    p_sim.add_argument("--b", choices=("z", "x"), default="z")
    p_sim.add_argument("--n-prime", type=int, default=None, help="qubits per trial (cdm06)")
    p_sim.add_argument("--p", type=float, default=0.5, help="P_A(0)")
    p_sim.add_argument("--trials", type=int, default=100_000)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--sacrifice", type=float, default=0.1)
    _add_attack_flags(p_sim)
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_pe = sub.add_parser("cdm06-pe", help="decoding-error table vs group size")
    p_pe.add_argument("--m-min", type=int, default=1)
    p_pe.add_argument("--m-max", type=int, default=4)
    p_pe.add_argument("--p", type=float, default=0.5, help="P_A(0)")
    p_pe.add_argument("--trials", type=int, default=100_000)
    p_pe.add_argument("--seed", type=int, default=None)
    p_pe.add_argument("--sacrifice", type=float, default=0.1)
    _add_attack_flags(p_pe)
    _add_common(p_pe)
    p_pe.set_defaults(func=cmd_cdm06_pe)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # config-file defaults apply to the selected subcommand's parser
    if argv and argv[0] in ("rate", "sweep-n", "sweep-qber", "simulate", "cdm06-pe"):
        sub_actions = [a for a in parser._actions if isinstance(a, argparse._SubParsersAction)]
        sub_parser = sub_actions[0].choices[argv[0]]
        _apply_config_file(sub_parser, argv[1:])
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        # every ValueError reachable here traces back to a flag or config value
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
