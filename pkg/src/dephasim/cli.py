"""Command-line entry point: ``dephasim <command> ...``.

Exit codes: 0 success, 2 invalid config or arguments, 3 numerical error,
4 I/O error. Failures print a one-line JSON error record to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io, scenarios
from .designer import HardwareProfile, invert_target, quantize, samples_needed
from .errors import ConfigError
from .freq import forward_kappa
from .ising import IsingChainSpec, decoherence_fn
from .measurement import CountingConfig, measure_trace
from .spectral import SpectralDensitySpec, spectral_decoherence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _beta(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def _config(factory, *args, **kwargs):
    # bad parameter values are argument errors, not numerical failures
    try:
        return factory(*args, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _out_path(args) -> Path:
    path = Path(args.output)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_ising(args) -> int:
    spec = _config(IsingChainSpec, lam=args.lam, delta=args.delta, n_spins=args.spins, coupling_J=args.coupling)
    trace = decoherence_fn(spec, np.linspace(0.0, args.tmax, args.samples))
    io.write_trace(_out_path(args), trace)
    return EXIT_OK


def cmd_spectral(args) -> int:
    if args.table:
        omega, J = io.read_spectral_table(args.table)
        spec = _config(SpectralDensitySpec.table, omega, J, beta=_beta(args.beta))
    else:
        spec = _config(SpectralDensitySpec, family=args.family, alpha=args.alpha, omega_c=args.omega_c,
                                   s=args.s, beta=_beta(args.beta))
    trace = spectral_decoherence(spec, np.linspace(0.0, args.tmax, args.samples))
    io.write_trace(_out_path(args), trace)
    return EXIT_OK


def cmd_forward(args) -> int:
    dist = io.read_distribution(args.distribution)
    d = np.linspace(0.0, args.dmax, args.samples)
    io.write_trace(_out_path(args), forward_kappa(dist, d, allow_aliasing=args.allow_aliasing))
    return EXIT_OK


def cmd_design(args) -> int:
    target = io.read_target(args.target)
    dist = invert_target(target.head(samples_needed(args.grid_size)), args.grid_size)
    if args.hardware:
        hw = _config(HardwareProfile.from_dict, json.loads(Path(args.hardware).read_text(encoding="utf-8")))
        dist = quantize(dist, hw)
    io.write_distribution(_out_path(args), dist)
    return EXIT_OK


def cmd_measure(args) -> int:
    trace = io.read_trace(args.trace)
    cfg = _config(CountingConfig, rate=args.rate, duration_s=args.duration, seed=args.seed, mc_samples=args.mc)
    io.write_measurement(_out_path(args), measure_trace(trace, cfg))
    return EXIT_OK


def cmd_run(args) -> int:
    if args.template:
        config, base = scenarios.template(args.config), Path.cwd()
    else:
        config, base = scenarios.load_config(args.config)
    out, summary = scenarios.run_scenario(config, base_dir=base, output_dir=args.output)
    print(json.dumps({"status": "ok", "output_dir": str(out), "summary": summary},
                     sort_keys=True, default=float))
    return EXIT_OK


def cmd_list(args) -> int:
    print(scenarios.list_scenarios(as_json=args.json))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dephasim", description="Simulate and design pure-dephasing channels.")
    p.add_argument("--version", action="version", version=scenarios.BUILD_ID)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ising", help="Ising-chain decoherence trace")
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--delta", type=float, default=0.1)
    s.add_argument("--spins", type=int, default=4000)
    s.add_argument("--coupling", type=float, default=1.0)
    s.add_argument("--tmax", type=float, default=4.0)
    s.add_argument("--samples", type=int, default=801)
    s.add_argument("-o", "--output", default="trace.csv")
    s.set_defaults(func=cmd_ising)

    s = sub.add_parser("spectral", help="boson-bath decoherence trace")
    s.add_argument("--family", default="ohmic", choices=["ohmic"])
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--omega-c", dest="omega_c", type=float, default=1.0)
    s.add_argument("--s", type=float, default=1.0, help="spectral exponent (1 = ohmic)")
    s.add_argument("--beta", default="inf")
    s.add_argument("--table", help="CSV with columns omega,J")
    s.add_argument("--tmax", type=float, default=20.0)
    s.add_argument("--samples", type=int, default=201)
    s.add_argument("-o", "--output", default="trace.csv")
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("forward", help="kappa(d) of a distribution CSV")
    s.add_argument("--distribution", required=True)
    s.add_argument("--dmax", type=float, required=True)
    s.add_argument("--samples", type=int, default=501)
    s.add_argument("--allow-aliasing", action="store_true")
    s.add_argument("-o", "--output", default="trace.csv")
    s.set_defaults(func=cmd_forward)

    s = sub.add_parser("design", help="invert a target CSV into a distribution")
    s.add_argument("--target", required=True)
    s.add_argument("--grid-size", type=int, default=4096)
    s.add_argument("--hardware", help="JSON hardware profile; quantize when given")
    s.add_argument("-o", "--output", default="distribution.csv")
    s.set_defaults(func=cmd_design)

    s = sub.add_parser("measure", help="simulated tomography along a trace CSV")
    s.add_argument("--trace", required=True)
    s.add_argument("--rate", type=float, default=3000.0)
    s.add_argument("--duration", type=float, default=10.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mc", type=int, default=100)
    s.add_argument("-o", "--output", default="measurement.csv")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("run", help="run a scenario config or re-run a manifest")
    s.add_argument("config", help="JSON config or manifest path (template name with --template)")
    s.add_argument("--template", action="store_true", help="treat CONFIG as a built-in template name")
    s.add_argument("-o", "--output", help="override the output directory")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("list", help="list built-in scenario templates")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_list)
    return p


def _fail(code: int, kind: str, exc: BaseException) -> int:
    record = {"status": "error", "exit_code": code, "error": kind,
              "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (ConfigError, json.JSONDecodeError) as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    except (ArithmeticError, ValueError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, "numeric", exc)


if __name__ == "__main__":
    sys.exit(main())
