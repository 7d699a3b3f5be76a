"""Command line interface for dwellcert.

Exit codes are a stable contract:

    0 - certified / success
    1 - not certified / oracle violations / failed reproduction rows
    2 - input or assumption error
    3 - I/O error
"""

import json
import logging
import os
import sys
from argparse import ArgumentParser

import numpy as np

from . import catalog, simulator
from .core import DwellCertError
from .parser import load_config, parse_pattern, parse_vector
from .session import Session
from .version import __version__

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_IO = 3

DEFAULT_MAX_LEN = 15
DEFAULT_OUTPUT = "output"


def emit(data):
    """Write `data` to stdout as deterministic JSON."""
    print(json.dumps(data, indent=2, sort_keys=True))


def write_json(path, data):
    """Write `data` to `path` as deterministic JSON with a trailing newline."""

    with open(path, "w", newline="\n") as fp:
        json.dump(data, fp, indent=2, sort_keys=True)
        fp.write("\n")


def write_run(path, record):
    """Write the trajectory of one run record as CSV."""

    with open(path, "w", newline="") as fp:
        record.trajectory.write_csv(fp)


def _session(args):
    config = load_config(args.config)
    return config, Session(config.family())


def _lambda(args, config):
    return args.lam if args.lam is not None else config.lam


def cmd_classify(args):
    """Print the stability partition and the `(m, rho)` selection."""

    _, session = _session(args)
    report = session.classify()

    emit(report)

    return EXIT_INPUT if "assumption_violated" in report else EXIT_OK


def cmd_certify(args):
    """Print the certificate for the configured family."""

    config, session = _session(args)
    cert = session.certify(_lambda(args, config))

    emit(cert.to_api())

    if cert.certified:
        return EXIT_OK

    if cert.verdict == "AssumptionViolated":
        return EXIT_INPUT

    return EXIT_FAILED


def _initial_state(args, config, fam):
    if args.x0 is not None:
        return parse_vector(args.x0)

    if config.x0 is not None:
        return config.x0

    rng = np.random.default_rng(config.seed if args.seed is None else args.seed)

    return rng.uniform(-config.x0_box, config.x0_box, size=fam.d)


def cmd_simulate(args):
    """Simulate random or periodic signals and write CSV files plus a summary."""

    config, session = _session(args)

    horizon = config.horizon if args.horizon is None else args.horizon
    seed = config.seed if args.seed is None else args.seed

    if args.periodic is not None:
        pattern = parse_pattern(args.periodic)
        x0 = _initial_state(args, config, session.family)
        record = session.simulate_periodic(pattern, x0, horizon)
        summary = simulator.summarize([record])
    else:
        summary = session.monte_carlo(
            config.num_signals if args.num_signals is None else args.num_signals,
            horizon,
            config.x0_box,
            seed=seed,
            workers=args.workers,
        )

    os.makedirs(args.out, exist_ok=True)

    for record in summary.runs:
        write_run(os.path.join(args.out, f"run_{record.run:04d}.csv"), record)

    data = summary.to_api()
    write_json(os.path.join(args.out, "summary.json"), data)

    if args.json:
        emit(data)

    log.info("wrote %d runs to %s", summary.num_runs, args.out)

    return EXIT_OK


def cmd_oracle(args):
    """Certify the family and check the certificate on every short product."""

    config, session = _session(args)
    cert = session.certify(_lambda(args, config))

    if not cert.certified:
        emit({"certificate": cert.to_api(), "error": "no certificate to check"})
        return EXIT_INPUT if cert.verdict == "AssumptionViolated" else EXIT_FAILED

    report = session.oracle(cert, args.max_len)

    emit({"certificate": cert.to_api(), "oracle": report.to_api()})

    return EXIT_OK if report.sound else EXIT_FAILED


def cmd_reproduce(args):
    """Compare the built-in examples against their published values."""

    results = catalog.reproduce(
        args.which,
        num_signals=args.num_signals or 0,
        horizon=args.horizon or 200,
        seed=args.seed or 0,
    )

    if args.json:
        emit([result.to_api() for result in results])
    else:
        for result in results:
            print(f"== {result.name} ==")

            for row in result.rows:
                print(row)

    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)

        for result in results:
            write_json(os.path.join(args.out, f"{result.name}.json"), result.to_api())

            for idx, record in enumerate(result.runs):
                name = f"{result.name}_run_{idx:04d}.csv"
                write_run(os.path.join(args.out, name), record)

    return EXIT_OK if all(result.passed for result in results) else EXIT_FAILED


def build_parser():
    """Build the argument parser for all subcommands."""

    argparser = ArgumentParser(prog="dwellcert")

    argparser.add_argument(
        "--version", action="version", version=f"dwellcert-{__version__}"
    )
    argparser.add_argument(
        "-v", "--verbose", action="store_true", help="enable debug logging"
    )

    commands = argparser.add_subparsers(dest="command", required=True)

    def family_command(name, handler, help):
        cmd = commands.add_parser(name, help=help)
        cmd.add_argument("--config", required=True, help="family configuration (JSON)")
        cmd.add_argument("--lambda", dest="lam", type=float, help="decay rate")
        cmd.set_defaults(handler=handler)
        return cmd

    family_command("classify", cmd_classify, "partition a family by stability")
    family_command("certify", cmd_certify, "certify a family")

    simulate = family_command("simulate", cmd_simulate, "simulate trajectories")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--num-signals", type=int)
    simulate.add_argument("--horizon", type=int)
    simulate.add_argument("--periodic", help='periodic pattern, e.g. "1:3,2:3"')
    simulate.add_argument("--x0", help='initial state, e.g. "-1,1"')
    simulate.add_argument("--workers", type=int, default=1)
    simulate.add_argument("--out", default=DEFAULT_OUTPUT, help="output directory")
    simulate.add_argument("--json", action="store_true", help="print the summary")

    oracle = family_command("oracle", cmd_oracle, "check a certificate exhaustively")
    oracle.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)

    reproduce = commands.add_parser("reproduce", help="reproduce the built-in examples")
    reproduce.add_argument(
        "which", nargs="?", default="all", choices=["ex1", "ex2", "ex3", "all"]
    )
    reproduce.add_argument("--seed", type=int)
    reproduce.add_argument("--num-signals", type=int)
    reproduce.add_argument("--horizon", type=int)
    reproduce.add_argument("--out", help="output directory")
    reproduce.add_argument("--json", action="store_true", help="print JSON output")
    reproduce.set_defaults(handler=cmd_reproduce)

    return argparser


def main(argv=None):
    """Run the command line and return its exit code."""

    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s :: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)

    except OSError as err:
        log.error("I/O error :: %s", err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO

    except DwellCertError as err:
        log.error("%s :: %s", type(err).__name__, err)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
