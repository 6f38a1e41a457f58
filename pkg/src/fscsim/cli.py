"""Command line front door.

Three subcommands: `run` executes a configured pipeline and writes the
table set, `oracle` diagonalizes a single operator file, and `validate`
dry-runs the config checks without computing anything. Exit codes: 0 on
success, 1 when a required stage finished unconverged, 2 on bad input.
"""

import argparse
import sys
from pathlib import Path

from .config import load_config, validate_config
from .oracle import diagonalize, write_spectrum_csv
from .pauli import load_pauli_file
from .report import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fscsim",
        description="variational state solvers and transition-dipole extraction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a configured pipeline")
    p_run.add_argument("config", type=Path, help="run configuration file")
    p_run.add_argument("--out", type=Path, default=None, help="override the output directory")
    p_run.add_argument("--seed", type=int, default=None, help="override the optimizer seed")

    p_oracle = sub.add_parser("oracle", help="exactly diagonalize one operator file")
    p_oracle.add_argument("hamiltonian", type=Path, help="operator file to diagonalize")
    p_oracle.add_argument("--out", type=Path, default=Path("out"), help="output directory")

    p_val = sub.add_parser("validate", help="check a config without computing")
    p_val.add_argument("config", type=Path, help="run configuration file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            config = load_config(args.config)
            n_qubits = validate_config(config)
            print(
                f"ok: {n_qubits} qubits, {config.n_states} states,"
                f" methods {' '.join(config.methods)}"
            )
            return 0
        if args.command == "oracle":
            spectrum = diagonalize(load_pauli_file(args.hamiltonian))
            args.out.mkdir(parents=True, exist_ok=True)
            path = args.out / "spectrum_oracle.csv"
            write_spectrum_csv(spectrum, path)
            print(
                f"wrote {path} ({len(spectrum)} eigenvalues,"
                f" lowest {spectrum.eigenvalues[0]:.10f})"
            )
            return 0
        config = load_config(args.config).with_overrides(output=args.out, seed=args.seed)
        bundle = run(config)
        for path in bundle.files:
            print(f"wrote {path}")
        if not bundle.ok:
            print("UNCONVERGED: at least one stage missed its quality floor", file=sys.stderr)
            return 1
        return 0
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
