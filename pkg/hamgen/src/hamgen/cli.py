"""Command-line fixture generation: one molecule in, one directory of files out."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import qubit, scf

DEFAULT_CHARGE = {"h2": 0, "heh": 0}
AXES = ("x", "y", "z")


def build_molecule(name, bond_length, charge):
    if name == "h2":
        symbols = ["H", "H"]
    elif name == "heh":
        symbols = ["He", "H"]
    else:
        raise ValueError(f"unknown molecule {name!r}")
    coords = [[0.0, 0.0, 0.0], [0.0, 0.0, float(bond_length)]]
    return scf.Molecule(symbols, coords, charge)


def generate(mol, out_dir, label_prefix):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    h_mo, eri_mo, d_mo, scf_energy = scf.orbital_basis(mol)
    n_qubits = 2 * h_mo.shape[0]
    nuclear_dipole = mol.nuclear_dipole()

    operators = {
        "hamiltonian": (
            qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion),
            "hartree",
        ),
        "number": (qubit.number_operator(n_qubits), "dimensionless"),
        "sz": (qubit.sz_operator(n_qubits), "dimensionless"),
        "s2": (qubit.s2_operator(n_qubits), "dimensionless"),
    }
    for axis in range(3):
        operators[f"dipole_{AXES[axis]}"] = (
            qubit.dipole_operator(d_mo[axis], nuclear_dipole[axis], n_qubits),
            "debye",
        )

    for name, (op, units) in operators.items():
        if not qubit.check_hermitian(op):
            raise RuntimeError(f"{name} operator failed the hermiticity check")
        text = qubit.format_operator(op, n_qubits, f"{label_prefix}-{name}", units)
        (out / f"{name}.txt").write_text(text, encoding="ascii")

    metadata = {
        "basis": "sto-3g",
        "bond_length_angstrom": float(
            np.linalg.norm(mol.coords_angstrom[1] - mol.coords_angstrom[0])
        ),
        "charge": mol.charge,
        "dipole_units": "debye",
        "geometry": [
            {"symbol": s, "xyz_angstrom": [float(v) for v in c]}
            for s, c in zip(mol.symbols, mol.coords_angstrom)
        ],
        "n_electrons": mol.n_electrons,
        "n_qubits": n_qubits,
        "nuclear_dipole_au": [float(v) for v in nuclear_dipole],
        "nuclear_repulsion_hartree": float(mol.nuclear_repulsion),
        "orbitals": "rhf" if mol.n_electrons % 2 == 0 else "lowdin",
        "scf_electronic_hartree": None if scf_energy is None else float(scf_energy),
    }
    (out / "metadata.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="ascii"
    )
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hamgen", description="generate molecular operator fixtures"
    )
    parser.add_argument("--molecule", required=True, choices=["h2", "heh"])
    parser.add_argument("--bond-length", type=float, default=0.7, metavar="ANGSTROM")
    parser.add_argument("--charge", type=int, default=None)
    parser.add_argument("--out", required=True, metavar="DIR")
    args = parser.parse_args(argv)
    charge = DEFAULT_CHARGE[args.molecule] if args.charge is None else args.charge
    prefix = args.molecule
    if charge != DEFAULT_CHARGE[args.molecule]:
        prefix = f"{args.molecule}{charge:+d}"
    try:
        mol = build_molecule(args.molecule, args.bond_length, charge)
        out = generate(mol, args.out, prefix)
    except (ValueError, RuntimeError) as exc:
        print(f"hamgen: {exc}", file=sys.stderr)
        return 2
    print(f"wrote fixtures for {args.molecule} (charge {charge:+d}) to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
