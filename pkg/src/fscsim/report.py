"""Pipeline orchestration: solve the configured states, extract transition
dipoles by each requested method, and write the table set.

Outputs land in the configured directory as CSV plus aligned-text tables,
the exact reference spectrum, and a machine-readable summary.json. All
file numerics carry 17 significant digits so regression comparisons can
be bit-faithful. The JSON summary is emitted with sorted keys; identical
config and seed reproduce it byte for byte.
"""

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec, make_ansatz_spec
from .config import RunConfig, reference_indices, validate_config
from .fermion import sz_preserving_subset, uccsd_generators
from .fsc import FSC_PM_HAM_DEPTH, TransitionMatrix, transition_matrix
from .oracle import (
    SpectrumReference,
    diagonalize,
    exact_transition_moments,
    format_log_error,
    log_error,
    write_spectrum_csv,
)
from .pauli import load_pauli_file
from .statevector import from_amplitudes
from .vqe import StateTarget, SymmetryPenalty, solve_spectrum, ssvqe

DEBYE_PER_AU = 2.5417464

# eigenvector sector labels are integer or half-integer to ~1e-6 when the
# symmetry operators commute with H; 1e-3 absorbs Jacobi round-off
SECTOR_MATCH_TOL = 1e-3

DIPOLE_AXES = ("x", "y", "z")


def convert_units(value):
    """Electric dipole, atomic units to Debye."""
    return value * DEBYE_PER_AU


def _g17(x) -> str:
    return f"{float(x):.17g}"


def reference_state(spec, n_qubits):
    indices, _ = reference_indices(spec)
    amps = np.zeros(2**n_qubits, dtype=complex)
    for i in indices:
        amps[i] = 1.0
    amps /= math.sqrt(len(indices))
    return from_amplitudes(amps, n_qubits)


def electron_count(specs) -> int:
    indices, _ = reference_indices(specs[0])
    return bin(indices[0]).count("1")


def match_states(oracle: SpectrumReference, specs, tol=SECTOR_MATCH_TOL):
    """Oracle index per target: lowest unused eigenstate in the declared
    (N, Sz, S^2) sector, scanning in ascending energy order."""
    used = set()
    picks = []
    for s in specs:
        want = (s.sector_n, s.sector_sz, s.sector_s2)
        for i in range(len(oracle)):
            if i in used:
                continue
            if all(abs(oracle.sectors[i, c] - want[c]) <= tol for c in range(3)):
                used.add(i)
                picks.append(i)
                break
        else:
            raise ValueError(
                f"state {s.label!r}: no unused eigenstate with sector {want}"
            )
    return tuple(picks)


def sector_penalties(sym_ops, spec, weight):
    """Five quadratic penalties pinning one symmetry sector.

    The squared operators rule out contamination that balances around the
    mean: a mix of N=1 and N=3 components passes an <N>=2 pin but fails
    <N^2>=4.
    """
    n_op, sz_op, s2_op = sym_ops
    n, sz, s2 = spec.sector_n, spec.sector_sz, spec.sector_s2
    return (
        SymmetryPenalty(n_op, n, weight),
        SymmetryPenalty(sz_op, sz, weight),
        SymmetryPenalty(s2_op, s2, weight),
        SymmetryPenalty(n_op * n_op, n * n, weight),
        SymmetryPenalty(sz_op * sz_op, sz * sz, weight),
    )


@dataclass
class ReportBundle:
    """Everything a caller needs after run(): solver results keyed by
    method, dipole tables keyed by table name, the exact reference, and
    the written summary."""

    config: RunConfig
    oracle: SpectrumReference
    picks: tuple
    results: dict
    dipole_tables: dict
    oracle_moments: tuple
    summary: dict
    files: tuple
    ok: bool

    def states(self, method):
        return [r.state for r in self.results[method]]


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def _write_aligned(path, rows, heading=None):
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    with open(path, "w", encoding="ascii") as handle:
        if heading:
            handle.write(f"# {heading}\n")
        for r in rows:
            handle.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
            handle.write("\n")


def _write_energy_table(out, method, labels, computed, reference, converged):
    logs = [log_error(e, ref) for e, ref in zip(computed, reference)]
    rows = [
        (lab, _g17(e), _g17(ref), _g17(abs(e - ref)), format_log_error(lg), str(bool(c)))
        for lab, e, ref, lg, c in zip(labels, computed, reference, logs, converged)
    ]
    csv_path = out / f"energies_{method}.csv"
    _write_rows(
        csv_path,
        ("state", "energy", "reference", "abs_error", "log_error", "converged"),
        rows,
    )
    txt_rows = [("state", "energy", "reference", "log_error", "converged")]
    for lab, e, ref, lg, c in zip(labels, computed, reference, logs, converged):
        txt_rows.append((lab, f"{e:.6f}", f"{ref:.6f}", format_log_error(lg), str(bool(c))))
    txt_path = out / f"energies_{method}.txt"
    _write_aligned(txt_path, txt_rows, f"energies (hartree), method={method}")
    return [csv_path, txt_path], logs


def _matrix_text_rows(labels, value_of, mark_of):
    m = len(labels)
    rows = [("state",) + tuple(labels)]
    for j in range(m):
        cells = []
        for k in range(m):
            if k < j:
                cells.append("---")
            elif k == j:
                cells.append("0")
            else:
                cells.append(f"{value_of(j, k):.4e}{mark_of(j, k)}")
        rows.append((labels[j],) + tuple(cells))
    return rows


def _write_dipole_table(out, name, labels, table: TransitionMatrix):
    rows = []
    for (j, k), cell in sorted(table.cells.items()):
        rows.append(
            (
                j,
                k,
                labels[j],
                labels[k],
                _g17(cell.magnitude),
                str(bool(cell.converged)),
                str(bool(cell.degenerate)),
                _g17(cell.h_const),
            )
        )
    csv_path = out / f"dipole_{name}.csv"
    _write_rows(
        csv_path,
        ("j", "k", "state_j", "state_k", "magnitude", "converged", "degenerate", "h_const"),
        rows,
    )

    def mark(j, k):
        cell = table.cell(j, k)
        text = "" if cell.converged else "*"
        return text + ("^" if cell.degenerate else "")

    txt_path = out / f"dipole_{name}.txt"
    _write_aligned(
        txt_path,
        _matrix_text_rows(labels, table.value, mark),
        f"transition dipole magnitudes ({table.units}), method={name}"
        " [* unconverged, ^ degenerate pair]",
    )
    return [csv_path, txt_path]


def _write_oracle_dipoles(out, labels, picks, moments):
    rows = []
    txt_values = {}
    for a in range(len(picks)):
        for b in range(a + 1, len(picks)):
            parts = [m.pair(picks[a], picks[b]) for m in moments]
            value = math.sqrt(sum(v * v for v, _ in parts))
            degenerate = any(flag for _, flag in parts)
            rows.append((a, b, labels[a], labels[b], _g17(value), str(degenerate)))
            txt_values[(a, b)] = (value, degenerate)
    csv_path = out / "dipole_oracle.csv"
    _write_rows(csv_path, ("j", "k", "state_j", "state_k", "magnitude", "degenerate"), rows)
    txt_path = out / "dipole_oracle.txt"
    _write_aligned(
        txt_path,
        _matrix_text_rows(
            labels,
            lambda j, k: txt_values[(j, k) if j < k else (k, j)][0],
            lambda j, k: "^" if txt_values[(j, k) if j < k else (k, j)][1] else "",
        ),
        f"exact transition dipole magnitudes ({moments[0].units})"
        " [^ involves a degenerate cluster: block Frobenius norm]",
    )
    return [csv_path, txt_path]


def _write_hconst_table(out, labels, table: TransitionMatrix):
    pairs = sorted(table.cells)
    rows = [
        (j, k, labels[j], labels[k], _g17(table.cells[(j, k)].h_const)) for j, k in pairs
    ]
    csv_path = out / "hconst_fsc.csv"
    _write_rows(csv_path, ("j", "k", "state_j", "state_k", "h_const"), rows)
    txt_rows = [
        ("(i, j)",) + tuple(f"({j + 1},{k + 1})" for j, k in pairs),
        ("H_const",) + tuple(f"{table.cells[p].h_const:.2e}" for p in pairs),
    ]
    txt_path = out / "hconst_fsc.txt"
    _write_aligned(txt_path, txt_rows, "transit energy mismatch (hartree), method=fsc")
    return [csv_path, txt_path]


def _dipole_summary(table: TransitionMatrix):
    return {
        "units": table.units,
        "cells": [
            {
                "j": j,
                "k": k,
                "magnitude": float(cell.magnitude),
                "converged": bool(cell.converged),
                "degenerate": bool(cell.degenerate),
                "h_const": float(cell.h_const),
            }
            for (j, k), cell in sorted(table.cells.items())
        ],
    }


def run(config: RunConfig) -> ReportBundle:
    n_qubits = validate_config(config)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    trace_dir = out / "traces"

    operators = {k: load_pauli_file(p) for k, p in config.operator_paths.items()}
    h = operators["hamiltonian"]
    dipoles = tuple(operators[f"dipole_{ax}"] for ax in DIPOLE_AXES)
    sym_ops = (operators["number"], operators["sz"], operators["s2"])

    oracle = diagonalize(h)
    picks = match_states(oracle, config.states)
    oracle_energies = [float(oracle.eigenvalues[i]) for i in picks]
    labels = [s.label for s in config.states]

    ne = electron_count(config.states)
    gens = uccsd_generators(n_qubits, ne)
    refs = [reference_state(s, n_qubits) for s in config.states]

    files = []
    results = {}
    dipole_tables = {}
    summary = {
        "config": {
            "methods": list(config.methods),
            "uccsd_depth": config.uccsd_depth,
            "ham_depth": config.ham_depth,
            "fsc_depth": config.fsc_depth,
            "fsc_n": config.fsc_n,
            "penalty_weight": config.penalty_weight,
            "restarts": config.optimizer.restarts,
            "seed": config.optimizer.seed,
            "states": [
                {
                    "label": s.label,
                    "reference": s.reference,
                    "sector": [s.sector_n, s.sector_sz, s.sector_s2],
                }
                for s in config.states
            ],
        },
        "oracle": {
            "picks": list(picks),
            "energies": oracle_energies,
            "degenerate": [bool(oracle.is_degenerate(i)) for i in picks],
        },
        "energies": {},
        "dipole": {},
    }
    ok = True

    if "vqd" in config.methods:
        trace_dir.mkdir(parents=True, exist_ok=True)
        targets = [
            StateTarget(ref, sector_penalties(sym_ops, s, config.penalty_weight), s.label)
            for s, ref in zip(config.states, refs)
        ]
        spec = make_ansatz_spec(h, gens, config.uccsd_depth, config.ham_depth)
        found = solve_spectrum(h, spec, targets, config.optimizer, trace_dir=trace_dir)
        by_label = {r.label: r for r in found}
        results["vqd"] = [by_label[lab] for lab in labels]

    if "ssvqe" in config.methods:
        trace_dir.mkdir(parents=True, exist_ok=True)
        spec = make_ansatz_spec(
            h, sz_preserving_subset(gens, n_qubits), config.uccsd_depth, config.ham_depth
        )
        weights = [float(2 ** (len(refs) - 1 - i)) for i in range(len(refs))]
        results["ssvqe"] = list(
            ssvqe(h, spec, refs, weights, config.optimizer, trace_path=trace_dir / "ssvqe.csv")
        )

    for method in ("vqd", "ssvqe"):
        if method not in results:
            continue
        solved = results[method]
        computed = [r.energy for r in solved]
        converged = [r.converged for r in solved]
        ok = ok and all(converged)
        paths, logs = _write_energy_table(
            out, method, labels, computed, oracle_energies, converged
        )
        files.extend(paths)
        summary["energies"][method] = {
            "labels": labels,
            "computed": computed,
            "reference": oracle_energies,
            "log_error": [format_log_error(lg) for lg in logs],
            "converged": [bool(c) for c in converged],
        }

    groups = [("dipole", dipoles)]
    if "direct" in config.methods:
        for method in ("vqd", "ssvqe"):
            if method not in results:
                continue
            states = [r.state for r in results[method]]
            energies = [r.energy for r in results[method]]
            table = transition_matrix(states, energies, groups, "direct")[0]
            dipole_tables[method] = table
            files.extend(_write_dipole_table(out, method, labels, table))
            summary["dipole"][method] = _dipole_summary(table)

    if "fsc" in config.methods:
        states = [r.state for r in results["vqd"]]
        energies = [r.energy for r in results["vqd"]]
        body = AnsatzSpec(config.fsc_depth, 0, gens, ())
        pm_body = make_ansatz_spec(h, gens, config.fsc_depth, FSC_PM_HAM_DEPTH)
        table = transition_matrix(
            states,
            energies,
            groups,
            "fsc",
            hamiltonian=h,
            config=config.optimizer,
            body_spec=body,
            pm_body_spec=pm_body,
            n=config.fsc_n,
        )[0]
        dipole_tables["fsc"] = table
        ok = ok and all(cell.converged for cell in table.cells.values())
        files.extend(_write_dipole_table(out, "fsc", labels, table))
        files.extend(_write_hconst_table(out, labels, table))
        summary["dipole"]["fsc"] = _dipole_summary(table)
        summary["hconst"] = {
            "pairs": [
                {"j": j, "k": k, "value": float(cell.h_const)}
                for (j, k), cell in sorted(table.cells.items())
            ]
        }

    oracle_moments = tuple(exact_transition_moments(oracle, d, picks) for d in dipoles)
    if "oracle" in config.methods:
        spectrum_path = out / "spectrum_oracle.csv"
        write_spectrum_csv(oracle, spectrum_path)
        files.append(spectrum_path)
        files.extend(_write_oracle_dipoles(out, labels, picks, oracle_moments))
        cells = []
        for a in range(len(picks)):
            for b in range(a + 1, len(picks)):
                parts = [m.pair(picks[a], picks[b]) for m in oracle_moments]
                cells.append(
                    {
                        "j": a,
                        "k": b,
                        "magnitude": math.sqrt(sum(v * v for v, _ in parts)),
                        "degenerate": bool(any(flag for _, flag in parts)),
                    }
                )
        summary["dipole"]["oracle"] = {"units": oracle_moments[0].units, "cells": cells}

    summary["ok"] = bool(ok)
    summary_path = out / "summary.json"
    summary_path.write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="ascii"
    )
    files.append(summary_path)

    return ReportBundle(
        config,
        oracle,
        picks,
        results,
        dipole_tables,
        oracle_moments,
        summary,
        tuple(files),
        ok,
    )
