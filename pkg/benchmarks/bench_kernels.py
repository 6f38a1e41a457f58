"""Timing comparison of the two kernel backends.

The backend is chosen once at import, so this script re-executes itself in
a subprocess per backend (FSCSIM_BACKEND=numba / numpy) and merges the
timings into one table. Workloads mirror the hot paths: whole-circuit
application and operator expectation on dense amplitude vectors.

Usage: python3 benchmarks/bench_kernels.py [--qubits 4 8 10 12] [--repeats 7]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

import numpy as np

ROTATIONS = 200
TERMS = 15


def random_words(rng, n_qubits, count):
    dim_mask = (1 << n_qubits) - 1
    flips = rng.integers(0, dim_mask + 1, size=count, dtype=np.int64)
    signs = rng.integers(0, dim_mask + 1, size=count, dtype=np.int64)
    phases = (1j ** rng.integers(0, 4, size=count)).astype(np.complex128)
    return flips, signs, phases


def bench_backend(qubits, repeats):
    from fscsim import kernels

    rng = np.random.default_rng(2024)
    rows = []
    for n in qubits:
        dim = 1 << n
        amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        amps /= np.linalg.norm(amps)
        amps = amps.astype(np.complex128)

        flips, signs, phases = random_words(rng, n, ROTATIONS)
        angles = rng.uniform(-0.5, 0.5, size=ROTATIONS)
        tf, ts, tp = random_words(rng, n, TERMS)
        coeffs = rng.normal(size=TERMS).astype(np.complex128)

        # warm pass also triggers jit compilation when active
        kernels.apply_circuit(amps.copy(), flips, signs, phases, angles)
        kernels.expect_terms(amps, tf, ts, tp, coeffs)

        circuit_times = []
        expect_times = []
        for _ in range(repeats):
            work = amps.copy()
            t0 = time.perf_counter()
            kernels.apply_circuit(work, flips, signs, phases, angles)
            circuit_times.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            kernels.expect_terms(amps, tf, ts, tp, coeffs)
            expect_times.append(time.perf_counter() - t0)
        rows.append(
            {
                "qubits": n,
                "circuit_ms": statistics.median(circuit_times) * 1e3,
                "expect_ms": statistics.median(expect_times) * 1e3,
            }
        )
    return {"backend": kernels.backend(), "rows": rows}


def run_child(backend, args):
    env = dict(os.environ, FSCSIM_BACKEND=backend)
    cmd = [
        sys.executable,
        os.path.abspath(__file__),
        "--worker",
        "--qubits",
        *[str(q) for q in args.qubits],
        "--repeats",
        str(args.repeats),
    ]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise RuntimeError(f"{backend} worker failed")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[4, 8, 10, 12])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(bench_backend(args.qubits, args.repeats)))
        return

    reports = {}
    for backend in ("numba", "numpy"):
        try:
            reports[backend] = run_child(backend, args)
        except (RuntimeError, ImportError) as exc:
            print(f"skipping {backend}: {exc}")
    if len(reports) < 2:
        return

    print(f"{ROTATIONS}-rotation circuit and {TERMS}-term expectation, median ms")
    header = f"{'qubits':>6} {'circuit numba':>14} {'circuit numpy':>14} {'speedup':>8}" \
             f" {'expect numba':>14} {'expect numpy':>14} {'speedup':>8}"
    print(header)
    for row_nb, row_np in zip(reports["numba"]["rows"], reports["numpy"]["rows"]):
        assert row_nb["qubits"] == row_np["qubits"]
        c_ratio = row_np["circuit_ms"] / row_nb["circuit_ms"]
        e_ratio = row_np["expect_ms"] / row_nb["expect_ms"]
        print(
            f"{row_nb['qubits']:>6}"
            f" {row_nb['circuit_ms']:>14.3f} {row_np['circuit_ms']:>14.3f} {c_ratio:>7.1f}x"
            f" {row_nb['expect_ms']:>14.3f} {row_np['expect_ms']:>14.3f} {e_ratio:>7.1f}x"
        )


if __name__ == "__main__":
    main()
