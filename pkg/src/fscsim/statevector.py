"""Exact dense statevector simulation.

States are complex vectors of length 2^n with qubit 0 on the most significant
bit: basis index 0b1100 on 4 qubits is |1100>, qubits 0 and 1 occupied.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .pauli import PauliSum, PauliWord

IMAG_RESIDUE_TOL = 1e-10


@dataclass
class StateVector:
    amplitudes: np.ndarray
    n_qubits: int

    def copy(self) -> StateVector:
        return StateVector(self.amplitudes.copy(), self.n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(n_qubits: int, index: int) -> StateVector:
    dim = 2**n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps, n_qubits)


def from_amplitudes(amps, n_qubits: int) -> StateVector:
    amps = np.asarray(amps, dtype=np.complex128)
    if amps.shape != (2**n_qubits,):
        raise ValueError("amplitude vector length does not match qubit count")
    return StateVector(amps.copy(), n_qubits)


@dataclass(frozen=True)
class CompiledSum:
    """Pauli sum flattened to parallel arrays for the kernels."""

    flips: np.ndarray
    signs: np.ndarray
    phases: np.ndarray
    coeffs: np.ndarray


@lru_cache(maxsize=512)
def compile_sum(o: PauliSum) -> CompiledSum:
    n = o.n_terms
    flips = np.zeros(n, dtype=np.int64)
    signs = np.zeros(n, dtype=np.int64)
    phases = np.zeros(n, dtype=np.complex128)
    coeffs = np.zeros(n, dtype=np.complex128)
    for t, term in enumerate(o.terms):
        flips[t], signs[t], phases[t] = term.word.masks()
        coeffs[t] = term.coefficient
    return CompiledSum(flips, signs, phases, coeffs)


def apply_pauli_rotation(s: StateVector, w: PauliWord, theta: float) -> StateVector:
    """exp(-i theta/2 w)|s> as a new state."""
    if w.n_qubits != s.n_qubits:
        raise ValueError(f"word on {w.n_qubits} qubits, state on {s.n_qubits}")
    out = s.copy()
    flip, sign, phase = w.masks()
    kernels.apply_rotation(out.amplitudes, flip, sign, phase, float(theta))
    return out


def expectation(s: StateVector, o: PauliSum) -> float:
    """<s|o|s> for Hermitian o; the imaginary residue is checked, then dropped."""
    if o.n_qubits != s.n_qubits:
        raise ValueError(f"operator on {o.n_qubits} qubits, state on {s.n_qubits}")
    if not o.is_hermitian():
        raise ValueError("expectation requires a Hermitian operator")
    c = compile_sum(o)
    val = complex(kernels.expect_terms(s.amplitudes, c.flips, c.signs, c.phases, c.coeffs))
    assert abs(val.imag) <= IMAG_RESIDUE_TOL * max(1.0, abs(val.real))
    return float(val.real)


def matrix_element(a: StateVector, o: PauliSum, b: StateVector) -> complex:
    """<a|o|b> for any Pauli sum; complex in general."""
    if o.n_qubits != a.n_qubits or a.n_qubits != b.n_qubits:
        raise ValueError("size mismatch in matrix element")
    c = compile_sum(o)
    idx = np.arange(b.amplitudes.size, dtype=np.int64)
    total = 0.0 + 0.0j
    for t in range(c.coeffs.size):
        perm = idx ^ c.flips[t]
        par = 1.0 - 2.0 * _fold(perm & c.signs[t])
        total += c.coeffs[t] * c.phases[t] * np.vdot(a.amplitudes, par * b.amplitudes[perm])
    return complex(total)


def _fold(x):
    x = x.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> shift
    return x & 1


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with the left argument conjugated."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return complex(np.vdot(a.amplitudes, b.amplitudes))
