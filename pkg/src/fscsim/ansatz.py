"""Parameterized circuits: Trotterized UCCSD layers plus Hamiltonian-word
propagator layers, every rotation carrying its own parameter.

Layer order is fixed: uccsd_depth repetitions of all generator words in
enumeration order, then ham_depth repetitions of the Hamiltonian words in
canonical order. For a generator G = sum_w (i c_w) w the word rotation angle
is -2 c_w theta, so equal parameters across one generator reproduce
first-order Trotter exp(theta G).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .fermion import GeneratorSet
from .pauli import PauliSum, PauliWord
from .statevector import StateVector


@dataclass(frozen=True)
class AnsatzSpec:
    uccsd_depth: int
    ham_depth: int
    generator_set: GeneratorSet
    ham_words: tuple[PauliWord, ...]
    parameter_sharing: str = "per-word"

    def __post_init__(self):
        if self.uccsd_depth < 0 or self.ham_depth < 0:
            raise ValueError("depths must be non-negative")
        if self.parameter_sharing != "per-word":
            raise ValueError(f"unsupported parameter sharing {self.parameter_sharing!r}")
        for w in self.ham_words:
            if w.is_identity:
                raise ValueError("identity words carry only global phase; exclude them")

    @property
    def n_parameters(self) -> int:
        per_gen = sum(g.n_terms for g in self.generator_set.generators)
        return self.uccsd_depth * per_gen + self.ham_depth * len(self.ham_words)


def make_ansatz_spec(
    hamiltonian: PauliSum,
    generator_set: GeneratorSet,
    uccsd_depth: int,
    ham_depth: int,
) -> AnsatzSpec:
    """Spec whose propagator layer carries the non-identity words of H."""
    words = tuple(t.word for t in hamiltonian.terms if not t.word.is_identity)
    return AnsatzSpec(uccsd_depth, ham_depth, generator_set, words)


@dataclass(frozen=True, eq=False)
class AnsatzCircuit:
    """Rotation list (word, parameter index, angle scale) with its parameters."""

    n_qubits: int
    rotations: tuple[tuple[PauliWord, int, float], ...]
    theta: np.ndarray

    def __post_init__(self):
        if any(idx >= self.theta.size for _, idx, _ in self.rotations):
            raise ValueError("rotation parameter index out of range")

    @property
    def n_parameters(self) -> int:
        return int(self.theta.size)

    def with_theta(self, theta) -> AnsatzCircuit:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.n_parameters,):
            raise ValueError(
                f"expected {self.n_parameters} parameters, got shape {theta.shape}"
            )
        return AnsatzCircuit(self.n_qubits, self.rotations, theta.copy())


def build(spec: AnsatzSpec) -> AnsatzCircuit:
    """Circuit for the spec with zeroed parameters."""
    if spec.uccsd_depth > 0 and len(spec.generator_set) == 0:
        raise ValueError("nonzero uccsd_depth with an empty generator set")
    n_qubits = None
    rotations = []
    index = 0
    for _ in range(spec.uccsd_depth):
        for g in spec.generator_set.generators:
            for term in g.terms:
                # anti-Hermitian generator: coefficient = i * c_w with c_w real
                c_w = term.coefficient.imag
                rotations.append((term.word, index, -2.0 * c_w))
                index += 1
                n_qubits = term.word.n_qubits
    for _ in range(spec.ham_depth):
        for w in spec.ham_words:
            rotations.append((w, index, 1.0))
            index += 1
            n_qubits = w.n_qubits
    if n_qubits is None:
        n_qubits = 0
    counts = {w.n_qubits for w, _, _ in rotations}
    if len(counts) > 1:
        raise ValueError(f"mixed qubit counts in ansatz: {sorted(counts)}")
    return AnsatzCircuit(n_qubits, tuple(rotations), np.zeros(index))


@lru_cache(maxsize=128)
def _compile(rotations: tuple) -> tuple:
    n = len(rotations)
    flips = np.zeros(n, dtype=np.int64)
    signs = np.zeros(n, dtype=np.int64)
    phases = np.zeros(n, dtype=np.complex128)
    indices = np.zeros(n, dtype=np.int64)
    scales = np.zeros(n, dtype=np.float64)
    for r, (word, idx, scale) in enumerate(rotations):
        flips[r], signs[r], phases[r] = word.masks()
        indices[r] = idx
        scales[r] = scale
    return flips, signs, phases, indices, scales


def prepare(circuit: AnsatzCircuit, reference: StateVector) -> StateVector:
    """Apply the circuit's rotations in order to the reference state."""
    out = reference.copy()
    if not circuit.rotations:
        return out
    if circuit.n_qubits != reference.n_qubits:
        raise ValueError(
            f"circuit on {circuit.n_qubits} qubits, state on {reference.n_qubits}"
        )
    flips, signs, phases, indices, scales = _compile(circuit.rotations)
    angles = scales * circuit.theta[indices]
    kernels.apply_circuit(out.amplitudes, flips, signs, phases, angles)
    return out
