"""Variational state search: plain VQE, deflated VQD, and subspace search.

The objective is energy plus two optional penalty families: overlap
deflation against previously found states, and quadratic symmetry
penalties (⟨O⟩ − target)². Deflation weights default to twice the sum of
absolute Hamiltonian coefficients, an upper bound on the spectral range,
so no energy gain can pay for collapsing onto an already-found state.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec, build, prepare
from .optimize import OptimizerConfig, minimize_function, write_trace_csv
from .pauli import PauliSum
from .statevector import StateVector, expectation, inner_product


@dataclass(frozen=True)
class SymmetryPenalty:
    operator: PauliSum
    target: float
    weight: float = 1.0


@dataclass(frozen=True)
class DeflationTerm:
    state: StateVector
    beta: float


@dataclass(frozen=True)
class StateTarget:
    """Reference determinant plus the sector penalties for one state."""

    reference: StateVector
    penalties: tuple = ()
    label: str = ""


@dataclass
class VqeProblem:
    hamiltonian: PauliSum
    spec: AnsatzSpec
    reference: StateVector
    deflation: tuple = ()
    penalties: tuple = ()
    circuit: object = field(init=False, repr=False)

    def __post_init__(self):
        if not self.hamiltonian.is_hermitian():
            raise ValueError("hamiltonian must be Hermitian")
        self.circuit = build(self.spec)
        if self.circuit.n_qubits != self.reference.n_qubits:
            raise ValueError("reference qubit count does not match the ansatz")

    @property
    def n_parameters(self):
        return self.spec.n_parameters

    def prepared(self, theta) -> StateVector:
        return prepare(self.circuit.with_theta(np.asarray(theta, dtype=float)), self.reference)


@dataclass(frozen=True)
class VqeResult:
    theta: np.ndarray
    energy: float
    penalty_residuals: tuple
    overlap_residuals: tuple
    trace: tuple
    converged: bool
    objective_value: float
    state: StateVector
    label: str = ""


def deflation_weight(hamiltonian: PauliSum) -> float:
    return 2.0 * hamiltonian.coefficient_norm()


def objective(problem: VqeProblem, theta) -> float:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (problem.n_parameters,):
        raise ValueError(
            f"theta has shape {theta.shape}, expected ({problem.n_parameters},)"
        )
    psi = problem.prepared(theta)
    value = expectation(psi, problem.hamiltonian)
    for term in problem.deflation:
        value += term.beta * abs(inner_product(term.state, psi)) ** 2
    for pen in problem.penalties:
        value += pen.weight * (expectation(psi, pen.operator) - pen.target) ** 2
    return value


def minimize(problem: VqeProblem, config: OptimizerConfig, trace_path=None, label="") -> VqeResult:
    outcome = minimize_function(
        lambda t: objective(problem, t),
        problem.n_parameters,
        config,
        want_trace=trace_path is not None,
    )
    psi = problem.prepared(outcome.theta)
    energy = expectation(psi, problem.hamiltonian)
    penalty_residuals = tuple(
        expectation(psi, pen.operator) - pen.target for pen in problem.penalties
    )
    overlap_residuals = tuple(
        abs(inner_product(term.state, psi)) ** 2 for term in problem.deflation
    )
    if trace_path is not None:
        write_trace_csv(trace_path, outcome.trace)
    return VqeResult(
        outcome.theta,
        energy,
        penalty_residuals,
        overlap_residuals,
        outcome.trace,
        outcome.converged,
        outcome.value,
        psi,
        label,
    )


def solve_spectrum(hamiltonian, spec, targets, config, trace_dir=None):
    """Sequential deflation: state j is penalized against states 0..j-1.

    Returns results sorted by energy; the deflation order follows the
    target list order.
    """
    beta = deflation_weight(hamiltonian)
    found = []
    results = []
    for j, target in enumerate(targets):
        problem = VqeProblem(
            hamiltonian,
            spec,
            target.reference,
            deflation=tuple(DeflationTerm(state, beta) for state in found),
            penalties=tuple(target.penalties),
        )
        trace_path = None
        if trace_dir is not None:
            trace_path = Path(trace_dir) / f"vqd_state{j}.csv"
        result = minimize(problem, config, trace_path=trace_path, label=target.label)
        found.append(result.state)
        results.append(result)
    return sorted(results, key=lambda r: r.energy)


def ssvqe(hamiltonian, spec, references, weights, config, trace_path=None):
    """One shared parameter vector over orthogonal references.

    weights must be strictly decreasing positives; the heaviest weight
    pins the ground state.
    """
    if len(references) != len(weights) or not references:
        raise ValueError("need one weight per reference")
    weights = [float(w) for w in weights]
    if any(w <= 0 for w in weights) or any(
        a <= b for a, b in zip(weights, weights[1:])
    ):
        raise ValueError("weights must be strictly decreasing and positive")
    for i in range(len(references)):
        for j in range(i + 1, len(references)):
            if abs(inner_product(references[i], references[j])) > 1e-10:
                raise ValueError(f"references {i} and {j} are not orthogonal")
    if not hamiltonian.is_hermitian():
        raise ValueError("hamiltonian must be Hermitian")
    circuit = build(spec)

    def weighted_energy(theta):
        bound = circuit.with_theta(np.asarray(theta, dtype=float))
        return sum(
            w * expectation(prepare(bound, ref), hamiltonian)
            for w, ref in zip(weights, references)
        )

    outcome = minimize_function(
        weighted_energy, spec.n_parameters, config, want_trace=trace_path is not None
    )
    if trace_path is not None:
        write_trace_csv(trace_path, outcome.trace)
    bound = circuit.with_theta(outcome.theta)
    results = []
    for ref in references:
        psi = prepare(bound, ref)
        results.append(
            VqeResult(
                outcome.theta,
                expectation(psi, hamiltonian),
                (),
                (),
                outcome.trace,
                outcome.converged,
                outcome.value,
                psi,
            )
        )
    return results
