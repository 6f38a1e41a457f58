"""Trained transit operators and off-diagonal observable extraction.

A transit operator U is a parameterized circuit whose n-th power maps one
prepared state onto another. Half-applications then build the two equal
superpositions |+> and |y+>, and diagonal expectations on those recover
the off-diagonal matrix element of any Hermitian observable:

    a = <+|O|+> - (O_jj + O_kk)/2        (real part)
    b = <y+|O|y+> - (O_jj + O_kk)/2      (minus the imaginary part)

Only sqrt(a^2 + b^2) is physical; the signs depend on internal phase
conventions, which the second-stage training pins so that
|y+> = (|Phi_j> + i|Phi_k>)/sqrt(2) up to a global phase.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzSpec, build, make_ansatz_spec, prepare
from .optimize import OptimizerConfig, minimize_function
from .pauli import PauliSum
from .statevector import (
    StateVector,
    expectation,
    from_amplitudes,
    inner_product,
    matrix_element,
)

FIDELITY_FLOOR = 0.999
H_CONST_CEILING = 1e-4
DEGENERACY_TOL = 1e-6

# Realizes the hard transit constraint as a penalty. The a-term of F gains
# linearly from midpoint imbalance (slope = level gap) while the pinning
# costs quadratically, leaving residual infidelity (gap / 4 beta)^2 at the
# equilibrium; 1000 keeps H_const two orders below its ceiling for gaps
# up to a few Hartree.
DEFAULT_PINNING_WEIGHT = 1000.0

FSC_UCCSD_DEPTH = 4
FSC_HAM_DEPTH = 0
FSC_PM_HAM_DEPTH = 1


def fsc_body_spec(generator_set) -> AnsatzSpec:
    """Circuit family for eigenstate transits: excitation blocks only."""
    return AnsatzSpec(FSC_UCCSD_DEPTH, FSC_HAM_DEPTH, generator_set, ())


def fsc_pm_body_spec(hamiltonian, generator_set) -> AnsatzSpec:
    """Circuit family for the second transit, |+> to |->.

    Every excitation word carries an odd Y count, so pure excitation
    circuits are real orthogonal and can never produce the relative
    phase i that |y+> requires; one Hamiltonian-word propagator layer
    (even Y counts) supplies the complex freedom.
    """
    return make_ansatz_spec(hamiltonian, generator_set, FSC_UCCSD_DEPTH, FSC_PM_HAM_DEPTH)


@dataclass(frozen=True)
class FscOperator:
    """A trained transit circuit with its quality diagnostics.

    j and k index the state list the operator was trained on; -1 marks
    the superposition-to-superposition stage where indices do not apply.
    """

    circuit: object
    n: int
    j: int
    k: int
    fidelity: float
    h_const: float
    converged: bool

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("transit power n must be an even integer >= 2")

    def apply_power(self, state: StateVector, power) -> StateVector:
        out = state
        for _ in range(power):
            out = prepare(self.circuit, out)
        return out

    def half_apply(self, state: StateVector) -> StateVector:
        return self.apply_power(state, self.n // 2)

    def full_apply(self, state: StateVector) -> StateVector:
        return self.apply_power(state, self.n)


@dataclass(frozen=True)
class SuperpositionPair:
    plus: StateVector
    yplus: StateVector
    j: int
    k: int
    converged: bool = True

    def __post_init__(self):
        for state in (self.plus, self.yplus):
            if abs(state.norm() - 1.0) > 1e-10:
                raise ValueError("superposition states must stay normalized")


@dataclass(frozen=True)
class OffDiagonalResult:
    a: float
    b: float
    magnitude: float
    h_const: float
    label: str
    units: str
    converged: bool = True
    degenerate: bool = False


def offdiagonal_result(a, b, h_const, label, units, converged=True, degenerate=False):
    a = float(a)
    b = float(b)
    return OffDiagonalResult(
        a, b, math.sqrt(a * a + b * b), float(h_const), label, units, converged, degenerate
    )


def minus_state(plus: StateVector, state_j: StateVector, state_k: StateVector) -> StateVector:
    """Orthogonal complement of |+> inside span{Phi_j, Phi_k}.

    Simulator privilege: the physical route would need a third transit
    operator, but the complement is fully determined by the amplitudes.
    The gauge inherits both coefficient phases from |+> itself, so the
    analytic target (|+> - i|->)/sqrt2 stays the canonical extraction
    state no matter what global phases the prepared pair carries; tying
    it to one state's coefficient instead would leak that state's
    arbitrary phase into the relative phase of the target.
    """
    pj = inner_product(state_j, plus)
    pk = inner_product(state_k, plus)
    amps = np.conj(pk) * state_j.amplitudes - np.conj(pj) * state_k.amplitudes
    nrm = np.linalg.norm(amps)
    if nrm < 1e-12:
        raise ValueError("plus state has no support on the given pair")
    amps = amps / nrm
    if min(abs(pj), abs(pk)) > 1e-9:
        # coefficient of Phi_j carries arg(pj), coefficient of Phi_k arg(pk)
        phase = (pj / abs(pj)) * (pk / abs(pk))
    elif abs(pk) >= abs(pj):
        phase = pk / abs(pk)
    else:
        phase = pj / abs(pj)
    return from_amplitudes(amps * phase, plus.n_qubits)


def analytic_pair(state_j, state_k, j=0, k=1) -> SuperpositionPair:
    """Build |+> and |y+> directly from amplitudes.

    Normalization absorbs residual nonorthogonality of variationally
    prepared input pairs; for exact eigenstates it is a no-op.
    """
    plus = state_j.amplitudes + state_k.amplitudes
    yplus = state_j.amplitudes + 1j * state_k.amplitudes
    plus = plus / np.linalg.norm(plus)
    yplus = yplus / np.linalg.norm(yplus)
    n = state_j.n_qubits
    return SuperpositionPair(from_amplitudes(plus, n), from_amplitudes(yplus, n), j, k)


def fsc_transfer_objective(op: FscOperator, states, hamiltonian, observable=None):
    """The literal training functional F = a + b + H_const.

    a and b are evaluated against a provisional y-state built from the
    target states; the observable defaults to the Hamiltonian.
    """
    if not 0 <= op.j < len(states) or not 0 <= op.k < len(states):
        raise IndexError("state index out of range")
    obs = hamiltonian if observable is None else observable
    state_j = states[op.j]
    state_k = states[op.k]
    plus = op.half_apply(state_j)
    transported = op.half_apply(plus)
    e_kk = expectation(state_k, hamiltonian)
    h_const = abs(e_kk - expectation(transported, hamiltonian))
    y_amps = state_j.amplitudes + 1j * state_k.amplitudes
    y_prov = from_amplitudes(y_amps / np.linalg.norm(y_amps), state_j.n_qubits)
    pair = SuperpositionPair(plus, y_prov, op.j, op.k)
    res = extract_offdiagonal(
        pair, obs, expectation(state_j, obs), expectation(state_k, obs), h_const
    )
    return res.a + res.b + h_const


def optimize_fsc(
    j, k, states, hamiltonian, config: OptimizerConfig, body_spec, n=2,
    pinning_weight=DEFAULT_PINNING_WEIGHT,
) -> FscOperator:
    """Train U so U^n maps states[j] onto states[k].

    The search objective is F plus two stiff pinning terms: transit
    fidelity onto the target, and span confinement of the half-way
    superposition. F itself carries no phase reference when the pair are
    eigenstates, so the pinning terms are what make the optimum an
    actual transit.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError("transit power n must be an even integer >= 2")
    if not 0 <= j < len(states) or not 0 <= k < len(states):
        raise IndexError("state index out of range")
    state_j = states[j]
    state_k = states[k]
    if j == k:
        circuit = build(body_spec)
        return FscOperator(circuit, n, j, k, 1.0, 0.0, True)
    beta = float(pinning_weight)
    e_jj = expectation(state_j, hamiltonian)
    e_kk = expectation(state_k, hamiltonian)
    mean = 0.5 * (e_jj + e_kk)
    # the provisional y-state is theta-independent, so b enters F as a constant
    y_prov = analytic_pair(state_j, state_k, j, k).yplus
    b_prov = expectation(y_prov, hamiltonian) - mean
    half = n // 2
    base = build(body_spec)

    def objective(theta):
        circuit = base.with_theta(theta)
        plus = state_j
        for _ in range(half):
            plus = prepare(circuit, plus)
        transported = plus
        for _ in range(half):
            transported = prepare(circuit, transported)
        h_const = abs(e_kk - expectation(transported, hamiltonian))
        fid = abs(inner_product(state_k, transported)) ** 2
        confinement = (
            abs(inner_product(state_j, plus)) ** 2 + abs(inner_product(state_k, plus)) ** 2
        )
        a = expectation(plus, hamiltonian) - mean
        f_value = a + b_prov + h_const
        return f_value + beta * (1.0 - fid) + beta * (1.0 - confinement)

    outcome = minimize_function(objective, body_spec.n_parameters, config)
    op = FscOperator(base.with_theta(outcome.theta), n, j, k, 0.0, 0.0, False)
    transported = op.full_apply(state_j)
    fidelity = abs(inner_product(state_k, transported)) ** 2
    h_const = abs(e_kk - expectation(transported, hamiltonian))
    converged = fidelity >= FIDELITY_FLOOR and h_const <= H_CONST_CEILING
    return FscOperator(op.circuit, n, j, k, fidelity, h_const, converged)


def optimize_plus_minus(plus, minus, hamiltonian, config: OptimizerConfig, body_spec, n=2) -> FscOperator:
    """Train the second transit |+> -> |-> and pin its half-way phase.

    The half application must equal (|+> - i|->)/sqrt(2), which unwinds to
    |y+> = (Phi_j + i Phi_k)/sqrt(2) up to a global phase. Trained on pure
    fidelities; adding the a + b drive here would bias the extraction.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError("transit power n must be an even integer >= 2")
    half = n // 2
    y_target = from_amplitudes(
        (plus.amplitudes - 1j * minus.amplitudes) / math.sqrt(2.0), plus.n_qubits
    )
    base = build(body_spec)

    def objective(theta):
        circuit = base.with_theta(theta)
        mid = plus
        for _ in range(half):
            mid = prepare(circuit, mid)
        out = mid
        for _ in range(half):
            out = prepare(circuit, out)
        loss_mid = 1.0 - abs(inner_product(y_target, mid)) ** 2
        loss_out = 1.0 - abs(inner_product(minus, out)) ** 2
        return loss_mid + loss_out

    outcome = minimize_function(objective, body_spec.n_parameters, config)
    op = FscOperator(base.with_theta(outcome.theta), n, -1, -1, 0.0, 0.0, False)
    out = op.full_apply(plus)
    fidelity = abs(inner_product(minus, out)) ** 2
    h_const = abs(expectation(minus, hamiltonian) - expectation(out, hamiltonian))
    converged = fidelity >= FIDELITY_FLOOR and h_const <= H_CONST_CEILING
    return FscOperator(op.circuit, n, -1, -1, fidelity, h_const, converged)


def make_superposition_pair(op_jk: FscOperator, op_pm: FscOperator, states) -> SuperpositionPair:
    plus = op_jk.half_apply(states[op_jk.j])
    yplus = op_pm.half_apply(plus)
    return SuperpositionPair(
        plus, yplus, op_jk.j, op_jk.k, op_jk.converged and op_pm.converged
    )


def extract_offdiagonal(
    pair: SuperpositionPair, observable: PauliSum, o_jj, o_kk, h_const=0.0, label=None
) -> OffDiagonalResult:
    if not observable.is_hermitian():
        raise ValueError("off-diagonal extraction needs a Hermitian observable")
    mean = 0.5 * (float(o_jj) + float(o_kk))
    a = expectation(pair.plus, observable) - mean
    b = expectation(pair.yplus, observable) - mean
    return offdiagonal_result(
        a,
        b,
        h_const,
        observable.label if label is None else label,
        observable.units,
        converged=pair.converged,
    )


def direct_offdiagonal(state_j, state_k, observable: PauliSum) -> OffDiagonalResult:
    """Baseline: the matrix element by direct contraction.

    b carries the same sign convention as the extraction path, so the two
    agree componentwise on analytic pairs, not just in magnitude.
    """
    element = matrix_element(state_j, observable, state_k)
    return offdiagonal_result(
        element.real, -element.imag, 0.0, observable.label, observable.units
    )


@dataclass(frozen=True)
class TransitionCell:
    magnitude: float
    converged: bool
    degenerate: bool
    h_const: float
    components: tuple


@dataclass(frozen=True)
class TransitionMatrix:
    """Strict upper-triangular pair table for one observable group."""

    label: str
    units: str
    size: int
    cells: dict

    def value(self, j, k):
        if j == k:
            return 0.0
        key = (j, k) if j < k else (k, j)
        return self.cells[key].magnitude

    def cell(self, j, k):
        key = (j, k) if j < k else (k, j)
        return self.cells[key]


def transition_matrix(
    states,
    energies,
    observable_groups,
    method,
    hamiltonian=None,
    config=None,
    body_spec=None,
    pm_body_spec=None,
    n=2,
):
    """Fill all strict upper-triangular pairs for every observable group.

    observable_groups is a list of (label, components) where components
    are Hermitian operators sharing units; the cell magnitude is the
    Euclidean norm over per-component magnitudes (one component for
    scalars, three for a dipole vector).
    """
    if method not in ("fsc", "direct"):
        raise ValueError(f"unknown method {method!r}")
    m = len(states)
    if m < 2:
        raise ValueError("need at least two states")
    if method == "fsc" and (hamiltonian is None or config is None or body_spec is None):
        raise ValueError("fsc method needs hamiltonian, config, and body_spec")
    if method == "fsc" and pm_body_spec is None:
        pm_body_spec = fsc_pm_body_spec(hamiltonian, body_spec.generator_set)

    pair_data = {}
    for j in range(m):
        for k in range(j + 1, m):
            if method == "fsc":
                op_jk = optimize_fsc(j, k, states, hamiltonian, config, body_spec, n)
                plus = op_jk.half_apply(states[j])
                minus = minus_state(plus, states[j], states[k])
                op_pm = optimize_plus_minus(plus, minus, hamiltonian, config, pm_body_spec, n)
                pair_data[(j, k)] = make_superposition_pair(op_jk, op_pm, states), op_jk
            else:
                pair_data[(j, k)] = None, None

    matrices = []
    for label, components in observable_groups:
        units = components[0].units
        cells = {}
        for (j, k), (pair, op_jk) in pair_data.items():
            degenerate = abs(energies[j] - energies[k]) < DEGENERACY_TOL
            parts = []
            for comp in components:
                if method == "fsc":
                    parts.append(
                        extract_offdiagonal(
                            pair,
                            comp,
                            expectation(states[j], comp),
                            expectation(states[k], comp),
                            h_const=op_jk.h_const,
                        )
                    )
                else:
                    parts.append(direct_offdiagonal(states[j], states[k], comp))
            magnitude = math.sqrt(sum(p.magnitude**2 for p in parts))
            converged = all(p.converged for p in parts)
            h_const = max(p.h_const for p in parts)
            cells[(j, k)] = TransitionCell(magnitude, converged, degenerate, h_const, tuple(parts))
        matrices.append(TransitionMatrix(label, units, m, cells))
    return matrices
