import numpy as np
import pytest
from conftest import FIXTURES

from fscsim.ansatz import AnsatzSpec, make_ansatz_spec
from fscsim.fermion import (
    GeneratorSet,
    hartree_fock_index,
    symmetry_operators,
    sz_preserving_subset,
    uccsd_generators,
)
from fscsim.optimize import OptimizerConfig
from fscsim.pauli import PauliSum, dense_matrix, load_pauli_file
from fscsim.statevector import basis_state, expectation, inner_product
from fscsim.vqe import (
    DeflationTerm,
    StateTarget,
    SymmetryPenalty,
    VqeProblem,
    deflation_weight,
    minimize,
    objective,
    solve_spectrum,
    ssvqe,
)

RNG = np.random.default_rng(417)

H2 = load_pauli_file(FIXTURES / "h2" / "hamiltonian.txt")
GENS_42 = uccsd_generators(4, 2)
SPEC_H2 = make_ansatz_spec(H2, GENS_42, 2, 2)
HF_H2 = basis_state(4, hartree_fock_index(4, 2))

# independently frozen exact eigenvalues of the h2 fixture (Sz=0 block)
H2_LEVELS = (
    -1.1361894507164871,
    -0.4784529854285112,
    -0.1204518386629672,
    0.5833142366157202,
)

PENALTY_WEIGHT = 10000.0


def h2_penalties(s2_target):
    n_op, sz_op, s2_op = symmetry_operators(4)
    return (
        SymmetryPenalty(n_op, 2.0, PENALTY_WEIGHT),
        SymmetryPenalty(sz_op, 0.0, PENALTY_WEIGHT),
        SymmetryPenalty(s2_op, s2_target, PENALTY_WEIGHT),
        SymmetryPenalty(n_op * n_op, 4.0, PENALTY_WEIGHT),
        SymmetryPenalty(sz_op * sz_op, 0.0, PENALTY_WEIGHT),
    )


# --------------------------------------------------------------- objective


def test_objective_matches_dense_matrix():
    gens = GeneratorSet(
        (
            PauliSum.from_terms(2, [(-0.5j, "XI")]),
            PauliSum.from_terms(2, [(-0.5j, "YZ")]),
        ),
        ("g0", "g1"),
    )
    spec = AnsatzSpec(2, 0, gens, ())
    ham = PauliSum.from_terms(
        2, [(0.3, "ZI"), (-0.7, "XX"), (0.2, "YY"), (0.1, "II")]
    )
    dense = dense_matrix(ham)
    other = basis_state(2, 2)
    pen_op = PauliSum.from_terms(2, [(1.0, "ZZ")])
    problem = VqeProblem(
        ham,
        spec,
        basis_state(2, 0),
        deflation=(DeflationTerm(other, 3.5),),
        penalties=(SymmetryPenalty(pen_op, 1.0, 2.0),),
    )
    for _ in range(10):
        theta = RNG.uniform(-2.0, 2.0, size=problem.n_parameters)
        psi = problem.prepared(theta)
        expected = np.vdot(psi.amplitudes, dense @ psi.amplitudes).real
        expected += 3.5 * abs(inner_product(other, psi)) ** 2
        expected += 2.0 * (expectation(psi, pen_op) - 1.0) ** 2
        assert objective(problem, theta) == pytest.approx(expected, abs=1e-10)


def test_objective_shape_check():
    problem = VqeProblem(H2, SPEC_H2, HF_H2)
    with pytest.raises(ValueError):
        objective(problem, np.zeros(3))


def test_problem_validation():
    bad = PauliSum.from_terms(4, [(1.0j, "XIII")])
    with pytest.raises(ValueError):
        VqeProblem(bad, SPEC_H2, HF_H2)
    with pytest.raises(ValueError):
        VqeProblem(H2, SPEC_H2, basis_state(3, 0))


def test_variational_bound():
    # energy expectation can never undershoot the lowest eigenvalue
    ham = PauliSum.from_terms(
        2, [(RNG.normal(), w) for w in ("ZI", "IZ", "XX", "YY", "ZZ", "XY")]
    )
    lam_min = np.linalg.eigvalsh(dense_matrix(ham))[0]
    gens = GeneratorSet((PauliSum.from_terms(2, [(-0.5j, "XY")]),), ("g",))
    problem = VqeProblem(ham, AnsatzSpec(3, 0, gens, ()), basis_state(2, 1))
    for _ in range(25):
        theta = RNG.uniform(-3.0, 3.0, size=problem.n_parameters)
        assert objective(problem, theta) >= lam_min - 1e-10


def test_deflation_weight_bounds_spectral_range():
    dense = dense_matrix(H2)
    evals = np.linalg.eigvalsh(dense)
    assert deflation_weight(H2) >= evals[-1] - evals[0]


# ---------------------------------------------------------------- minimize


def test_single_qubit_rotation_floor():
    # <Z> = cos(theta) from |0>; zero start is a stationary point, so
    # this doubles as a restart-rescue check on a real circuit
    gens = GeneratorSet((PauliSum.from_terms(1, [(-0.5j, "X")]),), ("x",))
    problem = VqeProblem(
        PauliSum.from_terms(1, [(1.0, "Z")]),
        AnsatzSpec(1, 0, gens, ()),
        basis_state(1, 0),
    )
    result = minimize(problem, OptimizerConfig(restarts=3))
    assert result.energy == pytest.approx(-1.0, abs=1e-6)
    assert result.converged


def test_h2_ground_state():
    problem = VqeProblem(H2, SPEC_H2, HF_H2)
    result = minimize(problem, OptimizerConfig(restarts=2))
    assert abs(result.energy - H2_LEVELS[0]) <= 1e-6
    assert result.converged
    assert result.state.norm() == pytest.approx(1.0, abs=1e-10)


def test_penalty_steers_to_triplet():
    # an S^2 = 2 penalty retargets the search away from the singlet floor
    problem = VqeProblem(H2, SPEC_H2, HF_H2, penalties=h2_penalties(2.0))
    result = minimize(problem, OptimizerConfig(restarts=2))
    assert abs(result.energy - H2_LEVELS[1]) <= 1e-4
    assert max(abs(r) for r in result.penalty_residuals) <= 1e-3


def test_trace_file(tmp_path):
    problem = VqeProblem(H2, SPEC_H2, HF_H2)
    path = tmp_path / "vqe.csv"
    minimize(problem, OptimizerConfig(restarts=0), trace_path=path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "iteration,objective,gradient_norm"
    assert len(lines) > 2


# -------------------------------------------------------------------- vqd


def test_vqd_ground_plus_triplet():
    targets = [
        StateTarget(HF_H2, h2_penalties(0.0), "ground"),
        StateTarget(HF_H2, h2_penalties(2.0), "triplet"),
    ]
    results = solve_spectrum(H2, SPEC_H2, targets, OptimizerConfig(restarts=2))
    assert [r.label for r in results] == ["ground", "triplet"]
    assert abs(results[0].energy - H2_LEVELS[0]) <= 1e-4
    assert abs(results[1].energy - H2_LEVELS[1]) <= 1e-4
    overlap = abs(inner_product(results[0].state, results[1].state)) ** 2
    assert overlap <= 1e-6
    assert results[1].overlap_residuals[0] <= 1e-6


def test_deflation_blocks_collapse():
    # without deflation the second pass would fall back to the ground
    # state; with it the overlap penalty forces a different state
    plain = minimize(VqeProblem(H2, SPEC_H2, HF_H2), OptimizerConfig(restarts=1))
    beta = deflation_weight(H2)
    deflated = minimize(
        VqeProblem(H2, SPEC_H2, HF_H2, deflation=(DeflationTerm(plain.state, beta),)),
        OptimizerConfig(restarts=1),
    )
    assert deflated.energy > plain.energy + 0.1
    assert abs(inner_product(plain.state, deflated.state)) ** 2 <= 1e-6


# ------------------------------------------------------------------ ssvqe


def test_ssvqe_single_reference_matches_vqe():
    cfg = OptimizerConfig(restarts=1)
    alone = minimize(VqeProblem(H2, SPEC_H2, HF_H2), cfg)
    shared = ssvqe(H2, SPEC_H2, [HF_H2], [1.0], cfg)
    assert len(shared) == 1
    assert shared[0].energy == pytest.approx(alone.energy, abs=1e-12)


def test_ssvqe_h2_level_set():
    gens = sz_preserving_subset(GENS_42, 4)
    spec = make_ansatz_spec(H2, gens, 2, 2)
    refs = [basis_state(4, b) for b in (0b1100, 0b1001, 0b0110, 0b0011)]
    results = ssvqe(H2, spec, refs, (8.0, 4.0, 2.0, 1.0), OptimizerConfig(restarts=2))
    energies = sorted(r.energy for r in results)
    for got, want in zip(energies, H2_LEVELS):
        assert abs(got - want) <= 1e-3
    # shared parameters across all returned states
    for r in results[1:]:
        assert np.array_equal(r.theta, results[0].theta)


def test_ssvqe_validation():
    refs = [basis_state(4, 0b1100), basis_state(4, 0b0011)]
    with pytest.raises(ValueError):
        ssvqe(H2, SPEC_H2, refs, (1.0,), OptimizerConfig())
    with pytest.raises(ValueError):
        ssvqe(H2, SPEC_H2, refs, (1.0, 1.0), OptimizerConfig())
    with pytest.raises(ValueError):
        ssvqe(H2, SPEC_H2, refs, (1.0, -0.5), OptimizerConfig())
    with pytest.raises(ValueError):
        ssvqe(
            H2,
            SPEC_H2,
            [basis_state(4, 0b1100), basis_state(4, 0b1100)],
            (2.0, 1.0),
            OptimizerConfig(),
        )
