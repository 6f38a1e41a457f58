import json
import math
from pathlib import Path

import numpy as np
import pytest

from hamgen import cli, qubit, scf, sto3g

# the consumer of these files; imported only to prove the text format
# round-trips through it
from fscsim.pauli import load_pauli_file

RNG = np.random.default_rng(7041)


def h2_molecule(bond=0.7):
    return scf.Molecule(["H", "H"], [[0.0, 0.0, 0.0], [0.0, 0.0, bond]], 0)


def heh_molecule(charge=0):
    return scf.Molecule(["He", "H"], [[0.0, 0.0, 0.0], [0.0, 0.0, 0.7]], charge)


# ---------------------------------------------------------------- integrals


def test_boys_f0_against_quadrature():
    # F0(t) = integral_0^1 exp(-t x^2) dx
    xs = np.linspace(0.0, 1.0, 200001)
    for t in [0.0, 1e-14, 1e-6, 0.1, 1.0, 4.7, 30.0]:
        quad = np.trapezoid(np.exp(-t * xs**2), xs)
        assert abs(sto3g.boys_f0(t) - quad) <= 1e-9


def test_shell_normalization():
    for symbol in ("H", "He"):
        shell = sto3g.Shell(symbol, np.zeros(3))
        assert abs(sto3g.overlap(shell, shell) - 1.0) <= 1e-12


def test_overlap_decay():
    a = sto3g.Shell("H", np.zeros(3))
    vals = [sto3g.overlap(a, sto3g.Shell("H", np.array([0.0, 0.0, r]))) for r in (0.5, 1.5, 4.0)]
    assert vals[0] > vals[1] > vals[2] > 0.0


def test_integral_symmetries():
    mol = heh_molecule()
    s, hcore, eri, d = scf.ao_integrals(mol)
    assert np.allclose(s, s.T, atol=1e-14)
    assert np.allclose(hcore, hcore.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(s) > 0)
    # chemist-notation 8-fold permutational symmetry
    for i, j, k, l in [(0, 1, 0, 1), (0, 0, 1, 1), (1, 0, 1, 1)]:
        ref = eri[i, j, k, l]
        for p in [(j, i, k, l), (i, j, l, k), (k, l, i, j), (l, k, j, i)]:
            assert abs(eri[p] - ref) <= 1e-13
    for axis in range(3):
        assert np.allclose(d[axis], d[axis].T, atol=1e-13)


def test_h2_dipole_xy_vanish():
    # bond on z, s orbitals only: x and y components are odd integrands
    _, _, _, d = scf.ao_integrals(h2_molecule())
    assert np.max(np.abs(d[0])) <= 1e-12
    assert np.max(np.abs(d[1])) <= 1e-12


# ---------------------------------------------------------------- SCF


def test_h2_rhf_energy():
    mol = h2_molecule()
    _, electronic = scf.restricted_hartree_fock(mol)
    # frozen regression value for this geometry/basis
    assert abs(electronic - (-1.8733165322452714)) <= 1e-10
    total = electronic + mol.nuclear_repulsion
    assert abs(total - (electronic + 1.0 / (0.7 * sto3g.BOHR_PER_ANGSTROM))) <= 1e-12


def test_rhf_rejects_odd_electrons():
    with pytest.raises(ValueError):
        scf.restricted_hartree_fock(heh_molecule(0))


def test_orbital_basis_orthonormal():
    for mol in (h2_molecule(), heh_molecule(0), heh_molecule(1)):
        s, _, _, _ = scf.ao_integrals(mol)
        h_mo, eri_mo, d_mo, _ = scf.orbital_basis(mol)
        assert h_mo.shape == (2, 2)
        assert np.allclose(h_mo, h_mo.T, atol=1e-10)
        assert np.allclose(eri_mo, np.transpose(eri_mo, (1, 0, 2, 3)), atol=1e-10)


def test_molecule_validation():
    with pytest.raises(ValueError):
        scf.Molecule([], [], 0)
    with pytest.raises(ValueError):
        scf.Molecule(["H"], [[0.0, 0.0, float("nan")]], 0)
    with pytest.raises(ValueError):
        scf.Molecule(["H"], [[0.0, 0.0, 0.0]], 1)


# ------------------------------------------------- fermion-to-qubit mapping


def occ(basis, p, n):
    return (basis >> (n - 1 - p)) & 1


def ladder_dense(p, dagger, n):
    dim = 1 << n
    mat = np.zeros((dim, dim))
    for b in range(dim):
        if occ(b, p, n) == (0 if dagger else 1):
            sign = (-1.0) ** sum(occ(b, q, n) for q in range(p))
            mat[b ^ (1 << (n - 1 - p)), b] = sign
    return mat


def fermionic_hamiltonian_dense(h_mo, eri_mo, e_nuc, n):
    """Occupation-basis assembly, independent of the Pauli algebra."""
    dim = 1 << n
    ops = {(p, d): ladder_dense(p, d, n) for p in range(n) for d in (0, 1)}
    mat = e_nuc * np.eye(dim)
    for p in range(2):
        for q in range(2):
            for s in (0, 1):
                mat += h_mo[p, q] * ops[(2 * p + s, 1)] @ ops[(2 * q + s, 0)]
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for t in range(2):
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            mat += (
                                0.5
                                * eri_mo[p, q, r, t]
                                * ops[(2 * p + s1, 1)]
                                @ ops[(2 * r + s2, 1)]
                                @ ops[(2 * t + s2, 0)]
                                @ ops[(2 * q + s1, 0)]
                            )
    return mat


def test_qubit_hamiltonian_matches_occupation_basis():
    # same matrix through two unrelated code paths: ladder matrices on
    # bitstrings vs Pauli-word algebra
    for mol in (h2_molecule(), heh_molecule(0)):
        h_mo, eri_mo, _, _ = scf.orbital_basis(mol)
        op = qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion)
        dense = qubit.dense_matrix(op, 4)
        ref = fermionic_hamiltonian_dense(h_mo, eri_mo, mol.nuclear_repulsion, 4)
        assert np.max(np.abs(dense - ref)) <= 1e-10


def test_symmetry_operators_diagonal_values():
    n_dense = qubit.dense_matrix(qubit.number_operator(4), 4)
    sz_dense = qubit.dense_matrix(qubit.sz_operator(4), 4)
    for b in range(16):
        bits = [(b >> (3 - i)) & 1 for i in range(4)]
        assert abs(n_dense[b, b] - sum(bits)) <= 1e-12
        expect_sz = 0.5 * (bits[0] + bits[2]) - 0.5 * (bits[1] + bits[3])
        assert abs(sz_dense[b, b] - expect_sz) <= 1e-12
    s2_dense = qubit.dense_matrix(qubit.s2_operator(4), 4)
    e = np.zeros(16)
    e[0b1010] = 1.0
    assert abs(np.vdot(e, s2_dense @ e) - 2.0) <= 1e-12  # triplet alpha-alpha


def test_hamiltonian_commutes_with_symmetries():
    for mol in (h2_molecule(), heh_molecule(0), heh_molecule(1)):
        h_mo, eri_mo, _, _ = scf.orbital_basis(mol)
        h = qubit.dense_matrix(qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion), 4)
        for op in (qubit.number_operator(4), qubit.sz_operator(4), qubit.s2_operator(4)):
            o = qubit.dense_matrix(op, 4)
            assert np.max(np.abs(h @ o - o @ h)) <= 1e-10


def test_dipole_is_hermitian_and_shifted():
    mol = h2_molecule()
    _, _, d_mo, _ = scf.orbital_basis(mol)
    op = qubit.dipole_operator(d_mo[2], 0.0, 4)
    assert qubit.check_hermitian(op)
    dense = qubit.dense_matrix(op, 4)
    assert np.max(np.abs(dense - dense.conj().T)) <= 1e-12
    # identity offset moves diagonals only
    shifted = qubit.dense_matrix(qubit.dipole_operator(d_mo[2], 0.25, 4), 4)
    diff = shifted - dense
    assert np.allclose(diff, np.eye(16) * 0.25 * qubit.DEBYE_PER_AU, atol=1e-12)


# ---------------------------------------------------------------- energies


def test_h2_ground_energy_close_to_reference():
    h_mo, eri_mo, _, _ = scf.orbital_basis(h2_molecule())
    h = qubit.dense_matrix(qubit.hamiltonian_operator(h_mo, eri_mo, h2_molecule().nuclear_repulsion), 4)
    ground = np.linalg.eigvalsh(h)[0]
    assert abs(ground - (-1.1362)) <= 5e-3
    assert abs(ground - (-1.1361894507164871)) <= 1e-9  # frozen regression


def test_heh_neutral_doublet_spectrum():
    mol = heh_molecule(0)
    h_mo, eri_mo, _, _ = scf.orbital_basis(mol)
    h = qubit.dense_matrix(qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion), 4)
    n = qubit.dense_matrix(qubit.number_operator(4), 4)
    evals, vecs = np.linalg.eigh(h)
    counts = np.real(np.einsum("ij,jk,ki->i", vecs.conj().T, n, vecs))
    sector = np.sort(evals[np.abs(counts - 3.0) <= 1e-8])
    assert abs(sector[0] - (-2.9337)) <= 5e-3
    assert abs(sector[0] - sector[1]) <= 1e-10  # Sz = +-1/2 degeneracy
    assert abs(sector[2] - (-1.8201)) <= 5e-3
    assert abs(sector[2] - sector[3]) <= 1e-10


def test_heh_cation_ground():
    # charge only changes the electron count, not the operator, so the
    # cation ground lives in the N = 2 block of the same Fock space
    mol = heh_molecule(1)
    assert mol.n_electrons == 2
    h_mo, eri_mo, _, _ = scf.orbital_basis(mol)
    h = qubit.dense_matrix(qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion), 4)
    n = qubit.dense_matrix(qubit.number_operator(4), 4)
    evals, vecs = np.linalg.eigh(h)
    counts = np.real(np.einsum("ij,jk,ki->i", vecs.conj().T, n, vecs))
    sector = np.sort(evals[np.abs(counts - 2.0) <= 1e-8])
    assert abs(sector[0] - (-2.8304829394)) <= 5e-6


# ---------------------------------------------------------------- file I/O


def test_generated_files_roundtrip(tmp_path):
    out = cli.generate(h2_molecule(), tmp_path / "h2", "h2")
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "dipole_x.txt",
        "dipole_y.txt",
        "dipole_z.txt",
        "hamiltonian.txt",
        "metadata.json",
        "number.txt",
        "s2.txt",
        "sz.txt",
    ]
    for name in names:
        if name == "metadata.json":
            continue
        parsed = load_pauli_file(out / name)
        assert parsed.n_qubits == 4
        assert parsed.is_hermitian()
        # exact 17-digit round-trip against the in-memory coefficients
        text2 = qubit.format_operator(
            {t.word.axes: t.coefficient for t in parsed.terms},
            4,
            parsed.label,
            parsed.units,
        )
        assert text2 == (out / name).read_text(encoding="ascii")
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["n_qubits"] == 4
    assert meta["orbitals"] == "rhf"
    assert abs(meta["bond_length_angstrom"] - 0.7) <= 1e-12


def test_parsed_hamiltonian_reproduces_spectrum(tmp_path):
    mol = heh_molecule(0)
    out = cli.generate(mol, tmp_path / "heh", "heh")
    parsed = load_pauli_file(out / "hamiltonian.txt")
    from fscsim.pauli import dense_matrix as fsc_dense

    evals = np.linalg.eigvalsh(fsc_dense(parsed))
    h_mo, eri_mo, _, _ = scf.orbital_basis(mol)
    direct = np.linalg.eigvalsh(
        qubit.dense_matrix(qubit.hamiltonian_operator(h_mo, eri_mo, mol.nuclear_repulsion), 4)
    )
    assert np.max(np.abs(evals - direct)) <= 1e-12


def test_cli_main(tmp_path, capsys):
    rc = cli.main(["--molecule", "h2", "--out", str(tmp_path / "gen")])
    assert rc == 0
    assert (tmp_path / "gen" / "hamiltonian.txt").exists()
    assert "charge +0" in capsys.readouterr().out
    rc = cli.main(["--molecule", "heh", "--charge", "3", "--out", str(tmp_path / "bad")])
    assert rc == 2


def test_cli_charge_defaults(tmp_path):
    cli.main(["--molecule", "heh", "--out", str(tmp_path / "heh0")])
    meta = json.loads((tmp_path / "heh0" / "metadata.json").read_text())
    assert meta["charge"] == 0
    assert meta["n_electrons"] == 3
    assert meta["orbitals"] == "lowdin"
    cli.main(["--molecule", "heh", "--charge", "1", "--out", str(tmp_path / "heh1")])
    meta1 = json.loads((tmp_path / "heh1" / "metadata.json").read_text())
    assert meta1["n_electrons"] == 2
    assert meta1["orbitals"] == "rhf"
