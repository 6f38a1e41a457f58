"""AO integral assembly, restricted Hartree-Fock, and orbital bases."""

import numpy as np

from . import sto3g
from .sto3g import NUCLEAR_CHARGE, Shell


class Molecule:
    def __init__(self, symbols, coords_angstrom, charge):
        if not symbols:
            raise ValueError("molecule needs at least one atom")
        coords = np.asarray(coords_angstrom, dtype=float)
        if not np.all(np.isfinite(coords)):
            raise ValueError("non-finite coordinates")
        self.symbols = list(symbols)
        self.coords_angstrom = coords
        self.coords = coords * sto3g.BOHR_PER_ANGSTROM
        self.charge = int(charge)
        self.charges = np.array([NUCLEAR_CHARGE[s] for s in self.symbols], dtype=float)
        self.n_electrons = int(self.charges.sum()) - self.charge
        if self.n_electrons <= 0:
            raise ValueError(f"no electrons for charge {charge}")
        self.shells = [Shell(s, c) for s, c in zip(self.symbols, self.coords)]

    @property
    def nuclear_repulsion(self):
        e = 0.0
        for i in range(len(self.symbols)):
            for j in range(i + 1, len(self.symbols)):
                r = np.linalg.norm(self.coords[i] - self.coords[j])
                e += self.charges[i] * self.charges[j] / r
        return e

    @property
    def charge_center(self):
        # dipole origin: center of nuclear charge, in bohr
        return (self.charges[:, None] * self.coords).sum(axis=0) / self.charges.sum()

    def nuclear_dipole(self):
        origin = self.charge_center
        return ((self.coords - origin) * self.charges[:, None]).sum(axis=0)


def ao_integrals(mol):
    shells = mol.shells
    n = len(shells)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    d = np.zeros((3, n, n))
    origin = mol.charge_center
    for i in range(n):
        for j in range(n):
            s[i, j] = sto3g.overlap(shells[i], shells[j])
            t[i, j] = sto3g.kinetic(shells[i], shells[j])
            for a, z in enumerate(mol.charges):
                v[i, j] += sto3g.nuclear_attraction(shells[i], shells[j], z, mol.coords[a])
            for axis in range(3):
                d[axis, i, j] = sto3g.dipole(shells[i], shells[j], origin, axis)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    eri[i, j, k, l] = sto3g.electron_repulsion(
                        shells[i], shells[j], shells[k], shells[l]
                    )
    return s, t + v, eri, d


def lowdin_x(s):
    evals, vecs = np.linalg.eigh(s)
    if np.any(evals < 1e-10):
        raise ValueError("linearly dependent basis")
    return vecs @ np.diag(evals**-0.5) @ vecs.T


def restricted_hartree_fock(mol, max_iter=200, tol=1e-12):
    """Closed-shell RHF. Returns (orbital coefficients, electronic energy)."""
    if mol.n_electrons % 2 != 0:
        raise ValueError("restricted SCF needs an even electron count")
    s, hcore, eri, _ = ao_integrals(mol)
    n_occ = mol.n_electrons // 2
    x = lowdin_x(s)
    coeffs = _solve_roothaan(hcore, x)
    energy = None
    for _ in range(max_iter):
        density = 2.0 * coeffs[:, :n_occ] @ coeffs[:, :n_occ].T
        coulomb = np.einsum("ijkl,kl->ij", eri, density)
        exchange = np.einsum("ikjl,kl->ij", eri, density)
        fock = hcore + coulomb - 0.5 * exchange
        new_energy = 0.5 * np.sum(density * (hcore + fock))
        coeffs = _solve_roothaan(fock, x)
        if energy is not None and abs(new_energy - energy) < tol:
            energy = new_energy
            break
        energy = new_energy
    return coeffs, energy


def _solve_roothaan(fock, x):
    fp = x.T @ fock @ x
    _, cp = np.linalg.eigh(fp)
    return x @ cp


def orbital_basis(mol):
    """MO coefficients used for the qubit mapping.

    Even electron counts use RHF orbitals. Odd counts fall back to symmetric
    orthogonalization (the exact spectrum does not depend on this choice),
    with columns ordered by the core-Hamiltonian diagonal.
    """
    s, hcore, eri, d = ao_integrals(mol)
    if mol.n_electrons % 2 == 0:
        coeffs, scf_energy = restricted_hartree_fock(mol)
    else:
        coeffs = lowdin_x(s)
        order = np.argsort(np.diag(coeffs.T @ hcore @ coeffs))
        coeffs = coeffs[:, order]
        scf_energy = None
    h_mo = coeffs.T @ hcore @ coeffs
    eri_mo = np.einsum("ip,jq,kr,ls,ijkl->pqrs", coeffs, coeffs, coeffs, coeffs, eri)
    d_mo = np.einsum("ip,jq,aij->apq", coeffs, coeffs, d)
    return h_mo, eri_mo, d_mo, scf_energy
