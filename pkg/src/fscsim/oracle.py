"""Brute-force reference spectra, transition moments, and log errors.

Everything here goes through dense matrices on purpose: the module is the
independent check on the circuit machinery, so it shares only the Pauli
algebra with the rest of the package. Diagonalization is a hand-rolled
cyclic Jacobi sweep rather than a LAPACK call for the same reason.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .fermion import symmetry_operators
from .pauli import PauliSum, dense_matrix
from .statevector import StateVector, from_amplitudes

# dense diagonalization refuses anything above 2^12
DIM_CAP_QUBITS = 12
# eigenvalue gap under which two states count as one degenerate cluster
DEGENERACY_TOL = 1e-6
# differences below this are reported as exact rather than as a log10
LOG_ERROR_FLOOR = 1e-15

_JACOBI_SWEEPS = 60


def jacobi_eigh(matrix, max_sweeps=_JACOBI_SWEEPS):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Returns (eigenvalues ascending, eigenvector columns). Each rotation
    zeroes one off-diagonal pair; sweeps repeat until the off-diagonal
    Frobenius mass hits rounding level.
    """
    a = np.array(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))

    def off_norm():
        return float(np.linalg.norm(a - np.diag(np.diag(a))))

    for _ in range(max_sweeps):
        if off_norm() <= 1e-14 * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-18 * scale:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # unitary: diag(1, conj(phase)) times a real Givens rotation
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - (s * np.conj(phase)) * col_q
                a[:, q] = s * col_p + (c * np.conj(phase)) * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - (s * phase) * row_q
                a[q, :] = s * row_p + (c * phase) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p - (s * np.conj(phase)) * col_q
                v[:, q] = s * col_p + (c * np.conj(phase)) * col_q
    if off_norm() > 1e-12 * scale:
        raise ArithmeticError("jacobi sweep did not converge")
    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def _cluster_indices(eigenvalues):
    clusters = []
    start = 0
    for i in range(1, len(eigenvalues) + 1):
        if i == len(eigenvalues) or eigenvalues[i] - eigenvalues[i - 1] > DEGENERACY_TOL:
            clusters.append(tuple(range(start, i)))
            start = i
    return tuple(clusters)


def _split_by_eigenvalue(block, op):
    """Rotate a degenerate block into eigenvectors of op, grouped by value."""
    m = block.conj().T @ op @ block
    m = 0.5 * (m + m.conj().T)
    evals, rot = jacobi_eigh(m)
    rotated = block @ rot
    groups = []
    start = 0
    for i in range(1, len(evals) + 1):
        if i == len(evals) or evals[i] - evals[i - 1] > DEGENERACY_TOL:
            groups.append(rotated[:, start:i])
            start = i
    return groups


def _refine_cluster(block, ops):
    blocks = [block]
    for op in ops:
        refined = []
        for blk in blocks:
            if blk.shape[1] == 1:
                refined.append(blk)
            else:
                refined.extend(_split_by_eigenvalue(blk, op))
        blocks = refined
    return np.hstack(blocks)


@dataclass(frozen=True)
class SpectrumReference:
    """Full exact spectrum with per-state symmetry labels.

    sectors[i] holds (<N>, <Sz>, <S^2>) for eigenvector i. clusters lists
    index groups whose eigenvalues sit within DEGENERACY_TOL of each other;
    singletons included, so the groups partition the index range.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sectors: np.ndarray
    n_qubits: int
    clusters: tuple = field(default=())

    def __len__(self):
        return len(self.eigenvalues)

    def state(self, i) -> StateVector:
        return from_amplitudes(self.eigenvectors[:, i], self.n_qubits)

    def cluster_of(self, i):
        for cid, members in enumerate(self.clusters):
            if i in members:
                return cid
        raise IndexError(f"no cluster holds index {i}")

    def partners(self, i):
        return self.clusters[self.cluster_of(i)]

    def is_degenerate(self, i) -> bool:
        return len(self.partners(i)) > 1


def diagonalize(h: PauliSum) -> SpectrumReference:
    if h.n_qubits > DIM_CAP_QUBITS:
        raise ValueError(f"{h.n_qubits} qubits exceeds the dense cap of {DIM_CAP_QUBITS}")
    if not h.is_hermitian():
        raise ValueError("can only diagonalize Hermitian operators")
    dense = dense_matrix(h)
    evals, vecs = jacobi_eigh(dense)
    clusters = _cluster_indices(evals)

    sym_dense = ()
    if h.n_qubits % 2 == 0:
        n_op, sz_op, s2_op = symmetry_operators(h.n_qubits)
        # split order fixes the tie-break: ascending Sz, then S^2, then N
        sym_dense = (dense_matrix(sz_op), dense_matrix(s2_op), dense_matrix(n_op))
        for members in clusters:
            if len(members) > 1:
                lo, hi = members[0], members[-1] + 1
                vecs[:, lo:hi] = _refine_cluster(vecs[:, lo:hi], sym_dense)

    dim = vecs.shape[1]
    sectors = np.full((dim, 3), np.nan)
    if sym_dense:
        sz_d, s2_d, n_d = sym_dense
        for i in range(dim):
            col = vecs[:, i]
            sectors[i, 0] = np.vdot(col, n_d @ col).real
            sectors[i, 1] = np.vdot(col, sz_d @ col).real
            sectors[i, 2] = np.vdot(col, s2_d @ col).real
    return SpectrumReference(evals, vecs, sectors, h.n_qubits, clusters)


@dataclass(frozen=True)
class TransitionMoments:
    """Magnitudes |<j|O|k>| over a set of spectrum indices.

    pair() is the comparison-safe accessor: inside or across degenerate
    clusters it swaps the raw magnitude for the block Frobenius norm, which
    is invariant under basis rotations within each cluster, and flags the
    value so report layers can mark it.
    """

    indices: tuple
    magnitudes: np.ndarray
    cluster_ids: tuple
    block_norms: dict
    units: str = "dimensionless"

    def pair(self, j, k):
        """Returns (value, degenerate_flag) for full-spectrum indices j, k."""
        pj = self.indices.index(j)
        pk = self.indices.index(k)
        cj, ck = self.cluster_ids[pj], self.cluster_ids[pk]
        if cj == ck and pj != pk:
            # same degenerate cluster: raw number is gauge, never asserted
            return float(self.magnitudes[pj, pk]), True
        if (cj, ck) in self.block_norms:
            return self.block_norms[(cj, ck)], True
        return float(self.magnitudes[pj, pk]), False


def exact_transition_moments(spec: SpectrumReference, observable: PauliSum, indices=None):
    if observable.n_qubits != spec.n_qubits:
        raise ValueError("observable acts on a different qubit count")
    if indices is None:
        indices = tuple(range(len(spec)))
    indices = tuple(int(i) for i in indices)
    dense = dense_matrix(observable)
    m = len(indices)
    mags = np.zeros((m, m))
    for a in range(m):
        va = spec.eigenvectors[:, indices[a]]
        for b in range(a, m):
            vb = spec.eigenvectors[:, indices[b]]
            val = abs(np.vdot(va, dense @ vb))
            mags[a, b] = val
            mags[b, a] = val

    cluster_ids = tuple(spec.cluster_of(i) for i in indices)
    block_norms = {}
    for ca in sorted(set(cluster_ids)):
        for cb in sorted(set(cluster_ids)):
            if ca >= cb:
                continue
            if len(spec.clusters[ca]) == 1 and len(spec.clusters[cb]) == 1:
                continue
            total = 0.0
            for j in spec.clusters[ca]:
                vj = spec.eigenvectors[:, j]
                for k in spec.clusters[cb]:
                    total += abs(np.vdot(vj, dense @ spec.eigenvectors[:, k])) ** 2
            block_norms[(ca, cb)] = math.sqrt(total)
            block_norms[(cb, ca)] = block_norms[(ca, cb)]
    return TransitionMoments(indices, mags, cluster_ids, block_norms, observable.units)


def log_error(e, reference):
    """log10 of the absolute deviation; -inf when below the exactness floor."""
    diff = abs(float(e) - float(reference))
    if diff < LOG_ERROR_FLOOR:
        return float("-inf")
    return math.log10(diff)


def format_log_error(value, digits=4):
    if value == float("-inf"):
        return "exact"
    return f"{value:.{digits}f}"


def write_spectrum_csv(spec: SpectrumReference, path):
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "energy", "n", "sz", "s2", "cluster"])
        for i in range(len(spec)):
            writer.writerow(
                [
                    i,
                    f"{spec.eigenvalues[i]:.17g}",
                    f"{spec.sectors[i, 0]:.17g}",
                    f"{spec.sectors[i, 1]:.17g}",
                    f"{spec.sectors[i, 2]:.17g}",
                    spec.cluster_of(i),
                ]
            )
