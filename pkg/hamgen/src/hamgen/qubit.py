"""Spin-orbital operators mapped to Pauli strings and serialized as text.

Operators are plain dicts {axes string: complex coefficient}. Spin-orbitals
interleave alpha/beta: spatial p maps to qubits 2p (alpha) and 2p+1 (beta).
Qubit 0 is written leftmost.
"""

import numpy as np

DROP = 1e-14
DEBYE_PER_AU = 2.5417464

_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


def word_mul(u, v):
    phase = 1 + 0j
    out = []
    for cu, cv in zip(u, v):
        ph, c = _MUL[cu, cv]
        phase *= ph
        out.append(c)
    return phase, "".join(out)


def op_add(a, b, scale=1.0):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0j) + scale * c
    return out


def op_mul(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            ph, w = word_mul(wa, wb)
            out[w] = out.get(w, 0j) + ca * cb * ph
    return out


def op_scale(a, s):
    return {w: c * s for w, c in a.items()}


def op_prune(a):
    return {w: c for w, c in a.items() if abs(c) >= DROP}


def ladder(index, dagger, n_qubits):
    """a_index (or its adjoint) as a 2-term Pauli dict with the parity string."""
    z = "Z" * index
    tail = "I" * (n_qubits - index - 1)
    y = -0.5j if dagger else 0.5j
    return {z + "X" + tail: 0.5, z + "Y" + tail: y}


def ladder_product(indices_daggers, n_qubits):
    out = {"I" * n_qubits: 1 + 0j}
    for index, dagger in indices_daggers:
        out = op_mul(out, ladder(index, dagger, n_qubits))
    return out


def one_body(matrix, n_qubits):
    """sum_pq m[p,q] a+_{p sigma} a_{q sigma} over both spins."""
    n_spatial = matrix.shape[0]
    out = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            if abs(matrix[p, q]) < DROP:
                continue
            for spin in (0, 1):
                term = ladder_product(
                    ((2 * p + spin, True), (2 * q + spin, False)), n_qubits
                )
                out = op_add(out, term, matrix[p, q])
    return out


def two_body(eri, n_qubits):
    """0.5 sum (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1} (chemist integrals)."""
    n_spatial = eri.shape[0]
    out = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    if abs(eri[p, q, r, s]) < DROP:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            term = ladder_product(
                                (
                                    (2 * p + s1, True),
                                    (2 * r + s2, True),
                                    (2 * s + s2, False),
                                    (2 * q + s1, False),
                                ),
                                n_qubits,
                            )
                            out = op_add(out, term, 0.5 * eri[p, q, r, s])
    return out


def hamiltonian_operator(h_mo, eri_mo, e_nuc):
    n_qubits = 2 * h_mo.shape[0]
    out = {"I" * n_qubits: complex(e_nuc)}
    out = op_add(out, one_body(h_mo, n_qubits))
    out = op_add(out, two_body(eri_mo, n_qubits))
    return op_prune(out)


def dipole_operator(d_mo_axis, nuclear_component, n_qubits, to_debye=True):
    """Nuclear identity offset minus the electronic one-body part, in Debye."""
    out = {"I" * n_qubits: complex(nuclear_component)}
    out = op_add(out, one_body(d_mo_axis, n_qubits), -1.0)
    if to_debye:
        out = op_scale(out, DEBYE_PER_AU)
    return op_prune(out)


def number_operator(n_qubits):
    out = {"I" * n_qubits: 0.5 * n_qubits}
    for p in range(n_qubits):
        out["I" * p + "Z" + "I" * (n_qubits - p - 1)] = -0.5
    return out


def sz_operator(n_qubits):
    out = {"I" * n_qubits: 0j}
    for p in range(n_qubits):
        sign = 1.0 if p % 2 == 0 else -1.0
        out["I" * p + "Z" + "I" * (n_qubits - p - 1)] = -0.25 * sign
    return op_prune(out)


def s2_operator(n_qubits):
    s_plus = {}
    for orb in range(n_qubits // 2):
        s_plus = op_add(
            s_plus, ladder_product(((2 * orb, True), (2 * orb + 1, False)), n_qubits)
        )
    s_minus = {w: c.conjugate() for w, c in s_plus.items()}
    sz = sz_operator(n_qubits)
    out = op_add(op_mul(s_plus, s_minus), op_mul(sz, sz))
    out = op_add(out, sz, -1.0)
    return op_prune(out)


def check_hermitian(op, tol=1e-12):
    return all(abs(c.imag) <= tol for c in op.values())


def format_operator(op, n_qubits, label, units):
    lines = [f"qubits={n_qubits} label={label} units={units}"]
    for w in sorted(op):
        c = op[w]
        if abs(c) < DROP:
            continue
        lines.append(f"{c.real:.17g} {c.imag:.17g} {w}")
    return "\n".join(lines) + "\n"


def dense_matrix(op, n_qubits):
    single = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    dim = 2**n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for w, c in op.items():
        m = np.array([[1.0 + 0j]])
        for ch in w:
            m = np.kron(m, single[ch])
        out += c * m
    return out
