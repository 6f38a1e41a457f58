"""Second-quantized operators, the Jordan-Wigner map, and excitation generators.

Spin-orbital convention: interleaved, orbital i alpha on qubit 2i and beta on
qubit 2i+1. The reference determinant occupies the lowest spin-orbitals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliSum, PauliWord


@dataclass(frozen=True)
class LadderProduct:
    """Scaled product of fermionic ladder operators, applied right to left.

    factors is an ordered tuple of (spin-orbital index, dagger) pairs, written
    in operator order: factors[0] acts last.
    """

    factors: tuple[tuple[int, bool], ...]
    coefficient: complex = 1.0

    def adjoint(self) -> LadderProduct:
        rev = tuple((p, not dag) for p, dag in reversed(self.factors))
        return LadderProduct(rev, self.coefficient.conjugate())


@dataclass(frozen=True)
class GeneratorSet:
    """Anti-Hermitian excitation generators (JW images of T_mu - T_mu^dagger)."""

    generators: tuple[PauliSum, ...]
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.generators)


def _ladder_sum(index: int, dagger: bool, n_spin_orbitals: int) -> PauliSum:
    # a_p^dagger -> (X - iY)/2 with a Z string on qubits < p; a_p is the conjugate
    if not 0 <= index < n_spin_orbitals:
        raise ValueError(f"spin-orbital index {index} out of range [0, {n_spin_orbitals})")
    z = "Z" * index
    tail = "I" * (n_spin_orbitals - index - 1)
    y_coeff = -0.5j if dagger else 0.5j
    return PauliSum.from_terms(
        n_spin_orbitals,
        [(0.5, z + "X" + tail), (y_coeff, z + "Y" + tail)],
    )


def jordan_wigner(p: LadderProduct, n_spin_orbitals: int) -> PauliSum:
    """Map a ladder-operator product to its Pauli-sum image."""
    out = PauliSum.identity(n_spin_orbitals, p.coefficient)
    for index, dagger in p.factors:
        out = out * _ladder_sum(index, dagger, n_spin_orbitals)
    return out


def number_operator(n_spin_orbitals: int) -> PauliSum:
    terms = [(0.5 * n_spin_orbitals, "I" * n_spin_orbitals)]
    for p in range(n_spin_orbitals):
        word = "I" * p + "Z" + "I" * (n_spin_orbitals - p - 1)
        terms.append((-0.5, word))
    return PauliSum.from_terms(n_spin_orbitals, terms, label="number")


def sz_operator(n_spin_orbitals: int) -> PauliSum:
    terms = []
    for p in range(n_spin_orbitals):
        word = "I" * p + "Z" + "I" * (n_spin_orbitals - p - 1)
        sign = 1.0 if p % 2 == 0 else -1.0
        terms.append((-0.25 * sign, word))
        terms.append((0.25 * sign, "I" * n_spin_orbitals))
    return PauliSum.from_terms(n_spin_orbitals, terms, label="sz")


def symmetry_operators(n_spin_orbitals: int) -> tuple[PauliSum, PauliSum, PauliSum]:
    """Particle number N, spin projection Sz, and total spin S^2 in JW form."""
    if n_spin_orbitals % 2 != 0:
        raise ValueError("interleaved alpha/beta convention needs an even spin-orbital count")
    n_op = number_operator(n_spin_orbitals)
    sz = sz_operator(n_spin_orbitals)
    s_plus = PauliSum.zero(n_spin_orbitals)
    for orb in range(n_spin_orbitals // 2):
        s_plus = s_plus + jordan_wigner(
            LadderProduct(((2 * orb, True), (2 * orb + 1, False))), n_spin_orbitals
        )
    s2 = s_plus * s_plus.adjoint() + sz * sz - sz
    return n_op, sz, s2.relabel(label="s2").relabel(label="s2")


def _single_generator(i: int, a: int, n: int) -> PauliSum:
    t = LadderProduct(((a, True), (i, False)))
    return jordan_wigner(t, n) - jordan_wigner(t.adjoint(), n)


def _double_generator(i: int, j: int, a: int, b: int, n: int) -> PauliSum:
    t = LadderProduct(((a, True), (b, True), (j, False), (i, False)))
    return jordan_wigner(t, n) - jordan_wigner(t.adjoint(), n)


def uccsd_generators(n_spin_orbitals: int, n_electrons: int) -> GeneratorSet:
    """Single and Sz-preserving double excitation generators.

    Excitations are taken relative to the reference determinant with the
    lowest n_electrons spin-orbitals occupied. Singles are not spin-filtered:
    the degenerate open-shell cases need spin-flip rotations to reach every
    multiplet component, and symmetry penalties supply the sector targeting.
    """
    if not 0 < n_electrons < n_spin_orbitals:
        raise ValueError(
            f"electron count {n_electrons} invalid for {n_spin_orbitals} spin-orbitals"
        )
    occ = range(n_electrons)
    virt = range(n_electrons, n_spin_orbitals)
    generators = []
    labels = []
    for i in occ:
        for a in virt:
            generators.append(_single_generator(i, a, n_spin_orbitals))
            labels.append(f"{i}->{a}")
    for i in occ:
        for j in occ:
            if j <= i:
                continue
            for a in virt:
                for b in virt:
                    if b <= a:
                        continue
                    if (i % 2 + j % 2) != (a % 2 + b % 2):
                        continue
                    generators.append(_double_generator(i, j, a, b, n_spin_orbitals))
                    labels.append(f"{i},{j}->{a},{b}")
    return GeneratorSet(tuple(generators), tuple(labels))


def sz_preserving_subset(generators: GeneratorSet, n_spin_orbitals: int) -> GeneratorSet:
    """Generators commuting with Sz as operators.

    Subspace search over an Sz block needs a circuit that cannot leave the
    block, otherwise degenerate partners from other Sz values soak up the
    weighted-sum optimum.
    """
    sz = sz_operator(n_spin_orbitals)
    keep_g = []
    keep_l = []
    for gen, lab in zip(generators.generators, generators.labels):
        if (gen * sz - sz * gen).n_terms == 0:
            keep_g.append(gen)
            keep_l.append(lab)
    return GeneratorSet(tuple(keep_g), tuple(keep_l))


def hartree_fock_index(n_spin_orbitals: int, n_electrons: int) -> int:
    """Basis index of the reference determinant (qubit 0 = most significant bit)."""
    index = 0
    for p in range(n_electrons):
        index |= 1 << (n_spin_orbitals - 1 - p)
    return index
