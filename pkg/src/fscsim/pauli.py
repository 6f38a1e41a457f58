"""Pauli-word and weighted Pauli-sum algebra.

Conventions used throughout the package:
  * qubit 0 is the leftmost character of a word string and the most
    significant bit of a basis-state index;
  * a word acts on a basis index b as
        w|b> = i^{n_Y} * (-1)^{popcount(b & sign_mask)} |b ^ flip_mask>
    where flip_mask marks X/Y positions and sign_mask marks Y/Z positions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

AXES = "IXYZ"

#: coefficients with magnitude below this are dropped by simplify()
DROP_THRESHOLD = 1e-14

#: dense_matrix refuses above this qubit count (2^12 x 2^12 complex = 256 MB)
DENSE_QUBIT_CAP = 12

HERMITIAN_TOL = 1e-12

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase, axis) with a*b = phase*axis
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}


@dataclass(frozen=True)
class PauliWord:
    """Tensor product of single-qubit Paulis, stored as a string over IXYZ."""

    axes: str

    def __post_init__(self):
        if not self.axes or any(c not in AXES for c in self.axes):
            raise ValueError(f"invalid Pauli word {self.axes!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.axes)

    @property
    def is_identity(self) -> bool:
        return set(self.axes) <= {"I"}

    def masks(self) -> tuple[int, int, complex]:
        """Return (flip_mask, sign_mask, phase prefactor i^{n_Y})."""
        n = len(self.axes)
        flip = 0
        sign = 0
        n_y = 0
        for i, c in enumerate(self.axes):
            bit = 1 << (n - 1 - i)
            if c in ("X", "Y"):
                flip |= bit
            if c in ("Y", "Z"):
                sign |= bit
            if c == "Y":
                n_y += 1
        return flip, sign, 1j ** (n_y % 4)

    def dense(self) -> np.ndarray:
        """Dense matrix of the bare word (qubit 0 = leftmost kron factor)."""
        m = np.ones((1, 1), dtype=complex)
        for c in self.axes:
            m = np.kron(m, PAULI_MATRICES[c])
        return m

    def __str__(self) -> str:
        return self.axes


def identity_word(n_qubits: int) -> PauliWord:
    return PauliWord("I" * n_qubits)


def word_multiply(a: PauliWord, b: PauliWord) -> tuple[complex, PauliWord]:
    """Qubit-wise Pauli group product: a*b = phase * word, phase in {±1, ±i}."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"length mismatch: {a.n_qubits} vs {b.n_qubits}")
    phase = 1 + 0j
    out = []
    for ca, cb in zip(a.axes, b.axes):
        p, c = _PRODUCT[(ca, cb)]
        phase *= p
        out.append(c)
    return phase, PauliWord("".join(out))


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli word."""

    coefficient: complex
    word: PauliWord

    def __post_init__(self):
        if not cmath.isfinite(complex(self.coefficient)):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")


@dataclass(frozen=True)
class PauliSum:
    """Weighted sum of Pauli words over a fixed qubit count.

    Instances are immutable; all arithmetic returns new, simplified sums
    (like-word terms merged, near-zero coefficients dropped, terms in
    lexicographic word order).
    """

    n_qubits: int
    terms: tuple[PauliTerm, ...] = ()
    label: str = ""
    units: str = "dimensionless"

    def __post_init__(self):
        for t in self.terms:
            if t.word.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term {t.word} has {t.word.n_qubits} qubits, expected {self.n_qubits}"
                )

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, n_qubits, pairs, label="", units="dimensionless") -> PauliSum:
        """Build from (coefficient, word-or-string) pairs and simplify."""
        terms = []
        for coeff, word in pairs:
            if isinstance(word, str):
                word = PauliWord(word)
            terms.append(PauliTerm(complex(coeff), word))
        return simplify(cls(n_qubits, tuple(terms), label=label, units=units))

    @classmethod
    def zero(cls, n_qubits, label="", units="dimensionless") -> PauliSum:
        return cls(n_qubits, (), label=label, units=units)

    @classmethod
    def identity(cls, n_qubits, coefficient=1.0) -> PauliSum:
        return cls.from_terms(n_qubits, [(coefficient, "I" * n_qubits)])

    # -- queries -----------------------------------------------------------

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def coefficient_of(self, word) -> complex:
        if isinstance(word, str):
            word = PauliWord(word)
        for t in self.terms:
            if t.word == word:
                return t.coefficient
        return 0j

    def coefficient_norm(self) -> float:
        """Sum of |coefficient|, an upper bound on the spectral range width."""
        return float(sum(abs(t.coefficient) for t in self.terms))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        s = simplify(self)
        return all(abs(t.coefficient.imag) <= tol for t in s.terms)

    # -- algebra -----------------------------------------------------------

    def _merge_units(self, other: PauliSum) -> str:
        return self.units if self.units == other.units else "dimensionless"

    def __add__(self, other: PauliSum) -> PauliSum:
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit count mismatch in sum")
        return simplify(
            PauliSum(self.n_qubits, self.terms + other.terms, units=self._merge_units(other))
        )

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-1.0) * other

    def __neg__(self) -> PauliSum:
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            if self.n_qubits != other.n_qubits:
                raise ValueError("qubit count mismatch in product")
            terms = []
            for ta in self.terms:
                for tb in other.terms:
                    phase, w = word_multiply(ta.word, tb.word)
                    terms.append(PauliTerm(ta.coefficient * tb.coefficient * phase, w))
            return simplify(PauliSum(self.n_qubits, tuple(terms)))
        return simplify(
            PauliSum(
                self.n_qubits,
                tuple(PauliTerm(t.coefficient * complex(other), t.word) for t in self.terms),
                label=self.label,
                units=self.units,
            )
        )

    def __rmul__(self, scalar) -> PauliSum:
        return self * scalar

    def adjoint(self) -> PauliSum:
        return simplify(
            PauliSum(
                self.n_qubits,
                tuple(PauliTerm(t.coefficient.conjugate(), t.word) for t in self.terms),
                label=self.label,
                units=self.units,
            )
        )

    def relabel(self, label=None, units=None) -> PauliSum:
        return PauliSum(
            self.n_qubits,
            self.terms,
            label=self.label if label is None else label,
            units=self.units if units is None else units,
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({t.coefficient:g})*{t.word}" for t in self.terms)


def simplify(s: PauliSum) -> PauliSum:
    """Merge like words, drop |coeff| < DROP_THRESHOLD, sort lexicographically."""
    acc: dict[str, complex] = {}
    for t in s.terms:
        acc[t.word.axes] = acc.get(t.word.axes, 0j) + complex(t.coefficient)
    terms = tuple(
        PauliTerm(c, PauliWord(w))
        for w, c in sorted(acc.items())
        if abs(c) >= DROP_THRESHOLD
    )
    return PauliSum(s.n_qubits, terms, label=s.label, units=s.units)


def dense_matrix(s: PauliSum) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the sum. Guarded by DENSE_QUBIT_CAP."""
    if s.n_qubits > DENSE_QUBIT_CAP:
        raise ValueError(
            f"dense_matrix refused for {s.n_qubits} qubits (cap {DENSE_QUBIT_CAP})"
        )
    dim = 2**s.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for t in s.terms:
        m += t.coefficient * t.word.dense()
    return m


# -- text format -----------------------------------------------------------
#
# Header line:  qubits=<n> label=<string> units=<hartree|debye|dimensionless>
# Term lines:   <coeff_real> <coeff_imag> <word>
# '#' starts a comment; blank lines ignored; decimal point only.

VALID_UNITS = ("hartree", "debye", "dimensionless")


def format_pauli_text(s: PauliSum) -> str:
    units = s.units if s.units in VALID_UNITS else "dimensionless"
    lines = [f"qubits={s.n_qubits} label={s.label or 'unnamed'} units={units}"]
    for t in simplify(s).terms:
        lines.append(f"{t.coefficient.real:.17g} {t.coefficient.imag:.17g} {t.word.axes}")
    return "\n".join(lines) + "\n"


def parse_pauli_text(text: str) -> PauliSum:
    header = None
    terms = []
    n = -1
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = dict(f.split("=", 1) for f in line.split())
            missing = {"qubits", "label", "units"} - set(header)
            if missing:
                raise ValueError(f"header missing fields: {sorted(missing)}")
            n = int(header["qubits"])
            if header["units"] not in VALID_UNITS:
                raise ValueError(f"unknown units {header['units']!r}")
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ValueError(f"malformed term line: {raw!r}")
        re_s, im_s, word = fields
        if len(word) != n:
            raise ValueError(f"word {word!r} does not match qubits={n}")
        terms.append(PauliTerm(complex(float(re_s), float(im_s)), PauliWord(word)))
    if header is None:
        raise ValueError("empty Pauli-sum text")
    return simplify(
        PauliSum(n, tuple(terms), label=header["label"], units=header["units"])
    )


def write_pauli_file(s: PauliSum, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_pauli_text(s))


def load_pauli_file(path) -> PauliSum:
    with open(path, "r", encoding="ascii") as fh:
        return parse_pauli_text(fh.read())
