"""Closed-form one- and two-electron integrals over contracted s-Gaussians.

Only s-type STO-3G shells are needed (H and He). Formulas are the standard
ones for Gaussian products; the Boys function enters through F0.
"""

import math

import numpy as np

BOHR_PER_ANGSTROM = 1.8897259886

# exponents / contraction coefficients, scaled for the atomic zeta values
STO3G = {
    "H": (
        (3.42525091, 0.62391373, 0.16885540),
        (0.15432897, 0.53532814, 0.44463454),
    ),
    "He": (
        (6.36242139, 1.15892300, 0.31364979),
        (0.15432897, 0.53532814, 0.44463454),
    ),
}

NUCLEAR_CHARGE = {"H": 1, "He": 2}


def boys_f0(t):
    if t < 1e-12:
        return 1.0 - t / 3.0
    return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))


class Shell:
    """Contracted, normalized s-orbital at a fixed center (bohr)."""

    def __init__(self, element, center):
        exps, coeffs = STO3G[element]
        self.center = np.asarray(center, dtype=float)
        self.exps = np.asarray(exps, dtype=float)
        norms = (2.0 * self.exps / math.pi) ** 0.75
        self.coeffs = np.asarray(coeffs, dtype=float) * norms
        # renormalize the contraction
        self.coeffs /= math.sqrt(_overlap_raw(self, self))


def _pair(a_exp, a_center, b_exp, b_center):
    p = a_exp + b_exp
    diff = a_center - b_center
    mu = a_exp * b_exp / p
    k = math.exp(-mu * float(diff @ diff))
    center = (a_exp * a_center + b_exp * b_center) / p
    return p, k, center


def _overlap_raw(a, b):
    total = 0.0
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            p, k, _ = _pair(ea, a.center, eb, b.center)
            total += ca * cb * (math.pi / p) ** 1.5 * k
    return total


def overlap(a, b):
    return _overlap_raw(a, b)


def kinetic(a, b):
    total = 0.0
    diff = a.center - b.center
    r2 = float(diff @ diff)
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            p, k, _ = _pair(ea, a.center, eb, b.center)
            mu = ea * eb / p
            total += ca * cb * mu * (3.0 - 2.0 * mu * r2) * (math.pi / p) ** 1.5 * k
    return total


def nuclear_attraction(a, b, charge, nucleus):
    nucleus = np.asarray(nucleus, dtype=float)
    total = 0.0
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            p, k, center = _pair(ea, a.center, eb, b.center)
            d = center - nucleus
            total += ca * cb * (-2.0 * math.pi / p) * charge * k * boys_f0(p * float(d @ d))
    return total


def dipole(a, b, origin, axis):
    """<a| (r - origin)_axis |b> over the contraction."""
    origin = np.asarray(origin, dtype=float)
    total = 0.0
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            p, k, center = _pair(ea, a.center, eb, b.center)
            total += ca * cb * (math.pi / p) ** 1.5 * k * (center[axis] - origin[axis])
    return total


def electron_repulsion(a, b, c, d):
    """(ab|cd) in chemist notation over contracted shells."""
    total = 0.0
    for ea, ca in zip(a.exps, a.coeffs):
        for eb, cb in zip(b.exps, b.coeffs):
            p, kab, pc = _pair(ea, a.center, eb, b.center)
            for ec, cc in zip(c.exps, c.coeffs):
                for ed, cd_ in zip(d.exps, d.coeffs):
                    q, kcd, qc = _pair(ec, c.center, ed, d.center)
                    diff = pc - qc
                    t = p * q / (p + q) * float(diff @ diff)
                    pref = 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))
                    total += ca * cb * cc * cd_ * pref * kab * kcd * boys_f0(t)
    return total
