"""Hot numeric kernels: Pauli rotations, circuits, and expectation values.

Two interchangeable implementations live here. The default is numba-compiled;
a pure-numpy path exists as a fallback and as a cross-check. Selection happens
once at import via the FSCSIM_BACKEND environment variable:

    auto   use numba when importable, numpy otherwise (default)
    numba  require numba, fail loudly if missing
    numpy  force the vectorized numpy path

A Pauli word is carried as (flip, sign, phase): flip_mask for the X/Y
positions, sign_mask for the Y/Z positions, phase = i**n_Y, with qubit 0 on
the most significant bit. Action on a basis state:

    w|b> = phase * (-1)**popcount(b & sign) |b ^ flip>
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "FSCSIM_BACKEND"

_requested = os.environ.get(BACKEND_ENV, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(f"{BACKEND_ENV}={_requested!r}, expected auto|numba|numpy")


# -- numpy reference implementation ---------------------------------------


def _parity_array(x):
    x = x.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> shift
    return x & 1


def apply_rotation_numpy(amps, flip, sign, phase, theta):
    """In-place exp(-i theta/2 w) on the amplitude array."""
    half = 0.5 * theta
    c, s = np.cos(half), np.sin(half)
    idx = np.arange(amps.size, dtype=np.int64)
    perm = idx ^ flip
    signs = 1.0 - 2.0 * _parity_array(perm & sign)
    amps[:] = c * amps - 1j * s * phase * signs * amps[perm]


def apply_circuit_numpy(amps, flips, signs, phases, angles):
    idx = np.arange(amps.size, dtype=np.int64)
    for r in range(angles.size):
        half = 0.5 * angles[r]
        c, s = np.cos(half), np.sin(half)
        perm = idx ^ flips[r]
        par = 1.0 - 2.0 * _parity_array(perm & signs[r])
        amps[:] = c * amps - 1j * s * phases[r] * par * amps[perm]


def expect_terms_numpy(amps, flips, signs, phases, coeffs):
    """<psi|O|psi> for O given as parallel term arrays. Returns complex."""
    idx = np.arange(amps.size, dtype=np.int64)
    total = 0.0 + 0.0j
    for t in range(coeffs.size):
        perm = idx ^ flips[t]
        par = 1.0 - 2.0 * _parity_array(perm & signs[t])
        total += coeffs[t] * phases[t] * np.vdot(amps, par * amps[perm])
    return total


# -- numba implementation --------------------------------------------------

HAS_NUMBA = False
if _requested in ("auto", "numba"):
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if _requested == "numba" and not HAS_NUMBA:
    raise ImportError(f"{BACKEND_ENV}=numba but numba is not importable")

if HAS_NUMBA:

    @njit(cache=True)
    def _parity(x):
        x ^= x >> 32
        x ^= x >> 16
        x ^= x >> 8
        x ^= x >> 4
        x ^= x >> 2
        x ^= x >> 1
        return x & 1

    @njit(cache=True)
    def apply_rotation_numba(amps, flip, sign, phase, theta):
        half = 0.5 * theta
        c = np.cos(half)
        ms = -1j * np.sin(half) * phase
        dim = amps.size
        if flip == 0:
            for b in range(dim):
                if _parity(b & sign) == 0:
                    amps[b] = (c + ms) * amps[b]
                else:
                    amps[b] = (c - ms) * amps[b]
        else:
            for b in range(dim):
                t = b ^ flip
                if b < t:
                    pb = 1.0 - 2.0 * _parity(b & sign)
                    pt = 1.0 - 2.0 * _parity(t & sign)
                    ab = amps[b]
                    at = amps[t]
                    amps[b] = c * ab + ms * pt * at
                    amps[t] = c * at + ms * pb * ab

    @njit(cache=True)
    def apply_circuit_numba(amps, flips, signs, phases, angles):
        for r in range(angles.size):
            apply_rotation_numba(amps, flips[r], signs[r], phases[r], angles[r])

    @njit(cache=True)
    def expect_terms_numba(amps, flips, signs, phases, coeffs):
        dim = amps.size
        total = 0.0 + 0.0j
        for t in range(coeffs.size):
            flip = flips[t]
            sign = signs[t]
            acc = 0.0 + 0.0j
            for b in range(dim):
                p = 1.0 - 2.0 * _parity((b ^ flip) & sign)
                acc += np.conj(amps[b]) * p * amps[b ^ flip]
            total += coeffs[t] * phases[t] * acc
        return total


# -- dispatch --------------------------------------------------------------

if HAS_NUMBA:
    ACTIVE_BACKEND = "numba"
    apply_rotation = apply_rotation_numba
    apply_circuit = apply_circuit_numba
    expect_terms = expect_terms_numba
else:
    ACTIVE_BACKEND = "numpy"
    apply_rotation = apply_rotation_numpy
    apply_circuit = apply_circuit_numpy
    expect_terms = expect_terms_numpy


def backend() -> str:
    """Name of the implementation behind the dispatched kernels."""
    return ACTIVE_BACKEND
