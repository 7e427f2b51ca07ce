"""Dense complex linear algebra helpers for small Hilbert spaces (dim <= 16).

Kets are 1-D complex ``numpy`` arrays and operators are square 2-D complex
arrays.  The helpers here add the validation and conventions the rest of the
package relies on: hermiticity checks before eigen-decompositions, a fixed
global phase for eigenvectors, and projector construction.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .tolerances import PSD_TOL, STRUCT_TOL

# Largest operator dimension the package is designed for.
MAX_DIM = 16

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_ket(values: Sequence[complex]) -> np.ndarray:
    """Coerce a sequence of amplitudes to a 1-D complex vector."""
    ket = np.asarray(values, dtype=complex)
    if ket.ndim != 1 or ket.size == 0:
        raise ValueError("a ket must be a nonempty 1-D sequence of amplitudes")
    return ket


def as_matrix(values: Sequence[Sequence[complex]]) -> np.ndarray:
    """Coerce nested sequences to a 2-D complex matrix."""
    mat = np.asarray(values, dtype=complex)
    if mat.ndim != 2:
        raise ValueError("a matrix must be a 2-D array of entries")
    return mat


def inner_product(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """Hermitian inner product <a|b> = sum_k conj(a_k) b_k."""
    a, b = as_ket(a), as_ket(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def normalize(ket: Sequence[complex]) -> np.ndarray:
    ket = as_ket(ket)
    nrm = np.linalg.norm(ket)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return ket / nrm


def is_normalized(ket: Sequence[complex], tol: float = STRUCT_TOL) -> bool:
    ket = as_ket(ket)
    return abs(np.vdot(ket, ket).real - 1.0) < tol and abs(np.vdot(ket, ket).imag) < tol


def is_hermitian(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) < tol)


def require_hermitian(m: np.ndarray, tol: float = STRUCT_TOL) -> np.ndarray:
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not hermitian within tolerance")
    return m


def is_psd(m: np.ndarray, tol: float = PSD_TOL) -> bool:
    m = as_matrix(m)
    if not is_hermitian(m, max(tol, STRUCT_TOL)):
        return False
    return bool(np.linalg.eigvalsh(m).min() > -tol)


def is_unitary(m: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < tol)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor varying slowest."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_kets(a: Sequence[complex], b: Sequence[complex]) -> np.ndarray:
    return np.kron(as_ket(a), as_ket(b))


def projector(ket: Sequence[complex]) -> np.ndarray:
    """Rank-one projector |k><k| onto a normalized ket."""
    ket = as_ket(ket)
    if not is_normalized(ket, tol=1e-10):
        raise ValueError("projector requires a normalized ket")
    return np.outer(ket, ket.conj())


class EigExtrema(NamedTuple):
    min_eigenvalue: float
    max_eigenvalue: float
    max_eigvec: np.ndarray


def eig_extrema(m: np.ndarray) -> EigExtrema:
    """Extreme eigenvalues of a hermitian matrix plus the top eigenvector.

    The eigenvector's global phase is fixed by making its largest-magnitude
    amplitude real and positive, so repeated calls are reproducible.
    """
    m = require_hermitian(m)
    if m.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {m.shape[0]} exceeds supported maximum {MAX_DIM}")
    vals, vecs = np.linalg.eigh(m)
    top = vecs[:, -1]
    pivot = int(np.argmax(np.abs(top)))
    phase = top[pivot] / abs(top[pivot])
    top = top * phase.conjugate()
    return EigExtrema(float(vals[0]), float(vals[-1]), top)


def pauli_dot(vec: Sequence[float]) -> np.ndarray:
    """sigma . v for a real 3-vector v."""
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,):
        raise ValueError("expected a 3-vector")
    return v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z


def spin_observable(angle: float) -> np.ndarray:
    """cos(angle) sigma_z + sin(angle) sigma_x, the +-1 observable in the z-x plane."""
    return np.cos(angle) * PAULI_Z + np.sin(angle) * PAULI_X


def born_probability(state: Sequence[complex], effect: np.ndarray) -> float:
    """<psi|E|psi> for a pure state, clamped of floating-point noise."""
    psi = as_ket(state)
    p = float(np.real(np.vdot(psi, as_matrix(effect) @ psi)))
    if p < 0 and p > -1e-12:
        p = 0.0
    return p
