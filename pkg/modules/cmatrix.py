"""
Dense complex linear algebra for small matrices
Products, adjoints, traces, commutators, Hermiticity checks and operator norms

VERSION HISTORY:
1.1.0 - 2x2 operator norm fast path - 18/10/26
      ADDITIONS:
      - half_trace_norm() for anti-Hermitian traceless 2x2 input
      - operator_norm() cross-checks the fast path against Jacobi under assertions
1.0.0 - Cyclic Jacobi diagonalization for Hermitian matrices - 18/10/26
KEY FUNCTIONS:
- as_matrix / as_vector validation (square, finite, complex128)
- adjoint, mul, trace, commutator
- is_hermitian, is_antihermitian_traceless
- jacobi_eigh (cyclic complex Jacobi)
- operator_norm (largest singular value), vector_norm
"""
import math
import logging
from typing import Tuple

import numpy as np
import numpy.typing as npt

from modules.errors import DimensionMismatchError, InvalidStateError

# Configure logging
logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


def as_matrix(values) -> ComplexMatrix:
    """
    Convert nested sequences or arrays to a validated square complex matrix

    Raises:
        DimensionMismatchError: input is not a non-empty square matrix
        InvalidStateError: an entry is NaN or infinite
    """
    m = np.array(values, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError(f"Expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("Matrix has non-finite entries")
    return m


def as_vector(values) -> ComplexVector:
    """Convert a sequence to a validated complex vector"""
    v = np.array(values, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] < 1:
        raise DimensionMismatchError(f"Expected a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidStateError("Vector has non-finite entries")
    return v


def _check_same_dim(a: ComplexMatrix, b: ComplexMatrix):
    if a.shape != b.shape:
        raise DimensionMismatchError(f"Dimension mismatch: {a.shape} vs {b.shape}")


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose"""
    return np.conj(m).T.copy()


def mul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Matrix product a·b"""
    _check_same_dim(a, b)
    return a @ b


def trace(m: ComplexMatrix) -> complex:
    """Sum of the diagonal entries"""
    return complex(np.trace(m))


def commutator(h: ComplexMatrix, r: ComplexMatrix) -> ComplexMatrix:
    """[h, r] = h·r − r·h"""
    _check_same_dim(h, r)
    return h @ r - r @ h


def is_hermitian(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    """True iff the largest entry of m − m† has magnitude at most tol"""
    return float(np.max(np.abs(m - adjoint(m)))) <= tol


def is_antihermitian_traceless(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    """True iff m + m† vanishes entrywise and |Tr m| ≤ tol"""
    return float(np.max(np.abs(m + adjoint(m)))) <= tol and abs(trace(m)) <= tol


def jacobi_eigh(
    m: ComplexMatrix,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> Tuple[np.ndarray, ComplexMatrix]:
    """
    Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations

    Each rotation first removes the phase of the pivot a[p, q] with a diagonal
    unitary, then zeroes it with a real plane rotation. Sweeps stop when the
    off-diagonal Frobenius mass is at most tol times the diagonal mass.

    Args:
        m: Hermitian matrix (only Hermitian input is meaningful)
        tol: Relative off-diagonal threshold
        max_sweeps: Sweep limit; a warning is logged when reached

    Returns:
        (eigenvalues ascending, eigenvectors as columns)
    """
    a = np.array(m, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    off_mask = ~np.eye(n, dtype=bool)

    for sweep in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a[off_mask]) ** 2)))
        diag = math.sqrt(float(np.sum(np.abs(np.diag(a)) ** 2)))
        if off <= tol * diag or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                size = abs(apq)
                if size == 0.0:
                    continue
                phase = apq / size
                theta = 0.5 * math.atan2(2.0 * size, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                g = np.array(
                    [[c, s], [-s * np.conj(phase), c * np.conj(phase)]],
                    dtype=np.complex128,
                )
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = np.conj(g).T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        logger.warning(f"Jacobi diagonalization stopped after {max_sweeps} sweeps (n={n})")

    eigenvalues = np.real(np.diag(a)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def min_eigenvalue(m: ComplexMatrix) -> float:
    """Smallest eigenvalue of a Hermitian matrix"""
    return float(jacobi_eigh(m)[0][0])


def largest_singular_value(m: ComplexMatrix) -> float:
    """Square root of the largest eigenvalue of m†m (general operator norm)"""
    eigenvalues, _ = jacobi_eigh(adjoint(m) @ m)
    return math.sqrt(max(float(eigenvalues[-1]), 0.0))


def half_trace_norm(m: ComplexMatrix) -> float:
    """√(½ Tr(m†m)); equals the operator norm only for 2x2 anti-Hermitian traceless m"""
    return math.sqrt(0.5 * float(np.sum(np.abs(m) ** 2)))


def operator_norm(m: ComplexMatrix, tol: float = HERMITIAN_TOL, fast_path: bool = True) -> float:
    """
    Operator norm (largest singular value) of m

    For 2x2 anti-Hermitian traceless input the closed form √(½ Tr(m†m)) is used;
    under assertions it is checked against the Jacobi result. Larger matrices
    always take the Jacobi path.

    Args:
        m: Square complex matrix
        tol: Tolerance for recognizing anti-Hermitian traceless input
        fast_path: Allow the 2x2 closed form

    Returns:
        Largest singular value (0 for the zero matrix)
    """
    if fast_path and m.shape == (2, 2) and is_antihermitian_traceless(m, tol):
        value = half_trace_norm(m)
        if __debug__:
            reference = largest_singular_value(m)
            assert math.isclose(value, reference, rel_tol=1e-10, abs_tol=tol), (
                f"2x2 norm shortcut {value!r} disagrees with Jacobi {reference!r}"
            )
        return value
    return largest_singular_value(m)


def vector_norm(v: ComplexVector) -> float:
    """Euclidean norm √(Σ|v_i|²)"""
    return float(np.linalg.norm(v))
