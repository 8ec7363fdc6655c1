"""Small dense complex linear algebra for states and operators up to 8x8.

Everything is a plain ``numpy.ndarray`` with dtype complex128.  The helpers
here add the validation this package relies on (finiteness, shape checks,
Hermiticity/positivity smoke tests) on top of numpy's arithmetic.  No
decompositions, no inversion, no eigensolvers.
"""

from __future__ import annotations

import numpy as np

#: Default absolute tolerance for all numeric comparisons in this package.
DEFAULT_ATOL = 1e-12

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class InvariantViolation(RuntimeError):
    """A numerical invariant (trace preservation, Hermiticity, ...) failed."""


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only view-safe copy of ``a`` (shared, immutable)."""
    out = np.array(a, dtype=complex)
    out.flags.writeable = False
    return out


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch in matmul: {a.shape} x {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker (tensor) product, block layout a[r][c] * b."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def kron_all(*mats) -> np.ndarray:
    """Left-associated Kronecker product of one or more matrices."""
    if not mats:
        raise ValueError("kron_all needs at least one matrix")
    out = as_complex_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_complex_matrix(m))
    return out


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T


def trace(a) -> complex:
    """Sum of diagonal entries; requires a square matrix."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {a.shape}")
    return complex(np.trace(a))


def max_abs(a) -> float:
    """Max-norm (largest entrywise modulus)."""
    return float(np.max(np.abs(np.asarray(a))))


def is_unitary(a, tol: float = DEFAULT_ATOL) -> bool:
    """True iff max-norm of (a† a - I) is within ``tol``."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"is_unitary requires a square matrix, got {a.shape}")
    return max_abs(a.conj().T @ a - np.eye(a.shape[0])) <= tol


def is_hermitian(a, tol: float = DEFAULT_ATOL) -> bool:
    """True iff max-norm of (a - a†) is within ``tol``."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return max_abs(a - a.conj().T) <= tol


def positivity_smoke(a, tol: float = DEFAULT_ATOL) -> bool:
    """Cheap necessary conditions for positive semidefiniteness.

    Checks every diagonal entry and every 2x2 principal minor against
    ``-tol``.  Deliberately weaker than an eigenvalue test: the maps in this
    package preserve positivity by construction, so this is a smoke test.
    """
    a = as_complex_matrix(a)
    n = a.shape[0]
    d = a.diagonal().real
    if np.any(d < -tol):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            minor = d[i] * d[j] - abs(a[i, j]) ** 2
            if minor < -tol:
                return False
    return True


def check_density_matrix(rho, tol: float = DEFAULT_ATOL) -> np.ndarray:
    """Validate a density matrix (Hermitian, unit trace, positivity smoke).

    Returns the coerced array on success, raises InvariantViolation on the
    first failed property.
    """
    rho = as_complex_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got {rho.shape}")
    herm_defect = max_abs(rho - rho.conj().T)
    if herm_defect > tol:
        raise InvariantViolation(f"state is not Hermitian: defect {herm_defect:.3e} > {tol:.1e}")
    tr = trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvariantViolation(f"state trace {tr} deviates from 1 by more than {tol:.1e}")
    if not positivity_smoke(rho, tol):
        raise InvariantViolation("state failed the positivity smoke test")
    return rho
