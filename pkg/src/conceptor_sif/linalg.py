"""Dense linear algebra used by every spectral step.

Vectors and matrices are plain ``float64`` numpy arrays.  The helpers here
add the checks and conventions the rest of the package relies on: a
deterministic eigenvector sign, descending eigenvalue order, and PSD
clamping for covariance spectra.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, EmptyDataError, NumericalError

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-10


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvectors in columns, eigenvalues sorted descending."""

    eigenvectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T


def as_vec(v):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] == 0:
        raise DimensionError(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NumericalError("vector has non-finite entries")
    return v


def as_mat(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericalError("matrix has non-finite entries")
    return m


def _check_symmetric(m):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"matrix is not square: {m.shape}")
    if m.size == 0:
        raise DimensionError("matrix is empty")
    scale = max(1.0, float(np.max(np.abs(m))))
    asym = float(np.max(np.abs(m - m.T)))
    if asym > SYMMETRY_TOL * scale:
        raise DimensionError(f"matrix is not symmetric (max asymmetry {asym:.3g})")


def fix_signs(u):
    """Flip each column so its largest-magnitude entry is positive."""
    u = np.array(u, dtype=np.float64, copy=True)
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs


def sym_eig(m, psd=False):
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    m : array_like of shape (N, N)
        Symmetric within ``SYMMETRY_TOL`` (relative to the largest entry
        when that exceeds 1).
    psd : bool
        Treat ``m`` as positive semidefinite.  Eigenvalues in
        ``[-PSD_TOL * max(1, lambda_max), 0)`` are clamped to zero and
        anything more negative raises :class:`NumericalError`.

    Returns
    -------
    EigenDecomp
        Eigenvalues descending; each eigenvector's largest-magnitude entry
        is positive.
    """
    m = as_mat(m)
    _check_symmetric(m)
    sym = 0.5 * (m + m.T)
    w, u = np.linalg.eigh(sym)
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order]
    u = fix_signs(u[:, order])
    if psd:
        tol = PSD_TOL * max(1.0, float(w[0]))
        if w[-1] < -tol:
            raise NumericalError(
                f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3g})"
            )
        w = np.where(w < 0, 0.0, w)
    return EigenDecomp(eigenvectors=u, eigenvalues=w)


def uncentered_covariance(x):
    """Return ``(1/n) X X^T`` for data stored column-wise in an N x n matrix.

    No mean is subtracted.  The result is symmetrized so downstream symmetry
    checks see exact symmetry.
    """
    x = as_mat(x)
    n = x.shape[1]
    if n == 0:
        raise EmptyDataError("cannot form a covariance from zero data columns")
    r = (x @ x.T) / n
    return 0.5 * (r + r.T)


def matvec(m, v):
    m = as_mat(m)
    v = as_vec(v)
    if m.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot apply {m.shape} matrix to length-{v.shape[0]} vector")
    return m @ v


def matmul(a, b):
    a = as_mat(a)
    b = as_mat(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def solve_spd(a, b):
    """Solve ``a X = b`` for symmetric positive-definite ``a`` via Cholesky."""
    a = as_mat(a)
    b = np.asarray(b, dtype=np.float64)
    _check_symmetric(a)
    if b.shape[0] != a.shape[0]:
        raise DimensionError(f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}")
    try:
        factor = scipy.linalg.cho_factor(a, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("matrix is not positive definite") from exc
    return scipy.linalg.cho_solve(factor, b)
