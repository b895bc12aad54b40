"""Conceptor matrices and the soft projectors derived from them.

A conceptor for data ``X`` (N x n, one sample per column) with penalty
weight ``aperture_inv_sq`` is the minimizer of

    (1/n) sum_i ||x_i - C x_i||^2 + aperture_inv_sq * ||C||_F^2

which has the closed form ``C = R (R + aperture_inv_sq I)^{-1}`` with
``R = (1/n) X X^T``.  It shares eigenvectors with ``R`` and maps each
covariance eigenvalue ``sigma`` to ``sigma / (sigma + aperture_inv_sq)``.

The API takes the penalty weight directly rather than the aperture itself;
``aperture_inv_sq = 1`` is the usual setting for sentence embeddings.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import EigenDecomp, as_mat, as_vec, sym_eig, uncentered_covariance

MAX_CONCEPTOR_EIGENVALUE = 1.0 - 1e-15


@dataclass(frozen=True)
class Conceptor:
    """Symmetric N x N matrix with eigenvalues in ``[0, 1)``.

    ``spectrum`` holds the conceptor's own eigenvalues; ``covariance_eigenvalues``
    holds the ``sigma`` values of the covariance it was fitted to.  Both are
    ordered to match ``spectrum.eigenvectors``.
    """

    matrix: np.ndarray
    aperture_inv_sq: float
    spectrum: EigenDecomp
    covariance_eigenvalues: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SoftProjector:
    """A linear map applied to sentence vectors, usually ``I - C``."""

    matrix: np.ndarray
    source: Conceptor = None

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, v):
        return apply(self, v)

    def apply_rows(self, vectors):
        """Apply to each row of an (m, N) array."""
        vectors = as_mat(vectors)
        if vectors.shape[1] != self.dim:
            raise DimensionError(f"rows have length {vectors.shape[1]}, projector is {self.dim}-d")
        return vectors @ self.matrix.T


def _check_aperture(aperture_inv_sq):
    if not np.isfinite(aperture_inv_sq) or aperture_inv_sq <= 0:
        raise ParameterError(f"aperture_inv_sq must be positive, got {aperture_inv_sq}")


def conceptor_from_covariance(r, aperture_inv_sq):
    """Conceptor for an already-formed PSD covariance ``r``."""
    _check_aperture(aperture_inv_sq)
    eig = sym_eig(r, psd=True)
    sigma = eig.eigenvalues
    s = np.clip(sigma / (sigma + aperture_inv_sq), 0.0, MAX_CONCEPTOR_EIGENVALUE)
    u = eig.eigenvectors
    c = (u * s) @ u.T
    c = 0.5 * (c + c.T)
    c.setflags(write=False)
    return Conceptor(
        matrix=c,
        aperture_inv_sq=float(aperture_inv_sq),
        spectrum=EigenDecomp(eigenvectors=u, eigenvalues=s),
        covariance_eigenvalues=sigma,
    )


def compute_conceptor(data, aperture_inv_sq=1.0):
    """Fit a conceptor to the columns of ``data`` (N x n).

    Built from the eigendecomposition of the uncentered covariance rather
    than an explicit matrix inverse.  All-zero data gives ``C = 0``.
    """
    _check_aperture(aperture_inv_sq)
    return conceptor_from_covariance(uncentered_covariance(data), aperture_inv_sq)


def conceptor_objective(c, data, aperture_inv_sq):
    """Mean squared reconstruction error of ``c`` plus the Frobenius penalty."""
    c = as_mat(c)
    x = as_mat(data)
    if c.shape[0] != c.shape[1] or c.shape[1] != x.shape[0]:
        raise DimensionError(f"conceptor {c.shape} does not match data {x.shape}")
    n = x.shape[1]
    resid = x - c @ x
    return float(np.sum(resid * resid) / n + aperture_inv_sq * np.sum(c * c))


def complement(c):
    """``G = I - C``: damps each direction by ``a / (sigma + a)``."""
    g = np.eye(c.dim) - c.matrix
    g.setflags(write=False)
    return SoftProjector(matrix=g, source=c)


def apply(p, v):
    v = as_vec(v)
    if v.shape[0] != p.dim:
        raise DimensionError(f"vector has length {v.shape[0]}, projector is {p.dim}-d")
    return p.matrix @ v


def hard_override(c, zeroed):
    """Replace the complement's spectrum with ``zeroed`` zeros then ones.

    The result projects onto the orthogonal complement of the top ``zeroed``
    eigenvectors of ``c``; ``zeroed = 1`` is ordinary first-PC removal.
    """
    if isinstance(zeroed, bool) or not isinstance(zeroed, (int, np.integer)):
        raise ParameterError(f"zeroed must be an integer, got {zeroed!r}")
    if not 0 <= zeroed <= c.dim:
        raise ParameterError(f"zeroed must be in [0, {c.dim}], got {zeroed}")
    u = c.spectrum.eigenvectors
    mask = np.ones(c.dim)
    mask[:zeroed] = 0.0
    g = (u * mask) @ u.T
    g = 0.5 * (g + g.T)
    g.setflags(write=False)
    return SoftProjector(matrix=g, source=c)


def projector_to_json(p):
    aperture = p.source.aperture_inv_sq if p.source is not None else None
    return json.dumps(
        {
            "dim": p.dim,
            "aperture_inv_sq": aperture,
            "matrix": [[float(x) for x in row] for row in p.matrix],
        }
    )


def projector_from_json(text):
    """Rebuild a projector matrix from :func:`projector_to_json` output.

    The source conceptor is not stored, so ``source`` is None.
    """
    obj = json.loads(text)
    m = as_mat(obj["matrix"])
    if m.shape != (obj["dim"], obj["dim"]):
        raise DimensionError(f"matrix shape {m.shape} does not match dim {obj['dim']}")
    m.setflags(write=False)
    return SoftProjector(matrix=m, source=None)
