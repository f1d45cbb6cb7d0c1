"""Dense linear-algebra and numerical-calculus kernels.

Matrices are plain ``numpy.ndarray`` objects (2-d, float64, row-major).
Every subspace that the rest of the package reasons about (kernels, images,
orthogonal complements) is represented by an orthonormal basis produced by
:func:`svd_subspaces`, so subspace choices are deterministic and mutually
consistent within a run.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg


class InvalidInputError(ValueError):
    """Raised when an operation receives malformed numerical input."""


DEFAULT_TOL = 1e-8
DEFAULT_FD_STEP = 1e-4


def as_matrix(m):
    a = np.asarray(m, dtype=float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2:
        raise InvalidInputError(f"expected a matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def _fix_signs(basis):
    # Make the largest-magnitude entry of each column positive, so basis
    # representatives are deterministic up to roundoff.
    out = basis.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        k = int(np.argmax(np.abs(col)))
        if col[k] < 0:
            out[:, j] = -col
    return out


@dataclass
class SubspaceBasis:
    """Orthonormal basis of a subspace of R^ambient_dim.

    ``vectors`` has shape (ambient_dim, count); columns are orthonormal
    within ``tol``.
    """

    ambient_dim: int
    vectors: np.ndarray
    tol: float = DEFAULT_TOL

    @property
    def dim(self):
        return self.vectors.shape[1]

    def project(self, v):
        """Orthogonal projection of v onto the subspace."""
        return self.vectors @ (self.vectors.T @ v)

    def coords(self, v):
        """Coordinates of (the projection of) v in this basis."""
        return self.vectors.T @ v

    def embed(self, coords):
        return self.vectors @ coords

    def contains(self, v, tol=None):
        t = self.tol if tol is None else tol
        return float(np.linalg.norm(v - self.project(v))) <= t * max(1.0, float(np.linalg.norm(v)))

    def residual_off(self, v):
        """Norm of the component of v orthogonal to the subspace."""
        return float(np.linalg.norm(v - self.project(v)))


def svd_subspaces(m, tol=DEFAULT_TOL):
    """Kernel, image and image-complement of a linear map, via one SVD.

    Returns ``(kernel, image, coimage_complement)`` where ``kernel`` lives in
    the domain, ``image`` spans the columns of ``m`` in the codomain and
    ``coimage_complement`` is the orthogonal complement of the image in the
    codomain (the deterministic stand-in for the cokernel). Rank is the
    number of singular values above ``tol``.
    """
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    a = as_matrix(m)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        kernel = np.eye(cols)
        image = np.zeros((rows, 0))
        comp = np.eye(rows)
        return (
            SubspaceBasis(cols, kernel, tol),
            SubspaceBasis(rows, image, tol),
            SubspaceBasis(rows, comp, tol),
        )
    u, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > tol))
    kernel = _fix_signs(vt[rank:].T)
    image = _fix_signs(u[:, :rank])
    comp = _fix_signs(u[:, rank:])
    return (
        SubspaceBasis(cols, kernel, tol),
        SubspaceBasis(rows, image, tol),
        SubspaceBasis(rows, comp, tol),
    )


def orth_union(*bases_or_mats, tol=DEFAULT_TOL):
    """Orthonormal basis of the span of the given columns."""
    cols = []
    for b in bases_or_mats:
        v = b.vectors if isinstance(b, SubspaceBasis) else as_matrix(b)
        if v.shape[1]:
            cols.append(v)
    if not cols:
        raise InvalidInputError("at least one nonzero-width block required")
    stacked = np.hstack(cols)
    _, image, _ = svd_subspaces(stacked, tol)
    return image


def intersect(b0, b1, tol=DEFAULT_TOL):
    """Orthonormal basis of the intersection of two subspaces."""
    if b0.ambient_dim != b1.ambient_dim:
        raise InvalidInputError("subspaces live in different ambient spaces")
    n = b0.ambient_dim
    if b0.dim == 0 or b1.dim == 0:
        return SubspaceBasis(n, np.zeros((n, 0)), tol)
    # v in both spans  <=>  (I - P0)v = 0 and (I - P1)v = 0.
    p0 = b0.vectors @ b0.vectors.T
    p1 = b1.vectors @ b1.vectors.T
    stacked = np.vstack([np.eye(n) - p0, np.eye(n) - p1])
    kernel, _, _ = svd_subspaces(stacked, tol)
    return kernel


def mat_exp(x):
    """Matrix exponential (Pade scaling-and-squaring via scipy)."""
    a = as_matrix(x)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError("mat_exp needs a square matrix")
    return scipy.linalg.expm(a)


def central_diff(f, h=DEFAULT_FD_STEP):
    """(f(h) - f(-h)) / 2h: O(h^2) derivative of a matrix-valued curve at 0."""
    if h <= 0:
        raise InvalidInputError("step h must be positive")
    return (np.asarray(f(h), dtype=float) - np.asarray(f(-h), dtype=float)) / (2.0 * h)


def central_diff4(f, h=DEFAULT_FD_STEP):
    """Fourth-order central difference at 0 (Richardson of central_diff).

    Used where a first-order derivative feeds a residual that must sit at
    1e-9 or below; plain O(h^2) differences at h=1e-4 are too coarse there.
    """
    d1 = central_diff(f, h)
    d2 = central_diff(f, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def max_abs(x):
    a = np.asarray(x, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))
