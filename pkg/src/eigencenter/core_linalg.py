"""Dense symmetric matrix primitives and the symmetric eigensolver.

Matrices are plain ``numpy.ndarray`` objects.  Constructors that accept
user data (:func:`as_matrix`, :func:`as_symmetric`) reject NaN/Inf and
symmetrize explicitly, so everything downstream can assume exact symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EigenDecomposition",
    "EigenSolverError",
    "as_matrix",
    "as_symmetric",
    "frobenius_distance",
    "jacobi_eigen",
    "projector_distance",
    "sym_eigen",
    "trace",
]

JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12


class EigenSolverError(RuntimeError):
    """Raised when the eigensolver fails to converge.

    ``diagnostics`` holds the sweep count and the remaining off-diagonal
    norm relative to ``‖M‖_F``.
    """

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D float array."""
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains NaN or Inf")
    return m


def as_symmetric(a, atol: float | None = None) -> np.ndarray:
    """Return the symmetric part of a square matrix.

    If ``atol`` is given, the input must already be symmetric to within
    ``atol`` (absolute, entrywise); otherwise it is symmetrized silently.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if atol is not None and m.size and np.max(np.abs(m - m.T)) > atol:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix, eigenvalues non-increasing.

    ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``.  ``source_scale``
    records how the eigenvalues relate to the Gram-scale spectrum: 1 for
    Gram matrices, ``1/n`` for moment matrices ``(1/n) X Xᵀ``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source_scale: float = 1.0
    info: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def gram_scale_eigenvalues(self) -> np.ndarray:
        """Eigenvalues divided by ``source_scale`` (λᵢ rather than λᵢ/n)."""
        return self.eigenvalues / self.source_scale

    def residuals(self, m: np.ndarray) -> np.ndarray:
        """‖M vᵢ − λᵢ vᵢ‖ for every column."""
        r = m @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return np.linalg.norm(r, axis=0)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


_EPS2 = np.finfo(float).eps ** 2


def _canonical_signs(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made positive (first index on ties)
    if vecs.size == 0:
        return vecs
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def _sorted(vals: np.ndarray, vecs: np.ndarray):
    order = np.argsort(-vals, kind="stable")
    return vals[order], _canonical_signs(vecs[:, order])


def jacobi_eigen(
    m,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    tol: float = JACOBI_OFF_TOL,
) -> EigenDecomposition:
    """Cyclic Jacobi eigensolver.

    Rotations sweep the strict upper triangle in row-major order, so the
    result is deterministic for a given input.  Converged when the
    off-diagonal Frobenius norm falls below ``tol * ‖M‖_F``.

    Raises
    ------
    EigenSolverError
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = as_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    target = tol * norm

    def off(x):
        # summed directly; ‖A‖² − ‖diag A‖² cancels catastrophically
        return np.sqrt(2.0 * np.sum(np.triu(x, 1) ** 2))

    sweeps = 0
    while off(a) > target:
        if sweeps >= max_sweeps:
            raise EigenSolverError(
                f"Jacobi did not converge in {max_sweeps} sweeps",
                {"sweeps": sweeps, "off_norm": off(a), "relative_off": off(a) / norm},
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) <= _EPS2 * abs(a[q, q] - a[p, p]):
                    # rotation angle below round-off; tau would overflow
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweeps += 1

    vals, vecs = _sorted(np.diag(a).copy(), v)
    return EigenDecomposition(vals, vecs, info={"method": "jacobi", "sweeps": sweeps})


def sym_eigen(m, method: str = "lapack", source_scale: float = 1.0) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    m : (n, n) array_like
        Symmetric matrix; symmetrized before solving.
    method : {"lapack", "jacobi"}
        ``"lapack"`` calls ``numpy.linalg.eigh``; ``"jacobi"`` uses
        :func:`jacobi_eigen`.
    source_scale : float
        Stored on the result (see :class:`EigenDecomposition`).

    Returns
    -------
    EigenDecomposition
        Eigenvalues non-increasing; each eigenvector's largest-magnitude
        entry is positive.
    """
    a = as_symmetric(m)
    if method == "jacobi":
        dec = jacobi_eigen(a)
        return EigenDecomposition(dec.eigenvalues, dec.eigenvectors, source_scale, dec.info)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc), {"method": "lapack"}) from exc
    vals, vecs = _sorted(vals, vecs)
    return EigenDecomposition(vals, vecs, source_scale, {"method": "lapack"})


def trace(m) -> float:
    return float(np.trace(as_matrix(m)))


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def projector_distance(u, v) -> float:
    """Frobenius distance between the orthogonal projectors onto span(u), span(v).

    Columns of ``u`` and ``v`` must be orthonormal.  Used to compare
    eigenspaces when eigenvalues are (nearly) repeated.
    """
    u, v = as_matrix(u), as_matrix(v)
    return frobenius_distance(u @ u.T, v @ v.T)
