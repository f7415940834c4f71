"""Means, weighted means and the (double-)centering projections.

Two projections are used throughout::

    P1 = (1/n) 1 1ᵀ        orthogonal projection onto the all-ones vector
    Pw = w 1ᵀ              oblique projection for a weight vector with wᵀ1 = 1

Centering data is ``X (I - P)``, centering a Gram matrix is
``(I - P)ᵀ K (I - P)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_linalg import as_matrix, as_symmetric
from .kernels import CPD, PSD, GramMatrix

__all__ = [
    "CenteringScheme",
    "MeanInfo",
    "WeightVector",
    "center_covariance",
    "center_data",
    "double_center",
    "mean_norm_sq_from_gram",
    "mean_vector",
    "moment_matrix",
    "ones_projector",
    "weighted_projector",
]

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class MeanInfo:
    mu: np.ndarray | None
    mu_norm_sq: float


@dataclass(frozen=True)
class WeightVector:
    """Weights ``omega`` with ``omegaᵀ1 = 1``."""

    omega: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float).ravel()
        if w.size == 0 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a non-empty finite vector")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1 (got {w.sum():.15g})")
        object.__setattr__(self, "omega", w)

    @classmethod
    def normalized(cls, w) -> WeightVector:
        """Rescale ``w`` to unit sum, then nudge the last entry to kill round-off."""
        w = np.asarray(w, dtype=float).ravel()
        s = w.sum()
        if s == 0:
            raise ValueError("weights sum to zero")
        w = w / s
        w[-1] = 1.0 - w[:-1].sum()
        return cls(w)

    @classmethod
    def uniform(cls, n: int) -> WeightVector:
        return cls.normalized(np.ones(n))

    @property
    def n(self) -> int:
        return self.omega.shape[0]

    def weighted_mean(self, x) -> np.ndarray:
        return as_matrix(x) @ self.omega


@dataclass(frozen=True)
class CenteringScheme:
    """``"none"``, ``"mean"`` or ``"weighted"`` (with ``weights``)."""

    variant: str = "mean"
    weights: WeightVector | None = None

    def __post_init__(self):
        if self.variant not in ("none", "mean", "weighted"):
            raise ValueError(f"unknown centering variant {self.variant!r}")
        if (self.variant == "weighted") != (self.weights is not None):
            raise ValueError("weighted centering needs weights, and only it does")

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def mean(cls):
        return cls("mean")

    @classmethod
    def weighted(cls, omega):
        w = omega if isinstance(omega, WeightVector) else WeightVector(omega)
        return cls("weighted", w)

    def omega(self, n: int) -> np.ndarray | None:
        """Effective weight vector (``1/n`` for mean centering, None for none)."""
        if self.variant == "none":
            return None
        if self.variant == "mean":
            return np.full(n, 1.0 / n)
        if self.weights.n != n:
            raise ValueError(f"weights have length {self.weights.n}, data have n={n}")
        return self.weights.omega

    def to_dict(self) -> dict:
        d = {"variant": self.variant}
        if self.weights is not None:
            d["omega"] = self.weights.omega.tolist()
        return d


def ones_projector(n: int) -> np.ndarray:
    return np.full((n, n), 1.0 / n)


def weighted_projector(omega) -> np.ndarray:
    w = omega.omega if isinstance(omega, WeightVector) else np.asarray(omega, float)
    return np.outer(w, np.ones_like(w))


def mean_vector(x) -> MeanInfo:
    x = as_matrix(x)
    if x.shape[1] < 1:
        raise ValueError("need at least one sample")
    mu = x.mean(axis=1)
    return MeanInfo(mu, float(mu @ mu))


def mean_norm_sq_from_gram(k) -> float:
    """‖μ‖² in the space the Gram matrix lives in: (1/n²) 1ᵀK1."""
    k = np.asarray(getattr(k, "matrix", k), dtype=float)
    n = k.shape[0]
    return float(k.sum() / n**2)


def moment_matrix(x) -> np.ndarray:
    """Second-order non-central moment (1/n) X Xᵀ."""
    x = as_matrix(x)
    return as_symmetric(x @ x.T / x.shape[1])


def center_data(x, scheme: CenteringScheme | None = None) -> np.ndarray:
    """Shift columns of ``x`` so that their (weighted) mean is zero."""
    x = as_matrix(x)
    scheme = scheme or CenteringScheme.mean()
    w = scheme.omega(x.shape[1])
    if w is None:
        return x.copy()
    if scheme.variant == "mean":
        return x - x.mean(axis=1, keepdims=True)
    return x - (x @ w)[:, None]


def double_center(k, scheme: CenteringScheme | None = None) -> GramMatrix:
    """Center a Gram matrix in the space it lives in.

    Mean centering subtracts row and column means and adds back the grand
    mean; weighted centering computes ``(I - Pw)ᵀ K (I - Pw)`` through the
    vector ``K w`` and the scalar ``wᵀKw``.  The output is re-symmetrized.
    A conditionally positive definite input becomes PSD after centering.
    """
    gram = k if isinstance(k, GramMatrix) else GramMatrix(as_symmetric(k), PSD)
    m = gram.matrix
    scheme = scheme or CenteringScheme.mean()
    n = m.shape[0]
    w = scheme.omega(n)
    if w is None:
        return GramMatrix(m.copy(), gram.kind)
    if scheme.variant == "mean":
        row = m.mean(axis=1)
        col = m.mean(axis=0)
        grand = row.mean()
        kc = m - row[:, None] - col[None, :] + grand
    else:
        kw = m @ w
        kc = m - kw[:, None] - kw[None, :] + float(w @ kw)
    kind = PSD if gram.kind in (PSD, CPD) else gram.kind
    return GramMatrix(0.5 * (kc + kc.T), kind)


def center_covariance(c, mu: MeanInfo, mu_omega=None) -> np.ndarray:
    """Covariance from the non-central moment C.

    Mean centering: ``C - μμᵀ``.  With a weighted mean ``mu_omega``:
    ``C - μω μᵀ - μ μωᵀ + μω μωᵀ``.
    """
    c = as_symmetric(c)
    m = np.asarray(mu.mu, dtype=float)
    if m.shape[0] != c.shape[0]:
        raise ValueError(f"mean has length {m.shape[0]}, moment matrix is {c.shape}")
    if mu_omega is None:
        return as_symmetric(c - np.outer(m, m))
    mw = np.asarray(mu_omega, dtype=float)
    return as_symmetric(c - np.outer(mw, m) - np.outer(m, mw) + np.outer(mw, mw))
