"""Kernel functions and Gram-matrix construction.

Data are stored column-wise: ``x`` has shape ``(d, n)``, one sample per
column.  Four kernels are supported::

    linear                  xᵀy
    polynomial(c, p)        (c + xᵀy)^p
    gaussian(sigma)         exp(-‖x - y‖² / (2 sigma²))
    negative_half_sqdist    -½ ‖x - y‖²      (conditionally positive definite)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_linalg import as_matrix, as_symmetric

__all__ = [
    "GramMatrix",
    "KernelSpec",
    "cpd_probe",
    "distance_matrix_to_delta",
    "gram_matrix",
    "kernel_eval",
    "parse_kernel",
    "psd_probe",
    "sq_distances",
]

PSD = "psd"
CPD = "conditionally_pd"
_KINDS = ("linear", "polynomial", "gaussian", "negative_half_sqdist")


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "linear"
    c: float = 0.0
    p: int = 1
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError("gaussian kernel needs sigma > 0")
        if self.kind == "polynomial" and (int(self.p) != self.p or self.p < 1):
            raise ValueError("polynomial kernel needs an integer degree p >= 1")

    @classmethod
    def linear(cls):
        return cls("linear")

    @classmethod
    def polynomial(cls, c: float, p: int):
        return cls("polynomial", c=float(c), p=int(p))

    @classmethod
    def gaussian(cls, sigma: float):
        return cls("gaussian", sigma=float(sigma))

    @classmethod
    def negative_half_sqdist(cls):
        return cls("negative_half_sqdist")

    @property
    def gram_kind(self) -> str:
        return CPD if self.kind == "negative_half_sqdist" else PSD

    def to_dict(self) -> dict:
        if self.kind == "polynomial":
            return {"kind": "polynomial", "c": self.c, "p": self.p}
        if self.kind == "gaussian":
            return {"kind": "gaussian", "sigma": self.sigma}
        return {"kind": self.kind}

    def __str__(self):
        if self.kind == "polynomial":
            return f"poly:{self.c:g}:{self.p}"
        if self.kind == "gaussian":
            return f"gaussian:{self.sigma:g}"
        return self.kind


def parse_kernel(text: str) -> KernelSpec:
    """Parse ``name[:param[:param]]``, e.g. ``gaussian:0.5`` or ``poly:1:2``."""
    name, *params = text.strip().split(":")
    name = name.lower()
    try:
        if name == "linear" and not params:
            return KernelSpec.linear()
        if name in ("gaussian", "rbf") and len(params) == 1:
            return KernelSpec.gaussian(float(params[0]))
        if name in ("poly", "polynomial") and len(params) == 2:
            p = float(params[1])
            if p != int(p):
                raise ValueError
            return KernelSpec.polynomial(float(params[0]), int(p))
        if name in ("negative_half_sqdist", "nhsd", "distance") and not params:
            return KernelSpec.negative_half_sqdist()
    except ValueError:
        pass
    raise ValueError(
        f"bad kernel spec {text!r}; expected linear, gaussian:SIGMA, poly:C:P "
        "or negative_half_sqdist"
    )


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric n×n kernel matrix with its definiteness class.

    ``kind`` is ``"psd"`` (βᵀKβ ≥ 0 for all β) or ``"conditionally_pd"``
    (βᵀKβ ≥ 0 only for βᵀ1 = 0).
    """

    matrix: np.ndarray
    kind: str = PSD

    def __post_init__(self):
        if self.kind not in (PSD, CPD):
            raise ValueError(f"unknown Gram kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_psd(self) -> bool:
        return self.kind == PSD


def kernel_eval(spec: KernelSpec, x, y) -> float:
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    if spec.kind == "linear":
        return float(x @ y)
    if spec.kind == "polynomial":
        return float((spec.c + x @ y) ** spec.p)
    diff = x - y
    sq = float(diff @ diff)
    if spec.kind == "gaussian":
        return float(np.exp(-sq / (2.0 * spec.sigma**2)))
    return -0.5 * sq


def _mirror_upper(a: np.ndarray) -> np.ndarray:
    return np.triu(a) + np.triu(a, 1).T


def sq_distances(x) -> np.ndarray:
    """Pairwise squared Euclidean distances between the columns of ``x``.

    Differences are formed explicitly (no ‖x‖² + ‖y‖² − 2xᵀy expansion), so
    the diagonal is exactly zero and small distances keep full precision.
    """
    x = as_matrix(x)
    n = x.shape[1]
    out = np.zeros((n, n))
    for i in range(n):
        diff = x[:, i:] - x[:, [i]]
        out[i, i:] = np.einsum("ij,ij->j", diff, diff)
    return _mirror_upper(out)


def gram_matrix(x, spec: KernelSpec | None = None) -> GramMatrix:
    """Kernel matrix of the columns of ``x`` (shape ``(d, n)``)."""
    spec = spec or KernelSpec.linear()
    x = as_matrix(x)
    if x.shape[1] < 1:
        raise ValueError("need at least one sample")
    if spec.kind in ("linear", "polynomial"):
        k = _mirror_upper(x.T @ x)
        if spec.kind == "polynomial":
            k = (spec.c + k) ** spec.p
    else:
        sq = sq_distances(x)
        if spec.kind == "gaussian":
            k = np.exp(-sq / (2.0 * spec.sigma**2))
        else:
            k = -0.5 * sq
    return GramMatrix(k, spec.gram_kind)


def distance_matrix_to_delta(d, bias: float | None = None, atol: float = 1e-12) -> GramMatrix:
    """Turn pairwise distances into Δ with entries −½ dᵢⱼ².

    With ``bias`` set, ``bias`` is added to every entry; the result is
    labelled PSD only if its smallest eigenvalue is numerically nonnegative.

    Raises
    ------
    ValueError
        On negative entries, a nonzero diagonal, or asymmetry beyond ``atol``.
    """
    d = as_matrix(d)
    if d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got {d.shape}")
    if np.any(d < 0):
        raise ValueError("distance matrix has negative entries")
    if np.any(np.diag(d) != 0):
        raise ValueError("distance matrix has a nonzero diagonal")
    scale = max(1.0, float(np.max(d))) if d.size else 1.0
    d = as_symmetric(d, atol=atol * scale)
    delta = -0.5 * d * d
    np.fill_diagonal(delta, 0.0)
    if bias is None:
        return GramMatrix(delta, CPD)
    delta = delta + bias
    lo = np.linalg.eigvalsh(delta)[0]
    top = max(1.0, float(np.max(np.abs(delta))))
    return GramMatrix(delta, PSD if lo >= -1e-10 * top * delta.shape[0] else CPD)


def _probe_vectors(n: int, count: int, rng, zero_sum: bool) -> np.ndarray:
    b = rng.standard_normal((n, count))
    if zero_sum:
        b -= b.mean(axis=0)
    return b


def psd_probe(k, count: int = 100, seed: int = 0) -> float:
    """Smallest βᵀKβ / (‖β‖²‖K‖_F) over random probes β."""
    k = np.asarray(getattr(k, "matrix", k), dtype=float)
    b = _probe_vectors(k.shape[0], count, np.random.default_rng(seed), zero_sum=False)
    q = np.einsum("ij,ij->j", b, k @ b) / np.einsum("ij,ij->j", b, b)
    return float(q.min() / max(np.linalg.norm(k), np.finfo(float).tiny))


def cpd_probe(k, count: int = 100, seed: int = 0) -> float:
    """Smallest βᵀKβ / (‖β‖²‖K‖_F) over random probes with βᵀ1 = 0.

    Returns ``inf`` when n = 1 (no nonzero zero-sum vectors exist).
    """
    k = np.asarray(getattr(k, "matrix", k), dtype=float)
    n = k.shape[0]
    if n < 2:
        return float("inf")
    b = _probe_vectors(n, count, np.random.default_rng(seed), zero_sum=True)
    q = np.einsum("ij,ij->j", b, k @ b) / np.einsum("ij,ij->j", b, b)
    return float(q.min() / max(np.linalg.norm(k), np.finfo(float).tiny))
