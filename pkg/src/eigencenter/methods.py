"""Kernel PCA, kernel entropy component analysis, classical MDS and the
rank-one covariance update analyzer."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .centering import CenteringScheme, double_center
from .core_linalg import as_matrix, as_symmetric, sym_eigen
from .kernels import CPD, GramMatrix, KernelSpec, distance_matrix_to_delta, gram_matrix
from .spectral_analysis import (
    CheckResult,
    check_mds_bound,
    check_mds_separation,
    eigen_pairs,
)

__all__ = [
    "ComponentSet",
    "Embedding",
    "EntropyDecomposition",
    "RankOneStep",
    "RankOneTrace",
    "keca_decompose",
    "kpca_fit",
    "kpca_project",
    "kpca_transform",
    "mds_bound_check",
    "mds_embed",
    "mds_scaling_invariance",
    "mds_separation_check",
    "rank_one_analyze",
    "rank_one_step",
    "rank_one_trace",
]

RANK_RTOL = 1e-8
NORMALIZATIONS = ("variance_preserving", "unit_variance")


# ---------------------------------------------------------------- kernel PCA

@dataclass
class ComponentSet:
    """Fitted kernel PCA model.

    Columns of ``coefficients`` are the scaled eigenvectors αⱼ.  The
    centering statistics (``omega``, ``k_omega`` = Kω, ``omega_k_omega`` =
    ωᵀKω) are those of the training Gram matrix and are reused to center
    the kernel column of a new point.
    """

    coefficients: np.ndarray
    eigenvalues: np.ndarray
    normalization: str
    centering: CenteringScheme
    omega: np.ndarray | None = None
    k_omega: np.ndarray | None = None
    omega_k_omega: float = 0.0
    kernel: KernelSpec | None = None
    training_x: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.coefficients.shape[0]

    @property
    def m(self) -> int:
        return self.coefficients.shape[1]

    def to_dict(self) -> dict:
        d = {
            "coefficients": self.coefficients.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "normalization": self.normalization,
            "centering": self.centering.to_dict(),
            "omega": None if self.omega is None else self.omega.tolist(),
            "k_omega": None if self.k_omega is None else self.k_omega.tolist(),
            "omega_k_omega": self.omega_k_omega,
            "kernel": None if self.kernel is None else self.kernel.to_dict(),
        }
        if self.training_x is not None:
            d["training_x"] = self.training_x.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ComponentSet:
        cen = d["centering"]
        scheme = (CenteringScheme.weighted(cen["omega"]) if cen["variant"] == "weighted"
                  else CenteringScheme(cen["variant"]))
        arr = lambda v: None if v is None else np.asarray(v, dtype=float)
        return cls(
            coefficients=np.asarray(d["coefficients"], dtype=float),
            eigenvalues=np.asarray(d["eigenvalues"], dtype=float),
            normalization=d["normalization"],
            centering=scheme,
            omega=arr(d.get("omega")),
            k_omega=arr(d.get("k_omega")),
            omega_k_omega=float(d.get("omega_k_omega", 0.0)),
            kernel=KernelSpec(**d["kernel"]) if d.get("kernel") else None,
            training_x=arr(d.get("training_x")),
        )


def kpca_fit(k, scheme: CenteringScheme | None = None, m: int = 1,
             normalization: str = "variance_preserving", x=None,
             spec: KernelSpec | None = None) -> ComponentSet:
    """Top-``m`` eigenpairs of the (optionally centered) Gram matrix.

    ``variance_preserving`` scales αⱼ to ‖αⱼ‖² = 1/λⱼ, so the training
    scores are √λⱼ vⱼ; ``unit_variance`` scales to ‖αⱼ‖² = 1/λⱼ², so the
    scores are the unit eigenvectors vⱼ themselves.

    Pass the training data ``x`` and kernel ``spec`` to enable
    :func:`kpca_transform` on raw points.

    Raises
    ------
    ValueError
        If ``m`` exceeds the numerical rank (eigenvalues above 1e-8·λ₁).
    """
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    if m < 1:
        raise ValueError("m must be at least 1")
    gram = k if isinstance(k, GramMatrix) else GramMatrix(as_symmetric(k))
    scheme = scheme or CenteringScheme.mean()
    n = gram.n
    omega = scheme.omega(n)
    target = double_center(gram, scheme)
    dec = sym_eigen(target.matrix)
    lam = dec.eigenvalues
    # threshold against the input scale too, so a centered matrix of pure
    # round-off has rank 0
    ref = max(float(lam[0]), float(np.max(np.abs(gram.matrix))))
    rank = int(np.sum(lam > RANK_RTOL * ref)) if ref > 0 else 0
    if m > rank:
        raise ValueError(f"m={m} exceeds the numerical rank {rank}")
    vals = lam[:m]
    vecs = dec.eigenvectors[:, :m]
    power = 0.5 if normalization == "variance_preserving" else 1.0
    coef = vecs / vals**power
    kw, wkw = None, 0.0
    if omega is not None:
        kw = gram.matrix @ omega
        wkw = float(omega @ kw)
    return ComponentSet(coef, vals.copy(), normalization, scheme, omega, kw, wkw, spec,
                        None if x is None else as_matrix(x).copy())


def kpca_project(model: ComponentSet, kernel_column) -> np.ndarray:
    """Scores of a new point from its kernel column ``[κ(x, xᵢ)]ᵢ``.

    For a centered model the column is centered with the training
    statistics: κ̃ᵢ = κ(x, xᵢ) − ωᵀκ(x) − (Kω)ᵢ + ωᵀKω, which is the inner
    product of φ(x) − μω with φ(xᵢ) − μω.  Accepts an ``(n,)`` vector or an
    ``(n, p)`` block of columns.
    """
    kx = np.asarray(kernel_column, dtype=float)
    single = kx.ndim == 1
    if single:
        kx = kx[:, None]
    if kx.shape[0] != model.n:
        raise ValueError(f"kernel column has length {kx.shape[0]}, model has n={model.n}")
    if model.omega is not None:
        kx = kx - (model.omega @ kx)[None, :] - model.k_omega[:, None] + model.omega_k_omega
    scores = model.coefficients.T @ kx
    return scores[:, 0] if single else scores


def _cross_kernel(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if spec.kind in ("linear", "polynomial"):
        g = a.T @ b
        return (spec.c + g) ** spec.p if spec.kind == "polynomial" else g
    sq = np.zeros((a.shape[1], b.shape[1]))
    for j in range(b.shape[1]):
        diff = a - b[:, [j]]
        sq[:, j] = np.einsum("ij,ij->j", diff, diff)
    return np.exp(-sq / (2 * spec.sigma**2)) if spec.kind == "gaussian" else -0.5 * sq


def kpca_transform(model: ComponentSet, x_new) -> np.ndarray:
    """Scores (m × p) of new points given as columns of ``x_new``."""
    if model.training_x is None or model.kernel is None:
        raise ValueError("model was fitted without training data and kernel")
    x_new = as_matrix(x_new)
    if x_new.shape[0] != model.training_x.shape[0]:
        raise ValueError("new points have the wrong dimension")
    return kpca_project(model, _cross_kernel(model.kernel, model.training_x, x_new))


# ----------------------------------------------------------------------- ECA

@dataclass
class EntropyDecomposition:
    """Per-eigenpair contributions λᵢ(αᵢᵀ1)²/n² to ∫p̂² = ‖μ‖²."""

    terms: np.ndarray
    total: float
    selected: list[int]
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "terms": self.terms.tolist(),
            "total": self.total,
            "selected": list(self.selected),
            "eigenvalues": self.eigenvalues.tolist(),
        }


def keca_decompose(k, m: int | None = None) -> EntropyDecomposition:
    """Split the Parzen quadratic-entropy estimate across eigenpairs of K.

    ``selected`` holds the indices of the ``m`` largest terms (ties to the
    smaller index), which need not be the ``m`` largest eigenvalues.  The
    input should be the non-centered Gram matrix; a warning is issued when
    the total is numerically zero, as happens for a centered one.
    """
    gram = k if isinstance(k, GramMatrix) else GramMatrix(as_symmetric(k))
    n = gram.n
    dec = sym_eigen(gram.matrix)
    overlaps = dec.eigenvectors.T @ np.ones(n)
    terms = dec.eigenvalues * overlaps**2 / n**2
    total = float(np.sum(terms))
    scale = max(1.0, float(np.trace(gram.matrix)) / n)
    if abs(total) <= 1e-10 * scale:
        warnings.warn("entropy estimate is numerically zero; was the Gram matrix centered?",
                      RuntimeWarning, stacklevel=2)
    m = n if m is None else min(m, n)
    order = np.lexsort((np.arange(n), -terms))
    return EntropyDecomposition(terms, total, [int(i) for i in order[:m]], dec.eigenvalues)


# ----------------------------------------------------------------------- MDS

@dataclass
class Embedding:
    """Coordinates recovered from distances; ``points`` is m × n."""

    points: np.ndarray
    retained_eigenvalues: np.ndarray
    discarded_negative_mass: float
    clamped: bool = False
    eigenvalues: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def to_dict(self) -> dict:
        return {
            "points": self.points.tolist(),
            "retained_eigenvalues": self.retained_eigenvalues.tolist(),
            "discarded_negative_mass": self.discarded_negative_mass,
            "clamped": self.clamped,
            "eigenvalues": self.eigenvalues.tolist(),
        }


def mds_embed(distances, m: int, bias: float | None = None) -> Embedding:
    """Classical MDS.

    Δ = −½ D∘D is double-centered, and the top ``m`` positive eigenpairs give
    coordinates Λ^½ Aᵀ.  Negative eigenvalues are dropped; the sum of their
    magnitudes is reported.  If ``m`` exceeds the number of positive
    eigenvalues it is clamped and a warning is issued.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    delta = distance_matrix_to_delta(distances, bias=bias)
    kc = double_center(delta, CenteringScheme.mean())
    dec = sym_eigen(kc.matrix)
    lam = dec.eigenvalues
    lead = max(float(lam[0]), 0.0)
    positive = int(np.sum(lam > RANK_RTOL * lead)) if lead > 0 else 0
    clamped = m > positive
    if clamped:
        warnings.warn(f"only {positive} positive eigenvalues; clamping m={m} to {positive}",
                      RuntimeWarning, stacklevel=2)
        m = positive
    vals = lam[:m]
    points = np.sqrt(vals)[:, None] * dec.eigenvectors[:, :m].T
    negative = float(np.sum(np.abs(lam[lam < 0])))
    return Embedding(points, vals.copy(), negative, clamped, lam.copy())


def mds_separation_check(delta, kc=None) -> CheckResult:
    """σⱼ₊₂(Δ) ≤ σⱼ(Kc) ≤ σⱼ(Δ)."""
    if kc is None:
        kc = double_center(delta, CenteringScheme.mean())
    return check_mds_separation(delta, kc)


def mds_bound_check(delta, distances=None) -> CheckResult:
    """Lower bound on λc₁ (and partial sums) from the eigenpairs of Δ."""
    gram = delta if isinstance(delta, GramMatrix) else GramMatrix(as_symmetric(delta), CPD)
    kc = double_center(gram, CenteringScheme.mean())
    pairs = eigen_pairs(gram, "gram_raw")
    lamc = np.sort(np.linalg.eigvalsh(kc.matrix))[::-1]
    return check_mds_bound(pairs, lamc, distances)


def _sign_invariant_distance(vals, a, b, rtol=1e-8) -> float:
    """Distance between eigenvector sets a and b, ignoring sign and basis
    choice within clusters of (relatively) equal eigenvalues."""
    worst, i, n = 0.0, 0, len(vals)
    scale = max(abs(float(vals[0])), 1e-300) if n else 1.0
    while i < n:
        j = i + 1
        while j < n and abs(vals[j] - vals[j - 1]) <= rtol * scale:
            j += 1
        if j - i == 1:
            d = min(np.linalg.norm(a[:, i] - b[:, i]), np.linalg.norm(a[:, i] + b[:, i]))
        else:
            pa, pb = a[:, i:j], b[:, i:j]
            d = np.linalg.norm(pa @ pa.T - pb @ pb.T)
        worst = max(worst, float(d))
        i = j
    return worst


def mds_scaling_invariance(x, xi: float, rtol: float = 1e-8, score_atol: float = 1e-7) -> CheckResult:
    """Scaling data by ξ scales Δ by ξ² and leaves unit-variance scores unchanged.

    Compares the spectra of Δ and Δξ (relative error against ξ²λ), then the
    unit-variance kernel PCA scores of the double-centered matrices for all
    positive components, up to sign.
    """
    if not xi > 0:
        raise ValueError("xi must be positive")
    x = as_matrix(x)
    spec = KernelSpec.negative_half_sqdist()
    d0, d1 = gram_matrix(x, spec), gram_matrix(xi * x, spec)
    e0, e1 = sym_eigen(d0.matrix), sym_eigen(d1.matrix)
    scale = max(float(np.max(np.abs(e0.eigenvalues))), 1e-300)
    eig_err = float(np.max(np.abs(e1.eigenvalues - xi**2 * e0.eigenvalues))) / (xi**2 * scale)
    entry_err = float(np.max(np.abs(d1.matrix - xi**2 * d0.matrix))) / (xi**2 * max(
        float(np.max(np.abs(d0.matrix))), 1e-300))
    delta_vec_err = _sign_invariant_distance(e0.eigenvalues, e0.eigenvectors, e1.eigenvectors)

    kc0 = double_center(d0, CenteringScheme.mean())
    kc1 = double_center(d1, CenteringScheme.mean())
    lam0 = sym_eigen(kc0.matrix).eigenvalues
    rank = int(np.sum(lam0 > RANK_RTOL * lam0[0])) if lam0.size and lam0[0] > 0 else 0
    score_err = 0.0
    if rank:
        m0 = kpca_fit(kc0, CenteringScheme.none(), rank, "unit_variance")
        m1 = kpca_fit(kc1, CenteringScheme.none(), rank, "unit_variance")
        s0 = (kc0.matrix @ m0.coefficients)
        s1 = (kc1.matrix @ m1.coefficients)
        score_err = _sign_invariant_distance(m0.eigenvalues, s0, s1)
    details = {
        "xi": xi,
        "eigenvalue_rel_error": eig_err,
        "entry_rel_error": entry_err,
        "delta_eigvec_distance": delta_vec_err,
        "score_distance": score_err,
        "components": rank,
    }
    eig = CheckResult.from_margin("eigenvalues", -max(eig_err, entry_err), rtol)
    vec = CheckResult.from_margin("scores", -score_err, score_atol)
    passed = eig.passed and vec.passed
    worst = eig if (eig.margin + eig.tolerance) <= (vec.margin + vec.tolerance) else vec
    return CheckResult("mds_scaling_invariance", worst.margin, worst.tolerance, passed,
                       "ok" if passed else "failed", details)


# ------------------------------------------------------- rank-one updates

def rank_one_step(c, v, nu: float) -> np.ndarray:
    """(1 − ν) C + ν v vᵀ, with ν strictly inside (0, 1)."""
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu must lie strictly in (0, 1), got {nu}")
    c = as_symmetric(c)
    v = np.asarray(v, dtype=float).ravel()
    if v.shape[0] != c.shape[0]:
        raise ValueError(f"vector has length {v.shape[0]}, matrix is {c.shape}")
    return as_symmetric((1.0 - nu) * c + nu * np.outer(v, v))


@dataclass
class RankOneStep:
    """One update C → (1 − ν)C + νvvᵀ with the relations it satisfies.

    Eigenvalues are stored as eigenvalues of C (that is, λ/n); margins use
    the λ scale with ``scale`` = n.
    """

    nu: float
    v: np.ndarray
    eigenvalues_before: np.ndarray
    eigenvectors_before: np.ndarray
    eigenvalues_after: np.ndarray
    eigenvectors_after: np.ndarray
    margins: dict
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def rank_one_analyze(c, v, nu: float, scale: int | None = None, rtol: float = 1e-8,
                     cos_guard: float = 1e-10) -> RankOneStep:
    """Evaluate the trace law, coupling identity, lower bound and cosine bound.

    ``scale`` is the n in Ct wᵢ = (1/n) λᵢ wᵢ; it defaults to the dimension.
    The cosine bound is evaluated for the i with |cos(wᵢ, v)| > ``cos_guard``.
    """
    c = as_symmetric(c)
    v = np.asarray(v, dtype=float).ravel()
    c_next = rank_one_step(c, v, nu)
    n = c.shape[0] if scale is None else scale
    before, after = sym_eigen(c), sym_eigen(c_next)
    lam, lam1 = n * before.eigenvalues, n * after.eigenvalues
    w, w1 = before.eigenvectors, after.eigenvectors
    tol = rtol * max(1.0, abs(float(lam[0])), abs(float(lam1[0])))
    vv = float(v @ v)
    wv, w1v = w.T @ v, w1.T @ v

    trace_res = abs(lam1.sum() - ((1 - nu) * lam.sum() + n * nu * vv))
    lower = (1 - nu) * lam + n * nu * wv**2
    lower_margin = float(lam1[0] - lower.max())
    coupling = (lam1[None, :] - (1 - nu) * lam[:, None]) * (w.T @ w1) - n * nu * np.outer(wv, w1v)
    coupling_res = float(np.max(np.abs(coupling)))

    cos_margins = []
    vnorm = np.sqrt(vv)
    if vnorm > 0:
        cos_i_v = wv / vnorm
        cos_1_v = w1v[0] / vnorm
        for i in range(lam.size):
            if abs(cos_i_v[i]) > cos_guard:
                ratio = cos_1_v**2 / cos_i_v[i] ** 2
                cos_margins.append(float(ratio - (w[:, i] @ w1[:, 0]) ** 2))
    cos_worst = min(cos_margins) if cos_margins else 0.0

    checks = [
        CheckResult.from_margin("trace_law", -trace_res, tol),
        CheckResult.from_margin("coupling_identity", -coupling_res, tol),
        CheckResult.from_margin("lower_bound", lower_margin, tol),
        CheckResult.from_margin("cosine_bound", cos_worst, rtol,
                                {"evaluated": len(cos_margins)}),
    ]
    margins = {
        "trace_law": -trace_res,
        "coupling_identity": -coupling_res,
        "lower_bound": lower_margin,
        "cosine_bound": cos_margins,
    }
    return RankOneStep(nu, v, before.eigenvalues, w, after.eigenvalues, w1, margins, checks)


@dataclass
class RankOneTrace:
    steps: list[RankOneStep]
    final: np.ndarray

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)


def rank_one_trace(c0, vectors, nus, scale: int | None = None) -> RankOneTrace:
    """Apply a sequence of rank-one updates, analyzing each one."""
    c = as_symmetric(c0)
    steps = []
    for v, nu in zip(vectors, nus):
        steps.append(rank_one_analyze(c, v, nu, scale))
        c = rank_one_step(c, v, nu)
    return RankOneTrace(steps, c)
