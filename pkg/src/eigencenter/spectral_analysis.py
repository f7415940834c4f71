"""Numerical verification of the eigen-relations between centered and
non-centered Gram / moment matrices.

Every ``check_*`` function returns a :class:`CheckResult` whose ``margin``
is signed slack: non-negative when the relation holds exactly, and the
check passes when ``margin >= -tolerance``.  Identities report
``margin = -residual``.

Notation: ``K`` is the Gram matrix with eigenpairs (λᵢ, αᵢ), ``Kc`` its
double-centered version with eigenpairs (λcᵢ, αcᵢ).  On the covariance
side ``C = (1/n) X Xᵀ`` has eigenpairs (λᵢ/n, wᵢ) and ``Cc = C - μμᵀ``
has (λcᵢ/n, wcᵢ); eigenvalues are always reported on the Gram scale λ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .centering import (
    CenteringScheme,
    WeightVector,
    center_covariance,
    double_center,
    mean_norm_sq_from_gram,
    mean_vector,
    moment_matrix,
)
from .core_linalg import EigenDecomposition, as_matrix, sym_eigen
from .kernels import CPD, GramMatrix, KernelSpec, cpd_probe, gram_matrix, sq_distances

__all__ = [
    "BoundEntry",
    "CheckResult",
    "EigenPairSet",
    "SpectralReport",
    "check_box_constraint",
    "check_covariance_bounds",
    "check_cumulative_bounds",
    "check_dprime_identity",
    "check_eigvec_coupling",
    "check_eigvec_sum_zero",
    "check_interlacing",
    "check_mean_norm_formulas",
    "check_mean_scores",
    "check_proportion_interlacing",
    "check_rotation_invariance",
    "check_schur_horn",
    "check_trace_law",
    "check_weighted_bounds",
    "dprime_values",
    "eigen_pairs",
    "full_report",
    "mean_score",
    "schur_horn_dprime_gram",
]

# relative tolerances; keys are check names, overridable in full_report
DEFAULT_TOLERANCES = {
    "mean_norm_formulas": 1e-10,
    "ones_overlap_completeness": 1e-10,
    "courant_fischer": 1e-9,
    "trace_law": 1e-9,
    "interlacing": 1e-8,
    "proportion_interlacing": 1e-10,
    "schur_horn": 1e-8,
    "rotated_same_eigenvalues": 1e-7,
    "dprime_identity": 1e-9,
    "dprime_cumulative": 1e-8,
    "eigvec_sum_zero": 1e-7,
    "eigvec_box": 1e-12,
    "eigvec_coupling": 1e-8,
    "mean_score_identity": 1e-9,
    "covariance_trace": 1e-9,
    "covariance_cumulative": 1e-8,
    "mean_alignment": 1e-8,
    "eigvec_alignment": 1e-8,
    "alignment_cosines": 1e-8,
    "weighted_trace_law": 1e-9,
    "weighted_lower_bound": 1e-8,
    "weighted_eigvec_orthogonality": 1e-7,
    "weighted_covariance_bound": 1e-8,
    "delta_trace_zero": 1e-9,
    "cpd_probe": 1e-8,
    "mds_separation": 1e-8,
    "mds_lower_bound": 1e-8,
}

ZERO_EIG_RTOL = 1e-8
MEAN_NORM_FLOOR = 1e-12

COVARIANCE_CHECKS = (
    "eigvec_coupling",
    "mean_score_identity",
    "covariance_trace",
    "covariance_cumulative",
    "mean_alignment",
    "eigvec_alignment",
    "alignment_cosines",
)


@dataclass
class CheckResult:
    name: str
    margin: float
    tolerance: float
    passed: bool
    status: str = "ok"
    details: dict = field(default_factory=dict)

    @classmethod
    def from_margin(cls, name, margin, tolerance, details=None):
        margin, tolerance = float(margin), float(tolerance)
        passed = bool(margin >= -tolerance)
        return cls(name, margin, tolerance, passed, "ok" if passed else "failed", details or {})

    @classmethod
    def skipped(cls, name, status, reason=""):
        return cls(name, 0.0, 0.0, True, status, {"reason": reason} if reason else {})

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "status": self.status,
        }
        if self.details:
            d["details"] = _jsonable(self.details)
        return d


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _merge(name, results: list[CheckResult], details=None) -> CheckResult:
    """Combine sub-checks into one result (worst normalized margin wins)."""
    worst = min(results, key=lambda r: r.margin + r.tolerance)
    passed = all(r.passed for r in results)
    out = CheckResult(name, worst.margin, worst.tolerance, passed, "ok" if passed else "failed")
    out.details = {r.name: {"margin": r.margin, "tolerance": r.tolerance, "passed": r.passed}
                   for r in results}
    out.details.update(details or {})
    return out


# ---------------------------------------------------------------- eigenpairs

SOURCES = ("gram_raw", "gram_centered", "moment_raw", "moment_centered")


@dataclass(frozen=True)
class EigenPairSet:
    decomposition: EigenDecomposition
    source: str
    ones_overlaps: np.ndarray | None = None

    @property
    def eigenvalues(self) -> np.ndarray:
        """Gram-scale eigenvalues (λ, not λ/n)."""
        return self.decomposition.gram_scale_eigenvalues()

    @property
    def vectors(self) -> np.ndarray:
        return self.decomposition.eigenvectors

    @property
    def n(self) -> int:
        return self.decomposition.n


def eigen_pairs(m, source: str, n_samples: int | None = None, method: str = "lapack") -> EigenPairSet:
    """Eigendecompose ``m`` and tag it with its role.

    For moment matrices pass ``n_samples`` so eigenvalues can be rescaled
    to the Gram scale.
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}")
    mat = np.asarray(getattr(m, "matrix", m), dtype=float)
    if source.startswith("moment"):
        if n_samples is None:
            raise ValueError("moment matrices need n_samples")
        dec = sym_eigen(mat, method=method, source_scale=1.0 / n_samples)
        return EigenPairSet(dec, source)
    dec = sym_eigen(mat, method=method)
    return EigenPairSet(dec, source, dec.eigenvectors.T @ np.ones(dec.n))


# ----------------------------------------------------------- Gram-side checks

def check_mean_norm_formulas(k, raw: EigenPairSet, rtol: float = 1e-10) -> CheckResult:
    """(1/n²) 1ᵀK1 against (1/n²) Σ λᵢ (αᵢᵀ1)²."""
    n = raw.n
    grand = mean_norm_sq_from_gram(k)
    spectral = float(np.sum(raw.eigenvalues * raw.ones_overlaps**2) / n**2)
    res = abs(grand - spectral)
    return CheckResult.from_margin(
        "mean_norm_formulas", -res, rtol * max(1.0, abs(grand)),
        {"grand_sum_form": grand, "spectral_form": spectral},
    )


def check_overlap_completeness(raw: EigenPairSet, rtol: float = 1e-10) -> CheckResult:
    """Σᵢ (αᵢᵀ1)² = n."""
    n = raw.n
    total = float(np.sum(raw.ones_overlaps**2))
    cs = float(np.max(raw.ones_overlaps**2)) if n else 0.0
    res = abs(total - n)
    out = CheckResult.from_margin("ones_overlap_completeness", -res, rtol * max(1.0, n),
                                  {"sum": total, "max_overlap_sq": cs})
    if cs > n * (1 + rtol):
        out.passed, out.status = False, "failed"
    return out


def check_courant_fischer(k, raw: EigenPairSet, rtol: float = 1e-9) -> CheckResult:
    """λ₁ ≥ (1/n) 1ᵀK1."""
    m = np.asarray(getattr(k, "matrix", k), dtype=float)
    n = m.shape[0]
    lam1 = float(raw.eigenvalues[0])
    rayleigh = float(m.sum() / n)
    return CheckResult.from_margin("courant_fischer", lam1 - rayleigh,
                                   rtol * max(abs(lam1), np.finfo(float).tiny),
                                   {"lambda1": lam1, "ones_rayleigh": rayleigh})


def check_trace_law(k, kc, mu_norm_sq: float, rtol: float = 1e-9) -> CheckResult:
    """tr(Kc) = tr(K) − n‖μ‖², plus the ratio form of the same law."""
    m = np.asarray(getattr(k, "matrix", k), dtype=float)
    mc = np.asarray(getattr(kc, "matrix", kc), dtype=float)
    n = m.shape[0]
    tr, trc = float(np.trace(m)), float(np.trace(mc))
    res = abs(trc - tr + n * mu_norm_sq)
    scale = max(1.0, abs(tr))
    details = {"trace_K": tr, "trace_Kc": trc, "n_mu_norm_sq": n * mu_norm_sq}
    if tr != 0:
        ratio = trc / tr
        predicted = 1.0 - m.sum() / (n * tr)
        details["ratio"] = ratio
        details["ratio_predicted"] = predicted
        res = max(res, abs(ratio - predicted) * scale)
    return CheckResult.from_margin("trace_law", -res, rtol * scale, details)


def check_interlacing(raw: EigenPairSet, centered: EigenPairSet, rtol: float = 1e-8) -> CheckResult:
    """λⱼ₊₁ ≤ λcⱼ ≤ λⱼ for all j, and λcₙ ≈ 0."""
    lam, lamc = raw.eigenvalues, centered.eigenvalues
    if lam.shape != lamc.shape:
        raise ValueError("spectra have different lengths")
    upper = lam - lamc
    lower = lamc[:-1] - lam[1:]
    margins = np.concatenate([upper, lower, [-lamc[-1]]])
    worst = float(margins.min())
    tol = rtol * abs(float(lam[0]))
    details = {
        "upper_margin": float(upper.min()),
        "lower_margin": float(lower.min()) if lower.size else 0.0,
        "lambda_c_last": float(lamc[-1]),
    }
    return CheckResult.from_margin("interlacing", worst, tol, details)


def proportions(raw: EigenPairSet, centered: EigenPairSet) -> dict:
    tr, trc = float(np.sum(raw.eigenvalues)), float(np.sum(centered.eigenvalues))
    if tr == 0 or trc == 0:
        raise ValueError("proportions need nonzero traces")
    return {"pi": raw.eigenvalues / tr, "pi_c": centered.eigenvalues / trc, "gamma": trc / tr}


def check_proportion_interlacing(raw: EigenPairSet, centered: EigenPairSet,
                                 slack: float = 1e-10) -> CheckResult:
    """πⱼ₊₁ ≤ γ πcⱼ ≤ πⱼ with γ = tr(Kc)/tr(K)."""
    p = proportions(raw, centered)
    pi, gpc = p["pi"], p["gamma"] * p["pi_c"]
    margins = np.concatenate([pi[:-1] - gpc[:-1], gpc[:-1] - pi[1:]])
    worst = float(margins.min()) if margins.size else 0.0
    return CheckResult.from_margin("proportion_interlacing", worst, slack,
                                   {"gamma": p["gamma"], "inequalities": int(margins.size)})


def check_schur_horn(m, pairs: EigenPairSet, rtol: float = 1e-8, name="schur_horn") -> CheckResult:
    """Sorted diagonal partial sums dominated by eigenvalue partial sums."""
    mat = np.asarray(getattr(m, "matrix", m), dtype=float)
    diag = np.sort(np.diag(mat))[::-1]
    cd, cl = np.cumsum(diag), np.cumsum(pairs.eigenvalues)
    scale = max(1.0, float(np.max(np.abs(pairs.eigenvalues))) if pairs.n else 1.0)
    margin = min(float(np.min(cl - cd)), -abs(float(cl[-1] - cd[-1])))
    return CheckResult.from_margin(name, margin, rtol * scale)


def check_rotation_invariance(raw: EigenPairSet, kc, rtol: float = 1e-7) -> CheckResult:
    """AᵀKcA has the same spectrum as Kc."""
    mc = np.asarray(getattr(kc, "matrix", kc), dtype=float)
    a = raw.vectors
    rotated = a.T @ mc @ a
    ev_rot = np.sort(np.linalg.eigvalsh(0.5 * (rotated + rotated.T)))[::-1]
    ev = np.sort(np.linalg.eigvalsh(mc))[::-1]
    diff = float(np.max(np.abs(ev_rot - ev))) if ev.size else 0.0
    return CheckResult.from_margin("rotated_same_eigenvalues", -diff,
                                   rtol * max(1.0, abs(float(ev[0])) if ev.size else 1.0))


def dprime_values(eigenvalues, overlaps, mean_term: float, n: int) -> np.ndarray:
    """λᵢ + (mean_term − (2/n) λᵢ)(αᵢᵀ1)², unsorted."""
    lam = np.asarray(eigenvalues, dtype=float)
    a = np.asarray(overlaps, dtype=float)
    return lam + (mean_term - 2.0 * lam / n) * a * a


@dataclass(frozen=True)
class BoundEntry:
    index: int
    d_prime: float
    lambda_c: float
    cumulative_d: float
    cumulative_lambda_c: float


def _bound_entries(dprime, centered_eigenvalues) -> list[BoundEntry]:
    dprime = np.asarray(dprime, dtype=float)
    lamc = np.asarray(centered_eigenvalues, dtype=float)
    order = np.lexsort((np.arange(dprime.size), -dprime))
    d_sorted = dprime[order]
    cd, cl = np.cumsum(d_sorted), np.cumsum(lamc)
    return [BoundEntry(int(order[t]), float(d_sorted[t]), float(lamc[t]), float(cd[t]), float(cl[t]))
            for t in range(dprime.size)]


def schur_horn_dprime_gram(raw: EigenPairSet, mu_norm_sq: float,
                           centered_eigenvalues) -> list[BoundEntry]:
    """Lower-bound terms d′ᵢ = λᵢ + (‖μ‖² − (2/n)λᵢ)(αᵢᵀ1)², sorted non-increasing.

    Ties are broken by the original eigen-index.  Each entry carries the
    matching centered eigenvalue and both running sums.
    """
    d = dprime_values(raw.eigenvalues, raw.ones_overlaps, mu_norm_sq, raw.n)
    return _bound_entries(d, centered_eigenvalues)


def check_dprime_identity(raw: EigenPairSet, kc, mu_norm_sq: float, rtol: float = 1e-9) -> CheckResult:
    """d′ᵢ equals the diagonal entry αᵢᵀKcαᵢ computed directly."""
    mc = np.asarray(getattr(kc, "matrix", kc), dtype=float)
    a = raw.vectors
    direct = np.einsum("ij,ij->j", a, mc @ a)
    d = dprime_values(raw.eigenvalues, raw.ones_overlaps, mu_norm_sq, raw.n)
    res = float(np.max(np.abs(direct - d))) if d.size else 0.0
    return CheckResult.from_margin("dprime_identity", -res,
                                   rtol * max(1.0, abs(float(raw.eigenvalues[0]))))


def check_cumulative_bounds(entries: list[BoundEntry], rtol: float = 1e-8,
                            name: str = "dprime_cumulative") -> CheckResult:
    """Σ_{i≤t} d′ᵢ ≤ Σ_{i≤t} λcᵢ for every t, with equality at t = n."""
    if not entries:
        return CheckResult.from_margin(name, 0.0, 0.0)
    cd = np.array([e.cumulative_d for e in entries])
    cl = np.array([e.cumulative_lambda_c for e in entries])
    scale = max(1.0, abs(entries[0].lambda_c), abs(entries[0].d_prime))
    gap = cl - cd
    end_scale = max(1.0, abs(cl[-1]), float(np.max(np.abs(cl))))
    details = {"min_gap": float(gap.min()), "final_gap": float(gap[-1]), "t_max": len(entries)}
    inner = CheckResult.from_margin("partial_sums", float(gap.min()), rtol * scale)
    final = CheckResult.from_margin("equality_at_n", -abs(float(gap[-1])), rtol * end_scale)
    return _merge(name, [inner, final], details)


def check_eigvec_sum_zero(centered: EigenPairSet, rtol: float = 1e-7,
                          zero_rtol: float = ZERO_EIG_RTOL, weights=None,
                          name: str = "eigvec_sum_zero", reference: float = 0.0) -> CheckResult:
    """αcⱼᵀ1 = 0 (or αcⱼᵀω = 0) for every numerically nonzero λcⱼ.

    λcⱼ counts as nonzero above ``zero_rtol * max(|λc₁|, reference)``; pass
    the non-centered λ₁ as ``reference`` so that a centered matrix made of
    round-off (identical samples) is not mistaken for signal.  Tolerance is
    ``rtol * √n`` for the ones vector, ``rtol`` for weights.
    """
    lamc = centered.eigenvalues
    n = centered.n
    lead = max(abs(float(lamc[0])), abs(reference)) if n else 0.0
    mask = np.abs(lamc) > zero_rtol * lead if lead > 0 else np.zeros(n, bool)
    if weights is None:
        probe = np.ones(n)
        tol = rtol * np.sqrt(n)
    else:
        probe = np.asarray(weights, dtype=float)
        tol = rtol
    overlaps = np.abs(centered.vectors.T @ probe)[mask]
    worst = float(overlaps.max()) if overlaps.size else 0.0
    return CheckResult.from_margin(name, -worst, tol, {"nonzero_eigenvalues": int(mask.sum())})


def check_box_constraint(centered: EigenPairSet, slack: float = 1e-12) -> CheckResult:
    """Every entry of every unit eigenvector lies in [−1, 1]."""
    top = float(np.max(np.abs(centered.vectors))) if centered.n else 0.0
    return CheckResult.from_margin("eigvec_box", 1.0 - top, slack, {"max_abs_entry": top})


# ----------------------------------------------------- covariance-side checks

def mean_score(w, mu, lam: float, alpha_ones: float, n: int) -> tuple[float, float]:
    """Mean of the score vector along ``w``, computed two ways.

    Returns ``(wᵀμ, (√λ / n) αᵀ1)``.  ``w`` must be ``Xα / √λ`` for the
    matching Gram eigenpair (λ, α), so both values agree.
    """
    if not lam > 0:
        raise ValueError("mean_score needs a positive eigenvalue")
    direct = float(np.asarray(w, dtype=float) @ np.asarray(mu, dtype=float))
    return direct, float(np.sqrt(lam) / n * alpha_ones)


def check_mean_scores(x, raw: EigenPairSet, rtol: float = 1e-9,
                      zero_rtol: float = ZERO_EIG_RTOL) -> CheckResult:
    """wᵢᵀμ = (√λᵢ/n) αᵢᵀ1 for all λᵢ above the zero threshold (linear kernel)."""
    x = as_matrix(x)
    n = x.shape[1]
    mu = x.mean(axis=1)
    lam = raw.eigenvalues
    lead = abs(float(lam[0]))
    worst = 0.0
    for i in np.flatnonzero(lam > zero_rtol * lead):
        w = x @ raw.vectors[:, i] / np.sqrt(lam[i])
        direct, via_gram = mean_score(w, mu, lam[i], raw.ones_overlaps[i], n)
        worst = max(worst, abs(direct - via_gram) / max(1.0, abs(direct)))
    return CheckResult.from_margin("mean_score_identity", -worst, rtol)


def check_eigvec_coupling(raw_moment: EigenPairSet, centered_moment: EigenPairSet, mu,
                         n: int, rtol: float = 1e-8) -> CheckResult:
    """(λᵢ − λcⱼ) wᵢᵀwcⱼ = n wᵢᵀμ wcⱼᵀμ over all (i, j)."""
    mu = np.asarray(mu, dtype=float)
    lam, lamc = raw_moment.eigenvalues, centered_moment.eigenvalues
    w, wc = raw_moment.vectors, centered_moment.vectors
    lhs = (lam[:, None] - lamc[None, :]) * (w.T @ wc)
    rhs = n * np.outer(w.T @ mu, wc.T @ mu)
    res = float(np.max(np.abs(lhs - rhs)))
    return CheckResult.from_margin("eigvec_coupling", -res, rtol * max(1.0, abs(float(lam[0]))),
                                   {"pairs": int(lhs.size)})


def check_covariance_bounds(raw_moment: EigenPairSet, centered_moment: EigenPairSet, mu,
                            n: int, tolerances: dict | None = None) -> list[CheckResult]:
    """Covariance-side bounds, returned as four results.

    ``covariance_cumulative``: sorted λᵢ − n(wᵢᵀμ)² partial sums below
    centered partial sums.  ``mean_alignment``: λ₁ − λc₁ ≤
    n(w₁ᵀμ)².  ``eigvec_alignment``: (wc₁ᵀμ)²/‖μ‖² ≤ (w₁ᵀwc₁)².
    ``alignment_cosines``: cos(wc₁, μ)² ≤ cos(wc₁, w₁)².  The last two are
    marked ``degenerate`` when ‖μ‖ ≤ 1e-12.  Both are invariant to the choice
    of first eigenvector within a repeated eigenvalue, so no gap is required;
    the gap is recorded in the details.
    """
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    mu = np.asarray(mu, dtype=float)
    lam, lamc = raw_moment.eigenvalues, centered_moment.eigenvalues
    w, wc = raw_moment.vectors, centered_moment.vectors
    scale = max(1.0, abs(float(lam[0])))
    proj = w.T @ mu
    d = lam - n * proj**2
    entries = _bound_entries(d, lamc)
    t12 = check_cumulative_bounds(entries, tol["covariance_cumulative"], "covariance_cumulative")
    # proof identity: d′ᵢ = n wᵢᵀCc wᵢ
    cc = centered_moment.decomposition.reconstruct()
    direct = n * np.einsum("ij,ij->j", w, cc @ w)
    t12.details["diagonal_identity_residual"] = float(np.max(np.abs(direct - d)))

    t13 = CheckResult.from_margin(
        "mean_alignment", n * proj[0] ** 2 - (lam[0] - lamc[0]),
        tol["mean_alignment"] * scale,
        {"eigen_drop": float(lam[0] - lamc[0]), "n_w1_mu_sq": float(n * proj[0] ** 2)},
    )
    gap = float(lam[0] - lam[1]) if lam.size > 1 else float("inf")
    mu_norm = float(np.linalg.norm(mu))
    if mu_norm <= MEAN_NORM_FLOOR:
        t14 = CheckResult.skipped("eigvec_alignment", "degenerate", "mean is zero")
        c15 = CheckResult.skipped("alignment_cosines", "degenerate", "mean is zero")
        return [t12, t13, t14, c15]
    align = float(w[:, 0] @ wc[:, 0]) ** 2
    lhs = float(wc[:, 0] @ mu) ** 2 / mu_norm**2
    t14 = CheckResult.from_margin("eigvec_alignment", align - lhs,
                                  tol["eigvec_alignment"],
                                  {"lhs": lhs, "rhs": align, "first_gap": gap})
    cos_mu = float(wc[:, 0] @ mu) / (np.linalg.norm(wc[:, 0]) * mu_norm)
    cos_w = float(wc[:, 0] @ w[:, 0]) / (np.linalg.norm(wc[:, 0]) * np.linalg.norm(w[:, 0]))
    c15 = CheckResult.from_margin("alignment_cosines", cos_w**2 - cos_mu**2,
                                  tol["alignment_cosines"],
                                  {"cos_wc1_mu_sq": cos_mu**2, "cos_wc1_w1_sq": cos_w**2})
    return [t12, t13, t14, c15]


# -------------------------------------------------------- weighted centering

def check_weighted_bounds(k, omega, x=None, tolerances: dict | None = None) -> list[CheckResult]:
    """Checks for centering about a weighted mean μω = Xω.

    Returns ``weighted_trace_law``, ``weighted_lower_bound`` (partial sums of
    d′ᵢ = λᵢ + (‖μω‖² αᵢᵀ1 − 2λᵢ αᵢᵀω) αᵢᵀ1 against the weighted-centered
    spectrum), ``weighted_eigvec_orthogonality`` and, when the data ``x``
    are given (linear kernel), ``weighted_covariance_bound``.

    ``‖μω‖²`` is ``ωᵀKω``.  At ω = 1/n it equals ‖μ‖² and the terms reduce
    to the unweighted d′ᵢ.
    """
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    gram = k if isinstance(k, GramMatrix) else GramMatrix(np.asarray(k, float))
    wv = omega if isinstance(omega, WeightVector) else WeightVector(omega)
    w = wv.omega
    m = gram.matrix
    n = m.shape[0]
    if w.shape[0] != n:
        raise ValueError(f"weights have length {w.shape[0]}, Gram matrix is {n}x{n}")
    kc = double_center(gram, CenteringScheme.weighted(wv))
    raw = eigen_pairs(gram, "gram_raw")
    cen = eigen_pairs(kc, "gram_centered")
    lam, a1 = raw.eigenvalues, raw.ones_overlaps
    aw = raw.vectors.T @ w
    mw_sq = float(w @ m @ w)
    out = []

    tr, trc = float(np.trace(m)), float(np.trace(kc.matrix))
    predicted = tr - 2.0 * float(w @ m @ np.ones(n)) + n * mw_sq
    details = {"trace_K": tr, "trace_Kc": trc, "predicted": predicted}
    res = abs(trc - predicted)
    if x is not None:
        xm = as_matrix(x)
        mu, mu_w = xm.mean(axis=1), xm @ w
        via_means = tr - 2 * n * float(mu_w @ mu) + n * float(mu_w @ mu_w)
        details["predicted_from_means"] = via_means
        res = max(res, abs(trc - via_means))
    out.append(CheckResult.from_margin("weighted_trace_law", -res,
                                       tol["weighted_trace_law"] * max(1.0, abs(tr)), details))

    d = lam + (mw_sq * a1 - 2.0 * lam * aw) * a1
    direct = np.einsum("ij,ij->j", raw.vectors, kc.matrix @ raw.vectors)
    bound = check_cumulative_bounds(_bound_entries(d, cen.eigenvalues),
                                    tol["weighted_lower_bound"], "weighted_lower_bound")
    bound.details["max_dprime"] = float(d.max())
    bound.details["lambda_c1"] = float(cen.eigenvalues[0])
    bound.details["diagonal_identity_residual"] = float(np.max(np.abs(direct - d)))
    out.append(bound)

    out.append(check_eigvec_sum_zero(cen, tol["weighted_eigvec_orthogonality"], weights=w,
                                     name="weighted_eigvec_orthogonality",
                                     reference=float(lam[0])))

    if x is not None:
        xm = as_matrix(x)
        mu, mu_w = xm.mean(axis=1), xm @ w
        c = moment_matrix(xm)
        cc = center_covariance(c, mean_vector(xm), mu_w)
        rm = eigen_pairs(c, "moment_raw", n)
        cm = eigen_pairs(cc, "moment_centered", n)
        pw, pm = rm.vectors.T @ mu_w, rm.vectors.T @ mu
        dc = rm.eigenvalues - 2 * n * pw * pm + n * pw**2
        res = check_cumulative_bounds(_bound_entries(dc, cm.eigenvalues),
                                      tol["weighted_covariance_bound"], "weighted_covariance_bound")
        res.details["max_dprime"] = float(dc.max())
        res.details["lambda_c1"] = float(cm.eigenvalues[0])
        out.append(res)
    return out


# ------------------------------------------------------------ MDS-side checks

def check_delta_trace_zero(delta, pairs: EigenPairSet, rtol: float = 1e-9) -> CheckResult:
    """tr(Δ) = 0 exactly, Σλᵢ(Δ) ≈ 0 and λₙ = −Σ_{i<n} λᵢ."""
    m = np.asarray(getattr(delta, "matrix", delta), dtype=float)
    lam = pairs.eigenvalues
    exact = float(np.trace(m))
    total = float(lam.sum())
    tail = float(abs(lam[-1] + lam[:-1].sum()))
    details = {"trace": exact, "eigen_sum": total, "last_plus_rest": tail}
    if exact != 0.0:
        return CheckResult("delta_trace_zero", -abs(exact), 0.0, False, "failed", details)
    res = max(abs(total), tail)
    return CheckResult.from_margin("delta_trace_zero", -res,
                                   rtol * max(float(np.linalg.norm(m)), 1e-300), details)


def check_cpd_probe(delta, count: int = 100, seed: int = 0, rtol: float = 1e-8) -> CheckResult:
    """βᵀΔβ ≥ 0 for random zero-sum β (normalized by ‖β‖²‖Δ‖_F)."""
    q = cpd_probe(delta, count, seed)
    if not np.isfinite(q):
        return CheckResult.skipped("cpd_probe", "degenerate", "n = 1")
    return CheckResult.from_margin("cpd_probe", q, rtol, {"probes": count})


def check_mds_separation(delta, kc, rtol: float = 1e-8) -> CheckResult:
    """σⱼ₊₂(Δ) ≤ σⱼ(Kc) ≤ σⱼ(Δ), singular values as sorted |eigenvalues|."""
    m = np.asarray(getattr(delta, "matrix", delta), dtype=float)
    mc = np.asarray(getattr(kc, "matrix", kc), dtype=float)
    s = np.sort(np.abs(np.linalg.eigvalsh(m)))[::-1]
    sc = np.sort(np.abs(np.linalg.eigvalsh(mc)))[::-1]
    upper = s - sc
    lower = sc[: max(len(s) - 2, 0)] - s[2:]
    margins = np.concatenate([upper, lower])
    worst = float(margins.min()) if margins.size else 0.0
    return CheckResult.from_margin("mds_separation", worst, rtol * max(float(s[0]), 1e-300),
                                   {"sigma_delta": s[:5], "sigma_kc": sc[:5]})


def check_mds_bound(pairs: EigenPairSet, centered_eigenvalues, distances=None,
                    rtol: float = 1e-8) -> CheckResult:
    """max λᵢ + (1ᵀΔ1/n² − (2/n)λᵢ)(αᵢᵀ1)² ≤ λc₁ on Δ's eigenpairs.

    The grand sum 1ᵀΔ1 is taken from the spectrum and, when the distances
    are available, cross-checked against −½ Σᵢⱼ dᵢⱼ².
    """
    n = pairs.n
    lam = pairs.eigenvalues
    grand = float(np.sum(lam * pairs.ones_overlaps**2))
    details = {"grand_sum": grand}
    scale = max(abs(float(lam[0])), abs(float(lam[-1])), 1e-300)
    if distances is not None:
        dd = as_matrix(distances)
        from_dist = -0.5 * float(np.sum(dd * dd))
        details["grand_sum_from_distances"] = from_dist
        if abs(from_dist - grand) > 1e-9 * max(1.0, abs(from_dist)):
            return CheckResult(
                "mds_lower_bound", -abs(from_dist - grand), 0.0, False, "failed", details
            )
    d = dprime_values(lam, pairs.ones_overlaps, grand / n**2, n)
    res = check_cumulative_bounds(_bound_entries(d, centered_eigenvalues), rtol, "mds_lower_bound")
    lamc1 = float(np.asarray(centered_eigenvalues)[0])
    res.details.update(details)
    res.details["max_dprime"] = float(d.max())
    res.details["lambda_c1"] = lamc1
    res.tolerance = max(res.tolerance, rtol * scale)
    res.passed = res.margin >= -res.tolerance
    res.status = "ok" if res.passed else "failed"
    return res


# ---------------------------------------------------------------- full report

@dataclass
class SpectralReport:
    dataset_id: str
    kernel: KernelSpec
    n: int
    checks: list[CheckResult]
    eigenvalues_raw: np.ndarray
    eigenvalues_centered: np.ndarray
    proportions: dict
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        props = {
            "pi": _jsonable(self.proportions.get("pi", [])),
            "pi_c": _jsonable(self.proportions.get("pi_c", [])),
            "gamma": _jsonable(self.proportions.get("gamma")),
        }
        out = {
            "dataset": self.dataset_id,
            "kernel": self.kernel.to_dict(),
            "n": self.n,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "eigenvalues": {
                "raw": _jsonable(self.eigenvalues_raw),
                "centered": _jsonable(self.eigenvalues_centered),
            },
            "proportions": props,
        }
        if self.extras:
            out["extras"] = _jsonable(self.extras)
        return out


def shifted_similarity(raw: EigenPairSet, centered: EigenPairSet, count: int = 5) -> list[float]:
    """|cos(αcᵢ, αᵢ₊₁)| for the first ``count`` centered eigenvectors."""
    m = min(count, raw.n - 1)
    return [float(abs(centered.vectors[:, i] @ raw.vectors[:, i + 1])) for i in range(m)]


def full_report(x, spec: KernelSpec | None = None, scheme: CenteringScheme | None = None,
                dataset_id: str = "data", tolerances: dict | None = None,
                method: str = "lapack") -> SpectralReport:
    """Run every applicable check on data ``x`` (shape ``(d, n)``).

    The mean-centering relations always run.  A weighted ``scheme`` adds the
    weighted-mean checks.  Covariance-side checks need explicit moment
    matrices and only run for the linear kernel; otherwise they are listed
    as ``not_applicable``.  With the ``negative_half_sqdist`` kernel the
    PSD-only relations are replaced by the MDS-side ones.
    """
    spec = spec or KernelSpec.linear()
    scheme = scheme or CenteringScheme.mean()
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    unknown = set(tolerances or {}) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
    x = as_matrix(x)
    n = x.shape[1]
    k = gram_matrix(x, spec)
    kc = double_center(k, CenteringScheme.mean())
    raw = eigen_pairs(k, "gram_raw", method=method)
    cen = eigen_pairs(kc, "gram_centered", method=method)
    mu_sq = mean_norm_sq_from_gram(k)
    checks: list[CheckResult] = []

    if k.kind == CPD:
        checks.append(check_delta_trace_zero(k, raw, tol["delta_trace_zero"]))
        checks.append(check_cpd_probe(k, rtol=tol["cpd_probe"]))
        checks.append(check_mds_separation(k, kc, tol["mds_separation"]))
        checks.append(check_mds_bound(raw, cen.eigenvalues, np.sqrt(sq_distances(x)),
                                      tol["mds_lower_bound"]))
    else:
        checks.append(check_mean_norm_formulas(k, raw, tol["mean_norm_formulas"]))
        checks.append(check_overlap_completeness(raw, tol["ones_overlap_completeness"]))
        checks.append(check_courant_fischer(k, raw, tol["courant_fischer"]))
        checks.append(check_trace_law(k, kc, mu_sq, tol["trace_law"]))
        checks.append(check_interlacing(raw, cen, tol["interlacing"]))
        try:
            checks.append(check_proportion_interlacing(raw, cen, tol["proportion_interlacing"]))
        except ValueError as exc:
            checks.append(CheckResult.skipped("proportion_interlacing", "degenerate", str(exc)))
    sh = [check_schur_horn(k, raw, tol["schur_horn"], "K"),
          check_schur_horn(kc, cen, tol["schur_horn"], "Kc")]
    checks.append(_merge("schur_horn", sh))
    checks.append(check_rotation_invariance(raw, kc, tol["rotated_same_eigenvalues"]))
    checks.append(check_dprime_identity(raw, kc, mu_sq, tol["dprime_identity"]))
    entries = schur_horn_dprime_gram(raw, mu_sq, cen.eigenvalues)
    checks.append(check_cumulative_bounds(entries, tol["dprime_cumulative"]))
    checks.append(check_eigvec_sum_zero(cen, tol["eigvec_sum_zero"],
                                        reference=float(raw.eigenvalues[0])))
    checks.append(check_box_constraint(cen, tol["eigvec_box"]))

    if spec.kind == "linear":
        mu = x.mean(axis=1)
        c = moment_matrix(x)
        cc = center_covariance(c, mean_vector(x))
        rm = eigen_pairs(c, "moment_raw", n, method=method)
        cm = eigen_pairs(cc, "moment_centered", n, method=method)
        checks.append(check_eigvec_coupling(rm, cm, mu, n, tol["eigvec_coupling"]))
        checks.append(check_mean_scores(x, raw, tol["mean_score_identity"]))
        res = abs(np.trace(cc) - np.trace(c) + float(mu @ mu))
        checks.append(CheckResult.from_margin("covariance_trace", -res,
                                              tol["covariance_trace"] * max(1.0, np.trace(c))))
        checks.extend(check_covariance_bounds(rm, cm, mu, n, tol))
    else:
        for name in COVARIANCE_CHECKS:
            checks.append(CheckResult.skipped(name, "not_applicable",
                                              "feature-space covariance is implicit"))

    if scheme.variant == "weighted":
        checks.extend(check_weighted_bounds(k, scheme.weights,
                                            x if spec.kind == "linear" else None, tol))

    try:
        props = proportions(raw, cen)
    except ValueError:
        props = {"pi": [], "pi_c": [], "gamma": None}
    extras = {
        "mean_norm_sq": mu_sq,
        "shifted_eigvec_similarity": shifted_similarity(raw, cen),
        "centering": scheme.to_dict(),
    }
    return SpectralReport(dataset_id, spec, n, checks, raw.eigenvalues, cen.eigenvalues,
                          props, extras)
