"""Acceptance criteria 1-10 at their stated tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are also
collected and repeated in the pytest terminal summary.  Run alone with

    pytest tests/test_acceptance.py -v
"""

import time
import warnings

import numpy as np

from eigencenter import banana, iris
from eigencenter.centering import (
    CenteringScheme,
    WeightVector,
    center_covariance,
    double_center,
    mean_norm_sq_from_gram,
    mean_vector,
    moment_matrix,
)
from eigencenter.core_linalg import sym_eigen
from eigencenter.kernels import KernelSpec, cpd_probe, gram_matrix, sq_distances
from eigencenter.methods import (
    keca_decompose,
    mds_embed,
    mds_scaling_invariance,
    rank_one_analyze,
)
from eigencenter.spectral_analysis import (
    check_mds_bound,
    check_mds_separation,
    check_weighted_bounds,
    dprime_values,
    eigen_pairs,
    schur_horn_dprime_gram,
)

RESULTS: list[str] = []
BANANA_SEED = 7


def record(number: int, ok: bool, text: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def spectra(x, spec):
    k = gram_matrix(x, spec)
    kc = double_center(k)
    return k, kc, eigen_pairs(k, "gram_raw"), eigen_pairs(kc, "gram_centered")


def random_sets(count, seed, d_range=(1, 5), n_range=(3, 30), shift=True):
    r = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        d, n = int(r.integers(*d_range, endpoint=True)), int(r.integers(*n_range, endpoint=True))
        x = r.normal(size=(d, n)) * r.uniform(0.1, 3.0)
        if shift:
            x += r.normal(size=(d, 1)) * 2
        out.append(x)
    return out


def all_datasets():
    cases = [("iris/linear", iris().x, KernelSpec.linear()),
             ("iris/gaussian:1", iris().x, KernelSpec.gaussian(1.0)),
             ("banana/gaussian:0.5", banana(200, 0.2, BANANA_SEED).x, KernelSpec.gaussian(0.5)),
             ("banana/poly:1:2", banana(200, 0.2, BANANA_SEED).x, KernelSpec.polynomial(1, 2))]
    for i, x in enumerate(random_sets(10, 99)):
        cases.append((f"random{i}/linear", x, KernelSpec.linear()))
        cases.append((f"random{i}/gaussian:1", x, KernelSpec.gaussian(1.0)))
    return cases


def test_1_interlacing():
    lines = []
    ok = True
    for name, x, spec in (("iris/linear", iris().x, KernelSpec.linear()),
                          ("banana/gaussian:0.5", banana(200, 0.2, BANANA_SEED).x, KernelSpec.gaussian(0.5))):
        t0 = time.perf_counter()
        _, _, raw, cen = spectra(x, spec)
        lam, lamc = raw.eigenvalues, cen.eigenvalues
        slack = 1e-8 * lam[0]
        upper = float(np.min(lam - lamc))
        lower = float(np.min(lamc[:-1] - lam[1:]))
        last = float(lamc[-1])
        elapsed = time.perf_counter() - t0
        good = upper >= -slack and lower >= -slack and abs(last) <= slack and elapsed < 5
        ok &= good
        lines.append(f"{name} min(λ-λc)={upper:.2e} min(λc-λnext)={lower:.2e} λc_n={last:.1e} "
                     f"{elapsed:.2f}s")
    record(1, ok, "interlacing; " + "; ".join(lines))


def test_2_table_patterns():
    _, _, raw, cen = spectra(iris().x, KernelSpec.linear())
    lam, lamc = raw.eigenvalues, cen.eigenvalues
    iris_ok = lamc[0] <= lam[0] and lamc[1] <= lam[1] and lam[1] <= lamc[0]
    _, _, braw, bcen = spectra(banana(200, 0.2, BANANA_SEED).x, KernelSpec.gaussian(0.5))
    b, bc = braw.eigenvalues, bcen.eigenvalues
    banana_ok = bc[0] <= b[0] and b[1] <= bc[0]
    record(2, bool(iris_ok and banana_ok),
           f"iris λc1={lamc[0]:.2f}≤λ1={lam[0]:.2f}, λc2={lamc[1]:.2f}≤λ2={lam[1]:.2f}; "
           f"banana λc1={bc[0]:.2f}≤λ1={b[0]:.2f}, λ2={b[1]:.2f}≤λc1")


def test_3_trace_laws():
    worst = 0.0
    for x in random_sets(50, 3):
        for spec in (KernelSpec.linear(), KernelSpec.gaussian(1.0), KernelSpec.polynomial(1.0, 2)):
            k = gram_matrix(x, spec)
            kc = double_center(k)
            n = k.n
            res = abs(np.trace(kc.matrix) - (np.trace(k.matrix) - n * mean_norm_sq_from_gram(k)))
            worst = max(worst, res / np.trace(k.matrix))
    r = np.random.default_rng(33)
    wworst = 0.0
    for x in random_sets(20, 4):
        n = x.shape[1]
        w = WeightVector.normalized(r.uniform(0.01, 1.0, n))
        k = gram_matrix(x)
        kc = double_center(k, CenteringScheme.weighted(w))
        mu, mw = x.mean(axis=1), x @ w.omega
        predicted = np.trace(k.matrix) - 2 * n * (mw @ mu) + n * (mw @ mw)
        wworst = max(wworst, abs(np.trace(kc.matrix) - predicted) / max(1.0, np.trace(k.matrix)))
        assert check_weighted_bounds(k, w, x)[0].passed
    record(3, worst <= 1e-9 and wworst <= 1e-9,
           f"mean trace law worst {worst:.1e}·tr(K) over 150; weighted worst {wworst:.1e} over 20")


def test_4_cumulative_bound_iris():
    k, kc, raw, cen = spectra(iris().x, KernelSpec.linear())
    tr = float(np.trace(k.matrix))
    entries = schur_horn_dprime_gram(raw, mean_norm_sq_from_gram(k), cen.eigenvalues)
    gaps = np.array([e.cumulative_lambda_c - e.cumulative_d for e in entries])
    direct = np.einsum("ij,ij->j", raw.vectors, kc.matrix @ raw.vectors)
    d = dprime_values(raw.eigenvalues, raw.ones_overlaps, mean_norm_sq_from_gram(k), raw.n)
    ident = float(np.max(np.abs(direct - d)))
    ok = gaps.min() >= -1e-8 * tr and abs(gaps[-1]) <= 1e-8 * tr and ident <= 1e-9 * raw.eigenvalues[0]
    record(4, bool(ok), f"min partial-sum gap {gaps.min():.2e}, gap at t=n {gaps[-1]:.2e} "
                        f"(limit {1e-8 * tr:.1e}); d′ vs αᵀKcα {ident:.1e}")


def test_5_eigenvector_constraints():
    worst_sum, worst_box = 0.0, 0.0
    ok = True
    for name, x, spec in all_datasets():
        _, _, _, cen = spectra(x, spec)
        n = cen.n
        lamc = cen.eigenvalues
        mask = lamc > 1e-8 * lamc[0]
        s = float(np.max(np.abs(cen.vectors[:, mask].T @ np.ones(n)))) if mask.any() else 0.0
        box = float(np.max(np.abs(cen.vectors)))
        worst_sum = max(worst_sum, s / np.sqrt(n))
        worst_box = max(worst_box, box)
        ok &= s <= 1e-7 * np.sqrt(n) and box <= 1 + 1e-12
    record(5, ok, f"|αcᵀ1|/√n worst {worst_sum:.1e}; max |entry| {worst_box:.6f} "
                  f"over {len(all_datasets())} datasets")


def covariance_margins(x):
    n = x.shape[1]
    mu = x.mean(axis=1)
    c = moment_matrix(x)
    cc = center_covariance(c, mean_vector(x))
    rm, cm = eigen_pairs(c, "moment_raw", n), eigen_pairs(cc, "moment_centered", n)
    lam, lamc, w, wc = rm.eigenvalues, cm.eigenvalues, rm.vectors, cm.vectors
    scale = max(abs(lam[0]), np.finfo(float).tiny)
    coupling = np.max(np.abs((lam[:, None] - lamc[None, :]) * (w.T @ wc)
                             - n * np.outer(w.T @ mu, wc.T @ mu)))
    proj = w.T @ mu
    d = np.sort(lam - n * proj**2)[::-1]
    t12 = float(np.min(np.cumsum(lamc) - np.cumsum(d)))
    t13 = float(n * proj[0] ** 2 - (lam[0] - lamc[0]))
    mn = np.linalg.norm(mu)
    t14 = float((w[:, 0] @ wc[:, 0]) ** 2 - (wc[:, 0] @ mu) ** 2 / mn**2)
    c15 = float((wc[:, 0] @ w[:, 0]) ** 2 - ((wc[:, 0] @ mu) / mn) ** 2)
    # mean score, both ways, for λ above the zero threshold
    k = gram_matrix(x)
    raw = eigen_pairs(k, "gram_raw")
    wimu = 0.0
    for i in np.flatnonzero(raw.eigenvalues > 1e-8 * raw.eigenvalues[0]):
        wi = x @ raw.vectors[:, i] / np.sqrt(raw.eigenvalues[i])
        a = wi @ mu
        b = np.sqrt(raw.eigenvalues[i]) / n * raw.ones_overlaps[i]
        wimu = max(wimu, abs(a - b) / max(1.0, abs(a)))
    return coupling / scale, min(t12, t13, t14, c15) / scale, wimu


def test_6_covariance_suite():
    worst_c, worst_m, worst_w = 0.0, np.inf, 0.0
    for x in [iris().x] + random_sets(50, 6, n_range=(4, 40)):
        c, m, w = covariance_margins(x)
        worst_c, worst_m, worst_w = max(worst_c, c), min(worst_m, m), max(worst_w, w)
    ok = worst_c <= 1e-8 and worst_m >= -1e-8 and worst_w <= 1e-9
    record(6, ok, f"coupling worst {worst_c:.1e}·λ1; bound margins min {worst_m:.1e}·λ1; "
                  f"mean-score equality worst {worst_w:.1e} (iris + 50 random)")


def test_7_keca():
    worst, centered = 0.0, 0.0
    for name, x, spec in all_datasets():
        k = gram_matrix(x, spec)
        ent = keca_decompose(k)
        grand = mean_norm_sq_from_gram(k)
        worst = max(worst, abs(ent.total - grand) / abs(grand))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            centered = max(centered, abs(keca_decompose(double_center(k)).total))
    record(7, worst <= 1e-10 and centered <= 1e-10,
           f"total vs grand sum worst {worst:.1e} rel; centered total max {centered:.1e}")


def test_8_mds():
    r = np.random.default_rng(8)
    round_trip = 0.0
    for _ in range(20):
        d, n = int(r.integers(1, 4, endpoint=True)), int(r.integers(5, 25))
        x = r.normal(size=(d, n)) * r.uniform(0.5, 5)
        dist = np.sqrt(sq_distances(x))
        emb = mds_embed(dist, d)
        round_trip = max(round_trip, np.max(np.abs(np.sqrt(sq_distances(emb.points)) - dist)) / dist.max())
    # every other entry: each distinct point set once
    sets = [(n, x) for n, x, _ in all_datasets()[::2]]
    trace_ok, probe_min, sep_ok, bound_ok = True, np.inf, True, True
    for _, x in sets:
        delta = gram_matrix(x, KernelSpec.negative_half_sqdist())
        trace_ok &= float(np.trace(delta.matrix)) == 0.0
        probe_min = min(probe_min, cpd_probe(delta, 100))
        kc = double_center(delta)
        sep_ok &= check_mds_separation(delta, kc, 1e-8).passed
        pairs = eigen_pairs(delta, "gram_raw")
        lamc = eigen_pairs(kc, "gram_centered").eigenvalues
        bound_ok &= check_mds_bound(pairs, lamc, np.sqrt(sq_distances(x)), 1e-8).passed
    scale_ok = True
    for xi in (0.1, 2.0, 10.0):
        for x in (banana(100, 0.2, BANANA_SEED).x, random_sets(1, 88)[0]):
            res = mds_scaling_invariance(x, xi, rtol=1e-8, score_atol=1e-7)
            scale_ok &= res.passed
    ok = round_trip <= 1e-7 and trace_ok and probe_min >= 0 and sep_ok and bound_ok and scale_ok
    record(8, bool(ok), f"round trip {round_trip:.1e}; tr(Δ)=0 {trace_ok}; probe min {probe_min:.2e}; "
                        f"separation {sep_ok}; bound {bound_ok}; scaling {scale_ok}")


def test_9_rank_one():
    r = np.random.default_rng(9)
    t0 = time.perf_counter()
    worst = np.inf
    for _ in range(100):
        a = r.normal(size=(5, 5))
        c = a @ a.T / 5
        step = rank_one_analyze(c, r.normal(size=5), float(r.uniform(0.01, 0.99)))
        lam1 = 5 * max(step.eigenvalues_before[0], step.eigenvalues_after[0])
        m = step.margins
        margins = [m["trace_law"], m["lower_bound"]] + list(m["cosine_bound"])
        worst = min(worst, min(margins) / lam1)
    elapsed = time.perf_counter() - t0
    record(9, worst >= -1e-8 and elapsed < 10,
           f"worst margin {worst:.1e}·λ1 over 100 triples in {elapsed:.2f}s")


def brute_force(x, omega):
    d, n = x.shape
    mu = [0.0] * d
    for r in range(d):
        for j in range(n):
            mu[r] += omega[j] * x[r, j]
    xc = [[x[r, j] - mu[r] for j in range(n)] for r in range(d)]
    kc = [[sum(xc[r][i] * xc[r][j] for r in range(d)) for j in range(n)] for i in range(n)]
    cc = [[sum(xc[a][j] * xc[b][j] for j in range(n)) / n for b in range(d)] for a in range(d)]
    return np.array(mu), np.array(kc), np.array(cc)


def test_10_oracle_equivalence():
    r = np.random.default_rng(10)
    worst = 0.0
    for _ in range(20):
        d, n = int(r.integers(1, 4, endpoint=True)), int(r.integers(2, 8, endpoint=True))
        x = r.normal(size=(d, n)) + r.normal(size=(d, 1))
        k = gram_matrix(x)
        mu_b, kc_b, cc_b = brute_force(x, [1.0 / n] * n)
        kc = double_center(k).matrix
        cc = center_covariance(moment_matrix(x), mean_vector(x))
        res = [np.max(np.abs(kc - kc_b)), np.max(np.abs(cc - cc_b)),
               abs(mean_norm_sq_from_gram(k) - mu_b @ mu_b),
               abs(np.trace(kc) - np.trace(kc_b)),
               np.max(np.abs(sym_eigen(kc).eigenvalues - np.sort(np.linalg.eigvalsh(kc_b))[::-1]))]
        w = WeightVector.normalized(r.uniform(0.05, 1.0, n))
        mw_b, kcw_b, _ = brute_force(x, list(w.omega))
        kcw = double_center(k, CenteringScheme.weighted(w)).matrix
        res += [np.max(np.abs(kcw - kcw_b)), abs(float(w.omega @ k.matrix @ w.omega) - mw_b @ mw_b)]
        worst = max(worst, max(res))
    record(10, worst <= 1e-10, f"Gram-side vs explicit Xc worst residual {worst:.1e} over 20 instances")
