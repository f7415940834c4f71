import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import data_matrices

from eigencenter import banana, iris
from eigencenter.centering import (
    CenteringScheme,
    WeightVector,
    double_center,
    mean_norm_sq_from_gram,
)
from eigencenter.core_linalg import EigenDecomposition
from eigencenter.kernels import GramMatrix, KernelSpec, gram_matrix
from eigencenter.spectral_analysis import (
    COVARIANCE_CHECKS,
    EigenPairSet,
    check_box_constraint,
    check_cumulative_bounds,
    check_dprime_identity,
    check_eigvec_sum_zero,
    check_interlacing,
    check_mean_scores,
    check_proportion_interlacing,
    check_trace_law,
    check_weighted_bounds,
    dprime_values,
    eigen_pairs,
    full_report,
    mean_score,
    proportions,
    schur_horn_dprime_gram,
)

# 40-digit mpmath eigensolve of XᵀX / XcᵀXc built from the vendored CSV text
IRIS_RAW = [9208.3050703148518056, 315.45431657675828714, 11.978042904909244345,
            3.5525702034806628808]
IRIS_CENTERED = [630.00801419919466659, 36.157941441366380373, 11.653215506394987378,
                 3.5514288530439656625]
IRIS_MEAN_NORM_SQ = 59.052796


def pairs_of(k):
    k = k if isinstance(k, GramMatrix) else GramMatrix(np.asarray(k, float))
    return eigen_pairs(k, "gram_raw"), eigen_pairs(double_center(k), "gram_centered")


def test_iris_spectrum_matches_oracle():
    k = gram_matrix(iris().x)
    raw, cen = pairs_of(k)
    np.testing.assert_allclose(raw.eigenvalues[:4], IRIS_RAW, rtol=1e-12)
    np.testing.assert_allclose(cen.eigenvalues[:4], IRIS_CENTERED, rtol=1e-12)
    assert mean_norm_sq_from_gram(k) == pytest.approx(IRIS_MEAN_NORM_SQ, rel=1e-13)


def test_iris_full_report_passes():
    rep = full_report(iris().x, KernelSpec.linear(), dataset_id="iris")
    failed = [c.name for c in rep.checks if not c.passed]
    assert rep.passed, failed
    assert all(c.status == "ok" for c in rep.checks)
    json.dumps(rep.to_dict())


def test_banana_gaussian_marks_covariance_not_applicable():
    rep = full_report(banana(200, 0.2, 7).x, KernelSpec.gaussian(0.5))
    assert rep.passed
    for name in COVARIANCE_CHECKS:
        assert rep.check(name).status == "not_applicable"
    lam, lamc = rep.eigenvalues_raw, rep.eigenvalues_centered
    assert lamc[0] <= lam[0] and lam[1] <= lamc[0]


def test_minimal_two_point_dataset():
    assert full_report(np.array([[1.0, 3.0], [2.0, -1.0]])).passed


def test_distance_kernel_report_uses_mds_checks():
    rep = full_report(iris().x, KernelSpec.negative_half_sqdist())
    assert rep.passed
    names = {c.name for c in rep.checks}
    assert {"delta_trace_zero", "cpd_probe", "mds_separation", "mds_lower_bound"} <= names
    assert "interlacing" not in names


def test_unknown_tolerance_rejected():
    with pytest.raises(ValueError):
        full_report(np.eye(2), tolerances={"nope": 1.0})


def test_absurd_tolerance_forces_failure():
    rep = full_report(iris().x, tolerances={"interlacing": -1.0})
    assert not rep.passed and rep.check("interlacing").status == "failed"


def test_trace_law_identity_example():
    k = GramMatrix(np.eye(2))
    kc = double_center(k)
    assert np.trace(kc.matrix) == pytest.approx(1.0)
    assert check_trace_law(k, kc, 0.5).passed


def test_zero_mean_data_reduces_bounds(rng):
    x = rng.normal(size=(3, 6))
    x -= x.mean(axis=1, keepdims=True)
    k = gram_matrix(x)
    raw, cen = pairs_of(k)
    assert mean_norm_sq_from_gram(k) == pytest.approx(0.0, abs=1e-13)
    np.testing.assert_allclose(np.trace(double_center(k).matrix), np.trace(k.matrix), rtol=1e-13)
    d = dprime_values(raw.eigenvalues, raw.ones_overlaps, 0.0, 6)
    np.testing.assert_allclose(np.sort(d)[::-1][:3], raw.eigenvalues[:3], rtol=1e-10)
    props = proportions(raw, cen)
    assert props["gamma"] == pytest.approx(1.0, abs=1e-12)


def test_rank_one_gram():
    v = np.array([1.0, 2.0, -0.5, 3.0])
    raw, cen = pairs_of(np.outer(v, v))
    assert raw.eigenvalues[0] == pytest.approx(v @ v)
    assert check_interlacing(raw, cen).passed
    assert np.abs(cen.eigenvalues[1:]).max() < 1e-12


def test_interlacing_detects_violation():
    raw, cen = pairs_of(gram_matrix(iris().x))
    bad_vals = cen.eigenvalues.copy()
    bad_vals[0] = raw.eigenvalues[0] * 1.01
    fake = EigenPairSet(EigenDecomposition(bad_vals, cen.vectors), "gram_centered", cen.ones_overlaps)
    res = check_interlacing(raw, fake)
    assert not res.passed and res.status == "failed"


def test_proportion_interlacing_zero_trace():
    raw, cen = pairs_of(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        check_proportion_interlacing(raw, cen)


def test_dprime_identity_against_direct_diagonal(three_cols):
    k = gram_matrix(three_cols)
    raw, _ = pairs_of(k)
    kc = double_center(k)
    assert check_dprime_identity(raw, kc, 2.0).passed
    n = 3
    for i in range(n):
        a = raw.vectors[:, i]
        direct = 0.0
        for p in range(n):
            for q in range(n):
                direct += a[p] * kc.matrix[p, q] * a[q]
        d = raw.eigenvalues[i] + (2.0 - 2 * raw.eigenvalues[i] / n) * raw.ones_overlaps[i] ** 2
        assert d == pytest.approx(direct, abs=1e-12)


def test_cumulative_single_sample():
    k = GramMatrix(np.array([[4.0]]))
    raw, cen = pairs_of(k)
    entries = schur_horn_dprime_gram(raw, 4.0, cen.eigenvalues)
    assert entries[0].cumulative_d == pytest.approx(0.0, abs=1e-15)
    assert entries[0].cumulative_lambda_c == 0.0
    assert check_cumulative_bounds(entries).passed
    assert abs(cen.vectors[0, 0]) == 1.0
    assert check_box_constraint(cen).passed


@given(data_matrices(n_max=10), st.sampled_from(["linear", "gaussian", "poly"]))
def test_random_reports_pass(x, kind):
    spec = {"linear": KernelSpec.linear(), "gaussian": KernelSpec.gaussian(1.0),
            "poly": KernelSpec.polynomial(1.0, 2)}[kind]
    rep = full_report(x, spec)
    assert rep.passed, [c.to_dict() for c in rep.checks if not c.passed]


@given(data_matrices(n_max=10))
def test_centered_eigvecs_are_zero_sum(x):
    raw, cen = pairs_of(gram_matrix(x, KernelSpec.gaussian(0.7)))
    assert check_eigvec_sum_zero(cen, reference=raw.eigenvalues[0]).passed


def test_mean_scores_three_cols(three_cols):
    raw, _ = pairs_of(gram_matrix(three_cols))
    assert check_mean_scores(three_cols, raw).passed
    lam, a = raw.eigenvalues[0], raw.vectors[:, 0]
    w = three_cols @ a / np.sqrt(lam)
    direct, via = mean_score(w, [1.0, 1.0], lam, raw.ones_overlaps[0], 3)
    assert direct == pytest.approx(via, rel=1e-12)
    with pytest.raises(ValueError):
        mean_score(w, [1.0, 1.0], 0.0, 1.0, 3)


def test_weighted_uniform_reduces_to_mean(rng):
    x = rng.normal(size=(3, 7)) + 1
    k = gram_matrix(x)
    res = {c.name: c for c in check_weighted_bounds(k, WeightVector.uniform(7), x)}
    assert all(c.passed for c in res.values())
    raw, cen = pairs_of(k)
    plain = schur_horn_dprime_gram(raw, mean_norm_sq_from_gram(k), cen.eigenvalues)
    assert res["weighted_lower_bound"].details["max_dprime"] == pytest.approx(plain[0].d_prime, abs=1e-10)


def test_weighted_point_mass(three_cols):
    w = [1.0, 0.0, 0.0]
    kc = double_center(gram_matrix(three_cols), CenteringScheme.weighted(w))
    cen = eigen_pairs(kc, "gram_centered")
    assert check_eigvec_sum_zero(cen, weights=np.array(w)).passed


@given(st.integers(0, 10_000))
def test_weighted_bounds_random_weights_iris_subset(seed):
    r = np.random.default_rng(seed)
    x = iris().x[:, r.choice(150, 12, replace=False)]
    w = WeightVector.normalized(r.uniform(0.05, 1.0, 12))
    for c in check_weighted_bounds(gram_matrix(x), w, x):
        assert c.passed, c.to_dict()


def test_report_json_shape():
    d = full_report(np.array([[0.0, 1.0, 2.0]])).to_dict()
    assert set(d) >= {"dataset", "kernel", "n", "passed", "checks", "eigenvalues", "proportions"}
    assert set(d["eigenvalues"]) == {"raw", "centered"}


def test_weighted_centering_can_break_interlacing():
    # the oblique projection I - ω1ᵀ can stretch: λc₂ ≈ 1.1467 > λ₂ ≈ 0.9983
    x = np.array([[-0.3, 1.6, 1.6, 2.3], [0.2, 2.7, 0.7, 2.6]])
    w = CenteringScheme.weighted([5 / 16, 5 / 16, 1 / 16, 5 / 16])
    k = gram_matrix(x)
    lam = eigen_pairs(k, "gram_raw").eigenvalues
    lamc = eigen_pairs(double_center(k, w), "gram_centered").eigenvalues
    assert lamc[1] == pytest.approx(1.1467231, rel=1e-6)
    assert lamc[1] > lam[1] + 0.1
    assert all(c.passed for c in check_weighted_bounds(k, w.weights, x))


def test_identical_samples():
    # regression: the centered matrix is pure round-off here
    x = np.full((1, 3), 2.37700087)
    assert full_report(x).passed
