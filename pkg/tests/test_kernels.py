import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import data_matrices

from eigencenter.kernels import (
    CPD,
    PSD,
    KernelSpec,
    cpd_probe,
    distance_matrix_to_delta,
    gram_matrix,
    kernel_eval,
    parse_kernel,
    psd_probe,
    sq_distances,
)


def test_kernel_eval_examples():
    assert kernel_eval(KernelSpec.gaussian(0.5), [0.3, -1.0], [0.3, -1.0]) == 1.0
    assert kernel_eval(KernelSpec.linear(), [1, 2], [3, 4]) == 11.0
    assert kernel_eval(KernelSpec.negative_half_sqdist(), [0, 0], [1, 1]) == -1.0
    assert kernel_eval(KernelSpec.polynomial(1, 2), [1, 2], [3, 4]) == 144.0
    # exp(-1/(2·0.25)) frozen from a hand evaluation
    assert kernel_eval(KernelSpec.gaussian(0.5), [0.0], [1.0]) == pytest.approx(0.1353352832366127, rel=1e-15)


def test_kernel_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        kernel_eval(KernelSpec.linear(), [1, 2], [1, 2, 3])


@pytest.mark.parametrize("text,expected", [
    ("linear", KernelSpec.linear()),
    ("gaussian:0.5", KernelSpec.gaussian(0.5)),
    ("rbf:2", KernelSpec.gaussian(2.0)),
    ("poly:1:2", KernelSpec.polynomial(1.0, 2)),
    ("polynomial:0:3", KernelSpec.polynomial(0.0, 3)),
    ("negative_half_sqdist", KernelSpec.negative_half_sqdist()),
    ("nhsd", KernelSpec.negative_half_sqdist()),
])
def test_parse_kernel(text, expected):
    assert parse_kernel(text) == expected


@pytest.mark.parametrize("text", ["", "gauss", "gaussian", "gaussian:-1", "gaussian:0", "poly:1",
                                  "poly:1:1.5", "poly:1:0", "linear:3", "gaussian:abc"])
def test_parse_kernel_rejects(text):
    with pytest.raises(ValueError):
        parse_kernel(text)


@pytest.mark.parametrize("spec", [KernelSpec.gaussian(0.5), KernelSpec.polynomial(1, 2)])
def test_str_round_trip(spec):
    assert parse_kernel(str(spec)) == spec


def test_gram_examples():
    k = gram_matrix(np.eye(2))
    np.testing.assert_array_equal(k.matrix, np.eye(2))
    assert k.kind == PSD


@given(data_matrices())
def test_gram_matches_pairwise_eval(x):
    for spec in (KernelSpec.linear(), KernelSpec.gaussian(1.3), KernelSpec.polynomial(0.5, 2),
                 KernelSpec.negative_half_sqdist()):
        k = gram_matrix(x, spec).matrix
        n = x.shape[1]
        brute = np.array([[kernel_eval(spec, x[:, i], x[:, j]) for j in range(n)] for i in range(n)])
        np.testing.assert_allclose(k, brute, rtol=1e-12, atol=1e-12 * max(1.0, np.abs(brute).max()))
        np.testing.assert_array_equal(k, k.T)


@given(data_matrices())
def test_gaussian_unit_diagonal(x):
    np.testing.assert_array_equal(np.diag(gram_matrix(x, KernelSpec.gaussian(0.5)).matrix), 1.0)


def test_sq_distances_exact_zero_diagonal(rng):
    x = rng.normal(size=(3, 7)) * 1e8
    d = sq_distances(x)
    assert np.all(np.diag(d) == 0)
    np.testing.assert_array_equal(d, d.T)


def test_delta_examples():
    np.testing.assert_array_equal(distance_matrix_to_delta([[0.0]]).matrix, [[0.0]])
    delta = distance_matrix_to_delta([[0.0, 2.0], [2.0, 0.0]])
    assert delta.matrix[0, 1] == -2.0 and delta.kind == CPD


def test_delta_cpd_probe(rng):
    pts = rng.normal(size=(2, 4))
    delta = distance_matrix_to_delta(np.sqrt(sq_distances(pts)))
    assert cpd_probe(delta, 100) >= -1e-12
    # not PSD: its trace is zero and it is nonzero
    assert psd_probe(delta, 100) < 0


@pytest.mark.parametrize("bad", [
    [[0.0, -1.0], [-1.0, 0.0]],
    [[1.0, 1.0], [1.0, 0.0]],
    [[0.0, 1.0], [2.0, 0.0]],
    [[0.0, 1.0, 2.0]],
])
def test_delta_rejects(bad):
    with pytest.raises(ValueError):
        distance_matrix_to_delta(bad)


def test_delta_bias_makes_psd():
    d = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert distance_matrix_to_delta(d, bias=1.0).kind == PSD
    assert distance_matrix_to_delta(d, bias=0.1).kind == CPD


def test_cpd_probe_single_point():
    assert cpd_probe(np.zeros((1, 1))) == float("inf")


@given(st.floats(0.05, 10))
def test_spec_validation(sigma):
    assert KernelSpec.gaussian(sigma).sigma == sigma
    with pytest.raises(ValueError):
        KernelSpec.gaussian(-sigma)
