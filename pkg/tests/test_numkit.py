"""Kernel-level oracles: subspace splitting, exponentials, differencing."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laforge import numkit


def small_matrices(n=3):
    return st.lists(
        st.lists(st.floats(-2.0, 2.0), min_size=n, max_size=n), min_size=n, max_size=n
    ).map(lambda rows: np.array(rows))


def test_svd_identity_case():
    ker, img, comp = numkit.svd_subspaces(np.eye(2), 1e-10)
    assert ker.dim == 0 and img.dim == 2 and comp.dim == 0


def test_svd_zero_case():
    ker, img, comp = numkit.svd_subspaces(np.zeros((2, 2)), 1e-10)
    assert ker.dim == 2 and img.dim == 0 and comp.dim == 2


def test_svd_hand_oracle():
    # one nonzero row: kernel e2, image e1, complement e2 of the codomain
    ker, img, comp = numkit.svd_subspaces(np.array([[1.0, 0.0], [0.0, 0.0]]))
    assert np.allclose(np.abs(ker.vectors.ravel()), [0.0, 1.0])
    assert np.allclose(np.abs(img.vectors.ravel()), [1.0, 0.0])
    assert np.allclose(np.abs(comp.vectors.ravel()), [0.0, 1.0])
    # deterministic sign convention: largest entry positive
    assert ker.vectors[1, 0] > 0 and img.vectors[0, 0] > 0


@settings(deadline=None, derandomize=True, max_examples=25)
@given(small_matrices())
def test_svd_rank_nullity_and_reconstruction(m):
    ker, img, comp = numkit.svd_subspaces(m, 1e-8)
    assert ker.dim + img.dim == m.shape[1]
    assert img.dim + comp.dim == m.shape[0]
    for j in range(ker.dim):
        assert np.linalg.norm(m @ ker.vectors[:, j]) <= 1e-7


def test_svd_rejects_non_finite():
    with pytest.raises(numkit.InvalidInputError):
        numkit.svd_subspaces(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_mat_exp_zero_is_identity():
    assert np.allclose(numkit.mat_exp(np.zeros((3, 3))), np.eye(3))


def test_mat_exp_scalar_oracle():
    assert abs(numkit.mat_exp(np.array([[1.0]]))[0, 0] - np.e) <= 1e-12 * np.e


def test_mat_exp_nilpotent_truncated_series():
    n = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(numkit.mat_exp(n), np.eye(2) + n)


def test_mat_exp_rejects_non_square():
    with pytest.raises(numkit.InvalidInputError):
        numkit.mat_exp(np.zeros((2, 3)))


@settings(deadline=None, derandomize=True, max_examples=20)
@given(small_matrices())
def test_mat_exp_inverse_identity(x):
    if np.linalg.norm(x) > 5.0:
        x = 5.0 * x / np.linalg.norm(x)
    prod = numkit.mat_exp(x) @ numkit.mat_exp(-x)
    assert np.max(np.abs(prod - np.eye(3))) <= 1e-10


def test_central_diff_linear_exact():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    d = numkit.central_diff(lambda t: t * m, 1e-3)
    assert np.allclose(d, m)


def test_central_diff_even_function():
    d = numkit.central_diff(lambda t: np.array([[t * t]]), 1e-4)
    assert abs(d[0, 0]) <= 1e-8


def test_central_diff_exp_oracle():
    d = numkit.central_diff(lambda t: np.array([[np.exp(t)]]), 1e-4)
    assert abs(d[0, 0] - 1.0) <= 1e-8


def test_central_diff_second_order_scaling():
    # halving h quarters the truncation error on a curved closed form
    f = lambda t: np.array([[np.sin(1.3 * t + 0.2)]])
    exact = 1.3 * np.cos(0.2)
    e1 = abs(numkit.central_diff(f, 1e-3)[0, 0] - exact)
    e2 = abs(numkit.central_diff(f, 5e-4)[0, 0] - exact)
    assert e2 <= e1 / 3.0


def test_central_diff4_beats_central_diff():
    f = lambda t: np.array([[np.exp(2.0 * t)]])
    e2 = abs(numkit.central_diff(f, 1e-3)[0, 0] - 2.0)
    e4 = abs(numkit.central_diff4(f, 1e-3)[0, 0] - 2.0)
    assert e4 < e2 / 100.0


def test_intersect_and_union():
    a = numkit.SubspaceBasis(3, np.eye(3)[:, :2])
    b = numkit.SubspaceBasis(3, np.eye(3)[:, 1:])
    cap = numkit.intersect(a, b)
    assert cap.dim == 1
    assert abs(abs(cap.vectors[1, 0]) - 1.0) <= 1e-12
    cup = numkit.orth_union(a, b)
    assert cup.dim == 3
