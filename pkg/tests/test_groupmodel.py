"""Chart calculus: directional derivatives, tangent products, samplers."""

import numpy as np
import pytest
import scipy.linalg

from laforge import groupmodel as gm
from laforge.groupmodel import (
    GroupSampler,
    SmoothMap,
    group_quasi_diff,
    right_directional_derivative,
    sample_elements,
    tangent_group_mult,
    vector_field_bracket,
)


@pytest.fixture(params=["aff1", "so3", "heis3", "line", "plane"])
def chart(request):
    return gm.CHARTS[request.param]()


def test_charts_realize_their_structure_constants(chart):
    assert chart.basis_commutator_residual() <= 1e-12


def test_coeffs_embed_roundtrip(chart):
    rng = np.random.default_rng(0)
    if chart.dim == 0:
        return
    x = rng.normal(size=chart.dim)
    assert np.allclose(chart.coeffs(chart.embed(x)), x)


def test_directional_derivative_of_constant_map():
    ch = gm.aff1_chart()
    F = SmoothMap(1, (2, 2), lambda g: np.eye(2))
    d = right_directional_derivative(F, 0, (ch.identity,), np.array([1.0, 0.5]), 1e-4, ch)
    assert np.max(np.abs(d)) == 0.0


def test_directional_derivative_adjoint_oracle():
    # d/dτ Ad_{exp(τ x2)} at the identity is the matrix commutator action
    ch = gm.aff1_chart()
    F = SmoothMap(1, (2, 2), lambda g: ch.Ad(g))
    x2 = np.array([0.0, 1.0])
    d = right_directional_derivative(F, 0, (ch.identity,), x2, 1e-4, ch)
    assert np.max(np.abs(d - ch.algebra.ad(x2))) <= 1e-8


def test_directional_derivative_chart_linearization():
    # F(g) = g differentiates to the embedded direction at the identity
    ch = gm.so3_chart()
    F = SmoothMap(1, (3, 3), lambda g: g)
    x = np.array([0.3, -0.2, 0.1])
    d = right_directional_derivative(F, 0, (ch.identity,), x, 1e-4, ch)
    assert np.max(np.abs(d - ch.embed(x))) <= 1e-8


def test_tangent_mult_at_identity():
    ch = gm.aff1_chart()
    x, y = np.array([1.0, 2.0]), np.array([-0.5, 1.0])
    assert np.allclose(tangent_group_mult(x, ch.identity, y, ch.identity, ch), x + y)


def test_tangent_mult_conjugation_oracle():
    ch = gm.aff1_chart()
    g = np.array([[2.0, 3.0], [0.0, 1.0]])
    out = tangent_group_mult(np.zeros(2), g, np.array([0.0, 1.0]), ch.identity, ch)
    assert np.allclose(out, [0.0, 2.0])  # g x2 g^{-1} = 2 x2


def test_tangent_mult_right_unit():
    ch = gm.so3_chart()
    rng = np.random.default_rng(1)
    x = rng.normal(size=3)
    g = ch.exp(rng.normal(size=3) * 0.4)
    h = ch.exp(rng.normal(size=3) * 0.4)
    assert np.allclose(tangent_group_mult(x, g, np.zeros(3), h, ch), x)


def test_tangent_mult_associative():
    # x + Ad_g y + Ad_{gh} z both ways
    ch = gm.aff1_chart()
    rng = np.random.default_rng(2)
    x, y, z = rng.normal(size=(3, 2))
    g, h, k = (ch.exp(rng.normal(size=2) * 0.5) for _ in range(3))
    left = tangent_group_mult(tangent_group_mult(x, g, y, h, ch), g @ h, z, k, ch)
    right = tangent_group_mult(x, g, tangent_group_mult(y, h, z, k, ch), h @ k, ch)
    assert np.max(np.abs(left - right)) <= 1e-12


def test_constant_fields_bracket_to_minus_commutator():
    ch = gm.so3_chart()
    g = ch.exp(np.array([0.2, -0.4, 0.3]))
    x, y = np.eye(3)[0], np.eye(3)[1]
    br = vector_field_bracket(lambda gg: x, lambda gg: y, g, ch)
    assert np.max(np.abs(br + ch.algebra.bracket(x, y))) <= 1e-9


def test_field_bracket_leibniz_in_product():
    # [ξ, φη] = φ[ξ, η] + (dφ along ξ) η  within O(h²)
    ch = gm.aff1_chart()
    g = ch.exp(np.array([0.3, 0.7]))
    xi = lambda gg: np.array([1.0, 0.0])
    eta = lambda gg: np.array([0.0, 1.0])
    phi = lambda gg: float(gg[0, 1]) + 2.0
    scaled = lambda gg: phi(gg) * eta(gg)
    lhs = vector_field_bracket(xi, scaled, g, ch)
    phim = SmoothMap(1, (1,), lambda gg: np.array([phi(gg)]))
    dphi = right_directional_derivative(phim, 0, (g,), xi(g), 1e-4, ch)[0]
    rhs = phi(g) * vector_field_bracket(xi, eta, g, ch) + dphi * eta(g)
    assert np.max(np.abs(lhs - rhs)) <= 1e-7


def test_sampler_identity_first_and_deterministic():
    ch = gm.aff1_chart()
    s = GroupSampler(11, 0.5, ch)
    a = sample_elements(s, 4)
    b = sample_elements(s, 4)
    assert np.allclose(a[0], ch.identity)
    for u, v in zip(a, b):
        assert np.array_equal(u, v)


def test_sampler_respects_radius_log_oracle():
    ch = gm.aff1_chart()
    for g in sample_elements(GroupSampler(7, 0.5, ch), 5):
        log = scipy.linalg.logm(g)
        assert np.linalg.norm(ch.coeffs(np.real(log))) <= 0.5 + 1e-8


def test_quasi_diff_squared_telescopes_for_trivial_actions():
    ch = gm.line_chart()
    eye = np.eye(2)
    dH = SmoothMap(1, (2, 2), lambda g: eye)
    dK = SmoothMap(1, (2, 2), lambda g: eye)
    theta = SmoothMap(1, (2, 2), lambda g: np.array([[1.0, 2.0], [3.0, 4.0]]))
    gs = [ch.exp(np.array([t])) for t in (0.3, -0.2, 0.5)]
    dtheta_vals = {}

    def dtheta_fn(g, h):
        return group_quasi_diff(dH, dK, theta, (g, h))

    dtheta = SmoothMap(2, (2, 2), dtheta_fn)
    for g in gs:
        for h in gs:
            for k in gs:
                out = group_quasi_diff(dH, dK, dtheta, (g, h, k))
                assert np.max(np.abs(out)) <= 1e-14


def test_quasi_diff_curvature_cocycle_and_obstruction():
    from laforge.catalog import build_twisted_ruth

    r, y, Z = build_twisted_ruth()
    ch = r.chart
    gs = gm.sample_elements(GroupSampler(3, 0.8, ch), 4)
    omega = r.omega
    for g in gs[:3]:
        for h in gs[:3]:
            for k in gs[:3]:
                out = group_quasi_diff(r.deltaH, r.deltaK, omega, (g, h, k))
                assert np.max(np.abs(out)) <= 1e-12
    # the square of the plain simplicial operator on a core-valued 1-cochain
    # equals minus the curvature applied through the structural map
    rng = np.random.default_rng(0)
    M = rng.normal(size=(2, 2))
    Zc = lambda g: M @ np.array([g[0, 0] - 1.0, g[0, 1]])
    dZ = lambda g, h: r.deltaK(g) @ Zc(h) - Zc(g @ h) + Zc(g)
    seen = 0.0
    for g in gs[:3]:
        for h in gs[:3]:
            for k in gs[:3]:
                d2 = r.deltaK(g) @ dZ(h, k) - dZ(g @ h, k) + dZ(g, h @ k) - dZ(g, h)
                pred = -r.omega(g, h) @ (r.partial @ Zc(k))
                assert np.max(np.abs(d2 - pred)) <= 1e-12
                seen = max(seen, np.max(np.abs(pred)))
    assert seen > 1e-3  # the obstruction is genuinely nonzero here
