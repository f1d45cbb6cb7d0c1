"""Structure-constant algebra: validity checks, cochains, crossed modules."""

import numpy as np
import pytest

from laforge import liecore
from laforge.liecore import (
    Butterfly,
    CrossedModule,
    JacobiError,
    LieAlgebra,
    aff1,
    ce_quasi_diff,
    check_butterfly,
    check_crossed_module,
    check_lie_algebra,
    heisenberg3,
    semidirect_twisted,
)


def test_abelian_residuals_zero():
    rep = check_lie_algebra(LieAlgebra.abelian(3))
    assert rep["antisymmetry"] == 0.0 and rep["jacobi"] == 0.0


def test_aff1_is_lie():
    rep = check_lie_algebra(aff1())
    assert rep["antisymmetry"] == 0.0 and rep["jacobi"] == 0.0


def test_perturbed_aff1_antisymmetry():
    L = aff1()
    c = L.c.copy()
    c[1, 0, 1] = -0.9  # breaks antisymmetry against c[0,1,1] = 1 by exactly 0.1
    rep = check_lie_algebra(LieAlgebra(2, c))
    assert abs(rep["antisymmetry"] - 0.1) <= 1e-14


def test_heisenberg_is_lie():
    assert check_lie_algebra(heisenberg3())["pass"]


# --- Chevalley-Eilenberg operator with quasi-representations -------------


def _true_rep(alg):
    """Adjoint representation tensor of the algebra on itself."""
    return np.stack([alg.ad(v) for v in np.eye(alg.dim)])


def test_ce_hand_expansion_oracle():
    # (d_rho Z)(y0, y1) = rho(y0) Z(y1) - rho(y1) Z(y0) - Z([y0, y1])
    alg = aff1()
    rng = np.random.default_rng(0)
    rep = rng.normal(size=(2, 3, 3))
    z = rng.normal(size=(3, 2))  # 1-cochain into W = R^3
    out = ce_quasi_diff(alg, rep, z, 1)
    for i in range(2):
        for j in range(2):
            y0, y1 = np.eye(2)[i], np.eye(2)[j]
            expected = rep[i] @ z[:, j] - rep[j] @ z[:, i]
            br = alg.bracket(y0, y1)
            expected = expected - z @ br
            assert np.allclose(out[:, i, j], expected)


def test_ce_square_zero_for_true_rep():
    alg = heisenberg3()
    rep = _true_rep(alg)
    rng = np.random.default_rng(1)
    coch = rng.normal(size=(3, 3))
    d1 = ce_quasi_diff(alg, rep, coch, 1)
    d2 = ce_quasi_diff(alg, rep, d1, 2)
    assert np.max(np.abs(d2)) <= 1e-12


def test_ce_square_nonzero_for_quasi_rep():
    # the square of the operator is an alternating 3-tensor, so a visible
    # defect needs at least three dimensions
    alg = heisenberg3()
    rng = np.random.default_rng(2)
    rep = rng.normal(size=(3, 3, 3))  # generic, not a representation
    coch = rng.normal(size=(3, 3))
    d2 = ce_quasi_diff(alg, rep, ce_quasi_diff(alg, rep, coch, 1), 2)
    assert np.max(np.abs(d2)) > 1e-3


def test_ce_abelian_trivial_rep_kills_one_cochains():
    alg = LieAlgebra.abelian(3)
    rep = np.zeros((3, 2, 2))
    coch = np.arange(6.0).reshape(2, 3)
    assert np.max(np.abs(ce_quasi_diff(alg, rep, coch, 1))) == 0.0


# --- crossed modules ------------------------------------------------------


def test_crossed_module_trivial_passes():
    cm = CrossedModule(
        base=aff1(),
        top=LieAlgebra.abelian(2),
        structural=np.zeros((2, 2)),
        action=np.zeros((2, 2, 2)),
    )
    rep = check_crossed_module(cm)
    assert rep["pass"]


def _inner_crossed_module(scale=1.0):
    """top = base = aff(1), structural identity, action = scaled adjoint."""
    alg = aff1()
    act = np.stack([alg.ad(v) * scale for v in np.eye(2)])
    return CrossedModule(base=alg, top=aff1(), structural=np.eye(2), action=act)


def test_crossed_module_adjoint_passes():
    rep = check_crossed_module(_inner_crossed_module())
    assert max(v for k, v in rep.items() if isinstance(v, float)) <= 1e-10


def test_crossed_module_scaled_action_breaks_peiffer():
    rep = check_crossed_module(_inner_crossed_module(scale=2.0))
    assert rep["peiffer"] > 0.1


# --- twisted semidirect products ------------------------------------------


def test_semidirect_true_rep_no_twist():
    base = aff1()
    fiber = aff1()
    rep = _true_rep(base)  # adjoint on itself
    out = semidirect_twisted(base, fiber, rep, np.zeros((2, 2, 2)))
    assert check_lie_algebra(out)["pass"]


def test_semidirect_nonclosed_cocycle_names_triple():
    # solvable 3-dim base: [e0,e1] = e1 and [e2,e1] = e1, so the cocycle
    # with coc(e1, e2) != 0 has a nonzero alternating closedness defect
    c = np.zeros((3, 3, 3))
    c[0, 1, 1], c[1, 0, 1] = 1.0, -1.0
    c[2, 1, 1], c[1, 2, 1] = 1.0, -1.0
    base = LieAlgebra(3, c)
    assert check_lie_algebra(base)["pass"]
    fiber = LieAlgebra.abelian(2)
    rep = np.zeros((3, 2, 2))
    coc = np.zeros((2, 3, 3))
    coc[0, 1, 2], coc[0, 2, 1] = 1.0, -1.0  # not closed for the zero action
    with pytest.raises(JacobiError) as err:
        semidirect_twisted(base, fiber, rep, coc)
    assert len(err.value.triple) == 3
    assert err.value.residual > 1e-3


# --- butterflies -----------------------------------------------------------


def test_butterfly_vacant_passes():
    zero = LieAlgebra.abelian(0)
    b = Butterfly(
        nw=zero, ne=zero, center=zero, sw_dim=0, se_dim=0,
        nw_to_center=np.zeros((0, 0)), ne_to_center=np.zeros((0, 0)),
        center_to_sw=np.zeros((0, 0)), center_to_se=np.zeros((0, 0)),
    )
    assert check_butterfly(b)["pass"]


def _aff_butterfly(leg_scale=1.0):
    # center aff(1)⊕R; the NW leg includes the central line (killed by the
    # SE projection onto the affine part), the NE leg includes the affine
    # part (killed by the SW projection onto the center): both diagonals
    # short exact by construction
    c = np.zeros((3, 3, 3))
    c[:2, :2, :2] = aff1().c
    center = LieAlgebra(3, c)
    return Butterfly(
        nw=LieAlgebra.abelian(1), ne=aff1(), center=center, sw_dim=1, se_dim=2,
        nw_to_center=np.array([[0.0], [0.0], [1.0]]),
        ne_to_center=np.vstack([np.eye(2), np.zeros((1, 2))]),
        center_to_sw=np.array([[0.0, 0.0, 1.0]]) * leg_scale,
        center_to_se=np.hstack([np.eye(2), np.zeros((2, 1))]),
    )


def test_butterfly_exact_example():
    rep = check_butterfly(_aff_butterfly())
    assert rep["pass"] and rep["v_dim"] == 0


def test_butterfly_detects_killed_leg():
    rep = check_butterfly(_aff_butterfly(leg_scale=0.0))
    assert not rep["pass"]
