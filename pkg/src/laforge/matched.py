"""Matched pairs: the full datum equivalent to an LA-group with a splitting.

A :class:`MatchedPair` couples a :class:`~laforge.ruth.Ruth` with the
4-tuple (ρ_e, α, ℓ_e, ω) and the Lie algebra of units. The eight
compatibility axioms are measured by :func:`check_matched_pair`;
:func:`assemble_la_group` builds the groupoid-with-algebroid structure and
:func:`extract_matched_pair` recovers the datum from it for any
unit-extending splitting. :func:`derived_structures` assembles the crossed
modules, butterfly and twisted isotropy algebras the datum induces.
"""

from dataclasses import dataclass, field

import numpy as np

from .auth import Auth, NESTED_STEP_SCALE, ProductAlgebroid, TrivialAlgebroid, check_auth
from .groupmodel import SmoothMap, right_directional_derivative, vector_field_bracket
from .liecore import (
    Butterfly,
    CrossedModule,
    LieAlgebra,
    antisymmetry_residual,
    check_butterfly,
    check_crossed_module,
    jacobi_residual,
    semidirect_twisted,
    subalgebra_closure_residual,
)
from .numkit import (
    DEFAULT_FD_STEP,
    DEFAULT_TOL,
    InvalidInputError,
    central_diff,
    central_diff4,
    max_abs,
    svd_subspaces,
)
from .ruth import Ruth, VbArrow, vb_structure


@dataclass
class MatchedPair:
    ruth: Ruth
    rho_e: np.ndarray  # (g_dim, k_dim)
    alpha: SmoothMap  # G -> (g_dim, h_dim)
    ell_e: np.ndarray  # (h_dim, k_dim, k_dim)
    omega: SmoothMap  # G -> (k_dim, h_dim, h_dim)
    h_algebra: LieAlgebra
    name: str = ""

    def __post_init__(self):
        self.rho_e = np.asarray(self.rho_e, dtype=float)
        self.ell_e = np.asarray(self.ell_e, dtype=float)
        k, hd = self.ruth.k_dim, self.ruth.h_dim
        if self.rho_e.shape != (self.ruth.chart.dim, k):
            raise InvalidInputError("rho_e must map the core to the chart algebra")
        if self.ell_e.shape != (hd, k, k):
            raise InvalidInputError("ell_e tensor shape mismatch")
        if self.h_algebra.dim != hd:
            raise InvalidInputError("unit algebra dimension mismatch")

    @property
    def chart(self):
        return self.ruth.chart

    @property
    def k_dim(self):
        return self.ruth.k_dim

    @property
    def h_dim(self):
        return self.ruth.h_dim

    def alpha_on(self, g, y):
        return self.alpha(g) @ np.asarray(y, dtype=float)

    def omega_on(self, g, y0, y1):
        return np.einsum("kij,i,j->k", self.omega(g), y0, y1)


def _entry(name, law, residual, worst=""):
    return {"name": name, "law": law, "residual": float(residual), "worst": worst}


def _pairs(samples, cap=None):
    out = [(a, b) for a in samples for b in samples]
    return out[:cap] if cap else out


def derive_core_bracket(mp, h=DEFAULT_FD_STEP, order=4):
    """Structure constants of the core bracket the datum determines.

    [z0, z1] = ℓ_e^{∂z0}(z1) + (d_e Δk) along ρ_e(z1), applied to z0.
    The derivative defaults to the fourth-order stencil: derived structures
    compare this bracket at tolerances far below plain O(h²) error.
    """
    from .numkit import mat_exp

    r = mp.ruth
    k = mp.k_dim
    diff = central_diff4 if order == 4 else central_diff
    c = np.zeros((k, k, k))
    eye = np.eye(k)
    for j in range(k):
        x = mp.rho_e @ eye[j]
        if np.any(x):
            xm = r.chart.embed(x)
            dk_dir = diff(lambda t: r.deltaK(mat_exp(t * xm)), h)
        else:
            dk_dir = np.zeros((k, k))
        for i in range(k):
            c[i, j] = np.einsum("axy,a,y->x", mp.ell_e, r.partial @ eye[i], eye[j])
            c[i, j] = c[i, j] + dk_dir @ eye[i]
    return LieAlgebra(k, c, name="core")


def derive_ell(mp, h=DEFAULT_FD_STEP):
    """The tensor family ℓ_g reconstructed from ℓ_e, Δh and the curvature.

    ℓ_g^y(z) = ℓ_e^{Δh_g y}(z) - (d Ω) at (e, g), first slot only, along
    ρ_e(z); the second-slot derivative is intentionally absent.
    """
    r = mp.ruth
    k, hd = mp.k_dim, mp.h_dim
    from .numkit import mat_exp

    def ell_fn(g):
        out = np.zeros((hd, k, k))
        dh = r.deltaH(g)
        for i in range(hd):
            out[i] = np.einsum("axy,a->xy", mp.ell_e, dh @ np.eye(hd)[i])
        for j in range(k):
            x = mp.rho_e @ np.eye(k)[j]
            if not np.any(x):
                continue
            xm = r.chart.embed(x)
            dom = central_diff(lambda t: r.omega(mat_exp(t * xm), g), h)
            # subtract (d_(e,g) Ω)_(ρ_e(z_j), 0)(y_i) from column j
            out[:, :, j] = out[:, :, j] - dom.T
        return out

    return SmoothMap(1, (hd, k, k), ell_fn, name="ell")


def build_auth(mp, h=DEFAULT_FD_STEP, core=None):
    """The action up to homotopy carried by the datum, on G × core."""
    core = core if core is not None else derive_core_bracket(mp, h)
    target = TrivialAlgebroid(mp.chart, core, mp.rho_e)
    return Auth(
        algebra=mp.h_algebra,
        target=target,
        alpha=mp.alpha,
        ell=derive_ell(mp, h),
        omega=mp.omega,
    )


# ---------------------------------------------------------------------------
# the product algebroid TG × h used by the side-flatness axiom


def mult_morphism_residual(mp, core, ell, g, hh, P, Pp, h=DEFAULT_FD_STEP):
    """Defect of the multiplication respecting brackets on one section pair.

    ``P = (Z0, Z1, Y)`` parametrizes the constant composable-pair section
    ((g; Z0, ∂Z1 + Δh_h Y), (h; Z1, Y)); the identity evaluated here is the
    bracket-homomorphism law for the multiplication on such sections, with
    the bracket of the pushed-forward sections carrying the usual
    derivative terms along the anchor directions of each leg. Every one of
    the five multiplication relations is a slice of this identity.
    """
    from .numkit import mat_exp

    r, chart = mp.ruth, mp.chart
    k, hd = mp.k_dim, mp.h_dim
    Z0, Z1, Y = (np.asarray(v, dtype=float) for v in P)
    Z0p, Z1p, Yp = (np.asarray(v, dtype=float) for v in Pp)
    gh = chart.mul(g, hh)
    dhh = r.deltaH(hh)
    u, up = r.partial @ Z1 + dhh @ Y, r.partial @ Z1p + dhh @ Yp
    ellg, ellh, ellgh = ell(g), ell(hh), ell(gh)

    def L(t, y, z):
        return np.einsum("ixy,i,y->x", t, y, z)

    B1 = core.bracket(Z1, Z1p) + L(ellh, Y, Z1p) - L(ellh, Yp, Z1) + mp.omega_on(hh, Y, Yp)
    X = mp.h_algebra.bracket(Y, Yp)
    B0 = core.bracket(Z0, Z0p) + L(ellg, u, Z0p) - L(ellg, up, Z0) + mp.omega_on(g, u, up)
    om = r.omega(g, hh)
    lhs = B0 + r.deltaK(g) @ B1 - om @ X
    M = Z0 + r.deltaK(g) @ Z1 - om @ Y
    Mp = Z0p + r.deltaK(g) @ Z1p - om @ Yp
    rhs = core.bracket(M, Mp) + L(ellgh, Y, Mp) - L(ellgh, Yp, M) + mp.omega_on(gh, Y, Yp)
    x0 = mp.rho_e @ Z0 + mp.alpha(g) @ u
    x1 = mp.rho_e @ Z1 + mp.alpha(hh) @ Y
    x0p = mp.rho_e @ Z0p + mp.alpha(g) @ up
    x1p = mp.rho_e @ Z1p + mp.alpha(hh) @ Yp
    dk_map = SmoothMap(1, (k, k), lambda gg: r.deltaK(gg))

    def d_omega(x, slot):
        if not np.any(x):
            return np.zeros((k, hd))
        xm = chart.embed(x)
        if slot == 0:
            return central_diff(lambda t: r.omega(mat_exp(t * xm) @ g, hh), h)
        return central_diff(lambda t: r.omega(g, mat_exp(t * xm) @ hh), h)

    rhs = rhs + right_directional_derivative(dk_map, 0, (g,), x0, h, chart) @ Z1p
    rhs = rhs - d_omega(x0, 0) @ Yp - d_omega(x1, 1) @ Yp
    rhs = rhs - right_directional_derivative(dk_map, 0, (g,), x0p, h, chart) @ Z1
    rhs = rhs + d_omega(x0p, 0) @ Y + d_omega(x1p, 1) @ Y
    return lhs - rhs


def _tg_h_bracket(chart, h_alg, s0, s1, h):
    """Bracket on sections of TG × h; sections are (field, h-map) pairs."""
    xi0, y0 = s0
    xi1, y1 = s1
    hd = h_alg.dim

    def xi_br(g):
        return vector_field_bracket(xi0, xi1, g, chart, h)

    def y_br(g):
        m0 = SmoothMap(1, (hd,), y0)
        m1 = SmoothMap(1, (hd,), y1)
        out = h_alg.bracket(np.asarray(y0(g), dtype=float), np.asarray(y1(g), dtype=float))
        out = out + right_directional_derivative(m1, 0, (g,), xi0(g), h, chart)
        out = out - right_directional_derivative(m0, 0, (g,), xi1(g), h, chart)
        return out

    return xi_br, y_br


def check_matched_pair(mp, samples, h=DEFAULT_FD_STEP, tol=DEFAULT_TOL, pair_cap=16):
    """The eight compatibility axioms, one residual entry each."""
    r = mp.ruth
    chart = mp.chart
    k, hd, gd = mp.k_dim, mp.h_dim, chart.dim
    eye_k, eye_h = np.eye(k), np.eye(hd)
    entries = []

    # (1) the derived core bracket is a Lie bracket (measured at O(h²))
    core2 = derive_core_bracket(mp, h, order=2)
    anti = antisymmetry_residual(core2.c)
    jac, _ = jacobi_residual(core2.c)
    entries.append(
        _entry("axiom-1-core-bracket", "matched/core-bracket-valid", max(anti, jac))
    )

    core = derive_core_bracket(mp, h, order=4)
    ell = derive_ell(mp, h)
    auth = build_auth(mp, h, core=core)

    # (2) (α, ∇, ω) is an action up to homotopy on G × core
    auth_entries = check_auth(auth, samples, h=h, tol=tol)
    worst_auth = max(auth_entries, key=lambda e: e["residual"])
    entries.append(
        _entry(
            "axiom-2-auth",
            "matched/action-up-to-homotopy",
            worst_auth["residual"],
            worst_auth["name"],
        )
    )

    # (3) structural map equivariant over the units, up to the anchor
    res, worst = 0.0, ""
    dh_at_e = {}
    for j in range(k):
        x = mp.rho_e @ eye_k[j]
        if np.any(x):
            xm = chart.embed(x)
            from .numkit import mat_exp

            dh_at_e[j] = central_diff(lambda t: r.deltaH(mat_exp(t * xm)), h)
        else:
            dh_at_e[j] = np.zeros((hd, hd))
    for i in range(hd):
        for j in range(k):
            lhs = mp.h_algebra.bracket(eye_h[i], r.partial @ eye_k[j])
            lhs = lhs - r.partial @ (np.einsum("axy,a,y->x", mp.ell_e, eye_h[i], eye_k[j]))
            rhs = dh_at_e[j] @ eye_h[i]
            v = max_abs(lhs - rhs)
            if v > res:
                res, worst = v, f"pair ({i},{j})"
    entries.append(_entry("axiom-3-unit-equivariance", "matched/units-equivariant", res, worst))

    # (4) anchor-at-identity equivariant over the group, up to the core map
    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        ad = chart.Ad(g)
        dk = r.deltaK(g)
        al = mp.alpha(g)
        for j in range(k):
            v = max_abs(mp.rho_e @ (dk @ eye_k[j]) - ad @ (mp.rho_e @ eye_k[j]) - al @ (r.partial @ eye_k[j]))
            if v > res:
                res, worst = v, f"sample {si}"
    entries.append(_entry("axiom-4-group-equivariance", "matched/anchor-equivariant-up-to-core", res, worst))

    # (5) the side connection on TG × h is flat up to the 2-cochain
    h_in = NESTED_STEP_SCALE * h
    res, worst = 0.0, ""

    def s_of(y):
        return (lambda g, yy=y: mp.alpha(g) @ yy, lambda g, yy=y: r.deltaH(g) @ yy)

    fields = [(lambda g, x=x: x, lambda g: np.zeros(hd)) for x in np.eye(gd)]
    fields += [(lambda g: np.zeros(gd), lambda g, y=y: y) for y in eye_h]
    for si, g in enumerate(samples):
        for i in range(hd):
            for j in range(i + 1, hd):
                y0, y1 = eye_h[i], eye_h[j]
                ybr = mp.h_algebra.bracket(y0, y1)
                om_pair = (
                    lambda gg, a=y0, b=y1: mp.rho_e @ mp.omega_on(gg, a, b),
                    lambda gg, a=y0, b=y1: r.partial @ mp.omega_on(gg, a, b),
                )
                for w in fields:
                    inner1 = _tg_h_bracket(chart, mp.h_algebra, s_of(y1), w, h_in)
                    lhs_xi, lhs_y = _tg_h_bracket(chart, mp.h_algebra, s_of(y0), inner1, h)
                    inner0 = _tg_h_bracket(chart, mp.h_algebra, s_of(y0), w, h_in)
                    sub_xi, sub_y = _tg_h_bracket(chart, mp.h_algebra, s_of(y1), inner0, h)
                    lin_xi, lin_y = _tg_h_bracket(chart, mp.h_algebra, s_of(ybr), w, h)
                    rhs_xi, rhs_y = _tg_h_bracket(chart, mp.h_algebra, om_pair, w, h)
                    v = max(
                        max_abs(lhs_xi(g) - sub_xi(g) - lin_xi(g) - rhs_xi(g)),
                        max_abs(lhs_y(g) - sub_y(g) - lin_y(g) - rhs_y(g)),
                    )
                    if v > res:
                        res, worst = v, f"sample {si}, pair ({i},{j})"
    entries.append(_entry("axiom-5-side-flatness", "matched/side-connection-flat-up-to-curvature", res, worst))

    # (6) the side quasi-action on g ⊕ h is a representation up to Ω
    res, worst = 0.0, ""

    def xi_mat(g):
        top = np.hstack([chart.Ad(g), mp.alpha(g)])
        bot = np.hstack([np.zeros((hd, gd)), r.deltaH(g)])
        return np.vstack([top, bot])

    for pi, (g, hh) in enumerate(_pairs(samples, pair_cap)):
        gh = chart.mul(g, hh)
        om = r.omega(g, hh)
        corr = np.vstack(
            [
                np.hstack([np.zeros((gd, gd)), mp.rho_e @ om]),
                np.hstack([np.zeros((hd, gd)), r.partial @ om]),
            ]
        )
        v = max_abs(xi_mat(gh) - xi_mat(g) @ xi_mat(hh) - corr)
        if v > res:
            res, worst = v, f"pair {pi}"
    entries.append(_entry("axiom-6-side-representation", "matched/side-representation-up-to-curvature", res, worst))

    # (7) the core quasi-action and the connection commute up to curvatures:
    # the mixed unit/core slice of the multiplication-morphism identity,
    # taken against the second leg sitting at the identity
    res, worst = 0.0, ""
    e = chart.identity
    zvec = np.zeros(k)
    yvec = np.zeros(hd)
    for si, g in enumerate(samples):
        for i in range(hd):
            for j in range(k):
                d = mult_morphism_residual(
                    mp, core, ell, g, e,
                    (zvec, zvec, eye_h[i]), (zvec, eye_k[j], yvec), h,
                )
                v = max_abs(d)
                if v > res:
                    res, worst = v, f"sample {si}, pair ({i},{j})"
    entries.append(_entry("axiom-7-mixed-commutation", "matched/connection-commutes-up-to-curvatures", res, worst))

    # (8) Maurer-Cartan equation for Ω against the coboundary of ω: the
    # unit/unit slice of the same identity at genuine two-point samples
    res, worst = 0.0, ""
    for pi, (g, hh) in enumerate(_pairs(samples, pair_cap)):
        for i in range(hd):
            for j in range(i + 1, hd):
                d = mult_morphism_residual(
                    mp, core, ell, g, hh,
                    (zvec, zvec, eye_h[i]), (zvec, zvec, eye_h[j]), h,
                )
                v = max_abs(d)
                if v > res:
                    res, worst = v, f"pair {pi}, ({i},{j})"
    entries.append(_entry("axiom-8-maurer-cartan", "matched/maurer-cartan-up-to-coboundary", res, worst))
    return entries


class LaGroup:
    """An assembled LA-group: VB-groupoid plus anchored bracket calculus."""

    def __init__(self, mp, h=DEFAULT_FD_STEP, core=None):
        self.mp = mp
        self.ruth = mp.ruth
        self.chart = mp.chart
        self.h = h
        self.k_dim = mp.k_dim
        self.h_dim = mp.h_dim
        self.core = core if core is not None else derive_core_bracket(mp, h, order=4)
        self.ell = derive_ell(mp, h)
        self.h_algebra = mp.h_algebra
        self.vb = vb_structure(mp.ruth)
        auth = Auth(
            algebra=mp.h_algebra,
            target=TrivialAlgebroid(mp.chart, self.core, mp.rho_e),
            alpha=mp.alpha,
            ell=self.ell,
            omega=mp.omega,
        )
        self._prod = ProductAlgebroid(auth, h)

    def anchor_matrix(self, g):
        """Right-trivialized anchor on the fiber over g: (z, y) -> ρ_e z + α_g y."""
        return self._prod.anchor_matrix(g)

    def anchor_arrow(self, a):
        return self.anchor_matrix(a.g) @ a.fiber()

    def bracket_oracle(self, v0, v1):
        """Bracket of two constant sections of k ⊕ h, as a map on G."""
        return self._prod.constant_section_bracket(
            np.asarray(v0, dtype=float), np.asarray(v1, dtype=float)
        )

    def section_bracket(self, s0, s1, h=None):
        return self._prod.section_bracket(s0, s1, h)


def assemble_la_group(mp, samples=None, h=DEFAULT_FD_STEP, tol=None, validate=True):
    """Build the LA-group; refuse (listing failed axioms) when asked to validate."""
    if validate:
        if samples is None:
            raise InvalidInputError("validation requires samples")
        tol = 1e-4 if tol is None else tol
        entries = check_matched_pair(mp, samples, h=h)
        bad = [e["name"] for e in entries if e["residual"] > tol]
        if bad:
            raise InvalidInputError(
                "matched-pair axioms fail at tolerance "
                f"{tol:.1e}: {', '.join(bad)}"
            )
    return LaGroup(mp, h=h)


def verify_morphisms(lg, samples, h=DEFAULT_FD_STEP, pair_cap=16):
    """Residual report for every structural map being structure-preserving."""
    mp, r, chart = lg.mp, lg.ruth, lg.chart
    k, hd, gd = lg.k_dim, lg.h_dim, chart.dim
    eye_k, eye_h = np.eye(k), np.eye(hd)
    core, ell = lg.core, lg.ell
    from .numkit import mat_exp

    entries = []

    # source: unit-direction brackets project to the unit bracket, the rest
    # stay in the source kernel
    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for i in range(hd):
            for j in range(hd):
                br = lg.bracket_oracle(
                    np.concatenate([np.zeros(k), eye_h[i]]),
                    np.concatenate([np.zeros(k), eye_h[j]]),
                )(g)
                v = max_abs(br[k:] - mp.h_algebra.bracket(eye_h[i], eye_h[j]))
                if v > res:
                    res, worst = v, f"sample {si}"
            for j in range(k):
                br = lg.bracket_oracle(
                    np.concatenate([np.zeros(k), eye_h[i]]),
                    np.concatenate([eye_k[j], np.zeros(hd)]),
                )(g)
                v = max_abs(br[k:])
                if v > res:
                    res, worst = v, f"sample {si}"
        for i in range(k):
            for j in range(k):
                br = lg.bracket_oracle(
                    np.concatenate([eye_k[i], np.zeros(hd)]),
                    np.concatenate([eye_k[j], np.zeros(hd)]),
                )(g)
                v = max_abs(br[k:])
                if v > res:
                    res, worst = v, f"sample {si}"
    entries.append(_entry("source-morphism", "morphisms/source-preserves-brackets", res, worst))

    # unit: α and ω vanish identically at the identity
    e = chart.identity
    entries.append(
        _entry(
            "unit-morphism",
            "morphisms/unit-data-vanishes-at-identity",
            max(max_abs(mp.alpha(e)), max_abs(mp.omega(e))),
            "at identity",
        )
    )

    # target: structural map is a bracket homomorphism, plus the two
    # derivative relations tying Δh to ℓ and ω
    res = 0.0
    for i in range(k):
        for j in range(k):
            v = max_abs(
                r.partial @ core.bracket(eye_k[i], eye_k[j])
                - mp.h_algebra.bracket(r.partial @ eye_k[i], r.partial @ eye_k[j])
            )
            res = max(res, v)
    entries.append(_entry("target-homomorphism", "morphisms/structural-map-homomorphism", res))

    res, worst = 0.0, ""
    res2, worst2 = 0.0, ""
    dh_map = SmoothMap(1, (hd, hd), lambda gg: r.deltaH(gg))
    for si, g in enumerate(samples):
        ellg = ell(g)
        dhg = r.deltaH(g)
        for i in range(hd):
            for j in range(k):
                x = mp.rho_e @ eye_k[j]
                d_dh = right_directional_derivative(dh_map, 0, (g,), x, h, chart)
                lhs = r.partial @ np.einsum("axy,a,y->x", ellg, eye_h[i], eye_k[j])
                rhs = mp.h_algebra.bracket(dhg @ eye_h[i], r.partial @ eye_k[j]) - d_dh @ eye_h[i]
                v = max_abs(lhs - rhs)
                if v > res:
                    res, worst = v, f"sample {si}"
        for i in range(hd):
            for j in range(i + 1, hd):
                y0, y1 = eye_h[i], eye_h[j]
                d0 = right_directional_derivative(dh_map, 0, (g,), mp.alpha(g) @ y0, h, chart)
                d1 = right_directional_derivative(dh_map, 0, (g,), mp.alpha(g) @ y1, h, chart)
                lhs = mp.h_algebra.bracket(dhg @ y0, dhg @ y1) - dhg @ mp.h_algebra.bracket(y0, y1)
                rhs = r.partial @ mp.omega_on(g, y0, y1) + d1 @ y0 - d0 @ y1
                v = max_abs(lhs - rhs)
                if v > res2:
                    res2, worst2 = v, f"sample {si}"
    entries.append(_entry("target-rel-core", "morphisms/target-derivative-relation-core", res, worst))
    entries.append(_entry("target-rel-units", "morphisms/target-derivative-relation-units", res2, worst2))

    # anchor: groupoid-homomorphism relations and bracket-homomorphism relations
    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        ad, dk, al = chart.Ad(g), r.deltaK(g), mp.alpha(g)
        for j in range(k):
            v = max_abs(mp.rho_e @ (dk @ eye_k[j]) - ad @ (mp.rho_e @ eye_k[j]) - al @ (r.partial @ eye_k[j]))
            if v > res:
                res, worst = v, f"sample {si}"
    entries.append(_entry("anchor-groupoid-core", "morphisms/anchor-groupoid-homomorphism-core", res, worst))

    res, worst = 0.0, ""
    for pi, (g, hh) in enumerate(_pairs(samples, pair_cap)):
        gh = chart.mul(g, hh)
        adg = chart.Ad(g)
        lhs = mp.alpha(g) @ r.deltaH(hh)
        rhs = mp.alpha(gh) - adg @ mp.alpha(hh) - mp.rho_e @ r.omega(g, hh)
        v = max_abs(lhs - rhs)
        if v > res:
            res, worst = v, f"pair {pi}"
    entries.append(_entry("anchor-groupoid-units", "morphisms/anchor-groupoid-homomorphism-units", res, worst))

    res, worst = 0.0, ""
    res2, worst2 = 0.0, ""
    for si, g in enumerate(samples):
        for j in range(k):
            for i in range(hd):
                sec = lg.bracket_oracle(
                    np.concatenate([eye_k[j], np.zeros(hd)]),
                    np.concatenate([np.zeros(k), eye_h[i]]),
                )
                lhs = lg.anchor_matrix(g) @ sec(g)
                rhs = vector_field_bracket(
                    lambda gg, jj=j: mp.rho_e @ eye_k[jj],
                    lambda gg, ii=i: mp.alpha(gg) @ eye_h[ii],
                    g,
                    chart,
                    h,
                )
                v = max_abs(lhs - rhs)
                if v > res:
                    res, worst = v, f"sample {si}"
        for i in range(hd):
            for j in range(i + 1, hd):
                sec = lg.bracket_oracle(
                    np.concatenate([np.zeros(k), eye_h[i]]),
                    np.concatenate([np.zeros(k), eye_h[j]]),
                )
                lhs = lg.anchor_matrix(g) @ sec(g)
                rhs = vector_field_bracket(
                    lambda gg, ii=i: mp.alpha(gg) @ eye_h[ii],
                    lambda gg, jj=j: mp.alpha(gg) @ eye_h[jj],
                    g,
                    chart,
                    h,
                )
                v = max_abs(lhs - rhs)
                if v > res2:
                    res2, worst2 = v, f"sample {si}"
    entries.append(_entry("anchor-rel-core", "morphisms/anchor-section-homomorphism-core", res, worst))
    entries.append(_entry("anchor-rel-units", "morphisms/anchor-section-homomorphism-units", res2, worst2))

    # multiplication: the five bracket relations, each a slice of the
    # bracket-homomorphism identity for composable constant sections, plus
    # right-invariance of core brackets
    zk, zh = np.zeros(k), np.zeros(hd)
    slices = [
        ("mult-M01", "morphisms/multiplication-core-core",
         [((zk, z0, zh), (z1, zk, zh)) for z0 in eye_k for z1 in eye_k]),
        ("mult-M02", "morphisms/multiplication-core-units",
         [((zk, zk, y), (z, zk, zh)) for y in eye_h for z in eye_k]),
        ("mult-M11", "morphisms/multiplication-core-pair",
         [((zk, z0, zh), (zk, z1, zh)) for z0 in eye_k for z1 in eye_k]),
        ("mult-M12", "morphisms/multiplication-mixed",
         [((zk, zk, y), (zk, z, zh)) for y in eye_h for z in eye_k]),
        ("mult-M22", "morphisms/multiplication-units-pair",
         [((zk, zk, eye_h[i]), (zk, zk, eye_h[j]))
          for i in range(hd) for j in range(i + 1, hd)]),
    ]
    for name, law, pairs_of_sections in slices:
        res, worst = 0.0, ""
        for pi, (g, hh) in enumerate(_pairs(samples, pair_cap)):
            for P, Pp in pairs_of_sections:
                v = max_abs(mult_morphism_residual(mp, core, ell, g, hh, P, Pp, h))
                if v > res:
                    res, worst = v, f"pair {pi}"
        entries.append(_entry(name, law, res, worst))

    res, worst = 0.0, ""  # right-invariance of core-constant brackets
    for si, g in enumerate(samples):
        for i in range(k):
            for j in range(k):
                sec = lg.bracket_oracle(
                    np.concatenate([eye_k[i], np.zeros(hd)]),
                    np.concatenate([eye_k[j], np.zeros(hd)]),
                )
                v = max_abs(sec(g) - sec(chart.identity))
                if v > res:
                    res, worst = v, f"sample {si}"
    entries.append(_entry("mult-right-invariance", "morphisms/core-brackets-right-invariant", res, worst))
    return entries


def canonical_splitting(lg):
    k, hd = lg.k_dim, lg.h_dim
    zero = np.zeros((k, hd))
    return SmoothMap(1, (k, hd), lambda g: zero, name="canonical")


def extract_matched_pair(lg, sigma=None, tol=1e-8, h=DEFAULT_FD_STEP):
    """Recover the matched-pair datum from an LA-group and a splitting.

    ``sigma`` maps g to the core block c_g of the splitting
    y ↦ (c_g y, y); it must extend the unit (c_e = 0). All tuple components
    are rebuilt from the structural maps and the section bracket alone, so
    the result is meaningful for any unit-extending splitting, not only the
    one the LA-group was assembled from.
    """
    mp0, r0, chart = lg.mp, lg.ruth, lg.chart
    k, hd = lg.k_dim, lg.h_dim
    sigma = sigma if sigma is not None else canonical_splitting(lg)
    if max_abs(sigma(chart.identity)) > tol:
        raise InvalidInputError("splitting does not extend the unit")
    vb = lg.vb
    eye_k, eye_h = np.eye(k), np.eye(hd)

    def sig_arrow(g, y):
        return VbArrow(g, sigma(g) @ y, np.asarray(y, dtype=float))

    def deltaH_fn(g):
        cols = [vb.target(sig_arrow(g, eye_h[i])) for i in range(hd)]
        return np.array(cols).T if hd else np.zeros((0, 0))

    def deltaK_fn(g):
        ginv = chart.inv(g)
        cols = []
        for j in range(k):
            z = eye_k[j]
            a = sig_arrow(g, r0.partial @ z)
            b = VbArrow(chart.identity, z, np.zeros(hd))
            zero_inv = VbArrow(ginv, np.zeros(k), np.zeros(hd))
            prod = vb.compose(vb.compose(a, b), zero_inv)
            cols.append(prod.z)
        return np.array(cols).T if k else np.zeros((0, 0))

    def omega_fn(g, hh):
        gh = chart.mul(g, hh)
        ghinv = chart.inv(gh)
        dH = deltaH_fn(hh)
        cols = []
        for i in range(hd):
            y = eye_h[i]
            left = sig_arrow(gh, y)
            right = vb.compose(sig_arrow(g, dH @ y), sig_arrow(hh, y))
            diff = VbArrow(gh, left.z - right.z, left.y - right.y)
            zero_inv = VbArrow(ghinv, np.zeros(k), np.zeros(hd))
            cols.append(vb.compose(diff, zero_inv).z)
        return np.array(cols).T if hd else np.zeros((k, 0))

    ruth = Ruth(
        chart,
        hd,
        k,
        r0.partial.copy(),
        SmoothMap(1, (hd, hd), deltaH_fn, name="deltaH"),
        SmoothMap(1, (k, k), deltaK_fn, name="deltaK"),
        SmoothMap(2, (k, hd), omega_fn, name="omega"),
    )

    def alpha_fn(g):
        return lg.anchor_matrix(g) @ np.vstack([sigma(g), np.eye(hd)])

    rho_e = lg.anchor_matrix(chart.identity)[:, :k]

    def y_section(i):
        return lambda g: np.concatenate([sigma(g) @ eye_h[i], eye_h[i]])

    ell_e = np.zeros((hd, k, k))
    for i in range(hd):
        for j in range(k):
            zsec = lambda g, jj=j: np.concatenate([eye_k[jj], np.zeros(hd)])
            br = lg.section_bracket(y_section(i), zsec, h)(chart.identity)
            ell_e[i, :, j] = br[:k]

    def omega_auth_fn(g):
        out = np.zeros((k, hd, hd))
        for i in range(hd):
            for j in range(i + 1, hd):
                br = lg.section_bracket(y_section(i), y_section(j), h)(g)
                ybr = lg.h_algebra.bracket(eye_h[i], eye_h[j])
                val = br[:k] - sigma(g) @ ybr
                out[:, i, j] = val
                out[:, j, i] = -val
        return out

    return MatchedPair(
        ruth=ruth,
        rho_e=rho_e,
        alpha=SmoothMap(1, (chart.dim, hd), alpha_fn, name="alpha"),
        ell_e=ell_e,
        omega=SmoothMap(1, (k, hd, hd), omega_auth_fn, name="omega"),
        h_algebra=lg.h_algebra,
        name=(lg.mp.name + "/extracted") if lg.mp.name else "extracted",
    )


def kernel_of_alpha_bar(mp, g, tol=DEFAULT_TOL):
    """ker(ᾱ_g): directions whose anchor lies in the image of ρ_e."""
    _, img_rho, comp = svd_subspaces(mp.rho_e, tol)
    if comp.dim == 0:
        from .numkit import SubspaceBasis

        return SubspaceBasis(mp.h_dim, np.eye(mp.h_dim), tol), comp
    bar = comp.vectors.T @ mp.alpha(g)
    ker, _, _ = svd_subspaces(bar, tol)
    return ker, comp


def isotropy_algebra(mp, g, Z=None, h=DEFAULT_FD_STEP, tol=DEFAULT_TOL):
    """Twisted semidirect model of the isotropy Lie algebra over g.

    ``Z`` is a (k_dim × m) matrix on the m-dimensional ker(ᾱ_g) with
    ρ_e ∘ Z = α_g there; by default it is solved by least squares and the
    construction is reported not-applicable when no solution exists.
    Returns a report with the twisted-product Jacobi residual.
    """
    ker_bar, _ = kernel_of_alpha_bar(mp, g, tol)
    m = ker_bar.dim
    core = derive_core_bracket(mp, h, order=4)
    ell = derive_ell(mp, h)
    report = {"ker_alpha_bar_dim": m, "status": "ok"}
    sub_res = subalgebra_closure_residual(mp.h_algebra, ker_bar)
    report["kernel-subalgebra"] = sub_res
    if Z is None:
        alpha_on_ker = mp.alpha(g) @ ker_bar.vectors
        Z, *_ = np.linalg.lstsq(mp.rho_e, alpha_on_ker, rcond=None)
        if max_abs(mp.rho_e @ Z - alpha_on_ker) > 100 * tol:
            report["status"] = "not-checked"
            report["reason"] = "no core lift of the anchor exists on this kernel"
            return report
    Z = np.asarray(Z, dtype=float)
    kk_basis, _, _ = svd_subspaces(mp.rho_e, tol)  # 𝔨 = ker(ρ_e) in the core
    kk = kk_basis
    base = mp.h_algebra.restrict(ker_bar)
    fiber = core.restrict(kk)
    ellg = ell(g)
    rep = np.zeros((m, kk.dim, kk.dim))
    offres = 0.0
    for a in range(m):
        y = ker_bar.vectors[:, a]
        mat = np.einsum("ixy,i->xy", ellg, y) - core.ad(Z[:, a])
        for b in range(kk.dim):
            img = mat @ kk.vectors[:, b]
            offres = max(offres, kk.residual_off(img))
            rep[a, :, b] = kk.coords(img)
    coc = np.zeros((kk.dim, m, m))
    for a in range(m):
        for b in range(m):
            y0, y1 = ker_bar.vectors[:, a], ker_bar.vectors[:, b]
            val = mp.omega_on(g, y0, y1)
            val = val - np.einsum("ixy,i,y->x", ellg, y0, Z[:, b])
            val = val + np.einsum("ixy,i,y->x", ellg, y1, Z[:, a])
            val = val + Z @ base.bracket(np.eye(m)[a], np.eye(m)[b])
            val = val + core.bracket(Z[:, a], Z[:, b])
            offres = max(offres, kk.residual_off(val))
            coc[:, a, b] = kk.coords(val)
    report["values-in-kernel"] = offres
    try:
        semidirect_twisted(base, fiber, rep, coc, tol=max(tol, 1e-9), validate=True)
        report["twisted-jacobi"] = 0.0
    except Exception as exc:  # JacobiError carries the residual
        resid = getattr(exc, "residual", None)
        if resid is None:
            raise
        report["twisted-jacobi"] = float(resid)
        report["worst-triple"] = getattr(exc, "triple", None)
    return report


def derived_structures(mp, h=DEFAULT_FD_STEP, tol=DEFAULT_TOL, isotropy_points=None):
    """Crossed modules, butterfly and isotropy models induced by the datum.

    * the isotropy strict 2-algebra at the identity: ∂ on 𝔨 = core ∩ ker ρ_e
      acted on by ℓ_e;
    * the kernel crossed module ρ_e: ker ∂ -> g with the derived action of
      the chart algebra (the kernel carries the opposite core bracket, which
      turns conjugation-by-the-second-argument into a left action);
    * the butterfly formed by the two, with the shared core as its center;
    * per-point twisted semidirect isotropy algebras.
    """
    r = mp.ruth
    chart = mp.chart
    k = mp.k_dim
    core = derive_core_bracket(mp, h, order=4)
    kk, img_rho, _ = svd_subspaces(mp.rho_e, tol)  # 𝔨 and 𝔩 data
    ker_par, img_par, _ = svd_subspaces(r.partial, tol)

    out = {}
    out["core-closure-kk"] = subalgebra_closure_residual(core, kk)
    act = np.zeros((mp.h_dim, kk.dim, kk.dim))
    offres = 0.0
    for i in range(mp.h_dim):
        mat = np.einsum("ixy,i->xy", mp.ell_e, np.eye(mp.h_dim)[i])
        for b in range(kk.dim):
            v = mat @ kk.vectors[:, b]
            offres = max(offres, kk.residual_off(v))
            act[i, :, b] = kk.coords(v)
    out["ell-preserves-kk"] = offres
    lie2 = CrossedModule(
        base=mp.h_algebra,
        top=core.restrict(kk),
        structural=r.partial @ kk.vectors,
        action=act,
        name="isotropy-2-algebra",
    )
    out["lie2_at_e"] = lie2
    out["lie2_report"] = check_crossed_module(lie2, tol)

    # action of the chart algebra on ker ∂ by the derivative of the
    # descended core action (fourth-order stencil: compared at tight tol)
    gd = chart.dim
    act_k = np.zeros((gd, ker_par.dim, ker_par.dim))
    offres = 0.0
    from .numkit import mat_exp

    for i in range(gd):
        xm = chart.embed(np.eye(gd)[i])
        dmat = central_diff4(lambda t: r.deltaK(mat_exp(t * xm)), h)
        for b in range(ker_par.dim):
            v = dmat @ ker_par.vectors[:, b]
            offres = max(offres, ker_par.residual_off(v))
            act_k[i, :, b] = ker_par.coords(v)
    out["delta1-preserves-ker"] = offres
    kerd = CrossedModule(
        base=chart.algebra,
        top=core.restrict(ker_par).opposite(),
        structural=mp.rho_e @ ker_par.vectors,
        action=act_k,
        name="kernel-crossed-module",
    )
    out["kerD_cm"] = kerd
    out["kerD_report"] = check_crossed_module(kerd, tol)

    bfly = Butterfly(
        nw=core.restrict(kk),
        ne=core.restrict(ker_par),
        center=core,
        sw_dim=img_par.dim,
        se_dim=img_rho.dim,
        nw_to_center=kk.vectors,
        ne_to_center=ker_par.vectors,
        center_to_sw=img_par.vectors.T @ r.partial,
        center_to_se=img_rho.vectors.T @ mp.rho_e,
    )
    out["butterfly"] = bfly
    out["butterfly_report"] = check_butterfly(bfly, tol)

    iso = {}
    for label, g, Z in isotropy_points or []:
        iso[label] = isotropy_algebra(mp, g, Z, h, tol)
    out["isotropy"] = iso
    return out
