"""Actions up to homotopy of a Lie algebra on a trivial-bundle algebroid.

The algebroid is always G × k for a chart G and a core Lie algebra k, with
anchor determined by its value at the identity (constant core sections map
to right-invariant vector fields). Sections are callables G -> R^k; their
bracket extends the fiber bracket by the usual anchor-derivative terms.

Derivatives that feed a second derivative level (curvature checks) use an
inner step of 10·h so that finite-difference roundoff stays far below the
O(h²) truncation scaling that the acceptance suite measures.
"""

from dataclasses import dataclass

import numpy as np

from .groupmodel import (
    GroupChart,
    SmoothMap,
    right_directional_derivative,
    vector_field_bracket,
)
from .liecore import LieAlgebra
from .numkit import DEFAULT_FD_STEP, DEFAULT_TOL, InvalidInputError, max_abs

NESTED_STEP_SCALE = 10.0


@dataclass
class TrivialAlgebroid:
    """G × k with fiber Lie algebra k and anchor fixed at the identity."""

    chart: GroupChart
    fiber: LieAlgebra
    anchor_at_e: np.ndarray  # (g_dim, k_dim)

    def __post_init__(self):
        self.anchor_at_e = np.asarray(self.anchor_at_e, dtype=float)
        if self.anchor_at_e.shape != (self.chart.dim, self.fiber.dim):
            raise InvalidInputError("anchor_at_e must map the fiber to the chart algebra")

    def anchor_field(self, section):
        """Right-trivialized coefficient field of the anchor of a section."""
        return lambda g: self.anchor_at_e @ np.asarray(section(g), dtype=float)

    def section_bracket(self, s0, s1, h=DEFAULT_FD_STEP):
        """[s0, s1](g): fiber bracket plus anchor-directional derivative terms."""
        chart, k = self.chart, self.fiber.dim

        def val(g):
            v0 = np.asarray(s0(g), dtype=float)
            v1 = np.asarray(s1(g), dtype=float)
            out = self.fiber.bracket(v0, v1)
            m0 = SmoothMap(1, (k,), s0)
            m1 = SmoothMap(1, (k,), s1)
            out = out + right_directional_derivative(
                m1, 0, (g,), self.anchor_at_e @ v0, h, chart
            )
            out = out - right_directional_derivative(
                m0, 0, (g,), self.anchor_at_e @ v1, h, chart
            )
            return out

        return val


@dataclass
class Auth:
    """(α, ∇, ω) with the connection encoded by the tensor family ℓ.

    ``alpha``: G -> (g_dim, h_dim); ``ell``: G -> (h_dim, k_dim, k_dim) with
    ell(g)[i] the matrix of ℓ_g^{e_i}; ``omega``: G -> (k_dim, h_dim, h_dim)
    antisymmetric in the last two slots. The connection acts by

        (∇_y Z)(g) = ℓ_g^y(Z(g)) + (d_g Z) along α_g(y)*0_g.
    """

    algebra: LieAlgebra  # h
    target: TrivialAlgebroid
    alpha: SmoothMap
    ell: SmoothMap
    omega: SmoothMap

    @property
    def h_dim(self):
        return self.algebra.dim

    @property
    def k_dim(self):
        return self.target.fiber.dim

    def ell_on(self, g, y):
        """ℓ_g^y as a matrix on the fiber."""
        return np.einsum("ixy,i->xy", self.ell(g), np.asarray(y, dtype=float))

    def alpha_field(self, y):
        y = np.asarray(y, dtype=float)
        return lambda g: self.alpha(g) @ y

    def omega_on(self, g, y0, y1):
        return np.einsum("kij,i,j->k", self.omega(g), y0, y1)

    def nabla(self, y, section, h=DEFAULT_FD_STEP):
        """The connection applied to a section, as a new section."""
        y = np.asarray(y, dtype=float)
        chart, k = self.target.chart, self.k_dim

        def val(g):
            m = SmoothMap(1, (k,), section)
            deriv = right_directional_derivative(m, 0, (g,), self.alpha(g) @ y, h, chart)
            return self.ell_on(g, y) @ np.asarray(section(g), dtype=float) + deriv

        return val


def _entry(name, law, residual, worst=""):
    return {"name": name, "law": law, "residual": float(residual), "worst": worst}


def default_test_sections(auth, seed=0):
    """Constant fiber sections plus one chart-coordinate-scaled section."""
    k = auth.k_dim
    n = auth.target.chart.matrix_size
    rng = np.random.default_rng(seed)
    z0 = rng.normal(size=k)
    sections = [(lambda g, v=v: v) for v in np.eye(k)]
    if n > 1:
        sections.append(lambda g: float(g[0, -1]) * z0)
    return sections


def default_test_scalars(auth):
    """Smooth scalar functions of the chart matrix entries."""
    n = auth.target.chart.matrix_size
    funcs = [lambda g: 1.0 + 0.5 * float(np.trace(g))]
    if n > 1:
        funcs.append(lambda g: float(g[0, -1]))
    return funcs


def check_auth(auth, samples, test_sections=None, h=DEFAULT_FD_STEP, tol=DEFAULT_TOL):
    """Residuals of the four defining laws of an action up to homotopy.

    Constant sections and at least one non-constant section are exercised;
    the curvature law nests two connection applications (inner step 10·h).
    """
    chart = auth.target.chart
    k, hd = auth.k_dim, auth.h_dim
    sections = test_sections if test_sections is not None else default_test_sections(auth)
    scalars = default_test_scalars(auth)
    hb = auth.algebra
    h_in = NESTED_STEP_SCALE * h
    eye_h = np.eye(hd)
    entries = []

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for yi in range(hd):
            y = eye_h[yi]
            avec = auth.alpha(g) @ y
            for phi in scalars:
                for sec in sections[: k + 1]:
                    scaled = lambda gg, p=phi, s=sec: p(gg) * np.asarray(s(gg), dtype=float)
                    lhs = auth.nabla(y, scaled, h)(g)
                    phim = SmoothMap(1, (1,), lambda gg, p=phi: np.array([p(gg)]))
                    lie = right_directional_derivative(phim, 0, (g,), avec, h, chart)[0]
                    rhs = phi(g) * auth.nabla(y, sec, h)(g) + lie * np.asarray(sec(g))
                    v = max_abs(lhs - rhs)
                    if v > res:
                        res, worst = v, f"sample {si}, direction {yi}"
    entries.append(_entry("connection-leibniz", "auth/leibniz-over-functions", res, worst))

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for yi in range(hd):
            y = eye_h[yi]
            for ai, s0 in enumerate(sections):
                for s1 in sections[ai:]:
                    br = auth.target.section_bracket(s0, s1, h_in)
                    lhs = auth.nabla(y, br, h)(g)
                    rhs = auth.target.section_bracket(auth.nabla(y, s0, h_in), s1, h_in)(g)
                    rhs = rhs + auth.target.section_bracket(s0, auth.nabla(y, s1, h_in), h_in)(g)
                    v = max_abs(lhs - rhs)
                    if v > res:
                        res, worst = v, f"sample {si}, direction {yi}"
    entries.append(_entry("bracket-derivation", "auth/acts-by-derivations", res, worst))

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for yi in range(hd):
            y = eye_h[yi]
            for sec in sections:
                lhs = auth.target.anchor_at_e @ auth.nabla(y, sec, h)(g)
                rhs = vector_field_bracket(
                    auth.alpha_field(y), auth.target.anchor_field(sec), g, chart, h
                )
                v = max_abs(lhs - rhs)
                if v > res:
                    res, worst = v, f"sample {si}, direction {yi}"
    entries.append(_entry("anchor-equivariance", "auth/anchor-equivariant", res, worst))

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for i in range(hd):
            for j in range(i + 1, hd):
                y0, y1 = eye_h[i], eye_h[j]
                ybr = hb.bracket(y0, y1)
                for sec in sections:
                    curv = auth.nabla(y0, auth.nabla(y1, sec, h_in), h)(g)
                    curv = curv - auth.nabla(y1, auth.nabla(y0, sec, h_in), h)(g)
                    curv = curv - auth.nabla(ybr, sec, h)(g)
                    om_sec = lambda gg, a=y0, b=y1: auth.omega_on(gg, a, b)
                    rhs = auth.target.section_bracket(om_sec, sec, h)(g)
                    v = max_abs(curv - rhs)
                    if v > res:
                        res, worst = v, f"sample {si}, pair ({i},{j})"
    entries.append(_entry("curvature-inner", "auth/curvature-is-inner", res, worst))

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for i in range(hd):
            for j in range(i + 1, hd):
                for l in range(j + 1, hd):
                    ys = [eye_h[i], eye_h[j], eye_h[l]]
                    total = np.zeros(k)
                    for a in range(3):
                        rest = [ys[b] for b in range(3) if b != a]
                        om_sec = lambda gg, r0=rest[0], r1=rest[1]: auth.omega_on(gg, r0, r1)
                        total = total + ((-1.0) ** a) * auth.nabla(ys[a], om_sec, h)(g)
                    for a in range(3):
                        for b in range(a + 1, 3):
                            rest = [ys[cc] for cc in range(3) if cc not in (a, b)]
                            ybr = hb.bracket(ys[a], ys[b])
                            total = total + ((-1.0) ** (a + b)) * auth.omega_on(
                                g, ybr, rest[0]
                            )
                    v = max_abs(total)
                    if v > res:
                        res, worst = v, f"sample {si}, triple ({i},{j},{l})"
    entries.append(_entry("cochain-closed", "auth/curvature-cochain-closed", res, worst))
    return entries


class ProductAlgebroid:
    """The extension (G × k) × h built from an action up to homotopy.

    Fiber coordinates are (z, y) with the core first. The bracket of
    constant sections follows the assembled formula; general sections get
    the usual anchor-derivative Leibniz terms.
    """

    def __init__(self, auth, h=DEFAULT_FD_STEP):
        self.auth = auth
        self.h = h
        self.chart = auth.target.chart
        self.k_dim = auth.k_dim
        self.h_dim = auth.h_dim
        self.dim = auth.k_dim + auth.h_dim

    def anchor_matrix(self, g):
        return np.hstack([self.auth.target.anchor_at_e, self.auth.alpha(g)])

    def anchor_field(self, section):
        return lambda g: self.anchor_matrix(g) @ np.asarray(section(g), dtype=float)

    def pointwise_bracket(self, g, v0, v1):
        k = self.k_dim
        a = self.auth
        z0, y0 = v0[:k], v0[k:]
        z1, y1 = v1[:k], v1[k:]
        zpart = (
            a.target.fiber.bracket(z0, z1)
            + a.ell_on(g, y0) @ z1
            - a.ell_on(g, y1) @ z0
            + a.omega_on(g, y0, y1)
        )
        return np.concatenate([zpart, a.algebra.bracket(y0, y1)])

    def constant_section_bracket(self, v0, v1):
        v0 = np.asarray(v0, dtype=float)
        v1 = np.asarray(v1, dtype=float)
        return lambda g: self.pointwise_bracket(g, v0, v1)

    def section_bracket(self, s0, s1, h=None):
        h = self.h if h is None else h
        n = self.dim

        def val(g):
            v0 = np.asarray(s0(g), dtype=float)
            v1 = np.asarray(s1(g), dtype=float)
            out = self.pointwise_bracket(g, v0, v1)
            m0 = SmoothMap(1, (n,), s0)
            m1 = SmoothMap(1, (n,), s1)
            out = out + right_directional_derivative(
                m1, 0, (g,), self.anchor_matrix(g) @ v0, h, self.chart
            )
            out = out - right_directional_derivative(
                m0, 0, (g,), self.anchor_matrix(g) @ v1, h, self.chart
            )
            return out

        return val


def build_extension(auth, samples, h=DEFAULT_FD_STEP, seed=0):
    """Assemble the product algebroid and report its validity residuals.

    Checks the Jacobi identity on constant and function-scaled sections and
    that the projection onto the acting algebra is a bracket homomorphism.
    """
    prod = ProductAlgebroid(auth, h)
    n = prod.dim
    h_in = NESTED_STEP_SCALE * h
    rng = np.random.default_rng(seed)
    basis = np.eye(n)
    entries = []

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for i in range(n):
            for j in range(i + 1, n):
                for l in range(j + 1, n):
                    total = np.zeros(n)
                    for (a, b, c) in ((i, j, l), (j, l, i), (l, i, j)):
                        inner = prod.constant_section_bracket(basis[a], basis[b])
                        total = total + prod.section_bracket(
                            inner, lambda gg, v=basis[c]: v, h
                        )(g)
                    v = max_abs(total)
                    if v > res:
                        res, worst = v, f"sample {si}, triple ({i},{j},{l})"
    entries.append(_entry("jacobi-constants", "extension/jacobi-constant-sections", res, worst))

    res, worst = 0.0, ""
    phi = lambda g: 1.0 + 0.25 * float(np.trace(g))
    for si, g in enumerate(samples[: max(2, len(samples) // 2)]):
        for trial in range(2):
            va, vb, vc = rng.normal(size=(3, n))
            sa = lambda gg, v=va: phi(gg) * v
            sb = lambda gg, v=vb: v
            sc = lambda gg, v=vc: v
            total = np.zeros(n)
            for (s0, s1, s2) in ((sa, sb, sc), (sb, sc, sa), (sc, sa, sb)):
                inner = prod.section_bracket(s0, s1, h_in)
                total = total + prod.section_bracket(inner, s2, h)(g)
            v = max_abs(total)
            if v > res:
                res, worst = v, f"sample {si}, trial {trial}"
    entries.append(_entry("jacobi-scaled", "extension/jacobi-scaled-sections", res, worst))

    res, worst = 0.0, ""
    for si, g in enumerate(samples):
        for i in range(n):
            for j in range(n):
                br = prod.pointwise_bracket(g, basis[i], basis[j])
                ha = prod.auth.algebra.bracket(basis[i][prod.k_dim :], basis[j][prod.k_dim :])
                v = max_abs(br[prod.k_dim :] - ha)
                if v > res:
                    res, worst = v, f"sample {si}"
    entries.append(_entry("projection-homomorphism", "extension/projection-to-units", res, worst))
    return prod, entries


def extract_auth(chart, anchor_matrix, section_bracket, h_algebra, fiber,
                 fiber_embed, F, sigma, tol=1e-6):
    """Recover an action up to homotopy from an extension and a splitting.

    ``anchor_matrix``: g -> (g_dim, n) for the ambient algebroid on G × R^n;
    ``section_bracket(s0, s1)`` -> section, the ambient bracket;
    ``fiber``: the kernel Lie algebra; ``fiber_embed``: (n, k) embedding of
    the kernel (spanning ker F); ``F``: (h_dim, n) surjection onto the acting
    algebra; ``sigma``: SmoothMap G -> (n, h_dim) with F ∘ sigma = id. The
    extracted data is  α(y) = anchor of y^σ,  ∇_y ε = [y^σ, ε],
    ω(y0,y1) = [y0^σ, y1^σ] - ([y0,y1])^σ,  all read in fiber coordinates.
    """
    iota = np.asarray(fiber_embed, dtype=float)
    F = np.asarray(F, dtype=float)
    n, k = iota.shape
    hd = h_algebra.dim
    iota_pinv = np.linalg.pinv(iota)
    sig_e = sigma(chart.identity)
    if max_abs(F @ sig_e - np.eye(hd)) > tol:
        raise InvalidInputError("sigma is not a splitting of the stated projection")
    if max_abs(F @ iota) > tol:
        raise InvalidInputError("fiber embedding does not span ker F")

    def project(g, v):
        # projector onto the fiber along sigma_g, then fiber coordinates
        return iota_pinv @ (v - sigma(g) @ (F @ v))

    def alpha_fn(g):
        return anchor_matrix(g) @ sigma(g)

    def ell_fn(g):
        out = np.zeros((hd, k, k))
        for i in range(hd):
            ysec = lambda gg, i=i: sigma(gg)[:, i]
            for j in range(k):
                zsec = lambda gg, col=iota[:, j]: col
                br = section_bracket(ysec, zsec)(g)
                out[i, :, j] = project(g, br)
        return out

    def omega_fn(g):
        out = np.zeros((k, hd, hd))
        for i in range(hd):
            for j in range(i + 1, hd):
                yi = lambda gg, i=i: sigma(gg)[:, i]
                yj = lambda gg, j=j: sigma(gg)[:, j]
                br = section_bracket(yi, yj)(g)
                ybr = h_algebra.bracket(np.eye(hd)[i], np.eye(hd)[j])
                val = project(g, br - sigma(g) @ ybr)
                out[:, i, j] = val
                out[:, j, i] = -val
        return out

    target = TrivialAlgebroid(chart, fiber, anchor_matrix(chart.identity) @ iota)
    return Auth(
        algebra=h_algebra,
        target=target,
        alpha=SmoothMap(1, (chart.dim, hd), alpha_fn, name="alpha"),
        ell=SmoothMap(1, (hd, k, k), ell_fn, name="ell"),
        omega=SmoothMap(1, (k, hd, hd), omega_fn, name="omega"),
    )
