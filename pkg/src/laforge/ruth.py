"""Representations up to homotopy of a group and their VB-groupoids.

A :class:`Ruth` packages the 4-tuple (∂, Δh, Δk, Ω) acting on k[1] ⊕ h. The
structural maps it induces on G × (k ⊕ h) are assembled in
:func:`vb_structure`; :func:`check_ruth` measures the four coherence
relations and :func:`groupoid_axiom_suite` measures the groupoid laws, so
the equivalence between the two can be exercised numerically in both
directions (valid data passes both, broken data fails both).
"""

from dataclasses import dataclass

import numpy as np

from .groupmodel import GroupChart, SmoothMap
from .numkit import DEFAULT_TOL, InvalidInputError, max_abs, svd_subspaces


class ComposabilityError(ValueError):
    """Arrows offered to the multiplication do not match source to target."""


@dataclass
class Ruth:
    chart: GroupChart
    h_dim: int
    k_dim: int
    partial: np.ndarray  # (h_dim, k_dim)
    deltaH: SmoothMap  # G -> End(h)
    deltaK: SmoothMap  # G -> End(k)
    omega: SmoothMap  # G x G -> Hom(h, k)

    def __post_init__(self):
        self.partial = np.asarray(self.partial, dtype=float)
        if self.partial.shape != (self.h_dim, self.k_dim):
            raise InvalidInputError("partial must map k to h")


@dataclass
class VbArrow:
    g: np.ndarray
    z: np.ndarray
    y: np.ndarray

    def fiber(self):
        return np.concatenate([self.z, self.y])


def _pairs(samples, cap=None):
    out = [(a, b) for a in samples for b in samples]
    return out[:cap] if cap else out


def _triples(samples, cap=None):
    out = [(a, b, c) for a in samples for b in samples for c in samples]
    return out[:cap] if cap else out


class VbGroupoid:
    """Structural maps of the VB-groupoid presented by a Ruth."""

    def __init__(self, ruth, tol=DEFAULT_TOL):
        self.ruth = ruth
        self.tol = tol

    def source(self, a):
        return a.y.copy()

    def target(self, a):
        r = self.ruth
        return r.partial @ a.z + r.deltaH(a.g) @ a.y

    def unit(self, y):
        r = self.ruth
        return VbArrow(r.chart.identity, np.zeros(r.k_dim), np.asarray(y, dtype=float))

    def compose(self, a0, a1):
        """m(a0, a1) for s(a0) = t(a1); lands over the product of the bases.

        The pair is first checked composable within tol and then projected
        exactly onto the composable locus (a0's source is replaced by
        t(a1)), so finite-difference noise upstream cannot compound through
        repeated multiplications.
        """
        r = self.ruth
        t1 = self.target(a1)
        gap = float(np.linalg.norm(a0.y - t1))
        if gap > self.tol * max(1.0, float(np.linalg.norm(t1))):
            raise ComposabilityError(
                f"source/target mismatch {gap:.3e} exceeds tolerance {self.tol:.1e}"
            )
        g, h = a0.g, a1.g
        z = a0.z + r.deltaK(g) @ a1.z - r.omega(g, h) @ a1.y
        return VbArrow(r.chart.mul(g, h), z, a1.y.copy())

    def inverse(self, a):
        """Solved from m(inv(a), a) = u(s(a)); checked, not assumed."""
        r = self.ruth
        ginv = r.chart.inv(a.g)
        z = -r.deltaK(ginv) @ a.z + r.omega(ginv, a.g) @ a.y
        return VbArrow(ginv, z, self.target(a))

    def scale_add(self, a, b, ca, cb):
        """Fiberwise linear combination of arrows over the same base point."""
        if max_abs(a.g - b.g) > self.tol:
            raise InvalidInputError("arrows live over different base points")
        return VbArrow(a.g, ca * a.z + cb * b.z, ca * a.y + cb * b.y)


def vb_structure(ruth, tol=DEFAULT_TOL):
    return VbGroupoid(ruth, tol)


def _entry(name, law, residual, worst=""):
    return {
        "name": name,
        "law": law,
        "residual": float(residual),
        "worst": worst,
    }


def check_ruth(r, samples, pair_cap=None, triple_cap=None):
    """Max residuals of the four coherence relations plus unit normalization."""
    e = r.chart.identity
    entries = []
    entries.append(
        _entry(
            "unit-quasi-actions",
            "ruth/unit-normalization",
            max(
                max_abs(r.deltaH(e) - np.eye(r.h_dim)),
                max_abs(r.deltaK(e) - np.eye(r.k_dim)),
            ),
            "at identity",
        )
    )
    res_u, worst_u = 0.0, ""
    for i, g in enumerate(samples):
        v = max(max_abs(r.omega(g, e)), max_abs(r.omega(e, g)))
        if v > res_u:
            res_u, worst_u = v, f"sample {i}"
    entries.append(_entry("unit-curvature", "ruth/curvature-vanishes-on-units", res_u, worst_u))

    res, worst = 0.0, ""
    for i, g in enumerate(samples):
        v = max_abs(r.partial @ r.deltaK(g) - r.deltaH(g) @ r.partial)
        if v > res:
            res, worst = v, f"sample {i}"
    entries.append(_entry("chain-map", "ruth/structural-map-intertwines", res, worst))

    res0, worst0 = 0.0, ""
    res1, worst1 = 0.0, ""
    for i, (g, h) in enumerate(_pairs(samples, pair_cap)):
        gh = r.chart.mul(g, h)
        v0 = max_abs(r.deltaH(gh) - r.deltaH(g) @ r.deltaH(h) - r.partial @ r.omega(g, h))
        v1 = max_abs(r.deltaK(gh) - r.deltaK(g) @ r.deltaK(h) - r.omega(g, h) @ r.partial)
        if v0 > res0:
            res0, worst0 = v0, f"pair {i}"
        if v1 > res1:
            res1, worst1 = v1, f"pair {i}"
    entries.append(_entry("quasi-action-h", "ruth/side-action-up-to-curvature", res0, worst0))
    entries.append(_entry("quasi-action-k", "ruth/core-action-up-to-curvature", res1, worst1))

    resc, worstc = 0.0, ""
    for i, (g, h, k) in enumerate(_triples(samples, triple_cap)):
        gh = r.chart.mul(g, h)
        hk = r.chart.mul(h, k)
        v = max_abs(
            r.deltaK(g) @ r.omega(h, k)
            - r.omega(gh, k)
            + r.omega(g, hk)
            - r.omega(g, h) @ r.deltaH(k)
        )
        if v > resc:
            resc, worstc = v, f"triple {i}"
    entries.append(_entry("curvature-cocycle", "ruth/curvature-cocycle", resc, worstc))
    return entries


def _sample_arrows(r, samples, per_point=2, seed=0):
    rng = np.random.default_rng(seed)
    arrows = []
    for g in samples:
        for _ in range(per_point):
            arrows.append(
                VbArrow(g, rng.normal(size=r.k_dim), rng.normal(size=r.h_dim))
            )
    return arrows


def groupoid_axiom_suite(r, samples, seed=0, pair_cap=36, triple_cap=48):
    """Residuals of the groupoid laws for the structural maps of a Ruth."""
    vb = vb_structure(r, tol=np.inf)  # laws measured, not enforced
    rng = np.random.default_rng(seed)
    entries = []

    def comp_pair(g, h, z0, z1, y):
        a1 = VbArrow(h, z1, y)
        a0 = VbArrow(g, z0, vb.target(a1))
        return a0, a1

    res_s = res_t = 0.0
    worst_s = worst_t = ""
    for i, (g, h) in enumerate(_pairs(samples, pair_cap)):
        z0, z1 = rng.normal(size=r.k_dim), rng.normal(size=r.k_dim)
        y = rng.normal(size=r.h_dim)
        a0, a1 = comp_pair(g, h, z0, z1, y)
        m = vb.compose(a0, a1)
        vs = max_abs(vb.source(m) - vb.source(a1))
        vt = max_abs(vb.target(m) - vb.target(a0))
        if vs > res_s:
            res_s, worst_s = vs, f"pair {i}"
        if vt > res_t:
            res_t, worst_t = vt, f"pair {i}"
    entries.append(_entry("source-of-product", "groupoid/source-functorial", res_s, worst_s))
    entries.append(_entry("target-of-product", "groupoid/target-functorial", res_t, worst_t))

    res_a, worst_a = 0.0, ""
    for i, (g, h, k) in enumerate(_triples(samples, triple_cap)):
        z0, z1, z2 = (rng.normal(size=r.k_dim) for _ in range(3))
        y = rng.normal(size=r.h_dim)
        a2 = VbArrow(k, z2, y)
        a1 = VbArrow(h, z1, vb.target(a2))
        a0 = VbArrow(g, z0, vb.target(a1))
        left = vb.compose(vb.compose(a0, a1), a2)
        right = vb.compose(a0, vb.compose(a1, a2))
        v = max(max_abs(left.z - right.z), max_abs(left.y - right.y))
        if v > res_a:
            res_a, worst_a = v, f"triple {i}"
    entries.append(_entry("associativity", "groupoid/associativity", res_a, worst_a))

    res_u = res_i = 0.0
    worst_u = worst_i = ""
    for i, g in enumerate(samples):
        a = VbArrow(g, rng.normal(size=r.k_dim), rng.normal(size=r.h_dim))
        lu = vb.compose(vb.unit(vb.target(a)), a)
        ru = vb.compose(a, vb.unit(vb.source(a)))
        v = max(
            max_abs(lu.z - a.z),
            max_abs(lu.y - a.y),
            max_abs(ru.z - a.z),
            max_abs(ru.y - a.y),
        )
        if v > res_u:
            res_u, worst_u = v, f"sample {i}"
        ainv = vb.inverse(a)
        li = vb.compose(ainv, a)
        ri = vb.compose(a, ainv)
        us, ut = vb.unit(vb.source(a)), vb.unit(vb.target(a))
        v = max(
            max_abs(li.z - us.z),
            max_abs(li.y - us.y),
            max_abs(ri.z - ut.z),
            max_abs(ri.y - ut.y),
            max_abs(li.g - us.g),
            max_abs(ri.g - ut.g),
        )
        if v > res_i:
            res_i, worst_i = v, f"sample {i}"
    entries.append(_entry("unit-laws", "groupoid/unit-laws", res_u, worst_u))
    entries.append(_entry("inverse-laws", "groupoid/inverse-laws", res_i, worst_i))

    res_l, worst_l = 0.0, ""
    for i, (g, h) in enumerate(_pairs(samples, pair_cap // 2 or 1)):
        za, zb = rng.normal(size=(2, r.k_dim))
        zc, zd = rng.normal(size=(2, r.k_dim))
        ya, yb = rng.normal(size=(2, r.h_dim))
        ca, cb = rng.normal(size=2)
        a0a, a1a = comp_pair(g, h, za, zc, ya)
        a0b, a1b = comp_pair(g, h, zb, zd, yb)
        a0s = VbArrow(g, ca * za + cb * zb, ca * a0a.y + cb * a0b.y)
        a1s = VbArrow(h, ca * zc + cb * zd, ca * ya + cb * yb)
        ms = vb.compose(a0s, a1s)
        ma = vb.compose(a0a, a1a)
        mb = vb.compose(a0b, a1b)
        v = max(
            max_abs(ms.z - ca * ma.z - cb * mb.z),
            max_abs(ms.y - ca * ma.y - cb * mb.y),
            max_abs(vb.target(a0s) - ca * vb.target(a0a) - cb * vb.target(a0b)),
        )
        if v > res_l:
            res_l, worst_l = v, f"pair {i}"
    entries.append(_entry("fiberwise-linearity", "groupoid/fiberwise-linear", res_l, worst_l))
    return entries


def induced_actions(r, samples, tol=DEFAULT_TOL, pair_cap=None):
    """Honest actions induced on coker(∂) and ker(∂), with an axiom report.

    Both are independent of the splitting that produced the Ruth; the coker
    side is computed on the orthogonal-complement representative subspace.
    """
    ker, img, coker = svd_subspaces(r.partial, tol)
    K, C = ker.vectors, coker.vectors

    def d0(g):
        return C.T @ r.deltaH(g) @ C

    def d1(g):
        return K.T @ r.deltaK(g) @ K

    delta0 = SmoothMap(1, (coker.dim, coker.dim), d0, name="delta0")
    delta1 = SmoothMap(1, (ker.dim, ker.dim), d1, name="delta1")
    e = r.chart.identity
    entries = [
        _entry(
            "induced-units",
            "ruth/descended-actions-unital",
            max(
                max_abs(delta0(e) - np.eye(coker.dim)),
                max_abs(delta1(e) - np.eye(ker.dim)),
            ),
            "at identity",
        )
    ]
    res0 = res1 = 0.0
    worst0 = worst1 = ""
    for i, (g, h) in enumerate(_pairs(samples, pair_cap)):
        gh = r.chart.mul(g, h)
        v0 = max_abs(delta0(gh) - delta0(g) @ delta0(h))
        v1 = max_abs(delta1(gh) - delta1(g) @ delta1(h))
        if v0 > res0:
            res0, worst0 = v0, f"pair {i}"
        if v1 > res1:
            res1, worst1 = v1, f"pair {i}"
    entries.append(_entry("coker-action", "ruth/descended-coker-action", res0, worst0))
    entries.append(_entry("ker-action", "ruth/descended-ker-action", res1, worst1))
    return delta0, delta1, entries, (ker, img, coker)


def simplicial_delta(r, Z):
    """(δZ)(g, h) = Δk_g Z_h - Z_{gh} + Z_g for a core-valued 1-cochain."""

    def val(g, h):
        return r.deltaK(g) @ Z(h) - Z(r.chart.mul(g, h)) + Z(g)

    return val


def isotropy_check(r, y, Z, samples, tol=DEFAULT_TOL, pair_cap=None):
    """Isotropy-group structure over the stabilizer of [y].

    ``Z`` maps sampled stabilizer elements to the core, with
    ∂ Z_g = y - Δh_g y as its defining equation (checked as a
    precondition). Verifies that the bundle projection lands in the
    stabilizer of the class of y, that conjugation by (g; Z_g, y) acts on
    ker(∂) as the descended action, and that the semidirect twist extracted
    from the multiplication equals δZ - Ω(y) and takes values in ker(∂).
    """
    y = np.asarray(y, dtype=float)
    ker, img, coker = svd_subspaces(r.partial, tol)
    for i, g in enumerate(samples):
        defect = max_abs(r.partial @ Z(g) - (y - r.deltaH(g) @ y))
        if defect > 100 * tol:
            raise InvalidInputError(
                f"Z violates its defining equation at sample {i}: {defect:.3e}"
            )
    vb = vb_structure(r, tol=np.inf)
    delta = simplicial_delta(r, Z)
    entries = []

    res, worst = 0.0, ""
    for i, g in enumerate(samples):
        v = coker.vectors.T @ (y - r.deltaH(g) @ y)
        v = max_abs(v)
        if v > res:
            res, worst = v, f"sample {i}"
    entries.append(_entry("stabilizer-membership", "isotropy/projects-to-stabilizer", res, worst))

    res, worst = 0.0, ""
    for i, g in enumerate(samples):
        ag = VbArrow(g, Z(g), y)
        for j in range(ker.dim):
            v0 = ker.vectors[:, j]
            ev = VbArrow(r.chart.identity, v0, y)
            conj = vb.compose(vb.compose(ag, ev), vb.inverse(ag))
            v = max_abs(conj.z - r.deltaK(g) @ v0)
            if v > res:
                res, worst = v, f"sample {i}, ker vector {j}"
    entries.append(
        _entry("conjugation-action", "isotropy/conjugation-is-descended-action", res, worst)
    )

    res_m = res_k = res_w = 0.0
    worst_m = worst_k = worst_w = ""
    for i, (g, h) in enumerate(_pairs(samples, pair_cap)):
        gh = r.chart.mul(g, h)
        ag, ah, agh = VbArrow(g, Z(g), y), VbArrow(h, Z(h), y), VbArrow(gh, Z(gh), y)
        mu = vb.compose(vb.compose(ag, ah), vb.inverse(agh)).z
        predicted = delta(g, h) - r.omega(g, h) @ y
        v = max_abs(mu - predicted)
        if v > res_m:
            res_m, worst_m = v, f"pair {i}"
        vk = ker.residual_off(mu)
        if vk > res_k:
            res_k, worst_k = vk, f"pair {i}"
        vw = max_abs(r.partial @ delta(g, h) - r.partial @ (r.omega(g, h) @ y))
        if vw > res_w:
            res_w, worst_w = vw, f"pair {i}"
    entries.append(_entry("twist-cocycle", "isotropy/twist-equals-delta-minus-curvature", res_m, worst_m))
    entries.append(_entry("twist-in-kernel", "isotropy/twist-lands-in-kernel", res_k, worst_k))
    entries.append(_entry("twist-chain-compatibility", "isotropy/structural-map-of-twist", res_w, worst_w))
    return entries


def orbit_membership(r, y, y_target, samples, tol=DEFAULT_TOL):
    """Search sampled g for y_target ∈ Δh_g y + img(∂); return decision + witness."""
    y = np.asarray(y, dtype=float)
    y_target = np.asarray(y_target, dtype=float)
    _, img, coker = svd_subspaces(r.partial, tol)
    best = None
    for i, g in enumerate(samples):
        gap = y_target - r.deltaH(g) @ y
        off = max_abs(coker.vectors.T @ gap) if coker.dim else 0.0
        if best is None or off < best[0]:
            z, *_ = np.linalg.lstsq(r.partial, gap, rcond=None)
            resid = max_abs(r.partial @ z - gap)
            best = (off, i, g, z, resid)
    off, i, g, z, resid = best
    scale = max(1.0, float(np.linalg.norm(y_target)))
    return {
        "member": bool(resid <= tol * scale),
        "witness_index": i,
        "witness_g": g,
        "witness_z": z,
        "residual": resid,
        "coker_offset": off,
    }
