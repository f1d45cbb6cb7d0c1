"""Lie algebras by structure constants, crossed modules, butterflies.

Structure constants are stored densely: ``c[i, j, k]`` is the coefficient of
basis vector ``k`` in ``[e_i, e_j]``. Dimensions stay small (<= 8), so all
validity checks enumerate basis tuples instead of sampling.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .numkit import (
    DEFAULT_TOL,
    InvalidInputError,
    SubspaceBasis,
    intersect,
    max_abs,
    svd_subspaces,
)


class JacobiError(ValueError):
    """Bracket data failed the Jacobi identity; carries the worst triple."""

    def __init__(self, residual, triple):
        self.residual = residual
        self.triple = triple
        super().__init__(
            f"Jacobi identity fails at basis triple {triple} with residual {residual:.3e}"
        )


@dataclass
class LieAlgebra:
    dim: int
    c: np.ndarray  # (dim, dim, dim)
    name: str = ""

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if self.c.shape != (self.dim, self.dim, self.dim):
            raise InvalidInputError(
                f"structure tensor shape {self.c.shape} != {(self.dim,) * 3}"
            )

    @classmethod
    def abelian(cls, dim, name=""):
        return cls(dim, np.zeros((dim, dim, dim)), name or f"abelian{dim}")

    def bracket(self, x, y):
        return np.einsum("ijk,i,j->k", self.c, x, y)

    def ad(self, x):
        """ad_x as a matrix acting on column vectors: ad_x(y) = [x, y]."""
        return np.einsum("ijk,i->kj", self.c, x)

    def ad_tensor(self):
        """Shape (dim, dim, dim): ad_tensor[i] = ad_{e_i} as a matrix."""
        return np.stack([self.ad(v) for v in np.eye(self.dim)]) if self.dim else np.zeros((0, 0, 0))

    def opposite(self):
        return LieAlgebra(self.dim, -self.c, name=(self.name + "^op") if self.name else "")

    def restrict(self, basis: SubspaceBasis):
        """Bracket in the coordinates of an (assumed closed) subspace."""
        v = basis.vectors
        c = np.einsum("ia,jb,ijk,kc->abc", v, v, self.c, v)
        return LieAlgebra(basis.dim, c, name=(self.name + "|sub") if self.name else "")


def antisymmetry_residual(c):
    return max_abs(c + np.swapaxes(c, 0, 1))


def jacobi_tensor(c):
    """cyc[i,j,k,l] = l-component of [[e_i,e_j],e_k] + cyclic."""
    d = np.einsum("ijm,mkl->ijkl", c, c)
    return d + np.einsum("ijkl->jkil", d) + np.einsum("ijkl->kijl", d)


def jacobi_residual(c):
    cyc = jacobi_tensor(c)
    return max_abs(cyc), cyc


def check_lie_algebra(L, tol=DEFAULT_TOL):
    """Report antisymmetry and Jacobi residuals over all basis tuples."""
    anti = antisymmetry_residual(L.c)
    jac, cyc = jacobi_residual(L.c)
    if L.dim:
        worst = np.unravel_index(int(np.argmax(np.abs(cyc))), cyc.shape)[:3]
        worst = tuple(int(i) for i in worst)
    else:
        worst = ()
    return {
        "antisymmetry": anti,
        "jacobi": jac,
        "worst_triple": worst,
        "pass": anti <= tol and jac <= tol,
    }


def validate_bracket(c, tol=DEFAULT_TOL):
    """Raise JacobiError / InvalidInputError unless c is a Lie bracket."""
    anti = antisymmetry_residual(c)
    if anti > tol:
        raise InvalidInputError(f"bracket not antisymmetric, residual {anti:.3e}")
    jac, cyc = jacobi_residual(c)
    if jac > tol:
        worst = np.unravel_index(int(np.argmax(np.abs(cyc))), cyc.shape)[:3]
        raise JacobiError(jac, tuple(int(i) for i in worst))


def ce_quasi_diff(algebra, rep, cochain, n):
    """Chevalley-Eilenberg differential for a quasi-representation.

    ``rep`` has shape (h, w, w); ``rep[i]`` is the matrix by which e_i acts
    on the coefficient space W (columns convention). A degree-n cochain is an
    array of shape (w, h, ..., h) with n algebra slots (degree 0: shape (w,)).
    The standard formula

        (dc)(y_0..y_n) = Σ_i (-1)^i rep(y_i) c(..ŷ_i..)
                         + Σ_{i<j} (-1)^{i+j} c([y_i,y_j], ..ŷ_i..ŷ_j..)

    is applied verbatim, with no d² = 0 guarantee when rep fails to be a
    representation.
    """
    rep = np.asarray(rep, dtype=float)
    c = np.asarray(cochain, dtype=float)
    h = algebra.dim
    w = rep.shape[1]
    if rep.shape != (h, w, w):
        raise InvalidInputError(f"rep shape {rep.shape} != {(h, w, w)}")
    if c.shape != (w,) + (h,) * n:
        raise InvalidInputError(f"cochain shape {c.shape} != {(w,) + (h,) * n}")
    out = np.zeros((w,) + (h,) * (n + 1))
    for ys in itertools.product(range(h), repeat=n + 1):
        val = np.zeros(w)
        for i in range(n + 1):
            rest = ys[:i] + ys[i + 1 :]
            val += ((-1) ** i) * (rep[ys[i]] @ c[(slice(None),) + rest])
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                br = algebra.c[ys[i], ys[j]]
                if n == 0:
                    continue
                rest = ys[:i] + ys[i + 1 : j] + ys[j + 1 :]
                acc = np.zeros(w)
                for m in range(h):
                    if br[m] != 0.0:
                        acc += br[m] * c[(slice(None), m) + rest]
                val += ((-1) ** (i + j)) * acc
        out[(slice(None),) + ys] = val
    return out


@dataclass
class CrossedModule:
    """A map of Lie algebras with a compatible action.

    ``structural``: top -> base as a matrix of shape (base.dim, top.dim);
    ``action``: a stack of matrices of shape (base.dim, top.dim, top.dim),
    ``action[b] @ m`` being the action of base vector e_b on m.
    """

    base: LieAlgebra
    top: LieAlgebra
    structural: np.ndarray
    action: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.structural = np.asarray(self.structural, dtype=float)
        self.action = np.asarray(self.action, dtype=float)
        nb, nt = self.base.dim, self.top.dim
        if self.structural.shape != (nb, nt):
            raise InvalidInputError("structural map shape mismatch")
        if self.action.shape != (nb, nt, nt):
            raise InvalidInputError("action tensor shape mismatch")

    def act_matrix(self, b):
        """Matrix of the action of a base vector b on the top space."""
        return np.einsum("bxy,b->xy", self.action, b)


def check_crossed_module(cm, tol=DEFAULT_TOL):
    """Residuals: derivations, action homomorphism, equivariance, Peiffer.

    Conventions: the action is b.m with  ∂(b.m) = [b, ∂m]_base  and the
    Peiffer identity reads  (∂m).m' = [m, m']_top.
    """
    act, par = cm.action, cm.structural
    # derivation: b.[m,m'] = [b.m, m'] + [m, b.m']
    lhs = np.einsum("ijy,bxy->bijx", cm.top.c, act)
    rhs = np.einsum("byi,yjx->bijx", act, cm.top.c) + np.einsum(
        "byj,iyx->bijx", act, cm.top.c
    )
    derivation = max_abs(lhs - rhs)
    # homomorphism into End(top): act([a,b]) = act(a)act(b) - act(b)act(a)
    comp = np.einsum("axy,byz->abxz", act, act)  # M_a M_b, in z -> out x
    comm = comp - np.einsum("abxz->baxz", comp)
    hom = np.einsum("abm,mxz->abxz", cm.base.c, act)
    action_hom = max_abs(comm - hom)
    # equivariance: ∂(b.m) = [b, ∂m]_base
    lhs = np.einsum("ay,bym->bma", par, act)
    rhs = np.einsum("bka,km->bma", cm.base.c, par)
    equivariance = max_abs(lhs - rhs)
    # Peiffer: (∂m).m' = [m, m']_top
    lhs = np.einsum("bm,bxy->myx", par, act)
    peiffer = max_abs(lhs - cm.top.c)
    report = {
        "derivation": derivation,
        "action_homomorphism": action_hom,
        "equivariance": equivariance,
        "peiffer": peiffer,
    }
    report["pass"] = all(v <= tol for v in report.values())
    return report


def semidirect_twisted(base, fiber, rep, cocycle, tol=DEFAULT_TOL, validate=True):
    """Semidirect-sum bracket twisted by a fiber-valued 2-cochain.

    [(v0,y0),(v1,y1)] = ([v0,v1] + rep(y0)v1 - rep(y1)v0 + cocycle(y0,y1),
                         [y0,y1]).
    Fiber coordinates come first; ``rep`` is a stack of matrices of shape
    (nb, nf, nf) with rep[b] @ v the action of base vector e_b, ``cocycle``
    has shape (nf, nb, nb). With ``validate``, a Jacobi failure above tol
    raises :class:`JacobiError` naming the offending basis triple.
    """
    rep = np.asarray(rep, dtype=float)
    coc = np.asarray(cocycle, dtype=float)
    nb, nf = base.dim, fiber.dim
    if rep.shape != (nb, nf, nf):
        raise InvalidInputError("rep tensor shape mismatch")
    if coc.shape != (nf, nb, nb):
        raise InvalidInputError("cocycle shape mismatch")
    n = nf + nb
    c = np.zeros((n, n, n))
    c[:nf, :nf, :nf] = fiber.c
    for b0 in range(nb):
        for b1 in range(nb):
            c[nf + b0, nf + b1, nf:] = base.c[b0, b1]
            c[nf + b0, nf + b1, :nf] += coc[:, b0, b1]
    for b in range(nb):
        for f in range(nf):
            c[nf + b, f, :nf] += rep[b, :, f]
            c[f, nf + b, :nf] -= rep[b, :, f]
    out = LieAlgebra(n, c, name=f"{base.name}⋉{fiber.name}")
    if validate:
        anti = antisymmetry_residual(c)
        if anti > tol:
            raise InvalidInputError(f"twisted bracket not antisymmetric: {anti:.3e}")
        jac, cyc = jacobi_residual(c)
        if jac > tol:
            worst = np.unravel_index(int(np.argmax(np.abs(cyc))), cyc.shape)[:3]
            raise JacobiError(jac, tuple(int(i) for i in worst))
    return out


@dataclass
class Butterfly:
    """Two short sequences sharing a middle Lie algebra.

    Diagonal one runs nw -> center -> se, diagonal two ne -> center -> sw;
    both are required to be short exact. The sw/se corners are plain
    coordinate spaces of the stated dimensions.
    """

    nw: LieAlgebra
    ne: LieAlgebra
    center: LieAlgebra
    sw_dim: int
    se_dim: int
    nw_to_center: np.ndarray
    ne_to_center: np.ndarray
    center_to_sw: np.ndarray
    center_to_se: np.ndarray


def _exactness(in_map, out_map, tol):
    """Exactness data of  A --in--> B --out--> C  at B."""
    ker_in, img_in, _ = svd_subspaces(in_map, tol)
    ker_out, img_out, _ = svd_subspaces(out_map, tol)
    if img_in.dim and ker_out.dim:
        dist = max(
            max(img_in.residual_off(ker_out.vectors[:, j]) for j in range(ker_out.dim)),
            max(ker_out.residual_off(img_in.vectors[:, j]) for j in range(img_in.dim)),
        )
    else:
        dist = 0.0 if img_in.dim == ker_out.dim else 1.0
    return {
        "rank_mismatch": abs(img_in.dim - ker_out.dim),
        "middle_residual": dist,
        "in_kernel_dim": ker_in.dim,
        "out_image_dim": img_out.dim,
    }


def check_butterfly(b, tol=DEFAULT_TOL):
    """Exactness of both diagonals plus the derived corner identities.

    Checks, with integer-exact ranks at ``tol``: both diagonals are short
    exact (injective head, exact middle, surjective tail); the intersection
    V of the two tail kernels has identically zero bracket (as a
    structure-constants statement, not a tolerance one); and the two
    quotient dimensions dim(img(sw)/sw(nw)) and dim(img(se)/se(ne)) agree.
    """
    diag1 = _exactness(b.nw_to_center, b.center_to_se, tol)
    diag2 = _exactness(b.ne_to_center, b.center_to_sw, tol)
    surj1 = b.se_dim - diag1["out_image_dim"]
    surj2 = b.sw_dim - diag2["out_image_dim"]
    ker_se, _, _ = svd_subspaces(b.center_to_se, tol)
    ker_sw, _, _ = svd_subspaces(b.center_to_sw, tol)
    v = intersect(ker_se, ker_sw, tol)
    v_bracket = max_abs(b.center.restrict(v).c) if v.dim else 0.0
    _, img_sw_of_nw, _ = svd_subspaces(b.center_to_sw @ b.nw_to_center, tol)
    _, img_se_of_ne, _ = svd_subspaces(b.center_to_se @ b.ne_to_center, tol)
    _, img_sw, _ = svd_subspaces(b.center_to_sw, tol)
    _, img_se, _ = svd_subspaces(b.center_to_se, tol)
    quot_sw = img_sw.dim - img_sw_of_nw.dim
    quot_se = img_se.dim - img_se_of_ne.dim
    report = {
        "diag_nw_se_exact": diag1["middle_residual"],
        "diag_ne_sw_exact": diag2["middle_residual"],
        "rank_defects": diag1["rank_mismatch"]
        + diag2["rank_mismatch"]
        + diag1["in_kernel_dim"]
        + diag2["in_kernel_dim"]
        + abs(surj1)
        + abs(surj2),
        "abelian_core_bracket": v_bracket,
        "quotient_dims": (quot_sw, quot_se),
        "quotient_dim_equal": quot_sw == quot_se,
        "v_dim": v.dim,
    }
    report["pass"] = (
        report["rank_defects"] == 0
        and report["diag_nw_se_exact"] <= tol
        and report["diag_ne_sw_exact"] <= tol
        and report["abelian_core_bracket"] == 0.0
        and report["quotient_dim_equal"]
    )
    return report


def subalgebra_closure_residual(L, basis: SubspaceBasis):
    """How far a subspace is from being closed under the bracket."""
    res = 0.0
    v = basis.vectors
    for i in range(basis.dim):
        for j in range(basis.dim):
            w = L.bracket(v[:, i], v[:, j])
            res = max(res, basis.residual_off(w))
    return res


def aff1():
    """aff(1): [e1, e2] = e2."""
    c = np.zeros((2, 2, 2))
    c[0, 1, 1] = 1.0
    c[1, 0, 1] = -1.0
    return LieAlgebra(2, c, name="aff(1)")


def heisenberg3():
    """heis(3): [e1, e2] = e3, e3 central."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    return LieAlgebra(3, c, name="heis(3)")
