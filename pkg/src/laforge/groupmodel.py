"""Matrix Lie group charts and right-trivialized tangent calculus.

Conventions, fixed once for the whole package:

* Group elements are explicit matrices; products are matrix products,
  ``Ad_g`` is conjugation by ``g`` expressed in the chart basis.
* A chart's :class:`~laforge.liecore.LieAlgebra` carries the structure
  constants of the embedded basis under the **matrix commutator**.
* Tangent vectors are carried right-trivialized: the pair (x, g) stands for
  the velocity at τ=0 of the curve  exp(τx)·g.  Derivatives of smooth maps
  along such directions are central differences of that curve.
* Vector fields on G are right-trivialized coefficient functions ξ: G → g.
  Their Lie bracket (of the honest vector fields they represent) is

      [ξ, η](g) = (d_g η)_{ξ(g)*0_g} - (d_g ξ)_{η(g)*0_g} - [ξ(g), η(g)]_mat.

  In particular two constant coefficient functions bracket to minus their
  matrix commutator; this is the package's single bracket convention and
  every derived quantity (e.g. the curvature 2-cochains of the example
  catalog) is computed against it rather than assumed.
"""

from dataclasses import dataclass, field

import numpy as np

from .liecore import LieAlgebra
from .numkit import DEFAULT_FD_STEP, InvalidInputError, mat_exp, max_abs


@dataclass
class GroupChart:
    """A matrix model of a Lie group with its embedded algebra basis."""

    name: str
    matrix_size: int
    algebra: LieAlgebra
    basis: np.ndarray  # (dim, n, n)

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=float)
        n, d = self.matrix_size, self.algebra.dim
        if self.basis.shape != (d, n, n):
            raise InvalidInputError("basis shape mismatch")
        flat = self.basis.reshape(d, n * n).T if d else np.zeros((n * n, 0))
        self._embed_mat = flat
        self._coeff_mat = np.linalg.pinv(flat) if d else np.zeros((0, n * n))

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def identity(self):
        return np.eye(self.matrix_size)

    def mul(self, g, h):
        return g @ h

    def inv(self, g):
        return np.linalg.inv(g)

    def embed(self, x):
        """Algebra coefficients -> matrix."""
        x = np.asarray(x, dtype=float)
        return (self._embed_mat @ x).reshape(self.matrix_size, self.matrix_size)

    def coeffs(self, m, tol=1e-6):
        """Matrix in the span of the basis -> algebra coefficients."""
        v = np.asarray(m, dtype=float).reshape(-1)
        x = self._coeff_mat @ v
        if self.dim:
            res = float(np.linalg.norm(self._embed_mat @ x - v))
            if res > tol * max(1.0, float(np.linalg.norm(v))):
                raise InvalidInputError(
                    f"matrix lies {res:.2e} outside the embedded algebra"
                )
        return x

    def exp(self, x):
        """Group element exp(x) from algebra coefficients."""
        if self.dim == 0:
            return self.identity
        return mat_exp(self.embed(x))

    def Ad(self, g):
        """Adjoint action of g as a (dim × dim) matrix in the chart basis."""
        ginv = self.inv(g)
        cols = [self.coeffs(g @ self.basis[i] @ ginv) for i in range(self.dim)]
        return np.array(cols).T if self.dim else np.zeros((0, 0))

    def basis_commutator_residual(self):
        """How well the embedded basis realizes the structure constants."""
        res = 0.0
        for i in range(self.dim):
            for j in range(self.dim):
                comm = self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i]
                target = self.embed(self.algebra.c[i, j])
                res = max(res, max_abs(comm - target))
        return res


@dataclass
class SmoothMap:
    """A map of several group arguments with a fixed output shape."""

    arity: int
    out_shape: tuple
    fn: object
    name: str = ""

    def __call__(self, *points):
        if len(points) != self.arity:
            raise InvalidInputError(
                f"{self.name or 'SmoothMap'} expects {self.arity} points, got {len(points)}"
            )
        out = np.asarray(self.fn(*points), dtype=float)
        if out.shape != tuple(self.out_shape):
            raise InvalidInputError(
                f"{self.name or 'SmoothMap'} returned shape {out.shape}, "
                f"declared {tuple(self.out_shape)}"
            )
        return out


def constant_map(arity, value, name=""):
    value = np.asarray(value, dtype=float)
    return SmoothMap(arity, value.shape, lambda *pts: value, name=name)


def right_directional_derivative(F, slot, point, x, h=DEFAULT_FD_STEP, chart=None):
    """Central difference of F along the right-invariant direction x in one slot.

    ``point`` is a tuple of group elements, ``x`` an algebra coefficient
    vector; the curve is τ ↦ F(..., exp(τx)·g_slot, ...), realizing the
    derivative of F on the tangent vector x*0_g.
    """
    point = tuple(point)
    if not 0 <= slot < len(point):
        raise InvalidInputError(f"slot {slot} out of range for arity {len(point)}")
    x = np.asarray(x, dtype=float)
    if chart is None:
        raise InvalidInputError("chart required to exponentiate the direction")
    if chart.dim == 0 or not np.any(x):
        return np.zeros(F.out_shape)
    xm = chart.embed(x)

    def curve(tau):
        moved = mat_exp(tau * xm) @ point[slot]
        args = point[:slot] + (moved,) + point[slot + 1 :]
        return F(*args)

    return (curve(h) - curve(-h)) / (2.0 * h)


def tangent_group_mult(x, g, y, h_el, chart):
    """Right-trivialized product of tangent vectors: (x at g)*(y at h).

    d_g R_h(X) + d_h L_g(Y) right-translated from gh gives  x + Ad_g(y).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x + chart.Ad(g) @ y


def vector_field_bracket(xi, eta, g, chart, h=DEFAULT_FD_STEP):
    """Lie bracket of vector fields given as right-trivialized coefficients.

    ``xi`` and ``eta`` map a group element to algebra coefficients. Returns
    the coefficient of [ξ, η] at g per the package convention documented in
    the module docstring.
    """
    xg = np.asarray(xi(g), dtype=float)
    eg = np.asarray(eta(g), dtype=float)

    def as_map(f):
        return SmoothMap(1, (chart.dim,), f)

    d_eta = right_directional_derivative(as_map(eta), 0, (g,), xg, h, chart)
    d_xi = right_directional_derivative(as_map(xi), 0, (g,), eg, h, chart)
    return d_eta - d_xi - chart.algebra.bracket(xg, eg)


def group_quasi_diff(deltaH, deltaK, theta, points):
    """Degree +1 simplicial operator twisted by a pair of quasi-actions.

    ``theta`` is a SmoothMap of arity n valued in Hom(h, k) matrices;
    ``points`` is an (n+1)-tuple of group elements. Evaluates

        (δθ)(g_0..g_n) = Δk_{g_0} ∘ θ(g_1..g_n)
                         + Σ_{i=1}^{n} (-1)^i θ(.., g_{i-1} g_i, ..)
                         + (-1)^{n+1} θ(g_0..g_{n-1}) ∘ Δh_{g_n}.

    Applied twice this does not vanish unless both quasi-actions are honest
    representations; the defect is exactly the curvature obstruction tested
    in the cochain suites.
    """
    points = tuple(points)
    n = theta.arity
    if len(points) != n + 1:
        raise InvalidInputError(f"need {n + 1} points for a degree-{n} cochain")
    first = deltaK(points[0]) @ theta(*points[1:])
    total = first
    for i in range(1, n + 1):
        merged = points[: i - 1] + (points[i - 1] @ points[i],) + points[i + 1 :]
        total = total + ((-1) ** i) * theta(*merged)
    last = theta(*points[:-1]) @ deltaH(points[-1])
    total = total + ((-1) ** (n + 1)) * last
    return total


@dataclass
class GroupSampler:
    """Deterministic sampler of chart elements exp(x) with ‖x‖ ≤ radius."""

    seed: int
    radius: float
    chart: GroupChart

    def sample(self, n):
        return sample_elements(self, n)


def sample_elements(sampler, n):
    """First sample is always the identity; the rest are exp(x), ‖x‖ ≤ radius."""
    if n < 1:
        raise InvalidInputError("need at least one sample")
    chart = sampler.chart
    out = [chart.identity]
    rng = np.random.default_rng(sampler.seed)
    d = chart.dim
    while len(out) < n:
        if d == 0:
            out.append(chart.identity)
            continue
        x = rng.normal(size=d)
        norm = float(np.linalg.norm(x))
        scale = rng.uniform(0.2, 1.0) * sampler.radius
        if norm > 0:
            x = x * (scale / norm)
        out.append(chart.exp(x))
    return out


# ---------------------------------------------------------------------------
# chart factories for the groups used across the package


def aff1_chart():
    """Aff(1) as [[a, b], [0, 1]] with a > 0; basis scaling + translation."""
    basis = np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]])
    c = np.zeros((2, 2, 2))
    c[0, 1, 1] = 1.0
    c[1, 0, 1] = -1.0
    return GroupChart("aff1", 2, LieAlgebra(2, c, "aff(1)"), basis)


def so3_chart():
    """Rotation matrices; chart restricted to radius < π."""
    l1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    l2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    l3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[1, 2, 0], c[2, 1, 0] = 1.0, -1.0
    c[2, 0, 1], c[0, 2, 1] = 1.0, -1.0
    return GroupChart("so3", 3, LieAlgebra(3, c, "so(3)"), np.stack([l1, l2, l3]))


def heis3_chart():
    """Heisenberg group of upper unitriangular 3x3 matrices."""
    e1 = np.zeros((3, 3)); e1[0, 1] = 1.0
    e2 = np.zeros((3, 3)); e2[1, 2] = 1.0
    e3 = np.zeros((3, 3)); e3[0, 2] = 1.0
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    return GroupChart("heis3", 3, LieAlgebra(3, c, "heis(3)"), np.stack([e1, e2, e3]))


def line_chart():
    """(R, +) as [[1, t], [0, 1]]."""
    basis = np.array([[[0.0, 1.0], [0.0, 0.0]]])
    return GroupChart("line", 2, LieAlgebra.abelian(1, "R"), basis)


def plane_chart():
    """(R^2, +) as 3x3 translation matrices."""
    e1 = np.zeros((3, 3)); e1[0, 2] = 1.0
    e2 = np.zeros((3, 3)); e2[1, 2] = 1.0
    return GroupChart("plane", 3, LieAlgebra.abelian(2, "R^2"), np.stack([e1, e2]))


def point_chart():
    """The trivial group."""
    return GroupChart("point", 1, LieAlgebra.abelian(0, "0"), np.zeros((0, 1, 1)))


CHARTS = {
    "aff1": aff1_chart,
    "so3": so3_chart,
    "heis3": heis3_chart,
    "line": line_chart,
    "plane": plane_chart,
    "point": point_chart,
}
