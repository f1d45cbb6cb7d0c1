"""Built-in example families with known ground truth, plus mutations.

Every family constructs a matched pair whose eight axioms hold exactly in
exact arithmetic (finite-difference noise is the only residual), together
with whatever side data the verification suites need: a second
unit-extending splitting, stabilizer samples with their core lifts, and
double-group integration data where the family integrates by hand.

The mutation table returns a structurally identical pair with one named
defect; each mutation is calibrated on the family where the defect moves
exactly one report entry (the perturbation directions are chosen inside
blind spots of every other law).
"""

from dataclasses import dataclass, field

import numpy as np

from .groupmodel import (
    CHARTS,
    GroupChart,
    GroupSampler,
    SmoothMap,
    sample_elements,
)
from .liecore import LieAlgebra, aff1 as aff1_algebra
from .matched import MatchedPair, derive_ell
from .numkit import InvalidInputError, mat_exp
from .ruth import Ruth


@dataclass
class ExampleSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0


@dataclass
class BuiltExample:
    mp: MatchedPair
    spec: ExampleSpec
    radius: float = 0.8
    second_splitting: object = None  # SmoothMap G -> (k, h) core block, or None
    isotropy: list = field(default_factory=list)  # (label, y, Z callable)
    integration: dict = None  # double-group data for the vacant-type families
    notes: str = ""

    def sampler(self, seed=None):
        return GroupSampler(self.spec.seed if seed is None else seed, self.radius, self.mp.chart)

    def samples(self, n, seed=None):
        return sample_elements(self.sampler(seed), n)


REGISTRY = {
    "trivial": {
        "partial": ["id", "zero"],
    },
    "tangent": {
        "variant": ["conjugation", "linear", "scaling"],
        "group": ["aff1", "so3"],
    },
    "crossed-module": {
        "group": ["line", "point"],
    },
    "trivial-maps": {
        "curvature": ["on", "off"],
    },
    "transitive-core": {
        "variant": ["basic", "full"],
        "group": ["aff1", "heis3"],
        "abelian_dim": "nonnegative int (default 1)",
    },
}

MUTATIONS = {
    "break-ruth-delta0": {
        "family": ("trivial-maps", {"curvature": "off"}),
        "suite": "ruth",
        "entry": "quasi-action-h",
    },
    "break-omega-units": {
        "family": ("trivial-maps", {}),
        "suite": "ruth",
        "entry": "unit-curvature",
    },
    "break-G-equiv": {
        "family": ("transitive-core", {"variant": "basic", "group": "heis3"}),
        "suite": "matched",
        "entry": "axiom-4-group-equivariance",
    },
    "break-h-equiv": {
        "family": ("transitive-core", {"variant": "full"}),
        "suite": "matched",
        "entry": "axiom-3-unit-equivariance",
    },
    "break-MC": {
        "family": ("trivial-maps", {}),
        "suite": "matched",
        "entry": "axiom-8-maurer-cartan",
    },
    "break-jacobi-k": {
        "family": ("transitive-core", {"variant": "basic", "group": "aff1"}),
        "suite": "matched",
        "entry": "axiom-1-core-bracket",
    },
    "break-auth-curvature": {
        "family": ("transitive-core", {"variant": "full"}),
        "suite": "matched",
        "entry": "axiom-2-auth",
    },
}

# spec aliases accepted by the command line (unicode name from the registry docs)
MUTATION_ALIASES = {"break-ruth-Δ⁰": "break-ruth-delta0"}


def _zero_map(arity, shape, name=""):
    z = np.zeros(shape)
    return SmoothMap(arity, shape, lambda *a: z, name=name)


def _const_map(arity, value, name=""):
    v = np.asarray(value, dtype=float)
    return SmoothMap(arity, v.shape, lambda *a: v, name=name)


def list_examples():
    return {name: dict(schema) for name, schema in sorted(REGISTRY.items())}


def build_example(spec):
    if spec.family not in REGISTRY:
        raise InvalidInputError(
            f"unknown family {spec.family!r}; known: {sorted(REGISTRY)}"
        )
    builder = {
        "trivial": _build_trivial,
        "tangent": _build_tangent,
        "crossed-module": _build_crossed_module,
        "trivial-maps": _build_trivial_maps,
        "transitive-core": _build_transitive_core,
    }[spec.family]
    return builder(spec)


# ---------------------------------------------------------------------------
# family (a): everything trivial over a one-dimensional group


def _build_trivial(spec):
    mode = spec.params.get("partial", "id")
    if mode not in ("id", "zero"):
        raise InvalidInputError("trivial family: partial must be 'id' or 'zero'")
    chart = CHARTS["line"]()
    par = np.array([[1.0]]) if mode == "id" else np.array([[0.0]])
    ruth = Ruth(
        chart,
        1,
        1,
        par,
        _const_map(1, np.eye(1), "deltaH"),
        _const_map(1, np.eye(1), "deltaK"),
        _zero_map(2, (1, 1), "omega"),
    )
    mp = MatchedPair(
        ruth=ruth,
        rho_e=np.zeros((1, 1)),
        alpha=_zero_map(1, (1, 1), "alpha"),
        ell_e=np.zeros((1, 1, 1)),
        omega=_zero_map(1, (1, 1, 1), "omega"),
        h_algebra=LieAlgebra.abelian(1, "R"),
        name=f"trivial/{mode}",
    )
    second = SmoothMap(
        1, (1, 1), lambda g: np.array([[0.3 * g[0, 1]]]), name="shifted"
    )
    iso = [("origin", np.array([1.0]), lambda g: np.zeros(1))] if mode == "zero" else []
    return BuiltExample(mp, spec, 1.0, second, iso, None, "all maps trivial")


# ---------------------------------------------------------------------------
# family (b): vacant pairs from split double groups


def _build_tangent(spec):
    variant = spec.params.get("variant", "conjugation")
    if variant == "conjugation":
        chart = CHARTS[spec.params.get("group", "aff1")]()
        gd = chart.dim
        hd = gd
        h_alg = LieAlgebra(hd, chart.algebra.c.copy(), name=chart.algebra.name)
        ruth = Ruth(
            chart,
            hd,
            0,
            np.zeros((hd, 0)),
            SmoothMap(1, (hd, hd), lambda g: chart.Ad(g), name="deltaH"),
            _const_map(1, np.eye(0), "deltaK"),
            _zero_map(2, (0, hd), "omega"),
        )
        mp = MatchedPair(
            ruth=ruth,
            rho_e=np.zeros((gd, 0)),
            alpha=_zero_map(1, (gd, hd), "alpha"),
            ell_e=np.zeros((hd, 0, 0)),
            omega=_zero_map(1, (0, hd, hd), "omega"),
            h_algebra=h_alg,
            name=f"tangent/conjugation/{chart.name}",
        )
        integration = {
            "h_chart": chart,
            "g_chart": chart,
            "bullet": lambda h, g: g,
            "act": lambda h, g: g @ h @ chart.inv(g),
        }
        return BuiltExample(mp, spec, 0.8, None, [], integration, "side action by conjugation")

    if variant == "linear":
        chart = CHARTS["plane"]()
        h_chart = CHARTS["aff1"]()
        h_alg = LieAlgebra(2, -aff1_algebra().c, name="aff(1)^op")

        def m_of(y):
            # infinitesimal linear action of the affine algebra on the plane
            return np.array([[y[0], y[1]], [0.0, 0.0]])

        def alpha_fn(g):
            v = g[:2, 2]
            cols = [m_of(y) @ v for y in np.eye(2)]
            return np.array(cols).T

        ruth = Ruth(
            chart,
            2,
            0,
            np.zeros((2, 0)),
            _const_map(1, np.eye(2), "deltaH"),
            _const_map(1, np.eye(0), "deltaK"),
            _zero_map(2, (0, 2), "omega"),
        )
        mp = MatchedPair(
            ruth=ruth,
            rho_e=np.zeros((2, 0)),
            alpha=SmoothMap(1, (2, 2), alpha_fn, name="alpha"),
            ell_e=np.zeros((2, 0, 0)),
            omega=_zero_map(1, (0, 2, 2), "omega"),
            h_algebra=h_alg,
            name="tangent/linear",
        )

        def bullet(h, g):
            out = np.eye(3)
            out[:2, 2] = h[:2, :2] @ g[:2, 2]
            return out

        integration = {
            "h_chart": h_chart,
            "g_chart": chart,
            "bullet": bullet,
            "act": lambda h, g: h,
        }
        return BuiltExample(mp, spec, 1.0, None, [], integration, "affine group acting on the plane")

    if variant == "scaling":
        chart = CHARTS["aff1"]()
        h_chart = CHARTS["line"]()
        h_alg = LieAlgebra.abelian(1, "R")

        def alpha_fn(g):
            return np.array([[0.0], [g[0, 1]]])

        ruth = Ruth(
            chart,
            1,
            0,
            np.zeros((1, 0)),
            _const_map(1, np.eye(1), "deltaH"),
            _const_map(1, np.eye(0), "deltaK"),
            _zero_map(2, (0, 1), "omega"),
        )
        mp = MatchedPair(
            ruth=ruth,
            rho_e=np.zeros((2, 0)),
            alpha=SmoothMap(1, (2, 1), alpha_fn, name="alpha"),
            ell_e=np.zeros((1, 0, 0)),
            omega=_zero_map(1, (0, 1, 1), "omega"),
            h_algebra=h_alg,
            name="tangent/scaling",
        )

        def scale_mat(h):
            return np.array([[np.exp(h[0, 1]), 0.0], [0.0, 1.0]])

        integration = {
            "h_chart": h_chart,
            "g_chart": chart,
            "bullet": lambda h, g: scale_mat(h) @ g @ np.linalg.inv(scale_mat(h)),
            "act": lambda h, g: h,
        }
        return BuiltExample(mp, spec, 0.8, None, [], integration, "translation-scaling action")

    raise InvalidInputError("tangent family: variant must be conjugation, linear or scaling")


# ---------------------------------------------------------------------------
# family (c): a genuine crossed module with a spectator-to-inner group action


def _build_crossed_module(spec):
    group = spec.params.get("group", "line")
    if group not in ("line", "point"):
        raise InvalidInputError("crossed-module family: group must be 'line' or 'point'")
    chart = CHARTS[group]()
    halg = aff1_algebra()
    hd = k = 2
    D = halg.ad(np.array([1.0, 0.0]))  # inner derivation by the scaling direction

    def coord(g):
        return float(g[0, 1]) if chart.matrix_size > 1 else 0.0

    def flow(g):
        return mat_exp(coord(g) * D) if group == "line" else np.eye(2)

    ruth = Ruth(
        chart,
        hd,
        k,
        np.eye(2),
        SmoothMap(1, (hd, hd), flow, name="deltaH"),
        SmoothMap(1, (k, k), flow, name="deltaK"),
        _zero_map(2, (k, hd), "omega"),
    )
    ell_e = np.stack([halg.ad(v) for v in np.eye(2)])
    mp = MatchedPair(
        ruth=ruth,
        rho_e=np.zeros((chart.dim, k)),
        alpha=_zero_map(1, (chart.dim, hd), "alpha"),
        ell_e=ell_e,
        omega=_zero_map(1, (k, hd, hd), "omega"),
        h_algebra=halg,
        name=f"crossed-module/{group}",
    )
    c0 = np.outer(np.array([0.0, 1.0]), np.array([1.0, 0.0]))  # shift along y2* ⊗ e1
    second = SmoothMap(1, (k, hd), lambda g: coord(g) * c0, name="shifted")
    iso = [("fixed-direction", np.array([1.0, 0.0]), lambda g: np.zeros(2))]
    return BuiltExample(mp, spec, 1.0, second, iso, None, "inner flow on an affine crossed module")


# ---------------------------------------------------------------------------
# family (d): both structural maps zero, honest actions, nonzero curvatures


def _build_trivial_maps(spec):
    curvature = spec.params.get("curvature", "on")
    if curvature not in ("on", "off"):
        raise InvalidInputError("trivial-maps family: curvature must be 'on' or 'off'")
    chart = CHARTS["line"]()
    halg = aff1_algebra()
    hd = k = 2
    D = halg.ad(np.array([1.0, 0.0]))

    def coord(g):
        return float(g[0, 1])

    def flow(g):
        return mat_exp(coord(g) * D)

    P = np.array([[0.0, 0.0], [1.0, 0.0]])  # curvature seed, first unit direction

    def omega_ruth(g, h):
        if curvature == "off":
            return np.zeros((k, hd))
        t, s = coord(g), coord(h)
        return s * flow(g) @ P - (t + s) * P + t * P @ flow(h)

    ruth = Ruth(
        chart,
        hd,
        k,
        np.zeros((hd, k)),
        SmoothMap(1, (hd, hd), flow, name="deltaH"),
        SmoothMap(1, (k, k), flow, name="deltaK"),
        SmoothMap(2, (k, hd), omega_ruth, name="omega"),
    )
    ell_e = np.stack([halg.ad(v) for v in np.eye(2)])

    def ell_rep(g):
        # pointwise module action: the flow conjugates the identity action
        f = flow(g)
        return np.stack([halg.ad(f @ v) for v in np.eye(2)])

    def omega_auth(g):
        out = np.zeros((k, hd, hd))
        if curvature == "off":
            return out
        t = coord(g)
        rep = ell_rep(g)
        phi = t * P
        for i in range(hd):
            for j in range(i + 1, hd):
                y0, y1 = np.eye(hd)[i], np.eye(hd)[j]
                val = (
                    np.einsum("axy,a,y->x", rep, y0, phi @ y1)
                    - np.einsum("axy,a,y->x", rep, y1, phi @ y0)
                    - phi @ halg.bracket(y0, y1)
                )
                out[:, i, j] = val
                out[:, j, i] = -val
        return out

    mp = MatchedPair(
        ruth=ruth,
        rho_e=np.zeros((chart.dim, k)),
        alpha=_zero_map(1, (chart.dim, hd), "alpha"),
        ell_e=ell_e,
        omega=SmoothMap(1, (k, hd, hd), omega_auth, name="omega"),
        h_algebra=halg,
        name=f"trivial-maps/{curvature}",
    )
    c0 = np.outer(np.array([1.0, 0.0]), np.array([1.0, 0.0]))
    second = SmoothMap(1, (k, hd), lambda g: coord(g) * c0, name="shifted")
    iso = [("fixed-direction", np.array([1.0, 0.0]), lambda g: np.zeros(2))]
    h_chart = CHARTS["aff1"]()

    def conj_mat(g):
        return np.array([[np.exp(coord(g)), 0.0], [0.0, 1.0]])

    integration = {
        "h_chart": h_chart,
        "g_chart": chart,
        "bullet": lambda h, g: g,
        "act": lambda h, g: conj_mat(g) @ h @ np.linalg.inv(conj_mat(g)),
    }
    return BuiltExample(mp, spec, 1.0, second, iso, integration, "commuting flows with coboundary curvatures")


# ---------------------------------------------------------------------------
# family (e): surjective anchor-at-identity, optionally with nontrivial units


def _build_transitive_core(spec):
    variant = spec.params.get("variant", "basic")
    a_dim = int(spec.params.get("abelian_dim", 1))
    if a_dim < 0:
        raise InvalidInputError("transitive-core family: abelian_dim must be >= 0")
    if variant == "basic":
        chart = CHARTS[spec.params.get("group", "aff1")]()
        gd = chart.dim
        k = gd + a_dim
        hd = 0

        def delta_k(g):
            out = np.eye(k)
            out[:gd, :gd] = chart.Ad(g)
            return out

        ruth = Ruth(
            chart,
            hd,
            k,
            np.zeros((hd, k)),
            _const_map(1, np.eye(0), "deltaH"),
            SmoothMap(1, (k, k), delta_k, name="deltaK"),
            _zero_map(2, (k, hd), "omega"),
        )
        rho = np.zeros((gd, k))
        rho[:, :gd] = np.eye(gd)
        mp = MatchedPair(
            ruth=ruth,
            rho_e=rho,
            alpha=_zero_map(1, (gd, hd), "alpha"),
            ell_e=np.zeros((hd, k, k)),
            omega=_zero_map(1, (k, hd, hd), "omega"),
            h_algebra=LieAlgebra.abelian(0, "0"),
            name=f"transitive-core/basic/{chart.name}",
        )
        return BuiltExample(mp, spec, 0.8, None, [], None, "adjoint core over a trivial unit algebra")

    if variant != "full":
        raise InvalidInputError("transitive-core family: variant must be 'basic' or 'full'")

    chart = CHARTS["aff1"]()
    gd = chart.dim  # 2
    aff = aff1_algebra()
    # units: aff(1) extended by a scaling derivation u and a central spectator w
    hd = 4
    ch = np.zeros((hd, hd, hd))
    ch[:2, :2, :2] = aff.c
    ch[2, 1, 1] = 1.0  # [u, y2] = y2
    ch[1, 2, 1] = -1.0
    halg = LieAlgebra(hd, ch, name="aff(1)+scaling+center")
    # core: chart algebra ⊕ R^a ⊕ an affine block ⊕ a central line
    k = gd + a_dim + 3
    caff0 = gd + a_dim  # start of the affine block inside the core
    ccen = k - 1

    def delta_k(g):
        out = np.eye(k)
        out[:gd, :gd] = chart.Ad(g)
        return out

    partial = np.zeros((hd, k))
    partial[0, caff0] = 1.0
    partial[1, caff0 + 1] = 1.0
    rho = np.zeros((gd, k))
    rho[:, :gd] = np.eye(gd)
    ell_e = np.zeros((hd, k, k))
    for i in range(2):  # affine unit directions act by the inner derivations
        ell_e[i, caff0 : caff0 + 2, caff0 : caff0 + 2] = aff.ad(np.eye(2)[i])
    ell_e[2, caff0 + 1, caff0 + 1] = 1.0  # u acts by the scaling derivation

    ruth = Ruth(
        chart,
        hd,
        k,
        partial,
        _const_map(1, np.eye(hd), "deltaH"),
        SmoothMap(1, (k, k), delta_k, name="deltaK"),
        _zero_map(2, (k, hd), "omega"),
    )
    mp = MatchedPair(
        ruth=ruth,
        rho_e=rho,
        alpha=_zero_map(1, (gd, hd), "alpha"),
        ell_e=ell_e,
        omega=_zero_map(1, (k, hd, hd), "omega"),
        h_algebra=halg,
        name="transitive-core/full",
    )
    c0 = np.zeros((k, hd))
    # shift the first unit direction into the chart-algebra core block, so
    # the second splitting changes the anchor tensor (but not its class
    # modulo the image of the core anchor)
    c0[0, 0] = 1.0

    def second_fn(g):
        return float(g[0, 1]) * c0

    second = SmoothMap(1, (k, hd), second_fn, name="shifted")
    # the side action is trivial, so every unit direction is stabilized with
    # a vanishing core lift
    iso = [("unit-direction", np.eye(hd)[0], lambda g: np.zeros(k))]
    return BuiltExample(mp, spec, 0.8, second, iso, None, "surjective anchor with coupled unit block")


# ---------------------------------------------------------------------------
# mutations


def mutate(mp, mutation, magnitude):
    """A structurally identical pair with one named defect of the given size.

    Returns (mutated_pair, metadata); metadata records the suite and entry
    the defect is calibrated to move, and the family it is calibrated on.
    """
    mutation = MUTATION_ALIASES.get(mutation, mutation)
    if mutation not in MUTATIONS:
        raise InvalidInputError(
            f"unknown mutation {mutation!r}; known: {sorted(MUTATIONS)}"
        )
    meta = dict(MUTATIONS[mutation])
    meta["name"] = mutation
    meta["magnitude"] = float(magnitude)
    if magnitude == 0.0:
        return mp, meta
    r = mp.ruth
    chart = mp.chart
    k, hd = mp.k_dim, mp.h_dim

    def clone(deltaH=None, deltaK=None, omega_ruth=None, rho_e=None, ell_e=None, omega=None):
        ruth = Ruth(
            chart,
            hd,
            k,
            r.partial.copy(),
            deltaH or r.deltaH,
            deltaK or r.deltaK,
            omega_ruth or r.omega,
        )
        return MatchedPair(
            ruth=ruth,
            rho_e=mp.rho_e.copy() if rho_e is None else rho_e,
            alpha=mp.alpha,
            ell_e=mp.ell_e.copy() if ell_e is None else ell_e,
            omega=mp.omega if omega is None else omega,
            h_algebra=mp.h_algebra,
            name=f"{mp.name}+{mutation}@{magnitude:g}",
        )

    if mutation == "break-ruth-delta0":
        if hd < 2:
            raise InvalidInputError("break-ruth-delta0 needs a 2-dimensional unit space")
        E = np.outer(np.eye(hd)[1], np.eye(hd)[0])

        def deltaH(g):
            t = float(g[0, 1])
            return r.deltaH(g) + magnitude * t * t * E

        return clone(deltaH=SmoothMap(1, (hd, hd), deltaH, "deltaH*")), meta

    if mutation == "break-omega-units":
        if k < 1 or hd < 1:
            raise InvalidInputError("break-omega-units needs nontrivial core and units")
        C = np.outer(np.eye(k)[0], np.eye(hd)[0])

        def omega_ruth(g, h):
            return r.omega(g, h) + magnitude * C

        return clone(omega_ruth=SmoothMap(2, (k, hd), omega_ruth, "omega*")), meta

    if mutation == "break-G-equiv":
        gd = chart.dim
        if gd < 3:
            raise InvalidInputError("break-G-equiv is calibrated for a chart with a center")
        # push a central chart direction into the anchor, keyed on the
        # center component of the core's chart block
        rho = mp.rho_e.copy()
        rho[gd - 1, gd - 1] += magnitude
        return clone(rho_e=rho), meta

    if mutation == "break-h-equiv":
        if hd < 4:
            raise InvalidInputError("break-h-equiv is calibrated for the full transitive-core family")
        E = np.outer(np.eye(hd)[3], np.eye(hd)[2])  # w ⊗ u*

        def deltaH(g):
            tau = float(np.log(g[0, 0]))
            return r.deltaH(g) + magnitude * tau * E

        return clone(deltaH=SmoothMap(1, (hd, hd), deltaH, "deltaH*")), meta

    if mutation == "break-MC":
        if k < 2 or hd < 2:
            raise InvalidInputError("break-MC needs 2-dimensional core and units")
        Q = np.array([[0.0, 1.0], [0.0, 0.0]])
        ell = derive_ell(mp)

        def omega(g):
            t = float(g[0, 1])
            chi = t * Q
            rep = ell(g)
            out = mp.omega(g).copy()
            for i in range(hd):
                for j in range(i + 1, hd):
                    y0, y1 = np.eye(hd)[i], np.eye(hd)[j]
                    val = (
                        np.einsum("axy,a,y->x", rep, y0, chi @ y1)
                        - np.einsum("axy,a,y->x", rep, y1, chi @ y0)
                        - chi @ mp.h_algebra.bracket(y0, y1)
                    )
                    out[:, i, j] += magnitude * val
                    out[:, j, i] -= magnitude * val
            return out

        return clone(omega=SmoothMap(1, (k, hd, hd), omega, "omega*")), meta

    if mutation == "break-jacobi-k":
        gd = chart.dim
        if k <= gd:
            raise InvalidInputError("break-jacobi-k needs an abelian core block")
        N = np.outer(np.eye(k)[gd], np.eye(k)[0])

        def deltaK(g):
            # the modulating coordinate is not a homomorphism, so the core
            # quasi-action relation (and with it a groupoid law) breaks too
            tau = float(g[0, 1])
            return r.deltaK(g) + magnitude * tau * N

        return clone(deltaK=SmoothMap(1, (k, k), deltaK, "deltaK*")), meta

    if mutation == "break-auth-curvature":
        if hd < 4 or k < 3:
            raise InvalidInputError("break-auth-curvature is calibrated for the full transitive-core family")
        ell = mp.ell_e.copy()
        # the scaling unit direction picks up a center-valued non-derivation:
        # the second affine core coordinate is sent to the central one
        ell[2, k - 1, k - 2] += magnitude
        return clone(ell_e=ell), meta

    raise InvalidInputError(f"unhandled mutation {mutation}")


# ---------------------------------------------------------------------------
# a homotopy-twisted representation (not a matched pair): its quasi-actions
# are genuinely quasi, so the failure of the simplicial operator to square
# to zero is nonzero and exactly matched by the curvature obstruction.


def build_twisted_ruth():
    chart = CHARTS["aff1"]()
    W = 2
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    Kp = np.array([[0.0, 0.0], [1.0, 0.0]])

    def psi(g):
        return g[0, 1] * Kp

    def deltaH(g):
        return np.eye(W) + N @ psi(g)

    def deltaK(g):
        return np.eye(W) + psi(g) @ N

    def omega(g, h):
        return psi(g @ h) - psi(g) - psi(h) - psi(g) @ N @ psi(h)

    ruth = Ruth(
        chart,
        W,
        W,
        N,
        SmoothMap(1, (W, W), deltaH, "deltaH"),
        SmoothMap(1, (W, W), deltaK, "deltaK"),
        SmoothMap(2, (W, W), omega, "omega"),
    )
    y = np.array([0.8, -0.4])

    def Z(g):
        return -psi(g) @ y

    return ruth, y, Z
