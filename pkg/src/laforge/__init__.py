"""Numerical construction and verification of LA-groups at desk scale.

The package realizes the equivalence between vector-bundle groupoids over a
Lie group and representations up to homotopy, extends it to the full
Lie-algebroid structure through actions up to homotopy and matched pairs,
and turns every axiom, morphism condition and derived structure into a
testable residual over finite-dimensional data.
"""

from .numkit import (
    DEFAULT_FD_STEP,
    DEFAULT_TOL,
    InvalidInputError,
    SubspaceBasis,
    central_diff,
    mat_exp,
    svd_subspaces,
)
from .liecore import (
    Butterfly,
    CrossedModule,
    JacobiError,
    LieAlgebra,
    ce_quasi_diff,
    check_butterfly,
    check_crossed_module,
    check_lie_algebra,
    semidirect_twisted,
)
from .groupmodel import (
    CHARTS,
    GroupChart,
    GroupSampler,
    SmoothMap,
    group_quasi_diff,
    right_directional_derivative,
    sample_elements,
    tangent_group_mult,
    vector_field_bracket,
)
from .ruth import (
    Ruth,
    VbArrow,
    check_ruth,
    groupoid_axiom_suite,
    induced_actions,
    isotropy_check,
    orbit_membership,
    vb_structure,
)
from .auth import Auth, TrivialAlgebroid, build_extension, check_auth, extract_auth
from .matched import (
    LaGroup,
    MatchedPair,
    assemble_la_group,
    check_matched_pair,
    derive_core_bracket,
    derive_ell,
    derived_structures,
    extract_matched_pair,
    isotropy_algebra,
    verify_morphisms,
)
from .catalog import ExampleSpec, build_example, build_twisted_ruth, list_examples, mutate

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
