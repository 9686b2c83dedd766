"""Finite translation groupoids: Morita equivalence, principal bibundles,
generalized paths and equivariant LS category, modelled on finite posets."""

from .actions import (
    FixedSet,
    GSpace,
    OrbitSpace,
    TranslationGroupoid,
    action_from_generators,
    fixed_points,
    half_turn_circle_v4,
    isotropy,
    make_gspace,
    orbit,
    orbit_space,
    reflection_circle,
    rotation_circle,
    rotation_cone,
    swap_pair,
    trivial_action,
)
from .category import (
    CategoryResult,
    CompressionWitness,
    InvariantOpen,
    are_G_homotopic,
    cat_G,
    cat_grd,
    cat_orb,
    invariant_opens,
    is_G_categorical,
)
from .errors import InputError, InvariantViolation, OrbicatError
from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    check_homomorphism,
    cyclic_group,
    dihedral_group,
    direct_product,
    permutation_group,
    quotient_group,
    subgroups,
    trivial_group,
    validate_group,
)
from .hilsum_skandalis import (
    Bibundle,
    GMapResult,
    PrincipalityCertificate,
    bibundle_isomorphic,
    check_bibundle,
    check_principal,
    find_global_section,
    find_natural_conjugacy,
    generalized_from_hs,
    hs_compose,
    hs_from_equivariant,
    hs_from_generalized,
    hs_inverse_of_equivalence,
    identity_bibundle,
    spans_equivalent,
    strictify,
)
from .maps import (
    EquivariantMap,
    NaturalTransformation,
    check_equivariant,
    check_natural_transformation,
    compose,
    identity_map,
)
from .morita import (
    GeneralizedMap,
    MoritaCertificate,
    build_induction_equivalence,
    build_quotient_equivalence,
    check_essential_equivalence,
    check_morita_span,
    make_generalized_map,
    pronk_factorize,
    search_morita,
)
from .paths import (
    Fence,
    GeneralizedPath,
    concatenate,
    generalized_path,
    is_G_connected,
    is_groupoid_connected,
    lift_quotient_fence,
    make_path,
    paths_equivalent,
    validate_generalized_path,
)
from .posets import Poset, chain_poset, circle_poset, cone_poset, discrete_poset, poset_from_relations
from .workspace import Workspace, load_workspace, parse_workspace, serialize_workspace

__version__ = "0.1.0"

__all__ = [
    "Bibundle",
    "CategoryResult",
    "CompressionWitness",
    "EquivariantMap",
    "Fence",
    "FiniteGroup",
    "FixedSet",
    "GMapResult",
    "GSpace",
    "GeneralizedMap",
    "GeneralizedPath",
    "Homomorphism",
    "InputError",
    "InvariantOpen",
    "InvariantViolation",
    "MoritaCertificate",
    "NaturalTransformation",
    "OrbicatError",
    "OrbitSpace",
    "Poset",
    "PrincipalityCertificate",
    "Subgroup",
    "TranslationGroupoid",
    "Workspace",
    "action_from_generators",
    "are_G_homotopic",
    "bibundle_isomorphic",
    "build_induction_equivalence",
    "build_quotient_equivalence",
    "cat_G",
    "cat_grd",
    "cat_orb",
    "chain_poset",
    "check_bibundle",
    "check_equivariant",
    "check_essential_equivalence",
    "check_homomorphism",
    "check_morita_span",
    "check_natural_transformation",
    "check_principal",
    "circle_poset",
    "compose",
    "concatenate",
    "cone_poset",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "discrete_poset",
    "find_global_section",
    "find_natural_conjugacy",
    "fixed_points",
    "generalized_from_hs",
    "generalized_path",
    "half_turn_circle_v4",
    "hs_compose",
    "hs_from_equivariant",
    "hs_from_generalized",
    "hs_inverse_of_equivalence",
    "identity_bibundle",
    "identity_map",
    "invariant_opens",
    "is_G_categorical",
    "is_G_connected",
    "is_groupoid_connected",
    "isotropy",
    "lift_quotient_fence",
    "load_workspace",
    "make_generalized_map",
    "make_gspace",
    "make_path",
    "orbit",
    "orbit_space",
    "parse_workspace",
    "paths_equivalent",
    "permutation_group",
    "poset_from_relations",
    "pronk_factorize",
    "quotient_group",
    "reflection_circle",
    "rotation_circle",
    "rotation_cone",
    "search_morita",
    "serialize_workspace",
    "spans_equivalent",
    "strictify",
    "subgroups",
    "swap_pair",
    "trivial_action",
    "trivial_group",
    "validate_generalized_path",
    "validate_group",
]
