"""Graph monoids of adaptable separated graphs.

Build and check separated graphs, decide equalities in their monoids within
explicit bounds, construct the auxiliary cover satisfying condition (F), its
crowned chain and building blocks, and verify the pullback and pushout
descriptions together with Grothendieck group computations.
"""

from .blocks import (
    PullbackData,
    PullbackReport,
    building_blocks,
    eligible_pairs,
    family_FJ,
    graph_of_choice,
    pullback_data,
    verify_pullback_bounded,
)
from .cover import (
    CoverMap,
    CrownedChain,
    build_auxiliary,
    build_crowned_chain,
    induced_monoid_hom,
    validate_cover,
)
from .errors import SepMonError
from .graph import (
    Edge,
    SeparatedGraph,
    build_separated_graph,
    check_condition_F,
    classify_adaptable,
    condensation,
    find_isomorphism,
    graph_from_json,
    hereditary_saturated_subsets,
    is_forest,
    load_graph,
    lower_subsets,
    parse_graph,
    quotient,
    reduced_graph,
    restrict,
    strict_tree,
    tree,
)
from .ktheory import (
    FgAbelianGroup,
    check_kernel_cyclic_lemma,
    grothendieck_group,
    hermite_normal_form,
    induced_group_hom,
    kernel,
    smith_normal_form,
)
from .monoid import (
    Bounds,
    MonoidElement,
    Status,
    check_refinement,
    check_separativity_bounded,
    enumerate_classes,
    equal,
    hom_is_well_defined,
    is_prime_bounded,
    leq,
    parse_element,
    refinement_sweep,
)
from .pushout import (
    CrownedPair,
    PushoutPresentation,
    crowned_pair,
    crowned_pushout,
    validate_crowned_pair,
    verify_pushout_is_target,
)

__version__ = "0.1.0"
