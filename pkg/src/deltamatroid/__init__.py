"""Delta-matroid toolkit: exact enumeration, constructions, and encodings.

A delta-matroid is a nonempty family of subsets of a finite ground set
satisfying the symmetric exchange axiom.  This package represents set
systems as feasibility bitvectors, enumerates all labelled delta-matroids
level by level, builds large families from hypercube stable sets and cuts,
and compresses even families with container-style encodings that yield
matching upper bounds.
"""

from .setsystem import (
    MAX_GROUND_SIZE,
    ExchangeWitness,
    ImproperSystemError,
    Matroid,
    MinorKind,
    SetSystem,
    SystemFormatError,
    check_symmetric_exchange,
    compose,
    dual,
    dumps_system,
    elements_of,
    full_power_set,
    is_delta_matroid,
    is_even,
    is_matroid,
    iter_bits,
    load_system,
    loads_system,
    mask_of,
    min_feasible_matroid,
    minor,
    popcount,
    save_system,
    system_from_dict,
    system_to_dict,
    twist,
)
from .levels import (
    MAX_COUNTED_LEVEL,
    MAX_LISTED_LEVEL,
    CacheFormatError,
    CacheInvariantError,
    CountReport,
    LevelCache,
    ResourceLimitError,
    antipodal_systems,
    build_levels,
    count_even,
    count_even_split,
    count_next_level_via_classes,
    count_report,
    enumerate_level,
    fast_delta_matroid_check,
    gamma_value,
    twist_permutation_classes,
)
from .constructions import (
    ComplementMode,
    ConstructionError,
    DegreeViolationError,
    LayerError,
    SparsePavingSpec,
    StabilityViolationError,
    VertexSet,
    complement_delta_matroid,
    cut_bound_certifies,
    cut_count_lower_bound,
    cut_count_lower_bound_exact,
    even_lower_bound,
    evens_plus_all_odds,
    graham_sloane_stable_set,
    hypercube_neighbors,
    qn_degree,
    random_residue_stable_subset,
    random_stable_set,
    random_stacked_layers,
    sample_cut_construction,
    sample_cut_vertices,
    sparse_paving_matroid,
    stacked_even_delta_matroid,
    uniform_matroid,
)
from .encoding import (
    BoundReport,
    EncodingError,
    EncodingRecord,
    InconsistentPrefixError,
    KWResult,
    KWStep,
    Parity,
    Partition,
    RegularGraph,
    bell_number,
    component_alpha,
    component_sigma,
    cover_certifies,
    cube_adjacency_matrix,
    decode_even_system,
    distance_two_matrix_identity,
    dumps_record,
    eigenvalue_gap,
    encode_even_system,
    halved_cube,
    halved_cube_spectrum,
    kw_encode,
    kw_reconstruct,
    load_record,
    loads_record,
    local_cover,
    reconstruct_system,
    s_length_bound,
    single_block_partition,
    save_record,
    smallest_eigenvalue,
    upper_bound_report,
)

__version__ = "0.1.0"
