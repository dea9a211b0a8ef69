"""Exact observables and spectral resolutions on k-perfect MV/effect algebras."""

from .lexalg import (
    AlgebraError,
    AlgebraSignature,
    Comparison,
    LexElement,
    format_element,
    group_add,
    group_sub,
    height_class,
    in_unit_interval,
    join,
    lex_cmp,
    meet,
    mv_neg,
    mv_odot,
    mv_oplus,
    parse_element,
    partial_add,
    sum_finite,
)
from .boxgeom import (
    Box,
    GeometryError,
    Interval,
    NEG_INF,
    POS_INF,
    Region,
    complement,
    difference,
    format_region,
    halfopen_box,
    intersect,
    lower_orthant,
    parse_region,
    region_equal,
    union,
)
from .observable import (
    Atom,
    DiscreteObservable,
    ObservableError,
    make_observable,
    observable_from_doc,
    observable_from_json,
    observable_to_doc,
    observable_to_json,
)
from .spectral import (
    AxiomReport,
    ResolutionError,
    StepResolution,
    additive_extension,
    check_axioms,
    eval_F,
    from_cells,
    from_observable,
    partial_delta,
    point_mass_via_deltas,
    resolution_from_doc,
    resolution_from_json,
    resolution_to_doc,
    resolution_to_json,
    volume,
)
from .charpoints import (
    Block,
    BlockReport,
    BoundsCheck,
    CharPointError,
    LevelDecomposition,
    MismatchReport,
    NotReconstructibleError,
    PathologicalResolutionError,
    all_blocks,
    block_cube_check,
    block_infimum,
    blocks,
    bounds_check,
    char_point,
    level_regions,
    max_antichain,
    projection,
    rays_check,
    reconstruct,
    t0_adjoined,
)
from .verify import (
    SplitMix64,
    SuiteSummary,
    TrialConfig,
    mismatch_resolution,
    pathological_family,
    random_observable,
    run_suite,
    saturating_family,
    trial_rng,
)

__version__ = "0.1.0"
