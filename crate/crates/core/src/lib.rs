//! Finite circular orders and the machinery around them: convex subsets,
//! order-compatible maps, split points, covers and completions, inverse
//! limits, cyclic bounded variation, selection principles, tameness checks,
//! and exact rotation orbits.

pub mod completion;
pub mod convex;
pub mod maps;
pub mod order;
pub mod split;
pub mod sturmian;
pub mod suites;
pub mod variation;

pub use completion::{
    act_on_quotient_system, build_quotient, build_quotient_system, insert_arc_midpoints,
    insert_gap_midpoints_linear, inverse_limit_threads, novak_bracket, star_cover,
    star_cover_linear, star_refine, star_refine_linear, ChainCover, CompletionError, CycleCover,
    InverseLimit, NovakWitness, QuotientSystem, RegularCutTriple,
};
pub use convex::{
    intersect_intervals, is_convex, three_convex_position, ConvexError, ConvexSet,
    IntersectionCase, IntervalIntersection, ThreePosition,
};
pub use maps::{
    circularize_lop, compose, cop1_suffices, enumerate_circular_maps, is_pointwise_limit_closed,
    minimal_determining_set, preimage_convex, validate_cop_via_cycles, CopReport, CopViolation,
    CycleEnumeration, Host, MapError, MapFamily, OrderMap, Validated,
};
pub use split::{
    induce_action_on_split, lex_product_circular, single_split, split_subset,
    split_subset_linear, verify_lex_clauses, verify_split_order_rules, verify_split_uniqueness,
    LexProduct, LinearSplit, SingleSplit, SplitError, SplitLabel, SplitSign, SplitSpace,
};
pub use sturmian::{
    arc_contains, code_word, compare_orbit, compare_orbit_budgeted, orbit_cycle, rotation_action,
    sturmian_code, ArcEndpoint, IrrationalAngle, OrbitCycle, OrbitPoint, SturmianError,
};
pub use suites::{run_all, run_suite, SweepOutcome, SUITES};
pub use variation::{
    bv_family_tame_check, helly_select, independence_depth, jordan_decompose,
    lift_variation_bounds, lift_variation_bounds_metric, oscillation_decompose,
    split_circular_function, variation_circular, variation_circular_metric, variation_linear,
    variation_linear_metric, FunctionSequence, LiftBounds, MetricSampledFunction,
    RationalMetricSpace, SampledFunction, TameConfig, VariationError, VariationReport,
};
pub use order::{
    circ_from_linear, classify_cut, is_cycle, verify_circular_axioms, witness_violates, Axiom,
    AxiomReport, AxiomViolation, Cut, CutClass, FiniteCircularOrder, FiniteLinearOrder,
    OrderError, TernaryRelationTable,
};
