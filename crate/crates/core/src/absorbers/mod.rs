//! Absorbers, template graphs and absorbing sets.

mod absorbing;
mod pipeline;
mod simple;
mod template;

pub use absorbing::{
    absorb, build_absorbing_set, rooted_family, AbsorberKind, AbsorbingConfig, AbsorbingConstants, AbsorbingOutcome,
    AbsorbingSet, AbsorbingStage, AbsorbingTrace, FamilySource, PlacedAbsorber, StageFailure, TemplateChoice,
};
pub use pipeline::{run_pipeline, PipelineTrace};
pub use simple::{
    choose_root, find_simple_absorber, is_absorber, is_simple_absorber, simple_absorber_labelling,
    simple_absorber_tilings, AbsorberStructure, SimpleSearchOptions,
};
pub use template::{
    beta_m, template_search, template_verify, TemplateGraph, TemplateSearch, TEMPLATE_MAX_DEGREE, TEMPLATE_MAX_M,
    TEMPLATE_MAX_SUBSETS,
};
