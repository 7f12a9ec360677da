//! The sparse preparation pipeline: parameter selection, Phase 1, Phase 2 and
//! the end-to-end [`synthesize`].

mod phase1;
mod phase2;
mod plan;
mod spec;
mod synth;

pub use phase1::{build_c1, build_c2, build_index_to_unary_k, phase1, Phase1Layout, StageSpan};
pub use phase2::phase2;
pub use plan::{
    candidate_plans, depth_model, effective_budget, feasibility_floor, m_min, partition, reference_bounds, select_parameters,
    DenseChoice, Ledger, Route, SynthesisOptions, SynthesisPlan, C_CAP, MAX_ARITY,
};
pub use spec::{validate_spec, SparseStateSpec};
pub use synth::{build, synthesize, StageMetrics, Synthesis};
