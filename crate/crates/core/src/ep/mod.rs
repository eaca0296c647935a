//! Packing/covering certification: gap functions, the tree-cut to
//! tree-partition pipeline, the cover algorithm and its pullback.

mod certify;
mod cover;
mod gap;
mod pipeline;
mod wallpack;

pub use certify::{
    ep_edge_certify, ep_vertex_report, CertifyOptions, Check, CheckOutcome, ComponentReport, DecompositionSource,
    EPReport, GraphSummary, Hypothesis, ReportKind, REPORT_SCHEMA_VERSION,
};
pub use cover::{
    cover_from_partition, cover_from_partition_with, model_to_star, pullback_cover, pullback_star_cover, BagRule,
    CoverResult, CoverRound,
};
pub use gap::{edge_cover_factor, omega, omega_edges, partition_width_bound, sigma};
pub use pipeline::{tc_to_tp_pipeline, PipelineMappings, PipelineOutput};
pub use wallpack::{wall_packing_witness, WallPackingWitness};
