//! Immersion, strong-immersion and topological-minor models: validation,
//! exhaustive search, and brute-force packing and covering.

mod grid_model;
mod host;
mod model;
mod packing;
mod search;

pub use grid_model::{grid_in_wallplus, grid_in_wallplus_full, GridInWall};
pub use host::HostGraph;
pub use model::{
    components_met, pairwise_disjoint, validate_model, CertifyingPath, Disjointness, Expansion, ImmersionModel, Mode,
    ValidityReport, Violation,
};
pub use packing::{
    count_family, expansion_family, family_in, max_count_packing, max_packing, max_set_packing, min_count_cover,
    min_cover, min_hitting_set, CountFamily, CoverSet, Family, Packing,
};
pub use search::{
    contains, find_expansion, find_in, search, search_expansion, Budget, Pattern, SearchOptions, SearchOutcome,
    SearchStatus,
};
