use crate::multigraph::Multigraph;

/// `ω_H(r) = ⌈r·(3r+1)/2·|E(H)|⌉` for a pattern with `edges` edge instances.
pub fn omega_edges(edges: u64, r: u64) -> u64 {
    (r * (3 * r + 1) * edges).div_ceil(2)
}

pub fn omega(h: &Multigraph, r: u64) -> u64 {
    omega_edges(h.edge_count() as u64, r)
}

/// `σ(r) = ⌈(3(r+1)⁴ + 2(r+1)²)/8⌉`.
pub fn sigma(r: u64) -> u64 {
    let s = (r + 1) * (r + 1);
    (3 * s * s + 2 * s).div_ceil(8)
}

/// The tree-partition width guaranteed by the pipeline for input width `w`,
/// rounded down: `⌊(w+1)²/2⌋`.
pub fn partition_width_bound(w: u64) -> u64 {
    (w + 1) * (w + 1) / 2
}

/// `σ(w)·(4|V(H)| + |E(H)|)`, the per-witness cover bound for tree-cut width `w`.
pub fn edge_cover_factor(h: &Multigraph, w: u64) -> u64 {
    sigma(w) * (4 * h.vertex_count() as u64 + h.edge_count() as u64)
}
