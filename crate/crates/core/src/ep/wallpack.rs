use crate::error::{Error, Result};
use crate::generators::{disjoint_subwalls, SubwallTiling};
use crate::immersion::{find_expansion, Budget, ImmersionModel, Mode};
use crate::multigraph::Multigraph;

/// Copies of one model of `H`, each inside its own tile of a big wall.
#[derive(Debug, Clone)]
pub struct WallPackingWitness {
    pub tiling: SubwallTiling,
    pub models: Vec<ImmersionModel>,
}

/// Finds `h` in `wall(height)` and replicates the model into every tile of
/// [`disjoint_subwalls`]`(height, k)`, giving at least `k+1` disjoint models.
pub fn wall_packing_witness(h: &Multigraph, height: u32, k: u32, mode: Mode, budget: Budget) -> Result<WallPackingWitness> {
    let tiling = disjoint_subwalls(height, k)?;
    let model = find_expansion(&tiling.small.graph, h, mode, budget)?
        .ok_or_else(|| Error::Infeasible(format!("pattern is not contained in wall({height})")))?;
    let models = tiling
        .tiles
        .iter()
        .map(|emb| model.translate(emb).expect("tiles cover the whole small wall"))
        .collect();
    Ok(WallPackingWitness { tiling, models })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cycle_graph;
    use crate::immersion::{pairwise_disjoint, validate_model, Disjointness};

    #[test]
    fn triangles_in_tiles() {
        let tri = cycle_graph(3).unwrap();
        let w = wall_packing_witness(&tri, 3, 2, Mode::Immersion, Budget::UNLIMITED).unwrap();
        assert!(w.models.len() >= 3);
        for m in &w.models {
            assert!(validate_model(&w.tiling.big.graph, &tri, m).unwrap().is_valid());
        }
        assert!(pairwise_disjoint(&w.models, Disjointness::Vertex));
    }
}
