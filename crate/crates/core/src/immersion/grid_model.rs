use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::generators::{grid, wall_plus, Wall, WallCoordinates};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

use super::model::{CertifyingPath, ImmersionModel, Mode};

/// A grid hosted in an enriched wall by an explicit strong-immersion model.
#[derive(Debug, Clone)]
pub struct GridInWall {
    pub grid: Multigraph,
    pub grid_coords: WallCoordinates,
    pub host: Wall,
    pub model: ImmersionModel,
}

impl GridInWall {
    /// Wall coordinates of the branch vertices.
    pub fn branch_positions(&self) -> BTreeSet<(u32, u32)> {
        self.model
            .phi
            .values()
            .map(|&v| self.host.coords.position(v).expect("wall vertex"))
            .collect()
    }
}

/// The `(rows × cols)`-grid on wall positions `(i, 2j+1)`, routed along rows and
/// through the doubled edges of the vertical paths.
fn build(k: u32, rows: u32, cols: u32) -> Result<GridInWall> {
    let host = wall_plus(k)?;
    let (g, gc) = grid(rows, cols)?;
    let at = |x: u32, y: u32| {
        host.vertex_at(x, y)
            .ok_or_else(|| Error::BadSize(format!("wall position ({x},{y}) does not exist in W+_{k}")))
    };
    let mut phi = BTreeMap::new();
    for (v, (x, y)) in gc.iter() {
        phi.insert(v, at(x, 2 * y - 1)?);
    }

    let mut taken: HashMap<(VertexId, VertexId), u32> = HashMap::new();
    let mut hop = |a: VertexId, b: VertexId| -> EdgeRef {
        let key = if a < b { (a, b) } else { (b, a) };
        let copy = taken.entry(key).or_insert(0);
        *copy += 1;
        EdgeRef::new(a, b, *copy)
    };
    let mut route = |points: &[(u32, u32)]| -> Result<Vec<EdgeRef>> {
        let vs: Vec<VertexId> = points.iter().map(|&(x, y)| at(x, y)).collect::<Result<_>>()?;
        Ok(vs.windows(2).map(|w| hop(w[0], w[1])).collect())
    };

    let mut psi = Vec::new();
    for x in 1..=rows {
        for y in 1..cols {
            let c = 2 * y - 1;
            let pe = EdgeRef::new(gc.vertex_at(x, y).unwrap(), gc.vertex_at(x, y + 1).unwrap(), 1);
            let edges = route(&[(x, c), (x, c + 1), (x, c + 2)])?;
            psi.push(oriented(pe, &phi, edges));
        }
    }
    for x in 1..rows {
        for y in 1..=cols {
            let c = 2 * y - 1;
            let pe = EdgeRef::new(gc.vertex_at(x, y).unwrap(), gc.vertex_at(x + 1, y).unwrap(), 1);
            // Column c carries a vertical edge below odd rows only.
            let edges = if x % 2 == 1 {
                route(&[(x, c), (x + 1, c)])?
            } else {
                route(&[(x, c), (x, c + 1), (x + 1, c + 1), (x + 1, c)])?
            };
            psi.push(oriented(pe, &phi, edges));
        }
    }
    Ok(GridInWall {
        grid: g,
        grid_coords: gc,
        host,
        model: ImmersionModel {
            mode: Mode::StrongImmersion,
            phi,
            psi,
        },
    })
}

/// Orients a path so it starts at `φ(pe.u)`.
fn oriented(pe: EdgeRef, phi: &BTreeMap<VertexId, VertexId>, mut edges: Vec<EdgeRef>) -> CertifyingPath {
    if !edges.first().is_some_and(|e| e.has_endpoint(phi[&pe.u])) {
        edges.reverse();
    }
    CertifyingPath {
        pattern_edge: pe,
        edges,
    }
}

/// Strong-immersion model of `Γ_k` in `W⁺_k` with branch vertices
/// `{(i, 2j+1) | 1 ≤ i ≤ k, 0 ≤ j ≤ k-1}`.
pub fn grid_in_wallplus(k: u32) -> Result<GridInWall> {
    if k < 2 {
        return Err(Error::BadSize(format!("grid model needs k >= 2, got {k}")));
    }
    build(k, k, k)
}

/// Model of `Γ_{k+1}` in `W⁺_k` on the full set `{(i, 2j+1) | 1 ≤ i ≤ k+1, 0 ≤ j ≤ k}`.
///
/// For even `k` the position `(k+1, 1)` is pruned from the wall and this fails
/// with [`Error::BadSize`].
pub fn grid_in_wallplus_full(k: u32) -> Result<GridInWall> {
    if k < 2 {
        return Err(Error::BadSize(format!("grid model needs k >= 2, got {k}")));
    }
    build(k, k + 1, k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::model::validate_model;

    #[test]
    fn grid_models_validate() {
        for k in 2..=6 {
            let gm = grid_in_wallplus(k).unwrap();
            let rep = validate_model(&gm.host.graph, &gm.grid, &gm.model).unwrap();
            assert!(rep.is_valid(), "k={k}: {rep:?}");
            let expected: BTreeSet<_> = (1..=k).flat_map(|i| (0..k).map(move |j| (i, 2 * j + 1))).collect();
            assert_eq!(gm.branch_positions(), expected);
        }
    }

    #[test]
    fn full_branch_set_depends_on_parity() {
        for k in 2..=6 {
            let full = grid_in_wallplus_full(k);
            if k % 2 == 0 {
                assert!(matches!(full, Err(Error::BadSize(_))));
            } else {
                let gm = full.unwrap();
                assert!(validate_model(&gm.host.graph, &gm.grid, &gm.model).unwrap().is_valid());
                assert_eq!(gm.branch_positions().len() as u32, (k + 1) * (k + 1));
            }
        }
    }

    #[test]
    fn restriction_to_subgrid_stays_valid() {
        let gm = grid_in_wallplus(3).unwrap();
        let mut sub = gm.grid.clone();
        let e = sub.edge_refs().next().unwrap();
        sub.remove_edge(e).unwrap();
        let r = gm.model.restrict(&sub);
        assert!(validate_model(&gm.host.graph, &sub, &r).unwrap().is_valid());
    }
}
