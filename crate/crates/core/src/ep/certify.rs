use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::decomposition::{
    exact_tcw_small, exact_treewidth_small, heuristic_tcd, validate_tcd, ExactConfig, RootedTreeCutDecomposition,
    DEFAULT_TREEWIDTH_CAP, DEFAULT_WIDTH_CAP,
};
use crate::error::{Error, Result};
use crate::generators::plus_graph;
use crate::immersion::{
    find_in, max_packing, min_cover, pairwise_disjoint, search_expansion, validate_model, Budget, CoverSet,
    Disjointness, HostGraph, ImmersionModel, Mode, Pattern, SearchOutcome,
};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

use super::cover::{cover_from_partition_with, model_to_star, pullback_star_cover, BagRule};
use super::gap::{edge_cover_factor, omega, partition_width_bound, sigma};
use super::pipeline::{tc_to_tp_pipeline, PipelineMappings};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckOutcome {
    Pass,
    Fail,
    Skipped,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: CheckOutcome,
    pub detail: String,
}

impl Check {
    fn new(name: &str, outcome: CheckOutcome, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome,
            detail: detail.into(),
        }
    }

    fn boolean(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, if ok { CheckOutcome::Pass } else { CheckOutcome::Fail }, detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

impl GraphSummary {
    fn of(g: &Multigraph) -> Self {
        GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub subcubic: bool,
    pub planar_asserted: bool,
    /// Both of the above; otherwise the run is in unchecked-hypothesis mode.
    pub checked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionSource {
    Supplied,
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Edge,
    Vertex,
}

/// Per-component figures of an edge certification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub vertices: Vec<VertexId>,
    pub source: DecompositionSource,
    pub tree_cut_width: usize,
    pub partition_width: usize,
    pub partition_bound: u64,
    pub omega: u64,
    pub sigma: u64,
    pub rounds: usize,
    pub max_round_removal: usize,
    pub subdivided_cover: usize,
    pub star_cover: usize,
    pub minimized_star_cover: usize,
    pub cover: usize,
    pub packing: usize,
    pub adhesions_preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EPReport {
    pub schema_version: u32,
    pub instance: String,
    pub kind: ReportKind,
    pub host: GraphSummary,
    pub pattern: GraphSummary,
    pub hypothesis: Hypothesis,
    pub tree_cut_width: Option<usize>,
    pub partition_width: Option<usize>,
    pub treewidth: Option<usize>,
    pub omega: Option<u64>,
    pub sigma: Option<u64>,
    pub packing: Vec<ImmersionModel>,
    pub cover: CoverSet,
    pub oracle_packing: Option<usize>,
    pub oracle_cover: Option<usize>,
    pub components: Vec<ComponentReport>,
    pub checks: Vec<Check>,
    pub budget_exhausted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl EPReport {
    fn empty(instance: &str, kind: ReportKind, g: &Multigraph, h: &Multigraph, hypothesis: Hypothesis) -> Self {
        EPReport {
            schema_version: REPORT_SCHEMA_VERSION,
            instance: instance.into(),
            kind,
            host: GraphSummary::of(g),
            pattern: GraphSummary::of(h),
            hypothesis,
            tree_cut_width: None,
            partition_width: None,
            treewidth: None,
            omega: None,
            sigma: None,
            packing: Vec::new(),
            cover: match kind {
                ReportKind::Edge => CoverSet::Edges(Vec::new()),
                ReportKind::Vertex => CoverSet::Vertices(Vec::new()),
            },
            oracle_packing: None,
            oracle_cover: None,
            components: Vec::new(),
            checks: Vec::new(),
            budget_exhausted: false,
            generated_unix: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.outcome == CheckOutcome::Fail)
    }

    /// No check failed and none ran out of budget.
    pub fn verified(&self) -> bool {
        self.checks
            .iter()
            .all(|c| matches!(c.outcome, CheckOutcome::Pass | CheckOutcome::Skipped))
    }

    /// 0 when verified, 1 on a failed check, 2 when only budgets were exhausted.
    pub fn exit_code(&self) -> i32 {
        if self.failures().next().is_some() {
            1
        } else if self.budget_exhausted {
            2
        } else {
            0
        }
    }

    fn push(&mut self, c: Check) {
        if c.outcome == CheckOutcome::BudgetExhausted {
            self.budget_exhausted = true;
        }
        self.checks.push(c);
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub instance: String,
    /// Tree-cut decomposition of the whole host graph.
    pub decomposition: Option<RootedTreeCutDecomposition>,
    pub budget: Budget,
    pub planar: bool,
    /// Run the exponential packing/cover oracles.
    pub oracles: bool,
    pub oracle_budget: Budget,
    pub exact_cap: usize,
    pub bag_rule: BagRule,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            instance: String::new(),
            decomposition: None,
            budget: Budget::UNLIMITED,
            planar: false,
            oracles: false,
            oracle_budget: Budget::nodes(2_000_000),
            exact_cap: DEFAULT_WIDTH_CAP,
            bag_rule: BagRule::default(),
        }
    }
}

fn hypothesis(h: &Multigraph, planar: bool) -> Hypothesis {
    let subcubic = h.max_mdeg() <= 3;
    Hypothesis {
        subcubic,
        planar_asserted: planar,
        checked: subcubic && planar,
    }
}

fn component_decomposition(
    gc: &Multigraph,
    opts: &CertifyOptions,
) -> Result<(RootedTreeCutDecomposition, DecompositionSource)> {
    if let Some(d) = &opts.decomposition {
        let restricted = RootedTreeCutDecomposition {
            parent: d.parent.clone(),
            bags: d
                .bags
                .iter()
                .map(|b| b.iter().copied().filter(|&v| gc.contains_vertex(v)).collect())
                .collect(),
        };
        return Ok((restricted.without_empty_leaves(), DecompositionSource::Supplied));
    }
    let cfg = ExactConfig {
        cap: opts.exact_cap,
        budget: opts.budget,
    };
    match exact_tcw_small(gc, cfg) {
        Ok((_, d)) => Ok((d, DecompositionSource::Exact)),
        Err(Error::TooLarge { .. } | Error::BudgetExhausted(_)) => Ok((heuristic_tcd(gc), DecompositionSource::Heuristic)),
        Err(e) => Err(e),
    }
}

/// Drops zone edges from a cover of `G*` while it stays a cover.
fn minimize_star_cover(
    star: &Multigraph,
    maps: &PipelineMappings,
    hp: &Pattern,
    cover: Vec<EdgeRef>,
    budget: Budget,
) -> (Vec<EdgeRef>, bool) {
    let host = HostGraph::new(star);
    let all = host.all_vertices();
    let mut keep: BTreeSet<EdgeRef> = cover.iter().copied().collect();
    let mut exhausted = false;
    for e in cover {
        if maps.zones.is_original_edge(&e) {
            continue;
        }
        keep.remove(&e);
        let mut alive = host.all_edges();
        alive.difference_with(&host.edge_ids(&keep).expect("star edges"));
        match find_in(&host, &alive, &all, hp, Mode::Immersion, budget) {
            SearchOutcome::NoneExists => {}
            SearchOutcome::Found(_) => {
                keep.insert(e);
            }
            SearchOutcome::BudgetExhausted => {
                exhausted = true;
                keep.insert(e);
            }
        }
    }
    (keep.into_iter().collect(), exhausted)
}

fn outcome_of(o: &SearchOutcome) -> CheckOutcome {
    match o {
        SearchOutcome::NoneExists => CheckOutcome::Pass,
        SearchOutcome::Found(_) => CheckOutcome::Fail,
        SearchOutcome::BudgetExhausted => CheckOutcome::BudgetExhausted,
    }
}

/// Edge certification: pipeline, cover algorithm on `H⁺`, pullback to `G`,
/// and the inequality checks.
pub fn ep_edge_certify(g: &Multigraph, h: &Multigraph, opts: &CertifyOptions) -> Result<EPReport> {
    Pattern::new(h)?;
    let (hp, _) = plus_graph(h);
    let hp_pat = Pattern::new(&hp)?;
    if let Some(d) = &opts.decomposition {
        validate_tcd(g, d)?;
    }
    let mut report = EPReport::empty(&opts.instance, ReportKind::Edge, g, h, hypothesis(h, opts.planar));
    report.push(if report.hypothesis.checked {
        Check::new("pattern-hypothesis", CheckOutcome::Pass, "subcubic and asserted planar")
    } else {
        Check::new(
            "pattern-hypothesis",
            CheckOutcome::Skipped,
            format!(
                "unchecked hypothesis: subcubic={}, planar asserted={}",
                report.hypothesis.subcubic, report.hypothesis.planar_asserted
            ),
        )
    });

    let factor_w = |w: usize| edge_cover_factor(h, w as u64);
    let mut cover: BTreeSet<EdgeRef> = BTreeSet::new();
    let mut sigma_ok = true;
    let mut sigma_detail = Vec::new();
    let mut star_minimization_exhausted = false;
    for comp in g.connected_components() {
        let keep: HashSet<VertexId> = comp.iter().copied().collect();
        let gc = g.induced_subgraph(&keep);
        if gc.edge_count() == 0 {
            continue;
        }
        let (d, source) = component_decomposition(&gc, opts)?;
        let out = tc_to_tp_pipeline(&gc, &d)?;
        let w = out.input_width;
        let res = match cover_from_partition_with(&out.graph, &hp, &out.partition, opts.budget, opts.bag_rule) {
            Ok(r) => r,
            Err(Error::BudgetExhausted(n)) => {
                report.push(Check::new(
                    "cover-algorithm",
                    CheckOutcome::BudgetExhausted,
                    format!("an inner search exceeded {n} nodes; no claims are made"),
                ));
                report.packing.clear();
                report.components.clear();
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        let star_cover = out.maps.to_star(&res.cover)?;
        let (minimized, exhausted) = minimize_star_cover(&out.star, &out.maps, &hp_pat, star_cover.clone(), opts.budget);
        star_minimization_exhausted |= exhausted;
        let pulled = pullback_star_cover(&minimized, &out.maps, &gc)?;

        let mut packing = Vec::new();
        for m in &res.packing {
            packing.push(model_to_star(m, &out.maps)?.restrict(h));
        }

        let bound = factor_w(w) * res.packing.len() as u64;
        if pulled.len() as u64 > bound {
            sigma_ok = false;
        }
        sigma_detail.push(format!("{} <= {}", pulled.len(), bound));
        report.components.push(ComponentReport {
            vertices: comp.clone(),
            source,
            tree_cut_width: w,
            partition_width: out.partition_width,
            partition_bound: partition_width_bound(w as u64),
            omega: res.omega,
            sigma: sigma(w as u64),
            rounds: res.rounds.len(),
            max_round_removal: res.rounds.iter().map(|r| r.removed()).max().unwrap_or(0),
            subdivided_cover: res.cover.len(),
            star_cover: star_cover.len(),
            minimized_star_cover: minimized.len(),
            cover: pulled.len(),
            packing: packing.len(),
            adhesions_preserved: out.adhesions_before == out.adhesions_after,
        });
        cover.extend(pulled);
        report.packing.extend(packing);
    }

    let comps = &report.components;
    let w_max = comps.iter().map(|c| c.tree_cut_width).max();
    report.tree_cut_width = w_max;
    report.partition_width = comps.iter().map(|c| c.partition_width).max();
    report.sigma = w_max.map(|w| sigma(w as u64));
    report.omega = report.partition_width.map(|r| omega(&hp, r as u64));
    let cover: Vec<EdgeRef> = cover.into_iter().collect();
    report.cover = CoverSet::Edges(cover.clone());

    let checks = vec![
        Check::boolean(
            "partition-width-bound",
            comps.iter().all(|c| 2 * c.partition_width as u64 <= ((c.tree_cut_width + 1) * (c.tree_cut_width + 1)) as u64),
            comps.iter().map(|c| format!("tpw {} for tcw {}", c.partition_width, c.tree_cut_width)).collect::<Vec<_>>().join("; "),
        ),
        Check::boolean(
            "adhesions-preserved",
            comps.iter().all(|c| c.adhesions_preserved),
            "subdivision keeps every adhesion",
        ),
        Check::boolean(
            "round-removal-within-omega",
            comps.iter().all(|c| c.max_round_removal as u64 <= c.omega),
            comps.iter().map(|c| format!("{} <= {}", c.max_round_removal, c.omega)).collect::<Vec<_>>().join("; "),
        ),
        Check::boolean(
            "subdivided-cover-within-omega",
            comps.iter().all(|c| c.subdivided_cover as u64 <= c.omega * c.packing as u64),
            comps.iter().map(|c| format!("{} <= {}·{}", c.subdivided_cover, c.omega, c.packing)).collect::<Vec<_>>().join("; "),
        ),
        Check::boolean(
            "pullback-not-larger",
            comps.iter().all(|c| c.cover <= c.minimized_star_cover && c.minimized_star_cover <= c.subdivided_cover),
            comps.iter().map(|c| format!("{} <= {} <= {}", c.cover, c.minimized_star_cover, c.subdivided_cover)).collect::<Vec<_>>().join("; "),
        ),
    ];
    for c in checks {
        report.push(c);
    }
    if star_minimization_exhausted {
        report.push(Check::new(
            "star-cover-minimization",
            CheckOutcome::BudgetExhausted,
            "some zone edges were kept without a proof that they are needed",
        ));
    }

    let rest = g.without_edges(&cover)?;
    let verdict = search_expansion(&rest, h, Mode::Immersion, opts.budget)?;
    report.push(Check::new("cover-valid", outcome_of(&verdict), format!("{} edges removed", cover.len())));

    let mut packing_ok = pairwise_disjoint(&report.packing, Disjointness::Edge);
    for m in &report.packing {
        packing_ok &= validate_model(g, h, m)?.valid_as(Mode::Immersion);
    }
    report.push(Check::boolean("packing-valid", packing_ok, format!("{} models", report.packing.len())));
    report.push(Check::boolean("cover-within-sigma", sigma_ok, sigma_detail.join("; ")));

    if opts.oracles {
        run_edge_oracles(g, h, &hp, &mut report, opts.oracle_budget)?;
    } else {
        report.push(Check::new("oracles", CheckOutcome::Skipped, "not requested"));
    }
    Ok(report)
}

fn run_edge_oracles(g: &Multigraph, h: &Multigraph, hp: &Multigraph, report: &mut EPReport, budget: Budget) -> Result<()> {
    let pack = max_packing(g, h, Mode::Immersion, Disjointness::Edge, budget)?;
    let cover = match min_cover(g, h, Mode::Immersion, Disjointness::Edge, budget) {
        Ok(c) => Some(c.len()),
        Err(Error::BudgetExhausted(_)) => None,
        Err(e) => return Err(e),
    };
    report.oracle_packing = pack.exact.then_some(pack.len());
    report.oracle_cover = cover;
    let found = report.packing.len();
    report.push(match report.oracle_packing {
        Some(p) => Check::boolean("oracle-packing-dominates", found <= p, format!("{found} <= {p}")),
        None => Check::new("oracle-packing-dominates", CheckOutcome::BudgetExhausted, "packing oracle incomplete"),
    });
    report.push(match (report.oracle_packing, cover) {
        (Some(p), Some(c)) => Check::boolean("oracle-weak-duality", p <= c, format!("{p} <= {c}")),
        _ => Check::new("oracle-weak-duality", CheckOutcome::BudgetExhausted, "an oracle is incomplete"),
    });
    report.push(match cover {
        Some(c) => Check::boolean("oracle-cover-minimum", c <= report.cover.len(), format!("{c} <= {}", report.cover.len())),
        None => Check::new("oracle-cover-minimum", CheckOutcome::BudgetExhausted, "cover oracle incomplete"),
    });

    // Pattern-with-gadgets figures on G*, per the component reports.
    let (star, _) = crate::generators::star_graph(g);
    let star_pack = max_packing(&star, hp, Mode::Immersion, Disjointness::Edge, budget)?;
    report.push(match (star_pack.exact, report.oracle_packing) {
        (true, Some(p)) => Check::boolean(
            "plus-packing-below-packing",
            star_pack.len() <= p,
            format!("{} <= {p}", star_pack.len()),
        ),
        _ => Check::new("plus-packing-below-packing", CheckOutcome::BudgetExhausted, "oracle incomplete"),
    });
    let star_cover = match min_cover(&star, hp, Mode::Immersion, Disjointness::Edge, budget) {
        Ok(c) => Some(c.len()),
        Err(Error::BudgetExhausted(_)) => None,
        Err(e) => return Err(e),
    };
    report.push(match (cover, star_cover) {
        (Some(c), Some(s)) => Check::boolean("cover-below-plus-cover", c <= s, format!("{c} <= {s}")),
        _ => Check::new("cover-below-plus-cover", CheckOutcome::BudgetExhausted, "oracle incomplete"),
    });
    Ok(())
}

/// Vertex-disjoint packing and vertex cover by exhaustive search, with the
/// treewidth of the host when it is small enough.
pub fn ep_vertex_report(g: &Multigraph, h: &Multigraph, budget: Budget, instance: &str) -> Result<EPReport> {
    Pattern::new(h)?;
    let mut report = EPReport::empty(instance, ReportKind::Vertex, g, h, hypothesis(h, false));
    report.treewidth = match exact_treewidth_small(g, DEFAULT_TREEWIDTH_CAP) {
        Ok(t) => Some(t),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let pack = max_packing(g, h, Mode::Immersion, Disjointness::Vertex, budget)?;
    report.oracle_packing = pack.exact.then_some(pack.len());
    report.packing = pack.models;
    match min_cover(g, h, Mode::Immersion, Disjointness::Vertex, budget) {
        Ok(c) => {
            report.oracle_cover = Some(c.len());
            report.cover = c;
        }
        Err(Error::BudgetExhausted(_)) => {
            report.push(Check::new("cover-exact", CheckOutcome::BudgetExhausted, "cover oracle incomplete"));
        }
        Err(e) => return Err(e),
    }
    report.push(Check::boolean(
        "packing-valid",
        pairwise_disjoint(&report.packing, Disjointness::Vertex),
        format!("{} models", report.packing.len()),
    ));
    if report.oracle_cover.is_some() {
        let rest = report.cover.remove_from(g)?;
        let verdict = search_expansion(&rest, h, Mode::Immersion, budget)?;
        report.push(Check::new("cover-valid", outcome_of(&verdict), format!("{} vertices removed", report.cover.len())));
    }
    report.push(match (report.oracle_packing, report.oracle_cover) {
        (Some(p), Some(c)) => Check::boolean("weak-duality", p <= c, format!("{p} <= {c}")),
        _ => Check::new("weak-duality", CheckOutcome::BudgetExhausted, "an oracle is incomplete"),
    });
    Ok(report)
}

impl EPReport {
    /// Re-runs `cover-valid` against the current cover, replacing the old verdict.
    pub fn recheck_cover(&mut self, g: &Multigraph, h: &Multigraph, budget: Budget) -> Result<()> {
        let rest = self.cover.remove_from(g)?;
        let verdict = search_expansion(&rest, h, Mode::Immersion, budget)?;
        self.checks.retain(|c| c.name != "cover-valid");
        self.push(Check::new("cover-valid", outcome_of(&verdict), format!("{} elements removed", self.cover.len())));
        Ok(())
    }

    /// `cover / pack`, if the packing is non-empty.
    pub fn ratio(&self) -> Option<f64> {
        let p = self.packing.len();
        (p > 0).then(|| self.cover.len() as f64 / p as f64)
    }
}
