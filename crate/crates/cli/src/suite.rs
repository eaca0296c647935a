//! Experiment suites: a JSON spec expands into instances that are certified
//! in parallel, one report file each plus `summary.csv`.

use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use immersion_ep::ep::{ep_edge_certify, ep_vertex_report, CertifyOptions, EPReport};
use immersion_ep::generators;
use immersion_ep::immersion::{search_expansion, Budget, CoverSet, Mode, SearchOutcome};
use immersion_ep::io::write_atomic;
use immersion_ep::Multigraph;

use crate::{budget_of, load_graph, now_unix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    /// Relative paths are resolved against the spec file's directory.
    File { path: PathBuf },
    Grid { k: u32, r: u32 },
    Wall { k: u32 },
    WallPlus { k: u32 },
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Theta { r: u32 },
    Star { k: usize },
    Random {
        n: usize,
        m: usize,
        #[serde(default = "one")]
        max_mult: u32,
    },
    RandomConnected {
        n: usize,
        m: usize,
        #[serde(default = "one")]
        max_mult: u32,
    },
}

fn one() -> u32 {
    1
}

impl GraphSpec {
    fn build(&self, seed: u64, base: &Path) -> anyhow::Result<Multigraph> {
        Ok(match self {
            GraphSpec::File { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                load_graph(&p.to_string_lossy())?
            }
            GraphSpec::Grid { k, r } => generators::grid(*k, *r)?.0,
            GraphSpec::Wall { k } => generators::wall(*k)?.graph,
            GraphSpec::WallPlus { k } => generators::wall_plus(*k)?.graph,
            GraphSpec::Path { n } => generators::path_graph(*n),
            GraphSpec::Cycle { n } => generators::cycle_graph(*n)?,
            GraphSpec::Complete { n } => generators::complete_graph(*n),
            GraphSpec::Theta { r } => generators::theta(*r),
            GraphSpec::Star { k } => generators::star(*k),
            GraphSpec::Random { n, m, max_mult } => generators::random_multigraph(*n, *m, *max_mult, seed)?,
            GraphSpec::RandomConnected { n, m, max_mult } => {
                generators::random_connected_multigraph(*n, *m, *max_mult, seed)?
            }
        })
    }

    fn label(&self) -> String {
        match self {
            GraphSpec::File { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into()),
            GraphSpec::Grid { k, r } => format!("grid{k}x{r}"),
            GraphSpec::Wall { k } => format!("wall{k}"),
            GraphSpec::WallPlus { k } => format!("wallplus{k}"),
            GraphSpec::Path { n } => format!("path{n}"),
            GraphSpec::Cycle { n } => format!("cycle{n}"),
            GraphSpec::Complete { n } => format!("k{n}"),
            GraphSpec::Theta { r } => format!("theta{r}"),
            GraphSpec::Star { k } => format!("star{k}"),
            GraphSpec::Random { n, m, .. } => format!("random{n}-{m}"),
            GraphSpec::RandomConnected { n, m, .. } => format!("rc{n}-{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteMode {
    #[default]
    Edge,
    Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub host: GraphSpec,
    pub pattern: GraphSpec,
    #[serde(default)]
    pub mode: SuiteMode,
    /// Number of instances; random hosts use consecutive seeds.
    #[serde(default = "one_usize")]
    pub count: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default)]
    pub oracles: bool,
    #[serde(default)]
    pub oracle_budget: Option<u64>,
    #[serde(default)]
    pub planar: bool,
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSuite {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub instances: Vec<SuiteEntry>,
}

pub struct RunOptions {
    pub spec: PathBuf,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub sabotage: bool,
    pub budget: Option<u64>,
    pub quiet: bool,
    pub timestamp: bool,
}

struct Instance<'a> {
    name: String,
    entry: &'a SuiteEntry,
    seed: u64,
}

#[derive(Default)]
struct Row {
    instance: String,
    mode: String,
    vertices: String,
    edges: String,
    pattern_edges: String,
    tree_cut_width: String,
    partition_width: String,
    treewidth: String,
    packing: String,
    cover: String,
    omega: String,
    sigma: String,
    cover_bound: String,
    margin: String,
    status: String,
    exit_code: u8,
    error: String,
}

const HEADER: [&str; 17] = [
    "instance",
    "mode",
    "vertices",
    "edges",
    "pattern_edges",
    "tree_cut_width",
    "partition_width",
    "treewidth",
    "packing",
    "cover",
    "omega",
    "sigma",
    "cover_bound",
    "margin",
    "status",
    "exit_code",
    "error",
];

impl Row {
    fn record(&self) -> [String; 17] {
        [
            self.instance.clone(),
            self.mode.clone(),
            self.vertices.clone(),
            self.edges.clone(),
            self.pattern_edges.clone(),
            self.tree_cut_width.clone(),
            self.partition_width.clone(),
            self.treewidth.clone(),
            self.packing.clone(),
            self.cover.clone(),
            self.omega.clone(),
            self.sigma.clone(),
            self.cover_bound.clone(),
            self.margin.clone(),
            self.status.clone(),
            self.exit_code.to_string(),
            self.error.clone(),
        ]
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn row_of(name: &str, mode: SuiteMode, h: &Multigraph, r: &EPReport) -> Row {
    let mut row = Row {
        instance: name.into(),
        mode: match mode {
            SuiteMode::Edge => "edge".into(),
            SuiteMode::Vertex => "vertex".into(),
        },
        vertices: r.host.vertices.to_string(),
        edges: r.host.edges.to_string(),
        pattern_edges: r.pattern.edges.to_string(),
        tree_cut_width: opt(r.tree_cut_width),
        partition_width: opt(r.partition_width),
        treewidth: opt(r.treewidth),
        packing: r.packing.len().to_string(),
        cover: r.cover.len().to_string(),
        omega: opt(r.omega),
        sigma: opt(r.sigma),
        exit_code: r.exit_code() as u8,
        status: match r.exit_code() {
            0 => "verified".into(),
            1 => "failed".into(),
            _ => "budget-exhausted".into(),
        },
        ..Row::default()
    };
    if let Some(s) = r.sigma {
        let bound = s * (4 * h.vertex_count() + h.edge_count()) as u64 * r.packing.len() as u64;
        row.cover_bound = bound.to_string();
        row.margin = (bound as i64 - r.cover.len() as i64).to_string();
    }
    row
}

/// Drops cover elements until some expansion survives, preferring elements the
/// cover cannot do without.
fn break_cover(cover: &mut CoverSet, g: &Multigraph, h: &Multigraph, budget: Budget) -> anyhow::Result<()> {
    let without = |c: &CoverSet, i: usize| -> CoverSet {
        match c {
            CoverSet::Edges(e) => CoverSet::Edges(e.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect()),
            CoverSet::Vertices(v) => {
                CoverSet::Vertices(v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect())
            }
        }
    };
    while !cover.is_empty() {
        for i in 0..cover.len() {
            let c = without(cover, i);
            let rest = c.remove_from(g)?;
            if matches!(search_expansion(&rest, h, Mode::Immersion, budget)?, SearchOutcome::Found(_)) {
                *cover = c;
                return Ok(());
            }
        }
        *cover = without(cover, cover.len() - 1);
    }
    Ok(())
}

fn certify_instance(inst: &Instance, base: &Path, opts: &RunOptions) -> anyhow::Result<(Multigraph, EPReport)> {
    let e = inst.entry;
    let g = e.host.build(inst.seed, base).context("building host")?;
    let h = e.pattern.build(inst.seed, base).context("building pattern")?;
    let budget = budget_of(e.budget.or(opts.budget));
    let mut report = match e.mode {
        SuiteMode::Edge => {
            let mut c = CertifyOptions {
                instance: inst.name.clone(),
                budget,
                planar: e.planar,
                oracles: e.oracles,
                ..CertifyOptions::default()
            };
            if let Some(b) = e.oracle_budget {
                c.oracle_budget = Budget::nodes(b);
            }
            ep_edge_certify(&g, &h, &c)?
        }
        SuiteMode::Vertex => ep_vertex_report(&g, &h, budget, &inst.name)?,
    };
    if opts.sabotage && !report.cover.is_empty() {
        break_cover(&mut report.cover, &g, &h, budget)?;
        report.recheck_cover(&g, &h, budget)?;
    }
    if opts.timestamp {
        report.generated_unix = Some(now_unix());
    }
    Ok((h, report))
}

fn expand(suite: &ExperimentSuite) -> Vec<Instance<'_>> {
    let mut out = Vec::new();
    for (i, e) in suite.instances.iter().enumerate() {
        let base = e.seed.unwrap_or(suite.seed.wrapping_add(1000 * i as u64));
        for j in 0..e.count {
            out.push(Instance {
                name: format!("{:04}-{}-{}", out.len(), e.host.label(), e.pattern.label()),
                entry: e,
                seed: base.wrapping_add(j as u64),
            });
        }
    }
    out
}

pub fn run(opts: &RunOptions) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&opts.spec).with_context(|| format!("reading {}", opts.spec.display()))?;
    let suite: ExperimentSuite =
        serde_json::from_str(&text).with_context(|| format!("parsing suite {}", opts.spec.display()))?;
    let base = opts.spec.parent().map(Path::to_path_buf).unwrap_or_default();
    let out_dir = match (&opts.out, &suite.output_dir) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) if o.is_absolute() => o.clone(),
        (None, Some(o)) => base.join(o),
        (None, None) => base.join("suite-out"),
    };
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let instances = expand(&suite);

    let work = |inst: &Instance| -> Row {
        let row = match certify_instance(inst, &base, opts) {
            Ok((h, report)) => {
                let path = out_dir.join(format!("{}.json", inst.name));
                let body = serde_json::to_string_pretty(&report).map(|s| s + "\n");
                match body.map_err(anyhow::Error::from).and_then(|b| Ok(write_atomic(&path, b.as_bytes())?)) {
                    Ok(()) => row_of(&inst.name, inst.entry.mode, &h, &report),
                    Err(e) => error_row(inst, &e),
                }
            }
            Err(e) => error_row(inst, &e),
        };
        if !opts.quiet {
            eprintln!("{} {}", row.instance, row.status);
        }
        row
    };
    let rows: Vec<Row> = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()?
            .install(|| instances.par_iter().map(work).collect()),
        None => instances.par_iter().map(work).collect(),
    };

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for r in &rows {
        w.write_record(r.record())?;
    }
    write_atomic(out_dir.join("summary.csv"), &w.into_inner()?)?;

    let code = if rows.iter().any(|r| r.exit_code == 1) {
        1
    } else if rows.iter().any(|r| r.exit_code == 2) {
        2
    } else {
        0
    };
    if !opts.quiet {
        eprintln!("{} instances, exit {code}", rows.len());
    }
    Ok(code)
}

/// Instance errors are recorded and counted like budget exhaustion: nothing
/// was verified, nothing was refuted.
fn error_row(inst: &Instance, e: &anyhow::Error) -> Row {
    Row {
        instance: inst.name.clone(),
        mode: match inst.entry.mode {
            SuiteMode::Edge => "edge".into(),
            SuiteMode::Vertex => "vertex".into(),
        },
        status: "error".into(),
        exit_code: 2,
        error: format!("{e:#}"),
        ..Row::default()
    }
}
