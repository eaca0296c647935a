mod suite;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use immersion_ep::decomposition::{
    exact_tcw_small, exact_tpw_small, exact_treewidth_small, heuristic_tcd, heuristic_tpd, make_nice,
    treewidth_upper_bound, validate_tcd, DecompositionFile, ExactConfig, RootedTreeCutDecomposition, Shape,
    DEFAULT_TREEWIDTH_CAP,
};
use immersion_ep::ep::{ep_edge_certify, ep_vertex_report, tc_to_tp_pipeline, BagRule, CertifyOptions, EPReport};
use immersion_ep::generators::{self, WallCoordinates};
use immersion_ep::immersion::{
    max_packing, min_cover, search_expansion, validate_model, Budget, Disjointness, ImmersionModel, Mode,
    SearchOutcome,
};
use immersion_ep::io::{parse_graph, serialize_graph, to_dot, write_atomic, GraphJson};
use immersion_ep::{Error, Multigraph, VertexId};

/// Exit code for malformed input and other operational errors.
const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "immersion-ep", version, about = "Multigraph immersions and certified Erdős–Pósa duality")]
struct Cli {
    /// Search-node budget for every exhaustive search (default: unlimited).
    #[arg(long, global = true, env = "IMMERSION_EP_BUDGET")]
    budget: Option<u64>,
    /// Seed for random generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; each command has a native default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Leave timestamps out of reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Find one model of H in G.
    Find(FindArgs),
    /// Maximum packing of H-models in G.
    Pack(PackArgs),
    /// Minimum cover of H-models in G.
    Cover(PackArgs),
    /// Compute a decomposition or width.
    Decompose(DecomposeArgs),
    /// Make a tree-cut decomposition nice.
    Nice(DecompArgs),
    /// Convert a tree-cut decomposition of G into a tree-partition of a subdivision of G*.
    Pipeline(DecompArgs),
    /// Certify packing/covering duality on one instance.
    Certify(CertifyArgs),
    /// Run experiment suites.
    Suite {
        #[command(subcommand)]
        action: SuiteAction,
    },
    /// Validate graphs, models and decompositions.
    Validate {
        #[command(subcommand)]
        what: ValidateTarget,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    /// Write coordinates (grids, walls) or the gadget zone map (plus, star) as JSON.
    #[arg(long, global = true)]
    coords: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Family {
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
        #[arg(long, default_value_t = 1)]
        max_mult: u32,
    },
    RandomConnected {
        n: usize,
        m: usize,
        #[arg(long, default_value_t = 1)]
        max_mult: u32,
    },
    /// G⁺ of a graph file.
    Plus { graph: String },
    /// G* of a graph file.
    StarGraph { graph: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Immersion,
    Strong,
    Topological,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Immersion => Mode::Immersion,
            ModeArg::Strong => Mode::StrongImmersion,
            ModeArg::Topological => Mode::TopologicalMinor,
        }
    }
}

#[derive(Args, Debug)]
struct HostPattern {
    /// Host graph file, `-` for stdin.
    #[arg(long = "G", alias = "host", value_name = "FILE")]
    g: String,
    /// Pattern graph file.
    #[arg(long = "H", alias = "pattern", value_name = "FILE")]
    h: String,
}

#[derive(Args, Debug)]
struct FindArgs {
    #[command(flatten)]
    io: HostPattern,
    #[arg(long, value_enum, default_value = "immersion")]
    mode: ModeArg,
}

#[derive(Args, Debug)]
struct PackArgs {
    #[command(flatten)]
    io: HostPattern,
    #[arg(long, value_enum, default_value = "immersion")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "edge")]
    disjointness: DisjointnessArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DisjointnessArg {
    Edge,
    Vertex,
}

impl From<DisjointnessArg> for Disjointness {
    fn from(d: DisjointnessArg) -> Disjointness {
        match d {
            DisjointnessArg::Edge => Disjointness::Edge,
            DisjointnessArg::Vertex => Disjointness::Vertex,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WidthKind {
    Tcw,
    Tpw,
    Tw,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(value_enum)]
    kind: WidthKind,
    /// Graph file, `-` or absent for stdin.
    #[arg(default_value = "-")]
    graph: String,
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    #[arg(long)]
    heuristic: bool,
    /// Vertex cap for the exact searches.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct DecompArgs {
    #[arg(default_value = "-")]
    graph: String,
    /// Tree-cut decomposition JSON; computed when absent.
    #[arg(long)]
    decomp: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportMode {
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BagRuleArg {
    ModelEdges,
    WholeBag,
}

impl From<BagRuleArg> for BagRule {
    fn from(b: BagRuleArg) -> BagRule {
        match b {
            BagRuleArg::ModelEdges => BagRule::ModelEdges,
            BagRuleArg::WholeBag => BagRule::WholeBag,
        }
    }
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    io: HostPattern,
    #[arg(long, value_enum, default_value = "edge")]
    mode: ReportMode,
    /// Assert that H is planar; subcubicity is checked.
    #[arg(long)]
    planar: bool,
    /// Also run the exponential packing and cover oracles.
    #[arg(long)]
    oracles: bool,
    #[arg(long)]
    oracle_budget: Option<u64>,
    /// Tree-cut decomposition of G.
    #[arg(long)]
    decomp: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "model-edges")]
    bag_rule: BagRuleArg,
    /// Instance label stored in the report.
    #[arg(long, default_value = "")]
    instance: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum SuiteAction {
    Run {
        spec: PathBuf,
        /// Output directory; overrides the one in the spec.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, hide = true)]
        sabotage: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ValidateTarget {
    Graph {
        graph: String,
    },
    Model {
        #[command(flatten)]
        io: HostPattern,
        #[arg(long)]
        model: PathBuf,
    },
    Decomp {
        #[arg(long = "G", alias = "host")]
        g: String,
        #[arg(long)]
        decomp: PathBuf,
    },
}

pub(crate) fn budget_of(b: Option<u64>) -> Budget {
    b.map_or(Budget::UNLIMITED, Budget::nodes)
}

pub(crate) fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Reads a graph in text or JSON form from a path or `-`.
pub(crate) fn load_graph(path: &str) -> anyhow::Result<Multigraph> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    let g = if text.trim_start().starts_with('{') {
        serde_json::from_str::<GraphJson>(&text)
            .with_context(|| format!("{path}: not a graph JSON"))?
            .to_graph()?
    } else {
        parse_graph(&text).with_context(|| format!("{path}"))?
    };
    Ok(g)
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn json<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn emit(s: &str) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn unsupported(cmd: &str, f: Format) -> anyhow::Error {
    anyhow::anyhow!("`{cmd}` has no {f:?} output")
}

struct Ctx {
    budget: Budget,
    seed: u64,
    format: Option<Format>,
    quiet: bool,
    timestamp: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn emit_graph(ctx: &Ctx, g: &Multigraph) -> anyhow::Result<()> {
    match ctx.format.unwrap_or(Format::Text) {
        Format::Text => emit(&serialize_graph(g)),
        Format::Dot => emit(&to_dot(g)),
        Format::Json => emit(&json(&GraphJson::from_graph(g))?),
    }
}

#[derive(Serialize)]
struct CoordRow {
    vertex: VertexId,
    x: u32,
    y: u32,
}

fn coords_json(c: &WallCoordinates) -> anyhow::Result<String> {
    json(&c.iter().map(|(vertex, (x, y))| CoordRow { vertex, x, y }).collect::<Vec<_>>())
}

/// Generated graphs use ids `1..=n` so every output form agrees.
fn compact(g: Multigraph) -> Multigraph {
    g.relabeled_compact().0
}

fn cmd_gen(ctx: &Ctx, args: &GenArgs) -> anyhow::Result<u8> {
    let (g, sidecar) = match args.family.clone() {
        Family::Grid { k, r } => {
            let (g, c) = generators::grid(k, r)?;
            (g, Some(coords_json(&c)?))
        }
        Family::Wall { k } | Family::WallPlus { k } => {
            let w = if matches!(args.family, Family::Wall { .. }) {
                generators::wall(k)?
            } else {
                generators::wall_plus(k)?
            };
            (w.graph, Some(coords_json(&w.coords)?))
        }
        Family::Path { n } => (generators::path_graph(n), None),
        Family::Cycle { n } => (generators::cycle_graph(n)?, None),
        Family::Complete { n } => (generators::complete_graph(n), None),
        Family::Theta { r } => (generators::theta(r), None),
        Family::Star { k } => (generators::star(k), None),
        Family::Random { n, m, max_mult } => (generators::random_multigraph(n, m, max_mult, ctx.seed)?, None),
        Family::RandomConnected { n, m, max_mult } => {
            (generators::random_connected_multigraph(n, m, max_mult, ctx.seed)?, None)
        }
        Family::Plus { graph } => {
            let (g, map) = generators::plus_graph(&compact(load_graph(&graph)?));
            (g, Some(json(&map)?))
        }
        Family::StarGraph { graph } => {
            let (g, map) = generators::star_graph(&compact(load_graph(&graph)?));
            (g, Some(json(&map)?))
        }
    };
    let ids_compact = g.vertices().enumerate().all(|(i, v)| v.0 as usize == i + 1);
    if let Some(path) = &args.coords {
        let Some(side) = sidecar else {
            bail!("this family has no coordinates or zone map");
        };
        if !ids_compact {
            bail!("generated vertex ids are not 1..=n; sidecar would not match");
        }
        write_atomic(path, side.as_bytes())?;
    }
    emit_graph(ctx, &g)?;
    Ok(0)
}

fn load_pair(io: &HostPattern) -> anyhow::Result<(Multigraph, Multigraph)> {
    Ok((load_graph(&io.g)?, load_graph(&io.h)?))
}

fn cmd_find(ctx: &Ctx, args: &FindArgs) -> anyhow::Result<u8> {
    let (g, h) = load_pair(&args.io)?;
    let outcome = search_expansion(&g, &h, args.mode.into(), ctx.budget)?;
    let (model, code) = match outcome {
        SearchOutcome::Found(m) => (Some(m), 0),
        SearchOutcome::NoneExists => (None, 0),
        SearchOutcome::BudgetExhausted => {
            ctx.note("search budget exhausted");
            (None, 2)
        }
    };
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(&model)?)?,
        Format::Text => emit(&match (&model, code) {
            (Some(m), _) => format!("found: {} branch vertices, {} paths\n", m.phi.len(), m.psi.len()),
            (None, 0) => "none\n".to_string(),
            _ => "unknown (budget exhausted)\n".to_string(),
        })?,
        f => return Err(unsupported("find", f)),
    }
    Ok(code)
}

fn cmd_pack(ctx: &Ctx, args: &PackArgs) -> anyhow::Result<u8> {
    let (g, h) = load_pair(&args.io)?;
    let p = max_packing(&g, &h, args.mode.into(), args.disjointness.into(), ctx.budget)?;
    let code = if p.exact { 0 } else { 2 };
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(&p)?)?,
        Format::Text => emit(&format!("packing {}{}\n", p.len(), if p.exact { "" } else { " (lower bound)" }))?,
        f => return Err(unsupported("pack", f)),
    }
    Ok(code)
}

fn cmd_cover(ctx: &Ctx, args: &PackArgs) -> anyhow::Result<u8> {
    let (g, h) = load_pair(&args.io)?;
    let c = min_cover(&g, &h, args.mode.into(), args.disjointness.into(), ctx.budget)?;
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(&c)?)?,
        Format::Text => emit(&format!("cover {}\n", c.len()))?,
        f => return Err(unsupported("cover", f)),
    }
    Ok(0)
}

fn decomposition_dot(d: &DecompositionFile) -> String {
    let mut s = String::from("graph T {\n");
    for (t, bag) in d.bags.iter().enumerate() {
        let ids: Vec<String> = bag.iter().map(|v| v.0.to_string()).collect();
        s += &format!("  t{t} [label=\"{t}: {{{}}}\"];\n", ids.join(","));
    }
    for (t, p) in d.parent.iter().enumerate() {
        if let Some(p) = p {
            s += &format!("  t{p} -- t{t};\n");
        }
    }
    s + "}\n"
}

fn emit_decomposition(ctx: &Ctx, d: &DecompositionFile, label: &str) -> anyhow::Result<()> {
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(d)?),
        Format::Text => emit(&format!("{label} {} ({} nodes)\n", d.width, d.parent.len())),
        Format::Dot => emit(&decomposition_dot(d)),
    }
}

#[derive(Serialize)]
struct TreewidthOut {
    treewidth: usize,
    exact: bool,
}

/// Exact tree-cut decomposition when the graph is small enough, else the heuristic one.
fn tree_cut_for(ctx: &Ctx, g: &Multigraph, exact: bool, heuristic: bool, cap: Option<usize>) -> anyhow::Result<RootedTreeCutDecomposition> {
    let cfg = ExactConfig {
        cap: cap.unwrap_or(ExactConfig::default().cap),
        budget: ctx.budget,
    };
    if heuristic {
        return Ok(heuristic_tcd(g));
    }
    match exact_tcw_small(g, cfg) {
        Ok((_, d)) => Ok(d),
        Err(e @ (Error::TooLarge { .. } | Error::BudgetExhausted(_))) if !exact => {
            ctx.note(format!("{e}; using the heuristic decomposition"));
            Ok(heuristic_tcd(g))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_decompose(ctx: &Ctx, args: &DecomposeArgs) -> anyhow::Result<u8> {
    let g = load_graph(&args.graph)?;
    match args.kind {
        WidthKind::Tcw => {
            let d = tree_cut_for(ctx, &g, args.exact, args.heuristic, args.cap)?;
            emit_decomposition(ctx, &DecompositionFile::from_tree_cut(&g, &d)?, "tcw")?;
        }
        WidthKind::Tpw => {
            let cfg = ExactConfig {
                cap: args.cap.unwrap_or(ExactConfig::default().cap),
                budget: ctx.budget,
            };
            let d = if args.heuristic {
                heuristic_tpd(&g)
            } else {
                match exact_tpw_small(&g, cfg) {
                    Ok((_, d)) => d,
                    Err(e @ (Error::TooLarge { .. } | Error::BudgetExhausted(_))) if !args.exact => {
                        ctx.note(format!("{e}; using the heuristic partition"));
                        heuristic_tpd(&g)
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            emit_decomposition(ctx, &DecompositionFile::from_partition(&g, &d)?, "tpw")?;
        }
        WidthKind::Tw => {
            let cap = args.cap.unwrap_or(DEFAULT_TREEWIDTH_CAP);
            let out = if args.heuristic {
                TreewidthOut {
                    treewidth: treewidth_upper_bound(&g),
                    exact: false,
                }
            } else {
                match exact_treewidth_small(&g, cap) {
                    Ok(t) => TreewidthOut { treewidth: t, exact: true },
                    Err(e @ Error::TooLarge { .. }) if !args.exact => {
                        ctx.note(format!("{e}; reporting a min-degree upper bound"));
                        TreewidthOut {
                            treewidth: treewidth_upper_bound(&g),
                            exact: false,
                        }
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            match ctx.format.unwrap_or(Format::Json) {
                Format::Json => emit(&json(&out)?)?,
                Format::Text => emit(&format!("tw {}{}\n", if out.exact { "" } else { "<= " }, out.treewidth))?,
                f => return Err(unsupported("decompose tw", f)),
            }
        }
    }
    Ok(0)
}

fn load_or_compute_tcd(ctx: &Ctx, g: &Multigraph, path: &Option<PathBuf>) -> anyhow::Result<RootedTreeCutDecomposition> {
    match path {
        Some(p) => Ok(load_json::<DecompositionFile>(p)?.to_tree_cut(g)?),
        None => tree_cut_for(ctx, g, false, false, None),
    }
}

fn cmd_nice(ctx: &Ctx, args: &DecompArgs) -> anyhow::Result<u8> {
    let g = load_graph(&args.graph)?;
    let d = load_or_compute_tcd(ctx, &g, &args.decomp)?;
    let nice = make_nice(&g, &d)?;
    emit_decomposition(ctx, &DecompositionFile::from_tree_cut(&g, &nice)?, "tcw")?;
    Ok(0)
}

#[derive(Serialize)]
struct PipelineJson {
    input_width: usize,
    partition_width: usize,
    partition_bound: usize,
    within_bound: bool,
    adhesions_before: Vec<usize>,
    adhesions_after: Vec<usize>,
    graph: GraphJson,
    partition: DecompositionFile,
}

fn cmd_pipeline(ctx: &Ctx, args: &DecompArgs) -> anyhow::Result<u8> {
    let g = load_graph(&args.graph)?;
    let d = load_or_compute_tcd(ctx, &g, &args.decomp)?;
    let out = tc_to_tp_pipeline(&g, &d)?;
    let w = out.input_width;
    let report = PipelineJson {
        input_width: w,
        partition_width: out.partition_width,
        partition_bound: (w + 1) * (w + 1) / 2,
        within_bound: out.within_bound(),
        adhesions_before: out.adhesions_before.clone(),
        adhesions_after: out.adhesions_after.clone(),
        graph: GraphJson::from_graph(&out.graph),
        partition: DecompositionFile::from_partition(&out.graph, &out.partition)?,
    };
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(&report)?)?,
        Format::Text => emit(&format!(
            "tcw {w} -> tpw {} (bound {}, {})\n",
            report.partition_width,
            report.partition_bound,
            if report.within_bound { "ok" } else { "VIOLATED" }
        ))?,
        Format::Dot => emit(&decomposition_dot(&report.partition))?,
    }
    Ok(if report.within_bound { 0 } else { 1 })
}

fn report_text(r: &EPReport) -> String {
    let mut s = format!(
        "{} pack {} cover {}{}\n",
        if r.instance.is_empty() { "instance" } else { &r.instance },
        r.packing.len(),
        r.cover.len(),
        r.tree_cut_width.map(|w| format!(" tcw {w}")).unwrap_or_default()
    );
    for c in &r.checks {
        s += &format!("  {:<30} {:?} {}\n", c.name, c.outcome, c.detail);
    }
    s
}

fn cmd_certify(ctx: &Ctx, args: &CertifyArgs) -> anyhow::Result<u8> {
    let (g, h) = load_pair(&args.io)?;
    let mut report = match args.mode {
        ReportMode::Edge => {
            let decomposition = match &args.decomp {
                Some(p) => Some(load_json::<DecompositionFile>(p)?.to_tree_cut(&g)?),
                None => None,
            };
            let mut opts = CertifyOptions {
                instance: args.instance.clone(),
                decomposition,
                budget: ctx.budget,
                planar: args.planar,
                oracles: args.oracles,
                bag_rule: args.bag_rule.into(),
                ..CertifyOptions::default()
            };
            if let Some(b) = args.oracle_budget {
                opts.oracle_budget = Budget::nodes(b);
            }
            ep_edge_certify(&g, &h, &opts)?
        }
        ReportMode::Vertex => ep_vertex_report(&g, &h, ctx.budget, &args.instance)?,
    };
    if ctx.timestamp {
        report.generated_unix = Some(now_unix());
    }
    let body = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Text => report_text(&report),
        f => return Err(unsupported("certify", f)),
    };
    match &args.out {
        Some(p) => write_atomic(p, body.as_bytes())?,
        None => emit(&body)?,
    }
    for c in report.failures() {
        ctx.note(format!("FAIL {}: {}", c.name, c.detail));
    }
    Ok(report.exit_code() as u8)
}

#[derive(Serialize)]
struct GraphCheck {
    valid: bool,
    vertices: usize,
    edges: usize,
    multiedges: usize,
    connected: bool,
    max_mdeg: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct DecompCheck {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn emit_check<T: Serialize>(ctx: &Ctx, v: &T, ok: bool, text: String) -> anyhow::Result<u8> {
    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => emit(&json(v)?)?,
        Format::Text => emit(&(text + "\n"))?,
        f => return Err(unsupported("validate", f)),
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_validate(ctx: &Ctx, what: &ValidateTarget) -> anyhow::Result<u8> {
    match what {
        ValidateTarget::Graph { graph } => {
            let r = match load_graph(graph) {
                Ok(g) => GraphCheck {
                    valid: true,
                    vertices: g.vertex_count(),
                    edges: g.edge_count(),
                    multiedges: g.multiedge_count(),
                    connected: g.is_connected(),
                    max_mdeg: g.max_mdeg(),
                    error: None,
                },
                Err(e) => GraphCheck {
                    valid: false,
                    vertices: 0,
                    edges: 0,
                    multiedges: 0,
                    connected: false,
                    max_mdeg: 0,
                    error: Some(format!("{e:#}")),
                },
            };
            let text = match &r.error {
                None => format!("valid: {} vertices, {} edges", r.vertices, r.edges),
                Some(e) => format!("invalid: {e}"),
            };
            emit_check(ctx, &r, r.valid, text)
        }
        ValidateTarget::Model { io, model } => {
            let (g, h) = load_pair(io)?;
            let m: ImmersionModel = load_json(model)?;
            let r = validate_model(&g, &h, &m)?;
            let ok = r.is_valid();
            let text = match &r.witness {
                None => format!("valid {}", m.mode),
                Some(w) => format!("invalid: {}", serde_json::to_string(w)?),
            };
            emit_check(ctx, &r, ok, text)
        }
        ValidateTarget::Decomp { g, decomp } => {
            let g = load_graph(g)?;
            let file: DecompositionFile = load_json(decomp)?;
            let checked = file.to_tree_cut(&g).and_then(|d| {
                Shape::new(&d.parent)?;
                Ok(validate_tcd(&g, &d)?.width)
            });
            let r = match checked {
                Ok(_) => DecompCheck {
                    valid: true,
                    width: Some(file.width),
                    nodes: Some(file.parent.len()),
                    error: None,
                },
                Err(e) => DecompCheck {
                    valid: false,
                    width: None,
                    nodes: None,
                    error: Some(e.to_string()),
                },
            };
            let text = match &r.error {
                None => format!("valid: width {}", file.width),
                Some(e) => format!("invalid: {e}"),
            };
            emit_check(ctx, &r, r.valid, text)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let ctx = Ctx {
        budget: budget_of(cli.budget),
        seed: cli.seed,
        format: cli.format,
        quiet: cli.quiet,
        timestamp: !cli.no_timestamp,
    };
    match &cli.command {
        Command::Gen(a) => cmd_gen(&ctx, a),
        Command::Find(a) => cmd_find(&ctx, a),
        Command::Pack(a) => cmd_pack(&ctx, a),
        Command::Cover(a) => cmd_cover(&ctx, a),
        Command::Decompose(a) => cmd_decompose(&ctx, a),
        Command::Nice(a) => cmd_nice(&ctx, a),
        Command::Pipeline(a) => cmd_pipeline(&ctx, a),
        Command::Certify(a) => cmd_certify(&ctx, a),
        Command::Suite {
            action: SuiteAction::Run { spec, out, jobs, sabotage },
        } => suite::run(
            &suite::RunOptions {
                spec: spec.clone(),
                out: out.clone(),
                jobs: *jobs,
                sabotage: *sabotage,
                budget: cli.budget,
                quiet: ctx.quiet,
                timestamp: ctx.timestamp,
            },
        ),
        Command::Validate { what } => cmd_validate(&ctx, what),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::BudgetExhausted(_))));
            ExitCode::from(if budget { 2 } else { EXIT_ERROR })
        }
    }
}
