//! Parameter sweeps: a TOML list of experiments, one CSV row per grid point.
//!
//! ```toml
//! [[experiment]]
//! name = "quarter"
//! solver = "quarter"      # quarter | exact | exhaustive | local | richness
//! pattern = "p3"          # p3 | hk:K | path to an ordered-graph file
//! host = "r"              # r (uses d, m) | complete (uses n) | cube (uses d)
//! d = [2, 3, 4]
//! m = [2]
//! seeds = [1]
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ordered_turan::density::{quarter_free_subgraph, rho_exact, rho_exhaustive, rho_local_search, DensityResult, DEFAULT_NODE_BUDGET, EXHAUSTIVE_EDGE_CAP};
use ordered_turan::hostgen::{complete_hypercube, complete_ordered, generate_r, BlockedGraph, DEFAULT_VERTEX_BUDGET};
use ordered_turan::ordered::text::parse_ordered;
use ordered_turan::ordered::{HypercubeGraph, OrderedGraph};
use ordered_turan::pattern::build_hk;
use ordered_turan::richness::{rich_levels, subgraph_average_richness};
use ordered_turan::Error;
use serde::Deserialize;

use crate::args::{Global, Report};
use crate::commands::Output;
use crate::error::CliError;
use crate::io::Inputs;
use crate::schema::ReportOutput;

pub const COLUMNS: [&str; 15] = ["experiment", "solver", "pattern", "host", "d", "m", "n", "seed", "status", "vertices", "edges", "best_edges", "ratio", "exact", "richness_average"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub experiment: Vec<Experiment>,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Quarter,
    Exact,
    Exhaustive,
    Local,
    Richness,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum HostSpec {
    R,
    Complete,
    Cube,
}

fn default_pattern() -> String {
    "p3".into()
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: String,
    pub solver: Solver,
    #[serde(default = "default_pattern")]
    pub pattern: String,
    pub host: HostSpec,
    #[serde(default)]
    pub d: Vec<u32>,
    #[serde(default)]
    pub m: Vec<usize>,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub steps: Option<u64>,
    pub alpha: Option<f64>,
    pub budget: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
struct Point {
    d: Option<u32>,
    m: Option<usize>,
    n: Option<usize>,
    seed: u64,
}

fn grid(e: &Experiment) -> Vec<Point> {
    let mut out = Vec::new();
    for &seed in &e.seeds {
        match e.host {
            HostSpec::R => {
                for &d in &e.d {
                    for &m in &e.m {
                        out.push(Point { d: Some(d), m: Some(m), n: None, seed });
                    }
                }
            }
            HostSpec::Complete => out.extend(e.n.iter().map(|&n| Point { d: None, m: None, n: Some(n), seed })),
            HostSpec::Cube => out.extend(e.d.iter().map(|&d| Point { d: Some(d), m: None, n: None, seed })),
        }
    }
    out
}

fn pattern(spec: &str, base: &Path, inputs: &mut Inputs) -> Result<OrderedGraph, CliError> {
    if spec == "p3" {
        return Ok(OrderedGraph::from_edges(3, [(0, 1), (1, 2)])?);
    }
    if let Some(k) = spec.strip_prefix("hk:") {
        let k = k.parse().map_err(|_| CliError::usage(format!("bad pattern {spec:?}")))?;
        return Ok(build_hk(k)?);
    }
    let path = base.join(spec);
    let text = inputs.read(&path)?;
    parse_ordered(&text).map_err(|e| CliError::input(&path, e))
}

enum Built {
    Ordered(OrderedGraph),
    Blocked(BlockedGraph),
    Cube(HypercubeGraph),
}

impl Built {
    fn graph(&self) -> &OrderedGraph {
        match self {
            Built::Ordered(g) => g,
            Built::Blocked(b) => b.graph(),
            Built::Cube(c) => c.graph(),
        }
    }

    /// Average level richness of the subgraph with these edges.
    fn richness(&self, edges: &[(usize, usize)]) -> Option<f64> {
        match self {
            Built::Ordered(_) => None,
            Built::Blocked(b) => b.with_edges(edges.iter().copied()).ok().map(|s| subgraph_average_richness(&s)),
            Built::Cube(c) => {
                let sub = c.graph().edge_subgraph(edges.iter().copied()).ok()?;
                HypercubeGraph::from_graph(c.dim(), sub).ok().map(|s| rich_levels(&s, 1.0).average)
            }
        }
    }
}

fn build(e: &Experiment, p: Point) -> Result<Built, Error> {
    let budget = e.budget.map_or(DEFAULT_VERTEX_BUDGET, |b| b as usize);
    Ok(match e.host {
        HostSpec::R => Built::Blocked(generate_r(p.m.unwrap(), p.d.unwrap(), p.seed, budget)?),
        HostSpec::Complete => Built::Ordered(complete_ordered(p.n.unwrap(), budget)?),
        HostSpec::Cube => Built::Cube(complete_hypercube(p.d.unwrap(), budget)?),
    })
}

struct Row {
    status: String,
    vertices: Option<usize>,
    edges: Option<usize>,
    best: Option<usize>,
    ratio: Option<f64>,
    exact: Option<bool>,
    richness: Option<f64>,
}

fn status_of(e: &Error) -> String {
    match e {
        Error::Budget { .. } => format!("budget: {e}"),
        _ => format!("error: {e}"),
    }
}

fn evaluate(e: &Experiment, f: &OrderedGraph, p: Point) -> Row {
    let empty = |status: String| Row { status, vertices: None, edges: None, best: None, ratio: None, exact: None, richness: None };
    let host = match build(e, p) {
        Ok(h) => h,
        Err(err) => return empty(status_of(&err)),
    };
    let g = host.graph();
    let mut row = Row { vertices: Some(g.vertex_count()), edges: Some(g.edge_count()), ..empty("ok".into()) };
    let solved: Result<Option<DensityResult>, Error> = match e.solver {
        Solver::Quarter => {
            let q = quarter_free_subgraph(g);
            let total = g.edge_count();
            row.best = Some(q.edge_count());
            row.ratio = Some(if total == 0 { 1.0 } else { q.edge_count() as f64 / total as f64 });
            row.exact = Some(false);
            row.richness = host.richness(&q.edge_vec());
            Ok(None)
        }
        Solver::Exact => rho_exact(f, g, e.budget.unwrap_or(DEFAULT_NODE_BUDGET)).map(Some),
        Solver::Exhaustive => rho_exhaustive(f, g, EXHAUSTIVE_EDGE_CAP).map(Some),
        Solver::Local => rho_local_search(f, g, e.steps.unwrap_or(20_000), p.seed).map(Some),
        Solver::Richness => {
            row.richness = match &host {
                Built::Blocked(b) => Some(subgraph_average_richness(b)),
                Built::Cube(c) => Some(rich_levels(c, e.alpha.unwrap_or(0.5)).average),
                Built::Ordered(_) => None,
            };
            if row.richness.is_none() {
                row.status = "error: richness needs a hypercube or blocked host".into();
            }
            Ok(None)
        }
    };
    match solved {
        Ok(Some(r)) => {
            row.best = Some(r.best_edge_count);
            row.ratio = Some(r.ratio);
            row.exact = Some(r.exact);
            row.richness = host.richness(&r.certificate);
        }
        Ok(None) => {}
        Err(err) => row.status = status_of(&err),
    }
    row
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

pub struct SweepResult {
    pub results: String,
    pub timings: String,
    pub rows: usize,
    pub failed: usize,
}

pub fn run_spec(spec: &SweepSpec, base: &Path, inputs: &mut Inputs) -> Result<SweepResult, CliError> {
    let mut results = COLUMNS.join(",") + "\n";
    let mut timings = String::from("experiment,row,seconds\n");
    let (mut rows, mut failed) = (0, 0);
    for e in &spec.experiment {
        let f = pattern(&e.pattern, base, inputs)?;
        for (i, p) in grid(e).into_iter().enumerate() {
            let start = Instant::now();
            let r = evaluate(e, &f, p);
            let secs = start.elapsed().as_secs_f64();
            rows += 1;
            failed += (r.status != "ok") as usize;
            let host = match e.host {
                HostSpec::R => "r",
                HostSpec::Complete => "complete",
                HostSpec::Cube => "cube",
            };
            let solver = format!("{:?}", e.solver).to_lowercase();
            let cells = [
                field(&e.name),
                solver,
                field(&e.pattern),
                host.into(),
                opt(p.d),
                opt(p.m),
                opt(p.n),
                p.seed.to_string(),
                field(&r.status),
                opt(r.vertices),
                opt(r.edges),
                opt(r.best),
                opt(r.ratio),
                opt(r.exact),
                opt(r.richness),
            ];
            results += &(cells.join(",") + "\n");
            writeln!(timings, "{},{i},{secs:.6}", field(&e.name)).unwrap();
        }
    }
    Ok(SweepResult { results, timings, rows, failed })
}

pub fn run(a: &Report, _g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let text = inputs.read(&a.spec)?;
    let spec: SweepSpec = toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", a.spec.display())))?;
    let base: PathBuf = a.spec.parent().map(Path::to_path_buf).unwrap_or_default();
    let r = run_spec(&spec, &base, inputs)?;
    let out = ReportOutput { rows: r.rows, failed_rows: r.failed, columns: COLUMNS.iter().map(|c| c.to_string()).collect() };
    let json = serde_json::to_value(&out).expect("serialisable");
    Ok(Output { json, text: r.results.clone(), files: vec![("results.csv".into(), r.results), ("timings.csv".into(), r.timings)], pass: true })
}
