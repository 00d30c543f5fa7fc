use std::fmt::Write as _;

use ordered_turan::appendix::{check_binomial_average, check_binomial_fraction, check_locally_balanced, check_locally_balanced_exhaustive, check_vandermonde, Relation};
use ordered_turan::density::{rho_exact, rho_exhaustive, rho_local_search, DEFAULT_NODE_BUDGET, EXHAUSTIVE_EDGE_CAP};
use ordered_turan::hostgen::{complete_hypercube, complete_ordered, generate_r, verify_r_properties, DEFAULT_VERTEX_BUDGET};
use ordered_turan::ordered::text::{write_hypercube, write_ordered};
use ordered_turan::pattern::{classify_vanishing, embed_into_hk, find_monotone_p3, hk_label, interval_chromatic, pi_ordered};
use ordered_turan::richness::{embed_hk_rich, rich_levels, strip_top_forward_traced, subgraph_average_richness, vanishing_aux, verify_extraction};
use ordered_turan::tiling::{check_sample, sample_at, tiling_guarantee_report, TilingConfig, DEFAULT_REPORT_BUDGET};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::error::CliError;
use crate::io::{Host, Inputs};
use crate::schema::*;
use crate::sweep;

/// What a command produced: JSON for stdout, a text summary, extra files
/// for `--out-dir`, and whether its checks held.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub files: Vec<(String, String)>,
    pub pass: bool,
}

impl Output {
    fn new<T: Serialize>(value: &T, text: String, pass: bool) -> Self {
        Output { json: serde_json::to_value(value).expect("serialisable"), text, files: Vec::new(), pass }
    }

    fn with_file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.into(), contents));
        self
    }
}

pub fn run(cmd: &Command, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    match cmd {
        Command::GenHost(a) => gen_host(a, g),
        Command::Classify(a) => classify(a, inputs),
        Command::Solve(a) => solve(a, g, inputs),
        Command::AnalyzeRichness(a) => analyze_richness(a, g, inputs),
        Command::EmbedHk(a) => embed_hk(a, g, inputs),
        Command::TileSample(a) => tile_sample(a, g, inputs),
        Command::TileVerify(a) => tile_verify(a, g, inputs),
        Command::AppendixCheck(a) => appendix_check(a, g),
        Command::Report(a) => sweep::run(a, g, inputs),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::usage(format!("--{flag} is required for --kind {kind}")))
}

fn vertex_budget(g: &Global) -> usize {
    g.budget.map_or(DEFAULT_VERTEX_BUDGET, |b| b as usize)
}

fn gen_host(a: &GenHost, g: &Global) -> Result<Output, CliError> {
    if a.verify.is_some() && a.kind != HostKind::R {
        return Err(CliError::usage("--verify applies to --kind r"));
    }
    let budget = vertex_budget(g);
    let (kind, text, ext, vertices, edges, level_counts, report) = match a.kind {
        HostKind::R => {
            let (d, m) = (need(a.d, "d", "r")?, need(a.m, "m", "r")?);
            let host = generate_r(m, d, g.seed, budget)?;
            let report = a.verify.map(|eps| verify_r_properties(&host, eps, a.samples, g.seed)).transpose()?;
            let gr = host.graph();
            ("r", host.to_text(), "rmd", gr.vertex_count(), gr.edge_count(), host.level_counts(), report)
        }
        HostKind::Complete => {
            let n = need(a.n, "n", "complete")?;
            let k = complete_ordered(n, budget)?;
            ("complete", write_ordered(&k), "og", n, k.edge_count(), Vec::new(), None)
        }
        HostKind::Cube => {
            let d = need(a.d, "d", "cube")?;
            let c = complete_hypercube(d, budget)?;
            let counts = (1..=d).map(|l| c.level_profile().count(l)).collect();
            ("cube", write_hypercube(&c), "cube", 1 << d, c.edge_count(), counts, None)
        }
    };
    let mut file = None;
    if let Some(path) = &a.output {
        std::fs::write(path, &text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
        file = Some(path.display().to_string());
    }
    let pass = report.as_ref().is_none_or(|r| r.pass);
    let out = HostOutput { kind: kind.into(), vertices, edges, level_counts, file: file.clone(), report };
    let mut summary = format!("{kind} host: {vertices} vertices, {edges} edges");
    if let Some(r) = &out.report {
        write!(summary, "; levels {}, {} of {} subset checks failed", if r.levels_pass { "within bounds" } else { "out of bounds" }, r.pairs_failed, r.pair_checks.len()).unwrap();
    }
    // With nowhere else to go the graph itself is the text output.
    let shown = if file.is_none() && g.out_dir.is_none() { text.clone() } else { summary + "\n" };
    Ok(Output::new(&out, shown, pass).with_file(&format!("host.{ext}"), text))
}

fn classify(a: &Classify, inputs: &mut Inputs) -> Result<Output, CliError> {
    let f = inputs.pattern(&a.pattern)?;
    let path = find_monotone_p3(&f);
    let hk = embed_into_hk(&f).ok().map(|w| w.map.iter().map(|&v| hk_label(v)).map(|(i, b)| [i, b]).collect());
    let out = ClassifyOutput {
        vertices: f.vertex_count(),
        edges: f.edge_count(),
        has_monotone_p3: path.is_some(),
        monotone_path: path,
        chi_interval: interval_chromatic(&f),
        pi: pi_ordered(&f).ok(),
        classification: classify_vanishing(&f),
        hk_embedding: hk,
    };
    let text = format!(
        "{:?}: chi_< = {}, pi_< = {}, monotone P3 {}\n",
        out.classification,
        out.chi_interval,
        out.pi.map_or("undefined".into(), |p| p.to_string()),
        path.map_or("absent".into(), |p| format!("at {p:?}"))
    );
    Ok(Output::new(&out, text, true))
}

fn solve(a: &Solve, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let f = inputs.pattern(&a.pattern)?;
    let host = inputs.host(&a.host)?;
    let h = host.graph();
    let budget = g.budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let method = match a.method {
        Method::Auto if h.edge_count() <= EXHAUSTIVE_EDGE_CAP => Method::Exhaustive,
        Method::Auto => Method::Exact,
        m => m,
    };
    let r = match method {
        Method::Exhaustive => rho_exhaustive(&f, h, EXHAUSTIVE_EDGE_CAP)?,
        Method::Exact => rho_exact(&f, h, budget)?,
        _ => rho_local_search(&f, h, a.steps, g.seed)?,
    };
    let name = match method {
        Method::Exhaustive => "exhaustive",
        Method::Exact => "exact",
        _ => "local",
    };
    let text = format!("{} of {} edges kept (ratio {:.6}{})\n", r.best_edge_count, r.total_edges, r.ratio, if r.exact { ", optimal" } else { "" });
    let out = SolveOutput { method: name.into(), best_edges: r.best_edge_count, total: r.total_edges, ratio: r.ratio, exact: r.exact, nodes_explored: r.nodes_explored, certificate: r.certificate.clone() };
    let pass = r.verify(&f, h);
    let cert = write_ordered(&r.certificate_graph(h.vertex_count())?);
    Ok(Output::new(&out, text, pass).with_file("certificate.og", cert))
}

fn analyze_richness(a: &AnalyzeRichness, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let host = inputs.host(&a.host)?;
    let mut text = String::new();
    let out = match &host {
        Host::Blocked(b) => {
            let avg = subgraph_average_richness(b);
            writeln!(text, "blocked host d={} m={}: average level richness {avg:.6}", b.dim(), b.m()).unwrap();
            RichnessOutput { dim: b.dim(), certificate: None, blocked_average: Some(avg), strip: None, extraction: None }
        }
        Host::Cube(c) => {
            let cert = rich_levels(c, a.alpha);
            let s = strip_top_forward_traced(c);
            let d = c.dim();
            let strip = StripSummary {
                vertices_at: s.vertices_at.clone(),
                removed: s.removed.clone(),
                within_slot_bound: (1..=d).map(|l| s.within_slot_bound(l)).collect(),
                within_proportion_bound: (1..=d).map(|l| s.within_proportion_bound(l)).collect(),
            };
            writeln!(text, "{} of {d} levels are {}-rich; average richness {:.6}", cert.levels.len(), a.alpha, cert.average).unwrap();
            let extraction = a.epsilon.map(|eps| match vanishing_aux(c, eps, &g.preset.thresholds(eps)) {
                Ok(res) => {
                    let verified = verify_extraction(c, &res).is_ok();
                    writeln!(text, "extraction at {eps}: x = {}, {} certified levels, verified {verified}", res.trace.x, res.trace.certified_levels.len()).unwrap();
                    ExtractionOutput { epsilon: eps, trace: Some(res.trace), failure: None, verified: Some(verified) }
                }
                Err(f) => {
                    writeln!(text, "extraction at {eps} failed at {:?}: {}", f.stage, f.detail).unwrap();
                    ExtractionOutput { epsilon: eps, trace: None, failure: Some(f), verified: None }
                }
            });
            RichnessOutput { dim: d, certificate: Some(cert), blocked_average: None, strip: Some(strip), extraction }
        }
        Host::Ordered(_) => return Err(CliError::usage("analyze-richness needs a hypercube (.cube) or blocked (.rmd) host")),
    };
    let pass = out.extraction.as_ref().is_none_or(|e| e.verified == Some(true));
    let mut csv = String::from("level,ratio,vertices_at,removed\n");
    if let (Some(c), Some(s)) = (&out.certificate, &out.strip) {
        for (i, r) in c.ratios.iter().enumerate() {
            writeln!(csv, "{},{r},{},{}", i + 1, s.vertices_at[i], s.removed[i]).unwrap();
        }
    }
    Ok(Output::new(&out, text, pass).with_file("levels.csv", csv))
}

fn embed_hk(a: &EmbedHk, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let Host::Cube(c) = inputs.host(&a.host)? else { return Err(CliError::usage("embed-hk needs a hypercube (.cube) host")) };
    let r: EmbedOutput = embed_hk_rich(&c, a.k, a.epsilon, g.preset);
    let text = match (&r.witness, &r.failure) {
        (Some(w), _) => format!("H_{} embedded at {:?}\n", a.k, w.map),
        (_, Some(f)) => format!("no embedding: depth {} (H_{}): {}\n", f.depth, f.k, f.reason),
        _ => "no embedding\n".into(),
    };
    let pass = r.witness.is_some();
    Ok(Output::new(&r, text, pass))
}

fn tiling_config(t: &TilingArgs, inputs: &mut Inputs) -> Result<(ordered_turan::ordered::OrderedGraph, TilingConfig), CliError> {
    let h = inputs.pattern(&t.pattern)?;
    let levels = t.levels.clone().map_or_else(|| (1..=t.d).collect(), |l| l.0);
    Ok((h.clone(), TilingConfig::new(t.d, levels, t.w, h.vertex_count())?))
}

fn tile_sample(a: &TileSample, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let (_, cfg) = tiling_config(&a.tiling, inputs)?;
    let big_l = cfg.level_count();
    let (hist, invalid) = (0..a.n_samples)
        .into_par_iter()
        .fold(
            || (vec![vec![0u64; big_l]; cfg.h], 0u64),
            |(mut hist, mut bad), k| {
                let s = sample_at(&cfg, g.seed, k);
                bad += check_sample(&cfg, &s).is_err() as u64;
                for (t, l) in s.levels.iter().enumerate() {
                    hist[t][cfg.position(*l).expect("chosen level") - 1] += 1;
                }
                (hist, bad)
            },
        )
        .reduce(
            || (vec![vec![0u64; big_l]; cfg.h], 0),
            |(mut a, x), (b, y)| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    ra.iter_mut().zip(rb).for_each(|(p, q)| *p += q);
                }
                (a, x + y)
            },
        );
    let samples = (0..a.n_samples.min(a.show as u64)).map(|k| sample_at(&cfg, g.seed, k)).collect();
    let mut csv = String::from("t,level,count\n");
    for (t, row) in hist.iter().enumerate() {
        for (p, c) in row.iter().enumerate() {
            writeln!(csv, "{},{},{c}", t + 1, cfg.levels[p]).unwrap();
        }
    }
    let out = TileSampleOutput { config: cfg, seed: g.seed, n_samples: a.n_samples, invalid_samples: invalid, level_histogram: hist, samples };
    let text = format!("{} samples, {} violating the layout\n", a.n_samples, invalid);
    Ok(Output::new(&out, text, invalid == 0).with_file("level_histogram.csv", csv))
}

fn tile_verify(a: &TileVerify, g: &Global, inputs: &mut Inputs) -> Result<Output, CliError> {
    let (h, cfg) = tiling_config(&a.tiling, inputs)?;
    let budget = g.budget.map_or(DEFAULT_REPORT_BUDGET, u128::from);
    let r: TileVerifyOutput = tiling_guarantee_report(&h, &cfg, a.epsilon, budget)?;
    let mut csv = String::from("level,pass_fraction,min_normalised,level_pass\n");
    let mut text = String::new();
    for l in &r.levels {
        writeln!(csv, "{},{},{},{}", l.level, l.pass_fraction, l.min_normalised, l.level_pass).unwrap();
        writeln!(text, "level {:>2}: {:.4} of pairs meet the bound{}", l.level, l.pass_fraction, if l.level_pass { "" } else { "  (short)" }).unwrap();
    }
    writeln!(text, "{:.4} of levels pass; overall {}", r.passing_level_fraction, if r.pass { "PASS" } else { "FAIL" }).unwrap();
    let pass = r.pass;
    Ok(Output::new(&r, text, pass).with_file("levels.csv", csv))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct A1Params {
    alpha: f64,
    epsilon: f64,
    k: u64,
    /// Defaults to `ε/(2k)`.
    eta: Option<f64>,
    n: u64,
}

fn default_samples() -> u64 {
    2000
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct A2Params {
    n: usize,
    epsilon: f64,
    #[serde(default = "default_samples")]
    samples: u64,
    seed: Option<u64>,
    #[serde(default)]
    exhaustive: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct A3Params {
    /// `table[t-1] = f(t)`.
    table: Option<Vec<f64>>,
    /// `f ≡ constant` on `[n]`.
    constant: Option<f64>,
    n: Option<usize>,
    x: Option<u64>,
    y: Option<u64>,
    alpha: Option<f64>,
    epsilon: Option<f64>,
    eta: Option<f64>,
    /// Check the full-range identity up to this `n` instead.
    vandermonde: Option<usize>,
}

fn parse_params<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::usage(format!("--params: {e}")))
}

fn appendix_check(a: &AppendixCheck, g: &Global) -> Result<Output, CliError> {
    let r: AppendixOutput = match a.lemma {
        LemmaArg::A1 => {
            let p: A1Params = parse_params(&a.params)?;
            let eta = p.eta.unwrap_or(p.epsilon / (2.0 * p.k as f64));
            check_binomial_fraction(p.alpha, p.epsilon, p.k, eta, p.n)?
        }
        LemmaArg::A2 => {
            let p: A2Params = parse_params(&a.params)?;
            if p.exhaustive {
                check_locally_balanced_exhaustive(p.n, p.epsilon)?
            } else {
                check_locally_balanced(p.n, p.epsilon, p.samples, p.seed.unwrap_or(g.seed))?
            }
        }
        LemmaArg::A3 => {
            let p: A3Params = parse_params(&a.params)?;
            if let Some(n_max) = p.vandermonde {
                check_vandermonde(n_max)?
            } else {
                let table = match (p.table, p.constant, p.n) {
                    (Some(t), None, _) => t,
                    (None, Some(c), Some(n)) => vec![c; n],
                    _ => return Err(CliError::usage("--params for a3 wants `table`, or `constant` with `n`, or `vandermonde`")),
                };
                let missing = |k: &str| CliError::usage(format!("--params for a3 is missing `{k}`"));
                check_binomial_average(
                    &table,
                    p.x.ok_or_else(|| missing("x"))?,
                    p.y.ok_or_else(|| missing("y"))?,
                    p.alpha.ok_or_else(|| missing("alpha"))?,
                    p.epsilon.ok_or_else(|| missing("epsilon"))?,
                    p.eta.ok_or_else(|| missing("eta"))?,
                )?
            }
        }
    };
    let mut text = format!("{:?}: lhs {} {} rhs {} (margin {:.6e}) {}\n", r.lemma, r.lhs_value, if r.relation == Relation::AtLeast { ">=" } else { "<" }, r.rhs_value, r.margin_value, if r.pass { "PASS" } else { "FAIL" });
    if let Some([lo, hi]) = r.confidence_interval {
        writeln!(text, "95% interval [{lo:.6}, {hi:.6}] over {} samples", r.samples.unwrap_or(0)).unwrap();
    }
    if let Some(p) = r.premise_holds {
        writeln!(text, "premise {}", if p { "holds" } else { "violated" }).unwrap();
    }
    if let Some(n) = r.first_passing_n {
        writeln!(text, "first passing n with η = ε/2k: {n}").unwrap();
    }
    let pass = r.pass;
    Ok(Output::new(&r, text, pass))
}

#[cfg(test)]
mod tests {
    use std::path::{Path, PathBuf};

    use clap::Parser;
    use ordered_turan::ordered::text::write_ordered;
    use ordered_turan::pattern::build_hk;
    use serde::de::DeserializeOwned;

    use super::*;
    use crate::args::Cli;

    fn exec(argv: &[&str]) -> Output {
        let cli = Cli::try_parse_from(std::iter::once("ordturan").chain(argv.iter().copied())).unwrap();
        run(&cli.command, &cli.global, &mut Inputs::default()).unwrap()
    }

    /// Output must parse back into its typed shape and re-serialise unchanged.
    fn round_trip<T: DeserializeOwned + Serialize>(out: &Output) -> T {
        let typed: T = serde_json::from_value(out.json.clone()).unwrap();
        assert_eq!(serde_json::to_value(&typed).unwrap(), out.json);
        typed
    }

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn outputs_match_their_schemas() {
        let dir = tempfile::tempdir().unwrap();
        let p3 = write(dir.path(), "p3.og", "3 2\n0 1\n1 2\n");
        let h2 = write(dir.path(), "h2.og", &write_ordered(&build_hk(2).unwrap()));
        let k4 = write(dir.path(), "k4.og", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
        let (p3s, h2s, k4s) = (p3.to_str().unwrap(), h2.to_str().unwrap(), k4.to_str().unwrap());
        let cube = dir.path().join("c.cube");
        let rmd = dir.path().join("r.rmd");

        let h: HostOutput = round_trip(&exec(&["gen-host", "--kind", "cube", "--d", "6", "--output", cube.to_str().unwrap()]));
        assert_eq!(h.edges, 64 * 63 / 2);
        let h: HostOutput = round_trip(&exec(&["gen-host", "--kind", "r", "--d", "3", "--m", "4", "--verify", "0.5", "--output", rmd.to_str().unwrap()]));
        assert!(h.report.is_some());

        let c: ClassifyOutput = round_trip(&exec(&["classify", "--pattern", h2s]));
        assert_eq!(c.hk_embedding.unwrap(), [[1, 0], [2, 1], [3, 0], [4, 1]]);
        let c: ClassifyOutput = round_trip(&exec(&["classify", "--pattern", p3s]));
        assert!(c.has_monotone_p3 && c.hk_embedding.is_none());

        let s: SolveOutput = round_trip(&exec(&["solve", "--pattern", p3s, "--host", k4s]));
        assert_eq!((s.best_edges, s.total), (4, 6));
        let s: SolveOutput = round_trip(&exec(&["solve", "--pattern", p3s, "--host", k4s, "--method", "local", "--steps", "500"]));
        assert_eq!(s.method, "local");

        let r: RichnessOutput = round_trip(&exec(&["analyze-richness", "--host", cube.to_str().unwrap(), "--epsilon", "0.5"]));
        assert_eq!(r.extraction.unwrap().verified, Some(true));
        let r: RichnessOutput = round_trip(&exec(&["analyze-richness", "--host", rmd.to_str().unwrap()]));
        assert!(r.blocked_average.is_some());

        let e: EmbedOutput = round_trip(&exec(&["embed-hk", "--host", cube.to_str().unwrap(), "--k", "2"]));
        assert!(e.witness.is_some());

        let t: TileSampleOutput = round_trip(&exec(&["tile-sample", "--pattern", p3s, "--d", "8", "--w", "4", "--n-samples", "300", "--seed", "3"]));
        assert_eq!(t.invalid_samples, 0);
        assert_eq!(t.level_histogram.iter().map(|r| r.iter().sum::<u64>()).collect::<Vec<_>>(), [300, 300, 300]);
        let _: TileVerifyOutput = round_trip(&exec(&["tile-verify", "--pattern", p3s, "--d", "6", "--levels", "1-6", "--w", "3", "--epsilon", "1"]));

        for (lemma, params) in [
            ("a1", r#"{"alpha":0.5,"epsilon":0.1,"k":3,"n":2000}"#),
            ("a2", r#"{"n":64,"epsilon":0.3,"samples":50}"#),
            ("a2", r#"{"n":10,"epsilon":0.3,"exhaustive":true}"#),
            ("a3", r#"{"constant":1.0,"n":40,"x":1,"y":1,"alpha":1.0,"epsilon":0.2,"eta":0.05}"#),
            ("a3", r#"{"vandermonde":20}"#),
        ] {
            let _: AppendixOutput = round_trip(&exec(&["appendix-check", "--lemma", lemma, "--params", params]));
        }

        let spec = write(dir.path(), "sweep.toml", "[[experiment]]\nname = \"q\"\nsolver = \"quarter\"\nhost = \"r\"\nd = [2]\nm = [2]\n");
        let o: ReportOutput = round_trip(&exec(&["report", "--spec", spec.to_str().unwrap()]));
        assert_eq!(o.rows, 1);
    }

    #[test]
    fn bad_params_are_usage_errors() {
        let cli = Cli::try_parse_from(["ordturan", "appendix-check", "--lemma", "a1", "--params", r#"{"alpha":0.5}"#]).unwrap();
        assert!(matches!(run(&cli.command, &cli.global, &mut Inputs::default()), Err(CliError::Usage(_))));
        let cli = Cli::try_parse_from(["ordturan", "classify", "--pattern", "/nonexistent/p.og"]).unwrap();
        assert!(matches!(run(&cli.command, &cli.global, &mut Inputs::default()), Err(CliError::Usage(_))));
    }
}
