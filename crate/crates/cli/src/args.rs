use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ordered_turan::richness::Preset;
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "ordturan", version, about = "Ordered Turán densities on the lexicographic hypercube")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Node, vertex or enumeration budget, depending on the command.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write results, plot data and a run manifest here.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Print JSON instead of a text summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value = "desk")]
    pub preset: Preset,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate R(m,d), a complete ordered graph or a complete hypercube graph.
    GenHost(GenHost),
    /// Monotone-path test, interval chromatic number and H_k embedding of a pattern.
    Classify(Classify),
    /// Largest F-free subgraph of a host.
    Solve(Solve),
    AnalyzeRichness(AnalyzeRichness),
    EmbedHk(EmbedHk),
    TileSample(TileSample),
    TileVerify(TileVerify),
    AppendixCheck(AppendixCheck),
    /// Run a parameter sweep described by a TOML file.
    Report(Report),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GenHost(_) => "gen-host",
            Command::Classify(_) => "classify",
            Command::Solve(_) => "solve",
            Command::AnalyzeRichness(_) => "analyze-richness",
            Command::EmbedHk(_) => "embed-hk",
            Command::TileSample(_) => "tile-sample",
            Command::TileVerify(_) => "tile-verify",
            Command::AppendixCheck(_) => "appendix-check",
            Command::Report(_) => "report",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostKind {
    /// R(m,d) on {0,1}^d × [m].
    R,
    /// K_n.
    Complete,
    /// Every pair of {0,1}^d.
    Cube,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HostFormat {
    /// `n m` then `u v` lines.
    Ordered,
    /// `d m` then bitstring pairs.
    Cube,
    /// `d m seed` then `x i y j` lines.
    Blocked,
}

#[derive(Args, Debug, Serialize)]
pub struct GenHost {
    #[arg(long, value_enum)]
    pub kind: HostKind,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Check the level counts and subset densities of R(m,d) at this ε.
    #[arg(long)]
    pub verify: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct Classify {
    #[arg(long)]
    pub pattern: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exhaustive up to 20 edges, branch and bound beyond.
    Auto,
    Exhaustive,
    Exact,
    Local,
}

#[derive(Args, Debug, Serialize)]
pub struct HostArg {
    #[arg(long)]
    pub host: PathBuf,
    /// Defaults from the extension: .cube, .rmd, anything else ordered.
    #[arg(long, value_enum)]
    pub host_format: Option<HostFormat>,
}

#[derive(Args, Debug, Serialize)]
pub struct Solve {
    #[arg(long)]
    pub pattern: PathBuf,
    #[command(flatten)]
    pub host: HostArg,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Local search steps.
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeRichness {
    #[command(flatten)]
    pub host: HostArg,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Also run one extraction step at this ε.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct EmbedHk {
    #[command(flatten)]
    pub host: HostArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon: f64,
}

/// Levels as `1,3,4` or a range `2-9`; omitted means all of `1..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelList(pub Vec<u32>);

impl FromStr for LevelList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad level {t:?}"));
            match part.split_once('-') {
                Some((a, b)) => out.extend(num(a)?..=num(b)?),
                None => out.push(num(part)?),
            }
        }
        Ok(LevelList(out))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct TilingArgs {
    #[arg(long)]
    pub pattern: PathBuf,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub levels: Option<LevelList>,
    #[arg(long)]
    pub w: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct TileSample {
    #[command(flatten)]
    pub tiling: TilingArgs,
    #[arg(long, default_value_t = 1000)]
    pub n_samples: u64,
    /// Samples listed in the output.
    #[arg(long, default_value_t = 10)]
    pub show: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct TileVerify {
    #[command(flatten)]
    pub tiling: TilingArgs,
    #[arg(long)]
    pub epsilon: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaArg {
    A1,
    A2,
    A3,
}

#[derive(Args, Debug, Serialize)]
pub struct AppendixCheck {
    #[arg(long, value_enum)]
    pub lemma: LemmaArg,
    /// Parameters as a JSON object.
    #[arg(long, default_value = "{}")]
    pub params: String,
}

#[derive(Args, Debug, Serialize)]
pub struct Report {
    #[arg(long)]
    pub spec: PathBuf,
}
