use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use ordered_turan::hostgen::BlockedGraph;
use ordered_turan::ordered::text::{parse_hypercube, parse_ordered};
use ordered_turan::ordered::{HypercubeGraph, OrderedGraph};
use sha2::{Digest, Sha256};

use crate::args::{HostArg, HostFormat};
use crate::error::CliError;

/// Reads input files and remembers their digests for the manifest.
#[derive(Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.digests.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))
    }

    pub fn pattern(&mut self, path: &Path) -> Result<OrderedGraph, CliError> {
        let text = self.read(path)?;
        parse_ordered(&text).map_err(|e| CliError::input(path, e))
    }

    pub fn host(&mut self, arg: &HostArg) -> Result<Host, CliError> {
        let text = self.read(&arg.host)?;
        let format = arg.host_format.unwrap_or_else(|| format_for(&arg.host));
        let parsed = match format {
            HostFormat::Ordered => parse_ordered(&text).map(Host::Ordered),
            HostFormat::Cube => parse_hypercube(&text).map(Host::Cube),
            HostFormat::Blocked => BlockedGraph::from_text(&text).map(Host::Blocked),
        };
        parsed.map_err(|e| CliError::input(&arg.host, e))
    }
}

pub fn format_for(path: &Path) -> HostFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("cube") => HostFormat::Cube,
        Some("rmd") => HostFormat::Blocked,
        _ => HostFormat::Ordered,
    }
}

pub enum Host {
    Ordered(OrderedGraph),
    Cube(HypercubeGraph),
    Blocked(BlockedGraph),
}

impl Host {
    pub fn graph(&self) -> &OrderedGraph {
        match self {
            Host::Ordered(g) => g,
            Host::Cube(g) => g.graph(),
            Host::Blocked(g) => g.graph(),
        }
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
