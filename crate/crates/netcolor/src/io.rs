//! JSON serialization for graphs, hierarchies, colorings, and verification
//! reports, with round-trip guarantees and readable diagnostics for
//! malformed files.

use crate::graph::{Graph, Vertex};
use crate::hierarchy::Hierarchy;
use crate::iso::Coloring;
use crate::palette::PhiBuild;
use crate::verify::VerificationReport;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path} is not valid JSON for the expected schema: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn write_string(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|source| IoError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization is infallible") + "\n"
}

/// On-disk form of a graph: explicit vertex count, edge list, basepoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: u32,
    pub edges: Vec<(Vertex, Vertex)>,
    pub basepoint: Vertex,
}

impl GraphFile {
    pub fn of(g: &Graph) -> GraphFile {
        GraphFile {
            vertices: g.vertex_count(),
            edges: g.edges(),
            basepoint: g.basepoint(),
        }
    }

    pub fn build(&self, path: &Path) -> Result<Graph, IoError> {
        Graph::from_edges(self.vertices, &self.edges, self.basepoint).map_err(|e| {
            IoError::Invalid {
                path: path.display().to_string(),
                message: e.to_string(),
            }
        })
    }
}

pub fn save_graph(path: &Path, g: &Graph) -> Result<(), IoError> {
    write_string(path, &to_pretty(&GraphFile::of(g)))
}

pub fn load_graph(path: &Path) -> Result<Graph, IoError> {
    let text = read_to_string(path)?;
    let file: GraphFile = parse(path, &text)?;
    file.build(path)
}

pub fn save_hierarchy(path: &Path, hier: &Hierarchy) -> Result<(), IoError> {
    write_string(path, &to_pretty(hier))
}

/// Load a hierarchy and rebuild each level's metric cache, which is not
/// stored on disk.
pub fn load_hierarchy(path: &Path, g: &Graph) -> Result<Hierarchy, IoError> {
    let text = read_to_string(path)?;
    let mut hier: Hierarchy = parse(path, &text)?;
    for lv in &mut hier.levels {
        lv.rebuild_metric(g.vertex_count());
    }
    if hier.levels.len() != hier.r.len() {
        return Err(IoError::Invalid {
            path: path.display().to_string(),
            message: format!(
                "{} levels but {} separation radii",
                hier.levels.len(),
                hier.r.len()
            ),
        });
    }
    Ok(hier)
}

/// On-disk form of a coloring: values, palette bound, and the build
/// manifest when the coloring came out of the hierarchical assembly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColoringFile {
    pub colors: Vec<u64>,
    pub palette: u64,
    #[serde(default)]
    pub manifest: Vec<String>,
}

pub fn save_coloring(path: &Path, c: &Coloring, manifest: &[String]) -> Result<(), IoError> {
    let file = ColoringFile {
        colors: c.colors.clone(),
        palette: c.palette_bound,
        manifest: manifest.to_vec(),
    };
    write_string(path, &to_pretty(&file))
}

pub fn load_coloring(path: &Path, g: &Graph) -> Result<(Coloring, Vec<String>), IoError> {
    let text = read_to_string(path)?;
    let file: ColoringFile = parse(path, &text)?;
    if file.colors.len() != g.vertex_count() as usize {
        return Err(IoError::Invalid {
            path: path.display().to_string(),
            message: format!(
                "coloring has {} entries but the graph has {} vertices",
                file.colors.len(),
                g.vertex_count()
            ),
        });
    }
    if let Some(&bad) = file.colors.iter().find(|&&c| c >= file.palette) {
        return Err(IoError::Invalid {
            path: path.display().to_string(),
            message: format!("color {bad} exceeds the declared palette bound {}", file.palette),
        });
    }
    Ok((Coloring::new(file.colors, file.palette), file.manifest))
}

pub fn save_phi_build(path: &Path, phi: &PhiBuild) -> Result<(), IoError> {
    write_string(path, &to_pretty(phi))
}

pub fn load_phi_build(path: &Path) -> Result<PhiBuild, IoError> {
    let text = read_to_string(path)?;
    parse(path, &text)
}

pub fn save_report(path: &Path, report: &VerificationReport) -> Result<(), IoError> {
    write_string(path, &to_pretty(report))
}

pub fn load_report(path: &Path) -> Result<VerificationReport, IoError> {
    let text = read_to_string(path)?;
    parse(path, &text)
}
