//! End-to-end run: generate the graph, derive the parameter schedule,
//! build the hierarchy, assemble the coloring, verify, and write artifacts.

use crate::config::{ConfigError, RunConfig};
use crate::constants::{build_schedule, Mode, ParameterSchedule, ScheduleError};
use crate::equivalence::compute_representatives;
use crate::graph::{Graph, Vertex};
use crate::hierarchy::{build_hierarchy, Hierarchy, HierarchyError};
use crate::io::{self, IoError};
use crate::palette::{build_phi, PaletteError, PhiBuild};
use crate::verify::{
    check_aperiodic_finite, check_finitary, check_level_invariants, min_separating_delta,
    VerificationReport, VerifyError,
};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Palette(#[from] PaletteError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("config asks for {want} levels but r has {have} entries")]
    LevelMismatch { want: usize, have: usize },
}

/// Everything a run produces, also written as JSON when an output
/// directory is given.
pub struct Artifacts {
    pub config: RunConfig,
    pub graph: Graph,
    pub schedule: ParameterSchedule,
    pub hierarchy: Hierarchy,
    pub phi: PhiBuild,
    pub bulk: Vec<Vertex>,
    pub level_report: VerificationReport,
    pub finitary_report: Option<VerificationReport>,
    pub aperiodicity_report: Option<VerificationReport>,
    pub min_delta: Option<u32>,
    pub manifest: Vec<String>,
}

impl Artifacts {
    pub fn all_passed(&self) -> bool {
        self.level_report.passed()
            && self.finitary_report.as_ref().map_or(true, |r| r.passed())
            && self
                .aperiodicity_report
                .as_ref()
                .map_or(true, |r| r.passed())
    }
}

/// How many automorphisms the aperiodicity stage is willing to enumerate,
/// and the largest graph it runs on at all.
const APERIODICITY_CAP: u32 = 4096;
const APERIODICITY_MAX_VERTICES: u32 = 600;
const DELTA_SWEEP_MAX: u32 = 64;

pub fn run(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<Artifacts, PipelineError> {
    if cfg.r.len() != cfg.levels || cfg.s.len() != cfg.levels {
        return Err(PipelineError::LevelMismatch {
            want: cfg.levels,
            have: cfg.r.len().min(cfg.s.len()),
        });
    }
    let mut manifest = vec![format!("config: {}", cfg.render().replace('\n', "; "))];

    let graph = cfg.generate()?;
    manifest.push(format!(
        "graph: {} vertices, degree bound {}, basepoint {}",
        graph.vertex_count(),
        graph.degree_bound(),
        graph.basepoint()
    ));

    // Derive the schedule in working-scale mode with the configured radii,
    // keeping the exact recursions alongside for cross-checking.
    let eps: Vec<u64> = (1..=cfg.levels as u64).collect();
    let desk_r: Vec<u64> = cfg.r.iter().map(|&x| x as u64).collect();
    let desk_s: Vec<u64> = cfg.s.iter().map(|&x| x as u64).collect();
    let schedule = build_schedule(Mode::Desk, cfg.delta, &eps, Some(&desk_r), Some(&desk_s))?;
    for w in &schedule.warnings {
        manifest.push(format!("schedule: {w}"));
    }

    let hierarchy = build_hierarchy(&graph, &cfg.r, &cfg.s, cfg.split)?;
    for w in &hierarchy.warnings {
        manifest.push(format!("levels: {w}"));
    }
    for (n, lv) in hierarchy.levels.iter().enumerate() {
        manifest.push(format!(
            "level {n}: {} centers, {} closed clusters",
            lv.centers.len(),
            lv.closed_cluster.len()
        ));
    }

    let top = cfg.levels - 1;
    let phi = build_phi(&graph, &hierarchy, top)?;
    manifest.extend(phi.manifest.iter().cloned());

    if cfg.canonical_template {
        // Per-cluster realization stays authoritative: closed-cluster
        // equivalences need not preserve ambient satellite separation, so
        // templates are reported per class rather than substituted.
        let mut lower = None;
        for n in 0..hierarchy.depth() {
            let chi_prev = if n == 0 { None } else { Some(&phi.chi[n - 1]) };
            let reps = compute_representatives(&graph, &hierarchy, n, chi_prev, lower.as_ref());
            manifest.push(format!(
                "templates level {n}: {} equivalence classes over {} centers",
                reps.classes.len(),
                hierarchy.levels[n].centers.len()
            ));
            lower = Some(reps);
        }
    }

    let level_report = check_level_invariants(&graph, &hierarchy, Some(&phi));

    let margin = cfg
        .bulk_margin
        .unwrap_or_else(|| cfg.r.iter().zip(&cfg.s).map(|(&r, &s)| r * s).max().unwrap_or(0));
    let bulk = graph.bulk(margin);
    manifest.push(format!("bulk: margin {margin}, {} vertices", bulk.len()));

    let (finitary_report, min_delta) = if bulk.is_empty() {
        manifest.push("finitary check skipped: empty bulk at this margin".into());
        (None, None)
    } else {
        let min_delta =
            min_separating_delta(&graph, &phi.coloring, cfg.eps, &bulk, DELTA_SWEEP_MAX)?;
        match min_delta {
            Some(d) => {
                manifest.push(format!("finitary: eps {} separated at delta {d}", cfg.eps));
                let report = check_finitary(&graph, &phi.coloring, cfg.eps, d, &bulk)?;
                (Some(report), Some(d))
            }
            None => {
                manifest.push(format!(
                    "finitary: no separating delta up to {DELTA_SWEEP_MAX} at eps {}",
                    cfg.eps
                ));
                let report = check_finitary(&graph, &phi.coloring, cfg.eps, DELTA_SWEEP_MAX, &bulk)?;
                (Some(report), None)
            }
        }
    };

    let aperiodicity_report = if graph.vertex_count() <= APERIODICITY_MAX_VERTICES {
        Some(check_aperiodic_finite(
            &graph,
            &phi.coloring,
            APERIODICITY_CAP,
        )?)
    } else {
        manifest.push(format!(
            "aperiodicity check skipped: {} vertices exceeds the exhaustive cap {}",
            graph.vertex_count(),
            APERIODICITY_MAX_VERTICES
        ));
        None
    };

    let artifacts = Artifacts {
        config: cfg.clone(),
        graph,
        schedule,
        hierarchy,
        phi,
        bulk,
        level_report,
        finitary_report,
        aperiodicity_report,
        min_delta,
        manifest,
    };

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|source| IoError::Write {
            path: dir.display().to_string(),
            source,
        })?;
        io::save_graph(&dir.join("graph.json"), &artifacts.graph)?;
        io::save_hierarchy(&dir.join("levels.json"), &artifacts.hierarchy)?;
        io::save_coloring(
            &dir.join("coloring.json"),
            &artifacts.phi.coloring,
            &artifacts.manifest,
        )?;
        io::save_phi_build(&dir.join("build.json"), &artifacts.phi)?;
        io::save_report(&dir.join("level_report.json"), &artifacts.level_report)?;
        if let Some(r) = &artifacts.finitary_report {
            io::save_report(&dir.join("finitary_report.json"), r)?;
        }
        if let Some(r) = &artifacts.aperiodicity_report {
            io::save_report(&dir.join("aperiodicity_report.json"), r)?;
        }
    }
    Ok(artifacts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GeneratorSpec;
    use crate::hierarchy::SplitPolicy;

    #[test]
    fn cycle_sixty_end_to_end() {
        let cfg = RunConfig {
            generator: GeneratorSpec::Cycle(60),
            delta: 2,
            levels: 1,
            r: vec![12],
            s: vec![3],
            split: SplitPolicy::AllMinus,
            canonical_template: true,
            bulk_margin: Some(0),
            eps: 4,
            seed: 0,
        };
        let dir = tempfile::tempdir().unwrap();
        let art = run(&cfg, Some(dir.path())).unwrap();
        assert!(art.level_report.passed(), "{}", art.level_report.render());
        assert!(art.all_passed());
        assert!(art.min_delta.is_some());
        assert!(art
            .aperiodicity_report
            .as_ref()
            .map_or(false, |r| r.passed()));
        // artifacts landed on disk and parse back
        let g = io::load_graph(&dir.path().join("graph.json")).unwrap();
        assert_eq!(g.vertex_count(), 60);
        let (c, manifest) = io::load_coloring(&dir.path().join("coloring.json"), &g).unwrap();
        assert_eq!(c, art.phi.coloring);
        assert!(manifest.iter().any(|m| m.starts_with("level 0")));
        io::load_hierarchy(&dir.path().join("levels.json"), &g).unwrap();
    }

    #[test]
    fn level_count_mismatch_is_rejected() {
        let cfg = RunConfig {
            levels: 2,
            ..RunConfig::default()
        };
        assert!(matches!(
            run(&cfg, None),
            Err(PipelineError::LevelMismatch { .. })
        ));
    }
}
