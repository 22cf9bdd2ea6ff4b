use clap::{Parser, Subcommand};
use netcolor::config::{GeneratorSpec, RunConfig};
use netcolor::constants::{build_schedule, Mode};
use netcolor::gen::{distinguishing_coloring, distinguishing_index, distinguishing_number, export_dot};
use netcolor::hierarchy::{build_hierarchy, SplitPolicy};
use netcolor::io;
use netcolor::palette::build_phi;
use netcolor::pipeline;
use netcolor::verify::{check_finitary, check_level_invariants, min_separating_delta};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "netcolor",
    about = "Hierarchical symmetry-breaking colorings on bounded-degree graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_split(s: &str) -> Result<SplitPolicy, String> {
    match s {
        "formula" => Ok(SplitPolicy::Formula),
        "all-minus" => Ok(SplitPolicy::AllMinus),
        "all-plus" => Ok(SplitPolicy::AllPlus),
        _ => Err(format!("unknown split policy {s:?} (formula, all-minus, all-plus)")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (e.g. "cycle 40", "grid 60x60", "cayley f2 3")
    Gen {
        /// generator spec
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Derive the parameter schedule and print it as JSON
    Constants {
        #[arg(long, default_value_t = 2)]
        delta: u32,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        /// exact worst-case recursion instead of working-scale overrides
        #[arg(long)]
        exact: bool,
        /// working-scale separation radii, comma separated
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
        /// working-scale factors, comma separated
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
    },
    /// Build the center hierarchy over a graph
    Levels {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        r: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<u32>,
        #[arg(long, default_value = "formula", value_parser = parse_split)]
        split: SplitPolicy,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble the hierarchical coloring from graph + levels
    Color {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        levels: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// also write the full build record next to the coloring
        #[arg(long)]
        build: Option<PathBuf>,
    },
    /// Check hierarchy invariants and, given a coloring, finitary separation
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        levels: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        eps: u32,
        #[arg(long, default_value_t = 0)]
        margin: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact distinguishing number
    Dnum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4096)]
        cap: u32,
        /// also print a realizing coloring
        #[arg(long)]
        witness: bool,
    },
    /// Exact distinguishing index (via the line graph)
    Dindex {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4096)]
        cap: u32,
    },
    /// Write GraphViz DOT with colored nodes
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full run from a key=value config file: gen, constants, levels,
    /// color, verify
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Gen { spec, out } => {
            let g = GeneratorSpec::parse(&spec)?.generate()?;
            io::save_graph(&out, &g)?;
            println!(
                "wrote {} ({} vertices, degree bound {}, basepoint {})",
                out.display(),
                g.vertex_count(),
                g.degree_bound(),
                g.basepoint()
            );
        }
        Command::Constants {
            delta,
            levels,
            exact,
            r,
            s,
        } => {
            let eps = vec![1u64; levels];
            let mode = if exact { Mode::Exact } else { Mode::Desk };
            let (dr, ds) = if exact {
                (None, None)
            } else {
                if r.len() != levels || s.len() != levels {
                    return Err(format!(
                        "working-scale mode needs --r and --s with {levels} entries each"
                    )
                    .into());
                }
                (Some(r.as_slice()), Some(s.as_slice()))
            };
            let schedule = build_schedule(mode, delta, &eps, dr, ds)?;
            println!("{}", serde_json::to_string_pretty(&schedule)?);
        }
        Command::Levels {
            graph,
            r,
            s,
            split,
            out,
        } => {
            let g = io::load_graph(&graph)?;
            let h = build_hierarchy(&g, &r, &s, split)?;
            io::save_hierarchy(&out, &h)?;
            for (n, lv) in h.levels.iter().enumerate() {
                println!("level {n}: {} centers", lv.centers.len());
            }
            for w in &h.warnings {
                println!("warning: {w}");
            }
            println!("wrote {}", out.display());
        }
        Command::Color {
            graph,
            levels,
            out,
            build,
        } => {
            let g = io::load_graph(&graph)?;
            let h = io::load_hierarchy(&levels, &g)?;
            let phi = build_phi(&g, &h, h.depth() - 1)?;
            io::save_coloring(&out, &phi.coloring, &phi.manifest)?;
            if let Some(b) = build {
                io::save_phi_build(&b, &phi)?;
            }
            println!(
                "wrote {} ({} colors)",
                out.display(),
                phi.coloring.palette_bound
            );
        }
        Command::Verify {
            graph,
            levels,
            coloring,
            eps,
            margin,
            out,
        } => {
            let g = io::load_graph(&graph)?;
            let h = io::load_hierarchy(&levels, &g)?;
            let mut report = check_level_invariants(&g, &h, None);
            if let Some(cpath) = coloring {
                let (c, _) = io::load_coloring(&cpath, &g)?;
                let bulk = g.bulk(margin);
                if bulk.is_empty() {
                    return Err("empty bulk at this margin; lower --margin".into());
                }
                match min_separating_delta(&g, &c, eps, &bulk, 64)? {
                    Some(d) => {
                        println!("finitary: eps {eps} separated at delta {d}");
                        report
                            .lines
                            .extend(check_finitary(&g, &c, eps, d, &bulk)?.lines);
                    }
                    None => {
                        report
                            .lines
                            .extend(check_finitary(&g, &c, eps, 64, &bulk)?.lines);
                    }
                }
            }
            print!("{}", report.render());
            if let Some(p) = out {
                io::save_report(&p, &report)?;
            }
            if !report.passed() {
                std::process::exit(1);
            }
        }
        Command::Dnum { graph, cap, witness } => {
            let g = io::load_graph(&graph)?;
            let d = distinguishing_number(&g, cap)?;
            println!("distinguishing number: {d}");
            if witness {
                let c = distinguishing_coloring(&g, cap)?;
                println!("coloring: {:?}", c.colors);
            }
        }
        Command::Dindex { graph, cap } => {
            let g = io::load_graph(&graph)?;
            println!("distinguishing index: {}", distinguishing_index(&g, cap)?);
        }
        Command::ExportDot {
            graph,
            coloring,
            out,
        } => {
            let g = io::load_graph(&graph)?;
            let c = match coloring {
                Some(p) => Some(io::load_coloring(&p, &g)?.0),
                None => None,
            };
            std::fs::write(&out, export_dot(&g, c.as_ref()))?;
            println!("wrote {}", out.display());
        }
        Command::Pipeline { config, out } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = RunConfig::parse(&text)?;
            let artifacts = pipeline::run(&cfg, Some(&out))?;
            for line in &artifacts.manifest {
                println!("{line}");
            }
            print!("{}", artifacts.level_report.render());
            if let Some(r) = &artifacts.finitary_report {
                print!("{}", r.render());
            }
            if let Some(r) = &artifacts.aperiodicity_report {
                print!("{}", r.render());
            }
            if artifacts.all_passed() {
                println!("pipeline: all checks passed");
            } else {
                println!("pipeline: FAILURES above");
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}
