//! `hypbound`: distances, degrees and verification campaigns from the shell.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hypbound::harness::{self, Budget, CampaignConfig};
use hypbound::parse::{parse_complex, parse_int_list, parse_map_spec};
use hypbound::sampling::Family;
use hypbound::{covering, models, Model, ModelPoint, Theorem};

#[derive(Parser)]
#[command(name = "hypbound", version, about = "Hyperbolic distances and displacement-bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperbolic distance between two points of a model (disc, upper, right, punctured).
    Dist {
        model: Model,
        #[arg(allow_hyphen_values = true)]
        u: String,
        #[arg(allow_hyphen_values = true)]
        v: String,
    },
    /// Degree of a punctured-disc self-map, e.g. `power:m=3` or `exp:m=2,c=0.5`.
    Degree { map: String },
    /// Run a seeded verification campaign.
    Verify {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = harness::DEFAULT_MIN_SEP)]
        min_sep: f64,
        #[arg(long, default_value_t = hypbound::bounds::VIOLATION_TOL)]
        tolerance: f64,
        #[arg(long, default_value_t = harness::DEFAULT_MAX_RADIUS)]
        max_radius: f64,
        #[arg(long, default_value_t = harness::DEFAULT_MAX_DENSITY)]
        max_density: f64,
        #[arg(long)]
        threads: Option<usize>,
        /// Write the JSON report here (timing included) instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave out wall time so the report is byte-stable.
        #[arg(long)]
        no_timing: bool,
    },
    /// Growth table for `w ↦ w + 1/n²` on the right half-plane.
    Halfplane {
        #[arg(long, default_value = "10,100,1000,10000")]
        n: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `Re w`: a contraction that breaks the two-point bound.
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence transferred from `a`, `b` to `z` under a summable budget.
    Convergence {
        #[arg(long, default_value = "inv_square")]
        budget: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value = "-0.3", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "0.3", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 50)]
        rows: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn disc_point(s: &str) -> Result<ModelPoint<f64>> {
    let w = parse_complex(s)?;
    Ok(ModelPoint::disc(w.re, w.im)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

fn emit_csv<R: serde::Serialize>(rows: &[R], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => Ok(harness::write_csv(rows, p)?),
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Dist { model, u, v } => {
            let u = ModelPoint::new(parse_complex(&u)?, model)?;
            let v = ModelPoint::new(parse_complex(&v)?, model)?;
            println!("{:.17e}", models::dist(&u, &v)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Degree { map } => {
            let f = parse_map_spec(&map)?;
            let d = covering::degree_contour(&f)?;
            println!("{}", serde_json::to_string_pretty(&d)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            theorem,
            family,
            samples,
            seed,
            min_sep,
            tolerance,
            max_radius,
            max_density,
            threads,
            out,
            no_timing,
        } => {
            let mut cfg = CampaignConfig::new(theorem, family, samples, seed);
            cfg.min_sep = min_sep;
            cfg.tolerance = tolerance;
            cfg.max_radius = max_radius;
            cfg.max_density = max_density;
            cfg.threads = threads;
            let report = harness::run_campaign(&cfg)?;
            emit(&report.to_json(!no_timing), out.as_deref())?;
            eprintln!(
                "{} samples, {} violations, min margin {:.3e}",
                samples, report.violation_count, report.margin_stats.min
            );
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Halfplane { n, out } => {
            let rows = harness::halfplane_growth(&parse_int_list(&n)?)?;
            emit_csv(&rows, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Counterexample { out } => {
            let report = harness::counterexample_demo()?;
            emit(&serde_json::to_string_pretty(&report)?, out.as_deref())?;
            Ok(if report.expected_violation_observed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Convergence { budget, z, a, b, rows, out } => {
            let budget: Budget = budget.parse()?;
            let table = harness::convergence_demo(budget, &disc_point(&z)?, &disc_point(&a)?, &disc_point(&b)?, rows)?;
            emit_csv(&table.rows, out.as_deref())?;
            match table.limit {
                Some(l) => eprintln!("K = {:.6e}, K·Σβ = {:.6e}", table.constant, l),
                None => eprintln!("K = {:.6e}", table.constant),
            }
            let ok = table.rows.iter().all(|r| r.within);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
