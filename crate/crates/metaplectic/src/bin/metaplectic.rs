//! Command-line front end for the verification harness.
//!
//! Exit codes: 0 when every requested check passes, 1 when a campaign
//! finds a counterexample, 2 on usage or configuration errors.  With
//! `--json`, reports are byte-deterministic for a fixed configuration and
//! seed; timing is only ever written to stderr.

use clap::{Parser, Subcommand};
use metaplectic::harness::{
    self, decompose, hilbert_eval, lemma_grid, lemma_ids, render_table, summarize, verify_cocycle,
    verify_lemma, LemmaReport, RunConfig,
};
use metaplectic::padic::DEFAULT_DIGITS;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "metaplectic",
    version,
    about = "Verification campaigns for metaplectic cocycles over Q_p (p odd)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Prime p (odd); omit to run the default {3, 7, 5, 13} campaign grid
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Genus m in {1, 2}; omit to cover both where a campaign supports it
    #[arg(long, global = true)]
    m: Option<usize>,

    /// Working p-adic precision (digits)
    #[arg(long, global = true, default_value_t = DEFAULT_DIGITS)]
    precision: u32,

    /// Randomized trials per campaign point
    #[arg(long, global = true, default_value_t = harness::DEFAULT_SAMPLES)]
    samples: u64,

    /// Campaign seed (the METAPLECTIC_SEED environment variable wins)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the 2-cocycle identity for a named cocycle on random triples
    VerifyCocycle {
        /// One of: c_pr, c, C_BPR, C_B, C_tilde_M, C_bar_M, C_ttilde_M, C_M, C_bar
        name: String,
    },
    /// Run named lemma campaigns (all registered lemmas by default)
    VerifyLemma {
        /// Run a single lemma by id
        #[arg(long)]
        lemma: Option<String>,
        /// List the registered lemma ids and exit
        #[arg(long)]
        list: bool,
    },
    /// Print a reference table with its provenance re-checked
    Table {
        /// One of: gamma, hilbert, nu-sl2, c-prime, d4
        what: String,
    },
    /// Bruhat-decompose an isometry given as JSON rows of scalar literals
    Decompose {
        /// e.g. '[["0","1"],["-1","0"]]'; entries are integers, num/den, or p^v*u
        input: String,
    },
    /// Evaluate the Hilbert symbol (a, b) on two scalar literals
    Hilbert { a: String, b: String },
}

#[derive(Serialize)]
struct HilbertReport {
    p: u64,
    a: String,
    b: String,
    value: i8,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Ok(env) = std::env::var("METAPLECTIC_SEED") {
        return env
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("METAPLECTIC_SEED is not a u64: {env:?}"));
    }
    Ok(flag.unwrap_or(harness::DEFAULT_SEED))
}

/// The `(p, m)` points a campaign should run at, honoring explicit flags.
fn campaign_points(
    default_grid: &[(u64, usize)],
    p: Option<u64>,
    m: Option<usize>,
    explicit_single: bool,
) -> Vec<(u64, usize)> {
    match (p, explicit_single) {
        // an explicit prime constructs the points directly (an inapplicable
        // case then surfaces as a WrongResidueCase error)
        (Some(p), _) => {
            let ms: Vec<usize> = match m {
                Some(m) => vec![m],
                None => {
                    let mut ms: Vec<usize> =
                        default_grid.iter().map(|&(_, gm)| gm).collect();
                    ms.sort_unstable();
                    ms.dedup();
                    ms
                }
            };
            ms.into_iter().map(|gm| (p, gm)).collect()
        }
        // default grid, optionally filtered by genus
        (None, _) => default_grid
            .iter()
            .copied()
            .filter(|&(_, gm)| m.map_or(true, |want| gm == want))
            .collect(),
    }
}

fn run(cli: Cli) -> Result<i32, metaplectic::Error> {
    let seed = resolve_seed(cli.seed).map_err(metaplectic::Error::ParseError)?;
    let make_cfg = |p: u64, m: usize| RunConfig::new(p, m, cli.precision, cli.samples, seed);
    let human = !cli.json;

    match cli.command {
        Command::VerifyCocycle { name } => {
            let grid = harness::cocycle_grid(&name)?;
            let points = campaign_points(&grid, cli.p, cli.m, true);
            let mut reports = Vec::new();
            for (p, m) in points {
                let cfg = make_cfg(p, m)?;
                let t0 = std::time::Instant::now();
                let report = verify_cocycle(&name, &cfg)?;
                finish_report(report, t0, human, &mut reports);
            }
            emit_campaign(reports, cli.json)
        }
        Command::VerifyLemma { lemma, list } => {
            if list {
                for id in lemma_ids() {
                    println!("{id}");
                }
                return Ok(0);
            }
            let ids: Vec<&str> = match &lemma {
                Some(id) => vec![id.as_str()],
                None => lemma_ids(),
            };
            let mut reports = Vec::new();
            for id in ids {
                let grid = lemma_grid(id)?;
                let points = campaign_points(&grid, cli.p, cli.m, lemma.is_some());
                for (p, m) in points {
                    let cfg = make_cfg(p, m)?;
                    let t0 = std::time::Instant::now();
                    let report = verify_lemma(id, &cfg)?;
                    finish_report(report, t0, human, &mut reports);
                }
            }
            emit_campaign(reports, cli.json)
        }
        Command::Table { what } => {
            let cfg = make_cfg(cli.p.unwrap_or(3), cli.m.unwrap_or(1))?;
            let table = render_table(&what, &cfg)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&table).expect("table serializes"));
            } else {
                print!("{}", table.render_text());
            }
            Ok(0)
        }
        Command::Decompose { input } => {
            let cfg = make_cfg(cli.p.unwrap_or(3), cli.m.unwrap_or(1))?;
            let report = decompose(&cfg, &input)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.render_text());
            }
            Ok(0)
        }
        Command::Hilbert { a, b } => {
            let cfg = make_cfg(cli.p.unwrap_or(3), cli.m.unwrap_or(1))?;
            let value = hilbert_eval(&cfg, &a, &b)?;
            if cli.json {
                let rep = HilbertReport { p: cfg.p, a, b, value };
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                println!("{}", if value > 0 { "+1" } else { "-1" });
            }
            Ok(0)
        }
    }
}

fn finish_report(
    report: LemmaReport,
    t0: std::time::Instant,
    human: bool,
    reports: &mut Vec<LemmaReport>,
) {
    if human {
        println!("{}", report.render_line());
        eprintln!(
            "  ({} p={} m={}: {} trials in {:?})",
            report.lemma_id,
            report.p,
            report.m,
            report.trials,
            t0.elapsed()
        );
    }
    reports.push(report);
}

fn emit_campaign(reports: Vec<LemmaReport>, json: bool) -> Result<i32, metaplectic::Error> {
    let campaign = summarize(reports);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&campaign).expect("campaign serializes")
        );
    } else {
        let s = &campaign.summary;
        println!(
            "summary: {} campaign points, {} trials, {} failures: {}",
            s.lemmas,
            s.trials,
            s.failures,
            if s.all_pass { "all pass" } else { "FAIL" }
        );
    }
    Ok(if campaign.summary.all_pass { 0 } else { 1 })
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
