use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use chromatic::flip::pseudomanifold_check;
use chromatic::matching::standard_matching_census;
use chromatic::osp::{deletion_composition_check, enumerate_osps, osp_count};
use chromatic::protocol::{self, Schedule};
use chromatic::wsb6::{self, VerifyOptions};
use chromatic::ColorSet;

const SCHEMA: &str = "chromatic-report/1";

#[derive(Parser)]
#[command(name = "chromatic", version, about = "Chromatic subdivision verification campaigns")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CHROMATIC_JOBS")]
    jobs: Option<usize>,
    /// Write the JSON report (or artifact) here.
    #[arg(long, global = true, env = "CHROMATIC_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive small-n suites on partitions, subdivisions and matchings.
    VerifyCore {
        /// Largest n for the standard matching census.
        #[arg(long, default_value_t = 4, env = "CHROMATIC_N")]
        n: u8,
        /// Subdivision depth for the pseudomanifold check.
        #[arg(long, default_value_t = 2, env = "CHROMATIC_D")]
        d: usize,
    },
    /// Build the exceptional-simplex table as sorted JSON Lines.
    BuildExsimp,
    /// Census, matchings, compliance and sampling for the 6-process labeling.
    VerifyWsb6 {
        #[arg(long, default_value_t = 1_000_000, env = "CHROMATIC_SAMPLE")]
        sample: u64,
        #[arg(long, default_value_t = 0, env = "CHROMATIC_SEED")]
        seed: u64,
        /// Level-1 index range `A..B` of the census.
        #[arg(long, env = "CHROMATIC_SHARDS")]
        shards: Option<String>,
        /// Skip the per-vertex oracle comparison.
        #[arg(long)]
        no_oracle: bool,
    },
    /// Run the protocol on given or random schedules.
    Simulate {
        /// File with one schedule per line (`round||round||round`).
        #[arg(long, conflicts_with = "random")]
        schedule: Option<PathBuf>,
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 0, env = "CHROMATIC_SEED")]
        seed: u64,
    },
    /// Defeat every one-round decision map.
    Impossibility {
        #[arg(long, default_value_t = 3, env = "CHROMATIC_N")]
        n: usize,
    },
}

fn parse_range(s: &str) -> Result<std::ops::Range<usize>> {
    let (a, b) = s.split_once("..").context("shards must look like A..B")?;
    Ok(a.trim().parse()?..b.trim().parse()?)
}

fn verify_core(n: u8, d: usize) -> Result<(Value, bool, String)> {
    let mut ok = true;
    let counts: Vec<u64> = (1..=5).map(osp_count).collect();
    let enumerated: Vec<u64> = (1..=5u8)
        .map(|m| enumerate_osps(ColorSet::full(m)).map(|v| v.len() as u64))
        .collect::<chromatic::Result<_>>()?;
    let parity = counts.iter().all(|f| f % 2 == 1);
    ok &= counts == enumerated && counts == [3, 13, 75, 541, 4683] && parity;
    let mut pm = Vec::new();
    for m in 1..=3u8 {
        for dd in 1..=d.min(2) {
            let r = pseudomanifold_check(m, dd)?;
            ok &= r.ok();
            pm.push(serde_json::to_value(&r)?);
        }
    }
    let (comp_checked, comp_bad) = deletion_composition_check(3);
    ok &= comp_bad.is_empty();
    let mut census = Vec::new();
    for m in 3..=n {
        let c = standard_matching_census(m)?;
        ok &= c.ok();
        census.push(serde_json::to_value(&c)?);
    }
    let line = format!(
        "f: {}; parity {}",
        counts.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        if parity { "OK" } else { "FAILED" }
    );
    let report = json!({
        "f": counts,
        "enumerated": enumerated,
        "parity_odd": parity,
        "pseudomanifold": pm,
        "deletion_composition": {"checked": comp_checked, "failures": comp_bad},
        "standard_census": census,
    });
    Ok((report, ok, line))
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(j) = cli.common.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let out = cli.common.out.clone();
    let (name, report, ok, line) = match cli.command {
        Command::VerifyCore { n, d } => {
            if !(3..=5).contains(&n) {
                bail!("--n must lie in 3..=5");
            }
            let (r, ok, line) = verify_core(n, d)?;
            ("verify-core", r, ok, line)
        }
        Command::BuildExsimp => {
            let t = wsb6::build_exsimp()?;
            let hash = t.sha256();
            if let Some(p) = &out {
                fs::write(p, t.to_jsonl()).with_context(|| format!("writing {}", p.display()))?;
            } else {
                std::io::stdout().write_all(t.to_jsonl().as_bytes())?;
            }
            eprintln!("records: {}  sha256: {hash}", t.len());
            return Ok(true);
        }
        Command::VerifyWsb6 {
            sample,
            seed,
            shards,
            no_oracle,
        } => {
            let opts = VerifyOptions {
                samples: sample,
                seed,
                oracle: !no_oracle,
                shards: shards.as_deref().map(parse_range).transpose()?,
                ..VerifyOptions::default()
            };
            let r = wsb6::verify_theorem(&opts)?;
            let ok = r.ok();
            let line = if !r.complete {
                format!("incomplete census over level-1 range {}..{}", r.shard_start, r.shard_end)
            } else if ok {
                format!(
                    "perfect matching: 21 paths applied, {} critical; {} monochromatic samples",
                    r.final_criticals, r.monochromatic_samples
                )
            } else {
                "violations found".to_string()
            };
            ("verify-wsb6", serde_json::to_value(&r)?, ok, line)
        }
        Command::Simulate { schedule, random, seed } => {
            let (r, verdicts) = match (schedule, random) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let schedules = text
                        .lines()
                        .filter(|l| !l.trim().is_empty())
                        .map(|l| l.parse::<Schedule>())
                        .collect::<chromatic::Result<Vec<_>>>()?;
                    let verdicts = schedules
                        .iter()
                        .map(protocol::check_wsb_execution)
                        .collect::<chromatic::Result<Vec<_>>>()?;
                    (protocol::run_schedules(&schedules, seed), Some(verdicts))
                }
                (None, n) => (protocol::campaign(n.unwrap_or(1000), seed), None),
            };
            let ok = r.ok();
            let line = format!("{} schedules, {} passes", r.schedules, r.passes);
            let mut v = serde_json::to_value(&r)?;
            if let Some(vs) = verdicts {
                v["verdicts"] = serde_json::to_value(vs)?;
            }
            ("simulate", v, ok, line)
        }
        Command::Impossibility { n } => {
            let r = protocol::brute_force_one_round(n)?;
            let ok = r.ok();
            let line = format!("n={}: {}/{} maps defeated", r.n, r.defeated, r.maps);
            let v = json!({"one_round": r, "bounds": protocol::bounds()});
            ("impossibility", v, ok, line)
        }
    };
    let full = json!({"schema": SCHEMA, "command": name, "ok": ok, "report": report});
    let text = serde_json::to_string_pretty(&full)?;
    match &out {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    eprintln!("{line}");
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
