// SPDX-License-Identifier: Apache-2.0

//! `gridfree`: build the conic hypergraphs, verify them, and run the
//! number-theoretic audits.
//!
//! Exit codes: 0 success, 1 a contracted property failed, 2 usage or parse
//! error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gridfree::charsum::appendix_audit;
use gridfree::construct::{self, Construction};
use gridfree::detect::{self, MAX_CORE_VERTICES};
use gridfree::ffield::{odd_primes_in, Prime};
use gridfree::geometry::pascal_sample;
use gridfree::hypergraph::{self, encode_with_provenance, Hypergraph3};
use gridfree::lemma::coverage_result;
use gridfree::{Exec, Kind};

#[derive(Parser, Debug)]
#[command(
    name = "gridfree",
    version,
    about = "Grid-free linear 3-uniform hypergraphs from conics over F_p"
)]
struct Cli {
    /// Pretty-print JSON instead of compact single-line output.
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    /// Compact JSON (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a construction, writing `.hg3` and a sibling `.report.json`.
    Construct {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        p: u64,
        /// Sampling probability as `num/den` (random only).
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check structural properties of an `.hg3` file.
    Verify {
        input: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "linear,gridfree,prismfree,corefree9"
        )]
        checks: Vec<CheckArg>,
    },
    /// Print grid, prism and small-core witnesses for an `.hg3` file.
    Detect {
        input: PathBuf,
        /// Vertex budget for the small 2-core search.
        #[arg(long, default_value_t = 9)]
        core: usize,
    },
    /// Secant census and character-sum identities, one JSON line per prime.
    Census {
        #[arg(long)]
        p: String,
    },
    /// Covering-lemma expectation, bound and error term for each N.
    Lemma {
        #[arg(long = "N")]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Pascal's property on seeded random hexagons of the parabola.
    Pascal {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Base,
    Random,
    Qr,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum CheckArg {
    Linear,
    Gridfree,
    Prismfree,
    Corefree9,
}

/// Usage errors map to exit 2; everything that reaches a report maps to
/// 0 or 1.
enum Failure {
    Usage(anyhow::Error),
    Violation,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    seed: Option<u64>,
    version: &'static str,
    input: Option<String>,
    output: Option<String>,
}

impl RunManifest {
    fn new(command: &str, parameters: Value) -> Self {
        RunManifest {
            command: command.to_owned(),
            parameters,
            seed: None,
            version: env!("CARGO_PKG_VERSION"),
            input: None,
            output: None,
        }
    }
}

struct Out {
    pretty: bool,
}

impl Out {
    fn render<T: Serialize>(&self, value: &T) -> String {
        if self.pretty {
            serde_json::to_string_pretty(value).expect("serializable")
        } else {
            serde_json::to_string(value).expect("serializable")
        }
    }

    fn line<T: Serialize>(&self, value: &T) {
        println!("{}", self.render(value));
    }
}

/// `a..b` (inclusive) or a single value.
fn parse_range(s: &str) -> anyhow::Result<(u64, u64)> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<u64>()?,
            b.trim().trim_start_matches('=').parse::<u64>()?,
        ),
        None => {
            let v = s.trim().parse::<u64>()?;
            (v, v)
        }
    };
    if lo > hi {
        bail!("empty range {s}");
    }
    Ok((lo, hi))
}

fn parse_rational(s: &str) -> anyhow::Result<(u64, u64)> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    Ok((n.trim().parse()?, d.trim().parse()?))
}

fn with_merged<T: Serialize>(record: &T, manifest: &RunManifest) -> Value {
    let mut v = serde_json::to_value(record).expect("serializable");
    if let Value::Object(map) = &mut v {
        map.insert(
            "manifest".into(),
            serde_json::to_value(manifest).expect("serializable"),
        );
    }
    v
}

fn report_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.report.json"))
}

fn cmd_construct(
    out_fmt: &Out,
    kind: KindArg,
    p: u64,
    rho: Option<String>,
    seed: Option<u64>,
    out: &Path,
) -> Result<(), Failure> {
    let mut params = json!({ "kind": format!("{kind:?}").to_lowercase(), "p": p });
    let built: Construction = match (kind, &rho) {
        (KindArg::Random, Some(r)) => {
            let (num, den) = parse_rational(r).context("--rho must be num/den")?;
            params["rho"] = json!(format!("{num}/{den}"));
            construct::build_random(p, num, den, seed.unwrap_or(0))
        }
        (KindArg::Random, None) => return Err(anyhow!("random construction needs --rho").into()),
        (_, Some(_)) => return Err(anyhow!("--rho only applies to the random construction").into()),
        (KindArg::Base, None) => construct::build_base(p),
        (KindArg::Qr, None) => construct::build_qr(p),
    }
    .map_err(|e| anyhow!(e))?;

    let mut manifest = RunManifest::new("construct", params);
    manifest.seed = built.report.seed;
    manifest.output = Some(out.display().to_string());

    let text = encode_with_provenance(&built.hypergraph, Some(&built.vertices));
    std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
    let report = with_merged(&built.report, &manifest);
    let rp = report_path(out);
    std::fs::write(&rp, out_fmt.render(&report) + "\n")
        .with_context(|| format!("writing {}", rp.display()))?;
    out_fmt.line(&report);

    let mut violations = built.report.violations();
    if !hypergraph::is_linear(&built.hypergraph) {
        violations.push("hypergraph is not linear".into());
    }
    if built.report.kind == Kind::Base
        && built.report.m as i64 != construct::predicted_base_edges(Prime::new(p).unwrap())
    {
        violations.push("base edge count differs from p(p - chi(-1))/4".into());
    }
    for v in &violations {
        eprintln!("invariant violated: {v}");
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn read_hg3(path: &Path) -> Result<Hypergraph3, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    hypergraph::decode(&text).map_err(|e| Failure::Usage(anyhow!("{}: {e}", path.display())))
}

fn cmd_verify(out: &Out, input: &Path, checks: &[CheckArg], exec: Exec) -> Result<(), Failure> {
    let h = read_hg3(input)?;
    let mut results = Vec::new();
    let mut all_pass = true;
    for &check in checks {
        let (pass, witness) = match check {
            CheckArg::Linear => (hypergraph::is_linear(&h), Value::Null),
            CheckArg::Gridfree => match detect::find_grid_with(&h, exec) {
                None => (true, Value::Null),
                Some(w) => (false, serde_json::to_value(w).unwrap()),
            },
            CheckArg::Prismfree => match detect::find_prism_with(&h, exec) {
                None => (true, Value::Null),
                Some(w) => (false, serde_json::to_value(w).unwrap()),
            },
            CheckArg::Corefree9 => {
                match detect::find_small_two_core_with(&h, 9, exec).map_err(|e| anyhow!(e))? {
                    None => (true, Value::Null),
                    Some(w) => (false, serde_json::to_value(w).unwrap()),
                }
            }
        };
        all_pass &= pass;
        results.push(json!({ "check": check, "pass": pass, "witness": witness }));
    }
    let mut manifest = RunManifest::new("verify", json!({ "checks": checks }));
    manifest.input = Some(input.display().to_string());
    out.line(&json!({ "n": h.n(), "m": h.m(), "pass": all_pass, "results": results, "manifest": manifest }));
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn cmd_detect(out: &Out, input: &Path, core: usize, exec: Exec) -> Result<(), Failure> {
    if core > MAX_CORE_VERTICES {
        return Err(anyhow!("--core must be at most {MAX_CORE_VERTICES}").into());
    }
    let h = read_hg3(input)?;
    let small = detect::find_small_two_core_with(&h, core, exec).map_err(|e| anyhow!(e))?;
    let mut manifest = RunManifest::new("detect", json!({ "core": core }));
    manifest.input = Some(input.display().to_string());
    out.line(&json!({
        "n": h.n(),
        "m": h.m(),
        "grid": detect::find_grid_with(&h, exec),
        "prism": detect::find_prism_with(&h, exec),
        "two_core_edges": detect::two_core(&h).m(),
        "small_core": small,
        "manifest": manifest,
    }));
    Ok(())
}

fn primes_in(range: &str, min: u64) -> anyhow::Result<(Vec<u64>, Vec<u64>)> {
    let (lo, hi) = parse_range(range)?;
    let primes: Vec<u64> = odd_primes_in(lo.max(min), hi).map(Prime::get).collect();
    let skipped = (lo..=hi).filter(|v| !primes.contains(v)).collect();
    Ok((primes, skipped))
}

fn cmd_census(out: &Out, range: &str, exec: Exec) -> Result<(), Failure> {
    let (primes, skipped) = primes_in(range, 5).context("--p must be a range like 7..11")?;
    let manifest = RunManifest::new("census", json!({ "p": range, "skipped": skipped }));
    let mut failed = false;
    for p in primes {
        let audit = appendix_audit(p, exec).map_err(|e| anyhow!(e))?;
        for v in audit.violations() {
            eprintln!("identity failed: {v}");
            failed = true;
        }
        out.line(&with_merged(&audit, &manifest));
    }
    if failed {
        Err(Failure::Violation)
    } else {
        Ok(())
    }
}

fn cmd_lemma(out: &Out, range: &str, seed: u64, exec: Exec) -> Result<(), Failure> {
    let (lo, hi) = parse_range(range).context("--N must be a range like 4..12")?;
    if lo < 2 {
        return Err(anyhow!("N must be at least 2").into());
    }
    let mut manifest = RunManifest::new("lemma", json!({ "N": range }));
    manifest.seed = Some(seed);
    let mut failed = false;
    for n in lo..=hi {
        let r = coverage_result(n as usize, seed, exec).map_err(|e| anyhow!(e))?;
        for v in r.violations() {
            eprintln!("N={n}: {v}");
            failed = true;
        }
        out.line(&with_merged(&r, &manifest));
    }
    if failed {
        Err(Failure::Violation)
    } else {
        Ok(())
    }
}

fn cmd_pascal(out: &Out, p: u64, samples: usize, seed: u64, exec: Exec) -> Result<(), Failure> {
    let prime = Prime::at_least(p, 7).map_err(|e| anyhow!(e))?;
    let summary = pascal_sample(prime, samples, seed, exec);
    let mut manifest = RunManifest::new("pascal", json!({ "p": p, "samples": samples }));
    manifest.seed = Some(seed);
    out.line(&with_merged(&summary, &manifest));
    if summary.failures == 0 {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = Out { pretty: cli.pretty };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let started = Instant::now();
    let result = match cli.command {
        Command::Construct {
            kind,
            p,
            rho,
            seed,
            out: path,
        } => cmd_construct(&out, kind, p, rho, seed, &path),
        Command::Verify { input, checks } => cmd_verify(&out, &input, &checks, exec),
        Command::Detect { input, core } => cmd_detect(&out, &input, core, exec),
        Command::Census { p } => cmd_census(&out, &p, exec),
        Command::Lemma { n, seed } => cmd_lemma(&out, &n, seed, exec),
        Command::Pascal { p, samples, seed } => cmd_pascal(&out, p, samples, seed, exec),
    };
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
