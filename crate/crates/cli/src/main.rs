//! Command-line front end: coefficient dumps, congruence verification with
//! JSON certificates, cusp ledgers, Sturm bounds, and progression scanning.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mocksieve_core::eta::{certificate_passes, rat_str};
use mocksieve_core::generators::generate;
use mocksieve_core::modular::Rat;
use mocksieve_core::verify::{check_progressions, plan_claim, scan_progressions};
use mocksieve_core::{
    holomorphy_certificate, sturm_bound, verify_claim, BoundPolicy, CongruenceClaim, EtaQuotient,
    Family, GroupKind, Integers, Series, SeriesId,
};

#[derive(Parser)]
#[command(name = "mocksieve", version, about = "mock theta congruence tooling")]
struct Cli {
    /// Worker threads for the cusp sweeps (default: all cores). Outputs are
    /// identical for any value; only timings change.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump series coefficients as CSV
    Coeffs(CoeffsArgs),
    /// Verify a congruence claim and emit a JSON certificate
    Verify(VerifyArgs),
    /// Cusp ledger for an eta quotient against a sieved family
    Cusps(CuspsArgs),
    /// Sturm bound for a weight and group index
    Sturm(SturmArgs),
    /// Scan for candidate congruences (heuristic, unverified)
    Scan(ScanArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    /// omega, cesaro or f
    #[arg(long, value_parser = SeriesId::from_str)]
    series: SeriesId,
    /// number of coefficients, starting at n = 0
    #[arg(long)]
    count: i64,
    /// reduce coefficients modulo this
    #[arg(long = "mod")]
    modulus: Option<u64>,
    /// output path (default stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// named preset: cesaro-3, cesaro-7 or omega-5
    #[arg(long, conflicts_with_all = ["series", "p", "a", "b"])]
    claim: Option<String>,
    #[arg(long, requires_all = ["p", "a", "b"], value_parser = SeriesId::from_str)]
    series: Option<SeriesId>,
    #[arg(long)]
    p: Option<u64>,
    /// progression step A in a(An+B)
    #[arg(long = "A")]
    a: Option<u64>,
    /// comma-separated progression offsets B
    #[arg(long = "B", value_delimiter = ',')]
    b: Option<Vec<u64>>,
    /// Sturm bound policy: paper, computed or max
    #[arg(long = "bound", default_value = "max", value_parser = BoundPolicy::from_str)]
    policy: BoundPolicy,
    /// write the JSON certificate here (default stdout)
    #[arg(long)]
    report: Option<PathBuf>,
    /// re-ingest a coeffs CSV and run the coefficient check against it
    /// instead of regenerating the series
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct CuspsArgs {
    #[arg(long, value_parser = Family::from_str)]
    family: Family,
    /// sieve modulus in embedded-exponent units
    #[arg(long)]
    m: u64,
    /// eta quotient as "delta:r,delta:r", e.g. 24:12,1:24
    #[arg(long)]
    eta: String,
    #[arg(long)]
    level: u64,
    /// gamma0 or gamma1
    #[arg(long, value_parser = GroupKind::from_str)]
    group: GroupKind,
    /// target exponent residues mod m (defaults to the known sieve targets)
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<u64>>,
    /// also write the ledger as JSON
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SturmArgs {
    /// weight as an integer or "num/den"
    #[arg(long)]
    weight: String,
    #[arg(long)]
    index: u64,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_parser = SeriesId::from_str)]
    series: SeriesId,
    /// raw coefficients to generate
    #[arg(long)]
    count: i64,
    #[arg(long)]
    pmax: u64,
    #[arg(long)]
    amax: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    let result = match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Cusps(args) => cmd_cusps(args),
        Command::Sturm(args) => cmd_sturm(args),
        Command::Scan(args) => cmd_scan(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<ExitCode> {
    if args.count < 1 {
        bail!("--count must be at least 1");
    }
    let mut out = open_out(&args.out)?;
    match args.modulus {
        Some(m) => {
            if m < 2 {
                bail!("--mod must be at least 2");
            }
            let s = generate(args.series, args.count, mocksieve_core::Residues::new(m));
            s.write_csv(&mut out)?;
        }
        None => {
            let s = generate(args.series, args.count, Integers);
            s.write_csv(&mut out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let claim = match (&args.claim, args.series) {
        (Some(name), None) => CongruenceClaim::named(name)?,
        (None, Some(series)) => CongruenceClaim::new(
            series,
            args.p.unwrap(),
            args.a.unwrap(),
            args.b.clone().unwrap(),
        )?,
        _ => bail!("give either --claim or the --series/--p/--A/--B quadruple"),
    };

    if let Some(input) = &args.input {
        // verification-only mode over a re-ingested CSV dump
        let file = File::open(input).with_context(|| format!("opening {}", input.display()))?;
        let series = Series::read_csv(Integers, BufReader::new(file))
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        let plan = plan_claim(&claim)?;
        let bound = plan
            .bound(args.policy)
            .map(|(b, _)| b)
            .unwrap_or(series.precision_end() as u64);
        let limit = plan.raw_limit(bound).min(series.precision_end() - 1);
        let (checked, first) = check_progressions(&series.reduce_mod(claim.p), &claim, limit);
        println!(
            "checked {checked} progression members to n = {limit}: {}",
            match first {
                None => "all vanish".to_string(),
                Some(n) => format!("first failure at n = {n}"),
            }
        );
        return Ok(if first.is_none() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }

    let cert = verify_claim(&claim, args.policy)?;
    let json = serde_json::to_string_pretty(&cert)?;
    match &args.report {
        Some(p) => {
            std::fs::write(p, json.as_bytes())
                .with_context(|| format!("writing {}", p.display()))?;
            println!(
                "{}: {} (bound {}, {} coefficients checked)",
                claim,
                if cert.pass { "pass" } else { "FAIL" },
                cert.sturm_bound,
                cert.coefficients_checked
            );
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::from(cert.exit_code() as u8))
}

fn default_targets(family: Family, m: u64) -> Option<Vec<u64>> {
    match (family, m) {
        (Family::Cesaro, 24) => Some(vec![7]),
        (Family::Cesaro, 56) => Some(vec![15, 23, 39]),
        (Family::Omega, 120) => Some(vec![83, 107]),
        _ => None,
    }
}

fn cmd_cusps(args: CuspsArgs) -> Result<ExitCode> {
    let quotient = EtaQuotient::parse(args.level, &args.eta)?;
    let targets = match args.targets {
        Some(t) => t,
        None => default_targets(args.family, args.m)
            .context("no default targets for this family/modulus; pass --targets")?,
    };
    let ledger = holomorphy_certificate(args.family, args.m, &quotient, args.group, &targets)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    println!("{:>12} {:>8} {:>16} {:>16} {:>16}", "cusp", "width", "poleBound", "etaOrder", "margin");
    for e in &ledger {
        println!(
            "{:>12} {:>8} {:>16} {:>16} {:>16}",
            e.cusp.to_string(),
            e.width,
            rat_str(&e.pole_bound),
            rat_str(&e.eta_order),
            rat_str(&e.margin)
        );
    }
    let pass = certificate_passes(&ledger);
    println!(
        "{} cusps, certificate {}",
        ledger.len(),
        if pass { "passes" } else { "FAILS" }
    );
    if let Some(p) = &args.json {
        std::fs::write(p, serde_json::to_string_pretty(&ledger)?)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn parse_rat(s: &str) -> Result<Rat> {
    let rat = match s.split_once('/') {
        Some((n, d)) => Rat::new(n.trim().parse()?, d.trim().parse()?),
        None => Rat::from_integer(s.trim().parse()?),
    };
    Ok(rat)
}

fn cmd_sturm(args: SturmArgs) -> Result<ExitCode> {
    let weight = parse_rat(&args.weight)?;
    if weight <= Rat::from_integer(0) {
        bail!("--weight must be positive");
    }
    println!("{}", sturm_bound(weight, args.index));
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    if args.count < 1 {
        bail!("--count must be at least 1");
    }
    let found = scan_progressions(args.series, args.count, args.pmax, args.amax);
    println!("# candidates below n = {} (heuristic, unverified)", args.count);
    for c in &found {
        println!("a_{}({}n+{}) = 0 (mod {})", args.series, c.a, c.b, c.p);
    }
    if let Some(p) = &args.json {
        std::fs::write(p, serde_json::to_string_pretty(&found)?)
            .with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
