use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::{info, warn};

use exsieve::cache::{cache_dir_from_env, load_or_build};
use exsieve::characters::{gauss_sum, invariant_report};
use exsieve::experiment::{
    cache_manage, load_config, run_suite, CacheAction, CacheStatus, CsvTable, RunConfig,
    SUITE_NAMES,
};
use exsieve::kloosterman::{nkl_decompose, NklParams};
use exsieve::lfunctions::{default_terms, l_value, scan_real_zeros};
use exsieve::progression_sums::{decomposition_pipeline, CharacterTables};
use exsieve::sieve_weights::{build_weight, sieve_indicator_defect, ZrSchedule};
use exsieve::{FactorTable, RealPrimitiveCharacter};

#[derive(Parser, Debug)]
#[command(
    name = "exsieve",
    version,
    about = "Exact checks for primes in progressions and real characters"
)]
struct Cli {
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Where to write the CSV output.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural checks for the character (d|·).
    Char {
        #[arg(allow_hyphen_values = true)]
        d: i64,
    },
    /// L(s, χ_d) with its tail bound, optionally scanning for real zeros.
    Lfunc {
        #[arg(allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long)]
        terms: Option<u64>,
        /// Scan [lo, 1) for sign changes.
        #[arg(long)]
        scan_from: Option<f64>,
    },
    /// Beta-sieve weights at level z and exponent u.
    Sieve {
        #[arg(long)]
        z: f64,
        #[arg(long)]
        u: f64,
        /// Check the indicator approximation for n up to this bound.
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
    /// Exact decomposition of the short double count N(K, L).
    Nkl {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        /// Modulus of the congruence on k.
        #[arg(long = "modulus")]
        modulus: u64,
        #[arg(long)]
        r: u64,
    },
    /// ψ(x; q, a) split into its main term, Δ, S₁, S₂ and corrections.
    Decompose {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        z: f64,
    },
    /// Run a named suite, or `all`.
    Suite { name: String },
    /// Manage the smallest-prime-factor cache.
    Cache {
        #[arg(value_parser = ["build", "verify", "purge"])]
        action: String,
    },
}

struct Report {
    table: CsvTable,
    ok: bool,
}

fn print_table(t: &CsvTable) {
    println!("{}", t.header().join("\t"));
    for row in t.rows() {
        println!("{}", row.join("\t"));
    }
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let loaded =
                load_config(path).with_context(|| format!("loading {}", path.display()))?;
            for w in &loaded.warnings {
                warn!("{w}");
            }
            loaded.config
        }
        None => RunConfig::standard(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn factor_table(limit: u64) -> Result<FactorTable> {
    let dir = cache_dir_from_env();
    info!("factor table up to {limit} (cache: {dir:?})");
    Ok(load_or_build(limit, dir.as_deref())?)
}

fn char_report(d: i64, seed: u64) -> Result<Report> {
    let chi = RealPrimitiveCharacter::new(d)?;
    let g = gauss_sum(&chi);
    println!(
        "d = {d}, D = {}, parity {}, G = {} + {}i",
        chi.modulus(),
        chi.parity(),
        g.re(),
        g.im()
    );
    let rows = invariant_report(&chi, seed);
    let mut t = CsvTable::new(&["check", "passed", "max_defect"]);
    for r in &rows {
        t.push(vec![
            r.name.to_string(),
            r.passed.to_string(),
            r.max_defect.to_string(),
        ])?;
    }
    Ok(Report {
        ok: rows.iter().all(|r| r.passed),
        table: t,
    })
}

fn lfunc_report(d: i64, s: f64, terms: Option<u64>, scan_from: Option<f64>) -> Result<Report> {
    let chi = RealPrimitiveCharacter::new(d)?;
    let terms = terms.unwrap_or_else(|| default_terms(&chi));
    let l = l_value(&chi, s, terms)?;
    let mut t = CsvTable::new(&[
        "d",
        "s",
        "terms",
        "value",
        "tail_bound",
        "zeros",
        "closest_beta",
        "eta",
    ]);
    let (mut zeros, mut beta, mut eta) = (String::new(), String::new(), String::new());
    if let Some(lo) = scan_from {
        let rep = scan_real_zeros(&chi, lo, 1.0, 64, 1e-10, terms)?;
        zeros = rep.zeros.len().to_string();
        if let Some(z) = rep.closest {
            beta = z.beta.to_string();
            eta = z.eta.to_string();
        }
    }
    t.push(vec![
        d.to_string(),
        s.to_string(),
        l.terms.to_string(),
        l.value.to_string(),
        l.tail_bound.to_string(),
        zeros,
        beta,
        eta,
    ])?;
    Ok(Report { table: t, ok: true })
}

fn sieve_report(z: f64, u: f64, n: u64) -> Result<Report> {
    let table = factor_table(n.max(2))?;
    let w = build_weight(z, u, &table)?;
    let schedule = ZrSchedule::new(z, u)?;
    let mut below = 0u64;
    let mut worst = 0.0f64;
    for m in 1..=n {
        let d = sieve_indicator_defect(m, &w, &schedule, &table)?;
        if d.convolved < d.indicator {
            below += 1;
        }
        if d.defect > 0.0 {
            worst = worst.max(d.defect / d.bound);
        }
    }
    let mut t = CsvTable::new(&[
        "z",
        "u",
        "support_size",
        "n_max",
        "upper_bound_violations",
        "max_defect_over_bound",
    ]);
    t.push(vec![
        z.to_string(),
        u.to_string(),
        w.support_size().to_string(),
        n.to_string(),
        below.to_string(),
        worst.to_string(),
    ])?;
    Ok(Report {
        table: t,
        ok: below == 0,
    })
}

fn nkl_report(p: NklParams) -> Result<Report> {
    let dec = nkl_decompose(&p, None)?;
    let mut t = CsvTable::new(&["direct", "m1", "m2", "e", "e_bottom", "overlap", "residual"]);
    t.push(vec![
        dec.direct.to_string(),
        dec.m1.to_string(),
        dec.m2.to_string(),
        dec.e.to_string(),
        dec.e_bottom.to_string(),
        dec.overlap.to_string(),
        dec.residual.to_string(),
    ])?;
    Ok(Report {
        table: t,
        ok: dec.closes(1e-6),
    })
}

fn decompose_report(x: f64, q: u64, a: u64, d: i64, z: f64) -> Result<Report> {
    if !(x >= 1.0) {
        bail!("x = {x} must be at least 1");
    }
    let n = x.floor() as u64;
    let table = factor_table(n.max(2))?;
    let tabs = CharacterTables::build(RealPrimitiveCharacter::new(d)?, n, &table)?;
    let r = decomposition_pipeline(x, q, a, z, &tabs, &table)?;
    let mut t = CsvTable::new(&[
        "psi_prog",
        "main",
        "delta",
        "s1",
        "s2",
        "small_prime_prog",
        "small_prime_coprime",
        "correction",
        "lhs_minus_rhs",
    ]);
    t.push(vec![
        r.psi_prog.to_string(),
        r.main.to_string(),
        r.delta.to_string(),
        r.s1.to_string(),
        r.s2.to_string(),
        r.small_prime_prog.to_string(),
        r.small_prime_coprime.to_string(),
        r.correction.to_string(),
        r.lhs_minus_rhs.to_string(),
    ])?;
    Ok(Report {
        table: t,
        ok: r.closes(),
    })
}

fn suites(cfg: &RunConfig, name: &str, csv: Option<&Path>) -> Result<bool> {
    let names: Vec<&str> = if name == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&name) {
        vec![name]
    } else {
        bail!(
            "unknown suite `{name}`; expected `all` or one of {}",
            SUITE_NAMES.join(", ")
        );
    };
    let table = factor_table(cfg.table_limit)?;
    let mut ok = true;
    for n in names {
        let path = match csv {
            Some(p) if name != "all" => p.to_path_buf(),
            Some(dir) => dir.join(format!("{n}.csv")),
            None => cfg.output_path.join(format!("{n}.csv")),
        };
        let r = run_suite(n, cfg, &table, &path)?;
        println!(
            "{:<12} {}/{} passed  max_residual {:.3e}  {:.2?}  {}",
            r.suite_name,
            r.cases_passed,
            r.cases_run,
            r.max_residual,
            r.wall_time,
            r.csv_path.display()
        );
        ok &= r.all_passed();
    }
    Ok(ok)
}

fn cache(cfg: &RunConfig, action: &str) -> Result<bool> {
    let action: CacheAction = action.parse()?;
    let dir = cache_dir_from_env().unwrap_or_else(|| cfg.output_path.join("cache"));
    let status = cache_manage(action, cfg, &dir)?;
    match &status {
        CacheStatus::Built { path } => println!("built {}", path.display()),
        CacheStatus::Verified {
            path,
            sampled,
            mismatches,
        } => println!(
            "verified {}: {sampled} sampled, {mismatches} mismatches",
            path.display()
        ),
        CacheStatus::Purged { removed } => {
            println!("purged {removed} file(s) from {}", dir.display())
        }
    }
    Ok(status.ok())
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let cfg = config(cli)?;
    let report = match &cli.command {
        Command::Suite { name } => return suites(&cfg, name, cli.csv.as_deref()),
        Command::Cache { action } => return cache(&cfg, action),
        Command::Char { d } => char_report(*d, cfg.seed)?,
        Command::Lfunc {
            d,
            s,
            terms,
            scan_from,
        } => lfunc_report(*d, *s, *terms, *scan_from)?,
        Command::Sieve { z, u, n } => sieve_report(*z, *u, *n)?,
        Command::Nkl {
            k,
            l,
            delta,
            q,
            a,
            modulus,
            r,
        } => nkl_report(NklParams {
            k: *k,
            l: *l,
            delta: *delta,
            q: *q,
            a: *a,
            d: *modulus,
            r: *r,
        })?,
        Command::Decompose { x, q, a, d, z } => decompose_report(*x, *q, *a, *d, *z)?,
    };
    print_table(&report.table);
    if let Some(path) = &cli.csv {
        report.table.write(path)?;
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
