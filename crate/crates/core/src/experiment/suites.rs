//! The named suites. Each one expands the configured grids into cases, runs
//! them on the rayon pool and writes one CSV row per case in input order.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::RunConfig;
use super::csv::CsvTable;
use crate::arith::{arith_table, floor_arg, ArithKind, FactorTable};
use crate::calibration::{
    COPRIME_LAMBDA_RATIO_MAX, HYPERBOLA_CALIBRATED_X_MIN, PROGRESSION_LAMBDA_RATIO_MAX,
    SIEVE_DEFECT_C, VANISHING_MAIN_TERM_GUARD, WEIGHTED_SUM_C,
};
use crate::characters::{invariant_report, RealPrimitiveCharacter};
use crate::csv_row;
use crate::error::{Error, Result};
use crate::kloosterman::{
    nkl_decompose, ramanujan_sum, random_nkl_params, weil_check, KloostermanContext,
};
use crate::lfunctions::{certify_positive, default_terms, fdp_report, l_value, scan_real_zeros};
use crate::modular::gcd;
use crate::progression_sums::{
    decomposition_pipeline, lambda_sum_coprime, lambda_sum_progression, verify_lL_identity,
    CharacterTables,
};
use crate::sieve_weights::{
    build_weight, in_support, sieve_indicator_defect, weighted_sum_ratio, ZrSchedule,
};

pub const SUITE_NAMES: [&str; 7] = [
    "identities",
    "characters",
    "kloosterman",
    "sieve",
    "hyperbola",
    "decompose",
    "lfunc",
];

const HEADER: [&str; 7] = [
    "case",
    "check",
    "params",
    "value",
    "reference",
    "residual",
    "passed",
];

/// Exponents paired with every `z` of the grid in the sieve suite.
pub const SIEVE_U_GRID: [f64; 3] = [4.0, 6.0, 8.0];
/// Largest `n` scanned by the sieve suite.
pub const SIEVE_N_MAX: u64 = 100_000;
pub const DECOMPOSITION_POINTS: usize = 200;
/// Moduli drawn by [`standard_decomposition_grid`].
pub const DECOMPOSITION_MODULI: [u64; 11] = [1, 3, 4, 5, 7, 8, 12, 15, 24, 40, 101];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub suite_name: String,
    pub cases_run: u64,
    pub cases_passed: u64,
    pub max_residual: f64,
    pub wall_time: Duration,
    pub csv_path: PathBuf,
}

impl SuiteResult {
    pub fn all_passed(&self) -> bool {
        self.cases_passed == self.cases_run
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Row {
    check: &'static str,
    params: String,
    value: f64,
    reference: f64,
    residual: f64,
    passed: bool,
}

impl Row {
    fn new(
        check: &'static str,
        params: String,
        value: f64,
        reference: f64,
        residual: f64,
        passed: bool,
    ) -> Self {
        Self {
            check,
            params,
            value,
            reference,
            residual,
            passed,
        }
    }
}

/// One point of the decomposition grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionPoint {
    pub x: f64,
    pub q: u64,
    pub a: u64,
    pub disc: i64,
    pub z: f64,
}

/// `count` points cycling through every `(x, z, d)` combination, with `q`
/// drawn from `moduli` and `a` a uniformly random reduced residue mod `q`.
pub fn decomposition_grid(
    xs: &[f64],
    zs: &[f64],
    discs: &[i64],
    moduli: &[u64],
    seed: u64,
    count: usize,
) -> Vec<DecompositionPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let x = xs[i % xs.len()];
            let z = zs[(i / xs.len()) % zs.len()];
            let disc = discs[(i / (xs.len() * zs.len())) % discs.len()];
            let q = moduli[rng.gen_range(0..moduli.len())];
            let a = loop {
                let a = rng.gen_range(1..=q);
                if gcd(a, q) == 1 {
                    break a % q;
                }
            };
            DecompositionPoint { x, q, a, disc, z }
        })
        .collect()
}

/// The 200-point grid: `x ∈ {10⁴, 10⁵, 10⁶}`, `z ∈ {5, 10, 30}`,
/// `d ∈ {−3, −4, 5, 8, −8, 12}` and `q` from [`DECOMPOSITION_MODULI`].
pub fn standard_decomposition_grid(seed: u64) -> Vec<DecompositionPoint> {
    decomposition_grid(
        &[1e4, 1e5, 1e6],
        &[5.0, 10.0, 30.0],
        &[-3, -4, 5, 8, -8, 12],
        &DECOMPOSITION_MODULI,
        seed,
        DECOMPOSITION_POINTS,
    )
}

fn reduced_residues(q: u64) -> impl Iterator<Item = u64> {
    (0..q).filter(move |&a| gcd(a, q) == 1)
}

fn characters_of(cfg: &RunConfig) -> Result<Vec<RealPrimitiveCharacter>> {
    cfg.discriminants
        .iter()
        .map(|&d| RealPrimitiveCharacter::new(d))
        .collect()
}

fn tables_of(cfg: &RunConfig, n: u64, table: &FactorTable) -> Result<Vec<CharacterTables>> {
    characters_of(cfg)?
        .into_par_iter()
        .map(|chi| CharacterTables::build(chi, n, table))
        .collect()
}

fn identities(cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    let n = floor_arg(cfg.max_x());
    let mut rows: Vec<Row> = characters_of(cfg)?
        .par_iter()
        .map(|chi| {
            let defect = verify_lL_identity(chi, n, table)?;
            let limit = 1e-9 * (n as f64).ln();
            Ok(Row::new(
                "lambda_prime_eq_lambda_conv_vm",
                format!("d={} N={n}", chi.discriminant()),
                defect,
                limit,
                defect,
                defect < limit,
            ))
        })
        .collect::<Result<_>>()?;

    let vm = arith_table(ArithKind::VonMangoldt, n, table)?;
    let tabs = tables_of(cfg, n, table)?;
    let mut jobs = Vec::new();
    for &x in &cfg.x_grid {
        for &q in &cfg.q_grid {
            jobs.push((None, x, q));
            for i in 0..tabs.len() {
                jobs.push((Some(i), x, q));
            }
        }
    }
    let partition: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(which, x, q)| {
            let seqs = match which {
                None => vec![("partition_vm", &vm, 0)],
                Some(i) => vec![
                    (
                        "partition_lambda",
                        &tabs[i].lambda,
                        tabs[i].chi.discriminant(),
                    ),
                    (
                        "partition_lambda_prime",
                        &tabs[i].lambda_prime,
                        tabs[i].chi.discriminant(),
                    ),
                ],
            };
            seqs.into_iter()
                .map(|(check, seq, d)| {
                    let total: f64 = reduced_residues(q)
                        .map(|a| seq.progression_sum(x, q, a))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .sum();
                    let reference = seq.coprime_sum(x, q)?;
                    let rel = (total - reference).abs() / reference.abs().max(1.0);
                    Ok(Row::new(
                        check,
                        format!("d={d} x={x} q={q}"),
                        total,
                        reference,
                        rel,
                        rel < 1e-9,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    rows.extend(partition.into_iter().flatten());
    Ok(rows)
}

fn characters(cfg: &RunConfig) -> Result<Vec<Row>> {
    let chis = characters_of(cfg)?;
    let per: Vec<Vec<Row>> = chis
        .par_iter()
        .map(|chi| {
            invariant_report(chi, cfg.seed)
                .into_iter()
                .map(|r| {
                    Row::new(
                        r.name,
                        format!("d={}", chi.discriminant()),
                        r.max_defect,
                        0.0,
                        r.max_defect,
                        r.passed,
                    )
                })
                .collect()
        })
        .collect();
    Ok(per.into_iter().flatten().collect())
}

fn kloosterman(cfg: &RunConfig) -> Result<Vec<Row>> {
    let tuples = random_nkl_params(cfg.seed, cfg.cases as usize);
    let mut rows: Vec<Row> = tuples
        .par_iter()
        .map(|p| {
            let dec = nkl_decompose(p, None)?;
            Ok(Row::new(
                "nkl_decomposition",
                format!(
                    "K={} L={} delta={} q={} a={} D={} r={}",
                    p.k, p.l, p.delta, p.q, p.a, p.d, p.r
                ),
                dec.direct as f64,
                dec.m1 + dec.m2 + dec.e,
                dec.residual.abs(),
                dec.closes(1e-6),
            ))
        })
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let weil_cases: Vec<(i64, i64, u64)> = (0..cfg.cases)
        .map(|_| {
            let c = rng.gen_range(1..=2000u64);
            (
                rng.gen_range(-10_000..=10_000),
                rng.gen_range(-10_000..=10_000),
                c,
            )
        })
        .collect();
    let weil: Vec<Row> = weil_cases
        .par_iter()
        .map(|&(m, n, c)| {
            let w = weil_check(m, n, c)?;
            Ok(Row::new(
                "weil_bound",
                format!("m={m} n={n} c={c}"),
                w.value.abs(),
                w.envelope,
                (w.value.abs() - w.envelope).max(0.0),
                w.ok,
            ))
        })
        .collect::<Result<_>>()?;
    rows.extend(weil);

    let ram: Vec<Row> = cfg
        .q_grid
        .par_iter()
        .map(|&q| {
            let ctx = KloostermanContext::new(q)?;
            let mut worst = 0.0f64;
            for s in 0..=100u64 {
                let k = ctx.value(s as i64, 0)?;
                worst = worst.max((k.value - ramanujan_sum(s, q) as f64).abs());
            }
            Ok(Row::new(
                "ramanujan_identity",
                format!("q={q} s<=100"),
                worst,
                0.0,
                worst,
                worst < 1e-6,
            ))
        })
        .collect::<Result<_>>()?;
    rows.extend(ram);
    Ok(rows)
}

fn sieve(cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    let n_max = SIEVE_N_MAX.min(table.limit());
    let mut pairs = Vec::new();
    for &z in &cfg.z_grid {
        for &u in &SIEVE_U_GRID {
            pairs.push((z, u));
        }
    }
    let per: Vec<Vec<Row>> = pairs
        .iter()
        .map(|&(z, u)| {
            let params = format!("z={z} u={u}");
            let w = build_weight(z, u, table)?;
            let schedule = ZrSchedule::new(z, u)?;
            let bad_entries = w
                .entries()
                .iter()
                .filter(|e| {
                    let sign = if e.primes.len() % 2 == 0 { 1 } else { -1 };
                    e.weight != sign
                        || e.primes.iter().product::<u64>() != e.d
                        || e.primes.windows(2).any(|p| p[0] <= p[1])
                        || !in_support(&e.primes, z, u)
                })
                .count();
            let defects = (1..=n_max)
                .into_par_iter()
                .map(|n| sieve_indicator_defect(n, &w, &schedule, table))
                .collect::<Result<Vec<_>>>()?;
            let below = defects.iter().filter(|d| d.convolved < d.indicator).count();
            let worst = defects
                .iter()
                .map(|d| {
                    if d.defect == 0.0 {
                        0.0
                    } else {
                        d.defect / d.bound
                    }
                })
                .fold(0.0, f64::max);
            Ok(vec![
                Row::new(
                    "support_invariants",
                    format!("{params} size={}", w.support_size()),
                    bad_entries as f64,
                    0.0,
                    bad_entries as f64,
                    bad_entries == 0,
                ),
                Row::new(
                    "upper_bound_property",
                    format!("{params} n<={n_max}"),
                    below as f64,
                    0.0,
                    below as f64,
                    below == 0,
                ),
                Row::new(
                    "indicator_defect",
                    format!("{params} n<={n_max}"),
                    worst,
                    SIEVE_DEFECT_C,
                    worst,
                    worst <= SIEVE_DEFECT_C,
                ),
            ])
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<Row> = per.into_iter().flatten().collect();

    let weighted: Vec<Vec<Row>> = cfg
        .z_grid
        .par_iter()
        .map(|&z| {
            let w = build_weight(z, 100.0, table)?;
            (0..3u32)
                .map(|j| {
                    let r = weighted_sum_ratio(&w, |_| 1.0, j, 2.0, table)?;
                    let c = WEIGHTED_SUM_C[j as usize];
                    Ok(Row::new(
                        "weighted_sum",
                        format!("z={z} u=100 j={j} nu=1 B=2"),
                        r.lhs,
                        r.rhs,
                        r.ratio(),
                        !r.asserted || r.lhs.abs() <= c * r.rhs.abs(),
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    rows.extend(weighted.into_iter().flatten());
    Ok(rows)
}

fn hyperbola(cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    let tabs = tables_of(cfg, floor_arg(cfg.max_x()), table)?;
    let mut jobs = Vec::new();
    for t in &tabs {
        for &x in &cfg.x_grid {
            for &q in &cfg.q_grid {
                jobs.push((t, x, q));
            }
        }
    }
    let per: Vec<Vec<Row>> = jobs
        .par_iter()
        .map(|&(t, x, q)| {
            let d = t.chi.discriminant();
            let calibrated = x >= HYPERBOLA_CALIBRATED_X_MIN;
            let h = lambda_sum_coprime(x, q, t)?;
            let mut rows = vec![Row::new(
                "lambda_coprime_ratio",
                format!("d={d} x={x} q={q}"),
                h.direct,
                h.main_term,
                h.ratio.abs(),
                !calibrated || h.ratio.abs() < COPRIME_LAMBDA_RATIO_MAX,
            )];
            for a in reduced_residues(q) {
                let h = lambda_sum_progression(x, q, a, cfg.epsilon, t)?;
                let params = format!("d={d} x={x} q={q} a={a}");
                rows.push(Row::new(
                    "lambda_progression_ratio",
                    params.clone(),
                    h.direct,
                    h.main_term,
                    h.ratio.abs(),
                    !(calibrated && h.asserted) || h.ratio.abs() < PROGRESSION_LAMBDA_RATIO_MAX,
                ));
                if t.twist(q, a) == -1 {
                    let limit = VANISHING_MAIN_TERM_GUARD * x / q as f64;
                    rows.push(Row::new(
                        "vanishing_main_term",
                        params,
                        h.direct,
                        limit,
                        h.direct.abs() / limit,
                        h.main_term == 0.0 && h.direct.abs() < limit,
                    ));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn decompose(cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    let points = decomposition_grid(
        &cfg.x_grid,
        &cfg.z_grid,
        &cfg.discriminants,
        &cfg.q_grid,
        cfg.seed,
        DECOMPOSITION_POINTS,
    );
    let tabs = tables_of(cfg, floor_arg(cfg.max_x()), table)?;
    points
        .par_iter()
        .map(|p| {
            let i = cfg.discriminants.iter().position(|&d| d == p.disc).unwrap();
            let r = decomposition_pipeline(p.x, p.q, p.a, p.z, &tabs[i], table)?;
            let scale = 1.0 + r.psi_prog.abs();
            Ok(Row::new(
                "decomposition_closure",
                format!("d={} x={} q={} a={} z={}", p.disc, p.x, p.q, p.a, p.z),
                r.psi_prog - r.main,
                r.psi_prog - r.main - r.lhs_minus_rhs,
                r.lhs_minus_rhs.abs() / scale,
                r.closes(),
            ))
        })
        .collect()
}

fn lfunc(cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    let chis = characters_of(cfg)?;
    let per: Vec<Vec<Row>> = chis
        .par_iter()
        .map(|chi| {
            let d = chi.discriminant();
            let one = certify_positive(chi, 1.0, 1 << 26)?;
            let two = l_value(chi, 2.0, default_terms(chi))?;
            let mut rows = vec![
                Row::new(
                    "l_one_positive",
                    format!("d={d} terms={}", one.terms),
                    one.value,
                    one.tail_bound,
                    one.tail_bound,
                    one.certified_positive(),
                ),
                Row::new(
                    "l_two_positive",
                    format!("d={d} terms={}", two.terms),
                    two.value,
                    two.tail_bound,
                    two.tail_bound,
                    two.certified_positive(),
                ),
            ];
            let scan = scan_real_zeros(chi, 0.5, 1.0, 24, 1e-10, default_terms(chi))?;
            rows.push(Row::new(
                "real_zero_scan",
                format!("d={d} s=[0.5;1]"),
                scan.zeros.len() as f64,
                scan.closest.map_or(0.0, |z| z.beta),
                0.0,
                true,
            ));
            for &z in &cfg.z_grid {
                if z <= 1.0 || z > (chi.modulus() as f64).powi(2) {
                    continue;
                }
                let f = fdp_report(chi, z, cfg.eta, table)?;
                rows.push(Row::new(
                    "sifted_euler_product",
                    format!("d={d} z={z} eta={}", cfg.eta),
                    f.ratio,
                    f.envelope,
                    0.0,
                    f.euler_product.is_finite() && f.euler_product > 0.0,
                ));
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn rows_for(name: &str, cfg: &RunConfig, table: &FactorTable) -> Result<Vec<Row>> {
    match name {
        "identities" => identities(cfg, table),
        "characters" => characters(cfg),
        "kloosterman" => kloosterman(cfg),
        "sieve" => sieve(cfg, table),
        "hyperbola" => hyperbola(cfg, table),
        "decompose" => decompose(cfg, table),
        "lfunc" => lfunc(cfg, table),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Runs suite `name` and writes its CSV to `csv_path`. Errors carry the
/// suite name.
pub fn run_suite(
    name: &str,
    cfg: &RunConfig,
    table: &FactorTable,
    csv_path: &Path,
) -> Result<SuiteResult> {
    let wrap = |e: Error| Error::Suite {
        suite: name.to_string(),
        source: Box::new(e),
    };
    let start = Instant::now();
    cfg.validate().map_err(wrap)?;
    table
        .check("table_limit", floor_arg(cfg.max_x()))
        .map_err(wrap)?;
    let rows = rows_for(name, cfg, table).map_err(wrap)?;
    let mut csv = CsvTable::new(&HEADER);
    for (i, r) in rows.iter().enumerate() {
        csv.push(csv_row![
            i,
            r.check,
            r.params,
            r.value,
            r.reference,
            r.residual,
            r.passed
        ])
        .map_err(wrap)?;
    }
    csv.write(csv_path).map_err(wrap)?;
    Ok(SuiteResult {
        suite_name: name.to_string(),
        cases_run: rows.len() as u64,
        cases_passed: rows.iter().filter(|r| r.passed).count() as u64,
        max_residual: rows.iter().map(|r| r.residual).fold(0.0, f64::max),
        wall_time: start.elapsed(),
        csv_path: csv_path.to_path_buf(),
    })
}
