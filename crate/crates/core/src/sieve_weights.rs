//! Upper-bound beta-sieve weights `w(d) = μ(d)·1_𝒟(d)`.
//!
//! A squarefree `d = p₁⋯p_k` with `p₁ > ⋯ > p_k` lies in 𝒟 when
//! `p₁⋯p_h·p_h^{u/2} < z^u` for every odd `h ≤ k`.

use std::collections::HashMap;

use crate::arith::{floor_arg, FactorTable};
use crate::error::{invalid, Error, Result};
use crate::sum::CompensatedSum;

/// Log-space guard band for membership comparisons; ties are rejected.
pub const MEMBERSHIP_GUARD: f64 = 1e-12;

/// Upper limit on the number of support elements enumerated.
pub const MAX_SUPPORT: usize = 4_000_000;

/// `z_r = z^{((u−2)/u)^r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZrSchedule {
    z: f64,
    u: f64,
}

impl ZrSchedule {
    pub fn new(z: f64, u: f64) -> Result<Self> {
        if !(z > 1.0) || !(u > 2.0) || !z.is_finite() || !u.is_finite() {
            return Err(invalid(format!(
                "schedule needs z > 1 and u > 2, got z = {z}, u = {u}"
            )));
        }
        Ok(Self { z, u })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn z_r(&self, r: u32) -> f64 {
        let rho = (self.u - 2.0) / self.u;
        (self.z.ln() * rho.powi(r as i32)).exp()
    }

    /// First `r` with `z_r < 2`.
    pub fn r_max(&self) -> u32 {
        let mut r = 0;
        while self.z_r(r) >= 2.0 {
            r += 1;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightEntry {
    pub d: u64,
    pub weight: i8,
    /// Prime factors in decreasing order.
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct BetaSieveWeight {
    z: f64,
    u: f64,
    primes: Vec<u64>,
    entries: Vec<WeightEntry>,
    index: HashMap<u64, usize>,
}

/// Checks the odd-level conditions for a decreasing prime list.
pub fn in_support(primes_desc: &[u64], z: f64, u: f64) -> bool {
    let cap = u * z.ln();
    let mut log_prod = 0.0;
    for (i, &p) in primes_desc.iter().enumerate() {
        let lp = (p as f64).ln();
        log_prod += lp;
        if i % 2 == 0 && log_prod + 0.5 * u * lp >= cap - MEMBERSHIP_GUARD {
            return false;
        }
    }
    true
}

/// Enumerates 𝒟 for primes `≤ z` by depth-first search over decreasing
/// prime sequences. Failure at an odd level excludes every extension, so the
/// search is pruned there.
pub fn build_weight(z: f64, u: f64, table: &FactorTable) -> Result<BetaSieveWeight> {
    ZrSchedule::new(z, u)?;
    table.check("z", floor_arg(z))?;
    let mut primes: Vec<u64> = table.primes_up_to(z).collect();
    primes.reverse();
    let cap = u * z.ln();
    let mut entries = vec![WeightEntry {
        d: 1,
        weight: 1,
        primes: Vec::new(),
    }];
    let mut stack: Vec<u64> = Vec::new();
    dfs(&primes, 0, 1, 0.0, cap, u, &mut stack, &mut entries)?;
    entries.sort_by_key(|e| e.d);
    let index = entries.iter().enumerate().map(|(i, e)| (e.d, i)).collect();
    primes.reverse();
    Ok(BetaSieveWeight {
        z,
        u,
        primes,
        entries,
        index,
    })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    primes: &[u64],
    start: usize,
    d: u64,
    log_d: f64,
    cap: f64,
    u: f64,
    stack: &mut Vec<u64>,
    out: &mut Vec<WeightEntry>,
) -> Result<()> {
    for i in start..primes.len() {
        let p = primes[i];
        let lp = (p as f64).ln();
        let log_next = log_d + lp;
        let h = stack.len() + 1;
        if h % 2 == 1 && log_next + 0.5 * u * lp >= cap - MEMBERSHIP_GUARD {
            // smaller primes give smaller left-hand sides; keep scanning
            continue;
        }
        if log_next >= cap - MEMBERSHIP_GUARD {
            continue;
        }
        let next = d.checked_mul(p).ok_or_else(|| Error::Resource {
            requested: u64::MAX,
            reason: format!("support element exceeds 2^64; use a smaller u (u = {u})"),
        })?;
        if out.len() >= MAX_SUPPORT {
            return Err(Error::Resource {
                requested: out.len() as u64 + 1,
                reason: format!(
                    "support of the weight exceeds {MAX_SUPPORT} elements; use a smaller u"
                ),
            });
        }
        stack.push(p);
        out.push(WeightEntry {
            d: next,
            weight: if stack.len() % 2 == 0 { 1 } else { -1 },
            primes: stack.clone(),
        });
        dfs(primes, i + 1, next, log_next, cap, u, stack, out)?;
        stack.pop();
    }
    Ok(())
}

impl BetaSieveWeight {
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// `z^u`.
    pub fn support_limit(&self) -> f64 {
        self.z.powf(self.u)
    }

    /// Primes `≤ z`, increasing.
    pub fn sieving_primes(&self) -> &[u64] {
        &self.primes
    }

    /// Support entries sorted by `d`.
    pub fn entries(&self) -> &[WeightEntry] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self, d: u64) -> i8 {
        self.index.get(&d).map_or(0, |&i| self.entries[i].weight)
    }

    /// `(1∗w)(n) = Σ_{d|n} w(d)`.
    pub fn convolved(&self, n: u64, table: &FactorTable) -> Result<i64> {
        table.check("n", n)?;
        let small: Vec<u64> = table
            .distinct_primes(n)
            .into_iter()
            .filter(|&p| (p as f64) <= self.z)
            .collect();
        let mut total = 0i64;
        for mask in 0u64..(1u64 << small.len()) {
            let d: u64 = small
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .product();
            total += i64::from(self.weight(d));
        }
        Ok(total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorDefect {
    pub n: u64,
    pub indicator: i64,
    pub convolved: i64,
    pub defect: f64,
    pub bound: f64,
}

/// `|1_{P⁻(n)>z} − (1∗w)(n)|` together with
/// `τ(n)²·(Σ_{⌈u/2⌉ ≤ r < r_max} 1_{P⁻(n)>z_r} 2^{−r} + Σ_{r ≥ r_max} 2^{−r})`.
pub fn sieve_indicator_defect(
    n: u64,
    w: &BetaSieveWeight,
    schedule: &ZrSchedule,
    table: &FactorTable,
) -> Result<IndicatorDefect> {
    let convolved = w.convolved(n, table)?;
    let indicator = i64::from(table.is_rough(n, w.z()));
    let tau: u64 = table
        .factorize(n)
        .iter()
        .map(|&(_, k)| u64::from(k) + 1)
        .product();
    let p_min = table.spf(n).map_or(f64::INFINITY, |p| p as f64);
    let start = (schedule.u() / 2.0).ceil() as u32;
    let r_max = schedule.r_max();
    let mut s = 0.0;
    for r in start..r_max {
        if p_min > schedule.z_r(r) {
            s += 0.5f64.powi(r as i32);
        }
    }
    s += 2.0 * 0.5f64.powi(start.max(r_max) as i32);
    Ok(IndicatorDefect {
        n,
        indicator,
        convolved,
        defect: (indicator - convolved).abs() as f64,
        bound: (tau * tau) as f64 * s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSumRatio {
    pub lhs: f64,
    pub rhs: f64,
    /// `u ≥ 50B`: the regime in which `|lhs| ≤ C_j·rhs` is asserted.
    pub asserted: bool,
}

impl WeightedSumRatio {
    pub fn ratio(&self) -> f64 {
        self.lhs.abs() / self.rhs.abs()
    }
}

/// `Σ_d w(d)ν(d)(log d)^j/d` against `(log z)^j ∏_{p≤z}(1 − ν(p)/p)`, with
/// `ν` given by its values on primes.
pub fn weighted_sum_ratio<F>(
    w: &BetaSieveWeight,
    nu: F,
    j: u32,
    b: f64,
    _table: &FactorTable,
) -> Result<WeightedSumRatio>
where
    F: Fn(u64) -> f64,
{
    if !(b >= 1.0) {
        return Err(invalid(format!("B must be at least 1, got {b}")));
    }
    let mut nu_p = HashMap::new();
    for &p in w.sieving_primes() {
        let v = nu(p);
        if !(v.abs() < b.min(p as f64)) {
            return Err(invalid(format!(
                "|ν({p})| = {} is not below min(B, p)",
                v.abs()
            )));
        }
        nu_p.insert(p, v);
    }
    let mut lhs = CompensatedSum::new();
    for e in w.entries() {
        let nu_d: f64 = e.primes.iter().map(|p| nu_p[p]).product();
        let log_pow = if j == 0 {
            1.0
        } else {
            (e.d as f64).ln().powi(j as i32)
        };
        lhs.add(f64::from(e.weight) * nu_d * log_pow / e.d as f64);
    }
    let prod: f64 = w
        .sieving_primes()
        .iter()
        .map(|p| 1.0 - nu_p[p] / *p as f64)
        .product();
    Ok(WeightedSumRatio {
        lhs: lhs.value(),
        rhs: w.z().ln().powi(j as i32) * prod,
        asserted: w.u() >= 50.0 * b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::{SIEVE_DEFECT_C, WEIGHTED_SUM_C};
    use crate::modular::{distinct_prime_factors, is_squarefree, mobius};
    use std::sync::OnceLock;

    fn table() -> &'static FactorTable {
        static T: OnceLock<FactorTable> = OnceLock::new();
        T.get_or_init(|| FactorTable::build(100_000).unwrap())
    }

    /// Direct evaluation of the membership rule with exact integer powers
    /// when `u` is an even integer.
    fn member_exact(d: u64, z: u64, u: u32) -> bool {
        let mut ps = distinct_prime_factors(d);
        ps.sort_unstable_by(|a, b| b.cmp(a));
        let cap = (z as u128).pow(u);
        let mut prod = 1u128;
        for (i, &p) in ps.iter().enumerate() {
            prod *= p as u128;
            if i % 2 == 0 && prod * (p as u128).pow(u / 2) >= cap {
                return false;
            }
        }
        true
    }

    #[test]
    fn spec_examples() {
        let w = build_weight(10.0, 4.0, table()).unwrap();
        assert_eq!(w.weight(1), 1);
        for p in [2, 3, 5, 7] {
            assert_eq!(w.weight(p), -1);
        }
        assert_eq!(w.weight(105), -1);
        assert_eq!(w.weight(11), 0);
    }

    #[test]
    fn support_matches_exact_rule() {
        for (z, u) in [(10u64, 4u32), (20, 6), (30, 8), (13, 4)] {
            let w = build_weight(z as f64, u as f64, table()).unwrap();
            let primes: Vec<u64> = (2..=z).filter(|&p| table().is_prime(p)).collect();
            for mask in 0u32..(1 << primes.len()) {
                let d: u64 = primes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &p)| p)
                    .product();
                let expect = if member_exact(d, z, u) {
                    mobius(d) as i8
                } else {
                    0
                };
                assert_eq!(w.weight(d), expect, "z={z} u={u} d={d}");
            }
            for e in w.entries() {
                assert!(is_squarefree(e.d));
                assert!(e.weight.abs() <= 1);
                assert!((e.d as f64) < w.support_limit());
                assert!(e.primes.iter().all(|&p| p as u64 <= z));
            }
        }
    }

    #[test]
    fn tie_is_not_a_member() {
        // 4·4² = 64 = z⁴ at z = √8
        let z = 8f64.sqrt();
        assert!(!in_support(&[4], z, 4.0));
        assert!(in_support(&[4], z + 1e-6, 4.0));
        assert!(!in_support(&[4], z - 1e-6, 4.0));
    }

    #[test]
    fn schedule_is_decreasing() {
        for (z, u) in [(10.0, 4.0), (20.0, 6.0), (30.0, 8.0), (1e6, 50.0)] {
            let s = ZrSchedule::new(z, u).unwrap();
            for r in 0..60 {
                let (a, b) = (s.z_r(r), s.z_r(r + 1));
                assert!(b < a || (a - 1.0).abs() < 1e-15, "z={z} u={u} r={r}");
            }
            assert!(s.z_r(s.r_max()) < 2.0);
            assert!(s.r_max() == 0 || s.z_r(s.r_max() - 1) >= 2.0);
        }
    }

    #[test]
    fn defect_examples() {
        let t = table();
        let w = build_weight(10.0, 4.0, t).unwrap();
        let s = ZrSchedule::new(10.0, 4.0).unwrap();
        let one = sieve_indicator_defect(1, &w, &s, t).unwrap();
        assert_eq!((one.indicator, one.convolved, one.defect), (1, 1, 0.0));
        let p = sieve_indicator_defect(10_007, &w, &s, t).unwrap();
        assert_eq!(p.defect, 0.0);
        let brute: i64 = crate::modular::divisors(210)
            .iter()
            .map(|&d| i64::from(w.weight(d)))
            .sum();
        let r = sieve_indicator_defect(210, &w, &s, t).unwrap();
        assert_eq!(r.convolved, brute);
        assert_eq!(r.defect, brute.unsigned_abs() as f64);
    }

    #[test]
    fn upper_bound_property_and_calibrated_defect() {
        let t = table();
        let probes = [
            (10.0, 4.0),
            (20.0, 6.0),
            (30.0, 8.0),
            (30.0, 3.0),
            (100.0, 3.0),
            (50.0, 5.0),
        ];
        for (z, u) in probes {
            let w = build_weight(z, u, t).unwrap();
            let s = ZrSchedule::new(z, u).unwrap();
            for n in 1..=100_000 {
                let r = sieve_indicator_defect(n, &w, &s, t).unwrap();
                assert!(r.convolved >= r.indicator, "z={z} u={u} n={n}");
                assert!(
                    r.defect <= SIEVE_DEFECT_C * r.bound,
                    "z={z} u={u} n={n} {r:?}"
                );
            }
        }
    }

    #[test]
    fn weighted_sum_examples() {
        let t = table();
        let w = build_weight(10.0, 50.0, t).unwrap();
        let zero = weighted_sum_ratio(&w, |_| 0.0, 0, 1.0, t).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (1.0, 1.0));
        let one = weighted_sum_ratio(&w, |_| 1.0, 0, 2.0, t).unwrap();
        // with u = 50 every squarefree d | 210 is in the support, so the
        // sum factors as the Euler product
        assert_eq!(w.support_size(), 16);
        assert!((one.lhs - one.rhs).abs() < 1e-14);
        assert!((one.rhs - 8.0 / 35.0).abs() < 1e-14);
        let chi4 = |p: u64| match p % 4 {
            1 => 1.0,
            3 => -1.0,
            _ => 0.0,
        };
        let r = weighted_sum_ratio(&w, chi4, 1, 1.5, t).unwrap();
        assert!(!r.asserted && r.rhs > 0.0);
        let half = |_: u64| 0.5;
        for (z, u) in [(10.0, 100.0), (30.0, 100.0), (50.0, 60.0)] {
            let w = build_weight(z, u, t).unwrap();
            for j in 0..3u32 {
                for nu in [&chi4 as &dyn Fn(u64) -> f64, &half] {
                    let r = weighted_sum_ratio(&w, nu, j, 1.2, t).unwrap();
                    assert!(r.asserted);
                    assert!(
                        r.lhs.abs() <= WEIGHTED_SUM_C[j as usize] * r.rhs,
                        "z={z} u={u} j={j} {r:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn nu_validation() {
        let t = table();
        let w = build_weight(10.0, 4.0, t).unwrap();
        assert!(matches!(
            weighted_sum_ratio(&w, |_| 1.0, 0, 1.0, t),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            weighted_sum_ratio(&w, |p| p as f64, 0, 100.0, t),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn build_rejects_bad_parameters() {
        let t = table();
        assert!(build_weight(10.0, 2.0, t).is_err());
        assert!(build_weight(0.5, 4.0, t).is_err());
        assert!(matches!(
            build_weight(1e6, 4.0, t),
            Err(Error::OutOfRange { .. })
        ));
    }
}
