//! Smallest-prime-factor table and the classical arithmetic functions built
//! on top of it.
//!
//! Every multiplicative function is derived from a single linear sieve: for
//! `n >= 2` we peel off the full power of `spf[n]` and combine with the value
//! already known at the cofactor. Sums over `n <= x` use compensated
//! accumulation throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::modular::gcd;
use crate::sum::CompensatedSum;

/// Largest supported table limit. Entries are stored as 32-bit integers.
pub const MAX_TABLE_LIMIT: u64 = u32::MAX as u64;

/// Smallest-prime-factor table for `0..=limit`. Positions 0 and 1 hold the
/// sentinel 0.
#[derive(Clone, PartialEq, Eq)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl fmt::Debug for FactorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FactorTable")
            .field("limit", &self.limit)
            .field("primes", &self.primes.len())
            .finish()
    }
}

impl FactorTable {
    /// Linear sieve up to `limit`, O(limit) time and 4·(limit+1) bytes.
    pub fn build(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(invalid(format!(
                "table limit must be at least 2, got {limit}"
            )));
        }
        if limit > MAX_TABLE_LIMIT {
            return Err(Error::Resource {
                requested: limit + 1,
                reason: format!("limit exceeds the 32-bit entry maximum {MAX_TABLE_LIMIT}"),
            });
        }
        let n = limit as usize;
        let mut spf: Vec<u32> = Vec::new();
        spf.try_reserve_exact(n + 1).map_err(|e| Error::Resource {
            requested: limit + 1,
            reason: e.to_string(),
        })?;
        spf.resize(n + 1, 0);
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = p as usize * i;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    /// Rebuilds a table from raw spf entries (used by the cache loader).
    pub(crate) fn from_spf(spf: Vec<u32>) -> Self {
        let limit = (spf.len() - 1) as u64;
        let primes = spf
            .iter()
            .enumerate()
            .skip(2)
            .filter(|&(i, &p)| p as usize == i)
            .map(|(i, _)| i as u32)
            .collect();
        Self { limit, spf, primes }
    }

    pub(crate) fn raw_spf(&self) -> &[u32] {
        &self.spf
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn check(&self, what: &'static str, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::OutOfRange {
                what,
                value: n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor of `n`, `None` for `n < 2`. Panics past the limit.
    #[inline]
    pub fn spf(&self, n: u64) -> Option<u64> {
        match self.spf[n as usize] {
            0 => None,
            p => Some(u64::from(p)),
        }
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && u64::from(self.spf[n as usize]) == n
    }

    /// `P⁻(n) > z`, with the convention `P⁻(1) = +∞`.
    #[inline]
    pub fn is_rough(&self, n: u64, z: f64) -> bool {
        match self.spf(n) {
            None => true,
            Some(p) => p as f64 > z,
        }
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `p <= y` in increasing order.
    pub fn primes_up_to(&self, y: f64) -> impl Iterator<Item = u64> + '_ {
        let end = self.prime_count(y);
        self.primes[..end].iter().map(|&p| u64::from(p))
    }

    /// π(y), counting only primes inside the table.
    pub fn prime_count(&self, y: f64) -> usize {
        if y < 2.0 {
            return 0;
        }
        self.primes.partition_point(|&p| (p as f64) <= y)
    }

    /// Factorization `n = ∏ p^k` by repeated division by the spf entry.
    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = u64::from(self.spf[n as usize]);
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        out
    }

    pub fn distinct_primes(&self, n: u64) -> Vec<u64> {
        self.factorize(n).into_iter().map(|(p, _)| p).collect()
    }

    /// Splits `n = p^k · m` with `p = spf(n)` and `p ∤ m`.
    #[inline]
    fn peel(&self, n: u64) -> (u64, u32, u64) {
        let p = u64::from(self.spf[n as usize]);
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (p, k, m)
    }
}

/// Label of an arithmetic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithKind {
    /// Λ
    VonMangoldt,
    /// μ
    Mobius,
    /// φ
    Totient,
    /// τ
    Divisors,
    /// τ₃
    Divisors3,
    /// λ = 1∗χ
    Lambda,
    /// λ′ = χ∗log
    LambdaPrime,
    Custom(String),
}

impl ArithKind {
    pub fn label(&self) -> &str {
        match self {
            ArithKind::VonMangoldt => "Lambda",
            ArithKind::Mobius => "mu",
            ArithKind::Totient => "phi",
            ArithKind::Divisors => "tau",
            ArithKind::Divisors3 => "tau3",
            ArithKind::Lambda => "lambda",
            ArithKind::LambdaPrime => "lambda_prime",
            ArithKind::Custom(s) => s,
        }
    }
}

impl fmt::Display for ArithKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ArithKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Lambda" | "Λ" | "von_mangoldt" => ArithKind::VonMangoldt,
            "mu" | "μ" | "mobius" => ArithKind::Mobius,
            "phi" | "φ" | "totient" => ArithKind::Totient,
            "tau" | "τ" => ArithKind::Divisors,
            "tau3" | "τ₃" => ArithKind::Divisors3,
            "lambda" | "λ" => ArithKind::Lambda,
            "lambda_prime" | "λ′" => ArithKind::LambdaPrime,
            other => return Err(invalid(format!("unknown arithmetic function `{other}`"))),
        })
    }
}

/// Values `f(1), …, f(N)` of an arithmetic function. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithSequence {
    kind: ArithKind,
    // index 0 is padding so that values[n] = f(n)
    values: Vec<f64>,
}

impl ArithSequence {
    /// Wraps `f(1..=N)` given in order.
    pub fn from_values(kind: ArithKind, values: impl IntoIterator<Item = f64>) -> Self {
        let mut v = vec![0.0];
        v.extend(values);
        Self { kind, values: v }
    }

    pub fn from_fn(kind: ArithKind, n: u64, f: impl Fn(u64) -> f64) -> Self {
        Self::from_values(kind, (1..=n).map(f))
    }

    /// The neutral element δ of Dirichlet convolution.
    pub fn delta(n: u64) -> Self {
        Self::from_fn(ArithKind::Custom("delta".into()), n, |k| {
            if k == 1 {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn one(n: u64) -> Self {
        Self::from_fn(ArithKind::Custom("one".into()), n, |_| 1.0)
    }

    pub fn log(n: u64) -> Self {
        Self::from_fn(ArithKind::Custom("log".into()), n, |k| (k as f64).ln())
    }

    pub(crate) fn from_padded(kind: ArithKind, values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        Self { kind, values }
    }

    pub fn kind(&self) -> &ArithKind {
        &self.kind
    }

    /// Largest index N.
    pub fn len(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.len() == 1
    }

    #[inline]
    pub fn get(&self, n: u64) -> f64 {
        self.values[n as usize]
    }

    /// Values indexed from 0; position 0 is padding.
    pub fn padded(&self) -> &[f64] {
        &self.values
    }

    fn check_len(&self, n: u64) -> Result<()> {
        if n > self.len() {
            return Err(invalid(format!(
                "sequence {} is defined up to {}, needed {n}",
                self.kind,
                self.len()
            )));
        }
        Ok(())
    }

    /// Σ_{n ≤ x, n ≡ a (mod q)} f(n).
    pub fn progression_sum(&self, x: f64, q: u64, a: u64) -> Result<f64> {
        let n_max = floor_arg(x);
        self.check_len(n_max)?;
        let mut acc = CompensatedSum::new();
        let mut n = progression_start(a, q);
        while n <= n_max {
            acc.add(self.get(n));
            n += q;
        }
        Ok(acc.value())
    }

    /// Σ_{n ≤ x, gcd(n, q) = 1} f(n).
    pub fn coprime_sum(&self, x: f64, q: u64) -> Result<f64> {
        let n_max = floor_arg(x);
        self.check_len(n_max)?;
        Ok((1..=n_max)
            .filter(|&n| gcd(n, q) == 1)
            .map(|n| self.get(n))
            .collect::<CompensatedSum>()
            .value())
    }
}

/// ⌊x⌋ for the real cut-offs used throughout; negative x maps to 0.
#[inline]
pub fn floor_arg(x: f64) -> u64 {
    if x < 1.0 {
        0
    } else {
        x.floor() as u64
    }
}

/// Least positive n with n ≡ a (mod q).
#[inline]
pub fn progression_start(a: u64, q: u64) -> u64 {
    match a % q {
        0 => q,
        r => r,
    }
}

pub(crate) fn require_coprime(a: u64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(invalid("modulus q must be positive"));
    }
    if gcd(a, q) != 1 {
        return Err(invalid(format!("gcd(a, q) = gcd({a}, {q}) != 1")));
    }
    Ok(())
}

/// Λ(n): log p when n is a power of the prime p, else 0.
pub fn von_mangoldt(n: u64, table: &FactorTable) -> Result<f64> {
    table.check("n", n)?;
    Ok(von_mangoldt_unchecked(n, table))
}

#[inline]
fn von_mangoldt_unchecked(n: u64, table: &FactorTable) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let (p, _, m) = table.peel(n);
    if m == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

/// Tabulates Λ, μ, φ, τ or τ₃ on `1..=n`.
pub fn arith_table(kind: ArithKind, n: u64, table: &FactorTable) -> Result<ArithSequence> {
    table.check("N", n)?;
    let len = n as usize + 1;
    let mut v = vec![0.0f64; len];
    if n >= 1 {
        v[1] = match kind {
            ArithKind::VonMangoldt => 0.0,
            ArithKind::Mobius | ArithKind::Totient | ArithKind::Divisors | ArithKind::Divisors3 => {
                1.0
            }
            ref other => {
                return Err(invalid(format!(
                    "arith_table supports Lambda, mu, phi, tau, tau3; got {other}"
                )))
            }
        };
    }
    for i in 2..len {
        let (p, k, m) = table.peel(i as u64);
        let k = k as i32;
        v[i] = match kind {
            ArithKind::VonMangoldt => {
                if m == 1 {
                    (p as f64).ln()
                } else {
                    0.0
                }
            }
            ArithKind::Mobius => {
                if k == 1 {
                    -v[m as usize]
                } else {
                    0.0
                }
            }
            ArithKind::Totient => v[m as usize] * (p as f64).powi(k - 1) * (p - 1) as f64,
            ArithKind::Divisors => v[m as usize] * f64::from(k + 1),
            ArithKind::Divisors3 => v[m as usize] * f64::from((k + 1) * (k + 2) / 2),
            _ => unreachable!(),
        };
    }
    Ok(ArithSequence::from_padded(kind, v))
}

/// (f∗g)(n) = Σ_{ab=n} f(a) g(b) for n ≤ N, by the divisor-pair double loop.
pub fn dirichlet_convolve(f: &ArithSequence, g: &ArithSequence, n: u64) -> Result<ArithSequence> {
    if f.len() < n || g.len() < n {
        return Err(invalid(format!(
            "convolution up to {n} needs both inputs that long (have {} and {})",
            f.len(),
            g.len()
        )));
    }
    let len = n as usize + 1;
    let mut sum = vec![0.0f64; len];
    let mut carry = vec![0.0f64; len];
    let gv = g.padded();
    for a in 1..len {
        let fa = f.padded()[a];
        if fa == 0.0 {
            continue;
        }
        for b in 1..=(len - 1) / a {
            let gb = gv[b];
            if gb == 0.0 {
                continue;
            }
            let idx = a * b;
            let x = fa * gb;
            let s = sum[idx];
            let t = s + x;
            if s.abs() >= x.abs() {
                carry[idx] += (s - t) + x;
            } else {
                carry[idx] += (x - t) + s;
            }
            sum[idx] = t;
        }
    }
    for (s, c) in sum.iter_mut().zip(&carry) {
        *s += c;
    }
    let kind = ArithKind::Custom(format!("{}*{}", f.kind(), g.kind()));
    Ok(ArithSequence::from_padded(kind, sum))
}

/// ψ(x; q, a) = Σ_{n ≤ x, n ≡ a (mod q)} Λ(n).
pub fn psi_progression(x: f64, q: u64, a: u64, table: &FactorTable) -> Result<f64> {
    require_coprime(a, q)?;
    let n_max = floor_arg(x);
    table.check("x", n_max)?;
    let mut acc = CompensatedSum::new();
    let mut n = progression_start(a, q);
    while n <= n_max {
        acc.add(von_mangoldt_unchecked(n, table));
        n += q;
    }
    Ok(acc.value())
}

/// Sifted Chebyshev sum together with the small-prime mass it drops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiftedPsi {
    /// Σ Λ(n) over n ≤ x, n ≡ a (mod q), P⁻(n) > z.
    pub sifted: f64,
    /// Σ Λ(n) over n ≤ x, n ≡ a (mod q), P⁻(n) ≤ z.
    pub small_prime: f64,
    /// π(z)·log x, an upper bound for the unrestricted small-prime mass.
    pub small_prime_bound: f64,
}

impl SiftedPsi {
    pub fn bound_holds(&self) -> bool {
        self.small_prime <= self.small_prime_bound
    }
}

pub fn sifted_psi_progression(
    x: f64,
    q: u64,
    a: u64,
    z: f64,
    table: &FactorTable,
) -> Result<SiftedPsi> {
    require_coprime(a, q)?;
    if !(z > 0.0) {
        return Err(invalid(format!(
            "sifting level z must be positive, got {z}"
        )));
    }
    let n_max = floor_arg(x);
    table.check("x", n_max)?;
    let mut sifted = CompensatedSum::new();
    let mut small = CompensatedSum::new();
    let mut n = progression_start(a, q);
    while n <= n_max {
        let lam = von_mangoldt_unchecked(n, table);
        if lam != 0.0 {
            if table.is_rough(n, z) {
                sifted.add(lam);
            } else {
                small.add(lam);
            }
        }
        n += q;
    }
    let pi_z = table.prime_count(z.min(table.limit() as f64)) as f64;
    Ok(SiftedPsi {
        sifted: sifted.value(),
        small_prime: small.value(),
        small_prime_bound: pi_z * x.ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular;

    fn trial_spf(n: u64) -> u64 {
        (2..=n).find(|p| n % p == 0).unwrap()
    }

    #[test]
    fn spf_small_table() {
        let t = FactorTable::build(10).unwrap();
        let spf: Vec<u32> = t.raw_spf().to_vec();
        assert_eq!(spf, vec![0, 0, 2, 3, 2, 5, 2, 7, 2, 3, 2]);
    }

    #[test]
    fn spf_examples() {
        let t = FactorTable::build(10_000).unwrap();
        assert_eq!(t.spf(97), Some(97));
        assert_eq!(t.spf(9991), Some(trial_spf(9991)));
        assert_eq!(t.spf(9991), Some(97));
        assert_eq!(t.spf(1), None);
    }

    #[test]
    fn spf_invariants_against_trial_division() {
        let t = FactorTable::build(20_000).unwrap();
        for n in 2..=20_000u64 {
            let p = t.spf(n).unwrap();
            assert_eq!(p, trial_spf(n));
            if p != n {
                assert!(p * p <= n);
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        assert_eq!(
            FactorTable::build(5000).unwrap(),
            FactorTable::build(5000).unwrap()
        );
    }

    #[test]
    fn build_rejects_tiny_limit() {
        assert!(matches!(
            FactorTable::build(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn von_mangoldt_examples() {
        let t = FactorTable::build(100).unwrap();
        assert_eq!(von_mangoldt(1, &t).unwrap(), 0.0);
        assert_eq!(von_mangoldt(8, &t).unwrap(), 2f64.ln());
        assert_eq!(von_mangoldt(12, &t).unwrap(), 0.0);
        assert!(matches!(
            von_mangoldt(101, &t),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn table_examples() {
        let t = FactorTable::build(100).unwrap();
        let tau3 = arith_table(ArithKind::Divisors3, 100, &t).unwrap();
        assert_eq!(tau3.get(1), 1.0);
        // ordered triples with abc = 4
        let brute = (1..=4u64)
            .flat_map(|a| (1..=4u64).map(move |b| (a, b)))
            .filter(|&(a, b)| 4 % (a * b) == 0)
            .count();
        assert_eq!(tau3.get(4), brute as f64);
        assert_eq!(tau3.get(4), 6.0);
        let phi = arith_table(ArithKind::Totient, 100, &t).unwrap();
        let mu = arith_table(ArithKind::Mobius, 100, &t).unwrap();
        let tau = arith_table(ArithKind::Divisors, 100, &t).unwrap();
        assert_eq!(phi.get(12), 4.0);
        assert_eq!(mu.get(12), 0.0);
        assert_eq!(tau.get(12), 6.0);
    }

    #[test]
    fn tables_match_trial_division() {
        let n = 20_000;
        let t = FactorTable::build(n).unwrap();
        let mu = arith_table(ArithKind::Mobius, n, &t).unwrap();
        let phi = arith_table(ArithKind::Totient, n, &t).unwrap();
        let tau = arith_table(ArithKind::Divisors, n, &t).unwrap();
        let tau3 = arith_table(ArithKind::Divisors3, n, &t).unwrap();
        let lam = arith_table(ArithKind::VonMangoldt, n, &t).unwrap();
        for k in 1..=n {
            assert_eq!(mu.get(k), modular::mobius(k) as f64, "mu({k})");
            assert_eq!(phi.get(k), modular::totient(k) as f64, "phi({k})");
            assert_eq!(tau.get(k), modular::divisor_count(k) as f64, "tau({k})");
            let t3: u64 = modular::divisors(k)
                .iter()
                .map(|&d| modular::divisor_count(k / d))
                .sum();
            assert_eq!(tau3.get(k), t3 as f64, "tau3({k})");
            let f = modular::factorize(k);
            let expect = if f.len() == 1 {
                (f[0].0 as f64).ln()
            } else {
                0.0
            };
            assert_eq!(lam.get(k), expect, "Lambda({k})");
        }
    }

    #[test]
    fn arith_table_rejects_non_table_kind() {
        let t = FactorTable::build(10).unwrap();
        assert!(arith_table(ArithKind::Lambda, 10, &t).is_err());
        assert!("nope".parse::<ArithKind>().is_err());
    }

    #[test]
    fn convolution_identity_and_inversion() {
        let n = 10_000;
        let t = FactorTable::build(n).unwrap();
        let tau = arith_table(ArithKind::Divisors, n, &t).unwrap();
        let out = dirichlet_convolve(&ArithSequence::delta(n), &tau, n).unwrap();
        assert_eq!(out.padded(), tau.padded());
        let mu = arith_table(ArithKind::Mobius, n, &t).unwrap();
        let e = dirichlet_convolve(&ArithSequence::one(n), &mu, n).unwrap();
        assert_eq!(e.padded(), ArithSequence::delta(n).padded());
    }

    #[test]
    fn one_star_lambda_is_log() {
        let t = FactorTable::build(1000).unwrap();
        let lam = arith_table(ArithKind::VonMangoldt, 1000, &t).unwrap();
        let direct: f64 = modular::divisors(720).iter().map(|&d| lam.get(d)).sum();
        assert!((direct - 720f64.ln()).abs() < 1e-12);
        let conv = dirichlet_convolve(&ArithSequence::one(1000), &lam, 1000).unwrap();
        assert!((conv.get(720) - 720f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn convolution_length_mismatch() {
        let a = ArithSequence::one(10);
        let b = ArithSequence::one(5);
        assert!(matches!(
            dirichlet_convolve(&a, &b, 10),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn psi_examples() {
        let t = FactorTable::build(1000).unwrap();
        let v = psi_progression(10.0, 3, 1, &t).unwrap();
        assert!((v - 14f64.ln()).abs() < 1e-12);
        let psi10 = psi_progression(10.0, 1, 1, &t).unwrap();
        let expect = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((psi10 - expect).abs() < 1e-12);
        assert_eq!(psi_progression(2.0, 5, 3, &t).unwrap(), 0.0);
        assert!(psi_progression(10.0, 6, 3, &t).is_err());
    }

    #[test]
    fn sifted_psi_examples() {
        let t = FactorTable::build(1000).unwrap();
        let psi100 = psi_progression(100.0, 1, 1, &t).unwrap();
        let s = sifted_psi_progression(100.0, 1, 1, 1.0, &t).unwrap();
        assert!((s.sifted - psi100).abs() < 1e-12);
        let s = sifted_psi_progression(100.0, 1, 1, 97.0, &t).unwrap();
        assert_eq!(s.sifted, 0.0);
        let s = sifted_psi_progression(100.0, 1, 1, 10.0, &t).unwrap();
        let mut expect = 0.0;
        for p in [2u64, 3, 5, 7] {
            let mut pk = p;
            while pk <= 100 {
                expect += (p as f64).ln();
                pk *= p;
            }
        }
        assert!((s.small_prime - expect).abs() < 1e-12);
        assert!(s.bound_holds());
    }

    #[test]
    fn chebyshev_sanity() {
        let t = FactorTable::build(1_000_000).unwrap();
        for x in [1e5, 1e6] {
            let r = psi_progression(x, 1, 1, &t).unwrap() / x;
            assert!(r > 0.9 && r < 1.1, "psi({x})/x = {r}");
        }
    }

    #[test]
    fn small_prime_bound_on_grid() {
        let t = FactorTable::build(100_000).unwrap();
        for x in [100.0, 1e3, 1e4, 1e5] {
            for z in [2.0, 3.5, 10.0, 30.0, 99.0] {
                let s = sifted_psi_progression(x, 1, 1, z, &t).unwrap();
                assert!(s.bound_holds(), "x={x} z={z}");
            }
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn convolution_is_associative(seed in 0u64..1000) {
            let n = 2000u64;
            // cheap deterministic pseudo-random bounded sequences
            let gen = |s: u64| ArithSequence::from_fn(ArithKind::Custom("r".into()), n, move |k| {
                let h = (k.wrapping_mul(6364136223846793005).wrapping_add(s.wrapping_mul(1442695040888963407))) >> 33;
                (h % 2001) as f64 / 1000.0 - 1.0
            });
            let (f, g, h) = (gen(seed), gen(seed + 1), gen(seed + 2));
            let left = dirichlet_convolve(&dirichlet_convolve(&f, &g, n).unwrap(), &h, n).unwrap();
            let right = dirichlet_convolve(&f, &dirichlet_convolve(&g, &h, n).unwrap(), n).unwrap();
            for k in 1..=n {
                let (a, b) = (left.get(k), right.get(k));
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())));
            }
        }

        #[test]
        fn factorization_recovers_n(n in 2u64..50_000) {
            let t = FactorTable::build(50_000).unwrap();
            let prod: u64 = t.factorize(n).iter().map(|&(p, k)| p.pow(k)).product();
            prop_assert_eq!(prod, n);
        }
    }
}
