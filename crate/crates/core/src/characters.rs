//! Real primitive Dirichlet characters, realized as Kronecker symbols
//! `(d|·)` of fundamental discriminants, plus the Gauss-sum and short
//! character-sum checks that go with them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::modular::{divisor_count, divisors, factorize, gcd};
use crate::sum::{e_frac, ComplexSum};

const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(d|n)` via the binary reciprocity reduction.
pub fn kronecker_symbol(d: i64, n: i64) -> i8 {
    let (mut a, mut b) = (i128::from(d), i128::from(n));
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 {
        1
    } else {
        TAB2[(a & 7) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        // b is odd and positive here
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Checks that `d` is a fundamental discriminant with `|d| >= 3`, naming the
/// failed condition otherwise.
pub fn validate_fundamental(d: i64) -> Result<()> {
    if d.unsigned_abs() < 3 {
        return Err(invalid(format!("discriminant {d}: |d| must be at least 3")));
    }
    let square_factor = |m: u64| {
        factorize(m)
            .into_iter()
            .find(|&(_, k)| k > 1)
            .map(|(p, _)| p)
    };
    match d.rem_euclid(4) {
        1 => match square_factor(d.unsigned_abs()) {
            None => Ok(()),
            Some(p) => Err(invalid(format!(
                "discriminant {d} ≡ 1 (mod 4) is not squarefree: divisible by {p}²"
            ))),
        },
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            if r != 2 && r != 3 {
                return Err(invalid(format!(
                    "discriminant {d} ≡ 0 (mod 4) needs d/4 ≡ 2 or 3 (mod 4), got d/4 ≡ {r}"
                )));
            }
            match square_factor(m.unsigned_abs()) {
                None => Ok(()),
                Some(p) => Err(invalid(format!(
                    "discriminant {d}: d/4 = {m} is not squarefree, divisible by {p}²"
                ))),
            }
        }
        r => Err(invalid(format!(
            "discriminant {d} ≡ {r} (mod 4); must be ≡ 0 or 1 (mod 4)"
        ))),
    }
}

pub fn is_fundamental(d: i64) -> bool {
    validate_fundamental(d).is_ok()
}

/// All fundamental discriminants with `3 <= |d| <= max_abs`, ordered by
/// `|d|` and then negative before positive.
pub fn fundamental_discriminants(max_abs: u64) -> Vec<i64> {
    let mut out = Vec::new();
    for m in 3..=max_abs as i64 {
        for d in [-m, m] {
            if is_fundamental(d) {
                out.push(d);
            }
        }
    }
    out
}

/// The real primitive character `χ = (d|·)` modulo `D = |d|`, with the full
/// period cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealPrimitiveCharacter {
    discriminant: i64,
    modulus: u64,
    values: Vec<i8>,
}

impl RealPrimitiveCharacter {
    /// Builds `χ` and verifies its defining properties on the period.
    pub fn new(d: i64) -> Result<Self> {
        validate_fundamental(d)?;
        let modulus = d.unsigned_abs();
        let values: Vec<i8> = (0..modulus as i64)
            .map(|r| kronecker_symbol(d, r))
            .collect();
        let chi = Self {
            discriminant: d,
            modulus,
            values,
        };
        chi.verify()?;
        Ok(chi)
    }

    fn verify(&self) -> Result<()> {
        let dm = self.modulus;
        let fail = |what: String| {
            Err(Error::Consistency(format!(
                "χ = ({}|·): {what}",
                self.discriminant
            )))
        };
        let step = (dm / 512).max(1) as usize;
        for r in (0..dm).step_by(step) {
            if kronecker_symbol(self.discriminant, (r + dm) as i64) != self.values[r as usize] {
                return fail(format!("not periodic at {r}"));
            }
        }
        let mut total = 0i64;
        for (r, &v) in self.values.iter().enumerate() {
            if (v == 0) != (gcd(r as u64, dm) > 1) {
                return fail(format!("zero set differs from gcd > 1 at {r}"));
            }
            total += i64::from(v);
        }
        if total != 0 {
            return fail(format!("period sum is {total}"));
        }
        let m = dm.min(40);
        for a in 1..m {
            for b in 1..m {
                if self.value(a * b) != self.value(a) * self.value(b) {
                    return fail(format!("not multiplicative at ({a}, {b})"));
                }
            }
        }
        for dp in proper_divisors(dm) {
            if self.primitivity_witness(dp).is_none() {
                return fail(format!("induced from modulus {dp}"));
            }
        }
        Ok(())
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `D = |d|`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The period `χ(0), …, χ(D − 1)`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    #[inline]
    pub fn value(&self, n: u64) -> i8 {
        self.values[(n % self.modulus) as usize]
    }

    #[inline]
    pub fn value_signed(&self, n: i64) -> i8 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// `χ(−1)`: −1 for negative discriminants.
    pub fn parity(&self) -> i8 {
        self.value(self.modulus - 1)
    }

    /// A unit `n ≡ 1 (mod D′)` with `χ(n) = −1`, which shows `χ` is not
    /// induced from modulus `D′`.
    pub fn primitivity_witness(&self, dprime: u64) -> Option<u64> {
        (1..=self.modulus)
            .step_by(dprime as usize)
            .find(|&n| self.value(n) == -1)
    }
}

/// Proper divisors `D′ | D`, `D′ < D`.
pub fn proper_divisors(n: u64) -> Vec<u64> {
    let mut d = divisors(n);
    d.pop();
    d
}

/// Gauss sum of a real primitive character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub modulus: u64,
}

impl GaussSumValue {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    /// `| |G| − √D |`.
    pub fn defect(&self) -> f64 {
        (self.magnitude() - (self.modulus as f64).sqrt()).abs()
    }
}

/// `G(χ) = Σ_{r=1}^{D} χ(r) e(r/D)`.
pub fn gauss_sum(chi: &RealPrimitiveCharacter) -> GaussSumValue {
    let dm = chi.modulus();
    let mut acc = ComplexSum::new();
    for r in 1..=dm {
        let v = chi.value(r);
        if v != 0 {
            acc.add(e_frac(r as i64, dm) * f64::from(v));
        }
    }
    GaussSumValue {
        value: acc.value(),
        modulus: dm,
    }
}

/// `Σ_{k ≤ u, gcd(k, q) = 1} χ(k)` with the Pólya–Vinogradov style envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedSum {
    pub value: i64,
    /// τ(q)·√D·log D
    pub envelope: f64,
}

impl RestrictedSum {
    pub fn within_envelope(&self) -> bool {
        (self.value.abs() as f64) <= self.envelope
    }
}

pub fn restricted_character_sum(
    chi: &RealPrimitiveCharacter,
    u: f64,
    q: u64,
) -> Result<RestrictedSum> {
    if q == 0 {
        return Err(invalid("q must be positive"));
    }
    let k_max = if u < 1.0 { 0 } else { u.floor() as u64 };
    let value = (1..=k_max)
        .filter(|&k| gcd(k, q) == 1)
        .map(|k| i64::from(chi.value(k)))
        .sum();
    let dm = chi.modulus() as f64;
    Ok(RestrictedSum {
        value,
        envelope: divisor_count(q) as f64 * dm.sqrt() * dm.ln(),
    })
}

fn require_proper_divisor(chi: &RealPrimitiveCharacter, dprime: u64) -> Result<()> {
    let dm = chi.modulus();
    if dprime == 0 || dprime >= dm || dm % dprime != 0 {
        return Err(invalid(format!(
            "{dprime} is not a proper divisor of D = {dm}"
        )));
    }
    Ok(())
}

/// `Σ_{j=1}^{D/D′} χ(j D′ + b)`; zero for every primitive `χ` and proper `D′`.
pub fn progression_complete_sum(chi: &RealPrimitiveCharacter, dprime: u64, b: u64) -> Result<i64> {
    require_proper_divisor(chi, dprime)?;
    let blocks = chi.modulus() / dprime;
    Ok((1..=blocks)
        .map(|j| i64::from(chi.value(j * dprime + b)))
        .sum())
}

/// A short sum over a progression with modulus a proper divisor of `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortSum {
    pub value: i64,
    /// D/D′, the structural bound on |value|.
    pub bound: u64,
    /// |value|·D′/D
    pub ratio: f64,
}

impl ShortSum {
    pub fn within_bound(&self) -> bool {
        self.value.unsigned_abs() <= self.bound
    }
}

/// `Σ_{M ≤ m < M+N} χ(m D′ + b)`.
pub fn short_progression_sum(
    chi: &RealPrimitiveCharacter,
    dprime: u64,
    b: u64,
    m_start: u64,
    len: u64,
) -> Result<ShortSum> {
    require_proper_divisor(chi, dprime)?;
    let value: i64 = (m_start..m_start + len)
        .map(|m| i64::from(chi.value(m * dprime + b)))
        .sum();
    let bound = chi.modulus() / dprime;
    Ok(ShortSum {
        value,
        bound,
        ratio: value.unsigned_abs() as f64 / bound as f64,
    })
}

/// One line of the `char --check` report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub passed: bool,
    pub max_defect: f64,
}

/// Runs every structural check on `chi`. Short sums use 50 seeded random
/// `(M, N, b)` per proper divisor.
pub fn invariant_report(chi: &RealPrimitiveCharacter, seed: u64) -> Vec<CheckRow> {
    let dm = chi.modulus();
    let mut rows = Vec::new();

    let mut mult_bad = 0u64;
    for m in 1..=200u64 {
        for n in 1..=200u64 {
            if chi.value(m * n) != chi.value(m) * chi.value(n) {
                mult_bad += 1;
            }
        }
    }
    rows.push(CheckRow {
        name: "multiplicativity",
        passed: mult_bad == 0,
        max_defect: mult_bad as f64,
    });

    let total: i64 = (1..=dm).map(|r| i64::from(chi.value(r))).sum();
    rows.push(CheckRow {
        name: "orthogonality",
        passed: total == 0,
        max_defect: total.abs() as f64,
    });

    let zero_bad = (0..dm)
        .filter(|&r| (chi.value(r) == 0) != (gcd(r, dm) > 1))
        .count();
    rows.push(CheckRow {
        name: "zero_iff_not_coprime",
        passed: zero_bad == 0,
        max_defect: zero_bad as f64,
    });

    let missing = proper_divisors(dm)
        .into_iter()
        .filter(|&dp| chi.primitivity_witness(dp).is_none())
        .count();
    rows.push(CheckRow {
        name: "primitivity",
        passed: missing == 0,
        max_defect: missing as f64,
    });

    let g = gauss_sum(chi);
    rows.push(CheckRow {
        name: "gauss_magnitude",
        passed: g.defect() < 1e-9,
        max_defect: g.defect(),
    });

    let mut block_max = 0i64;
    let mut short_ratio: f64 = 0.0;
    let mut short_ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ chi.discriminant() as u64);
    for dp in proper_divisors(dm) {
        for b in 1..=dm {
            let s = progression_complete_sum(chi, dp, b).expect("proper divisor");
            block_max = block_max.max(s.abs());
        }
        for _ in 0..50 {
            let b = rng.gen_range(1..=dm);
            let m0 = rng.gen_range(1..=10 * dm);
            let len = rng.gen_range(1..=4 * dm);
            let s = short_progression_sum(chi, dp, b, m0, len).expect("proper divisor");
            short_ok &= s.within_bound();
            short_ratio = short_ratio.max(s.ratio);
        }
    }
    rows.push(CheckRow {
        name: "complete_block_vanishing",
        passed: block_max == 0,
        max_defect: block_max as f64,
    });
    rows.push(CheckRow {
        name: "short_sum_bound",
        passed: short_ok,
        max_defect: short_ratio,
    });

    let mut pv_ratio: f64 = 0.0;
    let mut running = 0i64;
    let envelope = (dm as f64).sqrt() * (dm as f64).ln();
    for k in 1..=dm {
        running += i64::from(chi.value(k));
        pv_ratio = pv_ratio.max(running.abs() as f64 / envelope);
    }
    rows.push(CheckRow {
        name: "polya_vinogradov_envelope",
        passed: pv_ratio <= 1.0,
        max_defect: pv_ratio,
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler's criterion for an odd prime p: a^((p-1)/2) mod p.
    fn euler_criterion(a: i64, p: u64) -> i8 {
        let a = a.rem_euclid(p as i64) as u64;
        if a == 0 {
            return 0;
        }
        let mut r = 1u64;
        for _ in 0..(p - 1) / 2 {
            r = r * a % p;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        // (5|2): 5 ≡ 5 mod 8, so -1; also 2 is a non-residue mod 5
        assert_eq!(euler_criterion(2, 5), -1);
        assert_eq!(kronecker_symbol(5, 2), -1);
        for d in [-7, -4, -3, 5, 8, 12, 1000, -999] {
            assert_eq!(kronecker_symbol(d, 1), 1);
        }
        assert_eq!(kronecker_symbol(-4, 3), -1);
    }

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 101, 997] {
            for d in -60..60i64 {
                assert_eq!(
                    kronecker_symbol(d, p as i64),
                    euler_criterion(d, p),
                    "({d}|{p})"
                );
            }
        }
    }

    #[test]
    fn kronecker_special_arguments() {
        assert_eq!(kronecker_symbol(1, 0), 1);
        assert_eq!(kronecker_symbol(-1, 0), 1);
        assert_eq!(kronecker_symbol(2, 0), 0);
        assert_eq!(kronecker_symbol(-3, -1), -1);
        assert_eq!(kronecker_symbol(5, -1), 1);
        assert_eq!(kronecker_symbol(6, 4), 0);
    }

    #[test]
    fn build_examples() {
        let chi = RealPrimitiveCharacter::new(-4).unwrap();
        assert_eq!(chi.values(), &[0, 1, 0, -1]);
        let chi = RealPrimitiveCharacter::new(-3).unwrap();
        assert_eq!(chi.value(1), 1);
        assert_eq!(chi.value(2), -1);
        let chi = RealPrimitiveCharacter::new(12).unwrap();
        assert_eq!(euler_criterion(12, 5), -1);
        assert_eq!(chi.value(5), -1);
    }

    #[test]
    fn build_rejects_non_fundamental() {
        for d in [1, 2, -1, 0, 4, 9, -12, 6, 7, 16, 20, 25, -8 * 9] {
            assert!(RealPrimitiveCharacter::new(d).is_err(), "{d}");
        }
        let msg = RealPrimitiveCharacter::new(45).unwrap_err().to_string();
        assert!(msg.contains("3²"), "{msg}");
        let msg = RealPrimitiveCharacter::new(7).unwrap_err().to_string();
        assert!(msg.contains("mod 4"), "{msg}");
    }

    #[test]
    fn discriminant_enumeration() {
        let ds = fundamental_discriminants(13);
        assert_eq!(ds, vec![-3, -4, 5, -7, -8, 8, -11, 12, 13]);
    }

    #[test]
    fn gauss_examples() {
        let chi = RealPrimitiveCharacter::new(-4).unwrap();
        let g = gauss_sum(&chi);
        // i·1 + (−1)·(−i) = 2i
        assert!((g.value - Complex64::new(0.0, 2.0)).norm() < 1e-14);
        assert!((g.magnitude() - 2.0).abs() < 1e-14);
        let chi = RealPrimitiveCharacter::new(5).unwrap();
        assert!((gauss_sum(&chi).magnitude() - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn restricted_sum_examples() {
        let chi = RealPrimitiveCharacter::new(-4).unwrap();
        assert_eq!(restricted_character_sum(&chi, 0.5, 1).unwrap().value, 0);
        assert_eq!(restricted_character_sum(&chi, 8.0, 1).unwrap().value, 0);
        assert_eq!(restricted_character_sum(&chi, 5.0, 3).unwrap().value, 2);
    }

    #[test]
    fn complete_sum_examples() {
        let chi = RealPrimitiveCharacter::new(-4).unwrap();
        assert_eq!(chi.value(3) + chi.value(5), 0);
        assert_eq!(progression_complete_sum(&chi, 2, 1).unwrap(), 0);
        let chi = RealPrimitiveCharacter::new(12).unwrap();
        assert_eq!((chi.value(5), chi.value(9), chi.value(13)), (-1, 0, 1));
        assert_eq!(progression_complete_sum(&chi, 4, 1).unwrap(), 0);
        assert!(progression_complete_sum(&chi, 5, 1).is_err());
        assert!(progression_complete_sum(&chi, 12, 1).is_err());
    }

    #[test]
    fn short_sum_examples() {
        let chi = RealPrimitiveCharacter::new(12).unwrap();
        let s = short_progression_sum(&chi, 4, 1, 1, 2).unwrap();
        assert_eq!(s.value, -1);
        assert_eq!(s.bound, 3);
        for m in 1..20 {
            assert_eq!(short_progression_sum(&chi, 4, 7, m, 3).unwrap().value, 0);
        }
    }

    #[test]
    fn report_passes_for_small_discriminants() {
        for d in fundamental_discriminants(60) {
            let chi = RealPrimitiveCharacter::new(d).unwrap();
            for row in invariant_report(&chi, 1) {
                assert!(row.passed, "d={d} {}: {}", row.name, row.max_defect);
            }
        }
    }
}
