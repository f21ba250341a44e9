//! `L(s, χ)` on the real segment `(0, 2]`, real-zero scans and the sifted
//! Euler products `∏_{p ≤ z} (1 − χ(p)/p)`.

use crate::arith::{floor_arg, FactorTable};
use crate::characters::RealPrimitiveCharacter;
use crate::error::{invalid, Error, Result};
use crate::sum::CompensatedSum;

/// Truncated value of `L(s, χ)` with a bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LEvaluation {
    pub s: f64,
    pub terms: u64,
    pub value: f64,
    /// Bound on |L(s, χ) − value|, from partial summation against
    /// |Σ_{M<n≤N} χ(n)| ≤ √D·log D.
    pub tail_bound: f64,
}

impl LEvaluation {
    /// True when `value − tail_bound > 0`.
    pub fn certified_positive(&self) -> bool {
        self.value - self.tail_bound > 0.0
    }

    pub fn contains(&self, exact: f64) -> bool {
        (self.value - exact).abs() <= self.tail_bound
    }
}

/// √D·log D, the character-sum envelope used for every tail bound.
pub fn character_sum_envelope(chi: &RealPrimitiveCharacter) -> f64 {
    let d = chi.modulus() as f64;
    d.sqrt() * d.ln()
}

/// `Σ_{n ≤ terms} χ(n) n^{−s}` for `s ∈ (0, 2]`.
pub fn l_value(chi: &RealPrimitiveCharacter, s: f64, terms: u64) -> Result<LEvaluation> {
    if !(s > 0.0 && s <= 2.0) {
        return Err(Error::OutOfDomain(format!("s = {s} is outside (0, 2]")));
    }
    let dm = chi.modulus();
    if terms < dm {
        return Err(invalid(format!(
            "terms = {terms} must cover one period D = {dm}"
        )));
    }
    let vals = chi.values();
    let mut acc = CompensatedSum::new();
    let mut r = 0usize;
    let period = dm as usize;
    for n in 1..=terms {
        r += 1;
        if r == period {
            r = 0;
        }
        let c = vals[r];
        if c == 0 {
            continue;
        }
        let nf = n as f64;
        let term = if s == 1.0 {
            1.0 / nf
        } else if s == 2.0 {
            1.0 / (nf * nf)
        } else {
            nf.powf(-s)
        };
        acc.add(if c > 0 { term } else { -term });
    }
    Ok(LEvaluation {
        s,
        terms,
        value: acc.value(),
        tail_bound: character_sum_envelope(chi) * s.max(1.0) * (terms as f64).powf(-s),
    })
}

/// Default truncation for `L(1, χ)`: at least 2²⁰ terms and 64 periods.
pub fn default_terms(chi: &RealPrimitiveCharacter) -> u64 {
    (1u64 << 20).max(64 * chi.modulus())
}

/// Doubles the truncation from 16 periods until `L(s, χ) − tail_bound > 0`
/// or `max_terms` is reached; returns the last evaluation either way.
pub fn certify_positive(
    chi: &RealPrimitiveCharacter,
    s: f64,
    max_terms: u64,
) -> Result<LEvaluation> {
    let mut terms = 16 * chi.modulus();
    loop {
        let ev = l_value(chi, s, terms)?;
        if ev.certified_positive() || terms >= max_terms {
            return Ok(ev);
        }
        terms = (terms * 2).min(max_terms);
    }
}

/// A sign-change bracket refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl ZeroBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A located real zero β and its quality η = 1/((1 − β) log D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealZero {
    pub beta: f64,
    pub eta: f64,
    pub bracket: ZeroBracket,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiegelZeroReport {
    /// The zero closest to 1, if any sign change was found.
    pub closest: Option<RealZero>,
    pub zeros: Vec<ZeroBracket>,
    pub tolerance: f64,
}

impl SiegelZeroReport {
    pub fn none_found(&self) -> bool {
        self.closest.is_none()
    }
}

/// Quality η of a real zero β for modulus `D`.
pub fn quality(beta: f64, modulus: u64) -> f64 {
    1.0 / ((1.0 - beta) * (modulus as f64).ln())
}

/// Brackets every sign change of `f` on an even `grid`-point mesh of
/// `[lo, hi]` and bisects each bracket down to width `tol`.
pub fn scan_sign_changes<F>(
    f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> Result<Vec<ZeroBracket>>
where
    F: Fn(f64) -> Result<f64>,
{
    if grid < 2 {
        return Err(invalid(format!(
            "grid must have at least 2 points, got {grid}"
        )));
    }
    if !(lo < hi) {
        return Err(invalid(format!("empty interval [{lo}, {hi}]")));
    }
    if !(tol >= 1e-12) {
        return Err(invalid(format!("tolerance {tol} is below 1e-12")));
    }
    let step = (hi - lo) / (grid - 1) as f64;
    let pts: Vec<f64> = (0..grid)
        .map(|i| {
            if i + 1 == grid {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let vals = pts.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..grid - 1 {
        let (mut a, mut b, mut fa, mut fb) = (pts[i], pts[i + 1], vals[i], vals[i + 1]);
        if fa == 0.0 {
            out.push(ZeroBracket {
                lo: a,
                hi: a,
                f_lo: 0.0,
                f_hi: 0.0,
            });
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        while b - a > tol {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 {
                a = m;
                b = m;
                fa = 0.0;
                fb = 0.0;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        out.push(ZeroBracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    if vals[grid - 1] == 0.0 {
        out.push(ZeroBracket {
            lo: hi,
            hi,
            f_lo: 0.0,
            f_hi: 0.0,
        });
    }
    Ok(out)
}

/// Zero scan for an arbitrary function, reporting quality against `modulus`.
pub fn siegel_report_from_fn<F>(
    f: F,
    modulus: u64,
    s_lo: f64,
    s_hi: f64,
    grid: usize,
    tol: f64,
) -> Result<SiegelZeroReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let zeros = scan_sign_changes(f, s_lo, s_hi, grid, tol)?;
    let closest = zeros
        .iter()
        .min_by(|a, b| {
            (1.0 - a.midpoint())
                .abs()
                .total_cmp(&(1.0 - b.midpoint()).abs())
        })
        .map(|br| RealZero {
            beta: br.midpoint(),
            eta: quality(br.midpoint(), modulus),
            bracket: *br,
        });
    Ok(SiegelZeroReport {
        closest,
        zeros,
        tolerance: tol,
    })
}

/// Scans `L(s, χ)` on `[s_lo, s_hi]` for real zeros.
pub fn scan_real_zeros(
    chi: &RealPrimitiveCharacter,
    s_lo: f64,
    s_hi: f64,
    grid: usize,
    tol: f64,
    terms: u64,
) -> Result<SiegelZeroReport> {
    if !(s_lo > 0.0 && s_lo < s_hi && s_hi <= 2.0) {
        return Err(Error::OutOfDomain(format!(
            "need 0 < s_lo < s_hi <= 2, got [{s_lo}, {s_hi}]"
        )));
    }
    siegel_report_from_fn(
        |s| l_value(chi, s, terms).map(|ev| ev.value),
        chi.modulus(),
        s_lo,
        s_hi,
        grid,
        tol,
    )
}

/// `∏_{p ≤ z} (1 − χ(p)/p)`, accumulated in log space.
pub fn sifted_euler_product(
    chi: &RealPrimitiveCharacter,
    z: f64,
    table: &FactorTable,
) -> Result<f64> {
    table.check("z", floor_arg(z))?;
    let mut acc = CompensatedSum::new();
    for p in table.primes_up_to(z) {
        let c = chi.value(p);
        if c != 0 {
            acc.add((-f64::from(c) / p as f64).ln_1p());
        }
    }
    Ok(acc.value().exp())
}

/// The sifted `L(1, χ)` value measured against `log D / (η log z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdpReport {
    pub l_one: LEvaluation,
    pub euler_product: f64,
    /// L(1, χ)·∏_{p ≤ z}(1 − χ(p)/p)
    pub numerator: f64,
    /// log D / (η log z)
    pub envelope: f64,
    pub ratio: f64,
}

pub fn fdp_report(
    chi: &RealPrimitiveCharacter,
    z: f64,
    eta: f64,
    table: &FactorTable,
) -> Result<FdpReport> {
    let dm = chi.modulus() as f64;
    if !(z > 1.0 && z <= dm * dm) {
        return Err(Error::OutOfDomain(format!(
            "z = {z} must lie in (1, D²] = (1, {}]",
            dm * dm
        )));
    }
    if !(eta > 0.0) {
        return Err(invalid(format!("quality η must be positive, got {eta}")));
    }
    let l_one = l_value(chi, 1.0, default_terms(chi))?;
    let euler_product = sifted_euler_product(chi, z, table)?;
    let numerator = l_one.value * euler_product;
    let envelope = dm.ln() / (eta * z.ln());
    Ok(FdpReport {
        l_one,
        euler_product,
        numerator,
        envelope,
        ratio: numerator / envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chi(d: i64) -> RealPrimitiveCharacter {
        RealPrimitiveCharacter::new(d).unwrap()
    }

    /// Leibniz series summed in pairs to high accuracy with an Euler
    /// transform-free tail estimate; used only as an independent oracle.
    fn leibniz_oracle(n_pairs: u64) -> f64 {
        // Σ_{k<n} [1/(4k+1) − 1/(4k+3)] + tail ≈ 1/(8n)... the midpoint of
        // consecutive partial sums converges at O(n^-3).
        let mut s = 0.0;
        let mut prev = 0.0;
        for k in 0..n_pairs {
            prev = s;
            s += 1.0 / (4 * k + 1) as f64 - 1.0 / (4 * k + 3) as f64;
        }
        let _ = prev;
        s + 1.0 / (8.0 * n_pairs as f64)
    }

    #[test]
    fn l_one_mod_four() {
        let ev = l_value(&chi(-4), 1.0, 1_000_000).unwrap();
        assert!((leibniz_oracle(1_000_000) - PI / 4.0).abs() < 1e-12);
        assert!(ev.contains(PI / 4.0), "{ev:?}");
    }

    #[test]
    fn l_one_mod_three() {
        // paired terms 1/(3k+1) − 1/(3k+2)
        let oracle: f64 = (0..2_000_000u64)
            .map(|k| 1.0 / (3 * k + 1) as f64 - 1.0 / (3 * k + 2) as f64)
            .sum();
        let exact = PI / (3.0 * 3f64.sqrt());
        assert!((oracle - exact).abs() < 1e-6);
        let ev = l_value(&chi(-3), 1.0, 1_000_000).unwrap();
        assert!(ev.contains(exact));
        assert!((ev.value - 0.6045998).abs() < 1e-6);
    }

    #[test]
    fn catalan() {
        let oracle: f64 = (0..1_000_000u64)
            .map(|k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                s / ((2 * k + 1) as f64).powi(2)
            })
            .sum();
        let ev = l_value(&chi(-4), 2.0, 100_000).unwrap();
        assert!(ev.contains(oracle));
        assert!((ev.value - 0.9159656).abs() < 1e-7);
    }

    #[test]
    fn l_value_domain_errors() {
        assert!(matches!(
            l_value(&chi(-4), 0.0, 100),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            l_value(&chi(-4), -1.0, 100),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            l_value(&chi(-7), 1.0, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn doubling_terms_stays_within_tail_bound() {
        for d in [-3, -4, 5, -7, 8, 12, -23, 101] {
            for s in [0.5, 0.8, 1.0, 1.5, 2.0] {
                let a = l_value(&chi(d), s, 20_000).unwrap();
                let b = l_value(&chi(d), s, 40_000).unwrap();
                assert!((a.value - b.value).abs() < a.tail_bound, "d={d} s={s}");
            }
        }
    }

    #[test]
    fn no_zero_for_mod_four() {
        let rep = scan_real_zeros(&chi(-4), 0.5, 1.5, 100, 1e-10, 200_000).unwrap();
        assert!(rep.none_found());
    }

    #[test]
    fn synthetic_linear_zero() {
        let log_d = 5u64;
        let rep = siegel_report_from_fn(|s| Ok(s - 0.99), log_d, 0.5, 1.5, 100, 1e-12).unwrap();
        let z = rep.closest.unwrap();
        assert!((z.beta - 0.99).abs() < 1e-12);
        assert!(z.bracket.width() <= 1e-12);
        let expect = 1.0 / (0.01 * 5f64.ln());
        assert!((z.eta - expect).abs() / expect < 1e-9);
        let b = z.bracket;
        assert!(b.f_lo * b.f_hi <= 0.0);
        assert!((z.beta - 0.99).abs() <= b.f_lo.abs() + b.f_hi.abs());
    }

    #[test]
    fn multiple_sign_changes_pick_closest_to_one() {
        let rep =
            siegel_report_from_fn(|s| Ok((s - 0.6) * (s - 0.95)), 7, 0.5, 1.2, 50, 1e-10).unwrap();
        assert_eq!(rep.zeros.len(), 2);
        assert!((rep.closest.unwrap().beta - 0.95).abs() < 1e-9);
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            scan_sign_changes(|s| Ok(s), 0.5, 1.0, 1, 1e-6),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn euler_product_examples() {
        let t = FactorTable::build(200_000).unwrap();
        let c = chi(-4);
        assert_eq!(sifted_euler_product(&c, 1.5, &t).unwrap(), 1.0);
        assert!((sifted_euler_product(&c, 3.0, &t).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        let expect = (4.0 / 3.0) * (4.0 / 5.0) * (8.0 / 7.0);
        assert!((sifted_euler_product(&c, 10.0, &t).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn euler_product_approaches_reciprocal_l_one() {
        let t = FactorTable::build(100_000).unwrap();
        let prod = sifted_euler_product(&chi(-4), 1e5, &t).unwrap();
        let target = 4.0 / PI;
        assert!((prod - target).abs() / target < 0.05);
    }

    #[test]
    fn fdp_examples() {
        let t = FactorTable::build(1000).unwrap();
        let c = chi(-4);
        let r1 = fdp_report(&c, 4.0, 10.0, &t).unwrap();
        assert!(r1.ratio.is_finite() && r1.ratio > 0.0);
        let r2 = fdp_report(&c, 4.0, 20.0, &t).unwrap();
        assert!((r2.ratio / r1.ratio - 2.0).abs() < 1e-12);
        assert!(matches!(
            fdp_report(&c, 17.0, 10.0, &t),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            fdp_report(&c, 1.0, 10.0, &t),
            Err(Error::OutOfDomain(_))
        ));
    }
}
