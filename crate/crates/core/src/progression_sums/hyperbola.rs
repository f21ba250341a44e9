//! Direct sums of λ and λ′ against their hyperbola-method main terms.

use super::{coprime, CharacterTables};
use crate::arith::{progression_start, require_coprime, ArithSequence};
use crate::error::{invalid, Result};
use crate::modular::{divisor_count, totient};
use crate::sum::CompensatedSum;

/// ε used in the coprime-sum envelope `τ(q)·x^{1/2}·D^{1/2+ε}`.
pub const COPRIME_LAMBDA_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolaEstimate {
    pub direct: f64,
    pub main_term: f64,
    pub error: f64,
    /// The big-Oh expression without its implied constant.
    pub envelope: f64,
    pub ratio: f64,
    /// Whether the parameters lie in the range where the estimate is claimed.
    pub asserted: bool,
}

impl HyperbolaEstimate {
    fn new(direct: f64, main_term: f64, envelope: f64, asserted: bool) -> Self {
        let error = direct - main_term;
        Self {
            direct,
            main_term,
            error,
            envelope,
            ratio: error / envelope,
            asserted,
        }
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("ε = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

fn progression(seq: &ArithSequence, n_max: u64, q: u64, a: u64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut n = progression_start(a, q);
    while n <= n_max {
        acc.add(seq.get(n));
        n += q;
    }
    acc.value()
}

fn coprime_sum(seq: &ArithSequence, n_max: u64, q: u64) -> f64 {
    (1..=n_max)
        .filter(|&n| coprime(n, q))
        .map(|n| seq.get(n))
        .collect::<CompensatedSum>()
        .value()
}

/// `Σ_{n≤x, (n,q)=1} λ(n)` against `xφ(q)/q·∏_{p|q}(1 − χ(p)/p)·L(1, χ)`.
pub fn lambda_sum_coprime(x: f64, q: u64, t: &CharacterTables) -> Result<HyperbolaEstimate> {
    if q == 0 {
        return Err(invalid("modulus q must be positive"));
    }
    let n_max = t.check_x(x)?;
    let direct = coprime_sum(&t.lambda, n_max, q);
    // below 1 the sum is empty and the main term is taken as 0
    let x = if n_max == 0 { 0.0 } else { x };
    let main = x * totient(q) as f64 / q as f64 * t.euler_factor(q) * t.l_one.value;
    let dm = t.chi.modulus() as f64;
    let envelope = divisor_count(q) as f64 * x.sqrt() * dm.powf(0.5 + COPRIME_LAMBDA_EPSILON);
    Ok(HyperbolaEstimate::new(
        direct,
        main,
        envelope.max(f64::MIN_POSITIVE),
        true,
    ))
}

/// `Σ_{n≤x, n≡a (q)} λ(n)` against `x(1 + 1_{D|q}χ(a))/q·∏_{p|q}(1 − χ(p)/p)·L(1, χ)`
/// with envelope `D·x^{1−ε/2}/q`; asserted when `q ≤ x^{2/3−ε}`.
pub fn lambda_sum_progression(
    x: f64,
    q: u64,
    a: u64,
    eps: f64,
    t: &CharacterTables,
) -> Result<HyperbolaEstimate> {
    require_coprime(a, q)?;
    check_epsilon(eps)?;
    let n_max = t.check_x(x)?;
    let direct = progression(&t.lambda, n_max, q, a);
    let factor = 1.0 + f64::from(t.twist(q, a));
    let main = x * factor / q as f64 * t.euler_factor(q) * t.l_one.value;
    let envelope = t.chi.modulus() as f64 * x.powf(1.0 - eps / 2.0) / q as f64;
    let asserted = (q as f64) <= x.powf(2.0 / 3.0 - eps);
    Ok(HyperbolaEstimate::new(direct, main, envelope, asserted))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPrimeReport {
    /// `Σ_{n≤x, n≡a} λ′(n)`
    pub progression: f64,
    /// `Σ_{n≤x, (n,q)=1} λ′(n)`
    pub coprime: f64,
    /// `(1 − 1_{D|q}χ(a))/φ(q)·coprime`
    pub main_first: f64,
    /// `1_{D|q}χ(a)/q·(x log x − x)·∏_{p|q}(1 − χ(p)/p)·L(1, χ)`
    pub main_second: f64,
    /// `1_{D|q}χ(a)/φ(q)·Σ_{(n,q)=1} λ(n) log n`, the exact form of the
    /// second main term before its asymptotic evaluation.
    pub main_second_exact: f64,
    pub residual: f64,
    /// `x^{1/2+ε}D^{1/2+ε}/q^{1/4}`
    pub envelope: f64,
    /// `x > qD`
    pub asserted: bool,
}

pub fn lambdaprime_sum_progression(
    x: f64,
    q: u64,
    a: u64,
    eps: f64,
    t: &CharacterTables,
) -> Result<LambdaPrimeReport> {
    require_coprime(a, q)?;
    check_epsilon(eps)?;
    let n_max = t.check_x(x)?;
    let progression_sum = progression(&t.lambda_prime, n_max, q, a);
    let coprime_total = coprime_sum(&t.lambda_prime, n_max, q);
    let twist = f64::from(t.twist(q, a));
    let phi = totient(q) as f64;
    let main_first = (1.0 - twist) / phi * coprime_total;
    let main_second = if twist == 0.0 || x < 1.0 {
        0.0
    } else {
        twist / q as f64 * (x * x.ln() - x) * t.euler_factor(q) * t.l_one.value
    };
    let main_second_exact = if twist == 0.0 {
        0.0
    } else {
        let s: CompensatedSum = (1..=n_max)
            .filter(|&n| coprime(n, q))
            .map(|n| t.lambda.get(n) * (n as f64).ln())
            .collect();
        twist / phi * s.value()
    };
    let dm = t.chi.modulus() as f64;
    Ok(LambdaPrimeReport {
        progression: progression_sum,
        coprime: coprime_total,
        main_first,
        main_second,
        main_second_exact,
        residual: progression_sum - main_first - main_second,
        envelope: x.powf(0.5 + eps) * dm.powf(0.5 + eps) / (q as f64).powf(0.25),
        asserted: x > q as f64 * dm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompaDifference {
    pub difference: f64,
    /// `D·x^{1−ε/6}/q`
    pub envelope: f64,
    /// `q ≤ x^{58/115−ε}`
    pub asserted: bool,
}

/// `Σ_{kℓ≤x, kℓ≡a} λ(k) − (1/φ(q))·Σ_{kℓ≤x, (kℓ,q)=1} λ(k)` by the double
/// loop over `k ≤ x`, `ℓ ≤ x/k`.
pub fn compa_difference(
    x: f64,
    q: u64,
    a: u64,
    eps: f64,
    t: &CharacterTables,
) -> Result<CompaDifference> {
    require_coprime(a, q)?;
    check_epsilon(eps)?;
    let n_max = t.check_x(x)?;
    let a = a % q;
    let mut prog = CompensatedSum::new();
    let mut cop = CompensatedSum::new();
    for k in 1..=n_max {
        let lam = t.lambda.get(k);
        if lam == 0.0 || !coprime(k, q) {
            continue;
        }
        let km = k % q;
        let (mut hits, mut units) = (0u64, 0u64);
        for l in 1..=n_max / k {
            if coprime(l, q) {
                units += 1;
                if km * (l % q) % q == a {
                    hits += 1;
                }
            }
        }
        prog.add(lam * hits as f64);
        cop.add(lam * units as f64);
    }
    Ok(CompaDifference {
        difference: prog.value() - cop.value() / totient(q) as f64,
        envelope: t.chi.modulus() as f64 * x.powf(1.0 - eps / 6.0) / q as f64,
        asserted: (q as f64) <= x.powf(58.0 / 115.0 - eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FactorTable;
    use crate::calibration::{
        COPRIME_LAMBDA_RATIO_MAX, PROGRESSION_LAMBDA_RATIO_MAX, VANISHING_MAIN_TERM_GUARD,
    };
    use crate::characters::RealPrimitiveCharacter;
    use crate::modular::gcd;
    use std::sync::OnceLock;

    fn tables(d: i64) -> CharacterTables {
        static T: OnceLock<FactorTable> = OnceLock::new();
        let t = T.get_or_init(|| FactorTable::build(1_000_000).unwrap());
        CharacterTables::build(RealPrimitiveCharacter::new(d).unwrap(), 1_000_000, t).unwrap()
    }

    fn mod4() -> &'static CharacterTables {
        static C: OnceLock<CharacterTables> = OnceLock::new();
        C.get_or_init(|| tables(-4))
    }

    #[test]
    fn coprime_lambda_small_example() {
        // λ(n) for n ≤ 20 summed by hand from the divisor counts
        let h = lambda_sum_coprime(20.0, 1, mod4()).unwrap();
        assert_eq!(h.direct, 17.0);
        let h0 = lambda_sum_coprime(0.5, 1, mod4()).unwrap();
        assert_eq!(h0.direct, 0.0);
        assert!(h0.main_term.abs() < 1e-12);
    }

    #[test]
    fn progression_and_coprime_agree_at_q_one() {
        for x in [1e3, 1e5] {
            let a = lambda_sum_coprime(x, 1, mod4()).unwrap();
            let b = lambda_sum_progression(x, 1, 1, 0.005, mod4()).unwrap();
            assert_eq!(a.direct, b.direct);
            assert!((a.main_term - b.main_term).abs() < 1e-9 * a.main_term);
        }
    }

    #[test]
    fn progression_with_d_dividing_q() {
        let t = mod4();
        let plus = lambda_sum_progression(1e5, 8, 1, 0.005, t).unwrap();
        let q_one = lambda_sum_progression(1e5, 8, 5, 0.005, t).unwrap();
        assert!((plus.main_term - q_one.main_term).abs() < 1e-9);
        let expect = 1e5 * 2.0 / 8.0 * t.l_one.value;
        assert!((plus.main_term - expect).abs() < 1e-6);
        let minus = lambda_sum_progression(1e6, 8, 3, 0.005, t).unwrap();
        assert_eq!(minus.main_term, 0.0);
        assert!(minus.direct.abs() < VANISHING_MAIN_TERM_GUARD * 1e6 / 8.0);
    }

    #[test]
    fn hyperbola_ratios_stay_below_calibrated_constants() {
        for d in [-4, -3, 5, 8] {
            let t = tables(d);
            for x in [1e4, 1e5, 1e6] {
                for q in [1, 15] {
                    let h = lambda_sum_coprime(x, q, &t).unwrap();
                    assert!(
                        h.ratio.abs() < COPRIME_LAMBDA_RATIO_MAX,
                        "d={d} x={x} q={q} {h:?}"
                    );
                }
                for (q, a) in [(7, 3), (8, 1), (8, 3), (12, 5), (15, 2)] {
                    let h = lambda_sum_progression(x, q, a, 0.005, &t).unwrap();
                    assert!(
                        h.ratio.abs() < PROGRESSION_LAMBDA_RATIO_MAX,
                        "d={d} x={x} q={q} a={a} {h:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn lambdaprime_partition_and_indicator() {
        let t = mod4();
        let r = lambdaprime_sum_progression(1e5, 7, 3, 0.005, t).unwrap();
        assert_eq!(r.main_second, 0.0);
        let r4 = lambdaprime_sum_progression(1e5, 4, 1, 0.005, t).unwrap();
        assert!(r4.main_second > 0.0 && r4.asserted);
        assert!(r4.residual.is_finite());
        for q in [4, 7, 12] {
            let total: f64 = (1..=q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| {
                    lambdaprime_sum_progression(1e5, q, a, 0.005, t)
                        .unwrap()
                        .progression
                })
                .sum();
            let cop = lambdaprime_sum_progression(1e5, q, 1, 0.005, t)
                .unwrap()
                .coprime;
            assert!((total - cop).abs() <= 1e-9 * cop.abs());
        }
    }

    #[test]
    fn compa_examples() {
        let t = mod4();
        assert_eq!(
            compa_difference(1e4, 1, 1, 0.005, t).unwrap().difference,
            0.0
        );
        let c = compa_difference(1e4, 3, 1, 0.005, t).unwrap();
        assert!(c.difference.abs() <= c.envelope);
        let total: f64 = [1, 2, 4, 5, 7, 8]
            .iter()
            .map(|&a| compa_difference(1e4, 9, a, 0.005, t).unwrap().difference)
            .sum();
        assert!(total.abs() < 1e-6);
    }

    #[test]
    fn compa_matches_convolved_progression_sum() {
        // Σ_{kℓ≡a} λ(k) = Σ_{n≡a} (λ∗1)(n) = Σ_{n≡a} τ-weighted count
        let t = mod4();
        let x = 5000u64;
        let mut conv = vec![0.0f64; x as usize + 1];
        for k in 1..=x {
            for m in (k..=x).step_by(k as usize) {
                conv[m as usize] += t.lambda.get(k);
            }
        }
        let prog: f64 = (1..=x)
            .filter(|n| n % 7 == 3)
            .map(|n| conv[n as usize])
            .sum();
        let cop: f64 = (1..=x)
            .filter(|n| n % 7 != 0)
            .map(|n| conv[n as usize])
            .sum();
        let c = compa_difference(x as f64, 7, 3, 0.005, t).unwrap();
        assert!((c.difference - (prog - cop / 6.0)).abs() < 1e-8);
    }
}
