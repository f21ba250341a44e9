//! Sifted sums: the triple convolution expanded through beta-sieve weights
//! and the harmonic sum of λ over z-rough integers.

use super::CharacterTables;
use crate::arith::{
    dirichlet_convolve, floor_arg, progression_start, require_coprime, ArithSequence, FactorTable,
};
use crate::error::{invalid, Result};
use crate::modular::{gcd, mod_inverse, totient};
use crate::sieve_weights::BetaSieveWeight;
use crate::sum::CompensatedSum;

/// Declared bound on `f₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F1Bound {
    /// `|f₁(n)| ≤ log n`
    Log,
    /// `|f₁(n)| ≤ 1`
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleConvolution {
    /// `Σ_{n≤x, n≡a, P⁻(n)>z} (f₁∗f₂∗f₃)(n)`
    pub direct: f64,
    /// The same sum with the roughness condition replaced by the weights.
    pub expanded: f64,
    /// `e^{−u/15}·(x/φ(q))·(log x/log z)^{12}` (exponent 11 under [`F1Bound::Unit`]).
    pub envelope: f64,
}

fn check_bounded(f: &ArithSequence, n: u64, name: &str, bound: impl Fn(u64) -> f64) -> Result<()> {
    if f.len() < n {
        return Err(invalid(format!(
            "{name} is tabulated up to {}, needed {n}",
            f.len()
        )));
    }
    for k in 1..=n {
        if f.get(k).abs() > bound(k) + 1e-12 {
            return Err(invalid(format!(
                "{name}({k}) = {} violates its declared bound",
                f.get(k)
            )));
        }
    }
    Ok(())
}

fn validate(n: u64, f: [&ArithSequence; 3], f1_bound: F1Bound) -> Result<()> {
    match f1_bound {
        F1Bound::Log => check_bounded(f[0], n, "f1", |k| (k as f64).ln())?,
        F1Bound::Unit => check_bounded(f[0], n, "f1", |_| 1.0)?,
    }
    check_bounded(f[1], n, "f2", |_| 1.0)?;
    check_bounded(f[2], n, "f3", |_| 1.0)
}

/// `(1∗w)(n)` for `n ≤ N`.
fn weight_divisor_sums(w: &BetaSieveWeight, n: u64) -> Vec<f64> {
    let mut v = vec![0.0; n as usize + 1];
    for e in w.entries() {
        if e.d > n {
            break;
        }
        let wd = f64::from(e.weight);
        for m in (e.d..=n).step_by(e.d as usize) {
            v[m as usize] += wd;
        }
    }
    v
}

fn envelope(x: f64, q: u64, w: &BetaSieveWeight, f1_bound: F1Bound) -> f64 {
    let power = match f1_bound {
        F1Bound::Log => 12,
        F1Bound::Unit => 11,
    };
    (-w.u() / 15.0).exp() * x / totient(q) as f64 * (x.ln() / w.z().ln()).powi(power)
}

/// Direct sifted sum of `f₁∗f₂∗f₃` and its expansion
/// `Σ_{d₁,d₂,d₃} w(d₁)w(d₂)w(d₃) Σ_{kℓm ≤ x/d, kℓm ≡ a·d̄} f₁(kd₁)f₂(ℓd₂)f₃(md₃)`.
///
/// Since `n ≡ a` forces every divisor to be prime to `q`, the expansion
/// equals `Σ_{n≤x, n≡a} (g₁∗g₂∗g₃)(n)` with `gᵢ = fᵢ·(1∗w)`, which is how it
/// is evaluated here; [`sifted_triple_literal`] computes the same quantity
/// term by term.
#[allow(clippy::too_many_arguments)]
pub fn sifted_triple_convolution(
    x: f64,
    q: u64,
    a: u64,
    f1: &ArithSequence,
    f2: &ArithSequence,
    f3: &ArithSequence,
    f1_bound: F1Bound,
    w: &BetaSieveWeight,
    table: &FactorTable,
) -> Result<TripleConvolution> {
    require_coprime(a, q)?;
    let n = floor_arg(x);
    table.check("x", n)?;
    validate(n, [f1, f2, f3], f1_bound)?;
    if n == 0 {
        return Ok(TripleConvolution {
            direct: 0.0,
            expanded: 0.0,
            envelope: 0.0,
        });
    }
    let f = dirichlet_convolve(&dirichlet_convolve(f1, f2, n)?, f3, n)?;
    let sw = weight_divisor_sums(w, n);
    let twist = |f: &ArithSequence| {
        ArithSequence::from_fn(f.kind().clone(), n, |k| f.get(k) * sw[k as usize])
    };
    let g = dirichlet_convolve(
        &dirichlet_convolve(&twist(f1), &twist(f2), n)?,
        &twist(f3),
        n,
    )?;
    let mut direct = CompensatedSum::new();
    let mut expanded = CompensatedSum::new();
    let mut k = progression_start(a, q);
    while k <= n {
        if table.is_rough(k, w.z()) {
            direct.add(f.get(k));
        }
        expanded.add(g.get(k));
        k += q;
    }
    Ok(TripleConvolution {
        direct: direct.value(),
        expanded: expanded.value(),
        envelope: envelope(x, q, w, f1_bound),
    })
}

/// The expansion summed literally over weight triples and `kℓm ≤ x/(d₁d₂d₃)`.
/// Cost grows like `Σ_d (x/d)·log²(x/d)`; intended for small `x`.
#[allow(clippy::too_many_arguments)]
pub fn sifted_triple_literal(
    x: f64,
    q: u64,
    a: u64,
    f1: &ArithSequence,
    f2: &ArithSequence,
    f3: &ArithSequence,
    w: &BetaSieveWeight,
) -> Result<f64> {
    require_coprime(a, q)?;
    let n = floor_arg(x);
    let support: Vec<(u64, f64)> = w
        .entries()
        .iter()
        .filter(|e| e.d <= n && gcd(e.d, q) == 1)
        .map(|e| (e.d, f64::from(e.weight)))
        .collect();
    let mut acc = CompensatedSum::new();
    for &(d1, w1) in &support {
        for &(d2, w2) in &support {
            if d1 * d2 > n {
                break;
            }
            for &(d3, w3) in &support {
                let d = d1 * d2 * d3;
                if d > n {
                    break;
                }
                let m_max = n / d;
                let b = (a % q) * mod_inverse(d % q, q).unwrap_or(0) % q;
                let mut inner = CompensatedSum::new();
                for k in 1..=m_max {
                    let v1 = f1.get(k * d1);
                    if v1 == 0.0 {
                        continue;
                    }
                    for l in 1..=m_max / k {
                        let v2 = f2.get(l * d2);
                        if v2 == 0.0 {
                            continue;
                        }
                        let kl = k * l % q;
                        for m in 1..=m_max / (k * l) {
                            if q == 1 || kl * (m % q) % q == b {
                                inner.add(v1 * v2 * f3.get(m * d3));
                            }
                        }
                    }
                }
                acc.add(w1 * w2 * w3 * inner.value());
            }
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JokaReport {
    /// `Σ_{z<n≤x, P⁻(n)>z} λ(n)/n`
    pub value: f64,
    /// `V³/η + exp(−c√(V log η))`
    pub envelope: f64,
    /// `V = log x/log D`
    pub v: f64,
}

pub fn joka_sum(
    x: f64,
    z: f64,
    eta: f64,
    c: f64,
    t: &CharacterTables,
    table: &FactorTable,
) -> Result<JokaReport> {
    if !(z > 1.0) {
        return Err(invalid(format!("z = {z} must exceed 1")));
    }
    if !(eta >= 1.0) || !(c > 0.0) {
        return Err(invalid(format!(
            "need η ≥ 1 and c > 0, got η = {eta}, c = {c}"
        )));
    }
    let n_max = t.check_x(x)?;
    table.check("x", n_max)?;
    let mut acc = CompensatedSum::new();
    for n in (floor_arg(z) + 1)..=n_max {
        if table.is_rough(n, z) {
            acc.add(t.lambda.get(n) / n as f64);
        }
    }
    let v = x.ln() / (t.chi.modulus() as f64).ln();
    Ok(JokaReport {
        value: acc.value(),
        envelope: v.powi(3) / eta + (-c * (v * eta.ln()).sqrt()).exp(),
        v,
    })
}
