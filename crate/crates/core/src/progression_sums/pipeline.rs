//! ψ(x; q, a) against its main term, split into Δ, S₁, S₂ and the exact
//! small-prime corrections.

use super::{coprime, CharacterTables};
use crate::arith::{progression_start, require_coprime, FactorTable};
use crate::error::{invalid, Error, Result};
use crate::modular::totient;
use crate::sum::CompensatedSum;

/// Every term of
///
/// `ψ(x;q,a) − c·ψ(x) = Δ + c·S₁ − S₂ + (small_prime_prog − c·small_prime_coprime)`
///
/// with `c = (1 − 1_{D|q}χ(a))/φ(q)`, each computed by its own loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    pub x: f64,
    pub q: u64,
    pub a: u64,
    pub disc: i64,
    pub z: f64,
    pub psi_prog: f64,
    pub psi_total: f64,
    /// `c·ψ(x)`
    pub main: f64,
    pub delta: f64,
    pub s1: f64,
    pub s2: f64,
    /// `Σ Λ(n)` over `n ≤ x`, `n ≡ a`, `P⁻(n) ≤ z`.
    pub small_prime_prog: f64,
    /// `Σ Λ(n)` over `n ≤ x` with `P⁻(n) ≤ z` or `(n, q) > 1`.
    pub small_prime_coprime: f64,
    pub correction: f64,
    pub lhs_minus_rhs: f64,
}

impl DecompositionReport {
    pub fn closes(&self) -> bool {
        self.lhs_minus_rhs.abs() < 1e-6 * (1.0 + self.psi_prog.abs())
    }
}

/// Cost: `O(x)` for the single sums plus `O(x log log x)` for S₁ and S₂.
pub fn decomposition_pipeline(
    x: f64,
    q: u64,
    a: u64,
    z: f64,
    t: &CharacterTables,
    table: &FactorTable,
) -> Result<DecompositionReport> {
    require_coprime(a, q)?;
    if !(z >= 1.0) {
        return Err(invalid(format!("sifting level z = {z} must be at least 1")));
    }
    let n_max = t.check_x(x)?;
    table.check("x", n_max)?;
    let a_res = a % q;
    let c = (1.0 - f64::from(t.twist(q, a))) / totient(q) as f64;
    let rough = |n: u64| table.is_rough(n, z);

    let mut psi_prog = CompensatedSum::new();
    let mut psi_total = CompensatedSum::new();
    let mut small_prog = CompensatedSum::new();
    let mut small_cop = CompensatedSum::new();
    let mut lp_prog = CompensatedSum::new();
    let mut lp_cop = CompensatedSum::new();
    for n in 1..=n_max {
        let vm = t.von_mangoldt.get(n);
        let in_prog = n % q == a_res;
        let cop = coprime(n, q);
        let r = rough(n);
        if vm != 0.0 {
            psi_total.add(vm);
            if in_prog {
                psi_prog.add(vm);
                if !r {
                    small_prog.add(vm);
                }
            }
            if !r || !cop {
                small_cop.add(vm);
            }
        }
        if r {
            let lp = t.lambda_prime.get(n);
            if in_prog {
                lp_prog.add(lp);
            }
            if cop {
                lp_cop.add(lp);
            }
        }
    }

    // S₁, S₂: prime powers ℓ with P⁻(ℓ) > z against rough k > z.
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    let k_min = z.floor() as u64 + 1;
    for l in 2..=n_max {
        let vm = t.von_mangoldt.get(l);
        if vm == 0.0 || !rough(l) {
            continue;
        }
        let l_cop = coprime(l, q);
        let lq = l % q;
        for k in k_min.max(2)..=n_max / l {
            let lam = t.lambda.get(k);
            if lam == 0.0 || !rough(k) {
                continue;
            }
            let term = lam * vm;
            if l_cop && coprime(k, q) {
                s1.add(term);
            }
            if (k % q) * lq % q == a_res {
                s2.add(term);
            }
        }
    }

    let psi_prog = psi_prog.value();
    let psi_total = psi_total.value();
    let delta = lp_prog.value() - c * lp_cop.value();
    let (s1, s2) = (s1.value(), s2.value());
    let (small_prog, small_cop) = (small_prog.value(), small_cop.value());
    let correction = small_prog - c * small_cop;
    let lhs = psi_prog - c * psi_total;
    let mut rhs = CompensatedSum::new();
    for v in [delta, c * s1, -s2, correction] {
        rhs.add(v);
    }
    Ok(DecompositionReport {
        x,
        q,
        a,
        disc: t.chi.discriminant(),
        z,
        psi_prog,
        psi_total,
        main: c * psi_total,
        delta,
        s1,
        s2,
        small_prime_prog: small_prog,
        small_prime_coprime: small_cop,
        correction,
        lhs_minus_rhs: lhs - rhs.value(),
    })
}

/// Sifting level and exponent tied to `x = D^V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub z: f64,
    pub u: f64,
    pub v: f64,
}

/// `z = D^m`, `u = εV/(200m)` with `m = min(√(V/log η), 2)`, so that
/// `z^u = D^{εV/200}`. Only `V > 0`, `η > 1`, `ε > 0` and `D ≥ 2` are
/// required.
pub fn schedule_from_v(v: f64, d: u64, eta: f64, epsilon: f64) -> Result<Schedule> {
    if d < 2 {
        return Err(Error::OutOfDomain(format!("D = {d} must be at least 2")));
    }
    if !(v > 0.0) {
        return Err(Error::OutOfDomain(format!("V = {v} must be positive")));
    }
    if !(eta > 1.0) {
        return Err(Error::OutOfDomain(format!("η = {eta} must exceed 1")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::OutOfDomain(format!(
            "ε = {epsilon} must be positive"
        )));
    }
    let m = (v / eta.ln()).sqrt().min(2.0);
    let log_d = (d as f64).ln();
    let z = (m * log_d).exp();
    let u = epsilon * v / (200.0 * m);
    let lhs = u * z.ln();
    let rhs = epsilon * v * log_d / 200.0;
    if (lhs - rhs).abs() > 1e-9 * rhs.abs() {
        return Err(Error::Consistency(format!(
            "z^u = exp({lhs}) differs from x^(ε/200) = exp({rhs})"
        )));
    }
    Ok(Schedule { z, u, v })
}

/// [`schedule_from_v`] at `V = log x/log D`, enforcing `ε ∈ (0, 1/100)` and
/// `V ≥ 200/ε`.
pub fn paper_schedule(x: f64, d: u64, eta: f64, epsilon: f64) -> Result<Schedule> {
    if !(epsilon > 0.0 && epsilon < 0.01) {
        return Err(Error::OutOfDomain(format!(
            "ε = {epsilon} is outside (0, 1/100)"
        )));
    }
    if d < 2 || !(x > 1.0) {
        return Err(Error::OutOfDomain(format!(
            "need x > 1 and D ≥ 2, got x = {x}, D = {d}"
        )));
    }
    let v = x.ln() / (d as f64).ln();
    if v < 200.0 / epsilon {
        return Err(Error::OutOfDomain(format!(
            "V = log x/log D = {v:.3} violates V ≥ 200/ε = {:.3}",
            200.0 / epsilon
        )));
    }
    schedule_from_v(v, d, eta, epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Report {
    pub x: f64,
    pub q: u64,
    pub a: u64,
    pub disc: i64,
    /// `|ψ(x;q,a)φ(q)/ψ(x) − (1 − 1_{D|q}χ(a))|`
    pub measured: f64,
    /// `V¹⁶/η + exp(−C_ε√(V log η))`
    pub envelope: f64,
    pub ratio: f64,
    pub v: f64,
}

/// Report-only comparison of the measured relative error with the error
/// shape at an assumed quality η.
pub fn theorem1_error_report(
    x: f64,
    q: u64,
    a: u64,
    eta: f64,
    c_eps: f64,
    t: &CharacterTables,
) -> Result<Theorem1Report> {
    require_coprime(a, q)?;
    if !(eta > 1.0) || !(c_eps > 0.0) {
        return Err(invalid(format!(
            "need η > 1 and C_ε > 0, got η = {eta}, C_ε = {c_eps}"
        )));
    }
    let n_max = t.check_x(x)?;
    let psi_total = t.von_mangoldt.padded()[1..=n_max as usize]
        .iter()
        .copied()
        .collect::<CompensatedSum>()
        .value();
    let mut psi_prog = CompensatedSum::new();
    let mut n = progression_start(a, q);
    while n <= n_max {
        psi_prog.add(t.von_mangoldt.get(n));
        n += q;
    }
    let target = 1.0 - f64::from(t.twist(q, a));
    let measured = if psi_total == 0.0 {
        0.0
    } else {
        (psi_prog.value() * totient(q) as f64 / psi_total - target).abs()
    };
    let v = x.ln() / (t.chi.modulus() as f64).ln();
    let envelope = v.powi(16) / eta + (-c_eps * (v * eta.ln()).sqrt()).exp();
    Ok(Theorem1Report {
        x,
        q,
        a,
        disc: t.chi.discriminant(),
        measured,
        envelope,
        ratio: measured / envelope,
        v,
    })
}
