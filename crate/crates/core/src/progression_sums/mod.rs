//! Sums of `λ = 1∗χ` and `λ′ = χ∗log` over progressions.

mod hyperbola;
mod pipeline;
mod sifted;

pub use hyperbola::{
    compa_difference, lambda_sum_coprime, lambda_sum_progression, lambdaprime_sum_progression,
    CompaDifference, HyperbolaEstimate, LambdaPrimeReport, COPRIME_LAMBDA_EPSILON,
};
pub use pipeline::{
    decomposition_pipeline, paper_schedule, schedule_from_v, theorem1_error_report,
    DecompositionReport, Schedule, Theorem1Report,
};
pub use sifted::{
    joka_sum, sifted_triple_convolution, sifted_triple_literal, F1Bound, JokaReport,
    TripleConvolution,
};

use crate::arith::{arith_table, floor_arg, ArithKind, ArithSequence, FactorTable};
use crate::characters::RealPrimitiveCharacter;
use crate::error::{invalid, Result};
use crate::lfunctions::{default_terms, l_value, LEvaluation};
use crate::modular::gcd;

/// λ = 1∗χ on `1..=n` by the divisor loop.
pub fn lambda_table(
    chi: &RealPrimitiveCharacter,
    n: u64,
    table: &FactorTable,
) -> Result<ArithSequence> {
    table.check("N", n)?;
    let len = n as usize + 1;
    let mut v = vec![0.0f64; len];
    for d in 1..len {
        let c = chi.value(d as u64);
        if c == 0 {
            continue;
        }
        let c = f64::from(c);
        for m in (d..len).step_by(d) {
            v[m] += c;
        }
    }
    Ok(ArithSequence::from_padded(ArithKind::Lambda, v))
}

/// λ′ = χ∗log on `1..=n` by the divisor loop.
pub fn lambdaprime_table(
    chi: &RealPrimitiveCharacter,
    n: u64,
    table: &FactorTable,
) -> Result<ArithSequence> {
    table.check("N", n)?;
    let len = n as usize + 1;
    let logs: Vec<f64> = (0..len)
        .map(|k| if k == 0 { 0.0 } else { (k as f64).ln() })
        .collect();
    let mut v = vec![0.0f64; len];
    for d in 1..len {
        let c = chi.value(d as u64);
        if c == 0 {
            continue;
        }
        let c = f64::from(c);
        for (k, m) in (d..len).step_by(d).enumerate() {
            v[m] += c * logs[k + 1];
        }
    }
    Ok(ArithSequence::from_padded(ArithKind::LambdaPrime, v))
}

/// max over `n ≤ N` of `|λ′(n) − Λ(n) − Σ_{kℓ=n, k>1} λ(k)Λ(ℓ)|`, with the
/// right-hand side assembled by a loop over prime powers ℓ.
#[allow(non_snake_case)]
pub fn verify_lL_identity(
    chi: &RealPrimitiveCharacter,
    n: u64,
    table: &FactorTable,
) -> Result<f64> {
    let lambda = lambda_table(chi, n, table)?;
    let lambda_prime = lambdaprime_table(chi, n, table)?;
    let vm = arith_table(ArithKind::VonMangoldt, n, table)?;
    Ok(lL_defect(&lambda, &lambda_prime, &vm, n))
}

#[allow(non_snake_case)]
fn lL_defect(
    lambda: &ArithSequence,
    lambda_prime: &ArithSequence,
    vm: &ArithSequence,
    n: u64,
) -> f64 {
    let len = n as usize + 1;
    let mut rhs = vm.padded()[..len].to_vec();
    let lam = lambda.padded();
    for l in 2..len {
        let w = vm.get(l as u64);
        if w == 0.0 {
            continue;
        }
        for k in 2..=(n as usize / l) {
            rhs[k * l] += lam[k] * w;
        }
    }
    let lp = lambda_prime.padded();
    (1..len).map(|i| (lp[i] - rhs[i]).abs()).fold(0.0, f64::max)
}

/// Per-character tables shared by every sum in this module.
#[derive(Debug, Clone)]
pub struct CharacterTables {
    pub chi: RealPrimitiveCharacter,
    pub lambda: ArithSequence,
    pub lambda_prime: ArithSequence,
    pub von_mangoldt: ArithSequence,
    pub l_one: LEvaluation,
}

impl CharacterTables {
    pub fn build(chi: RealPrimitiveCharacter, n: u64, table: &FactorTable) -> Result<Self> {
        let lambda = lambda_table(&chi, n, table)?;
        let lambda_prime = lambdaprime_table(&chi, n, table)?;
        let von_mangoldt = arith_table(ArithKind::VonMangoldt, n, table)?;
        let l_one = l_value(&chi, 1.0, default_terms(&chi))?;
        Ok(Self {
            chi,
            lambda,
            lambda_prime,
            von_mangoldt,
            l_one,
        })
    }

    pub fn limit(&self) -> u64 {
        self.lambda.len()
    }

    /// max defect of λ′ = λ∗Λ over the whole table.
    #[allow(non_snake_case)]
    pub fn lL_defect(&self) -> f64 {
        lL_defect(
            &self.lambda,
            &self.lambda_prime,
            &self.von_mangoldt,
            self.limit(),
        )
    }

    pub(crate) fn check_x(&self, x: f64) -> Result<u64> {
        let n = floor_arg(x);
        if n > self.limit() {
            return Err(invalid(format!(
                "x = {x} exceeds the tabulated range {}",
                self.limit()
            )));
        }
        Ok(n)
    }

    /// `1_{D|q}·χ(a)`.
    pub fn twist(&self, q: u64, a: u64) -> i8 {
        if q % self.chi.modulus() == 0 {
            self.chi.value(a)
        } else {
            0
        }
    }

    /// `∏_{p|q}(1 − χ(p)/p)`.
    pub fn euler_factor(&self, q: u64) -> f64 {
        crate::modular::distinct_prime_factors(q)
            .into_iter()
            .map(|p| 1.0 - f64::from(self.chi.value(p)) / p as f64)
            .product()
    }
}

pub(crate) fn coprime(n: u64, q: u64) -> bool {
    q == 1 || gcd(n, q) == 1
}
