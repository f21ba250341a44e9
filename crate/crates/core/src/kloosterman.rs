//! Kloosterman sums `K(m, n; c) = Σ_{(r,c)=1} e((mr + n r̄)/c)` and the
//! exact exponential-sum decomposition of the short double counts
//!
//! `N(K, L) = #{K < k ≤ (1+δ)K, L < ℓ ≤ (1+δ)L : kℓ ≡ a (q), k ≡ r (D)}`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{floor_arg, require_coprime, FactorTable};
use crate::error::{invalid, Error, Result};
use crate::modular::{divisor_count, divisors, gcd, mobius, mod_inverse};
use crate::sum::{e_frac, CompensatedSum, ComplexSum};

/// Absolute tolerance on the imaginary part of a Kloosterman sum.
pub const IMAG_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KloostermanValue {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub value: f64,
    /// τ(c)·√c·gcd(m, n, c)^{1/2}
    pub weil_envelope: f64,
}

impl KloostermanValue {
    pub fn within_weil(&self) -> bool {
        self.value.abs() <= self.weil_envelope + 1e-6
    }
}

/// Roots of unity and the reduced residues with their inverses for a fixed
/// modulus, so that repeated sums cost `φ(c)` table lookups each.
#[derive(Debug, Clone)]
pub struct KloostermanContext {
    c: u64,
    roots: Vec<Complex64>,
    units: Vec<(u64, u64)>,
    tau: u64,
}

impl KloostermanContext {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return Err(invalid("Kloosterman modulus must be positive"));
        }
        let roots = (0..c).map(|j| e_frac(j as i64, c)).collect();
        let units = (1..=c)
            .filter_map(|r| {
                mod_inverse(r % c, c)
                    .filter(|_| gcd(r, c) == 1)
                    .map(|rb| (r % c, rb))
            })
            .collect();
        Ok(Self {
            c,
            roots,
            units,
            tau: divisor_count(c),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    pub fn complex(&self, m: i64, n: i64) -> Complex64 {
        let c = self.c as i128;
        let m = i128::from(m).rem_euclid(c) as u128;
        let n = i128::from(n).rem_euclid(c) as u128;
        let c = c as u128;
        let mut acc = ComplexSum::new();
        for &(r, rb) in &self.units {
            let j = (m * r as u128 + n * rb as u128) % c;
            acc.add(self.roots[j as usize]);
        }
        acc.value()
    }

    pub fn value(&self, m: i64, n: i64) -> Result<KloostermanValue> {
        let z = self.complex(m, n);
        if z.im.abs() > IMAG_TOLERANCE {
            return Err(Error::Consistency(format!(
                "K({m}, {n}; {}) has imaginary part {:e}",
                self.c, z.im
            )));
        }
        let g = gcd(
            gcd(m.unsigned_abs() % self.c, n.unsigned_abs() % self.c),
            self.c,
        );
        Ok(KloostermanValue {
            m,
            n,
            c: self.c,
            value: z.re,
            weil_envelope: self.tau as f64 * (self.c as f64).sqrt() * (g as f64).sqrt(),
        })
    }
}

pub fn kloosterman(m: i64, n: i64, c: u64) -> Result<KloostermanValue> {
    KloostermanContext::new(c)?.value(m, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeilCheck {
    pub value: f64,
    pub envelope: f64,
    pub ok: bool,
}

pub fn weil_check(m: i64, n: i64, c: u64) -> Result<WeilCheck> {
    let k = kloosterman(m, n, c)?;
    Ok(WeilCheck {
        value: k.value,
        envelope: k.weil_envelope,
        ok: k.within_weil(),
    })
}

/// `Σ_{d | (s, q)} d·μ(q/d)`.
pub fn ramanujan_sum(s: u64, q: u64) -> i64 {
    divisors(gcd(s, q))
        .into_iter()
        .map(|d| d as i64 * mobius(q / d))
        .sum()
}

/// `K(s, 0; q)` against the Ramanujan sum, compared after rounding.
pub fn ramanujan_identity_check(s: u64, q: u64) -> Result<bool> {
    let k = kloosterman(s as i64, 0, q)?;
    Ok(k.value.round() as i64 == ramanujan_sum(s, q) && (k.value - k.value.round()).abs() < 1e-6)
}

/// Parameters of a short double count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NklParams {
    pub k: u64,
    pub l: u64,
    pub delta: f64,
    pub q: u64,
    pub a: u64,
    /// Modulus D of the character; only the congruence `k ≡ r (D)` enters.
    pub d: u64,
    pub r: u64,
}

impl NklParams {
    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.l == 0 {
            return Err(invalid("K and L must be positive"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(invalid(format!(
                "delta = {} must lie in (0, 1]",
                self.delta
            )));
        }
        if self.d == 0 {
            return Err(invalid("modulus D must be positive"));
        }
        require_coprime(self.a, self.q)?;
        if gcd(self.r, self.d) != 1 {
            return Err(invalid(format!(
                "gcd(r, D) = gcd({}, {}) != 1",
                self.r, self.d
            )));
        }
        Ok(())
    }

    /// Integers in `(K, (1+δ)K]`.
    pub fn k_range(&self) -> std::ops::RangeInclusive<u64> {
        self.k + 1..=floor_arg((1.0 + self.delta) * self.k as f64)
    }

    /// Integers in `(L, (1+δ)L]`.
    pub fn l_range(&self) -> std::ops::RangeInclusive<u64> {
        self.l + 1..=floor_arg((1.0 + self.delta) * self.l as f64)
    }

    fn k_progression(&self) -> Vec<u64> {
        self.k_range()
            .filter(|k| k % self.d == self.r % self.d)
            .collect()
    }
}

/// Direct double loop over the box.
pub fn nkl_direct(p: &NklParams) -> Result<u64> {
    p.validate()?;
    let ks = p.k_progression();
    let mut count = 0;
    for &k in &ks {
        let km = k % p.q;
        for l in p.l_range() {
            if (km * (l % p.q)) % p.q == p.a % p.q {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `direct = M1 + M2 + E` with every piece computed independently.
///
/// `E = E_bottom − overlap`: `E_bottom` is the sum over `s ∉ q*ℤ`,
/// `0 < t < q` of `K(s, at; q)e(−sr/q)F(s)G(t)/q²` and `overlap` is the
/// block `s ∈ q*ℤ, t = 0`, which the two main terms both contain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NklDecomposition {
    pub params: NklParams,
    pub direct: u64,
    pub m1: f64,
    pub m2: f64,
    pub e: f64,
    pub e_bottom: f64,
    pub overlap: f64,
    pub residual: f64,
}

impl NklDecomposition {
    pub fn closes(&self, tol: f64) -> bool {
        self.residual.abs() <= tol
    }
}

/// `F(s) = Σ_{k ≡ r (D)} e(−k′sD/q)` with `k = r + Dk′`, where `r` is
/// the least non-negative residue.
pub fn f_sum(p: &NklParams, s: i64) -> Complex64 {
    let r0 = p.r % p.d;
    let mut acc = ComplexSum::new();
    for k in p.k_progression() {
        let kp = ((k - r0) / p.d) as i128;
        let num = (-(kp * i128::from(s) * p.d as i128)).rem_euclid(p.q as i128);
        acc.add(e_frac(num as i64, p.q));
    }
    acc.value()
}

/// `G(t) = Σ_ℓ e(−ℓt/q)`.
pub fn g_sum(p: &NklParams, t: i64) -> Complex64 {
    let mut acc = ComplexSum::new();
    for l in p.l_range() {
        let num = (-(l as i128) * i128::from(t)).rem_euclid(p.q as i128);
        acc.add(e_frac(num as i64, p.q));
    }
    acc.value()
}

/// Cost is `O(q²·φ(q) + q·(#k + #ℓ))` for the exponential sums plus the
/// `O(#k·#ℓ)` box counts.
pub fn nkl_decompose(p: &NklParams, _table: Option<&FactorTable>) -> Result<NklDecomposition> {
    p.validate()?;
    let direct = nkl_direct(p)?;
    let q = p.q;
    let g = gcd(p.d, q);
    let q_star = q / g;
    let ks = p.k_progression();
    let n_l = p.l_range().count() as f64;

    let k_coprime = ks.iter().filter(|&&k| gcd(k, q) == 1).count() as f64;
    let m1 = k_coprime * n_l / q as f64;

    let mut m2_count = 0u64;
    for &k in &ks {
        for l in p.l_range() {
            if gcd(l, q) == 1 && (k % g) * (l % g) % g == p.a % g {
                m2_count += 1;
            }
        }
    }
    let m2 = g as f64 * m2_count as f64 / q as f64;

    let ctx = KloostermanContext::new(q)?;
    let f: Vec<Complex64> = (0..=q).map(|s| f_sum(p, s as i64)).collect();
    let gt: Vec<Complex64> = (0..q).map(|t| g_sum(p, t as i64)).collect();
    let r0 = (p.r % p.d) as i64;
    let mut bottom = ComplexSum::new();
    for s in 1..=q {
        if s % q_star == 0 {
            continue;
        }
        let phase = f[s as usize] * e_frac(-(s as i64) * r0, q);
        for t in 1..q {
            let at = ((p.a % q) as u128 * t as u128 % q as u128) as i64;
            bottom.add(ctx.complex(s as i64, at) * phase * gt[t as usize]);
        }
    }
    let qq = (q * q) as f64;
    let e_bottom_c = bottom.value() / qq;

    let mut block = ComplexSum::new();
    for m in 1..=g {
        block.add(ctx.complex((m * q_star) as i64, 0) * e_frac(-(m as i64) * r0, g));
    }
    let overlap_c = f[0] * gt[0] / qq * block.value();

    let e_c = e_bottom_c - overlap_c;
    let box_size = ks.len() as f64 * n_l;
    if e_c.re.abs() > q as f64 * box_size.max(1.0) * box_size.max(1.0) || !e_c.re.is_finite() {
        return Err(Error::Consistency(format!(
            "exponential-sum remainder {} exceeds q·(box)²",
            e_c.re
        )));
    }
    if e_c.im.abs() > 1e-6 * box_size.max(1.0) {
        return Err(Error::Consistency(format!(
            "exponential-sum remainder has imaginary part {:e}",
            e_c.im
        )));
    }
    let mut total = CompensatedSum::new();
    total.add(m1);
    total.add(m2);
    total.add(e_c.re);
    Ok(NklDecomposition {
        params: *p,
        direct,
        m1,
        m2,
        e: e_c.re,
        e_bottom: e_bottom_c.re,
        overlap: overlap_c.re,
        residual: direct as f64 - total.value(),
    })
}

/// Seeded tuples with `q ≤ 30`, `D ≤ 12`, `K, L ≤ 50`, `δ ∈ [0.05, 1]`,
/// rejecting draws with `gcd(a, q) > 1` or `gcd(r, D) > 1`.
pub fn random_nkl_params(seed: u64, count: usize) -> Vec<NklParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = rng.gen_range(1..=30);
        let d = rng.gen_range(1..=12);
        let a = rng.gen_range(1..=q);
        let r = rng.gen_range(1..=d);
        if gcd(a, q) != 1 || gcd(r, d) != 1 {
            continue;
        }
        out.push(NklParams {
            k: rng.gen_range(1..=50),
            l: rng.gen_range(1..=50),
            delta: rng.gen_range(0.05..=1.0),
            q,
            a,
            d,
            r,
        });
    }
    out
}
