//! Compensated (Neumaier) accumulation for real and complex sums.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
///
/// The running error term is folded back in by [`value`](Self::value), so the
/// result is accurate to about one rounding of the exact sum even when the
/// addends cancel heavily.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

impl std::ops::AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Componentwise compensated accumulator for complex numbers.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e(t) = exp(2πi t)` with `t` reduced mod 1 before the trigonometric call.
pub fn e(t: f64) -> Complex64 {
    let r = t - t.floor();
    let angle = std::f64::consts::TAU * r;
    Complex64::new(angle.cos(), angle.sin())
}

/// `e(num / den)` with the numerator reduced exactly modulo `den`.
pub fn e_frac(num: i64, den: u64) -> Complex64 {
    let den_i = den as i64;
    let r = num.rem_euclid(den_i);
    e(r as f64 / den as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive_on_cancellation() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn harmonic_partial_sum_matches_reverse_order() {
        let fwd = compensated_sum((1..=1_000_000).map(|n| 1.0 / n as f64));
        let rev = compensated_sum((1..=1_000_000).rev().map(|n| 1.0 / n as f64));
        assert!((fwd - rev).abs() < 1e-14);
    }

    #[test]
    fn e_is_periodic() {
        let a = e(0.25);
        let b = e(7.25);
        assert!((a - b).norm() < 1e-15);
        assert!((a - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((e_frac(-1, 4) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }
}
