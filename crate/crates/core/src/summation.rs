//! Compensated (Neumaier) summation for real and complex doubles.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation: the running compensation also
/// captures the error when the addend is larger than the partial sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        // the compensation is meaningless once the sum overflowed
        if self.sum.is_finite() {
            self.sum + self.comp
        } else {
            self.sum
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
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

/// Compensated sum in iteration order.
pub fn sum_complex<I: IntoIterator<Item = Complex64>>(items: I) -> Complex64 {
    let mut acc = ComplexSum::new();
    for z in items {
        acc.add(z);
    }
    acc.value()
}

pub fn sum_real<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in items {
        acc.add(x);
    }
    acc.value()
}

/// `ln(sum_k exp(x_k))` without overflow or underflow; `-inf` for an empty
/// input or all-`-inf` inputs.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let xs: Vec<f64> = items.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + sum_real(xs.iter().map(|x| (x - max).exp())).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
        assert_eq!(sum_real(xs), 2.0);
        let z = sum_complex([
            Complex64::new(1.0, 1e-20),
            Complex64::new(1e17, 1.0),
            Complex64::new(-1e17, -1.0),
        ]);
        assert_eq!(z, Complex64::new(1.0, 1e-20));
        assert_eq!(sum_real([1.0, f64::INFINITY, 2.0]), f64::INFINITY);
    }

    #[test]
    fn log_sum_exp_handles_tiny_terms() {
        let l = log_sum_exp([-5000.0, -5000.0]);
        assert!((l - (-5000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp([]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }
}
