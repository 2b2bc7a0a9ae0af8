//! Divisor sums sigma_z(n) = sum_{d | n} d^z with complex exponent.

use crate::error::{Error, Result};
use num_complex::Complex64;

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// sigma_z(n) for n >= 1.
pub fn sigma(exponent: Complex64, n: i64) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("sigma requires n >= 1, got {n}")));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for d in divisors(n as u64) {
        s += (exponent * (d as f64).ln()).exp();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_counts_and_sums() {
        assert_eq!(sigma(Complex64::new(0.0, 0.0), 6).unwrap().re, 4.0);
        assert_eq!(sigma(Complex64::new(0.0, 0.7), 1).unwrap().re, 1.0);
        assert_eq!(sigma(Complex64::new(1.0, 0.0), 12).unwrap().re, 28.0);
        assert!(sigma(Complex64::new(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn symmetric_real_combination() {
        // sigma_{2it}(m) m^{-it} pairs d with m/d, hence is real and even in t.
        let m = 12;
        for &t in &[0.3, 1.7, 9.1] {
            let z = Complex64::new(0.0, 2.0 * t);
            let v = sigma(z, m).unwrap() * (-Complex64::new(0.0, t) * (m as f64).ln()).exp();
            assert!(v.im.abs() < 1e-12);
            let vm = sigma(-z, m).unwrap() * (Complex64::new(0.0, t) * (m as f64).ln()).exp();
            assert!((v - vm).norm() < 1e-12);
        }
    }
}
