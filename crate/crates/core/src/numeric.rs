//! Small numerical helpers shared by the modules.

use crate::error::{Error, Result};

/// Double-exponential quadrature on [a, b], bisecting the interval until
/// every piece meets its share of the absolute tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_rec(f, a, b, tol, 0)
}

fn integrate_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let out = quadrature::integrate(f, a, b, tol);
    if out.error_estimate <= tol && out.integral.is_finite() {
        return Ok(out.integral);
    }
    let mid = 0.5 * (a + b);
    let left = quadrature::integrate(f, a, mid, tol / 2.0);
    let right = quadrature::integrate(f, mid, b, tol / 2.0);
    let split = left.integral + right.integral;
    // the error estimates are pessimistic; agreement of the two levels counts
    if split.is_finite() && (split - out.integral).abs() <= tol {
        return Ok(split);
    }
    if depth >= 30 {
        return Err(Error::Numeric(format!(
            "quadrature did not converge on [{a}, {b}] (error estimate {:e})",
            out.error_estimate
        )));
    }
    Ok(integrate_rec(f, a, mid, tol / 2.0, depth + 1)? + integrate_rec(f, mid, b, tol / 2.0, depth + 1)?)
}

/// Ordinary least squares; returns (slope, intercept).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Exponentially scaled modified Bessel function I0(x) e^{-x}, x >= 0.
pub fn bessel_i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 20.0 {
        // power series, summed until terms stop contributing
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            term *= q / (k * k);
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // asymptotic series, truncated at its smallest term
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0).powi(2) / (8.0 * k * x);
            if next.abs() > term.abs() || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

/// 4^-n C(2n, n) as a running product of (2k-1)/(2k).
pub fn central_binomial_ratio(n: u64) -> f64 {
    let mut v = 1.0;
    for k in 1..=n {
        v *= (2 * k - 1) as f64 / (2 * k) as f64;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i0e_matches_known_values() {
        // I0(1) = 1.2660658777520082, I0(10) = 2815.716628466254
        assert!((bessel_i0e(1.0) - 1.2660658777520082 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((bessel_i0e(10.0) / (2815.716628466254 * (-10.0f64).exp()) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn i0e_branches_join() {
        let a = bessel_i0e(20.0);
        let b = bessel_i0e(20.0 + 1e-9);
        assert!((a - b).abs() / a < 1e-9);
    }

    #[test]
    fn fit_recovers_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let (s, i) = linear_fit(&xs, &ys);
        assert!((s - 2.0).abs() < 1e-12 && (i + 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_oscillatory_and_sqrt() {
        let v = integrate(&|x: f64| (20.0 * x).cos(), 0.0, 3.0, 1e-12).unwrap();
        assert!((v - (60.0f64).sin() / 20.0).abs() < 1e-11);
        let w = integrate(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert!((w - 2.0 / 3.0).abs() < 1e-11);
    }
}
