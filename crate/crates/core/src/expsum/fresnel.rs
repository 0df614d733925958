//! Fresnel-type profiles and the truncation estimates built on them.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{isqrt, PhaseKind};
use crate::error::{Error, Result};
use crate::numeric::integrate;

/// F_j(x) = (1/x) int_0^x e^{2 pi i u^j} du.
pub fn fresnel_profile(x: f64, j: u32) -> Result<Complex64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::OutOfRange(format!("x = {x} must be finite and >= 0")));
    }
    if j == 0 {
        return Err(Error::OutOfRange("power must be >= 1".into()));
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let jf = j as f64;
    let z = 2.0 * PI * x.powf(jf);
    if z <= 2.0 {
        // (1/x) int_0^x sum (2 pi i u^j)^n / n! du = sum (i z)^n / (n! (jn + 1))
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(1.0, 0.0);
        let mut n = 1.0;
        loop {
            term *= Complex64::new(0.0, z) / n;
            let contrib = term / (jf * n + 1.0);
            acc += contrib;
            if contrib.norm() < 1e-17 {
                break;
            }
            n += 1.0;
        }
        return Ok(acc);
    }
    // break at every quarter turn of the phase
    let turns = (4.0 * x.powf(jf)).floor() as u64;
    let mut edges: Vec<f64> = (0..=turns).map(|k| (k as f64 / 4.0).powf(1.0 / jf)).collect();
    if *edges.last().unwrap() < x {
        edges.push(x);
    }
    let tol = 1e-11 * x / edges.len() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for w in edges.windows(2) {
        re += integrate(&|u: f64| (2.0 * PI * u.powf(jf)).cos(), w[0], w[1], tol)?;
        im += integrate(&|u: f64| (2.0 * PI * u.powf(jf)).sin(), w[0], w[1], tol)?;
    }
    Ok(Complex64::new(re, im) / x)
}

/// F(x) = int_0^x e^{i pi u^2 / 2} du.
pub fn fresnel_gauss(x: f64) -> Result<Complex64> {
    Ok(fresnel_profile(x / 2.0, 2)? * x)
}

/// Continuum estimate |F(X)| / X, X = (M + 1/2) sqrt(2 tau), of the Gauss-sum
/// signal at fractional part tau. The M + 1 terms act as midpoint nodes.
pub fn fresnel_signal_estimate(tau: f64, m: u64) -> Result<f64> {
    let x = (m as f64 + 0.5) * (2.0 * tau.abs()).sqrt();
    Ok(fresnel_profile(x / 2.0, 2)?.norm())
}

/// Smallest alpha > 0 with |F_j(alpha)| = xi.
pub fn alpha_threshold(xi: f64, j: u32) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfRange(format!("xi = {xi} outside (0, 1)")));
    }
    let f = |a: f64| -> Result<f64> { Ok(fresnel_profile(a, j)?.norm() - xi) };
    let mut lo = 1e-3;
    let mut f_lo = f(lo)?;
    if f_lo <= 0.0 {
        return Err(Error::Numeric(format!("|F_{j}| already below {xi} at 1e-3")));
    }
    let mut hi = lo;
    loop {
        hi += 0.01;
        if hi > 10.0 {
            return Err(Error::Numeric(format!("no crossing of {xi} in [1e-3, 10]")));
        }
        let f_hi = f(hi)?;
        if f_hi <= 0.0 {
            break;
        }
        lo = hi;
        f_lo = f_hi;
    }
    debug_assert!(f_lo > 0.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of |F(alpha)|/alpha = xi for the Gauss-sum profile F.
pub fn alpha_gauss(xi: f64) -> Result<f64> {
    Ok(2.0 * alpha_threshold(xi, 2)?)
}

/// Number of terms after which every non-factor signal drops below xi.
pub fn truncation_bound(n: u64, xi: f64, phase: PhaseKind) -> Result<u64> {
    if n < 4 {
        return Err(Error::OutOfRange("N must be >= 4".into()));
    }
    match phase {
        PhaseKind::Power(j) => {
            let a = alpha_threshold(xi, j)?;
            Ok((a * (n as f64).powf(1.0 / (2.0 * j as f64))).ceil() as u64)
        }
        PhaseKind::SelfPower => Ok((n as f64).sqrt().ln().ceil() as u64),
    }
}

/// floor(sqrt(N) / 4), beyond which the continuum estimate stops applying.
pub fn fresnel_validity_bound(n: u64) -> u64 {
    isqrt(n) / 4
}
