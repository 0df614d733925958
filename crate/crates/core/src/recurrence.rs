//! Pólya numbers, decay exponents and recurrence classification.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{make_coin, CoinKind};
use crate::numeric::{bessel_i0e, central_binomial_ratio, integrate, linear_fit};
use crate::spectral::fourier_walk_special_states;
use crate::walk::{origin_propagators, OriginSeries};

/// Tail level above which a walk counts as localizing.
pub const EPS_LOC: f64 = 1e-3;
/// Allowed excess over the t^-1 decay for a recurrent verdict.
pub const DELTA: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecurrenceClass {
    RecurrentLocalizing,
    Recurrent,
    Transient,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub window: (usize, usize),
    pub points_used: usize,
}

/// P_n = 1 - prod_{t=1}^n (1 - p0(t)).
pub fn polya_partial(series: &OriginSeries, n: usize) -> Result<f64> {
    let v = series.values();
    if n >= v.len() {
        return Err(Error::OutOfRange(format!(
            "n = {n} beyond series horizon {}",
            series.horizon()
        )));
    }
    let miss: f64 = v[1..=n].iter().map(|p| 1.0 - p).product();
    Ok((1.0 - miss).clamp(0.0, 1.0))
}

/// All partial Pólya numbers P_0 ..= P_T.
pub fn polya_partials(series: &OriginSeries) -> Vec<f64> {
    let mut miss = 1.0;
    let mut out = Vec::with_capacity(series.values().len());
    out.push(0.0);
    for p in &series.values()[1..] {
        miss *= 1.0 - p;
        out.push((1.0 - miss).clamp(0.0, 1.0));
    }
    out
}

/// 1 - (1 - 2^-d)(1 - 8^-d)^2 from the three leading return terms.
pub fn hadamard_polya_estimate(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfRange("estimate defined for d >= 2".into()));
    }
    let a = 2f64.powi(-(d as i32));
    let b = 8f64.powi(-(d as i32));
    Ok(1.0 - (1.0 - a) * (1.0 - b) * (1.0 - b))
}

/// Least-squares slope of log p0 against log t over even steps in
/// `[window.0 * T, window.1 * T]`.
pub fn decay_exponent(series: &OriginSeries, window: (f64, f64)) -> Result<DecayFit> {
    let v = series.values();
    if v.len() < 40 {
        return Err(Error::OutOfRange(format!(
            "series too short for a fit ({} < 40)",
            v.len()
        )));
    }
    let t_max_all = series.horizon();
    let lo = ((window.0 * t_max_all as f64).ceil() as usize).max(1);
    let hi = ((window.1 * t_max_all as f64).floor() as usize).min(t_max_all);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for t in lo..=hi {
        if t % 2 == 0 && v[t] > 1e-300 {
            xs.push((t as f64).ln());
            ys.push(v[t].ln());
        }
    }
    if xs.len() < 5 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    let (exponent, intercept) = linear_fit(&xs, &ys);
    Ok(DecayFit {
        exponent,
        intercept,
        window: (lo, hi),
        points_used: xs.len(),
    })
}

/// Mean of p0 over even steps in the last quarter of the series.
pub fn tail_mean(series: &OriginSeries) -> f64 {
    let v = series.values();
    let t = series.horizon();
    let start = (3 * t) / 4;
    let tail: Vec<f64> = (start..=t).filter(|s| s % 2 == 0).map(|s| v[s]).collect();
    tail.iter().sum::<f64>() / tail.len().max(1) as f64
}

pub fn classify_walk(series: &OriginSeries) -> Result<RecurrenceClass> {
    if series.values().len() < 100 {
        return Err(Error::OutOfRange("classification needs >= 100 samples".into()));
    }
    if tail_mean(series) > EPS_LOC {
        return Ok(RecurrenceClass::RecurrentLocalizing);
    }
    let fit = decay_exponent(series, (0.5, 1.0))?;
    if fit.exponent >= -1.0 - DELTA {
        Ok(RecurrenceClass::Recurrent)
    } else {
        Ok(RecurrenceClass::Transient)
    }
}

/// u(d) = integral_0^inf [I0(t/d)]^d e^{-t} dt for d >= 3.
pub fn classical_u(d: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::OutOfRange("u(d) diverges for d <= 2".into()));
    }
    let df = d as f64;
    let cut = 400.0 * df;
    let f = |t: f64| bessel_i0e(t / df).powi(d as i32);
    // split so every piece sees a smooth, slowly varying integrand
    let mut edges = vec![0.0, 1.0, 4.0, 16.0, 64.0, 256.0];
    while *edges.last().unwrap() * 4.0 < cut {
        let next = edges.last().unwrap() * 4.0;
        edges.push(next);
    }
    edges.push(cut);
    let mut body = 0.0;
    for w in edges.windows(2) {
        body += integrate(&f, w[0], w[1], 1e-12)?;
    }
    // tail: I0(x) e^{-x} = (2 pi x)^{-1/2} (1 + 1/(8x) + 9/(128 x^2) + ...)
    // raised to the d-th power and integrated term by term
    let a = df * df / 8.0;
    let b = df * df * df * (df + 8.0) / 128.0;
    let pref = (df / (2.0 * PI)).powf(df / 2.0);
    let s = df / 2.0;
    let tail = pref
        * (cut.powf(1.0 - s) / (s - 1.0) + a * cut.powf(-s) / s + b * cut.powf(-s - 1.0) / (s + 1.0));
    Ok(body + tail)
}

/// Classical Pólya number 1 - 1/u(d); exactly one for d = 1, 2.
pub fn classical_polya(d: u32) -> Result<f64> {
    match d {
        0 => Err(Error::OutOfRange("dimension must be >= 1".into())),
        1 | 2 => Ok(1.0),
        _ => Ok(1.0 - 1.0 / classical_u(d)?),
    }
}

/// Decay factor q of the return probability of a classical walk stepping
/// +r with probability p and -1 otherwise; q = 1 marks recurrence.
pub fn classical_biased_decay(p: f64, r: u32) -> f64 {
    let rf = r as f64;
    (1.0 - p).powf(rf / (rf + 1.0)) * p.powf(1.0 / (rf + 1.0)) * (rf + 1.0) / rf.powf(rf / (rf + 1.0))
}

pub fn classical_biased_recurrent(p: f64, r: u32) -> Result<bool> {
    if !(p > 0.0 && p < 1.0) || r < 1 {
        return Err(Error::OutOfRange(format!("need 0 < p < 1 and r >= 1, got p = {p}, r = {r}")));
    }
    Ok((p - 1.0 / (r as f64 + 1.0)).abs() < 1e-12)
}

/// p0(t) = [4^{-t/2} C(t, t/2)]^d for even t, zero for odd t.
pub fn classical_origin_series(d: u32, steps: usize) -> Result<OriginSeries> {
    if d == 0 {
        return Err(Error::OutOfRange("dimension must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut ratio = 1.0f64;
    for t in 0..=steps {
        if t % 2 == 1 {
            out.push(0.0);
            continue;
        }
        if t > 0 {
            let k = (t / 2) as f64;
            ratio *= (2.0 * k - 1.0) / (2.0 * k);
        }
        out.push(ratio.powi(d as i32));
    }
    debug_assert!(steps < 2 || (out[2] - central_binomial_ratio(1).powi(d as i32)).abs() < 1e-15);
    OriginSeries::new(out)
}

#[derive(Clone, Debug)]
pub struct PolyaSurface {
    pub a_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    /// `values[i][j]` belongs to `(a_values[i], phi_values[j])`.
    pub values: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub a: f64,
    pub phi: f64,
    pub polya: f64,
}

impl PolyaSurface {
    pub fn minimum(&self) -> SurfacePoint {
        self.extremum(|a, b| a < b)
    }

    pub fn maximum(&self) -> SurfacePoint {
        self.extremum(|a, b| a > b)
    }

    fn extremum(&self, better: impl Fn(f64, f64) -> bool) -> SurfacePoint {
        let mut best = SurfacePoint {
            a: self.a_values[0],
            phi: self.phi_values[0],
            polya: self.values[0][0],
        };
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if better(v, best.polya) {
                    best = SurfacePoint {
                        a: self.a_values[i],
                        phi: self.phi_values[j],
                        polya: v,
                    };
                }
            }
        }
        best
    }
}

/// Partial Pólya numbers of the 2-D Fourier walk started in psi_F(a, phi),
/// on the grid a = 0, a_step, ... <= 1/sqrt 2 and phi = j pi / phi_div.
pub fn fourier_polya_surface(terms: usize, a_step: f64, phi_div: usize) -> Result<PolyaSurface> {
    let coin = make_coin(CoinKind::Fourier)?;
    let props = origin_propagators(&coin, terms);
    let na = (FRAC_1_SQRT_2 / a_step + 1e-9).floor() as usize + 1;
    let a_values: Vec<f64> = (0..na).map(|i| i as f64 * a_step).collect();
    let phi_values: Vec<f64> = (0..2 * phi_div).map(|j| j as f64 * PI / phi_div as f64).collect();
    let values = a_values
        .par_iter()
        .map(|&a| {
            phi_values
                .iter()
                .map(|&phi| {
                    let psi = fourier_walk_special_states(a, phi)?;
                    let amps = psi.amplitudes();
                    let mut miss = 1.0;
                    for prop in &props[1..] {
                        let mut p0 = 0.0;
                        for i in 0..4 {
                            let mut acc = num_complex::Complex64::new(0.0, 0.0);
                            for (k, x) in amps.iter().enumerate() {
                                acc += prop[(i, k)] * x;
                            }
                            p0 += acc.norm_sqr();
                        }
                        miss *= 1.0 - p0.min(1.0);
                    }
                    Ok(1.0 - miss)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(PolyaSurface {
        a_values,
        phi_values,
        values,
    })
}
