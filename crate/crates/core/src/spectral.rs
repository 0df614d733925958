//! Momentum-space propagators, eigenphases and biased-walk analytics.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CMatrix, CoinOperator, CoinState};

/// U(k) = D(k) C with D(k) = diag(exp(i e_l . k)).
pub fn momentum_propagator(coin: &CoinOperator, k: &[f64]) -> CMatrix {
    let mut u = coin.matrix().clone();
    for (l, e) in coin.displacements().iter().enumerate() {
        let phase: f64 = e.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
        let f = Complex64::from_polar(1.0, phase);
        for j in 0..u.ncols() {
            u[(l, j)] *= f;
        }
    }
    u
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub k: Vec<f64>,
    /// Eigenphases in (-pi, pi], ascending.
    pub phases: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[j]` belongs to `phases[j]`.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Diagonalizes U(k) through a complex Schur decomposition; for a normal
/// matrix the triangular factor is diagonal and the Schur vectors are
/// eigenvectors.
pub fn eigenphases(coin: &CoinOperator, k: &[f64]) -> Result<EigenSystem> {
    if k.len() != coin.dim_lattice() {
        return Err(Error::DimensionMismatch {
            expected: coin.dim_lattice(),
            got: k.len(),
        });
    }
    let u = momentum_propagator(coin, k);
    let n = u.nrows();
    let (q, t) = u.schur().unpack();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            off = off.max(t[(i, j)].norm());
        }
    }
    if off > 1e-8 {
        return Err(Error::Numeric(format!(
            "Schur form not diagonal (off-diagonal {off:e})"
        )));
    }
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|j| {
            let mut w = t[(j, j)].arg();
            if w <= -PI {
                w += 2.0 * PI;
            }
            (w, q.column(j).iter().copied().collect())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (phases, vectors) = pairs.into_iter().unzip();
    Ok(EigenSystem {
        k: k.to_vec(),
        phases,
        vectors,
    })
}

/// Wraps an angle difference into (-pi, pi].
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

/// Central-difference derivatives of all eigenphase branches of a 1-D walk
/// at `k`, branches matched by nearest phase.
pub fn phase_derivatives_1d(coin: &CoinOperator, k: f64, h: f64) -> Result<Vec<f64>> {
    let plus = eigenphases(coin, &[k + h])?.phases;
    let minus = eigenphases(coin, &[k - h])?.phases;
    let centre = eigenphases(coin, &[k])?.phases;
    let pick = |set: &[f64], w: f64| -> f64 {
        set.iter()
            .copied()
            .min_by(|a, b| wrap_angle(a - w).abs().total_cmp(&wrap_angle(b - w).abs()))
            .expect("non-empty phase set")
    };
    Ok(centre
        .iter()
        .map(|&w| {
            let p = pick(&plus, w);
            let m = pick(&minus, w);
            wrap_angle(p - m) / (2.0 * h)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasedAnalysis {
    pub r: u32,
    pub rho: f64,
    pub rho_r: f64,
    pub recurrent: bool,
    pub stationary_points: Vec<f64>,
    pub v_left: f64,
    pub v_right: f64,
}

/// Recurrence boundary ((r-1)/(r+1))^2.
pub fn rho_recurrence(r: u32) -> f64 {
    let r = r as f64;
    ((r - 1.0) / (r + 1.0)).powi(2)
}

/// Smallest coin parameter admitting a zero-mean initial state.
pub fn rho_zero_mean(r: u32) -> f64 {
    let r2 = (r as f64).powi(2);
    ((r2 - 1.0) / (r2 + 1.0)).powi(2)
}

pub fn peak_velocities(r: u32, rho: f64) -> (f64, f64) {
    let r = r as f64;
    let centre = (r - 1.0) / 2.0;
    let spread = (r + 1.0) * rho.sqrt() / 2.0;
    (centre - spread, centre + spread)
}

pub fn biased_analysis(r: u32, rho: f64) -> Result<BiasedAnalysis> {
    if r < 1 {
        return Err(Error::OutOfRange("r must be >= 1".into()));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::OutOfRange(format!("rho = {rho} outside (0, 1]")));
    }
    let rho_r = rho_recurrence(r);
    let recurrent = rho >= rho_r;
    let mut stationary_points = Vec::new();
    if recurrent {
        let rf = r as f64;
        let arg = ((1.0 - rho) * (rf - 1.0).powi(2) / (4.0 * rho * rf)).min(1.0);
        let s = arg.sqrt();
        for sign in [1.0, -1.0] {
            let base = 2.0 / (rf + 1.0) * (sign * s).acos();
            for k in [base, -base] {
                if !stationary_points
                    .iter()
                    .any(|&x: &f64| (x - k).abs() < 1e-12)
                {
                    stationary_points.push(k);
                }
            }
        }
        stationary_points.sort_by(f64::total_cmp);
    }
    let (v_left, v_right) = peak_velocities(r, rho);
    Ok(BiasedAnalysis {
        r,
        rho,
        rho_r,
        recurrent,
        stationary_points,
        v_left,
        v_right,
    })
}

/// Initial coin state (sqrt(a), sqrt(1-a) e^{i phi}) in the (R, L) basis.
pub fn biased_initial_state(a: f64, phi: f64) -> Result<CoinState> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1]")));
    }
    CoinState::normalized(vec![
        Complex64::new(a.sqrt(), 0.0),
        Complex64::from_polar((1.0 - a).sqrt(), phi),
    ])
}

/// Long-time mean velocity <x/t> of the biased walk.
pub fn biased_mean_position(a: f64, phi: f64, rho: f64, r: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1]")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::OutOfRange(format!("rho = {rho} outside (0, 1)")));
    }
    let rf = r as f64;
    let s = (1.0 - rho).sqrt();
    let c = 1.0 - s;
    Ok(c * (a * (rf + 1.0) - 1.0)
        + (rf - 1.0) / 2.0 * s
        + (a * (1.0 - a)).sqrt() * c * (1.0 - rho) * (rf + 1.0) * phi.cos() / (rho * (1.0 - rho)).sqrt())
}

/// Minimum of the mean velocity over initial states, attained at
/// a = (1 - sqrt(rho))/2, phi = pi.
pub fn biased_mean_minimum(rho: f64, r: u32) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::OutOfRange(format!("rho = {rho} outside (0, 1)")));
    }
    let rf = r as f64;
    Ok((rf - 1.0) / 2.0 + (1.0 - (1.0 - rho).sqrt() - rho) * (1.0 + rf) / (2.0 * ((1.0 - rho) * rho).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiasedRegion {
    TransientGenuine,
    RecurrentGenuine,
    RecurrentUnbiasable,
}

impl BiasedRegion {
    pub fn as_str(&self) -> &'static str {
        match self {
            BiasedRegion::TransientGenuine => "transient_genuine",
            BiasedRegion::RecurrentGenuine => "recurrent_genuine",
            BiasedRegion::RecurrentUnbiasable => "recurrent_unbiasable",
        }
    }
}

pub fn biased_phase_region(r: u32, rho: f64) -> BiasedRegion {
    if rho < rho_recurrence(r) {
        BiasedRegion::TransientGenuine
    } else if rho < rho_zero_mean(r) {
        BiasedRegion::RecurrentGenuine
    } else {
        BiasedRegion::RecurrentUnbiasable
    }
}

/// psi_F(a, b) = (a, b, a, -b) with b = sqrt(1/2 - a^2) e^{i phi}.
pub fn fourier_walk_special_states(a: f64, phi: f64) -> Result<CoinState> {
    if !(0.0..=FRAC_1_SQRT_2 + 1e-15).contains(&a) {
        return Err(Error::OutOfRange(format!("a = {a} outside [0, 1/sqrt 2]")));
    }
    let a = a.min(FRAC_1_SQRT_2);
    let b = Complex64::from_polar((0.5 - a * a).max(0.0).sqrt(), phi);
    let av = Complex64::new(a, 0.0);
    CoinState::normalized(vec![av, b, av, -b])
}
