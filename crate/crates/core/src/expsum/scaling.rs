//! Minimal truncation that pushes every ghost below a level.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::ghosts::on_plateau;
use super::{
    exp_sum, fractional_part, isqrt, mulmod, pattern_convention, phase_power, reduced_residue,
    unit_phase, ExpSumConfig, FractionalPart, PhaseKind,
};
use crate::error::{Error, Result};
use crate::numeric::linear_fit;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: u64,
    pub m_min: u64,
    pub phase: PhaseKind,
    pub xi: f64,
    pub seed: u64,
}

struct Probe {
    p: u64,
    q: u64,
    frac: FractionalPart,
    sum: Complex64,
}

/// Blocker candidates above which plateau checks are postponed.
const LAZY_LIMIT: usize = 5000;

/// First M at which every non-factor, non-threshold trial factor has
/// signal <= xi, confirmed by a fresh sweep.
pub fn minimal_truncation(n: u64, xi: f64, phase: PhaseKind, m_cap: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::OutOfRange("N must be >= 4".into()));
    }
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::OutOfRange(format!("xi = {xi} outside (0, 1)")));
    }
    let conv = pattern_convention(phase);
    let mut probes: Vec<Probe> = (2..=isqrt(n))
        .filter_map(|ell| {
            let (p, q) = reduced_residue(n, ell);
            (p != 0).then(|| Probe {
                p,
                q,
                frac: fractional_part(n, ell, conv).expect("1 <= l <= N"),
                sum: Complex64::new(0.0, 0.0),
            })
        })
        .collect();
    for m in 0..=m_cap {
        probes.par_iter_mut().for_each(|pr| {
            let e = phase_power(m, phase, pr.q);
            pr.sum += unit_phase(mulmod(pr.p, e, pr.q), pr.q);
        });
        let norm = (m + 1) as f64;
        let above: Vec<&Probe> = probes.iter().filter(|pr| pr.sum.norm() / norm > xi).collect();
        if above.len() > LAZY_LIMIT {
            continue;
        }
        let blocked = above
            .par_iter()
            .any(|pr| !on_plateau(pr.sum.norm() / norm, &pr.frac, phase, m));
        if !blocked {
            verify(n, m, xi, phase)?;
            return Ok(m);
        }
    }
    Err(Error::Numeric(format!("no ghost-free truncation up to M = {m_cap} for N = {n}")))
}

fn verify(n: u64, m: u64, xi: f64, phase: PhaseKind) -> Result<()> {
    let cfg = ExpSumConfig::new(n, m, phase)?;
    let conv = pattern_convention(phase);
    let bad = (2..=isqrt(n)).into_par_iter().find_any(|&ell| {
        let frac = fractional_part(n, ell, conv).expect("1 <= l <= N");
        if frac.p == 0 {
            return false;
        }
        let s = exp_sum(&cfg, ell).expect("valid trial factor").norm();
        s > xi && !on_plateau(s, &frac, phase, m)
    });
    match bad {
        Some(ell) => Err(Error::Numeric(format!(
            "verification sweep found l = {ell} above {xi} at M = {m}"
        ))),
        None => Ok(()),
    }
}

/// Log-uniform samples of N in [n_lo, n_hi] and their minimal truncations.
pub fn scaling_experiment(
    samples: usize,
    n_lo: u64,
    n_hi: u64,
    xi: f64,
    phase: PhaseKind,
    seed: u64,
) -> Result<Vec<ScalingRow>> {
    if n_lo < 4 || n_hi < n_lo {
        return Err(Error::OutOfRange(format!("bad range [{n_lo}, {n_hi}]")));
    }
    if samples > 10_000 {
        return Err(Error::OutOfRange(format!("{samples} samples > 10^4")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = ((n_lo as f64).ln(), (n_hi as f64).ln());
    let ns: Vec<u64> = (0..samples)
        .map(|_| {
            let x: f64 = if b > a { rng.random_range(a..b) } else { a };
            (x.exp().round() as u64).clamp(n_lo, n_hi)
        })
        .collect();
    ns.par_iter()
        .map(|&n| {
            let cap = 8 * isqrt(n) + 1000;
            Ok(ScalingRow {
                n,
                m_min: minimal_truncation(n, xi, phase, cap)?,
                phase,
                xi,
                seed,
            })
        })
        .collect()
}

/// Slope and intercept of log M against log N for powers, of M against
/// ln sqrt N for the self-power phase.
pub fn scaling_fit(rows: &[ScalingRow]) -> Result<(f64, f64)> {
    if rows.len() < 2 {
        return Err(Error::TooFewPoints(rows.len()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .map(|r| match r.phase {
            PhaseKind::Power(_) => ((r.n as f64).ln(), (r.m_min as f64).max(1.0).ln()),
            PhaseKind::SelfPower => ((r.n as f64).sqrt().ln(), r.m_min as f64),
        })
        .unzip();
    Ok(linear_fit(&xs, &ys))
}
