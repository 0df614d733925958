//! Factorization patterns, ghost factors and their neighbours.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{
    alpha_gauss, complete_sum, curlicue, exp_sum, fractional_part, gcd, isqrt, Convention,
    ExpSumConfig, FractionalPart, PhaseKind, TrialFactorClass, TrialFactorRecord, GHOST_LEVEL,
};
use crate::error::{Error, Result};

/// Plateaus at or below this level are never called thresholds.
pub const XI_T: f64 = 0.4;
/// Slack on the strict comparisons against the ghost level and against one.
const MARGIN: f64 = 1e-12;

/// Gauss sums use the half convention, every other phase the general one.
pub fn pattern_convention(phase: PhaseKind) -> Convention {
    match phase {
        PhaseKind::Power(2) => Convention::GaussHalf,
        _ => Convention::General,
    }
}

/// True when the signal sits on a complete-sum plateau above `XI_T`.
///
/// A truncated sum differs from its plateau by at most one incomplete
/// period plus the preperiod, i.e. 2 (P + m0) / (M + 1).
pub(crate) fn on_plateau(signal: f64, frac: &FractionalPart, phase: PhaseKind, m: u64) -> bool {
    if signal <= XI_T {
        return false;
    }
    match complete_sum(frac, phase) {
        Ok(cs) => {
            let slack = 2.0 * (cs.period + cs.preperiod) as f64 / (m + 1) as f64 + 1e-9;
            cs.limit > XI_T && (signal - cs.limit).abs() <= slack
        }
        Err(_) => false,
    }
}

pub fn classify(signal: f64, frac: &FractionalPart, phase: PhaseKind, m: u64) -> TrialFactorClass {
    if frac.p == 0 {
        TrialFactorClass::Factor
    } else if on_plateau(signal, frac, phase, m) {
        TrialFactorClass::Threshold
    } else if signal > GHOST_LEVEL + MARGIN {
        TrialFactorClass::Ghost
    } else {
        TrialFactorClass::Typical
    }
}

/// Records for every trial factor 1 <= l <= floor(sqrt N).
pub fn factorization_pattern(cfg: &ExpSumConfig) -> Result<Vec<TrialFactorRecord>> {
    if cfg.n < 4 {
        return Err(Error::OutOfRange("N must be >= 4".into()));
    }
    let conv = pattern_convention(cfg.phase);
    (1..=isqrt(cfg.n))
        .into_par_iter()
        .map(|ell| {
            let signal = exp_sum(cfg, ell)?.norm().min(1.0);
            let frac = fractional_part(cfg.n, ell, conv)?;
            Ok(TrialFactorRecord {
                ell,
                signal,
                frac,
                class: classify(signal, &frac, cfg.phase, cfg.m),
            })
        })
        .collect()
}

/// #{l <= sqrt N : 1/sqrt2 < |A| < 1}.
pub fn ghost_count(n: u64, m: u64, j: u32) -> Result<usize> {
    if n < 4 {
        return Err(Error::OutOfRange("N must be >= 4".into()));
    }
    let cfg = ExpSumConfig::new(n, m, PhaseKind::Power(j))?;
    let counts = (1..=isqrt(n))
        .into_par_iter()
        .map(|ell| {
            let s = exp_sum(&cfg, ell)?.norm();
            Ok((s > GHOST_LEVEL + MARGIN && s < 1.0 - MARGIN) as usize)
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(counts.into_iter().sum())
}

/// (1/2) (alpha / M)^2 sqrt N with the Gauss-sum alpha at 1/sqrt 2.
pub fn ghost_estimate(n: u64, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange("M must be >= 1".into()));
    }
    let a = alpha_gauss(GHOST_LEVEL)?;
    Ok(0.5 * (a / m as f64).powi(2) * (n as f64).sqrt())
}

/// gamma_k(l) = |s_M(2k / l)|.
pub fn ghost_hyperbola(k: u64, m: u64, ell: u64) -> Result<f64> {
    if k == 0 || ell <= 2 * k {
        return Err(Error::OutOfRange(format!("need l > 2k > 0, got k = {k}, l = {ell}")));
    }
    let g = gcd(2 * k, ell);
    Ok(curlicue((2 * k / g) as i64, ell / g, m)?.norm())
}

/// Ghosts of the Gauss pattern of N explained as divisors of N + k,
/// 0 < |k| <= k_max. Every candidate is checked by exact division.
pub fn neighbor_factor_mining(n: u64, m: u64, k_max: u64) -> Result<BTreeMap<i64, Vec<u64>>> {
    if k_max == 0 || k_max > 10 {
        return Err(Error::OutOfRange(format!("k_max = {k_max} outside [1, 10]")));
    }
    let cfg = ExpSumConfig::new(n, m, PhaseKind::Power(2))?;
    let records = factorization_pattern(&cfg)?;
    let mut out: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
    for rec in records {
        if rec.frac.p == 0 || rec.signal <= GHOST_LEVEL + MARGIN || rec.signal >= 1.0 - MARGIN {
            continue;
        }
        for k in -(k_max as i64)..=k_max as i64 {
            if k == 0 || rec.ell <= 2 * k.unsigned_abs() {
                continue;
            }
            let shifted = n as i128 + k as i128;
            if shifted <= 0 || shifted % rec.ell as i128 != 0 {
                continue;
            }
            let gamma = ghost_hyperbola(k.unsigned_abs(), m, rec.ell)?;
            if (rec.signal - gamma).abs() < 1e-9 {
                out.entry(k).or_default().push(rec.ell);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbola_guard() {
        assert!(ghost_hyperbola(2, 10, 4).is_err());
        assert!(ghost_hyperbola(0, 10, 40).is_err());
    }

    #[test]
    fn small_pattern_has_factor() {
        let cfg = ExpSumConfig::new(559, 2, PhaseKind::Power(2)).unwrap();
        let recs = factorization_pattern(&cfg).unwrap();
        assert_eq!(recs.len(), 23);
        let r13 = recs.iter().find(|r| r.ell == 13).unwrap();
        assert_eq!(r13.class, TrialFactorClass::Factor);
        assert_eq!(r13.signal, 1.0);
    }
}
