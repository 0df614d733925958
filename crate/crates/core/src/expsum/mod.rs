//! Truncated exponential sums as factorization probes.
//!
//! Every phase is reduced to an exact residue `r / Q` before it touches
//! floating point: N is reduced modulo the trial factor first and powers of
//! m are taken modulo the reduced denominator.

mod fresnel;
mod ghosts;
mod scaling;

pub use fresnel::{
    alpha_gauss, alpha_threshold, fresnel_gauss, fresnel_profile, fresnel_signal_estimate,
    fresnel_validity_bound, truncation_bound,
};
pub use ghosts::{
    classify, factorization_pattern, ghost_count, ghost_estimate, ghost_hyperbola,
    neighbor_factor_mining, pattern_convention, XI_T,
};
pub use scaling::{minimal_truncation, scaling_experiment, scaling_fit, ScalingRow};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible N.
pub const N_MAX: u64 = 1 << 63;
/// Longest residue period summed by [`complete_sum_limit`].
pub const PERIOD_CAP: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    Power(u32),
    SelfPower,
}

impl PhaseKind {
    pub fn label(&self) -> String {
        match self {
            PhaseKind::Power(j) => format!("power{j}"),
            PhaseKind::SelfPower => "self_power".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// rho = 2N/l - 2k with |rho| <= 1; the phase is pi m^j rho.
    GaussHalf,
    /// rho = N/l - k with |rho| <= 1/2; the phase is 2 pi m^j rho.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FractionalPart {
    pub p: i64,
    pub q: u64,
    pub convention: Convention,
}

impl FractionalPart {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// Modulus Q of the residues: the phase of term m is 2 pi (p m^j mod Q) / Q.
    pub fn modulus(&self) -> u64 {
        match self.convention {
            Convention::GaussHalf => 2 * self.q,
            Convention::General => self.q,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpSumConfig {
    pub n: u64,
    pub m: u64,
    pub phase: PhaseKind,
}

impl ExpSumConfig {
    pub fn new(n: u64, m: u64, phase: PhaseKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("N must be positive".into()));
        }
        if n > N_MAX {
            return Err(Error::Overflow(format!("N = {n} exceeds 2^63")));
        }
        if let PhaseKind::Power(0) = phase {
            return Err(Error::OutOfRange("power must be >= 1".into()));
        }
        Ok(ExpSumConfig { n, m, phase })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrialFactorClass {
    Factor,
    Threshold,
    Ghost,
    Typical,
}

impl TrialFactorClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrialFactorClass::Factor => "factor",
            TrialFactorClass::Threshold => "threshold",
            TrialFactorClass::Ghost => "ghost",
            TrialFactorClass::Typical => "typical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialFactorRecord {
    pub ell: u64,
    pub signal: f64,
    pub frac: FractionalPart,
    pub class: TrialFactorClass,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a % m) * (b % m) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub(crate) fn powmod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// m^j mod Q, or m^m mod Q with 0^0 = 1.
#[inline]
pub(crate) fn phase_power(m: u64, phase: PhaseKind, modulus: u64) -> u64 {
    match phase {
        PhaseKind::Power(j) => powmod(m, j as u64, modulus),
        PhaseKind::SelfPower => powmod(m, m, modulus),
    }
}

/// e^{2 pi i r / Q}. The residue is centred first so that r and Q - r give
/// exactly conjugate values.
#[inline]
pub(crate) fn unit_phase(r: u64, modulus: u64) -> Complex64 {
    if r == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * r as u128 == modulus as u128 {
        return Complex64::new(-1.0, 0.0);
    }
    let s = if 2 * r as u128 > modulus as u128 {
        -((modulus - r) as f64)
    } else {
        r as f64
    };
    let (sin, cos) = (2.0 * PI * s / modulus as f64).sin_cos();
    Complex64::new(cos, sin)
}

/// Exact reduced fractional part of N/l in the chosen convention.
pub fn fractional_part(n: u64, ell: u64, convention: Convention) -> Result<FractionalPart> {
    if ell == 0 {
        return Err(Error::OutOfRange("trial factor must be >= 1".into()));
    }
    if ell > n {
        return Err(Error::OutOfRange(format!("trial factor {ell} > N = {n}")));
    }
    let (num, den) = match convention {
        Convention::General => {
            let r = n % ell;
            let p = if 2 * r > ell { r as i128 - ell as i128 } else { r as i128 };
            (p, ell as u128)
        }
        Convention::GaussHalf => {
            let two_l = 2 * ell as u128;
            let r = (2 * n as u128) % two_l;
            let p = if r <= ell as u128 { r as i128 } else { r as i128 - two_l as i128 };
            (p, ell as u128)
        }
    };
    let g = gcd(num.unsigned_abs() as u64, den as u64).max(1);
    Ok(FractionalPart {
        p: (num / g as i128) as i64,
        q: (den / g as u128) as u64,
        convention,
    })
}

/// The reduced residue pair (p mod Q, Q) driving the sum for trial factor l.
pub(crate) fn reduced_residue(n: u64, ell: u64) -> (u64, u64) {
    let r = n % ell;
    let g = gcd(r, ell);
    (r / g, ell / g)
}

/// (1/(M+1)) sum_{m=0}^M e^{2 pi i m^j N / l} with exact residues.
pub fn exp_sum(cfg: &ExpSumConfig, ell: u64) -> Result<Complex64> {
    if ell == 0 || ell > cfg.n {
        return Err(Error::OutOfRange(format!("trial factor {ell} outside [1, {}]", cfg.n)));
    }
    let (p, q) = reduced_residue(cfg.n, ell);
    if p == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(residue_sum(p, q, cfg.phase, 0, cfg.m) / (cfg.m + 1) as f64)
}

/// Sum of e^{2 pi i (p e_m mod Q)/Q} over m in [from, to].
pub(crate) fn residue_sum(p: u64, modulus: u64, phase: PhaseKind, from: u64, to: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in from..=to {
        let e = phase_power(m, phase, modulus);
        acc += unit_phase(mulmod(p, e, modulus), modulus);
    }
    acc
}

/// s_M(p/q) = (1/(M+1)) sum_{m=0}^M e^{i pi m^2 p/q}.
pub fn curlicue(p: i64, q: u64, m: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::OutOfRange("denominator must be >= 1".into()));
    }
    if q >= 1 << 62 {
        return Err(Error::Overflow(format!("denominator {q} too large")));
    }
    let modulus = 2 * q;
    let pm = p.rem_euclid(modulus as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=m {
        let sq = mulmod(k, k, modulus);
        acc += unit_phase(mulmod(pm, sq, modulus), modulus);
    }
    Ok(acc / (m + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurlicueBound {
    pub bounded: bool,
    pub bound: Option<f64>,
}

/// Long-run envelope of |s_M(p/q)| from the recursion tau_j = (1/tau_{j-1}) mod 1.
pub fn curlicue_bound(p: u64, q: u64) -> Result<CurlicueBound> {
    if p == 0 || p >= q || gcd(p, q) != 1 {
        return Err(Error::OutOfRange(format!("need reduced 0 < p/q < 1, got {p}/{q}")));
    }
    if (p as u128 * q as u128) % 2 == 1 {
        return Ok(CurlicueBound {
            bounded: true,
            bound: None,
        });
    }
    // tau = a/b; 1/tau mod 1 = (b mod a)/a
    let (mut a, mut b) = (p, q);
    let mut product = 1.0f64;
    while a != 0 {
        product *= a as f64 / b as f64;
        let next = b % a;
        b = a;
        a = next;
    }
    Ok(CurlicueBound {
        bounded: false,
        bound: Some(product.sqrt()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompleteSum {
    pub limit: f64,
    pub period: u64,
    pub preperiod: u64,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn carmichael(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| {
            if p == 2 && e >= 3 {
                1 << (e - 2)
            } else {
                p.pow(e - 1) * (p - 1)
            }
        })
        .fold(1, |acc, l| acc / gcd(acc, l) * l)
}

/// Average of the residue sequence over one exact period, together with
/// the period and the number of leading terms outside it.
pub fn complete_sum(frac: &FractionalPart, phase: PhaseKind) -> Result<CompleteSum> {
    let modulus = frac.modulus();
    let pm = frac.p.rem_euclid(modulus as i64) as u64;
    if pm == 0 {
        return Ok(CompleteSum {
            limit: 1.0,
            period: 1,
            preperiod: 0,
        });
    }
    let (period, preperiod) = match phase {
        PhaseKind::Power(_) => (modulus, 0),
        PhaseKind::SelfPower => {
            if modulus > PERIOD_CAP {
                return Err(Error::Overflow(format!("modulus {modulus} too large")));
            }
            let lambda = carmichael(modulus);
            let period = modulus as u128 / gcd(modulus, lambda) as u128 * lambda as u128;
            let pre = factorize(modulus).iter().map(|&(_, e)| e as u64).max().unwrap_or(0);
            (period.min(u64::MAX as u128) as u64, pre)
        }
    };
    if period > PERIOD_CAP {
        return Err(Error::Overflow(format!("residue period {period} exceeds {PERIOD_CAP}")));
    }
    let s = residue_sum(pm, modulus, phase, preperiod, preperiod + period - 1);
    Ok(CompleteSum {
        limit: s.norm() / period as f64,
        period,
        preperiod,
    })
}

/// Limit of |A| along truncations spanning whole residue periods.
pub fn complete_sum_limit(frac: &FractionalPart, phase: PhaseKind) -> Result<f64> {
    Ok(complete_sum(frac, phase)?.limit)
}

/// Plateau for q = j + 1 prime and p = 1.
pub fn threshold_t1(j: u32) -> f64 {
    let jf = j as f64;
    (jf * jf + 1.0 + 2.0 * jf * (2.0 * PI / (jf + 1.0)).cos()).sqrt() / (jf + 1.0)
}

/// Plateau for q = 2j + 1 prime and p = 1.
pub fn threshold_t2(j: u32) -> f64 {
    let jf = j as f64;
    (1.0 + 2.0 * jf * (2.0 * PI / (2.0 * jf + 1.0)).cos()) / (2.0 * jf + 1.0)
}

/// Discrimination level between factors and non-factors.
pub const GHOST_LEVEL: f64 = FRAC_1_SQRT_2;

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r as u128 * r as u128 > n as u128 {
        r -= 1;
    }
    while (r + 1) as u128 * (r + 1) as u128 <= n as u128 {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractional_examples() {
        let f = fractional_part(9624687, 2555, Convention::GaussHalf).unwrap();
        assert_eq!((f.p, f.q), (4, 2555));
        let g = fractional_part(99, 7, Convention::General).unwrap();
        assert_eq!((g.p, g.q), (1, 7));
        assert_eq!(fractional_part(559, 13, Convention::General).unwrap().p, 0);
        assert!(fractional_part(10, 0, Convention::General).is_err());
    }

    #[test]
    fn general_tie_goes_positive() {
        let f = fractional_part(3, 2, Convention::General).unwrap();
        assert_eq!((f.p, f.q), (1, 2));
    }

    #[test]
    fn gauss_half_tie_is_one() {
        // 2N/l odd integer: the nearest even integer is ambiguous
        let f = fractional_part(3, 2, Convention::GaussHalf).unwrap();
        assert_eq!((f.p, f.q), (1, 1));
    }

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael(8), 2);
        assert_eq!(carmichael(9), 6);
        assert_eq!(carmichael(15), 4);
        assert_eq!(carmichael(1), 1);
    }

    #[test]
    fn powmod_zero_zero() {
        assert_eq!(powmod(0, 0, 7), 1);
        assert_eq!(powmod(0, 0, 1), 0);
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }

    #[test]
    fn curlicue_half() {
        let b = curlicue_bound(1, 2).unwrap();
        assert!(!b.bounded);
        assert!((b.bound.unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(curlicue_bound(9, 10001).unwrap().bounded);
        assert!(!curlicue_bound(8, 10001).unwrap().bounded);
    }
}
