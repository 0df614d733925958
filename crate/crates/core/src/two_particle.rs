//! Meeting problem for two walkers on the Hadamard line.
//!
//! Every pair quantity is bilinear in the single-particle amplitudes of the
//! walks started from `|0,L>` and `|0,R>`, so nothing two-dimensional is
//! ever stored. The first walker starts at 0, the second at `2d`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{make_coin, make_walk_spec, CoinKind, CoinState, WalkSpec};
use crate::numeric::integrate;
use crate::walk::{step, WalkState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductKind {
    RL,
    Symmetric,
    LR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PairInit {
    Product(ProductKind),
    Bell(BellKind),
    Boson(CoinState, CoinState),
    Fermion(CoinState, CoinState),
}

impl PairInit {
    pub fn label(&self) -> String {
        match self {
            PairInit::Product(ProductKind::RL) => "product-rl".into(),
            PairInit::Product(ProductKind::LR) => "product-lr".into(),
            PairInit::Product(ProductKind::Symmetric) => "product-sym".into(),
            PairInit::Bell(BellKind::PsiPlus) => "bell-psi-plus".into(),
            PairInit::Bell(BellKind::PsiMinus) => "bell-psi-minus".into(),
            PairInit::Bell(BellKind::PhiPlus) => "bell-phi-plus".into(),
            PairInit::Bell(BellKind::PhiMinus) => "bell-phi-minus".into(),
            PairInit::Boson(..) => "boson".into(),
            PairInit::Fermion(..) => "fermion".into(),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            PairInit::Boson(a, b) | PairInit::Fermion(a, b) if a.len() != 2 || b.len() != 2 => {
                Err(Error::DimensionMismatch {
                    expected: 2,
                    got: a.len().max(b.len()),
                })
            }
            _ => Ok(()),
        }
    }
}

pub fn coin_l() -> CoinState {
    CoinState::basis(2, 0)
}

pub fn coin_r() -> CoinState {
    CoinState::basis(2, 1)
}

/// (|L> + i|R>)/sqrt 2, whose Hadamard walk spreads symmetrically.
pub fn coin_symmetric() -> CoinState {
    CoinState::new(vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    ])
    .expect("unit vector")
}

fn hadamard_spec(init: CoinState) -> WalkSpec {
    let coin = make_coin(CoinKind::HadamardTensor(1)).expect("valid coin");
    make_walk_spec(coin, init).expect("two-component state")
}

/// Hadamard-walk amplitudes from |0,L> and |0,R> at a fixed time, on the
/// common support m = -t..=t.
#[derive(Clone, Debug)]
pub struct AmplitudeSlice {
    pub t: usize,
    /// `from_l[m + t] = [psi_L(m), psi_R(m)]` for the walk started in L.
    pub from_l: Vec<[Complex64; 2]>,
    pub from_r: Vec<[Complex64; 2]>,
}

impl AmplitudeSlice {
    fn from_states(l: &WalkState, r: &WalkState) -> Self {
        let pack = |s: &WalkState| s.raw().chunks(2).map(|c| [c[0], c[1]]).collect::<Vec<_>>();
        AmplitudeSlice {
            t: l.time(),
            from_l: pack(l),
            from_r: pack(r),
        }
    }

    /// Amplitude at site m of the walk started at 0 with coin (cl, cr).
    pub fn combined(&self, cl: Complex64, cr: Complex64, m: i64) -> [Complex64; 2] {
        let t = self.t as i64;
        if m < -t || m > t {
            return [ZERO; 2];
        }
        let i = (m + t) as usize;
        let a = self.from_l[i];
        let b = self.from_r[i];
        [cl * a[0] + cr * b[0], cl * a[1] + cr * b[1]]
    }

    pub fn probability(&self, init: &CoinState, m: i64) -> f64 {
        let c = init.amplitudes();
        let v = self.combined(c[0], c[1], m);
        v[0].norm_sqr() + v[1].norm_sqr()
    }
}

/// Streams amplitude slices t = 0, 1, 2, ...
pub struct HadamardPairWalk {
    spec_l: WalkSpec,
    spec_r: WalkSpec,
    l: WalkState,
    r: WalkState,
}

impl Default for HadamardPairWalk {
    fn default() -> Self {
        Self::new()
    }
}

impl HadamardPairWalk {
    pub fn new() -> Self {
        let spec_l = hadamard_spec(coin_l());
        let spec_r = hadamard_spec(coin_r());
        let l = WalkState::initial(&spec_l);
        let r = WalkState::initial(&spec_r);
        HadamardPairWalk { spec_l, spec_r, l, r }
    }

    pub fn slice(&self) -> AmplitudeSlice {
        AmplitudeSlice::from_states(&self.l, &self.r)
    }

    pub fn advance(&mut self) {
        self.l = step(&self.l, &self.spec_l).expect("matching dimensions");
        self.r = step(&self.r, &self.spec_r).expect("matching dimensions");
    }
}

/// Amplitude tables for t = 0..=steps. Memory grows like steps^2; the
/// series functions below stream instead.
pub fn single_particle_amplitudes(steps: usize) -> Result<Vec<AmplitudeSlice>> {
    if steps > 10_000 {
        return Err(Error::OutOfRange(format!("steps = {steps} > 10^4")));
    }
    let mut w = HadamardPairWalk::new();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(w.slice());
    for _ in 0..steps {
        w.advance();
        out.push(w.slice());
    }
    Ok(out)
}

fn overlap(a: &CoinState, b: &CoinState, d: u32) -> f64 {
    if d == 0 {
        a.inner(b).norm_sqr()
    } else {
        0.0
    }
}

/// Meeting probability at every site m (index m + t) for one slice.
pub fn meeting_profile(slice: &AmplitudeSlice, d: u32, init: &PairInit) -> Result<Vec<f64>> {
    init.check()?;
    let t = slice.t as i64;
    let shift = 2 * d as i64;
    let one = Complex64::new(1.0, 0.0);
    let lo = -t;
    let hi = t;
    let sites = (lo..=hi).map(|m| (m, m - shift));
    let s2 = FRAC_1_SQRT_2;
    let out = match init {
        PairInit::Product(kind) => {
            let (c1, c2) = match kind {
                ProductKind::RL => (coin_r(), coin_l()),
                ProductKind::LR => (coin_l(), coin_r()),
                ProductKind::Symmetric => (coin_symmetric(), coin_symmetric()),
            };
            sites
                .map(|(m, n)| slice.probability(&c1, m) * slice.probability(&c2, n))
                .collect()
        }
        PairInit::Bell(kind) => sites
            .map(|(m, n)| {
                let l1 = slice.combined(one, ZERO, m);
                let r1 = slice.combined(ZERO, one, m);
                let l2 = slice.combined(one, ZERO, n);
                let r2 = slice.combined(ZERO, one, n);
                let mut acc = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        let v = match kind {
                            BellKind::PsiPlus => l1[i] * r2[j] + r1[i] * l2[j],
                            BellKind::PsiMinus => l1[i] * r2[j] - r1[i] * l2[j],
                            BellKind::PhiPlus => l1[i] * l2[j] + r1[i] * r2[j],
                            BellKind::PhiMinus => l1[i] * l2[j] - r1[i] * r2[j],
                        };
                        acc += (v * s2).norm_sqr();
                    }
                }
                acc
            })
            .collect(),
        PairInit::Boson(a, b) => {
            let norm = 1.0 + overlap(a, b, d);
            raw_profiles(slice, a, b, d)
                .into_iter()
                .map(|(bos, _, _)| bos / norm)
                .collect()
        }
        PairInit::Fermion(a, b) => {
            let norm = 1.0 - overlap(a, b, d);
            if norm < 1e-12 {
                vec![0.0; (hi - lo + 1) as usize]
            } else {
                raw_profiles(slice, a, b, d)
                    .into_iter()
                    .map(|(_, fer, _)| fer / norm)
                    .collect()
            }
        }
    };
    Ok(out)
}

/// Unnormalized boson, fermion and distinguishable densities for walkers
/// started in `a` at 0 and `b` at 2d, per site.
pub fn raw_profiles(slice: &AmplitudeSlice, a: &CoinState, b: &CoinState, d: u32) -> Vec<(f64, f64, f64)> {
    let t = slice.t as i64;
    let shift = 2 * d as i64;
    let ca = a.amplitudes();
    let cb = b.amplitudes();
    (-t..=t)
        .map(|m| {
            let p = slice.combined(ca[0], ca[1], m);
            let q = slice.combined(cb[0], cb[1], m - shift);
            let bos = 2.0 * (p[0] * q[0]).norm_sqr()
                + 2.0 * (p[1] * q[1]).norm_sqr()
                + (p[0] * q[1] + p[1] * q[0]).norm_sqr();
            let fer = (p[0] * q[1] - p[1] * q[0]).norm_sqr();
            let dis = (p[0].norm_sqr() + p[1].norm_sqr()) * (q[0].norm_sqr() + q[1].norm_sqr());
            (bos, fer, dis)
        })
        .collect()
}

pub fn meeting_at(slice: &AmplitudeSlice, d: u32, init: &PairInit) -> Result<f64> {
    Ok(meeting_profile(slice, d, init)?.iter().sum::<f64>().clamp(0.0, 1.0))
}

pub fn meeting_probability(t: usize, d: u32, init: &PairInit) -> Result<f64> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be >= 1".into()));
    }
    let mut w = HadamardPairWalk::new();
    for _ in 0..t {
        w.advance();
    }
    meeting_at(&w.slice(), d, init)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeetingSeries {
    pub kind: String,
    /// `values[i]` is M(t) at t = i + 1.
    pub values: Vec<f64>,
}

pub fn meeting_series(steps: usize, d: u32, init: &PairInit) -> Result<MeetingSeries> {
    init.check()?;
    let mut w = HadamardPairWalk::new();
    let mut values = Vec::with_capacity(steps);
    for _ in 0..steps {
        w.advance();
        values.push(meeting_at(&w.slice(), d, init)?);
    }
    Ok(MeetingSeries {
        kind: init.label(),
        values,
    })
}

/// 1 - prod_t (1 - M(t)).
pub fn overall_meeting(series: &MeetingSeries) -> Result<f64> {
    if series.values.is_empty() {
        return Err(Error::OutOfRange("empty meeting series".into()));
    }
    let mut miss = 1.0;
    for &m in &series.values {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::OutOfRange(format!("M(t) = {m} outside [0, 1]")));
        }
        miss *= 1.0 - m;
    }
    Ok(1.0 - miss)
}

/// Classical walkers: 2^{-2t} C(2t, t+d), zero once d > t.
pub fn classical_meeting(t: u64, d: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be >= 1".into()));
    }
    if d > t {
        return Ok(0.0);
    }
    // 4^-t C(2t, t), then walk the binomial row out to t + d
    let mut v = 1.0f64;
    for k in 1..=t {
        v *= (2 * k - 1) as f64 / (2 * k) as f64;
    }
    for k in 1..=d {
        v *= (t - k + 1) as f64 / (t + k) as f64;
    }
    Ok(v)
}

pub fn classical_meeting_series(steps: u64, d: u64) -> Result<MeetingSeries> {
    let values = (1..=steps)
        .map(|t| classical_meeting(t, d))
        .collect::<Result<Vec<f64>>>()?;
    Ok(MeetingSeries {
        kind: "classical".into(),
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoteKind {
    Classical,
    QuantumProduct,
}

/// Long-time estimates of the meeting probability.
///
/// The quantum estimate integrates the product of the slowly varying parts
/// of the two single-particle distributions (walkers in R at 0 and in L at
/// 2d). With a = 2d - t/sqrt2 and b = t/sqrt2 the integrand has inverse
/// square-root singularities at both ends; x = (a+b)/2 + (b-a)/2 cos(theta)
/// removes them exactly.
pub fn meeting_asymptote(t: f64, d: f64, kind: AsymptoteKind) -> Result<f64> {
    match kind {
        AsymptoteKind::Classical => Ok((PI * t).powf(-0.5) * (-d * d / t).exp()),
        AsymptoteKind::QuantumProduct => {
            if d <= 0.0 {
                return Err(Error::OutOfRange("quantum asymptote needs d > 0".into()));
            }
            if t <= SQRT_2 * d {
                return Err(Error::OutOfRange(format!("need t > sqrt2 d, got t = {t}, d = {d}")));
            }
            let b = t / SQRT_2;
            let a = 2.0 * d - b;
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let g = |theta: f64| {
                let x = mid + half * theta.cos();
                let smooth = t * t / (2.0 * ((x + b) * (b + 2.0 * d - x)).sqrt());
                smooth / ((1.0 - x / t) * (1.0 + (x - 2.0 * d) / t))
            };
            let scale = 2.0 / (PI * PI * t * t);
            let guess = scale * g(PI / 2.0) * PI;
            let v = integrate(&g, 0.0, PI, 1e-10 * guess.abs().max(1e-300) / scale)?;
            Ok(scale * v)
        }
    }
}
