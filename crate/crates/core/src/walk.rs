//! Position-space evolution.
//!
//! States live on a dense bounding box that grows by the displacement
//! extent every step; nothing is pruned, so the total norm is exact up to
//! rounding.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{CMatrix, CoinOperator, CoinState, LatticePoint, WalkSpec};
use crate::spectral::momentum_propagator;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct WalkState {
    time: usize,
    n: usize,
    lo: Vec<i64>,
    shape: Vec<usize>,
    amps: Vec<Complex64>,
}

impl WalkState {
    /// Particle localized at `spec.origin` with the spec's coin state.
    pub fn initial(spec: &WalkSpec) -> Self {
        let dim = spec.coin.dim_lattice();
        WalkState {
            time: 0,
            n: spec.coin.n(),
            lo: spec.origin.coords().to_vec(),
            shape: vec![1; dim],
            amps: spec.initial_coin.amplitudes().to_vec(),
        }
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn coin_dim(&self) -> usize {
        self.n
    }

    pub fn lower_corner(&self) -> &[i64] {
        &self.lo
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Raw amplitudes, cell-major with the coin index fastest.
    pub fn raw(&self) -> &[Complex64] {
        &self.amps
    }

    fn cell_index(&self, point: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.dim() {
            let off = point[a] - self.lo[a];
            if off < 0 || off as usize >= self.shape[a] {
                return None;
            }
            idx = idx * self.shape[a] + off as usize;
        }
        Some(idx)
    }

    fn point_of(&self, mut idx: usize) -> Vec<i64> {
        let d = self.dim();
        let mut coords = vec![0i64; d];
        for a in (0..d).rev() {
            coords[a] = self.lo[a] + (idx % self.shape[a]) as i64;
            idx /= self.shape[a];
        }
        coords
    }

    /// Coin vector at a lattice point; zero outside the support box.
    pub fn amplitude_at(&self, point: &LatticePoint) -> Vec<Complex64> {
        if point.dim() != self.dim() {
            return vec![ZERO; self.n];
        }
        match self.cell_index(point.coords()) {
            Some(i) => self.amps[i * self.n..(i + 1) * self.n].to_vec(),
            None => vec![ZERO; self.n],
        }
    }

    pub fn probability_at(&self, point: &LatticePoint) -> f64 {
        self.amplitude_at(point).iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.amps.par_iter().map(|a| a.norm_sqr()).sum()
    }

    /// Per-cell probabilities on the bounding box, in cell order.
    pub fn cell_probabilities(&self) -> Vec<f64> {
        self.amps
            .chunks(self.n)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// Iterates `(point, coin vector)` over cells with non-zero amplitude.
    pub fn iter_support(&self) -> impl Iterator<Item = (LatticePoint, &[Complex64])> + '_ {
        self.amps
            .chunks(self.n)
            .enumerate()
            .filter(|(_, c)| c.iter().any(|a| *a != ZERO))
            .map(|(i, c)| {
                (
                    LatticePoint::new(self.point_of(i)).expect("dimension >= 1"),
                    c,
                )
            })
    }
}

fn check_dims(state: &WalkState, coin: &CoinOperator) -> Result<()> {
    if state.n != coin.n() {
        return Err(Error::DimensionMismatch {
            expected: coin.n(),
            got: state.n,
        });
    }
    if state.dim() != coin.dim_lattice() {
        return Err(Error::DimensionMismatch {
            expected: coin.dim_lattice(),
            got: state.dim(),
        });
    }
    Ok(())
}

/// One step: psi(m, t+1)_l = (C psi(m - e_l, t))_l.
pub fn step(state: &WalkState, spec: &WalkSpec) -> Result<WalkState> {
    check_dims(state, &spec.coin)?;
    Ok(step_coin(state, &spec.coin))
}

fn step_coin(state: &WalkState, coin: &CoinOperator) -> WalkState {
    let d = state.dim();
    let n = state.n;
    let disp = coin.displacements();
    let mut dmin = vec![0i64; d];
    let mut dmax = vec![0i64; d];
    for a in 0..d {
        dmin[a] = disp.iter().map(|e| e[a]).min().unwrap_or(0);
        dmax[a] = disp.iter().map(|e| e[a]).max().unwrap_or(0);
    }
    let lo: Vec<i64> = (0..d).map(|a| state.lo[a] + dmin[a]).collect();
    let shape: Vec<usize> = (0..d)
        .map(|a| state.shape[a] + (dmax[a] - dmin[a]) as usize)
        .collect();
    let old_shape = &state.shape;
    let row_len = shape[d - 1];
    let mut old_strides = vec![1usize; d];
    for a in (0..d.saturating_sub(1)).rev() {
        old_strides[a] = old_strides[a + 1] * old_shape[a + 1];
    }
    let rows_shape = &shape[..d - 1];
    let m = coin.matrix();
    let rows_c: Vec<Vec<Complex64>> = (0..n).map(|l| (0..n).map(|k| m[(l, k)]).collect()).collect();
    let old = &state.amps;

    let total: usize = shape.iter().product();
    let mut amps = vec![ZERO; total * n];
    amps.par_chunks_mut(row_len * n)
        .enumerate()
        .for_each(|(row, out)| {
            // coordinates of this row on the leading axes (new box offsets)
            let mut rc = vec![0usize; d - 1];
            let mut rem = row;
            for a in (0..d - 1).rev() {
                rc[a] = rem % rows_shape[a];
                rem /= rows_shape[a];
            }
            for (l, e) in disp.iter().enumerate() {
                // old offset = new offset + dmin - e
                let mut base = 0usize;
                let mut inside = true;
                for a in 0..d - 1 {
                    let o = rc[a] as i64 + dmin[a] - e[a];
                    if o < 0 || o as usize >= old_shape[a] {
                        inside = false;
                        break;
                    }
                    base += o as usize * old_strides[a];
                }
                if !inside {
                    continue;
                }
                let shift = dmin[d - 1] - e[d - 1];
                let old_len = old_shape[d - 1] as i64;
                let x0 = (-shift).max(0);
                let x1 = (old_len - shift).min(row_len as i64);
                let cl = &rows_c[l];
                for x in x0..x1 {
                    let src = (base + (x + shift) as usize) * n;
                    let v = &old[src..src + n];
                    let mut acc = ZERO;
                    for k in 0..n {
                        acc += cl[k] * v[k];
                    }
                    out[x as usize * n + l] = acc;
                }
            }
        });
    WalkState {
        time: state.time + 1,
        n,
        lo,
        shape,
        amps,
    }
}

pub fn evolve(spec: &WalkSpec, steps: usize) -> WalkState {
    let mut s = WalkState::initial(spec);
    for _ in 0..steps {
        s = step_coin(&s, &spec.coin);
    }
    s
}

/// Evolves `steps` times, handing every state (including t = 0) to `visit`.
pub fn evolve_with<F: FnMut(&WalkState)>(spec: &WalkSpec, steps: usize, mut visit: F) -> WalkState {
    let mut s = WalkState::initial(spec);
    visit(&s);
    for _ in 0..steps {
        s = step_coin(&s, &spec.coin);
        visit(&s);
    }
    s
}

/// p(m) = |psi(m,t)|^2 over the points that carry amplitude.
pub fn position_distribution(state: &WalkState) -> BTreeMap<LatticePoint, f64> {
    state
        .iter_support()
        .map(|(p, c)| (p, c.iter().map(|a| a.norm_sqr()).sum()))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OriginSeries {
    values: Vec<f64>,
}

impl OriginSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(-1e-12..=1.0 + 1e-12).contains(*v)) {
            return Err(Error::OutOfRange(format!("p0 = {bad} outside [0, 1]")));
        }
        Ok(OriginSeries {
            values: values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest time index T.
    pub fn horizon(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// p0(t) = |psi(origin, t)|^2 for t = 0..=steps.
///
/// Coins that are tensor products of independent walks are handled factor
/// by factor: the origin amplitude map of the product walk is the Kronecker
/// product of the factor maps, each obtained by direct evolution.
pub fn evolve_origin_series(spec: &WalkSpec, steps: usize) -> OriginSeries {
    let values = if spec.coin.factors().len() > 1 {
        let props = origin_propagators(&spec.coin, steps);
        let psi = spec.initial_coin.amplitudes();
        props.iter().map(|a| apply_norm_sqr(a, psi)).collect()
    } else {
        let mut out = Vec::with_capacity(steps + 1);
        evolve_with(spec, steps, |s| out.push(s.probability_at(&spec.origin)));
        out
    };
    OriginSeries::new(values).expect("unitary evolution keeps p0 in [0, 1]")
}

fn apply_norm_sqr(a: &CMatrix, psi: &[Complex64]) -> f64 {
    let n = a.nrows();
    (0..n)
        .map(|i| {
            let mut acc = ZERO;
            for (k, p) in psi.iter().enumerate() {
                acc += a[(i, k)] * p;
            }
            acc.norm_sqr()
        })
        .sum()
}

/// The linear maps A_t with psi(0, t) = A_t psi for t = 0..=steps.
pub fn origin_propagators(coin: &CoinOperator, steps: usize) -> Vec<CMatrix> {
    if coin.factors().len() > 1 {
        let per_factor: Vec<Vec<CMatrix>> = coin
            .factors()
            .par_iter()
            .map(|f| origin_propagators(f, steps))
            .collect();
        return (0..=steps)
            .map(|t| {
                let mut acc = per_factor[0][t].clone();
                for f in &per_factor[1..] {
                    acc = acc.kronecker(&f[t]);
                }
                acc
            })
            .collect();
    }
    let n = coin.n();
    let origin = LatticePoint::origin(coin.dim_lattice());
    let columns: Vec<Vec<Vec<Complex64>>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let spec = WalkSpec {
                coin: coin.clone(),
                initial_coin: CoinState::basis(n, k),
                origin: origin.clone(),
            };
            let mut col = Vec::with_capacity(steps + 1);
            evolve_with(&spec, steps, |s| col.push(s.amplitude_at(&origin)));
            col
        })
        .collect();
    (0..=steps)
        .map(|t| CMatrix::from_fn(n, n, |i, k| columns[k][t][i]))
        .collect()
}

#[derive(Clone, Debug)]
pub struct MomentumAmplitude {
    pub amplitude: Vec<Complex64>,
    /// True when the grid integrates the trigonometric polynomial exactly.
    pub aliasing_free: bool,
}

/// psi(0, t) = (2 pi)^-d  integral of U(k)^t psi dk on a K^d trapezoid grid.
pub fn origin_amplitude_via_momentum(
    spec: &WalkSpec,
    t: usize,
    grid: usize,
) -> Result<MomentumAmplitude> {
    let d = spec.coin.dim_lattice();
    if grid < 64 {
        return Err(Error::OutOfRange(format!("grid K = {grid} < 64")));
    }
    if d > 2 {
        return Err(Error::OutOfRange(format!("momentum quadrature limited to d <= 2, got {d}")));
    }
    let n = spec.coin.n();
    let psi = spec.initial_coin.amplitudes().to_vec();
    let ks: Vec<f64> = (0..grid)
        .map(|j| -PI + 2.0 * PI * j as f64 / grid as f64)
        .collect();
    let points: Vec<Vec<f64>> = if d == 1 {
        ks.iter().map(|&k| vec![k]).collect()
    } else {
        ks.iter()
            .flat_map(|&a| ks.iter().map(move |&b| vec![a, b]))
            .collect()
    };
    let total = points
        .par_iter()
        .map(|k| {
            let u = momentum_propagator(&spec.coin, k);
            let mut v = psi.clone();
            for _ in 0..t {
                let mut w = vec![ZERO; n];
                for i in 0..n {
                    for j in 0..n {
                        w[i] += u[(i, j)] * v[j];
                    }
                }
                v = w;
            }
            v
        })
        .reduce(
            || vec![ZERO; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let scale = 1.0 / points.len() as f64;
    let degree = t as i64 * spec.coin.r_max();
    Ok(MomentumAmplitude {
        amplitude: total.into_iter().map(|x| x * scale).collect(),
        aliasing_free: (grid as i64) > degree,
    })
}
