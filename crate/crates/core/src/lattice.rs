//! Lattice points, coin operators and walk specifications.
//!
//! Coin basis ordering: for the ±1 topologies every lattice axis carries a
//! two-state factor ordered `(-1, +1)`, the first axis being the most
//! significant bit of the coin index. On the line this makes index 0 the
//! left-moving state `|L>`. Biased coins are the exception: index 0 moves
//! right by `+r`, index 1 moves left by one site.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const UNITARY_TOL: f64 = 1e-12;
const INIT_NORM_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::OutOfRange("lattice dimension must be >= 1".into()));
        }
        Ok(LatticePoint(coords))
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint(vec![0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<i64> for LatticePoint {
    fn from(x: i64) -> Self {
        LatticePoint(vec![x])
    }
}

impl<const D: usize> From<[i64; D]> for LatticePoint {
    fn from(c: [i64; D]) -> Self {
        assert!(D > 0, "lattice dimension must be >= 1");
        LatticePoint(c.to_vec())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Named coin families.
#[derive(Clone, Debug)]
pub enum CoinKind {
    HadamardTensor(usize),
    Grover,
    Fourier,
    GroverFamily(usize),
    Biased { r: u32, rho: f64 },
    Custom {
        matrix: CMatrix,
        displacements: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug)]
pub struct CoinOperator {
    dim: usize,
    matrix: CMatrix,
    displacements: Vec<Vec<i64>>,
    /// Tensor factors whose product reproduces both the matrix and the
    /// displacement table. Empty for coins that do not factor.
    factors: Vec<CoinOperator>,
}

impl CoinOperator {
    pub fn dim_lattice(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.displacements.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn displacements(&self) -> &[Vec<i64>] {
        &self.displacements
    }

    pub fn factors(&self) -> &[CoinOperator] {
        &self.factors
    }

    /// Largest displacement magnitude along any axis.
    pub fn r_max(&self) -> i64 {
        self.displacements
            .iter()
            .flat_map(|e| e.iter().map(|c| c.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// Kronecker product; the displacement of the joint index is the
    /// concatenation of the factor displacements.
    pub fn tensor(&self, other: &CoinOperator) -> CoinOperator {
        let matrix = self.matrix.kronecker(&other.matrix);
        let mut displacements = Vec::with_capacity(self.n() * other.n());
        for a in &self.displacements {
            for b in &other.displacements {
                let mut e = a.clone();
                e.extend_from_slice(b);
                displacements.push(e);
            }
        }
        let mut factors = Vec::new();
        for c in [self, other] {
            if c.factors.is_empty() {
                factors.push(c.clone());
            } else {
                factors.extend(c.factors.iter().cloned());
            }
        }
        CoinOperator {
            dim: self.dim + other.dim,
            matrix,
            displacements,
            factors,
        }
    }
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn line_coin(matrix: CMatrix) -> CoinOperator {
    CoinOperator {
        dim: 1,
        matrix,
        displacements: vec![vec![-1], vec![1]],
        factors: Vec::new(),
    }
}

fn plane_coin(matrix: CMatrix) -> CoinOperator {
    CoinOperator {
        dim: 2,
        matrix,
        displacements: sign_patterns(2),
        factors: Vec::new(),
    }
}

/// All `(-1,+1)` patterns in coin-index order.
pub fn sign_patterns(d: usize) -> Vec<Vec<i64>> {
    (0..1usize << d)
        .map(|i| {
            (0..d)
                .map(|a| if (i >> (d - 1 - a)) & 1 == 1 { 1 } else { -1 })
                .collect()
        })
        .collect()
}

fn hadamard_line() -> CoinOperator {
    let h = FRAC_1_SQRT_2;
    line_coin(CMatrix::from_row_slice(
        2,
        2,
        &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
    ))
}

fn hadamard_tensor(d: usize) -> CoinOperator {
    let n = 1usize << d;
    // ±2^(-d/2), built without repeated rounding
    let mut mag = 0.5f64.powi((d / 2) as i32);
    if d % 2 == 1 {
        mag *= FRAC_1_SQRT_2;
    }
    let matrix = CMatrix::from_fn(n, n, |i, j| {
        let s = if (i & j).count_ones() % 2 == 0 { mag } else { -mag };
        c(s, 0.0)
    });
    let factors = if d > 1 {
        vec![hadamard_line(); d]
    } else {
        Vec::new()
    };
    CoinOperator {
        dim: d,
        matrix,
        displacements: sign_patterns(d),
        factors,
    }
}

fn grover() -> CoinOperator {
    plane_coin(CMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            c(-0.5, 0.0)
        } else {
            c(0.5, 0.0)
        }
    }))
}

fn fourier() -> CoinOperator {
    let i = c(0.0, 0.5);
    let p = c(0.5, 0.0);
    plane_coin(CMatrix::from_row_slice(
        4,
        4,
        &[p, p, p, p, p, i, -p, -i, p, -p, p, -p, p, -i, -p, i],
    ))
}

fn grover_family(total: usize) -> CoinOperator {
    let pairs = total / 2;
    let mut out: Option<CoinOperator> = None;
    for _ in 0..pairs {
        out = Some(match out {
            None => grover(),
            Some(acc) => acc.tensor(&grover()),
        });
    }
    if total % 2 == 1 {
        out = Some(match out {
            None => hadamard_line(),
            Some(acc) => acc.tensor(&hadamard_line()),
        });
    }
    out.expect("total dimension checked >= 1")
}

fn biased(r: u32, rho: f64) -> CoinOperator {
    let a = rho.sqrt();
    let b = (1.0 - rho).sqrt();
    CoinOperator {
        dim: 1,
        matrix: CMatrix::from_row_slice(2, 2, &[c(a, 0.0), c(b, 0.0), c(b, 0.0), c(-a, 0.0)]),
        displacements: vec![vec![r as i64], vec![-1]],
        factors: Vec::new(),
    }
}

pub fn make_coin(kind: CoinKind) -> Result<CoinOperator> {
    let coin = match kind {
        CoinKind::HadamardTensor(d) => {
            if d == 0 {
                return Err(Error::OutOfRange("hadamard_tensor needs d >= 1".into()));
            }
            if d > 12 {
                return Err(Error::OutOfRange(format!("hadamard_tensor d = {d} too large")));
            }
            if d == 1 {
                hadamard_line()
            } else {
                hadamard_tensor(d)
            }
        }
        CoinKind::Grover => grover(),
        CoinKind::Fourier => fourier(),
        CoinKind::GroverFamily(total) => {
            if total == 0 || total > 12 {
                return Err(Error::OutOfRange(format!(
                    "grover_family total dimension {total} outside 1..=12"
                )));
            }
            grover_family(total)
        }
        CoinKind::Biased { r, rho } => {
            if r < 1 {
                return Err(Error::OutOfRange("biased coin needs r >= 1".into()));
            }
            if !(0.0..=1.0).contains(&rho) {
                return Err(Error::OutOfRange(format!("rho = {rho} outside [0, 1]")));
            }
            biased(r, rho)
        }
        CoinKind::Custom {
            matrix,
            displacements,
        } => {
            if matrix.nrows() != matrix.ncols() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.nrows(),
                    got: matrix.ncols(),
                });
            }
            if displacements.len() != matrix.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.nrows(),
                    got: displacements.len(),
                });
            }
            let dim = displacements.first().map(|e| e.len()).unwrap_or(0);
            if dim == 0 {
                return Err(Error::OutOfRange("displacements must be non-empty".into()));
            }
            if let Some(bad) = displacements.iter().find(|e| e.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: bad.len(),
                });
            }
            let defect = unitarity_defect(&matrix);
            if defect >= UNITARY_TOL {
                return Err(Error::NotUnitary(defect));
            }
            CoinOperator {
                dim,
                matrix,
                displacements,
                factors: Vec::new(),
            }
        }
    };
    Ok(coin)
}

/// Normalized coin state.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinState(Vec<Complex64>);

impl CoinState {
    /// Accepts vectors whose norm is within 1e-9 of one and renormalizes.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let norm = norm(&amps);
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if (norm - 1.0).abs() > INIT_NORM_TOL {
            return Err(Error::OutOfRange(format!(
                "coin state norm {norm} is not 1 (use CoinState::normalized)"
            )));
        }
        Ok(CoinState(amps.into_iter().map(|a| a / norm).collect()))
    }

    /// Scales any non-zero vector to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(CoinState(amps.into_iter().map(|a| a / norm).collect()))
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = c(1.0, 0.0);
        CoinState(v)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inner(&self, other: &CoinState) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug)]
pub struct WalkSpec {
    pub coin: CoinOperator,
    pub initial_coin: CoinState,
    pub origin: LatticePoint,
}

pub fn make_walk_spec(coin: CoinOperator, initial_coin: CoinState) -> Result<WalkSpec> {
    let origin = LatticePoint::origin(coin.dim_lattice());
    make_walk_spec_at(coin, initial_coin, origin)
}

pub fn make_walk_spec_at(
    coin: CoinOperator,
    initial_coin: CoinState,
    origin: LatticePoint,
) -> Result<WalkSpec> {
    if initial_coin.len() != coin.n() {
        return Err(Error::DimensionMismatch {
            expected: coin.n(),
            got: initial_coin.len(),
        });
    }
    if origin.dim() != coin.dim_lattice() {
        return Err(Error::DimensionMismatch {
            expected: coin.dim_lattice(),
            got: origin.dim(),
        });
    }
    Ok(WalkSpec {
        coin,
        initial_coin,
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_patterns_order() {
        assert_eq!(
            sign_patterns(2),
            vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
        );
    }

    #[test]
    fn custom_rejects_non_unitary() {
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        let err = make_coin(CoinKind::Custom {
            matrix: m,
            displacements: vec![vec![-1], vec![1]],
        })
        .unwrap_err();
        assert!(matches!(err, Error::NotUnitary(_)));
    }

    #[test]
    fn custom_rejects_shape_mismatch() {
        let m = CMatrix::identity(2, 2);
        assert!(make_coin(CoinKind::Custom {
            matrix: m,
            displacements: vec![vec![1]],
        })
        .is_err());
    }

    #[test]
    fn biased_rho_range() {
        assert!(make_coin(CoinKind::Biased { r: 2, rho: 1.5 }).is_err());
        assert!(make_coin(CoinKind::Biased { r: 2, rho: -0.1 }).is_err());
        assert!(make_coin(CoinKind::Biased { r: 2, rho: 0.0 }).is_ok());
    }

    #[test]
    fn zero_state_rejected() {
        assert_eq!(CoinState::from_real(&[0.0, 0.0]), Err(Error::ZeroVector));
    }
}
