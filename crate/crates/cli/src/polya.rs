use std::f64::consts::PI;

use clap::{Args, Subcommand};
use qwalk::lattice::{make_coin, make_walk_spec, CoinKind, CoinState};
use qwalk::recurrence::{classical_polya, fourier_polya_surface, hadamard_polya_estimate, polya_partial};
use qwalk::walk::evolve_origin_series;

use crate::out::{g12, Csv};
use crate::{Failure, Report};

#[derive(Subcommand, Debug)]
pub enum PolyaCmd {
    /// Partial Pólya numbers of Hadamard tensor walks against the estimate.
    Quantum(QuantumArgs),
    /// Classical Pólya numbers by dimension.
    Classical(ClassicalArgs),
    /// Partial Pólya numbers of the 2-D Fourier walk over its special states.
    FourierSurface(SurfaceArgs),
}

#[derive(Args, Debug)]
pub struct QuantumArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
}

#[derive(Args, Debug)]
pub struct ClassicalArgs {
    #[arg(long, default_value_t = 6)]
    max_dim: u32,
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 100)]
    terms: usize,
    #[arg(long, default_value_t = 0.01)]
    a_step: f64,
    /// phi runs over j pi / phi_div, 0 <= j < 2 phi_div.
    #[arg(long, default_value_t = 100)]
    phi_div: usize,
}

pub fn run(cmd: PolyaCmd) -> Result<Report, Failure> {
    match cmd {
        PolyaCmd::Quantum(args) => quantum(&args),
        PolyaCmd::Classical(args) => classical(&args),
        PolyaCmd::FourierSurface(args) => surface(&args),
    }
}

fn quantum(args: &QuantumArgs) -> Result<Report, Failure> {
    if args.dims.is_empty() {
        return Err(Failure::Usage("--dims must list at least one dimension".into()));
    }
    let mut csv = Csv::new(&["d", "polya_partial", "polya_estimate"]);
    let mut parts = Vec::new();
    for &d in &args.dims {
        let coin = make_coin(CoinKind::HadamardTensor(d))?;
        let spec = make_walk_spec(coin, CoinState::basis(1 << d, 0))?;
        let p = polya_partial(&evolve_origin_series(&spec, args.steps), args.steps)?;
        let est = if d >= 2 { g12(hadamard_polya_estimate(d as u32)?) } else { String::new() };
        csv.row(&[d.to_string(), g12(p), est]);
        parts.push(format!("P{d}={}", g12(p)));
    }
    Ok(Report { csv, summary: parts.join(" ") })
}

fn classical(args: &ClassicalArgs) -> Result<Report, Failure> {
    if args.max_dim == 0 {
        return Err(Failure::Usage("--max-dim must be >= 1".into()));
    }
    let mut csv = Csv::new(&["d", "polya_classical", "polya_quantum_estimate"]);
    let mut last = 1.0;
    for d in 1..=args.max_dim {
        last = classical_polya(d)?;
        let est = if d >= 2 { g12(hadamard_polya_estimate(d)?) } else { String::new() };
        csv.row(&[d.to_string(), g12(last), est]);
    }
    Ok(Report {
        csv,
        summary: format!("polya_classical(d={})={}", args.max_dim, g12(last)),
    })
}

fn surface(args: &SurfaceArgs) -> Result<Report, Failure> {
    if !(args.a_step > 0.0) || args.phi_div == 0 || args.terms == 0 {
        return Err(Failure::Usage("need --a-step > 0, --phi-div >= 1, --terms >= 1".into()));
    }
    let s = fourier_polya_surface(args.terms, args.a_step, args.phi_div)?;
    let mut csv = Csv::new(&["a", "phi", "polya"]);
    for (i, a) in s.a_values.iter().enumerate() {
        for (j, phi) in s.phi_values.iter().enumerate() {
            csv.row(&[g12(*a), g12(*phi), g12(s.values[i][j])]);
        }
    }
    let (lo, hi) = (s.minimum(), s.maximum());
    Ok(Report {
        csv,
        summary: format!(
            "min={} at (a={}, phi={}pi) max={} at (a={}, phi={}pi)",
            g12(lo.polya),
            g12(lo.a),
            g12(lo.phi / PI),
            g12(hi.polya),
            g12(hi.a),
            g12(hi.phi / PI)
        ),
    })
}
