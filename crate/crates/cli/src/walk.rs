use std::f64::consts::{FRAC_1_SQRT_2, PI};

use clap::{Args, Subcommand, ValueEnum};
use qwalk::lattice::{make_coin, make_walk_spec, CoinKind, CoinOperator, CoinState, WalkSpec};
use qwalk::recurrence::{classify_walk, decay_exponent, polya_partials};
use qwalk::spectral::{
    biased_initial_state, biased_phase_region, fourier_walk_special_states, peak_velocities,
    rho_recurrence, rho_zero_mean,
};
use qwalk::walk::{evolve, evolve_origin_series, position_distribution};
use qwalk::Complex64;

use crate::out::{g12, Csv};
use crate::{Failure, Report};

#[derive(Subcommand, Debug)]
pub enum WalkCmd {
    /// Probability at the origin p0(t) with partial Pólya numbers.
    Origin(WalkArgs),
    /// Position distribution after the last step.
    Distribution(WalkArgs),
    /// Biased-walk regions and peak velocities over (r, rho).
    PhaseDiagram(PhaseArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinChoice {
    Hadamard,
    Grover,
    Fourier,
    GroverFamily,
    Biased,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitChoice {
    /// Coin basis vector `--index`.
    Basis,
    /// Symmetric spreading state of the chosen coin.
    Symmetric,
    /// Grover state 1/2 (1, -1, -1, 1).
    PsiG,
    /// Fourier transient-subspace state with `--a`, `--phi`.
    PsiF,
    /// (sqrt a, sqrt(1-a) e^{i phi}) for the biased coin.
    Biased,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[arg(long, value_enum, default_value = "hadamard")]
    coin: CoinChoice,
    /// Lattice dimension (hadamard) or coin dimension (grover-family).
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_enum, default_value = "basis")]
    init: InitChoice,
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    /// Right step length of the biased coin.
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Coin parameter of the biased coin.
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
}

#[derive(Args, Debug)]
pub struct PhaseArgs {
    #[arg(long, default_value_t = 5)]
    r_max: u32,
    /// rho runs over i / rho_steps, 0 < i < rho_steps.
    #[arg(long, default_value_t = 100)]
    rho_steps: u32,
}

fn coin(args: &WalkArgs) -> Result<CoinOperator, Failure> {
    let kind = match args.coin {
        CoinChoice::Hadamard => CoinKind::HadamardTensor(args.dim),
        CoinChoice::Grover => CoinKind::Grover,
        CoinChoice::Fourier => CoinKind::Fourier,
        CoinChoice::GroverFamily => CoinKind::GroverFamily(args.dim),
        CoinChoice::Biased => CoinKind::Biased { r: args.r, rho: args.rho },
    };
    Ok(make_coin(kind)?)
}

fn initial_state(args: &WalkArgs, coin: &CoinOperator) -> Result<CoinState, Failure> {
    let c = |re, im| Complex64::new(re, im);
    let wrong = |what: &str| Failure::Usage(format!("--init {what} does not fit --coin {:?}", args.coin));
    match (args.init, args.coin) {
        (InitChoice::Basis, _) => {
            if args.index >= coin.n() {
                return Err(Failure::Usage(format!("--index {} >= coin dimension {}", args.index, coin.n())));
            }
            Ok(CoinState::basis(coin.n(), args.index))
        }
        (InitChoice::Symmetric, CoinChoice::Hadamard) => {
            let axis = [c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)];
            let mut amps = vec![c(1.0, 0.0)];
            for _ in 0..args.dim {
                amps = amps.iter().flat_map(|x| axis.iter().map(move |y| x * y)).collect();
            }
            Ok(CoinState::new(amps)?)
        }
        (InitChoice::Symmetric, CoinChoice::Grover) => {
            Ok(CoinState::new(vec![c(0.5, 0.0), c(0.0, 0.5), c(0.0, 0.5), c(-0.5, 0.0)])?)
        }
        (InitChoice::Symmetric, CoinChoice::Fourier) => Ok(fourier_walk_special_states(0.5, 7.0 * PI / 4.0)?),
        (InitChoice::Symmetric, CoinChoice::Biased) => Ok(biased_initial_state(0.5, PI / 2.0)?),
        (InitChoice::PsiG, CoinChoice::Grover) => Ok(CoinState::from_real(&[0.5, -0.5, -0.5, 0.5])?),
        (InitChoice::PsiF, CoinChoice::Fourier) => Ok(fourier_walk_special_states(
            args.a.unwrap_or(0.5),
            args.phi.unwrap_or(7.0 * PI / 4.0),
        )?),
        (InitChoice::Biased, CoinChoice::Biased) => Ok(biased_initial_state(
            args.a.unwrap_or(0.5),
            args.phi.unwrap_or(PI / 2.0),
        )?),
        (InitChoice::Symmetric, _) => Err(wrong("symmetric")),
        (InitChoice::PsiG, _) => Err(wrong("psi-g")),
        (InitChoice::PsiF, _) => Err(wrong("psi-f")),
        (InitChoice::Biased, _) => Err(wrong("biased")),
    }
}

fn spec(args: &WalkArgs) -> Result<WalkSpec, Failure> {
    let coin = coin(args)?;
    let init = initial_state(args, &coin)?;
    Ok(make_walk_spec(coin, init)?)
}

pub fn run(cmd: WalkCmd) -> Result<Report, Failure> {
    match cmd {
        WalkCmd::Origin(args) => origin(&args),
        WalkCmd::Distribution(args) => distribution(&args),
        WalkCmd::PhaseDiagram(args) => phase_diagram(&args),
    }
}

fn origin(args: &WalkArgs) -> Result<Report, Failure> {
    let series = evolve_origin_series(&spec(args)?, args.steps);
    let partials = polya_partials(&series);
    let mut csv = Csv::new(&["t", "p0", "polya_partial"]);
    for (t, (p, pp)) in series.values().iter().zip(&partials).enumerate() {
        csv.row(&[t.to_string(), g12(*p), g12(*pp)]);
    }
    let mut summary = format!("polya_partial={}", g12(partials[args.steps]));
    if let Ok(fit) = decay_exponent(&series, (0.5, 1.0)) {
        summary += &format!(" exponent={}", g12(fit.exponent));
    }
    if let Ok(class) = classify_walk(&series) {
        summary += &format!(" class={class:?}");
    }
    Ok(Report { csv, summary })
}

fn distribution(args: &WalkArgs) -> Result<Report, Failure> {
    let spec = spec(args)?;
    let d = spec.coin.dim_lattice();
    let dist = position_distribution(&evolve(&spec, args.steps));
    let mut header: Vec<String> = (1..=d).map(|i| format!("m{i}")).collect();
    header.push("p".into());
    let mut csv = Csv::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    let mut total = 0.0;
    let mut mean = vec![0.0; d];
    for (m, p) in &dist {
        if *p == 0.0 {
            continue;
        }
        total += p;
        for (acc, x) in mean.iter_mut().zip(m.coords()) {
            *acc += *x as f64 * p;
        }
        let mut row: Vec<String> = m.coords().iter().map(|x| x.to_string()).collect();
        row.push(g12(*p));
        csv.row(&row);
    }
    let mean: Vec<String> = mean.iter().map(|x| g12(*x)).collect();
    Ok(Report {
        csv,
        summary: format!("total={} mean=({})", g12(total), mean.join(",")),
    })
}

fn phase_diagram(args: &PhaseArgs) -> Result<Report, Failure> {
    if args.r_max == 0 || args.rho_steps < 2 {
        return Err(Failure::Usage("need --r-max >= 1 and --rho-steps >= 2".into()));
    }
    let mut csv = Csv::new(&["r", "rho", "rho_R", "rho_0", "region", "v_L", "v_R"]);
    let mut counts = [0usize; 3];
    for r in 1..=args.r_max {
        for i in 1..args.rho_steps {
            let rho = i as f64 / args.rho_steps as f64;
            let region = biased_phase_region(r, rho);
            counts[region as usize] += 1;
            let (vl, vr) = peak_velocities(r, rho);
            csv.row(&[
                r.to_string(),
                g12(rho),
                g12(rho_recurrence(r)),
                g12(rho_zero_mean(r)),
                region.as_str().into(),
                g12(vl),
                g12(vr),
            ]);
        }
    }
    Ok(Report {
        csv,
        summary: format!(
            "transient_genuine={} recurrent_genuine={} recurrent_unbiasable={}",
            counts[0], counts[1], counts[2]
        ),
    })
}
