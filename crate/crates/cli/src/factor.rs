use clap::{Args, Subcommand};
use qwalk::expsum::{
    complete_sum, exp_sum, factorization_pattern, ghost_count, ghost_estimate,
    neighbor_factor_mining, scaling_experiment, scaling_fit, Convention, ExpSumConfig, FractionalPart, PhaseKind,
    TrialFactorClass, XI_T,
};

use crate::out::{g12, Csv};
use crate::{Failure, Report};

#[derive(Subcommand, Debug)]
pub enum FactorCmd {
    /// Signal |A(l)| for every trial factor l <= sqrt N.
    Pattern(PatternArgs),
    /// Ghost counts against the estimate for a range of truncations.
    Ghosts(GhostArgs),
    /// Minimal truncation for log-uniformly sampled N.
    Scaling(ScalingArgs),
    /// Ghosts of the Gauss pattern explained by divisors of N + k.
    MineNeighbors(MineArgs),
    /// Complete-sum limits of fractional parts p/q above the threshold level.
    Thresholds(ThresholdArgs),
}

#[derive(Args, Debug)]
pub struct Phase {
    /// Power j of the phase m^j.
    #[arg(long, default_value_t = 2, conflicts_with = "self_power")]
    j: u32,
    /// Use the phase m^m instead of a power.
    #[arg(long)]
    self_power: bool,
}

impl Phase {
    fn kind(&self) -> Result<PhaseKind, Failure> {
        if self.self_power {
            Ok(PhaseKind::SelfPower)
        } else if self.j == 0 {
            Err(Failure::Usage("--j must be >= 1".into()))
        } else {
            Ok(PhaseKind::Power(self.j))
        }
    }
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[command(flatten)]
    phase: Phase,
}

#[derive(Args, Debug)]
pub struct GhostArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 2)]
    m_min: u64,
    #[arg(long, default_value_t = 20)]
    m_max: u64,
    #[arg(long, default_value_t = 2)]
    j: u32,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1_000)]
    n_lo: u64,
    #[arg(long, default_value_t = 1_000_000_000)]
    n_hi: u64,
    #[arg(long, default_value_t = 0.7)]
    xi: f64,
    #[command(flatten)]
    phase: Phase,
}

#[derive(Args, Debug)]
pub struct MineArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 5)]
    k_max: u64,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4])]
    j: Vec<u32>,
    /// Largest denominator q.
    #[arg(long, default_value_t = 50)]
    q_max: u64,
    /// Scan m^m instead of the listed powers.
    #[arg(long)]
    self_power: bool,
}

pub fn run(cmd: FactorCmd, seed: u64) -> Result<Report, Failure> {
    match cmd {
        FactorCmd::Pattern(args) => pattern(&args),
        FactorCmd::Ghosts(args) => ghosts(&args),
        FactorCmd::Scaling(args) => scaling(&args, seed),
        FactorCmd::MineNeighbors(args) => mine(&args),
        FactorCmd::Thresholds(args) => thresholds(&args),
    }
}

fn pattern(args: &PatternArgs) -> Result<Report, Failure> {
    let cfg = ExpSumConfig::new(args.n, args.m, args.phase.kind()?)?;
    let records = factorization_pattern(&cfg)?;
    let mut csv = Csv::new(&["ell", "signal", "p", "q", "class"]);
    let mut counts = [0usize; 4];
    for r in &records {
        counts[r.class as usize] += 1;
        csv.row(&[
            r.ell.to_string(),
            g12(r.signal),
            r.frac.p.to_string(),
            r.frac.q.to_string(),
            r.class.as_str().into(),
        ]);
    }
    let names = [
        TrialFactorClass::Factor,
        TrialFactorClass::Threshold,
        TrialFactorClass::Ghost,
        TrialFactorClass::Typical,
    ];
    let summary = names
        .iter()
        .map(|c| format!("{}={}", c.as_str(), counts[*c as usize]))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Report { csv, summary })
}

fn ghosts(args: &GhostArgs) -> Result<Report, Failure> {
    if args.m_min == 0 || args.m_max < args.m_min {
        return Err(Failure::Usage("need 1 <= --m-min <= --m-max".into()));
    }
    let mut csv = Csv::new(&["M", "ghost_count", "estimate"]);
    let mut first_zero = None;
    for m in args.m_min..=args.m_max {
        let count = ghost_count(args.n, m, args.j)?;
        if count == 0 && first_zero.is_none() {
            first_zero = Some(m);
        }
        csv.row(&[m.to_string(), count.to_string(), g12(ghost_estimate(args.n, m)?)]);
    }
    let summary = match first_zero {
        Some(m) => format!("first ghost-free M={m}"),
        None => format!("ghosts persist up to M={}", args.m_max),
    };
    Ok(Report { csv, summary })
}

fn scaling(args: &ScalingArgs, seed: u64) -> Result<Report, Failure> {
    let phase = args.phase.kind()?;
    let rows = scaling_experiment(args.samples, args.n_lo, args.n_hi, args.xi, phase, seed)?;
    let mut csv = Csv::new(&["N", "M_min", "phase", "xi", "seed"]);
    for r in &rows {
        csv.row(&[r.n.to_string(), r.m_min.to_string(), r.phase.label(), g12(r.xi), r.seed.to_string()]);
    }
    let summary = match scaling_fit(&rows) {
        Ok((slope, intercept)) => format!("slope={} intercept={}", g12(slope), g12(intercept)),
        Err(e) => format!("no fit: {e}"),
    };
    Ok(Report { csv, summary })
}

fn mine(args: &MineArgs) -> Result<Report, Failure> {
    let found = neighbor_factor_mining(args.n, args.m, args.k_max)?;
    let mut csv = Csv::new(&["k", "ell", "gamma"]);
    let mut total = 0;
    let cfg = ExpSumConfig::new(args.n, args.m, PhaseKind::Power(2))?;
    for (k, ells) in &found {
        for ell in ells {
            let signal = exp_sum(&cfg, *ell)?.norm();
            csv.row(&[k.to_string(), ell.to_string(), g12(signal)]);
            total += 1;
        }
    }
    Ok(Report {
        csv,
        summary: format!("explained_ghosts={total} shifts={}", found.len()),
    })
}

fn thresholds(args: &ThresholdArgs) -> Result<Report, Failure> {
    if args.q_max < 2 {
        return Err(Failure::Usage("--q-max must be >= 2".into()));
    }
    let phases: Vec<PhaseKind> = if args.self_power {
        vec![PhaseKind::SelfPower]
    } else {
        if args.j.contains(&0) {
            return Err(Failure::Usage("--j must be >= 1".into()));
        }
        args.j.iter().map(|&j| PhaseKind::Power(j)).collect()
    };
    let mut csv = Csv::new(&["phase", "p", "q", "limit", "period"]);
    let mut best = (0.0, String::new());
    for &phase in &phases {
        for q in 2..=args.q_max {
            for p in 1..q {
                if gcd(p, q) != 1 {
                    continue;
                }
                let frac = FractionalPart {
                    p: p as i64,
                    q,
                    convention: Convention::General,
                };
                let cs = complete_sum(&frac, phase)?;
                if cs.limit > XI_T {
                    if cs.limit > best.0 {
                        best = (cs.limit, format!("{} {p}/{q}", phase.label()));
                    }
                    csv.row(&[phase.label(), p.to_string(), q.to_string(), g12(cs.limit), cs.period.to_string()]);
                }
            }
        }
    }
    Ok(Report {
        csv,
        summary: format!("largest limit={} ({})", g12(best.0), best.1),
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
