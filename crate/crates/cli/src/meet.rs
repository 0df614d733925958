use clap::{Args, Subcommand, ValueEnum};
use qwalk::lattice::CoinState;
use qwalk::two_particle::{
    classical_meeting_series, coin_l, coin_r, coin_symmetric, meeting_series, overall_meeting,
    BellKind, MeetingSeries, PairInit, ProductKind,
};

use crate::out::{g12, Csv};
use crate::{Failure, Report};

#[derive(Subcommand, Debug)]
pub enum MeetCmd {
    /// M(t) for one initial condition.
    Series(SeriesArgs),
    /// Overall meeting probability for every initial condition.
    Overall(OverallArgs),
    /// Overall meeting probability against the half-separation d.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitChoice {
    ProductRl,
    ProductLr,
    ProductSym,
    BellPsiPlus,
    BellPsiMinus,
    BellPhiPlus,
    BellPhiMinus,
    Boson,
    Fermion,
    Classical,
}

const ALL: [InitChoice; 10] = [
    InitChoice::ProductRl,
    InitChoice::ProductLr,
    InitChoice::ProductSym,
    InitChoice::BellPsiPlus,
    InitChoice::BellPsiMinus,
    InitChoice::BellPhiPlus,
    InitChoice::BellPhiMinus,
    InitChoice::Boson,
    InitChoice::Fermion,
    InitChoice::Classical,
];

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long, value_enum, default_value = "product-rl")]
    init: InitChoice,
    /// Coin states of the two walkers for boson and fermion runs, each of L, R, S.
    #[arg(long, default_value = "RL")]
    coins: String,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 0)]
    d: u32,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

#[derive(Args, Debug)]
pub struct OverallArgs {
    #[arg(long, default_value = "RL")]
    coins: String,
    #[arg(long, default_value_t = 0)]
    d: u32,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 10)]
    d_max: u32,
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

fn coin(ch: char) -> Result<CoinState, Failure> {
    match ch.to_ascii_uppercase() {
        'L' => Ok(coin_l()),
        'R' => Ok(coin_r()),
        'S' => Ok(coin_symmetric()),
        other => Err(Failure::Usage(format!("unknown coin state '{other}', use L, R or S"))),
    }
}

fn coins(spec: &str) -> Result<(CoinState, CoinState), Failure> {
    let chars: Vec<char> = spec.chars().collect();
    if chars.len() != 2 {
        return Err(Failure::Usage(format!("--coins needs two letters, got '{spec}'")));
    }
    Ok((coin(chars[0])?, coin(chars[1])?))
}

fn label(init: InitChoice) -> String {
    init.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn series(init: InitChoice, coin_spec: &str, d: u32, steps: usize) -> Result<MeetingSeries, Failure> {
    if steps == 0 {
        return Err(Failure::Usage("--steps must be >= 1".into()));
    }
    let pair = match init {
        InitChoice::Classical => return Ok(classical_meeting_series(steps as u64, d as u64)?),
        InitChoice::ProductRl => PairInit::Product(ProductKind::RL),
        InitChoice::ProductLr => PairInit::Product(ProductKind::LR),
        InitChoice::ProductSym => PairInit::Product(ProductKind::Symmetric),
        InitChoice::BellPsiPlus => PairInit::Bell(BellKind::PsiPlus),
        InitChoice::BellPsiMinus => PairInit::Bell(BellKind::PsiMinus),
        InitChoice::BellPhiPlus => PairInit::Bell(BellKind::PhiPlus),
        InitChoice::BellPhiMinus => PairInit::Bell(BellKind::PhiMinus),
        InitChoice::Boson => {
            let (a, b) = coins(coin_spec)?;
            PairInit::Boson(a, b)
        }
        InitChoice::Fermion => {
            let (a, b) = coins(coin_spec)?;
            PairInit::Fermion(a, b)
        }
    };
    Ok(meeting_series(steps, d, &pair)?)
}

pub fn run(cmd: MeetCmd) -> Result<Report, Failure> {
    match cmd {
        MeetCmd::Series(args) => {
            let s = series(args.pair.init, &args.pair.coins, args.d, args.steps)?;
            let mut csv = Csv::new(&["t", "M", "M_times_t"]);
            for (i, m) in s.values.iter().enumerate() {
                let t = i + 1;
                csv.row(&[t.to_string(), g12(*m), g12(m * t as f64)]);
            }
            let overall = overall_meeting(&s)?;
            Ok(Report {
                csv,
                summary: format!("{} overall_meeting={}", label(args.pair.init), g12(overall)),
            })
        }
        MeetCmd::Overall(args) => {
            let mut csv = Csv::new(&["init", "d", "steps", "overall"]);
            let mut best = (String::new(), -1.0);
            for init in ALL {
                let v = overall_meeting(&series(init, &args.coins, args.d, args.steps)?)?;
                if v > best.1 {
                    best = (label(init), v);
                }
                csv.row(&[label(init), args.d.to_string(), args.steps.to_string(), g12(v)]);
            }
            Ok(Report {
                csv,
                summary: format!("largest overall_meeting={} ({})", g12(best.1), best.0),
            })
        }
        MeetCmd::Sweep(args) => {
            let mut csv = Csv::new(&["d", "overall"]);
            let mut values = Vec::new();
            for d in 0..=args.d_max {
                let v = overall_meeting(&series(args.pair.init, &args.pair.coins, d, args.steps)?)?;
                csv.row(&[d.to_string(), g12(v)]);
                values.push(v);
            }
            Ok(Report {
                csv,
                summary: format!(
                    "{} overall_meeting d=0: {} d={}: {}",
                    label(args.pair.init),
                    g12(values[0]),
                    args.d_max,
                    g12(*values.last().expect("d = 0 present"))
                ),
            })
        }
    }
}
