use clap::ValueEnum;
use floqmap::errors::{per_harmonic_breakdown, population_error, target_resonance, BudgetOptions, DetuningModel, Pulse};
use floqmap::sidebands::Rotating;
use floqmap::units::{mhz, to_mhz};
use serde_json::json;

use crate::common::{find_entry, full_catalog, load, parse_pair, AmplitudeArgs, ConfigArg, Scheme};
use crate::output::{col, text, Sink, Table};
use crate::CliError;

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum PulseArg {
    Pi,
    HalfPi,
    TwoPi,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Target transition, e.g. 01-10.
    #[arg(long)]
    pub target: String,
    /// Sideband order of the target; resonance sits at detuning + n·fp = 0.
    #[arg(long, allow_negative_numbers = true)]
    pub harmonic: i32,
    /// Drive frequency, MHz; defaults to the target resonance.
    #[arg(long)]
    pub fp: Option<f64>,
    #[command(flatten)]
    pub amplitude: AmplitudeArgs,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long, value_enum, default_value = "pi")]
    pub pulse: PulseArg,
    /// Harmonics |n| up to this are summed.
    #[arg(long, default_value_t = 15)]
    pub harmonics: i32,
    /// Bare-energy detunings instead of dressed ones.
    #[arg(long)]
    pub bare: bool,
    /// Amplitude ratio seen by transitions away from the driven mode.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
    /// Leave out counter-rotating transitions.
    #[arg(long)]
    pub no_counter: bool,
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    let template = loaded.drive(args.scheme)?;
    let rule = args.amplitude.rule(&template);
    let opts = BudgetOptions {
        harmonics: args.harmonics,
        pulse: match args.pulse {
            PulseArg::Pi => Pulse::Pi,
            PulseArg::HalfPi => Pulse::HalfPi,
            PulseArg::TwoPi => Pulse::TwoPi,
        },
        detunings: if args.bare { DetuningModel::Bare } else { DetuningModel::Dressed },
        indirect_ratio: args.kappa,
        ..Default::default()
    };
    let entries = full_catalog(system, !args.no_counter, args.bare)?;
    let target = find_entry(&entries, &parse_pair(&args.target)?)?.clone();
    let drive = match args.fp {
        Some(f) => rule.drive(&template, mhz(f)),
        None => {
            // the Stark shift follows ε, which may follow ω_p
            let mut d = template.clone();
            for _ in 0..8 {
                let w = target_resonance(system, &d, &target, args.harmonic, &opts)?;
                d = rule.drive(&template, w);
            }
            d
        }
    };
    let budget = population_error(system, &entries, &target, args.harmonic, &drive, &opts)?;
    let harmonics = per_harmonic_breakdown(&budget);

    let mut contributions = Table::new(
        "error_budget_contributions",
        vec![
            text("transition"),
            text("class"),
            text("channel"),
            col("harmonic", "dimensionless"),
            col("strength_MHz", "MHz"),
            col("detuning_MHz", "MHz"),
            col("error", "dimensionless"),
            col("bound", "dimensionless"),
        ],
    );
    for c in &budget.contributions {
        contributions.push(vec![
            c.transition.clone().into(),
            c.rotating.to_string().into(),
            c.channel.to_string().into(),
            c.harmonic.into(),
            to_mhz(c.strength).into(),
            to_mhz(c.detuning).into(),
            c.error.into(),
            c.bound.into(),
        ]);
    }
    let mut summary = Table::new(
        "error_budget",
        vec![text("transition"), col("error", "dimensionless"), col("bound", "dimensionless")],
    );
    for (label, (e, b)) in budget.per_transition() {
        summary.push(vec![label.into(), e.into(), b.into()]);
    }
    summary.push(vec!["total".into(), budget.total_error.into(), budget.total_bound.into()]);
    let mut by_harmonic = Table::new(
        "error_budget_harmonics",
        vec![
            col("harmonic", "dimensionless"),
            col("error", "dimensionless"),
            col("bound", "dimensionless"),
            text("dominant"),
        ],
    );
    for (n, s) in &harmonics {
        by_harmonic.push(vec![(*n).into(), s.error.into(), s.bound.into(), s.dominant.clone().into()]);
    }

    let (co, co_b) = budget.total_for(Rotating::Co);
    let (counter, counter_b) = budget.total_for(Rotating::Counter);
    let full = json!({
        "units": {"frequency": "MHz", "strength": "MHz", "detuning": "MHz", "duration": "ns", "error": "dimensionless"},
        "target": target.label(),
        "target_harmonic": args.harmonic,
        "drive": {"target": drive.target, "fp_MHz": to_mhz(drive.frequency), "eps_MHz": to_mhz(drive.amplitude)},
        "target_strength_MHz": to_mhz(budget.target_strength),
        "duration_ns": budget.duration * 1e9,
        "total_error": budget.total_error,
        "total_bound": budget.total_bound,
        "co_rotating": {"error": co, "bound": co_b},
        "counter_rotating": {"error": counter, "bound": counter_b},
        "contributions": contributions.to_json()["rows"].clone(),
        "contribution_columns": contributions.to_json()["columns"].clone(),
    });
    eprintln!(
        "{} n={} at {:.6} MHz: g_t {:.6} MHz, pulse {:.3} ns, P_e {:.4e} (bound {:.4e})",
        target.label(),
        args.harmonic,
        to_mhz(drive.frequency),
        to_mhz(budget.target_strength),
        budget.duration * 1e9,
        budget.total_error,
        budget.total_bound
    );
    sink.table(&summary, true)?;
    sink.table(&contributions, false)?;
    sink.table(&by_harmonic, false)?;
    sink.json("error_budget_full", &full, false)
}
