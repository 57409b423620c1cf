use floqmap::dynamics::{equal_superposition, evolve, fit_generalized_rabi, EvolveOptions, RabiFitOptions, TrackedState, Trajectory};
use floqmap::model::SystemSpec;
use floqmap::statics::exact_dressed_spectrum;
use floqmap::units::{mhz, to_mhz};
use rayon::prelude::*;

use crate::common::{grid, load, AmplitudeArgs, ConfigArg, Scheme};
use crate::output::{col, text, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Initial state(s), comma separated; several give an equal superposition.
    #[arg(long)]
    pub initial: String,
    /// State(s) whose population is recorded, comma separated.
    #[arg(long)]
    pub track: String,
    #[arg(long)]
    pub fmin: f64,
    #[arg(long)]
    pub fmax: f64,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Evolution time, ns.
    #[arg(long, default_value_t = 500.0)]
    pub duration_ns: f64,
    /// Time samples per trace.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub amplitude: AmplitudeArgs,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// Prepare and track bare product states instead of dressed ones.
    #[arg(long)]
    pub bare: bool,
}

pub(crate) fn states(system: &SystemSpec, labels: &str, bare: bool) -> Result<Vec<TrackedState>, CliError> {
    let spectrum = if bare { None } else { Some(exact_dressed_spectrum(system)?) };
    labels
        .split(',')
        .map(|l| {
            let l = l.trim();
            Ok(match &spectrum {
                Some(s) => TrackedState::dressed(s, l)?,
                None => TrackedState::bare(system, l)?,
            })
        })
        .collect()
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    let template = loaded.drive(args.scheme)?;
    let rule = args.amplitude.rule(&template);
    let init = states(system, &args.initial, args.bare)?;
    let track = states(system, &args.track, args.bare)?;
    let psi0 = equal_superposition(&init)?;
    if !(args.duration_ns > 0.0) || args.samples < 2 {
        return Err(CliError::Usage("duration must be positive and samples at least 2".into()));
    }
    let duration = args.duration_ns * 1e-9;
    let freqs: Vec<f64> = grid(args.fmin, args.fmax, args.points)?.into_iter().map(mhz).collect();
    let opts = EvolveOptions::default();
    let runs: Vec<Trajectory> = freqs
        .par_iter()
        .map(|&w| evolve(system, &rule.drive(&template, w), &psi0, duration, args.samples, &track, &opts))
        .collect::<Result<Vec<_>, floqmap::Error>>()?;

    let mut series = Table::new(
        "chevron",
        vec![col("fp_MHz", "MHz"), col("t_ns", "ns"), text("state"), col("population", "dimensionless")],
    );
    let mut fits = Table::new(
        "chevron_fit",
        vec![
            col("fp_MHz", "MHz"),
            text("state"),
            col("gap_MHz", "MHz"),
            col("detuning_MHz", "MHz"),
            col("rabi_MHz", "MHz"),
            col("amplitude", "dimensionless"),
            col("rms", "dimensionless"),
        ],
    );
    for (w, traj) in freqs.iter().zip(&runs) {
        for s in &track {
            let pop = traj.population(&s.label)?;
            for (t, p) in traj.times.iter().zip(pop) {
                series.push(vec![to_mhz(*w).into(), (t * 1e9).into(), s.label.clone().into(), (*p).into()]);
            }
            if let Ok(fit) = fit_generalized_rabi(&traj.times, pop, &RabiFitOptions::default()) {
                fits.push(vec![
                    to_mhz(*w).into(),
                    s.label.clone().into(),
                    to_mhz(fit.gap).into(),
                    to_mhz(fit.detuning).into(),
                    to_mhz(fit.frequency).into(),
                    fit.amplitude.into(),
                    fit.rms.into(),
                ]);
            }
        }
    }
    sink.table(&series, true)?;
    sink.table(&fits, false)
}
