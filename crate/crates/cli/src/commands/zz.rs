use floqmap::floquet::{dynamic_zz_ramp, FloquetOptions};
use floqmap::model::{CouplingForm, SystemSpec};
use floqmap::statics::{static_zz, ZzMethod};
use floqmap::units::{ghz, mhz, to_ghz, to_khz, to_mhz};
use rayon::prelude::*;

use crate::common::{grid, load, ConfigArg};
use crate::output::{col, Cell, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Lowest coupler frequency, GHz.
    #[arg(long, requires = "coupler_max_ghz")]
    pub coupler_min_ghz: Option<f64>,
    /// Highest coupler frequency, GHz.
    #[arg(long, requires = "coupler_min_ghz")]
    pub coupler_max_ghz: Option<f64>,
    #[arg(long, default_value_t = 51)]
    pub points: usize,
    /// Rotating-wave coupling operator in the perturbation sums.
    #[arg(long)]
    pub rwa: bool,
    /// Dynamic ZZ of the configured drive along an amplitude ramp instead.
    #[arg(long)]
    pub dynamic: bool,
    /// Ramp end for --dynamic, MHz; defaults to the configured amplitude.
    #[arg(long)]
    pub eps_mhz: Option<f64>,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
}

fn row(system: &SystemSpec, form: CouplingForm) -> Result<[f64; 4], floqmap::Error> {
    let p = |order| static_zz(system, ZzMethod::Perturbative { order, form });
    Ok([static_zz(system, ZzMethod::Exact)?, p(2)?, p(3)?, p(4)?])
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    if args.dynamic {
        return dynamic(args, &loaded, sink);
    }
    let form = if args.rwa { CouplingForm::Rwa } else { CouplingForm::Full };
    let coupler = system.couplers().first().map(|&c| system.modes()[c].clone());
    let points: Vec<(Option<f64>, SystemSpec)> = match (args.coupler_min_ghz, args.coupler_max_ghz, &coupler) {
        (Some(lo), Some(hi), Some(c)) => grid(lo, hi, args.points)?
            .into_iter()
            .map(|f| Ok((Some(f), system.with_frequency(&c.label, ghz(f))?)))
            .collect::<Result<_, floqmap::Error>>()?,
        (Some(_), _, None) => return Err(CliError::Usage("coupler sweep needs a coupler mode".into())),
        _ => vec![(coupler.as_ref().map(|c| to_ghz(c.frequency)), system.clone())],
    };
    let values = points
        .par_iter()
        .map(|(_, s)| row(s, form))
        .collect::<Result<Vec<_>, floqmap::Error>>()?;
    let mut t = Table::new(
        "zz",
        vec![
            col("omega_c_GHz", "GHz"),
            col("zz_exact_kHz", "kHz"),
            col("zz_pert2_kHz", "kHz"),
            col("zz_pert3_kHz", "kHz"),
            col("zz_pert4_kHz", "kHz"),
        ],
    );
    for ((f, _), v) in points.iter().zip(values) {
        let mut r = vec![Cell::from(*f)];
        r.extend(v.iter().map(|z| Cell::from(to_khz(*z))));
        t.push(r);
    }
    sink.table(&t, true)
}

fn dynamic(args: &Args, loaded: &crate::common::Loaded, sink: &Sink) -> Result<(), CliError> {
    let drive = loaded.drive(None)?;
    let end = args.eps_mhz.map_or(drive.amplitude, mhz);
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    let ramp: Vec<f64> = (1..=args.steps).map(|k| end * k as f64 / args.steps as f64).collect();
    let out = dynamic_zz_ramp(&loaded.system, &drive, &ramp, &FloquetOptions::default())?;
    let mut t = Table::new(
        "zz_dynamic",
        vec![col("eps_MHz", "MHz"), col("zz_dynamic_kHz", "kHz"), col("zz_static_kHz", "kHz")],
    );
    for (a, z) in out.amplitudes.iter().zip(&out.zz) {
        t.push(vec![to_mhz(*a).into(), to_khz(*z).into(), to_khz(out.static_zz).into()]);
    }
    sink.table(&t, true)
}
