use floqmap::floquet::{max_collision_angle_landscape, FloquetOptions, LandscapePoint};
use floqmap::units::{mhz, to_mhz};
use rayon::prelude::*;

use crate::common::{find_entry, full_catalog, grid, load, parse_pair, AmplitudeArgs, ConfigArg, Scheme};
use crate::output::{col, text, Cell, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Lowest drive frequency, MHz.
    #[arg(long)]
    pub fmin: f64,
    /// Highest drive frequency, MHz.
    #[arg(long)]
    pub fmax: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub amplitude: AmplitudeArgs,
    /// Which mode carries the drive; defaults to the configured drive.
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// `all` or a comma list such as 01-10,02-11.
    #[arg(long, default_value = "all")]
    pub transitions: String,
    /// Time samples per period for the harmonic decomposition.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    let drive = loaded.drive(args.scheme)?;
    let rule = args.amplitude.rule(&drive);
    let catalog = full_catalog(system, true, false)?;
    let entries = if args.transitions == "all" {
        catalog
    } else {
        args.transitions
            .split(',')
            .map(|p| Ok(find_entry(&catalog, &parse_pair(p)?)?.clone()))
            .collect::<Result<Vec<_>, CliError>>()?
    };
    let freqs: Vec<f64> = grid(args.fmin, args.fmax, args.points)?.into_iter().map(mhz).collect();
    if freqs.iter().any(|&w| w <= 0.0) {
        return Err(CliError::Usage("drive frequencies must be positive".into()));
    }
    let opts = FloquetOptions::default();
    let points: Vec<LandscapePoint> = freqs
        .par_iter()
        .map(|&w| {
            let l = max_collision_angle_landscape(system, &drive, rule, &[w], &entries, args.samples, &opts)?;
            Ok(l.points.into_iter().next().expect("one point"))
        })
        .collect::<Result<Vec<_>, floqmap::Error>>()?;

    let mut summary = Table::new(
        "landscape",
        vec![
            col("fp_MHz", "MHz"),
            col("max_theta_rad", "rad"),
            text("argmax_bra"),
            text("argmax_ket"),
        ],
    );
    let mut detail = Table::new(
        "landscape_angles",
        vec![
            col("fp_MHz", "MHz"),
            text("bra"),
            text("ket"),
            col("harmonic", "dimensionless"),
            col("theta_rad", "rad"),
        ],
    );
    for p in &points {
        let f = to_mhz(p.frequency);
        match p.max() {
            Some((i, th)) => summary.push(vec![
                f.into(),
                th.into(),
                entries[i].bra.compact().into(),
                entries[i].ket.compact().into(),
            ]),
            None => summary.push(vec![f.into(), Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        for (i, e) in entries.iter().enumerate() {
            detail.push(vec![
                f.into(),
                e.bra.compact().into(),
                e.ket.compact().into(),
                p.harmonics[i].map_or(Cell::Empty, Cell::from),
                p.angles[i].into(),
            ]);
        }
        if let Some(err) = &p.error {
            eprintln!("warning: {:.6} MHz: {err}", f);
        }
    }
    sink.table(&summary, true)?;
    sink.table(&detail, false)
}
