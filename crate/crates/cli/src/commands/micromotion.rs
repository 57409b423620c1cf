use floqmap::dynamics::{check_aliasing, compare_peaks, micromotion_spectrum, sideband_lines, MicromotionOptions};
use floqmap::units::to_mhz;

use crate::common::{full_catalog, load, ConfigArg};
use crate::output::{col, text, Cell, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Initial states, comma separated (equal superposition).
    #[arg(long)]
    pub initial: String,
    /// Tracked states, comma separated.
    #[arg(long)]
    pub track: String,
    #[arg(long, default_value_t = 500.0)]
    pub duration_ns: f64,
    #[arg(long, default_value_t = 20000)]
    pub samples: usize,
    /// Peak floor relative to the largest bin.
    #[arg(long, default_value_t = 1e-4)]
    pub floor: f64,
    /// Ignore peaks above this frequency, MHz.
    #[arg(long)]
    pub max_mhz: Option<f64>,
    /// Harmonic range of the predicted lines.
    #[arg(long, default_value_t = 15)]
    pub harmonics: i32,
    /// Bare product states instead of dressed ones.
    #[arg(long)]
    pub bare: bool,
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    let drive = loaded.drive(None)?;
    if !(args.duration_ns > 0.0) || args.samples < 4 {
        return Err(CliError::Usage("duration must be positive and samples at least 4".into()));
    }
    let duration = args.duration_ns * 1e-9;
    let opts = MicromotionOptions {
        floor: args.floor,
        dressed: !args.bare,
        max_frequency_hz: args.max_mhz.map(|f| f * 1e6),
        ..Default::default()
    };
    let initial: Vec<&str> = args.initial.split(',').map(str::trim).collect();
    let tracked: Vec<&str> = args.track.split(',').map(str::trim).collect();
    let entries = full_catalog(system, true, args.bare)?;
    let lines = sideband_lines(&entries, drive.frequency, args.harmonics);
    if let Err(e) = check_aliasing(&lines, duration / args.samples as f64) {
        eprintln!("warning: {e}");
    }
    let reports = micromotion_spectrum(system, &drive, &initial, duration, args.samples, &tracked, &opts)?;

    let mut peaks = Table::new(
        "micromotion_peaks",
        vec![
            text("state"),
            col("peak_MHz", "MHz"),
            col("amplitude", "dimensionless"),
            text("transition"),
            col("harmonic", "dimensionless"),
            col("line_MHz", "MHz"),
            col("distance_MHz", "MHz"),
        ],
    );
    let mut spectrum = Table::new(
        "micromotion_spectrum",
        vec![text("state"), col("f_MHz", "MHz"), col("amplitude", "dimensionless")],
    );
    for r in &reports {
        for m in compare_peaks(&r.peaks, &lines) {
            let (tr, n, f) = match &m.nearest {
                Some(l) => (Cell::from(l.transition.clone()), Cell::from(l.harmonic), Cell::from(l.frequency_hz * 1e-6)),
                None => (Cell::Empty, Cell::Empty, Cell::Empty),
            };
            peaks.push(vec![
                r.label.clone().into(),
                (m.peak.frequency_hz * 1e-6).into(),
                m.peak.amplitude.into(),
                tr,
                n,
                f,
                (m.distance_hz * 1e-6).into(),
            ]);
        }
        for (k, a) in r.spectrum.amplitudes.iter().enumerate() {
            spectrum.push(vec![r.label.clone().into(), (r.spectrum.frequency(k) * 1e-6).into(), (*a).into()]);
        }
    }
    eprintln!(
        "drive {:.3} MHz, resolution {:.4} MHz",
        to_mhz(drive.frequency),
        reports.first().map_or(0.0, |r| r.spectrum.resolution_hz * 1e-6)
    );
    sink.table(&peaks, true)?;
    sink.table(&spectrum, false)
}
