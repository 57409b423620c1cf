use floqmap::units::to_mhz;

use crate::common::{full_catalog, load, ConfigArg};
use crate::output::{col, text, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    /// Leave out counter-rotating transitions.
    #[arg(long)]
    pub no_counter: bool,
    /// Bare-energy detunings instead of dressed ones.
    #[arg(long)]
    pub bare: bool,
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let entries = full_catalog(&loaded.system, !args.no_counter, args.bare)?;
    let mut t = Table::new(
        "catalog",
        vec![
            text("bra"),
            text("ket"),
            text("class"),
            text("channel"),
            col("C", "dimensionless"),
            col("detuning_MHz", "MHz"),
            col("base_strength_MHz", "MHz"),
        ],
    );
    for e in &entries {
        t.push(vec![
            e.bra.compact().into(),
            e.ket.compact().into(),
            e.rotating.to_string().into(),
            e.channel.to_string().into(),
            e.level_coefficient.into(),
            to_mhz(e.detuning).into(),
            to_mhz(e.base_strength).into(),
        ]);
    }
    sink.table(&t, true)
}
