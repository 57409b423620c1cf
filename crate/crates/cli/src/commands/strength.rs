use floqmap::sidebands::{coupler_mod_strength, default_taylor_order, qubit_mod_strength, Derivatives};
use floqmap::units::{mhz, to_mhz};

use crate::common::{find_entry, full_catalog, grid, load, parse_pair, ConfigArg, Scheme};
use crate::output::{col, Cell, Column, Sink, Table};
use crate::CliError;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    pub config: ConfigArg,
    #[arg(long, value_enum, default_value = "qubit")]
    pub scheme: Scheme,
    /// Harmonics to tabulate.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1,2")]
    pub n: Vec<i32>,
    /// Largest ε/ω_p (qubit scheme) or ε in MHz (coupler scheme).
    #[arg(long)]
    pub xmax: f64,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
    /// Transition; defaults to the single-excitation exchange of the first two qubits.
    #[arg(long)]
    pub transition: Option<String>,
    /// Taylor order for the coupler scheme; defaults to |n| + 2.
    #[arg(long)]
    pub order: Option<u32>,
}

pub fn run(args: &Args, sink: &Sink) -> Result<(), CliError> {
    let loaded = load(&args.config.config)?;
    let system = &loaded.system;
    if args.n.is_empty() {
        return Err(CliError::Usage("--n needs at least one harmonic".into()));
    }
    let entries = full_catalog(system, false, false)?;
    let entry = match &args.transition {
        Some(p) => find_entry(&entries, &parse_pair(p)?)?,
        None => entries
            .iter()
            .find(|e| e.bra.excitations() == 1 && e.ket.excitations() == 1)
            .ok_or_else(|| CliError::Usage("no single-excitation exchange in the catalog".into()))?,
    };
    let xs = grid(0.0, args.xmax, args.points)?;
    let mut columns: Vec<Column> = vec![match args.scheme {
        Scheme::Qubit => col("eps_over_fp", "dimensionless"),
        Scheme::Coupler => col("eps_MHz", "MHz"),
    }];
    columns.extend(args.n.iter().map(|n| col(&format!("g{n}_MHz"), "MHz")));
    let mut t = Table::new("strength_sweep", columns);
    match args.scheme {
        Scheme::Qubit => {
            for &x in &xs {
                let mut row = vec![Cell::from(x)];
                for &n in &args.n {
                    row.push(to_mhz(qubit_mod_strength(entry.base_strength, n, x, 1.0)?).into());
                }
                t.push(row);
            }
        }
        Scheme::Coupler => {
            let which = entry.effective.ok_or_else(|| {
                CliError::Usage(format!("{} is not carried by a coupler-mediated coupling", entry.label()))
            })?;
            for &x in &xs {
                let mut row = vec![Cell::from(x)];
                for &n in &args.n {
                    let m = n.unsigned_abs();
                    let order = args.order.unwrap_or_else(|| default_taylor_order(m));
                    row.push(match coupler_mod_strength(system, which, m, mhz(x), order, Derivatives::default()) {
                        Ok(g) => to_mhz(g).into(),
                        Err(floqmap::Error::Singularity(_)) => Cell::Empty,
                        Err(e) => return Err(e.into()),
                    });
                }
                t.push(row);
            }
        }
    }
    eprintln!("{} base strength {:.6} MHz", entry.label(), to_mhz(entry.base_strength));
    sink.table(&t, true)
}
