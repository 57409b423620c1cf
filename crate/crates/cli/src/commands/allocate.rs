use std::path::PathBuf;

use clap::ValueEnum;
use floqmap::allocator::{
    encode_constraints, export_smt, floquet_spot_check, refine_encoded, solve_encoded, AllocationProblem,
    AllocationSolution, Objective, ProblemFile, Quantity, SpotCheckOptions,
};
use floqmap::units::{to_ghz, to_khz, to_mhz};
use serde_json::{json, Value};

use crate::output::{col, text, Sink, Table};
use crate::CliError;

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ObjectiveArg {
    None,
    MaxWorstMargin,
    MinBound,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Allocation problem (JSON).
    #[arg(long)]
    pub problem: PathBuf,
    /// Write the bare-stage constraint system as SMT-LIB to this file.
    #[arg(long)]
    pub export_smt: Option<PathBuf>,
    /// Override the objective of the problem file.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveArg>,
    /// Stop after the bare-energy stage.
    #[arg(long)]
    pub no_refine: bool,
    /// Floquet collision-angle check around each drive frequency.
    #[arg(long)]
    pub spot_check: bool,
    /// Largest parasitic angle accepted by the spot check, rad.
    #[arg(long, default_value_t = 0.1)]
    pub max_angle: f64,
}

fn stage_json(problem: &AllocationProblem, s: &AllocationSolution) -> Value {
    let mut assignment = serde_json::Map::new();
    for (k, v) in s.assignment.values.iter().enumerate() {
        let (value, unit) = match problem.variables[k].quantity {
            Quantity::Frequency => (to_ghz(*v), "GHz"),
            Quantity::Anharmonicity => (to_mhz(*v), "MHz"),
        };
        assignment.insert(problem.variable_name(k), json!({"value": value, "unit": unit}));
    }
    let drives: Vec<Value> = problem
        .targets
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let w = s.assignment.drive_frequencies[k];
            json!({
                "name": problem.drive_name(k),
                "target": t.label(),
                "harmonic": t.harmonic,
                "drive": t.drive,
                "fp_MHz": to_mhz(w),
                "eps_MHz": to_mhz(t.amplitude.at(w)),
                "shift_kHz": to_khz(s.drive_shift[k]),
            })
        })
        .collect();
    json!({
        "stage": s.stage,
        "satisfied": s.satisfied,
        "worst_margin": s.worst_margin,
        "boxes": s.boxes,
        "assignment": assignment,
        "drives": drives,
    })
}

fn constraint_table(s: &AllocationSolution) -> Table {
    let mut t = Table::new(
        "allocation_constraints",
        vec![
            text("kind"),
            text("label"),
            col("value_MHz", "MHz"),
            col("required_MHz", "MHz"),
            col("ratio", "dimensionless"),
            text("pass"),
            text("error"),
        ],
    );
    for r in &s.report.rows {
        let kind = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        t.push(vec![
            kind.into(),
            r.label.clone().into(),
            to_mhz(r.value).into(),
            to_mhz(r.required).into(),
            r.ratio.into(),
            r.pass.to_string().into(),
            r.error.clone().unwrap_or_default().into(),
        ]);
    }
    t
}

pub fn run(args: &Args, seed: Option<u64>, sink: &Sink) -> Result<(), CliError> {
    let file = ProblemFile::load(&args.problem).map_err(|e| CliError::Usage(format!("{}: {e}", args.problem.display())))?;
    let mut problem = file
        .problem()
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.problem.display())))?;
    if let Some(s) = seed {
        problem.seed = s;
    }
    if let Some(o) = args.objective {
        problem.objective = match o {
            ObjectiveArg::None => Objective::None,
            ObjectiveArg::MaxWorstMargin => Objective::MaxWorstMargin,
            ObjectiveArg::MinBound => Objective::MinBound,
        };
    }
    let set = encode_constraints(&problem)?;
    if let Some(path) = &args.export_smt {
        std::fs::write(path, export_smt(&problem, &set))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let bare = solve_encoded(&problem, &set)?;
    let last = if args.no_refine { bare.clone() } else { refine_encoded(&problem, &set, &bare)? };
    let spot = if args.spot_check {
        Some(floquet_spot_check(&problem, &set, &last, &SpotCheckOptions::default())?)
    } else {
        None
    };
    let spot_ok = spot.as_ref().map_or(true, |s| s.passes(args.max_angle));
    let families = set.margin_families(&problem);
    let out = json!({
        "units": {"frequency": "GHz", "anharmonicity": "MHz", "fp": "MHz", "shift": "kHz", "angle": "rad"},
        "margin": problem.margin,
        "constraint_rows": set.constraints.len(),
        "margin_families": families,
        "bare": stage_json(&problem, &bare),
        "solution": stage_json(&problem, &last),
        "constraints": constraint_table(&last).to_json(),
        "spot_check": spot.as_ref().map(|s| json!({
            "max_angle_rad": if s.max_angle.is_finite() { json!(s.max_angle) } else { Value::Null },
            "limit_rad": args.max_angle,
            "cross_check_failures": s.cross.iter().filter(|c| !c.pass).count(),
            "pass": spot_ok,
        })),
    });
    sink.json("allocation", &out, true)?;
    sink.table(&constraint_table(&last), false)?;
    if !last.satisfied {
        let rows: Vec<&str> = last.report.violated().map(|r| r.label.as_str()).collect();
        return Err(CliError::Domain(floqmap::Error::Unsatisfiable(format!(
            "dressed refinement leaves {} row(s) violated: {}",
            rows.len(),
            rows.join("; ")
        ))));
    }
    if !spot_ok {
        return Err(CliError::Domain(floqmap::Error::Unsatisfiable(
            "Floquet spot check found a parasitic angle above the limit".into(),
        )));
    }
    Ok(())
}
