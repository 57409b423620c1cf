use std::fmt::Write;

use super::constraints::{ConstraintKind, ConstraintSet};
use super::expr::Affine;
use super::problem::AllocationProblem;
use crate::units::to_mhz;

fn num(x: f64) -> String {
    let s = format!("{:.9}", x.abs());
    if x < 0.0 {
        format!("(- {s})")
    } else {
        s
    }
}

fn term(a: &Affine, names: &[String]) -> String {
    // the affine form maps rad/s to rad/s; in MHz the coefficients carry over
    let mut parts = vec![num(to_mhz(a.constant))];
    for (k, c) in a.coefficients.iter().enumerate() {
        if *c != 0.0 {
            parts.push(if *c == 1.0 {
                names[k].clone()
            } else {
                format!("(* {} {})", num(*c), names[k])
            });
        }
    }
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

/// SMT-LIB (QF_LRA) text of the bare-stage constraint system. Quantities
/// are ordinary frequencies in MHz; strengths enter as constants evaluated
/// at the template.
pub fn export_smt(problem: &AllocationProblem, set: &ConstraintSet) -> String {
    let nv = problem.variables.len();
    let names: Vec<String> = (0..set.width)
        .map(|k| {
            if k < nv {
                format!("|{}|", problem.variable_name(k))
            } else {
                format!("|{}|", problem.drive_name(k - nv))
            }
        })
        .collect();
    let mut out = String::new();
    let _ = writeln!(out, "; frequency allocation, values in MHz (f = omega/2pi)");
    let _ = writeln!(out, "; margin {}", problem.margin);
    let _ = writeln!(out, "(set-logic QF_LRA)");
    for n in &names {
        let _ = writeln!(out, "(declare-fun {n} () Real)");
    }
    let template = problem.template.clone();
    let entries = problem.catalog(&template).unwrap_or_default();
    let wp0: Vec<f64> = problem
        .targets
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let row = &set.catalog[set.target_rows[k]];
            (-(template.bare_energy(&row.bra) - template.bare_energy(&row.ket)) / t.harmonic as f64).abs()
        })
        .collect();
    for c in &set.constraints {
        let lhs = term(&c.lhs, &names);
        let _ = writeln!(out, "; {}", c.label);
        match c.kind {
            ConstraintKind::ResonanceEquality => {
                let _ = writeln!(out, "(assert (= {lhs} 0.0))");
            }
            ConstraintKind::ParametricLimit | ConstraintKind::DetuningMargin => {
                let g = c.fixed_strength.or_else(|| {
                    super::constraints::row_strength(problem, set, c, &template, &entries, &wp0).ok()
                });
                match g {
                    Some(g) => {
                        let need = num(to_mhz(problem.margin * g));
                        if c.kind == ConstraintKind::ParametricLimit {
                            let _ = writeln!(out, "(assert (>= {lhs} {need}))");
                        } else {
                            let _ = writeln!(out, "(assert (or (>= {lhs} {need}) (<= {lhs} (- {need}))))");
                        }
                    }
                    None => {
                        let _ = writeln!(out, "; strength not evaluable at the template; row omitted");
                    }
                }
            }
            ConstraintKind::ZzCap => {
                let _ = writeln!(out, "; nonlinear in the variables; checked outside the solver");
            }
            ConstraintKind::BoxBound => {
                let v = &problem.variables[c.variable.expect("box rows carry a variable")];
                let _ = writeln!(out, "(assert (and (>= {lhs} {}) (<= {lhs} {})))", num(to_mhz(v.lo)), num(to_mhz(v.hi)));
            }
        }
    }
    let _ = writeln!(out, "(check-sat)");
    let _ = writeln!(out, "(get-model)");
    out
}
