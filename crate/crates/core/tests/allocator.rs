use floqmap::allocator::*;
use floqmap::error::Error;
use floqmap::units::*;
use proptest::prelude::*;
use serde_json::{json, Value};

fn two_qubit() -> Value {
    json!({
        "system": {
            "modes": [
                {"label": "Q1", "freq_GHz": 4.85, "anharm_MHz": -220.0, "levels": 4, "tunable": true},
                {"label": "Q2", "freq_GHz": 5.00, "anharm_MHz": -260.0, "levels": 4, "tunable": false}
            ],
            "couplings": [{"a": "Q1", "b": "Q2", "J_MHz": 5.0}]
        },
        "variables": [
            {"mode": "Q1", "quantity": "frequency", "lo": 4.70, "hi": 4.95},
            {"mode": "Q1", "quantity": "anharmonicity", "lo": -300.0, "hi": -150.0},
            {"mode": "Q2", "quantity": "anharmonicity", "lo": -300.0, "hi": -150.0}
        ],
        "targets": [
            {"bra": "01", "ket": "10", "harmonic": -1, "drive": "Q1", "amplitude_ratio": 1.84}
        ],
        "margin": 10.0,
        "seed": 7
    })
}

fn problem(v: &Value) -> AllocationProblem {
    ProblemFile::parse(&v.to_string()).unwrap().problem().unwrap()
}

fn solved(v: &Value) -> (AllocationProblem, ConstraintSet, AllocationSolution) {
    let p = problem(v);
    let set = encode_constraints(&p).unwrap();
    let sol = solve_encoded(&p, &set).unwrap();
    (p, set, sol)
}

#[test]
fn solution_passes_independent_check() {
    let (p, set, sol) = solved(&two_qubit());
    assert!(sol.satisfied);
    let report = check(&p, &set, &sol.assignment, EnergyModel::Bare).unwrap();
    assert!(report.satisfied);
    assert!(report.rows.iter().all(|r| r.pass));
    assert!(set.count(ConstraintKind::ResonanceEquality) == 1);
    for (v, x) in p.variables.iter().zip(&sol.assignment.values) {
        assert!(*x >= v.lo && *x <= v.hi);
    }
}

#[test]
fn satisfied_at_margin_implies_satisfied_below() {
    let (p, set, sol) = solved(&two_qubit());
    let at = |margin: f64| {
        check_with_margin(&p, &set, &sol.assignment, EnergyModel::Bare, margin)
            .unwrap()
            .satisfied
    };
    assert!(!at(sol.worst_margin * 1.01));
    for margin in [sol.worst_margin * 0.999, 10.0, 5.0, 2.0] {
        assert!(at(margin), "margin {margin} below achieved {}", sol.worst_margin);
    }
}

#[test]
fn same_seed_same_answer() {
    let (_, _, a) = solved(&two_qubit());
    let (_, _, b) = solved(&two_qubit());
    assert_eq!(a.assignment.values, b.assignment.values);
    assert_eq!(a.assignment.drive_frequencies, b.assignment.drive_frequencies);
}

#[test]
fn no_targets_is_trivially_satisfiable() {
    let mut v = two_qubit();
    v["targets"] = json!([]);
    let (_, set, sol) = solved(&v);
    assert!(sol.satisfied);
    assert_eq!(set.count(ConstraintKind::ResonanceEquality), 0);
    assert!(sol.assignment.drive_frequencies.is_empty());
}

#[test]
fn unreachable_margin_is_unsatisfiable() {
    let mut v = two_qubit();
    v["margin"] = json!(1e9);
    let p = problem(&v);
    let set = encode_constraints(&p).unwrap();
    assert!(matches!(solve_encoded(&p, &set), Err(Error::Unsatisfiable(_))));
}

#[test]
fn empty_box_is_rejected() {
    let mut v = two_qubit();
    v["variables"][0]["lo"] = json!(5.0);
    v["variables"][0]["hi"] = json!(4.8);
    let file = ProblemFile::parse(&v.to_string()).unwrap();
    assert!(matches!(file.problem(), Err(Error::InvalidArgument(_))));
}

#[test]
fn detuned_drive_fails_resonance_row() {
    let (p, set, mut sol) = solved(&two_qubit());
    sol.assignment.drive_frequencies[0] += mhz(1.0);
    let report = check(&p, &set, &sol.assignment, EnergyModel::Bare).unwrap();
    assert!(!report.satisfied);
    assert!(report
        .violated()
        .any(|r| r.kind == ConstraintKind::ResonanceEquality));
}

#[test]
fn weak_coupling_refinement_barely_moves_the_drive() {
    let mut v = two_qubit();
    v["system"]["couplings"][0]["J_MHz"] = json!(0.1);
    let (p, set, sol) = solved(&v);
    let refined = refine_encoded(&p, &set, &sol).unwrap();
    assert!(refined.satisfied);
    for s in &refined.drive_shift {
        assert!(s.abs() < khz(1.0), "shift {} kHz", to_khz(*s));
    }
}

#[test]
fn refinement_is_idempotent() {
    let (p, set, sol) = solved(&two_qubit());
    let once = refine_encoded(&p, &set, &sol).unwrap();
    let twice = refine_encoded(&p, &set, &once).unwrap();
    for (a, b) in once.assignment.extended().iter().zip(twice.assignment.extended()) {
        assert!((a - b).abs() < 1e-6 * a.abs().max(1.0));
    }
}

#[test]
fn smt_export_lists_every_variable() {
    let p = problem(&two_qubit());
    let set = encode_constraints(&p).unwrap();
    let text = export_smt(&p, &set);
    for k in 0..p.variables.len() {
        assert!(text.contains(&p.variable_name(k)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_boxes_give_verified_points(lo in 4.6f64..4.8, width in 0.05f64..0.2, margin in 3.0f64..12.0) {
        let mut v = two_qubit();
        v["variables"][0]["lo"] = json!(lo);
        v["variables"][0]["hi"] = json!(lo + width);
        v["margin"] = json!(margin);
        let p = problem(&v);
        let set = encode_constraints(&p).unwrap();
        match solve_encoded(&p, &set) {
            Ok(sol) => {
                let r = check(&p, &set, &sol.assignment, EnergyModel::Bare).unwrap();
                prop_assert!(r.satisfied);
                prop_assert!(r.worst_margin >= margin * (1.0 - 1e-9));
            }
            Err(Error::Unsatisfiable(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
