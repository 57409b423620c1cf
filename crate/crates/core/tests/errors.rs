use floqmap::errors::*;
use floqmap::model::*;
use floqmap::sidebands::{catalog, find_transition, CatalogOptions, DetuningSource, Rotating, TransitionEntry};
use floqmap::units::*;
use proptest::prelude::*;

fn entries(sys: &SystemSpec) -> Vec<TransitionEntry> {
    catalog(
        sys,
        CatalogOptions {
            detunings: DetuningSource::Dressed,
            include_counter: true,
            ..CatalogOptions::qubit_qubit()
        },
    )
    .unwrap()
}

fn budget(sys: &SystemSpec, opts: &BudgetOptions) -> ErrorBudget {
    let e = entries(sys);
    let target = find_transition(&e, "01", "10").unwrap();
    let w = target_resonance(sys, &DriveSpec::new("Q1", 0.0, mhz(100.0)), target, -1, opts).unwrap();
    population_error(sys, &e, target, -1, &DriveSpec::new("Q1", 1.84 * w, w), opts).unwrap()
}

#[test]
fn half_bound_when_gap_equals_detuning() {
    let g = mhz(1.0);
    let (_, bound) = channel_error(g, 2.0 * g, 1e-6);
    assert!((bound - 0.5).abs() < 1e-15);
    assert_eq!(channel_error(0.0, 0.0, 1.0), (0.0, 0.0));
}

#[test]
fn budget_partitions_exactly() {
    let b = budget(&presets::two_qubit(), &BudgetOptions::default());
    assert!(!b.contributions.is_empty());
    let harmonics = per_harmonic_breakdown(&b);
    let sum_h: f64 = harmonics.values().map(|s| s.error).sum();
    let sum_t: f64 = b.per_transition().values().map(|v| v.0).sum();
    let sum_c: f64 = b.per_channel().values().map(|v| v.0).sum();
    let sum_r = b.total_for(Rotating::Co).0 + b.total_for(Rotating::Counter).0;
    for s in [sum_h, sum_t, sum_c, sum_r] {
        assert!((s - b.total_error).abs() <= 1e-12 * b.total_error);
    }
    for c in &b.contributions {
        assert!(c.error <= c.bound && c.bound <= 1.0);
        assert!(c.transition != "01<->10" || c.harmonic != -1);
    }
    assert!(harmonics.keys().all(|n| n.abs() <= 15));
}

#[test]
fn pulse_lengths_scale_with_rotation() {
    let g = mhz(3.0);
    let pi = Pulse::Pi.duration(g);
    assert!((Pulse::HalfPi.duration(g) - 0.5 * pi).abs() < 1e-20);
    assert!((Pulse::TwoPi.duration(g) - 2.0 * pi).abs() < 1e-20);
}

#[test]
fn bound_grows_with_coupling_strength() {
    let base = presets::two_qubit();
    let totals: Vec<f64> = [0.25, 0.5, 1.0, 2.0]
        .iter()
        .map(|&l| budget(&base.with_scaled_couplings(l), &BudgetOptions::default()).total_bound)
        .collect();
    assert!(totals.windows(2).all(|w| w[0] < w[1]), "{totals:?}");
}

#[test]
fn fewer_harmonics_never_add_error() {
    let sys = presets::two_qubit();
    let all = budget(&sys, &BudgetOptions::default());
    let few = budget(&sys, &BudgetOptions { harmonics: 3, ..Default::default() });
    assert!(few.total_bound <= all.total_bound);
    assert!(few.contributions.len() < all.contributions.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn channel_error_is_bounded(g in 1e3f64..1e8, d in -1e9f64..1e9, t in 1e-9f64..1e-5) {
        let (e, b) = channel_error(g, d, t);
        prop_assert!(e >= 0.0 && e <= b * (1.0 + 1e-15) && b <= 1.0);
    }
}
