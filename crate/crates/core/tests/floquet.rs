use floqmap::floquet::*;
use floqmap::model::*;
use floqmap::special::bessel_j;
use floqmap::statics::exact_dressed_spectrum;
use floqmap::units::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_pair() -> SystemSpec {
    presets::two_qubit().with_all_levels(3).unwrap()
}

#[test]
fn undriven_quasienergies_are_folded_dressed_energies() {
    let sys = small_pair();
    let drive = DriveSpec::new("Q1", 0.0, mhz(150.0));
    let r = floquet(&sys, &drive, &FloquetOptions::default()).unwrap();
    assert!(r.unitarity_error < UNITARITY_LIMIT);
    let spec = exact_dressed_spectrum(&sys).unwrap();
    let w = drive.frequency;
    for label in ["00", "01", "10", "11", "02", "20"] {
        let e = spec.energy_of(label).unwrap();
        let q = r.quasienergy(label).unwrap();
        let diff = (e - q) / w;
        assert!((diff - diff.round()).abs() < 1e-9, "{label}");
    }
    assert!(r.smallest_overlap() > 0.99);
}

#[test]
fn propagator_stays_unitary_under_strong_drive() {
    let sys = small_pair();
    for x in [0.5, 1.84, 3.5] {
        let w = mhz(150.0);
        let r = floquet(&sys, &DriveSpec::new("Q1", x * w, w), &FloquetOptions::default()).unwrap();
        assert!(r.unitarity_error < UNITARITY_LIMIT);
        assert!(floqmap::linalg::orthonormality_error(&r.modes_t0) < 1e-10);
    }
}

#[test]
fn extended_space_matches_propagator() {
    let sys = small_pair();
    let w = mhz(150.0);
    let drive = DriveSpec::new("Q1", 1.84 * w, w);
    let r = floquet(&sys, &drive, &FloquetOptions::default()).unwrap();
    let s = sambe_spectrum(&sys, &drive, 30, CouplingForm::Full).unwrap();
    assert_eq!(s.values.len(), s.edge_weights.len());
    assert!(sambe_agreement(&r, &s, 1e-12).unwrap() < 1e-6 * w);
    assert!(sambe_spectrum(&sys, &drive, MAX_SAMBE_CUTOFF + 1, CouplingForm::Full).is_err());
}

#[test]
fn first_sideband_gap_follows_bessel_strength() {
    let sys = presets::two_qubit();
    let (a, b) = (BareState::parse("01").unwrap(), BareState::parse("10").unwrap());
    let rec = find_anticrossing_in_frequency(
        &sys,
        &DriveSpec::new("Q1", 0.0, mhz(150.0)),
        AmplitudeRule::Ratio(1.0),
        &a,
        &b,
        (mhz(148.0), mhz(152.0)),
        &AnticrossingOptions { grid: 9, tolerance: khz(1.0), ..Default::default() },
    )
    .unwrap();
    let expected = mhz(5.0) * bessel_j(1, 1.0);
    assert!((0.5 * rec.gap - expected).abs() < 0.02 * expected);
}

#[test]
fn collision_angle_limits() {
    assert_eq!(collision_angle(1.0, 0.0).unwrap(), std::f64::consts::FRAC_PI_2);
    assert_eq!(collision_angle(0.0, 3.0).unwrap(), 0.0);
    assert!((collision_angle(2.0, 2.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert!(collision_angle(0.0, 0.0).is_err());
}

#[test]
fn amplitude_rules() {
    assert_eq!(AmplitudeRule::Ratio(2.0).amplitude(3.0), 6.0);
    assert_eq!(AmplitudeRule::Fixed(5.0).amplitude(3.0), 5.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quasienergy_lies_in_first_zone(phase in -10.0f64..10.0, period in 1e-9f64..1e-6) {
        let q = quasienergy_from_eigenvalue(Complex64::from_polar(1.0, phase), period);
        let w = std::f64::consts::TAU / period;
        prop_assert!(q.abs() <= 0.5 * w * (1.0 + 1e-12));
        let back = Complex64::from_polar(1.0, -q * period);
        prop_assert!((back - Complex64::from_polar(1.0, phase)).norm() < 1e-9);
    }
}
