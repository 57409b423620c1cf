use floqmap::error::Error;
use floqmap::linalg::{orthonormality_error, symmetric_eigen};
use floqmap::model::*;
use floqmap::statics::*;
use floqmap::units::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const NINE: [&str; 9] = ["000", "001", "010", "100", "002", "200", "011", "101", "110"];

fn random_qcq(rng: &mut impl Rng) -> SystemSpec {
    SystemSpec::new(
        vec![
            ModeSpec::qubit("Q1", ghz(rng.gen_range(4.5..5.5)), mhz(rng.gen_range(-300.0..-150.0)), 4),
            ModeSpec::coupler("C", ghz(rng.gen_range(7.0..8.0)), mhz(rng.gen_range(-150.0..-50.0)), 4),
            ModeSpec::qubit("Q2", ghz(rng.gen_range(5.6..6.4)), mhz(rng.gen_range(-300.0..-150.0)), 4),
        ],
        vec![
            CouplingSpec::new("Q1", "C", mhz(rng.gen_range(20.0..80.0))),
            CouplingSpec::new("C", "Q2", mhz(rng.gen_range(20.0..80.0))),
            CouplingSpec::new("Q1", "Q2", mhz(rng.gen_range(1.0..8.0))),
        ],
    )
    .unwrap()
}

#[test]
fn uncoupled_system_is_its_own_dressed_basis() {
    let s = presets::qubit_coupler_qubit().with_scaled_couplings(0.0);
    let d = exact_dressed_spectrum(&s).unwrap();
    for k in 0..d.len() {
        assert_eq!(d.energies[k], s.bare_energy_index(k));
        assert_eq!(d.bare_overlaps[k], 1.0);
    }
}

#[test]
fn dressed_vectors_are_orthonormal() {
    for s in [presets::two_qubit(), presets::qubit_coupler_qubit()] {
        let d = exact_dressed_spectrum(&s).unwrap();
        assert!(orthonormality_error(&d.complex_vectors()) < 1e-10);
        let mut sorted = d.energies.clone();
        sorted.sort_by(f64::total_cmp);
        let (vals, _) = symmetric_eigen(&sparse_hamiltonian(&s, CouplingForm::Full).unwrap().dense_real());
        for (a, b) in sorted.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}

#[test]
fn labels_do_not_depend_on_step_count() {
    let s = presets::two_qubit();
    let reference = exact_dressed_spectrum_with(&s, TrackingOptions { steps: 20, ..Default::default() }).unwrap();
    for steps in [10, 40] {
        let d = exact_dressed_spectrum_with(&s, TrackingOptions { steps, ..Default::default() }).unwrap();
        for (a, b) in d.energies.iter().zip(&reference.energies) {
            assert!((a - b).abs() < 1e-3, "{steps} steps relabeled a state");
        }
    }
}

#[test]
fn mode_permutation_only_relabels() {
    let s = presets::qubit_coupler_qubit();
    let p = s.permuted(&[2, 0, 1]).unwrap();
    let ds = exact_dressed_spectrum(&s).unwrap();
    let dp = exact_dressed_spectrum(&p).unwrap();
    for st in s.basis().states() {
        let moved = BareState(vec![st.0[2], st.0[0], st.0[1]]);
        let a = ds.energy(&st).unwrap();
        let b = dp.energy(&moved).unwrap();
        assert!((a - b).abs() < 1e-4 * a.abs().max(1.0), "{st}");
    }
}

#[test]
fn first_qubit_shift_follows_leading_order() {
    let s = presets::qubit_coupler_qubit();
    let rwa = exact_dressed_spectrum_with(&s, TrackingOptions { form: CouplingForm::Rwa, ..Default::default() }).unwrap();
    let shift = rwa.energy_of("100").unwrap() - ghz(5.801);
    let lead = mhz(100.0).powi(2) / mhz(-1189.0) + mhz(5.0).powi(2) / mhz(-120.0);
    assert!((shift - lead).abs() < 0.03 * lead.abs(), "{} vs {}", to_mhz(shift), to_mhz(lead));
    // with counter-rotating terms the fourth-order sum still tracks the exact value
    let full = exact_dressed_spectrum(&s).unwrap().energy_of("100").unwrap();
    let pt = perturbative_energy(&s, &BareState::parse("100").unwrap(), 4, CouplingForm::Full).unwrap();
    assert!((to_mhz(full - pt)).abs() < 0.01);
}

#[test]
fn ground_state_is_unshifted_under_exchange_coupling() {
    let s = presets::qubit_coupler_qubit();
    let t = perturbative_terms(&s, 0, CouplingForm::Rwa).unwrap();
    assert_eq!((t.e2, t.e3, t.e4), (0.0, 0.0, 0.0));
}

#[test]
fn second_order_shift_of_second_qubit() {
    let s = presets::qubit_coupler_qubit();
    let idx = s.parse_state("001").unwrap();
    let t = perturbative_terms(&s, idx, CouplingForm::Rwa).unwrap();
    let expected = 10000.0 / -1069.0 - 25.0 / -120.0;
    assert!((to_mhz(t.e2) - expected).abs() < 1e-9);
    assert!((to_mhz(t.e2) - (-9.35 + 0.21)).abs() < 0.01);
}

#[test]
fn zero_coupling_leaves_bare_energies() {
    let s = presets::qubit_coupler_qubit().with_scaled_couplings(0.0);
    for label in NINE {
        let st = BareState::parse(label).unwrap();
        for order in 2..=4 {
            let e = perturbative_energy(&s, &st, order, CouplingForm::Full).unwrap();
            assert_eq!(e, s.bare_energy(&st));
        }
    }
}

#[test]
fn closed_forms_match_generic_sums() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let s = random_qcq(&mut rng);
        let p = QcqParams::from_system(&s).unwrap();
        for label in NINE {
            let st = BareState::parse(label).unwrap();
            let cf = closed_form_terms(&p, &st).unwrap();
            let g = perturbative_terms(&s, s.state_index(&st).unwrap(), CouplingForm::Rwa).unwrap();
            assert_eq!(cf[0], g.e0);
            for (a, b) in cf[1..].iter().zip([g.e2, g.e3, g.e4]) {
                let scale = b.abs().max(1e-30);
                assert!((a - b).abs() <= 1e-9 * scale, "{label}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn order_out_of_range_is_rejected() {
    let s = presets::two_qubit();
    let st = BareState::parse("11").unwrap();
    assert!(perturbative_energy(&s, &st, 5, CouplingForm::Full).is_err());
    assert!(perturbative_energy(&s, &st, 1, CouplingForm::Full).is_err());
}

#[test]
fn resonant_qubits_are_degenerate() {
    let s = presets::two_qubit().with_frequency("Q1", ghz(5.0)).unwrap();
    let st = BareState::parse("01").unwrap();
    match perturbative_energy(&s, &st, 2, CouplingForm::Rwa) {
        Err(Error::Degenerate { .. }) => {}
        other => panic!("expected degeneracy, got {other:?}"),
    }
}

#[test]
fn effective_coupling_of_reference_circuit() {
    let p = sw_effective_params(&presets::qubit_coupler_qubit()).unwrap();
    let by_hand = 5.0 + 5000.0 * (-1.0 / 1189.0 - 1.0 / 1069.0 - 1.0 / 12791.0 - 1.0 / 12911.0);
    assert!((to_mhz(p.j_tilde_12) - by_hand).abs() < 1e-9);
    assert!((to_mhz(p.j_tilde_12) + 4.66).abs() < 0.005);
    assert!(p.is_dispersive());
    // frozen from the closed forms
    assert!((to_mhz(p.omega_tilde_1 - ghz(5.801)) - 10000.0 * (-1.0 / 1189.0 - 1.0 / 12791.0)).abs() < 1e-9);
    assert!((to_mhz(p.j_tilde_101_002) + 5.154659279).abs() < 1e-6);
    assert!((to_mhz(p.j_tilde_101_200) + 5.725588600).abs() < 1e-6);
}

fn single_excitation_gap(s: &SystemSpec, w2: f64) -> f64 {
    let q = s.with_frequency("Q2", w2).unwrap();
    let (v, _) = symmetric_eigen(&sparse_hamiltonian(&q, CouplingForm::Full).unwrap().dense_real());
    v[2] - v[1]
}

#[test]
fn effective_coupling_matches_exact_minimum_splitting() {
    let s = presets::qubit_coupler_qubit();
    let (mut a, mut b) = (ghz(5.7), ghz(5.9));
    while b - a > khz(1.0) {
        let m1 = a + 0.382 * (b - a);
        let m2 = a + 0.618 * (b - a);
        if single_excitation_gap(&s, m1) < single_excitation_gap(&s, m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let half_gap = 0.5 * single_excitation_gap(&s, a);
    let at_crossing = sw_effective_params(&s.with_frequency("Q2", a).unwrap()).unwrap();
    let rel = (half_gap - at_crossing.j_tilde_12.abs()) / half_gap;
    assert!(rel.abs() < 0.03, "{rel}");
}

#[test]
fn effective_parameters_reduce_without_coupler_links() {
    let s = presets::qubit_coupler_qubit()
        .with_coupling("Q1", "C", 0.0)
        .unwrap()
        .with_coupling("C", "Q2", 0.0)
        .unwrap();
    let p = sw_effective_params(&s).unwrap();
    assert_eq!(p.j_tilde_12, mhz(5.0));
    assert_eq!(p.omega_tilde_1, ghz(5.801));
    assert_eq!(p.omega_tilde_2, ghz(5.921));
}

#[test]
fn coupler_above_qubits_gives_negative_mediated_term() {
    let s = presets::qubit_coupler_qubit().with_coupling("Q1", "Q2", 0.0).unwrap();
    let p = sw_effective_params(&s).unwrap();
    assert!(p.j_tilde_12_third < 0.0 && p.j_tilde_12 < 0.0);
}

#[test]
fn coupler_on_qubit_resonance_is_singular() {
    let s = presets::qubit_coupler_qubit().with_frequency("C", ghz(5.801)).unwrap();
    assert!(matches!(sw_effective_params(&s), Err(Error::Singularity(_))));
}

#[test]
fn pole_sum_derivatives_match_finite_differences() {
    let s = presets::qubit_coupler_qubit();
    let t = Triple::of(&s).unwrap();
    let f = effective_coupling_function(&s, t, EffectiveCoupling::SingleExcitation);
    let x = ghz(6.99);
    let h = mhz(1.0);
    let d1 = (f.value(x + h).unwrap() - f.value(x - h).unwrap()) / (2.0 * h);
    let d2 = (f.value(x + h).unwrap() - 2.0 * f.value(x).unwrap() + f.value(x - h).unwrap()) / (h * h);
    assert!((d1 - f.derivative(1, x).unwrap()).abs() < 1e-5 * d1.abs());
    assert!((d2 - f.derivative(2, x).unwrap()).abs() < 1e-4 * d2.abs());
}

#[test]
fn two_mode_zz_of_reference_pair() {
    let s = presets::two_qubit();
    let exact = static_zz(&s, ZzMethod::Exact).unwrap();
    let formula = static_zz(&s, ZzMethod::ClosedForm { order: 2 }).unwrap();
    // frozen exact value at four levels per transmon
    assert!((to_mhz(exact) - 0.586788202).abs() < 1e-6);
    assert!((formula - exact).abs() < 0.01 * exact.abs());
}

#[test]
fn zz_vanishes_with_coupling_and_scales_quadratically() {
    let s = presets::two_qubit();
    assert!(static_zz(&s.with_scaled_couplings(0.0), ZzMethod::Exact).unwrap().abs() < 1e-3);
    let z1 = static_zz(&s.with_scaled_couplings(0.1), ZzMethod::Perturbative { order: 2, form: CouplingForm::Full }).unwrap();
    let z2 = static_zz(&s.with_scaled_couplings(0.2), ZzMethod::Perturbative { order: 2, form: CouplingForm::Full }).unwrap();
    assert!((z2 / z1 - 4.0).abs() < 1e-9);
}

#[test]
fn fourth_order_zz_tracks_exact_in_dispersive_regime() {
    let s = presets::qubit_coupler_qubit();
    let ex = static_zz(&s, ZzMethod::Exact).unwrap();
    let p4 = static_zz(&s, ZzMethod::Perturbative { order: 4, form: CouplingForm::Full }).unwrap();
    assert!((to_khz(ex) - 196.332262).abs() < 1e-3);
    assert!((p4 - ex).abs() < 0.05 * ex.abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn perturbative_zz_is_even_in_coupling_sign(scale in 0.2f64..1.0) {
        let s = presets::qubit_coupler_qubit().with_scaled_couplings(scale);
        let flipped = s.with_scaled_couplings(-1.0);
        let m = ZzMethod::Perturbative { order: 4, form: CouplingForm::Full };
        let a = static_zz(&s, m).unwrap();
        let b = static_zz(&flipped, m).unwrap();
        // odd orders flip with the couplings, even orders do not
        let a3 = static_zz(&s, ZzMethod::Perturbative { order: 3, form: CouplingForm::Full }).unwrap()
            - static_zz(&s, ZzMethod::Perturbative { order: 2, form: CouplingForm::Full }).unwrap();
        prop_assert!(((a - b) - 2.0 * a3).abs() < 1e-6 * a.abs().max(1.0));
    }

    #[test]
    fn exact_zz_is_invariant_under_mode_permutation(wc in 6.6f64..7.4) {
        let s = presets::qubit_coupler_qubit().with_frequency("C", ghz(wc)).unwrap();
        let p = s.permuted(&[1, 2, 0]).unwrap();
        let a = static_zz(&s, ZzMethod::Exact).unwrap();
        let b = static_zz(&p, ZzMethod::Exact).unwrap();
        prop_assert!((a - b).abs() < 1e-3 * a.abs().max(mhz(0.001)));
    }
}
