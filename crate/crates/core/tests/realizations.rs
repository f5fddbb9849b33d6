use spinlogic::realizations::{error_budget, lab_validation, preset, switch_check, switch_conditions};

#[test]
fn ion_lab_frame_reproduces_truth_table() {
    let p = preset("ion-toffoli").unwrap();
    let v = lab_validation(&p, &[250.0, 1000.0, 4000.0], 24).unwrap();
    assert!(v.pass, "{v:?}");
    let k = v.fitted_exponent.unwrap();
    assert!((k + 1.0).abs() < 0.1, "{k}");
    assert!(v.extrapolated_deviation.unwrap() < 1e-6);
    for w in v.points.windows(2) {
        assert!(w[1].rwa_deviation < w[0].rwa_deviation);
    }
}

#[test]
fn donor_toffoli_transfer_matches_superexchange() {
    let p = preset("donor-toffoli").unwrap();
    let b = error_budget(&p).unwrap();
    assert_eq!(b.superexchange.len(), 1);
    let s = &b.superexchange[0];
    assert_eq!((s.pair, s.via), ((0, 2), 1));
    let v = lab_validation(&p, &[4000.0], 24).unwrap();
    let point = &v.points[0];
    let err = |x: usize| point.input_errors.iter().find(|e| e.0 == x).unwrap().1;
    // |001⟩ and |100⟩ are swapped partially; nothing else channels into them.
    for x in [1, 4] {
        assert!((err(x) - s.transfer).abs() < 0.05 * s.transfer, "input {x}: {} vs {}", err(x), s.transfer);
    }
    println!("donor-toffoli lab invariant pass = {} (max error {:.3e}, limit {:.3e})", v.pass, point.max_input_error, v.error_limit);
}

#[test]
fn static_presets_validate_exactly() {
    for name in ["donor-fredkin", "donor-fredkin-E", "donor-fredkin-EE′", "donor-fredkin-switch"] {
        let v = lab_validation(&preset(name).unwrap(), &[], 24).unwrap();
        assert_eq!(v.points.len(), 1);
        assert!(v.points[0].carrier_ratio.is_none());
        assert!(v.pass, "{name}: {} > {}", v.points[0].max_input_error, v.error_limit);
    }
}

#[test]
fn switch_defaults_satisfy_hierarchy() {
    let a = std::f64::consts::TAU * 1.475e9;
    let c = switch_conditions(a, a / 2.0, a / 100.0).unwrap();
    assert!(c.pass);
    let s = switch_check(a, a / 2.0, a / 100.0, 0).unwrap();
    assert!((s.on_swap_amplitude - 1.0).abs() < 1e-3);
    assert!(s.off_swap_amplitude < 1e-2);
}
