use latsec::channel::{decompose, scale_to_canonical};
use latsec::curves::{sdof_point, special_value};
use latsec::lattice::{enumerate_codebook, exact_nested_leakage, point, LatticeBasis, NestedPair};
use latsec::schemes::{best_nested_sdof, layered_allocation, nested_report, theorem8_scheme};
use latsec::simulate::{leakage_cross_check, simulate_theorem8, ExpansionCode, TrialConfig};
use latsec::verify::{run_all, VerifyOptions};
use latsec::{ChannelGains, EavSign};

#[test]
fn physical_gains_to_nested_report() {
    let gains = ChannelGains::new(1.21, 1.0, EavSign::Plus).unwrap();
    let ch = scale_to_canonical(&gains).unwrap();
    let d = decompose(ch.cross_coeff, 2)
        .into_iter()
        .find(|d| d.p == 1 && d.q == 1)
        .unwrap();
    let alloc = layered_allocation(d.p, d.q, d.gamma, ch.rx_noise_var, 8).unwrap();
    let report = nested_report(&alloc);
    assert!(report.feasible());
    assert!((report.sdof - best_nested_sdof(ch.cross_coeff, 2).0).abs() < 1e-12);
    assert!(report.secrecy_rate > 0.0);
}

#[test]
fn sdof_curve_is_continuous_away_from_spurs() {
    let xs: Vec<f64> = (0..=40).map(|i| 1.02 + i as f64 * 0.001).collect();
    let vals: Vec<f64> = xs
        .iter()
        .map(|&x| sdof_point(x, EavSign::Plus, 20, None).unwrap().nested)
        .collect();
    assert!(vals.windows(2).all(|w| (w[0] - w[1]).abs() < 0.05));
    assert!(special_value(1.25, EavSign::Plus).is_none());
}

#[test]
fn codebook_leakage_stays_below_one_bit_per_dimension() {
    let np = NestedPair::new(
        LatticeBasis::scaled_integer(2, 0.25).unwrap(),
        LatticeBasis::scaled_integer(2, 1.0).unwrap(),
    )
    .unwrap();
    assert_eq!(enumerate_codebook(&np).unwrap().len(), 16);
    let d = point(&[0.1, -0.2]);
    for sign in [EavSign::Plus, EavSign::Minus] {
        let l = exact_nested_leakage(&np, sign, (&d, &d)).unwrap();
        assert!(l.leakage <= 2.0 + 1e-12);
        assert!(l.mod_sum_leakage.abs() < 1e-12);
    }
}

#[test]
fn theorem8_code_matches_closed_form_leakage() {
    let code = ExpansionCode::theorem8(2, 400.0).unwrap();
    let check = leakage_cross_check(&code, EavSign::Plus).unwrap();
    assert!(check.leakage <= check.digit_bound + check.slack);
    let sim = simulate_theorem8(&code, &TrialConfig::new(2_000, 5, 1.0)).unwrap();
    assert_eq!(sim.errors, 0);
    assert!(theorem8_scheme(16.0, 1.0, 2).unwrap().sdof_limit < 1.0 / 6.0);
    assert!(theorem8_scheme(400.0, 1.0, 2).unwrap().sdof_limit <= 1.0 / 6.0);
}

#[test]
fn verifier_negative_control_fails() {
    let report = run_all(VerifyOptions {
        tie_break: latsec::lattice::TieBreak::TowardOrigin,
    })
    .unwrap();
    assert!(!report.passed());
    assert!(report
        .checks
        .iter()
        .any(|c| c.name.starts_with("representation") && !c.passed()));
}
