use std::f64::consts::PI;

use num_rational::Rational64 as Rat;
use qshear::mfunc::*;
use qshear::verify::*;

fn smooth() -> MFunctionSet {
    design(Variant::SmoothOnb, SmoothingConfig::default()).unwrap()
}

#[test]
fn criticality_is_exact() {
    assert_eq!(check_criticality(&shannon_design()), Rat::from_integer(1));
    assert_eq!(check_criticality(&smooth()), Rat::from_integer(1));
    let tight = design(Variant::TightDyadic, SmoothingConfig::default()).unwrap();
    assert_eq!(check_criticality(&tight), Rat::new(7, 4));
}

#[test]
fn alias_shift_sets() {
    let onb = alias_shifts(&smooth());
    assert_eq!(onb.len(), 7);
    assert_eq!(onb.iter().filter(|(_, ch)| ch.len() == 7).count(), 3);
    assert_eq!(onb.iter().filter(|(_, ch)| *ch == vec![1, 2, 3, 4, 5, 6]).count(), 4);
    let tight = design(Variant::TightDyadic, SmoothingConfig::default()).unwrap();
    assert_eq!(alias_shifts(&tight).len(), 3);
}

#[test]
fn scaled_channel_breaks_identity_by_one_minus_gain_squared() {
    for g in [0.5, 0.9, 1.1] {
        let set = smooth().with_gain(2, g).unwrap();
        let r = check_identity_summation(&set, 256).unwrap();
        assert!((r - (1.0 - g * g).abs()).abs() < 1e-12, "g={g}: {r}");
    }
}

#[test]
fn zeroed_phases_break_cancellation_only() {
    let set = smooth().with_phases([[0, 0]; 7]);
    assert!(check_identity_summation(&set, 256).unwrap() < 1e-12);
    let worst = check_shift_cancellation(&set, 256)
        .unwrap()
        .iter()
        .map(|r| r.residual)
        .fold(0.0, f64::max);
    assert!(worst > 0.9, "{worst}");
}

#[test]
fn norms_scale_with_channel_gain() {
    // ‖ψ^j‖ is linear in a constant gain on M_j.
    let set = smooth().with_gain(4, 0.6).unwrap();
    let norms = check_unit_norms(&set, 1024, 12).unwrap();
    assert!((norms[4] - 0.6).abs() < 1e-6, "{norms:?}");
    assert!((norms[1] - 1.0).abs() < 1e-6);
    assert!(check_unit_norms(&set, 512, 12).is_err());
}

#[test]
fn cohen_examples() {
    let c = check_cohen(&shannon_design(), 512, 8, 0.5).unwrap();
    assert_eq!(c.inf_value, 1.0);
    assert!(c.passed);
    let s = check_cohen(&smooth(), 512, 8, 0.5).unwrap();
    assert!((s.inf_value - 0.5f64.sqrt()).abs() < 1e-9 && s.passed, "{s:?}");
    assert!(s.qmf_residual < 1e-12);
    // Halving M_0 drives the infimum below the tolerance.
    let weak = check_cohen(&smooth().with_gain(0, 0.5).unwrap(), 512, 8, 0.5).unwrap();
    assert!(!weak.passed);
    assert!(check_cohen(&smooth(), 512, 4, 0.5).is_err());
}

#[test]
fn full_report_passes_and_prints() {
    let opts = CheckOptions { grid: 256, depth: 12, norm_grid: Some(1024), ..Default::default() };
    let rep = run_checks(&smooth(), &opts).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    let text = rep.to_text();
    assert!(text.contains("identity_residual="));
    assert!(rep.identity_residual <= 1e-12);
    let bad = run_checks(&smooth().with_gain(1, 0.9).unwrap(), &opts).unwrap();
    assert!(!bad.passed());
}

#[test]
fn tight_report_skips_orthonormal_checks() {
    let tight = design(Variant::TightDyadic, SmoothingConfig::with_epsilon(PI / 20.0).unwrap()).unwrap();
    let rep = run_checks(&tight, &CheckOptions { grid: 256, ..Default::default() }).unwrap();
    assert!(rep.passed());
    assert!(rep.norms.is_none() && rep.cohen.is_none());
    assert_eq!(rep.cancellation.len(), 3);
}
