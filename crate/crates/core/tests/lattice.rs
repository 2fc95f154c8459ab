use std::f64::consts::PI;

use proptest::prelude::*;
use qshear::lattice::{
    coset_representatives, is_frequency_support, reciprocal_shift_set, verify_shift_duality,
    FreqShift, IntMat2,
};
use qshear::partition::canonical_partition;

/// Brute-force membership in A·Z²: search m in a box.
fn brute_contains(a: &IntMat2, v: [i64; 2]) -> bool {
    (-40..=40).any(|m1| (-40..=40).any(|m2| a.apply([m1, m2]) == v))
}

#[test]
fn quincunx_membership_rule_matches_enumeration() {
    for x in -8i64..=8 {
        for y in -8..=8 {
            let rule = x % 2 == 0 && y % 2 == 0 && (x + y).rem_euclid(4) == 0;
            assert_eq!(brute_contains(&IntMat2::Q, [x, y]), rule, "({x},{y})");
            assert_eq!(IntMat2::Q.contains([x, y]).unwrap(), rule);
        }
    }
}

#[test]
fn quincunx_cosets_oracle() {
    let reps = coset_representatives(&IntMat2::Q).unwrap();
    assert_eq!(reps.len(), 8);
    assert_eq!(reps[0], [0, 0]);
    // Oracle: lexicographically smallest non-negative member of each coset,
    // found by scanning residues with the brute-force membership test.
    let mut want: Vec<[i64; 2]> = Vec::new();
    for x in 0..8 {
        for y in 0..8 {
            if !want.iter().any(|r| brute_contains(&IntMat2::Q, [x - r[0], y - r[1]])) {
                want.push([x, y]);
            }
        }
    }
    assert_eq!(reps, want);
    // The listed example set is a valid transversal of the same cosets.
    let example = [[0, 0], [1, 0], [2, 0], [3, 0], [0, 1], [1, 1], [2, 1], [3, 1]];
    for e in example {
        assert_eq!(
            reps.iter().filter(|r| brute_contains(&IntMat2::Q, [e[0] - r[0], e[1] - r[1]])).count(),
            1
        );
    }
}

#[test]
fn lambda_matches_listed_set() {
    let f = FreqShift::from_fracs;
    let mut want = vec![
        f(1, 2, 1, 2),
        f(3, 2, 1, 2),
        f(1, 2, 3, 2),
        f(3, 2, 3, 2),
        f(0, 1, 0, 1),
        f(0, 1, 1, 1),
        f(1, 1, 0, 1),
        f(1, 1, 1, 1),
    ];
    want.sort();
    assert_eq!(reciprocal_shift_set(&IntMat2::Q).unwrap(), want);
    assert_eq!(reciprocal_shift_set(&IntMat2::IDENTITY).unwrap(), vec![f(0, 1, 0, 1)]);
}

fn duality(a: &IntMat2) -> f64 {
    let freq: Vec<[f64; 2]> = reciprocal_shift_set(a).unwrap().iter().map(|s| s.radians()).collect();
    verify_shift_duality(&freq, &coset_representatives(a).unwrap()).unwrap()
}

#[test]
fn shift_duality_on_named_matrices() {
    for a in [
        IntMat2::D2,
        IntMat2::Q,
        IntMat2::new(1, 1, -1, 1),
        IntMat2::new(2, 0, 0, 1),
    ] {
        assert!(duality(&a) <= 1e-12, "{a:?}: {}", duality(&a));
    }
}

fn nonsingular() -> impl Strategy<Value = IntMat2> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4)
        .prop_map(|(a, b, c, d)| IntMat2::new(a, b, c, d))
        .prop_filter("invertible", |m| m.det() != 0)
}

proptest! {
    #[test]
    fn cosets_cover_the_box(a in nonsingular()) {
        let reps = coset_representatives(&a).unwrap();
        prop_assert_eq!(reps.len(), a.index());
        for x in -8..=8i64 {
            for y in -8..=8i64 {
                let hits = reps.iter().filter(|r| a.contains([x - r[0], y - r[1]]).unwrap()).count();
                prop_assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn reciprocal_shifts_are_distinct_cosets(a in nonsingular()) {
        let shifts = reciprocal_shift_set(&a).unwrap();
        prop_assert_eq!(shifts.len(), a.index());
        prop_assert!(duality(&a) <= 1e-9);
        // (1/2π)Aᵀλ must be integral, and distinct shifts differ by a non-period.
        for s in &shifts {
            let v = [s.x / 2, s.y / 2];
            let at = a.transpose();
            let w0 = v[0] * at.a11 + v[1] * at.a12;
            let w1 = v[0] * at.a21 + v[1] * at.a22;
            prop_assert!(w0.is_integer() && w1.is_integer());
        }
    }
}

#[test]
fn full_square_is_support_of_z2() {
    let s0 = |_: [f64; 2]| true;
    let rep = is_frequency_support(&s0, &IntMat2::IDENTITY, 3, 1024).unwrap();
    let full = (2.0 * PI).powi(2);
    assert!((rep.diag_value - full).abs() < 1e-9);
    assert!(rep.max_offdiag <= 1e-3 * full);
}

#[test]
fn central_square_is_support_of_dyadic_lattice() {
    let s1 = &canonical_partition()[0];
    let rep = is_frequency_support(s1, &IntMat2::D2, 3, 1024).unwrap();
    assert!((rep.diag_value - PI * PI).abs() < 1e-9);
    assert!((rep.expected - PI * PI).abs() < 1e-12);
    // Closed form: ∫ e^{i n ξ} over [−π/2, π/2) is 2 sin(nπ/2)/n = 0 for even n.
    assert!(rep.max_offdiag < 1e-9, "{}", rep.max_offdiag);
}

#[test]
fn trapezoid_pair_is_support_of_quincunx_lattice() {
    let c5 = &canonical_partition()[5];
    let coarse = is_frequency_support(c5, &IntMat2::Q, 3, 512).unwrap();
    let fine = is_frequency_support(c5, &IntMat2::Q, 3, 2048).unwrap();
    let want = (2.0 * PI).powi(2) / 8.0;
    assert!((fine.diag_value - want).abs() < 1e-2 * want);
    assert!((fine.expected - want).abs() < 1e-12);
    assert!(fine.max_offdiag < 1e-2 * want, "{}", fine.max_offdiag);
    // Rational vertices land on the midpoint grid, so both resolutions are exact.
    assert!(coarse.max_offdiag < 1e-9 && fine.max_offdiag < 1e-9);
}

#[test]
fn empty_region_rejected() {
    let none = |_: [f64; 2]| false;
    assert!(is_frequency_support(&none, &IntMat2::D2, 2, 256).is_err());
    assert!(is_frequency_support(&none, &IntMat2::D2, 2, 100).is_err());
}
