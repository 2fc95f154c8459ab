use std::f64::consts::PI;

use qshear::lattice::IntMat2;
use qshear::mfunc::*;
use qshear::synthesis::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cone(x: f64, y: f64) -> usize {
    let (ax, ay) = (x.abs(), y.abs());
    if ax.max(ay) < PI / 2.0 {
        0
    } else if ay <= ax / 3.0 {
        5
    } else if ax <= ay / 3.0 {
        2
    } else if x * y > 0.0 {
        if ay <= ax { 4 } else { 3 }
    } else if ay <= ax {
        6
    } else {
        1
    }
}

#[test]
fn shannon_scaling_function_is_box_indicator() {
    let set = shannon_design();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5000 {
        let xi = [rng.gen_range(-3.0 * PI..3.0 * PI), rng.gen_range(-3.0 * PI..3.0 * PI)];
        let inside = xi[0].abs() < PI && xi[1].abs() < PI;
        let want = if inside { 1.0 / (2.0 * PI) } else { 0.0 };
        assert_eq!(scaling_fourier(&set, xi, 12).unwrap().norm(), want, "{xi:?}");
    }
}

#[test]
fn shannon_wavelets_are_sheared_trapezoid_indicators() {
    let set = shannon_design();
    let q = IntMat2::Q.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5000 {
        let w = [rng.gen_range(-4.0 * PI..4.0 * PI), rng.gen_range(-4.0 * PI..4.0 * PI)];
        let xi = q.solve_f64(w);
        let in_s0 = xi[0].abs() < PI && xi[1].abs() < PI;
        for j in 1..=6 {
            let want = if in_s0 && cone(xi[0], xi[1]) == j { 1.0 / (2.0 * PI) } else { 0.0 };
            let got = wavelet_fourier(&set, j, w, 12).unwrap().norm();
            assert!((got - want).abs() < 1e-15, "j={j} ω={w:?}");
        }
    }
}

#[test]
fn refinement_relation_holds() {
    // φ̂(2ξ) = M_0(ξ) φ̂(ξ) once the product has converged.
    let set = design(Variant::SmoothOnb, SmoothingConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let xi = [rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)];
        let lhs = scaling_fourier(&set, [2.0 * xi[0], 2.0 * xi[1]], 40).unwrap();
        let rhs = set.evaluate(0, xi).unwrap() * scaling_fourier(&set, xi, 40).unwrap();
        assert!((lhs - rhs).norm() < 1e-15, "{xi:?}");
    }
}

#[test]
fn spatial_and_frequency_energies_agree() {
    let set = design(Variant::SmoothOnb, SmoothingConfig::default()).unwrap();
    for ch in [Channel::Phi, Channel::Psi(3)] {
        let f = frequency_field(&set, ch, 256, 12, 4).unwrap();
        let s = spatial_field(&set, ch, 256, 12, 4).unwrap();
        // Parseval against the Hermitian-projected samples the transform uses.
        let n = f.n;
        let projected: f64 = (0..n * n)
            .map(|k| {
                let mirror = ((n - k / n) % n) * n + (n - k % n) % n;
                ((f.values[k] + f.values[mirror].conj()) * 0.5).norm_sqr()
            })
            .sum::<f64>()
            * f.spacing().powi(2);
        assert!((projected - s.energy()).abs() < 1e-12, "{ch}");
        // Only jump-line samples differ, each by at most max|f̂|².
        let peak = f.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
        let bound = f.asymmetric_fraction * (n as f64 * f.spacing()).powi(2) * peak;
        assert!((f.energy() - projected).abs() <= bound, "{ch}");
        // Full-ring coverage at zoom 4 holds nearly all of the unit norm.
        assert!(s.energy() > 0.98 && s.energy() < 1.0 + 1e-12, "{ch}: {}", s.energy());
    }
}

#[test]
fn field_arguments_are_validated() {
    let set = shannon_design();
    assert!(spatial_field(&set, Channel::Phi, 100, 12, 1).is_err());
    assert!(spatial_field(&set, Channel::Phi, 128, 12, 1).is_err());
    assert!(frequency_field(&set, Channel::Phi, 256, 0, 1).is_err());
    assert!(frequency_field(&set, Channel::Psi(7), 256, 12, 1).is_err());
}
