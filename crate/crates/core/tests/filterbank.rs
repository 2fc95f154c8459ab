use std::f64::consts::PI;

use num_complex::Complex64;
use qshear::filterbank::*;
use qshear::lattice::IntMat2;
use qshear::mfunc::*;
use qshear::Error;

fn smooth() -> MFunctionSet {
    design(Variant::SmoothOnb, SmoothingConfig::default()).unwrap()
}

/// One analysis level by direct DFT sums.
fn direct_level(img: &Image, set: &MFunctionSet, j: usize) -> Vec<Complex64> {
    let m = img.n;
    let freq = |a: usize| {
        let s = ((a + m / 2) % m) as f64 - (m / 2) as f64;
        (2.0 * s / m as f64) * PI
    };
    let mut spectrum = vec![Complex64::new(0.0, 0.0); m * m];
    for a in 0..m {
        for b in 0..m {
            for x in 0..m {
                for y in 0..m {
                    let ang = -2.0 * PI * ((a * x + b * y) % m) as f64 / m as f64;
                    spectrum[a * m + b] += img.data[x * m + y] * Complex64::from_polar(1.0, ang);
                }
            }
        }
    }
    let lattice = set.downsampling(j).unwrap();
    let (rows, cols) = lattice_shape(&lattice, m).unwrap();
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let (px, py) = lattice_position(&lattice, m, r, c);
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..m {
                for b in 0..m {
                    let mj = set.evaluate(j, [freq(a), freq(b)]).unwrap();
                    let ang = 2.0 * PI * ((a * px + b * py) % m) as f64 / m as f64;
                    acc += spectrum[a * m + b] * mj.conj() * Complex64::from_polar(1.0, ang);
                }
            }
            out.push(acc * (lattice.index() as f64).sqrt() / (m * m) as f64);
        }
    }
    out
}

#[test]
fn single_level_matches_direct_sums() {
    for set in [shannon_design(), smooth(), design(Variant::TightDyadic, SmoothingConfig::default()).unwrap()] {
        let img = Image::random(8, 21);
        let pyr = analyze(&img, &set, 1).unwrap();
        let want0 = direct_level(&img, &set, 0);
        let got0 = &pyr.scaling.data;
        assert!(got0.iter().zip(&want0).all(|(a, b)| (a - b).norm() < 1e-12), "{} scaling", set.variant());
        for j in 1..=6 {
            let want = direct_level(&img, &set, j);
            let got = &pyr.levels[0].details[j - 1].data;
            assert_eq!(got.len(), want.len());
            let err = got.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{} channel {j}: {err}", set.variant());
        }
    }
}

#[test]
fn constant_image_has_no_detail() {
    for set in [shannon_design(), smooth()] {
        let img = Image::new(32, vec![3.0; 32 * 32]).unwrap();
        let pyr = analyze(&img, &set, 2).unwrap();
        for level in &pyr.levels {
            for a in &level.details {
                assert!(a.data.iter().all(|v| v.norm() < 1e-12));
            }
        }
        let first = pyr.scaling.data[0];
        assert!(pyr.scaling.data.iter().all(|v| (v - first).norm() < 1e-12));
        // Two D2 levels, √4 each: 3 · 4 = 12.
        assert!((first - Complex64::new(12.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn quincunx_shift_moves_coefficients() {
    let set = shannon_design();
    let img = Image::random(32, 5);
    let base = analyze(&img, &set, 1).unwrap();
    for k in [[1i64, 0], [0, 1], [2, -3]] {
        let s = IntMat2::Q.apply(k);
        let moved = analyze(&img.shifted(s), &set, 1).unwrap();
        for j in 0..6 {
            let (a, b) = (&base.levels[0].details[j], &moved.levels[0].details[j]);
            for r in 0..a.rows {
                for c in 0..a.cols {
                    let r2 = (r as i64 + k[0] + k[1]).rem_euclid(a.rows as i64) as usize;
                    let c2 = (c as i64 + k[1]).rem_euclid(a.cols as i64) as usize;
                    let (x, y) = (a.data[r * a.cols + c], b.data[r2 * b.cols + c2]);
                    assert!((x - y).norm() < 1e-12, "k={k:?} j={} ({r},{c})", j + 1);
                }
            }
        }
    }
}

#[test]
fn round_trip_all_variants_and_depths() {
    for set in [shannon_design(), smooth(), design(Variant::TightDyadic, SmoothingConfig::default()).unwrap()] {
        for levels in 0..=3 {
            let img = Image::random(64, levels as u64);
            let pyr = analyze(&img, &set, levels).unwrap();
            let back = synthesize(&pyr, &set).unwrap();
            assert!(back.relative_error(&img) < 1e-13, "{} L={levels}", set.variant());
            // Parseval: orthonormal bases and tight frames alike.
            let e = img.norm().powi(2);
            assert!((pyr.energy() - e).abs() < 1e-12 * e);
        }
    }
}

#[test]
fn coefficient_counts() {
    let img = Image::random(64, 1);
    let onb = coefficient_count(&analyze(&img, &smooth(), 3).unwrap());
    assert_eq!(onb.total, 64 * 64);
    assert_eq!(onb.per_level, vec![3072, 768, 192]);
    assert_eq!(onb.scaling, 64);
    let tight = design(Variant::TightDyadic, SmoothingConfig::default()).unwrap();
    let t = coefficient_count(&analyze(&img, &tight, 2).unwrap());
    assert_eq!(t.per_level, vec![6 * 32 * 32, 6 * 16 * 16]);
    assert_eq!(t.scaling, 16 * 16);
}

#[test]
fn size_and_variant_errors() {
    let set = smooth();
    let img = Image::random(24, 0);
    assert!(matches!(analyze(&img, &set, 3), Err(Error::ImageSize { .. })));
    assert!(analyze(&img, &set, 2).is_ok());
    assert!(Image::new(4, vec![0.0; 15]).is_err());
    let pyr = analyze(&Image::random(16, 0), &set, 1).unwrap();
    let tight = design(Variant::TightDyadic, SmoothingConfig::default()).unwrap();
    assert!(matches!(synthesize(&pyr, &tight), Err(Error::VariantMismatch { .. })));
}

#[test]
fn tampered_designs_do_not_reconstruct() {
    let img = Image::random(64, 9);
    for set in [smooth().with_gain(1, 0.9).unwrap(), smooth().with_phases([[0, 0]; 7])] {
        let back = synthesize(&analyze(&img, &set, 2).unwrap(), &set).unwrap();
        assert!(back.relative_error(&img) > 1e-3);
    }
}
