use proptest::prelude::*;
use std::f64::consts::PI;
use trigzeta::trigpoly::{
    expand_product, power_to_cosine, verify_nonneg, CosinePolynomial, NonnegOptions, Nonnegativity,
    ProductForm,
};

// Exact expansion of (1 + c)(0.8652559 + c)²(0.1974476 + c)², computed in
// rational arithmetic and rounded once.
const D5_COEFFS: [f64; 6] = [
    2.118_282_054_860_571_4,
    3.714_620_848_642_067_5,
    2.479_770_701_429_979,
    1.211_607_782_648_482_5,
    0.390_675_875,
    0.0625,
];

#[test]
fn classical_identity() {
    let form = ProductForm::new(2.0, false, vec![1.0]).unwrap();
    let p = expand_product(&form).unwrap();
    for (a, b) in p.coeffs().iter().zip([3.0, 4.0, 1.0]) {
        assert!((a - b).abs() <= 1e-14);
    }
    let r = verify_nonneg(&p, NonnegOptions::default());
    assert!(r.is_certificate());
    assert!((r.argmin() - PI).abs() <= 1e-9);
    assert!(r.min_value().abs() <= 1e-12);
}

#[test]
fn published_quintic_expansion() {
    let form = ProductForm::new(1.0, true, vec![0.865_255_9, 0.197_447_6]).unwrap();
    let p = expand_product(&form).unwrap();
    assert_eq!(p.degree(), 5);
    for (a, b) in p.coeffs().iter().zip(D5_COEFFS) {
        assert!((a - b).abs() <= 1e-14 * b, "{a} vs {b}");
    }
}

#[test]
fn violation_is_located() {
    let p = CosinePolynomial::new(vec![1.0, 1.9, 1.5]).unwrap();
    match verify_nonneg(&p, NonnegOptions::default()) {
        Nonnegativity::Violation { theta, value } => {
            assert!((value + 0.800_833_333_333_333_3).abs() < 1e-12);
            assert!((p.eval(theta) - value).abs() < 1e-15);
        }
        other => panic!("expected a violation, got {other:?}"),
    }
}

#[test]
fn cube_of_cosine() {
    assert_eq!(
        power_to_cosine(&[0.0, 0.0, 0.0, 1.0]),
        vec![0.0, 0.75, 0.0, 0.25]
    );
}

fn roots_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..3.0, 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_round_trips(roots in roots_strategy(), half in any::<bool>(), scale in 0.1f64..10.0) {
        let form = ProductForm::new(scale, half, roots).unwrap();
        let p = expand_product(&form).unwrap();
        prop_assert_eq!(p.degree(), form.degree());
        for k in 0..64 {
            let t = -PI + 2.0 * PI * k as f64 / 63.0;
            let want = form.eval(t);
            let mass: f64 = p.coeffs().iter().map(|b| b.abs()).sum();
            prop_assert!((p.eval(t) - want).abs() <= 1e-11 * mass);
        }
    }

    #[test]
    fn expansion_is_certified_nonnegative(roots in roots_strategy(), half in any::<bool>()) {
        let form = ProductForm::new(1.0, half, roots).unwrap();
        let p = expand_product(&form).unwrap();
        let opts = NonnegOptions { grid_points: 20_001, ..Default::default() };
        prop_assert!(verify_nonneg(&p, opts).is_certificate());
    }

    #[test]
    fn power_to_cosine_is_linear(
        a in prop::collection::vec(-5.0f64..5.0, 1..10),
        b in prop::collection::vec(-5.0f64..5.0, 1..10),
        s in -3.0f64..3.0,
    ) {
        let n = a.len().max(b.len());
        let pad = |v: &[f64]| { let mut v = v.to_vec(); v.resize(n, 0.0); v };
        let (a, b) = (pad(&a), pad(&b));
        let combo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
        let lhs = power_to_cosine(&combo);
        let (ca, cb) = (power_to_cosine(&a), power_to_cosine(&b));
        for j in 0..lhs.len() {
            prop_assert!((lhs[j] - (ca[j] + s * cb[j])).abs() <= 1e-12);
        }
    }

    #[test]
    fn power_to_cosine_preserves_values(a in prop::collection::vec(-5.0f64..5.0, 1..12), t in -PI..PI) {
        let c = t.cos();
        let direct: f64 = a.iter().rev().fold(0.0, |acc, x| acc * c + x);
        let p = CosinePolynomial::new(power_to_cosine(&a)).unwrap();
        prop_assert!((p.eval(t) - direct).abs() <= 1e-11 * a.iter().map(|x| x.abs()).sum::<f64>().max(1.0));
    }

    #[test]
    fn even_and_periodic(b in prop::collection::vec(-2.0f64..2.0, 1..8), t in -PI..PI) {
        let p = CosinePolynomial::new(b).unwrap();
        prop_assert!((p.eval(t) - p.eval(-t)).abs() <= 1e-13 * 16.0);
        prop_assert!((p.eval(t) - p.eval(t + 2.0 * PI)).abs() <= 1e-12 * 16.0);
    }
}

#[test]
fn invalid_inputs() {
    assert!(CosinePolynomial::new(vec![]).is_err());
    assert!(CosinePolynomial::new(vec![1.0, f64::NAN]).is_err());
    assert!(ProductForm::new(1.0, false, vec![-0.5]).is_err());
    assert!(ProductForm::new(0.0, false, vec![1.0]).is_err());
    let big = ProductForm::new(1.0, true, vec![1.0; 16]).unwrap();
    assert!(expand_product(&big).is_err());
}
