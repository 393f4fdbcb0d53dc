use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use trigzeta::trigpoly::{expand_product, CosinePolynomial, ProductForm};
use trigzeta::zetanum::{
    applied_trig_sum, lemma_check, lemma_lhs, lemma_rhs, midpoint_bound_check, neg_zeta_logderiv,
    re_cot, von_mangoldt, zeta_em, zeta_with_derivative, LogDerivMethod, TrigSumOptions,
};
use trigzeta::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn trial_division_lambda(n: u64) -> f64 {
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    (m as f64).ln()
}

#[test]
fn von_mangoldt_against_factorisation() {
    let table = von_mangoldt(5000).unwrap();
    for n in 2..=5000u64 {
        assert!(
            (table.get(n) - trial_division_lambda(n)).abs() < 1e-15,
            "n={n}"
        );
        assert!(table.get(n) <= (n as f64).ln() + 1e-15);
    }
    assert_eq!(table.get(8), 2f64.ln());
    assert_eq!(table.get(12), 0.0);
    assert!((table.psi(100) - 94.045_311_229_357_4).abs() < 1e-12);
}

/// Central differences at h and h/2 combined by one Richardson step.
fn zeta_prime_richardson(s: f64, h: f64) -> f64 {
    let d = |h: f64| {
        (zeta_em(c(s + h, 0.0)).unwrap().re - zeta_em(c(s - h, 0.0)).unwrap().re) / (2.0 * h)
    };
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

#[test]
fn zeta_prime_at_two_matches_finite_differences() {
    let fd = zeta_prime_richardson(2.0, 1e-5);
    let ev = zeta_with_derivative(c(2.0, 0.0)).unwrap();
    assert!((ev.dzeta.re - fd).abs() < 1e-9, "{} vs {fd}", ev.dzeta.re);
    assert!((ev.dzeta.re + 0.937_548_254_315_843_8).abs() < 1e-13);
}

#[test]
fn dirichlet_log_derivative_at_two() {
    let zeta2 = PI * PI / 6.0;
    let oracle = -zeta_prime_richardson(2.0, 1e-5) / zeta2;
    for tol in [1e-3, 1e-5, 1e-6] {
        let r = neg_zeta_logderiv(c(2.0, 0.0), tol).unwrap();
        assert!(r.tail_bound <= tol);
        assert!((r.value.re - oracle).abs() <= tol + 1e-9, "tol={tol}");
        // partial sums of a positive series undershoot
        assert!(r.value.re <= oracle + 1e-9);
    }
}

#[test]
fn dirichlet_domain_and_capacity() {
    assert!(matches!(
        neg_zeta_logderiv(c(1.05, 0.0), 1.0),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        neg_zeta_logderiv(c(1.2, 0.0), 1e-8),
        Err(Error::Capacity { .. })
    ));
}

#[test]
fn re_cot_sign_and_decay() {
    for i in 1..50 {
        let x = -PI / 2.0 * i as f64 / 50.0;
        for y in [0.0, 0.1, 1.0, 5.0] {
            assert!(re_cot(x, y).unwrap() <= 0.0);
        }
    }
    assert!(re_cot(0.0, 0.7).unwrap() == 0.0);
    // ratio = (cosh 2y − cos 0.6)/(cosh(2y + 2) − cos 0.6) → e⁻²; at y = 2
    // it is still 3.5e-3 away, so the 1e-3 window starts at y = 3
    for y in 2..=10 {
        let y = y as f64;
        let ratio = re_cot(0.3, y + 1.0).unwrap() / re_cot(0.3, y).unwrap();
        let exact = ((2.0 * y).cosh() - 0.6f64.cos()) / ((2.0 * y + 2.0).cosh() - 0.6f64.cos());
        assert!((ratio - exact).abs() <= 1e-13);
        if y >= 3.0 {
            assert!((ratio - (-2.0f64).exp()).abs() <= 1e-3);
        }
    }
    assert!(matches!(re_cot(PI, 0.0), Err(Error::Pole { .. })));
}

#[test]
fn lemma_holds_on_grid() {
    for sigma in [1.3, 1.5, 2.0] {
        for t in [0.0, 5.0, 10.0, 20.0] {
            for eta in [0.1, 0.25, 0.5] {
                let r =
                    lemma_check(c(sigma, t), eta, 1e-6, LogDerivMethod::EulerMaclaurin).unwrap();
                assert!(
                    r.abs_diff <= r.lhs_error_bound + r.rhs_error_bound + 1e-6,
                    "σ={sigma} t={t} η={eta}: {r:?}"
                );
                assert!(r.pass);
            }
        }
    }
}

#[test]
fn lemma_with_rigorous_tails_where_they_fit() {
    let z = c(2.0, 10.0);
    let r = lemma_check(
        z,
        0.25,
        1e-3,
        LogDerivMethod::Dirichlet {
            max_terms: 100_000_000,
        },
    )
    .unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn error_bounds_survive_refinement() {
    for (z, eta) in [(c(1.3, 5.0), 0.1), (c(1.5, 10.0), 0.25), (c(2.0, 0.0), 0.5)] {
        let tol = 1e-5;
        let coarse = lemma_lhs(z, eta, tol, LogDerivMethod::EulerMaclaurin).unwrap();
        let fine = lemma_lhs(z, eta, tol / 10.0, LogDerivMethod::EulerMaclaurin).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error);
        let coarse = lemma_rhs(z, eta, tol).unwrap();
        let fine = lemma_rhs(z, eta, tol / 10.0).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error);
    }
    for s in [c(2.0, 0.0), c(2.5, 14.0)] {
        let coarse = neg_zeta_logderiv(s, 1e-3).unwrap();
        let fine = neg_zeta_logderiv(s, 1e-4).unwrap();
        assert!((coarse.value - fine.value).norm() <= coarse.tail_bound);
    }
}

#[test]
fn midpoint_inequality_grid() {
    for sigma in [1.3, 1.5, 2.0] {
        for eta in [0.05, 0.1, 0.25] {
            let r = midpoint_bound_check(sigma, eta, 1e-8, LogDerivMethod::EulerMaclaurin).unwrap();
            assert!(r.pass && r.margin > 0.0, "σ={sigma} η={eta}: {r:?}");
            assert!(r.lhs < r.rhs);
        }
    }
    assert!(midpoint_bound_check(1.5, 1.0, 1e-8, LogDerivMethod::EulerMaclaurin).is_err());
}

fn opts() -> TrigSumOptions {
    TrigSumOptions {
        max_terms: 1_000_000,
        ..Default::default()
    }
}

#[test]
fn applied_trig_sum_examples() {
    let p = CosinePolynomial::new(vec![3.0, 4.0, 1.0]).unwrap();
    let r = applied_trig_sum(&p, 1.3, 14.13, 1e-6, opts()).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(r.abs_diff <= 1e-9);

    // y = 0: every cosine is 1
    let r = applied_trig_sum(&p, 2.0, 0.0, 1e-6, opts()).unwrap();
    let single = neg_zeta_logderiv(c(2.0, 0.0), 1e-6).unwrap();
    assert!((r.lhs - 8.0 * single.value.re).abs() <= 8.0 * 1e-6 + r.lhs_error_bound);

    let one = CosinePolynomial::new(vec![1.0]).unwrap();
    let r = applied_trig_sum(&one, 1.5, 7.0, 1e-6, opts()).unwrap();
    assert!(r.pass && r.lhs > 0.0);

    let bad = CosinePolynomial::new(vec![1.0, 1.9, 1.5]).unwrap();
    assert!(applied_trig_sum(&bad, 1.5, 1.0, 1e-6, opts()).is_err());
    assert!(applied_trig_sum(&p, 1.2, 1.0, 1e-6, opts()).is_err());
}

#[test]
fn applied_trig_sum_random_points() {
    let quintic =
        expand_product(&ProductForm::new(1.0, true, vec![0.865_255_9, 0.197_447_6]).unwrap())
            .unwrap();
    let classical = CosinePolynomial::new(vec![3.0, 4.0, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let x = rng.gen_range(1.25..3.0);
        let y = rng.gen_range(0.0..50.0);
        for p in [&classical, &quintic] {
            let r = applied_trig_sum(p, x, y, 1e-6, opts()).unwrap();
            assert!(r.pass, "x={x} y={y}: {r:?}");
            assert!(r.lhs >= -r.lhs_error_bound && r.rhs >= -r.rhs_error_bound);
        }
    }
}
