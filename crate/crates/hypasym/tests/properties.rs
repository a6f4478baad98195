use hypasym::gamma::ln_gamma;
use hypasym::jacobi::{jacobi_coefficients_with, Representation};
use hypasym::reference::{eval_2f1, eval_2f1_with, gauss_series, Method, Params};
use hypasym::scalar::{c, rational, rel_diff, Rational, C64};
use hypasym::series::TruncatedSeries;
use hypasym::transform::{apply_transformation, Rule};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(p, q)| rational(p, q))
}

fn rational_series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    proptest::collection::vec(small_rational(), order + 1).prop_map(move |v| TruncatedSeries::new(v, order))
}

fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    rational_series(order).prop_map(move |s| {
        let mut v = s.into_coeffs();
        v[0] = rational(1, 1);
        TruncatedSeries::new(v, order)
    })
}

/// Parameters away from the nonpositive integers of c.
fn params() -> impl Strategy<Value = Params> {
    (-2.5f64..2.5, -2.5f64..2.5, 0.2f64..3.0, -0.5f64..0.5, -0.5f64..0.5, -0.5f64..0.5)
        .prop_map(|(a, b, cc, ai, bi, ci)| Params::new(c(a, ai), c(b, bi), c(cc, ci)))
}

fn disk(r: f64) -> impl Strategy<Value = C64> {
    (0.0..r, 0.0..std::f64::consts::TAU).prop_map(|(m, t)| C64::from_polar(m, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws(a in rational_series(5), b in rational_series(5), s in rational_series(5)) {
        prop_assert_eq!(&(&a * &b) * &s, &a * &(&b * &s));
        prop_assert_eq!(&a * &(&b + &s), &(&a * &b) + &(&a * &s));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a);
    }

    #[test]
    fn series_exp_log_inverse(u in unit_series(6)) {
        let back = u.ln_unit().unwrap().exp_unit().unwrap();
        prop_assert_eq!(back, u.clone());
        let r = u.recip().unwrap();
        prop_assert_eq!(&u * &r, TruncatedSeries::constant(rational(1, 1), 6));
        let sq = u.pow_unit(&rational(1, 2)).unwrap();
        prop_assert_eq!(&sq * &sq, u);
    }

    #[test]
    fn ln_gamma_recurrence(x in -30.0f64..30.0, y in -30.0f64..30.0) {
        prop_assume!(y.abs() > 1e-3 || x > 0.5);
        let z = c(x, y);
        let lhs = ln_gamma(z + 1.0).unwrap();
        let rhs = ln_gamma(z).unwrap() + z.ln();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn euler_and_pfaff_agree_with_the_series(p in params(), z in disk(0.4)) {
        let direct = gauss_series(&p, z).unwrap().value;
        for rule in [Rule::Swap, Rule::PfaffA, Rule::PfaffB, Rule::Euler] {
            let v = apply_transformation(rule, &p, z).unwrap().evaluate().unwrap();
            prop_assert!(rel_diff(v, direct) <= 1e-11, "{} at {}: {} vs {}", rule, z, v, direct);
        }
    }

    #[test]
    fn connection_to_one_minus_z(p in params(), x in 0.55f64..0.95, y in -0.05f64..0.05) {
        let z = c(x, y);
        let t = match apply_transformation(Rule::Conn1mz, &p, z) {
            Ok(t) => t,
            Err(_) => return Ok(()),
        };
        let v = t.evaluate().unwrap();
        let direct = eval_2f1_with(&p, z, Method::DirectSeries).unwrap().value;
        prop_assert!(rel_diff(v, direct) <= 1e-10, "{} vs {}", v, direct);
    }

    #[test]
    fn regions_agree_where_they_overlap(p in params(), z in disk(0.5)) {
        prop_assume!(z.norm() > 0.2);
        let direct = eval_2f1_with(&p, z, Method::DirectSeries).unwrap();
        let viaw = z / (z - 1.0);
        if viaw.norm() <= 0.75 {
            let pf = eval_2f1_with(&p, z, Method::Pfaff).unwrap();
            prop_assert!(rel_diff(pf.value, direct.value) <= 1e-11);
        }
        let auto = eval_2f1(&p, z).unwrap();
        prop_assert!(rel_diff(auto.value, direct.value) <= 1e-12);
    }

    #[test]
    fn jacobi_representations_agree(n in 0usize..=12, a in small_rational(), b in small_rational()) {
        let forms: Vec<_> = Representation::JACOBI
            .into_iter()
            .filter_map(|rep| jacobi_coefficients_with(n, &a, &b, rep))
            .collect();
        for f in &forms[1.min(forms.len())..] {
            prop_assert_eq!(&f.coefficients, &forms[0].coefficients, "{:?} vs {:?}", f.representation, forms[0].representation);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn watson_first_coefficient(a in -2.0f64..2.0, b in -2.0f64..2.0, cc in -2.0f64..2.0, x in -3.0f64..0.4) {
        let z = c(x, 0.0);
        let series = hypasym::asym::watson_coefficients(c(a, 0.0), c(b, 0.0), c(cc, 0.0), z, 2).unwrap();
        let expected = c((b - 1.0) / 2.0 + 1.0 - cc + a * x, 0.0);
        prop_assert!((series.coefficients[0] - 1.0).norm() <= 1e-15);
        prop_assert!((series.coefficients[1] - expected).norm() <= 1e-13 * (1.0 + expected.norm()));
    }

    #[test]
    fn roots_reproduce_the_constant_term(n in 1usize..=14, a in small_rational(), b in small_rational()) {
        let Ok(p) = hypasym::jacobi::jacobi_coefficients(n, &a, &b) else { return Ok(()) };
        prop_assume!(p.degree() == n);
        // integer alpha or beta in [-n, -1] gives a repeated root at +-1
        let repeated = |r: &Rational| r.is_integer() && *r < rational(0, 1) && *r >= rational(-(n as i64), 1);
        prop_assume!(!repeated(&a) && !repeated(&b));
        let a0 = hypasym::scalar::rational_to_f64(&p.coefficients[0]);
        let an = hypasym::scalar::rational_to_f64(&p.coefficients[n]);
        prop_assume!(a0 != 0.0);
        let zeros = hypasym::jacobi::find_roots(&p, hypasym::jacobi::DEFAULT_SEED).unwrap();
        prop_assert!(zeros.converged);
        prop_assert_eq!(zeros.roots.len(), n);
        let prod: C64 = zeros.roots.iter().product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let expected = c(sign * a0 / an, 0.0);
        prop_assert!(rel_diff(prod, expected) <= 1e-9, "{} vs {}", prod, expected);
    }

    #[test]
    fn bcase_bridge_is_exact(n in 0u64..=20, p in 0i64..60, q in 1i64..20) {
        let z = rational(p, q);
        prop_assert_eq!(
            hypasym::asym::bcase_jacobi_bridge_exact(n, &z).unwrap(),
            hypasym::asym::bcase_exact(n, &z)
        );
    }
}

#[test]
fn larcombe_values_are_positive_and_approach_two_from_above() {
    let records = hypasym::f32lab::larcombe_records(120);
    let excess: Vec<f64> = records[3..].iter().map(|r| hypasym::scalar::rational_to_f64(&r.f_exact) - 2.0).collect();
    assert!(excess.iter().all(|&e| e > 0.0));
    assert!(excess.windows(2).all(|w| w[1] < w[0]));
    assert!(records.iter().all(|r| r.identity_residual == 0.0));
}

#[test]
fn bcase_leading_term_improves_with_n_at_the_coalescence_point() {
    let err = |n: u64| {
        let exact = hypasym::scalar::rational_to_f64(&hypasym::asym::bcase_exact(n, &rational(1, 1)));
        (hypasym::asym::bcase_erfc_approx(n, 1.0).unwrap() / exact - 1.0).abs()
    };
    let (e25, e100, e400) = (err(25), err(100), err(400));
    assert!(e100 < e25 && e400 < e100, "{e25} {e100} {e400}");
}
