use num_complex::Complex64;
use pbk_core::padic::arith::{nu, split_modulus};
use pbk_core::padic::*;
use pbk_core::Error;

fn rat(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

/// Direct classical sum with complex phases, the independent oracle.
fn classical_oracle(m: i64, n: i64, c: u64) -> Complex64 {
    let c = c as i64;
    let mut s = Complex64::new(0.0, 0.0);
    for x in 0..c {
        let xinv = (0..c).find(|y| (x * y).rem_euclid(c) == 1 % c);
        if let Some(xi) = xinv {
            let ph = (m * x + n * xi).rem_euclid(c) as f64 / c as f64;
            s += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ph);
        }
    }
    s
}

#[test]
fn z_k0_examples() {
    let id = PAdicMatrix::from_integers(1, 0, 0, 1, 5).unwrap();
    for r in 0..4 {
        assert!(in_z_k0(&id, r));
    }
    let w = PAdicMatrix::from_integers(0, -1, 1, 0, 11).unwrap();
    assert!(!in_z_k0(&w, 1));
    assert!(in_z_k0(&w, 0));
    let central = PAdicMatrix::from_integers(3, 0, 0, 3, 3).unwrap();
    assert!(in_z_k0(&central, 0));
    assert!(in_z_k0(&central, 2));
    let half = PAdicMatrix::new(rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 1), 2).unwrap();
    assert!(!in_z_k0(&half, 0));
}

#[test]
fn orbital_examples() {
    let f = LocalTestFunction::new(7, 0).unwrap();
    for (m, n) in [(1, 1), (3, -2), (0, 5)] {
        let v = local_orbital_integral(&f, m, n, rat(3, 5)).unwrap();
        assert!((v.re() - 1.0).abs() < 1e-14 && v.im().abs() < 1e-14);
    }
    let f2 = LocalTestFunction::new(2, 0).unwrap();
    let v = local_orbital_integral(&f2, 1, 1, rat(1, 4)).unwrap();
    assert!((v.re() - 1.0).abs() < 1e-12 && v.im().abs() < 1e-12);
    assert!((v.re() - kloosterman_classical(1, 1, 2)).abs() < 1e-12);
    let f3 = LocalTestFunction::new(3, 0).unwrap();
    let v = local_orbital_integral(&f3, 1, 1, rat(1, 9)).unwrap();
    assert!((v.re() + 1.0).abs() < 1e-12 && v.im().abs() < 1e-12);
}

#[test]
fn orbital_depth_guard_runs() {
    let f = LocalTestFunction::new(3, 1).unwrap();
    let r = local_orbital_integral_with(&f, 2, 1, rat(1, 81), &EnumerationBudget::default()).unwrap();
    assert_eq!(r.depth_certified, Some(true));
    assert_eq!(r.constancy_depth, 0);
}

#[test]
fn orbital_budget_error() {
    let f = LocalTestFunction::new(13, 0).unwrap();
    let tiny = EnumerationBudget { max_cells: 100 };
    let err = local_orbital_integral_with(&f, 1, 1, rat(1, 169 * 169), &tiny).unwrap_err();
    assert!(matches!(err, Error::Budget { .. }));
}

#[test]
fn generic_enumeration_matches_fibered() {
    let cases: &[(u64, u32, i128)] = &[(2, 0, 2), (2, 0, 4), (2, 0, 8), (2, 1, 2), (2, 2, 4), (2, 2, 8), (3, 0, 3), (3, 0, 9), (3, 1, 3), (3, 1, 9), (5, 0, 5), (5, 1, 5), (5, 1, 25), (7, 1, 7), (11, 1, 11), (2, 1, 6), (3, 1, 15)];
    for &(p, r, c) in cases {
        let f = LocalTestFunction::new(p, r).unwrap();
        for (m, n) in [(1, 1), (2, 3), (-1, 4), (0, 1), (6, 0)] {
            let mu = rat(1, c * c);
            let g = local_orbital_integral(&f, m, n, mu).unwrap();
            let h = local_orbital_fibered(&f, m, n, &mu).unwrap();
            let d = (g.to_complex() - h).norm();
            assert!(d < 1e-10, "p={p} r={r} c={c} m={m} n={n}: {g:?} vs {h}");
        }
    }
}

#[test]
fn odd_valuation_and_undersized_modulus_vanish() {
    let f = LocalTestFunction::new(3, 0).unwrap();
    let v = local_orbital_integral(&f, 1, 1, rat(1, 3)).unwrap();
    assert!(v.norm() < 1e-12);
    let f = LocalTestFunction::new(11, 1).unwrap();
    let v = local_orbital_integral(&f, 1, 1, rat(1, 1)).unwrap();
    assert!(v.norm() < 1e-12);
}

#[test]
fn diagonal_examples() {
    for p in [2, 3, 5, 11] {
        let f = LocalTestFunction::new(p, 0).unwrap();
        assert!((local_diagonal_integral(&f, 1).unwrap().re() - 1.0).abs() < 1e-14);
    }
    let f = LocalTestFunction::new(11, 1).unwrap();
    assert!((local_diagonal_integral(&f, 1).unwrap().re() - 12.0).abs() < 1e-12);
    let f = LocalTestFunction::new(2, 2).unwrap();
    assert!((local_diagonal_integral(&f, 3).unwrap().re() - 6.0).abs() < 1e-12);
}

#[test]
fn classical_examples() {
    for (m, n) in [(0, 0), (5, -3), (17, 2)] {
        assert_eq!(kloosterman_classical(m, n, 1), 1.0);
    }
    assert!((kloosterman_classical(1, 1, 2) - 1.0).abs() < 1e-14);
    assert!((kloosterman_classical(1, 1, 3) + 1.0).abs() < 1e-14);
    // Ramanujan sum: S(0, 1, c) = μ(c)
    assert!((kloosterman_classical(0, 1, 30) + 1.0).abs() < 1e-12);
    assert!(kloosterman_classical(0, 1, 12).abs() < 1e-12);
}

#[test]
fn classical_matches_oracle_and_weil() {
    for c in 1..=60u64 {
        for m in -3..=6i64 {
            for n in [1i64, 2, 5, 12] {
                let s = kloosterman_classical(m, n, c);
                let o = classical_oracle(m, n, c);
                assert!((s - o.re).abs() < 1e-10 && o.im.abs() < 1e-10, "S({m},{n},{c})");
                assert!(s.abs() <= weil_bound(m, n, c) + 1e-9, "Weil S({m},{n},{c})={s}");
            }
        }
    }
}

#[test]
fn trivial_level_generalized_is_classical() {
    let f = GlobalTestFunction::trivial();
    for c in 1..=50u64 {
        for m in 1..=10 {
            for n in 1..=10 {
                let h = kloosterman_generalized(&f, m, n, c).unwrap();
                assert_eq!(h.path, KloostermanPath::ExactLocal);
                let s = kloosterman_classical(m, n, c);
                assert!((h.value.re() - s).abs() < 1e-9, "H({m},{n},{c})");
                assert!(h.value.im().abs() < 1e-9);
            }
        }
    }
}

#[test]
fn trivial_bound_holds() {
    for level in [1u64, 11, 12] {
        let f = GlobalTestFunction::of_level(level).unwrap();
        let e = KloostermanEngine::new(f.clone());
        for c in 1..=150u64 {
            for (m, n) in [(1, 1), (2, 7), (-3, 5), (12, 12)] {
                let h = e.exact_complex(m, n, c).unwrap();
                assert!(h.norm() <= trivial_bound(&f, c) + 1e-9);
            }
        }
    }
}

#[test]
fn factorization_sweep_levels_11_and_12() {
    for level in [11u64, 12] {
        let f = GlobalTestFunction::of_level(level).unwrap();
        let mut e = KloostermanEngine::new(f);
        let cases = factorization_cases(level, 50);
        let report = e.validate_fast_path(&cases, 1e-9).unwrap();
        assert_eq!(report.cases.len(), 50);
        assert!(report.pass, "level {level}: {}", report.max_relative_error);
        assert!(e.fast_path_enabled());
        // the sweep must contain nonzero values for the check to mean anything
        assert!(report.cases.iter().filter(|c| c.exact.abs() > 1e-6).count() > 10);
        for &(m, n, c) in &cases {
            let v = e.evaluate(m, n, c).unwrap();
            assert_eq!(v.path, KloostermanPath::ClassicalFast);
            assert_eq!(v.value.im(), 0.0);
        }
    }
}

#[test]
fn level_n_support_is_in_n_z() {
    for level in [11u64, 12] {
        let f = GlobalTestFunction::of_level(level).unwrap();
        let e = KloostermanEngine::new(f);
        for c in 1..=120u64 {
            if c % level != 0 {
                for (m, n) in [(1, 1), (1, 2), (3, 5)] {
                    assert!(e.exact_complex(m, n, c).unwrap().norm() < 1e-12);
                }
            } else {
                let (_, cn) = split_modulus(c, level);
                assert_eq!(cn % level, 0);
            }
        }
    }
}

#[test]
fn admissible_examples() {
    let grid: Vec<(i64, i64)> = (1..=3).flat_map(|m| (1..=3).map(move |n| (m, n))).collect();
    let r = admissible_moduli(&GlobalTestFunction::trivial(), 10, &grid).unwrap();
    assert_eq!(r.admissible, (1..=10).collect::<Vec<_>>());
    assert_eq!(r.conductor_estimate, Some(1));

    let f = GlobalTestFunction::of_level(11).unwrap();
    let r = admissible_moduli(&f, 50, &grid).unwrap();
    assert!(!r.admissible.is_empty());
    assert!(r.admissible.iter().all(|c| [11, 22, 33, 44].contains(c)));
    assert_eq!(r.conductor_estimate, Some(11));
    for c in &r.admissible {
        assert_eq!(c % r.conductor_estimate.unwrap(), 0);
    }
    assert!(admissible_moduli(&f, 0, &grid).is_err());
    assert!(admissible_moduli(&f, 5, &[]).is_err());
}

#[test]
fn admissible_scan_is_deterministic() {
    let f = GlobalTestFunction::of_level(12).unwrap();
    let grid = [(1, 1), (2, 5)];
    let a = admissible_moduli(&f, 100, &grid).unwrap();
    let b = admissible_moduli(&f, 100, &grid).unwrap();
    assert_eq!(a, b);
}

#[test]
fn delta_p_examples_and_diagonal_agreement() {
    assert_eq!(local_weight_delta_p(&LocalTestFunction::new(5, 0).unwrap()).unwrap(), 1.0);
    assert!((local_weight_delta_p(&LocalTestFunction::new(11, 1).unwrap()).unwrap() - 12.0).abs() < 1e-12);
    assert!((local_weight_delta_p(&LocalTestFunction::new(2, 2).unwrap()).unwrap() - 6.0).abs() < 1e-12);
    for p in [2u64, 3, 5, 7, 11, 13] {
        for r in 0..=2 {
            let f = LocalTestFunction::new(p, r).unwrap();
            let delta = local_weight_delta_p(&f).unwrap();
            assert!((delta - nu(p.pow(r)) as f64).abs() < 1e-9);
            for m in [1i64, 2, 3] {
                if m % p as i64 == 0 {
                    continue;
                }
                let d = local_diagonal_integral(&f, m).unwrap();
                assert!((d.re() - delta).abs() < 1e-9 && d.im().abs() < 1e-9, "p={p} r={r} m={m}");
            }
        }
    }
}

#[test]
fn newform_projector_rejected() {
    let f = LocalTestFunction::newform_projector(11, 1).unwrap();
    assert!(matches!(local_weight_delta_p(&f), Err(Error::UnsupportedVariant(_))));
    assert!(local_diagonal_integral(&f, 1).is_err());
    assert!(local_orbital_integral(&f, 1, 1, rat(1, 121)).is_err());
}

#[test]
fn l_pi_one_examples() {
    let one = l_pi_one(LocalRepKind::ConductorOne, Complex64::new(0.0, 0.0), 11).unwrap();
    assert!((one.re - 11.0 / 12.0).abs() < 1e-15);
    let two = l_pi_one(LocalRepKind::ConductorAtLeastTwo, Complex64::new(0.0, 0.0), 2).unwrap();
    assert!((two.re - 0.5).abs() < 1e-15);
    let th = Complex64::new(std::f64::consts::FRAC_PI_2, 0.0);
    let u = l_pi_one(LocalRepKind::Unramified, th, 3).unwrap();
    let expected = (1.0 - 1.0 / 9.0) / ((4.0 / 3.0) * (2.0 / 3.0) * (4.0 / 3.0));
    assert!((u.re - expected).abs() < 1e-14 && u.im.abs() < 1e-14);
    // complementary series parameter gives a real value
    let cs = l_pi_one(LocalRepKind::Unramified, Complex64::new(0.0, 0.25 * 5f64.ln()), 5).unwrap();
    assert!(cs.im.abs() < 1e-14 && cs.re > 0.0);
    assert!(l_pi_one(LocalRepKind::Unramified, Complex64::new(4.0, 0.0), 3).is_err());
    assert!(l_pi_one(LocalRepKind::Unramified, Complex64::new(0.0, 0.6 * 3f64.ln()), 3).is_err());
    assert!(l_pi_one(LocalRepKind::ConductorOne, Complex64::new(0.0, 0.0), 12).is_err());
}

#[test]
fn theta_p_is_a_character_on_principal_parts() {
    let a = rat(5, 12);
    let b = rat(7, 18);
    for p in [2u64, 3] {
        let lhs = theta_p(&(a + b), p);
        let rhs = theta_p(&a, p) * theta_p(&b, p);
        assert!((lhs - rhs).norm() < 1e-13);
        assert!((theta_p(&rat(5, 1), p) - 1.0).norm() < 1e-15);
    }
}
