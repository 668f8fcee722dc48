use eabp::algebra::{constrained_tensor, hard_params, InheritanceTensor, StochasticPair, TwoByTwoParams};
use eabp::dynamics::{
    classify, evolve, evolve_2x2, evolve_hard, fixed_points_2x2, fixed_points_symmetric, iterate,
    jacobian, limit_hard, numeric_jacobian, reduced_map, two_periodic, Family, FamilyShape, Operator,
    PopulationState, Stability, FIXED_POINT_RESIDUAL_TOL,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distribution(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_map(|mut v| {
        v.iter_mut().for_each(|c| *c += 1e-3);
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|c| *c /= s);
        v
    })
}

fn sizes() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

fn state(n: usize, nu: usize) -> impl Strategy<Value = PopulationState> {
    (distribution(n), distribution(nu)).prop_map(|(x, y)| PopulationState::new(x, y).unwrap())
}

fn sized_state() -> impl Strategy<Value = PopulationState> {
    sizes().prop_flat_map(|(n, nu)| state(n, nu))
}

fn random_tensor(n: usize, nu: usize) -> impl Strategy<Value = InheritanceTensor<f64>> {
    let rows = n * nu;
    (
        prop::collection::vec(distribution(n), rows),
        prop::collection::vec(distribution(nu), rows),
    )
        .prop_map(move |(f, m)| {
            InheritanceTensor::from_fn(n, nu, |i, k, j| f[i * nu + k][j], |i, k, l| m[i * nu + k][l])
        })
}

fn unit() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

fn params() -> impl Strategy<Value = TwoByTwoParams<f64>> {
    (unit(), unit(), unit(), unit()).prop_map(|(a, b, c, d)| TwoByTwoParams { a, b, c, d })
}

fn assert_on_simplex(z: &PopulationState) {
    for part in [z.x(), z.y()] {
        assert!(part.iter().all(|c| *c >= -1e-12), "negative coordinate in {part:?}");
        assert!((part.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "sum of {part:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn general_operator_preserves_simplex(
        (t, z) in sizes().prop_flat_map(|(n, nu)| (random_tensor(n, nu), state(n, nu)))
    ) {
        assert_on_simplex(&evolve(&t, &z).unwrap());
    }

    #[test]
    fn hard_operator_preserves_simplex(z in sized_state()) {
        assert_on_simplex(&evolve_hard(&z));
    }

    #[test]
    fn two_by_two_stays_in_unit_square(p in params(), x in unit(), y in unit()) {
        let (u, v) = evolve_2x2(&p, (x, y));
        prop_assert!((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hard_fast_path_matches_tensor(z in sized_state()) {
        let t = constrained_tensor(&hard_params::<f64>(z.n(), z.nu())).unwrap();
        prop_assert!(evolve(&t, &z).unwrap().distance(&evolve_hard(&z)) <= 1e-14);
    }

    #[test]
    fn two_by_two_matches_lifted_tensor(p in params(), x in unit(), y in unit()) {
        let t = constrained_tensor(&p.stochastic_pair()).unwrap();
        let full = evolve(&t, &PopulationState::from_pair(x, y)).unwrap();
        let (u, v) = evolve_2x2(&p, (x, y));
        prop_assert!((full.pair().0 - u).abs() <= 1e-12 && (full.pair().1 - v).abs() <= 1e-12);
    }

    #[test]
    fn square_of_state_is_its_image(
        (t, z) in sizes().prop_flat_map(|(n, nu)| (random_tensor(n, nu), state(n, nu)))
    ) {
        let table = eabp::algebra::table_from_tensor(&t);
        let el = eabp::algebra::AlgebraElement::new(z.x().to_vec(), z.y().to_vec());
        let sq = eabp::algebra::multiply(&el, &el, &table).unwrap();
        let image = evolve(&t, &z).unwrap();
        for (a, b) in sq.coords().iter().zip(image.coords()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn hard_trajectory_conserves_gap_and_is_monotone(z in sized_state()) {
        let mut cur = z;
        for _ in 0..50 {
            let next = evolve_hard(&cur);
            let before = cur.x()[0] - cur.y()[0];
            let after = next.x()[0] - next.y()[0];
            prop_assert!((before - after).abs() <= 1e-12);
            prop_assert!(next.x()[0] >= cur.x()[0] - 1e-14);
            for (a, b) in next.x()[1..].iter().zip(&cur.x()[1..]) {
                prop_assert!(*a <= *b + 1e-14);
            }
            cur = next;
        }
    }

    #[test]
    fn symmetric_gap_contracts_by_b(a in unit(), b in unit(), x in unit(), y in unit()) {
        let p = TwoByTwoParams { a, b, c: a, d: b };
        let mut cur = (x, y);
        for _ in 0..50 {
            let next = evolve_2x2(&p, cur);
            prop_assert!(((next.0 - next.1) - b * (cur.0 - cur.1)).abs() <= 1e-12);
            cur = next;
        }
    }

    #[test]
    fn diagonal_is_invariant(a in unit(), b in unit(), x in unit()) {
        let p = TwoByTwoParams { a, b, c: a, d: b };
        let mut cur = (x, x);
        let mut on_line = x;
        for _ in 0..50 {
            cur = evolve_2x2(&p, cur);
            on_line = reduced_map(a, b, on_line);
            prop_assert!((cur.0 - cur.1).abs() <= 1e-12);
            prop_assert!((cur.0 - on_line).abs() <= 1e-12);
        }
    }

    #[test]
    fn jt_matches_finite_differences(p in params(), x in unit(), y in unit()) {
        let op = Operator::TwoByTwo(p);
        let diff = jacobian(&op, &[x, y]) - numeric_jacobian(&op, &[x, y], 1e-6);
        prop_assert!(diff.amax() <= 1e-6);
    }

    #[test]
    fn jh_matches_finite_differences(z in sizes().prop_filter("nontrivial", |s| s.0 + s.1 > 2).prop_flat_map(|(n, nu)| state(n, nu))) {
        let op = Operator::Hard { n: z.n(), nu: z.nu() };
        let r = z.reduced();
        let diff = jacobian(&op, &r) - numeric_jacobian(&op, &r, 1e-6);
        prop_assert!(diff.amax() <= 1e-6);
    }

    #[test]
    fn fixed_points_2x2_pass_residual_and_class_checks(p in params()) {
        let report = fixed_points_2x2(&p).unwrap();
        let op = Operator::TwoByTwo(p);
        for fp in &report.points {
            let image = op.apply(&fp.state).unwrap();
            prop_assert!(image.distance(&fp.state) <= FIXED_POINT_RESIDUAL_TOL);
            prop_assert_eq!(classify(&fp.eigenvalues).unwrap(), fp.class);
        }
        for fam in &report.families {
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let z = fam.point_at(t).unwrap();
                prop_assert!(op.apply(&z).unwrap().distance(&z) <= FIXED_POINT_RESIDUAL_TOL);
            }
        }
    }

    #[test]
    fn symmetric_fixed_point_is_fixed(a in unit(), b in 0.0f64..0.999) {
        let report = fixed_points_symmetric(a, b).unwrap();
        let x = report.points[0].state.pair().0;
        prop_assert!((reduced_map(a, b, x) - x).abs() <= 1e-12);
    }

    #[test]
    fn two_cycle_properties(b in 0.0f64..0.999, s in 0.001f64..=1.0) {
        let lo = 1.0 - (1.0 - b) * (1.0 - b) / 4.0;
        let a = lo + s * (1.0 - lo);
        prop_assume!(a > lo && a != b);
        let orbit = two_periodic(a, b).unwrap();
        prop_assert!((reduced_map(a, b, orbit.p1) - orbit.p2).abs() <= 1e-12);
        prop_assert!((reduced_map(a, b, orbit.p2) - orbit.p1).abs() <= 1e-12);
        prop_assert!(orbit.p1 != orbit.p2);
        prop_assert!(orbit.multiplier.abs() < 1.0);
        let fp1 = b - 2.0 * a - 2.0 * (b - a) * orbit.p1;
        let fp2 = b - 2.0 * a - 2.0 * (b - a) * orbit.p2;
        prop_assert!((fp1 * fp2 - orbit.multiplier).abs() <= 1e-9);
    }

    #[test]
    fn classification_matches_moduli(re in prop::collection::vec(-3.0f64..3.0, 1..5)) {
        let eigs: Vec<Complex64> = re.iter().map(|r| Complex64::new(*r, 0.0)).collect();
        let class = classify(&eigs).unwrap();
        let m: Vec<f64> = re.iter().map(|r| r.abs()).collect();
        let expected = if m.iter().any(|v| (v - 1.0).abs() <= 1e-9) {
            Stability::NonHyperbolic
        } else if m.iter().all(|v| *v < 1.0) {
            Stability::Attracting
        } else if m.iter().all(|v| *v > 1.0) {
            Stability::Repelling
        } else {
            Stability::Saddle
        };
        prop_assert_eq!(class, expected);
    }
}

#[test]
fn iterated_hard_limit_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let op = Operator::Hard { n: 3, nu: 3 };
    for _ in 0..100 {
        let z0 = eabp::dynamics::random_state(3, 3, &mut rng);
        let tr = iterate(&op, &z0, 100_000, 1e-12).unwrap();
        assert!(tr.last().distance(&limit_hard(&z0).limit) <= 1e-8);
    }
}

#[test]
fn curve_p_second_eigenvalue_bound() {
    for ia in 1..100 {
        let a = ia as f64 / 100.0;
        let bound = a.max((1.0 - 2.0 * a.sqrt()).abs());
        assert!(bound < 1.0);
        let op = Operator::TwoByTwo(TwoByTwoParams { a, b: 1.0, c: a, d: 1.0 });
        let report = fixed_points_2x2(&TwoByTwoParams { a, b: 1.0, c: a, d: 1.0 }).unwrap();
        let family = &report.families[0];
        assert!(matches!(family.shape, FamilyShape::CurveP { .. }));
        assert_eq!(family.family, Family::CurveP);
        for iy in 0..100 {
            let y = iy as f64 / 99.0;
            let z = family.point_at(y).unwrap();
            let eigs = eabp::linalg::eigenvalues(&jacobian(&op, &z.reduced()));
            let (unit_root, other): (Vec<&Complex64>, Vec<&Complex64>) =
                eigs.iter().partition(|l| (l.re - 1.0).abs() < 1e-9);
            assert_eq!(unit_root.len(), 1, "a={a} y={y}: {eigs:?}");
            assert!(other[0].norm() <= bound + 1e-12, "a={a} y={y}: {eigs:?}");
        }
    }
}

#[test]
fn simplex_preserved_along_general_trajectories() {
    let sp = StochasticPair::new(
        vec![vec![0.2, 0.5, 0.3], vec![0.1, 0.1, 0.8], vec![0.6, 0.2, 0.2]],
        vec![vec![0.7, 0.3], vec![0.4, 0.6]],
    )
    .unwrap();
    let op = Operator::general(constrained_tensor(&sp).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let z0 = eabp::dynamics::random_state(3, 2, &mut rng);
    let tr = iterate(&op, &z0, 5_000, 1e-15).unwrap();
    for z in &tr.states {
        assert_on_simplex(z);
    }
    for w in tr.states.windows(2) {
        assert!(op.apply(&w[0]).unwrap().distance(&w[1]) <= 1e-12);
    }
}
