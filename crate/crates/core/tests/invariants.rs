use proptest::prelude::*;

use gegenpsd::codebounds::{enumerate_patterns, estimate_b, q_omega, PairAverageCertificate, PartitionPattern};
use gegenpsd::constraints::{
    delta_member, euclid_kernel, h_map, lambda_member, make_pair, reconstruct, s_lambda_member, FeasiblePair,
};
use gegenpsd::gegenbauer::{coeffs_1d, eval_1d, eval_mv_raw, expand_in_t, gmv_tpoly, q_matrix, telescope};
use gegenpsd::poly::{TPoly, UvMonomial, UvPoly};
use gegenpsd::rng::SplitMix64;
use gegenpsd::spherical::{factorized_kernel, kernel_matrix, sample_sphere, PointConfiguration};
use gegenpsd::symlin::{gram, hadamard, SymmetricMatrix, DEFAULT_PSD_TOL};

fn random_psd(rng: &mut SplitMix64, dim: usize) -> SymmetricMatrix {
    let rank = 1 + rng.below(dim);
    let pts: Vec<Vec<f64>> = (0..dim).map(|_| (0..rank).map(|_| rng.gaussian()).collect()).collect();
    gram(&PointConfiguration::new_euclidean(rank, pts).unwrap()).unwrap()
}

fn random_symmetric(rng: &mut SplitMix64, dim: usize) -> SymmetricMatrix {
    let upper = (0..dim * (dim + 1) / 2).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
    SymmetricMatrix::from_upper(dim, upper).unwrap()
}

fn domain_point(rng: &mut SplitMix64, m: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let u = rng.ball_point(m);
    let v = rng.ball_point(m);
    let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    (uv + rng.uniform_in(-1.0, 1.0) * ((1.0 - uu) * (1.0 - vv)).max(0.0).sqrt(), u, v)
}

fn determinant(m: &SymmetricMatrix) -> f64 {
    m.eigenvalues().iter().product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_sum_to_trace(seed in any::<u64>(), dim in 1usize..16) {
        let a = random_symmetric(&mut SplitMix64::new(seed), dim);
        let vals = a.eigenvalues();
        let scale = vals.iter().fold(0.0f64, |x, v| x.max(v.abs())).max(1.0);
        prop_assert!((vals.iter().sum::<f64>() - a.trace()).abs() <= 1e-10 * dim as f64 * scale);
    }

    #[test]
    fn hadamard_keeps_psd(seed in any::<u64>(), dim in 2usize..13) {
        let mut rng = SplitMix64::new(seed);
        let a = random_psd(&mut rng, dim);
        let b = random_psd(&mut rng, dim);
        prop_assert!(hadamard(&a, &b).unwrap().is_psd(DEFAULT_PSD_TOL).is_psd);
    }

    #[test]
    fn realize_inverts_gram(seed in any::<u64>(), dim in 1usize..12) {
        let a = random_psd(&mut SplitMix64::new(seed), dim);
        let back = gram(&a.realize(1e-12).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a).unwrap() < 1e-8 * a.max_abs().max(1.0));
    }

    #[test]
    fn psd_entry_sum_nonnegative(seed in any::<u64>(), dim in 1usize..12) {
        let a = random_psd(&mut SplitMix64::new(seed), dim);
        let scale = a.eigen().scale();
        prop_assert!(a.entry_sum() >= -DEFAULT_PSD_TOL * (dim * dim) as f64 * scale);
    }

    #[test]
    fn normalized_at_one(n in 2u32..=12, k in 0u32..=10) {
        prop_assert!((eval_1d(n, k, 1.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_match_recurrence(n in 2u32..=12, k in 0u32..=10, t in -1.0f64..=1.0) {
        let c = coeffs_1d(n, k).unwrap();
        prop_assert!((c.eval(t) - eval_1d(n, k, t).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn q_matrix_determinant(seed in any::<u64>(), m in 0usize..=4) {
        let (t, u, v) = domain_point(&mut SplitMix64::new(seed), m);
        let uu: f64 = u.iter().map(|x| x * x).sum();
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let expected = (1.0 - uu) * (1.0 - vv) - (t - uv).powi(2);
        prop_assert!((determinant(&q_matrix(t, &u, &v).unwrap()) - expected).abs() < 1e-10);
    }

    #[test]
    fn telescoping_reproduces_level_m(seed in any::<u64>(), n in 3u32..=8, k in 0u32..=5) {
        let mut rng = SplitMix64::new(seed);
        let m = rng.below(n as usize - 1) as u32;
        let l = m + rng.below((n - 1 - m) as usize) as u32;
        let (t, u, v) = domain_point(&mut rng, l as usize);
        let f = telescope(&u, &v, n, m, l, k).unwrap();
        let rebuilt: f64 = f.iter().enumerate().map(|(s, fs)| fs * eval_mv_raw(n, s as u32, t, &u, &v).unwrap()).sum();
        let direct = eval_mv_raw(n, k, t, &u[..m as usize], &v[..m as usize]).unwrap();
        prop_assert!((rebuilt - direct).abs() < 1e-9, "{rebuilt} vs {direct}");
    }

    #[test]
    fn expansion_round_trip(seed in any::<u64>(), n in 4u32..=7) {
        let mut rng = SplitMix64::new(seed);
        let m = 1 + rng.below(2);
        let mut coeffs = Vec::new();
        for _ in 0..=3 {
            let mut c = UvPoly::zero(m);
            for _ in 0..3 {
                let mut mono = UvMonomial::one(m);
                mono.upow[rng.below(m)] += rng.below(3) as u32;
                mono.vpow[rng.below(m)] += rng.below(3) as u32;
                c.add_term(mono, rng.uniform_in(-1.0, 1.0));
            }
            coeffs.push(c);
        }
        let f = TPoly::new(m, coeffs).unwrap();
        let fk = expand_in_t(&f, n, m as u32).unwrap();
        for _ in 0..100 {
            let (t, u, v) = domain_point(&mut rng, m);
            let rebuilt: f64 = fk
                .iter()
                .enumerate()
                .map(|(k, c)| c.eval(&u, &v) * gmv_tpoly(n, m as u32, k as u32).unwrap().eval(t, &u, &v))
                .sum();
            prop_assert!((rebuilt - f.eval(t, &u, &v)).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_psd_and_factorized(seed in any::<u64>(), n in 3usize..=7, r in 1usize..20, k in 0u32..=6) {
        let c = sample_sphere(n, r, seed).unwrap();
        let m = (seed % (n as u64 - 1)) as u32;
        let kern = kernel_matrix(&c, m, k).unwrap();
        prop_assert!(kern.is_psd(DEFAULT_PSD_TOL).is_psd);
        let fact = factorized_kernel(&c, m, k).unwrap();
        prop_assert!(fact.max_abs_diff(&kern.base).unwrap() < 1e-10);
    }

    #[test]
    fn duplicated_points_stay_psd(seed in any::<u64>(), n in 3usize..=6, k in 0u32..=6) {
        let base = sample_sphere(n, 6, seed).unwrap();
        let mut pts = base.points().to_vec();
        pts.extend_from_slice(&base.points()[..3]);
        let c = PointConfiguration::new_sphere(n, pts).unwrap();
        for m in 0..=(n as u32 - 2) {
            prop_assert!(kernel_matrix(&c, m, k).unwrap().is_psd(DEFAULT_PSD_TOL).is_psd);
        }
    }

    #[test]
    fn realizable_pairs_nested(seed in any::<u64>(), n in 3usize..=6, r in 2usize..12) {
        let pair = FeasiblePair::from_points(&sample_sphere(n, r, seed).unwrap()).unwrap();
        for m in 0..=n - 2 {
            prop_assert!(lambda_member(&pair, m, 4, DEFAULT_PSD_TOL).unwrap().member);
        }
        prop_assert!(delta_member(&pair, DEFAULT_PSD_TOL).unwrap().member);
        for m in 1..=n - 2 {
            prop_assert!(s_lambda_member(&pair, m, 3, DEFAULT_PSD_TOL).unwrap().member);
        }
    }

    #[test]
    fn reconstruct_round_trip(seed in any::<u64>(), n in 2usize..=6, r in 1usize..10) {
        let pair = FeasiblePair::from_points(&sample_sphere(n, r, seed).unwrap()).unwrap();
        let rebuilt = make_pair(pair.t().clone(), pair.u().clone(), n).unwrap();
        let rec = reconstruct(&rebuilt).unwrap();
        prop_assert!(rec.max_error < 1e-8);
        let again = FeasiblePair::from_points(&rec.points).unwrap();
        prop_assert!(again.t().max_abs_diff(pair.t()).unwrap() < 1e-8);
    }

    #[test]
    fn h_map_is_euclid_kernel(seed in any::<u64>(), n in 2usize..=6, r in 1usize..12, k in 0u32..=5) {
        let mut rng = SplitMix64::new(seed);
        let pts: Vec<Vec<f64>> =
            (0..r).map(|_| (0..n).map(|_| rng.uniform_in(0.2, 2.0) * rng.gaussian()).collect()).collect();
        let p = PointConfiguration::new_euclidean(n, pts).unwrap();
        let a = gram(&p).unwrap();
        let h = h_map(&a, n as u32, k, 1e-9).unwrap();
        let e = euclid_kernel(&p, 0, k).unwrap();
        prop_assert!(h.max_abs_diff(&e).unwrap() < 1e-10 * e.max_abs().max(1.0));
    }

    #[test]
    fn pattern_counts_sum(d in 1u32..=6, big_n in 1u64..=20) {
        let total: u128 = enumerate_patterns(d).unwrap().iter().map(|w| q_omega(w, big_n).unwrap()).sum();
        prop_assert_eq!(total, u128::from(big_n).pow(d - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimate_b_monotone_in_budget(seed in any::<u64>(), budget in 4u64..40) {
        let g = gegenpsd::poly::Poly1::new(vec![0.0, 1.0, 1.0]);
        let cert = PairAverageCertificate::new(&g, 4, std::f64::consts::FRAC_PI_2, 1).unwrap();
        let problem = &cert.problem;
        for omega in enumerate_patterns(3).unwrap() {
            let small = estimate_b(&omega, problem, budget, seed).unwrap();
            let large = estimate_b(&omega, problem, 2 * budget, seed).unwrap();
            prop_assert!(large.value >= small.value);
            prop_assert!(large.value <= cert.b_values[&omega] + 1e-12, "{omega}: {} > {}", large.value, cert.b_values[&omega]);
        }
        let full = estimate_b(&PartitionPattern::full(3), problem, budget, seed).unwrap();
        prop_assert_eq!(full.value, problem.f.diagonal_value());
    }
}
