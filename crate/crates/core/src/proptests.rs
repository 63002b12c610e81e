use num_complex::Complex;
use proptest::prelude::*;

use crate::binary::{estimation_matching_score, majority_voting_score, optimal_binary_pom};
use crate::linalg::{eig_hermitian, inv_sqrt_psd, support_projector, Matrix};
use crate::multi::{multi_score_operators, shift_operator, srm_template_pom};
use crate::qstates::{bloch_state, n_copy_bosonic};

fn hermitian(max_dim: usize) -> impl Strategy<Value = Matrix<f64>> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |xs| {
            let raw: Vec<_> = xs.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
            Matrix::from_entries(d, raw).unwrap().hermitian_part()
        })
    })
}

/// `X X^H` with `X` of shape `d x r`, so rank at most `r`.
fn psd(max_dim: usize) -> impl Strategy<Value = Matrix<f64>> {
    (1..=max_dim)
        .prop_flat_map(|d| (Just(d), 1..=d))
        .prop_flat_map(|(d, r)| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * r).prop_map(move |xs| {
                Matrix::from_fn(d, |k, l| {
                    (0..r).fold(Complex::new(0.0, 0.0), |acc, j| {
                        let a = xs[k * r + j];
                        let b = xs[l * r + j];
                        acc + Complex::new(a.0, a.1) * Complex::new(b.0, -b.1)
                    })
                })
                .unwrap()
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_round_trip(a in hermitian(8)) {
        let eig = eig_hermitian(&a, 1e-10).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a) < 1e-12);
        let v = &eig.eigenvectors;
        let vv = &v.adjoint() * v;
        prop_assert!(vv.max_abs_diff(&Matrix::identity(a.dim()).unwrap()) < 1e-12);
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace().re).abs() < 1e-12);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn inverse_root_restricts_to_support(a in psd(7)) {
        let b = inv_sqrt_psd(&a, 1e-9).unwrap();
        let bab = &(&b * &a) * &b;
        let p = support_projector(&a, 1e-9).unwrap();
        prop_assert!(bab.max_abs_diff(&p) < 1e-8);
    }

    #[test]
    fn bosonic_states_are_normalized(theta in 0.0f64..std::f64::consts::PI,
                                     phi in 0.0f64..std::f64::consts::TAU,
                                     n in 1usize..=40) {
        let f = n_copy_bosonic(&bloch_state(theta, phi), n).unwrap();
        prop_assert!((f.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlaps_follow_power_law(t1 in 0.0f64..3.1, p1 in 0.0f64..6.2,
                                 t2 in 0.0f64..3.1, p2 in 0.0f64..6.2,
                                 n in 1usize..=20) {
        let (a, b) = (bloch_state(t1, p1), bloch_state(t2, p2));
        let single = a.inner(&b).unwrap().norm_sqr();
        let many = n_copy_bosonic(&a, n).unwrap().inner(&n_copy_bosonic(&b, n).unwrap()).unwrap().norm_sqr();
        prop_assert!((many - single.powi(n as i32)).abs() < 1e-12);
    }

    #[test]
    fn score_operators_form_one_orbit(n in 1usize..=12, count in 2usize..=9) {
        let v = shift_operator::<f64>(n, count).unwrap();
        let ops = multi_score_operators::<f64>(n, count).unwrap();
        for m in 0..count {
            let next = &ops[(m + 1) % count];
            prop_assert!(v.shift(ops[m].matrix(), 1).max_abs_diff(next.matrix()) < 1e-12);
        }
    }

    #[test]
    fn srm_orbit_resolves_identity(n in 1usize..=10, extra in 1usize..=6) {
        let pom = srm_template_pom::<f64>(n, n + extra).unwrap();
        let total = pom.elements().iter().skip(1).fold(pom.elements()[0].clone(), |acc, e| &acc + e);
        prop_assert!(total.max_abs_diff(&Matrix::identity(n + 1).unwrap()) < 1e-12);
    }

    #[test]
    fn binary_scores_are_affine_in_cos_theta(n in 1usize..=12, theta in 0.0f64..std::f64::consts::FRAC_PI_2) {
        let c = theta.cos();
        let opt0 = optimal_binary_pom(n, 0.0).unwrap().1.score;
        let opt = optimal_binary_pom(n, theta).unwrap().1.score;
        prop_assert!((opt - (0.5 + (opt0 - 0.5) * c)).abs() < 1e-12);
        let mv0 = majority_voting_score(n, 0.0).unwrap().score;
        let mv = majority_voting_score(n, theta).unwrap().score;
        prop_assert!((mv - (0.5 + (mv0 - 0.5) * c)).abs() < 1e-12);
        prop_assert!(mv <= opt + 1e-12);
        let est = estimation_matching_score(n, n + 1, std::f64::consts::PI / (n + 1) as f64, theta).unwrap().score;
        prop_assert!(est <= opt + 1e-12);
    }
}
