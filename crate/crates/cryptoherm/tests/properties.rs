//! Randomized invariants: exact linearity of the operators, bilinearity of
//! the intertwining commutator, the coupling-ratio recurrence of diagonal
//! solutions for arbitrary tridiagonal matrices, cutoff insensitivity of the
//! band solver, and an independent bisection oracle for the spectrum.

use cryptoherm::{
    compute_spectrum, dieudonne_commutator, dieudonne_residual, laguerre_hamiltonian,
    solve_band_pseudometrics, ModelParams, Rational, Scalar, TridiagonalHamiltonian,
};
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| {
        let q = Rational::from_ratio(n, d);
        if neg {
            -q
        } else {
            q
        }
    })
}

/// Arbitrary real tridiagonal matrix with nonzero couplings on both
/// off-diagonals.
fn tridiagonal(n: usize) -> impl Strategy<Value = TridiagonalHamiltonian<Rational>> {
    (
        vec(small_rational(), n),
        vec(nonzero_rational(), n - 1),
        vec(nonzero_rational(), n - 1),
    )
        .prop_map(|(d, u, l)| TridiagonalHamiltonian::new(d, u, l).unwrap())
}

/// Lattice couplings that avoid every pole a = −1, …, −(N−1): strictly
/// positive rationals.
fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=4).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_action_is_exactly_linear(
        (h, x, y, c) in (2usize..=6).prop_flat_map(|n| (
            tridiagonal(n),
            vec(small_rational(), n),
            vec(small_rational(), n),
            small_rational(),
        ))
    ) {
        let combined: Vec<Rational> = x
            .iter()
            .zip(&y)
            .map(|(xi, yi)| c.clone() * xi.clone() + yi.clone())
            .collect();
        let lhs = h.apply(&combined).unwrap();
        let hx = h.apply(&x).unwrap();
        let hy = h.apply(&y).unwrap();
        for i in 0..lhs.len() {
            prop_assert_eq!(&lhs[i], &(c.clone() * hx[i].clone() + hy[i].clone()));
        }
    }

    #[test]
    fn commutator_is_linear_in_the_metric_and_antisymmetric(
        (h, b1, b2, c) in (3usize..=6).prop_flat_map(|n| (
            tridiagonal(n),
            vec(small_rational(), n),
            vec(small_rational(), n - 1),
            small_rational(),
        ))
    ) {
        let n = h.dim();
        let theta1 = cryptoherm::BandedSymmetricMatrix::from_bands(vec![b1]).unwrap();
        let theta2 = cryptoherm::BandedSymmetricMatrix::from_bands(
            vec![vec![Rational::zero(); n], b2],
        ).unwrap();
        let scaled = theta1.add_scaled(&c, &theta2).unwrap();
        let com1 = dieudonne_commutator(&h, &theta1).unwrap();
        let com2 = dieudonne_commutator(&h, &theta2).unwrap();
        let com = dieudonne_commutator(&h, &scaled).unwrap();
        for m in 0..n {
            for p in 0..n {
                prop_assert_eq!(
                    &com[m][p],
                    &(com1[m][p].clone() + c.clone() * com2[m][p].clone())
                );
                // antisymmetry of the commutator of a real tridiagonal with
                // a symmetric matrix
                prop_assert_eq!(&com[m][p], &(-com[p][m].clone()));
            }
        }
    }

    #[test]
    fn diagonal_solution_follows_the_coupling_ratio_recurrence(
        h in (2usize..=7).prop_flat_map(tridiagonal)
    ) {
        let set = solve_band_pseudometrics(&h, 0).unwrap();
        let p0 = set.pseudometric(0);
        prop_assert_eq!(p0.get(0, 0), Rational::from_int(1));
        for m in 0..h.dim() - 1 {
            // θ_{m+1,m+1}·H_{m+1,m} = θ_mm·H_{m,m+1}
            prop_assert_eq!(
                p0.get(m + 1, m + 1) * h.subdiag()[m].clone(),
                p0.get(m, m) * h.superdiag()[m].clone()
            );
        }
    }

    #[test]
    fn solver_cutoff_does_not_disturb_lower_bands(
        (n, a, k1) in (4usize..=7, positive_rational(), 0usize..=2)
    ) {
        let params = ModelParams::new(n, a).unwrap();
        let h = laguerre_hamiltonian(&params);
        let narrow = solve_band_pseudometrics(&h, k1).unwrap();
        let wide = solve_band_pseudometrics(&h, k1 + 1).unwrap();
        for j in 0..=k1 {
            prop_assert_eq!(narrow.pseudometric(j), wide.pseudometric(j));
        }
    }

    #[test]
    fn random_superpositions_solve_the_equation_exactly(
        (a, alphas) in (positive_rational(), vec(small_rational(), 2))
    ) {
        let params = ModelParams::new(5, a).unwrap();
        let h = laguerre_hamiltonian(&params);
        let theta = solve_band_pseudometrics(&h, 2)
            .unwrap()
            .assemble(&alphas)
            .unwrap();
        prop_assert!(dieudonne_residual(&h, &theta).unwrap().is_zero());
    }

    #[test]
    fn spectrum_matches_the_bisection_oracle(
        (n, a) in (1usize..=9, -0.9f64..6.0)
    ) {
        let params = ModelParams::new(n, a).unwrap();
        let expected = bisect_spectrum(&params);
        let got = compute_spectrum(&params).unwrap();
        prop_assert_eq!(got.len(), expected.len());
        for (x, y) in got.iter().zip(&expected) {
            prop_assert!(
                (x - y).abs() <= 1e-9 * y.abs().max(1.0),
                "eigenvalue {} vs oracle {}", x, y
            );
        }
    }
}

/// Count eigenvalues of the symmetrized lattice matrix below x via the signs
/// of the LDLᵀ pivots of J − xI (Sturm sequence).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if d == 0.0 { 1e-300 } else { d };
        d = diag[i] - x - off[i - 1] * off[i - 1] / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Independent spectrum oracle: bisection on Sturm counts inside Gershgorin
/// bounds of the symmetrized matrix. Slow and simple on purpose.
fn bisect_spectrum(params: &ModelParams<f64>) -> Vec<f64> {
    let n = params.n();
    let a = *params.a();
    let diag: Vec<f64> = (0..n).map(|i| a + 2.0 * i as f64 + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|i| (i as f64 * (a + i as f64)).sqrt())
        .collect();
    let radius = |i: usize| -> f64 {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i < n - 1 { off[i].abs() } else { 0.0 };
        left + right
    };
    let lo = (0..n)
        .map(|i| diag[i] - radius(i))
        .fold(f64::INFINITY, f64::min);
    let hi = (0..n)
        .map(|i| diag[i] + radius(i))
        .fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    (0..n)
        .map(|idx| {
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..200 {
                if hi - lo <= 1e-14 * span.max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if sturm_count(&diag, &off, mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}
