//! The closed-form pseudometric tables and the general band solver are two
//! independent derivations of the same operators. In the rational backend
//! they must agree to the last bit — not merely to a tolerance — across the
//! whole verification grid.

use cryptoherm::{
    assemble_metric, closed_form_set, dieudonne_residual, laguerre_hamiltonian,
    solve_band_pseudometrics, solve_general_metric, ModelParams, Rational, Scalar,
};
use num_traits::Zero;

fn rational_params(n: usize, num: i64, den: i64) -> ModelParams<Rational> {
    ModelParams::new(n, Rational::from_ratio(num, den)).unwrap()
}

#[test]
fn closed_tables_equal_solver_output_on_the_verification_grid() {
    for &(num, den) in &[(1i64, 1i64), (2, 1), (3, 1), (5, 2)] {
        for n in 2..=10usize {
            let params = rational_params(n, num, den);
            let k = 3.min(n - 1);
            let h = laguerre_hamiltonian(&params);
            let solved = solve_band_pseudometrics(&h, k).unwrap();
            let closed = closed_form_set(&params, k).unwrap();
            assert_eq!(closed.len(), k + 1);
            for (j, table) in closed.iter().enumerate() {
                assert_eq!(
                    table.matrix(),
                    solved.pseudometric(j),
                    "P_{j} mismatch at N = {n}, a = {num}/{den}"
                );
            }
        }
    }
}

#[test]
fn assembled_superpositions_agree_between_routes() {
    let params = rational_params(6, 1, 1);
    let alphas = [
        Rational::from_ratio(1, 10),
        Rational::from_ratio(-1, 20),
        Rational::from_ratio(1, 100),
    ];
    let h = laguerre_hamiltonian(&params);
    let family = assemble_metric(&params, 3, &alphas).unwrap();
    let direct = solve_general_metric(&h, 3, &alphas).unwrap();
    assert_eq!(family.theta, direct);
    assert!(dieudonne_residual(&h, &direct).unwrap().is_zero());
}

#[test]
fn float_tables_track_the_exact_solution() {
    // The float tables evaluate the same formulas the exact route certified;
    // their distance from the exact solver output bounds the roundoff.
    for n in [4usize, 8, 12] {
        let exact = rational_params(n, 5, 2);
        let floats = ModelParams::new(n, 2.5).unwrap();
        let k = 3.min(n - 1);
        let solved = solve_band_pseudometrics(&laguerre_hamiltonian(&exact), k).unwrap();
        let closed = closed_form_set(&floats, k).unwrap();
        for (j, table) in closed.iter().enumerate() {
            let reference = solved.pseudometric(j).to_f64();
            for d in 0..=j {
                for (x, y) in table.matrix().band(d).iter().zip(reference.band(d)) {
                    assert!(
                        (x - y).abs() <= 1e-12 * y.abs().max(1.0),
                        "band {d} of P_{j} drifts at N = {n}: {x} vs {y}"
                    );
                }
            }
        }
    }
}
