//! Laguerre polynomial evaluation, the model's real spectrum, and the
//! biorthogonal eigenvector system.
//!
//! The lattice Hamiltonian is tied to the generalized Laguerre polynomials
//! L(m, a, z) in the normalization L(0) = 1, L(1) = a + 1 - z: the column
//! ψ(z) = (L(0, a, z), …, L(N-1, a, z)) satisfies the eigenvalue equation at
//! every z up to a defect confined to the last site,
//! H ψ(z) - z ψ(z) = N·L(N, a, z)·e_N, so the spectrum consists of the N
//! real zeros of L(N, a, z). This identity holds exactly in rational
//! arithmetic and is the crate's primary self-test oracle:
//!
//! ```
//! use cryptoherm::{laguerre_eval, laguerre_hamiltonian, right_eigenvector,
//!                  ModelParams, Rational, Scalar};
//!
//! let params = ModelParams::new(4, Rational::from_ratio(5, 2)).unwrap();
//! let h = laguerre_hamiltonian(&params);
//!
//! let z = Rational::from_ratio(7, 3); // not an eigenvalue — any z works
//! let psi = right_eigenvector(&params, &z);
//! let h_psi = h.apply(&psi).unwrap();
//! let defect = Rational::from_int(4) * laguerre_eval(4, params.a(), &z);
//! for i in 0..4 {
//!     let expected = z.clone() * psi[i].clone()
//!         + if i == 3 { defect.clone() } else { Rational::from_int(0) };
//!     assert_eq!(h_psi[i], expected);
//! }
//! ```

use nalgebra::{DMatrix, SymmetricEigen};

use crate::closed_form;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Scalar;

/// Generalized Laguerre polynomial L(m, a, z), normalization L(0) = 1,
/// via the three-term recurrence
/// (m+1)·L(m+1) = (a + 2m + 1 - z)·L(m) - (a + m)·L(m-1), seeded with
/// L(-1) = 0. Exact in the rational backend.
pub fn laguerre_eval<S: Scalar>(degree: usize, a: &S, z: &S) -> S {
    let mut prev = S::zero(); // L(-1)
    let mut cur = S::one(); // L(0)
    for m in 0..degree {
        let mi = m as i64;
        let next = ((a.clone() + S::from_int(2 * mi + 1) - z.clone()) * cur.clone()
            - (a.clone() + S::from_int(mi)) * prev)
            / S::from_int(mi + 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// Right eigenvector candidate at energy z: the column
/// (L(0, a, z), …, L(N-1, a, z)), first component always 1.
///
/// Defined for any z; when z is a zero of L(N, a, ·) this is an exact
/// eigenvector, otherwise the defect sits in the last component (see the
/// module-level identity).
pub fn right_eigenvector<S: Scalar>(params: &ModelParams<S>, z: &S) -> Vec<S> {
    (0..params.n())
        .map(|m| laguerre_eval(m, params.a(), z))
        .collect()
}

/// Right eigenvector rescaled to unit 2-norm (float backend).
pub fn right_eigenvector_normalized(params: &ModelParams<f64>, z: f64) -> Vec<f64> {
    let mut v = right_eigenvector(params, &z);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

/// The N real zeros of L(N, a, z), sorted ascending.
///
/// Computed as the eigenvalues of the symmetrized matrix D·H·D⁻¹ where
/// D² is the diagonal metric of the lattice model; the similarity turns the
/// non-symmetric H into a symmetric tridiagonal matrix with the same
/// diagonal and off-diagonal entries -√(n(a+n)), n = 1..N-1. This is
/// backward-stable and requires a > -1 (positive symmetrization weights).
///
/// ```
/// use cryptoherm::{compute_spectrum, ModelParams};
///
/// // N = 2: zeros of the quadratic L(2, a, z), i.e. a + 2 ∓ √(a+2)
/// let params = ModelParams::new(2, 2.0).unwrap();
/// let e = compute_spectrum(&params).unwrap();
/// assert!((e[0] - 2.0).abs() < 1e-12 && (e[1] - 6.0).abs() < 1e-12);
/// ```
pub fn compute_spectrum(params: &ModelParams<f64>) -> Result<Vec<f64>> {
    let n = params.n();
    let a = *params.a();
    if n == 1 {
        return Ok(vec![a + 1.0]);
    }
    let mut weights = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let w = (i as f64 + 1.0) * (a + i as f64 + 1.0);
        if w <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "symmetrization weight {}·(a+{}) is not positive; the spectral \
                 routine requires a > -1 (got a = {a})",
                i + 1,
                i + 1
            )));
        }
        weights.push(w.sqrt());
    }
    let j = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            a + 2.0 * r as f64 + 1.0
        } else if c == r + 1 || r == c + 1 {
            -weights[r.min(c)]
        } else {
            0.0
        }
    });
    let eigen = SymmetricEigen::try_new(j, 1e-14, 100_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut energies: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    energies.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(energies)
}

/// Energies plus the full biorthogonal eigenvector system.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub params: ModelParams<f64>,
    /// Sorted energies E_0 < … < E_{N-1}.
    pub energies: Vec<f64>,
    /// Right eigenvectors: `right[n]` is the Laguerre column at E_n,
    /// first component 1.
    pub right: Vec<Vec<f64>>,
    /// Left eigenvectors: `left[n]` solves Hᵀ ξ = E_n ξ.
    pub left: Vec<Vec<f64>>,
    /// Pairings t_n = ⟨ξ_n|ψ_n⟩, all strictly positive.
    pub pairings: Vec<f64>,
}

/// Compute the spectrum together with right/left eigenvectors and pairings.
///
/// The left eigenvectors are obtained without any iteration: the diagonal
/// metric Θ_0 intertwines H with its transpose (Hᵀ·Θ_0 = Θ_0·H), so
/// ξ_n = Θ_0·ψ_n solves the transposed eigenproblem exactly, and the
/// pairing t_n = ψ_nᵀ·Θ_0·ψ_n is automatically positive for a > -1.
pub fn spectral_data(params: &ModelParams<f64>) -> Result<SpectralData> {
    let energies = compute_spectrum(params)?;
    ensure_nondegenerate(&energies)?;
    let theta0 = closed_form::p0(params)?;
    let weights = theta0.matrix().band(0);
    let n = params.n();
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut pairings = Vec::with_capacity(n);
    for &e in &energies {
        let psi = right_eigenvector(params, &e);
        let xi: Vec<f64> = psi.iter().zip(weights).map(|(p, w)| p * w).collect();
        let t: f64 = psi.iter().zip(&xi).map(|(p, x)| p * x).sum();
        if t <= 0.0 {
            return Err(Error::Numerical(format!(
                "non-positive biorthogonal pairing t = {t} at E = {e}"
            )));
        }
        right.push(psi);
        left.push(xi);
        pairings.push(t);
    }
    Ok(SpectralData {
        params: params.clone(),
        energies,
        right,
        left,
        pairings,
    })
}

/// Reject energy lists with (near-)degenerate entries. The lattice model
/// never produces them (Laguerre zeros are simple), so a hit signals a
/// numerical breakdown rather than physics.
fn ensure_nondegenerate(energies: &[f64]) -> Result<()> {
    if energies.len() < 2 {
        return Ok(());
    }
    let span = energies[energies.len() - 1] - energies[0];
    if span <= 0.0 {
        return Err(Error::Numerical("energy span collapsed to zero".into()));
    }
    for w in energies.windows(2) {
        if w[1] - w[0] < 1e-12 * span {
            return Err(Error::Numerical(format!(
                "energies {} and {} are degenerate within tolerance",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}
