//! Physics on top of an assembled metric: positivity classification and the
//! admissible-coefficient boundary, Dyson-map factorizations Θ = Ωᵀ·Ω, the
//! hidden conjugate Θ⁻¹HᵀΘ, the spectral expansion of the metric, smeared
//! position operators, and time evolution of site probabilities.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::banded::BandedSymmetricMatrix;
use crate::closed_form;
use crate::dieudonne;
use crate::error::{Error, Result};
use crate::model::{laguerre_hamiltonian, ModelParams, TridiagonalHamiltonian};
use crate::scalar::Scalar;
use crate::spectrum::{spectral_data, SpectralData};

/// Cached positivity verdict of a metric family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositivityStatus {
    PositiveDefinite,
    Indefinite,
    Unknown,
}

/// An assembled metric Θ = P_0 + Σ α_j·P_j together with its coefficient
/// vector and (lazily computed) positivity status.
#[derive(Clone, Debug)]
pub struct MetricFamily<S> {
    pub params: ModelParams<S>,
    pub k: usize,
    pub alphas: Vec<S>,
    pub theta: BandedSymmetricMatrix<S>,
    pub positivity: PositivityStatus,
}

impl<S: Scalar> MetricFamily<S> {
    /// Classify Θ and cache the verdict.
    pub fn classify(&mut self) -> PositivityStatus {
        self.positivity = check_positive_definite(&self.theta).status();
        self.positivity
    }

    /// Same family member in the float backend (status is preserved).
    pub fn to_f64(&self) -> MetricFamily<f64> {
        MetricFamily {
            params: self.params.to_f64(),
            k: self.k,
            alphas: self.alphas.iter().map(Scalar::to_f64).collect(),
            theta: self.theta.to_f64(),
            positivity: self.positivity,
        }
    }
}

/// Root-free symmetric triangular factorization Θ = L·diag(d)·Lᵀ with unit
/// lower-triangular L; exists with all d_i > 0 exactly when Θ is positive
/// definite.
#[derive(Clone, Debug)]
pub struct LdltFactor<S> {
    /// Strict lower rows: `lower[i]` holds L(i, 0..i); the unit diagonal is
    /// implied.
    pub lower: Vec<Vec<S>>,
    /// The positive pivots d_0..d_{n-1}.
    pub pivots: Vec<S>,
}

/// Total classification of a symmetric matrix: either a factorization
/// witnessing positive definiteness, or a concrete direction v with
/// vᵀ·Θ·v ≤ 0 witnessing the failure.
#[derive(Clone, Debug)]
pub enum PositivityCheck<S> {
    PositiveDefinite(LdltFactor<S>),
    Indefinite { pivot: usize, witness: Vec<S> },
}

impl<S> PositivityCheck<S> {
    pub fn is_positive_definite(&self) -> bool {
        matches!(self, PositivityCheck::PositiveDefinite(_))
    }

    pub fn status(&self) -> PositivityStatus {
        if self.is_positive_definite() {
            PositivityStatus::PositiveDefinite
        } else {
            PositivityStatus::Indefinite
        }
    }
}

/// Decide positive definiteness by attempting the LDLᵀ factorization.
///
/// In the rational backend the verdict is exact. The first non-positive
/// pivot d_i aborts the factorization, and back-substitution through the
/// partially built Lᵀ yields the witness direction v (supported on sites
/// 0..i) with vᵀ·Θ·v = d_i ≤ 0.
pub fn check_positive_definite<S: Scalar>(
    theta: &BandedSymmetricMatrix<S>,
) -> PositivityCheck<S> {
    let n = theta.dim();
    let mut lower: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut pivots: Vec<S> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<S> = Vec::with_capacity(i);
        for j in 0..i {
            let mut s = theta.get(i, j);
            for m in 0..j {
                s = s - row[m].clone() * lower[j][m].clone() * pivots[m].clone();
            }
            row.push(s / pivots[j].clone());
        }
        let mut d = theta.get(i, i);
        for m in 0..i {
            d = d - row[m].clone() * row[m].clone() * pivots[m].clone();
        }
        if d.partial_cmp(&S::zero()) != Some(std::cmp::Ordering::Greater) {
            lower.push(row);
            let mut witness = vec![S::zero(); n];
            witness[i] = S::one();
            for j in (0..i).rev() {
                let mut s = S::zero();
                for (m, w) in witness.iter().enumerate().take(i + 1).skip(j + 1) {
                    s = s + lower[m][j].clone() * w.clone();
                }
                witness[j] = -s;
            }
            return PositivityCheck::Indefinite { pivot: i, witness };
        }
        lower.push(row);
        pivots.push(d);
    }
    PositivityCheck::PositiveDefinite(LdltFactor { lower, pivots })
}

/// Pseudometrics P_0..P_k of the lattice model in the float backend:
/// closed forms where they exist (k ≤ 3), the exact band solver beyond.
pub fn pseudometrics_f64(
    params: &ModelParams<f64>,
    k: usize,
) -> Result<Vec<BandedSymmetricMatrix<f64>>> {
    if k <= 3 {
        Ok(closed_form::closed_form_set(params, k)?
            .into_iter()
            .map(|t| t.into_matrix())
            .collect())
    } else {
        Ok(dieudonne::solve_band_pseudometrics(&laguerre_hamiltonian(params), k)?
            .list()
            .to_vec())
    }
}

/// Result of the admissible-coefficient search along one ray.
#[derive(Clone, Copy, Debug)]
pub struct AlphaBoundary {
    pub alpha_max: f64,
    /// True when positivity never failed up to the configured cap; the
    /// returned value is then the cap, not a boundary.
    pub capped: bool,
}

/// Largest t such that Θ(t·direction) = P_0 + Σ t·direction_j·P_j stays
/// positive definite, found by bisection.
///
/// Positive-definite matrices form a convex cone, so the admissible set
/// along any ray through the (positive definite) origin Θ(0) = P_0 is an
/// interval and bisection is sound. The returned t* straddles the boundary
/// to 1e-10 relative width; if positivity survives all the way to `cap`,
/// the result carries the `capped` flag instead.
pub fn find_alpha_boundary(
    params: &ModelParams<f64>,
    k: usize,
    direction: &[f64],
    cap: f64,
) -> Result<AlphaBoundary> {
    if direction.len() != k {
        return Err(Error::InvalidParameter(format!(
            "direction has {} components, expected {k}",
            direction.len()
        )));
    }
    if cap.is_nan() || cap <= 0.0 {
        return Err(Error::InvalidParameter("cap must be positive".into()));
    }
    let ps = pseudometrics_f64(params, k)?;
    let theta_at = |t: f64| -> Result<BandedSymmetricMatrix<f64>> {
        let mut theta = BandedSymmetricMatrix::zeros(params.n(), k)?
            .add_scaled(&1.0, &ps[0])?;
        for (j, dir) in direction.iter().enumerate() {
            theta = theta.add_scaled(&(t * dir), &ps[j + 1])?;
        }
        Ok(theta)
    };
    let pd_at = |t: f64| -> Result<bool> {
        Ok(check_positive_definite(&theta_at(t)?).is_positive_definite())
    };

    if !pd_at(0.0)? {
        return Err(Error::InvalidParameter(
            "metric at the origin of the ray is not positive definite".into(),
        ));
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64.min(cap);
    loop {
        if pd_at(hi)? {
            lo = hi;
            if hi >= cap {
                return Ok(AlphaBoundary {
                    alpha_max: cap,
                    capped: true,
                });
            }
            hi = (hi * 2.0).min(cap);
        } else {
            break;
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if pd_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(AlphaBoundary {
        alpha_max: 0.5 * (lo + hi),
        capped: false,
    })
}

/// Which factorization produced a Dyson map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DysonVariant {
    /// Ω is the symmetric positive square root of Θ (Ω·Ω = Θ).
    SymmetricSqrt,
    /// Ω = D + ½αD⁻¹P_1, correct to first order in α.
    FirstOrder,
}

/// A factor Ω with Θ = Ωᵀ·Ω, mapping the lattice model into an equivalent
/// textbook Hilbert space where h = Ω·H·Ω⁻¹ is symmetric.
///
/// ```
/// use cryptoherm::{assemble_metric, dyson_sqrt, laguerre_hamiltonian, ModelParams};
///
/// let params = ModelParams::new(4, 1.0).unwrap();
/// let family = assemble_metric(&params, 1, &[0.1]).unwrap();
/// let dyson = dyson_sqrt(&family.theta).unwrap();
///
/// // Ω·Ω reproduces Θ …
/// let theta = family.theta.to_dense();
/// let err = (&dyson.omega * &dyson.omega - &theta).norm() / theta.norm();
/// assert!(err < 1e-12);
///
/// // … and Ω·H·Ω⁻¹ is symmetric: the non-symmetric model turns Hermitian
/// // in the Hilbert space the metric defines.
/// let h = dyson
///     .conjugated_hamiltonian(&laguerre_hamiltonian(&params))
///     .unwrap();
/// let asym = (&h - &h.transpose()).norm();
/// assert!(asym < 1e-11 * h.norm());
/// ```
#[derive(Clone, Debug)]
pub struct DysonMap {
    pub omega: DMatrix<f64>,
    pub variant: DysonVariant,
}

impl DysonMap {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn omega_inverse(&self) -> Result<DMatrix<f64>> {
        self.omega
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("Dyson factor is singular".into()))
    }

    /// h = Ω·H·Ω⁻¹, symmetric whenever Ω factorizes a metric solving the
    /// intertwining equation.
    pub fn conjugated_hamiltonian(
        &self,
        h: &TridiagonalHamiltonian<f64>,
    ) -> Result<DMatrix<f64>> {
        if h.dim() != self.dim() {
            return Err(Error::InvalidParameter("dimension mismatch".into()));
        }
        Ok(&self.omega * h.to_dense() * self.omega_inverse()?)
    }
}

/// Symmetric positive square root Ω of a positive-definite Θ via its
/// eigendecomposition: Ω = V·diag(√λ)·Vᵀ, so Ωᵀ·Ω = Ω·Ω = Θ.
pub fn dyson_sqrt(theta: &BandedSymmetricMatrix<f64>) -> Result<DysonMap> {
    let dense = theta.to_dense();
    let eigen = SymmetricEigen::try_new(dense, 1e-13, 100_000)
        .ok_or_else(|| Error::Numerical("symmetric eigensolver did not converge".into()))?;
    if eigen.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidParameter(
            "metric is not positive definite; no positive square root exists".into(),
        ));
    }
    let sqrt = DMatrix::from_diagonal(&eigen.eigenvalues.map(f64::sqrt));
    let omega = &eigen.eigenvectors * sqrt * eigen.eigenvectors.transpose();
    Ok(DysonMap {
        omega,
        variant: DysonVariant::SymmetricSqrt,
    })
}

/// Non-symmetric first-order Dyson map of the tridiagonal (k = 1) family:
/// Ω = D + ½α·D⁻¹·P_1 with D the positive square root of the diagonal
/// metric. Satisfies Ωᵀ·Ω = Θ_1(α) + O(α²).
pub fn dyson_first_order(params: &ModelParams<f64>, alpha: f64) -> Result<DysonMap> {
    let d: Vec<f64> = closed_form::p0(params)?.matrix().band(0).to_vec();
    if d.iter().any(|&x| x <= 0.0) {
        return Err(Error::InvalidParameter(
            "diagonal metric is not positive; the factorization needs a > -1".into(),
        ));
    }
    let p1 = closed_form::p1(params)?.into_matrix();
    let n = params.n();
    let omega = DMatrix::from_fn(n, n, |i, j| {
        let base = if i == j { d[i].sqrt() } else { 0.0 };
        base + 0.5 * alpha * p1.get(i, j) / d[i].sqrt()
    });
    Ok(DysonMap {
        omega,
        variant: DysonVariant::FirstOrder,
    })
}

/// The hidden conjugate Θ⁻¹·Hᵀ·Θ. Equal to H itself (within roundoff)
/// exactly when Θ solves the intertwining equation — the "hidden Hermiticity"
/// of the model.
pub fn hidden_conjugate(
    h: &TridiagonalHamiltonian<f64>,
    theta: &BandedSymmetricMatrix<f64>,
) -> Result<DMatrix<f64>> {
    if h.dim() != theta.dim() {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    let dense = theta.to_dense();
    let rhs = h.to_dense().transpose() * &dense;
    dense
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("metric is singular".into()))
}

/// Expand Θ over the left eigenvectors: weights κ²_n with
/// Θ = Σ_n κ²_n·|ξ_n⟩⟨ξ_n|, extracted as κ²_n = ⟨ψ_n|Θ|ψ_n⟩/t_n².
///
/// The reconstruction is verified to 1e-10 relative Frobenius error; failure
/// signals that Θ does not actually solve the intertwining equation for this
/// Hamiltonian. Every admissible metric is parameterized this way, and Θ is
/// positive definite exactly when all weights are positive.
pub fn spectral_decompose(
    theta: &BandedSymmetricMatrix<f64>,
    spectral: &SpectralData,
) -> Result<Vec<f64>> {
    let n = theta.dim();
    if n != spectral.params.n() {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    let mut weights = Vec::with_capacity(n);
    for m in 0..n {
        let form = theta.quadratic_form(&spectral.right[m], &spectral.right[m])?;
        weights.push(form / (spectral.pairings[m] * spectral.pairings[m]));
    }
    let mut reconstructed = DMatrix::zeros(n, n);
    for (w, left) in weights.iter().zip(&spectral.left) {
        let xi = DVector::from_row_slice(left);
        reconstructed += *w * &xi * xi.transpose();
    }
    let dense = theta.to_dense();
    let err = (&reconstructed - &dense).norm() / dense.norm();
    if err > 1e-10 {
        return Err(Error::Numerical(format!(
            "spectral reconstruction misses the metric by {err:.3e}; the matrix \
             does not solve the intertwining equation"
        )));
    }
    Ok(weights)
}

/// The smeared position operator Q = Ω⁻¹·q̂·Ω and its exact eigenvector
/// system.
#[derive(Clone, Debug)]
pub struct PositionModel {
    /// Site coordinates q_1 < … < q_N.
    pub sites: Vec<f64>,
    /// Q = Ω⁻¹·q̂·Ω; similar to the diagonal q̂, so its spectrum is `sites`.
    pub q: DMatrix<f64>,
    /// Column s is the eigenvector χ_{q_s} = Ω⁻¹·e_s of Q; automatically
    /// normalized to ⟨χ|Θ|χ⟩ = 1 when Ω is the symmetric square root.
    pub chi: DMatrix<f64>,
}

/// The default site coordinates q_s = s, s = 1..N.
pub fn default_sites(n: usize) -> Vec<f64> {
    (1..=n).map(|s| s as f64).collect()
}

/// Conjugate the diagonal position matrix into the physical representation:
/// Q = Ω⁻¹·q̂·Ω with eigenpairs (q_s, Ω⁻¹·e_s).
pub fn position_operator(dyson: &DysonMap, sites: &[f64]) -> Result<PositionModel> {
    let n = dyson.dim();
    if sites.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} site coordinates for dimension {n}",
            sites.len()
        )));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "site coordinates must be strictly increasing".into(),
        ));
    }
    let lu = dyson.omega.clone().lu();
    let qhat_omega = DMatrix::from_fn(n, n, |i, j| sites[i] * dyson.omega[(i, j)]);
    let q = lu
        .solve(&qhat_omega)
        .ok_or_else(|| Error::Numerical("Dyson factor is singular".into()))?;
    let chi = lu
        .solve(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Numerical("Dyson factor is singular".into()))?;
    Ok(PositionModel {
        sites: sites.to_vec(),
        q,
        chi,
    })
}

/// Trajectory of a state under the Schrödinger equation i·ψ̇ = H·ψ, recorded
/// on a fixed time grid.
#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub times: Vec<f64>,
    /// `states[t][s]` = ψ(t)_s.
    pub states: Vec<Vec<Complex64>>,
    /// `smeared[t][s]` = (Θ·ψ(t))_s — the band-limited smeared wavefunction
    /// (the sum over s' reaches at most k sites to each side).
    pub smeared: Vec<Vec<Complex64>>,
    /// `site_probabilities[t][s]` = ρ(t, s) = |⟨χ_{q_s}|Θ|ψ(t)⟩|² normalized
    /// to Σ_s ρ = 1.
    pub site_probabilities: Vec<Vec<f64>>,
    /// ⟨ψ(t)|Θ|ψ(t)⟩ per grid point — constant in t up to roundoff.
    pub theta_norms: Vec<f64>,
}

/// Evolve an initial state and record site probabilities in the metric's
/// Hilbert space.
///
/// The state is expanded over the right eigenvectors with biorthogonal
/// coefficients c_n = ⟨ξ_n|ψ(0)⟩/t_n, each mode picks up the phase
/// e^{-i·E_n·t}, and the probability of finding the particle at site s is
/// read off through the position eigenvectors: with Ω the symmetric square
/// root of Θ, ⟨χ_{q_s}|Θ|ψ⟩ = (Ω·ψ)_s, so ρ(t, s) = |(Ω·ψ)_s|²/‖Ω·ψ‖². The
/// normalizer ‖Ω·ψ‖² = ⟨ψ|Θ|ψ⟩ is the conserved metric norm.
///
/// ```
/// use cryptoherm::{assemble_metric, evolve, ModelParams};
/// use num_complex::Complex64;
///
/// let params = ModelParams::new(6, 2.0).unwrap();
/// let family = assemble_metric(&params, 1, &[0.05]).unwrap();
///
/// // start on the first lattice site
/// let mut initial = vec![Complex64::new(0.0, 0.0); 6];
/// initial[0] = Complex64::new(1.0, 0.0);
/// let times: Vec<f64> = (0..=100).map(|i| 0.1 * i as f64).collect();
/// let evo = evolve(&params, &family.theta, &initial, &times).unwrap();
///
/// // the metric norm is conserved and each probability row sums to one
/// let n0 = evo.theta_norms[0];
/// for (norm, row) in evo.theta_norms.iter().zip(&evo.site_probabilities) {
///     assert!((norm - n0).abs() < 1e-10 * n0);
///     let total: f64 = row.iter().sum();
///     assert!((total - 1.0).abs() < 1e-12);
/// }
/// ```
pub fn evolve(
    params: &ModelParams<f64>,
    theta: &BandedSymmetricMatrix<f64>,
    initial: &[Complex64],
    times: &[f64],
) -> Result<EvolutionResult> {
    let n = params.n();
    if initial.len() != n || theta.dim() != n {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    if initial.iter().all(|c| c.norm_sqr() == 0.0) {
        return Err(Error::InvalidParameter("initial state is zero".into()));
    }
    let spectral = spectral_data(params)?;
    let dyson = dyson_sqrt(theta)?; // also certifies positive definiteness

    let coeff: Vec<Complex64> = (0..n)
        .map(|m| {
            let dot: Complex64 = spectral.left[m]
                .iter()
                .zip(initial)
                .map(|(x, v)| v * x)
                .sum();
            dot / spectral.pairings[m]
        })
        .collect();

    let mut states = Vec::with_capacity(times.len());
    let mut smeared = Vec::with_capacity(times.len());
    let mut probabilities = Vec::with_capacity(times.len());
    let mut norms = Vec::with_capacity(times.len());
    for &t in times {
        let mut psi = vec![Complex64::new(0.0, 0.0); n];
        for ((c, energy), right) in coeff.iter().zip(&spectral.energies).zip(&spectral.right) {
            let phase = Complex64::new(0.0, -energy * t).exp();
            let weight = c * phase;
            for (p, site) in psi.iter_mut().zip(right) {
                *p += weight * site;
            }
        }
        let re: Vec<f64> = psi.iter().map(|c| c.re).collect();
        let im: Vec<f64> = psi.iter().map(|c| c.im).collect();

        let smear_re = theta.apply(&re)?;
        let smear_im = theta.apply(&im)?;
        let smear: Vec<Complex64> = smear_re
            .into_iter()
            .zip(smear_im)
            .map(|(r, i)| Complex64::new(r, i))
            .collect();

        let amp_re = &dyson.omega * DVector::from_row_slice(&re);
        let amp_im = &dyson.omega * DVector::from_row_slice(&im);
        let amp2: Vec<f64> = (0..n)
            .map(|s| amp_re[s] * amp_re[s] + amp_im[s] * amp_im[s])
            .collect();
        let norm: f64 = amp2.iter().sum();
        if norm <= 0.0 {
            return Err(Error::Numerical("state norm collapsed".into()));
        }
        probabilities.push(amp2.iter().map(|&p| p / norm).collect());
        norms.push(norm);
        states.push(psi);
        smeared.push(smear);
    }
    Ok(EvolutionResult {
        times: times.to_vec(),
        states,
        smeared,
        site_probabilities: probabilities,
        theta_norms: norms,
    })
}
