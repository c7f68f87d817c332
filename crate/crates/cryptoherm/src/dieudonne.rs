//! Exact solver for the Dieudonné (intertwining) equation Hᵀ·Θ = Θ·H
//! restricted to symmetric (2k+1)-banded Θ.
//!
//! The solver treats the equation as a linear system on the band entries of
//! Θ, computes an exact nullspace basis by Gaussian elimination (fraction
//! arithmetic in the rational backend), and reduces the basis to a canonical
//! form: the pseudometric P_j is the unique solution whose first row is the
//! unit vector e_{j+1}. No structural guesses enter anywhere, which is what
//! makes this module an independent check on every closed-form band formula
//! in the crate.


use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};
use crate::model::TridiagonalHamiltonian;
use crate::scalar::Scalar;

/// Canonically normalized solutions P_0..P_k of the intertwining equation,
/// P_j carrying band half-width exactly j and first row e_{j+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudometricSet<S> {
    n: usize,
    k: usize,
    ps: Vec<BandedSymmetricMatrix<S>>,
}

impl<S: Scalar> PseudometricSet<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest band half-width in the set (the k of P_0..P_k).
    pub fn max_half_width(&self) -> usize {
        self.k
    }

    pub fn pseudometric(&self, j: usize) -> &BandedSymmetricMatrix<S> {
        &self.ps[j]
    }

    pub fn list(&self) -> &[BandedSymmetricMatrix<S>] {
        &self.ps
    }

    /// Θ = P_0 + Σ_{j=1..k} alphas[j-1]·P_j, returned as a (2k+1)-banded
    /// matrix regardless of which coefficients vanish.
    pub fn assemble(&self, alphas: &[S]) -> Result<BandedSymmetricMatrix<S>> {
        if alphas.len() != self.k {
            return Err(Error::InvalidParameter(format!(
                "expected {} superposition coefficients, got {}",
                self.k,
                alphas.len()
            )));
        }
        let mut theta = BandedSymmetricMatrix::zeros(self.n, self.k)?
            .add_scaled(&S::one(), &self.ps[0])?;
        for (j, alpha) in alphas.iter().enumerate() {
            theta = theta.add_scaled(alpha, &self.ps[j + 1])?;
        }
        Ok(theta)
    }
}

/// Max-norm of the commutator Hᵀ·Θ − Θ·H; exactly zero (not merely small)
/// in the rational backend when Θ solves the equation.
pub fn dieudonne_residual<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    theta: &BandedSymmetricMatrix<S>,
) -> Result<S> {
    let n = check_dims(h, theta)?;
    let mut worst = S::zero();
    // The commutator is antisymmetric (H real, Θ symmetric) and confined to
    // |row − col| ≤ k+1, so scanning the upper off-diagonals e = 1..k+1 sees
    // every independent entry.
    for e in 1..=theta.half_width() + 1 {
        for m in 0..n.saturating_sub(e) {
            let r = commutator_entry(h, theta, m, m + e).abs();
            if r > worst {
                worst = r;
            }
        }
    }
    Ok(worst)
}

/// Dense commutator Hᵀ·Θ − Θ·H, mainly for property tests (linearity in Θ,
/// antisymmetry).
pub fn dieudonne_commutator<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    theta: &BandedSymmetricMatrix<S>,
) -> Result<Vec<Vec<S>>> {
    let n = check_dims(h, theta)?;
    Ok((0..n)
        .map(|m| (0..n).map(|p| commutator_entry(h, theta, m, p)).collect())
        .collect())
}

fn check_dims<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    theta: &BandedSymmetricMatrix<S>,
) -> Result<usize> {
    if h.dim() != theta.dim() {
        return Err(Error::InvalidParameter(format!(
            "Hamiltonian dimension {} does not match metric dimension {}",
            h.dim(),
            theta.dim()
        )));
    }
    Ok(h.dim())
}

/// Entry (m, p) of Hᵀ·Θ − Θ·H for tridiagonal H: only the six neighbours
/// of Θ around (m, p) contribute.
fn commutator_entry<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    theta: &BandedSymmetricMatrix<S>,
    m: usize,
    p: usize,
) -> S {
    let n = h.dim();
    let mut r = (h.diag()[m].clone() - h.diag()[p].clone()) * theta.get(m, p);
    if m >= 1 {
        r = r + h.superdiag()[m - 1].clone() * theta.get(m - 1, p);
    }
    if m + 1 < n {
        r = r + h.subdiag()[m].clone() * theta.get(m + 1, p);
    }
    if p >= 1 {
        r = r - theta.get(m, p - 1) * h.superdiag()[p - 1].clone();
    }
    if p + 1 < n {
        r = r - theta.get(m, p + 1) * h.subdiag()[p].clone();
    }
    r
}

/// Solve the intertwining equation on symmetric (2k+1)-banded matrices and
/// reduce the solution space to the canonical pseudometrics P_0..P_k.
///
/// Errors if the solution space does not have dimension k+1 (which signals
/// decoupled couplings or a degenerate spectrum) or if the canonical
/// normalization — first row of P_j equal to e_{j+1} — is unreachable.
pub fn solve_band_pseudometrics<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    k: usize,
) -> Result<PseudometricSet<S>> {
    let n = h.dim();
    if k + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "half-width {k} needs dimension at least {} (got {n})",
            k + 1
        )));
    }

    // Unknowns are the upper-band entries of Θ in band-major order:
    // unknown (d, j) ↦ Θ_{j, j+d}, laid out band 0 first.
    let m_unknowns = band_offset(n, k + 1);
    let mut rows: Vec<Vec<S>> = Vec::new();
    for e in 1..=k + 1 {
        for m in 0..n.saturating_sub(e) {
            let p = m + e;
            let mut row = vec![S::zero(); m_unknowns];
            // Θ[m+1][p] and Θ[m][p-1] live on band e-1.
            add(&mut row, band_offset(n, e - 1) + m + 1, h.subdiag()[m].clone());
            add(&mut row, band_offset(n, e - 1) + m, -h.superdiag()[p - 1].clone());
            // Θ[m][p] lives on band e.
            if e <= k {
                add(
                    &mut row,
                    band_offset(n, e) + m,
                    h.diag()[m].clone() - h.diag()[p].clone(),
                );
            }
            // Θ[m-1][p] and Θ[m][p+1] live on band e+1.
            if e < k {
                if m >= 1 {
                    add(
                        &mut row,
                        band_offset(n, e + 1) + m - 1,
                        h.superdiag()[m - 1].clone(),
                    );
                }
                if p + 1 < n {
                    add(&mut row, band_offset(n, e + 1) + m, -h.subdiag()[p].clone());
                }
            }
            rows.push(row);
        }
    }

    let scale = rows
        .iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(0.0f64, f64::max);
    let (reduced, pivot_cols) = reduced_row_echelon(rows, m_unknowns, scale);
    let basis = nullspace_basis(&reduced, &pivot_cols, m_unknowns);
    if basis.len() != k + 1 {
        return Err(Error::SolutionSpaceDimension {
            got: basis.len(),
            expected: k + 1,
            n,
            k,
        });
    }

    // Canonical form: P_j has first row e_{j+1}, i.e. its band-d first-row
    // entries are δ_{dj}. Solve for the mixing coefficients by inverting the
    // (k+1)×(k+1) matrix of first-row entries of the raw basis.
    let mut first_rows: Vec<Vec<S>> = (0..=k)
        .map(|d| {
            let mut row: Vec<S> = basis
                .iter()
                .map(|b| b[band_offset(n, d)].clone())
                .collect();
            let mut rhs = vec![S::zero(); k + 1];
            rhs[d] = S::one();
            row.extend(rhs);
            row
        })
        .collect();
    let f_scale = first_rows
        .iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(0.0f64, f64::max);
    let width = 2 * (k + 1);
    let (f_reduced, f_pivots);
    {
        let taken = std::mem::take(&mut first_rows);
        (f_reduced, f_pivots) = reduced_row_echelon(taken, width, f_scale);
    }
    if f_pivots != (0..=k).collect::<Vec<_>>() {
        return Err(Error::Numerical(
            "canonical normalization unreachable: first-row entries of the \
             solution basis are linearly dependent"
            .into(),
        ));
    }

    let mut ps = Vec::with_capacity(k + 1);
    for j in 0..=k {
        // Column j of the inverse holds the mixing coefficients for P_j.
        let mut flat = vec![S::zero(); m_unknowns];
        for (i, b) in basis.iter().enumerate() {
            let c = f_reduced[i][k + 1 + j].clone();
            if c.is_zero() {
                continue;
            }
            for (slot, x) in flat.iter_mut().zip(b) {
                *slot = slot.clone() + c.clone() * x.clone();
            }
        }
        let bands: Vec<Vec<S>> = (0..=k)
            .map(|d| flat[band_offset(n, d)..band_offset(n, d) + (n - d)].to_vec())
            .collect();
        let full = BandedSymmetricMatrix::from_bands(bands)?;
        // The canonical P_j must not have support beyond band j; assert and
        // truncate rather than assume.
        ps.push(full.truncate_to(j)?);
    }
    Ok(PseudometricSet { n, k, ps })
}

/// Θ = P_0 + Σ α_j·P_j straight from the solver.
pub fn solve_general_metric<S: Scalar>(
    h: &TridiagonalHamiltonian<S>,
    k: usize,
    alphas: &[S],
) -> Result<BandedSymmetricMatrix<S>> {
    solve_band_pseudometrics(h, k)?.assemble(alphas)
}

/// Start of band d in the band-major unknown layout: Σ_{d'<d} (n − d').
fn band_offset(n: usize, d: usize) -> usize {
    d * n - d * d.saturating_sub(1) / 2
}

fn add<S: Scalar>(row: &mut [S], idx: usize, v: S) {
    row[idx] = row[idx].clone() + v;
}

/// Reduced row echelon form with pivot selection by `pivot_cost` (smallest
/// fraction bit-size in the rational backend, largest magnitude in floats).
/// Returns the reduced rows and the pivot columns in ascending order.
fn reduced_row_echelon<S: Scalar>(
    mut rows: Vec<Vec<S>>,
    ncols: usize,
    scale: f64,
) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let mut best: Option<(usize, u64)> = None;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            if !row[col].negligible(scale) {
                let cost = row[col].pivot_cost();
                if best.is_none_or(|(_, c)| cost < c) {
                    best = Some((r, cost));
                }
            }
        }
        let Some((r, _)) = best else { continue };
        rows.swap(rank, r);
        let piv = rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() / piv.clone();
            }
        }
        rows[rank][col] = S::one();
        let pivot_row = rows[rank].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr == rank {
                continue;
            }
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (entry, p) in row.iter_mut().zip(&pivot_row) {
                if p.is_zero() {
                    continue;
                }
                *entry = entry.clone() - f.clone() * p.clone();
            }
            row[col] = S::zero();
        }
        pivot_cols.push(col);
        rank += 1;
    }
    (rows, pivot_cols)
}

/// One basis vector per free column of the reduced system.
fn nullspace_basis<S: Scalar>(
    reduced: &[Vec<S>],
    pivot_cols: &[usize],
    ncols: usize,
) -> Vec<Vec<S>> {
    let pivot_set: std::collections::BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut x = vec![S::zero(); ncols];
        x[free] = S::one();
        for (row, &pcol) in reduced.iter().zip(pivot_cols) {
            x[pcol] = -row[free].clone();
        }
        basis.push(x);
    }
    basis
}
