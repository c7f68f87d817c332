//! Lattice Hamiltonians: general real tridiagonal matrices and the exactly
//! solvable family whose characteristic polynomial is a generalized Laguerre
//! polynomial.
//!
//! Formulas in the documentation use 1-based site indices n = 1..N (the
//! natural labelling of lattice sites); storage is 0-based with the mapping
//! stated at each field.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The model's entire input: lattice dimension N and coupling a.
///
/// The coupling may be any scalar avoiding the poles a = -1, -2, …, -(N-1)
/// where metric denominators ∏(a+i) vanish. The physically motivated regime
/// is a > 0 (and a > -1 is needed for the spectral routines); construction
/// itself only excludes the poles.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams<S> {
    n: usize,
    a: S,
}

impl<S: Scalar> ModelParams<S> {
    pub fn new(n: usize, a: S) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(
                "lattice dimension N must be at least 1".into(),
            ));
        }
        for i in 1..n {
            if (a.clone() + S::from_int(i as i64)).is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "coupling a = {a} hits a pole: a + {i} = 0 makes metric denominators vanish"
                )));
            }
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    /// Same parameters in the float backend.
    pub fn to_f64(&self) -> ModelParams<f64> {
        ModelParams {
            n: self.n,
            a: self.a.to_f64(),
        }
    }
}

/// Real tridiagonal matrix with independently chosen upper and lower bands
/// (so in general not symmetric).
///
/// 1-based element names: diagonal a_n = `diag[n-1]`, upper couplings
/// c_n = H(n, n+1) = `superdiag[n-1]`, lower couplings
/// b_{n+1} = H(n+1, n) = `subdiag[n-1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalHamiltonian<S> {
    diag: Vec<S>,
    superdiag: Vec<S>,
    subdiag: Vec<S>,
}

impl<S: Scalar> TridiagonalHamiltonian<S> {
    pub fn new(diag: Vec<S>, superdiag: Vec<S>, subdiag: Vec<S>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        if superdiag.len() + 1 != n || subdiag.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "band lengths {}/{} do not fit dimension {}",
                superdiag.len(),
                subdiag.len(),
                n
            )));
        }
        Ok(Self {
            diag,
            superdiag,
            subdiag,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[S] {
        &self.diag
    }

    pub fn superdiag(&self) -> &[S] {
        &self.superdiag
    }

    pub fn subdiag(&self) -> &[S] {
        &self.subdiag
    }

    /// Element (i, j) in 0-based indices; zero outside the three bands.
    pub fn entry(&self, i: usize, j: usize) -> S {
        if i == j {
            self.diag[i].clone()
        } else if j == i + 1 {
            self.superdiag[i].clone()
        } else if i == j + 1 {
            self.subdiag[j].clone()
        } else {
            S::zero()
        }
    }

    /// Conjugate transpose. All entries are real, so this just swaps the
    /// upper and lower bands.
    pub fn transpose(&self) -> Self {
        Self {
            diag: self.diag.clone(),
            superdiag: self.subdiag.clone(),
            subdiag: self.superdiag.clone(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.superdiag == self.subdiag
    }

    /// Matrix-vector product in O(N).
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::InvalidParameter(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                n
            )));
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = self.diag[i].clone() * v[i].clone();
            if i + 1 < n {
                s = s + self.superdiag[i].clone() * v[i + 1].clone();
            }
            if i > 0 {
                s = s + self.subdiag[i - 1].clone() * v[i - 1].clone();
            }
            out.push(s);
        }
        Ok(out)
    }

    /// det(zI - H) by the standard three-term recurrence on leading
    /// principal minors, exact in the rational backend.
    pub fn shifted_determinant(&self, z: &S) -> S {
        let n = self.dim();
        let mut prev = S::one(); // empty minor
        let mut cur = z.clone() - self.diag[0].clone(); // 1x1 minor
        for m in 2..=n {
            let next = (z.clone() - self.diag[m - 1].clone()) * cur.clone()
                - self.superdiag[m - 2].clone() * self.subdiag[m - 2].clone() * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Same matrix in the float backend.
    pub fn to_f64(&self) -> TridiagonalHamiltonian<f64> {
        TridiagonalHamiltonian {
            diag: self.diag.iter().map(Scalar::to_f64).collect(),
            superdiag: self.superdiag.iter().map(Scalar::to_f64).collect(),
            subdiag: self.subdiag.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl TridiagonalHamiltonian<f64> {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

/// The exactly solvable lattice Hamiltonian.
///
/// Row pattern in 1-based indices n = 1..N:
/// H(n, n) = a + 2n - 1, H(n, n+1) = -n, H(n+1, n) = -(a+n).
///
/// ```
/// use cryptoherm::{laguerre_hamiltonian, ModelParams};
///
/// // N = 3 at coupling a: rows (a+1, -1, 0), (-a-1, a+3, -2), (0, -a-2, a+5)
/// let params = ModelParams::new(3, 2.0).unwrap();
/// let h = laguerre_hamiltonian(&params);
/// assert_eq!(h.diag(), &[3.0, 5.0, 7.0]);
/// assert_eq!(h.superdiag(), &[-1.0, -2.0]);
/// assert_eq!(h.subdiag(), &[-3.0, -4.0]);
/// assert!(!h.is_symmetric());
/// ```
pub fn laguerre_hamiltonian<S: Scalar>(params: &ModelParams<S>) -> TridiagonalHamiltonian<S> {
    let n = params.n();
    let a = params.a();
    let diag = (0..n)
        .map(|i| a.clone() + S::from_int(2 * i as i64 + 1))
        .collect();
    let superdiag = (0..n.saturating_sub(1))
        .map(|i| -S::from_int(i as i64 + 1))
        .collect();
    let subdiag = (0..n.saturating_sub(1))
        .map(|i| -(a.clone() + S::from_int(i as i64 + 1)))
        .collect();
    TridiagonalHamiltonian {
        diag,
        superdiag,
        subdiag,
    }
}
