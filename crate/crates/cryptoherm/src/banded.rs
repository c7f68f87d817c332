//! Symmetric (2k+1)-diagonal matrices with upper-band storage.
//!
//! Metric operators and pseudometrics of the lattice model are symmetric and
//! band-limited, so only the diagonals d = 0..k above the main diagonal are
//! stored; symmetry is structural and everything beyond band k is identically
//! zero by construction.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Real symmetric banded matrix. `bands[d][j]` holds the element (j, j+d)
/// in 0-based indices (equivalently θ_{n, n+d} with n = j+1 in the 1-based
/// convention of the model formulas); band d has length n−d.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedSymmetricMatrix<S> {
    n: usize,
    bands: Vec<Vec<S>>,
}

impl<S: Scalar> BandedSymmetricMatrix<S> {
    /// Zero matrix of dimension n with half-width k (k ≤ n−1).
    pub fn zeros(n: usize, half_width: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        if half_width >= n {
            return Err(Error::InvalidParameter(format!(
                "half-width {half_width} does not fit dimension {n}"
            )));
        }
        let bands = (0..=half_width)
            .map(|d| vec![S::zero(); n - d])
            .collect();
        Ok(Self { n, bands })
    }

    /// Build from explicit upper bands; `bands[d]` must have length
    /// `bands[0].len() - d`.
    pub fn from_bands(bands: Vec<Vec<S>>) -> Result<Self> {
        if bands.is_empty() || bands[0].is_empty() {
            return Err(Error::InvalidParameter("empty band list".into()));
        }
        let n = bands[0].len();
        if bands.len() > n {
            return Err(Error::InvalidParameter(format!(
                "half-width {} does not fit dimension {n}",
                bands.len() - 1
            )));
        }
        for (d, band) in bands.iter().enumerate() {
            if band.len() != n - d {
                return Err(Error::InvalidParameter(format!(
                    "band {d} has length {}, expected {}",
                    band.len(),
                    n - d
                )));
            }
        }
        Ok(Self { n, bands })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            bands: vec![vec![S::one(); n]],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn band(&self, d: usize) -> &[S] {
        &self.bands[d]
    }

    pub fn band_mut(&mut self, d: usize) -> &mut [S] {
        &mut self.bands[d]
    }

    /// Element (i, j); symmetry and the band cutoff are applied, so any index
    /// pair inside the matrix is valid.
    pub fn get(&self, i: usize, j: usize) -> S {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d < self.bands.len() {
            self.bands[d][lo].clone()
        } else {
            S::zero()
        }
    }

    /// Set the symmetric pair (i, j) and (j, i); the pair must lie inside
    /// the stored bands.
    pub fn set(&mut self, i: usize, j: usize, value: S) -> Result<()> {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d >= self.bands.len() {
            return Err(Error::InvalidParameter(format!(
                "element ({i}, {j}) lies outside half-width {}",
                self.half_width()
            )));
        }
        self.bands[d][lo] = value;
        Ok(())
    }

    /// Matrix-vector product in O(n·k).
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                self.n
            )));
        }
        let mut out = vec![S::zero(); self.n];
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = self.bands[0][i].clone() * v[i].clone();
            for d in 1..self.bands.len() {
                if i >= d {
                    s = s + self.bands[d][i - d].clone() * v[i - d].clone();
                }
                if i + d < self.n {
                    s = s + self.bands[d][i].clone() * v[i + d].clone();
                }
            }
            *o = s;
        }
        Ok(out)
    }

    /// Bilinear form uᵀ·Θ·v.
    pub fn quadratic_form(&self, u: &[S], v: &[S]) -> Result<S> {
        let tv = self.apply(v)?;
        if u.len() != self.n {
            return Err(Error::InvalidParameter("length mismatch".into()));
        }
        let mut s = S::zero();
        for (x, y) in u.iter().zip(tv) {
            s = s + x.clone() * y;
        }
        Ok(s)
    }

    /// Self + coeff·other; the result's half-width is the larger of the two.
    pub fn add_scaled(&self, coeff: &S, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidParameter("dimension mismatch".into()));
        }
        let k = self.half_width().max(other.half_width());
        let mut out = Self::zeros(self.n, k)?;
        for d in 0..=k {
            for j in 0..self.n - d {
                let mut v = if d < self.bands.len() {
                    self.bands[d][j].clone()
                } else {
                    S::zero()
                };
                if d < other.bands.len() {
                    v = v + coeff.clone() * other.bands[d][j].clone();
                }
                out.bands[d][j] = v;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, coeff: &S) -> Self {
        Self {
            n: self.n,
            bands: self
                .bands
                .iter()
                .map(|band| band.iter().map(|x| coeff.clone() * x.clone()).collect())
                .collect(),
        }
    }

    /// Largest absolute element.
    pub fn max_abs(&self) -> S {
        let mut m = S::zero();
        for band in &self.bands {
            for x in band {
                let a = x.abs();
                if a > m {
                    m = a;
                }
            }
        }
        m
    }

    /// Drop bands beyond `new_half_width`, failing if any dropped entry is
    /// not negligible (exact zero in the rational backend).
    pub fn truncate_to(mut self, new_half_width: usize) -> Result<Self> {
        let scale = self.max_abs().to_f64();
        for d in new_half_width + 1..self.bands.len() {
            for (j, x) in self.bands[d].iter().enumerate() {
                if !x.negligible(scale) {
                    return Err(Error::Numerical(format!(
                        "band {d} entry at offset {j} is {x}, expected zero when \
                         truncating to half-width {new_half_width}"
                    )));
                }
            }
        }
        self.bands.truncate(new_half_width + 1);
        Ok(self)
    }

    /// Same matrix in the float backend.
    pub fn to_f64(&self) -> BandedSymmetricMatrix<f64> {
        BandedSymmetricMatrix {
            n: self.n,
            bands: self
                .bands
                .iter()
                .map(|band| band.iter().map(Scalar::to_f64).collect())
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bands.iter().all(|b| b.iter().all(Zero::is_zero))
    }
}

impl BandedSymmetricMatrix<f64> {
    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn get_and_set_respect_symmetry_and_cutoff() {
        let mut m = BandedSymmetricMatrix::<f64>::zeros(4, 1).unwrap();
        m.set(2, 1, 7.0).unwrap();
        assert_eq!(m.get(1, 2), 7.0);
        assert_eq!(m.get(2, 1), 7.0);
        assert_eq!(m.get(0, 3), 0.0); // outside the band
        assert!(m.set(0, 3, 1.0).is_err());
        assert_eq!(m.half_width(), 1);
        assert_eq!(m.dim(), 4);
    }

    #[test]
    fn apply_matches_dense_multiplication() {
        let mut m = BandedSymmetricMatrix::<f64>::zeros(5, 2).unwrap();
        let mut val = 1.0;
        for d in 0..=2usize {
            for j in 0..5 - d {
                m.set(j, j + d, val).unwrap();
                val += 1.0;
            }
        }
        let v = [1.0, -2.0, 0.5, 3.0, -1.0];
        let banded = m.apply(&v).unwrap();
        let dense = m.to_dense() * nalgebra::DVector::from_row_slice(&v);
        for i in 0..5 {
            assert!((banded[i] - dense[i]).abs() < 1e-12, "component {i}");
        }
    }

    #[test]
    fn quadratic_form_is_symmetric_in_rational_arithmetic() {
        let mut m = BandedSymmetricMatrix::<BigRational>::zeros(4, 2).unwrap();
        let mut c = 1i64;
        for d in 0..=2usize {
            for j in 0..4 - d {
                m.set(j, j + d, rat(c, c + 2)).unwrap();
                c += 1;
            }
        }
        let u: Vec<_> = (0..4).map(|i| rat(i - 2, 3)).collect();
        let v: Vec<_> = (0..4).map(|i| rat(2 * i + 1, 5)).collect();
        assert_eq!(
            m.quadratic_form(&u, &v).unwrap(),
            m.quadratic_form(&v, &u).unwrap()
        );
    }

    #[test]
    fn add_scaled_widens_to_the_larger_band() {
        let diag = BandedSymmetricMatrix::<BigRational>::identity(3);
        let mut tri = BandedSymmetricMatrix::<BigRational>::zeros(3, 1).unwrap();
        tri.set(0, 1, rat(1, 1)).unwrap();
        tri.set(1, 2, rat(2, 1)).unwrap();
        let sum = diag.add_scaled(&rat(1, 2), &tri).unwrap();
        assert_eq!(sum.half_width(), 1);
        assert_eq!(sum.get(0, 0), rat(1, 1));
        assert_eq!(sum.get(0, 1), rat(1, 2));
        assert_eq!(sum.get(1, 2), rat(1, 1));
    }

    #[test]
    fn truncation_requires_exact_zeros() {
        let mut m = BandedSymmetricMatrix::<BigRational>::zeros(4, 2).unwrap();
        m.set(0, 0, rat(1, 1)).unwrap();
        m.set(0, 2, rat(1, 3)).unwrap();
        assert!(m.clone().truncate_to(1).is_err());
        m.set(0, 2, rat(0, 1)).unwrap();
        let t = m.truncate_to(1).unwrap();
        assert_eq!(t.half_width(), 1);
        assert_eq!(t.get(0, 0), rat(1, 1));
    }

    #[test]
    fn dimension_and_band_validation() {
        assert!(BandedSymmetricMatrix::<f64>::zeros(3, 3).is_err());
        assert!(BandedSymmetricMatrix::<f64>::zeros(0, 0).is_err());
        assert!(BandedSymmetricMatrix::from_bands(vec![vec![1.0, 2.0], vec![3.0]]).is_ok());
        assert!(BandedSymmetricMatrix::from_bands(vec![vec![1.0, 2.0], vec![3.0, 4.0]])
            .is_err());
        let m = BandedSymmetricMatrix::<f64>::identity(2);
        assert!(m.apply(&[1.0]).is_err());
    }
}
