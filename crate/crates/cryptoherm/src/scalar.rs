//! Dual scalar backends: exact rational arithmetic and double precision.
//!
//! Every matrix type in this crate is generic over [`Scalar`]. The exact
//! backend ([`BigRational`]) performs no rounding, so residuals that vanish
//! algebraically come out as literal zeros; the float backend is for sweeps
//! and for the dense eigenvalue work where exactness is impossible anyway.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Field operations shared by both backends.
///
/// `Signed` brings in `Zero`, `One`, the four arithmetic operators and
/// `abs`; the remaining methods cover construction from small integers and
/// the backend-dependent decisions made by the elimination code.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Signed + 'static
{
    /// True when arithmetic is exact (no rounding anywhere).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Numeric view of the value (lossy for large rationals).
    fn to_f64(&self) -> f64;

    /// Pivot preference for Gaussian elimination; lower is better.
    ///
    /// Rationals rank by total bit size to limit coefficient growth; floats
    /// rank by magnitude so the usual partial pivoting falls out.
    fn pivot_cost(&self) -> u64;

    /// Rank decision for elimination. Exact values are negligible only when
    /// identically zero; floats compare against a norm-relative threshold
    /// derived from `scale` (the largest magnitude seen in the system).
    fn negligible(&self, scale: f64) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pivot_cost(&self) -> u64 {
        if *self == 0.0 || !self.is_finite() {
            return u64::MAX;
        }
        // larger magnitude => smaller cost
        (2100.0 - self.abs().log2()).max(0.0) as u64
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale.max(1.0)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(num.into(), den.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pivot_cost(&self) -> u64 {
        if num_traits::Zero::is_zero(self) {
            return u64::MAX;
        }
        self.numer().bits() + self.denom().bits()
    }

    fn negligible(&self, _scale: f64) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Product (a+1)(a+2)...(a+m); the empty product (m = 0) is 1.
pub fn shifted_factorial<S: Scalar>(a: &S, m: usize) -> S {
    let mut p = S::one();
    for i in 1..=m {
        p = p * (a.clone() + S::from_int(i as i64));
    }
    p
}

/// m! as a scalar of the active backend.
pub fn factorial<S: Scalar>(m: usize) -> S {
    let mut p = S::one();
    for i in 2..=m {
        p = p * S::from_int(i as i64);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let x = rat(1, 3) + rat(1, 6);
        assert_eq!(x, rat(1, 2));
        assert!((rat(1, 3) * rat(3, 1) - rat(1, 1)).is_zero());
    }

    #[test]
    fn shifted_factorial_matches_hand_expansion() {
        // (a+1)(a+2)(a+3) at a = 1/2 -> (3/2)(5/2)(7/2) = 105/8
        assert_eq!(shifted_factorial(&rat(1, 2), 3), rat(105, 8));
        assert_eq!(shifted_factorial(&rat(7, 1), 0), rat(1, 1));
        assert_eq!(shifted_factorial(&2.0f64, 2), 12.0);
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial::<BigRational>(0), rat(1, 1));
        assert_eq!(factorial::<BigRational>(5), rat(120, 1));
        assert_eq!(factorial::<f64>(6), 720.0);
    }

    #[test]
    fn pivot_cost_prefers_small_rationals_and_large_floats() {
        assert!(rat(1, 2).pivot_cost() < rat(123456789, 987654321).pivot_cost());
        assert!(8.0f64.pivot_cost() < 0.125f64.pivot_cost());
        assert_eq!(0.0f64.pivot_cost(), u64::MAX);
    }

    #[test]
    fn rational_display_is_reduced_fraction() {
        assert_eq!(format!("{}", rat(6, 4)), "3/2");
        assert_eq!(format!("{}", rat(8, 2)), "4");
        assert_eq!(format!("{}", rat(-1, 3)), "-1/3");
    }
}
