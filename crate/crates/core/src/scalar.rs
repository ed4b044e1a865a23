use core::fmt::Debug;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Numeric field used by the closed-form utilities and equilibrium formulas.
///
/// Implemented for `f64` and [`BigRational`]; the rational instance lets the
/// closed forms be checked exactly when every input is rational.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_f64_lossy(&self) -> f64;

    /// Lossless for `f64`; exact binary expansion for rationals.
    fn from_f64_exact(value: f64) -> Option<Self>;
}

impl Scalar for f64 {
    fn half() -> Self {
        0.5
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn from_f64_exact(value: f64) -> Option<Self> {
        Some(value)
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_exact(value: f64) -> Option<Self> {
        BigRational::from_f64(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn half_is_exact() {
        assert_eq!(<f64 as Scalar>::half(), 0.5);
        assert_eq!(
            BigRational::half(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn rational_to_f64() {
        let r = BigRational::new(BigInt::from(67), BigInt::from(96));
        assert!((r.to_f64_lossy() - 67.0 / 96.0).abs() < 1e-15);
    }
}
