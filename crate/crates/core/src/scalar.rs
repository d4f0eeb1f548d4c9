use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type used for entropies and log-values of bounds.
///
/// Exact verdicts never go through this type; it only carries the
/// human-readable and audit-level numbers.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts")
    }

    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize converts")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `log2` of an arbitrary-precision integer, accurate for values far
    /// beyond the float range.
    fn log2_big(x: &BigUint) -> Self {
        let bits = x.bits();
        if bits <= 1000 {
            return Self::of(x.to_f64().expect("below 2^1000").log2());
        }
        let shift = bits - 64;
        let top = (x >> shift).to_f64().expect("64-bit head");
        Self::of(top.log2()) + Self::of(shift as f64)
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_huge_integers() {
        let x = BigUint::from(3u32).pow(2000);
        let expected = 2000.0 * 3f64.log2();
        assert!((f64::log2_big(&x) - expected).abs() < 1e-9 * expected);
        assert_eq!(f32::log2_big(&BigUint::from(8u32)), 3.0);
    }
}
