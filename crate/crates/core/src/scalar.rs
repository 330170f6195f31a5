//! Exact coefficient fields.
//!
//! Every coefficient in the crate lives in a type implementing [`Scalar`]:
//! an exact field with cheap by-reference arithmetic and a canonical
//! `num/den` text form. Floating point types deliberately do not implement
//! it.

use std::fmt::Debug;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{NumAssignRef, NumRef, One, Zero};

/// An exact field of coefficients.
pub trait Scalar:
    NumRef + NumAssignRef + Neg<Output = Self> + Clone + PartialEq + Debug + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// `num / den`. Panics if `den` is zero.
    fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Canonical text form: always `num/den` in lowest terms with a
    /// positive denominator.
    fn to_fraction_string(&self) -> String;

    /// Parses `num/den` or a bare integer. Rejects zero denominators.
    fn parse_fraction(text: &str) -> Option<Self>;

    fn is_integer(&self) -> bool;

    fn factorial(n: u32) -> Self {
        (1..=n as i64).fold(Self::one(), |acc, k| acc * Self::from_i64(k))
    }
}

macro_rules! impl_ratio_scalar {
    ($int:ty, $conv:expr) => {
        impl Scalar for Ratio<$int> {
            fn from_i64(n: i64) -> Self {
                Ratio::from_integer($conv(n))
            }

            fn to_fraction_string(&self) -> String {
                format!("{}/{}", self.numer(), self.denom())
            }

            fn parse_fraction(text: &str) -> Option<Self> {
                let text = text.trim();
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num = <$int>::from_str(num).ok()?;
                let den = <$int>::from_str(den).ok()?;
                if den.is_zero() {
                    return None;
                }
                Some(Ratio::new(num, den))
            }

            fn is_integer(&self) -> bool {
                self.denom().is_one()
            }
        }
    };
}

impl_ratio_scalar!(BigInt, BigInt::from);
impl_ratio_scalar!(i64, |n: i64| n);
impl_ratio_scalar!(i128, |n: i64| n as i128);

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn fraction_text_is_reduced_with_positive_denominator() {
        let x = BigRational::parse_fraction("6/-4").unwrap();
        assert_eq!(x.to_fraction_string(), "-3/2");
        assert_eq!(BigRational::from_i64(5).to_fraction_string(), "5/1");
        assert_eq!(
            BigRational::parse_fraction(" 7 ").unwrap(),
            BigRational::from_i64(7)
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(BigRational::parse_fraction("1/0").is_none());
        assert!(Ratio::<i64>::parse_fraction("x/2").is_none());
    }

    #[test]
    fn factorials() {
        assert_eq!(BigRational::factorial(0), BigRational::one());
        assert_eq!(
            BigRational::factorial(15),
            BigRational::from_i64(1_307_674_368_000)
        );
    }
}
