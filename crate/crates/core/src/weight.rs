//! Edge-weight arithmetic in two modes: exact rationals and IEEE doubles.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

/// Numeric type for edge weights, tour lengths, gains, and certificate
/// arithmetic.
///
/// Two implementations exist: [`BigRational`] (exact, nothing ever rounds)
/// and [`f64`]. An instance uses one of them uniformly, and generic code
/// picks up the mode-appropriate tolerances from the trait.
pub trait Weight:
    Clone + Debug + Display + PartialOrd + Signed + Sum + ToPrimitive + Send + Sync + 'static
{
    /// True when arithmetic never rounds.
    const EXACT: bool;
    /// Mode tag used in instance files.
    const MODE: &'static str;

    /// Total order. Weights are never NaN; gains and differences may be
    /// negative.
    fn cmp_total(&self, other: &Self) -> Ordering;

    /// Parse a single matrix entry.
    ///
    /// Exact mode accepts `p` and `p/q` with integer `p` and positive
    /// integer `q`; float mode accepts decimal literals.
    fn parse_entry(text: &str) -> Result<Self, String>;

    /// Inverse of [`Weight::parse_entry`]: `parse_entry(&write_entry(x))`
    /// reproduces `x` bit-exactly.
    fn write_entry(&self) -> String;

    fn from_int(value: u64) -> Self;

    /// Smallest 2-change gain the engine accepts as an improvement.
    fn default_gain_epsilon() -> Self;

    /// Absolute slack applied to certificate inequalities.
    fn certificate_tolerance() -> Self;

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Weight for BigRational {
    const EXACT: bool = true;
    const MODE: &'static str = "EXACT";

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn parse_entry(text: &str) -> Result<Self, String> {
        let (num_text, den_text) = match text.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (text, None),
        };
        let numer: BigInt = num_text
            .parse()
            .map_err(|_| format!("invalid integer `{num_text}`"))?;
        let denom: BigInt = match den_text {
            Some(q) => q.parse().map_err(|_| format!("invalid denominator `{q}`"))?,
            None => BigInt::from(1),
        };
        if denom <= BigInt::zero() {
            return Err(format!("denominator must be positive in `{text}`"));
        }
        Ok(BigRational::new(numer, denom))
    }

    fn write_entry(&self) -> String {
        self.to_string()
    }

    fn from_int(value: u64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn default_gain_epsilon() -> Self {
        Self::zero()
    }

    fn certificate_tolerance() -> Self {
        Self::zero()
    }
}

impl Weight for f64 {
    const EXACT: bool = false;
    const MODE: &'static str = "FLOAT";

    fn cmp_total(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }

    fn parse_entry(text: &str) -> Result<Self, String> {
        let value: f64 = text
            .parse()
            .map_err(|_| format!("invalid decimal literal `{text}`"))?;
        if !value.is_finite() {
            return Err(format!("non-finite weight `{text}`"));
        }
        Ok(value)
    }

    fn write_entry(&self) -> String {
        // `Display` for f64 prints the shortest decimal that round-trips.
        format!("{self}")
    }

    fn from_int(value: u64) -> Self {
        value as f64
    }

    fn default_gain_epsilon() -> Self {
        1e-12
    }

    fn certificate_tolerance() -> Self {
        1e-9
    }
}

/// The constant 1/2 in either mode.
pub fn one_half<W: Weight>() -> W {
    W::from_int(1) / W::from_int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entries_parse_and_reduce() {
        let w = BigRational::parse_entry("6/4").unwrap();
        assert_eq!(w, BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(w.write_entry(), "3/2");
        assert_eq!(BigRational::parse_entry("7").unwrap().write_entry(), "7");
        assert_eq!(BigRational::parse_entry("0/9").unwrap().write_entry(), "0");
    }

    #[test]
    fn rational_entry_rejects_bad_syntax() {
        for bad in ["", "1/0", "1/-2", "1/", "/2", "a", "1.5", "1/2/3", "1 /2"] {
            assert!(BigRational::parse_entry(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn float_entries_round_trip() {
        for x in [0.0, 1.0, 0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-17, 123456.789] {
            let text = x.write_entry();
            assert_eq!(f64::parse_entry(&text).unwrap(), x, "text `{text}`");
        }
        assert!(f64::parse_entry("nan").is_err());
        assert!(f64::parse_entry("inf").is_err());
        assert!(f64::parse_entry("").is_err());
    }

    #[test]
    fn mode_constants() {
        assert!(BigRational::EXACT);
        assert!(!f64::EXACT);
        assert_eq!(BigRational::MODE, "EXACT");
        assert_eq!(f64::MODE, "FLOAT");
        assert!(BigRational::certificate_tolerance().is_zero());
        assert_eq!(f64::certificate_tolerance(), 1e-9);
        assert_eq!(one_half::<f64>(), 0.5);
    }
}
