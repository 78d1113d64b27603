//! Exact scalar types for payoffs, probabilities and epsilon.
//!
//! Every equilibrium computation is generic over [`ExactScalar`]. Only
//! rational types implement it; floating point is deliberately excluded so
//! that boundary comparisons are decided exactly.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed};

use crate::error::{Error, Result};

pub trait ExactScalar:
    Clone + Ord + Hash + Debug + Display + FromStr + Num + Signed + Send + Sync + 'static
{
    fn from_fraction(numer: i64, denom: i64) -> Self;

    fn from_count(n: usize) -> Self;

    fn numer_string(&self) -> String;

    fn denom_string(&self) -> String;
}

impl<T> ExactScalar for Ratio<T>
where
    T: Clone + Integer + Signed + FromPrimitive + Display + Debug + Hash + FromStr + Send + Sync + 'static,
{
    fn from_fraction(numer: i64, denom: i64) -> Self {
        Ratio::new(
            T::from_i64(numer).expect("numerator fits"),
            T::from_i64(denom).expect("denominator fits"),
        )
    }

    fn from_count(n: usize) -> Self {
        Ratio::from_integer(T::from_usize(n).expect("count fits"))
    }

    fn numer_string(&self) -> String {
        self.numer().to_string()
    }

    fn denom_string(&self) -> String {
        self.denom().to_string()
    }
}

/// `1 - 1/k`.
pub fn one_minus_inverse<S: ExactScalar>(k: usize) -> S {
    S::one() - S::one() / S::from_count(k)
}

/// Parses `"a/b"` or an integer `"a"`.
pub fn parse_rational<S: ExactScalar>(text: &str) -> Result<S> {
    let text = text.trim();
    if let Some((_, d)) = text.split_once('/') {
        if d.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(Error::InvalidParameter(format!("zero denominator in `{text}`")));
        }
    }
    text.parse::<S>()
        .map_err(|_| Error::InvalidParameter(format!("`{text}` is not a rational literal")))
}

/// Parses a strict `"a/b"` literal, as accepted by `--eps`.
pub fn parse_fraction_literal<S: ExactScalar>(text: &str) -> Result<S> {
    if !text.contains('/') {
        return Err(Error::InvalidParameter(format!(
            "`{text}` is not of the form a/b"
        )));
    }
    parse_rational(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Rational64};

    #[test]
    fn parses_fractions() {
        let half: Rational = parse_rational("2/4").unwrap();
        assert_eq!(half.to_string(), "1/2");
        let z: Rational64 = parse_rational("0").unwrap();
        assert_eq!(z, Rational64::from_integer(0));
        assert!(parse_rational::<Rational>("1/0").is_err());
        assert!(parse_rational::<Rational>("0.5").is_err());
        assert!(parse_fraction_literal::<Rational>("1").is_err());
        assert_eq!(parse_fraction_literal::<Rational>("99/100").unwrap().denom_string(), "100");
    }

    #[test]
    fn window_endpoint() {
        assert_eq!(one_minus_inverse::<Rational64>(4), Rational64::new(3, 4));
        assert_eq!(one_minus_inverse::<Rational64>(1), Rational64::from_integer(0));
    }
}
