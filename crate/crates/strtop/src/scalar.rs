//! Exact rational scalars.
//!
//! Every identity in this crate is an exact algebraic identity, so all
//! linear algebra runs over `Q` with arbitrary-precision integers. No
//! floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Exact rational coefficient. Always in lowest terms with positive
/// denominator (maintained by `BigRational` itself).
pub type Scalar = BigRational;

/// The scalar `n/1`.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// The scalar `p/q`. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `(-1)^e` for a possibly negative exponent.
pub fn sign(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        int(1)
    } else {
        int(-1)
    }
}

pub fn is_zero(s: &Scalar) -> bool {
    s.is_zero()
}

/// Renders a scalar as `p` or `p/q`, matching the JSON wire format.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_scalar(text: &str) -> Result<Scalar, AlgebraError> {
    let bad = || AlgebraError::BadScalar(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    // normalize the denominator to be positive
    if q.is_negative() {
        Ok(BigRational::new(-p, -q))
    } else {
        Ok(BigRational::new(p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for text in ["3", "-7", "1/2", "-4/6", "0"] {
            let s = parse_scalar(text).unwrap();
            let back = parse_scalar(&format_scalar(&s)).unwrap();
            assert_eq!(s, back);
        }
        assert_eq!(parse_scalar("-4/6").unwrap(), ratio(-2, 3));
        assert_eq!(parse_scalar("5/-10").unwrap(), ratio(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn sign_parity() {
        assert_eq!(sign(0), int(1));
        assert_eq!(sign(3), int(-1));
        assert_eq!(sign(-1), int(-1));
        assert_eq!(sign(-4), int(1));
    }

    proptest! {
        // (a/b) * (b/a) = 1 for all nonzero rationals
        #[test]
        fn multiplicative_inverse(p in -200i64..200, q in 1i64..200) {
            prop_assume!(p != 0);
            let s = ratio(p, q);
            let inv = ratio(q, p);
            prop_assert_eq!(s * inv, int(1));
        }

        #[test]
        fn field_distributivity(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20, e in -50i64..50, f in 1i64..20) {
            let (x, y, z) = (ratio(a, b), ratio(c, d), ratio(e, f));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y + x * z);
        }
    }
}
