//! Exact arithmetic: rationals, integer/rational matrices, univariate
//! polynomials, cyclotomic fields and truncated power series.

pub mod cyclo;
pub mod linalg;
pub mod poly;
pub mod series;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use cyclo::{cyclotomic_poly, CycloNumber, CyclotomicField};
pub use linalg::{IntMatrix, RatMatrix, SmithForm};
pub use poly::{PolyQ, RationalFunctionQ};
pub use series::{RationalRing, SeriesRing, TruncatedSeries};

/// Exact rational number.
pub type Q = BigRational;
/// Arbitrary precision integer.
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

pub fn z(n: i64) -> Z {
    Z::from(n)
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn to_i64(x: &Z) -> Option<i64> {
    x.to_i64()
}

/// Least common multiple of the denominators of `xs` (1 for an empty slice).
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Z {
    xs.into_iter().fold(Z::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Z>) -> Z {
    xs.into_iter().fold(Z::zero(), |acc, x| acc.gcd(x))
}

/// Renders a rational as `n` or `n/d`.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Z = n.trim().parse().ok()?;
            let d: Z = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<Z>().ok().map(Q::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_of_negative() {
        assert_eq!(frac(&q_frac(-1, 3)), q_frac(2, 3));
        assert_eq!(frac(&q(-2)), q(0));
        assert_eq!(frac(&q_frac(7, 2)), q_frac(1, 2));
    }

    #[test]
    fn rational_strings() {
        for s in ["0", "-3", "5/7", "-12/5"] {
            assert_eq!(q_to_string(&q_from_str(s).unwrap()), s);
        }
        assert!(q_from_str("1/0").is_none());
        assert_eq!(q_from_str("4/6").unwrap(), q_frac(2, 3));
    }
}
