//! Dense univariate polynomials and rational functions over `Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{q_to_string, Q};

/// Polynomial in `t` with ascending coefficients; trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyQ {
    coeffs: Vec<Q>,
}

impl PolyQ {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| super::q(c)).collect())
    }

    /// `c * t^k`
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Builds from `(coefficient, exponent)` terms.
    pub fn from_terms(terms: &[(i64, usize)]) -> Self {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut v = vec![Q::zero(); deg + 1];
        for &(c, e) in terms {
            v[e] += super::q(c);
        }
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_at_one(&self) -> Q {
        self.coeffs.iter().fold(Q::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        r.truncate(dd);
        (Self::new(quot), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // keep remainders monic to limit coefficient growth
            b = r.monic();
        }
        a.monic()
    }

    /// Coefficient list as exact rational strings (for JSON).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(q_to_string).collect()
    }
}

impl fmt::Display for PolyQ {
    /// Human-readable rendering, highest degree first, e.g. `t^3 - 2t + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { q_to_string(&a) };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `numerator / denominator`, kept in lowest terms with the denominator
/// normalized to constant term 1 (or to a monic leading term when the
/// constant term vanishes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionQ {
    num: PolyQ,
    den: PolyQ,
}

impl RationalFunctionQ {
    pub fn new(num: PolyQ, den: PolyQ) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        Self::from_coprime(num, den)
    }

    /// Like [`RationalFunctionQ::new`] for a pair already known to be
    /// coprime; only the normalization is applied.
    pub fn from_coprime(num: PolyQ, den: PolyQ) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let norm = if den.coeff(0).is_zero() {
            den.leading().unwrap().clone()
        } else {
            den.coeff(0)
        };
        let inv = norm.recip();
        Self { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn polynomial(p: PolyQ) -> Self {
        Self::new(p, PolyQ::one())
    }

    pub fn numerator(&self) -> &PolyQ {
        &self.num
    }

    pub fn denominator(&self) -> &PolyQ {
        &self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    /// Equality by cross-multiplication, independent of normalization.
    pub fn same_function(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Power-series coefficients `0..len`; requires a nonzero constant term
    /// in the denominator.
    pub fn expand(&self, len: usize) -> Vec<Q> {
        let d0 = self.den.coeff(0);
        assert!(!d0.is_zero(), "denominator vanishes at t = 0");
        let inv = d0.recip();
        let mut out: Vec<Q> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.num.coeff(n);
            for (k, dk) in self.den.coeffs().iter().enumerate().skip(1) {
                if k > n {
                    break;
                }
                if !dk.is_zero() {
                    acc -= dk * &out[n - k];
                }
            }
            out.push(acc * &inv);
        }
        out
    }

    /// Splits off the polynomial part: `self = p + r / q` with `deg r < deg q`.
    pub fn polynomial_part(&self) -> PolynomialPart {
        let (p, r) = self.num.div_rem(&self.den);
        PolynomialPart { c_at_one: p.eval_at_one(), poly: p, remainder: r, denominator: self.den.clone() }
    }
}

impl fmt::Display for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Decomposition `p(t) + r(t)/q(t)` with `deg r < deg q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialPart {
    pub poly: PolyQ,
    pub remainder: PolyQ,
    pub denominator: PolyQ,
    /// `p(1)`
    pub c_at_one: Q,
}

impl PolynomialPart {
    pub fn proper_part(&self) -> RationalFunctionQ {
        RationalFunctionQ::new(self.remainder.clone(), self.denominator.clone())
    }
}
