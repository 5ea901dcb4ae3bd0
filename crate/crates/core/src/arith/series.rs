//! Truncated power series in `t` over a coefficient ring supplied as a
//! context object, so one implementation serves both `Q` and `Q(zeta_N)`.

use num_traits::{One, Zero};

use super::{CycloNumber, CyclotomicField, Q};

/// Ring operations needed by series arithmetic.
pub trait SeriesRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

/// The rationals as a coefficient ring.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalRing;

impl SeriesRing for RationalRing {
    type Elem = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
}

impl SeriesRing for CyclotomicField {
    type Elem = CycloNumber;
    fn zero(&self) -> CycloNumber {
        CyclotomicField::zero(self)
    }
    fn one(&self) -> CycloNumber {
        CyclotomicField::one(self)
    }
    fn is_zero(&self, a: &CycloNumber) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        CyclotomicField::add(self, a, b)
    }
    fn sub(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        CyclotomicField::sub(self, a, b)
    }
    fn mul(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        CyclotomicField::mul(self, a, b)
    }
}

/// Coefficients of `t^0, ..., t^{len-1}`; nothing beyond the bound is ever
/// read or written.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> TruncatedSeries<E> {
    pub fn one<R: SeriesRing<Elem = E>>(ring: &R, len: usize) -> Self {
        let mut coeffs = vec![ring.zero(); len];
        if len > 0 {
            coeffs[0] = ring.one();
        }
        Self { coeffs }
    }

    pub fn zero<R: SeriesRing<Elem = E>>(ring: &R, len: usize) -> Self {
        Self { coeffs: vec![ring.zero(); len] }
    }

    pub fn from_coeffs(coeffs: Vec<E>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    /// `self *= (1 - c t^m)`, `m >= 1`.
    pub fn mul_binomial<R: SeriesRing<Elem = E>>(&mut self, ring: &R, c: &E, m: usize) {
        assert!(m >= 1);
        for i in (m..self.coeffs.len()).rev() {
            if ring.is_zero(&self.coeffs[i - m]) {
                continue;
            }
            let t = ring.mul(c, &self.coeffs[i - m]);
            self.coeffs[i] = ring.sub(&self.coeffs[i], &t);
        }
    }

    /// `self /= (1 - c t^m)`, `m >= 1`.
    pub fn div_binomial<R: SeriesRing<Elem = E>>(&mut self, ring: &R, c: &E, m: usize) {
        assert!(m >= 1);
        for i in m..self.coeffs.len() {
            if ring.is_zero(&self.coeffs[i - m]) {
                continue;
            }
            let t = ring.mul(c, &self.coeffs[i - m]);
            self.coeffs[i] = ring.add(&self.coeffs[i], &t);
        }
    }

    /// `self *= (1 - c t^m)^e` for any integer `e`.
    pub fn mul_binomial_pow<R: SeriesRing<Elem = E>>(&mut self, ring: &R, c: &E, m: usize, e: i64) {
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                self.mul_binomial(ring, c, m);
            } else {
                self.div_binomial(ring, c, m);
            }
        }
    }

    pub fn mul<R: SeriesRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut out = vec![ring.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                let t = ring.mul(a, b);
                out[i + j] = ring.add(&out[i + j], &t);
            }
        }
        Self { coeffs: out }
    }

    pub fn add_assign<R: SeriesRing<Elem = E>>(&mut self, ring: &R, other: &Self) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = ring.add(a, b);
        }
    }

    pub fn map<F: Fn(&E) -> E>(&self, f: F) -> Self {
        Self { coeffs: self.coeffs.iter().map(f).collect() }
    }
}
