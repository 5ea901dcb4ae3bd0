//! The cyclotomic field `Q(zeta_N) = Q[x] / Phi_N(x)` in the power basis.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{q_to_string, Q, Z};

/// Element of `Q(zeta_N)`: coordinates on `1, x, ..., x^{phi(N)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloNumber {
    conductor: u64,
    coords: Vec<Q>,
}

impl CycloNumber {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value when every non-constant coordinate vanishes.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(q_to_string).collect();
        format!("Q(zeta_{})[{}]", self.conductor, parts.join(", "))
    }
}

/// Arithmetic context for a fixed conductor `N`, with the powers
/// `zeta^0, ..., zeta^{N-1}` precomputed.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    n: u64,
    /// Monic `Phi_N`, ascending integer coefficients.
    modulus: Vec<Z>,
    roots: Vec<CycloNumber>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let mut memo = HashMap::new();
        let modulus = cyclotomic_polynomial(n, &mut memo);
        let deg = modulus.len() - 1;
        let mut field = Self { n, modulus, roots: Vec::with_capacity(n as usize) };
        // x^k reduced modulo Phi_N, by repeated multiplication by x
        let mut cur = vec![Q::zero(); deg];
        cur[0] = Q::one();
        for _ in 0..n {
            field.roots.push(CycloNumber { conductor: n, coords: cur.clone() });
            cur = field.times_x(&cur);
        }
        field
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `phi(N)`, the field degree.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Ascending coefficients of `Phi_N`.
    pub fn modulus(&self) -> &[Z] {
        &self.modulus
    }

    pub fn zero(&self) -> CycloNumber {
        CycloNumber { conductor: self.n, coords: vec![Q::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycloNumber {
        self.root(0)
    }

    pub fn rational(&self, c: Q) -> CycloNumber {
        let mut z = self.zero();
        z.coords[0] = c;
        z
    }

    /// `zeta^k` for any integer `k`.
    pub fn root(&self, k: i64) -> CycloNumber {
        self.roots[k.rem_euclid(self.n as i64) as usize].clone()
    }

    fn root_ref(&self, k: i64) -> &CycloNumber {
        &self.roots[k.rem_euclid(self.n as i64) as usize]
    }

    fn times_x(&self, c: &[Q]) -> Vec<Q> {
        let deg = self.degree();
        let mut out = vec![Q::zero(); deg];
        let top = c[deg - 1].clone();
        for i in (1..deg).rev() {
            out[i] = c[i - 1].clone();
        }
        if !top.is_zero() {
            for (i, m) in self.modulus[..deg].iter().enumerate() {
                out[i] -= &top * Q::from_integer(m.clone());
            }
        }
        out
    }

    pub fn add(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        CycloNumber {
            conductor: self.n,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn add_assign(&self, a: &mut CycloNumber, b: &CycloNumber) {
        for (x, y) in a.coords.iter_mut().zip(&b.coords) {
            *x += y;
        }
    }

    pub fn sub(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        CycloNumber {
            conductor: self.n,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &CycloNumber) -> CycloNumber {
        CycloNumber { conductor: self.n, coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &CycloNumber, c: &Q) -> CycloNumber {
        CycloNumber { conductor: self.n, coords: a.coords.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, a: &CycloNumber, b: &CycloNumber) -> CycloNumber {
        let deg = self.degree();
        if deg == 1 {
            return CycloNumber { conductor: self.n, coords: vec![&a.coords[0] * &b.coords[0]] };
        }
        let mut prod = vec![Q::zero(); 2 * deg - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // reduce modulo the monic Phi_N from the top down
        for k in (deg..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus[..deg].iter().enumerate() {
                prod[k - deg + j] -= &c * Q::from_integer(m.clone());
            }
        }
        prod.truncate(deg);
        CycloNumber { conductor: self.n, coords: prod }
    }

    /// `a * zeta^k`
    pub fn mul_root(&self, a: &CycloNumber, k: i64) -> CycloNumber {
        if k.rem_euclid(self.n as i64) == 0 {
            return a.clone();
        }
        self.mul(a, self.root_ref(k))
    }
}

/// Ascending integer coefficients of the cyclotomic polynomial `Phi_n`.
pub fn cyclotomic_poly(n: u64) -> Vec<Z> {
    cyclotomic_polynomial(n, &mut HashMap::new())
}

/// `Phi_n` by exact division of `x^n - 1` by `Phi_d` for proper divisors `d`.
fn cyclotomic_polynomial(n: u64, memo: &mut HashMap<u64, Vec<Z>>) -> Vec<Z> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![Z::zero(); n as usize + 1];
    p[0] = -Z::one();
    p[n as usize] = Z::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let f = cyclotomic_polynomial(d, memo);
            p = exact_monic_division(&p, &f);
        }
    }
    memo.insert(n, p.clone());
    p
}

fn exact_monic_division(a: &[Z], b: &[Z]) -> Vec<Z> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut quot = vec![Z::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = r[k + db].clone();
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, z};

    fn ints(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| z(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(CyclotomicField::new(1).modulus(), ints(&[-1, 1]));
        assert_eq!(CyclotomicField::new(2).modulus(), ints(&[1, 1]));
        assert_eq!(CyclotomicField::new(6).modulus(), ints(&[1, -1, 1]));
        assert_eq!(CyclotomicField::new(12).modulus(), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(CyclotomicField::new(9).modulus(), ints(&[1, 0, 0, 1, 0, 0, 1]));
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for n in [2u64, 3, 4, 6, 10, 12, 15] {
            let f = CyclotomicField::new(n);
            let mut acc = f.zero();
            for k in 0..n as i64 {
                f.add_assign(&mut acc, &f.root(k));
            }
            assert!(acc.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn root_multiplication_wraps() {
        let f = CyclotomicField::new(12);
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(f.mul(&f.root(a), &f.root(b)), f.root(a + b));
            }
        }
        assert_eq!(f.root(-1), f.root(11));
    }

    #[test]
    fn rationality() {
        let f = CyclotomicField::new(3);
        // zeta + zeta^2 = -1
        let s = f.add(&f.root(1), &f.root(2));
        assert_eq!(s.as_rational(), Some(q(-1)));
        assert_eq!(f.root(1).as_rational(), None);
        let f1 = CyclotomicField::new(1);
        assert_eq!(f1.root(5).as_rational(), Some(q(1)));
    }
}
