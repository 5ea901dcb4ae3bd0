//! Cycles on the exceptional set and the exact linear algebra of the
//! intersection form: dual cycles `E*_v`, node weights, the canonical cycle
//! and Artin's fundamental cycle.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ResolutionGraph;
use crate::arith::{gcd_all, is_integral, q_to_string, IntMatrix, RatMatrix, Q, Z};
use crate::error::{invariant, Result};

/// Rational cycle `sum_v c_v E_v`, dense in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QCycle(pub Vec<Q>);

/// Integral cycle `sum_v c_v E_v`, dense in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntCycle(pub Vec<i64>);

impl QCycle {
    pub fn zero(n: usize) -> Self {
        Self(vec![Q::zero(); n])
    }

    /// `E_i`
    pub fn basis(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.0[i] = Q::one();
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> &Q {
        &self.0[i]
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integral)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Integral part `[D]`, coefficientwise floor.
    pub fn floor(&self) -> IntCycle {
        IntCycle(self.0.iter().map(|c| c.floor().to_integer().to_i64().expect("coefficient fits in i64")).collect())
    }

    /// Intersection number under the form `m`.
    pub fn dot(&self, m: &IntMatrix, o: &Self) -> Q {
        let mo = m.mul_qvec(&o.0);
        self.0.iter().zip(&mo).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `(D . E_w)_w`
    pub fn degrees(&self, m: &IntMatrix) -> Vec<Q> {
        m.mul_qvec(&self.0)
    }

    /// `(id, coefficient string)` pairs in vertex order.
    pub fn labeled(&self, g: &ResolutionGraph) -> Vec<(String, String)> {
        self.0.iter().enumerate().map(|(i, c)| (g.id(i).to_string(), q_to_string(c))).collect()
    }

    pub fn render(&self, g: &ResolutionGraph) -> String {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*{}", q_to_string(c), g.id(i)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl IntCycle {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn to_q(&self) -> QCycle {
        QCycle(self.0.iter().map(|&c| Q::from_integer(Z::from(c))).collect())
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn le(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn dot(&self, m: &IntMatrix, o: &Self) -> i64 {
        let n = self.0.len();
        let mut acc = 0i64;
        for i in 0..n {
            for j in 0..n {
                acc += self.0[i] * m[(i, j)].to_i64().unwrap() * o.0[j];
            }
        }
        acc
    }

    pub fn render(&self, g: &ResolutionGraph) -> String {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{}*{}", c, g.id(i)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// `(a_vw) = -I^{-1}` and the dual cycles `E*_v = sum_w a_vw E_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualData {
    pub inverse: RatMatrix,
    pub det_abs: Z,
    pub dual_cycles: Vec<QCycle>,
}

impl DualData {
    pub fn a(&self, v: usize, w: usize) -> &Q {
        &self.inverse[(v, w)]
    }

    pub fn dual(&self, v: usize) -> &QCycle {
        &self.dual_cycles[v]
    }

    /// `sum_w alpha_w E*_w`
    pub fn combination(&self, alpha: &[Q]) -> QCycle {
        let n = alpha.len();
        let mut out = QCycle::zero(n);
        for (w, aw) in alpha.iter().enumerate() {
            if aw.is_zero() {
                continue;
            }
            for u in 0..n {
                out.0[u] += aw * &self.inverse[(w, u)];
            }
        }
        out
    }
}

/// Dual data of a graph; validates the graph first.
pub fn dual_data(g: &ResolutionGraph) -> Result<DualData> {
    g.validate()?;
    let m = g.intersection_matrix();
    let inverse = m.inverse().ok_or_else(|| invariant("validated intersection matrix is singular"))?.neg();
    let det_abs = m.determinant().abs();
    let n = g.len();
    let dual_cycles: Vec<QCycle> = (0..n).map(|v| QCycle(inverse.column(v))).collect();
    for (v, d) in dual_cycles.iter().enumerate() {
        if let Some(w) = (0..n).find(|&w| !d.coeff(w).is_positive()) {
            return Err(invariant(format!("a_{{{},{}}} is not positive", g.id(v), g.id(w))));
        }
        let deg = d.degrees(&m);
        for (w, x) in deg.iter().enumerate() {
            let expected = if v == w { -Q::one() } else { Q::zero() };
            if *x != expected {
                return Err(invariant(format!("E*_{} . E_{} = {}", g.id(v), g.id(w), x)));
            }
        }
    }
    Ok(DualData { inverse, det_abs, dual_cycles })
}

/// Weights attached to a vertex `v`: `l_vw = |det I| a_vw`,
/// `e_v = |det I| / gcd_w l_vw`, `m_vw = e_v a_vw` and `a_v = e_v m_vv`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeWeights {
    pub v: usize,
    pub ell: Vec<u64>,
    pub e: u64,
    pub m: Vec<u64>,
    pub a_v: u64,
}

fn to_u64(x: &Z, what: &str) -> Result<u64> {
    x.to_u64().ok_or_else(|| invariant(format!("{what} = {x} does not fit in u64")))
}

/// Fails (as an internal assertion) when some `m_vw` is not integral or the
/// `m_vw` are not coprime.
pub fn node_weights(dual: &DualData, v: usize) -> Result<NodeWeights> {
    let n = dual.dual_cycles.len();
    let det = Q::from_integer(dual.det_abs.clone());
    let ell_q: Vec<Q> = (0..n).map(|w| &det * dual.a(v, w)).collect();
    if let Some(x) = ell_q.iter().find(|x| !is_integral(x)) {
        return Err(invariant(format!("l_vw = {x} is not integral")));
    }
    let ell_z: Vec<Z> = ell_q.iter().map(|x| x.to_integer()).collect();
    let g = gcd_all(&ell_z);
    let e = dual.det_abs.div_floor(&g);
    if !(&e * &g == dual.det_abs) {
        return Err(invariant("gcd of l_vw does not divide |det I|"));
    }
    let eq = Q::from_integer(e.clone());
    let m_q: Vec<Q> = (0..n).map(|w| &eq * dual.a(v, w)).collect();
    if let Some(x) = m_q.iter().find(|x| !is_integral(x)) {
        return Err(invariant(format!("m_vw = {x} is not integral")));
    }
    let m_z: Vec<Z> = m_q.iter().map(|x| x.to_integer()).collect();
    if !gcd_all(&m_z).is_one() {
        return Err(invariant("gcd of m_vw is not 1"));
    }
    let a_v = &e * &m_z[v];
    Ok(NodeWeights {
        v,
        ell: ell_z.iter().map(|x| to_u64(x, "l_vw")).collect::<Result<_>>()?,
        e: to_u64(&e, "e_v")?,
        m: m_z.iter().map(|x| to_u64(x, "m_vw")).collect::<Result<_>>()?,
        a_v: to_u64(&a_v, "a_v")?,
    })
}

/// `K` with `K . E_w = -E_w^2 - 2` for every `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCycle {
    pub cycle: QCycle,
    /// All coefficients integral.
    pub numerically_gorenstein: bool,
}

impl CanonicalCycle {
    /// `K . E_w`
    pub fn degree(g: &ResolutionGraph, w: usize) -> i64 {
        -g.weight(w) - 2
    }
}

pub fn canonical_cycle(g: &ResolutionGraph, dual: &DualData) -> CanonicalCycle {
    // I k = r  =>  k = I^{-1} r = -A r
    let r: Vec<Q> = (0..g.len()).map(|w| Q::from_integer(Z::from(CanonicalCycle::degree(g, w)))).collect();
    let k = dual.inverse.mul_vec(&r).into_iter().map(|x| -x).collect();
    let cycle = QCycle(k);
    let numerically_gorenstein = cycle.is_integral();
    CanonicalCycle { cycle, numerically_gorenstein }
}

/// Artin's fundamental cycle with its arithmetic genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    pub cycle: IntCycle,
    /// `p_a(Z) = 1 + Z.(Z + K)/2`
    pub arithmetic_genus: i64,
    /// Number of `Z += E_w` steps taken by the Laufer loop.
    pub steps: usize,
}

/// Laufer's algorithm: start from the reduced cycle and add `E_w` while
/// `Z . E_w > 0`.
pub fn fundamental_cycle(g: &ResolutionGraph) -> Result<FundamentalCycle> {
    let m = g.intersection_matrix();
    let n = g.len();
    let mut z = vec![1i64; n];
    let mut steps = 0;
    loop {
        let bad = (0..n).find(|&w| (0..n).map(|u| z[u] * m[(u, w)].to_i64().unwrap()).sum::<i64>() > 0);
        match bad {
            Some(w) => {
                z[w] += 1;
                steps += 1;
            }
            None => break,
        }
    }
    let cycle = IntCycle(z);
    let zz = cycle.dot(&m, &cycle);
    let zk: i64 = (0..n).map(|w| cycle.0[w] * CanonicalCycle::degree(g, w)).sum();
    if (zz + zk) % 2 != 0 {
        return Err(invariant("Z.(Z+K) is odd"));
    }
    Ok(FundamentalCycle { arithmetic_genus: 1 + (zz + zk) / 2, cycle, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, q_frac};
    use crate::fixtures;

    #[test]
    fn single_vertex_dual() {
        let g = ResolutionGraph::build(&[("e", -2)], &[]).unwrap();
        let d = dual_data(&g).unwrap();
        assert_eq!(d.det_abs, Z::from(2));
        assert_eq!(d.dual(0).0, vec![q_frac(1, 2)]);
        let w = node_weights(&d, 0).unwrap();
        assert_eq!((w.ell.clone(), w.e, w.m.clone(), w.a_v), (vec![1], 2, vec![1], 2));
    }

    #[test]
    fn d4_center_dual_and_weights() {
        let g = fixtures::d4();
        let d = dual_data(&g).unwrap();
        assert_eq!(d.det_abs, Z::from(4));
        // E*_c = 2E_c + E_l1 + E_l2 + E_l3, found by solving the 4x4 system
        assert_eq!(d.dual(0).0, vec![q(2), q(1), q(1), q(1)]);
        let w = node_weights(&d, 0).unwrap();
        assert_eq!(w.ell, vec![8, 4, 4, 4]);
        assert_eq!(w.e, 1);
        assert_eq!(w.m, vec![2, 1, 1, 1]);
        assert_eq!(w.a_v, 2);
    }

    #[test]
    fn exmc_relation_2e1_star() {
        let g = fixtures::exmc();
        let d = dual_data(&g).unwrap();
        let e1 = g.index_of("E1").unwrap();
        let e5 = g.index_of("E5").unwrap();
        let lhs = d.dual(e1).scale(&q(2)).sub(d.dual(e5));
        assert_eq!(lhs, QCycle::basis(g.len(), e1));
    }

    #[test]
    fn canonical_cycles() {
        let g = fixtures::e8();
        let k = canonical_cycle(&g, &dual_data(&g).unwrap());
        assert!(k.cycle.is_zero() && k.numerically_gorenstein);

        let g = ResolutionGraph::build(&[("e", -3)], &[]).unwrap();
        let k = canonical_cycle(&g, &dual_data(&g).unwrap());
        assert_eq!(k.cycle.0, vec![q_frac(-1, 3)]);
        assert!(!k.numerically_gorenstein);

        let g = fixtures::figure_one();
        let d = dual_data(&g).unwrap();
        let k = canonical_cycle(&g, &d);
        assert!(k.numerically_gorenstein);
        let m = g.intersection_matrix();
        for (w, x) in k.cycle.degrees(&m).iter().enumerate() {
            assert_eq!(*x, q(-g.weight(w) - 2));
        }
    }

    #[test]
    fn fundamental_cycles() {
        let g = ResolutionGraph::build(&[("e", -2)], &[]).unwrap();
        let z = fundamental_cycle(&g).unwrap();
        assert_eq!((z.cycle.0.clone(), z.arithmetic_genus), (vec![1], 0));

        let g = fixtures::d4();
        let z = fundamental_cycle(&g).unwrap();
        assert_eq!(z.cycle.0, vec![2, 1, 1, 1]);
        assert_eq!(z.arithmetic_genus, 0);

        let g = fixtures::figure_one();
        assert_eq!(fundamental_cycle(&g).unwrap().arithmetic_genus, 4);
    }
}
