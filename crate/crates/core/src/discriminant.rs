//! The discriminant group `H = L*/L`, its characters and the pairing
//! `theta(h, h') = exp(2 pi i h.h')`.
//!
//! A cycle `D = sum beta_u E_u` lies in `L*` iff `y = I beta` is integral,
//! and `L*/L` is identified with `coker(I)` through `D -> y`. With a Smith
//! form `U I V = diag(s)`, the class of `y` has coordinates `(U y)_j mod d_j`
//! over the invariant factors `d_j = s_j > 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{frac, is_integral, q_to_string, IntMatrix, RatMatrix, Q, Z};
use crate::error::{invariant, Error, Result};
use crate::graph::{Branch, DualData, QCycle, ResolutionGraph};

/// Element of `H` in invariant-factor coordinates, `coords[j] in [0, d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HElement(pub Vec<u64>);

/// Character `h -> exp(2 pi i sum_j coords[j] h_j / d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Character(pub Vec<u64>);

impl Character {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Comma-separated coordinates, as accepted by [`GroupData::parse_character`].
    pub fn to_flag(&self) -> String {
        self.0.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_flag())
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A rational number modulo 1, stored reduced in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalMod1(Q);

impl RationalMod1 {
    pub fn new(x: &Q) -> Self {
        Self(frac(x))
    }

    pub fn zero() -> Self {
        Self(Q::zero())
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&(&self.0 + &o.0))
    }

    /// `k` with `self = k / n`; fails unless `n * self` is integral.
    pub fn numerator_over(&self, n: u64) -> Option<u64> {
        let x = &self.0 * Q::from_integer(Z::from(n));
        is_integral(&x).then(|| x.to_integer().to_u64().expect("residue fits in u64"))
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&q_to_string(&self.0))
    }
}

impl Serialize for RationalMod1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q_to_string(&self.0))
    }
}

/// `H` with the data needed to move between cycles, classes and characters.
#[derive(Debug)]
pub struct GroupData {
    pub invariant_factors: Vec<u64>,
    pub order: u64,
    /// Exponent `N` of `H` (1 for the trivial group).
    pub exponent: u64,
    matrix: IntMatrix,
    a: RatMatrix,
    /// Rows of `U` belonging to the invariant factors.
    coord_rows: Vec<Vec<Z>>,
    /// `y`-lifts of the generators: columns of `U^{-1}`.
    generator_lifts: Vec<Vec<Z>>,
    /// `(A y_j)_w mod 1`: exponent of `theta(g_j, E*_w)`.
    dual_pairing: Vec<Vec<Q>>,
    /// `theta(g_j, g_l)` exponents.
    pairing: Vec<Vec<RationalMod1>>,
    strides: Vec<u64>,
    inverse_theta: OnceLock<std::result::Result<HashMap<Character, u64>, String>>,
}

impl Clone for GroupData {
    fn clone(&self) -> Self {
        Self {
            invariant_factors: self.invariant_factors.clone(),
            order: self.order,
            exponent: self.exponent,
            matrix: self.matrix.clone(),
            a: self.a.clone(),
            coord_rows: self.coord_rows.clone(),
            generator_lifts: self.generator_lifts.clone(),
            dual_pairing: self.dual_pairing.clone(),
            pairing: self.pairing.clone(),
            strides: self.strides.clone(),
            inverse_theta: OnceLock::new(),
        }
    }
}

/// Builds `H` for a validated graph.
pub fn discriminant_group(g: &ResolutionGraph, dual: &DualData) -> Result<GroupData> {
    let matrix = g.intersection_matrix();
    let n = g.len();
    let smith = matrix.smith();
    let mut invariant_factors = Vec::new();
    let mut coord_rows: Vec<Vec<Z>> = Vec::new();
    let mut generator_lifts: Vec<Vec<Z>> = Vec::new();
    for (k, s) in smith.diag.iter().enumerate() {
        if s.is_zero() {
            return Err(invariant("intersection matrix has a zero invariant factor"));
        }
        if s.is_one() {
            continue;
        }
        invariant_factors.push(s.to_u64().ok_or_else(|| invariant("invariant factor too large"))?);
        coord_rows.push(smith.left.row(k).to_vec());
        generator_lifts.push((0..n).map(|i| smith.left_inv[(i, k)].clone()).collect());
    }
    let order: u64 = invariant_factors.iter().product();
    if Z::from(order) != dual.det_abs {
        return Err(invariant(format!("|H| = {order} but |det I| = {}", dual.det_abs)));
    }
    let exponent = invariant_factors.last().copied().unwrap_or(1);
    let a = dual.inverse.clone();
    let yq = |y: &[Z]| -> Vec<Q> { y.iter().map(|x| Q::from_integer(x.clone())).collect() };
    let dual_pairing: Vec<Vec<Q>> =
        generator_lifts.iter().map(|y| a.mul_vec(&yq(y)).iter().map(frac).collect()).collect();
    let pairing = generator_lifts
        .iter()
        .map(|yj| {
            let ayj = a.mul_vec(&yq(yj));
            generator_lifts
                .iter()
                .map(|yl| {
                    let s = yl.iter().zip(&ayj).fold(Q::zero(), |acc, (x, b)| acc + Q::from_integer(x.clone()) * b);
                    RationalMod1::new(&-s)
                })
                .collect()
        })
        .collect();
    let mut strides = vec![1u64; invariant_factors.len()];
    for j in (0..invariant_factors.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * invariant_factors[j + 1];
    }
    let gd = GroupData {
        invariant_factors,
        order,
        exponent,
        matrix,
        a,
        coord_rows,
        generator_lifts,
        dual_pairing,
        pairing,
        strides,
        inverse_theta: OnceLock::new(),
    };
    for (j, row) in gd.pairing.iter().enumerate() {
        for (l, x) in row.iter().enumerate() {
            if *x != gd.pairing[l][j] {
                return Err(invariant("theta pairing is not symmetric"));
            }
        }
    }
    Ok(gd)
}

impl GroupData {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn zero(&self) -> HElement {
        HElement(vec![0; self.rank()])
    }

    pub fn trivial_character(&self) -> Character {
        Character(vec![0; self.rank()])
    }

    /// Element with the given position in lexicographic coordinate order.
    pub fn element(&self, index: u64) -> HElement {
        HElement(self.strides.iter().zip(&self.invariant_factors).map(|(s, d)| (index / s) % d).collect())
    }

    pub fn index_of(&self, h: &HElement) -> u64 {
        h.0.iter().zip(&self.strides).map(|(x, s)| x * s).sum()
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<HElement> {
        (0..self.order).map(|i| self.element(i)).collect()
    }

    /// All characters in lexicographic coordinate order.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.order).map(|i| Character(self.element(i).0)).collect()
    }

    pub fn character_index(&self, chi: &Character) -> u64 {
        self.index_of(&HElement(chi.0.clone()))
    }

    /// Parses `"a,b,c"`; an empty string is the trivial character of the
    /// trivial group.
    pub fn parse_character(&self, text: &str) -> Result<Character> {
        let parts: Vec<&str> = if text.trim().is_empty() { vec![] } else { text.split(',').collect() };
        if parts.len() != self.rank() {
            return Err(Error::InvalidCharacter(format!(
                "expected {} coordinates for invariant factors {:?}, got {}",
                self.rank(),
                self.invariant_factors,
                parts.len()
            )));
        }
        let mut coords = Vec::with_capacity(parts.len());
        for (p, &d) in parts.iter().zip(&self.invariant_factors) {
            let c: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::InvalidCharacter(format!("`{}` is not a nonnegative integer", p.trim())))?;
            if c >= d {
                return Err(Error::InvalidCharacter(format!("coordinate {c} is not below {d}")));
            }
            coords.push(c);
        }
        Ok(Character(coords))
    }

    pub fn check_character(&self, chi: &Character) -> Result<()> {
        if chi.0.len() != self.rank() || chi.0.iter().zip(&self.invariant_factors).any(|(c, d)| c >= d) {
            return Err(Error::InvalidCharacter(format!("{chi} for invariant factors {:?}", self.invariant_factors)));
        }
        Ok(())
    }

    /// `y = I beta` for `D = sum beta_u E_u`; errors unless integral.
    fn y_of(&self, d: &QCycle) -> Result<Vec<Z>> {
        let y = self.matrix.mul_qvec(&d.0);
        if !y.iter().all(is_integral) {
            return Err(Error::NotInDualLattice);
        }
        Ok(y.iter().map(|x| x.to_integer()).collect())
    }

    fn class_of_y(&self, y: &[Z]) -> HElement {
        HElement(
            self.coord_rows
                .iter()
                .zip(&self.invariant_factors)
                .map(|(row, &d)| {
                    let s = row.iter().zip(y).fold(Z::zero(), |acc, (u, x)| acc + u * x);
                    s.mod_floor(&Z::from(d)).to_u64().unwrap()
                })
                .collect(),
        )
    }

    pub fn class_of(&self, d: &QCycle) -> Result<HElement> {
        Ok(self.class_of_y(&self.y_of(d)?))
    }

    /// Class of `E*_w`.
    pub fn dual_class(&self, w: usize) -> HElement {
        let mut y = vec![Z::zero(); self.matrix.rows()];
        y[w] = -Z::one();
        self.class_of_y(&y)
    }

    fn lift_y(&self, h: &HElement) -> Vec<Z> {
        let n = self.matrix.rows();
        let mut y = vec![Z::zero(); n];
        for (hj, col) in h.0.iter().zip(&self.generator_lifts) {
            if *hj == 0 {
                continue;
            }
            let hj = Z::from(*hj);
            for (yi, ci) in y.iter_mut().zip(col) {
                *yi += &hj * ci;
            }
        }
        y
    }

    /// Some cycle in `L*` with class `h`.
    pub fn lift(&self, h: &HElement) -> QCycle {
        let y: Vec<Q> = self.lift_y(h).into_iter().map(Q::from_integer).collect();
        QCycle(self.a.mul_vec(&y).into_iter().map(|x| -x).collect())
    }

    /// Exponent of `theta(h, h')`.
    pub fn theta(&self, h: &HElement, h2: &HElement) -> RationalMod1 {
        let mut s = Q::zero();
        for (j, &x) in h.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (l, &y) in h2.0.iter().enumerate() {
                if y != 0 {
                    s += self.pairing[j][l].value() * Q::from_integer(Z::from(x * y));
                }
            }
        }
        RationalMod1::new(&s)
    }

    /// Exponent of `theta(h, D)` for `D` in `L*`.
    pub fn theta_cycle(&self, h: &HElement, d: &QCycle) -> Result<RationalMod1> {
        Ok(self.theta(h, &self.class_of(d)?))
    }

    /// Exponent of `theta(h, E*_w)`.
    pub fn theta_dual(&self, h: &HElement, w: usize) -> RationalMod1 {
        let s = h
            .0
            .iter()
            .zip(&self.dual_pairing)
            .filter(|(x, _)| **x != 0)
            .fold(Q::zero(), |acc, (x, t)| acc + &t[w] * Q::from_integer(Z::from(*x)));
        RationalMod1::new(&s)
    }

    /// `k` with `theta(h, E*_w) = zeta_N^k`, `N` the exponent.
    pub fn theta_dual_root(&self, h: &HElement, w: usize) -> u64 {
        self.theta_dual(h, w).numerator_over(self.exponent).expect("pairing values have denominator dividing N")
    }

    /// `theta(h)` as a character.
    pub fn theta_character(&self, h: &HElement) -> Character {
        Character(
            self.invariant_factors
                .iter()
                .enumerate()
                .map(|(j, &d)| {
                    let g = self.element_basis(j);
                    self.theta(h, &g).numerator_over(d).expect("theta(h, g_j) has denominator dividing d_j")
                })
                .collect(),
        )
    }

    /// `theta(D)` for `D` in `L*`.
    pub fn character_of(&self, d: &QCycle) -> Result<Character> {
        Ok(self.theta_character(&self.class_of(d)?))
    }

    fn element_basis(&self, j: usize) -> HElement {
        let mut v = vec![0; self.rank()];
        v[j] = 1;
        HElement(v)
    }

    /// `chi(h)` as the exponent `k` of `zeta_N^k`.
    pub fn character_root(&self, chi: &Character, h: &HElement) -> u64 {
        let n = self.exponent;
        chi.0
            .iter()
            .zip(&h.0)
            .zip(&self.invariant_factors)
            .map(|((c, x), d)| (c * x % d) * (n / d))
            .sum::<u64>()
            % n
    }

    fn inverse_table(&self) -> Result<&HashMap<Character, u64>> {
        self.inverse_theta
            .get_or_init(|| {
                let mut table = HashMap::with_capacity(self.order as usize);
                for i in 0..self.order {
                    let chi = self.theta_character(&self.element(i));
                    if table.insert(chi.clone(), i).is_some() {
                        return Err(format!("theta is not injective: {chi} is hit twice"));
                    }
                }
                Ok(table)
            })
            .as_ref()
            .map_err(|e| invariant(e.clone()))
    }

    /// `theta^{-1}(chi)`.
    pub fn theta_inverse(&self, chi: &Character) -> Result<HElement> {
        self.check_character(chi)?;
        let i = self.inverse_table()?.get(chi).copied().ok_or_else(|| invariant(format!("{chi} not in image of theta")))?;
        Ok(self.element(i))
    }

    /// Verifies that `theta: H -> H^` is a bijection.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let t = self.inverse_table()?;
        if t.len() as u64 != self.order {
            return Err(invariant("theta is not surjective"));
        }
        Ok(())
    }

    /// `c_1(L_chi)`: the representative of `theta^{-1}(chi)` with every
    /// coefficient in `[0, 1)`.
    pub fn fractional_representative(&self, chi: &Character) -> Result<QCycle> {
        let h = self.theta_inverse(chi)?;
        let d = self.lift(&h);
        let rep = QCycle(d.0.iter().map(frac).collect());
        if self.class_of(&rep)? != h {
            return Err(invariant("fractional representative changed class"));
        }
        Ok(rep)
    }
}

/// `phi_i`: writes `D = sum alpha_w E*_w` over the parent, keeps the branch
/// vertices and reinterprets with the branch's own dual cycles. The result
/// is indexed by branch vertices.
pub fn phi(parent: &ResolutionGraph, branch: &Branch, branch_dual: &DualData, d: &QCycle) -> QCycle {
    let deg = parent.intersection_matrix().mul_qvec(&d.0);
    let alpha: Vec<Q> = branch.embedding.iter().map(|&p| -deg[p].clone()).collect();
    branch_dual.combination(&alpha)
}

/// `psi_i(chi) = theta_i(phi_i(c_1(L_chi)))`.
pub fn psi(
    parent: &ResolutionGraph,
    parent_group: &GroupData,
    branch: &Branch,
    branch_dual: &DualData,
    branch_group: &GroupData,
    chi: &Character,
) -> Result<Character> {
    let c1 = parent_group.fractional_representative(chi)?;
    branch_group.character_of(&phi(parent, branch, branch_dual, &c1))
}

/// `D_{chi,i} = -[phi_i(c_1(L_chi))]`, branch-indexed.
pub fn branch_correction(phi_c1: &QCycle) -> crate::graph::IntCycle {
    let f = phi_c1.floor();
    crate::graph::IntCycle(f.0.iter().map(|c| -c).collect())
}
