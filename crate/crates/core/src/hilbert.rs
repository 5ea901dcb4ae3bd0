//! Eigenspace Hilbert series at a node `v`:
//!
//! `H^chi(t) = 1/|H| sum_h chi^{-1}(h) prod_w (1 - theta(h, E*_w) t^{m_vw})^{delta_w - 2}`
//!
//! evaluated in `Q(zeta_N)`, `N` the exponent of `H`. Each per-`h` product is
//! computed once and every character is then obtained by a character sum.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{
    cyclotomic_poly, is_integral, q_to_string, CycloNumber, CyclotomicField, PolyQ, RationalFunctionQ, TruncatedSeries, Q,
    Z,
};
use crate::discriminant::{Character, HElement, RationalMod1};
use crate::error::{invariant, AssertionFailure, Error, Result};
use crate::graph::NodeWeights;
use crate::par::{self, Exec};
use crate::singularity::Singularity;

/// One factor `(1 - theta(h, E*_w) t^degree)^exponent` of the Molien product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MolienFactor {
    pub vertex: usize,
    pub degree: usize,
    /// `delta_w - 2`
    pub exponent: i64,
}

/// Factors with `delta_w != 2`, in vertex order.
pub fn molien_factors(s: &Singularity, w: &NodeWeights) -> Vec<MolienFactor> {
    (0..s.len())
        .filter_map(|u| {
            let e = s.graph.degree(u) as i64 - 2;
            (e != 0).then(|| MolienFactor { vertex: u, degree: w.m[u] as usize, exponent: e })
        })
        .collect()
}

/// `a(G) = sum_w (delta_w - 2) m_vw`
pub fn a_invariant(s: &Singularity, w: &NodeWeights) -> i64 {
    molien_factors(s, w).iter().map(|f| f.exponent * f.degree as i64).sum()
}

/// Smallest `m >= 1` with `m > a(G) / a_v`.
pub fn default_m(a: i64, a_v: u64) -> u64 {
    let m = a.div_euclid(a_v as i64) + 1;
    m.max(1) as u64
}

/// Series length needed for the constant `c_v` at `m`, `m + 1`, `m + 2`.
pub fn default_len(a: i64, a_v: u64) -> usize {
    ((default_m(a, a_v) + 2) * a_v + 1) as usize
}

/// Coefficient tables `dim G^chi_i` for every character at one node.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HilbertData {
    pub node: usize,
    pub weights: NodeWeights,
    pub a_invariant: i64,
    /// Characters in lexicographic order; `coeffs[k]` belongs to `characters[k]`.
    pub characters: Vec<Character>,
    pub coeffs: Vec<Vec<u64>>,
}

impl HilbertData {
    pub fn len(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self, s: &Singularity, chi: &Character) -> &[u64] {
        let i = if self.characters.len() as u64 == s.group.order {
            s.group.character_index(chi) as usize
        } else {
            self.characters.iter().position(|c| c == chi).expect("character was computed")
        };
        &self.coeffs[i]
    }

    /// `P^chi(n) = sum_{i < n} dim G^chi_i`.
    pub fn partial_sum(&self, s: &Singularity, chi: &Character, n: usize) -> Result<u64> {
        let c = self.series(s, chi);
        if n > c.len() {
            return Err(Error::CycleOutOfRange(format!("P(n) needs {n} coefficients, only {} computed", c.len())));
        }
        Ok(c[..n].iter().sum())
    }
}

fn assert_node(s: &Singularity, v: usize) -> Result<()> {
    if s.graph.degree(v) < 3 {
        return Err(Error::NotANode(s.graph.id(v).to_string()));
    }
    Ok(())
}

/// The per-`h` products, truncated to `len`, in element order.
pub fn per_element_series(
    s: &Singularity,
    factors: &[MolienFactor],
    len: usize,
    exec: Exec,
) -> (CyclotomicField, Vec<TruncatedSeries<CycloNumber>>) {
    let field = CyclotomicField::new(s.group.exponent);
    let series = par::map_range(exec, s.group.order as usize, |i| {
        let h = s.group.element(i as u64);
        let mut ser = TruncatedSeries::one(&field, len);
        // numerator factors first keeps the intermediate series short-lived
        for f in factors.iter().filter(|f| f.exponent > 0).chain(factors.iter().filter(|f| f.exponent < 0)) {
            let c = field.root(s.group.theta_dual_root(&h, f.vertex) as i64);
            ser.mul_binomial_pow(&field, &c, f.degree, f.exponent);
        }
        ser
    });
    (field, series)
}

#[cfg(test)]
/// `(1/|H|) sum_h chi^{-1}(h) x_h`, grouping the `x_h` by the exponent of
/// `chi^{-1}(h)` before multiplying by roots of unity.
fn character_sum<T, F>(s: &Singularity, field: &CyclotomicField, chi: &Character, items: &[T], len: usize, get: F) -> Vec<CycloNumber>
where
    F: Fn(&T, usize) -> Option<&CycloNumber>,
{
    let n = s.group.exponent as usize;
    let mut buckets: Vec<Option<Vec<CycloNumber>>> = vec![None; n];
    for (i, item) in items.iter().enumerate() {
        let h = s.group.element(i as u64);
        let r = (n - s.group.character_root(chi, &h) as usize) % n;
        let b = buckets[r].get_or_insert_with(|| vec![field.zero(); len]);
        for (k, slot) in b.iter_mut().enumerate() {
            if let Some(x) = get(item, k) {
                field.add_assign(slot, x);
            }
        }
    }
    let inv = Q::new(Z::one(), Z::from(s.group.order));
    let mut out = vec![field.zero(); len];
    for (r, b) in buckets.into_iter().enumerate() {
        let Some(b) = b else { continue };
        for (slot, x) in out.iter_mut().zip(&b) {
            if !x.is_zero() {
                field.add_assign(slot, &field.mul_root(x, r as i64));
            }
        }
    }
    out.iter().map(|x| field.scale(x, &inv)).collect()
}

fn irrational(x: &CycloNumber, context: String) -> Error {
    Error::Assertion(AssertionFailure::IrrationalCoefficient { context: format!("{context} = {}", x.describe()) })
}

fn rational_coefficient(x: &CycloNumber, context: impl FnOnce() -> String) -> Result<Q> {
    x.as_rational()
        .ok_or_else(|| Error::Assertion(AssertionFailure::IrrationalCoefficient { context: format!("{} = {}", context(), x.describe()) }))
}

fn dimension(x: &Q, context: impl FnOnce() -> String) -> Result<u64> {
    if !is_integral(x) || x.is_negative() {
        return Err(Error::Assertion(AssertionFailure::NegativeDimension { context: format!("{} = {}", context(), q_to_string(x)) }));
    }
    x.to_integer().to_u64().ok_or_else(|| invariant("dimension does not fit in u64"))
}

/// `dim G^chi_i` for all characters and `i < len`.
pub fn molien_coeffs(s: &Singularity, v: usize, len: usize, exec: Exec) -> Result<HilbertData> {
    molien_coeffs_for(s, v, len, &s.group.characters(), exec)
}

/// Per-`h` product as an element of `Z[C_N][[t]]`: entry `k * N + r` is the
/// coefficient of `zeta^r t^k`. Mapping `C_N -> Q(zeta_N)` gives the series
/// of [`per_element_series`], but all arithmetic stays in `i64`.
fn group_ring_series(s: &Singularity, factors: &[MolienFactor], len: usize, h: &HElement) -> Vec<i64> {
    let n = s.group.exponent as usize;
    let mut ser = vec![0i64; len * n];
    if len > 0 {
        ser[0] = 1;
    }
    for f in factors.iter().filter(|f| f.exponent > 0).chain(factors.iter().filter(|f| f.exponent < 0)) {
        let c = s.group.theta_dual_root(h, f.vertex) as usize;
        let d = f.degree;
        for _ in 0..f.exponent.unsigned_abs() {
            if f.exponent > 0 {
                // times (1 - zeta^c t^d)
                for k in (d..len).rev() {
                    for r in 0..n {
                        let x = ser[(k - d) * n + (r + n - c) % n];
                        ser[k * n + r] -= x;
                    }
                }
            } else {
                // divided by (1 - zeta^c t^d)
                for k in d..len {
                    for r in 0..n {
                        let x = ser[(k - d) * n + (r + n - c) % n];
                        ser[k * n + r] += x;
                    }
                }
            }
        }
    }
    ser
}

/// Integer coordinates of `zeta^r` in the power basis of `Q(zeta_N)`.
fn root_table(field: &CyclotomicField) -> Vec<Vec<i64>> {
    (0..field.conductor() as i64)
        .map(|r| field.root(r).coords().iter().map(|c| c.to_integer().to_i64().expect("root coordinate")).collect())
        .collect()
}

/// `sum_h chi^{-1}(h) x_h` for group-ring series `x_h` laid out as in
/// [`group_ring_series`].
fn ring_character_sum(s: &Singularity, chi: &Character, series: &[Vec<i64>]) -> Vec<i64> {
    let n = s.group.exponent as usize;
    let mut sum = vec![0i64; series.first().map_or(0, Vec::len)];
    for (i, ser) in series.iter().enumerate() {
        let shift = s.group.character_root(chi, &s.group.element(i as u64)) as usize;
        // zeta^r -> zeta^{r - shift}: a rotation of each length-N block
        for (dst, src) in sum.chunks_exact_mut(n).zip(ser.chunks_exact(n)) {
            let (lo, hi) = src.split_at(shift);
            for (d, x) in dst[n - shift..].iter_mut().zip(lo) {
                *d += x;
            }
            for (d, x) in dst[..n - shift].iter_mut().zip(hi) {
                *d += x;
            }
        }
    }
    sum
}

/// Maps each length-N block into `Q(zeta_N)` and returns the rational
/// values, or the first irrational block's index and value.
fn ring_to_integers(field: &CyclotomicField, table: &[Vec<i64>], ring: &[i64]) -> std::result::Result<Vec<i64>, (usize, CycloNumber)> {
    let n = table.len();
    let mut coords = vec![0i64; field.degree()];
    let mut out = Vec::with_capacity(ring.len() / n.max(1));
    for (k, block) in ring.chunks_exact(n).enumerate() {
        coords.iter_mut().for_each(|c| *c = 0);
        for (&x, t) in block.iter().zip(table) {
            if x != 0 {
                for (c, y) in coords.iter_mut().zip(t) {
                    *c += x * y;
                }
            }
        }
        if coords[1..].iter().any(|&c| c != 0) {
            let x = block
                .iter()
                .enumerate()
                .fold(field.zero(), |acc, (r, &c)| field.add(&acc, &field.scale(&field.root(r as i64), &Q::from_integer(Z::from(c)))));
            return Err((k, x));
        }
        out.push(coords[0]);
    }
    Ok(out)
}

/// Like [`molien_coeffs`] for the listed characters only.
pub fn molien_coeffs_for(s: &Singularity, v: usize, len: usize, chars: &[Character], exec: Exec) -> Result<HilbertData> {
    assert_node(s, v)?;
    for chi in chars {
        s.group.check_character(chi)?;
    }
    let weights = s.weights(v)?;
    let factors = molien_factors(s, &weights);
    let a = a_invariant(s, &weights);
    let order = s.group.order as i64;
    let series = par::map_range(exec, s.group.order as usize, |i| group_ring_series(s, &factors, len, &s.group.element(i as u64)));
    let field = CyclotomicField::new(s.group.exponent);
    let table = root_table(&field);
    let characters = chars.to_vec();
    let inv = Q::new(Z::one(), Z::from(order));
    let coeffs = par::map(exec, &characters, |chi| -> Result<Vec<u64>> {
        let ctx = |k: usize| format!("node {}, character {chi}, degree {k}", s.graph.id(v));
        let values = ring_to_integers(&field, &table, &ring_character_sum(s, chi, &series))
            .map_err(|(k, x)| irrational(&field.scale(&x, &inv), ctx(k)))?;
        values.iter().enumerate().map(|(k, &x)| dimension(&Q::new(Z::from(x), Z::from(order)), || ctx(k))).collect()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(HilbertData { node: v, weights, a_invariant: a, characters, coeffs })
}

/// Exact rational functions `H^chi(t)` for the given characters.
///
/// Every end factor is rewritten over the common denominator
/// `1 - t^{m_vw N}`, so the per-`h` numerators share one denominator
/// `prod_ends (1 - t^{m_vw N})`. The character sums of the numerators are
/// checked to be rational and then reduced by cancelling cyclotomic factors
/// of that denominator.
pub fn molien_closed(s: &Singularity, v: usize, chars: &[Character], exec: Exec) -> Result<Vec<RationalFunctionQ>> {
    assert_node(s, v)?;
    let weights = s.weights(v)?;
    let factors = molien_factors(s, &weights);
    let n = s.group.exponent as usize;
    let field = CyclotomicField::new(s.group.exponent);
    let num_degree: usize =
        factors.iter().map(|f| if f.exponent > 0 { f.exponent as usize * f.degree } else { f.degree * (n - 1) }).sum();
    let len = num_degree + 1;
    let numerators = par::map_range(exec, s.group.order as usize, |i| {
        let h = s.group.element(i as u64);
        let mut p = vec![0i64; len * n];
        p[0] = 1;
        let mut top = 0;
        for f in &factors {
            let c = s.group.theta_dual_root(&h, f.vertex) as usize;
            let d = f.degree;
            if f.exponent > 0 {
                for _ in 0..f.exponent {
                    for k in (d..=top + d).rev() {
                        for r in 0..n {
                            let x = p[(k - d) * n + (r + n - c) % n];
                            p[k * n + r] -= x;
                        }
                    }
                    top += d;
                }
            } else {
                // multiply by sum_{j < N} zeta^{cj} t^{dj}
                let old = p[..(top + 1) * n].to_vec();
                for j in 1..n {
                    let (shift, rot) = (j * d, (c * j) % n);
                    for k in 0..=top {
                        for r in 0..n {
                            let x = old[k * n + r];
                            if x != 0 {
                                p[(k + shift) * n + (r + rot) % n] += x;
                            }
                        }
                    }
                }
                top += d * (n - 1);
            }
        }
        p
    });
    let table = root_table(&field);
    let mut den = vec![Z::one()];
    // (d, Phi_d, multiplicity of Phi_d in the denominator)
    let mut cyclotomic_factors: Vec<(u64, Vec<Z>, usize)> = Vec::new();
    for f in factors.iter().filter(|f| f.exponent < 0) {
        let e = (f.degree * n) as u64;
        den = poly_mul_z(&den, &binomial_z(e as usize));
        for d in (1..=e).filter(|d| e.is_multiple_of(*d)) {
            match cyclotomic_factors.iter_mut().find(|(c, _, _)| *c == d) {
                Some((_, _, k)) => *k += 1,
                None => cyclotomic_factors.push((d, cyclotomic_poly(d), 1)),
            }
        }
    }
    let order = Q::from_integer(Z::from(s.group.order));
    par::map(exec, chars, |chi| -> Result<RationalFunctionQ> {
        s.group.check_character(chi)?;
        // |H| times the numerator, integral once rational
        let values = ring_to_integers(&field, &table, &ring_character_sum(s, chi, &numerators)).map_err(|(k, x)| {
            irrational(&field.scale(&x, &order.recip()), format!("numerator of H at {}, {chi}, t^{k}", s.graph.id(v)))
        })?;
        let mut num: Vec<Z> = values.into_iter().map(Z::from).collect();
        let mut d = den.clone();
        for (c, phi, k) in &cyclotomic_factors {
            for _ in 0..*k {
                if !divisible_by_cyclotomic(&num, *c as usize, phi) {
                    break;
                }
                num = exact_div_monic(&num, phi);
                d = exact_div_monic(&d, phi);
            }
        }
        let to_q = |v: Vec<Z>| PolyQ::new(v.into_iter().map(Q::from_integer).collect());
        Ok(RationalFunctionQ::from_coprime(to_q(num).scale(&order.recip()), to_q(d)))
    })
    .into_iter()
    .collect()
}

/// `1 - t^e`
fn binomial_z(e: usize) -> Vec<Z> {
    let mut p = vec![Z::zero(); e + 1];
    p[0] = Z::one();
    p[e] = -Z::one();
    p
}

fn poly_mul_z(a: &[Z], b: &[Z]) -> Vec<Z> {
    let mut out = vec![Z::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `a` modulo the monic `b`.
fn rem_monic(a: &[Z], b: &[Z]) -> Vec<Z> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    for k in (db..r.len()).rev() {
        let c = std::mem::take(&mut r[k]);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b[..db].iter().enumerate() {
            r[k - db + j] -= &c * bc;
        }
    }
    r.truncate(db.min(r.len()));
    r
}

/// `Phi_d | a`, tested modulo `t^d - 1` first.
fn divisible_by_cyclotomic(a: &[Z], d: usize, phi: &[Z]) -> bool {
    let mut folded = vec![Z::zero(); d];
    for (i, x) in a.iter().enumerate() {
        folded[i % d] += x;
    }
    rem_monic(&folded, phi).iter().all(Zero::is_zero)
}

/// `a / b` for a monic `b` dividing `a`.
fn exact_div_monic(a: &[Z], b: &[Z]) -> Vec<Z> {
    let db = b.len() - 1;
    let mut top = a.len();
    while top > 0 && a[top - 1].is_zero() {
        top -= 1;
    }
    if top == 0 {
        return vec![Z::zero()];
    }
    let mut r = a[..top].to_vec();
    let mut quot = vec![Z::zero(); top - db];
    for k in (0..quot.len()).rev() {
        let c = r[k + db].clone();
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                r[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero), "inexact division");
    quot
}

/// `P^chi(n)` read off a coefficient table.
#[allow(non_snake_case)]
pub fn P_chi(s: &Singularity, data: &HilbertData, chi: &Character, n: usize) -> Result<u64> {
    data.partial_sum(s, chi, n)
}

/// Both routes to the constant `c_v^chi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvValue {
    pub character: Character,
    pub m: u64,
    /// `P^chi(m a_v) - (m^2 a_v - m e_v (K + 2 L_chi).E*_v) / 2` at `m`, `m+1`, `m+2`.
    pub route_a: [Q; 3],
    /// `p(1)` for the polynomial part `p` of `H^chi(t)`.
    pub route_b: Option<Q>,
}

impl CvValue {
    pub fn value(&self) -> &Q {
        &self.route_a[0]
    }

    pub fn routes_agree(&self) -> Option<bool> {
        self.route_b.as_ref().map(|b| *b == self.route_a[0])
    }
}

/// Route A at a single `m`.
pub fn c_v_route_a(s: &Singularity, data: &HilbertData, chi: &Character, m: u64) -> Result<Q> {
    let v = data.node;
    let w = &data.weights;
    let a_v = w.a_v;
    let p = data.partial_sum(s, chi, (m * a_v) as usize)?;
    let beta = s.c1(chi)?.coeff(v).clone();
    let k = s.canonical.cycle.coeff(v).clone();
    let mq = Q::from_integer(Z::from(m));
    // (K + 2 L_chi) . E*_v = -(k_v + 2 beta_v)
    let quad = &mq * &mq * Q::from_integer(Z::from(a_v)) + &mq * Q::from_integer(Z::from(w.e)) * (k + beta * Q::from_integer(Z::from(2)));
    Ok(Q::from_integer(Z::from(p)) - quad / Q::from_integer(Z::from(2)))
}

/// `c_v^chi` with the `m`-stability check; `closed` enables Route B.
pub fn c_v_chi(s: &Singularity, data: &HilbertData, chi: &Character, closed: Option<&RationalFunctionQ>) -> Result<CvValue> {
    let m = default_m(data.a_invariant, data.weights.a_v);
    if (m as i128) * (data.weights.a_v as i128) <= data.a_invariant as i128 {
        return Err(invariant(format!("m = {m} is not above a(G)/a_v")));
    }
    let route_a = [c_v_route_a(s, data, chi, m)?, c_v_route_a(s, data, chi, m + 1)?, c_v_route_a(s, data, chi, m + 2)?];
    if route_a[1] != route_a[0] || route_a[2] != route_a[0] {
        return Err(Error::Assertion(AssertionFailure::UnstableInM {
            context: format!(
                "node {}, character {chi}: {} / {} / {} at m = {m}, {}, {}",
                s.graph.id(data.node),
                q_to_string(&route_a[0]),
                q_to_string(&route_a[1]),
                q_to_string(&route_a[2]),
                m + 1,
                m + 2
            ),
        }));
    }
    let route_b = closed.map(|f| f.polynomial_part().c_at_one);
    let cv = CvValue { character: chi.clone(), m, route_a, route_b };
    if cv.routes_agree() == Some(false) {
        return Err(Error::Assertion(AssertionFailure::MismatchedRoutes {
            context: format!(
                "node {}, character {chi}: route A {} vs route B {}",
                s.graph.id(data.node),
                q_to_string(cv.value()),
                q_to_string(cv.route_b.as_ref().unwrap())
            ),
        }));
    }
    Ok(cv)
}

/// Everything about one node: coefficient tables, optional closed forms and
/// `c_v^chi` for all characters.
#[derive(Clone, Debug)]
pub struct NodeConstants {
    pub data: HilbertData,
    pub closed: Option<Vec<RationalFunctionQ>>,
    pub constants: Vec<CvValue>,
}

/// `chars = None` means every character.
pub fn node_constants(
    s: &Singularity,
    v: usize,
    chars: Option<&[Character]>,
    with_closed_forms: bool,
    exec: Exec,
) -> Result<NodeConstants> {
    assert_node(s, v)?;
    let w = s.weights(v)?;
    let a = a_invariant(s, &w);
    let all;
    let chars = match chars {
        Some(c) => c,
        None => {
            all = s.group.characters();
            &all
        }
    };
    let data = molien_coeffs_for(s, v, default_len(a, w.a_v), chars, exec)?;
    let closed = if with_closed_forms { Some(molien_closed(s, v, &data.characters, exec)?) } else { None };
    let constants = par::map_range(exec, data.characters.len(), |i| {
        c_v_chi(s, &data, &data.characters[i], closed.as_ref().map(|c| &c[i]))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(NodeConstants { data, closed, constants })
}

/// Diagonal action of a finite abelian group `prod Z/d_l` on variables.
#[derive(Clone, Debug)]
pub struct DiagonalAction {
    pub invariant_factors: Vec<u64>,
    /// `exponents[j][l]`: generator `l` acts on variable `j` by
    /// `exp(2 pi i exponents[j][l])`.
    pub exponents: Vec<Vec<RationalMod1>>,
}

/// A relation of the given degree spanning the eigenspace of a character
/// given like a variable, by one exponent per generator.
#[derive(Clone, Debug)]
pub struct CiRelation {
    pub degree: usize,
    pub exponents: Vec<RationalMod1>,
}

/// Molien series of a graded complete intersection with a diagonal abelian
/// action:
///
/// `H^chi(t) = 1/|G| sum_g chi^{-1}(g) prod_i (1 - chi_i(g) t^{d_i}) / prod_j (1 - g_j t^{w_j})`.
pub fn molien_ci(
    weights: &[usize],
    action: &DiagonalAction,
    relations: &[CiRelation],
    chi: &Character,
    len: usize,
) -> Result<Vec<Q>> {
    let factors = &action.invariant_factors;
    if weights.len() != action.exponents.len() || chi.0.len() != factors.len() {
        return Err(Error::InvalidCharacter("shape mismatch between weights, action and character".into()));
    }
    let order: u64 = factors.iter().product();
    let mut conductor = factors.iter().fold(Z::one(), |acc, d| num_integer::lcm(acc, Z::from(*d)));
    for e in action.exponents.iter().flatten().chain(relations.iter().flat_map(|r| r.exponents.iter())) {
        conductor = num_integer::lcm(conductor, e.value().denom().clone());
    }
    let nn = conductor.to_u64().ok_or_else(|| invariant("conductor too large"))?;
    let field = CyclotomicField::new(nn);
    let root_of = |exps: &[RationalMod1], g: &[u64]| -> i64 {
        let s = exps.iter().zip(g).fold(Q::zero(), |acc, (e, x)| acc + e.value() * Q::from_integer(Z::from(*x)));
        RationalMod1::new(&s).numerator_over(nn).expect("conductor clears denominators") as i64
    };
    let mut total = vec![field.zero(); len];
    for idx in 0..order {
        let mut g = vec![0u64; factors.len()];
        let mut rest = idx;
        for l in (0..factors.len()).rev() {
            g[l] = rest % factors[l];
            rest /= factors[l];
        }
        let mut ser = TruncatedSeries::one(&field, len);
        for r in relations {
            ser.mul_binomial(&field, &field.root(root_of(&r.exponents, &g)), r.degree);
        }
        for (w, exps) in weights.iter().zip(&action.exponents) {
            ser.div_binomial(&field, &field.root(root_of(exps, &g)), *w);
        }
        let chi_exp: Q = chi
            .0
            .iter()
            .zip(&g)
            .zip(factors)
            .fold(Q::zero(), |acc, ((c, x), d)| acc + Q::new(Z::from(c * x), Z::from(*d)));
        let k = RationalMod1::new(&-chi_exp).numerator_over(nn).expect("conductor clears denominators") as i64;
        for (slot, x) in total.iter_mut().zip(ser.coeffs()) {
            field.add_assign(slot, &field.mul_root(x, k));
        }
    }
    let inv = Q::new(Z::one(), Z::from(order));
    total
        .iter()
        .enumerate()
        .map(|(i, x)| rational_coefficient(&field.scale(x, &inv), || format!("complete intersection series at t^{i}")))
        .collect()
}

/// The graph series as a complete intersection: end variables with weights
/// `m_vw`, and `delta_w - 2` relations of degree `m_vw` at each node `w`.
pub fn graph_as_ci(s: &Singularity, w: &NodeWeights) -> (Vec<usize>, DiagonalAction, Vec<CiRelation>) {
    let gens: Vec<_> = (0..s.group.rank())
        .map(|j| {
            let mut e = vec![0; s.group.rank()];
            e[j] = 1;
            crate::discriminant::HElement(e)
        })
        .collect();
    let exps = |u: usize| gens.iter().map(|g| s.group.theta_dual(g, u)).collect::<Vec<_>>();
    let ends = s.graph.ends();
    let weights = ends.iter().map(|&u| w.m[u] as usize).collect();
    let action = DiagonalAction {
        invariant_factors: s.group.invariant_factors.clone(),
        exponents: ends.iter().map(|&u| exps(u)).collect(),
    };
    let mut relations = Vec::new();
    for u in s.graph.nodes() {
        for _ in 0..s.graph.degree(u) - 2 {
            relations.push(CiRelation { degree: w.m[u] as usize, exponents: exps(u) });
        }
    }
    (weights, action, relations)
}

/// `prod_nodes (1 - t^{m_vw})^{delta_w - 2} / prod_ends (1 - t^{m_vw})`
/// expanded: the sum of all `H^chi` (Koszul identity).
pub fn total_series(s: &Singularity, w: &NodeWeights, len: usize) -> Vec<Q> {
    let ring = crate::arith::RationalRing;
    let mut ser = TruncatedSeries::one(&ring, len);
    for f in molien_factors(s, w) {
        ser.mul_binomial_pow(&ring, &Q::one(), f.degree, f.exponent);
    }
    ser.into_coeffs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::fixtures;

    fn node(s: &Singularity, id: &str) -> usize {
        s.graph.index_of(id).unwrap()
    }

    #[test]
    fn a_invariants() {
        let s = Singularity::new(fixtures::d4()).unwrap();
        let w = s.weights(0).unwrap();
        assert_eq!(a_invariant(&s, &w), -1);
        // node weight m_vv = k and three ends of weight 1: a = k - 3
        let s = Singularity::new(fixtures::star(-1, &[&[-2], &[-3], &[-7]])).unwrap();
        let w = s.weights(0).unwrap();
        let ends: Vec<u64> = s.graph.ends().iter().map(|&u| w.m[u]).collect();
        let expected: i64 = w.m[0] as i64 - ends.iter().sum::<u64>() as i64;
        assert_eq!(a_invariant(&s, &w), expected);
        let s = Singularity::new(fixtures::figure_one()).unwrap();
        let w = s.weights(node(&s, "v0")).unwrap();
        let nodes: i64 = s.graph.nodes().iter().map(|&u| (s.graph.degree(u) as i64 - 2) * w.m[u] as i64).sum();
        let ends: i64 = s.graph.ends().iter().map(|&u| w.m[u] as i64).sum();
        assert_eq!(a_invariant(&s, &w), nodes - ends);
    }

    #[test]
    fn trivial_group_is_single_term() {
        let s = Singularity::new(fixtures::e8()).unwrap();
        let v = s.graph.nodes()[0];
        let w = s.weights(v).unwrap();
        let d = molien_coeffs(&s, v, 40, Exec::Sequential).unwrap();
        let expected: Vec<u64> = total_series(&s, &w, 40).iter().map(|x| x.to_integer().to_u64().unwrap()).collect();
        assert_eq!(d.coeffs, vec![expected]);
    }

    #[test]
    fn degree_zero_is_constants() {
        for g in [fixtures::figure_one(), fixtures::exmc(), fixtures::d4()] {
            let s = Singularity::new(g).unwrap();
            for v in s.graph.nodes() {
                let d = molien_coeffs(&s, v, 3, Exec::Parallel).unwrap();
                for (chi, c) in d.characters.iter().zip(&d.coeffs) {
                    assert_eq!(c[0], u64::from(chi.is_trivial()));
                }
                assert_eq!(P_chi(&s, &d, &s.group.trivial_character(), 0).unwrap(), 0);
                assert_eq!(P_chi(&s, &d, &s.group.trivial_character(), 1).unwrap(), 1);
            }
        }
    }

    fn closed_form(num: &[(i64, usize)], den: &[(i64, usize)]) -> RationalFunctionQ {
        RationalFunctionQ::new(PolyQ::from_terms(num), PolyQ::from_terms(den))
    }

    fn branch_of(s: &Singularity, v0: &str, containing: &str) -> Singularity {
        let v = node(s, v0);
        let c = node(s, containing);
        let b = s.graph.branches(v).into_iter().find(|b| b.contains(c)).unwrap();
        Singularity::new(b.graph).unwrap()
    }

    #[test]
    fn figure_one_closed_forms() {
        let s = Singularity::new(fixtures::figure_one()).unwrap();
        let triv = s.group.trivial_character();
        let h = &molien_closed(&s, node(&s, "v0"), std::slice::from_ref(&triv), Exec::Parallel).unwrap()[0];
        let expected = closed_form(
            &[(1, 24), (-1, 21), (1, 18), (-1, 15), (3, 12), (-1, 9), (1, 6), (-1, 3), (1, 0)],
            &[(1, 15), (-1, 12), (-1, 3), (1, 0)],
        );
        assert!(h.same_function(&expected), "{h}");
        let pp = h.polynomial_part();
        assert_eq!(pp.poly, PolyQ::from_terms(&[(1, 9), (1, 3)]));
        assert_eq!(pp.c_at_one, q(2));

        let g1 = branch_of(&s, "v0", "v1");
        let t1 = g1.group.trivial_character();
        let h1 = &molien_closed(&g1, node(&g1, "v1"), &[t1], Exec::Parallel).unwrap()[0];
        let expected = closed_form(
            &[(1, 36), (-1, 33), (1, 24), (-1, 18), (1, 12), (-1, 3), (1, 0)],
            &[(1, 19), (-1, 16), (-1, 3), (1, 0)],
        );
        assert!(h1.same_function(&expected), "{h1}");
        let pp = h1.polynomial_part();
        assert_eq!(pp.poly, PolyQ::from_terms(&[(1, 17), (1, 5), (1, 2), (1, 1)]));
        assert_eq!(pp.c_at_one, q(4));

        let g2 = branch_of(&s, "v0", "v2");
        let t2 = g2.group.trivial_character();
        let h2 = &molien_closed(&g2, node(&g2, "v2"), &[t2], Exec::Parallel).unwrap()[0];
        let expected = closed_form(&[(1, 24), (1, 0)], &[(1, 20), (-1, 14), (-1, 6), (1, 0)]);
        assert!(h2.same_function(&expected), "{h2}");
        assert_eq!(h2.polynomial_part().poly, PolyQ::from_terms(&[(1, 4)]));
    }

    #[test]
    fn figure_one_constants_by_both_routes() {
        let s = Singularity::new(fixtures::figure_one()).unwrap();
        let cases = [(None, "v0", 2), (Some("v1"), "v1", 4), (Some("v2"), "v2", 1)];
        for (branch, v, expected) in cases {
            let t = match branch {
                None => s.clone(),
                Some(c) => branch_of(&s, "v0", c),
            };
            let nc = node_constants(&t, node(&t, v), None, true, Exec::Parallel).unwrap();
            let triv = &nc.constants[0];
            assert!(triv.character.is_trivial());
            assert_eq!(triv.value(), &q(expected));
            assert_eq!(triv.route_b, Some(q(expected)));
        }
    }

    #[test]
    fn closed_forms_expand_to_coefficients() {
        for g in [fixtures::figure_one(), fixtures::exmc(), fixtures::d4()] {
            let s = Singularity::new(g).unwrap();
            for v in s.graph.nodes() {
                let d = molien_coeffs(&s, v, 60, Exec::Parallel).unwrap();
                let closed = molien_closed(&s, v, &d.characters, Exec::Parallel).unwrap();
                for (f, c) in closed.iter().zip(&d.coeffs) {
                    let e: Vec<Q> = f.expand(60);
                    let c: Vec<Q> = c.iter().map(|x| Q::from_integer(Z::from(*x))).collect();
                    assert_eq!(e, c);
                }
            }
        }
    }

    #[test]
    fn koszul_identity() {
        for g in [fixtures::figure_one(), fixtures::exmc(), fixtures::d4(), fixtures::e8()] {
            let s = Singularity::new(g).unwrap();
            for v in s.graph.nodes() {
                let d = molien_coeffs(&s, v, 16, Exec::Sequential).unwrap();
                let total = total_series(&s, &d.weights, 16);
                for i in 0..16 {
                    let sum: u64 = d.coeffs.iter().map(|c| c[i]).sum();
                    assert_eq!(Q::from_integer(Z::from(sum)), total[i]);
                }
            }
        }
    }

    #[test]
    fn ci_formula_specializes_to_graph() {
        for g in [fixtures::figure_one(), fixtures::exmc()] {
            let s = Singularity::new(g).unwrap();
            for v in s.graph.nodes() {
                let w = s.weights(v).unwrap();
                let d = molien_coeffs(&s, v, 30, Exec::Parallel).unwrap();
                let (weights, action, relations) = graph_as_ci(&s, &w);
                for (chi, c) in d.characters.iter().zip(&d.coeffs).step_by(5) {
                    let ci = molien_ci(&weights, &action, &relations, chi, 30).unwrap();
                    let c: Vec<Q> = c.iter().map(|x| Q::from_integer(Z::from(*x))).collect();
                    assert_eq!(ci, c);
                }
            }
        }
    }

    #[test]
    fn ci_toys() {
        let none = DiagonalAction { invariant_factors: vec![], exponents: vec![vec![]] };
        let s = molien_ci(&[3], &none, &[], &Character(vec![]), 7).unwrap();
        assert_eq!(s, [1, 0, 0, 1, 0, 0, 1].map(q).to_vec());
        let sign = DiagonalAction {
            invariant_factors: vec![2],
            exponents: vec![vec![RationalMod1::new(&Q::new(1.into(), 2.into()))]],
        };
        let s = molien_ci(&[1], &sign, &[], &Character(vec![0]), 6).unwrap();
        assert_eq!(s, [1, 0, 1, 0, 1, 0].map(q).to_vec());
        let s = molien_ci(&[1], &none, &[CiRelation { degree: 2, exponents: vec![] }], &Character(vec![]), 5).unwrap();
        assert_eq!(s, [1, 1, 0, 0, 0].map(q).to_vec());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = Singularity::new(fixtures::figure_one()).unwrap();
        let v = node(&s, "v2");
        let a = molien_coeffs(&s, v, 50, Exec::Sequential).unwrap();
        let b = molien_coeffs(&s, v, 50, Exec::Parallel).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
    }

    #[test]
    fn group_ring_kernel_matches_field_expansion() {
        for (g, id) in [(fixtures::exmc(), "E5"), (fixtures::exmc(), "E6"), (fixtures::figure_one(), "v1")] {
            let s = Singularity::new(g).unwrap();
            let v = node(&s, id);
            let w = s.weights(v).unwrap();
            let len = 40;
            let fast = molien_coeffs(&s, v, len, Exec::Parallel).unwrap();
            let (field, series) = per_element_series(&s, &molien_factors(&s, &w), len, Exec::Parallel);
            for chi in s.group.characters() {
                let slow = character_sum(&s, &field, &chi, &series, len, |ser, k| Some(&ser.coeffs()[k]));
                let slow: Vec<u64> = slow.iter().map(|x| x.as_rational().unwrap().to_integer().to_u64().unwrap()).collect();
                assert_eq!(fast.series(&s, &chi), &slow[..], "{id} {chi}");
            }
        }
    }
}
