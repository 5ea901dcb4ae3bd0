//! Independent checks that do not go through the Molien formula.
//!
//! [`bruteforce_eigendims`] works directly in `C[z_w : w end]`: it lists the
//! monomials of each `v`-degree, sorts them by character and subtracts the
//! rank of the ideal generated by the leading forms of an emitted splice
//! system. [`artin_rational`] is the fundamental-cycle criterion.

use std::collections::HashMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::linalg::rank_of_rows;
use crate::arith::Q;
use crate::discriminant::Character;
use crate::error::{invariant, Error, Result};
use crate::graph::{fundamental_cycle, ResolutionGraph};
use crate::hilbert::molien_coeffs_for;
use crate::par::{self, Exec};
use crate::singularity::Singularity;
use crate::splice::{MonomialCycle, SpliceSystem};

/// `p_a(Z) = 0` for the fundamental cycle.
pub fn artin_rational(g: &ResolutionGraph) -> Result<bool> {
    Ok(fundamental_cycle(g)?.arithmetic_genus == 0)
}

/// A leading form: `sum_j c_j z^{alpha_j}` with all terms of one `v`-degree.
#[derive(Clone, Debug)]
struct Form {
    degree: u64,
    terms: Vec<(Q, Vec<u64>)>,
}

/// Initial forms for the `v`-filtration. At `v` the equations are already
/// homogeneous. At another node the monomial of the branch towards `v` has
/// strictly larger `v`-degree than the others and drops out.
fn leading_forms(s: &Singularity, v: usize, system: &SpliceSystem) -> Result<Vec<Form>> {
    let w = s.weights(v)?;
    let deg = |m: &MonomialCycle| -> u64 { m.ends.iter().zip(&m.alpha).map(|(&u, &a)| a * w.m[u]).sum() };
    let mut forms = Vec::new();
    for node in &system.nodes {
        let degrees: Vec<u64> = node.monomials.iter().map(deg).collect();
        let low = *degrees.iter().min().ok_or_else(|| invariant("node without monomials"))?;
        let keep: Vec<usize> = (0..degrees.len()).filter(|&j| degrees[j] == low).collect();
        let expected = if node.node == v { degrees.len() } else { degrees.len() - 1 };
        if keep.len() != expected {
            return Err(invariant(format!(
                "leading form at {} keeps {} of {} monomials",
                s.graph.id(node.node),
                keep.len(),
                degrees.len()
            )));
        }
        let character = s.group.character_of(&node.monomials[keep[0]].cycle)?;
        for &j in &keep[1..] {
            if s.group.character_of(&node.monomials[j].cycle)? != character {
                return Err(invariant(format!("equation at {} is not equivariant", s.graph.id(node.node))));
            }
        }
        for row in &node.coefficients {
            forms.push(Form {
                degree: low,
                terms: keep.iter().map(|&j| (row[j].clone(), node.monomials[j].alpha.clone())).collect(),
            });
        }
    }
    Ok(forms)
}

/// All exponent vectors with `sum alpha_k weights_k = degree`.
fn monomials_of_degree(weights: &[u64], degree: u64) -> Vec<Vec<u64>> {
    fn rec(weights: &[u64], k: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=left / weights[k] {
            cur[k] = a;
            rec(weights, k + 1, left - a * weights[k], cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec(weights, 0, degree, &mut vec![0; weights.len()], &mut out);
    out
}

/// One graded piece: counts and ranks per character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GradedPiece {
    pub degree: u64,
    pub monomials: usize,
    /// `(character, monomial count, ideal rank)`
    pub blocks: Vec<(Character, usize, usize)>,
}

impl GradedPiece {
    pub fn dim(&self, chi: &Character) -> u64 {
        self.blocks.iter().find(|b| &b.0 == chi).map_or(0, |b| (b.1 - b.2) as u64)
    }
}

/// Enumeration order of monomials inside a block; the result must not
/// depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Order {
    #[default]
    Lexicographic,
    Shuffled(u64),
}

fn graded_piece(
    s: &Singularity,
    weights: &[u64],
    ends: &[usize],
    forms: &[Form],
    degree: u64,
    order: Order,
) -> Result<GradedPiece> {
    let character_of = |alpha: &[u64]| -> Result<Character> {
        let mut coeffs = vec![Q::zero(); s.len()];
        for (&w, &a) in ends.iter().zip(alpha) {
            coeffs[w] = Q::from(num_bigint::BigInt::from(a));
        }
        s.group.character_of(&s.dual.combination(&coeffs))
    };
    let mut blocks: Vec<(Character, Vec<Vec<u64>>)> = Vec::new();
    for alpha in monomials_of_degree(weights, degree) {
        let chi = character_of(&alpha)?;
        match blocks.iter_mut().find(|b| b.0 == chi) {
            Some(b) => b.1.push(alpha),
            None => blocks.push((chi, vec![alpha])),
        }
    }
    blocks.sort_by(|a, b| a.0.cmp(&b.0));
    let total = blocks.iter().map(|b| b.1.len()).sum();
    let mut out = Vec::with_capacity(blocks.len());
    for (chi, mut monos) in blocks {
        if let Order::Shuffled(seed) = order {
            monos.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ degree));
        }
        let index: HashMap<&[u64], usize> = monos.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for f in forms.iter().filter(|f| f.degree <= degree) {
            for mult in monomials_of_degree(weights, degree - f.degree) {
                let mut row = vec![Q::zero(); monos.len()];
                let mut hit = false;
                for (c, t) in &f.terms {
                    let prod: Vec<u64> = t.iter().zip(&mult).map(|(a, b)| a + b).collect();
                    if let Some(&i) = index.get(prod.as_slice()) {
                        row[i] += c;
                        hit = true;
                    }
                }
                if hit {
                    // every term of an equivariant product lands in one block
                    if f.terms.iter().any(|(_, t)| {
                        let prod: Vec<u64> = t.iter().zip(&mult).map(|(a, b)| a + b).collect();
                        !index.contains_key(prod.as_slice())
                    }) {
                        return Err(invariant(format!("product of degree {degree} straddles character blocks")));
                    }
                    rows.push(row);
                }
            }
        }
        let count = monos.len();
        let rank = rank_of_rows(&mut rows, count);
        out.push((chi, count, rank));
    }
    Ok(GradedPiece { degree, monomials: total, blocks: out })
}

/// `dim G^chi_i` for `i <= up_to` by linear algebra on monomials, for every
/// listed character.
pub fn bruteforce_eigendims(
    s: &Singularity,
    v: usize,
    system: &SpliceSystem,
    chars: &[Character],
    up_to: u64,
    order: Order,
    exec: Exec,
) -> Result<Vec<Vec<u64>>> {
    let pieces = graded_pieces(s, v, system, up_to, order, exec)?;
    Ok(chars.iter().map(|chi| pieces.iter().map(|p| p.dim(chi)).collect()).collect())
}

/// The graded pieces of degree `0..=up_to`.
pub fn graded_pieces(s: &Singularity, v: usize, system: &SpliceSystem, up_to: u64, order: Order, exec: Exec) -> Result<Vec<GradedPiece>> {
    if s.graph.degree(v) < 3 {
        return Err(Error::NotANode(s.graph.id(v).to_string()));
    }
    let w = s.weights(v)?;
    let ends = s.graph.ends();
    let weights: Vec<u64> = ends.iter().map(|&u| w.m[u]).collect();
    let forms = leading_forms(s, v, system)?;
    let degrees: Vec<u64> = (0..=up_to).collect();
    par::map(exec, &degrees, |&d| graded_piece(s, &weights, &ends, &forms, d, order)).into_iter().collect()
}

/// One disagreement between the oracle and the Molien coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    #[serde(rename = "char")]
    pub character: Character,
    pub degree: u64,
    pub oracle: u64,
    pub molien: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleReport {
    pub node: String,
    pub max_degree: u64,
    pub characters: usize,
    pub mismatches: Vec<Mismatch>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares [`bruteforce_eigendims`] with the Molien coefficients for every
/// character in degrees `0..=up_to`.
pub fn compare_with_molien(s: &Singularity, v: usize, system: &SpliceSystem, up_to: u64, exec: Exec) -> Result<OracleReport> {
    let chars = s.group.characters();
    let brute = bruteforce_eigendims(s, v, system, &chars, up_to, Order::Lexicographic, exec)?;
    let molien = molien_coeffs_for(s, v, up_to as usize + 1, &chars, exec)?;
    let mut mismatches = Vec::new();
    for (k, chi) in chars.iter().enumerate() {
        for (d, (&b, &m)) in brute[k].iter().zip(&molien.coeffs[k]).enumerate() {
            if b != m {
                mismatches.push(Mismatch { character: chi.clone(), degree: d as u64, oracle: b, molien: m });
            }
        }
    }
    Ok(OracleReport { node: s.graph.id(v).to_string(), max_degree: up_to, characters: chars.len(), mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::splice::{emit_splice_system, DEFAULT_BOUND};

    fn setup(g: ResolutionGraph) -> (Singularity, SpliceSystem) {
        let s = Singularity::new(g).unwrap();
        let sys = emit_splice_system(&s, DEFAULT_BOUND, 11, Exec::Parallel).unwrap();
        (s, sys)
    }

    #[test]
    fn artin() {
        assert!(artin_rational(&fixtures::chain(&[-2])).unwrap());
        assert!(artin_rational(&fixtures::d4()).unwrap());
        assert!(artin_rational(&fixtures::e8()).unwrap());
        assert!(!artin_rational(&fixtures::figure_one()).unwrap());
        assert!(!artin_rational(&fixtures::exmc()).unwrap());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(&[1, 2], 4).len(), 3);
        assert_eq!(monomials_of_degree(&[3], 4).len(), 0);
        assert_eq!(monomials_of_degree(&[2, 3], 0), vec![vec![0, 0]]);
    }

    #[test]
    fn degree_zero() {
        let (s, sys) = setup(fixtures::exmc());
        let v = s.graph.index_of("E5").unwrap();
        let chars = s.group.characters();
        let d = bruteforce_eigendims(&s, v, &sys, &chars, 0, Order::Lexicographic, Exec::Parallel).unwrap();
        for (chi, dims) in chars.iter().zip(&d) {
            assert_eq!(dims[0], u64::from(chi.is_trivial()));
        }
    }

    #[test]
    fn agrees_with_molien() {
        for (g, ids) in [(fixtures::exmc(), vec!["E5", "E6"]), (fixtures::d4(), vec![])] {
            let (s, sys) = setup(g);
            let nodes: Vec<usize> =
                if ids.is_empty() { s.graph.nodes() } else { ids.iter().map(|i| s.graph.index_of(i).unwrap()).collect() };
            for v in nodes {
                let r = compare_with_molien(&s, v, &sys, 15, Exec::Parallel).unwrap();
                assert!(r.agrees(), "{:?}", r.mismatches);
            }
        }
    }

    #[test]
    fn order_independent_and_exhaustive() {
        let (s, sys) = setup(fixtures::exmc());
        let v = s.graph.index_of("E6").unwrap();
        let a = graded_pieces(&s, v, &sys, 12, Order::Lexicographic, Exec::Sequential).unwrap();
        let b = graded_pieces(&s, v, &sys, 12, Order::Shuffled(5), Exec::Parallel).unwrap();
        assert_eq!(a, b);
        for p in &a {
            let count: usize = p.blocks.iter().map(|b| b.1).sum();
            assert_eq!(count, p.monomials);
        }
    }
}
