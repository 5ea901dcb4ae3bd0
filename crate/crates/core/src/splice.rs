//! The monomial condition and Neumann-Wahl systems.
//!
//! A monomial cycle is `D = sum_w alpha_w E*_w` over the ends. It is
//! admissible for a node `v` and a branch `C` of `v` when `D - E*_v` is an
//! effective integral cycle supported on `C`.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{linalg::solve_affine, q_to_string, RatMatrix, Q, Z};
use crate::discriminant::{HElement, RationalMod1};
use crate::error::{invariant, Error, Result};
use crate::graph::{Branch, IntCycle, QCycle, ResolutionGraph};
use crate::par::{self, Exec};
use crate::singularity::Singularity;

/// Default cap on each exponent during the witness search.
pub const DEFAULT_BOUND: u64 = 64;

/// `sum_w alpha_w E*_w`, `alpha` indexed like [`ResolutionGraph::ends`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialCycle {
    pub ends: Vec<usize>,
    pub alpha: Vec<u64>,
    pub cycle: QCycle,
}

impl MonomialCycle {
    pub fn new(s: &Singularity, alpha: Vec<u64>) -> Self {
        let ends = s.graph.ends();
        assert_eq!(ends.len(), alpha.len(), "one exponent per end");
        let mut coeffs = vec![Q::zero(); s.len()];
        for (&w, &a) in ends.iter().zip(&alpha) {
            coeffs[w] = Q::from_integer(Z::from(a));
        }
        let cycle = s.dual.combination(&coeffs);
        Self { ends, alpha, cycle }
    }

    /// Builds the cycle from `(end id, exponent)` pairs.
    pub fn from_ids(s: &Singularity, exps: &[(&str, u64)]) -> Result<Self> {
        let ends = s.graph.ends();
        let mut alpha = vec![0; ends.len()];
        for (id, e) in exps {
            let i = s.graph.require(id)?;
            let k = ends.iter().position(|&w| w == i).ok_or_else(|| Error::UnknownVertex(format!("{id} is not an end")))?;
            alpha[k] += e;
        }
        Ok(Self::new(s, alpha))
    }

    pub fn exponent_map(&self, g: &ResolutionGraph) -> BTreeMap<String, u64> {
        self.ends.iter().zip(&self.alpha).filter(|(_, a)| **a > 0).map(|(&w, &a)| (g.id(w).to_string(), a)).collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.alpha.iter().sum()
    }

    /// `z_E1^2*z_E3`, or `1` for the empty monomial.
    pub fn render(&self, g: &ResolutionGraph) -> String {
        let parts: Vec<String> = self
            .exponent_map(g)
            .into_iter()
            .map(|(id, a)| if a == 1 { format!("z_{id}") } else { format!("z_{id}^{a}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// An admissible monomial for one `(node, branch)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityWitness {
    pub node: usize,
    /// Index into `graph.branches(node)`.
    pub branch: usize,
    pub monomial: MonomialCycle,
    /// `D - E*_v`
    pub residual: IntCycle,
}

/// Result of a bounded witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(AdmissibilityWitness),
    NotFoundWithinBound,
}

/// Checks a candidate independently of the search and returns the residual.
pub fn validate_witness(s: &Singularity, v: usize, branch: &Branch, m: &MonomialCycle) -> std::result::Result<IntCycle, String> {
    let residual = m.cycle.sub(s.dual.dual(v));
    if !residual.is_integral() {
        return Err(format!("D - E*_v = {} is not integral", residual.render(&s.graph)));
    }
    if !residual.is_effective() {
        return Err(format!("D - E*_v = {} is not effective", residual.render(&s.graph)));
    }
    if let Some(u) = (0..s.len()).find(|&u| !branch.contains(u) && !residual.0[u].is_zero()) {
        return Err(format!("D - E*_v has support on {} outside the branch", s.graph.id(u)));
    }
    for (&w, &a) in m.ends.iter().zip(&m.alpha) {
        if a > 0 && !branch.contains(w) {
            return Err(format!("end {} off the branch has exponent {a}", s.graph.id(w)));
        }
    }
    Ok(residual.floor())
}

/// Bounded search for an admissible monomial, minimal by total exponent sum
/// and then lexicographically in `alpha`.
///
/// The vanishing of `D - E*_v` off the branch is an affine system in `alpha`;
/// after row reduction only the free coordinates are enumerated.
pub fn find_admissible_monomial(s: &Singularity, v: usize, branch_index: usize, bound: u64) -> Result<Search> {
    if s.graph.degree(v) < 3 {
        return Err(Error::NotANode(s.graph.id(v).to_string()));
    }
    let branches = s.graph.branches(v);
    let branch = branches.get(branch_index).ok_or_else(|| invariant(format!("branch {branch_index} out of range")))?;
    let ends = s.graph.ends();
    let outside: Vec<usize> = (0..s.len()).filter(|&u| !branch.contains(u)).collect();
    let mut m = RatMatrix::zeros(outside.len(), ends.len());
    let mut rhs = Vec::with_capacity(outside.len());
    for (r, &u) in outside.iter().enumerate() {
        for (c, &w) in ends.iter().enumerate() {
            m[(r, c)] = s.dual.a(u, w).clone();
        }
        rhs.push(s.dual.a(u, v).clone());
    }
    let Some((pivots, rows)) = solve_affine(&m, &rhs) else {
        return Ok(Search::NotFoundWithinBound);
    };
    let free: Vec<usize> = (0..ends.len()).filter(|c| !pivots.contains(c)).collect();
    // pivot_i = (b_i - sum_j n_ij f_j) / den_i in integers
    let pivot_forms: Vec<(i128, Vec<i128>, i128)> = rows
        .iter()
        .map(|row| {
            let den = free.iter().map(|&j| row[j].denom().clone()).chain(std::iter::once(row[ends.len()].denom().clone()));
            let l = den.fold(Z::one(), |acc, d| num_integer::Integer::lcm(&acc, &d));
            let lq = Q::from_integer(l.clone());
            let as_i = |x: &Q| (x * &lq).to_integer().to_i128().expect("small coefficient");
            (as_i(&row[ends.len()]), free.iter().map(|&j| as_i(&row[j])).collect(), l.to_i128().expect("small denominator"))
        })
        .collect();

    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut f = vec![0u64; free.len()];
    let mut alpha = vec![0u64; ends.len()];
    loop {
        let mut ok = true;
        for (&j, &x) in free.iter().zip(&f) {
            alpha[j] = x;
        }
        for ((b, n, den), &p) in pivot_forms.iter().zip(&pivots) {
            let num = b - n.iter().zip(&f).map(|(c, &x)| c * x as i128).sum::<i128>();
            if num < 0 || num % den != 0 || num / den > bound as i128 {
                ok = false;
                break;
            }
            alpha[p] = (num / den) as u64;
        }
        if ok {
            let sum: u64 = alpha.iter().sum();
            let better = match &best {
                None => true,
                Some((bs, ba)) => (sum, &alpha) < (*bs, ba),
            };
            if better {
                let cand = MonomialCycle::new(s, alpha.clone());
                if validate_witness(s, v, branch, &cand).is_ok() {
                    best = Some((sum, alpha.clone()));
                }
            }
        }
        // odometer over [0, bound]^free
        let mut k = 0;
        while k < f.len() {
            if f[k] < bound {
                f[k] += 1;
                break;
            }
            f[k] = 0;
            k += 1;
        }
        if k == f.len() {
            break;
        }
    }
    let Some((_, alpha)) = best else {
        return Ok(Search::NotFoundWithinBound);
    };
    let monomial = MonomialCycle::new(s, alpha);
    let residual = validate_witness(s, v, branch, &monomial).map_err(invariant)?;
    Ok(Search::Found(AdmissibilityWitness { node: v, branch: branch_index, monomial, residual }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchResult {
    pub node: usize,
    pub branch: usize,
    pub attaching: usize,
    pub witness: Option<AdmissibilityWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialReport {
    pub verdict: Verdict,
    pub bound: u64,
    /// Nodes in vertex order, branches in branch order.
    pub branches: Vec<BranchResult>,
}

impl MonomialReport {
    pub fn witnesses(&self, v: usize) -> Vec<&AdmissibilityWitness> {
        self.branches.iter().filter(|b| b.node == v).filter_map(|b| b.witness.as_ref()).collect()
    }

    pub fn to_json(&self, g: &ResolutionGraph) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .branches
            .iter()
            .map(|b| {
                let mut o = serde_json::json!({
                    "node": g.id(b.node),
                    "attaching": g.id(b.attaching),
                    "found": b.witness.is_some(),
                });
                if let Some(w) = &b.witness {
                    o["exponents"] = serde_json::to_value(w.monomial.exponent_map(g)).expect("map serializes");
                    o["monomial"] = w.monomial.render(g).into();
                    o["residual"] = w.residual.render(g).into();
                }
                o
            })
            .collect();
        serde_json::json!({ "verdict": self.verdict, "bound": self.bound, "branches": items })
    }
}

/// Searches every `(node, branch)` pair. `Unknown` when some search hit the
/// bound; the condition is never refuted.
pub fn check_monomial_condition(s: &Singularity, bound: u64, exec: Exec) -> Result<MonomialReport> {
    let mut pairs = Vec::new();
    for v in s.graph.nodes() {
        for (i, b) in s.graph.branches(v).into_iter().enumerate() {
            pairs.push((v, i, b.attaching));
        }
    }
    let branches = par::map(exec, &pairs, |&(v, i, attaching)| -> Result<BranchResult> {
        let witness = match find_admissible_monomial(s, v, i, bound)? {
            Search::Found(w) => Some(w),
            Search::NotFoundWithinBound => None,
        };
        Ok(BranchResult { node: v, branch: i, attaching, witness })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verdict = if branches.iter().all(|b| b.witness.is_some()) { Verdict::Satisfied } else { Verdict::Unknown };
    Ok(MonomialReport { verdict, bound, branches })
}

/// `sum_w alpha_w m_vw`, checked against `e_v` times the coefficient of `D`
/// at `v`.
pub fn v_degree(s: &Singularity, v: usize, m: &MonomialCycle) -> Result<u64> {
    let w = s.weights(v)?;
    let deg: u64 = m.ends.iter().zip(&m.alpha).map(|(&u, &a)| a * w.m[u]).sum();
    let check = m.cycle.0[v].clone() * Q::from_integer(Z::from(w.e));
    if check != Q::from_integer(Z::from(deg)) {
        return Err(invariant(format!("v-degree {deg} differs from e_v D_v = {}", q_to_string(&check))));
    }
    Ok(deg)
}

/// The equations at one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSystem {
    pub node: usize,
    pub v_degree: u64,
    /// One admissible monomial per branch, in branch order.
    pub monomials: Vec<MonomialCycle>,
    /// `(delta_v - 2) x delta_v`, every maximal minor nonzero.
    pub coefficients: Vec<Vec<Q>>,
}

impl NodeSystem {
    pub fn render(&self, g: &ResolutionGraph) -> Vec<String> {
        self.coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.monomials)
                    .map(|(c, m)| format!("({})*{}", q_to_string(c), m.render(g)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceSystem {
    pub seed: u64,
    pub nodes: Vec<NodeSystem>,
}

impl SpliceSystem {
    pub fn node(&self, v: usize) -> Option<&NodeSystem> {
        self.nodes.iter().find(|n| n.node == v)
    }

    /// All equations as `(node, coefficients, monomials)` in node order.
    pub fn equations(&self) -> impl Iterator<Item = (usize, &[Q], &[MonomialCycle])> {
        self.nodes.iter().flat_map(|n| n.coefficients.iter().map(move |r| (n.node, r.as_slice(), n.monomials.as_slice())))
    }

    pub fn to_json(&self, g: &ResolutionGraph) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .map(|n| {
                let equations: Vec<serde_json::Value> = n
                    .coefficients
                    .iter()
                    .map(|row| {
                        serde_json::Value::Array(
                            row.iter()
                                .zip(&n.monomials)
                                .map(|(c, m)| serde_json::json!({ "coefficient": q_to_string(c), "exponents": m.exponent_map(g) }))
                                .collect(),
                        )
                    })
                    .collect();
                serde_json::json!({
                    "node": g.id(n.node),
                    "vDegree": n.v_degree,
                    "monomials": n.monomials.iter().map(|m| m.render(g)).collect::<Vec<_>>(),
                    "equations": equations,
                    "rendered": n.render(g),
                })
            })
            .collect();
        serde_json::json!({ "seed": self.seed, "nodes": nodes })
    }
}

const REDRAW_LIMIT: usize = 1000;

fn draw_rational(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.gen_range(1..=97);
    let d: i64 = rng.gen_range(1..=13);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Q::new(Z::from(sign * n), Z::from(d))
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn all_maximal_minors_nonzero(f: &[Vec<Q>], cols: usize) -> bool {
    let k = f.len();
    column_subsets(cols, k).iter().all(|subset| {
        let mut m = RatMatrix::zeros(k, k);
        for (i, row) in f.iter().enumerate() {
            for (j, &c) in subset.iter().enumerate() {
                m[(i, j)] = row[c].clone();
            }
        }
        m.rank() == k
    })
}

/// Neumann-Wahl system with coefficients drawn from a ChaCha stream seeded
/// by `seed`. Requires the monomial condition within `bound`.
pub fn emit_splice_system(s: &Singularity, bound: u64, seed: u64, exec: Exec) -> Result<SpliceSystem> {
    let report = check_monomial_condition(s, bound, exec)?;
    if report.verdict != Verdict::Satisfied {
        let missing: Vec<String> = report
            .branches
            .iter()
            .filter(|b| b.witness.is_none())
            .map(|b| format!("{}/{}", s.graph.id(b.node), s.graph.id(b.attaching)))
            .collect();
        return Err(Error::MonomialConditionUnknown(format!("no witness within bound {bound} for {}", missing.join(", "))));
    }
    system_from_report(s, &report, seed)
}

/// Builds the system from already found witnesses.
pub fn system_from_report(s: &Singularity, report: &MonomialReport, seed: u64) -> Result<SpliceSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::new();
    for v in s.graph.nodes() {
        let monomials: Vec<MonomialCycle> = report.witnesses(v).into_iter().map(|w| w.monomial.clone()).collect();
        let delta = s.graph.degree(v);
        if monomials.len() != delta {
            return Err(Error::MonomialConditionUnknown(format!("node {} lacks witnesses", s.graph.id(v))));
        }
        let degrees = monomials.iter().map(|m| v_degree(s, v, m)).collect::<Result<Vec<_>>>()?;
        if degrees.iter().any(|d| *d != degrees[0]) {
            return Err(invariant(format!("monomials at {} have v-degrees {degrees:?}", s.graph.id(v))));
        }
        let mut coefficients = None;
        for _ in 0..REDRAW_LIMIT {
            let f: Vec<Vec<Q>> = (0..delta - 2).map(|_| (0..delta).map(|_| draw_rational(&mut rng)).collect()).collect();
            if all_maximal_minors_nonzero(&f, delta) {
                coefficients = Some(f);
                break;
            }
        }
        let coefficients = coefficients.ok_or(Error::DegenerateCoefficients(REDRAW_LIMIT))?;
        nodes.push(NodeSystem { node: v, v_degree: degrees[0], monomials, coefficients });
    }
    Ok(SpliceSystem { seed, nodes })
}

/// Outcome of [`verify_equivariance`]; `violation` names the first failing
/// `(h, node, monomial)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivariance {
    pub ok: bool,
    pub checked_elements: usize,
    pub violation: Option<(HElement, usize, String)>,
}

/// `theta(h, D) = theta(h, E*_v)` for every monomial at `v`, over all of `H`
/// when `|H| <= cap`, else over the generators.
pub fn verify_equivariance(s: &Singularity, system: &SpliceSystem, cap: u64) -> Equivariance {
    let elements: Vec<HElement> = if s.group.order <= cap {
        s.group.elements()
    } else {
        (0..s.group.rank())
            .map(|j| {
                let mut c = vec![0u64; s.group.rank()];
                c[j] = 1;
                HElement(c)
            })
            .collect()
    };
    for h in &elements {
        for n in &system.nodes {
            let target = s.group.theta_dual(h, n.node);
            for m in &n.monomials {
                let got = m
                    .ends
                    .iter()
                    .zip(&m.alpha)
                    .fold(RationalMod1::zero(), |acc, (&w, &a)| {
                        (0..a).fold(acc, |x, _| x.add(&s.group.theta_dual(h, w)))
                    });
                if got != target {
                    return Equivariance {
                        ok: false,
                        checked_elements: elements.len(),
                        violation: Some((h.clone(), n.node, m.render(&s.graph))),
                    };
                }
            }
        }
    }
    Equivariance { ok: true, checked_elements: elements.len(), violation: None }
}
