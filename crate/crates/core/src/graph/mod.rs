//! Weighted resolution graphs: storage, validation and branch decomposition.
//!
//! Vertex order is the input order and is used everywhere as the canonical
//! index order; cycles are dense coefficient vectors in that order.

mod cycles;
mod parse;

use std::collections::{HashMap, VecDeque};

use num_traits::Signed;
use serde::Serialize;

pub use cycles::{
    canonical_cycle, dual_data, fundamental_cycle, node_weights, CanonicalCycle, DualData,
    FundamentalCycle, IntCycle, NodeWeights, QCycle,
};
pub use parse::{dump_dsl, dump_json, parse_dsl, parse_graph, parse_json};

use crate::arith::{IntMatrix, Z};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    /// Self-intersection `E_v . E_v`.
    pub weight: i64,
}

/// A weighted graph of rational curves, not yet known to be valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl ResolutionGraph {
    /// Builds a graph from vertices and edges given by id. Rejects duplicate
    /// ids and edges naming unknown vertices; everything else is left to
    /// [`ResolutionGraph::validate`].
    pub fn from_ids(vertices: Vec<Vertex>, edges: Vec<(String, String)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()));
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_indices(vertices, edges, index))
    }

    fn from_indices(vertices: Vec<Vertex>, edges: Vec<(usize, usize)>, index: HashMap<String, usize>) -> Self {
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            if a != b {
                adjacency[b].push(a);
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Self { vertices, edges, index, adjacency }
    }

    /// Convenience constructor from `(id, weight)` pairs and id pairs.
    pub fn build(vertices: &[(&str, i64)], edges: &[(&str, &str)]) -> Result<Self> {
        Self::from_ids(
            vertices.iter().map(|&(id, weight)| Vertex { id: id.to_string(), weight }).collect(),
            edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.vertices[i].weight
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Index of `id`, or [`Error::UnknownVertex`].
    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// `delta_v`, the number of curves meeting `E_v`.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) >= 3).collect()
    }

    pub fn ends(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == 1).collect()
    }

    pub fn is_chain(&self) -> bool {
        self.nodes().is_empty()
    }

    /// Intersection matrix: weights on the diagonal, 1 per edge.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, v) in self.vertices.iter().enumerate() {
            m[(i, i)] = Z::from(v.weight);
        }
        for &(a, b) in &self.edges {
            if a != b {
                m[(a, b)] += 1;
                m[(b, a)] += 1;
            }
        }
        m
    }

    fn tree_defect(&self) -> Option<String> {
        if let Some(&(a, _)) = self.edges.iter().find(|(a, b)| a == b) {
            return Some(format!("self-loop at `{}`", self.id(a)));
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != self.len() {
            let missing = (0..self.len()).find(|&i| !seen[i]).unwrap();
            return Some(format!("disconnected (`{}` unreachable from `{}`)", self.id(missing), self.id(0)));
        }
        if self.edges.len() != self.len() - 1 {
            return Some(format!("{} edges on {} vertices contain a cycle", self.edges.len(), self.len()));
        }
        None
    }

    /// Checks the tree property, the weight range and negative definiteness
    /// (leading principal minors of sign `(-1)^k`, exact).
    pub fn validate(&self) -> Result<ValidationReport> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(v) = self.vertices.iter().find(|v| v.weight > -1) {
            return Err(Error::InvalidWeight { id: v.id.clone(), weight: v.weight });
        }
        if let Some(why) = self.tree_defect() {
            return Err(Error::NotATree(why));
        }
        let minors = self.intersection_matrix().leading_minors();
        for (k, m) in minors.iter().enumerate() {
            let expected_negative = k % 2 == 0;
            if m.is_zero_or_wrong_sign(expected_negative) {
                return Err(Error::NotNegativeDefinite { minor: k + 1 });
            }
        }
        let is_chain = self.is_chain();
        let mut warnings = Vec::new();
        if is_chain {
            warnings.push(
                "chain (cyclic quotient): excluded as a top-level input; accepted as a recursion base case"
                    .to_string(),
            );
        }
        Ok(ValidationReport {
            vertices: self.len(),
            edges: self.edges.len(),
            is_tree: true,
            negative_definite: true,
            is_chain,
            nodes: self.nodes().into_iter().map(|i| self.id(i).to_string()).collect(),
            ends: self.ends().into_iter().map(|i| self.id(i).to_string()).collect(),
            determinant: minors.last().cloned().unwrap_or_default().to_string(),
            warnings,
        })
    }

    /// Subgraph induced on `indices`, kept in the given order.
    pub fn induced(&self, indices: &[usize]) -> ResolutionGraph {
        let local: HashMap<usize, usize> = indices.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let vertices: Vec<Vertex> = indices.iter().map(|&i| self.vertices[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
            .collect();
        let index = vertices.iter().enumerate().map(|(k, v)| (v.id.clone(), k)).collect();
        Self::from_indices(vertices, edges, index)
    }

    /// Connected components of `E - E_v`, ordered by the id of the vertex
    /// adjacent to `v`.
    pub fn branches(&self, v: usize) -> Vec<Branch> {
        let mut out: Vec<Branch> = self.adjacency[v]
            .iter()
            .map(|&start| {
                let mut seen = vec![false; self.len()];
                seen[v] = true;
                seen[start] = true;
                let mut queue = VecDeque::from([start]);
                while let Some(u) = queue.pop_front() {
                    for &w in &self.adjacency[u] {
                        if !seen[w] {
                            seen[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
                let embedding: Vec<usize> = (0..self.len()).filter(|&i| i != v && seen[i]).collect();
                let attaching_local = embedding.iter().position(|&i| i == start).unwrap();
                Branch {
                    parent_node: v,
                    attaching: start,
                    attaching_local,
                    graph: self.induced(&embedding),
                    embedding,
                }
            })
            .collect();
        out.sort_by(|a, b| self.id(a.attaching).cmp(self.id(b.attaching)));
        out
    }

    /// Canonical JSON serialization (input order); also the memo key.
    pub fn canonical_text(&self) -> String {
        dump_json(self)
    }

    /// Short stable identifier: FNV-1a 64 of the canonical text.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.canonical_text().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

trait SignCheck {
    fn is_zero_or_wrong_sign(&self, expected_negative: bool) -> bool;
}

impl SignCheck for Z {
    fn is_zero_or_wrong_sign(&self, expected_negative: bool) -> bool {
        if expected_negative {
            !self.is_negative()
        } else {
            !self.is_positive()
        }
    }
}

/// Outcome of a successful validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub vertices: usize,
    pub edges: usize,
    pub is_tree: bool,
    pub negative_definite: bool,
    pub is_chain: bool,
    pub nodes: Vec<String>,
    pub ends: Vec<String>,
    /// `det I` as a decimal string.
    pub determinant: String,
    pub warnings: Vec<String>,
}

/// A connected component of `E - E_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    /// Index of `v` in the parent.
    pub parent_node: usize,
    /// Parent index of the branch vertex adjacent to `v`.
    pub attaching: usize,
    /// The same vertex as an index of `graph`.
    pub attaching_local: usize,
    pub graph: ResolutionGraph,
    /// Branch index -> parent index.
    pub embedding: Vec<usize>,
}

impl Branch {
    /// Parent index -> branch index, if the vertex lies on the branch.
    pub fn local_index(&self, parent: usize) -> Option<usize> {
        self.embedding.iter().position(|&i| i == parent)
    }

    pub fn contains(&self, parent: usize) -> bool {
        self.embedding.contains(&parent)
    }
}
