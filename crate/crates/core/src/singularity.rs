//! Per-graph data shared by the invariant computations.

use crate::arith::{IntMatrix, Q};
use crate::discriminant::{discriminant_group, Character, GroupData};
use crate::error::{Error, Result};
use crate::graph::{canonical_cycle, dual_data, node_weights, CanonicalCycle, DualData, NodeWeights, QCycle, ResolutionGraph};

/// A validated graph with its dual cycles, canonical cycle and discriminant
/// group.
#[derive(Clone, Debug)]
pub struct Singularity {
    pub graph: ResolutionGraph,
    pub matrix: IntMatrix,
    pub dual: DualData,
    pub canonical: CanonicalCycle,
    pub group: GroupData,
}

impl Singularity {
    pub fn new(graph: ResolutionGraph) -> Result<Self> {
        let dual = dual_data(&graph)?;
        let canonical = canonical_cycle(&graph, &dual);
        let group = discriminant_group(&graph, &dual)?;
        let matrix = graph.intersection_matrix();
        Ok(Self { graph, matrix, dual, canonical, group })
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn weights(&self, v: usize) -> Result<NodeWeights> {
        node_weights(&self.dual, v)
    }

    /// Index of the node `id`; errors if the vertex is unknown or not a node.
    pub fn require_node(&self, id: &str) -> Result<usize> {
        let v = self.graph.require(id)?;
        if self.graph.degree(v) < 3 {
            return Err(Error::NotANode(id.to_string()));
        }
        Ok(v)
    }

    /// Node with the lexicographically smallest id.
    pub fn default_node(&self) -> Option<usize> {
        self.graph.nodes().into_iter().min_by(|&a, &b| self.graph.id(a).cmp(self.graph.id(b)))
    }

    /// `c_1(L_chi)`
    pub fn c1(&self, chi: &Character) -> Result<QCycle> {
        self.group.fractional_representative(chi)
    }

    /// `D . E_w` for every `w`.
    pub fn degrees(&self, d: &QCycle) -> Vec<Q> {
        d.degrees(&self.matrix)
    }
}
