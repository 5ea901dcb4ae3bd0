//! Named example graphs shipped with the crate.

use crate::graph::{parse_graph, ResolutionGraph};

pub const FIGURE_ONE_JSON: &str = include_str!("../fixtures/fig1.json");
pub const EXMC_JSON: &str = include_str!("../fixtures/exmc.json");
pub const D4_DSL: &str = include_str!("../fixtures/d4.dsl");
pub const E8_DSL: &str = include_str!("../fixtures/e8.dsl");
pub const A3_DSL: &str = include_str!("../fixtures/a3.dsl");

fn load(text: &str) -> ResolutionGraph {
    parse_graph(text).expect("bundled fixture parses")
}

/// 14 vertices, three nodes `v0, v1, v2`, five ends `w1..w5`; `|H| = 36`,
/// `p_g = 7`.
pub fn figure_one() -> ResolutionGraph {
    load(FIGURE_ONE_JSON)
}

/// Two nodes `E5, E6`; `E4` has weight -3, every other curve -2.
pub fn exmc() -> ResolutionGraph {
    load(EXMC_JSON)
}

pub fn d4() -> ResolutionGraph {
    load(D4_DSL)
}

pub fn e8() -> ResolutionGraph {
    load(E8_DSL)
}

pub fn a3() -> ResolutionGraph {
    load(A3_DSL)
}

/// Chain with the given weights, ids `x1, x2, ...`.
pub fn chain(weights: &[i64]) -> ResolutionGraph {
    let ids: Vec<String> = (1..=weights.len()).map(|i| format!("x{i}")).collect();
    let vertices: Vec<(&str, i64)> = ids.iter().map(String::as_str).zip(weights.iter().copied()).collect();
    let edges: Vec<(&str, &str)> = ids.windows(2).map(|w| (w[0].as_str(), w[1].as_str())).collect();
    ResolutionGraph::build(&vertices, &edges).expect("chain ids are distinct")
}

/// Star-shaped graph: a node of weight `center` with arms given as chains of
/// weights read outward from the node. Ids are `c` and `a{i}_{j}`.
pub fn star(center: i64, arms: &[&[i64]]) -> ResolutionGraph {
    let mut vertices = vec![("c".to_string(), center)];
    let mut edges = Vec::new();
    for (i, arm) in arms.iter().enumerate() {
        let mut prev = "c".to_string();
        for (j, &w) in arm.iter().enumerate() {
            let id = format!("a{}_{}", i + 1, j + 1);
            vertices.push((id.clone(), w));
            edges.push((prev, id.clone()));
            prev = id;
        }
    }
    let v: Vec<(&str, i64)> = vertices.iter().map(|(s, w)| (s.as_str(), *w)).collect();
    let e: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    ResolutionGraph::build(&v, &e).expect("star ids are distinct")
}

/// `D_n` (`n >= 4`) as a star with arms of lengths 1, 1, n-3.
pub fn d_n(n: usize) -> ResolutionGraph {
    let long = vec![-2; n - 3];
    star(-2, &[&[-2], &[-2], &long])
}

/// `E_6`, `E_7`, `E_8` as stars with arms 1, 2, n-4.
pub fn e_n(n: usize) -> ResolutionGraph {
    let long = vec![-2; n - 4];
    star(-2, &[&[-2], &[-2, -2], &long])
}
