//! Graph topology induced by the nonzero pattern of `A`.

use crate::matrix::SymmetricSparseMatrix;

/// Undirected graph with one node per unknown and an edge per nonzero
/// off-diagonal entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphTopology {
    neighbors: Vec<Vec<usize>>,
}

/// A connected component and whether it contains a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    pub acyclic: bool,
}

impl GraphTopology {
    pub fn from_matrix(a: &SymmetricSparseMatrix) -> Self {
        let neighbors = (0..a.dim())
            .map(|i| a.row(i).iter().map(|&(j, _)| j).collect())
            .collect();
        Self { neighbors }
    }

    /// Builds a topology from an explicit undirected edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut neighbors = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i != j && !neighbors[i].contains(&j) {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self { neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    /// `N(i)`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Connected components in order of their smallest node.
    pub fn components(&self) -> Vec<Component> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut nodes = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            let mut degree_sum = 0;
            while let Some(i) = stack.pop() {
                nodes.push(i);
                degree_sum += self.neighbors[i].len();
                for &k in &self.neighbors[i] {
                    if !seen[k] {
                        seen[k] = true;
                        stack.push(k);
                    }
                }
            }
            nodes.sort_unstable();
            // a connected graph is a tree iff it has |V| - 1 edges
            let acyclic = degree_sum / 2 + 1 == nodes.len();
            out.push(Component { nodes, acyclic });
        }
        out
    }

    /// True when the graph has no cycles. A forest counts as acyclic.
    pub fn is_tree(&self) -> bool {
        self.components().iter().all(|c| c.acyclic)
    }
}

pub fn build_graph(a: &SymmetricSparseMatrix) -> GraphTopology {
    GraphTopology::from_matrix(a)
}

pub fn is_tree(g: &GraphTopology) -> bool {
    g.is_tree()
}
