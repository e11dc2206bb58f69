// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Dense undirected graph used by every solver in the crate.

use fixedbitset::FixedBitSet;

/// Simple undirected graph on vertices `0..n` with a dense bit-row adjacency.
///
/// Rows are kept symmetric and the diagonal is always clear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    rows: Vec<FixedBitSet>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            rows: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = UndirectedGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut g = UndirectedGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.rows.len()
    }

    pub fn num_edges(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Adds the edge `{u, v}`. Self-loops are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    /// Adjacency row of `v` as a bitset over all vertices.
    #[inline]
    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].ones()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, r)| r.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Fraction of vertex pairs that are adjacent; `None` below two vertices.
    pub fn density(&self) -> Option<f64> {
        let n = self.num_vertices();
        if n < 2 {
            return None;
        }
        Some(self.num_edges() as f64 / (n * (n - 1) / 2) as f64)
    }

    pub fn complement(&self) -> Self {
        let n = self.num_vertices();
        let mut rows = Vec::with_capacity(n);
        for (v, r) in self.rows.iter().enumerate() {
            let mut c = r.clone();
            c.toggle_range(..);
            c.set(v, false);
            rows.push(c);
        }
        UndirectedGraph { rows }
    }

    /// Subgraph induced by `keep`, renumbered in the order given.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let mut g = UndirectedGraph::new(keep.len());
        for (a, &u) in keep.iter().enumerate() {
            for (b, &v) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_symmetric_irreflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(u, r)| {
            !r.contains(u) && r.ones().all(|v| self.rows[v].contains(u))
        })
    }

    /// Graphviz rendering with one label per vertex.
    pub fn to_dot(&self, name: &str, labels: &[String]) -> String {
        let mut out = format!("graph {name} {{\n");
        for (v, label) in labels.iter().enumerate() {
            out.push_str(&format!("  {v} [label=\"{label}\"];\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}
