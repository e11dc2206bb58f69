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

//! Conflict graphs over client requests.
//!
//! Two requests conflict when they cannot share one XOR transmission that
//! both receivers decode instantly. The MBS graph has one vertex per client
//! request; the dual graph has one vertex per (femtocache, client, file)
//! service option and adds service conflicts between copies of a client.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::model::{FileId, FileSet, Scenario};

/// A pending request: client `client` wants `wants` and holds `has`.
#[derive(Clone, Copy, Debug)]
pub struct Request<'a> {
    pub client: usize,
    pub wants: FileId,
    pub has: &'a FileSet,
}

/// Whether requests `(k1, has1)` and `(k2, has2)` cannot be XORed together.
#[inline]
pub fn coding_conflict(k1: FileId, has1: &FileSet, k2: FileId, has2: &FileSet) -> bool {
    k1 != k2 && (!has2.contains(k1) || !has1.contains(k2))
}

/// MBS-side ONC conflict graph. Vertex `v` stands for `vertices[v]`.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    vertices: Vec<(usize, FileId)>,
    graph: UndirectedGraph,
}

impl ConflictGraph {
    pub fn vertices(&self) -> &[(usize, FileId)] {
        &self.vertices
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_of_client(&self, client: usize) -> Option<usize> {
        self.vertices.binary_search_by_key(&client, |v| v.0).ok()
    }

    /// Conflict graph over every client of `scenario`.
    pub fn for_scenario(scenario: &Scenario) -> Self {
        Self::for_clients(scenario, 0..scenario.num_clients())
    }

    /// Conflict graph over the given clients of `scenario`.
    pub fn for_clients(scenario: &Scenario, clients: impl IntoIterator<Item = usize>) -> Self {
        let reqs: Vec<Request<'_>> = clients
            .into_iter()
            .map(|j| {
                let c = &scenario.clients()[j];
                Request { client: j, wants: c.wants, has: &c.has }
            })
            .collect();
        build_conflict_graph(&reqs).expect("scenario clients are unique")
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self.vertices.iter().map(|(j, k)| format!("{}:{}", j + 1, k.0 + 1)).collect();
        self.graph.to_dot("onc", &labels)
    }
}

/// Builds the MBS conflict graph. Vertices are ordered by client id.
pub fn build_conflict_graph(requests: &[Request<'_>]) -> Result<ConflictGraph> {
    let mut reqs: Vec<&Request<'_>> = requests.iter().collect();
    reqs.sort_by_key(|r| (r.client, r.wants));
    if let Some(w) = reqs.windows(2).find(|w| w[0].client == w[1].client) {
        return Err(Error::InvalidInput(format!("client {} appears twice", w[0].client + 1)));
    }
    let n = reqs.len();
    let mut graph = UndirectedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if coding_conflict(reqs[a].wants, reqs[a].has, reqs[b].wants, reqs[b].has) {
                graph.add_edge(a, b);
            }
        }
    }
    Ok(ConflictGraph { vertices: reqs.iter().map(|r| (r.client, r.wants)).collect(), graph })
}

/// Induced subgraph on the clients not in `served`.
pub fn residual_graph(g: &ConflictGraph, served: &FixedBitSet) -> ConflictGraph {
    let keep: Vec<usize> = (0..g.len()).filter(|&v| !served.contains(g.vertices[v].0)).collect();
    ConflictGraph {
        vertices: keep.iter().map(|&v| g.vertices[v]).collect(),
        graph: g.graph.induced(&keep),
    }
}

/// One service option: femtocache `fc` sends `file` to `client`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualVertex {
    pub fc: usize,
    pub client: usize,
    pub file: FileId,
}

/// Femtocache-side dual conflict graph.
///
/// Copies of one client at different femtocaches are pairwise adjacent.
/// Coding conflicts link two options of the same femtocache whose requests
/// conflict; options at different femtocaches use separate channels and
/// conflict only through a shared client.
#[derive(Clone, Debug)]
pub struct DualConflictGraph {
    vertices: Vec<DualVertex>,
    graph: UndirectedGraph,
}

impl DualConflictGraph {
    pub fn vertices(&self) -> &[DualVertex] {
        &self.vertices
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{}:{}:{}", v.fc + 1, v.client + 1, v.file.0 + 1))
            .collect();
        self.graph.to_dot("dual", &labels)
    }
}

pub fn build_dual_conflict_graph(scenario: &Scenario) -> DualConflictGraph {
    let clients = scenario.clients();
    let mut vertices = Vec::new();
    for (i, fc) in scenario.fcs().iter().enumerate() {
        for c in clients {
            if fc.cache.contains(c.wants) && fc.covers(&c.position) {
                vertices.push(DualVertex { fc: i, client: c.id, file: c.wants });
            }
        }
    }
    let n = vertices.len();
    let mut graph = UndirectedGraph::new(n);
    for (a, &va) in vertices.iter().enumerate() {
        for (b, &vb) in vertices.iter().enumerate().skip(a + 1) {
            let conflict = if va.client == vb.client {
                va.fc != vb.fc
            } else {
                va.fc == vb.fc
                    && coding_conflict(va.file, &clients[va.client].has, vb.file, &clients[vb.client].has)
            };
            if conflict {
                graph.add_edge(a, b);
            }
        }
    }
    DualConflictGraph { vertices, graph }
}
