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

//! Independent-set and coloring solvers, plus the exhaustive optimal offload.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::graphs::ConflictGraph;
use crate::model::Scenario;

/// Size limits for the exponential solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverCaps {
    pub mis_exact: usize,
    pub chromatic_exact: usize,
    pub offload_clients: usize,
    pub offload_fcs: usize,
}

impl Default for SolverCaps {
    fn default() -> Self {
        SolverCaps { mis_exact: 40, chromatic_exact: 20, offload_clients: 12, offload_fcs: 3 }
    }
}

/// Maximum independent set, as the maximum clique of the complement found by
/// Bron–Kerbosch with pivoting and a cardinality bound. Returns sorted indices.
pub fn mis_exact(g: &UndirectedGraph, cap: usize) -> Result<Vec<usize>> {
    let n = g.num_vertices();
    if n > cap {
        return Err(Error::SolverLimit { solver: "mis_exact", size: n, cap });
    }
    Ok(max_clique(&g.complement()))
}

/// Maximum clique by Bron–Kerbosch with pivoting. No size cap.
pub fn max_clique(h: &UndirectedGraph) -> Vec<usize> {
    let n = h.num_vertices();
    let mut best = Vec::new();
    let mut current = Vec::new();
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    expand(h, &mut current, p, &mut best);
    best.sort_unstable();
    best
}

fn expand(h: &UndirectedGraph, current: &mut Vec<usize>, mut p: FixedBitSet, best: &mut Vec<usize>) {
    let mut remaining = p.count_ones(..);
    if remaining == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    if current.len() + remaining <= best.len() {
        return;
    }
    let pivot = p
        .ones()
        .max_by_key(|&u| (h.row(u).intersection(&p).count(), std::cmp::Reverse(u)))
        .expect("p is non-empty");
    let candidates: Vec<usize> = p.ones().filter(|&v| !h.has_edge(pivot, v)).collect();
    for v in candidates {
        if current.len() + remaining <= best.len() {
            return;
        }
        let mut next = p.clone();
        next.intersect_with(h.row(v));
        current.push(v);
        expand(h, current, next, best);
        current.pop();
        p.set(v, false);
        remaining -= 1;
    }
}

/// Greedy weighted vertex search.
///
/// Each round weighs every remaining vertex by `(V - deg v)` times the sum of
/// `(V - deg u)` over its remaining non-neighbours `u` (or neighbours when
/// `over_neighbors` is set), picks the heaviest (lowest index on ties), and
/// deletes it with its neighbourhood. `V` and degrees refer to the current
/// graph. Returns sorted indices.
pub fn gvs(g: &UndirectedGraph, over_neighbors: bool) -> Vec<usize> {
    let n = g.num_vertices();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut count = n as u64;
    let mut degree: Vec<u64> = (0..n).map(|v| g.degree(v) as u64).collect();
    let mut picked = Vec::new();
    while count > 0 {
        let slack_total: u64 = alive.ones().map(|u| count - degree[u]).sum();
        let mut best: Option<(u64, usize)> = None;
        for v in alive.ones() {
            let own = count - degree[v];
            let nbr_slack: u64 = g.row(v).intersection(&alive).map(|u| count - degree[u]).sum();
            let sum = if over_neighbors { nbr_slack } else { slack_total - own - nbr_slack };
            let w = own * sum;
            if best.is_none_or(|(bw, _)| w > bw) {
                best = Some((w, v));
            }
        }
        let (_, v) = best.expect("alive is non-empty");
        picked.push(v);
        let mut removed: Vec<usize> = g.row(v).intersection(&alive).collect();
        removed.push(v);
        for &r in &removed {
            alive.set(r, false);
        }
        count -= removed.len() as u64;
        for &r in &removed {
            for u in g.row(r).intersection(&alive) {
                degree[u] -= 1;
            }
        }
    }
    picked.sort_unstable();
    picked
}

/// Proper vertex coloring with dense colors `0..num_colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    num_colors: usize,
}

impl Coloring {
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// Vertices of each color class, ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }

    pub fn is_proper(&self, g: &UndirectedGraph) -> bool {
        self.colors.len() == g.num_vertices() && g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }
}

/// First-fit greedy coloring in natural vertex order.
pub fn ggc(g: &UndirectedGraph) -> Coloring {
    first_fit(g, (0..g.num_vertices()).collect::<Vec<_>>().as_slice())
}

/// First-fit greedy coloring in the given order, which must be a permutation.
pub fn ggc_with_order(g: &UndirectedGraph, order: &[usize]) -> Result<Coloring> {
    let n = g.num_vertices();
    let mut seen = FixedBitSet::with_capacity(n);
    for &v in order {
        if v >= n || seen.put(v) {
            return Err(Error::InvalidInput("coloring order is not a permutation".into()));
        }
    }
    if order.len() != n {
        return Err(Error::InvalidInput("coloring order is not a permutation".into()));
    }
    Ok(first_fit(g, order))
}

fn first_fit(g: &UndirectedGraph, order: &[usize]) -> Coloring {
    let n = g.num_vertices();
    let mut colors = vec![usize::MAX; n];
    let mut num_colors = 0;
    let mut used = FixedBitSet::with_capacity(n + 1);
    for &v in order {
        used.clear();
        for u in g.neighbors(v) {
            if colors[u] != usize::MAX {
                used.insert(colors[u]);
            }
        }
        let c = (0..).find(|&c| !used.contains(c)).expect("a free color exists");
        colors[v] = c;
        num_colors = num_colors.max(c + 1);
    }
    Coloring { colors, num_colors }
}

/// Minimum proper coloring by DSATUR branch and bound, seeded with the greedy
/// coloring as upper bound and a maximum clique as lower bound.
pub fn coloring_exact(g: &UndirectedGraph, cap: usize) -> Result<Coloring> {
    let n = g.num_vertices();
    if n > cap {
        return Err(Error::SolverLimit { solver: "chromatic_exact", size: n, cap });
    }
    let mut best = ggc(g);
    let clique = max_clique(g);
    if best.num_colors <= clique.len() {
        return Ok(best);
    }
    let mut search = Dsatur {
        g,
        colors: vec![usize::MAX; n],
        // neighbour_colors[v][c]: colored neighbours of v with color c
        neighbour_colors: vec![vec![0u32; n]; n],
        lower: clique.len(),
        best: &mut best,
    };
    // Fixing the clique's colors first is symmetry-free and tightens pruning.
    for (c, &v) in clique.iter().enumerate() {
        search.assign(v, c);
    }
    search.run(clique.len(), clique.len());
    Ok(best)
}

/// Chromatic number. See [`coloring_exact`].
pub fn chromatic_exact(g: &UndirectedGraph, cap: usize) -> Result<usize> {
    coloring_exact(g, cap).map(|c| c.num_colors)
}

struct Dsatur<'a> {
    g: &'a UndirectedGraph,
    colors: Vec<usize>,
    neighbour_colors: Vec<Vec<u32>>,
    lower: usize,
    best: &'a mut Coloring,
}

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for u in self.g.neighbors(v) {
            self.neighbour_colors[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = usize::MAX;
        for u in self.g.neighbors(v) {
            self.neighbour_colors[u][c] -= 1;
        }
    }

    /// Returns true once the lower bound is met, ending the search.
    fn run(&mut self, colored: usize, used: usize) -> bool {
        let n = self.g.num_vertices();
        if used >= self.best.num_colors {
            return false;
        }
        if colored == n {
            *self.best = Coloring { colors: self.colors.clone(), num_colors: used };
            return used <= self.lower;
        }
        let mut pick = None;
        let mut pick_key = (0usize, 0usize);
        for v in 0..n {
            if self.colors[v] != usize::MAX {
                continue;
            }
            let sat = self.neighbour_colors[v][..used].iter().filter(|&&k| k > 0).count();
            let deg = self.g.neighbors(v).filter(|&u| self.colors[u] == usize::MAX).count();
            if pick.is_none() || (sat, deg) > pick_key {
                pick = Some(v);
                pick_key = (sat, deg);
            }
        }
        let v = pick.expect("an uncolored vertex remains");
        for c in 0..=used {
            if c == used && used + 1 >= self.best.num_colors {
                break;
            }
            if c < used && self.neighbour_colors[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            let done = self.run(colored + 1, used.max(c + 1));
            self.unassign(v);
            if done {
                return true;
            }
        }
        false
    }
}

/// Exhaustive optimum over femtocache independent sets and MBS colorings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffloadSolution {
    /// Clients served by each femtocache, ascending; pairwise disjoint.
    pub fc_sets: Vec<Vec<usize>>,
    /// Clients of each MBS transmission, ascending.
    pub mbs_classes: Vec<Vec<usize>>,
    pub n_mbs: usize,
}

/// Minimises the MBS transmissions over every choice of disjoint per-FC
/// decodable client groups, where each group is served by one coded (or
/// uncoded) femtocache transmission and the rest by an optimal MBS coloring.
///
/// Works on client bitmasks: χ of every client subset by subset DP, then the
/// set of client masks the femtocaches can jointly serve.
pub fn optimal_offload(scenario: &Scenario, caps: &SolverCaps) -> Result<OffloadSolution> {
    let u = scenario.num_clients();
    let c = scenario.num_fcs();
    if u > caps.offload_clients {
        return Err(Error::SolverLimit { solver: "optimal_offload", size: u, cap: caps.offload_clients });
    }
    if c > caps.offload_fcs {
        return Err(Error::SolverLimit { solver: "optimal_offload", size: c, cap: caps.offload_fcs });
    }
    let cg = ConflictGraph::for_scenario(scenario);
    let g = cg.graph();
    let full: usize = (1 << u) - 1;
    let size = 1usize << u;

    let nbr: Vec<usize> = (0..u).map(|v| g.neighbors(v).fold(0, |m, w| m | (1 << w))).collect();
    let mut independent = vec![false; size];
    independent[0] = true;
    for m in 1..size {
        let v = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        independent[m] = independent[rest] && nbr[v] & rest == 0;
    }

    // chi[m] and the color class containing m's lowest client
    let mut chi = vec![0u8; size];
    let mut class_of = vec![0usize; size];
    for m in 1..size {
        let low = m & m.wrapping_neg();
        let rest = m ^ low;
        let mut best = u8::MAX;
        let mut best_class = 0;
        let mut s = rest;
        loop {
            let class = s | low;
            if independent[class] {
                let cost = chi[m ^ class] + 1;
                if cost < best {
                    best = cost;
                    best_class = class;
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        chi[m] = best;
        class_of[m] = best_class;
    }

    // reach[i][m]: the group fc i-1 serves on the way to mask m, and the
    // most coded groups any decomposition of m over the first i FCs uses
    let mut reach: Vec<Vec<Option<(usize, u32)>>> = vec![vec![None; size]; c + 1];
    reach[0][0] = Some((0, 0));
    for i in 0..c {
        let feasible = (0..u).filter(|&j| scenario.can_serve(i, j)).fold(0usize, |m, j| m | (1 << j));
        let mut groups = Vec::new();
        let mut s = feasible;
        loop {
            if independent[s] {
                let coded = scenario.distinct_wants(bits(s)).len() >= 2;
                groups.push((s, coded as u32));
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & feasible;
        }
        groups.sort_unstable();
        let (done, rest) = reach.split_at_mut(i + 1);
        for m in 0..size {
            let Some((_, coded)) = done[i][m] else { continue };
            for &(grp, c) in &groups {
                if m & grp != 0 {
                    continue;
                }
                let slot = &mut rest[0][m | grp];
                if slot.is_none_or(|(_, best)| coded + c > best) {
                    *slot = Some((grp, coded + c));
                }
            }
        }
    }

    // ties prefer coded femtocache transmissions, then more clients offloaded
    let best_served = (0..size)
        .filter_map(|m| reach[c][m].map(|(_, coded)| (m, coded)))
        .min_by_key(|&(m, coded)| (chi[full ^ m], std::cmp::Reverse(coded), std::cmp::Reverse(m.count_ones()), m))
        .map(|(m, _)| m)
        .expect("the empty plan is always reachable");

    let mut fc_sets = vec![Vec::new(); c];
    let mut m = best_served;
    for i in (0..c).rev() {
        let (grp, _) = reach[i + 1][m].expect("parent pointer");
        fc_sets[i] = bits(grp);
        m ^= grp;
    }
    let mut mbs_classes = Vec::new();
    let mut residual = full ^ best_served;
    while residual != 0 {
        let class = class_of[residual];
        mbs_classes.push(bits(class));
        residual ^= class;
    }
    Ok(OffloadSolution { fc_sets, n_mbs: chi[full ^ best_served] as usize, mbs_classes })
}

fn bits(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&b| mask >> b & 1 == 1).collect()
}
