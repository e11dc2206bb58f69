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

#![allow(dead_code)]

use onc_core::{FcLayout, ScenarioParams, UndirectedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn graph_from_bits(n: usize, bits: &[bool]) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(n);
    let mut it = bits.iter();
    for u in 0..n {
        for v in u + 1..n {
            if *it.next().unwrap() {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Largest independent set size by checking every vertex subset.
pub fn brute_force_mis(g: &UndirectedGraph) -> usize {
    let n = g.num_vertices();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0, |m, u| m | 1 << u)).collect();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn k_colorable(g: &UndirectedGraph, k: usize, v: usize, colors: &mut Vec<usize>) -> bool {
    if v == g.num_vertices() {
        return true;
    }
    for c in 0..k {
        if g.neighbors(v).filter(|&u| u < v).all(|u| colors[u] != c) {
            colors[v] = c;
            if k_colorable(g, k, v + 1, colors) {
                return true;
            }
        }
    }
    false
}

/// Smallest k for which some assignment of k colors is proper.
pub fn brute_force_chromatic(g: &UndirectedGraph) -> usize {
    let n = g.num_vertices();
    (0..=n).find(|&k| k_colorable(g, k, 0, &mut vec![0; n])).unwrap()
}

pub fn small_network(u: usize, fc_radius: f64, seed: u64) -> ScenarioParams {
    ScenarioParams {
        num_files: 10,
        num_fcs: 2,
        num_clients: u,
        sigma_u: 0.1,
        sigma_c: 0.7,
        fc_radius,
        mbs_radius: 60.0,
        fc_layout: FcLayout::UniformRandom,
        seed,
    }
}
