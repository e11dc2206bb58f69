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

//! Network-coded macrocell offloading with femtocaches.
//!
//! Clients hold some library files and request one more. Femtocaches near
//! them cache part of the library and can serve requests with XOR-coded
//! transmissions that every targeted client decodes from what it already
//! holds; the macrocell base station (MBS) serves the rest. The goal is to
//! minimise MBS transmissions.
//!
//! * [`model`]: scenarios, coverage, cache placement, random generation.
//! * [`graphs`]: MBS conflict graphs and femtocache dual conflict graphs.
//! * [`solvers`]: exact and greedy independent sets and colorings, and the
//!   exhaustive optimal offload.
//! * [`scheduler`]: the ONC-broadcast scheduler and its baselines.
//! * [`theory`]: random-graph predictions and bounds.
//! * [`sim`]: seeded Monte-Carlo sweeps.

// negated float comparisons in this crate are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod graph;
pub mod graphs;
pub mod model;
pub mod scheduler;
pub mod sim;
pub mod solvers;
pub mod theory;

pub use error::{Error, Result};
pub use graph::UndirectedGraph;
pub use graphs::{build_conflict_graph, build_dual_conflict_graph, residual_graph, ConflictGraph, DualConflictGraph, DualVertex, Request};
pub use model::{
    generate_scenario, systematic_placement, Client, FcLayout, Femtocache, FileId, FileSet, PlacementPlan, Point, Scenario,
    ScenarioParams,
};
pub use scheduler::{
    baseline_no_fc, onc_broadcast_schedule, schedule, separate_graph_schedule, verify_schedule, FcMode, FcSolver, MbsColoring,
    ScheduleResult, Scheme, SchedulerPolicy, Sender, Transmission,
};
pub use sim::{run_sweep, MetricRow, SweepSpec, SweepVar};
pub use solvers::{chromatic_exact, coloring_exact, ggc, gvs, mis_exact, optimal_offload, Coloring, OffloadSolution, SolverCaps};
pub use theory::{TheoryEstimate, TheoryParams};
