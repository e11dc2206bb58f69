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

//! Femtocache and MBS transmission scheduling.
//!
//! The ONC-broadcast scheduler evaluates four plans and keeps the cheapest:
//!
//! 1. femtocaches broadcast one uncoded file each, the MBS sends every
//!    remaining wanted file uncoded;
//! 2. femtocache broadcast, then an MBS coloring of the residual graph;
//! 3. coded femtocache delivery from the dual graph, then uncoded MBS files;
//! 4. coded femtocache delivery, then an MBS coloring.
//!
//! Every plan carries its full transmission list, so costs are the number of
//! MBS transmissions actually scheduled.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graphs::{build_dual_conflict_graph, coding_conflict, ConflictGraph};
use crate::model::{FileId, Scenario};
use crate::solvers::{coloring_exact, ggc, gvs, mis_exact, Coloring, OffloadSolution, SolverCaps};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FcSolver {
    Exact,
    Gvs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MbsColoring {
    Exact,
    Ggc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FcMode {
    /// Minimum over all four plans.
    OncBroadcast,
    /// Coded femtocache delivery only (plans 3 and 4).
    DualGraphOnly,
    /// Each femtocache solves its own conflict graph; clashes go to the
    /// lowest femtocache id.
    SeparateGraph,
    /// Uncoded femtocache broadcast only (plans 1 and 2).
    BroadcastOnly,
}

impl FcMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FcMode::OncBroadcast => "onc-broadcast",
            FcMode::DualGraphOnly => "dual-graph-only",
            FcMode::SeparateGraph => "separate-graph",
            FcMode::BroadcastOnly => "broadcast-only",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchedulerPolicy {
    pub fc_solver: FcSolver,
    pub mbs_coloring: MbsColoring,
    pub fc_mode: FcMode,
    pub caps: SolverCaps,
    pub gvs_weight_over_neighbors: bool,
}

impl SchedulerPolicy {
    pub fn new(fc_mode: FcMode, fc_solver: FcSolver, mbs_coloring: MbsColoring) -> Self {
        SchedulerPolicy {
            fc_solver,
            mbs_coloring,
            fc_mode,
            caps: SolverCaps::default(),
            gvs_weight_over_neighbors: false,
        }
    }

    pub fn gvs_ggc() -> Self {
        Self::new(FcMode::OncBroadcast, FcSolver::Gvs, MbsColoring::Ggc)
    }

    pub fn exact() -> Self {
        Self::new(FcMode::OncBroadcast, FcSolver::Exact, MbsColoring::Exact)
    }

    pub fn with_caps(mut self, caps: SolverCaps) -> Self {
        self.caps = caps;
        self
    }

    /// Preset name when one matches, otherwise `mode:solver:coloring`.
    pub fn name(&self) -> String {
        use {FcMode::*, FcSolver as S, MbsColoring as M};
        match (self.fc_mode, self.fc_solver, self.mbs_coloring) {
            (OncBroadcast, S::Gvs, M::Ggc) => "gvs-ggc".into(),
            (OncBroadcast, S::Exact, M::Exact) => "exact".into(),
            (DualGraphOnly, S::Gvs, M::Ggc) => "dual-gvs-ggc".into(),
            (SeparateGraph, S::Gvs, M::Ggc) => "separate-gvs-ggc".into(),
            (BroadcastOnly, S::Gvs, M::Ggc) => "broadcast-ggc".into(),
            (mode, solver, coloring) => format!(
                "{}:{}:{}",
                mode.as_str(),
                if solver == S::Exact { "exact" } else { "gvs" },
                if coloring == M::Exact { "exact" } else { "ggc" }
            ),
        }
    }
}

impl FromStr for SchedulerPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use {FcMode::*, FcSolver as S, MbsColoring as M};
        let preset = match s {
            "gvs-ggc" => Some((OncBroadcast, S::Gvs, M::Ggc)),
            "exact" => Some((OncBroadcast, S::Exact, M::Exact)),
            "dual-gvs-ggc" => Some((DualGraphOnly, S::Gvs, M::Ggc)),
            "separate-gvs-ggc" => Some((SeparateGraph, S::Gvs, M::Ggc)),
            "broadcast-ggc" => Some((BroadcastOnly, S::Gvs, M::Ggc)),
            _ => None,
        };
        if let Some((m, f, c)) = preset {
            return Ok(Self::new(m, f, c));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidConfiguration(format!("unknown policy `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mode = match parts[0] {
            "onc-broadcast" => OncBroadcast,
            "dual-graph-only" => DualGraphOnly,
            "separate-graph" => SeparateGraph,
            "broadcast-only" => BroadcastOnly,
            _ => return Err(bad()),
        };
        let solver = match parts[1] {
            "exact" => S::Exact,
            "gvs" => S::Gvs,
            _ => return Err(bad()),
        };
        let coloring = match parts[2] {
            "exact" => M::Exact,
            "ggc" => M::Ggc,
            _ => return Err(bad()),
        };
        Ok(Self::new(mode, solver, coloring))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sender {
    Fc(usize),
    Mbs,
}

/// One transmission: the XOR of `files`, decoded by each client in `serves`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub sender: Sender,
    pub files: Vec<FileId>,
    pub serves: Vec<usize>,
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sender {
            Sender::Fc(i) => write!(f, "fc {} ", i + 1)?,
            Sender::Mbs => write!(f, "mbs ")?,
        }
        let verb = if self.files.len() > 1 { "xor" } else { "send" };
        let files: Vec<String> = self.files.iter().map(|k| k.to_string()).collect();
        let clients: Vec<String> = self.serves.iter().map(|j| format!("u{}", j + 1)).collect();
        write!(f, "{verb} {} serves {}", files.join(","), clients.join(","))
    }
}

/// The four candidate plans of the ONC-broadcast scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    BroadcastUncoded = 1,
    BroadcastColoring = 2,
    OncUncoded = 3,
    OncColoring = 4,
}

impl Scheme {
    pub fn number(&self) -> u8 {
        *self as u8
    }
}

/// Side quantities recorded while scheduling.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Clients served by the uncoded femtocache broadcast plan.
    pub n_fc_broadcast: Option<usize>,
    /// Clients served by the coded femtocache plan.
    pub n_fc_onc: Option<usize>,
    /// Clients left for the MBS by the chosen femtocache plan.
    pub residual_clients: usize,
    /// Colors used on that residual graph.
    pub residual_colors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleResult {
    pub transmissions: Vec<Transmission>,
    pub n_fc: usize,
    pub n_mbs: usize,
    pub chosen_scheme: Option<Scheme>,
    pub diagnostics: Diagnostics,
}

impl ScheduleResult {
    /// One transmission per line followed by the summary counts.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for t in &self.transmissions {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out.push_str(&format!("n_fc {}\n", self.n_fc));
        out.push_str(&format!("n_mbs {}\n", self.n_mbs));
        match self.chosen_scheme {
            Some(s) => out.push_str(&format!("scheme {}\n", s.number())),
            None => out.push_str("scheme none\n"),
        }
        out
    }
}

/// Femtocache side of a plan: at most one transmission per femtocache.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcPlan {
    pub transmissions: Vec<Transmission>,
    served: FixedBitSet,
}

impl FcPlan {
    pub fn served(&self) -> &FixedBitSet {
        &self.served
    }

    pub fn num_served(&self) -> usize {
        self.served.count_ones(..)
    }

    /// Broadcast file of each femtocache, if it sends one.
    pub fn broadcast_files(&self, num_fcs: usize) -> Vec<Option<FileId>> {
        let mut files = vec![None; num_fcs];
        for t in &self.transmissions {
            if let (Sender::Fc(i), [k]) = (t.sender, t.files.as_slice()) {
                files[i] = Some(*k);
            }
        }
        files
    }

    fn from_groups(scenario: &Scenario, groups: Vec<(usize, Vec<usize>)>) -> Self {
        let mut served = FixedBitSet::with_capacity(scenario.num_clients());
        let mut transmissions = Vec::new();
        for (i, mut clients) in groups {
            if clients.is_empty() {
                continue;
            }
            clients.sort_unstable();
            for &j in &clients {
                served.insert(j);
            }
            let files = scenario.distinct_wants(clients.iter().copied());
            transmissions.push(Transmission { sender: Sender::Fc(i), files, serves: clients });
        }
        FcPlan { transmissions, served }
    }
}

/// Uncoded broadcast: femtocaches in id order each broadcast the cached file
/// wanted by the most covered clients not yet claimed (lowest file on ties),
/// and stay silent when no such client exists.
pub fn fc_broadcast_plan(scenario: &Scenario) -> FcPlan {
    let f = scenario.num_files();
    let mut claimed = FixedBitSet::with_capacity(scenario.num_clients());
    let mut groups = Vec::new();
    for (i, fc) in scenario.fcs().iter().enumerate() {
        let mut counts = vec![0usize; f];
        for c in scenario.clients() {
            if !claimed.contains(c.id) && fc.cache.contains(c.wants) && fc.covers(&c.position) {
                counts[c.wants.0] += 1;
            }
        }
        let Some((k, &n)) = counts.iter().enumerate().max_by_key(|&(k, &n)| (n, std::cmp::Reverse(k))) else {
            continue;
        };
        if n == 0 {
            continue;
        }
        let clients: Vec<usize> = scenario
            .clients()
            .iter()
            .filter(|c| !claimed.contains(c.id) && c.wants.0 == k && fc.covers(&c.position))
            .map(|c| c.id)
            .collect();
        for &j in &clients {
            claimed.insert(j);
        }
        groups.push((i, clients));
    }
    FcPlan::from_groups(scenario, groups)
}

fn independent_set(g: &crate::graph::UndirectedGraph, policy: &SchedulerPolicy) -> Result<Vec<usize>> {
    match policy.fc_solver {
        FcSolver::Exact => mis_exact(g, policy.caps.mis_exact),
        FcSolver::Gvs => Ok(gvs(g, policy.gvs_weight_over_neighbors)),
    }
}

/// Coded femtocache delivery: an independent set of the dual conflict graph,
/// split by femtocache into one XOR transmission each.
pub fn fc_onc_plan(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<FcPlan> {
    let dual = build_dual_conflict_graph(scenario);
    let chosen = independent_set(dual.graph(), policy)?;
    let mut groups: Vec<(usize, Vec<usize>)> = (0..scenario.num_fcs()).map(|i| (i, Vec::new())).collect();
    for v in chosen {
        let dv = dual.vertices()[v];
        groups[dv.fc].1.push(dv.client);
    }
    Ok(FcPlan::from_groups(scenario, groups))
}

/// Separate graphs: each femtocache picks an independent set of the conflict
/// graph over the requests it can serve, ignoring the others. A client picked
/// by several femtocaches is served by the lowest id; the other picks are
/// wasted but their files stay in the transmitted XOR.
pub fn separate_graph_plan(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<FcPlan> {
    let mut served = FixedBitSet::with_capacity(scenario.num_clients());
    let mut transmissions = Vec::new();
    for i in 0..scenario.num_fcs() {
        let servable: Vec<usize> = (0..scenario.num_clients()).filter(|&j| scenario.can_serve(i, j)).collect();
        let cg = ConflictGraph::for_clients(scenario, servable);
        let picks: Vec<usize> = independent_set(cg.graph(), policy)?.into_iter().map(|v| cg.vertices()[v].0).collect();
        if picks.is_empty() {
            continue;
        }
        let files = scenario.distinct_wants(picks.iter().copied());
        let serves: Vec<usize> = picks.into_iter().filter(|&j| !served.contains(j)).collect();
        for &j in &serves {
            served.insert(j);
        }
        transmissions.push(Transmission { sender: Sender::Fc(i), files, serves });
    }
    Ok(FcPlan { transmissions, served })
}

/// Forced femtocache plan: femtocache `i` sends the XOR of the given files
/// and serves every covered, not yet served client that decodes it.
pub fn forced_fc_plan(scenario: &Scenario, plan: &[(usize, Vec<FileId>)]) -> Result<FcPlan> {
    let mut served = FixedBitSet::with_capacity(scenario.num_clients());
    let mut transmissions = Vec::new();
    let mut order: Vec<&(usize, Vec<FileId>)> = plan.iter().collect();
    order.sort_by_key(|(i, _)| *i);
    if order.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidInput("a femtocache appears twice in the forced plan".into()));
    }
    for (i, files) in order {
        let fc = scenario
            .fcs()
            .get(*i)
            .ok_or_else(|| Error::InvalidInput(format!("no femtocache {}", i + 1)))?;
        let mut files = files.clone();
        files.sort_unstable();
        files.dedup();
        if let Some(k) = files.iter().find(|k| !fc.cache.contains(**k)) {
            return Err(Error::InvalidInput(format!("femtocache {} does not cache {k}", i + 1)));
        }
        let serves: Vec<usize> = scenario
            .clients()
            .iter()
            .filter(|c| !served.contains(c.id) && fc.covers(&c.position) && decodes(&files, c.wants, &c.has))
            .map(|c| c.id)
            .collect();
        for &j in &serves {
            served.insert(j);
        }
        transmissions.push(Transmission { sender: Sender::Fc(*i), files, serves });
    }
    Ok(FcPlan { transmissions, served })
}

/// Parses `1:f1+f6;2:f2` (1-based femtocaches, `f` prefix optional).
pub fn parse_forced_plan(text: &str) -> Result<Vec<(usize, Vec<FileId>)>> {
    let bad = |m: String| Error::InvalidInput(format!("forced plan `{text}`: {m}"));
    let mut plan = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (fc, files) = item.split_once(':').ok_or_else(|| bad(format!("`{item}` lacks `:`")))?;
        let fc: usize = fc.trim().parse().map_err(|_| bad(format!("bad femtocache `{fc}`")))?;
        if fc == 0 {
            return Err(bad("femtocaches are 1-based".into()));
        }
        let files = files
            .split('+')
            .map(|k| {
                let k = k.trim();
                match k.trim_start_matches('f').parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(FileId(n - 1)),
                    _ => Err(bad(format!("bad file `{k}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        plan.push((fc - 1, files));
    }
    Ok(plan)
}

fn decodes(files: &[FileId], wants: FileId, has: &crate::model::FileSet) -> bool {
    files.contains(&wants) && files.iter().all(|&k| k == wants || has.contains(k))
}

/// MBS coloring of the residual clients under the policy.
fn color_residual(scenario: &Scenario, clients: &[usize], policy: &SchedulerPolicy) -> Result<(ConflictGraph, Coloring)> {
    let cg = ConflictGraph::for_clients(scenario, clients.iter().copied());
    let coloring = match policy.mbs_coloring {
        MbsColoring::Exact => coloring_exact(cg.graph(), policy.caps.chromatic_exact)?,
        MbsColoring::Ggc => ggc(cg.graph()),
    };
    Ok((cg, coloring))
}

fn coloring_transmissions(scenario: &Scenario, cg: &ConflictGraph, coloring: &Coloring) -> Vec<Transmission> {
    coloring
        .classes()
        .into_iter()
        .map(|class| {
            let serves: Vec<usize> = class.iter().map(|&v| cg.vertices()[v].0).collect();
            let files = scenario.distinct_wants(serves.iter().copied());
            Transmission { sender: Sender::Mbs, files, serves }
        })
        .collect()
}

fn uncoded_transmissions(scenario: &Scenario, clients: &[usize]) -> Vec<Transmission> {
    scenario
        .distinct_wants(clients.iter().copied())
        .into_iter()
        .map(|k| Transmission {
            sender: Sender::Mbs,
            files: vec![k],
            serves: clients.iter().copied().filter(|&j| scenario.clients()[j].wants == k).collect(),
        })
        .collect()
}

struct Candidate {
    scheme: Scheme,
    fc: FcPlan,
    mbs: Vec<Transmission>,
    residual_clients: usize,
    residual_colors: usize,
}

/// Both MBS options (coloring, uncoded) after one femtocache plan.
fn mbs_candidates(
    scenario: &Scenario,
    fc: FcPlan,
    policy: &SchedulerPolicy,
    coloring_scheme: Scheme,
    uncoded_scheme: Scheme,
) -> Result<[Candidate; 2]> {
    let residual: Vec<usize> = (0..scenario.num_clients()).filter(|&j| !fc.served.contains(j)).collect();
    let (cg, coloring) = color_residual(scenario, &residual, policy)?;
    let colored = coloring_transmissions(scenario, &cg, &coloring);
    let uncoded = uncoded_transmissions(scenario, &residual);
    let colors = coloring.num_colors();
    Ok([
        Candidate {
            scheme: coloring_scheme,
            fc: fc.clone(),
            mbs: colored,
            residual_clients: residual.len(),
            residual_colors: colors,
        },
        Candidate { scheme: uncoded_scheme, fc, mbs: uncoded, residual_clients: residual.len(), residual_colors: colors },
    ])
}

/// Preference among equal-cost plans: coded before uncoded at each node.
fn preference(s: Scheme) -> u8 {
    match s {
        Scheme::OncColoring => 0,
        Scheme::BroadcastColoring => 1,
        Scheme::OncUncoded => 2,
        Scheme::BroadcastUncoded => 3,
    }
}

fn finish(best: Candidate, diagnostics: Diagnostics) -> ScheduleResult {
    let n_fc = best.fc.num_served();
    let n_mbs = best.mbs.len();
    let mut transmissions = best.fc.transmissions;
    transmissions.extend(best.mbs);
    ScheduleResult {
        transmissions,
        n_fc,
        n_mbs,
        chosen_scheme: Some(best.scheme),
        diagnostics: Diagnostics {
            residual_clients: best.residual_clients,
            residual_colors: best.residual_colors,
            ..diagnostics
        },
    }
}

/// Schedules under `policy.fc_mode`, keeping the cheapest candidate plan.
pub fn schedule(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<ScheduleResult> {
    let mut candidates = Vec::with_capacity(4);
    let mut diagnostics = Diagnostics::default();
    let broadcast = matches!(policy.fc_mode, FcMode::OncBroadcast | FcMode::BroadcastOnly);
    let coded = matches!(policy.fc_mode, FcMode::OncBroadcast | FcMode::DualGraphOnly);
    if coded {
        let plan = fc_onc_plan(scenario, policy)?;
        diagnostics.n_fc_onc = Some(plan.num_served());
        candidates.extend(mbs_candidates(scenario, plan, policy, Scheme::OncColoring, Scheme::OncUncoded)?);
    }
    if broadcast {
        let plan = fc_broadcast_plan(scenario);
        diagnostics.n_fc_broadcast = Some(plan.num_served());
        candidates.extend(mbs_candidates(
            scenario,
            plan,
            policy,
            Scheme::BroadcastColoring,
            Scheme::BroadcastUncoded,
        )?);
    }
    if policy.fc_mode == FcMode::SeparateGraph {
        let plan = separate_graph_plan(scenario, policy)?;
        diagnostics.n_fc_onc = Some(plan.num_served());
        candidates.extend(mbs_candidates(scenario, plan, policy, Scheme::OncColoring, Scheme::OncUncoded)?);
    }
    let best = candidates
        .into_iter()
        .min_by_key(|c| (c.mbs.len(), preference(c.scheme)))
        .expect("every mode yields candidates");
    Ok(finish(best, diagnostics))
}

/// The four-way ONC-broadcast scheme regardless of `policy.fc_mode`.
pub fn onc_broadcast_schedule(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<ScheduleResult> {
    schedule(scenario, &SchedulerPolicy { fc_mode: FcMode::OncBroadcast, ..*policy })
}

/// Separate-graph baseline regardless of `policy.fc_mode`.
pub fn separate_graph_schedule(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<ScheduleResult> {
    schedule(scenario, &SchedulerPolicy { fc_mode: FcMode::SeparateGraph, ..*policy })
}

/// Schedule with a fixed femtocache plan and the cheaper MBS option.
pub fn forced_fc_schedule(
    scenario: &Scenario,
    plan: &[(usize, Vec<FileId>)],
    policy: &SchedulerPolicy,
) -> Result<ScheduleResult> {
    let fc = forced_fc_plan(scenario, plan)?;
    let best = mbs_candidates(scenario, fc, policy, Scheme::OncColoring, Scheme::OncUncoded)?
        .into_iter()
        .min_by_key(|c| (c.mbs.len(), preference(c.scheme)))
        .expect("two candidates");
    let mut result = finish(best, Diagnostics::default());
    result.chosen_scheme = None;
    Ok(result)
}

/// Converts an exhaustive optimum into a schedule.
pub fn schedule_from_offload(scenario: &Scenario, solution: &OffloadSolution) -> ScheduleResult {
    let groups = solution.fc_sets.iter().cloned().enumerate().collect();
    let fc = FcPlan::from_groups(scenario, groups);
    let mbs: Vec<Transmission> = solution
        .mbs_classes
        .iter()
        .map(|class| Transmission {
            sender: Sender::Mbs,
            files: scenario.distinct_wants(class.iter().copied()),
            serves: class.clone(),
        })
        .collect();
    let residual = scenario.num_clients() - fc.num_served();
    let result = Candidate {
        scheme: Scheme::OncColoring,
        residual_clients: residual,
        residual_colors: mbs.len(),
        fc,
        mbs,
    };
    let mut out = finish(result, Diagnostics::default());
    out.chosen_scheme = None;
    out
}

/// MBS transmissions without femtocaches: a coloring of the full conflict
/// graph, or one uncoded transmission per distinct wanted file if fewer.
pub fn baseline_no_fc(scenario: &Scenario, policy: &SchedulerPolicy) -> Result<usize> {
    let all: Vec<usize> = (0..scenario.num_clients()).collect();
    let (_, coloring) = color_residual(scenario, &all, policy)?;
    Ok(coloring.num_colors().min(scenario.distinct_wants(all).len()))
}

/// Checks a schedule against the scenario directly, without the graph code:
/// senders hold the files they XOR, femtocaches reach the clients they serve,
/// every served client decodes its file, and every client is served once.
pub fn verify_schedule(scenario: &Scenario, result: &ScheduleResult) -> std::result::Result<(), String> {
    let mut times_served = vec![0usize; scenario.num_clients()];
    let mut fc_sends = vec![0usize; scenario.num_fcs()];
    let mut n_fc = 0;
    let mut n_mbs = 0;
    for t in &result.transmissions {
        if t.files.is_empty() {
            return Err(format!("`{t}` sends nothing"));
        }
        if let Sender::Fc(i) = t.sender {
            let fc = scenario.fcs().get(i).ok_or_else(|| format!("`{t}` names a missing femtocache"))?;
            fc_sends[i] += 1;
            if fc_sends[i] > 1 {
                return Err(format!("femtocache {} transmits twice", i + 1));
            }
            if let Some(k) = t.files.iter().find(|k| !fc.cache.contains(**k)) {
                return Err(format!("`{t}`: {k} is not cached"));
            }
        } else {
            n_mbs += 1;
        }
        for &j in &t.serves {
            let c = scenario.clients().get(j).ok_or_else(|| format!("`{t}` names a missing client"))?;
            if let Sender::Fc(i) = t.sender {
                let fc = &scenario.fcs()[i];
                let d2 = (c.position.x - fc.position.x).powi(2) + (c.position.y - fc.position.y).powi(2);
                if d2 > fc.radius * fc.radius {
                    return Err(format!("`{t}`: u{} is out of range", j + 1));
                }
                n_fc += 1;
            }
            if !t.files.contains(&c.wants) {
                return Err(format!("`{t}`: u{} wants {}", j + 1, c.wants));
            }
            if let Some(k) = t.files.iter().find(|&&k| k != c.wants && !c.has.contains(k)) {
                return Err(format!("`{t}`: u{} lacks {k} and cannot decode", j + 1));
            }
            times_served[j] += 1;
        }
    }
    if let Some(j) = times_served.iter().position(|&n| n != 1) {
        return Err(format!("u{} is served {} times", j + 1, times_served[j]));
    }
    if n_fc != result.n_fc || n_mbs != result.n_mbs {
        return Err(format!(
            "counts disagree: reported n_fc={} n_mbs={}, found {n_fc} and {n_mbs}",
            result.n_fc, result.n_mbs
        ));
    }
    Ok(())
}

/// Whether two clients of `scenario` may share one transmission.
pub fn compatible(scenario: &Scenario, a: usize, b: usize) -> bool {
    let (ca, cb) = (&scenario.clients()[a], &scenario.clients()[b]);
    !coding_conflict(ca.wants, &ca.has, cb.wants, &cb.has)
}
