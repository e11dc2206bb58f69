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


//! Invariant checks behind `onc validate`.

use onc_core::graph::UndirectedGraph;
use onc_core::model::{generate_scenario, ScenarioParams};
use onc_core::scheduler::{baseline_no_fc, schedule, verify_schedule};
use onc_core::sim::{empirical_edge_density, run_sweep, trial_seed, GraphKind, SweepSpec, SweepVar};
use onc_core::solvers::{chromatic_exact, mis_exact};
use onc_core::theory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CliError, Config};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

const ORACLE_GRAPHS: usize = 50;

pub fn run_checks(cfg: &Config) -> Result<Vec<Check>, CliError> {
    let params = cfg.scenario_params();
    // surface configuration errors before any statistics run
    generate_scenario(&params)?;
    Ok(vec![
        mbs_density(cfg, &params)?,
        dual_density(cfg, &params)?,
        broadcast_bound(cfg, &params)?,
        chi_monotone(cfg),
        mis_oracle(cfg.seed),
        chromatic_oracle(cfg.seed),
        schedules_verify(cfg, &params)?,
    ])
}

fn mbs_density(cfg: &Config, params: &ScenarioParams) -> Result<Check, CliError> {
    let name = "mbs_edge_density";
    if params.num_clients < 2 {
        return Ok(Check { name, status: Status::Skip, detail: "needs at least two clients".into() });
    }
    let (mean, _) = empirical_edge_density(params, GraphKind::Mbs, cfg.validate_trials)?;
    let pi = theory::pi_mbs(params.num_clients as f64, params.num_files, params.sigma_u)?;
    let diff = (mean - pi).abs();
    Ok(Check {
        name,
        status: Status::of(diff <= cfg.density_tolerance),
        detail: format!("empirical {mean:.4} theory {pi:.4} |diff| {diff:.4} tolerance {}", cfg.density_tolerance),
    })
}

fn dual_density(cfg: &Config, params: &ScenarioParams) -> Result<Check, CliError> {
    let name = "dual_edge_density";
    let tp = cfg.theory_params(params);
    if tp.repetition().is_err() {
        return Ok(Check { name, status: Status::Skip, detail: "repetition index is not an integer".into() });
    }
    let pi = if params.full_coverage() {
        theory::pi_dual_full_coverage(&tp)
    } else {
        theory::pi_dual_general(&tp)
    };
    let pi = match pi {
        Ok(p) => p,
        Err(e) => return Ok(Check { name, status: Status::Skip, detail: e.to_string() }),
    };
    let (mean, _) = match empirical_edge_density(params, GraphKind::Dual, cfg.validate_trials) {
        Ok(m) => m,
        Err(onc_core::Error::InsufficientData(e)) => return Ok(Check { name, status: Status::Skip, detail: e }),
        Err(e) => return Err(e.into()),
    };
    let diff = (mean - pi).abs();
    Ok(Check {
        name,
        status: Status::of(diff <= cfg.dual_density_tolerance),
        detail: format!("empirical {mean:.4} theory {pi:.4} |diff| {diff:.4} tolerance {}", cfg.dual_density_tolerance),
    })
}

fn broadcast_bound(cfg: &Config, params: &ScenarioParams) -> Result<Check, CliError> {
    let spec = SweepSpec {
        base: params.clone(),
        sweep_var: SweepVar::NumClients,
        values: vec![params.num_clients as f64],
        trials: cfg.validate_trials,
        policies: vec![cfg.schedule_policy()],
        seed: cfg.seed,
    };
    let row = run_sweep(&spec)?.remove(0);
    let (Some(b), Some(onc), Some(se)) = (row.mean_n_fc_broadcast, row.mean_n_fc_onc, row.stderr_n_fc_onc) else {
        return Ok(Check { name: "broadcast_lower_bound", status: Status::Skip, detail: "no femtocache diagnostics".into() });
    };
    Ok(Check {
        name: "broadcast_lower_bound",
        status: Status::of(b <= onc + 2.0 * se),
        detail: format!("broadcast served {b:.3} <= onc served {onc:.3} + 2*{se:.3}"),
    })
}

fn chi_monotone(cfg: &Config) -> Check {
    let f = |nu: f64| theory::chi_estimate(nu, cfg.num_files, cfg.sigma_u, cfg.o2);
    let bad = (2..10_000).find(|&n| f(n as f64 + 1.0) <= f(n as f64));
    Check {
        name: "chi_monotone",
        status: Status::of(bad.is_none()),
        detail: match bad {
            None => "chi estimate strictly increasing for 2 <= nu <= 10000".into(),
            Some(n) => format!("chi({}) = {:.4} <= chi({n}) = {:.4}", n + 1, f(n as f64 + 1.0), f(n as f64)),
        },
    }
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> UndirectedGraph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.9);
    let mut g = UndirectedGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

fn brute_mis(g: &UndirectedGraph) -> usize {
    let n = g.num_vertices();
    (0u32..1 << n)
        .filter(|&m| (0..n).all(|a| m >> a & 1 == 0 || (a + 1..n).all(|b| m >> b & 1 == 0 || !g.has_edge(a, b))))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn brute_chromatic(g: &UndirectedGraph) -> usize {
    fn fits(g: &UndirectedGraph, k: usize, colors: &mut Vec<usize>) -> bool {
        let v = colors.len();
        if v == g.num_vertices() {
            return true;
        }
        for c in 0..k {
            if (0..v).all(|u| colors[u] != c || !g.has_edge(u, v)) {
                colors.push(c);
                if fits(g, k, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    (0..=g.num_vertices()).find(|&k| fits(g, k, &mut Vec::new())).unwrap_or(g.num_vertices())
}

fn mis_oracle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 1, 0));
    let mismatches = (0..ORACLE_GRAPHS)
        .filter(|_| {
            let g = random_graph(&mut rng, 12);
            mis_exact(&g, 64).map(|s| s.len()).ok() != Some(brute_mis(&g))
        })
        .count();
    Check {
        name: "mis_oracle",
        status: Status::of(mismatches == 0),
        detail: format!("{mismatches} mismatches on {ORACLE_GRAPHS} graphs"),
    }
}

fn chromatic_oracle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 2, 0));
    let mismatches = (0..ORACLE_GRAPHS)
        .filter(|_| {
            let g = random_graph(&mut rng, 9);
            chromatic_exact(&g, 64).ok() != Some(brute_chromatic(&g))
        })
        .count();
    Check {
        name: "chromatic_oracle",
        status: Status::of(mismatches == 0),
        detail: format!("{mismatches} mismatches on {ORACLE_GRAPHS} graphs"),
    }
}

fn schedules_verify(cfg: &Config, params: &ScenarioParams) -> Result<Check, CliError> {
    let policy = cfg.schedule_policy();
    let mut problems = Vec::new();
    for t in 0..cfg.validate_trials {
        let s = generate_scenario(&ScenarioParams { seed: trial_seed(cfg.seed, 3, t), ..params.clone() })?;
        let r = match schedule(&s, &policy) {
            Ok(r) => r,
            Err(onc_core::Error::SolverLimit { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        if let Err(e) = verify_schedule(&s, &r) {
            problems.push(format!("trial {t}: {e}"));
        } else if r.n_mbs > baseline_no_fc(&s, &policy)? {
            problems.push(format!("trial {t}: n_mbs {} above the no-femtocache baseline", r.n_mbs));
        }
    }
    Ok(Check {
        name: "schedule_verification",
        status: Status::of(problems.is_empty()),
        detail: match problems.first() {
            None => format!("{} schedules verified with {}", cfg.validate_trials, policy.name()),
            Some(p) => format!("{} bad schedules, first {p}", problems.len()),
        },
    })
}
