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

//! Seeded Monte-Carlo sweeps.
//!
//! Every trial draws its scenario from a seed derived from
//! `(seed, point, trial)`, and all policies at a point see the same
//! scenarios. Trials run on the rayon pool; results are aggregated in trial
//! order, so output never depends on scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::{build_dual_conflict_graph, ConflictGraph};
use crate::model::{generate_scenario, FcLayout, ScenarioParams};
use crate::scheduler::{baseline_no_fc, schedule, verify_schedule, SchedulerPolicy};
use crate::theory::gvs_ggc_bounds;

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Scenario seed for one trial of one sweep point.
pub fn trial_seed(seed: u64, point: usize, trial: usize) -> u64 {
    mix(mix(mix(seed) ^ point as u64) ^ trial as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepVar {
    NumClients,
    FcRadius,
    SigmaC,
    SigmaU,
    NumFiles,
    NumFcs,
}

impl SweepVar {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVar::NumClients => "U",
            SweepVar::FcRadius => "fc_radius",
            SweepVar::SigmaC => "sigma_c",
            SweepVar::SigmaU => "sigma_u",
            SweepVar::NumFiles => "F",
            SweepVar::NumFcs => "C",
        }
    }

    /// `params` with this variable set to `value`.
    pub fn apply(&self, params: &ScenarioParams, value: f64) -> Result<ScenarioParams> {
        let mut p = params.clone();
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::InvalidConfiguration(format!("{} must be a whole number, got {value}", self.as_str())))
            }
        };
        match self {
            SweepVar::NumClients => p.num_clients = count()?,
            SweepVar::FcRadius => p.fc_radius = value,
            SweepVar::SigmaC => p.sigma_c = value,
            SweepVar::SigmaU => p.sigma_u = value,
            SweepVar::NumFiles => p.num_files = count()?,
            SweepVar::NumFcs => {
                p.num_fcs = count()?;
                if let FcLayout::Fixed(points) = &p.fc_layout {
                    if points.len() != p.num_fcs {
                        return Err(Error::InvalidConfiguration(
                            "cannot sweep C with a fixed femtocache layout".into(),
                        ));
                    }
                }
            }
        }
        Ok(p)
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "U" | "num_clients" => SweepVar::NumClients,
            "fc_radius" => SweepVar::FcRadius,
            "sigma_c" => SweepVar::SigmaC,
            "sigma_u" => SweepVar::SigmaU,
            "F" | "num_files" => SweepVar::NumFiles,
            "C" | "num_fcs" => SweepVar::NumFcs,
            _ => return Err(Error::InvalidConfiguration(format!("unknown sweep variable `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: ScenarioParams,
    pub sweep_var: SweepVar,
    pub values: Vec<f64>,
    pub trials: usize,
    pub policies: Vec<SchedulerPolicy>,
    pub seed: u64,
}

/// Aggregates for one (point, policy) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub sweep_var: SweepVar,
    pub value: f64,
    pub policy: String,
    /// Trials that completed.
    pub trials: usize,
    pub mean_n_fc: f64,
    pub mean_n_mbs: f64,
    pub mean_baseline: f64,
    pub og_ratio_of_means: f64,
    pub og_mean_of_ratios: f64,
    pub stderr_n_mbs: f64,
    pub flag: Option<String>,
    pub mean_n_fc_broadcast: Option<f64>,
    pub stderr_n_fc_broadcast: Option<f64>,
    pub mean_n_fc_onc: Option<f64>,
    pub stderr_n_fc_onc: Option<f64>,
    pub mean_residual: f64,
    pub mean_residual_colors: f64,
    pub bound_lower: Option<f64>,
    pub bound_upper: Option<f64>,
}

pub const CSV_HEADER: &str = "sweep_var,value,policy,trials,mean_n_fc,mean_n_mbs,mean_baseline,og_ratio_of_means,og_mean_of_ratios,stderr_n_mbs,flag";
pub const CSV_EXTRA_HEADER: &str = "mean_residual,mean_colors,bound_lower,bound_upper,mean_n_fc_broadcast,mean_n_fc_onc";

fn cell(v: f64) -> String {
    format!("{v:.6}")
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

impl MetricRow {
    pub fn to_csv(&self, extra: bool) -> String {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.sweep_var,
            self.value,
            self.policy,
            self.trials,
            cell(self.mean_n_fc),
            cell(self.mean_n_mbs),
            cell(self.mean_baseline),
            cell(self.og_ratio_of_means),
            cell(self.og_mean_of_ratios),
            cell(self.stderr_n_mbs),
            self.flag.as_deref().unwrap_or("").replace(',', ";"),
        );
        if extra {
            line.push_str(&format!(
                ",{},{},{},{},{},{}",
                cell(self.mean_residual),
                cell(self.mean_residual_colors),
                opt_cell(self.bound_lower),
                opt_cell(self.bound_upper),
                opt_cell(self.mean_n_fc_broadcast),
                opt_cell(self.mean_n_fc_onc),
            ));
        }
        line
    }
}

struct Trial {
    n_fc: usize,
    n_mbs: usize,
    baseline: usize,
    n_fc_broadcast: Option<usize>,
    n_fc_onc: Option<usize>,
    residual: usize,
    residual_colors: usize,
}

fn run_trial(params: &ScenarioParams, policy: &SchedulerPolicy) -> Result<Trial> {
    let scenario = generate_scenario(params)?;
    let result = schedule(&scenario, policy)?;
    if let Err(why) = verify_schedule(&scenario, &result) {
        return Err(Error::InvalidInput(format!("incomplete schedule: {why}")));
    }
    Ok(Trial {
        n_fc: result.n_fc,
        n_mbs: result.n_mbs,
        baseline: baseline_no_fc(&scenario, policy)?,
        n_fc_broadcast: result.diagnostics.n_fc_broadcast,
        n_fc_onc: result.diagnostics.n_fc_onc,
        residual: result.diagnostics.residual_clients,
        residual_colors: result.diagnostics.residual_colors,
    })
}

/// Mean and standard error (sample deviation over `sqrt(n)`).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn aggregate(
    spec: &SweepSpec,
    params: &ScenarioParams,
    value: f64,
    policy: &SchedulerPolicy,
    outcomes: Vec<Result<Trial>>,
) -> MetricRow {
    let mut ok = Vec::new();
    let mut first_error = None;
    let mut failures = 0;
    for o in outcomes {
        match o {
            Ok(t) => ok.push(t),
            Err(e) => {
                failures += 1;
                first_error.get_or_insert(e);
            }
        }
    }
    let col = |f: &dyn Fn(&Trial) -> f64| ok.iter().map(f).collect::<Vec<f64>>();
    let (mean_n_mbs, stderr_n_mbs) = mean_stderr(&col(&|t| t.n_mbs as f64));
    let (mean_n_fc, _) = mean_stderr(&col(&|t| t.n_fc as f64));
    let (mean_baseline, _) = mean_stderr(&col(&|t| t.baseline as f64));
    let ratios: Vec<f64> = ok
        .iter()
        .filter(|t| t.baseline > 0)
        .map(|t| 100.0 * (t.baseline as f64 - t.n_mbs as f64) / t.baseline as f64)
        .collect();
    let (og_mean_of_ratios, _) = mean_stderr(&ratios);
    let og_ratio_of_means = 100.0 * (mean_baseline - mean_n_mbs) / mean_baseline;
    let optional = |f: &dyn Fn(&Trial) -> Option<usize>| -> (Option<f64>, Option<f64>) {
        let xs: Option<Vec<f64>> = ok.iter().map(|t| f(t).map(|v| v as f64)).collect();
        match xs {
            Some(xs) if !xs.is_empty() => {
                let (m, s) = mean_stderr(&xs);
                (Some(m), Some(s))
            }
            _ => (None, None),
        }
    };
    let (mean_n_fc_broadcast, stderr_n_fc_broadcast) = optional(&|t| t.n_fc_broadcast);
    let (mean_n_fc_onc, stderr_n_fc_onc) = optional(&|t| t.n_fc_onc);
    let (mean_residual, _) = mean_stderr(&col(&|t| t.residual as f64));
    let (mean_residual_colors, _) = mean_stderr(&col(&|t| t.residual_colors as f64));
    let (bound_lower, bound_upper) = if params.full_coverage() {
        match gvs_ggc_bounds(mean_residual, params.num_files, params.num_fcs, params.sigma_u) {
            Ok((lo, hi)) => (Some(lo), Some(hi)),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    let flag = first_error.map(|e| {
        let kind = match e {
            Error::SolverLimit { .. } => "solver_limit",
            Error::InvalidInput(_) => "invariant_violation",
            _ => "trial_error",
        };
        format!("{kind} in {failures}/{} trials: {e}", spec.trials)
    });
    MetricRow {
        sweep_var: spec.sweep_var,
        value,
        policy: policy.name(),
        trials: ok.len(),
        mean_n_fc,
        mean_n_mbs,
        mean_baseline,
        og_ratio_of_means,
        og_mean_of_ratios,
        stderr_n_mbs,
        flag,
        mean_n_fc_broadcast,
        stderr_n_fc_broadcast,
        mean_n_fc_onc,
        stderr_n_fc_onc,
        mean_residual,
        mean_residual_colors,
        bound_lower,
        bound_upper,
    }
}

/// Runs every (point, policy) pair; rows come out sorted by point, then in
/// the order the policies were given.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<MetricRow>> {
    if spec.trials == 0 {
        return Err(Error::InvalidConfiguration("a sweep needs at least one trial".into()));
    }
    if spec.policies.is_empty() {
        return Err(Error::InvalidConfiguration("a sweep needs at least one policy".into()));
    }
    let mut rows = Vec::with_capacity(spec.values.len() * spec.policies.len());
    for (point, &value) in spec.values.iter().enumerate() {
        let params = spec.sweep_var.apply(&spec.base, value)?;
        // configuration errors surface once, before any trial runs
        generate_scenario(&ScenarioParams { num_clients: 0, ..params.clone() })?;
        let per_trial: Vec<Vec<Result<Trial>>> = (0..spec.trials)
            .into_par_iter()
            .map(|trial| {
                let p = ScenarioParams { seed: trial_seed(spec.seed, point, trial), ..params.clone() };
                spec.policies.iter().map(|policy| run_trial(&p, policy)).collect()
            })
            .collect();
        let mut by_policy: Vec<Vec<Result<Trial>>> = spec.policies.iter().map(|_| Vec::new()).collect();
        for trial in per_trial {
            for (slot, outcome) in by_policy.iter_mut().zip(trial) {
                slot.push(outcome);
            }
        }
        for (policy, outcomes) in spec.policies.iter().zip(by_policy) {
            rows.push(aggregate(spec, &params, value, policy, outcomes));
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Mbs,
    Dual,
}

/// Mean edge density of the chosen graph over seeded scenarios, skipping
/// draws with fewer than two vertices.
pub fn empirical_edge_density(params: &ScenarioParams, kind: GraphKind, trials: usize) -> Result<(f64, f64)> {
    if trials < 100 {
        return Err(Error::InvalidConfiguration(format!("edge density needs at least 100 trials, got {trials}")));
    }
    let densities: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Option<f64>> {
            let s = generate_scenario(&ScenarioParams { seed: trial_seed(params.seed, 0, t), ..params.clone() })?;
            let g = match kind {
                GraphKind::Mbs => ConflictGraph::for_scenario(&s).graph().clone(),
                GraphKind::Dual => build_dual_conflict_graph(&s).graph().clone(),
            };
            Ok(g.density())
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = densities.into_iter().flatten().collect();
    if xs.is_empty() {
        return Err(Error::InsufficientData("no trial produced two or more vertices".into()));
    }
    Ok(mean_stderr(&xs))
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData("spearman needs two equal-length samples of size >= 2".into()));
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean).powi(2);
        syy += (b - mean).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InsufficientData("spearman is undefined for a constant sample".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(u: usize) -> ScenarioParams {
        ScenarioParams {
            num_files: 10,
            num_fcs: 2,
            num_clients: u,
            sigma_u: 0.1,
            sigma_c: 0.7,
            fc_radius: 120.0,
            mbs_radius: 60.0,
            fc_layout: FcLayout::UniformRandom,
            seed: 1,
        }
    }

    fn spec(trials: usize) -> SweepSpec {
        SweepSpec {
            base: small(5),
            sweep_var: SweepVar::NumClients,
            values: vec![5.0, 10.0],
            trials,
            policies: vec![SchedulerPolicy::gvs_ggc(), SchedulerPolicy::exact()],
            seed: 11,
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = run_sweep(&spec(1)).unwrap();
        let b = run_sweep(&spec(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert_eq!(a[0].policy, "gvs-ggc");
        assert_eq!(a[1].policy, "exact");
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_sweep(&spec(20))).unwrap();
        let b = four.install(|| run_sweep(&spec(20))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn solver_limits_are_flagged() {
        let mut s = spec(3);
        s.policies = vec![SchedulerPolicy::exact().with_caps(crate::solvers::SolverCaps {
            mis_exact: 2,
            ..Default::default()
        })];
        let rows = run_sweep(&s).unwrap();
        let flag = rows[1].flag.as_deref().unwrap();
        assert!(flag.starts_with("solver_limit in 3/3"), "{flag}");
        assert_eq!(rows[1].trials, 0);
        assert!(!rows[1].to_csv(false).contains("solver_limit in 3/3 trials: mis_exact,"));
    }

    #[test]
    fn csv_has_fixed_columns() {
        let rows = run_sweep(&spec(2)).unwrap();
        let n = CSV_HEADER.split(',').count();
        for r in &rows {
            assert_eq!(r.to_csv(false).split(',').count(), n);
            assert_eq!(r.to_csv(true).split(',').count(), n + CSV_EXTRA_HEADER.split(',').count());
        }
    }

    #[test]
    fn density_edge_cases() {
        let mut p = small(30);
        p.sigma_u = 0.9;
        p.num_files = 10;
        // H_u = 9 = F - 1: every client holds every other file
        let (d, _) = empirical_edge_density(&p, GraphKind::Mbs, 100).unwrap();
        assert_eq!(d, 0.0);
        let mut one = small(30);
        one.num_files = 1;
        one.sigma_u = 0.0;
        one.sigma_c = 1.0;
        assert_eq!(empirical_edge_density(&one, GraphKind::Mbs, 100).unwrap().0, 0.0);
        assert!(empirical_edge_density(&small(1), GraphKind::Mbs, 100).is_err());
        assert!(empirical_edge_density(&small(30), GraphKind::Mbs, 99).is_err());
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap(), 1.0);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert!(spearman(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 0, 0), trial_seed(1, 0, 1));
        assert_ne!(trial_seed(1, 0, 1), trial_seed(1, 1, 0));
    }
}
