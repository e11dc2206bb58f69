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


//! Plain `key = value` configuration.

use std::fmt::Write as _;
use std::str::FromStr;

use onc_core::model::{FcLayout, Point, ScenarioParams};
use onc_core::scheduler::SchedulerPolicy;
use onc_core::sim::SweepVar;
use onc_core::solvers::SolverCaps;
use onc_core::theory::{coverage_probability, TheoryParams};

use crate::CliError;

/// How `schedule` picks the femtocache plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Planner {
    /// Exhaustive optimum when the policy is fully exact and the instance
    /// fits the offload caps, the four-scheme minimum otherwise.
    Auto,
    Scheme,
    Optimal,
}

impl Planner {
    pub fn as_str(&self) -> &'static str {
        match self {
            Planner::Auto => "auto",
            Planner::Scheme => "scheme",
            Planner::Optimal => "optimal",
        }
    }
}

/// Every recognised key with its resolved value.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub num_files: usize,
    pub num_fcs: usize,
    pub num_clients: usize,
    pub sigma_u: f64,
    pub sigma_c: f64,
    pub fc_radius: f64,
    pub mbs_radius: f64,
    pub fc_layout: FcLayout,
    pub seed: u64,

    pub sweep_var: SweepVar,
    pub values: Vec<f64>,
    pub trials: usize,
    pub policies: Vec<SchedulerPolicy>,
    pub extra_columns: bool,

    /// Fixture name or scenario file for `schedule`.
    pub scenario: Option<String>,
    pub policy: SchedulerPolicy,
    pub planner: Planner,
    pub force_plan: Option<String>,

    pub mis_cap: usize,
    pub chromatic_cap: usize,
    pub offload_clients_cap: usize,
    pub offload_fcs_cap: usize,
    pub gvs_weight_over_neighbors: bool,

    /// Coverage probability for theory; derived from the radii when unset.
    pub p_cov: Option<f64>,
    pub o1: f64,
    pub o2: f64,

    pub density_tolerance: f64,
    pub dual_density_tolerance: f64,
    pub validate_trials: usize,
}

impl Default for Config {
    fn default() -> Self {
        let caps = SolverCaps::default();
        Config {
            num_files: 10,
            num_fcs: 2,
            num_clients: 10,
            sigma_u: 0.1,
            sigma_c: 0.7,
            fc_radius: 50.0,
            mbs_radius: 60.0,
            fc_layout: FcLayout::UniformRandom,
            seed: 1,
            sweep_var: SweepVar::NumClients,
            values: vec![5.0, 10.0, 15.0, 20.0, 25.0],
            trials: 1000,
            policies: vec![SchedulerPolicy::gvs_ggc(), SchedulerPolicy::exact()],
            extra_columns: false,
            scenario: None,
            policy: SchedulerPolicy::exact(),
            planner: Planner::Auto,
            force_plan: None,
            mis_cap: caps.mis_exact,
            chromatic_cap: caps.chromatic_exact,
            offload_clients_cap: caps.offload_clients,
            offload_fcs_cap: caps.offload_fcs,
            gvs_weight_over_neighbors: false,
            p_cov: None,
            o1: 1.0,
            o2: 0.0,
            density_tolerance: 0.03,
            dual_density_tolerance: 0.05,
            validate_trials: 500,
        }
    }
}

const KEYS: [&str; 29] = [
    "num_files",
    "num_fcs",
    "num_clients",
    "sigma_u",
    "sigma_c",
    "fc_radius",
    "mbs_radius",
    "fc_layout",
    "seed",
    "sweep_var",
    "values",
    "trials",
    "policies",
    "extra_columns",
    "scenario",
    "policy",
    "planner",
    "force_plan",
    "mis_cap",
    "chromatic_cap",
    "offload_clients_cap",
    "offload_fcs_cap",
    "gvs_weight",
    "p_cov",
    "o1",
    "o2",
    "density_tolerance",
    "dual_density_tolerance",
    "validate_trials",
];

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("{key}: cannot parse {value:?}: {e}"))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{key}: expected true or false, got {value:?}")),
    }
}

fn parse_layout(value: &str) -> Result<FcLayout, String> {
    if value == "uniform" {
        return Ok(FcLayout::UniformRandom);
    }
    let Some(list) = value.strip_prefix("fixed:") else {
        return Err(format!("fc_layout: expected `uniform` or `fixed:x,y;x,y;...`, got {value:?}"));
    };
    let points = list
        .split(';')
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| format!("fc_layout: bad point {p:?}"))?;
            Ok(Point::new(parse_num("fc_layout", x.trim())?, parse_num("fc_layout", y.trim())?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(FcLayout::Fixed(points))
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

impl Config {
    /// Parses config text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", idx + 1)))?;
            self.set(key.trim(), value.trim()).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("line {}: {m}", idx + 1)),
                other => other,
            })?;
        }
        Ok(())
    }

    /// Sets one key; unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        self.set_inner(key, value).map_err(CliError::Config)
    }

    fn set_inner(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "num_files" => self.num_files = parse_num(key, value)?,
            "num_fcs" => self.num_fcs = parse_num(key, value)?,
            "num_clients" => self.num_clients = parse_num(key, value)?,
            "sigma_u" => self.sigma_u = parse_num(key, value)?,
            "sigma_c" => self.sigma_c = parse_num(key, value)?,
            "fc_radius" => self.fc_radius = parse_num(key, value)?,
            "mbs_radius" => self.mbs_radius = parse_num(key, value)?,
            "fc_layout" => self.fc_layout = parse_layout(value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "sweep_var" => self.sweep_var = value.parse().map_err(|e| format!("{e}"))?,
            "values" => self.values = parse_list(key, value)?,
            "trials" => self.trials = parse_num(key, value)?,
            "policies" => {
                self.policies =
                    value.split(',').map(|p| p.trim().parse().map_err(|e| format!("policies: {e}"))).collect::<Result<_, _>>()?
            }
            "extra_columns" => self.extra_columns = parse_bool(key, value)?,
            "scenario" => self.scenario = (!value.is_empty()).then(|| value.to_string()),
            "policy" => self.policy = value.parse().map_err(|e| format!("policy: {e}"))?,
            "planner" => {
                self.planner = match value {
                    "auto" => Planner::Auto,
                    "scheme" => Planner::Scheme,
                    "optimal" => Planner::Optimal,
                    _ => return Err(format!("planner: expected auto, scheme or optimal, got {value:?}")),
                }
            }
            "force_plan" => self.force_plan = (!value.is_empty()).then(|| value.to_string()),
            "mis_cap" => self.mis_cap = parse_num(key, value)?,
            "chromatic_cap" => self.chromatic_cap = parse_num(key, value)?,
            "offload_clients_cap" => self.offload_clients_cap = parse_num(key, value)?,
            "offload_fcs_cap" => self.offload_fcs_cap = parse_num(key, value)?,
            "gvs_weight" => {
                self.gvs_weight_over_neighbors = match value {
                    "non-neighbors" => false,
                    "neighbors" => true,
                    _ => return Err(format!("gvs_weight: expected `non-neighbors` or `neighbors`, got {value:?}")),
                }
            }
            "p_cov" => self.p_cov = if value == "auto" { None } else { Some(parse_num(key, value)?) },
            "o1" => self.o1 = parse_num(key, value)?,
            "o2" => self.o2 = parse_num(key, value)?,
            "density_tolerance" => self.density_tolerance = parse_num(key, value)?,
            "dual_density_tolerance" => self.dual_density_tolerance = parse_num(key, value)?,
            "validate_trials" => self.validate_trials = parse_num(key, value)?,
            _ => return Err(format!("unknown key {key:?} (known keys: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    pub fn caps(&self) -> SolverCaps {
        SolverCaps {
            mis_exact: self.mis_cap,
            chromatic_exact: self.chromatic_cap,
            offload_clients: self.offload_clients_cap,
            offload_fcs: self.offload_fcs_cap,
        }
    }

    fn tune(&self, policy: &SchedulerPolicy) -> SchedulerPolicy {
        let mut p = policy.with_caps(self.caps());
        p.gvs_weight_over_neighbors = self.gvs_weight_over_neighbors;
        p
    }

    /// The schedule policy with caps and weighting applied.
    pub fn schedule_policy(&self) -> SchedulerPolicy {
        self.tune(&self.policy)
    }

    pub fn sweep_policies(&self) -> Vec<SchedulerPolicy> {
        self.policies.iter().map(|p| self.tune(p)).collect()
    }

    pub fn scenario_params(&self) -> ScenarioParams {
        ScenarioParams {
            num_files: self.num_files,
            num_fcs: self.num_fcs,
            num_clients: self.num_clients,
            sigma_u: self.sigma_u,
            sigma_c: self.sigma_c,
            fc_radius: self.fc_radius,
            mbs_radius: self.mbs_radius,
            fc_layout: self.fc_layout.clone(),
            seed: self.seed,
        }
    }

    /// Theory inputs for the given scenario parameters.
    pub fn theory_params(&self, p: &ScenarioParams) -> TheoryParams {
        TheoryParams {
            num_files: p.num_files,
            num_fcs: p.num_fcs,
            num_clients: p.num_clients,
            sigma_u: p.sigma_u,
            sigma_c: p.sigma_c,
            p_cov: self.p_cov.unwrap_or_else(|| coverage_probability(p.fc_radius, p.mbs_radius)),
            o1: self.o1,
            o2: self.o2,
        }
    }

    /// Resolved config as `key = value` lines, defaults included.
    pub fn render(&self) -> String {
        let list = |xs: &[f64]| xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",");
        let layout = match &self.fc_layout {
            FcLayout::UniformRandom => "uniform".to_string(),
            FcLayout::Fixed(ps) => {
                format!("fixed:{}", ps.iter().map(|p| format!("{},{}", p.x, p.y)).collect::<Vec<_>>().join(";"))
            }
        };
        let entries: [(&str, String); 29] = [
            ("num_files", self.num_files.to_string()),
            ("num_fcs", self.num_fcs.to_string()),
            ("num_clients", self.num_clients.to_string()),
            ("sigma_u", fmt_f64(self.sigma_u)),
            ("sigma_c", fmt_f64(self.sigma_c)),
            ("fc_radius", fmt_f64(self.fc_radius)),
            ("mbs_radius", fmt_f64(self.mbs_radius)),
            ("fc_layout", layout),
            ("seed", self.seed.to_string()),
            ("sweep_var", self.sweep_var.to_string()),
            ("values", list(&self.values)),
            ("trials", self.trials.to_string()),
            ("policies", self.policies.iter().map(|p| p.name()).collect::<Vec<_>>().join(",")),
            ("extra_columns", self.extra_columns.to_string()),
            ("scenario", self.scenario.clone().unwrap_or_default()),
            ("policy", self.policy.name()),
            ("planner", self.planner.as_str().to_string()),
            ("force_plan", self.force_plan.clone().unwrap_or_default()),
            ("mis_cap", self.mis_cap.to_string()),
            ("chromatic_cap", self.chromatic_cap.to_string()),
            ("offload_clients_cap", self.offload_clients_cap.to_string()),
            ("offload_fcs_cap", self.offload_fcs_cap.to_string()),
            ("gvs_weight", if self.gvs_weight_over_neighbors { "neighbors" } else { "non-neighbors" }.to_string()),
            ("p_cov", self.p_cov.map(fmt_f64).unwrap_or_else(|| "auto".into())),
            ("o1", fmt_f64(self.o1)),
            ("o2", fmt_f64(self.o2)),
            ("density_tolerance", fmt_f64(self.density_tolerance)),
            ("dual_density_tolerance", fmt_f64(self.dual_density_tolerance)),
            ("validate_trials", self.validate_trials.to_string()),
        ];
        let mut out = String::new();
        for (k, v) in entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
