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


use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use onc_core::fixtures;
use onc_core::model::{generate_scenario, Scenario};
use onc_core::scheduler::{
    baseline_no_fc, forced_fc_schedule, parse_forced_plan, schedule, schedule_from_offload, verify_schedule, FcMode, FcSolver,
    MbsColoring, SchedulerPolicy,
};
use onc_core::solvers::optimal_offload;
use onc_core::sim::{run_sweep, SweepSpec, CSV_EXTRA_HEADER, CSV_HEADER};
use onc_core::theory;

use crate::config::Planner;
use crate::{validate, CliError, Command, Config, Output};

pub const THEORY_HEADER: &str = "sweep_var,value,pi_mbs,pi_dual,n_fc_expected,chi_expected,lower_bound,upper_bound,flag";

/// Comment block naming the command and echoing the resolved config.
pub fn header(command: Command, cfg: &Config, timestamp: bool) -> String {
    let mut out = format!("# onc {}\n", command.as_str());
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let _ = writeln!(out, "# generated_unix_time = {secs}");
    }
    for line in cfg.render().lines() {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// Runs one subcommand and prepends the config header.
pub fn execute(command: Command, cfg: &Config, timestamp: bool) -> Result<Output, CliError> {
    let mut out = match command {
        Command::Schedule => cmd_schedule(cfg)?,
        Command::Sweep => cmd_sweep(cfg)?,
        Command::Theory => cmd_theory(cfg)?,
        Command::Validate => cmd_validate(cfg)?,
        Command::Fixtures => cmd_fixtures(cfg)?,
    };
    out.text = header(command, cfg, timestamp) + &out.text;
    Ok(out)
}

fn load_scenario(cfg: &Config) -> Result<Scenario, CliError> {
    let name = cfg
        .scenario
        .as_deref()
        .ok_or_else(|| CliError::Config("schedule needs `scenario` (a fixture name, a file path, or `random`)".into()))?;
    if name == "random" {
        return Ok(generate_scenario(&cfg.scenario_params())?);
    }
    if let Some(text) = fixtures::by_name(name) {
        return Ok(Scenario::from_text(text)?);
    }
    let text = std::fs::read_to_string(name).map_err(|e| CliError::Config(format!("scenario {name}: {e}")))?;
    Ok(Scenario::from_text(&text)?)
}

/// Schedules one scenario and prints the transmission report.
pub fn cmd_schedule(cfg: &Config) -> Result<Output, CliError> {
    let scenario = load_scenario(cfg)?;
    let policy = cfg.schedule_policy();
    let caps = cfg.caps();
    let exact = policy.fc_mode == FcMode::OncBroadcast
        && policy.fc_solver == FcSolver::Exact
        && policy.mbs_coloring == MbsColoring::Exact;
    let fits = scenario.num_clients() <= caps.offload_clients && scenario.num_fcs() <= caps.offload_fcs;
    let (planner, result) = match (&cfg.force_plan, cfg.planner) {
        (Some(plan), _) => ("forced", forced_fc_schedule(&scenario, &parse_forced_plan(plan)?, &policy)?),
        (None, Planner::Optimal) => ("optimal", schedule_from_offload(&scenario, &optimal_offload(&scenario, &caps)?)),
        (None, Planner::Auto) if exact && fits => {
            ("optimal", schedule_from_offload(&scenario, &optimal_offload(&scenario, &caps)?))
        }
        (None, _) => ("scheme", schedule(&scenario, &policy)?),
    };
    verify_schedule(&scenario, &result).map_err(|e| CliError::Validation(format!("schedule failed verification: {e}")))?;
    let mut text = result.report();
    let _ = writeln!(text, "planner {planner}");
    let _ = writeln!(text, "baseline {}", baseline_no_fc(&scenario, &policy)?);
    Ok(Output { text, ..Output::default() })
}

/// Runs a parameter sweep and renders the CSV.
pub fn cmd_sweep(cfg: &Config) -> Result<Output, CliError> {
    let spec = SweepSpec {
        base: cfg.scenario_params(),
        sweep_var: cfg.sweep_var,
        values: cfg.values.clone(),
        trials: cfg.trials,
        policies: cfg.sweep_policies(),
        seed: cfg.seed,
    };
    let rows = run_sweep(&spec)?;
    let mut text = String::from(CSV_HEADER);
    if cfg.extra_columns {
        text.push(',');
        text.push_str(CSV_EXTRA_HEADER);
    }
    text.push('\n');
    let mut warnings = Vec::new();
    for row in &rows {
        text.push_str(&row.to_csv(cfg.extra_columns));
        text.push('\n');
        if let Some(flag) = &row.flag {
            warnings.push(format!("{} = {} ({}): {flag}", row.sweep_var, row.value, row.policy));
        }
    }
    Ok(Output { text, warnings, failed: false })
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        String::new()
    }
}

/// Evaluates the closed-form estimates over the sweep grid.
pub fn cmd_theory(cfg: &Config) -> Result<Output, CliError> {
    let base = cfg.scenario_params();
    let mut text = format!("{THEORY_HEADER}\n");
    let mut warnings = Vec::new();
    for &value in &cfg.values {
        let params = cfg.sweep_var.apply(&base, value)?;
        let tp = cfg.theory_params(&params);
        let pi_mbs = theory::pi_mbs(params.num_clients as f64, params.num_files, params.sigma_u).unwrap_or(f64::NAN);
        let prefix = format!("{},{value}", cfg.sweep_var);
        if tp.repetition().is_err() {
            warnings.push(format!(
                "{prefix}: repetition index {}*{}/{} is not an integer; theory columns left empty",
                tp.cache_size(),
                tp.num_fcs,
                tp.num_files
            ));
            let _ = writeln!(text, "{prefix},{},,,,,,theory_unavailable_noninteger_R", cell(pi_mbs));
            continue;
        }
        match theory::estimate(&tp) {
            Ok(e) => {
                let _ = writeln!(
                    text,
                    "{prefix},{},{},{},{},{},{},",
                    cell(e.pi_mbs),
                    cell(e.pi_dual),
                    cell(e.n_fc_expected),
                    cell(e.chi_expected),
                    cell(e.lower_bound),
                    cell(e.upper_bound)
                );
            }
            Err(err) => {
                let flag = format!("theory_error: {err}").replace(',', ";");
                let _ = writeln!(text, "{prefix},{},,,,,,{flag}", cell(pi_mbs));
            }
        }
    }
    Ok(Output { text, warnings, failed: false })
}

/// Runs the invariant checks and reports one line per check.
pub fn cmd_validate(cfg: &Config) -> Result<Output, CliError> {
    let checks = validate::run_checks(cfg)?;
    let mut text = String::new();
    let mut failed = 0;
    for c in &checks {
        let _ = writeln!(text, "{} {}: {}", c.status.as_str(), c.name, c.detail);
        if c.status == validate::Status::Fail {
            failed += 1;
        }
    }
    let _ = writeln!(text, "summary: {} of {} checks failed", failed, checks.len());
    Ok(Output { text, warnings: Vec::new(), failed: failed > 0 })
}

/// Lists the bundled fixtures with their schedules, or prints one of them.
pub fn cmd_fixtures(cfg: &Config) -> Result<Output, CliError> {
    if let Some(name) = &cfg.scenario {
        let text = fixtures::by_name(name).ok_or_else(|| {
            let names: Vec<&str> = fixtures::ALL.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!("unknown fixture {name:?}; bundled: {}", names.join(", ")))
        })?;
        return Ok(Output { text: text.to_string(), ..Output::default() });
    }
    let mut text = String::from("fixture,clients,fcs,policy,n_fc,n_mbs,scheme,baseline,verified\n");
    let mut failed = false;
    for (name, body) in fixtures::ALL {
        let scenario = Scenario::from_text(body)?;
        for policy in [SchedulerPolicy::exact().with_caps(cfg.caps()), SchedulerPolicy::gvs_ggc()] {
            let r = schedule(&scenario, &policy)?;
            let ok = verify_schedule(&scenario, &r).is_ok();
            failed |= !ok;
            let scheme = r.chosen_scheme.map(|s| s.number().to_string()).unwrap_or_default();
            let _ = writeln!(
                text,
                "{name},{},{},{},{},{},{scheme},{},{ok}",
                scenario.num_clients(),
                scenario.num_fcs(),
                policy.name(),
                r.n_fc,
                r.n_mbs,
                baseline_no_fc(&scenario, &policy)?
            );
        }
    }
    Ok(Output { text, warnings: Vec::new(), failed })
}
