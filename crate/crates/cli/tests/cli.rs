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


use std::path::Path;
use std::process::{Command, Output};

fn onc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onc")).args(args).output().expect("run onc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn motivating_fixture_schedules_with_one_channel() {
    let o = onc(&["schedule", "--set", "scenario=fig2_motivating", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("mbs xor f1,f2 serves u3,u4,u5"), "{out}");
    assert!(body(&out).contains(&"n_mbs 1"));
}

#[test]
fn forcing_fc2_to_broadcast_costs_two_channels() {
    let o = onc(&["schedule", "--set", "scenario=fig2_motivating", "--set", "force_plan=1:f1+f6;2:f2", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(body(&out).contains(&"n_mbs 2"), "{out}");
    assert!(body(&out).contains(&"planner forced"));
}

#[test]
fn scenario_without_clients_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "empty.scn", "files 4\nmbs_radius 10\nseed 0\nfc 1 0 0 r=5 cache=1,2\n");
    let o = onc(&["schedule", "--set", &format!("scenario={path}"), "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines = body(&stdout(&o)).join("\n");
    assert!(lines.starts_with("n_fc 0\nn_mbs 0\n"), "{lines}");
}

#[test]
fn malformed_scenario_line_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.scn", "files 4\nmbs_radius 10\nclient 1 0 0 wants=x has=\n");
    let o = onc(&["schedule", "--set", &format!("scenario={path}")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn config_file_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "ok.cfg", "# tiny sweep\ntrials = 2\nvalues = 5 # one point\npolicies = gvs-ggc\n");
    let o = onc(&["sweep", "--config", &good, "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("# trials = 2\n"));
    assert!(out.contains("# mbs_radius = 60\n"), "defaults are echoed");

    let bad = write(dir.path(), "bad.cfg", "trials = 2\ncolour = blue\n");
    let o = onc(&["sweep", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2") && stderr(&o).contains("colour"), "{}", stderr(&o));

    let o = onc(&["sweep", "--config", dir.path().join("missing.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn single_point_single_trial_sweep() {
    let o = onc(&["sweep", "--set", "values=7", "--set", "trials=1", "--set", "policies=gvs-ggc", "--no-timestamp"]);
    let out = stdout(&o);
    let rows = body(&out);
    assert_eq!(rows.len(), 2, "{out}");
    assert_eq!(rows[0], onc_core::sim::CSV_HEADER);
    assert!(rows[1].starts_with("U,7,gvs-ggc,1,"));
}

#[test]
fn outputs_reproduce_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let common = ["sweep", "--set", "trials=40", "--set", "extra_columns=true", "--seed", "9", "--no-timestamp"];
    let mut args_a = common.to_vec();
    args_a.extend(["--threads", "1", "--out", a.to_str().unwrap()]);
    let mut args_b = common.to_vec();
    args_b.extend(["--threads", "4", "--out", b.to_str().unwrap()]);
    assert_eq!(onc(&args_a).status.code(), Some(0));
    assert_eq!(onc(&args_b).status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
}

#[test]
fn timestamp_line_is_optional() {
    let with = stdout(&onc(&["fixtures"]));
    let without = stdout(&onc(&["fixtures", "--no-timestamp"]));
    assert!(with.contains("# generated_unix_time = "));
    assert!(!without.contains("generated_unix_time"));
    assert_eq!(body(&with), body(&without));
}

#[test]
fn theory_csv_shape_and_noninteger_flag() {
    let o = onc(&["theory", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows = body(&out);
    assert_eq!(rows[0], onc_cli::commands::THEORY_HEADER);
    assert_eq!(rows.len(), 6);
    assert!(rows[1..].iter().all(|r| r.ends_with(",theory_unavailable_noninteger_R")));
    assert!(stderr(&o).contains("not an integer"));

    let o = onc(&["theory", "--set", "num_fcs=4", "--set", "sigma_c=0.5", "--no-timestamp"]);
    let out = stdout(&o);
    for row in &body(&out)[1..] {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 9, "{row}");
        assert_eq!(cells[8], "", "{row}");
        for c in &cells[2..6] {
            let x: f64 = c.parse().unwrap();
            assert!(x >= 0.0);
        }
    }
}

#[test]
fn validate_exit_codes() {
    assert_eq!(onc(&["validate"]).status.code(), Some(0));
    let o = onc(&["validate", "--set", "density_tolerance=0"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("FAIL mbs_edge_density"));
}

#[test]
fn validate_is_stable_across_seeds() {
    for seed in ["1", "2", "3", "4", "5"] {
        let o = onc(&["validate", "--seed", seed, "--set", "num_fcs=4", "--set", "sigma_c=0.5", "--set", "num_clients=20"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}:\n{}", stdout(&o));
    }
}

#[test]
fn solver_limit_has_its_own_exit_code() {
    let o = onc(&["schedule", "--set", "scenario=random", "--set", "num_clients=20", "--set", "planner=optimal"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("gvs-ggc"), "{}", stderr(&o));
    let o = onc(&["schedule", "--set", "scenario=random", "--set", "num_clients=20", "--set", "policy=gvs-ggc"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn fixtures_list_and_print() {
    let out = stdout(&onc(&["fixtures", "--no-timestamp"]));
    for name in ["fig2_motivating", "appendixA_dualgraph", "fig7_broadcast_beats_onc"] {
        assert!(out.contains(name), "{out}");
    }
    assert!(body(&out).iter().skip(1).all(|r| r.ends_with(",true")));

    let text = stdout(&onc(&["fixtures", "--set", "scenario=appendixA_dualgraph", "--no-timestamp"]));
    let scenario = onc_core::Scenario::from_text(&body(&text).join("\n")).unwrap();
    assert_eq!(scenario.num_clients(), 3);
    assert_eq!(onc(&["fixtures", "--set", "scenario=nope"]).status.code(), Some(2));
}

#[test]
fn large_network_recipe_has_both_policies_per_point() {
    let o = onc(&[
        "sweep",
        "--set", "num_files=100",
        "--set", "num_fcs=32",
        "--set", "num_clients=50",
        "--set", "sigma_c=0.5",
        "--set", "sigma_u=0.1",
        "--set", "mbs_radius=350",
        "--set", "sweep_var=fc_radius",
        "--set", "values=100,200",
        "--set", "trials=3",
        "--set", "policies=dual-gvs-ggc,separate-gvs-ggc",
        "--no-timestamp",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows = body(&out);
    assert_eq!(rows.len(), 5);
    for value in ["100", "200"] {
        for policy in ["dual-gvs-ggc", "separate-gvs-ggc"] {
            assert!(rows.iter().any(|r| r.starts_with(&format!("fc_radius,{value},{policy},3,"))), "{out}");
        }
    }
}

#[test]
fn bad_flags() {
    assert_eq!(onc(&["sweep", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(onc(&["sweep", "--set", "novalue"]).status.code(), Some(2));
    assert_eq!(onc(&["sweep", "--set", "sigma_u=0.99"]).status.code(), Some(2));
}
