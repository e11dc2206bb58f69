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


//! Closed-form estimates against literal evaluations and simulation.

mod common;

use onc_core::graphs::build_dual_conflict_graph;
use onc_core::model::{generate_scenario, FcLayout, ScenarioParams};
use onc_core::scheduler::{FcMode, FcSolver, MbsColoring, SchedulerPolicy};
use onc_core::sim::{run_sweep, SweepSpec, SweepVar};
use onc_core::solvers::{mis_exact, SolverCaps};
use onc_core::theory::*;
use proptest::prelude::*;
use rand::Rng;

fn choose(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn pmf(n: u64, k: u64, p: f64) -> f64 {
    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Edge probability by listing every unordered pair of balls in an urn
/// holding `copies` balls of each of `f` files.
fn urn_pair_oracle(copies: usize, f: usize, sigma_u: f64) -> f64 {
    let balls: Vec<usize> = (0..f).flat_map(|k| std::iter::repeat_n(k, copies)).collect();
    let (mut differ, mut total) = (0u64, 0u64);
    for a in 0..balls.len() {
        for b in a + 1..balls.len() {
            total += 1;
            if balls[a] != balls[b] {
                differ += 1;
            }
        }
    }
    (1.0 - sigma_u * sigma_u) * differ as f64 / total as f64
}

/// Dual-graph edge probability as the literal nested sum over the coverage
/// count of every femtocache.
fn pi_dual_nested(p: &TheoryParams) -> f64 {
    let (u, c) = (p.num_clients as u64, p.num_fcs);
    let r = (p.cache_size() * c / p.num_files) as f64;
    let hc = p.cache_size() as f64;
    let s = decodable_pair_probability(p.num_files, p.has_size(), p.cache_size());
    let q = p.p_cov;
    let service = (r - 1.0) / (u as f64 * r - 1.0);
    let mut counts = vec![0u64; c];
    let mut acc = 0.0;
    let mut mass = 0.0;
    loop {
        let total: u64 = counts.iter().sum();
        if total >= 2 {
            let w: f64 = counts.iter().map(|&y| pmf(u, y, q)).product();
            mass += w;
            let big_y = total as f64;
            for &y in &counts {
                let y = y as f64;
                if y >= 2.0 {
                    acc += w * y * y * (y - 1.0) * (hc - 1.0) / (big_y * (big_y - 1.0) * (y * hc - 1.0));
                }
            }
        }
        let mut i = 0;
        while i < c && counts[i] == u {
            counts[i] = 0;
            i += 1;
        }
        if i == c {
            break;
        }
        counts[i] += 1;
    }
    service + acc / mass * (1.0 - s)
}

fn params(f: usize, c: usize, u: usize, sigma_u: f64, sigma_c: f64, p_cov: f64) -> TheoryParams {
    TheoryParams { num_files: f, num_fcs: c, num_clients: u, sigma_u, sigma_c, p_cov, o1: 1.0, o2: 0.0 }
}

fn full_coverage(f: usize, c: usize, u: usize, sigma_u: f64, sigma_c: f64) -> ScenarioParams {
    ScenarioParams {
        num_files: f,
        num_fcs: c,
        num_clients: u,
        sigma_u,
        sigma_c,
        fc_radius: 120.0,
        mbs_radius: 60.0,
        fc_layout: FcLayout::UniformRandom,
        seed: 0,
    }
}

#[test]
fn pi_mbs_matches_urn_enumeration() {
    for f in [2, 3, 5, 10] {
        for copies in [1, 2, 4, 7] {
            for sigma_u in [0.0, 0.2, 0.5] {
                let nu = copies as f64;
                if nu < 2.0 {
                    continue;
                }
                let got = pi_mbs(nu, f, sigma_u).unwrap();
                let want = urn_pair_oracle(copies, f, sigma_u);
                assert!((got - want).abs() < 1e-12, "F={f} nu={nu} su={sigma_u}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn pi_dual_general_matches_nested_sum() {
    let configs = [(10, 2, 5, 0.1, 0.5), (10, 3, 4, 0.2, 0.7), (12, 3, 6, 0.1, 2.0 / 3.0), (6, 3, 3, 0.0, 1.0)];
    for (f, c, u, su, sc) in configs {
        for q in [0.05, 0.3, 0.5, 0.9, 1.0] {
            let p = params(f, c, u, su, sc, q);
            if p.repetition().is_err() {
                continue;
            }
            let got = pi_dual_general(&p).unwrap();
            let want = pi_dual_nested(&p);
            assert!((got - want).abs() < 1e-10, "{p:?}: {got} vs {want}");
        }
    }
}

#[test]
fn general_formula_reaches_full_coverage() {
    for (f, c, u, su, sc) in [(10, 4, 20, 0.1, 0.5), (12, 3, 15, 0.2, 2.0 / 3.0), (100, 32, 50, 0.1, 0.5)] {
        let full = pi_dual_full_coverage(&params(f, c, u, su, sc, 1.0)).unwrap();
        let general = pi_dual_general(&params(f, c, u, su, sc, 1.0)).unwrap();
        assert!((full - general).abs() < 1e-4, "{full} vs {general}");
        let near = pi_dual_general(&params(f, c, u, su, sc, 1.0 - 1e-7)).unwrap();
        assert!((full - near).abs() < 1e-4);
    }
}

#[test]
fn decodable_pair_probability_shape() {
    for f in [6usize, 10, 20, 50] {
        for hc in 0..=f {
            assert_eq!(decodable_pair_probability(f, 0, hc), 0.0);
            for hu in 1..f {
                let s = decodable_pair_probability(f, hu, hc);
                assert!((0.0..=1.0).contains(&s), "F={f} hu={hu} hc={hc}: {s}");
                if hc < 2 {
                    assert_eq!(s, 0.0);
                }
            }
        }
    }
}

#[test]
fn truncated_weights_normalise() {
    for n in [2, 3, 10, 57, 400] {
        for q in [1e-3, 0.1, 0.5, 0.99, 1.0] {
            let w = truncated_binomial_weights(n, q).unwrap();
            let sum: f64 = w.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "n={n} q={q}: {sum}");
            assert_eq!(w[0], 0.0);
            assert_eq!(w[1], 0.0);
        }
    }
}

#[test]
fn outputs_stay_in_range_on_random_grid() {
    let mut rng = common::rng(41);
    let mut checked = 0;
    while checked < 500 {
        let f = rng.gen_range(2..=60);
        let c = rng.gen_range(1..=8);
        let hc = rng.gen_range(1..=f);
        if (hc * c) % f != 0 {
            continue;
        }
        let u = rng.gen_range(1..=80);
        let su = rng.gen_range(0.0..0.5);
        let p = TheoryParams {
            num_files: f,
            num_fcs: c,
            num_clients: u,
            sigma_u: su,
            sigma_c: hc as f64 / f as f64,
            p_cov: if rng.gen_bool(0.3) { 1.0 } else { rng.gen_range(0.0..1.0) },
            o1: rng.gen_range(0.0..=1.0),
            o2: rng.gen_range(0.0..0.5),
        };
        if p.has_size() >= f || u * p.repetition().unwrap() < 2 {
            continue;
        }
        checked += 1;
        let est = estimate(&p).unwrap_or_else(|e| panic!("{p:?}: {e}"));
        for pr in [est.pi_mbs, est.pi_dual] {
            assert!((0.0..=1.0).contains(&pr) || pr.is_nan(), "{p:?}: {est:?}");
        }
        assert!((0.0..=u as f64).contains(&est.n_fc_expected), "{p:?}: {est:?}");
        assert!((0.0..=u as f64).contains(&est.chi_expected), "{p:?}: {est:?}");
        if !est.lower_bound.is_nan() {
            assert!(est.lower_bound <= est.upper_bound + 1e-12, "{p:?}: {est:?}");
            assert!(est.upper_bound <= (f as f64 - c as f64).max(0.0) + 1e-12);
        }
    }
}

#[test]
fn bounds_are_ordered_on_grid() {
    let mut n = 0;
    for f in [10, 25, 50, 100] {
        for c in [1, 5] {
            for su in [0.0, 0.1, 0.3, 0.5, 0.7] {
                for nu in [3.0, 5.0, 10.0, 20.0, 50.0, 100.0, 300.0, 1000.0, 5000.0, 10000.0] {
                    let (lo, hi) = gvs_ggc_bounds(nu, f, c, su).unwrap();
                    assert!(lo >= 0.0 && lo <= hi, "F={f} C={c} su={su} nu={nu}: {lo} {hi}");
                    n += 1;
                }
            }
        }
    }
    assert_eq!(n, 400);
}

#[test]
fn more_side_information_means_fewer_transmissions() {
    for (f, c, u, sc) in [(10, 4, 20, 0.5), (12, 3, 30, 2.0 / 3.0), (50, 5, 40, 0.4)] {
        let mut prev = f64::INFINITY;
        for su in [0.0, 0.1, 0.2, 0.3, 0.4] {
            let p = params(f, c, u, su, sc, 1.0);
            if p.has_size() >= f {
                continue;
            }
            let chi = chi_expected_full_coverage(&p).unwrap();
            assert!(chi <= prev + 1e-12, "F={f} su={su}: {chi} > {prev}");
            prev = chi;
        }
    }
}

#[test]
fn clique_estimate_tracks_exact_dual_mis() {
    // (F, C, sigma_c, U)
    for (f, c, sc, u) in [(10, 4, 0.5, 20), (12, 3, 8.0 / 12.0, 20)] {
        let base = full_coverage(f, c, u, 0.1, sc);
        let trials = 300;
        let mut sum = 0.0;
        for t in 0..trials {
            let s = generate_scenario(&ScenarioParams { seed: 9000 + t, ..base.clone() }).unwrap();
            let dual = build_dual_conflict_graph(&s);
            sum += mis_exact(dual.graph(), 64).unwrap().len() as f64;
        }
        let mean = sum / trials as f64;
        let p = params(f, c, u, 0.1, sc, 1.0);
        let pi = pi_dual_full_coverage(&p).unwrap();
        let nu = (u * p.repetition().unwrap()) as f64;
        let predicted = n_fc_expected(nu, pi, 1.0).unwrap().min(u as f64);
        assert!((predicted - mean).abs() <= 2.0, "F={f}: predicted {predicted}, simulated {mean}");
    }
}

#[test]
fn calibrated_estimate_predicts_other_configuration() {
    let policy = SchedulerPolicy::new(FcMode::DualGraphOnly, FcSolver::Exact, MbsColoring::Exact)
        .with_caps(SolverCaps { mis_exact: 64, chromatic_exact: 40, ..Default::default() });
    // the clique estimate is asymptotic; below about 15 clients it
    // overshoots the served count by more than two
    let sweep = |base: ScenarioParams, seed: u64| {
        let spec = SweepSpec {
            base,
            sweep_var: SweepVar::NumClients,
            values: vec![15.0, 20.0, 25.0, 30.0],
            trials: 200,
            policies: vec![policy],
            seed,
        };
        run_sweep(&spec).unwrap()
    };

    let fit_rows = sweep(full_coverage(10, 4, 10, 0.1, 0.5), 71);
    let fc_error = |o1: f64| -> f64 {
        fit_rows
            .iter()
            .map(|r| {
                let p = TheoryParams { o1, ..params(10, 4, r.value as usize, 0.1, 0.5, 1.0) };
                let nu = (p.num_clients * p.repetition().unwrap()) as f64;
                let n = n_fc_expected(nu, pi_dual_full_coverage(&p).unwrap(), o1).unwrap().min(nu);
                (n - r.mean_n_fc).powi(2)
            })
            .sum()
    };
    let o1 = (0..=100).map(|i| i as f64 / 100.0).min_by(|a, b| fc_error(*a).total_cmp(&fc_error(*b))).unwrap();
    let obs: Vec<(f64, f64)> = fit_rows.iter().map(|r| (r.mean_residual, r.mean_residual_colors)).collect();
    let o2 = calibrate_o2(&obs, 10, 0.1);
    println!("calibrated o1 = {o1:.2}, o2 = {o2:.4}");

    for r in sweep(full_coverage(12, 3, 10, 0.1, 8.0 / 12.0), 72) {
        let p = TheoryParams { o1, o2, ..params(12, 3, r.value as usize, 0.1, 8.0 / 12.0, 1.0) };
        let predicted = chi_expected_full_coverage(&p).unwrap();
        let rel = (predicted - r.mean_n_mbs).abs() / r.mean_n_mbs;
        println!("U={} simulated {:.3} predicted {:.3}", r.value, r.mean_n_mbs, predicted);
        assert!(rel <= 0.30, "U={}: simulated {} predicted {predicted}", r.value, r.mean_n_mbs);
    }
}

#[test]
fn degenerate_probabilities_report_limits() {
    match n_fc_expected(10.0, 0.0, 1.0) {
        Err(onc_core::Error::Degenerate { fallback, .. }) => assert_eq!(fallback, 10.0),
        other => panic!("{other:?}"),
    }
    match n_fc_expected(10.0, 1.0, 1.0) {
        Err(onc_core::Error::Degenerate { fallback, .. }) => assert_eq!(fallback, 1.0),
        other => panic!("{other:?}"),
    }
    assert!(pi_mbs(1.0, 10, 0.1).is_err());
    assert!(chi_approx(10.0, 1.0, 0.0).is_err());
    assert_eq!(chi_estimate(0.0, 10, 0.1, 0.0), 0.0);
    assert_eq!(chi_estimate(1.0, 10, 0.1, 0.0), 1.0);
    assert!(estimate(&params(10, 3, 10, 0.1, 0.5, 1.0)).is_err());
}

proptest! {
    #[test]
    fn pi_mbs_is_a_probability(nu in 2.0f64..1e4, f in 1usize..200, su in 0.0f64..=1.0) {
        let p = pi_mbs(nu, f, su).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn chi_estimate_clamped(res in 0.0f64..500.0, f in 2usize..100, su in 0.0f64..0.9, o2 in 0.0f64..1.0) {
        let chi = chi_estimate(res, f, su, o2);
        if res <= 0.0 {
            prop_assert_eq!(chi, 0.0);
        } else if res <= 1.0 {
            prop_assert_eq!(chi, res);
        } else {
            prop_assert!(chi >= 1.0 && chi <= res);
        }
    }

    #[test]
    fn coverage_probability_in_unit_interval(r in 0.0f64..1000.0, big in 1.0f64..1000.0) {
        let p = coverage_probability(r, big);
        prop_assert!((0.0..=1.0).contains(&p));
        if r >= big {
            prop_assert_eq!(p, 1.0);
        }
    }

    #[test]
    fn calibration_recovers_known_constant(o2 in 0.0f64..2.0) {
        let obs: Vec<(f64, f64)> = [5.0, 10.0, 20.0, 40.0]
            .iter()
            .map(|&nu| (nu, chi_approx(nu, pi_mbs(nu, 20, 0.2).unwrap(), o2).unwrap()))
            .collect();
        prop_assert!((calibrate_o2(&obs, 20, 0.2) - o2).abs() < 1e-9);
    }
}
