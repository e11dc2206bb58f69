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

//! Closed-form random-graph predictions.
//!
//! All logarithms are natural unless a base is named. Estimates of counts
//! are clamped to their feasible range; probabilities to `[0, 1]`.

use statrs::distribution::{Binomial, Discrete};
use statrs::function::factorial::binomial;

use crate::error::{Error, Result};
use crate::model::round_half_up;

/// Inputs shared by the femtocache-side formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoryParams {
    pub num_files: usize,
    pub num_fcs: usize,
    pub num_clients: usize,
    pub sigma_u: f64,
    pub sigma_c: f64,
    /// Probability that a client lies in a given femtocache's disk.
    pub p_cov: f64,
    pub o1: f64,
    pub o2: f64,
}

impl TheoryParams {
    pub fn has_size(&self) -> usize {
        round_half_up(self.sigma_u * self.num_files as f64)
    }

    pub fn cache_size(&self) -> usize {
        round_half_up(self.sigma_c * self.num_files as f64)
    }

    /// Integer repetition index, or an error when `H_c C / F` is fractional.
    pub fn repetition(&self) -> Result<usize> {
        let copies = self.cache_size() * self.num_fcs;
        if self.num_files == 0 || !copies.is_multiple_of(self.num_files) {
            return Err(Error::Unsupported(format!(
                "repetition index {copies}/{} is not an integer",
                self.num_files
            )));
        }
        Ok(copies / self.num_files)
    }

    fn check(&self) -> Result<()> {
        if self.num_files == 0 {
            return Err(Error::InvalidInput("F must be at least 1".into()));
        }
        for (name, v) in [("sigma_u", self.sigma_u), ("sigma_c", self.sigma_c), ("p_cov", self.p_cov)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if self.has_size() >= self.num_files && self.num_files > 1 {
            return Err(Error::InvalidInput("Has sets must leave room for the wanted file".into()));
        }
        if !(0.0..=1.0).contains(&self.o1) || !(self.o2 >= 0.0) {
            return Err(Error::InvalidInput("o1 must lie in [0, 1] and o2 be non-negative".into()));
        }
        Ok(())
    }
}

/// Fraction of the macrocell disk covered by one femtocache disk, at most 1.
pub fn coverage_probability(fc_radius: f64, mbs_radius: f64) -> f64 {
    if mbs_radius <= 0.0 {
        return 1.0;
    }
    (fc_radius / mbs_radius).powi(2).min(1.0)
}

/// Edge probability of the MBS conflict graph on `nu` requests.
pub fn pi_mbs(nu: f64, num_files: usize, sigma_u: f64) -> Result<f64> {
    if !(nu >= 2.0) {
        return Err(Error::InvalidInput(format!("pi_mbs needs at least two vertices, got {nu}")));
    }
    if num_files == 0 || !(0.0..=1.0).contains(&sigma_u) {
        return Err(Error::InvalidInput("pi_mbs needs F >= 1 and sigma_u in [0, 1]".into()));
    }
    Ok(pi_mbs_unchecked(nu, num_files, sigma_u))
}

fn pi_mbs_unchecked(nu: f64, num_files: usize, sigma_u: f64) -> f64 {
    let f = num_files as f64;
    ((1.0 - sigma_u * sigma_u) * nu * (f - 1.0) / (nu * f - 1.0)).clamp(0.0, 1.0)
}

/// Chromatic number of a random graph on `nu` vertices with edge probability `pi`.
pub fn chi_approx(nu: f64, pi: f64, o2: f64) -> Result<f64> {
    if !(nu > 1.0) {
        return Err(Error::InvalidInput(format!("chi_approx needs nu > 1, got {nu}")));
    }
    if !(0.0..1.0).contains(&pi) {
        return Err(Error::InvalidInput(format!("chi_approx diverges at pi = {pi}")));
    }
    Ok((0.5 + o2) * (1.0 / (1.0 - pi)).ln() * nu / nu.ln())
}

/// MBS transmissions predicted for `residual` clients: the chromatic
/// approximation clamped to `[1, residual]`, the residual itself when it is
/// at most one client, and zero when nobody is left.
pub fn chi_estimate(residual: f64, num_files: usize, sigma_u: f64, o2: f64) -> f64 {
    if residual <= 0.0 {
        return 0.0;
    }
    if residual <= 1.0 {
        return residual;
    }
    let pi = pi_mbs_unchecked(residual, num_files, sigma_u);
    let raw = (0.5 + o2) * (1.0 / (1.0 - pi)).ln() * residual / residual.ln();
    raw.clamp(1.0, residual)
}

/// Probability that two uniformly drawn clients of the same femtocache are
/// mutually decodable through that cache (the triple hypergeometric sum).
pub fn decodable_pair_probability(num_files: usize, has_size: usize, cache_size: usize) -> f64 {
    let (f, hu, hc) = (num_files as u64, has_size as u64, cache_size as u64);
    if hu == 0 || hc < 2 {
        return 0.0;
    }
    let hyper = |a: u64, b: u64, pop: u64, draws: u64, k: u64| -> f64 {
        if k > a || draws < k || draws - k > b {
            0.0
        } else {
            binomial(a, k) * binomial(b, draws - k) / binomial(pop, draws)
        }
    };
    let mut s = 0.0;
    for e1 in 0..=hu {
        let p1 = hyper(hu, f - hu, f, hu, e1);
        if p1 == 0.0 {
            continue;
        }
        let rest = hu - e1;
        let e2_lo = hu.saturating_sub(f - hc);
        for e2 in e2_lo..=rest.min(hc) {
            let p2 = hyper(hc, f - hc, f, rest, e2);
            if p2 == 0.0 {
                continue;
            }
            let left = hc - e2;
            let e3_lo = hu.saturating_sub(f - left);
            for e3 in e3_lo..=rest.min(left) {
                let p3 = hyper(left, f - left, f, rest, e3);
                s += p1 * p2 * p3 * (e2 as f64 / hc as f64) * (e3 as f64 / (hc - 1) as f64);
            }
        }
    }
    s
}

/// Dual-graph edge probability under full coverage.
pub fn pi_dual_full_coverage(params: &TheoryParams) -> Result<f64> {
    params.check()?;
    let r = params.repetition()? as f64;
    let u = params.num_clients as f64;
    if u * r < 2.0 {
        return Err(Error::InvalidInput("the dual graph needs at least two vertices".into()));
    }
    let c = params.num_fcs as f64;
    let hc = params.cache_size() as f64;
    let s = decodable_pair_probability(params.num_files, params.has_size(), params.cache_size());
    let service = (r - 1.0) / (u * r - 1.0);
    let coding = u * (u - 1.0) * (hc - 1.0) / ((u * c - 1.0) * (u * hc - 1.0)) * (1.0 - s);
    Ok((service + coding).clamp(0.0, 1.0))
}

/// Dual-graph edge probability with random coverage.
///
/// The coverage counts `Y_1..Y_C` are i.i.d. `Bin(U, P_cov)` conditioned on
/// their total being at least two. The summand is symmetric in the FC index,
/// so the nested sum reduces to `C` times a double sum over `Y_m` and the
/// total of the others, which is `Bin((C-1)U, P_cov)`.
pub fn pi_dual_general(params: &TheoryParams) -> Result<f64> {
    params.check()?;
    let r = params.repetition()? as f64;
    let u = params.num_clients;
    let c = params.num_fcs;
    if u == 0 || c == 0 {
        return Err(Error::InvalidInput("the dual graph needs clients and femtocaches".into()));
    }
    let hc = params.cache_size() as f64;
    let p = params.p_cov;
    let s = decodable_pair_probability(params.num_files, params.has_size(), params.cache_size());
    let service = if u as f64 * r > 1.0 { (r - 1.0) / (u as f64 * r - 1.0) } else { 0.0 };
    let uc = (u * c) as f64;
    let same_fc_conflict = |ym: f64, total: f64| ym * ym * (ym - 1.0) * (hc - 1.0) / (total * (total - 1.0) * (ym * hc - 1.0));

    let coding = if p == 0.0 {
        // limit: exactly two covered slots, both at one femtocache
        if uc < 2.0 {
            0.0
        } else {
            c as f64 * binomial(u as u64, 2) / binomial((u * c) as u64, 2) * same_fc_conflict(2.0, 2.0)
        }
    } else {
        let norm = 1.0 - (1.0 - p).powf(uc - 1.0) * (p * (uc - 1.0) + 1.0);
        if norm <= 0.0 {
            0.0
        } else {
            let own = binomial_pmfs(u, p)?;
            let others = binomial_pmfs((c - 1) * u, p)?;
            let mut acc = 0.0;
            for (ym, &pm) in own.iter().enumerate().skip(2) {
                for (z, &pz) in others.iter().enumerate() {
                    let total = (ym + z) as f64;
                    acc += pm * pz * same_fc_conflict(ym as f64, total);
                }
            }
            c as f64 * acc / norm
        }
    };
    Ok((service + coding * (1.0 - s)).clamp(0.0, 1.0))
}

fn binomial_pmfs(n: usize, p: f64) -> Result<Vec<f64>> {
    let dist = Binomial::new(p, n as u64).map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok((0..=n as u64).map(|k| dist.pmf(k)).collect())
}

/// Clients the femtocaches serve, via the clique number of a random graph
/// with `nu` vertices and edge probability `pi`. Degenerate probabilities
/// return [`Error::Degenerate`] carrying the limit value.
pub fn n_fc_expected(nu: f64, pi: f64, o1: f64) -> Result<f64> {
    if !(nu >= 2.0) {
        return Err(Error::InvalidInput(format!("n_fc_expected needs nu >= 2, got {nu}")));
    }
    if pi <= 0.0 {
        return Err(Error::Degenerate { reason: "edgeless dual graph".into(), fallback: nu });
    }
    if pi >= 1.0 {
        return Err(Error::Degenerate { reason: "complete dual graph".into(), fallback: 1.0 });
    }
    let ln_b = (1.0 / (1.0 - pi)).ln();
    let log_b = |x: f64| x.ln() / ln_b;
    let inner = std::f64::consts::E * nu / (2.0 * log_b(nu));
    Ok((2.0 * log_b(inner) + 1.0 + o1).clamp(0.0, nu))
}

fn n_fc_or_fallback(nu: f64, pi: f64, o1: f64) -> Result<f64> {
    match n_fc_expected(nu, pi, o1) {
        Err(Error::Degenerate { fallback, .. }) => Ok(fallback),
        other => other,
    }
}

/// Predicted MBS transmissions under full coverage, where the dual graph
/// has exactly `U R` vertices.
pub fn chi_expected_full_coverage(params: &TheoryParams) -> Result<f64> {
    let pi_dual = pi_dual_full_coverage(params)?;
    let u = params.num_clients as f64;
    let nu_dual = u * params.repetition()? as f64;
    let n_fc = n_fc_or_fallback(nu_dual, pi_dual, params.o1)?.min(u);
    Ok(chi_estimate(u - n_fc, params.num_files, params.sigma_u, params.o2))
}

/// `Bin(n, q)` probabilities conditioned on at least two successes; entries
/// 0 and 1 are zero. Empty when the conditioning event is impossible.
pub fn truncated_binomial_weights(n: usize, q: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidInput(format!("probability {q} outside [0, 1]")));
    }
    if n < 2 || q == 0.0 {
        return Ok(Vec::new());
    }
    let norm = 1.0 - (1.0 - q).powi(n as i32 - 1) * (q * (n as f64 - 1.0) + 1.0);
    let mut w = binomial_pmfs(n, q)?;
    w[0] = 0.0;
    w[1] = 0.0;
    for x in &mut w {
        *x /= norm;
    }
    Ok(w)
}

/// Predicted MBS transmissions with random coverage: the full-coverage
/// composition averaged over the truncated-binomial law of the dual-graph
/// vertex count.
pub fn chi_expected_general(params: &TheoryParams) -> Result<f64> {
    let pi_dual = pi_dual_general(params)?;
    let r = params.repetition()?;
    let u = params.num_clients;
    let weights = truncated_binomial_weights(r * u, params.sigma_c * params.p_cov)?;
    if weights.is_empty() {
        return Ok(chi_estimate(u as f64, params.num_files, params.sigma_u, params.o2));
    }
    let mut total = 0.0;
    for (nu, &w) in weights.iter().enumerate().skip(2) {
        if w == 0.0 {
            continue;
        }
        let n_fc = n_fc_or_fallback(nu as f64, pi_dual, params.o1)?.min(u as f64);
        total += w * chi_estimate(u as f64 - n_fc, params.num_files, params.sigma_u, params.o2);
    }
    Ok(total)
}

/// Bounds on the greedy MBS transmissions for an MBS graph of `nu`
/// vertices, capped at `F - C`.
pub fn gvs_ggc_bounds(nu: f64, num_files: usize, num_fcs: usize, sigma_u: f64) -> Result<(f64, f64)> {
    if !(nu >= 3.0) {
        return Err(Error::InvalidInput(format!("bounds need nu >= 3, got {nu}")));
    }
    let cap = (num_files as f64 - num_fcs as f64).max(0.0);
    let pi = pi_mbs(nu, num_files, sigma_u)?;
    if pi <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let log_d_nu = nu.ln() / (1.0 / (1.0 - pi)).ln();
    let base = nu / log_d_nu;
    let lower = (base / 2.0).min(cap);
    let upper = ((1.0 + 5.0 * nu.ln().ln() / nu.ln()) * base).min(cap);
    Ok((lower, upper))
}

/// Least-squares `o2` for observed MBS transmissions at given residual
/// sizes, floored at zero.
pub fn calibrate_o2(observations: &[(f64, f64)], num_files: usize, sigma_u: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(nu, observed) in observations {
        if nu <= 1.0 {
            continue;
        }
        let g = (1.0 / (1.0 - pi_mbs_unchecked(nu, num_files, sigma_u))).ln() * nu / nu.ln();
        num += observed * g;
        den += g * g;
    }
    if den == 0.0 {
        return 0.0;
    }
    (num / den - 0.5).max(0.0)
}

/// Every closed-form quantity for one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TheoryEstimate {
    pub pi_mbs: f64,
    pub pi_dual: f64,
    pub n_fc_expected: f64,
    pub chi_expected: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// Evaluates the full-coverage formulas when `p_cov` is 1 and the general
/// ones otherwise. Bounds use the predicted residual and are NaN when it has
/// fewer than three clients.
pub fn estimate(params: &TheoryParams) -> Result<TheoryEstimate> {
    params.check()?;
    let r = params.repetition()?;
    let u = params.num_clients as f64;
    let full = params.p_cov >= 1.0;
    let pi_dual = if full { pi_dual_full_coverage(params)? } else { pi_dual_general(params)? };
    let n_fc = if full {
        n_fc_or_fallback(u * r as f64, pi_dual, params.o1)?.min(u)
    } else {
        let weights = truncated_binomial_weights(r * params.num_clients, params.sigma_c * params.p_cov)?;
        weights
            .iter()
            .enumerate()
            .skip(2)
            .filter(|(_, &w)| w > 0.0)
            .map(|(nu, &w)| n_fc_or_fallback(nu as f64, pi_dual, params.o1).map(|n| w * n.min(u)))
            .sum::<Result<f64>>()?
            .min(u)
    };
    let chi = if full { chi_expected_full_coverage(params)? } else { chi_expected_general(params)? };
    let pi_m = if u >= 2.0 { pi_mbs(u, params.num_files, params.sigma_u)? } else { 0.0 };
    let (lower_bound, upper_bound) = gvs_ggc_bounds(u - n_fc, params.num_files, params.num_fcs, params.sigma_u)
        .unwrap_or((f64::NAN, f64::NAN));
    Ok(TheoryEstimate { pi_mbs: pi_m, pi_dual, n_fc_expected: n_fc, chi_expected: chi, lower_bound, upper_bound })
}
