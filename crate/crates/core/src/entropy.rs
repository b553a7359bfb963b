//! Normalized p-norms, Wehrl and Rényi–Wehrl entropies and their lower bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sphere::{pairwise_sum, QuadratureRule, SpherePoint};
use crate::spin::{binomial_row, majorana_roots, MixedState, SpinState};

/// Norm exponents q ≥ p ≥ 1, optionally on the lattice q = p + n/j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
    pub lattice_n: Option<u32>,
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 1.0) || !(q >= p) || !q.is_finite() {
            return invalid(format!("exponents need q >= p >= 1, got p = {p}, q = {q}"));
        }
        Ok(ExponentPair { p, q, lattice_n: None })
    }

    /// q = p + n/j.
    pub fn lattice(twice_j: usize, p: f64, n: u32) -> Result<Self> {
        let q = p + 2.0 * n as f64 / twice_j as f64;
        Ok(ExponentPair { lattice_n: Some(n), ..ExponentPair::new(p, q)? })
    }

    /// The lattice index n if q − p = n/j within 1e−12.
    pub fn lattice_index(&self, twice_j: usize) -> Option<u32> {
        let n = (self.q - self.p) * twice_j as f64 / 2.0;
        let r = n.round();
        ((n - r).abs() <= 1e-12 * twice_j as f64 / 2.0).then_some(r as u32)
    }
}

/// |f|² sampled on a rule.
pub(crate) struct DensitySamples {
    weights: Vec<f64>,
    rho: Vec<f64>,
}

impl DensitySamples {
    pub(crate) fn of_state(state: &SpinState, rule: &QuadratureRule) -> Result<Self> {
        Self::from_fn(rule, |z| state.husimi(z))
    }

    pub(crate) fn from_fn<F: Fn(&SpherePoint) -> f64>(rule: &QuadratureRule, rho: F) -> Result<Self> {
        let mut values = Vec::with_capacity(rule.len());
        for (i, z) in rule.nodes().iter().enumerate() {
            let v = rho(z);
            if !v.is_finite() {
                return Err(Error::NumericDomain { index: i, point: z.to_string() });
            }
            values.push(v);
        }
        Ok(DensitySamples { weights: rule.weights().to_vec(), rho: values })
    }

    /// ∫ |f|^p dμ.
    pub(crate) fn power_integral(&self, p: f64) -> f64 {
        let half = p / 2.0;
        let terms: Vec<f64> = self.weights.iter().zip(&self.rho).map(|(w, r)| w * r.powf(half)).collect();
        pairwise_sum(&terms)
    }

    /// ∫ |f|^p dμ for several p, sharing one logarithm per node.
    pub(crate) fn power_integrals(&self, ps: &[f64]) -> Vec<f64> {
        let logs: Vec<f64> = self.rho.iter().map(|r| r.ln()).collect();
        let mut terms = vec![0.0; logs.len()];
        ps.iter()
            .map(|p| {
                let half = p / 2.0;
                for ((t, w), l) in terms.iter_mut().zip(&self.weights).zip(&logs) {
                    *t = w * (half * l).exp();
                }
                pairwise_sum(&terms)
            })
            .collect()
    }

    /// ∫ |f|² ln|f|² dμ with x ln x extended by 0.
    pub(crate) fn entropy_integral(&self) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.rho)
            .map(|(w, &r)| if r < 1e-300 { 0.0 } else { w * r * r.ln() })
            .collect();
        pairwise_sum(&terms)
    }
}

fn check_normalized(state: &SpinState) -> Result<()> {
    let n = state.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("state must be normalized, ||f||_2 = {n}")));
    }
    Ok(())
}

fn is_even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as u64) % 2 == 0 && p < 1e6
}

/// ((pj+1) ∫|f|^p dμ)^{1/p} for even p, by expanding P^{p/2}.
pub fn p_norm_exact(state: &SpinState, p: f64) -> Result<f64> {
    if !(p >= 2.0) || !is_even_integer(p) {
        return invalid(format!("exact norm needs an even integer p, got {p}"));
    }
    let half = (p as usize) / 2;
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..half {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + state.twice_j()];
        for (i, a) in poly.iter().enumerate() {
            for (k, c) in state.coeffs().iter().enumerate() {
                next[i + k] += a * c;
            }
        }
        poly = next;
    }
    let binom = binomial_row(poly.len() - 1);
    let terms: Vec<f64> = poly.iter().zip(&binom).map(|(a, b)| a.norm_sqr() / b).collect();
    Ok(pairwise_sum(&terms).powf(1.0 / p))
}

/// ((pj+1) Σ w |f|^p)^{1/p} on the given rule as is.
pub fn p_norm_by_quadrature(state: &SpinState, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(p >= 1.0) {
        return invalid(format!("p-norm needs p >= 1, got {p}"));
    }
    let samples = DensitySamples::of_state(state, rule)?;
    Ok(((p * state.j() + 1.0) * samples.power_integral(p)).powf(1.0 / p))
}

/// ∫ |f|^p dμ on the rule adapted to the zeros of `state`.
pub(crate) fn power_integral(state: &SpinState, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if state.is_zero() {
        return Ok(0.0);
    }
    let adapted = state.adapted_rule(rule)?;
    Ok(DensitySamples::of_state(state, &adapted)?.power_integral(p))
}

/// The normalized p-norm ((pj+1) ∫|f|^p dμ)^{1/p}.
///
/// Even integer p is evaluated exactly; other p by quadrature on a rule
/// adapted to the zeros of f.
pub fn normalized_p_norm(state: &SpinState, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return invalid(format!("p-norm needs p >= 1, got {p}"));
    }
    if state.is_zero() {
        return Ok(0.0);
    }
    if is_even_integer(p) {
        return p_norm_exact(state, p);
    }
    Ok(((p * state.j() + 1.0) * power_integral(state, p, rule)?).powf(1.0 / p))
}

/// Normalized norms for several exponents from one sampling of the state.
pub fn normalized_p_norms(state: &SpinState, ps: &[f64], rule: &QuadratureRule) -> Result<Vec<f64>> {
    if let Some(p) = ps.iter().find(|p| !(**p >= 1.0) || !p.is_finite()) {
        return invalid(format!("p-norm needs p >= 1, got {p}"));
    }
    if state.is_zero() {
        return Ok(vec![0.0; ps.len()]);
    }
    let odd: Vec<f64> = ps.iter().copied().filter(|p| !is_even_integer(*p)).collect();
    let mut sampled = if odd.is_empty() {
        Vec::new()
    } else {
        DensitySamples::of_state(state, &state.adapted_rule(rule)?)?.power_integrals(&odd)
    }
    .into_iter();
    ps.iter()
        .map(|&p| {
            if is_even_integer(p) {
                p_norm_exact(state, p)
            } else {
                let integral = sampled.next().unwrap_or_default();
                Ok(((p * state.j() + 1.0) * integral).powf(1.0 / p))
            }
        })
        .collect()
}

/// S(|f|²) = −(2j+1) ∫ |f|² ln|f|² dμ.
pub fn wehrl_entropy(state: &SpinState, rule: &QuadratureRule) -> Result<f64> {
    check_normalized(state)?;
    let adapted = state.adapted_rule(rule)?;
    let samples = DensitySamples::of_state(state, &adapted)?;
    Ok(-(state.twice_j() as f64 + 1.0) * samples.entropy_integral())
}

/// (2/(2−q)) ln ‖f‖_q^q with the normalized norm.
pub fn renyi_wehrl(state: &SpinState, q: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(q > 2.0) || !q.is_finite() {
        return invalid(format!("Renyi-Wehrl entropy needs q > 2, got {q}"));
    }
    check_normalized(state)?;
    let norm_q = if is_even_integer(q) {
        p_norm_exact(state, q)?.powf(q)
    } else {
        (q * state.j() + 1.0) * power_integral(state, q, rule)?
    };
    Ok(2.0 / (2.0 - q) * norm_q.ln())
}

/// −(2j+1) ∫ ρ ln ρ dμ with ρ = Σ_k |f_k|².
pub fn mixed_wehrl(mixed: &MixedState, rule: &QuadratureRule) -> Result<f64> {
    let mut centers = Vec::new();
    for m in mixed.members() {
        if !m.is_zero() {
            centers.extend(majorana_roots(m)?);
        }
    }
    let adapted = rule.centered_on(&centers);
    let samples = DensitySamples::from_fn(&adapted, |z| mixed.density(z))?;
    Ok(-(mixed.twice_j() as f64 + 1.0) * samples.entropy_integral())
}

/// 2j/(2j+1).
pub fn lieb_bound(twice_j: usize) -> f64 {
    twice_j as f64 / (twice_j as f64 + 1.0)
}

/// 2j ln(1 + 1/(2j+1)).
pub fn theorem2_bound(twice_j: usize) -> f64 {
    twice_j as f64 * (1.0 / (twice_j as f64 + 1.0)).ln_1p()
}

/// lieb_bound − theorem2_bound, computed without cancellation for large j.
pub fn bound_gap(twice_j: usize) -> f64 {
    let a = twice_j as f64 + 1.0;
    // 1 − a ln(1 + 1/a)
    let inner = if a < 1e3 {
        1.0 - a * (1.0 / a).ln_1p()
    } else {
        let x = 1.0 / a;
        (1..12).map(|k| (if k % 2 == 1 { 1.0 } else { -1.0 }) * x.powi(k) / (k as f64 + 1.0)).sum()
    };
    twice_j as f64 / a * inner
}

/// Entropy summary of a state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub twice_j: usize,
    pub wehrl: f64,
    pub renyi_values: Vec<(f64, f64)>,
    pub thm2_bound: f64,
    pub lieb_bound: f64,
    pub slack_thm2: f64,
    pub slack_lieb: f64,
}

pub fn entropy_report(state: &SpinState, rule: &QuadratureRule) -> Result<EntropyReport> {
    if state.is_zero() {
        return invalid("entropy of the zero state");
    }
    let f = state.normalized()?;
    let twice_j = f.twice_j();
    let wehrl = wehrl_entropy(&f, rule)?;
    let inv_j = 2.0 / twice_j as f64;
    let mut renyi_values = Vec::new();
    let mut qs = vec![2.0 + inv_j, 2.0 + 2.0 * inv_j, 4.0];
    qs.sort_by(f64::total_cmp);
    qs.dedup();
    for q in qs {
        renyi_values.push((q, renyi_wehrl(&f, q, rule)?));
    }
    let thm2 = theorem2_bound(twice_j);
    let lieb = lieb_bound(twice_j);
    Ok(EntropyReport {
        twice_j,
        wehrl,
        renyi_values,
        thm2_bound: thm2,
        lieb_bound: lieb,
        slack_thm2: wehrl - thm2,
        slack_lieb: wehrl - lieb,
    })
}

/// (s·d/ds ∫|f|^s dμ at s = 2 by central difference, ∫|f|² ln|f|² dμ).
pub fn norm_log_derivative_check(state: &SpinState, ds: f64, rule: &QuadratureRule) -> Result<(f64, f64)> {
    check_normalized(state)?;
    if !(ds > 0.0 && ds <= 1e-3) {
        return invalid(format!("ds must lie in (0, 1e-3], got {ds}"));
    }
    let adapted = state.adapted_rule(rule)?;
    let samples = DensitySamples::of_state(state, &adapted)?;
    let up = samples.power_integral(2.0 + ds);
    let down = samples.power_integral(2.0 - ds);
    let lhs = 2.0 * (up - down) / (2.0 * ds);
    Ok((lhs, samples.entropy_integral()))
}
