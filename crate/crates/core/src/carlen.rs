//! Gradient identities for |f|^{q/2} and the variational functionals built on them.

use serde::{Deserialize, Serialize};

use crate::entropy::ExponentPair;
use crate::error::{invalid, Error, Result};
use crate::sphere::{pairwise_sum, QuadratureRule, SpherePoint};
use crate::spin::{Chart, ChartJet, SpinState};

const NEAR_ZERO: f64 = 1e-24;
const TINY_EPSILON: f64 = 1e-30;

/// Both sides of ∫|∂|f|^{q/2}|² d²z/π = (qj/4) ∫|f|^q dμ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlenCheck {
    pub twice_j: usize,
    pub q: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_residual: f64,
    pub rule: (usize, usize),
}

/// (1+|z|²)²|∂|f|^{q/2}|² from one local jet.
fn gradient_density(jet: &ChartJet, q: f64) -> f64 {
    let mut rho = jet.rho();
    if rho < NEAR_ZERO {
        rho += TINY_EPSILON * jet.s.powf(-2.0 * jet.j);
    }
    q * q / 16.0 * rho.powf(q / 2.0 - 1.0) * jet.gradient_density()
}

/// |∂|f|^{q/2}|² at a finite point.
pub fn abs_power_gradient_sq(state: &SpinState, q: f64, z: &SpherePoint) -> Result<f64> {
    let Some(c) = z.finite() else {
        return invalid("gradient density needs a finite point");
    };
    if !(q > 0.0) {
        return invalid(format!("q must be positive, got {q}"));
    }
    let jet = state.jet(z);
    if jet.p.norm_sqr() == 0.0 && q < 4.0 {
        return Err(Error::NumericDomain { index: 0, point: z.to_string() });
    }
    let rho = jet.rho();
    let s = 1.0 + c.norm_sqr();
    Ok(q * q / 16.0 * rho.powf(q / 2.0 - 1.0) * jet.gradient_density() / (s * s))
}

/// Per-node data shared by the gradient integrals.
struct GradientSamples {
    weights: Vec<f64>,
    jets: Vec<ChartJet>,
    resolution: (usize, usize),
}

impl GradientSamples {
    fn new(state: &SpinState, rule: &QuadratureRule) -> Result<Self> {
        if state.is_zero() {
            return invalid("gradient integrals of the zero state");
        }
        let adapted = state.adapted_rule(rule)?;
        let jets = adapted.nodes().iter().map(|z| state.jet(z)).collect();
        Ok(GradientSamples { weights: adapted.weights().to_vec(), jets, resolution: rule.resolution() })
    }

    fn sum<F: Fn(&ChartJet) -> f64>(&self, f: F) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.jets.len());
        for (i, (w, jet)) in self.weights.iter().zip(&self.jets).enumerate() {
            let v = f(jet);
            if !v.is_finite() {
                return Err(Error::NumericDomain { index: i, point: format!("{}", jet.x) });
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// ∫ |∂|f|^{q/2}|² d²z/π.
    fn gradient_integral(&self, q: f64) -> Result<f64> {
        self.sum(|jet| gradient_density(jet, q))
    }

    /// ∫ |f|^q dμ.
    fn power_integral(&self, q: f64) -> Result<f64> {
        self.sum(|jet| jet.rho().powf(q / 2.0))
    }
}

/// Carlen identity check for several exponents sharing one sampling of the state.
pub fn carlen_residuals(state: &SpinState, qs: &[f64], rule: &QuadratureRule) -> Result<Vec<CarlenCheck>> {
    if let Some(q) = qs.iter().find(|q| !(**q > 0.0)) {
        return invalid(format!("q must be positive, got {q}"));
    }
    let samples = GradientSamples::new(state, rule)?;
    let j = state.j();
    qs.iter()
        .map(|&q| {
            let lhs = samples.gradient_integral(q)?;
            let rhs = q * j / 4.0 * samples.power_integral(q)?;
            Ok(CarlenCheck {
                twice_j: state.twice_j(),
                q,
                lhs,
                rhs,
                rel_residual: (lhs - rhs).abs() / rhs.abs().max(1e-300),
                rule: samples.resolution,
            })
        })
        .collect()
}

pub fn carlen_residual(state: &SpinState, q: f64, rule: &QuadratureRule) -> Result<CarlenCheck> {
    Ok(carlen_residuals(state, &[q], rule)?.remove(0))
}

/// Invariant-measure densities of the ε-regularized identity at one point:
/// (left side, right side, error term).
fn regularized_densities(jet: &ChartJet, q: f64, eps: f64) -> (f64, f64, f64) {
    let j = jet.j;
    let rho = jet.rho();
    let (eps_hat, s_deps, t) = match jet.chart {
        Chart::Z => {
            let eh = eps * jet.s.powf(-2.0 * j);
            (eh, -2.0 * j * eh * jet.x.conj(), eps * jet.dp.norm_sqr() * jet.s.powf(2.0 - 4.0 * j))
        }
        Chart::W => {
            let w = jet.x;
            let r2 = w.norm_sqr();
            let scale = eps * jet.s.powf(-2.0 * j);
            let eh = scale * r2.powf(2.0 * j);
            let s_deps = -2.0 * j * scale * r2.powf(2.0 * j - 1.0) * w;
            let lead = jet.p * (2.0 * j) - w * jet.dp;
            let t = eps * r2.powf(2.0 * j - 1.0) * jet.s.powf(2.0 - 4.0 * j) * lead.norm_sqr();
            (eh, s_deps, t)
        }
    };
    let base = rho + eps_hat;
    let grad = jet.scaled_dbar_rho() + s_deps;
    let lhs = q * q / 16.0 * base.powf(q / 2.0 - 2.0) * grad.norm_sqr();
    let rhs = q * j / 4.0 * base.powf(q / 2.0);
    let err = q / 8.0 * base.powf(q / 2.0 - 2.0) * t;
    (lhs, rhs, err)
}

/// (LHS(ε), RHS(ε), E(ε)) of the regularized identity LHS + E = RHS, where |f|² is
/// replaced by (|P|² + ε)(1+|z|²)^{-2j}.
pub fn regularized_identity(state: &SpinState, q: f64, eps: f64, rule: &QuadratureRule) -> Result<(f64, f64, f64)> {
    if !(eps >= 0.0) {
        return invalid(format!("epsilon must be nonnegative, got {eps}"));
    }
    let samples = GradientSamples::new(state, rule)?;
    let lhs = samples.sum(|jet| regularized_densities(jet, q, eps).0)?;
    let rhs = samples.sum(|jet| regularized_densities(jet, q, eps).1)?;
    let err = samples.sum(|jet| regularized_densities(jet, q, eps).2)?;
    Ok((lhs, rhs, err))
}

/// E(ε) = (εq/8) ∫ (|P|²+ε)^{q/2−2} |P'|² (1+|z|²)^{−qj} d²z/π.
pub fn carlen_epsilon_error(state: &SpinState, q: f64, eps: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(eps >= 0.0) {
        return invalid(format!("epsilon must be nonnegative, got {eps}"));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let samples = GradientSamples::new(state, rule)?;
    samples.sum(|jet| regularized_densities(jet, q, eps).2)
}

/// ∫ u² dμ − (4/(qj(qj+2))) ∫ |∂u|² d²z/π with u = |f|^{q/2}.
pub fn variational_functional(state: &SpinState, q: f64, exponents: &ExponentPair, rule: &QuadratureRule) -> Result<f64> {
    if q != exponents.q {
        return invalid(format!("q = {q} does not match exponents.q = {}", exponents.q));
    }
    let samples = GradientSamples::new(state, rule)?;
    let qj = q * state.j();
    Ok(samples.power_integral(q)? - 4.0 / (qj * (qj + 2.0)) * samples.gradient_integral(q)?)
}

/// (‖f‖_q^q / ‖f‖_p^q, the same ratio with the numerator rewritten through the
/// gradient identity), both with un-prefactored norms.
pub fn step1_ratio_check(state: &SpinState, exponents: &ExponentPair, rule: &QuadratureRule) -> Result<(f64, f64)> {
    let (p, q) = (exponents.p, exponents.q);
    if !(q >= p && p >= 1.0) {
        return invalid(format!("need q >= p >= 1, got p = {p}, q = {q}"));
    }
    let samples = GradientSamples::new(state, rule)?;
    let qj = q * state.j();
    let norm_q = samples.power_integral(q)?;
    let norm_p = samples.power_integral(p)?.powf(q / p);
    let plain = if p == q { 1.0 } else { norm_q / norm_p };
    let grad = samples.gradient_integral(q)?;
    let carlen = (norm_q - 4.0 / (qj * (qj + 2.0)) * grad) / ((1.0 - 1.0 / (qj + 2.0)) * norm_p);
    Ok((plain, carlen))
}
