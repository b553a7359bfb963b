//! Multistart local searches over normalized states, and randomized norm scans.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::entropy::{normalized_p_norms, p_norm_by_quadrature, p_norm_exact, wehrl_entropy, ExponentPair};
use crate::error::{invalid, Result};
use crate::sphere::{pairwise_sum, QuadratureRule, SpherePoint};
use crate::spin::{coherent_state, majorana_roots, state_from_roots, SpinState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parametrization {
    Coefficients,
    MajoranaRoots,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub seed: u64,
    pub num_starts: usize,
    pub max_iters: usize,
    pub gradient_step: f64,
    pub tolerance: f64,
    pub parametrization: Parametrization,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            num_starts: 50,
            max_iters: 1000,
            gradient_step: 1e-5,
            tolerance: 1e-15,
            parametrization: Parametrization::Coefficients,
        }
    }
}

impl SearchOptions {
    /// Defaults with the start count scaled to the spin.
    pub fn for_spin(twice_j: usize) -> Self {
        SearchOptions { num_starts: default_num_starts(twice_j), ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.num_starts == 0 || self.max_iters == 0 {
            return invalid("num_starts and max_iters must be positive");
        }
        if !(self.tolerance > 0.0) || !(self.gradient_step > 0.0) {
            return invalid("tolerance and gradient_step must be positive");
        }
        Ok(())
    }
}

/// 50 starts up to j = 2, then proportional to 4j.
pub fn default_num_starts(twice_j: usize) -> usize {
    if twice_j <= 4 {
        50
    } else {
        (25 * twice_j).div_ceil(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_state: SpinState,
    pub best_value: f64,
    pub per_start_values: Vec<f64>,
    /// Whether the winning start met the stopping rule before `max_iters`.
    pub converged: bool,
    /// Iterations summed over all starts.
    pub iterations_used: usize,
}

fn gaussian_state(twice_j: usize, rng: &mut ChaCha8Rng) -> SpinState {
    let coords: Vec<Complex64> = (0..=twice_j)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    SpinState::from_orthonormal_coords(twice_j, &coords)
        .and_then(|s| s.normalized())
        .expect("a Gaussian draw is almost surely nonzero")
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A normalized state drawn from the unitarily invariant distribution.
pub fn random_state(twice_j: usize, seed: u64) -> SpinState {
    gaussian_state(twice_j, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The `index`-th state of the independent stream family keyed by `seed`.
pub fn random_state_in_stream(twice_j: usize, seed: u64, index: u64) -> SpinState {
    gaussian_state(twice_j, &mut stream_rng(seed, index + 1))
}

/// A chart on normalized states used by the descent.
trait Chart {
    fn to_state(&self, x: &[f64]) -> Result<SpinState>;
    fn retract(&self, x: Vec<f64>) -> Vec<f64>;
    fn project(&self, _x: &[f64], _g: &mut [f64]) {}
}

struct CoefficientChart {
    twice_j: usize,
}

impl CoefficientChart {
    fn point(state: &SpinState) -> Vec<f64> {
        state.orthonormal_coords().iter().flat_map(|c| [c.re, c.im]).collect()
    }
}

impl Chart for CoefficientChart {
    fn to_state(&self, x: &[f64]) -> Result<SpinState> {
        let coords: Vec<Complex64> = x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        SpinState::from_orthonormal_coords(self.twice_j, &coords)?.normalized()
    }

    fn retract(&self, mut x: Vec<f64>) -> Vec<f64> {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= n);
        x
    }

    fn project(&self, x: &[f64], g: &mut [f64]) {
        // remove the radial and the global-phase directions
        let radial: f64 = x.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
        let phase_dir: Vec<f64> = x.chunks(2).flat_map(|c| [-c[1], c[0]]).collect();
        let phase: f64 = phase_dir.iter().zip(g.iter()).map(|(a, b)| a * b).sum();
        for i in 0..g.len() {
            g[i] -= radial * x[i] + phase * phase_dir[i];
        }
    }
}

struct RootChart {
    twice_j: usize,
}

impl RootChart {
    fn point(state: &SpinState) -> Result<Vec<f64>> {
        Ok(majorana_roots(state)?
            .iter()
            .map(|r| match r {
                SpherePoint::Finite(z) => *z,
                SpherePoint::Infinity => Complex64::new(1e8, 0.0),
            })
            .flat_map(|z| [z.re, z.im])
            .collect())
    }
}

impl Chart for RootChart {
    fn to_state(&self, x: &[f64]) -> Result<SpinState> {
        let roots: Vec<SpherePoint> = x.chunks(2).map(|c| SpherePoint::new(c[0], c[1])).collect();
        state_from_roots(self.twice_j, &roots)
    }

    fn retract(&self, x: Vec<f64>) -> Vec<f64> {
        x
    }
}

struct Descent {
    x: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projected gradient descent with Barzilai–Borwein steps and Armijo backtracking.
fn descend<C, F>(chart: &C, x0: Vec<f64>, objective: &F, opts: &SearchOptions, max_iters: usize) -> Result<Descent>
where
    C: Chart,
    F: Fn(&SpinState) -> Result<f64>,
{
    let h = opts.gradient_step;
    let eval = |x: &[f64]| -> Result<f64> { objective(&chart.to_state(x)?) };
    let gradient = |x: &[f64]| -> Result<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        let mut y = x.to_vec();
        for i in 0..x.len() {
            y[i] = x[i] + h;
            let up = eval(&y)?;
            y[i] = x[i] - h;
            let down = eval(&y)?;
            y[i] = x[i];
            g[i] = (up - down) / (2.0 * h);
        }
        chart.project(x, &mut g);
        Ok(g)
    };

    let mut x = chart.retract(x0);
    let mut value = eval(&x)?;
    let mut g = gradient(&x)?;
    let mut step = 0.1 / dot(&g, &g).sqrt().max(1e-12);
    let mut quiet = 0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        let gg = dot(&g, &g);
        if gg == 0.0 {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut t = step;
        for _ in 0..50 {
            let trial = chart.retract(x.iter().zip(&g).map(|(a, b)| a - t * b).collect());
            let v = eval(&trial)?;
            if v <= value - 1e-4 * t * gg {
                accepted = Some((trial, v));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, v_new)) = accepted else {
            converged = true;
            break;
        };
        let g_new = gradient(&x_new)?;
        step = bb_step(&x_new, &x, &g_new, &g, t);
        let improvement = value - v_new;
        x = x_new;
        value = v_new;
        g = g_new;
        quiet = if improvement < opts.tolerance { quiet + 1 } else { 0 };
        if quiet >= 3 {
            converged = true;
            break;
        }
    }

    // Once value differences drown in rounding the gradient is still resolvable:
    // keep stepping while its norm decreases.
    while converged && iterations < max_iters {
        let gn = dot(&g, &g).sqrt();
        if gn <= opts.tolerance {
            break;
        }
        iterations += 1;
        let mut accepted = None;
        let mut t = step;
        for _ in 0..30 {
            let trial = chart.retract(x.iter().zip(&g).map(|(a, b)| a - t * b).collect());
            let g_trial = gradient(&trial)?;
            if dot(&g_trial, &g_trial).sqrt() < 0.9 * gn {
                accepted = Some((trial, g_trial));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, g_new)) = accepted else { break };
        step = bb_step(&x_new, &x, &g_new, &g, t);
        x = x_new;
        g = g_new;
    }
    Ok(Descent { x, iterations, converged })
}

fn bb_step(x_new: &[f64], x: &[f64], g_new: &[f64], g: &[f64], fallback: f64) -> f64 {
    let s: Vec<f64> = x_new.iter().zip(x).map(|(a, b)| a - b).collect();
    let y: Vec<f64> = g_new.iter().zip(g).map(|(a, b)| a - b).collect();
    let sy = dot(&s, &y);
    if sy > 0.0 {
        dot(&s, &s) / sy
    } else {
        2.0 * fallback
    }
}

/// One local search from `start`, returning the final state.
fn local_search<F>(start: SpinState, objective: &F, opts: &SearchOptions) -> Result<(SpinState, usize, bool)>
where
    F: Fn(&SpinState) -> Result<f64>,
{
    let twice_j = start.twice_j();
    let coeff_chart = CoefficientChart { twice_j };
    let mut state = start;
    let mut used = 0;
    let mut budget = opts.max_iters;
    if opts.parametrization == Parametrization::MajoranaRoots {
        let chart = RootChart { twice_j };
        let roots_budget = opts.max_iters / 2;
        let d = descend(&chart, RootChart::point(&state)?, objective, opts, roots_budget)?;
        state = chart.to_state(&d.x)?;
        used += d.iterations;
        budget = opts.max_iters - d.iterations;
    }
    let d = descend(&coeff_chart, CoefficientChart::point(&state), objective, opts, budget.max(1))?;
    used += d.iterations;
    Ok((coeff_chart.to_state(&d.x)?, used, d.converged))
}

/// Runs all starts; `objective` is minimized, `refine` gives the reported value.
fn multistart<F, R>(twice_j: usize, opts: &SearchOptions, objective: F, refine: R, maximize: bool) -> Result<SearchResult>
where
    F: Fn(&SpinState) -> Result<f64>,
    R: Fn(&SpinState) -> Result<f64>,
{
    opts.validate()?;
    let mut best: Option<(SpinState, f64, bool)> = None;
    let mut per_start_values = Vec::with_capacity(opts.num_starts);
    let mut iterations_used = 0;
    for k in 0..opts.num_starts {
        let start = random_state_in_stream(twice_j, opts.seed, k as u64);
        let (state, used, converged) = local_search(start, &objective, opts)?;
        iterations_used += used;
        let value = refine(&state)?;
        per_start_values.push(value);
        let better = match &best {
            None => true,
            Some((_, v, _)) => {
                if maximize {
                    value > *v
                } else {
                    value < *v
                }
            }
        };
        if better {
            best = Some((state, value, converged));
        }
    }
    let (best_state, best_value, converged) = best.expect("at least one start");
    Ok(SearchResult { best_state, best_value, per_start_values, converged, iterations_used })
}

/// Direction of the spin expectation, as a point of the sphere.
///
/// For a coherent state this is the peak of the Husimi density; it depends
/// smoothly on the state.
fn bloch_peak(state: &SpinState) -> SpherePoint {
    let a = state.orthonormal_coords();
    let n = state.twice_j() as f64;
    let norm: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let mut x = Complex64::new(0.0, 0.0);
    let mut m = 0.0;
    for k in 0..a.len() {
        m += k as f64 * a[k].norm_sqr();
        if k + 1 < a.len() {
            x += a[k].conj() * a[k + 1] * ((k as f64 + 1.0) * (n - k as f64)).sqrt();
        }
    }
    let u = 2.0 * x.conj() / (n * norm);
    let vz = 1.0 - 2.0 * m / (n * norm);
    let len = (u.norm_sqr() + vz * vz).sqrt();
    if vz >= 0.0 {
        SpherePoint::Finite(u / (len + vz))
    } else if u.norm_sqr() == 0.0 {
        SpherePoint::Infinity
    } else {
        SpherePoint::Finite((len - vz) / u.conj())
    }
}

/// Wehrl entropy on the base rule turned towards the state's peak, so that a
/// graded pole follows the zeros of near-coherent states. Smooth in the state.
fn tracking_wehrl(state: &SpinState, rule: &QuadratureRule) -> Result<f64> {
    let rule = rule.rotated_to(&bloch_peak(state));
    let terms: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(z, w)| {
            let r = state.husimi(z);
            if r < 1e-300 {
                0.0
            } else {
                w * r * r.ln()
            }
        })
        .collect();
    Ok(-(state.twice_j() as f64 + 1.0) * pairwise_sum(&terms))
}

/// Multistart minimization of the Wehrl entropy over normalized spin-j states.
pub fn minimize_wehrl(twice_j: usize, opts: &SearchOptions, rule: &QuadratureRule) -> Result<SearchResult> {
    if twice_j == 0 {
        return invalid("twice_j must be positive");
    }
    multistart(twice_j, opts, |f| tracking_wehrl(f, rule), |f| wehrl_entropy(f, rule), false)
}

fn smooth_norm(state: &SpinState, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if p.fract() == 0.0 && (p as u64) % 2 == 0 {
        p_norm_exact(state, p)
    } else {
        p_norm_by_quadrature(state, p, &rule.rotated_to(&bloch_peak(state)))
    }
}

/// Multistart maximization of nnorm_q / nnorm_p.
pub fn maximize_norm_ratio(
    twice_j: usize,
    exponents: &ExponentPair,
    opts: &SearchOptions,
    rule: &QuadratureRule,
) -> Result<SearchResult> {
    let (p, q) = (exponents.p, exponents.q);
    if !(q >= p && p >= 1.0) {
        return invalid(format!("need q >= p >= 1, got p = {p}, q = {q}"));
    }
    if twice_j == 0 {
        return invalid("twice_j must be positive");
    }
    if p == q {
        opts.validate()?;
        return Ok(SearchResult {
            best_state: random_state_in_stream(twice_j, opts.seed, 0),
            best_value: 1.0,
            per_start_values: vec![1.0; opts.num_starts],
            converged: true,
            iterations_used: 0,
        });
    }
    let objective = |f: &SpinState| Ok(-smooth_norm(f, q, rule)? / smooth_norm(f, p, rule)?);
    let refine = |f: &SpinState| {
        let n = normalized_p_norms(f, &[p, q], rule)?;
        Ok(n[1] / n[0])
    };
    multistart(twice_j, opts, objective, refine, true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u32,
    pub q: f64,
    pub max_ratio: f64,
    pub violations: usize,
    /// nnorm_q / nnorm_p of a coherent state.
    pub coherent_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub twice_j: usize,
    pub p: f64,
    pub num_samples: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn total_violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations).sum()
    }
}

/// Tabulates max nnorm_{p+n/j}/nnorm_p over random states for n = 1..n_max.
pub fn monotonicity_scan(
    twice_j: usize,
    p: f64,
    n_max: u32,
    num_samples: usize,
    seed: u64,
    rule: &QuadratureRule,
) -> Result<ScanReport> {
    if twice_j == 0 || n_max == 0 {
        return invalid("twice_j and n_max must be positive");
    }
    let j = twice_j as f64 / 2.0;
    if !(p > 1.0 / j) {
        return invalid(format!("need p > 1/j = {}, got {p}", 1.0 / j));
    }
    let mut exps = vec![p];
    for n in 1..=n_max {
        exps.push(ExponentPair::lattice(twice_j, p, n)?.q);
    }
    let ratios = |f: &SpinState| -> Result<Vec<f64>> {
        let norms = normalized_p_norms(f, &exps, rule)?;
        Ok(norms[1..].iter().map(|v| v / norms[0]).collect())
    };
    let coherent = ratios(&coherent_state(twice_j, &SpherePoint::new(0.3, -0.7))?)?;
    let mut rows: Vec<ScanRow> = (1..=n_max)
        .zip(&exps[1..])
        .zip(&coherent)
        .map(|((n, &q), &c)| ScanRow { n, q, max_ratio: f64::NEG_INFINITY, violations: 0, coherent_ratio: c })
        .collect();
    for k in 0..num_samples {
        let f = random_state_in_stream(twice_j, seed, k as u64);
        for (row, r) in rows.iter_mut().zip(ratios(&f)?) {
            row.max_ratio = row.max_ratio.max(r);
            if r > 1.0 + 1e-9 {
                row.violations += 1;
            }
        }
    }
    Ok(ScanReport { twice_j, p, num_samples, rows })
}
