//! The rotationally symmetric Euler–Lagrange problem in the polar angle θ:
//!
//! u'' + cot θ u' + β u − α u^{s−1} = 0,  u'(0) = 0,
//!
//! with β = qj(qj+2)/4, α = β b and s = 2p/q.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::entropy::ExponentPair;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeProblem {
    pub twice_j: usize,
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub b_el: f64,
    pub alpha_theta: f64,
    pub beta_theta: f64,
    pub a_expected: f64,
    /// q = p + 1/j, where the coherent profile solves the equation.
    pub on_lattice: bool,
}

impl OdeProblem {
    fn validate(&self) -> Result<()> {
        if !(self.alpha_theta > 0.0) || !(self.beta_theta > 0.0) {
            return invalid("the nonlinearity needs alpha_theta > 0 and beta_theta > 0");
        }
        if !(1.0..2.0).contains(&self.s) {
            return invalid(format!("need s in [1, 2), got {}", self.s));
        }
        Ok(())
    }

    fn qj(&self) -> f64 {
        self.q * self.twice_j as f64 / 2.0
    }

    /// φ(u) = βu − α sign(u)|u|^{s−1}.
    fn phi(&self, u: f64) -> f64 {
        self.beta_theta * u - self.alpha_theta * u.signum() * u.abs().powf(self.s - 1.0)
    }

    fn dphi(&self, u: f64) -> f64 {
        self.beta_theta - self.alpha_theta * (self.s - 1.0) * u.abs().powf(self.s - 2.0)
    }

    /// Φ with Φ' = φ and Φ(0) = 0.
    fn big_phi(&self, u: f64) -> f64 {
        self.beta_theta * u * u / 2.0 - self.alpha_theta * u.abs().powf(self.s) / self.s
    }

    /// The positive constant solution, where φ vanishes.
    pub fn constant_solution(&self) -> f64 {
        (self.alpha_theta / self.beta_theta).powf(1.0 / (2.0 - self.s))
    }
}

pub fn problem_from_exponents(twice_j: usize, exponents: &ExponentPair, b_el: f64) -> Result<OdeProblem> {
    let (p, q) = (exponents.p, exponents.q);
    if twice_j == 0 {
        return invalid("twice_j must be positive");
    }
    if !(q > p && p >= q / 2.0) {
        return invalid(format!("need q > p >= q/2, got p = {p}, q = {q}"));
    }
    if !(b_el > 0.0) || !b_el.is_finite() {
        return invalid(format!("b_el must be positive, got {b_el}"));
    }
    let j = twice_j as f64 / 2.0;
    let qj = q * j;
    let beta = qj * (qj + 2.0) / 4.0;
    Ok(OdeProblem {
        twice_j,
        p,
        q,
        s: 2.0 * p / q,
        b_el,
        alpha_theta: beta * b_el,
        beta_theta: beta,
        a_expected: ((qj + 2.0) * b_el / qj).powf(q / (2.0 * (q - p))),
        on_lattice: exponents.lattice_index(twice_j) == Some(1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Adaptive Dormand–Prince 5(4).
    Dopri5 { rtol: f64, atol: f64 },
    /// Classical Runge–Kutta with a fixed number of steps per grid interval.
    Rk4 { substeps: usize },
}

/// Output grid θ_i = iπ/(n+1), i = 1..n, and the integrator used to reach it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_points: usize,
    pub integrator: Integrator,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_points: 512, integrator: Integrator::Dopri5 { rtol: 1e-10, atol: 1e-10 } }
    }
}

impl GridSpec {
    pub fn with_points(n_points: usize) -> Self {
        GridSpec { n_points, ..Default::default() }
    }

    fn thetas(&self) -> Result<Vec<f64>> {
        if self.n_points < 8 {
            return invalid(format!("grid needs at least 8 points, got {}", self.n_points));
        }
        let h = std::f64::consts::PI / (self.n_points as f64 + 1.0);
        Ok((1..=self.n_points).map(|i| i as f64 * h).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub theta_grid: Vec<f64>,
    /// Clamped at zero.
    pub u_values: Vec<f64>,
    pub du_values: Vec<f64>,
    pub problem: OdeProblem,
    /// u became negative somewhere on the grid.
    pub crossed_zero: bool,
    /// Unclamped u at the last grid point.
    pub end_value: f64,
}

impl RadialSolution {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "theta,u,du")?;
        for i in 0..self.theta_grid.len() {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", self.theta_grid[i], self.u_values[i], self.du_values[i])?;
        }
        Ok(())
    }

    /// Positive and strictly decreasing on the grid, up to `tol`.
    pub fn is_positive_decreasing(&self, tol: f64) -> bool {
        let n = self.u_values.len();
        self.u_values[..n - 1].iter().all(|&u| u > 0.0)
            && self.u_values.windows(2).all(|w| w[1] < w[0] + tol)
    }
}

/// A·cos^{qj}(θ/2) with its exact derivative.
pub fn coherent_profile(problem: &OdeProblem) -> RadialSolution {
    coherent_profile_on(problem, &GridSpec::default()).expect("default grid is valid")
}

pub fn coherent_profile_on(problem: &OdeProblem, grid: &GridSpec) -> Result<RadialSolution> {
    let theta_grid = grid.thetas()?;
    let (a, n) = (problem.a_expected, problem.qj());
    let u_values: Vec<f64> = theta_grid.iter().map(|t| a * (t / 2.0).cos().powf(n)).collect();
    let du_values = theta_grid
        .iter()
        .map(|t| -a * n / 2.0 * (t / 2.0).cos().powf(n - 1.0) * (t / 2.0).sin())
        .collect();
    let end_value = *u_values.last().expect("nonempty grid");
    Ok(RadialSolution { theta_grid, u_values, du_values, problem: problem.clone(), crossed_zero: false, end_value })
}

type State = [f64; 2];

fn rhs(problem: &OdeProblem, theta: f64, y: &State) -> State {
    [y[1], -y[1] / theta.tan() - problem.phi(y[0])]
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

fn rk4_step(problem: &OdeProblem, t: f64, y: &State, h: f64) -> State {
    let k1 = rhs(problem, t, y);
    let k2 = rhs(problem, t + h / 2.0, &axpy(y, h, &[(0.5, &k1)]));
    let k3 = rhs(problem, t + h / 2.0, &axpy(y, h, &[(0.5, &k2)]));
    let k4 = rhs(problem, t + h, &axpy(y, h, &[(1.0, &k3)]));
    axpy(y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)])
}

/// One Dormand–Prince step: (5th-order solution, embedded error estimate).
fn dopri_step(problem: &OdeProblem, t: f64, y: &State, h: f64) -> (State, State) {
    let f = |dt: f64, y: &State| rhs(problem, t + dt * h, y);
    let k1 = f(0.0, y);
    let k2 = f(0.2, &axpy(y, h, &[(0.2, &k1)]));
    let k3 = f(0.3, &axpy(y, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]));
    let k4 = f(0.8, &axpy(y, h, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]));
    let k5 = f(
        8.0 / 9.0,
        &axpy(y, h, &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)]),
    );
    let k6 = f(
        1.0,
        &axpy(
            y,
            h,
            &[(9017.0 / 3168.0, &k1), (-355.0 / 33.0, &k2), (46732.0 / 5247.0, &k3), (49.0 / 176.0, &k4), (-5103.0 / 18656.0, &k5)],
        ),
    );
    let y5 = axpy(
        y,
        h,
        &[(35.0 / 384.0, &k1), (500.0 / 1113.0, &k3), (125.0 / 192.0, &k4), (-2187.0 / 6784.0, &k5), (11.0 / 84.0, &k6)],
    );
    let k7 = f(1.0, &y5);
    let e = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err = [0.0; 2];
    for (c, k) in e.iter().zip(&ks) {
        err[0] += h * c * k[0];
        err[1] += h * c * k[1];
    }
    (y5, err)
}

/// Advances from t0 to t1 adaptively; `h` carries the step size between calls.
fn dopri_advance(problem: &OdeProblem, t0: f64, t1: f64, y: State, h: &mut f64, rtol: f64, atol: f64) -> Result<State> {
    let (mut t, mut y) = (t0, y);
    let mut steps = 0usize;
    while t < t1 {
        let last = t + *h >= t1;
        let step = if last { t1 - t } else { *h };
        let (y_new, err) = dopri_step(problem, t, &y, step);
        let mut norm = 0.0;
        for i in 0..2 {
            let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
            norm += (err[i] / sc).powi(2);
        }
        let norm = (norm / 2.0).sqrt();
        if !norm.is_finite() {
            return Err(Error::IntegrationFailure { theta: t, reason: "non-finite derivative".into() });
        }
        let factor = (0.9 * norm.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        if norm <= 1.0 {
            t = if last { t1 } else { t + step };
            y = y_new;
            if !last || factor < 1.0 {
                *h = step * factor;
            }
        } else {
            *h = step * factor.min(1.0);
        }
        steps += 1;
        if *h < 1e-14 * t.abs().max(1.0) || steps > 1_000_000 {
            return Err(Error::IntegrationFailure { theta: t, reason: "step size collapsed".into() });
        }
    }
    Ok(y)
}

/// Integrates from u(0) = u0 with u'(0) = 0.
pub fn shoot(problem: &OdeProblem, u0: f64, grid: &GridSpec) -> Result<RadialSolution> {
    problem.validate()?;
    if !(u0 > 0.0) || !u0.is_finite() {
        return invalid(format!("u0 must be positive, got {u0}"));
    }
    let theta_grid = grid.thetas()?;
    // u ≈ u0 + aθ² + bθ⁴ near the regular singular point θ = 0
    let a = -problem.phi(u0) / 4.0;
    let b = (2.0 * a / 3.0 - problem.dphi(u0) * a) / 16.0;
    let t_start = (theta_grid[0] / 4.0).min(1e-3);
    let mut y = [u0 + a * t_start.powi(2) + b * t_start.powi(4), 2.0 * a * t_start + 4.0 * b * t_start.powi(3)];
    let mut t = t_start;
    let mut h = t_start;
    let mut raw = Vec::with_capacity(theta_grid.len());
    for &target in &theta_grid {
        y = match grid.integrator {
            Integrator::Dopri5 { rtol, atol } => dopri_advance(problem, t, target, y, &mut h, rtol, atol)?,
            Integrator::Rk4 { substeps } => {
                let n = substeps.max(1);
                let hh = (target - t) / n as f64;
                let mut yy = y;
                for k in 0..n {
                    yy = rk4_step(problem, t + k as f64 * hh, &yy, hh);
                }
                yy
            }
        };
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::IntegrationFailure { theta: target, reason: "non-finite solution".into() });
        }
        t = target;
        raw.push(y);
    }
    let crossed_zero = raw.iter().any(|y| y[0] < 0.0);
    let end_value = raw.last().expect("nonempty grid")[0];
    Ok(RadialSolution {
        theta_grid,
        u_values: raw.iter().map(|y| y[0].max(0.0)).collect(),
        du_values: raw.iter().map(|y| y[1]).collect(),
        problem: problem.clone(),
        crossed_zero,
        end_value,
    })
}

/// Initial values in [lo, hi] whose solutions vanish at the end of the grid while
/// staying positive and strictly decreasing before it.
pub fn boundary_scan(problem: &OdeProblem, u0_range: (f64, f64), num_points: usize) -> Result<Vec<f64>> {
    boundary_scan_on(problem, u0_range, num_points, &GridSpec::default())
}

pub fn boundary_scan_on(problem: &OdeProblem, u0_range: (f64, f64), num_points: usize, grid: &GridSpec) -> Result<Vec<f64>> {
    let (lo, hi) = u0_range;
    if !(lo > 0.0 && hi > lo) || !hi.is_finite() {
        return invalid(format!("need 0 < lo < hi, got ({lo}, {hi})"));
    }
    if num_points < 2 {
        return invalid("boundary scan needs at least 2 points");
    }
    let ratio = (hi / lo).powf(1.0 / (num_points - 1) as f64);
    let u0s: Vec<f64> = (0..num_points).map(|i| if i + 1 == num_points { hi } else { lo * ratio.powi(i as i32) }).collect();
    let end = |u0: f64| shoot(problem, u0, grid).map(|s| s.end_value);
    let mut values = Vec::with_capacity(num_points);
    for &u0 in &u0s {
        values.push(end(u0)?);
    }
    let mut roots = Vec::new();
    for i in 0..num_points - 1 {
        let (mut a, mut b) = (u0s[i], u0s[i + 1]);
        let (mut fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa * fb > 0.0 {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b || (b - a) <= 1e-14 * b {
                break;
            }
            let fm = end(m)?;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        let root = 0.5 * (a + b);
        if shoot(problem, root, grid)?.is_positive_decreasing(1e-10) {
            roots.push(root);
        }
    }
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-10 * y.abs());
    Ok(roots)
}

/// Derivative of uniformly spaced samples by the fourth-order compact scheme
/// with third-order boundary closures.
fn compact_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut lower = vec![0.25; n];
    let mut diag = vec![1.0; n];
    let mut upper = vec![0.25; n];
    let mut rhs = vec![0.0; n];
    upper[0] = 3.0;
    rhs[0] = (-17.0 / 6.0 * f[0] + 1.5 * f[1] + 1.5 * f[2] - f[3] / 6.0) / h;
    lower[n - 1] = 3.0;
    rhs[n - 1] = (17.0 / 6.0 * f[n - 1] - 1.5 * f[n - 2] - 1.5 * f[n - 3] + f[n - 4] / 6.0) / h;
    for i in 1..n - 1 {
        rhs[i] = 0.75 * (f[i + 1] - f[i - 1]) / h;
    }
    // Thomas algorithm
    for i in 1..n {
        let m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    let mut out = vec![0.0; n];
    out[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = (rhs[i] - upper[i] * out[i + 1]) / diag[i];
    }
    out
}

fn grid_step(solution: &RadialSolution) -> Result<f64> {
    let t = &solution.theta_grid;
    if t.len() < 8 || t.len() != solution.u_values.len() || t.len() != solution.du_values.len() {
        return invalid("solution grids must share a length of at least 8");
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return invalid("solution grid must be uniform");
    }
    Ok(h)
}

/// Points this close to either end are skipped by the residual.
const EDGE: usize = 4;

/// max |u + (4/(qj(qj+2))) Δu − b u^{s−1}| over interior grid points.
pub fn el_residual(problem: &OdeProblem, solution: &RadialSolution) -> Result<f64> {
    problem.validate()?;
    let h = grid_step(solution)?;
    let d2u = compact_derivative(&solution.du_values, h);
    let n = solution.theta_grid.len();
    let mut worst: f64 = 0.0;
    for i in EDGE..n - EDGE {
        let (t, u, du) = (solution.theta_grid[i], solution.u_values[i], solution.du_values[i]);
        let lap = d2u[i] + du / t.tan();
        let r = (lap + problem.phi(u)) / problem.beta_theta;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// max over r = tan(θ/2) ∈ [0.1, 10] of |E'(r) + D(r) u_r²|, where
/// E = ½(1+r²)² u_r² + 4Φ(u) and D = (1+r²)²/r − 2r(1+r²).
pub fn energy_diagnostic(problem: &OdeProblem, solution: &RadialSolution) -> Result<f64> {
    problem.validate()?;
    let h = grid_step(solution)?;
    let energy: Vec<f64> = solution
        .u_values
        .iter()
        .zip(&solution.du_values)
        .map(|(u, du)| 2.0 * du * du + 4.0 * problem.big_phi(*u))
        .collect();
    let de = compact_derivative(&energy, h);
    let mut worst: f64 = 0.0;
    for (i, &t) in solution.theta_grid.iter().enumerate() {
        let r = (t / 2.0).tan();
        if !(0.1..=10.0).contains(&r) {
            continue;
        }
        let s = 1.0 + r * r;
        let dtheta_dr = 2.0 / s;
        let u_r = solution.du_values[i] * dtheta_dr;
        let dissipation = (s * s / r - 2.0 * r * s) * u_r * u_r;
        worst = worst.max((de[i] * dtheta_dr + dissipation).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical() -> OdeProblem {
        problem_from_exponents(2, &ExponentPair::new(2.0, 3.0).unwrap(), 1.0).unwrap()
    }

    fn sup_error(a: &RadialSolution, b: &RadialSolution) -> f64 {
        a.u_values.iter().zip(&b.u_values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn problem_constants() {
        let pr = canonical();
        assert!((pr.s - 4.0 / 3.0).abs() < 1e-15);
        assert!((pr.a_expected - (5.0f64 / 3.0).powf(1.5)).abs() < 1e-12);
        assert!((pr.a_expected - 2.151657).abs() < 1e-6);
        assert!(pr.on_lattice);
        let off = problem_from_exponents(2, &ExponentPair::new(2.0, 4.0).unwrap(), 1.0).unwrap();
        assert!(!off.on_lattice);
        assert!(problem_from_exponents(2, &ExponentPair::new(1.4, 3.0).unwrap(), 1.0).is_err());
        assert!(problem_from_exponents(2, &ExponentPair::new(2.0, 3.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn coherent_profile_values() {
        let mut pr = canonical();
        let sol = coherent_profile(&pr);
        assert_eq!(sol.theta_grid.len(), 512);
        assert!(sol.u_values[0] < pr.a_expected && (sol.u_values[0] - pr.a_expected).abs() < 1e-4);
        assert!(*sol.u_values.last().unwrap() < 1e-6);
        pr.a_expected = 1.0;
        let g = GridSpec::with_points(9);
        let s = coherent_profile_on(&pr, &g).unwrap();
        assert!((s.u_values[4] - 0.5f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn shooting_reproduces_coherent_profile() {
        let pr = canonical();
        let shot = shoot(&pr, pr.a_expected, &GridSpec::default()).unwrap();
        assert!(sup_error(&shot, &coherent_profile(&pr)) <= 1e-6);
        assert!(shot.is_positive_decreasing(1e-10));
        assert!(el_residual(&pr, &shot).unwrap() <= 1e-5);
        let far = shoot(&pr, 2.0 * pr.a_expected, &GridSpec::default()).unwrap();
        assert!(far.end_value.abs() > 1e-3);
    }

    #[test]
    fn shooting_rejects_bad_input() {
        let mut pr = canonical();
        assert!(shoot(&pr, 0.0, &GridSpec::default()).is_err());
        pr.alpha_theta = 0.0;
        assert!(matches!(shoot(&pr, 1.0, &GridSpec::default()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rk4_has_fourth_order() {
        let pr = canonical();
        let exact = coherent_profile_on(&pr, &GridSpec::with_points(63)).unwrap();
        let errs: Vec<f64> = [1usize, 2, 4]
            .iter()
            .map(|&k| {
                let g = GridSpec { n_points: 63, integrator: Integrator::Rk4 { substeps: k } };
                let s = shoot(&pr, pr.a_expected, &g).unwrap();
                // stay clear of the singular end point
                s.u_values[..48].iter().zip(&exact.u_values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] / errs[1] >= 8.0 && errs[1] / errs[2] >= 8.0, "{errs:?}");
    }

    #[test]
    fn residual_on_and_off_lattice() {
        let pr = canonical();
        assert!(el_residual(&pr, &coherent_profile(&pr)).unwrap() <= 1e-8);
        let off = problem_from_exponents(2, &ExponentPair::new(2.0, 4.0).unwrap(), 1.0).unwrap();
        assert!(el_residual(&off, &coherent_profile(&off)).unwrap() > 1e-2);
    }

    #[test]
    fn scan_finds_one_root() {
        let pr = canonical();
        let a = pr.a_expected;
        let roots = boundary_scan(&pr, (0.1 * a, 10.0 * a), 64).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0] - a).abs() <= 1e-4);
        assert!(boundary_scan(&pr, (1.5 * a, 10.0 * a), 16).unwrap().is_empty());
        assert!(boundary_scan(&pr, (2.0, 1.0), 16).is_err());
    }

    #[test]
    fn energy_identity() {
        let pr = canonical();
        let coarse = energy_diagnostic(&pr, &coherent_profile_on(&pr, &GridSpec::with_points(256)).unwrap()).unwrap();
        let fine = energy_diagnostic(&pr, &coherent_profile(&pr)).unwrap();
        assert!(fine <= 1e-6, "{fine}");
        assert!(coarse / fine >= 3.0, "{coarse} {fine}");
        let u_star = pr.constant_solution();
        let flat = shoot(&pr, u_star, &GridSpec::default()).unwrap();
        let e: Vec<f64> = flat.u_values.iter().zip(&flat.du_values).map(|(u, du)| 2.0 * du * du + 4.0 * pr.big_phi(*u)).collect();
        assert!(e.iter().all(|x| (x - e[0]).abs() <= 1e-10));
    }

    #[test]
    fn canonical_family_has_unique_admissible_start() {
        for twice_j in 1..=3usize {
            let q = 2.0 + 2.0 / twice_j as f64;
            let pr = problem_from_exponents(twice_j, &ExponentPair::new(2.0, q).unwrap(), 1.0).unwrap();
            assert!(pr.on_lattice);
            let a = pr.a_expected;
            let roots = boundary_scan(&pr, (0.1 * a, 10.0 * a), 48).unwrap();
            assert_eq!(roots.len(), 1, "{twice_j}: {roots:?}");
            assert!((roots[0] - a).abs() <= 1e-4 * a);
        }
    }

    #[test]
    fn csv_output() {
        let sol = coherent_profile_on(&canonical(), &GridSpec::with_points(8)).unwrap();
        let mut buf = Vec::new();
        sol.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("theta,u,du"));
        assert_eq!(text.lines().count(), 9);
    }
}
