//! The space F_j of functions f(z) = (1+|z|²)^{-j} Σ c_k z^k.

mod roots;
mod su2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sphere::{QuadratureRule, SpherePoint};

pub use roots::{majorana_roots, state_from_roots};
pub use su2::{apply_su2, rotate_root_to_infinity, RotatedState, SU2Element};

/// Spin quantum number j, carried as 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinQuantumNumber(usize);

impl SpinQuantumNumber {
    pub fn new(twice_j: usize) -> Result<Self> {
        if twice_j == 0 {
            return invalid("twice_j must be at least 1");
        }
        Ok(SpinQuantumNumber(twice_j))
    }

    pub fn twice_j(self) -> usize {
        self.0
    }

    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Hilbert space dimension 2j+1.
    pub fn dim(self) -> usize {
        self.0 + 1
    }
}

/// Binomial coefficients C(n, 0..=n) in floating point.
pub(crate) fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..=n {
        row[k] = row[k - 1] * (n + 1 - k) as f64 / k as f64;
    }
    for k in 0..=n {
        row[k] = row[k].round();
    }
    row
}

/// P(x) and P'(x) by Horner's rule, coefficients in ascending order.
pub(crate) fn horner_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    horner_jet(coeffs.iter().rev(), x)
}

/// Value and derivative from coefficients listed highest degree first.
fn horner_jet<'a, I: Iterator<Item = &'a Complex64>>(highest_first: I, x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in highest_first {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// A vector of F_j in the monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct SpinState {
    twice_j: usize,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    twice_j: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<StateRepr> for SpinState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        make_state(r.twice_j, r.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

impl From<SpinState> for StateRepr {
    fn from(s: SpinState) -> Self {
        StateRepr { twice_j: s.twice_j, coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect() }
    }
}

pub fn make_state(twice_j: usize, coeffs: Vec<Complex64>) -> Result<SpinState> {
    SpinQuantumNumber::new(twice_j)?;
    if coeffs.len() != twice_j + 1 {
        return invalid(format!(
            "twice_j = {twice_j} needs {} coefficients, got {}",
            twice_j + 1,
            coeffs.len()
        ));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return invalid("coefficients must be finite");
    }
    Ok(SpinState { twice_j, coeffs })
}

/// Convenience constructor from real coefficients.
pub fn make_real_state(twice_j: usize, coeffs: &[f64]) -> Result<SpinState> {
    make_state(twice_j, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
}

/// Which stereographic chart a local evaluation used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Chart {
    /// x = z, |z| ≤ 1, polynomial P.
    Z,
    /// x = 1/z, polynomial P̃(w) = Σ c_k w^{2j−k}.
    W,
}

/// Polynomial data at one point, in the better-conditioned chart.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChartJet {
    pub chart: Chart,
    pub x: Complex64,
    pub p: Complex64,
    pub dp: Complex64,
    /// 1 + |x|²
    pub s: f64,
    pub j: f64,
}

impl ChartJet {
    /// |f|².
    pub fn rho(&self) -> f64 {
        self.p.norm_sqr() * self.s.powi(-((2.0 * self.j).round() as i32))
    }

    /// s^{-j}(P' − 2j x̄ P / s), the covariant derivative of f up to a phase.
    pub fn covariant(&self) -> Complex64 {
        (self.dp - self.p * self.x.conj() * (2.0 * self.j / self.s)) * self.s.powf(-self.j)
    }

    /// (1+|z|²)² |∂f − ...|²; equals (1+|z|²)²|∂|f|²|² / |f|² away from zeros.
    pub fn gradient_density(&self) -> f64 {
        self.s * self.s * self.covariant().norm_sqr()
    }

    /// (1+|z|²) ∂_z |f|² as a complex number in the z coordinate.
    pub fn scaled_dbar_rho(&self) -> Complex64 {
        let fbar = self.p.conj() * self.s.powf(-self.j);
        let local = fbar * self.covariant() * self.s;
        match self.chart {
            Chart::Z => local,
            Chart::W => {
                let r = self.x.norm();
                let phase = if r == 0.0 { Complex64::new(1.0, 0.0) } else { (self.x / r).powi(2) };
                -phase * local
            }
        }
    }
}

impl SpinState {
    pub fn twice_j(&self) -> usize {
        self.twice_j
    }

    pub fn spin(&self) -> SpinQuantumNumber {
        SpinQuantumNumber(self.twice_j)
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// ‖f‖₂ = ⟨f, f⟩^{1/2}.
    pub fn norm(&self) -> f64 {
        let binom = binomial_row(self.twice_j);
        self.coeffs.iter().zip(&binom).map(|(c, b)| c.norm_sqr() / b).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> SpinState {
        SpinState { twice_j: self.twice_j, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn normalized(&self) -> Result<SpinState> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return invalid("cannot normalize the zero state");
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Coordinates in the orthonormal basis √C(2j,k)·z^k.
    pub fn orthonormal_coords(&self) -> Vec<Complex64> {
        let binom = binomial_row(self.twice_j);
        self.coeffs.iter().zip(&binom).map(|(c, b)| c / b.sqrt()).collect()
    }

    pub fn from_orthonormal_coords(twice_j: usize, coords: &[Complex64]) -> Result<SpinState> {
        let binom = binomial_row(twice_j);
        if coords.len() != twice_j + 1 {
            return invalid("wrong number of coordinates");
        }
        make_state(twice_j, coords.iter().zip(&binom).map(|(a, b)| a * b.sqrt()).collect())
    }

    pub(crate) fn jet(&self, point: &SpherePoint) -> ChartJet {
        let j = self.j();
        match point {
            SpherePoint::Finite(z) if z.norm_sqr() <= 1.0 => {
                let (p, dp) = horner_with_derivative(&self.coeffs, *z);
                ChartJet { chart: Chart::Z, x: *z, p, dp, s: 1.0 + z.norm_sqr(), j }
            }
            _ => {
                let w = match point {
                    SpherePoint::Finite(z) => 1.0 / z,
                    SpherePoint::Infinity => Complex64::new(0.0, 0.0),
                };
                let (p, dp) = horner_jet(self.coeffs.iter(), w);
                ChartJet { chart: Chart::W, x: w, p, dp, s: 1.0 + w.norm_sqr(), j }
            }
        }
    }

    /// f at a point of the sphere; at ∞ this is c_{2j}.
    pub fn evaluate(&self, point: &SpherePoint) -> Complex64 {
        match point {
            SpherePoint::Infinity => self.coeffs[self.twice_j],
            SpherePoint::Finite(z) if z.norm_sqr() <= 1.0 => {
                horner(&self.coeffs, *z) * (1.0 + z.norm_sqr()).powf(-self.j())
            }
            SpherePoint::Finite(z) => {
                let w = 1.0 / z;
                let phase = (z / z.norm()).powi(self.twice_j as i32);
                phase * self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c) * (1.0 + w.norm_sqr()).powf(-self.j())
            }
        }
    }

    /// Husimi density |f(z)|².
    pub fn husimi(&self, point: &SpherePoint) -> f64 {
        let (p, s) = match point {
            SpherePoint::Finite(z) if z.norm_sqr() <= 1.0 => (horner(&self.coeffs, *z), 1.0 + z.norm_sqr()),
            SpherePoint::Finite(z) => {
                let w = 1.0 / z;
                (self.coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * w + c), 1.0 + w.norm_sqr())
            }
            SpherePoint::Infinity => (self.coeffs[self.twice_j], 1.0),
        };
        p.norm_sqr() * s.powi(-(self.twice_j as i32))
    }

    /// The base rule adapted to the zeros of this state.
    pub fn adapted_rule(&self, base: &QuadratureRule) -> Result<QuadratureRule> {
        Ok(base.centered_on(&majorana_roots(self)?))
    }
}

pub fn evaluate(state: &SpinState, point: &SpherePoint) -> Complex64 {
    state.evaluate(point)
}

pub fn husimi(state: &SpinState, point: &SpherePoint) -> f64 {
    state.husimi(point)
}

/// Coherent vector K(·, w).
pub fn coherent_state(twice_j: usize, w: &SpherePoint) -> Result<SpinState> {
    SpinQuantumNumber::new(twice_j)?;
    let n = twice_j;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    match w {
        SpherePoint::Infinity => coeffs[n] = Complex64::new(1.0, 0.0),
        SpherePoint::Finite(w) => {
            let binom = binomial_row(n);
            let root = (1.0 + w.norm_sqr()).sqrt();
            let a = w.conj() / root;
            let b = 1.0 / root;
            for k in 0..=n {
                coeffs[k] = binom[k] * a.powi(k as i32) * b.powi((n - k) as i32);
            }
        }
    }
    make_state(n, coeffs)
}

/// K(z, w) = (1 + z w̄)^{2j} (1+|z|²)^{-j} (1+|w|²)^{-j}.
pub fn kernel(twice_j: usize, z: &SpherePoint, w: &SpherePoint) -> Result<Complex64> {
    Ok(coherent_state(twice_j, w)?.evaluate(z))
}

/// ⟨f, g⟩ = Σ conj(c_k) d_k / C(2j, k).
pub fn inner_product(f: &SpinState, g: &SpinState) -> Result<Complex64> {
    if f.twice_j != g.twice_j {
        return invalid(format!("inner product of twice_j {} and {}", f.twice_j, g.twice_j));
    }
    let binom = binomial_row(f.twice_j);
    Ok(f.coeffs.iter().zip(&g.coeffs).zip(&binom).map(|((c, d), b)| c.conj() * d / b).sum())
}

/// An orthogonal family f_k with density ρ = Σ |f_k|².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedState {
    members: Vec<SpinState>,
}

impl MixedState {
    pub fn new(members: Vec<SpinState>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Precondition("mixed state needs at least one member".into()));
        };
        let twice_j = first.twice_j;
        if members.iter().any(|m| m.twice_j != twice_j) {
            return Err(Error::Precondition("members must share twice_j".into()));
        }
        for (k, a) in members.iter().enumerate() {
            for b in &members[k + 1..] {
                let overlap = inner_product(a, b)?.norm();
                if overlap > 1e-10 {
                    return Err(Error::Precondition(format!("members not orthogonal: |<f,g>| = {overlap:e}")));
                }
            }
        }
        let total: f64 = members.iter().map(|m| m.norm().powi(2)).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Precondition(format!("sum of squared norms is {total}, expected 1")));
        }
        Ok(MixedState { members })
    }

    pub fn members(&self) -> &[SpinState] {
        &self.members
    }

    pub fn twice_j(&self) -> usize {
        self.members[0].twice_j
    }

    pub fn density(&self, point: &SpherePoint) -> f64 {
        self.members.iter().map(|m| m.husimi(point)).sum()
    }
}
