//! Integration on the Riemann sphere against the invariant measure
//! dμ(z) = d²z / (π(1+|z|²)²) and the flat measure d²z/π.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A point of C ∪ {∞} in stereographic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn origin() -> Self {
        SpherePoint::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// z ↦ −1/z̄, exchanging 0 and ∞.
    pub fn antipode(&self) -> Self {
        match self {
            SpherePoint::Infinity => SpherePoint::origin(),
            SpherePoint::Finite(z) if *z == Complex64::new(0.0, 0.0) => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(-1.0 / z.conj()),
        }
    }

    /// Unit vector on S² ⊂ R³ (north pole = 0).
    pub fn to_unit_vector(&self) -> [f64; 3] {
        match self {
            SpherePoint::Infinity => [0.0, 0.0, -1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                let s = 1.0 + r2;
                [2.0 * z.re / s, 2.0 * z.im / s, (1.0 - r2) / s]
            }
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            SpherePoint::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

/// Squared chordal distance on the unit sphere (diameter 2).
pub fn chordal_distance_sq(a: &SpherePoint, b: &SpherePoint) -> f64 {
    match (a, b) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 4.0 / (1.0 + z.norm_sqr()),
        (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
            4.0 * (z - w).norm_sqr() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr()))
        }
    }
}

pub fn chordal_distance(a: &SpherePoint, b: &SpherePoint) -> f64 {
    chordal_distance_sq(a, b).sqrt()
}

/// Orientation-preserving isometry of the sphere, z ↦ (az+b)/(cz+d).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Isometry {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl Isometry {
    /// A rotation sending 0 to `center`.
    pub(crate) fn sending_origin_to(center: &SpherePoint) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match center {
            SpherePoint::Infinity => Isometry { a: zero, b: one, c: one, d: zero },
            SpherePoint::Finite(c) if c.norm() <= 1.0 => Isometry { a: one, b: *c, c: -c.conj(), d: one },
            SpherePoint::Finite(c) => Isometry { a: -1.0 / c.conj(), b: one, c: one, d: 1.0 / c },
        }
    }

    pub(crate) fn apply(&self, p: &SpherePoint) -> SpherePoint {
        match p {
            SpherePoint::Infinity => {
                if self.c.norm_sqr() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm_sqr() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }
}

/// Placement of the polar nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolarScheme {
    /// Gauss–Legendre in t with x = cos θ = ψ(t), ψ'(t) = (15/8)(1−t²)².
    Graded,
    /// Gauss–Legendre directly in x = cos θ.
    GaussLegendre,
}

/// Nodes and weights for ∫ g dμ. Weights are positive and sum to 1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    n_polar: usize,
    n_azimuth: usize,
}

/// Gauss–Legendre nodes and weights on (−1, 1), ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // (P_n(t), P_n'(t))
    let legendre = |t: f64| {
        let (mut p0, mut p1) = (1.0, t);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
    };
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(t);
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[n - 1 - i] = t;
        x[i] = -t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// (1 − ψ(t)) for the graded map, written in v = 1 − t to avoid cancellation.
fn graded_gap(v: f64) -> f64 {
    v * v * v * (20.0 - 15.0 * v + 3.0 * v * v) / 8.0
}

/// Product rule on the default graded polar scheme.
pub fn build_quadrature(n_polar: usize, n_azimuth: usize) -> Result<QuadratureRule> {
    build_quadrature_with(PolarScheme::Graded, n_polar, n_azimuth)
}

pub fn build_quadrature_with(
    scheme: PolarScheme,
    n_polar: usize,
    n_azimuth: usize,
) -> Result<QuadratureRule> {
    if n_polar < 2 || n_azimuth < 4 {
        return invalid(format!(
            "quadrature needs n_polar >= 2 and n_azimuth >= 4, got ({n_polar}, {n_azimuth})"
        ));
    }
    let (t, wt) = gauss_legendre(n_polar);
    let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);
    let phases: Vec<Complex64> = (0..n_azimuth)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n_azimuth as f64))
        .collect();
    // the graded Jacobian has degree 4, so tiny rules need renormalizing
    let mass: f64 = match scheme {
        PolarScheme::Graded => t.iter().zip(&wt).map(|(t, w)| w * 15.0 / 8.0 * (1.0 - t * t).powi(2)).sum(),
        PolarScheme::GaussLegendre => 2.0,
    };
    for (ti, wi) in t.iter().zip(&wt) {
        // one_minus = 1 − x, one_plus = 1 + x
        let (one_minus, one_plus, jac) = match scheme {
            PolarScheme::Graded => {
                let jac = 15.0 / 8.0 * (1.0 - ti * ti).powi(2);
                (graded_gap(1.0 - ti), graded_gap(1.0 + ti), jac)
            }
            PolarScheme::GaussLegendre => (1.0 - ti, 1.0 + ti, 1.0),
        };
        let r = (one_minus / one_plus).sqrt();
        let w = wi * jac / (mass * n_azimuth as f64);
        for ph in &phases {
            nodes.push(SpherePoint::Finite(ph * r));
            weights.push(w);
        }
    }
    Ok(QuadratureRule { nodes, weights, n_polar, n_azimuth })
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_polar, self.n_azimuth)
    }

    /// The rule moved by a rotation taking the origin to `center`.
    pub fn rotated_to(&self, center: &SpherePoint) -> QuadratureRule {
        let m = Isometry::sending_origin_to(center);
        QuadratureRule {
            nodes: self.nodes.iter().map(|z| m.apply(z)).collect(),
            weights: self.weights.clone(),
            n_polar: self.n_polar,
            n_azimuth: self.n_azimuth,
        }
    }

    /// A rule adapted to integrands with point singularities at `centers`.
    ///
    /// The measure is split by the partition of unity χ_i ∝ d(z, c_i)^{-4}
    /// and each piece is integrated on a copy of the rule rotated so that
    /// its graded pole sits on c_i.
    pub fn centered_on(&self, centers: &[SpherePoint]) -> QuadratureRule {
        let mut distinct: Vec<SpherePoint> = Vec::new();
        for c in centers {
            if !distinct.iter().any(|d| chordal_distance_sq(c, d) < 1e-24) {
                distinct.push(*c);
            }
        }
        match distinct.len() {
            0 => return self.clone(),
            1 => return self.rotated_to(&distinct[0]),
            _ => {}
        }
        let mut nodes = Vec::with_capacity(self.len() * distinct.len());
        let mut weights = Vec::with_capacity(self.len() * distinct.len());
        // squared chordal distances up to the factor 4/(1+|y|²), which cancels in χ
        let scale: Vec<f64> = distinct
            .iter()
            .map(|c| c.finite().map_or(0.0, |c| 1.0 / (1.0 + c.norm_sqr())))
            .collect();
        let mut inv = vec![0.0; distinct.len()];
        for (i, c) in distinct.iter().enumerate() {
            let m = Isometry::sending_origin_to(c);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let y = m.apply(x);
                let mut hit = None;
                for (k, ck) in distinct.iter().enumerate() {
                    let e = match (y, ck) {
                        (SpherePoint::Finite(y), SpherePoint::Finite(c)) => (y - c).norm_sqr() * scale[k],
                        (SpherePoint::Finite(_), SpherePoint::Infinity) => 1.0,
                        _ => chordal_distance_sq(&y, ck),
                    };
                    if e == 0.0 {
                        hit = Some(k);
                    }
                    inv[k] = 1.0 / (e * e);
                }
                let chi = match hit {
                    Some(k) => f64::from(u8::from(k == i)),
                    None => inv[i] / inv.iter().sum::<f64>(),
                };
                let wc = w * chi;
                if wc > 0.0 {
                    nodes.push(y);
                    weights.push(wc);
                }
            }
        }
        QuadratureRule { nodes, weights, n_polar: self.n_polar, n_azimuth: self.n_azimuth }
    }

    /// Σ w_i g(z_i).
    pub fn integrate_invariant<F>(&self, g: F) -> Result<Complex64>
    where
        F: Fn(&SpherePoint) -> Complex64,
    {
        let mut re = Vec::with_capacity(self.len());
        let mut im = Vec::with_capacity(self.len());
        for (i, (z, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = g(z);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NumericDomain { index: i, point: z.to_string() });
            }
            re.push(w * v.re);
            im.push(w * v.im);
        }
        Ok(Complex64::new(pairwise_sum(&re), pairwise_sum(&im)))
    }

    /// Real-valued variant of [`QuadratureRule::integrate_invariant`].
    pub fn integrate_real<F>(&self, g: F) -> Result<f64>
    where
        F: Fn(&SpherePoint) -> f64,
    {
        let mut terms = Vec::with_capacity(self.len());
        for (i, (z, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = g(z);
            if !v.is_finite() {
                return Err(Error::NumericDomain { index: i, point: z.to_string() });
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }

    /// Σ w_i (1+|z_i|²)² g(z_i) ≈ ∫ g d²z/π.
    pub fn integrate_flat<F>(&self, g: F) -> Result<f64>
    where
        F: Fn(&SpherePoint) -> f64,
    {
        let mut terms = Vec::with_capacity(self.len());
        for (i, (z, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = match z {
                SpherePoint::Finite(c) => {
                    let s = 1.0 + c.norm_sqr();
                    s * s * g(z)
                }
                SpherePoint::Infinity => f64::NAN,
            };
            if !v.is_finite() {
                return Err(Error::NumericDomain { index: i, point: z.to_string() });
            }
            terms.push(w * v);
        }
        Ok(pairwise_sum(&terms))
    }
}

pub fn integrate_invariant<F>(rule: &QuadratureRule, g: F) -> Result<Complex64>
where
    F: Fn(&SpherePoint) -> Complex64,
{
    rule.integrate_invariant(g)
}

pub fn integrate_flat<F>(rule: &QuadratureRule, g: F) -> Result<f64>
where
    F: Fn(&SpherePoint) -> f64,
{
    rule.integrate_flat(g)
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// ∫ |z|^{2k} (1+|z|²)^{-m} dμ = k!(m−k)!/(m+1)!, exactly.
pub fn exact_moment(k: u64, m: u64) -> Result<BigRational> {
    if k > m {
        return invalid(format!("moment ({k}, {m}) diverges: need k <= m"));
    }
    Ok(BigRational::new(factorial(k) * factorial(m - k), factorial(m + 1)))
}

/// Floating-point moment; exact arithmetic up to m = 4096, log-space sums beyond.
pub fn moment_f64(k: u64, m: u64) -> Result<f64> {
    if k > m {
        return invalid(format!("moment ({k}, {m}) diverges: need k <= m"));
    }
    if m <= 4096 {
        let r = exact_moment(k, m)?;
        return Ok(r.to_f64().unwrap_or(0.0));
    }
    // 1/((m+1) C(m,k)), ln C(m,k) = Σ_{i=1}^{kk} ln(1 + (m−kk)/i)
    let kk = k.min(m - k);
    let rest = (m - kk) as f64;
    let mut ln_c = 0.0;
    for i in 1..=kk {
        ln_c += (rest / i as f64).ln_1p();
    }
    Ok((-(ln_c + ((m + 1) as f64).ln())).exp())
}
