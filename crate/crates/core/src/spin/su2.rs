use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{majorana_roots, make_state, SpinState};
use crate::error::{invalid, Result};
use crate::sphere::SpherePoint;

/// (α, β) with |α|² + |β|² = 1, acting by
/// T f(z) = (βz+ᾱ)^{2j}/|βz+ᾱ|^{2j} · f((αz − β̄)/(βz + ᾱ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU2Element {
    alpha: Complex64,
    beta: Complex64,
}

impl SU2Element {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return invalid(format!("|alpha|^2 + |beta|^2 = {n}, expected 1"));
        }
        Ok(SU2Element { alpha, beta })
    }

    pub fn identity() -> Self {
        SU2Element { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// The element whose action carries a state peaked at 0 to one peaked at `w`.
    pub fn moving_origin_to(w: &SpherePoint) -> Self {
        match w {
            SpherePoint::Infinity => SU2Element { alpha: Complex64::new(0.0, 0.0), beta: Complex64::new(1.0, 0.0) },
            SpherePoint::Finite(w) => {
                let a = 1.0 / (1.0 + w.norm_sqr()).sqrt();
                SU2Element { alpha: Complex64::new(a, 0.0), beta: w.conj() * a }
            }
        }
    }

    /// The element whose action moves a zero at `z0` to infinity.
    pub fn sending_to_infinity(z0: Complex64) -> Self {
        let b = 1.0 / (1.0 + z0.norm_sqr()).sqrt();
        SU2Element { alpha: z0 * b, beta: Complex64::new(b, 0.0) }
    }

    pub fn inverse(&self) -> Self {
        SU2Element { alpha: self.alpha.conj(), beta: -self.beta }
    }

    /// z ↦ (αz − β̄)/(βz + ᾱ).
    pub fn mobius(&self, p: &SpherePoint) -> SpherePoint {
        let (a, b) = (self.alpha, self.beta);
        match p {
            SpherePoint::Infinity => {
                if b.norm_sqr() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(a / b)
                }
            }
            SpherePoint::Finite(z) => {
                let den = b * z + a.conj();
                if den.norm_sqr() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((a * z - b.conj()) / den)
                }
            }
        }
    }
}

/// Composition in action order: `g1 * g2` acts as g1 applied after g2.
impl Mul for SU2Element {
    type Output = SU2Element;

    fn mul(self, g2: SU2Element) -> SU2Element {
        // matrix [[α, −β̄], [β, ᾱ]]; the action composes as G2·G1
        let (a1, b1) = (self.alpha, self.beta);
        let (a2, b2) = (g2.alpha, g2.beta);
        SU2Element { alpha: a2 * a1 - b2.conj() * b1, beta: b2 * a1 + a2.conj() * b1 }
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

fn powers(base: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
    for k in 1..=n {
        let next = poly_mul(&out[k - 1], base);
        out.push(next);
    }
    out
}

/// Polynomial part Σ c_k (αz − β̄)^k (βz + ᾱ)^{2j−k}.
pub fn apply_su2(g: &SU2Element, f: &SpinState) -> SpinState {
    let n = f.twice_j();
    let a_pow = powers(&[-g.beta.conj(), g.alpha], n);
    let b_pow = powers(&[g.alpha.conj(), g.beta], n);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (k, ck) in f.coeffs().iter().enumerate() {
        if ck.norm_sqr() == 0.0 {
            continue;
        }
        let term = poly_mul(&a_pow[k], &b_pow[n - k]);
        for (i, t) in term.iter().enumerate() {
            coeffs[i] += ck * t;
        }
    }
    make_state(n, coeffs).expect("rotation preserves length")
}

/// Result of [`rotate_root_to_infinity`].
#[derive(Debug, Clone, PartialEq)]
pub struct RotatedState {
    pub state: SpinState,
    pub g: SU2Element,
    /// The polynomial part is constant: every root already sits at infinity.
    pub all_roots_at_infinity: bool,
}

/// Rotates one zero of the state to infinity, so that the rotated state vanishes there.
pub fn rotate_root_to_infinity(state: &SpinState) -> Result<RotatedState> {
    if state.is_zero() {
        return invalid("zero state has no roots");
    }
    let n = state.twice_j();
    let coeffs = state.coeffs();
    let all_at_inf = coeffs[1..].iter().all(|c| c.norm_sqr() == 0.0);
    if coeffs[n].norm_sqr() == 0.0 {
        return Ok(RotatedState { state: state.clone(), g: SU2Element::identity(), all_roots_at_infinity: all_at_inf });
    }
    let roots = majorana_roots(state)?;
    let z0 = roots
        .iter()
        .find_map(|r| r.finite())
        .expect("nonzero leading coefficient implies a finite root");
    let g = SU2Element::sending_to_infinity(z0);
    let mut rotated = apply_su2(&g, state);
    let mut c = rotated.coeffs().to_vec();
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if c[n].norm() <= 1e-12 * scale {
        c[n] = Complex64::new(0.0, 0.0);
        rotated = make_state(n, c)?;
    }
    Ok(RotatedState { state: rotated, g, all_roots_at_infinity: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::tests::random_state;
    use crate::spin::{coherent_state, inner_product, make_real_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(rng: &mut ChaCha8Rng) -> SU2Element {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        SU2Element::new(Complex64::new(v[0] / n, v[1] / n), Complex64::new(v[2] / n, v[3] / n)).unwrap()
    }

    fn aligned_distance(a: &SpinState, b: &SpinState) -> f64 {
        let ov = inner_product(a, b).unwrap();
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_non_unit_parameters() {
        assert!(SU2Element::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)).is_err());
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_state(4, &mut rng);
        assert_eq!(apply_su2(&SU2Element::identity(), &f), f);
    }

    #[test]
    fn rotation_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for twice_j in 1..=6 {
            let g = random_element(&mut rng);
            let f = random_state(twice_j, &mut rng);
            let h = random_state(twice_j, &mut rng);
            let (tf, th) = (apply_su2(&g, &f), apply_su2(&g, &h));
            assert!((tf.norm() - f.norm()).abs() < 1e-12);
            let before = inner_product(&f, &h).unwrap();
            let after = inner_product(&tf, &th).unwrap();
            assert!((before - after).norm() < 1e-10);
        }
    }

    #[test]
    fn action_matches_pointwise_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_element(&mut rng);
        let f = random_state(3, &mut rng);
        let tf = apply_su2(&g, &f);
        for z in [Complex64::new(0.3, -0.4), Complex64::new(2.0, 1.0)] {
            let p = SpherePoint::Finite(z);
            let lhs = tf.evaluate(&p).norm();
            let rhs = f.evaluate(&g.mobius(&p)).norm();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn group_law_in_action_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for twice_j in 1..=5 {
            let (g1, g2) = (random_element(&mut rng), random_element(&mut rng));
            let f = random_state(twice_j, &mut rng);
            let lhs = apply_su2(&g1, &apply_su2(&g2, &f));
            let rhs = apply_su2(&(g1 * g2), &f);
            assert!(aligned_distance(&lhs, &rhs) < 1e-10);
            let back = apply_su2(&g1.inverse(), &apply_su2(&g1, &f));
            assert!(aligned_distance(&back, &f) < 1e-12);
        }
    }

    #[test]
    fn coherent_states_are_covariant() {
        for w in [SpherePoint::new(0.5, -1.0), SpherePoint::new(3.0, 2.0), SpherePoint::Infinity] {
            let g = SU2Element::moving_origin_to(&w);
            let moved = apply_su2(&g, &coherent_state(4, &SpherePoint::origin()).unwrap());
            let target = coherent_state(4, &w).unwrap();
            assert!((inner_product(&moved, &target).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn root_rotation_examples() {
        let low = make_real_state(2, &[1.0, 0.0, 0.0]).unwrap();
        let r = rotate_root_to_infinity(&low).unwrap();
        assert_eq!(r.g, SU2Element::identity());
        assert!(r.all_roots_at_infinity);

        let top = make_real_state(2, &[0.0, 0.0, 1.0]).unwrap();
        let r = rotate_root_to_infinity(&top).unwrap();
        assert!(r.state.coeffs()[2].norm() < 1e-12);
        assert!((r.state.norm() - top.norm()).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for twice_j in 1..=6 {
            let f = random_state(twice_j, &mut rng);
            let r = rotate_root_to_infinity(&f).unwrap();
            assert_eq!(r.state.coeffs()[twice_j], Complex64::new(0.0, 0.0));
            assert!((r.state.norm() - 1.0).abs() < 1e-12);
            assert!(!r.all_roots_at_infinity);
        }
    }
}
