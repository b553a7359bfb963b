//! Majorana roots: the 2j zeros of the polynomial part on the sphere.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::{horner, horner_with_derivative, inner_product, make_state, SpinState};
use crate::error::{invalid, Result};
use crate::sphere::{chordal_distance_sq, SpherePoint};

const NEGLIGIBLE: f64 = 1e-14;
const MERGE_TOLERANCE: f64 = 1e-10;
const SNAP_DISTANCE: f64 = 1e-7;

/// Roots of Σ a_k z^k with a_0 ≠ 0 ≠ a_d via a balanced companion matrix.
fn companion_roots(a: &[Complex64]) -> Vec<Complex64> {
    let d = a.len() - 1;
    if d == 1 {
        return vec![-a[0] / a[1]];
    }
    let lead = a[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -a[i] / lead;
    }
    balance(&mut m);
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000).unwrap_or_else(|| Schur::new(m));
    let (_, t) = schur.unpack();
    (0..d).map(|i| t[(i, i)]).collect()
}

/// Parlett–Reinsch diagonal scaling by powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for k in 0..n {
                if k != i {
                    c += m[(k, i)].l1_norm();
                    r += m[(i, k)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r / f) < 0.95 * s * f {
                done = false;
                for k in 0..n {
                    m[(i, k)] /= f;
                    m[(k, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Newton refinement of a root of multiplicity `m`, applied to P^{(m−1)}
/// in the chart where the root is small.
fn polish(a: &[Complex64], root: Complex64, m: usize) -> Complex64 {
    let inverted = root.norm() > 1.0;
    let mut coeffs: Vec<Complex64> = if inverted { a.iter().rev().cloned().collect() } else { a.to_vec() };
    for _ in 1..m {
        coeffs = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    }
    if coeffs.len() < 2 {
        return root;
    }
    let mut x = if inverted { 1.0 / root } else { root };
    let mut best = horner(&coeffs, x).norm();
    for _ in 0..8 {
        let (p, dp) = horner_with_derivative(&coeffs, x);
        if dp.norm_sqr() == 0.0 {
            break;
        }
        let next = x - p / dp;
        let val = horner(&coeffs, next).norm();
        if !(val < best) {
            break;
        }
        best = val;
        x = next;
    }
    if inverted {
        1.0 / x
    } else {
        x
    }
}

/// A root with multiplicity.
#[derive(Debug, Clone, Copy)]
struct Cluster {
    point: SpherePoint,
    multiplicity: usize,
}

fn expand(clusters: &[Cluster]) -> Vec<SpherePoint> {
    clusters.iter().flat_map(|c| std::iter::repeat(c.point).take(c.multiplicity)).collect()
}

/// Weighted centroid, averaged in the chart holding the cluster.
fn centroid(members: &[Cluster]) -> SpherePoint {
    if members.iter().any(|c| c.point.is_infinite()) {
        return SpherePoint::Infinity;
    }
    let total: usize = members.iter().map(|c| c.multiplicity).sum();
    let zs: Vec<(Complex64, f64)> =
        members.iter().map(|c| (c.point.finite().unwrap(), c.multiplicity as f64)).collect();
    let mean_mod: f64 = zs.iter().map(|(z, m)| z.norm() * m).sum::<f64>() / total as f64;
    if mean_mod <= 1.0 {
        SpherePoint::Finite(zs.iter().map(|(z, m)| z * m).sum::<Complex64>() / total as f64)
    } else {
        let w = zs.iter().map(|(z, m)| m / z).sum::<Complex64>() / total as f64;
        if w.norm_sqr() == 0.0 {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(1.0 / w)
        }
    }
}

/// Backward error of a root multiset in the unitarily invariant norm.
fn factorization_error(state: &SpinState, roots: &[SpherePoint]) -> f64 {
    let rebuilt = match state_from_roots(state.twice_j(), roots) {
        Ok(s) => s,
        Err(_) => return f64::INFINITY,
    };
    let target = state.normalized().expect("nonzero state");
    let ov = inner_product(&rebuilt, &target).unwrap();
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
    let a = rebuilt.orthonormal_coords();
    let b = target.orthonormal_coords();
    a.iter().zip(&b).map(|(x, y)| (x * phase - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Connected components of clusters under chordal distance < `threshold`.
fn components(clusters: &[Cluster], threshold: f64) -> Vec<Vec<usize>> {
    let n = clusters.len();
    let mut label: Vec<usize> = (0..n).collect();
    let t2 = threshold * threshold;
    let find = |label: &Vec<usize>, mut i: usize| {
        while label[i] != i {
            i = label[i];
        }
        i
    };
    for i in 0..n {
        for k in i + 1..n {
            if chordal_distance_sq(&clusters[i].point, &clusters[k].point) < t2 {
                let (a, b) = (find(&label, i), find(&label, k));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots_seen: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&label, i);
        match roots_seen.iter().position(|&x| x == r) {
            Some(p) => groups[p].push(i),
            None => {
                roots_seen.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Merges nearby roots whenever the merged multiset still factors the state.
fn merge_multiple_roots(state: &SpinState, mut clusters: Vec<Cluster>) -> Vec<Cluster> {
    let base_error = factorization_error(state, &expand(&clusters));
    let allowed = MERGE_TOLERANCE.max(4.0 * base_error);
    for threshold in [0.3, 0.1, 0.03, 0.01, 1e-3, 1e-5] {
        let groups = components(&clusters, threshold);
        if groups.iter().all(|g| g.len() == 1) {
            continue;
        }
        let mut next: Vec<Cluster> = Vec::new();
        let mut trial_changed = false;
        for g in &groups {
            if g.len() == 1 {
                next.push(clusters[g[0]]);
                continue;
            }
            let members: Vec<Cluster> = g.iter().map(|&i| clusters[i]).collect();
            let merged = Cluster {
                point: centroid(&members),
                multiplicity: members.iter().map(|c| c.multiplicity).sum(),
            };
            // candidate: this group merged, the rest as currently
            let mut candidate: Vec<Cluster> = clusters
                .iter()
                .enumerate()
                .filter(|(i, _)| !g.contains(i))
                .map(|(_, c)| *c)
                .collect();
            candidate.push(merged);
            if factorization_error(state, &expand(&candidate)) <= allowed {
                next.push(merged);
                trial_changed = true;
            } else {
                next.extend(members);
            }
        }
        if trial_changed {
            clusters = next;
        }
    }
    // roots closer than the snap distance are one root regardless
    let groups = components(&clusters, SNAP_DISTANCE);
    groups
        .iter()
        .map(|g| {
            let members: Vec<Cluster> = g.iter().map(|&i| clusters[i]).collect();
            Cluster { point: centroid(&members), multiplicity: members.iter().map(|c| c.multiplicity).sum() }
        })
        .collect()
}

/// The 2j zeros of the state on the sphere, with multiplicity.
pub fn majorana_roots(state: &SpinState) -> Result<Vec<SpherePoint>> {
    if state.is_zero() {
        return invalid("zero state has no Majorana roots");
    }
    let n = state.twice_j();
    let scaled = state.orthonormal_coords();
    let top = scaled.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let negligible = |k: usize| scaled[k].norm() <= NEGLIGIBLE * top;
    let mut hi = n;
    while negligible(hi) {
        hi -= 1;
    }
    let mut lo = 0;
    while negligible(lo) {
        lo += 1;
    }
    let at_infinity = n - hi;
    let at_zero = lo;
    let core = &state.coeffs()[lo..=hi];

    let mut clusters: Vec<Cluster> = Vec::new();
    if at_zero > 0 {
        clusters.push(Cluster { point: SpherePoint::origin(), multiplicity: at_zero });
    }
    if at_infinity > 0 {
        clusters.push(Cluster { point: SpherePoint::Infinity, multiplicity: at_infinity });
    }
    if core.len() > 1 {
        for r in companion_roots(core) {
            clusters.push(Cluster { point: SpherePoint::Finite(r), multiplicity: 1 });
        }
    }
    let mut clusters = merge_multiple_roots(state, clusters);
    for c in clusters.iter_mut() {
        if let SpherePoint::Finite(z) = c.point {
            if z.norm_sqr() > 0.0 {
                c.point = SpherePoint::Finite(polish(state.coeffs(), z, c.multiplicity));
            }
        }
    }
    let mut roots = expand(&clusters);
    roots.sort_by(|a, b| match (a, b) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => std::cmp::Ordering::Equal,
        (SpherePoint::Infinity, _) => std::cmp::Ordering::Greater,
        (_, SpherePoint::Infinity) => std::cmp::Ordering::Less,
        (SpherePoint::Finite(x), SpherePoint::Finite(y)) => {
            x.norm().partial_cmp(&y.norm()).unwrap().then(x.arg().partial_cmp(&y.arg()).unwrap())
        }
    });
    Ok(roots)
}

/// The normalized state whose polynomial part has exactly these zeros.
pub fn state_from_roots(twice_j: usize, roots: &[SpherePoint]) -> Result<SpinState> {
    if roots.len() != twice_j {
        return invalid(format!("twice_j = {twice_j} needs {twice_j} roots, got {}", roots.len()));
    }
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let factor = match r {
            SpherePoint::Infinity => continue,
            SpherePoint::Finite(z) if z.norm() <= 1.0 => [-z, Complex64::new(1.0, 0.0)],
            SpherePoint::Finite(z) => [Complex64::new(1.0, 0.0), -1.0 / z],
        };
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c * factor[0];
            next[i + 1] += c * factor[1];
        }
        poly = next;
    }
    poly.resize(twice_j + 1, Complex64::new(0.0, 0.0));
    make_state(twice_j, poly)?.normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::chordal_distance;
    use crate::spin::tests::random_state;
    use crate::spin::{coherent_state, make_real_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Greedy matching distance between two root multisets.
    fn multiset_distance(a: &[SpherePoint], b: &[SpherePoint]) -> f64 {
        let mut used = vec![false; b.len()];
        let mut worst: f64 = 0.0;
        for x in a {
            let (k, d) = b
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, y)| (k, chordal_distance(x, y)))
                .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap())
                .unwrap();
            used[k] = true;
            worst = worst.max(d);
        }
        worst
    }

    #[test]
    fn coherent_state_has_one_multiple_root() {
        for w in [SpherePoint::new(0.4, -0.2), SpherePoint::new(2.0, 1.0), SpherePoint::origin()] {
            for twice_j in 1..=10 {
                let roots = majorana_roots(&coherent_state(twice_j, &w).unwrap()).unwrap();
                assert_eq!(roots.len(), twice_j);
                let expected = w.antipode();
                for r in &roots {
                    assert!(chordal_distance(r, &expected) < 1e-8, "2j={twice_j} {r} vs {expected}");
                }
            }
        }
    }

    #[test]
    fn monomial_roots() {
        let roots = majorana_roots(&make_real_state(2, &[0.0, 1.0, 0.0]).unwrap()).unwrap();
        assert_eq!(roots, vec![SpherePoint::origin(), SpherePoint::Infinity]);
        assert!(majorana_roots(&make_real_state(2, &[0.0, 0.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn round_trip_through_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for twice_j in 1..=10 {
            for _ in 0..20 {
                let roots: Vec<SpherePoint> = (0..twice_j)
                    .map(|_| {
                        let r = rng.gen_range(0.0f64..1.0).tan() * 3.0;
                        SpherePoint::Finite(Complex64::from_polar(r, rng.gen_range(0.0..6.3)))
                    })
                    .collect();
                let f = state_from_roots(twice_j, &roots).unwrap();
                let back = majorana_roots(&f).unwrap();
                assert!(multiset_distance(&roots, &back) < 1e-8, "2j={twice_j}");
            }
        }
    }

    #[test]
    fn roots_of_random_states_annihilate_them() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for twice_j in 1..=8 {
            let f = random_state(twice_j, &mut rng);
            for r in majorana_roots(&f).unwrap() {
                assert!(f.evaluate(&r).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn state_from_roots_examples() {
        let z2 = state_from_roots(2, &[SpherePoint::origin(), SpherePoint::origin()]).unwrap();
        assert!((z2.coeffs()[2].norm() - 1.0).abs() < 1e-15);
        let c = state_from_roots(2, &[SpherePoint::new(-1.0, 0.0), SpherePoint::new(-1.0, 0.0)]).unwrap();
        let k = coherent_state(2, &SpherePoint::new(1.0, 0.0)).unwrap();
        assert!((inner_product(&c, &k).unwrap().norm() - 1.0).abs() < 1e-14);
        let inf = state_from_roots(1, &[SpherePoint::Infinity]).unwrap();
        assert_eq!(inf.coeffs(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(state_from_roots(2, &[SpherePoint::Infinity]).is_err());
    }

    #[test]
    fn distinct_close_roots_are_not_merged() {
        let a = SpherePoint::new(0.3, 0.0);
        let b = SpherePoint::new(0.3, 1e-3);
        let f = state_from_roots(2, &[a, b]).unwrap();
        let roots = majorana_roots(&f).unwrap();
        assert!(multiset_distance(&[a, b], &roots) < 1e-9);
    }
}
