//! Multistart Wehrl entropy minimization for small spins.

use wehrl_lab::entropy::{lieb_bound, theorem2_bound};
use wehrl_lab::search::{minimize_wehrl, SearchOptions};
use wehrl_lab::sphere::{build_quadrature, chordal_distance};
use wehrl_lab::spin::majorana_roots;

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(64, 128)?;
    for twice_j in [1, 2, 3] {
        let opts = SearchOptions { num_starts: 4, seed: 7, ..Default::default() };
        let r = minimize_wehrl(twice_j, &opts, &rule)?;
        let roots = majorana_roots(&r.best_state)?;
        let spread = roots.iter().map(|a| chordal_distance(a, &roots[0])).fold(0.0, f64::max);
        println!(
            "2j={twice_j}: min S = {:.12} (2j/(2j+1) = {:.12}, proven bound {:.6}), root spread {spread:.1e}, {} iterations",
            r.best_value,
            lieb_bound(twice_j),
            theorem2_bound(twice_j),
            r.iterations_used
        );
    }
    Ok(())
}
