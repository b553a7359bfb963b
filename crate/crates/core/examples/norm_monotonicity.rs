//! Norms decrease along q = p + n/j: random scans and a ratio maximization.

use wehrl_lab::entropy::ExponentPair;
use wehrl_lab::search::{maximize_norm_ratio, monotonicity_scan, SearchOptions};
use wehrl_lab::sphere::build_quadrature;

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(48, 96)?;
    for (twice_j, p) in [(2, 2.0), (1, 2.5), (3, 2.0)] {
        let report = monotonicity_scan(twice_j, p, 3, 200, 1, &rule)?;
        for row in &report.rows {
            println!(
                "2j={twice_j} p={p} n={} q={:.4}: max ratio {:.9}, violations {}, coherent {:.1e}",
                row.n,
                row.q,
                row.max_ratio,
                row.violations,
                row.coherent_ratio - 1.0
            );
        }
    }
    let opts = SearchOptions { num_starts: 3, ..Default::default() };
    for q in [3.0, 2.5] {
        let r = maximize_norm_ratio(2, &ExponentPair::new(2.0, q)?, &opts, &rule)?;
        println!("max nnorm_{q}/nnorm_2 at 2j=2: {:.9}", r.best_value);
    }
    Ok(())
}
