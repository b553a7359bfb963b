//! Normalized p-norms of coherent states are 1 for every p and every center.

use wehrl_lab::entropy::normalized_p_norm;
use wehrl_lab::sphere::{build_quadrature, SpherePoint};
use wehrl_lab::spin::coherent_state;

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(64, 128)?;
    let centers = [SpherePoint::origin(), SpherePoint::new(1.0, 0.0), SpherePoint::new(2.0, 1.0), SpherePoint::Infinity];
    println!("{:>7} {:>8} {:>6} {:>22}", "twice_j", "center", "p", "norm - 1");
    for twice_j in [1, 2, 3, 7] {
        for w in &centers {
            let k = coherent_state(twice_j, w)?;
            for p in [1.0, 3.0, 6.5] {
                let n = normalized_p_norm(&k, p, &rule)?;
                println!("{twice_j:>7} {:>8} {p:>6} {:>22.3e}", w.to_string(), n - 1.0);
            }
        }
    }
    Ok(())
}
