//! Wehrl entropy of a mixed state against its pure members.

use wehrl_lab::entropy::{lieb_bound, mixed_wehrl, wehrl_entropy};
use wehrl_lab::sphere::{build_quadrature, SpherePoint};
use wehrl_lab::spin::{coherent_state, inner_product, MixedState};

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(64, 128)?;
    let w = SpherePoint::new(0.4, 1.1);
    let a = coherent_state(2, &w)?;
    let b = coherent_state(2, &w.antipode())?;
    println!("overlap of antipodal coherent states {:.1e}", inner_product(&a, &b)?.norm());
    println!("pure entropies {:.12} {:.12}", wehrl_entropy(&a, &rule)?, wehrl_entropy(&b, &rule)?);
    for t in [0.9, 0.7, 0.5] {
        let mixed = MixedState::new(vec![a.scaled(f64::sqrt(t).into()), b.scaled(f64::sqrt(1.0 - t).into())])?;
        println!("weights {t}/{:.1}: entropy {:.12} (pure floor {:.12})", 1.0 - t, mixed_wehrl(&mixed, &rule)?, lieb_bound(2));
    }
    Ok(())
}
