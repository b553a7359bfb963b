//! Stellar representation: roots of a state, rebuilding it, and rotating a root away.

use num_complex::Complex64;
use wehrl_lab::sphere::{chordal_distance, SpherePoint};
use wehrl_lab::spin::{apply_su2, coherent_state, inner_product, majorana_roots, rotate_root_to_infinity, state_from_roots};
use wehrl_lab::spin::SU2Element;

pub fn main() -> wehrl_lab::Result<()> {
    let roots = vec![SpherePoint::new(0.5, 0.0), SpherePoint::new(-1.0, 2.0), SpherePoint::Infinity];
    let f = state_from_roots(3, &roots)?;
    println!("coefficients {:?}", f.coeffs());
    for r in majorana_roots(&f)? {
        println!("  root {r}");
    }

    let k = coherent_state(4, &SpherePoint::new(0.3, -0.2))?;
    let rk = majorana_roots(&k)?;
    let spread = rk.iter().map(|a| chordal_distance(a, &rk[0])).fold(0.0, f64::max);
    println!("coherent 2j=4: all roots at {} (spread {spread:.1e})", rk[0]);

    let r = rotate_root_to_infinity(&f)?;
    println!("after rotation the top coefficient is {}", r.state.coeffs()[3]);
    let g = SU2Element::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))?;
    let overlap = inner_product(&f, &f)?.re - inner_product(&apply_su2(&g, &f), &apply_su2(&g, &f))?.re;
    println!("rotations preserve the norm: difference {overlap:.1e}");
    Ok(())
}
