//! The gradient identity for |f|^{q/2} and its epsilon-regularized form.

use wehrl_lab::carlen::{carlen_epsilon_error, carlen_residuals, regularized_identity, variational_functional};
use wehrl_lab::entropy::ExponentPair;
use wehrl_lab::search::random_state;
use wehrl_lab::sphere::{build_quadrature, SpherePoint};
use wehrl_lab::spin::coherent_state;

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(64, 128)?;
    for twice_j in [1, 3, 6] {
        let f = random_state(twice_j, 11);
        for c in carlen_residuals(&f, &[2.0, 2.5, 4.0, 5.0], &rule)? {
            println!("2j={twice_j} q={:<4} lhs={:.12} rhs={:.12} rel={:.1e}", c.q, c.lhs, c.rhs, c.rel_residual);
        }
    }
    let f = random_state(2, 12);
    for eps in [1e-2, 1e-4, 1e-6] {
        let (lhs, rhs, e) = regularized_identity(&f, 3.0, eps, &rule)?;
        println!("eps={eps:.0e}: lhs + E - rhs = {:.1e}, E = {:.3e}", lhs + e - rhs, carlen_epsilon_error(&f, 3.0, eps, &rule)?);
    }
    let k = coherent_state(2, &SpherePoint::origin())?;
    let e = ExponentPair::new(2.0, 3.0)?;
    println!("functional at the coherent state: {:.12} (1/5)", variational_functional(&k, 3.0, &e, &rule)?);
    Ok(())
}
