//! Radial Euler-Lagrange problem: shooting, boundary scan and diagnostics.

use wehrl_lab::entropy::ExponentPair;
use wehrl_lab::ode::{boundary_scan, coherent_profile, el_residual, energy_diagnostic, problem_from_exponents, shoot};
use wehrl_lab::ode::GridSpec;

pub fn main() -> wehrl_lab::Result<()> {
    let problem = problem_from_exponents(2, &ExponentPair::new(2.0, 3.0)?, 1.0)?;
    let a = problem.a_expected;
    println!("A = {a:.10}, s = {:.6}", problem.s);

    let shot = shoot(&problem, a, &GridSpec::default())?;
    let exact = coherent_profile(&problem);
    let err = shot.u_values.iter().zip(&exact.u_values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    println!("shoot from A: sup error {err:.1e}, residual {:.1e}", el_residual(&problem, &shot)?);
    println!("energy identity deviation {:.1e}", energy_diagnostic(&problem, &exact)?);

    let roots = boundary_scan(&problem, (0.1 * a, 10.0 * a), 64)?;
    println!("admissible initial values: {roots:?}");

    let off = problem_from_exponents(2, &ExponentPair::new(2.0, 4.0)?, 1.0)?;
    println!("off-lattice profile residual {:.3}", el_residual(&off, &coherent_profile(&off))?);
    Ok(())
}
