//! Entropies of the j = 1 state proportional to z, against the closed forms.

use wehrl_lab::entropy::{entropy_report, renyi_wehrl, wehrl_entropy};
use wehrl_lab::sphere::build_quadrature;
use wehrl_lab::spin::make_real_state;

pub fn main() -> wehrl_lab::Result<()> {
    let rule = build_quadrature(64, 128)?;
    let f = make_real_state(2, &[0.0, 2f64.sqrt(), 0.0])?;
    let s = wehrl_entropy(&f, &rule)?;
    let r4 = renyi_wehrl(&f, 4.0, &rule)?;
    println!("Wehrl entropy    {s:.15}  (5/3 - ln 2 = {:.15})", 5.0 / 3.0 - 2f64.ln());
    println!("Renyi-Wehrl q=4  {r4:.15}  (ln 3/2     = {:.15})", 1.5f64.ln());
    let report = entropy_report(&f, &rule)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
