//! The two entropy lower bounds and the gap between them.

use wehrl_lab::entropy::{bound_gap, lieb_bound, theorem2_bound};

pub fn main() {
    println!("{:>9} {:>14} {:>14} {:>12} {:>12}", "twice_j", "2j/(2j+1)", "proven", "gap", "1/(4j)");
    for twice_j in [1usize, 2, 3, 4, 10, 100, 10_000, 2_000_000] {
        println!(
            "{twice_j:>9} {:>14.10} {:>14.10} {:>12.4e} {:>12.4e}",
            lieb_bound(twice_j),
            theorem2_bound(twice_j),
            bound_gap(twice_j),
            1.0 / (2.0 * twice_j as f64)
        );
    }
}
