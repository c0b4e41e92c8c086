//! Random search for quasi-double B0 tensors with a negative form value on
//! the unit sphere.
//!
//! cargo run --release --example search_b0 [trials]

use btensor::oracle::{conjecture_search, SearchParams};

fn main() {
    let trials = std::env::args().nth(1).map_or(200, |s| s.parse().expect("trials must be an integer"));
    for dim in [2, 3] {
        let mut params = SearchParams::new(4, dim, trials, 2024, 1e-6);
        params.starts = 16;
        let report = conjecture_search(&params).unwrap();
        println!(
            "order 4, dim {dim}: {} accepted of {} drawn, least minimum {:.3e}, {} candidates",
            report.trials,
            report.attempts,
            report.least_min_value,
            report.candidates.len()
        );
        for c in report.candidates.iter().take(3) {
            println!("  attempt {}: min {:.6} at {:?}", c.attempt, c.oracle.min_value, c.oracle.minimizer);
        }
    }
}
