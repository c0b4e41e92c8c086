//! Evaluates every class predicate on two small tensors and prints the
//! verdicts with their first failing inequality.
//!
//! cargo run --example classify

use btensor::{ClassifyOptions, MultiIndex, Tensor, Verdict};

fn show(name: &str, t: &Tensor) {
    let report = btensor::classify::classify_all(t, &ClassifyOptions::default());
    println!("{name}: order {}, dim {}, symmetric {}", report.order, report.dim, report.symmetric);
    for r in &report.rows {
        println!("  row {}: diagonal {:>6}  beta {:>6}  Delta {:>6}", r.row, r.diagonal, r.beta, r.delta);
    }
    for (class, verdict) in &report.verdicts {
        let text = match verdict {
            Verdict::Holds => "holds".to_string(),
            Verdict::Fails { witness } => format!("fails: {witness}"),
            Verdict::Inapplicable { reason } => format!("n/a: {reason}"),
        };
        println!("  {class:<14} {text}");
    }
    println!();
}

fn main() {
    // slices A(1,:,:) = [[2, 0], [0, -0.3]] and A(2,:,:) = [[-1, -0.3], [-1.5, 2]]
    let quasi = Tensor::new(3, 2, vec![2.0, 0.0, 0.0, -0.3, -1.0, -0.3, -1.5, 2.0]).unwrap();
    show("quasi-double B, not double B", &quasi);

    let mut entries = vec![(MultiIndex::from([1, 1, 1, 1]), 2.0), (MultiIndex::from([2, 2, 2, 2]), 2.0)];
    for pos in 0..4 {
        let mut idx = [2; 4];
        idx[pos] = 1;
        entries.push((MultiIndex::from(idx), -1.0));
    }
    let b0 = Tensor::from_sparse(4, 2, &entries).unwrap();
    show("quasi-double B0 but indefinite", &b0);
}
