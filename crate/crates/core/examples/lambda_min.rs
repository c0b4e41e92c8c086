//! Estimates the smallest H-eigenvalue of even-order symmetric tensors with
//! the multi-start sphere oracle and compares the two normalizations.
//!
//! cargo run --example lambda_min

use btensor::decompose::h_eigen_positivity_check;
use btensor::oracle::{minimize, Normalization, OracleOptions};
use btensor::{MultiIndex, Tensor};

fn main() {
    let opts = OracleOptions::default();

    // diagonal tensor: lambda_min is the smallest diagonal entry
    let diag = Tensor::from_sparse(4, 3, &[
        (MultiIndex::from([1, 1, 1, 1]), 2.0),
        (MultiIndex::from([2, 2, 2, 2]), 5.0),
        (MultiIndex::from([3, 3, 3, 3]), 3.0),
    ])
    .unwrap();
    let r = minimize(&diag, Normalization::OrderNorm, &opts).unwrap();
    println!("diag(2, 5, 3): lambda_min ~ {:.12} at {:?}", r.lambda_min_estimate.unwrap(), r.minimizer);

    let mut entries = vec![(MultiIndex::from([1, 1, 1, 1]), 2.0), (MultiIndex::from([2, 2, 2, 2]), 2.0)];
    for pos in 0..4 {
        let mut idx = [2; 4];
        idx[pos] = 1;
        entries.push((MultiIndex::from(idx), -1.0));
    }
    let t = Tensor::from_sparse(4, 2, &entries).unwrap();
    for norm in [Normalization::TwoNorm, Normalization::OrderNorm] {
        let r = minimize(&t, norm, &opts).unwrap();
        println!("{norm:?}: min {:.9} at {:?} ({} samples)", r.min_value, r.minimizer, r.samples);
    }

    // quasi-double B input: the sign of lambda_min is known to be positive
    let q = Tensor::unit(4, 2).unwrap().scale(2.0).unwrap().linear_combine(&t, 0.4).unwrap();
    let h = h_eigen_positivity_check(&q, &opts).unwrap();
    println!("{:?}: lambda_min estimate {:.9}, positive {}", h.class, h.lambda_min_estimate, h.positive);
}
