//! Builds a symmetric tensor as a Z-tensor plus nested partially all-one
//! layers, recovers the layers with `decompose`, and certifies positive
//! definiteness.
//!
//! cargo run --example decompose [seed]

use btensor::classify::ClassifyOptions;
use btensor::decompose::{decompose, pd_certify, CertifyOptions, DecomposeOptions};
use btensor::generate::layered_tensor;
use btensor::TensorClass;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed: u64 = std::env::args().nth(1).map_or(11, |s| s.parse().expect("seed must be an integer"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // draw until the instance is quasi-double B, which decomposition requires
    let l = loop {
        let l = layered_tensor(4, 4, &mut rng);
        let v = btensor::classify::check_class(&l.tensor, TensorClass::QuasiDoubleB, &ClassifyOptions::default());
        if v.map(|v| v.holds()).unwrap_or(false) && !l.layers.is_empty() {
            break l;
        }
    };
    println!("generated layers:");
    for (h, j) in &l.layers {
        println!("  h = {h:.6}  J = {j}");
    }

    let d = decompose(&l.tensor, &DecomposeOptions::default()).expect("quasi-double B input");
    println!("recovered s = {} layers:", d.s());
    for step in &d.steps {
        println!("  h = {:.6}  J-hat = {}  J-min = {}", step.h, step.j_hat, step.j_min);
    }
    println!("reconstruction error {:.2e}", d.reconstruction_error);
    println!("residual deviation from generated Z-tensor {:.2e}", d.residual.max_abs_diff(&l.residual).unwrap());

    let cert = pd_certify(&l.tensor, &CertifyOptions { verbose: true, ..CertifyOptions::default() });
    println!("verdict {:?} via {:?}", cert.verdict, cert.route);
    for line in &cert.justification {
        println!("  {line}");
    }
}
