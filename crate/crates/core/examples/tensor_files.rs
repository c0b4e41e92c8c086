//! Writes a tensor file, reads it back, and prints the JSON report the CLI
//! would produce for `classify`.
//!
//! cargo run --example tensor_files

use btensor::classify::{classify_all, ClassifyOptions};
use btensor::io::{load_tensor_with_warnings, save_tensor, InputDigest, ReportDocument, RunFlags};
use btensor::Tensor;

fn main() {
    let dir = std::env::temp_dir().join(format!("btensor-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("unit.json");

    let t = Tensor::unit(3, 2).unwrap().linear_combine(&Tensor::all_one(3, 2).unwrap(), 0.1).unwrap();
    save_tensor(&t, Some("unit plus 0.1 all-one"), &path).unwrap();
    println!("{}", std::fs::read_to_string(&path).unwrap());

    let loaded = load_tensor_with_warnings(&path).unwrap();
    assert_eq!(loaded.tensor, t);
    println!("round trip exact, {} warnings", loaded.warnings.len());

    let mut doc = ReportDocument::new("classify", RunFlags::default());
    doc.input = Some(InputDigest::of(&loaded.tensor));
    doc.classification = Some(classify_all(&loaded.tensor, &ClassifyOptions::default()));
    println!("{}", doc.to_json().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}
