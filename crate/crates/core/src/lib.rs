//! Classification of real order-`m` dimension-`n` tensors into the B-tensor
//! family (B, double B, quasi-double B, quasi-double B₀), the diagonally
//! dominant families (DSDD, Q-DSDD) and Z-tensors, together with the
//! constructive `M + Σ h_k ε^{J_k}` decomposition of symmetric (quasi-)double
//! B-tensors and positive-definiteness certificates for even-order symmetric
//! instances.
//!
//! Every certificate can be cross-checked by the sphere-minimization oracle in
//! [`oracle`], which is independent of the class predicates.
//!
//! Indices are **1-based** everywhere in the public API (multi-indices, row
//! numbers, index subsets, witnesses), matching the usual `a_{i_1⋯i_m}`
//! notation. Storage is dense and row-major with `i_1` varying slowest.
//!
//! ```
//! use btensor::{classify, Tensor, MultiIndex};
//!
//! // a_{1111} = a_{2222} = 2, a_{1222} and its permutations = -1
//! let t = Tensor::from_sparse(4, 2, &[
//!     (MultiIndex::from([1, 1, 1, 1]), 2.0),
//!     (MultiIndex::from([2, 2, 2, 2]), 2.0),
//!     (MultiIndex::from([1, 2, 2, 2]), -1.0),
//!     (MultiIndex::from([2, 1, 2, 2]), -1.0),
//!     (MultiIndex::from([2, 2, 1, 2]), -1.0),
//!     (MultiIndex::from([2, 2, 2, 1]), -1.0),
//! ]).unwrap();
//! let report = classify::classify_all(&t, &classify::ClassifyOptions::default());
//! assert!(report.holds(classify::TensorClass::ProductIneq));
//! assert!(!report.holds(classify::TensorClass::QuasiDoubleB));
//! ```

pub mod classify;
pub mod cli;
pub mod decompose;
pub mod generate;
pub mod io;
pub mod oracle;
pub mod tensor;

pub use classify::{ClassReport, ClassifyOptions, TensorClass, Verdict, Witness};
pub use decompose::{Certificate, Decomposition, DecomposeMode, PdVerdict};
pub use oracle::{OracleOptions, OracleResult};
pub use tensor::{IndexSubset, MultiIndex, Tensor, TensorError};
