//! Splitting a symmetric (quasi-)double B-tensor as `M + Σ h_k ε^{Ĵ_k}` with
//! `M` a symmetric Z-tensor, and the class-based positive-definiteness
//! certificates built on top of it.
//!
//! The loop repeatedly subtracts the largest constant that can come off the
//! principal block spanned by the rows that still have a positive
//! off-diagonal entry. Each subtraction lowers `β_i` by exactly `h_k` on that
//! block and keeps the class, so at most `n` steps are needed and the final
//! residual is a (Q-)DSDD Z-tensor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    all_row_stats, check_class, qdsdd_sides_for, ClassifyError, ClassifyOptions,
    TensorClass, Witness,
};
use crate::oracle::{self, Normalization, OracleError, OracleOptions, OracleResult};
use crate::tensor::{IndexSubset, MultiIndex, Tensor};

/// Absolute tolerance on the per-step `β` shift.
pub const BETA_SHIFT_TOLERANCE: f64 = 1e-12;
/// Absolute per-entry tolerance on `M + Σ h_k ε^{Ĵ_k}` against the input.
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-12;

/// Which class the input must belong to. The loop is the same for both; the
/// residual is Q-DSDD in quasi mode and DSDD in double mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecomposeMode {
    #[default]
    Quasi,
    Double,
}

impl DecomposeMode {
    pub fn input_class(self) -> TensorClass {
        match self {
            DecomposeMode::Quasi => TensorClass::QuasiDoubleB,
            DecomposeMode::Double => TensorClass::DoubleB,
        }
    }

    pub fn residual_class(self) -> TensorClass {
        match self {
            DecomposeMode::Quasi => TensorClass::Qdsdd,
            DecomposeMode::Double => TensorClass::Dsdd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    pub mode: DecomposeMode,
    /// Re-run the input class predicate after every subtraction.
    pub reverify: bool,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            mode: DecomposeMode::Quasi,
            reverify: true,
        }
    }
}

impl DecomposeOptions {
    pub fn with_mode(mode: DecomposeMode) -> Self {
        DecomposeOptions {
            mode,
            ..Default::default()
        }
    }
}

/// One subtraction `B_{k+1} = B_k − h ε^{Ĵ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionStep {
    pub h: f64,
    /// Rows of `B_k` with a positive off-diagonal entry.
    pub j_hat: IndexSubset,
    /// Rows of `Ĵ` whose largest off-diagonal entry equals `h`; they leave
    /// `Ĵ` at the next step.
    pub j_min: IndexSubset,
    pub beta_before: Vec<f64>,
    pub beta_after: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub mode: DecomposeMode,
    /// The symmetric Z-tensor `M`.
    pub residual: Tensor,
    pub steps: Vec<DecompositionStep>,
    /// Largest per-entry deviation of the reconstruction from the input.
    pub reconstruction_error: f64,
}

impl Decomposition {
    /// Number of subtraction steps; zero when the input is already a
    /// Z-tensor.
    pub fn s(&self) -> usize {
        self.steps.len()
    }

    /// `M + Σ h_k ε^{Ĵ_k}`.
    pub fn reconstruct(&self) -> Tensor {
        let (m, n) = (self.residual.order(), self.residual.dim());
        self.steps.iter().fold(self.residual.clone(), |acc, step| {
            let eps = Tensor::partially_all_one(m, n, &step.j_hat).expect("subset within dim");
            acc.linear_combine(&eps, step.h).expect("same shape")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error("tensor is not symmetric: entries {first} and {second} differ")]
    NotSymmetric { first: MultiIndex, second: MultiIndex },
    #[error("tensor is not {class}: {witness}")]
    Precondition { class: TensorClass, witness: Witness },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("step {step}: positive entry {index} has an index outside {j_hat}")]
    SupportEscapes {
        step: usize,
        index: MultiIndex,
        j_hat: IndexSubset,
    },
    #[error("step {step}: beta of row {row} is {got}, expected {expected}")]
    BetaShift {
        step: usize,
        row: usize,
        expected: f64,
        got: f64,
    },
    #[error("step {step}: rows with positive off-diagonal entries are {found:?}, expected {expected:?}")]
    UnexpectedSupport {
        step: usize,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("step {step}: intermediate tensor is no longer {class}: {witness}")]
    ClassLost {
        step: usize,
        class: TensorClass,
        witness: Witness,
    },
    #[error("residual is not {class}: {witness}")]
    Residual { class: TensorClass, witness: Witness },
    #[error("reconstruction error {0} exceeds tolerance")]
    Reconstruction(f64),
    #[error("order {0} is odd; this needs an even order")]
    OddOrder(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn require_symmetric(t: &Tensor) -> Result<(), DecomposeError> {
    match t.symmetry_violation() {
        Some((first, second)) => Err(DecomposeError::NotSymmetric { first, second }),
        None => Ok(()),
    }
}

fn require_class(t: &Tensor, class: TensorClass) -> Result<(), DecomposeError> {
    match check_class(t, class, &ClassifyOptions::default())?.witness() {
        Some(w) => Err(DecomposeError::Precondition {
            class,
            witness: w.clone(),
        }),
        None => Ok(()),
    }
}

/// Every positive off-diagonal entry must have all its indices in `j_hat`;
/// this is what makes `β` drop by exactly `h` on `j_hat`.
fn check_support(t: &Tensor, j_hat: &IndexSubset, step: usize) -> Result<(), DecomposeError> {
    let row_len = t.row_len();
    let stride = t.diagonal_stride();
    let mut digits = vec![0; t.order()];
    for (off, &v) in t.entries().iter().enumerate() {
        if v <= 0.0 || off % row_len == (off / row_len) * stride {
            continue;
        }
        t.digits(off, &mut digits);
        if digits.iter().any(|&d| !j_hat.contains(d + 1)) {
            return Err(DecomposeError::SupportEscapes {
                step,
                index: t.multi_index(off),
                j_hat: j_hat.clone(),
            });
        }
    }
    Ok(())
}

/// Runs the subtraction loop on a symmetric tensor of the mode's class.
pub fn decompose(t: &Tensor, opts: &DecomposeOptions) -> Result<Decomposition, DecomposeError> {
    require_symmetric(t)?;
    let class = opts.mode.input_class();
    require_class(t, class)?;

    let (m, n) = (t.order(), t.dim());
    let mut current = t.clone();
    let mut steps: Vec<DecompositionStep> = Vec::new();
    let mut expected: Option<Vec<usize>> = None;
    loop {
        let step = steps.len() + 1;
        let rows = all_row_stats(&current);
        // β_i > 0 exactly when row i has a positive off-diagonal entry
        let positive: Vec<usize> = rows.iter().filter(|s| s.beta > 0.0).map(|s| s.row).collect();
        if let Some(exp) = expected.take() {
            if exp != positive {
                return Err(DecomposeError::UnexpectedSupport {
                    step,
                    expected: exp,
                    found: positive,
                });
            }
        }
        if positive.is_empty() {
            break;
        }
        let j_hat = IndexSubset::new(positive, n).expect("rows within dim");
        check_support(&current, &j_hat, step)?;

        let h = j_hat.iter().map(|i| rows[i - 1].beta).fold(f64::INFINITY, f64::min);
        let j_min = IndexSubset::new(j_hat.iter().filter(|&i| rows[i - 1].beta == h), n)
            .expect("rows within dim");
        let eps = Tensor::partially_all_one(m, n, &j_hat).expect("subset within dim");
        let next = current.linear_combine(&eps, -h).expect("same shape");

        let after = all_row_stats(&next);
        for (before, now) in rows.iter().zip(&after) {
            let expected = if j_hat.contains(before.row) {
                before.beta - h
            } else {
                before.beta
            };
            if (now.beta - expected).abs() > BETA_SHIFT_TOLERANCE {
                return Err(DecomposeError::BetaShift {
                    step,
                    row: before.row,
                    expected,
                    got: now.beta,
                });
            }
        }
        if opts.reverify {
            if let Some(w) = check_class(&next, class, &ClassifyOptions::default())?.witness() {
                return Err(DecomposeError::ClassLost {
                    step,
                    class,
                    witness: w.clone(),
                });
            }
        }

        expected = Some(j_hat.iter().filter(|&i| !j_min.contains(i)).collect());
        steps.push(DecompositionStep {
            h,
            j_hat,
            j_min,
            beta_before: rows.iter().map(|s| s.beta).collect(),
            beta_after: after.iter().map(|s| s.beta).collect(),
        });
        current = next;
    }
    debug_assert!(steps.len() <= n);

    let residual_class = opts.mode.residual_class();
    for c in [TensorClass::Z, residual_class] {
        if let Some(w) = check_class(&current, c, &ClassifyOptions::default())?.witness() {
            return Err(DecomposeError::Residual {
                class: c,
                witness: w.clone(),
            });
        }
    }
    require_symmetric(&current)?;

    let mut dec = Decomposition {
        mode: opts.mode,
        residual: current,
        steps,
        reconstruction_error: 0.0,
    };
    let err = dec.reconstruct().max_abs_diff(t).expect("same shape");
    if err > RECONSTRUCTION_TOLERANCE {
        return Err(DecomposeError::Reconstruction(err));
    }
    dec.reconstruction_error = err;
    Ok(dec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdVerdict {
    PositiveDefinite,
    NotPositiveDefinite,
    Inconclusive,
}

/// A justification chain for a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Even-order symmetric B-tensor.
    EvenSymmetricBTensor,
    /// Even-order symmetric double B-tensor, split into a DSDD Z-tensor plus
    /// nonnegative multiples of partially all-one tensors.
    EvenSymmetricDoubleB,
    /// Even-order symmetric quasi-double B-tensor, split into a Q-DSDD
    /// Z-tensor plus nonnegative multiples of partially all-one tensors.
    EvenSymmetricQuasiDoubleB,
    /// Even-order symmetric DSDD tensor with positive diagonal.
    EvenSymmetricDsdd,
    /// Even-order symmetric tensor with positive diagonal and a row `i` that
    /// dominates (`|a_{i⋯i}| ≥ r_i`) and meets the Q-DSDD inequality with
    /// every other row.
    EvenSymmetricQdsddAnchorRow,
    /// A vector with nonpositive form value.
    OracleWitness,
}

impl Route {
    pub fn description(self) -> &'static str {
        match self {
            Route::EvenSymmetricBTensor => {
                "even order + symmetric + B-tensor => positive definite"
            }
            Route::EvenSymmetricDoubleB => {
                "even order + symmetric + double B => DSDD Z-tensor plus nonnegative partially all-one terms => positive definite"
            }
            Route::EvenSymmetricQuasiDoubleB => {
                "even order + symmetric + quasi-double B => Q-DSDD Z-tensor plus nonnegative partially all-one terms => positive definite"
            }
            Route::EvenSymmetricDsdd => {
                "even order + symmetric + positive diagonal + DSDD => positive definite"
            }
            Route::EvenSymmetricQdsddAnchorRow => {
                "even order + symmetric + positive diagonal + Q-DSDD anchored at a dominant row => positive definite"
            }
            Route::OracleWitness => "form value <= 0 at an explicit vector => not positive definite",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub classify: ClassifyOptions,
    /// Search for a violating vector when no class route fires.
    pub oracle_fallback: bool,
    /// Attach oracle evidence to positive certificates too.
    pub confirm_with_oracle: bool,
    pub oracle: OracleOptions,
    /// Evaluate every route instead of stopping at the first.
    pub verbose: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: PdVerdict,
    /// The route that decided the verdict.
    pub route: Option<Route>,
    /// Human-readable chain behind `route`.
    pub justification: Vec<String>,
    /// Every route that fired; only filled past the first in verbose mode.
    pub routes_fired: Vec<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_confirmation: Option<OracleResult>,
    /// For `NotPositiveDefinite`: `x` with `A x^m ≤ 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<f64>,
    pub notes: Vec<String>,
}

struct Fired {
    route: Route,
    justification: Vec<String>,
    decomposition: Option<Decomposition>,
}

fn holds(t: &Tensor, class: TensorClass, opts: &ClassifyOptions) -> bool {
    matches!(check_class(t, class, opts), Ok(v) if v.holds())
}

/// Row `i` (1-based) with `|a_{i⋯i}| ≥ r_i` and the Q-DSDD inequality for
/// every pair `(i, j)`.
fn qdsdd_anchor_row(t: &Tensor, opts: &ClassifyOptions) -> Option<usize> {
    let rows = all_row_stats(t);
    rows.iter()
        .find(|s| {
            s.diagonal.abs() >= s.r + opts.margin
                && (1..=t.dim()).filter(|&j| j != s.row).all(|j| {
                    let sides = qdsdd_sides_for(t, s.row, j).expect("valid pair");
                    sides.lhs > sides.rhs + opts.margin
                })
        })
        .map(|s| s.row)
}

fn class_routes(t: &Tensor, opts: &CertifyOptions) -> Vec<Fired> {
    let c = &opts.classify;
    let mut fired = Vec::new();
    let done = |f: &Vec<Fired>| !opts.verbose && !f.is_empty();

    if holds(t, TensorClass::B, c) {
        fired.push(Fired {
            route: Route::EvenSymmetricBTensor,
            justification: vec![
                "order is even".into(),
                "tensor is symmetric".into(),
                "every row sum is positive and exceeds n^(m-1) times each off-diagonal entry of its row".into(),
            ],
            decomposition: None,
        });
    }
    for mode in [DecomposeMode::Double, DecomposeMode::Quasi] {
        if done(&fired) || !holds(t, mode.input_class(), c) {
            continue;
        }
        // the decomposition runs at zero margin; a failure drops this rung
        if let Ok(dec) = decompose(t, &DecomposeOptions::with_mode(mode)) {
            let (route, class, residual) = match mode {
                DecomposeMode::Double => (Route::EvenSymmetricDoubleB, "double B", "DSDD"),
                DecomposeMode::Quasi => (Route::EvenSymmetricQuasiDoubleB, "quasi-double B", "Q-DSDD"),
            };
            fired.push(Fired {
                route,
                justification: vec![
                    "order is even".into(),
                    "tensor is symmetric".into(),
                    format!("tensor is {class}"),
                    format!(
                        "tensor = M + sum of {} nonnegative multiples of partially all-one tensors, M a symmetric {residual} Z-tensor",
                        dec.s()
                    ),
                    format!("{residual} Z-tensor M is positive definite and each partially all-one term is positive semi-definite"),
                ],
                decomposition: Some(dec),
            });
        }
    }
    let positive_diagonal = (1..=t.dim()).all(|i| t.diagonal(i) > 0.0);
    if !done(&fired) && positive_diagonal && t.dim() > 2 && holds(t, TensorClass::Dsdd, c) {
        fired.push(Fired {
            route: Route::EvenSymmetricDsdd,
            justification: vec![
                "order is even".into(),
                "tensor is symmetric".into(),
                "all diagonal entries are positive".into(),
                "tensor is DSDD".into(),
            ],
            decomposition: None,
        });
    }
    if !done(&fired) && positive_diagonal && t.dim() > 2 {
        if let Some(i) = qdsdd_anchor_row(t, c) {
            fired.push(Fired {
                route: Route::EvenSymmetricQdsddAnchorRow,
                justification: vec![
                    "order is even".into(),
                    "tensor is symmetric".into(),
                    "all diagonal entries are positive".into(),
                    format!("row {i} satisfies |a_ii..i| >= r_{i}"),
                    format!("the Q-DSDD inequality holds for every pair ({i}, j)"),
                ],
                decomposition: None,
            });
        }
    }
    fired
}

/// Certifies positive definiteness through class membership, trying the
/// tightest class first. Only class routes issue `PositiveDefinite`; the
/// oracle can only refute.
pub fn pd_certify(t: &Tensor, opts: &CertifyOptions) -> Certificate {
    let mut cert = Certificate {
        verdict: PdVerdict::Inconclusive,
        route: None,
        justification: Vec::new(),
        routes_fired: Vec::new(),
        decomposition: None,
        oracle_confirmation: None,
        witness: None,
        witness_value: None,
        notes: Vec::new(),
    };
    if !t.is_even_order() {
        cert.notes.push(format!(
            "order {} is odd: the form takes both signs, so class membership cannot certify positive definiteness",
            t.order()
        ));
        return cert;
    }
    let symmetric = t.is_symmetric();
    if symmetric {
        let fired = class_routes(t, opts);
        cert.routes_fired = fired.iter().map(|f| f.route).collect();
        if let Some(first) = fired.into_iter().next() {
            cert.verdict = PdVerdict::PositiveDefinite;
            cert.route = Some(first.route);
            cert.justification = first.justification;
            cert.decomposition = first.decomposition;
            if opts.confirm_with_oracle {
                cert.oracle_confirmation = Some(oracle::sphere_minimize(t, &opts.oracle));
            }
            return cert;
        }
        cert.notes.push("no class route applies".into());
    } else {
        cert.notes.push(
            "tensor is not symmetric: class routes need symmetry, the form only sees the symmetric part".into(),
        );
    }

    if opts.oracle_fallback {
        let res = oracle::sphere_minimize(t, &opts.oracle);
        let value = t.form_value(&res.minimizer).expect("length matches");
        if value <= 0.0 {
            cert.verdict = PdVerdict::NotPositiveDefinite;
            cert.route = Some(Route::OracleWitness);
            cert.routes_fired.push(Route::OracleWitness);
            cert.justification = vec![format!("form value {value} <= 0 at the witness vector")];
            cert.witness = Some(res.minimizer.clone());
            cert.witness_value = Some(value);
        } else {
            cert.notes.push(format!(
                "oracle found no violation (least value {value}); this is evidence, not proof"
            ));
        }
        cert.oracle_confirmation = Some(res);
    }
    cert
}

/// Numerical check that an even-order symmetric (quasi-)double B-tensor has
/// only positive H-eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HEigenReport {
    /// The tightest of double B / quasi-double B the tensor satisfies.
    pub class: TensorClass,
    /// What class membership guarantees: every H-eigenvalue is positive.
    pub claim: String,
    /// Least value of `A x^m` over `‖x‖_m = 1`.
    pub lambda_min_estimate: f64,
    pub positive: bool,
    pub order_norm: OracleResult,
    /// Least value over `‖x‖₂ = 1`, for comparison.
    pub two_norm: OracleResult,
}

pub fn h_eigen_positivity_check(
    t: &Tensor,
    opts: &OracleOptions,
) -> Result<HEigenReport, DecomposeError> {
    if !t.is_even_order() {
        return Err(DecomposeError::OddOrder(t.order()));
    }
    require_symmetric(t)?;
    let exact = ClassifyOptions::default();
    let class = if holds(t, TensorClass::DoubleB, &exact) {
        TensorClass::DoubleB
    } else {
        require_class(t, TensorClass::QuasiDoubleB)?;
        TensorClass::QuasiDoubleB
    };
    let order_norm = oracle::minimize(t, Normalization::OrderNorm, opts)?;
    let two_norm = oracle::sphere_minimize(t, opts);
    let lambda = order_norm.min_value;
    Ok(HEigenReport {
        class,
        claim: format!("every H-eigenvalue of an even-order symmetric {class} tensor is positive"),
        lambda_min_estimate: lambda,
        positive: lambda > 0.0,
        order_norm,
        two_norm,
    })
}
