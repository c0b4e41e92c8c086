//! Row statistics and membership predicates for the B-tensor family, the
//! (quasi-)doubly strictly diagonally dominant tensors and Z-tensors.
//!
//! All inequalities are evaluated with exact floating-point comparison unless
//! a positive [`ClassifyOptions::margin`] is requested, in which case a strict
//! inequality `lhs > rhs` becomes `lhs > rhs + τ` and a weak one `lhs ≥ rhs`
//! becomes `lhs ≥ rhs + τ`. A positive margin can break the inclusions
//! between classes; the report records any such break.
//!
//! Every failed predicate carries a [`Witness`]: the first failing row, pair
//! or entry in lexicographic order together with both sides of the violated
//! inequality.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{MultiIndex, Tensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("pairwise conditions need dimension at least 2, got {dim}")]
    NeedsPairs { dim: usize },
    #[error("row {row} not in 1..={dim}")]
    RowOutOfRange { row: usize, dim: usize },
    #[error("pair statistics need distinct rows, got i = j = {0}")]
    SameIndex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Required slack τ ≥ 0 on every inequality. Zero reproduces the exact
    /// class boundaries.
    pub margin: f64,
    /// Adds `b_{i⋯i} ≥ β_i` to the quasi-double B₀ predicate.
    pub b0_requires_diagonal: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            margin: 0.0,
            b0_requires_diagonal: false,
        }
    }
}

impl ClassifyOptions {
    pub fn with_margin(margin: f64) -> Self {
        ClassifyOptions {
            margin,
            ..Default::default()
        }
    }

    fn strict(&self, lhs: f64, rhs: f64) -> bool {
        lhs > rhs + self.margin
    }

    fn weak(&self, lhs: f64, rhs: f64) -> bool {
        lhs >= rhs + self.margin
    }
}

/// Per-row statistics of row `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowStats {
    /// 1-based row index.
    pub row: usize,
    pub diagonal: f64,
    /// `β_i = max(0, largest off-diagonal entry of row i)`.
    pub beta: f64,
    /// `Δ_i = Σ_off (β_i − b_{i i_2⋯i_m})`.
    pub delta: f64,
    /// `r_i = Σ_off |b_{i i_2⋯i_m}|`.
    pub r: f64,
    /// Sum over the whole row, diagonal included.
    pub row_sum: f64,
}

/// Statistics of the ordered pair `(i, j)`, `i ≠ j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairStats {
    pub i: usize,
    pub j: usize,
    /// `Δ_j^i = Δ_j − (β_j − b_{ji⋯i})`.
    pub delta_j_i: f64,
    /// `r_j^i = r_j − |b_{ji⋯i}|`.
    pub r_j_i: f64,
    /// `b_{ji⋯i}`.
    pub b_ji_tail: f64,
}

fn row_stats0(t: &Tensor, i0: usize) -> RowStats {
    let row = t.row0(i0);
    let dpos = i0 * t.diagonal_stride();
    let off = || {
        row.iter()
            .enumerate()
            .filter(move |&(p, _)| p != dpos)
            .map(|(_, &v)| v)
    };
    let beta = off().fold(0.0, f64::max);
    RowStats {
        row: i0 + 1,
        diagonal: row[dpos],
        beta,
        delta: off().map(|v| beta - v).sum(),
        r: off().map(f64::abs).sum(),
        row_sum: row.iter().sum(),
    }
}

fn check_row(t: &Tensor, i: usize) -> Result<(), ClassifyError> {
    if i == 0 || i > t.dim() {
        return Err(ClassifyError::RowOutOfRange { row: i, dim: t.dim() });
    }
    Ok(())
}

/// Statistics of row `i` (1-based).
pub fn row_stats(t: &Tensor, i: usize) -> Result<RowStats, ClassifyError> {
    check_row(t, i)?;
    Ok(row_stats0(t, i - 1))
}

pub fn all_row_stats(t: &Tensor) -> Vec<RowStats> {
    (0..t.dim()).map(|i0| row_stats0(t, i0)).collect()
}

fn pair_from_rows(t: &Tensor, rows: &[RowStats], i: usize, j: usize) -> PairStats {
    let rj = &rows[j - 1];
    let tail = t.tail_entry(j, i);
    PairStats {
        i,
        j,
        delta_j_i: rj.delta - (rj.beta - tail),
        r_j_i: rj.r - tail.abs(),
        b_ji_tail: tail,
    }
}

/// Statistics of the ordered pair `(i, j)` (1-based).
pub fn pair_stats(t: &Tensor, i: usize, j: usize) -> Result<PairStats, ClassifyError> {
    check_row(t, i)?;
    check_row(t, j)?;
    if i == j {
        return Err(ClassifyError::SameIndex(i));
    }
    let rows = all_row_stats(t);
    Ok(pair_from_rows(t, &rows, i, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TensorClass {
    B,
    DoubleB,
    QuasiDoubleB,
    QuasiDoubleB0,
    Z,
    #[serde(rename = "DSDD")]
    Dsdd,
    #[serde(rename = "QDSDD")]
    Qdsdd,
    ProductIneq,
}

impl TensorClass {
    pub const ALL: [TensorClass; 8] = [
        TensorClass::B,
        TensorClass::DoubleB,
        TensorClass::QuasiDoubleB,
        TensorClass::QuasiDoubleB0,
        TensorClass::Z,
        TensorClass::Dsdd,
        TensorClass::Qdsdd,
        TensorClass::ProductIneq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TensorClass::B => "B",
            TensorClass::DoubleB => "DoubleB",
            TensorClass::QuasiDoubleB => "QuasiDoubleB",
            TensorClass::QuasiDoubleB0 => "QuasiDoubleB0",
            TensorClass::Z => "Z",
            TensorClass::Dsdd => "DSDD",
            TensorClass::Qdsdd => "QDSDD",
            TensorClass::ProductIneq => "ProductIneq",
        }
    }
}

impl fmt::Display for TensorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which inequality a witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `Σ_row b > 0`.
    PositiveRowSum,
    /// `(Σ_row b) / n^{m-1} > b_{i j_2⋯j_m}` for an off-diagonal entry.
    RowMeanExceedsEntry,
    /// `Σ_row b > n^{m-1} β_i`.
    RowSumExceedsBeta,
    /// `b_{i⋯i} − β_i > Δ_i`.
    DiagonalExceedsDelta,
    /// `b_{i⋯i} > β_i`.
    DiagonalAboveBeta,
    /// `b_{i⋯i} ≥ β_i` (optional B₀ variant).
    DiagonalAtLeastBeta,
    /// `b_{i⋯i} − β_i ≥ Δ_i`.
    BetaRowDominance,
    /// `(b_{i⋯i} − β_i)(b_{j⋯j} − β_j) > Δ_i Δ_j`.
    BetaProduct,
    /// `(b_{i⋯i} − β_i)(b_{j⋯j} − β_j − Δ_j^i) > (β_j − b_{ji⋯i}) Δ_i`.
    QuasiBetaProduct,
    /// Same as [`Condition::QuasiBetaProduct`] with `≥`.
    QuasiBetaProductWeak,
    /// Off-diagonal entry `≤ 0`.
    NonPositiveOffDiagonal,
    /// `|a_{i⋯i}| ≥ r_i`.
    AbsRowDominance,
    /// `|a_{i⋯i}||a_{j⋯j}| > r_i r_j`.
    AbsProduct,
    /// `|a_{i⋯i}|(|a_{j⋯j}| − r_j^i) > r_i |a_{ji⋯i}|`.
    QuasiAbsProduct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Location {
    Row { i: usize },
    Pair { i: usize, j: usize },
    Entry { index: MultiIndex },
}

/// The violated inequality `lhs (>|≥) rhs` and where it fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: Condition,
    pub location: Location,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = match &self.location {
            Location::Row { i } => format!("row {i}"),
            Location::Pair { i, j } => format!("pair ({i},{j})"),
            Location::Entry { index } => format!("entry {index}"),
        };
        write!(
            f,
            "{:?} fails at {at}: lhs {} vs rhs {}",
            self.condition, self.lhs, self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails { witness: Witness },
    Inapplicable { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Verdict::Inapplicable { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    fn from_first_failure(failure: Option<Witness>) -> Self {
        match failure {
            None => Verdict::Holds,
            Some(witness) => Verdict::Fails { witness },
        }
    }
}

fn fail(condition: Condition, location: Location, lhs: f64, rhs: f64) -> Option<Witness> {
    Some(Witness {
        condition,
        location,
        lhs,
        rhs,
    })
}

fn row_loc(i: usize) -> Location {
    Location::Row { i }
}

fn pair_loc(i: usize, j: usize) -> Location {
    Location::Pair { i, j }
}

fn need_pairs(t: &Tensor) -> Result<(), ClassifyError> {
    if t.dim() < 2 {
        return Err(ClassifyError::NeedsPairs { dim: t.dim() });
    }
    Ok(())
}

/// Unordered pairs `i < j`, lexicographic, 1-based.
fn unordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
}

/// Ordered pairs `i ≠ j`, lexicographic, 1-based.
fn ordered_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// B-tensor by its defining inequalities: every row sum is positive and the
/// row mean exceeds every off-diagonal entry of the row.
pub fn is_b_tensor(t: &Tensor, opts: &ClassifyOptions) -> Verdict {
    let count = t.row_len() as f64;
    let stride = t.diagonal_stride();
    let failure = (0..t.dim()).find_map(|i0| {
        let row = t.row0(i0);
        let sum: f64 = row.iter().sum();
        if !opts.strict(sum, 0.0) {
            return fail(Condition::PositiveRowSum, row_loc(i0 + 1), sum, 0.0);
        }
        let mean = sum / count;
        row.iter()
            .enumerate()
            .filter(|&(p, _)| p != i0 * stride)
            .find(|&(_, &v)| !opts.strict(mean, v))
            .and_then(|(p, &v)| {
                fail(
                    Condition::RowMeanExceedsEntry,
                    Location::Entry {
                        index: t.multi_index(i0 * row.len() + p),
                    },
                    mean,
                    v,
                )
            })
    });
    Verdict::from_first_failure(failure)
}

/// B-tensor via `Σ_row b > n^{m-1} β_i` for every row.
pub fn is_b_tensor_row_sum_form(t: &Tensor, opts: &ClassifyOptions) -> Verdict {
    let count = t.row_len() as f64;
    let failure = all_row_stats(t).iter().find_map(|s| {
        let rhs = count * s.beta;
        (!opts.strict(s.row_sum, rhs))
            .then(|| fail(Condition::RowSumExceedsBeta, row_loc(s.row), s.row_sum, rhs))
            .flatten()
    });
    Verdict::from_first_failure(failure)
}

/// B-tensor via `b_{i⋯i} − β_i > Δ_i` for every row.
pub fn is_b_tensor_diagonal_form(t: &Tensor, opts: &ClassifyOptions) -> Verdict {
    let failure = all_row_stats(t).iter().find_map(|s| {
        let lhs = s.diagonal - s.beta;
        (!opts.strict(lhs, s.delta))
            .then(|| fail(Condition::DiagonalExceedsDelta, row_loc(s.row), lhs, s.delta))
            .flatten()
    });
    Verdict::from_first_failure(failure)
}

/// The three equivalent B-tensor tests, evaluated independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BTensorForms {
    pub definition: bool,
    pub row_sum_form: bool,
    pub diagonal_form: bool,
}

impl BTensorForms {
    pub fn agree(&self) -> bool {
        self.definition == self.row_sum_form && self.row_sum_form == self.diagonal_form
    }
}

pub fn b_tensor_forms(t: &Tensor) -> BTensorForms {
    let exact = ClassifyOptions::default();
    BTensorForms {
        definition: is_b_tensor(t, &exact).holds(),
        row_sum_form: is_b_tensor_row_sum_form(t, &exact).holds(),
        diagonal_form: is_b_tensor_diagonal_form(t, &exact).holds(),
    }
}

fn diagonal_above_beta(rows: &[RowStats], opts: &ClassifyOptions) -> Option<Witness> {
    rows.iter().find_map(|s| {
        (!opts.strict(s.diagonal, s.beta))
            .then(|| fail(Condition::DiagonalAboveBeta, row_loc(s.row), s.diagonal, s.beta))
            .flatten()
    })
}

fn beta_products(rows: &[RowStats], opts: &ClassifyOptions) -> Option<Witness> {
    unordered_pairs(rows.len()).find_map(|(i, j)| {
        let (ri, rj) = (&rows[i - 1], &rows[j - 1]);
        let lhs = (ri.diagonal - ri.beta) * (rj.diagonal - rj.beta);
        let rhs = ri.delta * rj.delta;
        (!opts.strict(lhs, rhs))
            .then(|| fail(Condition::BetaProduct, pair_loc(i, j), lhs, rhs))
            .flatten()
    })
}

/// `(a_{i⋯i} − β_i)(a_{j⋯j} − β_j) > Δ_i Δ_j` for every pair `i < j`.
pub fn product_inequality(t: &Tensor, opts: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    Ok(Verdict::from_first_failure(beta_products(
        &all_row_stats(t),
        opts,
    )))
}

/// Double B-tensor: `b_{i⋯i} > β_i` and `b_{i⋯i} − β_i ≥ Δ_i` for every row,
/// plus the pairwise product inequality.
pub fn is_double_b_tensor(t: &Tensor, opts: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    let rows = all_row_stats(t);
    let failure = diagonal_above_beta(&rows, opts)
        .or_else(|| {
            rows.iter().find_map(|s| {
                let lhs = s.diagonal - s.beta;
                (!opts.weak(lhs, s.delta))
                    .then(|| fail(Condition::BetaRowDominance, row_loc(s.row), lhs, s.delta))
                    .flatten()
            })
        })
        .or_else(|| beta_products(&rows, opts));
    Ok(Verdict::from_first_failure(failure))
}

/// Both sides of the quasi-double B inequality for the ordered pair `(i, j)`:
/// `(b_{i⋯i} − β_i)(b_{j⋯j} − β_j − Δ_j^i)` and `(β_j − b_{ji⋯i}) Δ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

fn quasi_sides_from(t: &Tensor, rows: &[RowStats], i: usize, j: usize) -> Sides {
    let (ri, rj) = (&rows[i - 1], &rows[j - 1]);
    let p = pair_from_rows(t, rows, i, j);
    Sides {
        lhs: (ri.diagonal - ri.beta) * (rj.diagonal - rj.beta - p.delta_j_i),
        rhs: (rj.beta - p.b_ji_tail) * ri.delta,
    }
}

pub fn quasi_double_sides(t: &Tensor, i: usize, j: usize) -> Result<Sides, ClassifyError> {
    check_row(t, i)?;
    check_row(t, j)?;
    if i == j {
        return Err(ClassifyError::SameIndex(i));
    }
    Ok(quasi_sides_from(t, &all_row_stats(t), i, j))
}

/// Quasi-double B-tensor: `b_{i⋯i} > β_i` for every row and the quasi
/// inequality for every ordered pair (it is not symmetric in `i, j`).
pub fn is_quasi_double_b_tensor(
    t: &Tensor,
    opts: &ClassifyOptions,
) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    let rows = all_row_stats(t);
    let failure = diagonal_above_beta(&rows, opts).or_else(|| {
        ordered_pairs(t.dim()).find_map(|(i, j)| {
            let s = quasi_sides_from(t, &rows, i, j);
            (!opts.strict(s.lhs, s.rhs))
                .then(|| fail(Condition::QuasiBetaProduct, pair_loc(i, j), s.lhs, s.rhs))
                .flatten()
        })
    });
    Ok(Verdict::from_first_failure(failure))
}

/// Quasi-double B₀-tensor: the quasi inequality with `≥` for every ordered
/// pair. No diagonal condition unless
/// [`ClassifyOptions::b0_requires_diagonal`] is set.
pub fn is_quasi_double_b0_tensor(
    t: &Tensor,
    opts: &ClassifyOptions,
) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    let rows = all_row_stats(t);
    let diagonal = || {
        if !opts.b0_requires_diagonal {
            return None;
        }
        rows.iter().find_map(|s| {
            (!opts.weak(s.diagonal, s.beta))
                .then(|| fail(Condition::DiagonalAtLeastBeta, row_loc(s.row), s.diagonal, s.beta))
                .flatten()
        })
    };
    let failure = diagonal().or_else(|| {
        ordered_pairs(t.dim()).find_map(|(i, j)| {
            let s = quasi_sides_from(t, &rows, i, j);
            (!opts.weak(s.lhs, s.rhs))
                .then(|| fail(Condition::QuasiBetaProductWeak, pair_loc(i, j), s.lhs, s.rhs))
                .flatten()
        })
    });
    Ok(Verdict::from_first_failure(failure))
}

/// Every off-diagonal entry is `≤ 0`. Structural, so the margin is ignored.
pub fn is_z_tensor(t: &Tensor) -> Verdict {
    let stride = t.diagonal_stride();
    let row_len = t.row_len();
    let failure = t
        .entries()
        .iter()
        .enumerate()
        .find(|&(off, &v)| v > 0.0 && off % row_len != (off / row_len) * stride)
        .and_then(|(off, &v)| {
            fail(
                Condition::NonPositiveOffDiagonal,
                Location::Entry {
                    index: t.multi_index(off),
                },
                v,
                0.0,
            )
        });
    Verdict::from_first_failure(failure)
}

/// DSDD: `|a_{i⋯i}||a_{j⋯j}| > r_i r_j` for every pair; for order above two
/// also `|a_{i⋯i}| ≥ r_i` for every row.
pub fn is_dsdd(t: &Tensor, opts: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    let rows = all_row_stats(t);
    let row_condition = || {
        if t.order() == 2 {
            return None;
        }
        rows.iter().find_map(|s| {
            (!opts.weak(s.diagonal.abs(), s.r))
                .then(|| fail(Condition::AbsRowDominance, row_loc(s.row), s.diagonal.abs(), s.r))
                .flatten()
        })
    };
    let failure = row_condition().or_else(|| {
        unordered_pairs(t.dim()).find_map(|(i, j)| {
            let (ri, rj) = (&rows[i - 1], &rows[j - 1]);
            let lhs = ri.diagonal.abs() * rj.diagonal.abs();
            let rhs = ri.r * rj.r;
            (!opts.strict(lhs, rhs))
                .then(|| fail(Condition::AbsProduct, pair_loc(i, j), lhs, rhs))
                .flatten()
        })
    });
    Ok(Verdict::from_first_failure(failure))
}

fn qdsdd_sides(t: &Tensor, rows: &[RowStats], i: usize, j: usize) -> Sides {
    let (ri, rj) = (&rows[i - 1], &rows[j - 1]);
    let p = pair_from_rows(t, rows, i, j);
    Sides {
        lhs: ri.diagonal.abs() * (rj.diagonal.abs() - p.r_j_i),
        rhs: ri.r * p.b_ji_tail.abs(),
    }
}

/// Both sides of the Q-DSDD inequality for the ordered pair `(i, j)`.
pub fn qdsdd_sides_for(t: &Tensor, i: usize, j: usize) -> Result<Sides, ClassifyError> {
    check_row(t, i)?;
    check_row(t, j)?;
    if i == j {
        return Err(ClassifyError::SameIndex(i));
    }
    Ok(qdsdd_sides(t, &all_row_stats(t), i, j))
}

/// Q-DSDD: `|a_{i⋯i}|(|a_{j⋯j}| − r_j^i) > r_i |a_{ji⋯i}|` for every ordered
/// pair.
pub fn is_qdsdd(t: &Tensor, opts: &ClassifyOptions) -> Result<Verdict, ClassifyError> {
    need_pairs(t)?;
    let rows = all_row_stats(t);
    let failure = ordered_pairs(t.dim()).find_map(|(i, j)| {
        let s = qdsdd_sides(t, &rows, i, j);
        (!opts.strict(s.lhs, s.rhs))
            .then(|| fail(Condition::QuasiAbsProduct, pair_loc(i, j), s.lhs, s.rhs))
            .flatten()
    });
    Ok(Verdict::from_first_failure(failure))
}

/// Runs one predicate by class.
pub fn check_class(
    t: &Tensor,
    class: TensorClass,
    opts: &ClassifyOptions,
) -> Result<Verdict, ClassifyError> {
    match class {
        TensorClass::B => Ok(is_b_tensor(t, opts)),
        TensorClass::DoubleB => is_double_b_tensor(t, opts),
        TensorClass::QuasiDoubleB => is_quasi_double_b_tensor(t, opts),
        TensorClass::QuasiDoubleB0 => is_quasi_double_b0_tensor(t, opts),
        TensorClass::Z => Ok(is_z_tensor(t)),
        TensorClass::Dsdd => is_dsdd(t, opts),
        TensorClass::Qdsdd => is_qdsdd(t, opts),
        TensorClass::ProductIneq => product_inequality(t, opts),
    }
}

/// Implications between classes that every report must satisfy.
pub const IMPLICATIONS: [(TensorClass, TensorClass); 4] = [
    (TensorClass::B, TensorClass::DoubleB),
    (TensorClass::DoubleB, TensorClass::QuasiDoubleB),
    (TensorClass::QuasiDoubleB, TensorClass::QuasiDoubleB0),
    (TensorClass::DoubleB, TensorClass::ProductIneq),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub order: usize,
    pub dim: usize,
    pub symmetric: bool,
    pub even_order: bool,
    pub margin: f64,
    pub rows: Vec<RowStats>,
    pub verdicts: BTreeMap<TensorClass, Verdict>,
    /// Broken implications such as "B => DoubleB". Empty at zero margin.
    #[serde(default)]
    pub implication_violations: Vec<String>,
}

impl ClassReport {
    pub fn verdict(&self, class: TensorClass) -> &Verdict {
        &self.verdicts[&class]
    }

    pub fn holds(&self, class: TensorClass) -> bool {
        self.verdict(class).holds()
    }
}

/// Evaluates every predicate. Predicates that need pairs are marked
/// inapplicable for `n = 1` instead of failing the report.
pub fn classify_all(t: &Tensor, opts: &ClassifyOptions) -> ClassReport {
    let verdicts: BTreeMap<TensorClass, Verdict> = TensorClass::ALL
        .iter()
        .map(|&c| {
            let v = check_class(t, c, opts).unwrap_or_else(|e| Verdict::Inapplicable {
                reason: e.to_string(),
            });
            (c, v)
        })
        .collect();
    let implication_violations: Vec<String> = IMPLICATIONS
        .iter()
        .filter(|(from, to)| verdicts[from].holds() && verdicts[to].is_applicable() && !verdicts[to].holds())
        .map(|(from, to)| format!("{from} => {to}"))
        .collect();
    debug_assert!(
        opts.margin > 0.0 || implication_violations.is_empty(),
        "class inclusions violated: {implication_violations:?}"
    );
    ClassReport {
        order: t.order(),
        dim: t.dim(),
        symmetric: t.is_symmetric(),
        even_order: t.is_even_order(),
        margin: opts.margin,
        rows: all_row_stats(t),
        verdicts,
        implication_violations,
    }
}
