//! Numerical evidence for (non-)positive definiteness, independent of the
//! class predicates.
//!
//! The form `A x^m` is minimized over a unit sphere by projected gradient
//! descent from many starts. On `‖x‖₂ = 1` the sign of the minimum decides
//! definiteness; on `‖x‖_m = 1` (even `m`, symmetric `A`) the minimum is the
//! least H-eigenvalue. For `n = 2` a dense angular grid with golden-section
//! refinement makes the search effectively exhaustive.
//!
//! The oracle never proves positive definiteness: a positive minimum only
//! means no violation was found.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{
    all_row_stats, is_quasi_double_b0_tensor, is_quasi_double_b_tensor, ClassifyOptions, RowStats,
};
use crate::generate::symmetric_from_orbits;
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("order {0} is odd; this needs an even order")]
    OddOrder(usize),
    #[error("invalid search parameters: {0}")]
    InvalidSearch(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which unit sphere the minimizer lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `‖x‖₂ = 1`.
    TwoNorm,
    /// `‖x‖_m = 1`, `m` the tensor order.
    OrderNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Random starting points, on top of the `±e_i` and `±(1,…,1)/√n` starts.
    pub starts: usize,
    pub seed: u64,
    /// Angular grid size used when `n = 2`; zero disables the grid.
    pub grid_points: usize,
    pub max_iterations: usize,
    /// Stop once the projected gradient norm falls below this.
    pub gradient_tolerance: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            starts: 256,
            seed: 0,
            grid_points: 100_000,
            max_iterations: 10_000,
            gradient_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Least form value found, `A x^m` at `minimizer`.
    pub min_value: f64,
    pub minimizer: Vec<f64>,
    pub normalization: Normalization,
    /// Set for [`Normalization::OrderNorm`]: the estimate of the least
    /// H-eigenvalue (an upper bound that the search drives down).
    pub lambda_min_estimate: Option<f64>,
    /// Starting points plus grid points evaluated.
    pub samples: usize,
    /// Whether the descent that produced the minimum met the gradient
    /// tolerance.
    pub converged: bool,
}

struct Objective<'a> {
    sym: &'a Tensor,
    normalization: Normalization,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let nrm = norm2(&x);
    x.iter_mut().for_each(|v| *v /= nrm);
    x
}

fn power_sum(x: &[f64], m: usize) -> f64 {
    x.iter().map(|v| v.powi(m as i32)).sum()
}

impl Objective<'_> {
    fn order(&self) -> usize {
        self.sym.order()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let f = self.sym.form_value(x).expect("length checked");
        match self.normalization {
            Normalization::TwoNorm => f,
            Normalization::OrderNorm => f / power_sum(x, self.order()),
        }
    }

    fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let m = self.order() as f64;
        let ax = self.sym.apply(x).expect("length checked");
        let f = dot(x, &ax);
        match self.normalization {
            Normalization::TwoNorm => (f, ax.iter().map(|v| m * v).collect()),
            Normalization::OrderNorm => {
                let s = power_sum(x, self.order());
                let grad = ax
                    .iter()
                    .zip(x)
                    .map(|(a, xi)| m * (a * s - f * xi.powi(self.order() as i32 - 1)) / (s * s))
                    .collect();
                (f / s, grad)
            }
        }
    }
}

struct Descent {
    value: f64,
    x: Vec<f64>,
    converged: bool,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;
/// Iterations every start gets before only the leaders are refined.
const SCREEN_ITERATIONS: usize = 200;
/// Starts refined to convergence after screening.
const LEADERS: usize = 8;

fn project(g: &[f64], x: &[f64]) -> Vec<f64> {
    let gx = dot(g, x);
    g.iter().zip(x).map(|(gi, xi)| gi - gx * xi).collect()
}

/// Projected gradient descent on the unit 2-sphere with backtracking from a
/// unit step.
///
/// While the Armijo decrease is resolvable in floating point the step must
/// achieve it. Below that resolution a step is accepted when the value does
/// not rise beyond rounding and the projected gradient shrinks, so the
/// gradient tolerance stays reachable at nondegenerate minima.
fn descend(obj: &Objective<'_>, x0: Vec<f64>, opts: &OracleOptions, budget: usize) -> Descent {
    let mut x = normalized(x0);
    let (mut f, g) = obj.value_and_gradient(&x);
    let mut pg = project(&g, &x);
    let mut pn = norm2(&pg);
    let mut converged = false;
    for _ in 0..budget {
        if pn < opts.gradient_tolerance {
            converged = true;
            break;
        }
        let resolution = 8.0 * f64::EPSILON * f.abs().max(f64::MIN_POSITIVE);
        let mut step = 1.0;
        let mut next = None;
        while step > MIN_STEP {
            let y = normalized(x.iter().zip(&pg).map(|(xi, p)| xi - step * p).collect());
            let (fy, gy) = obj.value_and_gradient(&y);
            let decrease = ARMIJO * step * pn * pn;
            let accept = if decrease > resolution {
                fy <= f - decrease
            } else {
                fy <= f + resolution && norm2(&project(&gy, &y)) < pn
            };
            if accept {
                next = Some((y, fy, gy));
                break;
            }
            step *= 0.5;
        }
        let Some((y, fy, gy)) = next else {
            break;
        };
        x = y;
        f = fy;
        pg = project(&gy, &x);
        pn = norm2(&pg);
    }
    converged |= pn < opts.gradient_tolerance;
    Descent {
        value: f,
        x,
        converged,
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn better(a: &Descent, b: &Descent) -> bool {
    match a.value.total_cmp(&b.value) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => lexicographic(&a.x, &b.x).is_lt(),
    }
}

/// For even order `x` and `-x` have bitwise equal form values, so the
/// lexicographically smaller one is the representative.
fn canonical_sign(mut d: Descent, order: usize) -> Descent {
    if order.is_multiple_of(2) {
        let flipped: Vec<f64> = d.x.iter().map(|v| -v).collect();
        if lexicographic(&flipped, &d.x).is_lt() {
            d.x = flipped;
        }
    }
    d
}

fn circle_point(theta: f64) -> Vec<f64> {
    vec![theta.cos(), theta.sin()]
}

/// Best grid angle refined by golden-section search over its two
/// neighbouring cells.
fn grid_minimum(obj: &Objective<'_>, points: usize) -> Vec<f64> {
    let step = 2.0 * PI / points as f64;
    let (best_k, _) = (0..points)
        .map(|k| (k, obj.value(&circle_point(k as f64 * step))))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let center = best_k as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let mut fa = obj.value(&circle_point(a));
    let mut fb = obj.value(&circle_point(b));
    for _ in 0..100 {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = obj.value(&circle_point(a));
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = obj.value(&circle_point(b));
        }
    }
    let theta = if fa <= fb { a } else { b };
    let refined = circle_point(theta);
    let at_grid = circle_point(center);
    if obj.value(&refined) <= obj.value(&at_grid) {
        refined
    } else {
        at_grid
    }
}

fn random_start(n: usize, seed: u64, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        if norm2(&x) > 1e-8 {
            return x;
        }
    }
}

fn starting_points(n: usize, opts: &OracleOptions) -> Vec<Vec<f64>> {
    let mut starts: Vec<Vec<f64>> = (0..opts.starts)
        .map(|k| random_start(n, opts.seed, k))
        .collect();
    for i in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = sign;
            starts.push(e);
        }
    }
    starts.push(vec![1.0; n]);
    starts.push(vec![-1.0; n]);
    starts
}

fn minimize_symmetric(
    original: &Tensor,
    sym: &Tensor,
    normalization: Normalization,
    opts: &OracleOptions,
) -> OracleResult {
    let obj = Objective { sym, normalization };
    let n = sym.dim();
    let mut starts = starting_points(n, opts);
    let mut samples = starts.len();
    if n == 2 && opts.grid_points > 0 {
        starts.push(grid_minimum(&obj, opts.grid_points));
        samples += opts.grid_points;
    }
    let screen = SCREEN_ITERATIONS.min(opts.max_iterations);
    let mut screened: Vec<Descent> = starts
        .into_iter()
        .map(|x0| canonical_sign(descend(&obj, x0, opts, screen), sym.order()))
        .collect();
    screened.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then_with(|| lexicographic(&a.x, &b.x))
    });
    let best = screened
        .into_iter()
        .take(LEADERS)
        .map(|d| {
            if d.converged {
                d
            } else {
                canonical_sign(descend(&obj, d.x, opts, opts.max_iterations - screen), sym.order())
            }
        })
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least 2n starting points");

    // `v + 0.0` turns -0.0 into 0.0
    let mut x: Vec<f64> = best.x.iter().map(|v| v + 0.0).collect();
    if normalization == Normalization::OrderNorm {
        let scale = power_sum(&x, sym.order()).powf(1.0 / sym.order() as f64);
        x.iter_mut().for_each(|v| *v /= scale);
    }
    let min_value = original.form_value(&x).expect("length checked");
    OracleResult {
        min_value,
        minimizer: x,
        normalization,
        lambda_min_estimate: (normalization == Normalization::OrderNorm).then_some(min_value),
        samples,
        converged: best.converged,
    }
}

/// Minimizes `A x^m` over `‖x‖₂ = 1`. Non-symmetric tensors are symmetrized
/// first; the form only depends on the symmetric part.
pub fn sphere_minimize(t: &Tensor, opts: &OracleOptions) -> OracleResult {
    let sym = if t.is_symmetric() {
        t.clone()
    } else {
        t.symmetrize()
    };
    minimize_symmetric(t, &sym, Normalization::TwoNorm, opts)
}

/// Minimizes over the sphere of the given normalization. The `m`-norm sphere
/// needs even order.
pub fn minimize(
    t: &Tensor,
    normalization: Normalization,
    opts: &OracleOptions,
) -> Result<OracleResult, OracleError> {
    if normalization == Normalization::OrderNorm && !t.is_even_order() {
        return Err(OracleError::OddOrder(t.order()));
    }
    let sym = if t.is_symmetric() {
        t.clone()
    } else {
        t.symmetrize()
    };
    Ok(minimize_symmetric(t, &sym, normalization, opts))
}

/// Estimate of the least H-eigenvalue: `min A x^m` over `‖x‖_m = 1`.
pub fn lambda_min_estimate(t: &Tensor, opts: &OracleOptions) -> Result<f64, OracleError> {
    Ok(minimize(t, Normalization::OrderNorm, opts)?.min_value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub order: usize,
    pub dim: usize,
    /// Accepted samples to test.
    pub trials: usize,
    pub seed: u64,
    /// A sample is a candidate counterexample when its minimum over the unit
    /// 2-sphere is below `-tolerance`.
    pub tolerance: f64,
    /// Random starts per sample for the oracle.
    pub starts: usize,
    /// Cap on generated samples (accepted or not).
    pub max_attempts: u64,
    pub classify: ClassifyOptions,
}

impl SearchParams {
    pub fn new(order: usize, dim: usize, trials: usize, seed: u64, tolerance: f64) -> Self {
        SearchParams {
            order,
            dim,
            trials,
            seed,
            tolerance,
            starts: 32,
            max_attempts: (trials as u64).saturating_mul(1000),
            classify: ClassifyOptions::default(),
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.order < 2 {
            return Err(OracleError::InvalidSearch(format!(
                "order must be at least 2, got {}",
                self.order
            )));
        }
        if self.order % 2 == 1 {
            return Err(OracleError::OddOrder(self.order));
        }
        if self.dim < 2 {
            return Err(OracleError::InvalidSearch(format!(
                "dimension must be at least 2, got {}",
                self.dim
            )));
        }
        if self.trials == 0 {
            return Err(OracleError::InvalidSearch("trials must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(OracleError::InvalidSearch(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Tensor::zeros(self.order, self.dim)?;
        Ok(())
    }
}

/// Description of the boundary sampler, stored with every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub off_diagonal_low: f64,
    pub off_diagonal_high: f64,
    /// Rows other than the pivot get `b_{i⋯i} − β_i = Δ_i (1 + u)`, with
    /// `u = 0` half the time and `u ~ U[0, dominance_slack]` otherwise.
    pub dominance_slack: f64,
    /// The pivot row sits on its tightest lower bound, scaled by
    /// `1 + U[0, pivot_jitter]` half the time.
    pub pivot_jitter: f64,
    pub filter: String,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            off_diagonal_low: -1.0,
            off_diagonal_high: 1.0,
            dominance_slack: 0.25,
            pivot_jitter: 1e-3,
            filter: "symmetric, quasi-double B0, not quasi-double B".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    /// Index among accepted samples.
    pub trial: usize,
    /// Generator stream index; `sample_boundary_tensor(order, dim, seed,
    /// attempt)` rebuilds the tensor.
    pub attempt: u64,
    pub tensor: Tensor,
    pub oracle: OracleResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub order: usize,
    pub dim: usize,
    /// Accepted samples that were minimized.
    pub trials: usize,
    /// Samples generated, accepted or not.
    pub attempts: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub starts: usize,
    pub generator: GeneratorParams,
    /// Least minimum over all accepted samples.
    pub least_min_value: f64,
    pub candidates: Vec<Candidate>,
}

/// Random symmetric tensor near the quasi-double B₀ boundary, deterministic
/// in `(seed, attempt)`.
///
/// Off-diagonal orbit values are uniform in `[-1, 1]`. Writing
/// `x_i = b_{i⋯i} − β_i`, every row but a random pivot `k` gets
/// `x_i = Δ_i (1 + u_i)`, which meets every pair inequality not involving
/// `k` (with equality when `u_i = 0`). The pivot takes the smallest `x_k`
/// compatible with all pairs through `k`.
pub fn sample_boundary_tensor(
    order: usize,
    dim: usize,
    seed: u64,
    attempt: u64,
) -> Result<Tensor, TensorError> {
    let gen = GeneratorParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);

    Tensor::zeros(order, dim)?;
    let off_diag = symmetric_from_orbits(order, dim, |diagonal| {
        if diagonal {
            0.0
        } else {
            rng.gen_range(gen.off_diagonal_low..=gen.off_diagonal_high)
        }
    });
    let rows = all_row_stats(&off_diag);

    // c(j, i) = β_j − b_{ji⋯i},  Δ_j^i = Δ_j − c(j, i); rows are 0-based here
    let c = |j: usize, i: usize| rows[j].beta - off_diag.tail_entry(j + 1, i + 1);
    let delta_ji = |j: usize, i: usize| rows[j].delta - c(j, i);

    let pivot = rng.gen_range(0..dim);
    let mut x: Vec<f64> = rows
        .iter()
        .map(|s: &RowStats| {
            let u = if rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(0.0..=gen.dominance_slack)
            };
            s.delta * (1.0 + u)
        })
        .collect();

    let mut lower: f64 = 0.0;
    for j in (0..dim).filter(|&j| j != pivot) {
        let denom = x[j] - delta_ji(j, pivot);
        if denom > 0.0 {
            lower = lower.max(c(j, pivot) * rows[pivot].delta / denom);
        }
    }
    for i in (0..dim).filter(|&i| i != pivot) {
        if x[i] > 0.0 {
            lower = lower.max(delta_ji(pivot, i) + c(pivot, i) * rows[i].delta / x[i]);
        }
    }
    x[pivot] = if rng.gen_bool(0.5) {
        lower
    } else {
        lower * (1.0 + rng.gen_range(0.0..=gen.pivot_jitter))
    };

    let mut entries = off_diag.entries().to_vec();
    for (i0, s) in rows.iter().enumerate() {
        entries[off_diag.diagonal_offset(i0)] = s.beta + x[i0];
    }
    Tensor::new(order, dim, entries)
}

/// Oracle seed used for the sample generated at `attempt`.
pub fn oracle_seed_for(seed: u64, attempt: u64) -> u64 {
    seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Whether a generated sample enters the search: quasi-double B₀ but not
/// quasi-double B.
pub fn accepts_sample(t: &Tensor, opts: &ClassifyOptions) -> bool {
    t.is_symmetric()
        && matches!(is_quasi_double_b0_tensor(t, opts), Ok(v) if v.holds())
        && matches!(is_quasi_double_b_tensor(t, opts), Ok(v) if !v.holds())
}

/// Randomized search for even-order symmetric quasi-double B₀ tensors that
/// take negative values on the unit sphere.
pub fn conjecture_search(params: &SearchParams) -> Result<SearchReport, OracleError> {
    params.validate()?;
    let mut candidates = Vec::new();
    let mut trials = 0;
    let mut attempts = 0;
    let mut least = f64::INFINITY;
    while trials < params.trials && attempts < params.max_attempts {
        let attempt = attempts;
        attempts += 1;
        let t = sample_boundary_tensor(params.order, params.dim, params.seed, attempt)?;
        if !accepts_sample(&t, &params.classify) {
            continue;
        }
        let opts = OracleOptions {
            starts: params.starts,
            seed: oracle_seed_for(params.seed, attempt),
            ..OracleOptions::default()
        };
        let result = sphere_minimize(&t, &opts);
        least = least.min(result.min_value);
        if result.min_value < -params.tolerance {
            candidates.push(Candidate {
                trial: trials,
                attempt,
                tensor: t,
                oracle: result,
            });
        }
        trials += 1;
    }
    Ok(SearchReport {
        order: params.order,
        dim: params.dim,
        trials,
        attempts,
        seed: params.seed,
        tolerance: params.tolerance,
        starts: params.starts,
        generator: GeneratorParams::default(),
        least_min_value: least,
        candidates,
    })
}
