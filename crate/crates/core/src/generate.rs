//! Seeded random instance generators for property suites and examples.

use rand::Rng;

use crate::tensor::{IndexSubset, Tensor};

/// Dense tensor with independent entries uniform in `[low, high]`.
pub fn uniform_tensor(order: usize, dim: usize, low: f64, high: f64, rng: &mut impl Rng) -> Tensor {
    let len = dim.pow(order as u32);
    let entries = (0..len).map(|_| rng.gen_range(low..=high)).collect();
    Tensor::new(order, dim, entries).expect("finite entries of a valid shape")
}

/// Symmetric tensor with one value per permutation orbit. `value(diagonal)`
/// is called once per orbit, in order of the orbit's smallest offset.
pub fn symmetric_from_orbits(order: usize, dim: usize, mut value: impl FnMut(bool) -> f64) -> Tensor {
    let zero = Tensor::zeros(order, dim).expect("valid shape");
    let mut entries = vec![0.0; zero.len()];
    let mut scratch = vec![0; order];
    let canon: Vec<usize> = (0..zero.len())
        .map(|off| zero.canonical_offset(off, &mut scratch))
        .collect();
    for (off, &c) in canon.iter().enumerate() {
        if c == off {
            entries[off] = value(zero.multi_index(off).is_diagonal());
        }
    }
    for (off, &c) in canon.iter().enumerate() {
        entries[off] = entries[c];
    }
    Tensor::new(order, dim, entries).expect("finite entries")
}

/// Symmetric tensor with orbit values uniform in `[low, high]`.
pub fn uniform_symmetric(order: usize, dim: usize, low: f64, high: f64, rng: &mut impl Rng) -> Tensor {
    symmetric_from_orbits(order, dim, |_| rng.gen_range(low..=high))
}

/// Replaces every off-diagonal entry by minus its absolute value, giving a
/// Z-tensor with the same diagonal.
pub fn z_projection(t: &Tensor) -> Tensor {
    let row_len = t.row_len();
    let stride = t.diagonal_stride();
    let entries = t
        .entries()
        .iter()
        .enumerate()
        .map(|(off, &v)| if off % row_len == (off / row_len) * stride { v } else { -v.abs() })
        .collect();
    Tensor::new(t.order(), t.dim(), entries).expect("same shape")
}

/// A symmetric Z-tensor `M` plus a nested chain `Σ h_k ε^{J_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredTensor {
    pub residual: Tensor,
    /// `(h_k, J_k)` with `J_1 ⊋ J_2 ⊋ ⋯`, every `|J_k| ≥ 2`.
    pub layers: Vec<(f64, IndexSubset)>,
    pub tensor: Tensor,
}

/// Random symmetric Z-tensor with positive diagonal near row dominance plus
/// up to `n − 1` nested partially all-one layers.
///
/// Off-diagonal orbits are zero with probability 0.3 and otherwise uniform in
/// `[-1, 0)`. Row `i` gets diagonal `r_i (1 + u_i)` with `u_i ∈ [0.05, 1]`,
/// except one random row that, when all its tail entries `a_{ij⋯j}` are
/// nonzero, falls short of its off-diagonal sum by 0.01 to 1.2 times the
/// smallest `|a_{ij⋯j}|`. Layer heights are uniform in `(0, 0.3 / N]` with
/// `N = n^{m-1}`. The result need not be quasi-double B; callers filter.
pub fn layered_tensor(order: usize, dim: usize, rng: &mut impl Rng) -> LayeredTensor {
    let base = symmetric_from_orbits(order, dim, |diagonal| {
        if diagonal || rng.gen_bool(0.3) {
            0.0
        } else {
            -rng.gen_range(0.0..1.0f64).max(f64::MIN_POSITIVE)
        }
    });
    let weak_row = rng.gen_range(0..dim);
    let mut entries = base.entries().to_vec();
    for i0 in 0..dim {
        let r: f64 = base.row0(i0).iter().map(|v| v.abs()).sum();
        // a deficit below the smallest tail entry |a_{ij..j}| can keep the
        // Q-DSDD pair inequalities; a zero tail would put the row exactly on
        // the class boundary, where rounding decides membership
        let tail = (0..dim)
            .filter(|&j0| j0 != i0)
            .map(|j0| base.tail_entry(i0 + 1, j0 + 1).abs())
            .fold(f64::INFINITY, f64::min);
        let u = if i0 == weak_row && tail > 0.0 {
            -rng.gen_range(0.01..=1.2) * tail / r
        } else {
            rng.gen_range(0.05..=1.0)
        };
        // an isolated row still needs a positive diagonal
        entries[base.diagonal_offset(i0)] = if r > 0.0 {
            r * (1.0 + u)
        } else {
            rng.gen_range(0.1..=1.0)
        };
    }
    let residual = Tensor::new(order, dim, entries).expect("finite entries");

    let n_layers = rng.gen_range(0..dim);
    let mut members: Vec<usize> = (1..=dim).collect();
    let mut layers = Vec::new();
    let scale = 0.3 / base.row_len() as f64;
    for k in 0..n_layers {
        let size = if k == 0 {
            rng.gen_range(2..=dim)
        } else if members.len() > 2 {
            rng.gen_range(2..members.len())
        } else {
            break;
        };
        // keep a random subset of the current members
        while members.len() > size {
            let drop = rng.gen_range(0..members.len());
            members.remove(drop);
        }
        let h = rng.gen_range(0.0..scale).max(f64::MIN_POSITIVE) + scale * 1e-3;
        layers.push((h, IndexSubset::new(members.iter().copied(), dim).expect("members within dim")));
    }
    let tensor = layers.iter().fold(residual.clone(), |acc, (h, j)| {
        let eps = Tensor::partially_all_one(order, dim, j).expect("subset within dim");
        acc.linear_combine(&eps, *h).expect("same shape")
    });
    LayeredTensor {
        residual,
        layers,
        tensor,
    }
}
