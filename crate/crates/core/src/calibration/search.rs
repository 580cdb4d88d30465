//! Grid search and coordinate-descent refinement for least-squares objectives.
//!
//! For a fixed lag and break year every model is linear in its coefficients,
//! both on annual rates and on cumulative curves, so the objective is the
//! quadratic `|y - X theta|^2 / n`. The Gram matrix lets each grid point be
//! scored in `O(p^2)` regardless of sample length.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub(crate) struct Quadratic {
    p: usize,
    /// Row-major `X^T X`.
    gram: Vec<f64>,
    /// `X^T y`.
    cross: Vec<f64>,
    /// `y^T y`.
    total: f64,
    n: f64,
}

impl Quadratic {
    pub fn from_columns(columns: &[Vec<f64>], y: &[f64]) -> Self {
        let p = columns.len();
        let mut gram = vec![0.0; p * p];
        for i in 0..p {
            for j in i..p {
                let v: f64 = columns[i].iter().zip(&columns[j]).map(|(a, b)| a * b).sum();
                gram[i * p + j] = v;
                gram[j * p + i] = v;
            }
        }
        let cross = columns
            .iter()
            .map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum())
            .collect();
        Self {
            p,
            gram,
            cross,
            total: y.iter().map(|v| v * v).sum(),
            n: y.len() as f64,
        }
    }

    fn h(&self, i: usize, j: usize) -> f64 {
        self.gram[i * self.p + j]
    }

    /// Mean squared residual at `theta`.
    pub fn value(&self, theta: &[f64]) -> f64 {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..self.p {
            lin += theta[i] * self.cross[i];
            for j in 0..self.p {
                quad += theta[i] * self.h(i, j) * theta[j];
            }
        }
        (self.total - 2.0 * lin + quad) / self.n
    }

    /// Linear coefficient of coordinate `i` with every coordinate in `block`
    /// treated as free and the rest held at `theta`.
    fn partial_linear(&self, i: usize, block: &[usize], theta: &[f64]) -> f64 {
        let mut l = self.cross[i];
        for (k, t) in theta.iter().enumerate().take(self.p) {
            if !block.contains(&k) {
                l -= self.h(i, k) * t;
            }
        }
        l
    }
}

/// Grid values reordered so that iteration visits smaller magnitudes first;
/// with strict improvement this breaks ties toward smaller `|value|`.
pub(crate) fn tie_order(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    values
}

/// Exhaustive search over the grids of one block (one or two coordinates)
/// with all other coordinates held. Returns true if the block moved.
fn search_block(q: &Quadratic, grids: &[Vec<f64>], block: &[usize], theta: &mut [f64]) -> bool {
    match *block {
        [i] => {
            let l = q.partial_linear(i, block, theta);
            let hii = q.h(i, i);
            let score = |u: f64| hii * u * u - 2.0 * l * u;
            let mut best = score(theta[i]);
            let mut moved = false;
            for &u in &grids[i] {
                let s = score(u);
                if s < best {
                    best = s;
                    theta[i] = u;
                    moved = true;
                }
            }
            moved
        }
        [i, j] => {
            let li = q.partial_linear(i, block, theta);
            let lj = q.partial_linear(j, block, theta);
            let (hii, hij, hjj) = (q.h(i, i), q.h(i, j), q.h(j, j));
            let score = |u: f64, v: f64| {
                hii * u * u + 2.0 * hij * u * v + hjj * v * v - 2.0 * li * u - 2.0 * lj * v
            };
            let mut best = score(theta[i], theta[j]);
            let mut arg = None;
            for &u in &grids[i] {
                let a = hii * u * u - 2.0 * li * u;
                let slope = 2.0 * hij * u - 2.0 * lj;
                for &v in &grids[j] {
                    let s = a + v * (hjj * v + slope);
                    if s < best {
                        best = s;
                        arg = Some((u, v));
                    }
                }
            }
            if let Some((u, v)) = arg {
                theta[i] = u;
                theta[j] = v;
                true
            } else {
                false
            }
        }
        _ => unreachable!("blocks hold one or two coordinates"),
    }
}

/// Block-cyclic grid search. `grids[i]` is empty for pinned coordinates,
/// which keep their value in `theta`. A single block is a plain exhaustive
/// grid search; several blocks are cycled until none moves.
pub(crate) fn grid_search(
    q: &Quadratic,
    grids: &[Vec<f64>],
    blocks: &[Vec<usize>],
    theta: &mut [f64],
) {
    for (i, g) in grids.iter().enumerate() {
        if let Some(&first) = g.first() {
            theta[i] = first;
        }
    }
    const MAX_CYCLES: usize = 200;
    for _ in 0..MAX_CYCLES {
        let mut moved = false;
        for block in blocks {
            moved |= search_block(q, grids, block, theta);
        }
        if !moved || blocks.len() == 1 {
            break;
        }
    }
}

/// Coordinate descent with exact minimization along each free axis. Returns
/// the objective after every pass.
pub(crate) fn refine(
    q: &Quadratic,
    free: &[usize],
    theta: &mut [f64],
    max_passes: usize,
) -> Vec<f64> {
    let mut trace = Vec::new();
    for _ in 0..max_passes {
        let mut largest = 0.0f64;
        for &i in free {
            let hii = q.h(i, i);
            if hii <= 0.0 {
                continue;
            }
            let mut grad = q.cross[i];
            for (k, t) in theta.iter().enumerate().take(q.p) {
                grad -= q.h(i, k) * t;
            }
            let step = grad / hii;
            theta[i] += step;
            largest = largest.max(step.abs() / theta[i].abs().max(1.0));
        }
        trace.push(q.value(theta));
        if largest <= 1e-15 {
            break;
        }
    }
    trace
}

/// Solves the normal equations over the free coordinates and keeps the
/// result only if it does not raise the objective. Coordinate descent crawls
/// along the nearly collinear columns of cumulative designs; this closes the
/// remaining gap exactly. Returns true if the solution was accepted.
pub(crate) fn polish(q: &Quadratic, free: &[usize], theta: &mut [f64]) -> bool {
    // Columns that are identically zero cannot move the objective.
    let free: Vec<usize> = free.iter().copied().filter(|&i| q.h(i, i) > 0.0).collect();
    let m = free.len();
    if m == 0 {
        return false;
    }
    let a = DMatrix::from_fn(m, m, |r, c| q.h(free[r], free[c]));
    let rhs = DVector::from_fn(m, |r, _| {
        let i = free[r];
        let mut l = q.cross[i];
        for (k, t) in theta.iter().enumerate().take(q.p) {
            if !free.contains(&k) {
                l -= q.h(i, k) * t;
            }
        }
        l
    });
    let Some(chol) = a.cholesky() else {
        return false;
    };
    let x = chol.solve(&rhs);
    if x.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let mut candidate = theta.to_vec();
    for (r, &i) in free.iter().enumerate() {
        candidate[i] = x[r];
    }
    let before = q.value(theta);
    let after = q.value(&candidate);
    // The Gram form loses about eps * |y|^2 to cancellation.
    let slack = 8.0 * f64::EPSILON * q.total / q.n;
    if after <= before + slack {
        theta.copy_from_slice(&candidate);
        true
    } else {
        false
    }
}
