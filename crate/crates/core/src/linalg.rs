//! Small dense real solvers used by the equilibrium code.

const PIVOT_TOL: f64 = 1e-12;

/// Solves the square system `a·x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `1e-12`.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Optimum of `max 1ᵀy  s.t.  M·y ≤ 1, y ≥ 0` for a strictly positive `M`.
pub(crate) struct PackingSolution {
    /// Primal optimum `y`.
    pub primal: Vec<f64>,
    /// Dual optimum `x` of `min 1ᵀx  s.t.  Mᵀx ≥ 1, x ≥ 0`.
    pub dual: Vec<f64>,
    pub objective: f64,
}

/// Dense tableau simplex with Bland's rule. The slack basis is feasible and
/// positivity of `M` bounds the problem, so this always terminates with an
/// optimum.
pub(crate) fn solve_packing_lp(m: &[Vec<f64>]) -> PackingSolution {
    let rows = m.len();
    let cols = m[0].len();
    let width = cols + rows + 1;
    // constraint rows followed by the objective row `z − 1ᵀy = 0`
    let mut t = vec![vec![0.0; width]; rows + 1];
    for (i, row) in m.iter().enumerate() {
        t[i][..cols].copy_from_slice(row);
        t[i][cols + i] = 1.0;
        t[i][width - 1] = 1.0;
    }
    t[rows][..cols].fill(-1.0);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    const EPS: f64 = 1e-12;

    while let Some(enter) = (0..cols + rows).find(|&j| t[rows][j] < -EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            if t[i][enter] > EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - EPS || ((ratio - lr).abs() <= EPS && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
        }
        let (pivot_row, _) = leave.expect("positive matrix keeps the packing LP bounded");
        let p = t[pivot_row][enter];
        for v in t[pivot_row].iter_mut() {
            *v /= p;
        }
        let pivot = t[pivot_row].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pivot_row {
                continue;
            }
            let f = row[enter];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= f * pv;
                }
            }
        }
        basis[pivot_row] = enter;
    }

    let mut primal = vec![0.0; cols];
    for (i, &b) in basis.iter().enumerate() {
        if b < cols {
            primal[b] = t[i][width - 1];
        }
    }
    let dual = (0..rows).map(|i| t[rows][cols + i].max(0.0)).collect();
    PackingSolution {
        primal,
        dual,
        objective: t[rows][width - 1],
    }
}
