use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;

/// Symmetric positive (semi-)definite operator defining the inner product
/// used by the least-squares optimization, `<x, y> = xᵀ W y`.
///
/// A semidefinite weight is tolerated: columns with zero weighted norm are
/// degenerate and get dropped by the safeguard.
pub trait GramWeight {
    /// Returns `W x`.
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

/// Euclidean inner product (W = I).
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl GramWeight for Euclidean {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
}

impl GramWeight for CsrMatrix {
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.spmv(x).expect("gram weight dimension mismatch")
    }
}

/// Least-squares problem `min ‖rhs − Σ γ_i columns[i]‖_W` over the given
/// columns (most recent first, matching the residual-difference matrix the
/// acceleration engine builds).
pub struct DenseLsProblem<'a> {
    pub columns: Vec<&'a [f64]>,
    pub rhs: &'a [f64],
    pub gram_weight: Option<&'a dyn GramWeight>,
}

/// Solution of [`dense_least_squares`].
#[derive(Debug, Clone)]
pub struct LsSolution {
    /// One coefficient per input column; zero for dropped columns.
    pub coefficients: Vec<f64>,
    /// Indices of the columns that survived the direction-sine safeguard.
    pub kept_columns: Vec<usize>,
    /// Weighted norm of `rhs − Σ γ_i columns[i]`.
    pub residual_norm: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Modified Gram-Schmidt QR in the `gram_weight` inner product with
/// direction-sine column dropping.
///
/// Columns are processed most-recent first. A column whose orthogonal
/// remainder has norm below `drop_tol` times its own norm is dropped: its
/// coefficient is zero and it is excluded from `kept_columns`. Each column
/// is orthogonalized twice so the kept basis stays orthogonal to roundoff
/// even when the kept set is poorly conditioned.
pub fn dense_least_squares(problem: &DenseLsProblem, drop_tol: f64) -> Result<LsSolution> {
    if problem.columns.is_empty() {
        return Err(Error::InvalidParameter(
            "least squares needs at least one column".into(),
        ));
    }
    if !(drop_tol > 0.0 && drop_tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "drop_tol must lie in (0, 1), got {drop_tol}"
        )));
    }
    let n = problem.rhs.len();
    for col in &problem.columns {
        if col.len() != n {
            return Err(Error::DimensionMismatch {
                context: "least squares column length",
                expected: n,
                got: col.len(),
            });
        }
    }

    let euclid = Euclidean;
    let weight: &dyn GramWeight = problem.gram_weight.unwrap_or(&euclid);

    let ncols = problem.columns.len();
    let mut q: Vec<Vec<f64>> = Vec::new(); // orthonormal basis
    let mut wq: Vec<Vec<f64>> = Vec::new(); // W q, cached
    let mut kept_columns = Vec::new();
    // r_cols[i] holds the projections of input column i onto the kept basis
    // built so far, followed by the diagonal entry.
    let mut r_cols: Vec<Vec<f64>> = Vec::new();

    for (i, col) in problem.columns.iter().enumerate() {
        let mut v = col.to_vec();
        let mut wv = weight.apply(&v);
        let col_norm = dot(&v, &wv).max(0.0).sqrt();

        let mut proj = vec![0.0; q.len()];
        for _pass in 0..2 {
            for j in 0..q.len() {
                let r = dot(&wq[j], &v);
                proj[j] += r;
                axpy(&mut v, -r, &q[j]);
                axpy(&mut wv, -r, &wq[j]);
            }
        }
        let rem_norm = dot(&v, &wv).max(0.0).sqrt();

        if col_norm == 0.0 || rem_norm < drop_tol * col_norm {
            continue;
        }
        let inv = 1.0 / rem_norm;
        for x in v.iter_mut() {
            *x *= inv;
        }
        for x in wv.iter_mut() {
            *x *= inv;
        }
        q.push(v);
        wq.push(wv);
        proj.push(rem_norm);
        r_cols.push(proj);
        kept_columns.push(i);
    }

    // Project the right-hand side onto the kept basis.
    let mut res = problem.rhs.to_vec();
    let mut wres = weight.apply(&res);
    let mut d = vec![0.0; q.len()];
    for _pass in 0..2 {
        for j in 0..q.len() {
            let c = dot(&wq[j], &res);
            d[j] += c;
            axpy(&mut res, -c, &q[j]);
            axpy(&mut wres, -c, &wq[j]);
        }
    }
    let residual_norm = dot(&res, &wres).max(0.0).sqrt();

    // Back substitution R γ = d over the kept columns.
    let k = q.len();
    let mut gamma_kept = vec![0.0; k];
    for j in (0..k).rev() {
        let mut acc = d[j];
        for l in (j + 1)..k {
            acc -= r_cols[l][j] * gamma_kept[l];
        }
        gamma_kept[j] = acc / r_cols[j][j];
    }

    let mut coefficients = vec![0.0; ncols];
    for (slot, &col_idx) in kept_columns.iter().enumerate() {
        coefficients[col_idx] = gamma_kept[slot];
    }

    Ok(LsSolution {
        coefficients,
        kept_columns,
        residual_norm,
    })
}
