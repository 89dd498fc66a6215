use crate::error::{Error, Result};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row; all assembled operators in the crate live in this form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets. Duplicate entries are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in entries {
            if r >= nrows || c >= ncols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }

        // Counting sort by row, then sort each row by column and merge.
        let mut counts = vec![0usize; nrows + 1];
        for &(r, _, _) in entries {
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; entries.len()];
        let mut vals = vec![0.0f64; entries.len()];
        {
            let mut next = counts.clone();
            for &(r, c, v) in entries {
                let p = next[r];
                cols[p] = c;
                vals[p] = v;
                next[r] += 1;
            }
        }

        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_offsets.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for r in 0..nrows {
            scratch.clear();
            scratch.extend(
                cols[counts[r]..counts[r + 1]]
                    .iter()
                    .copied()
                    .zip(vals[counts[r]..counts[r + 1]].iter().copied()),
            );
            scratch.sort_unstable_by_key(|&(c, _)| c);
            for &(c, v) in scratch.iter() {
                if col_indices.len() > row_offsets[r] && *col_indices.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_indices.push(c);
                    values.push(v);
                }
            }
            row_offsets.push(col_indices.len());
        }

        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mutable access to the stored values, pattern fixed. Used to rebuild
    /// iteration-dependent operators on a frozen sparsity pattern.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_offsets[i];
        let hi = self.row_offsets[i + 1];
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// Stored value at (i, j), or 0 if the entry is not in the pattern.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    /// Sparse matrix-vector product `y = A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "spmv input",
                expected: self.ncols,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` without allocation; lengths must already match.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for i in 0..self.nrows {
            let lo = self.row_offsets[i];
            let hi = self.row_offsets[i + 1];
            let mut acc = 0.0;
            for p in lo..hi {
                acc += self.values[p] * x[self.col_indices[p]];
            }
            y[i] = acc;
        }
    }

    /// Bilinear form `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        let mut acc = 0.0;
        for i in 0..self.nrows {
            let lo = self.row_offsets[i];
            let hi = self.row_offsets[i + 1];
            let mut row_acc = 0.0;
            for p in lo..hi {
                row_acc += self.values[p] * y[self.col_indices[p]];
            }
            acc += x[i] * row_acc;
        }
        acc
    }

    /// Dense copy, for small-matrix tests and oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.ncols]; self.nrows];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                dense[i][j] += v;
            }
        }
        dense
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_triplets(1, 1, &[(0, 0, 1.0), (0, 0, 2.0)]).unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 0), 3.0);
    }

    #[test]
    fn empty_triplets_give_empty_pattern() {
        let a = CsrMatrix::from_triplets(2, 2, &[]).unwrap();
        assert_eq!(a.row_offsets(), &[0, 0, 0]);
        assert_eq!(a.nnz(), 0);
        let y = a.spmv(&[1.0, 2.0]).unwrap();
        assert_eq!(y, vec![0.0, 0.0]);
    }

    #[test]
    fn identity_triplets_reproduce_input() {
        let a =
            CsrMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]).unwrap();
        let y = a.spmv(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let err = CsrMatrix::from_triplets(2, 2, &[(0, 2, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { .. }));
    }

    #[test]
    fn spmv_dimension_mismatch_is_rejected() {
        let a = CsrMatrix::identity(2);
        assert!(a.spmv(&[1.0]).is_err());
    }

    #[test]
    fn columns_strictly_increasing_per_row() {
        let a = CsrMatrix::from_triplets(
            2,
            3,
            &[(1, 2, 1.0), (1, 0, 2.0), (0, 1, 3.0), (1, 2, 4.0)],
        )
        .unwrap();
        for i in 0..a.nrows() {
            let (cols, _) = a.row(i);
            for w in cols.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
        assert_eq!(a.get(1, 2), 5.0);
    }

    #[test]
    fn spmv_matches_dense_oracle_on_random_matrix() {
        let mut rng = StdRng::seed_from_u64(7);
        let n = 20;
        let mut entries = Vec::new();
        for _ in 0..120 {
            entries.push((
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(-1.0..1.0),
            ));
        }
        let a = CsrMatrix::from_triplets(n, n, &entries).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

        // Dense oracle: accumulate the triplets directly.
        let mut dense = vec![vec![0.0; n]; n];
        for &(r, c, v) in &entries {
            dense[r][c] += v;
        }
        let mut y_ref = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                y_ref[i] += dense[i][j] * x[j];
            }
        }

        let y = a.spmv(&x).unwrap();
        let scale = y_ref.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for i in 0..n {
            assert!((y[i] - y_ref[i]).abs() <= 1e-14 * scale.max(1.0));
        }
    }
}
