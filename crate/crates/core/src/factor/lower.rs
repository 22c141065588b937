use crate::storage::SparseSymStore;

/// Unit lower triangular `L`; only the strictly lower entries are stored.
#[derive(Clone, Debug)]
pub struct UnitLowerFactor {
    store: SparseSymStore,
}

impl UnitLowerFactor {
    pub(crate) fn from_store(store: SparseSymStore) -> Self {
        UnitLowerFactor { store }
    }

    /// Builds a factor from strictly lower `(row, col, value)` entries.
    pub fn from_strict_lower(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> crate::Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some(&(i, j, _)) = entries.iter().find(|&&(i, j, _)| i <= j) {
            return Err(crate::IldlError::IndexOutOfRange { row: i, col: j, n });
        }
        Ok(UnitLowerFactor {
            store: SparseSymStore::from_triplets(n, crate::SymmetryKind::Symmetric, entries)?,
        })
    }

    pub fn identity(n: usize) -> Self {
        UnitLowerFactor {
            store: SparseSymStore::new(n, crate::SymmetryKind::Symmetric),
        }
    }

    pub fn n(&self) -> usize {
        self.store.n()
    }

    /// Number of stored off-diagonal entries.
    pub fn nnz(&self) -> usize {
        self.store.nnz_stored()
    }

    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        self.store.column(j)
    }

    pub fn row_pattern(&self, i: usize) -> &[usize] {
        self.store.row_pattern(i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Greater => self.store.get(i, j),
        }
    }

    pub fn max_column_nnz(&self) -> usize {
        (0..self.n()).map(|j| self.store.column(j).0.len()).max().unwrap_or(0)
    }

    /// Strictly lower entries.
    pub fn strict_triplets(&self) -> Vec<(usize, usize, f64)> {
        self.store.triplets()
    }

    /// All entries including the unit diagonal, column by column with rows
    /// ascending.
    pub fn triplets_with_diagonal(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz() + self.n());
        for j in 0..self.n() {
            let (rows, vals) = self.store.column(j);
            let mut col: Vec<(usize, f64)> = rows.iter().copied().zip(vals.iter().copied()).collect();
            col.sort_by_key(|e| e.0);
            out.push((j, j, 1.0));
            out.extend(col.into_iter().map(|(i, v)| (i, j, v)));
        }
        out
    }

    pub fn to_csc(&self) -> LowerCsc {
        let n = self.n();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::with_capacity(self.nnz());
        let mut vals = Vec::with_capacity(self.nnz());
        col_ptr.push(0);
        for j in 0..n {
            let (rows, v) = self.store.column(j);
            let mut col: Vec<(usize, f64)> = rows.iter().copied().zip(v.iter().copied()).collect();
            col.sort_by_key(|e| e.0);
            for (i, x) in col {
                row_idx.push(i);
                vals.push(x);
            }
            col_ptr.push(row_idx.len());
        }
        LowerCsc { n, col_ptr, row_idx, vals }
    }
}

/// Compressed column copy of a unit lower factor used by the triangular
/// solves.
#[derive(Clone, Debug)]
pub struct LowerCsc {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl LowerCsc {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Entries of column `j` (strictly below the diagonal).
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[r.clone()], &self.vals[r])
    }

    /// `x <- L^{-1} x`
    pub fn solve_in_place(&self, x: &mut [f64]) {
        for j in 0..self.n {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                x[self.row_idx[p]] -= self.vals[p] * xj;
            }
        }
    }

    /// `x <- L^{-T} x`
    pub fn solve_transpose_in_place(&self, x: &mut [f64]) {
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                s -= self.vals[p] * x[self.row_idx[p]];
            }
            x[j] = s;
        }
    }

    /// `x <- L x`
    pub fn apply_in_place(&self, x: &mut [f64]) {
        for j in (0..self.n).rev() {
            let xj = x[j];
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                x[self.row_idx[p]] += self.vals[p] * xj;
            }
        }
    }

    /// `x <- L^T x`
    pub fn apply_transpose_in_place(&self, x: &mut [f64]) {
        for j in 0..self.n {
            let mut s = x[j];
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                s += self.vals[p] * x[self.row_idx[p]];
            }
            x[j] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_solves_invert_products() {
        let l = UnitLowerFactor::from_strict_lower(4, [(1, 0, 0.5), (3, 0, -2.0), (2, 1, 3.0), (3, 2, 0.25)]).unwrap();
        let csc = l.to_csc();
        let x0 = [1.0, -2.0, 0.5, 4.0];
        let mut x = x0;
        csc.apply_in_place(&mut x);
        csc.solve_in_place(&mut x);
        for (a, b) in x.iter().zip(&x0) {
            assert!((a - b).abs() < 1e-14);
        }
        csc.apply_transpose_in_place(&mut x);
        csc.solve_transpose_in_place(&mut x);
        for (a, b) in x.iter().zip(&x0) {
            assert!((a - b).abs() < 1e-14);
        }
        // L e_0 = (1, 0.5, 0, -2)
        let mut e = [1.0, 0.0, 0.0, 0.0];
        csc.apply_in_place(&mut e);
        assert_eq!(e, [1.0, 0.5, 0.0, -2.0]);
    }

    #[test]
    fn rejects_upper_entries() {
        assert!(UnitLowerFactor::from_strict_lower(2, [(0, 1, 1.0)]).is_err());
        assert!(UnitLowerFactor::from_strict_lower(2, [(1, 1, 1.0)]).is_err());
    }
}
