//! List-of-arrays storage for the lower triangle of (skew-)symmetric matrices.
//!
//! Every column owns two growable arrays (`col_list` for row indices and
//! `col_val` for values) and every row owns a pattern-only array
//! (`row_list`). Two offset arrays form the bi-index used during a
//! factorization: at step `k`,
//!
//! * `col_first[j]` splits `col_list[j]` into the rows `< k` (before the
//!   offset) and the rows `>= k` (from the offset on);
//! * `row_first[i]` splits `row_list[i]` into the columns `< k` and the
//!   columns `>= k` in the same way.
//!
//! Within each segment the order is unspecified. Removing an entry swaps it
//! to the end of its segment and pops it, so nothing is ever re-sorted.

mod matrix_market;
mod permutation;

pub use matrix_market::{
    load_matrix_market, read_matrix_market_file, write_lower_general, write_matrix_market,
    write_permutation,
};
pub use permutation::Permutation;

use serde::{Deserialize, Serialize};

use crate::error::{IldlError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    Symmetric,
    Skew,
}

impl SymmetryKind {
    /// Value of the transposed entry `a_ji` given `a_ij`.
    #[inline]
    pub fn mirror(self, v: f64) -> f64 {
        match self {
            SymmetryKind::Symmetric => v,
            SymmetryKind::Skew => -v,
        }
    }

    pub fn is_skew(self) -> bool {
        self == SymmetryKind::Skew
    }
}

#[derive(Clone, Debug)]
pub struct SparseSymStore {
    n: usize,
    kind: SymmetryKind,
    col_val: Vec<Vec<f64>>,
    col_list: Vec<Vec<usize>>,
    row_list: Vec<Vec<usize>>,
    col_first: Vec<usize>,
    row_first: Vec<usize>,
    /// Step the bi-index currently describes.
    step: usize,
    sorted_hint: bool,
}

impl SparseSymStore {
    pub fn new(n: usize, kind: SymmetryKind) -> Self {
        SparseSymStore {
            n,
            kind,
            col_val: vec![Vec::new(); n],
            col_list: vec![Vec::new(); n],
            row_list: vec![Vec::new(); n],
            col_first: vec![0; n],
            row_first: vec![0; n],
            step: 0,
            sorted_hint: true,
        }
    }

    /// Builds a store from `(row, col, value)` triplets of the full matrix.
    ///
    /// Entries above the diagonal are mirrored into the lower triangle.
    /// Duplicates (after mirroring) are rejected, explicit zeros are dropped,
    /// and every column ends up sorted by row index.
    pub fn from_triplets<I>(n: usize, kind: SymmetryKind, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(IldlError::IndexOutOfRange { row: i, col: j, n });
            }
            if !v.is_finite() {
                return Err(IldlError::NonFinite("matrix entry"));
            }
            let (r, c, v) = if i >= j { (i, j, v) } else { (j, i, kind.mirror(v)) };
            if r == c && kind.is_skew() && v != 0.0 {
                return Err(IldlError::InvalidParameter(format!(
                    "nonzero diagonal entry ({}, {}) in a skew-symmetric matrix",
                    r + 1,
                    c + 1
                )));
            }
            cols[c].push((r, v));
        }
        let mut store = SparseSymStore::new(n, kind);
        for (j, mut col) in cols.into_iter().enumerate() {
            col.sort_by_key(|&(r, _)| r);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(IldlError::InvalidParameter(format!(
                        "duplicate entry ({}, {})",
                        w[0].0 + 1,
                        j + 1
                    )));
                }
            }
            for (r, v) in col {
                if v != 0.0 {
                    store.push(r, j, v);
                }
            }
        }
        store.sorted_hint = true;
        Ok(store)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn sorted_hint(&self) -> bool {
        self.sorted_hint
    }

    /// Step the bi-index offsets currently describe.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Number of stored (lower triangle) entries.
    pub fn nnz_stored(&self) -> usize {
        self.col_list.iter().map(Vec::len).sum()
    }

    /// Number of nonzeros of the full matrix, counting both triangles.
    pub fn nnz_full(&self) -> usize {
        let mut count = 0;
        for (j, rows) in self.col_list.iter().enumerate() {
            for &i in rows {
                count += if i == j { 1 } else { 2 };
            }
        }
        count
    }

    #[inline]
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        (&self.col_list[j], &self.col_val[j])
    }

    #[inline]
    pub fn row_pattern(&self, i: usize) -> &[usize] {
        &self.row_list[i]
    }

    pub fn col_first(&self) -> &[usize] {
        &self.col_first
    }

    pub fn row_first(&self) -> &[usize] {
        &self.row_first
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c, flip) = if i >= j { (i, j, false) } else { (j, i, true) };
        let v = self.col_list[c]
            .iter()
            .position(|&x| x == r)
            .map_or(0.0, |p| self.col_val[c][p]);
        if flip {
            self.kind.mirror(v)
        } else {
            v
        }
    }

    /// Stored lower-triangle entries as `(row, col, value)`.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz_stored());
        for j in 0..self.n {
            for (&i, &v) in self.col_list[j].iter().zip(&self.col_val[j]) {
                out.push((i, j, v));
            }
        }
        out
    }

    /// Largest magnitude over all stored entries.
    pub fn max_abs(&self) -> f64 {
        self.col_val
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..self.n {
            for (&i, &v) in self.col_list[j].iter().zip(&self.col_val[j]) {
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    /// Dense copy of the full matrix, row-major. Meant for small matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for j in 0..self.n {
            for (&i, &v) in self.col_list[j].iter().zip(&self.col_val[j]) {
                a[i][j] = v;
                if i != j {
                    a[j][i] = self.kind.mirror(v);
                }
            }
        }
        a
    }

    /// `y = A x` using the stored lower triangle and its mirror.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..self.n {
            let xj = x[j];
            let mut acc = 0.0;
            for (&i, &v) in self.col_list[j].iter().zip(&self.col_val[j]) {
                if i == j {
                    y[j] += v * xj;
                } else {
                    y[i] += v * xj;
                    acc += v * x[i];
                }
            }
            y[j] += self.kind.mirror(acc);
        }
    }

    /// Store with rows and columns renumbered: old index `perm.forward()[i]`
    /// becomes new index `i`.
    pub fn permuted(&self, perm: &Permutation) -> SparseSymStore {
        let inv = perm.inverse();
        let trip = self
            .triplets()
            .into_iter()
            .map(|(i, j, v)| (inv[i], inv[j], v));
        // Indices stay in range and unique under a bijection.
        SparseSymStore::from_triplets(self.n, self.kind, trip).expect("permutation is a bijection")
    }

    /// Scales every stored value in place; `f(i, j, v)` returns the new value.
    pub fn map_values<F: FnMut(usize, usize, f64) -> f64>(&mut self, mut f: F) {
        for j in 0..self.n {
            for (&i, v) in self.col_list[j].iter().zip(self.col_val[j].iter_mut()) {
                *v = f(i, j, *v);
            }
        }
    }

    /// Appends an entry; the caller guarantees it is not already stored.
    pub(crate) fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i >= j && i < self.n);
        self.col_list[j].push(i);
        self.col_val[j].push(v);
        self.row_list[i].push(j);
    }

    /// Releases the memory of column `j`. Row patterns still mention it.
    pub(crate) fn free_column(&mut self, j: usize) {
        self.col_list[j] = Vec::new();
        self.col_val[j] = Vec::new();
        self.col_first[j] = 0;
    }

    /// Entries of column `i` with row index `>= from`, read from the active
    /// segment of the column. Order within the segment is unspecified.
    pub fn subcolumn(&self, i: usize, from: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let start = self.col_first[i].min(self.col_list[i].len());
        self.col_list[i][start..]
            .iter()
            .zip(&self.col_val[i][start..])
            .filter(move |(&r, _)| r >= from)
            .map(|(&r, &v)| (r, v))
    }

    /// Columns `j >= step` holding an entry in row `i` (the active part of
    /// the row pattern).
    pub(crate) fn active_row(&self, i: usize) -> &[usize] {
        &self.row_list[i][self.row_first[i]..]
    }

    /// Value of the stored entry `(i, j)`, `i >= j`, searching only the
    /// active segment of column `j`.
    pub(crate) fn active_value(&self, i: usize, j: usize) -> Option<f64> {
        let start = self.col_first[j];
        self.col_list[j][start..]
            .iter()
            .position(|&r| r == i)
            .map(|p| self.col_val[j][start + p])
    }

    /// Advances the bi-index past step `k`: afterwards both offset arrays
    /// describe step `k + 1`.
    ///
    /// For every column holding an entry in row `k`, the minimal remaining
    /// row index of its active segment (which is `k`) is swapped to the
    /// segment start and the offset moves past it; rows are treated the
    /// same way through the pattern of column `k`.
    pub fn advance_bi_index(&mut self, k: usize) {
        self.advance_columns(k);
        self.advance_rows(k);
        self.step = k + 1;
    }

    pub(crate) fn advance_columns(&mut self, k: usize) {
        for idx in 0..self.row_list[k].len() {
            let j = self.row_list[k][idx];
            let first = self.col_first[j];
            let seg = &self.col_list[j][first..];
            let Some((pos, &min)) = seg.iter().enumerate().min_by_key(|&(_, &r)| r) else {
                continue;
            };
            if min > k {
                continue;
            }
            debug_assert_eq!(min, k);
            self.col_list[j].swap(first, first + pos);
            self.col_val[j].swap(first, first + pos);
            self.col_first[j] += 1;
        }
        self.step = self.step.max(k + 1);
    }

    pub(crate) fn advance_rows(&mut self, k: usize) {
        for idx in 0..self.col_list[k].len() {
            let i = self.col_list[k][idx];
            let first = self.row_first[i];
            if let Some(pos) = self.row_list[i][first..].iter().position(|&c| c == k) {
                self.row_list[i].swap(first, first + pos);
                self.row_first[i] += 1;
            }
        }
        self.step = self.step.max(k + 1);
    }

    /// Checks the structural invariants and the bi-index partition for the
    /// current step. Returns a description of the first violation.
    pub fn audit_bi_index(&self) -> std::result::Result<(), String> {
        let k = self.step;
        let mut row_count = vec![0usize; self.n];
        for j in 0..self.n {
            if self.col_list[j].len() != self.col_val[j].len() {
                return Err(format!("column {j}: index and value lengths differ"));
            }
            let first = self.col_first[j];
            if first > self.col_list[j].len() {
                return Err(format!("column {j}: col_first past the end"));
            }
            for (p, &i) in self.col_list[j].iter().enumerate() {
                if i < j || (i == j && self.kind.is_skew()) {
                    return Err(format!("column {j}: entry in row {i} outside the lower triangle"));
                }
                if (p < first) != (i < k) {
                    return Err(format!("column {j}: row {i} on the wrong side of col_first at step {k}"));
                }
                row_count[i] += 1;
                if self.row_list[i].iter().filter(|&&c| c == j).count() != 1 {
                    return Err(format!("entry ({i}, {j}) not mirrored exactly once in row_list"));
                }
            }
        }
        for i in 0..self.n {
            if self.row_list[i].len() != row_count[i] {
                return Err(format!("row {i}: pattern length does not match the columns"));
            }
            let first = self.row_first[i];
            if first > self.row_list[i].len() {
                return Err(format!("row {i}: row_first past the end"));
            }
            for (p, &j) in self.row_list[i].iter().enumerate() {
                if (p < first) != (j < k) {
                    return Err(format!("row {i}: column {j} on the wrong side of row_first at step {k}"));
                }
            }
        }
        Ok(())
    }

    /// Exchanges rows and columns `p` and `q` of the represented matrix.
    ///
    /// Only the trailing submatrix may be permuted: both indices must be at
    /// least the current step. Entries of already eliminated columns are
    /// relabelled in place, and the two column slots trade places by swapping
    /// their arrays.
    pub fn swap_symmetric(&mut self, p: usize, q: usize) -> Result<()> {
        self.swap_symmetric_impl(p, q, true)
    }

    pub(crate) fn swap_symmetric_impl(&mut self, p: usize, q: usize, keep_dead: bool) -> Result<()> {
        let n = self.n;
        if p >= n || q >= n {
            return Err(IldlError::IndexOutOfRange { row: p, col: q, n });
        }
        if p < self.step || q < self.step {
            return Err(IldlError::InvalidParameter(format!(
                "cannot swap {p} and {q} before step {}",
                self.step
            )));
        }
        if p == q {
            return Ok(());
        }
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        let kind = self.kind;

        // Pull every active entry touching p or q out of the store.
        let mut moved: Vec<(usize, usize, f64)> = Vec::new();
        for c in [p, q] {
            let rows = std::mem::take(&mut self.col_list[c]);
            let vals = std::mem::take(&mut self.col_val[c]);
            for (&i, &v) in rows.iter().zip(&vals) {
                self.remove_from_row(i, c);
                moved.push((i, c, v));
            }
            // Keep the allocation for reuse.
            self.col_list[c] = rows;
            self.col_list[c].clear();
            self.col_val[c] = vals;
            self.col_val[c].clear();
        }
        for r in [p, q] {
            let first = self.row_first[r];
            for idx in first..self.row_list[r].len() {
                let j = self.row_list[r][idx];
                let pos = self.col_list[j]
                    .iter()
                    .position(|&x| x == r)
                    .expect("row pattern mirrors a column entry");
                self.col_list[j].swap_remove(pos);
                let v = self.col_val[j].swap_remove(pos);
                moved.push((r, j, v));
            }
            self.row_list[r].truncate(first);
        }

        // Eliminated columns keep their entries; only the row label changes.
        if keep_dead {
            let mut relabel: Vec<(usize, usize, usize)> = Vec::new();
            for (r, other) in [(p, q), (q, p)] {
                for &j in &self.row_list[r][..self.row_first[r]] {
                    let first = self.col_first[j];
                    let pos = self.col_list[j][first..]
                        .iter()
                        .position(|&x| x == r)
                        .expect("eliminated column holds the row entry");
                    relabel.push((j, first + pos, other));
                }
            }
            for (j, pos, row) in relabel {
                self.col_list[j][pos] = row;
            }
        }
        self.row_list.swap(p, q);
        self.row_first.swap(p, q);

        let sigma = |x: usize| {
            if x == p {
                q
            } else if x == q {
                p
            } else {
                x
            }
        };
        for (i, j, v) in moved {
            let (a, b) = (sigma(i), sigma(j));
            if a >= b {
                self.push(a, b, v);
            } else {
                self.push(b, a, kind.mirror(v));
            }
        }
        Ok(())
    }

    /// Removes column `c` from the active part of `row_list[i]`.
    fn remove_from_row(&mut self, i: usize, c: usize) {
        let first = self.row_first[i];
        let row = &mut self.row_list[i];
        if let Some(pos) = row[first..].iter().position(|&x| x == c) {
            row.swap_remove(first + pos);
        }
    }

    /// Swaps rows `p` and `q` in the columns `< step` of a factor store.
    /// Used for `L`, which has no entries in its trailing columns yet.
    pub(crate) fn swap_factor_rows(&mut self, p: usize, q: usize) {
        if p == q {
            return;
        }
        let mut relabel: Vec<(usize, usize, usize)> = Vec::new();
        for (r, other) in [(p, q), (q, p)] {
            for &j in &self.row_list[r] {
                let first = self.col_first[j];
                let pos = self.col_list[j][first..]
                    .iter()
                    .position(|&x| x == r)
                    .expect("factor column holds the row entry");
                relabel.push((j, first + pos, other));
            }
        }
        for (j, pos, row) in relabel {
            self.col_list[j][pos] = row;
        }
        self.row_list.swap(p, q);
        self.row_first.swap(p, q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> SparseSymStore {
        SparseSymStore::from_triplets(n, SymmetryKind::Symmetric, (0..n).map(|i| (i, i, 1.0))).unwrap()
    }

    fn sorted_triplets(s: &SparseSymStore) -> Vec<(usize, usize, u64)> {
        let mut t: Vec<_> = s.triplets().into_iter().map(|(i, j, v)| (i, j, v.to_bits())).collect();
        t.sort();
        t
    }

    /// Dense P A P^T for the transposition (p q).
    fn dense_swap(a: &[Vec<f64>], p: usize, q: usize) -> Vec<Vec<f64>> {
        let n = a.len();
        let s = |x: usize| if x == p { q } else if x == q { p } else { x };
        (0..n).map(|i| (0..n).map(|j| a[s(i)][s(j)]).collect()).collect()
    }

    #[test]
    fn swap_identity_is_identity() {
        let mut s = identity(3);
        s.swap_symmetric(1, 2).unwrap();
        assert_eq!(s.to_dense(), identity(3).to_dense());
        s.audit_bi_index().unwrap();
    }

    #[test]
    fn swap_two_by_two_symmetric() {
        let mut s = SparseSymStore::from_triplets(
            2,
            SymmetryKind::Symmetric,
            [(0, 0, 1.0), (1, 0, 2.0), (1, 1, 3.0)],
        )
        .unwrap();
        s.swap_symmetric(0, 1).unwrap();
        assert_eq!(s.get(0, 0), 3.0);
        assert_eq!(s.get(1, 0), 2.0);
        assert_eq!(s.get(1, 1), 1.0);
    }

    #[test]
    fn swap_skew_negates_the_pair() {
        let mut s = SparseSymStore::from_triplets(2, SymmetryKind::Skew, [(1, 0, 5.0)]).unwrap();
        s.swap_symmetric(0, 1).unwrap();
        assert_eq!(s.triplets(), vec![(1, 0, -5.0)]);
    }

    #[test]
    fn swap_matches_dense_permutation() {
        let mut trip = Vec::new();
        for i in 0..6 {
            for j in 0..=i {
                if (i * 7 + j * 3) % 4 != 0 {
                    trip.push((i, j, (i * 10 + j) as f64 + 0.5));
                }
            }
        }
        for kind in [SymmetryKind::Symmetric, SymmetryKind::Skew] {
            let t: Vec<_> = trip.iter().copied().filter(|&(i, j, _)| !(kind.is_skew() && i == j)).collect();
            let base = SparseSymStore::from_triplets(6, kind, t).unwrap();
            for p in 0..6 {
                for q in 0..6 {
                    let mut s = base.clone();
                    s.swap_symmetric(p, q).unwrap();
                    assert_eq!(s.to_dense(), dense_swap(&base.to_dense(), p, q), "{kind:?} swap {p} {q}");
                    s.audit_bi_index().unwrap();
                }
            }
        }
    }

    #[test]
    fn swap_after_advance_keeps_eliminated_columns() {
        let mut trip = Vec::new();
        for i in 0..5 {
            for j in 0..=i {
                trip.push((i, j, 1.0 + (i * 5 + j) as f64));
            }
        }
        let base = SparseSymStore::from_triplets(5, SymmetryKind::Symmetric, trip).unwrap();
        let mut s = base.clone();
        s.advance_bi_index(0);
        s.advance_bi_index(1);
        s.swap_symmetric(2, 4).unwrap();
        s.audit_bi_index().unwrap();
        assert_eq!(s.to_dense(), dense_swap(&base.to_dense(), 2, 4));
        assert!(s.swap_symmetric(1, 3).is_err());
    }

    #[test]
    fn advance_on_dense_lower() {
        let trip = [(0, 0, 1.0), (1, 0, 2.0), (2, 0, 3.0), (1, 1, 4.0), (2, 1, 5.0), (2, 2, 6.0)];
        let mut s = SparseSymStore::from_triplets(3, SymmetryKind::Symmetric, trip).unwrap();
        s.advance_bi_index(0);
        assert_eq!(s.col_first(), &[1, 0, 0]);
        s.advance_bi_index(1);
        // Column 0 now has rows 0 and 1 behind its offset, column 1 its diagonal.
        assert_eq!(s.col_first(), &[2, 1, 0]);
        assert_eq!(s.row_first(), &[1, 2, 2]);
        s.audit_bi_index().unwrap();
        let sub: Vec<_> = s.subcolumn(0, 2).collect();
        assert_eq!(sub, vec![(2, 3.0)]);
    }

    #[test]
    fn advance_on_diagonal_and_empty_columns() {
        let mut s = identity(3);
        s.advance_bi_index(0);
        assert_eq!(s.col_first(), &[1, 0, 0]);
        let mut e = SparseSymStore::new(3, SymmetryKind::Symmetric);
        e.advance_bi_index(0);
        assert_eq!(e.col_first(), &[0, 0, 0]);
        e.audit_bi_index().unwrap();
    }

    #[test]
    fn subcolumn_examples() {
        let mut s = identity(3);
        s.advance_bi_index(0);
        assert_eq!(s.subcolumn(0, 1).count(), 0);

        let trip = [(0, 0, 1.0), (1, 0, 2.0), (2, 0, 3.0)];
        let d = SparseSymStore::from_triplets(3, SymmetryKind::Symmetric, trip).unwrap();
        assert_eq!(d.subcolumn(0, 1).collect::<Vec<_>>(), vec![(1, 2.0), (2, 3.0)]);

        let mut u = SparseSymStore::new(5, SymmetryKind::Symmetric);
        u.push(4, 0, 7.0);
        u.push(2, 0, 8.0);
        let mut got: Vec<_> = u.subcolumn(0, 2).collect();
        got.sort_by_key(|e| e.0);
        assert_eq!(got, vec![(2, 8.0), (4, 7.0)]);
    }

    #[test]
    fn matvec_matches_dense() {
        let trip = [(0, 0, 2.0), (2, 0, -1.0), (1, 1, 3.0), (2, 1, 4.0)];
        for kind in [SymmetryKind::Symmetric, SymmetryKind::Skew] {
            let t: Vec<_> = trip.iter().copied().filter(|&(i, j, _)| !(kind.is_skew() && i == j)).collect();
            let s = SparseSymStore::from_triplets(3, kind, t).unwrap();
            let x = [1.0, -2.0, 0.5];
            let mut y = [0.0; 3];
            s.matvec(&x, &mut y);
            let d = s.to_dense();
            for i in 0..3 {
                let e: f64 = (0..3).map(|j| d[i][j] * x[j]).sum();
                assert!((e - y[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn from_triplets_rejects_duplicates_and_mirrors() {
        let dup = SparseSymStore::from_triplets(2, SymmetryKind::Symmetric, [(1, 0, 1.0), (0, 1, 1.0)]);
        assert!(dup.is_err());
        let s = SparseSymStore::from_triplets(2, SymmetryKind::Skew, [(0, 1, 3.0)]).unwrap();
        assert_eq!(s.triplets(), vec![(1, 0, -3.0)]);
        assert_eq!(sorted_triplets(&s).len(), 1);
    }

    proptest::proptest! {
        #[test]
        fn double_swap_restores(seed in 0u64..500, p in 0usize..7, q in 0usize..7) {
            let n = 7;
            let mut trip = Vec::new();
            let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            for i in 0..n {
                for j in 0..i {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if x >> 61 < 3 {
                        trip.push((i, j, (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5));
                    }
                }
            }
            let base = SparseSymStore::from_triplets(n, SymmetryKind::Skew, trip).unwrap();
            let mut s = base.clone();
            s.swap_symmetric(p, q).unwrap();
            s.swap_symmetric(p, q).unwrap();
            proptest::prop_assert_eq!(sorted_triplets(&s), sorted_triplets(&base));
        }
    }
}
