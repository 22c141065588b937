//! Incomplete `L D L^T` factorization in Crout order with Bunch-Kaufman or
//! rook pivoting, threshold dropping and a per-column fill cap.

mod blocks;
mod crout;
mod drop;
mod lower;
pub mod pivot;

pub use blocks::{Block, BlockDiag};
pub use drop::{apply_drop_rules, column_cap, DropNorm};
pub use lower::{LowerCsc, UnitLowerFactor};
pub use pivot::{PivotDecision, PivotRecord, PivotRule, ALPHA};

use serde::{Deserialize, Serialize};

use crate::error::{IldlError, Result};
use crate::storage::{Permutation, SparseSymStore, SymmetryKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotKind {
    #[default]
    Rook,
    #[serde(rename = "bk")]
    BunchKaufman,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorParams {
    /// Relative drop threshold in `[0, 1)`.
    pub drop_tol: f64,
    /// Per-column cap on `nnz(L)` relative to `nnz(A) / n`; infinite means
    /// no cap.
    pub fill_factor: f64,
    pub pivot: PivotKind,
    /// Replacement for exactly zero pivots. Defaults to
    /// `sqrt(eps) * max|A|`.
    pub static_pivot_shift: Option<f64>,
    pub drop_norm: DropNorm,
    /// Keep a [`PivotRecord`] for every step.
    pub record_pivots: bool,
}

impl Default for FactorParams {
    fn default() -> Self {
        FactorParams {
            drop_tol: 1e-4,
            fill_factor: 2.0,
            pivot: PivotKind::Rook,
            static_pivot_shift: None,
            drop_norm: DropNorm::Two,
            record_pivots: false,
        }
    }
}

impl FactorParams {
    /// Parameters for a complete factorization (nothing dropped).
    pub fn complete(pivot: PivotKind) -> Self {
        FactorParams {
            drop_tol: 0.0,
            fill_factor: f64::INFINITY,
            pivot,
            ..FactorParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.drop_tol) {
            return Err(IldlError::InvalidParameter(format!("drop_tol must lie in [0, 1), got {}", self.drop_tol)));
        }
        if self.fill_factor.is_nan() || self.fill_factor <= 0.0 {
            return Err(IldlError::InvalidParameter(format!("fill_factor must be positive, got {}", self.fill_factor)));
        }
        if let Some(s) = self.static_pivot_shift {
            if !(s.is_finite() && s > 0.0) {
                return Err(IldlError::InvalidParameter(format!("static pivot shift must be positive, got {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorStats {
    pub static_pivots: usize,
    pub blocks_1x1: usize,
    pub blocks_2x2: usize,
    pub nnz_l: usize,
    pub dropped: usize,
}

/// `P A P^T ~ L D L^T` for the matrix handed to the factorization.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub l: UnitLowerFactor,
    pub d: BlockDiag,
    /// Pivoting permutation relative to the factored matrix.
    pub perm: Permutation,
    pub stats: FactorStats,
    /// Filled only when [`FactorParams::record_pivots`] is set.
    pub pivots: Vec<PivotRecord>,
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn kind(&self) -> SymmetryKind {
        self.d.kind()
    }

    /// `||P A P^T - L D L^T||_F / ||A||_F` without forming dense matrices.
    pub fn reconstruction_residual(&self, a: &SparseSymStore) -> f64 {
        let pa = a.permuted(&self.perm);
        let n = self.n();
        let mut work = vec![0.0; n];
        let mut mark = vec![false; n];
        let mut pattern = Vec::new();
        let mut err2 = 0.0;
        for c in 0..n {
            self.ldlt_lower_column(c, &mut work, &mut mark, &mut pattern);
            let (rows, vals) = pa.column(c);
            for (&i, &v) in rows.iter().zip(vals) {
                if !mark[i] {
                    mark[i] = true;
                    pattern.push(i);
                    work[i] = 0.0;
                }
                work[i] -= v;
            }
            for &i in &pattern {
                let w = if i == c { 1.0 } else { 2.0 };
                err2 += w * work[i] * work[i];
                mark[i] = false;
            }
            pattern.clear();
        }
        let norm = a.frobenius_norm();
        if norm == 0.0 {
            err2.sqrt()
        } else {
            err2.sqrt() / norm
        }
    }

    /// Scatters rows `>= c` of column `c` of `L D L^T`.
    fn ldlt_lower_column(&self, c: usize, work: &mut [f64], mark: &mut [bool], pattern: &mut Vec<usize>) {
        let mut blocks: Vec<usize> = self.l.row_pattern(c).to_vec();
        blocks.push(c);
        let starts = self.d.starts();
        let mut block_ids: Vec<usize> = blocks
            .into_iter()
            .map(|j| starts.partition_point(|&s| s <= j) - 1)
            .collect();
        block_ids.sort_unstable();
        block_ids.dedup();
        for b in block_ids {
            let s = starts[b];
            let block = self.d.blocks()[b];
            let size = block.size();
            let mut u = [0.0; 2];
            for (t, ut) in u.iter_mut().enumerate().take(size) {
                *ut = self.l.get(c, s + t);
            }
            block.apply(&mut u[..size]);
            for (t, &ut) in u.iter().enumerate().take(size) {
                let mut put = |i: usize, v: f64| {
                    if i < c {
                        return;
                    }
                    if !mark[i] {
                        mark[i] = true;
                        pattern.push(i);
                        work[i] = 0.0;
                    }
                    work[i] += v;
                };
                put(s + t, ut);
                let (rows, vals) = self.l.column(s + t);
                for (&i, &v) in rows.iter().zip(vals) {
                    put(i, v * ut);
                }
            }
        }
    }

    /// Lower triangle of `L D L^T` as a store.
    pub fn reconstruct(&self) -> SparseSymStore {
        let n = self.n();
        let mut work = vec![0.0; n];
        let mut mark = vec![false; n];
        let mut pattern = Vec::new();
        let mut trip = Vec::new();
        for c in 0..n {
            self.ldlt_lower_column(c, &mut work, &mut mark, &mut pattern);
            for &i in &pattern {
                mark[i] = false;
                if self.kind().is_skew() && i == c {
                    continue;
                }
                trip.push((i, c, work[i]));
            }
            pattern.clear();
        }
        SparseSymStore::from_triplets(n, self.kind(), trip).expect("entries are unique and in range")
    }
}

/// Factors a symmetric matrix; skew-symmetric input is dispatched to
/// [`skew_ildl_factor`].
pub fn ildl_factor(store: &SparseSymStore, params: &FactorParams) -> Result<Factorization> {
    if store.kind().is_skew() {
        return skew_ildl_factor(store, params);
    }
    params.validate()?;
    crout::Crout::new(store.clone(), params, true).run()
}

/// As [`ildl_factor`], consuming the store and releasing each column of `A`
/// once it has been eliminated.
pub fn ildl_factor_in_place(store: SparseSymStore, params: &FactorParams) -> Result<Factorization> {
    params.validate()?;
    if store.kind().is_skew() && store.n() % 2 == 1 {
        return Err(IldlError::OddSkewDimension(store.n()));
    }
    crout::Crout::new(store, params, false).run()
}

/// Factors a skew-symmetric matrix using only `[[0, d], [-d, 0]]` pivots.
pub fn skew_ildl_factor(store: &SparseSymStore, params: &FactorParams) -> Result<Factorization> {
    if !store.kind().is_skew() {
        return Err(IldlError::KindMismatch("skew factorization needs a skew-symmetric matrix"));
    }
    params.validate()?;
    if store.n() % 2 == 1 {
        return Err(IldlError::OddSkewDimension(store.n()));
    }
    crout::Crout::new(store.clone(), params, true).run()
}

/// `nnz(L + D + L^T) / nnz(A)`, both sides counted as full matrices; the unit
/// diagonal of `L` is not counted.
pub fn fill_of(l: &UnitLowerFactor, d: &BlockDiag, a: &SparseSymStore) -> f64 {
    let nnz_a = a.nnz_full();
    if nnz_a == 0 {
        return 0.0;
    }
    (2 * l.nnz() + d.structural_nnz()) as f64 / nnz_a as f64
}

#[cfg(test)]
mod tests;
