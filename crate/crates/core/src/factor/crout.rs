//! Crout-ordered elimination: column `k` of `L` is formed from column `k` of
//! `A` and the delayed updates of all earlier blocks, so the trailing
//! submatrix is never stored.

use super::drop::{apply_drop_rules, column_cap};
use super::pivot::{self, entry, Column, PivotDecision, PivotRecord, PivotRule};
use super::{Block, BlockDiag, FactorParams, FactorStats, Factorization, PivotKind, UnitLowerFactor};
use crate::error::{IldlError, Result};
use crate::storage::{Permutation, SparseSymStore, SymmetryKind};

pub(crate) struct Crout {
    n: usize,
    kind: SymmetryKind,
    a: SparseSymStore,
    l: SparseSymStore,
    d: BlockDiag,
    /// Block index of every finished column.
    block_of: Vec<usize>,
    perm: Permutation,
    keep_dead: bool,
    params: FactorParams,
    cap: Option<usize>,
    shift: f64,
    k: usize,
    // Scatter buffers.
    work: Vec<f64>,
    work2: Vec<f64>,
    mark: Vec<bool>,
    pattern: Vec<usize>,
    block_stamp: Vec<usize>,
    stamp: usize,
    /// Updated columns computed during the current step.
    cache: Vec<(usize, Column)>,
    stats: FactorStats,
    records: Vec<PivotRecord>,
}

impl Crout {
    pub(crate) fn new(a: SparseSymStore, params: &FactorParams, keep_dead: bool) -> Self {
        let n = a.n();
        let kind = a.kind();
        let cap = column_cap(params.fill_factor, a.nnz_full(), n);
        let shift = params
            .static_pivot_shift
            .unwrap_or_else(|| f64::EPSILON.sqrt() * a.max_abs().max(f64::MIN_POSITIVE));
        Crout {
            n,
            kind,
            a,
            l: SparseSymStore::new(n, SymmetryKind::Symmetric),
            d: BlockDiag::new(kind),
            block_of: vec![usize::MAX; n],
            perm: Permutation::identity(n),
            keep_dead,
            params: params.clone(),
            cap,
            shift,
            k: 0,
            work: vec![0.0; n],
            work2: vec![0.0; n],
            mark: vec![false; n],
            pattern: Vec::new(),
            block_stamp: Vec::new(),
            stamp: 0,
            cache: Vec::new(),
            stats: FactorStats::default(),
            records: Vec::new(),
        }
    }

    pub(crate) fn run(mut self) -> Result<Factorization> {
        while self.k < self.n {
            self.step()?;
        }
        self.stats.nnz_l = self.l.nnz_stored();
        Ok(Factorization {
            l: UnitLowerFactor::from_store(self.l),
            d: self.d,
            perm: self.perm,
            stats: self.stats,
            pivots: self.records,
        })
    }

    fn step(&mut self) -> Result<()> {
        let k = self.k;
        self.cache.clear();
        let skew = self.kind.is_skew();
        let n = self.n;
        let pivot_kind = self.params.pivot;
        let (decision, record) = {
            let mut fetch = |c: usize| self.column(c);
            match (skew, pivot_kind) {
                (false, PivotKind::Rook) => pivot::rook_pivot(k, n, &mut fetch),
                (false, PivotKind::BunchKaufman) => pivot::bk_pivot(k, &mut fetch),
                (true, PivotKind::Rook) => pivot::skew_rook_pivot(k, n, &mut fetch),
                (true, PivotKind::BunchKaufman) => pivot::skew_bunch_pivot(k, &mut fetch),
                (_, PivotKind::None) => pivot::unpivoted(k, skew, &mut fetch),
            }
        };
        let PivotDecision { size, swaps, .. } = decision;
        for &(p, q) in &swaps {
            self.swap(p, q)?;
        }
        let col_k = self.column(k);
        let mut static_pivot = false;
        if size == 1 {
            let mut d = entry(&col_k, k);
            if d == 0.0 {
                d = self.shift;
                static_pivot = true;
            }
            let mut lcol: Column = col_k.iter().filter(|e| e.0 > k).map(|&(i, x)| (i, x / d)).collect();
            check_finite(&lcol)?;
            self.drop_and_store(k, &mut lcol);
            self.finish_block(Block::One { d }, k);
            self.stats.blocks_1x1 += 1;
        } else {
            let col_k1 = self.column(k + 1);
            let block = if skew {
                let v = entry(&col_k, k + 1);
                if v == 0.0 {
                    static_pivot = true;
                    Block::TwoSkew { d: self.shift }
                } else {
                    Block::TwoSkew { d: -v }
                }
            } else {
                let a = entry(&col_k, k);
                let b = entry(&col_k, k + 1);
                let c = entry(&col_k1, k + 1);
                if a * c - b * b == 0.0 {
                    return Err(IldlError::NonFinite("singular 2x2 pivot block"));
                }
                Block::Two { a, b, c }
            };
            let (mut l0, mut l1) = self.two_column_multipliers(k, &col_k, &col_k1, &block);
            check_finite(&l0)?;
            check_finite(&l1)?;
            self.drop_and_store(k, &mut l0);
            self.drop_and_store(k + 1, &mut l1);
            self.finish_block(block, k);
            self.stats.blocks_2x2 += 1;
        }
        if static_pivot {
            self.stats.static_pivots += 1;
        }
        if self.params.record_pivots {
            let mut record = record;
            if static_pivot {
                record.rule = PivotRule::Static;
            }
            self.records.push(record);
        }
        for c in k..k + size {
            self.a.advance_bi_index(c);
            if !self.keep_dead {
                self.a.free_column(c);
            }
            self.l.advance_columns(c);
        }
        self.k += size;
        Ok(())
    }

    fn finish_block(&mut self, block: Block, k: usize) {
        let id = self.d.blocks().len();
        for c in k..k + block.size() {
            self.block_of[c] = id;
        }
        self.d.push(block);
        self.block_stamp.push(0);
    }

    /// `[l0, l1] = [x, y] D^{-1}` row by row for rows below the block.
    fn two_column_multipliers(&mut self, k: usize, col_k: &Column, col_k1: &Column, block: &Block) -> (Column, Column) {
        self.pattern.clear();
        for (col, buf) in [(col_k, 0), (col_k1, 1)] {
            for &(i, v) in col {
                if i <= k + 1 {
                    continue;
                }
                if !self.mark[i] {
                    self.mark[i] = true;
                    self.pattern.push(i);
                    self.work[i] = 0.0;
                    self.work2[i] = 0.0;
                }
                if buf == 0 {
                    self.work[i] = v;
                } else {
                    self.work2[i] = v;
                }
            }
        }
        let mut l0 = Vec::with_capacity(self.pattern.len());
        let mut l1 = Vec::with_capacity(self.pattern.len());
        for &i in &self.pattern {
            self.mark[i] = false;
            let mut z = [self.work[i], self.work2[i]];
            // Row vector times D^{-1}: solve with D^T, which is D for the
            // symmetric block and -D for the skew one.
            block.solve(&mut z);
            if let Block::TwoSkew { .. } = block {
                z = [-z[0], -z[1]];
            }
            if z[0] != 0.0 {
                l0.push((i, z[0]));
            }
            if z[1] != 0.0 {
                l1.push((i, z[1]));
            }
        }
        (l0, l1)
    }

    fn drop_and_store(&mut self, k: usize, lcol: &mut Column) {
        let norm = self.params.drop_norm.of(lcol);
        self.stats.dropped += apply_drop_rules(lcol, self.params.drop_tol, self.cap, norm);
        for &(i, v) in lcol.iter() {
            self.l.push(i, k, v);
        }
    }

    /// Symmetric exchange of positions `p` and `q` in `A`, `L`, `P` and the
    /// cached columns.
    fn swap(&mut self, p: usize, q: usize) -> Result<()> {
        if p == q {
            return Ok(());
        }
        self.a.swap_symmetric_impl(p, q, self.keep_dead)?;
        self.l.swap_factor_rows(p, q);
        self.perm.swap(p, q);
        let sigma = |x: usize| {
            if x == p {
                q
            } else if x == q {
                p
            } else {
                x
            }
        };
        for (c, col) in &mut self.cache {
            *c = sigma(*c);
            for e in col.iter_mut() {
                e.0 = sigma(e.0);
            }
        }
        Ok(())
    }

    /// Column `c >= k` of the current Schur complement:
    /// `A(k:n, c) - sum_b L(k:n, b) D_b L(c, b)^T`.
    fn column(&mut self, c: usize) -> Column {
        if let Some((_, col)) = self.cache.iter().find(|e| e.0 == c) {
            return col.clone();
        }
        let k = self.k;
        let kind = self.kind;
        self.pattern.clear();

        // A(c:n, c) from the column, A(k:c-1, c) mirrored from row c.
        let (rows, vals) = self.a.column(c);
        for (&i, &v) in rows.iter().zip(vals) {
            scatter(&mut self.work, &mut self.mark, &mut self.pattern, i, v);
        }
        for idx in 0..self.a.active_row(c).len() {
            let j = self.a.active_row(c)[idx];
            if j == c {
                continue;
            }
            let v = self.a.active_value(c, j).expect("row pattern mirrors a column entry");
            scatter(&mut self.work, &mut self.mark, &mut self.pattern, j, kind.mirror(v));
        }

        // Delayed updates from every block with a nonzero in row c of L.
        self.stamp += 1;
        for idx in 0..self.l.row_pattern(c).len() {
            let j = self.l.row_pattern(c)[idx];
            let b = self.block_of[j];
            if self.block_stamp[b] == self.stamp {
                continue;
            }
            self.block_stamp[b] = self.stamp;
            let s = self.d.starts()[b];
            let block = self.d.blocks()[b];
            let mut u = [0.0; 2];
            for (t, ut) in u.iter_mut().enumerate().take(block.size()) {
                *ut = self.l.active_value(c, s + t).unwrap_or(0.0);
            }
            block.apply(&mut u[..block.size()]);
            for (t, &ut) in u.iter().enumerate().take(block.size()) {
                if ut == 0.0 {
                    continue;
                }
                let (rows, vals) = self.l.column(s + t);
                let first = self.l.col_first()[s + t];
                for (&i, &v) in rows[first..].iter().zip(&vals[first..]) {
                    scatter(&mut self.work, &mut self.mark, &mut self.pattern, i, -v * ut);
                }
            }
        }

        let mut col = Vec::with_capacity(self.pattern.len());
        for &i in &self.pattern {
            self.mark[i] = false;
            debug_assert!(i >= k);
            let v = self.work[i];
            if v != 0.0 {
                col.push((i, v));
            }
        }
        self.cache.push((c, col.clone()));
        col
    }
}

#[inline]
fn scatter(work: &mut [f64], mark: &mut [bool], pattern: &mut Vec<usize>, i: usize, v: f64) {
    if !mark[i] {
        mark[i] = true;
        pattern.push(i);
        work[i] = v;
    } else {
        work[i] += v;
    }
}

fn check_finite(col: &Column) -> Result<()> {
    if col.iter().all(|e| e.1.is_finite()) {
        Ok(())
    } else {
        Err(IldlError::NonFinite("factorization"))
    }
}
