use serde::{Deserialize, Serialize};

use crate::storage::{SparseSymStore, SymmetryKind};

/// One diagonal block of `D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Block {
    One { d: f64 },
    /// `[[a, b], [b, c]]`
    Two { a: f64, b: f64, c: f64 },
    /// `[[0, d], [-d, 0]]`
    TwoSkew { d: f64 },
}

impl Block {
    #[inline]
    pub fn size(&self) -> usize {
        match self {
            Block::One { .. } => 1,
            _ => 2,
        }
    }

    /// `x <- D_b x` on the block's slice.
    #[inline]
    pub fn apply(&self, x: &mut [f64]) {
        match *self {
            Block::One { d } => x[0] *= d,
            Block::Two { a, b, c } => {
                let (x0, x1) = (x[0], x[1]);
                x[0] = a * x0 + b * x1;
                x[1] = b * x0 + c * x1;
            }
            Block::TwoSkew { d } => {
                let (x0, x1) = (x[0], x[1]);
                x[0] = d * x1;
                x[1] = -d * x0;
            }
        }
    }

    /// `x <- D_b^{-1} x` using the closed-form inverses.
    #[inline]
    pub fn solve(&self, x: &mut [f64]) {
        match *self {
            Block::One { d } => x[0] /= d,
            Block::Two { a, b, c } => {
                let det = a * c - b * b;
                let (x0, x1) = (x[0], x[1]);
                x[0] = (c * x0 - b * x1) / det;
                x[1] = (a * x1 - b * x0) / det;
            }
            Block::TwoSkew { d } => {
                // [[0, d], [-d, 0]]^{-1} = (1/d) [[0, -1], [1, 0]]
                let (x0, x1) = (x[0], x[1]);
                x[0] = -x1 / d;
                x[1] = x0 / d;
            }
        }
    }

    /// Structural nonzeros of the block as a full matrix.
    pub fn structural_nnz(&self) -> usize {
        match *self {
            Block::One { .. } => 1,
            Block::Two { a, b, c } => {
                usize::from(a != 0.0) + usize::from(c != 0.0) + 2 * usize::from(b != 0.0)
            }
            Block::TwoSkew { .. } => 2,
        }
    }

    pub fn is_nonsingular(&self) -> bool {
        match *self {
            Block::One { d } => d != 0.0,
            Block::Two { a, b, c } => a * c - b * b != 0.0,
            Block::TwoSkew { d } => d != 0.0,
        }
    }
}

/// Block diagonal `D` as a sequence of blocks with their start indices.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDiag {
    kind: SymmetryKind,
    blocks: Vec<Block>,
    starts: Vec<usize>,
    n: usize,
}

impl BlockDiag {
    pub fn new(kind: SymmetryKind) -> Self {
        BlockDiag {
            kind,
            blocks: Vec::new(),
            starts: Vec::new(),
            n: 0,
        }
    }

    pub fn from_blocks(kind: SymmetryKind, blocks: Vec<Block>) -> Self {
        let mut d = BlockDiag::new(kind);
        for b in blocks {
            d.push(b);
        }
        d
    }

    pub fn push(&mut self, b: Block) {
        debug_assert!(
            !self.kind.is_skew() || matches!(b, Block::TwoSkew { .. }),
            "skew factors hold only skew 2x2 blocks"
        );
        self.starts.push(self.n);
        self.n += b.size();
        self.blocks.push(b);
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    /// Dimension covered by the blocks.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Block)> {
        self.starts.iter().copied().zip(self.blocks.iter())
    }

    /// `x <- D^{-1} x`
    pub fn solve_in_place(&self, x: &mut [f64]) {
        for (s, b) in self.iter() {
            b.solve(&mut x[s..s + b.size()]);
        }
    }

    /// `x <- D x`
    pub fn apply_in_place(&self, x: &mut [f64]) {
        for (s, b) in self.iter() {
            b.apply(&mut x[s..s + b.size()]);
        }
    }

    pub fn structural_nnz(&self) -> usize {
        self.blocks.iter().map(Block::structural_nnz).sum()
    }

    /// Lower-triangle entries `(row, col, value)`; zeros are omitted.
    pub fn lower_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.n + self.blocks.len());
        for (s, b) in self.iter() {
            match *b {
                Block::One { d } => out.push((s, s, d)),
                Block::Two { a, b, c } => {
                    out.push((s, s, a));
                    out.push((s + 1, s, b));
                    out.push((s + 1, s + 1, c));
                }
                Block::TwoSkew { d } => out.push((s + 1, s, -d)),
            }
        }
        out.retain(|e| e.2 != 0.0);
        out
    }

    pub fn to_store(&self) -> SparseSymStore {
        SparseSymStore::from_triplets(self.n, self.kind, self.lower_triplets())
            .expect("block entries are distinct and in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_block_inverse() {
        let b = Block::TwoSkew { d: 2.0 };
        let mut x = [2.0, -2.0];
        b.solve(&mut x);
        // [[0, 2], [-2, 0]] (1, 1) = (2, -2)
        assert_eq!(x, [1.0, 1.0]);
        b.apply(&mut x);
        assert_eq!(x, [2.0, -2.0]);
    }

    #[test]
    fn symmetric_block_inverse_round_trip() {
        let b = Block::Two { a: 1.0, b: 4.0, c: -2.0 };
        let mut x = [0.3, -1.7];
        b.apply(&mut x);
        b.solve(&mut x);
        assert!((x[0] - 0.3).abs() < 1e-15 && (x[1] + 1.7).abs() < 1e-15);
    }

    #[test]
    fn structural_counts() {
        let d = BlockDiag::from_blocks(
            SymmetryKind::Symmetric,
            vec![Block::One { d: 3.0 }, Block::Two { a: 0.0, b: 1.0, c: 0.0 }, Block::Two { a: 1.0, b: 2.0, c: 1.0 }],
        );
        assert_eq!(d.n(), 5);
        assert_eq!(d.starts(), &[0, 1, 3]);
        assert_eq!(d.structural_nnz(), 1 + 2 + 4);
        assert_eq!(d.lower_triplets().len(), 1 + 1 + 3);
    }
}
