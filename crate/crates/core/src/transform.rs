//! Turns `L D L^T` into a positive definite preconditioner `M = L^ L^T`
//! with `L^ = L B`, where `B` is block diagonal and `D = B S B^T` for a
//! signature `S` (entries `+-1`, or `[[0, +-1], [-+1, 0]]` blocks in the skew
//! case). Then `L^ S L^T = L D L^T`, and `M = L |D| L^T`.

use crate::error::{IldlError, Result};
use crate::factor::{Block, BlockDiag, LowerCsc, UnitLowerFactor};
use crate::preprocess::ScalingDiag;
use crate::solvers::{Frame, Preconditioner};
use crate::storage::{Permutation, SymmetryKind};

/// The block of `B` and `S` belonging to one block of `D`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpdBlock {
    /// 1x1: `B = sqrt|d|`, `S = sign(d)`.
    Scalar { scale: f64, sign: f64 },
    /// Symmetric 2x2: `B = Q sqrt|Lambda|` (row major), `S = diag(sign)`.
    Mixed { b: [[f64; 2]; 2], signs: [f64; 2] },
    /// Skew 2x2: `B = sqrt|d| I`, `S = [[0, sign], [-sign, 0]]`.
    SkewScaled { scale: f64, sign: f64 },
}

impl SpdBlock {
    pub fn size(&self) -> usize {
        match self {
            SpdBlock::Scalar { .. } => 1,
            _ => 2,
        }
    }

    /// `B` as a dense 2x2 (only `[0][0]` is meaningful for 1x1 blocks).
    pub fn b_matrix(&self) -> [[f64; 2]; 2] {
        match *self {
            SpdBlock::Scalar { scale, .. } => [[scale, 0.0], [0.0, 0.0]],
            SpdBlock::Mixed { b, .. } => b,
            SpdBlock::SkewScaled { scale, .. } => [[scale, 0.0], [0.0, scale]],
        }
    }

    /// `S` as a dense 2x2 (only `[0][0]` is meaningful for 1x1 blocks).
    pub fn signature(&self) -> [[f64; 2]; 2] {
        match *self {
            SpdBlock::Scalar { sign, .. } => [[sign, 0.0], [0.0, 0.0]],
            SpdBlock::Mixed { signs, .. } => [[signs[0], 0.0], [0.0, signs[1]]],
            SpdBlock::SkewScaled { sign, .. } => [[0.0, sign], [-sign, 0.0]],
        }
    }

    /// `x <- (B B^T)^{-1} x`
    fn solve_bbt(&self, x: &mut [f64]) {
        match *self {
            SpdBlock::Scalar { scale, .. } => x[0] /= scale * scale,
            SpdBlock::SkewScaled { scale, .. } => {
                let s2 = scale * scale;
                x[0] /= s2;
                x[1] /= s2;
            }
            SpdBlock::Mixed { b, .. } => {
                // B^{-1} then B^{-T}.
                let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
                let (x0, x1) = (x[0], x[1]);
                let y0 = (b[1][1] * x0 - b[0][1] * x1) / det;
                let y1 = (b[0][0] * x1 - b[1][0] * x0) / det;
                x[0] = (b[1][1] * y0 - b[1][0] * y1) / det;
                x[1] = (b[0][0] * y1 - b[0][1] * y0) / det;
            }
        }
    }
}

/// Closed-form eigendecomposition of `[[a, b], [b, c]]`: returns `Q` (row
/// major, columns are eigenvectors) and the eigenvalues.
pub fn sym_eig2(a: f64, b: f64, c: f64) -> ([[f64; 2]; 2], [f64; 2]) {
    let theta = 0.5 * (2.0 * b).atan2(a - c);
    let (s, co) = theta.sin_cos();
    let l1 = a * co * co + 2.0 * b * s * co + c * s * s;
    let l2 = a * s * s - 2.0 * b * s * co + c * co * co;
    ([[co, -s], [s, co]], [l1, l2])
}

#[derive(Clone, Debug)]
pub struct SpdFactor {
    l: LowerCsc,
    kind: SymmetryKind,
    blocks: Vec<SpdBlock>,
    starts: Vec<usize>,
}

/// Builds `L^ = L B` and the signature from the factors of `L D L^T`.
pub fn spd_transform(l: &UnitLowerFactor, d: &BlockDiag) -> Result<SpdFactor> {
    if l.n() != d.n() {
        return Err(IldlError::DimensionMismatch { expected: l.n(), got: d.n() });
    }
    let mut blocks = Vec::with_capacity(d.blocks().len());
    for b in d.blocks() {
        let sb = match *b {
            Block::One { d } => {
                if d == 0.0 {
                    return Err(IldlError::InvalidParameter("zero 1x1 block in D".into()));
                }
                SpdBlock::Scalar { scale: d.abs().sqrt(), sign: d.signum() }
            }
            Block::Two { a, b, c } => {
                let (q, lam) = sym_eig2(a, b, c);
                if lam[0] == 0.0 || lam[1] == 0.0 {
                    return Err(IldlError::InvalidParameter("singular 2x2 block in D".into()));
                }
                let r = [lam[0].abs().sqrt(), lam[1].abs().sqrt()];
                SpdBlock::Mixed {
                    b: [[q[0][0] * r[0], q[0][1] * r[1]], [q[1][0] * r[0], q[1][1] * r[1]]],
                    signs: [lam[0].signum(), lam[1].signum()],
                }
            }
            Block::TwoSkew { d } => {
                if d == 0.0 {
                    return Err(IldlError::InvalidParameter("zero skew block in D".into()));
                }
                SpdBlock::SkewScaled { scale: d.abs().sqrt(), sign: d.signum() }
            }
        };
        blocks.push(sb);
    }
    Ok(SpdFactor {
        l: l.to_csc(),
        kind: d.kind(),
        blocks,
        starts: d.starts().to_vec(),
    })
}

impl SpdFactor {
    pub fn n(&self) -> usize {
        self.l.n()
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn blocks(&self) -> &[SpdBlock] {
        &self.blocks
    }

    /// Start row of every block.
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// `r <- (L^ L^T)^{-1} r = L^{-T} (B B^T)^{-1} L^{-1} r`
    pub fn solve_in_place(&self, r: &mut [f64]) {
        self.l.solve_in_place(r);
        for (&s, b) in self.starts.iter().zip(&self.blocks) {
            b.solve_bbt(&mut r[s..s + b.size()]);
        }
        self.l.solve_transpose_in_place(r);
    }

    /// Entries of `L^ = L B` (lower Hessenberg). Meant for verification.
    pub fn lhat_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (&s, b) in self.starts.iter().zip(&self.blocks) {
            let bm = b.b_matrix();
            let size = b.size();
            // Column s + t of L^ = sum_u L(:, s + u) B[u][t].
            let mut cols: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); size];
            for u in 0..size {
                let mut entries: Vec<(usize, f64)> = vec![(s + u, 1.0)];
                let (rows, vals) = self.l.column(s + u);
                entries.extend(rows.iter().copied().zip(vals.iter().copied()));
                for (t, col) in cols.iter_mut().enumerate() {
                    let f = bm[u][t];
                    if f == 0.0 {
                        continue;
                    }
                    for &(i, v) in &entries {
                        *col.entry(i).or_insert(0.0) += v * f;
                    }
                }
            }
            for (t, col) in cols.into_iter().enumerate() {
                out.extend(col.into_iter().filter(|e| e.1 != 0.0).map(|(i, v)| (i, s + t, v)));
            }
        }
        out
    }

    /// Nonzero entries of the signature matrix `S`.
    pub fn signature_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (&s, b) in self.starts.iter().zip(&self.blocks) {
            let m = b.signature();
            for (u, row) in m.iter().enumerate().take(b.size()) {
                for (t, &v) in row.iter().enumerate().take(b.size()) {
                    if v != 0.0 {
                        out.push((s + u, s + t, v));
                    }
                }
            }
        }
        out
    }
}

/// `S P^T (L^ L^T)^{-1} P S` acting on vectors of the original system.
#[derive(Clone, Debug)]
pub struct SpdPreconditioner {
    factor: SpdFactor,
    frame: Frame,
}

impl SpdPreconditioner {
    pub fn new(factor: SpdFactor, perm: Permutation, scaling: ScalingDiag) -> Result<Self> {
        let frame = Frame::new(perm, scaling, factor.n())?;
        Ok(SpdPreconditioner { factor, frame })
    }

    pub fn factor(&self) -> &SpdFactor {
        &self.factor
    }
}

impl Preconditioner for SpdPreconditioner {
    fn n(&self) -> usize {
        self.factor.n()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        self.frame.apply(r, z, |t| self.factor.solve_in_place(t));
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_blocks() {
        let d = BlockDiag::from_blocks(SymmetryKind::Symmetric, vec![Block::One { d: 4.0 }, Block::One { d: -9.0 }]);
        let f = spd_transform(&UnitLowerFactor::identity(2), &d).unwrap();
        assert_eq!(f.blocks()[0], SpdBlock::Scalar { scale: 2.0, sign: 1.0 });
        assert_eq!(f.blocks()[1], SpdBlock::Scalar { scale: 3.0, sign: -1.0 });
        let mut r = [4.0, 9.0];
        f.solve_in_place(&mut r);
        assert_eq!(r, [1.0, 1.0]);
    }

    #[test]
    fn anti_diagonal_block() {
        let (q, lam) = sym_eig2(0.0, 1.0, 0.0);
        assert!((lam[0] - 1.0).abs() < 1e-15 && (lam[1] + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // Eigenvector of +1 is (1, 1)/sqrt2, of -1 is (1, -1)/sqrt2 up to sign.
        assert!((q[0][0] - h).abs() < 1e-15 && (q[1][0] - h).abs() < 1e-15);
        assert!((q[0][1].abs() - h).abs() < 1e-15 && (q[0][1] + q[1][1]).abs() < 1e-15);
        let d = BlockDiag::from_blocks(SymmetryKind::Symmetric, vec![Block::Two { a: 0.0, b: 1.0, c: 0.0 }]);
        let f = spd_transform(&UnitLowerFactor::identity(2), &d).unwrap();
        // |Lambda|^(1/2) = I, so B = Q.
        assert_eq!(f.blocks()[0], SpdBlock::Mixed { b: q, signs: [1.0, -1.0] });
    }

    #[test]
    fn eig2_reconstructs() {
        for &(a, b, c) in &[(1.0, 4.0, 1.0), (-3.0, 0.5, 2.0), (0.0, -2.0, 5.0), (1e-8, 3.0, -1e8)] {
            let (q, l) = sym_eig2(a, b, c);
            let m = |i: usize, j: usize| q[i][0] * l[0] * q[j][0] + q[i][1] * l[1] * q[j][1];
            let scale = a.abs().max(b.abs()).max(c.abs());
            assert!((m(0, 0) - a).abs() <= 1e-14 * scale);
            assert!((m(0, 1) - b).abs() <= 1e-14 * scale);
            assert!((m(1, 1) - c).abs() <= 1e-14 * scale);
            assert!((q[0][0] * q[0][1] + q[1][0] * q[1][1]).abs() < 1e-15);
        }
    }

    #[test]
    fn skew_blocks() {
        let d = BlockDiag::from_blocks(SymmetryKind::Skew, vec![Block::TwoSkew { d: 4.0 }, Block::TwoSkew { d: -1.0 }]);
        let f = spd_transform(&UnitLowerFactor::identity(4), &d).unwrap();
        assert_eq!(f.blocks()[0], SpdBlock::SkewScaled { scale: 2.0, sign: 1.0 });
        assert_eq!(f.blocks()[0].signature(), [[0.0, 1.0], [-1.0, 0.0]]);
        assert_eq!(f.blocks()[1], SpdBlock::SkewScaled { scale: 1.0, sign: -1.0 });
        assert_eq!(f.blocks()[1].signature(), [[0.0, -1.0], [1.0, 0.0]]);
    }

    #[test]
    fn identity_factor_is_identity_map() {
        let d = BlockDiag::from_blocks(SymmetryKind::Symmetric, vec![Block::One { d: 1.0 }; 3]);
        let f = spd_transform(&UnitLowerFactor::identity(3), &d).unwrap();
        let mut r = [1.5, -2.0, 3.0];
        f.solve_in_place(&mut r);
        assert_eq!(r, [1.5, -2.0, 3.0]);
    }

    #[test]
    fn rejects_singular_blocks() {
        let d = BlockDiag::from_blocks(SymmetryKind::Symmetric, vec![Block::Two { a: 1.0, b: 1.0, c: 1.0 }]);
        assert!(spd_transform(&UnitLowerFactor::identity(2), &d).is_err());
    }
}
