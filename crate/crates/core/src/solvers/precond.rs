use super::Preconditioner;
use crate::error::{IldlError, Result};
use crate::factor::{BlockDiag, LowerCsc, UnitLowerFactor};
use crate::preprocess::ScalingDiag;
use crate::storage::Permutation;

/// Maps a residual of the original system into the factored frame and back:
/// `z = S P^T f(P S r)`.
#[derive(Clone, Debug)]
pub struct Frame {
    perm: Permutation,
    scaling: Vec<f64>,
}

impl Frame {
    pub fn new(perm: Permutation, scaling: ScalingDiag, n: usize) -> Result<Self> {
        if perm.len() != n {
            return Err(IldlError::DimensionMismatch { expected: n, got: perm.len() });
        }
        if scaling.len() != n {
            return Err(IldlError::DimensionMismatch { expected: n, got: scaling.len() });
        }
        Ok(Frame {
            perm,
            scaling: scaling.values().to_vec(),
        })
    }

    pub fn apply(&self, r: &[f64], z: &mut [f64], f: impl FnOnce(&mut [f64])) {
        let fwd = self.perm.forward();
        let mut t: Vec<f64> = fwd.iter().map(|&o| r[o] * self.scaling[o]).collect();
        f(&mut t);
        for (i, &o) in fwd.iter().enumerate() {
            z[o] = t[i] * self.scaling[o];
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityPreconditioner {
    n: usize,
}

impl IdentityPreconditioner {
    pub fn new(n: usize) -> Self {
        IdentityPreconditioner { n }
    }
}

impl Preconditioner for IdentityPreconditioner {
    fn n(&self) -> usize {
        self.n
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }

}

/// `S P^T L^{-T} D^{-1} L^{-1} P S`, the incomplete factorization used
/// directly as an (indefinite) preconditioner for the original matrix.
#[derive(Clone, Debug)]
pub struct LdlPreconditioner {
    l: LowerCsc,
    d: BlockDiag,
    frame: Frame,
}

impl LdlPreconditioner {
    /// `perm` is the total permutation (reordering followed by pivoting) and
    /// `scaling` the equilibration of the original matrix.
    pub fn new(l: &UnitLowerFactor, d: BlockDiag, perm: Permutation, scaling: ScalingDiag) -> Result<Self> {
        if d.n() != l.n() {
            return Err(IldlError::DimensionMismatch { expected: l.n(), got: d.n() });
        }
        let frame = Frame::new(perm, scaling, l.n())?;
        Ok(LdlPreconditioner { l: l.to_csc(), d, frame })
    }

    /// `x <- L^{-T} D^{-1} L^{-1} x` in the factored frame.
    pub fn solve_factored(&self, x: &mut [f64]) {
        self.l.solve_in_place(x);
        self.d.solve_in_place(x);
        self.l.solve_transpose_in_place(x);
    }
}

impl Preconditioner for LdlPreconditioner {
    fn n(&self) -> usize {
        self.l.n()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        self.frame.apply(r, z, |t| self.solve_factored(t));
    }
}
