use crate::error::{IldlError, Result};

/// A symmetric permutation `P`, stored as a pair of index maps.
///
/// `forward[new] = old` and `inverse[old] = new`, so `(P A P^T)[i][j]` equals
/// `A[forward[i]][forward[j]]` and `(P x)[i] = x[forward[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            forward: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn from_forward(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (new, &old) in forward.iter().enumerate() {
            if old >= n || inverse[old] != usize::MAX {
                return Err(IldlError::InvalidParameter(format!(
                    "not a permutation: index {old} at position {new}"
                )));
            }
            inverse[old] = new;
        }
        Ok(Permutation { forward, inverse })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    #[inline]
    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &f)| i == f)
    }

    /// Exchanges positions `p` and `q`.
    pub fn swap(&mut self, p: usize, q: usize) {
        self.forward.swap(p, q);
        self.inverse[self.forward[p]] = p;
        self.inverse[self.forward[q]] = q;
    }

    /// The permutation obtained by applying `self` first and `then` to the
    /// already permuted matrix.
    pub fn then(&self, then: &Permutation) -> Permutation {
        let forward: Vec<usize> = then.forward.iter().map(|&i| self.forward[i]).collect();
        let mut inverse = vec![0; forward.len()];
        for (new, &old) in forward.iter().enumerate() {
            inverse[old] = new;
        }
        Permutation { forward, inverse }
    }

    /// `P x`
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (o, &f) in out.iter_mut().zip(&self.forward) {
            *o = x[f];
        }
    }

    /// `P^T y`
    pub fn apply_transpose(&self, y: &[f64], out: &mut [f64]) {
        for (i, &f) in self.forward.iter().enumerate() {
            out[f] = y[i];
        }
    }
}
