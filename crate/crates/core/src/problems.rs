//! Model problems: the 2D Helmholtz operator, the skew part of a 3D
//! convection-diffusion operator with its analytic spectrum, and seeded
//! random matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{IldlError, Result};
use crate::storage::{SparseSymStore, SymmetryKind};

/// Uniform grid with `m` interior points per dimension on the unit cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub m: usize,
    pub dims: usize,
}

impl GridSpec {
    pub fn new(m: usize, dims: usize) -> Result<Self> {
        if m < 2 {
            return Err(IldlError::InvalidParameter(format!("grid needs m >= 2, got {m}")));
        }
        if !(2..=3).contains(&dims) {
            return Err(IldlError::InvalidParameter(format!("grid dimension must be 2 or 3, got {dims}")));
        }
        Ok(GridSpec { m, dims })
    }

    /// Mesh width `1 / (m + 1)`.
    pub fn h(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }

    pub fn n(&self) -> usize {
        self.m.pow(self.dims as u32)
    }
}

/// Mesh Peclet numbers of the three convective coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peclet {
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Peclet {
    pub fn new(beta: f64, gamma: f64, delta: f64) -> Self {
        Peclet { beta, gamma, delta }
    }

    /// From convective coefficients `(sigma, tau, mu)`: `beta = sigma h / 2`
    /// and so on.
    pub fn from_coefficients(grid: &GridSpec, sigma: f64, tau: f64, mu: f64) -> Self {
        let h2 = grid.h() / 2.0;
        Peclet::new(sigma * h2, tau * h2, mu * h2)
    }
}

/// Five-point discretisation of `-Laplace(u) - alpha u` on the `m x m`
/// interior grid with `alpha = c / h^2`, scaled by `h^2`: diagonal `4 - c`,
/// neighbours `-1`, x-fastest numbering.
pub fn helmholtz_matrix(m: usize, c: f64) -> Result<SparseSymStore> {
    let grid = GridSpec::new(m, 2)?;
    let mut t = Vec::with_capacity(3 * grid.n());
    for y in 0..m {
        for x in 0..m {
            let v = y * m + x;
            t.push((v, v, 4.0 - c));
            if x + 1 < m {
                t.push((v + 1, v, -1.0));
            }
            if y + 1 < m {
                t.push((v + m, v, -1.0));
            }
        }
    }
    SparseSymStore::from_triplets(grid.n(), SymmetryKind::Symmetric, t)
}

/// Skew-symmetric part of the centred convection-diffusion operator on the
/// `m^3` interior grid (scaled by `h^2`): `A(v, v + e) = p` and
/// `A(v + e, v) = -p` for the Peclet number `p` of axis `e`.
pub fn convdiff_skew_matrix(m: usize, p: Peclet) -> Result<SparseSymStore> {
    let grid = GridSpec::new(m, 3)?;
    let mut t = Vec::with_capacity(3 * grid.n());
    for z in 0..m {
        for y in 0..m {
            for x in 0..m {
                let v = (z * m + y) * m + x;
                if x + 1 < m {
                    t.push((v + 1, v, -p.beta));
                }
                if y + 1 < m {
                    t.push((v + m, v, -p.gamma));
                }
                if z + 1 < m {
                    t.push((v + m * m, v, -p.delta));
                }
            }
        }
    }
    SparseSymStore::from_triplets(grid.n(), SymmetryKind::Skew, t)
}

/// Imaginary parts `2 (beta cos(j pi h) + gamma cos(k pi h) + delta cos(l pi h))`
/// of the eigenvalues of [`convdiff_skew_matrix`], `1 <= j, k, l <= m`.
pub fn skew_spectrum(m: usize, p: Peclet) -> Vec<f64> {
    let h = 1.0 / (m as f64 + 1.0);
    let cos: Vec<f64> = (1..=m).map(|j| (j as f64 * std::f64::consts::PI * h).cos()).collect();
    let mut out = Vec::with_capacity(m * m * m);
    for cl in &cos {
        for ck in &cos {
            for cj in &cos {
                out.push(2.0 * (p.beta * cj + p.gamma * ck + p.delta * cl));
            }
        }
    }
    out
}

/// Dense `(G + G^T) / 2` with standard normal `G`.
pub fn random_symmetric(n: usize, seed: u64) -> SparseSymStore {
    random_sparse(n, 1.0, SymmetryKind::Symmetric, seed)
}

/// Dense `(G - G^T) / 2` with standard normal `G`.
pub fn random_skew(n: usize, seed: u64) -> SparseSymStore {
    random_sparse(n, 1.0, SymmetryKind::Skew, seed)
}

/// Random (skew-)symmetric matrix: each strictly lower position is kept
/// with probability `density`; kept entries are `(g1 +- g2) / 2` for standard
/// normal `g1`, `g2`. Symmetric matrices always get a full diagonal and
/// skew ones the couplings `(2k + 1, 2k)`, so neither is structurally
/// singular (for even `n` in the skew case).
pub fn random_sparse(n: usize, density: f64, kind: SymmetryKind, seed: u64) -> SparseSymStore {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for j in 0..n {
        for i in j..n {
            if i == j {
                if !kind.is_skew() {
                    let g: f64 = rng.sample(StandardNormal);
                    t.push((i, i, g));
                }
                continue;
            }
            let forced = kind.is_skew() && j % 2 == 0 && i == j + 1;
            if !forced && density < 1.0 && !rng.random_bool(density) {
                continue;
            }
            let g1: f64 = rng.sample(StandardNormal);
            let g2: f64 = rng.sample(StandardNormal);
            t.push((i, j, (g1 + kind.mirror(g2)) / 2.0));
        }
    }
    SparseSymStore::from_triplets(n, kind, t).expect("generated entries are unique")
}

/// `b = A 1`, the right-hand side whose solution is all ones.
pub fn ones_rhs(a: &SparseSymStore) -> Vec<f64> {
    let mut b = vec![0.0; a.n()];
    a.matvec(&vec![1.0; a.n()], &mut b);
    b
}
