use crate::error::{IldlError, Result};
use crate::storage::SparseSymStore;

pub const RUIZ_DEFAULT_EPSILON: f64 = 1e-4;
pub const RUIZ_DEFAULT_MAX_SWEEPS: usize = 100;

/// Diagonal scaling `S`; the scaled matrix is `S A S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingDiag {
    d: Vec<f64>,
}

impl ScalingDiag {
    pub fn identity(n: usize) -> Self {
        ScalingDiag { d: vec![1.0; n] }
    }

    pub fn from_vec(d: Vec<f64>) -> Result<Self> {
        if let Some(i) = d.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(IldlError::InvalidParameter(format!(
                "scale factor {i} is {} (must be finite and positive)",
                d[i]
            )));
        }
        Ok(ScalingDiag { d })
    }

    pub fn values(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
}

/// Replaces `A` by `S A S` in place.
pub fn apply_scaling(store: &mut SparseSymStore, s: &ScalingDiag) {
    let d = &s.d;
    store.map_values(|i, j, v| v * d[i] * d[j]);
}

/// Undoes [`apply_scaling`].
pub fn unapply_scaling(store: &mut SparseSymStore, s: &ScalingDiag) {
    let d = &s.d;
    store.map_values(|i, j, v| v / d[i] / d[j]);
}

/// Bunch's one-pass symmetric equilibration in the max norm.
///
/// With `T` the magnitudes of the lower triangle,
/// `D_ii = 1 / max(sqrt(T_ii), max_{j<i} D_jj T_ij)`, evaluated left to
/// right. A row whose lower part is empty or zero keeps `D_ii = 1`.
pub fn bunch_equilibrate(store: &SparseSymStore) -> ScalingDiag {
    let n = store.n();
    let mut d = vec![1.0; n];
    // row_max[i] accumulates max_{j<i} D_jj T_ij as columns are finalised.
    let mut row_max = vec![0.0f64; n];
    for j in 0..n {
        let (rows, vals) = store.column(j);
        let diag = rows
            .iter()
            .zip(vals)
            .find(|(&i, _)| i == j)
            .map_or(0.0, |(_, v)| v.abs());
        let m = diag.sqrt().max(row_max[j]);
        d[j] = if m > 0.0 { 1.0 / m } else { 1.0 };
        for (&i, v) in rows.iter().zip(vals) {
            if i > j {
                row_max[i] = row_max[i].max(d[j] * v.abs());
            }
        }
    }
    ScalingDiag { d }
}

#[derive(Clone, Debug)]
pub struct RuizOutcome {
    pub scaling: ScalingDiag,
    pub converged: bool,
    pub sweeps: usize,
    /// `max_i | ||row i||_inf - 1 |` of the scaled matrix after the last sweep.
    pub deviation: f64,
}

/// Iterative max-norm equilibration that rescales one row and column at a
/// time.
///
/// For index `i` the current row norm `r` of the scaled matrix gives the
/// multiplier `1 / sqrt(r)`, applied to row and column `i` together. Rows
/// and columns of a (skew-)symmetric matrix have equal norms, so one
/// multiplier per index serves both sides and the result stays exactly
/// (skew-)symmetric. Convergence is checked after every full sweep.
pub fn ruiz_equilibrate(store: &SparseSymStore, epsilon: f64, max_sweeps: usize) -> Result<RuizOutcome> {
    if !(epsilon > 0.0) {
        return Err(IldlError::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = store.n();
    // Full rows (both triangles) of |A|.
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, j, v) in store.triplets() {
        rows[i].push((j, v.abs()));
        if i != j {
            rows[j].push((i, v.abs()));
        }
    }
    if let Some(i) = rows.iter().position(|r| r.iter().all(|&(_, v)| v == 0.0)) {
        return Err(IldlError::ZeroRow(i));
    }
    let row_norm = |d: &[f64], i: usize| {
        rows[i]
            .iter()
            .fold(0.0f64, |m, &(j, v)| m.max(d[i] * v * d[j]))
    };
    let mut d = vec![1.0; n];
    let mut deviation = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        for i in 0..n {
            let r = row_norm(&d, i);
            d[i] /= r.sqrt();
        }
        deviation = (0..n).map(|i| (row_norm(&d, i) - 1.0).abs()).fold(0.0, f64::max);
        if deviation <= epsilon {
            break;
        }
    }
    Ok(RuizOutcome {
        scaling: ScalingDiag { d },
        converged: deviation <= epsilon,
        sweeps,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::SymmetryKind;

    fn sym(n: usize, t: &[(usize, usize, f64)]) -> SparseSymStore {
        SparseSymStore::from_triplets(n, SymmetryKind::Symmetric, t.iter().copied()).unwrap()
    }

    #[test]
    fn bunch_examples() {
        let id = sym(3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]);
        assert_eq!(bunch_equilibrate(&id).values(), &[1.0, 1.0, 1.0]);

        let four = sym(1, &[(0, 0, 4.0)]);
        assert_eq!(bunch_equilibrate(&four).values(), &[0.5]);

        let anti = sym(2, &[(1, 0, 2.0)]);
        let s = bunch_equilibrate(&anti);
        assert_eq!(s.values(), &[1.0, 0.5]);
        let mut scaled = anti.clone();
        apply_scaling(&mut scaled, &s);
        assert_eq!(scaled.get(1, 0), 1.0);
    }

    #[test]
    fn ruiz_fixed_point_and_diagonal() {
        let a = sym(2, &[(1, 0, 1.0)]);
        let out = ruiz_equilibrate(&a, 1e-8, 100).unwrap();
        assert!(out.converged);
        assert_eq!(out.sweeps, 1);
        assert_eq!(out.scaling.values(), &[1.0, 1.0]);

        let diag = sym(2, &[(0, 0, 4.0), (1, 1, 9.0)]);
        let out = ruiz_equilibrate(&diag, 1e-8, 100).unwrap();
        assert_eq!(out.sweeps, 1);
        assert_eq!(out.scaling.values(), &[0.5, 1.0 / 3.0]);
    }

    #[test]
    fn ruiz_off_diagonal_pair_converges() {
        // Each sweep takes square roots: d1 -> 2^(-4/3), d2 -> 2^(-2/3), with
        // d1 * d2 * 4 -> 1.
        let a = sym(2, &[(1, 0, 4.0)]);
        let out = ruiz_equilibrate(&a, 1e-8, 100).unwrap();
        assert!(out.converged);
        let d = out.scaling.values();
        assert!((d[0] * d[1] * 4.0 - 1.0).abs() < 1e-8);
        assert!((d[0] - 2f64.powf(-4.0 / 3.0)).abs() < 1e-8);
        assert!((d[1] - 2f64.powf(-2.0 / 3.0)).abs() < 1e-8);
    }

    #[test]
    fn ruiz_rejects_zero_row() {
        let a = sym(3, &[(1, 0, 1.0)]);
        assert!(matches!(ruiz_equilibrate(&a, 1e-4, 10), Err(IldlError::ZeroRow(2))));
    }

    #[test]
    fn ruiz_reports_non_convergence() {
        let a = sym(2, &[(1, 0, 1e12)]);
        let out = ruiz_equilibrate(&a, 1e-12, 2).unwrap();
        assert!(!out.converged);
        assert_eq!(out.sweeps, 2);
    }

    #[test]
    fn scaling_round_trip() {
        let a = sym(3, &[(0, 0, 3.5), (2, 0, -1.25), (1, 1, 7.0), (2, 2, 1e-3)]);
        let s = bunch_equilibrate(&a);
        let mut b = a.clone();
        apply_scaling(&mut b, &s);
        unapply_scaling(&mut b, &s);
        for ((_, _, x), (_, _, y)) in a.triplets().iter().zip(b.triplets()) {
            assert!(((x - y) / x).abs() <= 1e-15);
        }
    }
}
