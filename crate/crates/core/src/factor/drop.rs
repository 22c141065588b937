use serde::{Deserialize, Serialize};

/// Norm of the multiplier column that scales the drop threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropNorm {
    #[default]
    Two,
    Max,
}

impl DropNorm {
    pub fn of(self, col: &[(usize, f64)]) -> f64 {
        match self {
            DropNorm::Two => col.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt(),
            DropNorm::Max => col.iter().fold(0.0, |m, e| m.max(e.1.abs())),
        }
    }
}

/// Per-column cap `ceil(fill_factor * nnz(A) / n)`, or `None` when unbounded.
pub fn column_cap(fill_factor: f64, nnz_a: usize, n: usize) -> Option<usize> {
    if fill_factor.is_infinite() || n == 0 {
        None
    } else {
        Some((fill_factor * nnz_a as f64 / n as f64).ceil() as usize)
    }
}

/// Drops multipliers below `drop_tol * col_norm`, then keeps at most `cap`
/// entries of largest magnitude (lower row index first on ties). Returns the
/// number of removed entries.
pub fn apply_drop_rules(col: &mut Vec<(usize, f64)>, drop_tol: f64, cap: Option<usize>, col_norm: f64) -> usize {
    let before = col.len();
    let threshold = drop_tol * col_norm;
    col.retain(|e| e.1 != 0.0 && e.1.abs() >= threshold);
    if let Some(cap) = cap {
        if col.len() > cap {
            col.sort_unstable_by(|x, y| y.1.abs().total_cmp(&x.1.abs()).then(x.0.cmp(&y.0)));
            col.truncate(cap);
        }
    }
    before - col.len()
}
