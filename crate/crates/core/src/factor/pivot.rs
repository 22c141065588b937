//! Pivot selection. Every routine sees the trailing submatrix only through
//! `fetch(c)`, which returns the fully updated column `c` (rows `>= k`, any
//! order) at the current step `k`.

use serde::{Deserialize, Serialize};

/// Growth bound constant `(1 + sqrt(17)) / 8`.
pub const ALPHA: f64 = 0.640_388_203_202_207_6;

/// A sparse column as `(row, value)` pairs.
pub type Column = Vec<(usize, f64)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PivotRule {
    /// 1x1 on the current diagonal: `|a_kk| >= alpha * omega_1`.
    Diagonal,
    /// 1x1 on the current diagonal: `|a_kk| * omega_r >= alpha * omega_1^2`.
    Ratio,
    /// 1x1 on a swapped-in diagonal: `|a_rr| >= alpha * omega_r`.
    Swapped,
    /// 2x2 block.
    TwoByTwo,
    /// No search; the next diagonal (block) is taken as is.
    Unpivoted,
    /// Zero column; a static perturbation replaces the pivot.
    Static,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PivotDecision {
    pub size: usize,
    /// Symmetric exchanges applied in order before the elimination.
    pub swaps: Vec<(usize, usize)>,
    pub rule: PivotRule,
}

/// The quantities a pivot decision was based on, for auditing.
///
/// For the walks of rook pivoting `a_kk`/`omega_1` describe the last column
/// `i` of the walk and `a_rr`/`omega_r` its partner `r`; `entry` is
/// `|a_ri|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotRecord {
    pub step: usize,
    pub size: usize,
    pub rule: PivotRule,
    pub swaps: Vec<(usize, usize)>,
    pub a_kk: f64,
    pub a_rr: f64,
    pub omega_1: f64,
    pub omega_r: f64,
    pub entry: f64,
}

impl PivotRecord {
    fn new(step: usize) -> Self {
        PivotRecord {
            step,
            size: 1,
            rule: PivotRule::Diagonal,
            swaps: Vec::new(),
            a_kk: 0.0,
            a_rr: 0.0,
            omega_1: 0.0,
            omega_r: 0.0,
            entry: 0.0,
        }
    }

    fn finish(mut self, d: &PivotDecision) -> (PivotDecision, PivotRecord) {
        self.size = d.size;
        self.rule = d.rule;
        self.swaps = d.swaps.clone();
        (d.clone(), self)
    }
}

pub fn entry(col: &[(usize, f64)], row: usize) -> f64 {
    col.iter().find(|e| e.0 == row).map_or(0.0, |e| e.1)
}

/// Largest magnitude over rows other than `skip`, with the lowest row index
/// attaining it. Returns `(0, None)` when there is no nonzero.
pub fn off_max(col: &[(usize, f64)], skip: usize) -> (f64, Option<usize>) {
    let mut best = (0.0f64, None::<usize>);
    for &(i, v) in col {
        if i == skip {
            continue;
        }
        let a = v.abs();
        if a > best.0 || (a == best.0 && a > 0.0 && best.1.is_some_and(|b| i < b)) {
            best = (a, Some(i));
        }
    }
    best
}

/// Swaps that bring `i` to position `k` and then `r` to position `k + 1`.
fn pair_swaps(k: usize, i: usize, r: usize) -> Vec<(usize, usize)> {
    let mut swaps = Vec::new();
    if i != k {
        swaps.push((k, i));
    }
    let r = if r == k { i } else if r == i { k } else { r };
    if r != k + 1 {
        swaps.push((k + 1, r));
    }
    swaps
}

fn one(rule: PivotRule, swaps: Vec<(usize, usize)>) -> PivotDecision {
    PivotDecision { size: 1, swaps, rule }
}

fn two(swaps: Vec<(usize, usize)>) -> PivotDecision {
    PivotDecision {
        size: 2,
        swaps,
        rule: PivotRule::TwoByTwo,
    }
}

pub fn bk_pivot(k: usize, fetch: &mut dyn FnMut(usize) -> Column) -> (PivotDecision, PivotRecord) {
    let mut rec = PivotRecord::new(k);
    let col_k = fetch(k);
    let a_kk = entry(&col_k, k);
    let (w1, r) = off_max(&col_k, k);
    rec.a_kk = a_kk;
    rec.omega_1 = w1;
    let Some(r) = r else {
        let rule = if a_kk == 0.0 { PivotRule::Static } else { PivotRule::Diagonal };
        return rec.finish(&one(rule, vec![]));
    };
    if a_kk.abs() >= ALPHA * w1 {
        return rec.finish(&one(PivotRule::Diagonal, vec![]));
    }
    let col_r = fetch(r);
    let a_rr = entry(&col_r, r);
    let (wr, _) = off_max(&col_r, r);
    rec.a_rr = a_rr;
    rec.omega_r = wr;
    rec.entry = w1;
    let d = if a_kk.abs() * wr >= ALPHA * w1 * w1 {
        one(PivotRule::Ratio, vec![])
    } else if a_rr.abs() >= ALPHA * wr {
        one(PivotRule::Swapped, vec![(k, r)])
    } else {
        two(pair_swaps(k, k, r))
    };
    rec.finish(&d)
}

pub fn rook_pivot(k: usize, n: usize, fetch: &mut dyn FnMut(usize) -> Column) -> (PivotDecision, PivotRecord) {
    let mut rec = PivotRecord::new(k);
    let col_k = fetch(k);
    let a_kk = entry(&col_k, k);
    let (w1, r) = off_max(&col_k, k);
    rec.a_kk = a_kk;
    rec.omega_1 = w1;
    let Some(mut r) = r else {
        let rule = if a_kk == 0.0 { PivotRule::Static } else { PivotRule::Diagonal };
        return rec.finish(&one(rule, vec![]));
    };
    if a_kk.abs() >= ALPHA * w1 {
        return rec.finish(&one(PivotRule::Diagonal, vec![]));
    }
    let (mut i, mut wi, mut a_ii) = (k, w1, a_kk);
    // omega grows strictly along the walk, so it visits each column at most
    // once; the bound only guards against a broken column source.
    for _ in 0..n {
        let col_r = fetch(r);
        let a_rr = entry(&col_r, r);
        let (wr, next) = off_max(&col_r, r);
        rec.a_kk = a_ii;
        rec.omega_1 = wi;
        rec.a_rr = a_rr;
        rec.omega_r = wr;
        rec.entry = entry(&col_r, i).abs();
        if a_rr.abs() >= ALPHA * wr {
            return rec.finish(&one(PivotRule::Swapped, vec![(k, r)]));
        }
        // |a_ri| = omega_i <= omega_r always holds, so equality is `<=`.
        if wr <= wi {
            return rec.finish(&two(pair_swaps(k, i, r)));
        }
        let next = next.expect("omega_r > 0 has a maximiser");
        i = r;
        wi = wr;
        a_ii = a_rr;
        r = next;
    }
    rec.finish(&two(pair_swaps(k, i, r)))
}

pub fn skew_bunch_pivot(k: usize, fetch: &mut dyn FnMut(usize) -> Column) -> (PivotDecision, PivotRecord) {
    let mut rec = PivotRecord::new(k);
    let col_k = fetch(k);
    let (w1, r) = off_max(&col_k, k);
    rec.omega_1 = w1;
    rec.entry = w1;
    let d = match r {
        None => PivotDecision {
            size: 2,
            swaps: vec![],
            rule: PivotRule::Static,
        },
        Some(r) => two(pair_swaps(k, k, r)),
    };
    rec.finish(&d)
}

pub fn skew_rook_pivot(k: usize, n: usize, fetch: &mut dyn FnMut(usize) -> Column) -> (PivotDecision, PivotRecord) {
    let mut rec = PivotRecord::new(k);
    let col_k = fetch(k);
    let (w1, r) = off_max(&col_k, k);
    rec.omega_1 = w1;
    let Some(mut r) = r else {
        return rec.finish(&PivotDecision {
            size: 2,
            swaps: vec![],
            rule: PivotRule::Static,
        });
    };
    let (mut i, mut wi) = (k, w1);
    for _ in 0..n {
        let col_r = fetch(r);
        let (wr, next) = off_max(&col_r, r);
        rec.omega_1 = wi;
        rec.omega_r = wr;
        rec.entry = entry(&col_r, i).abs();
        if wr <= wi {
            return rec.finish(&two(pair_swaps(k, i, r)));
        }
        i = r;
        wi = wr;
        r = next.expect("omega_r > 0 has a maximiser");
    }
    rec.finish(&two(pair_swaps(k, i, r)))
}

pub fn unpivoted(k: usize, skew: bool, fetch: &mut dyn FnMut(usize) -> Column) -> (PivotDecision, PivotRecord) {
    let mut rec = PivotRecord::new(k);
    let col_k = fetch(k);
    rec.a_kk = entry(&col_k, k);
    rec.omega_1 = off_max(&col_k, k).0;
    let d = PivotDecision {
        size: if skew { 2 } else { 1 },
        swaps: vec![],
        rule: PivotRule::Unpivoted,
    };
    rec.finish(&d)
}
