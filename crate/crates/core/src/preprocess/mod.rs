//! Equilibration and fill-reducing reordering, applied in that order before
//! the factorization.

mod amd;
mod equilibrate;
mod rcm;

pub use amd::{amd_order, amd_order_with, AmdOptions};
pub use equilibrate::{
    apply_scaling, bunch_equilibrate, ruiz_equilibrate, unapply_scaling, RuizOutcome, ScalingDiag,
    RUIZ_DEFAULT_EPSILON, RUIZ_DEFAULT_MAX_SWEEPS,
};
pub use rcm::rcm_order;

use crate::storage::SparseSymStore;

/// Adjacency lists of the undirected graph of `A + A^T` with the diagonal
/// removed. Neighbour lists are sorted.
pub fn pattern_graph(store: &SparseSymStore) -> Vec<Vec<usize>> {
    let n = store.n();
    let mut adj = vec![Vec::new(); n];
    for j in 0..n {
        for &i in store.column(j).0 {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}
