//! Approximate minimum degree ordering on a quotient graph.
//!
//! Eliminated vertices become elements; a variable's neighbourhood is its
//! remaining variable neighbours plus the union of its adjacent elements.
//! Degrees are the usual approximate external degree bound, elements whose
//! variables are all covered by the new element are absorbed aggressively,
//! and indistinguishable variables are merged into supervariables.

use std::collections::{BTreeSet, HashMap};

use super::pattern_graph;
use crate::storage::{Permutation, SparseSymStore};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmdOptions {
    /// Rows with more than `dense_factor * sqrt(n)` off-diagonal entries are
    /// ordered last. `None` disables the rule.
    pub dense_factor: Option<f64>,
    pub aggressive: bool,
}

impl Default for AmdOptions {
    fn default() -> Self {
        AmdOptions {
            dense_factor: Some(10.0),
            aggressive: true,
        }
    }
}

pub fn amd_order(store: &SparseSymStore) -> Permutation {
    amd_order_with(store, &AmdOptions::default())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Var,
    Merged,
    Element,
    Absorbed,
    Dense,
}

pub fn amd_order_with(store: &SparseSymStore, opts: &AmdOptions) -> Permutation {
    let adj = pattern_graph(store);
    Permutation::from_forward(amd_on_graph(adj, opts)).expect("AMD emits each vertex exactly once")
}

pub(crate) fn amd_on_graph(adj: Vec<Vec<usize>>, opts: &AmdOptions) -> Vec<usize> {
    let n = adj.len();
    let mut status = vec![Status::Var; n];
    let threshold = opts.dense_factor.map(|f| f * (n as f64).sqrt());
    let mut dense = Vec::new();
    if let Some(t) = threshold {
        for (i, a) in adj.iter().enumerate() {
            if a.len() as f64 > t {
                status[i] = Status::Dense;
                dense.push(i);
            }
        }
    }
    let mut var_adj: Vec<Vec<usize>> = adj
        .into_iter()
        .map(|a| a.into_iter().filter(|&j| status[j] == Status::Var).collect())
        .collect();
    let mut elem_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut elem_vars: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut nv = vec![1usize; n];
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut degree: Vec<usize> = var_adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n)
        .filter(|&i| status[i] == Status::Var)
        .map(|i| (degree[i], i))
        .collect();
    let mut remaining: usize = n - dense.len();

    let mut order = Vec::with_capacity(n);
    // in_lp[i] marks membership in the current pivot's element.
    let mut in_lp = vec![false; n];
    // w[e] = |L_e \ L_p| for elements touched during this step, or usize::MAX.
    let mut w = vec![usize::MAX; n];
    let mut touched = Vec::new();

    while let Some((_, p)) = queue.pop_first() {
        remaining -= nv[p];

        // L_p: principal variables reachable from p through A_p and E_p.
        let mut lp = Vec::new();
        for &j in &var_adj[p] {
            if status[j] == Status::Var && j != p && !in_lp[j] {
                in_lp[j] = true;
                lp.push(j);
            }
        }
        for e in std::mem::take(&mut elem_adj[p]) {
            if status[e] != Status::Element {
                continue;
            }
            for &j in &elem_vars[e] {
                if status[j] == Status::Var && j != p && !in_lp[j] {
                    in_lp[j] = true;
                    lp.push(j);
                }
            }
            status[e] = Status::Absorbed;
            elem_vars[e] = Vec::new();
        }
        lp.sort_unstable();
        status[p] = Status::Element;
        var_adj[p] = Vec::new();
        order.extend(std::mem::take(&mut members[p]));
        let lp_weight: usize = lp.iter().map(|&i| nv[i]).sum();

        // Prune adjacency of every variable in L_p.
        for &i in &lp {
            queue.remove(&(degree[i], i));
            elem_adj[i].retain(|&e| status[e] == Status::Element);
            elem_adj[i].push(p);
            var_adj[i].retain(|&j| status[j] == Status::Var && !in_lp[j] && j != p);
        }

        // |L_e \ L_p| for every other element adjacent to L_p.
        for &i in &lp {
            for &e in &elem_adj[i] {
                if e == p {
                    continue;
                }
                if w[e] == usize::MAX {
                    elem_vars[e].retain(|&j| status[j] == Status::Var);
                    w[e] = elem_vars[e].iter().map(|&j| nv[j]).sum();
                    touched.push(e);
                }
                w[e] -= nv[i];
            }
        }
        if opts.aggressive {
            for &e in &touched {
                if w[e] == 0 {
                    status[e] = Status::Absorbed;
                    elem_vars[e] = Vec::new();
                }
            }
            for &i in &lp {
                elem_adj[i].retain(|&e| status[e] == Status::Element);
            }
        }

        // Supervariable detection among L_p: equal hashes, then exact check.
        let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
        for &i in &lp {
            elem_adj[i].sort_unstable();
            var_adj[i].sort_unstable();
            let h = elem_adj[i]
                .iter()
                .chain(var_adj[i].iter())
                .fold(0u64, |acc, &x| acc.wrapping_add(x as u64 + 1));
            buckets.entry(h).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = buckets.into_values().filter(|b| b.len() > 1).collect();
        groups.sort_unstable();
        for group in groups {
            for a in 0..group.len() {
                let i = group[a];
                if status[i] != Status::Var {
                    continue;
                }
                for &j in &group[a + 1..] {
                    if status[j] == Status::Var && var_adj[i] == var_adj[j] && elem_adj[i] == elem_adj[j] {
                        nv[i] += nv[j];
                        nv[j] = 0;
                        status[j] = Status::Merged;
                        let m = std::mem::take(&mut members[j]);
                        members[i].extend(m);
                        var_adj[j] = Vec::new();
                        elem_adj[j] = Vec::new();
                    }
                }
            }
        }

        // Approximate external degrees.
        for &i in &lp {
            in_lp[i] = false;
            if status[i] != Status::Var {
                continue;
            }
            let ext_lp = lp_weight - nv[i];
            let a_part: usize = var_adj[i].iter().map(|&j| nv[j]).sum();
            let e_part: usize = elem_adj[i]
                .iter()
                .filter(|&&e| e != p)
                .map(|&e| if w[e] == usize::MAX { 0 } else { w[e] })
                .sum();
            let bound = (remaining - nv[i])
                .min(degree[i] + ext_lp)
                .min(a_part + ext_lp + e_part);
            degree[i] = bound;
            queue.insert((bound, i));
        }
        elem_vars[p] = lp.into_iter().filter(|&i| status[i] == Status::Var).collect();
        for e in touched.drain(..) {
            w[e] = usize::MAX;
        }
    }
    order.extend(dense);
    order
}
