use super::pattern_graph;
use crate::storage::{Permutation, SparseSymStore};

/// Reverse Cuthill-McKee ordering of the graph of `A + A^T`.
///
/// Components are started, in turn, from the unvisited vertex of smallest
/// degree (lowest index on ties); neighbours are queued by increasing degree.
/// Each component's Cuthill-McKee sequence is reversed in place, so isolated
/// vertices keep their relative order.
pub fn rcm_order(store: &SparseSymStore) -> Permutation {
    let adj = pattern_graph(store);
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (degree[v], v));

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut nbrs = Vec::new();
    for &s in &starts {
        if visited[s] {
            continue;
        }
        let begin = order.len();
        visited[s] = true;
        order.push(s);
        let mut head = begin;
        while head < order.len() {
            let v = order[head];
            head += 1;
            nbrs.clear();
            nbrs.extend(adj[v].iter().copied().filter(|&u| !visited[u]));
            nbrs.sort_by_key(|&u| (degree[u], u));
            for &u in &nbrs {
                visited[u] = true;
                order.push(u);
            }
        }
        order[begin..].reverse();
    }
    Permutation::from_forward(order).expect("every vertex is visited once")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::SymmetryKind;

    fn bandwidth(s: &SparseSymStore) -> usize {
        s.triplets().iter().map(|&(i, j, _)| i - j).max().unwrap_or(0)
    }

    #[test]
    fn diagonal_gives_identity() {
        let s = SparseSymStore::from_triplets(4, SymmetryKind::Symmetric, (0..4).map(|i| (i, i, 1.0))).unwrap();
        assert!(rcm_order(&s).is_identity());
    }

    #[test]
    fn shuffled_path_gets_bandwidth_one() {
        // Path 1-2-3 labelled so that vertex 0 sits in the middle.
        let s = SparseSymStore::from_triplets(3, SymmetryKind::Symmetric, [(1, 0, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(bandwidth(&s), 2);
        let p = rcm_order(&s);
        assert_eq!(bandwidth(&s.permuted(&p)), 1);
    }

    #[test]
    fn star_graph() {
        let s = SparseSymStore::from_triplets(5, SymmetryKind::Symmetric, (1..5).map(|i| (i, 0, 1.0))).unwrap();
        let p = rcm_order(&s);
        let mut f = p.forward().to_vec();
        f.sort();
        assert_eq!(f, vec![0, 1, 2, 3, 4]);
        assert!(bandwidth(&s.permuted(&p)) <= 4);
    }

    #[test]
    fn grid_bandwidth_drops() {
        // 6x6 grid numbered column-wise after a scrambling map.
        let m = 6;
        let scramble = |v: usize| (v * 17) % (m * m);
        let mut t = Vec::new();
        for y in 0..m {
            for x in 0..m {
                let v = scramble(y * m + x);
                if x + 1 < m {
                    t.push((v, scramble(y * m + x + 1), 1.0));
                }
                if y + 1 < m {
                    t.push((v, scramble((y + 1) * m + x), 1.0));
                }
            }
        }
        let s = SparseSymStore::from_triplets(m * m, SymmetryKind::Symmetric, t).unwrap();
        let p = rcm_order(&s);
        assert!(bandwidth(&s.permuted(&p)) <= 2 * m);
        assert!(bandwidth(&s.permuted(&p)) < bandwidth(&s));
    }
}
