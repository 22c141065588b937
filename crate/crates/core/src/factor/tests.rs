use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn store(n: usize, kind: SymmetryKind, t: &[(usize, usize, f64)]) -> SparseSymStore {
    SparseSymStore::from_triplets(n, kind, t.iter().copied()).unwrap()
}

fn random(n: usize, density: f64, kind: SymmetryKind, seed: u64) -> SparseSymStore {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for j in 0..n {
        for i in j..n {
            if i == j && kind.is_skew() {
                continue;
            }
            if i == j || rng.random_bool(density) {
                t.push((i, j, rng.random_range(-1.0..1.0)));
            }
        }
    }
    SparseSymStore::from_triplets(n, kind, t).unwrap()
}

fn dense_ldlt(f: &Factorization) -> Vec<Vec<f64>> {
    let n = f.n();
    let mut l = vec![vec![0.0; n]; n];
    for (i, j, v) in f.l.triplets_with_diagonal() {
        l[i][j] = v;
    }
    let mut d = vec![vec![0.0; n]; n];
    for (s, b) in f.d.iter() {
        match *b {
            Block::One { d: x } => d[s][s] = x,
            Block::Two { a, b, c } => {
                d[s][s] = a;
                d[s][s + 1] = b;
                d[s + 1][s] = b;
                d[s + 1][s + 1] = c;
            }
            Block::TwoSkew { d: x } => {
                d[s][s + 1] = x;
                d[s + 1][s] = -x;
            }
        }
    }
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for p in 0..n {
                for q in 0..n {
                    s += l[i][p] * d[p][q] * l[j][q];
                }
            }
            m[i][j] = s;
        }
    }
    m
}

#[test]
fn identity_factors_trivially() {
    let a = store(3, SymmetryKind::Symmetric, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]);
    let f = ildl_factor(&a, &FactorParams::default()).unwrap();
    assert_eq!(f.l.nnz(), 0);
    assert!(f.perm.is_identity());
    assert_eq!(f.d.blocks(), &[Block::One { d: 1.0 }; 3]);
    assert_eq!(fill_of(&f.l, &f.d, &a), 1.0);
}

#[test]
fn anti_diagonal_is_one_block() {
    let a = store(2, SymmetryKind::Symmetric, &[(1, 0, 1.0)]);
    for pivot in [PivotKind::Rook, PivotKind::BunchKaufman] {
        let f = ildl_factor(&a, &FactorParams::complete(pivot)).unwrap();
        assert!(f.perm.is_identity());
        assert_eq!(f.d.blocks(), &[Block::Two { a: 0.0, b: 1.0, c: 0.0 }]);
        assert_eq!(f.l.nnz(), 0);
    }
}

#[test]
fn one_step_schur_complement() {
    let a = store(2, SymmetryKind::Symmetric, &[(0, 0, 2.0), (1, 0, 1.0), (1, 1, 2.0)]);
    let f = ildl_factor(&a, &FactorParams::complete(PivotKind::None)).unwrap();
    assert_eq!(f.d.blocks(), &[Block::One { d: 2.0 }, Block::One { d: 1.5 }]);
    assert_eq!(f.l.get(1, 0), 0.5);
}

#[test]
fn skew_schur_complement_after_first_block() {
    // A = [[0,1,0,2],[-1,0,3,0],[0,-3,0,4],[-2,0,-4,0]]
    let a = store(4, SymmetryKind::Skew, &[(1, 0, -1.0), (3, 0, -2.0), (2, 1, -3.0), (3, 2, -4.0)]);
    let f = skew_ildl_factor(&a, &FactorParams::complete(PivotKind::None)).unwrap();
    // Dense oracle: S = A22 - A21 A11^{-1} A12 with A11 = [[0,1],[-1,0]].
    let a11_inv = [[0.0, -1.0], [1.0, 0.0]];
    let a21 = [[0.0, -3.0], [-2.0, 0.0]];
    let a12 = [[0.0, 2.0], [3.0, 0.0]];
    let a22 = [[0.0, 4.0], [-4.0, 0.0]];
    let mut s = a22;
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    s[i][j] -= a21[i][p] * a11_inv[p][q] * a12[q][j];
                }
            }
        }
    }
    assert_eq!(f.d.blocks()[0], Block::TwoSkew { d: 1.0 });
    assert_eq!(f.d.blocks()[1], Block::TwoSkew { d: s[0][1] });
    assert_eq!(s[1][0], -s[0][1]);
    // Multipliers: L21 = A21 A11^{-1}, compared against the explicit inverse.
    for i in 0..2 {
        for j in 0..2 {
            let expect: f64 = (0..2).map(|p| a21[i][p] * a11_inv[p][j]).sum();
            assert_eq!(f.l.get(i + 2, j), expect);
        }
    }
    assert_eq!(f.l.get(1, 0), 0.0);
}

#[test]
fn skew_two_by_two() {
    let a = store(2, SymmetryKind::Skew, &[(1, 0, -2.0)]);
    let f = skew_ildl_factor(&a, &FactorParams::default()).unwrap();
    assert!(f.perm.is_identity());
    assert_eq!(f.d.blocks(), &[Block::TwoSkew { d: 2.0 }]);
    assert_eq!(f.l.nnz(), 0);
}

#[test]
fn skew_rejects_odd_dimension_and_symmetric_kind() {
    let a = store(3, SymmetryKind::Skew, &[(1, 0, 1.0)]);
    assert!(matches!(skew_ildl_factor(&a, &FactorParams::default()), Err(IldlError::OddSkewDimension(3))));
    assert!(matches!(ildl_factor(&a, &FactorParams::default()), Err(IldlError::OddSkewDimension(3))));
    let s = store(2, SymmetryKind::Symmetric, &[(0, 0, 1.0)]);
    assert!(skew_ildl_factor(&s, &FactorParams::default()).is_err());
}

#[test]
fn zero_skew_block_takes_static_pivot() {
    let a = SparseSymStore::new(2, SymmetryKind::Skew);
    let f = skew_ildl_factor(&a, &FactorParams::default()).unwrap();
    assert_eq!(f.stats.static_pivots, 1);
    assert!(matches!(f.d.blocks()[0], Block::TwoSkew { d } if d > 0.0));
}

#[test]
fn zero_column_takes_static_pivot() {
    let a = store(3, SymmetryKind::Symmetric, &[(0, 0, 4.0), (2, 2, 1.0)]);
    let f = ildl_factor(&a, &FactorParams::default()).unwrap();
    assert_eq!(f.stats.static_pivots, 1);
    assert_eq!(f.d.blocks()[1], Block::One { d: f64::EPSILON.sqrt() * 4.0 });
}

#[test]
fn invalid_parameters() {
    let a = store(1, SymmetryKind::Symmetric, &[(0, 0, 1.0)]);
    for p in [
        FactorParams { drop_tol: 1.0, ..FactorParams::default() },
        FactorParams { drop_tol: -0.1, ..FactorParams::default() },
        FactorParams { fill_factor: 0.0, ..FactorParams::default() },
        FactorParams { static_pivot_shift: Some(-1.0), ..FactorParams::default() },
    ] {
        assert!(ildl_factor(&a, &p).is_err());
    }
}

#[test]
fn complete_factorization_reconstructs() {
    for (seed, kind) in [(1, SymmetryKind::Symmetric), (2, SymmetryKind::Skew)] {
        for pivot in [PivotKind::Rook, PivotKind::BunchKaufman] {
            let a = random(50, 0.3, kind, seed);
            let f = ildl_factor(&a, &FactorParams::complete(pivot)).unwrap();
            let res = f.reconstruction_residual(&a);
            assert!(res <= 1e-12, "{kind:?} {pivot:?}: {res}");
            assert_eq!(f.stats.static_pivots, 0);
        }
    }
}

#[test]
fn sparse_residual_matches_dense_oracle() {
    for kind in [SymmetryKind::Symmetric, SymmetryKind::Skew] {
        let a = random(12, 0.4, kind, 9);
        let params = FactorParams { drop_tol: 0.05, fill_factor: 1.0, ..FactorParams::default() };
        let f = ildl_factor(&a, &params).unwrap();
        let m = dense_ldlt(&f);
        let pa = a.permuted(&f.perm).to_dense();
        let mut err = 0.0;
        for i in 0..12 {
            for j in 0..12 {
                err += (m[i][j] - pa[i][j]).powi(2);
            }
        }
        let dense_res = err.sqrt() / a.frobenius_norm();
        let res = f.reconstruction_residual(&a);
        assert!((res - dense_res).abs() <= 1e-12 * (1.0 + dense_res), "{res} vs {dense_res}");
        let r = f.reconstruct().to_dense();
        for i in 0..12 {
            for j in 0..12 {
                assert!((r[i][j] - m[i][j]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn in_place_matches_copying_factorization() {
    for kind in [SymmetryKind::Symmetric, SymmetryKind::Skew] {
        let a = random(40, 0.2, kind, 5);
        let p = FactorParams::default();
        let f1 = ildl_factor(&a, &p).unwrap();
        let f2 = ildl_factor_in_place(a.clone(), &p).unwrap();
        assert_eq!(f1.perm, f2.perm);
        assert_eq!(f1.d, f2.d);
        let mut t1 = f1.l.strict_triplets();
        let mut t2 = f2.l.strict_triplets();
        t1.sort_by_key(|x| (x.0, x.1));
        t2.sort_by_key(|x| (x.0, x.1));
        assert_eq!(t1, t2);
    }
}

#[test]
fn fill_cap_and_skew_structure() {
    for kind in [SymmetryKind::Symmetric, SymmetryKind::Skew] {
        let a = random(60, 0.3, kind, 11);
        let p = FactorParams { fill_factor: 0.5, drop_tol: 0.0, ..FactorParams::default() };
        let f = ildl_factor(&a, &p).unwrap();
        let cap = column_cap(0.5, a.nnz_full(), 60).unwrap();
        assert!(f.l.max_column_nnz() <= cap);
        assert!(fill_of(&f.l, &f.d, &a) <= 2.0 * 0.5 * (cap as f64 / (0.5 * a.nnz_full() as f64 / 60.0)) + 60.0 * 2.0 / a.nnz_full() as f64);
        if kind.is_skew() {
            for (s, b) in f.d.iter() {
                assert!(matches!(b, Block::TwoSkew { d } if *d != 0.0));
                assert_eq!(f.l.get(s + 1, s), 0.0);
            }
        }
    }
}

#[test]
fn monotone_dropping_without_pivoting() {
    // Diagonally dominant: no pivoting needed, so patterns are comparable.
    let mut a = random(40, 0.25, SymmetryKind::Symmetric, 3);
    a.map_values(|i, j, v| if i == j { 20.0 + v } else { v });
    let pattern = |tol: f64| {
        let p = FactorParams { drop_tol: tol, fill_factor: f64::INFINITY, pivot: PivotKind::None, ..FactorParams::default() };
        let f = ildl_factor(&a, &p).unwrap();
        let mut t: Vec<(usize, usize)> = f.l.strict_triplets().into_iter().map(|(i, j, _)| (i, j)).collect();
        t.sort();
        t
    };
    let coarse = pattern(1e-1);
    let fine = pattern(1e-3);
    for e in &coarse {
        assert!(fine.binary_search(e).is_ok(), "{e:?} kept at 1e-1 but dropped at 1e-3");
    }
}

#[test]
fn pivot_records_are_kept_on_request() {
    let a = random(20, 0.3, SymmetryKind::Symmetric, 4);
    let p = FactorParams { record_pivots: true, ..FactorParams::complete(PivotKind::Rook) };
    let f = ildl_factor(&a, &p).unwrap();
    assert_eq!(f.pivots.len(), f.d.blocks().len());
    for (r, (s, b)) in f.pivots.iter().zip(f.d.iter()) {
        assert_eq!(r.step, s);
        assert_eq!(r.size, b.size());
    }
}

proptest::proptest! {
    #[test]
    fn no_drop_reconstruction(seed in 0u64..1000, n in 2usize..24, skew in proptest::bool::ANY, bk in proptest::bool::ANY) {
        let kind = if skew { SymmetryKind::Skew } else { SymmetryKind::Symmetric };
        let n = if skew { n & !1 } else { n };
        let a = random(n, 0.35, kind, seed);
        let pivot = if bk { PivotKind::BunchKaufman } else { PivotKind::Rook };
        let f = ildl_factor(&a, &FactorParams::complete(pivot)).unwrap();
        if f.stats.static_pivots == 0 {
            proptest::prop_assert!(f.reconstruction_residual(&a) <= 1e-12);
        }
    }
}
