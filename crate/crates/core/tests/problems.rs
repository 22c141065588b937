use nalgebra::DMatrix;

use ildl::problems::{convdiff_skew_matrix, helmholtz_matrix, skew_spectrum, Peclet};
use ildl::SparseSymStore;

fn dense(a: &SparseSymStore) -> DMatrix<f64> {
    let d = a.to_dense();
    DMatrix::from_fn(a.n(), a.n(), |i, j| d[i][j])
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= tol, "{x} vs {y}");
    }
}

#[test]
fn helmholtz_table_sizes() {
    for (m, n, nnz) in [(80, 6400, 31680), (120, 14400, 71520), (160, 25600, 127360), (200, 40000, 199200)] {
        let a = helmholtz_matrix(m, 0.3).unwrap();
        assert_eq!((a.n(), a.nnz_full()), (n, nnz), "m = {m}");
    }
}

#[test]
fn convdiff_table_sizes() {
    for m in [20usize, 30, 40] {
        let a = convdiff_skew_matrix(m, Peclet::new(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(a.nnz_full(), 6 * m * m * (m - 1));
    }
    let a = convdiff_skew_matrix(30, Peclet::new(20.0, 2.0, 1.0)).unwrap();
    assert_eq!((a.n(), a.nnz_full()), (27000, 156600));
}

#[test]
fn helmholtz_two_by_two_grid_spectrum() {
    let a = helmholtz_matrix(2, 0.0).unwrap();
    let eig = sorted(dense(&a).symmetric_eigenvalues().iter().copied().collect());
    let c = |j: f64| (j * std::f64::consts::PI / 3.0).cos();
    let mut expect = Vec::new();
    for j in [1.0, 2.0] {
        for k in [1.0, 2.0] {
            expect.push(4.0 - 2.0 * c(j) - 2.0 * c(k));
        }
    }
    assert_close(&eig, &sorted(expect), 1e-12);
}

#[test]
fn helmholtz_is_exactly_symmetric() {
    let d = helmholtz_matrix(6, 0.3).unwrap().to_dense();
    for i in 0..36 {
        for j in 0..36 {
            assert_eq!(d[i][j], d[j][i]);
        }
    }
}

#[test]
fn convdiff_spectrum_matches_dense_eigensolve() {
    for (m, p) in [(2, Peclet::new(1.0, 1.0, 1.0)), (3, Peclet::new(0.7, -0.2, 1.3))] {
        let a = convdiff_skew_matrix(m, p).unwrap();
        let eig = dense(&a).complex_eigenvalues();
        assert!(eig.iter().all(|z| z.re.abs() < 1e-10));
        let imag = sorted(eig.iter().map(|z| z.im).collect());
        assert_close(&imag, &sorted(skew_spectrum(m, p)), 1e-10);
    }
}
