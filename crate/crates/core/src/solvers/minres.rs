//! MINRES with a symmetric positive definite preconditioner `M`.
//!
//! The Lanczos process runs in the `M`-inner product. For a symmetric `A`
//! it produces a symmetric tridiagonal `T`; for a skew-symmetric `A` the
//! operator `M^{-1} A` is skew-adjoint in that inner product, so `T` has a
//! zero diagonal and super-diagonal `-beta`. Either way `T` is reduced by
//! Givens rotations and the residual norm is minimised over the Krylov space.

use std::time::Instant;

use super::{
    check_dims, dot, finished, norm, true_residual, LinearOperator, Preconditioner, SolveReport, SolveStatus,
    SolverParams, RESIDUAL_REFRESH,
};
use crate::error::{IldlError, Result};

pub fn minres_solve(
    a: &dyn LinearOperator,
    m: &dyn Preconditioner,
    b: &[f64],
    params: &SolverParams,
) -> Result<(Vec<f64>, SolveReport)> {
    params.validate()?;
    check_dims(a, m, b)?;
    let start = Instant::now();
    let n = b.len();
    let skew = a.kind().is_skew();
    let method = if skew { "minres-skew" } else { "minres" };
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], finished(SolveStatus::Converged, vec![0.0], 0.0, method, start)));
    }

    let mut x = vec![0.0; n];
    let mut res = b.to_vec();
    let mut y = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut wv = vec![0.0; n];

    // z_j = M v_j with v_j orthonormal in the M-inner product.
    let mut z_prev = vec![0.0; n];
    let mut z = b.to_vec();
    m.apply(&z, &mut y);
    let beta1_sq = dot(&z, &y);
    if !(beta1_sq > 0.0) {
        return Err(IldlError::IndefinitePreconditioner(beta1_sq));
    }
    let beta1 = beta1_sq.sqrt();
    let mut v: Vec<f64> = y.iter().map(|t| t / beta1).collect();
    z.iter_mut().for_each(|t| *t /= beta1);
    let mut beta = beta1;

    let (mut c1, mut s1) = (1.0f64, 0.0f64); // rotation j-1
    let (mut c2, mut s2) = (1.0f64, 0.0f64); // rotation j-2
    let mut phibar = beta1;
    let mut w1 = vec![0.0; n];
    let mut w2 = vec![0.0; n];
    let mut aw1 = vec![0.0; n];
    let mut aw2 = vec![0.0; n];

    let mut history = vec![1.0];
    let mut status = SolveStatus::MaxIter;
    for j in 1..=params.max_iter {
        a.apply(&v, &mut p);
        if !p.iter().all(|t| t.is_finite()) {
            return Err(IldlError::NonFinite("operator"));
        }
        let alpha = if skew { 0.0 } else { dot(&v, &p) };
        let sup = match (j, skew) {
            (1, _) => 0.0,
            (_, false) => beta,
            (_, true) => -beta,
        };
        for i in 0..n {
            wv[i] = p[i] - alpha * z[i] - sup * z_prev[i];
        }
        m.apply(&wv, &mut y);
        let beta_next_sq = dot(&wv, &y);
        if beta_next_sq < -1e-14 * beta * beta {
            return Err(IldlError::IndefinitePreconditioner(beta_next_sq));
        }
        let beta_next = beta_next_sq.max(0.0).sqrt();

        let eps = s2 * sup;
        let delta = c1 * c2 * sup + s1 * alpha;
        let gbar = -s1 * c2 * sup + c1 * alpha;
        let gamma = gbar.hypot(beta_next);
        if gamma == 0.0 {
            status = SolveStatus::Breakdown;
            break;
        }
        let (c, s) = (gbar / gamma, beta_next / gamma);
        let phi = c * phibar;
        phibar *= -s;

        for i in 0..n {
            let wd = (v[i] - eps * w2[i] - delta * w1[i]) / gamma;
            let awd = (p[i] - eps * aw2[i] - delta * aw1[i]) / gamma;
            w2[i] = w1[i];
            w1[i] = wd;
            aw2[i] = aw1[i];
            aw1[i] = awd;
            x[i] += phi * wd;
            res[i] -= phi * awd;
        }
        if j % RESIDUAL_REFRESH == 0 {
            true_residual(a, b, &x, &mut res)?;
        }
        let mut rel = norm(&res) / bnorm;
        if rel <= params.rtol {
            true_residual(a, b, &x, &mut res)?;
            rel = norm(&res) / bnorm;
        }
        history.push(rel);
        if rel <= params.rtol {
            status = SolveStatus::Converged;
            break;
        }
        if beta_next <= f64::EPSILON * beta1 * 1e-6 {
            // Invariant subspace reached without meeting the tolerance.
            status = SolveStatus::Breakdown;
            break;
        }

        std::mem::swap(&mut z_prev, &mut z);
        for i in 0..n {
            z[i] = wv[i] / beta_next;
            v[i] = y[i] / beta_next;
        }
        beta = beta_next;
        (c2, s2) = (c1, s1);
        (c1, s1) = (c, s);
    }
    let mut r = vec![0.0; n];
    true_residual(a, b, &x, &mut r)?;
    let relres = norm(&r) / bnorm;
    Ok((x, finished(status, history, relres, method, start)))
}
