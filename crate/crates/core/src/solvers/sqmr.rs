//! Symmetric QMR with an indefinite preconditioner.
//!
//! A skew-symmetric system `A x = b` is solved through the symmetric
//! system `[[0, A], [-A, 0]] [y; x] = [b; c]` with the preconditioner
//! `[[0, M], [-M, 0]]`, whose inverse is `[[0, -M^{-1}], [M^{-1}, 0]]`. The
//! preconditioned operator is `diag(M^{-1} A, M^{-1} A)`, so an exact
//! factorization still converges in one step.

use std::time::Instant;

use super::{
    check_dims, dot, finished, norm, LinearOperator, Preconditioner, SolveReport, SolveStatus, SolverParams,
    BREAKDOWN_TOL, RESIDUAL_REFRESH,
};
use crate::error::{IldlError, Result};

pub fn sqmr_solve(
    a: &dyn LinearOperator,
    m: &dyn Preconditioner,
    b: &[f64],
    params: &SolverParams,
) -> Result<(Vec<f64>, SolveReport)> {
    params.validate()?;
    check_dims(a, m, b)?;
    let start = Instant::now();
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], finished(SolveStatus::Converged, vec![0.0], 0.0, "sqmr", start)));
    }
    if !a.kind().is_skew() {
        let op = |x: &[f64], y: &mut [f64]| a.apply(x, y);
        let pc = |r: &[f64], z: &mut [f64]| m.apply(r, z);
        let measure = |r: &[f64]| norm(r) / bnorm;
        let (x, status, history) = sqmr_core(n, &op, &pc, b, params, &measure)?;
        let relres = final_relres(a, b, &x, bnorm)?;
        return Ok((x, finished(status, history, relres, "sqmr", start)));
    }

    // Doubled symmetric form for skew operators.
    let op = |x: &[f64], y: &mut [f64]| {
        // [[0, A], [-A, 0]] [x0; x1] = [A x1; -A x0]
        let (x0, x1) = x.split_at(n);
        let (y0, y1) = y.split_at_mut(n);
        a.apply(x1, y0);
        a.apply(x0, y1);
        y1.iter_mut().for_each(|v| *v = -*v);
    };
    let pc = |r: &[f64], z: &mut [f64]| {
        let (r0, r1) = r.split_at(n);
        let (z0, z1) = z.split_at_mut(n);
        m.apply(r1, z0);
        z0.iter_mut().for_each(|v| *v = -*v);
        m.apply(r0, z1);
    };
    // The second block row only keeps the recurrence alive: with c = -b
    // (or any multiple of b) the starting r^T M~^{-1} r = 2 c^T M^{-1} b
    // vanishes because M^{-1} is skew. c parallel to M^{-1} b makes it
    // positive; only the first half of the residual, b - A x, is tracked.
    let mut mb = vec![0.0; n];
    m.apply(b, &mut mb);
    let mbn = norm(&mb);
    if !(mbn > 0.0 && mbn.is_finite()) {
        return Err(IldlError::NonFinite("preconditioner"));
    }
    let mut big_b = b.to_vec();
    big_b.extend(mb.iter().map(|v| v * bnorm / mbn));
    let measure = |r: &[f64]| norm(&r[..n]) / bnorm;
    let (big_x, status, history) = sqmr_core(2 * n, &op, &pc, &big_b, params, &measure)?;
    let x = big_x[n..].to_vec();
    let relres = final_relres(a, b, &x, bnorm)?;
    Ok((x, finished(status, history, relres, "sqmr-skew-doubled", start)))
}

fn final_relres(a: &dyn LinearOperator, b: &[f64], x: &[f64], bnorm: f64) -> Result<f64> {
    let mut r = vec![0.0; b.len()];
    super::true_residual(a, b, x, &mut r)?;
    Ok(norm(&r) / bnorm)
}

type Apply<'a> = dyn Fn(&[f64], &mut [f64]) + 'a;

/// Returns the best iterate seen, the status and the history of
/// `measure(b - A x_k)`.
fn sqmr_core(
    n: usize,
    a: &Apply<'_>,
    m: &Apply<'_>,
    b: &[f64],
    params: &SolverParams,
    measure: &dyn Fn(&[f64]) -> f64,
) -> Result<(Vec<f64>, SolveStatus, Vec<f64>)> {
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut res = b.to_vec();
    let mut t = vec![0.0; n];
    let mut q = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut ad = vec![0.0; n];
    m(&r, &mut q);
    check(&q, "preconditioner")?;
    let mut tau = norm(&r);
    let mut theta = 0.0f64;
    let mut rho = dot(&r, &q);

    let mut history = vec![measure(&res)];
    let mut best = (history[0], x.clone());
    let mut status = SolveStatus::MaxIter;
    for iter in 1..=params.max_iter {
        if rho.abs() < BREAKDOWN_TOL {
            status = SolveStatus::Breakdown;
            break;
        }
        a(&q, &mut t);
        check(&t, "operator")?;
        let sigma = dot(&q, &t);
        if sigma.abs() < BREAKDOWN_TOL {
            status = SolveStatus::Breakdown;
            break;
        }
        let alpha = rho / sigma;
        for (ri, ti) in r.iter_mut().zip(&t) {
            *ri -= alpha * ti;
        }
        let theta_old = theta;
        theta = norm(&r) / tau;
        let c = 1.0 / (1.0 + theta * theta).sqrt();
        tau *= theta * c;
        let f1 = c * c * theta_old * theta_old;
        let f2 = c * c * alpha;
        for i in 0..n {
            d[i] = f1 * d[i] + f2 * q[i];
            ad[i] = f1 * ad[i] + f2 * t[i];
            x[i] += d[i];
            res[i] -= ad[i];
        }
        if iter % RESIDUAL_REFRESH == 0 {
            a(&x, &mut res);
            for (ri, bi) in res.iter_mut().zip(b) {
                *ri = bi - *ri;
            }
            check(&res, "operator")?;
        }
        let mut rel = measure(&res);
        if rel <= params.rtol {
            // Confirm with a fresh residual before stopping.
            a(&x, &mut res);
            for (ri, bi) in res.iter_mut().zip(b) {
                *ri = bi - *ri;
            }
            rel = measure(&res);
        }
        history.push(rel);
        if rel < best.0 {
            best = (rel, x.clone());
        }
        if rel <= params.rtol {
            status = SolveStatus::Converged;
            break;
        }
        m(&r, &mut u);
        check(&u, "preconditioner")?;
        let rho_new = dot(&r, &u);
        let beta = rho_new / rho;
        for (qi, ui) in q.iter_mut().zip(&u) {
            *qi = ui + beta * *qi;
        }
        rho = rho_new;
    }
    Ok((best.1, status, history))
}

fn check(v: &[f64], what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(IldlError::NonFinite(what))
    }
}
