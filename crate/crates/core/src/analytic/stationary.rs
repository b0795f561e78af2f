use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-12;

/// Stationary distribution of a finite row-stochastic matrix by direct
/// linear solve of `pi P = pi`, with the last balance equation replaced by
/// `sum(pi) = 1`.
///
/// Fails when `p` is not square and row-stochastic, when the system is
/// singular (no unique stationary law), or when the solution's residual
/// `max |pi P - pi|` exceeds `1e-12`.
pub fn steady_state_numeric(p: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = p.nrows();
    if n == 0 || p.ncols() != n {
        return Err(Error::Numeric(format!(
            "transition matrix must be square and non-empty, got {}x{}",
            p.nrows(),
            p.ncols()
        )));
    }
    for (r, row) in p.row_iter().enumerate() {
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Numeric(format!("row {r} has a negative or non-finite entry")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::Numeric(format!("row {r} sums to {sum}, not 1")));
        }
    }

    let mut a = p.transpose() - DMatrix::<f64>::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut rhs = DVector::<f64>::zeros(n);
    rhs[n - 1] = 1.0;

    let pi = a.lu().solve(&rhs).ok_or_else(|| {
        Error::Numeric(format!(
            "balance system is singular for this {n}x{n} matrix; the chain has no unique stationary distribution (reducible?)"
        ))
    })?;
    if pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("linear solve produced non-finite values".into()));
    }

    let residual = (pi.transpose() * p - pi.transpose()).amax();
    if residual > RESIDUAL_TOL {
        return Err(Error::Numeric(format!(
            "stationary residual {residual:e} exceeds {RESIDUAL_TOL:e}; the matrix is likely ill-conditioned or reducible"
        )));
    }
    Ok(pi.iter().copied().collect())
}
