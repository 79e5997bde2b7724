//! Dense square solves with a condition check.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Condition estimates above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number `‖M‖₁ ‖M⁻¹‖₁`, infinite if `M` is singular.
pub fn condition_estimate(m: &DMatrix<f64>) -> f64 {
    match m.clone().lu().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Solves `M X = B` for one or more right-hand-side columns.
///
/// LU with partial pivoting plus one step of iterative refinement. Fails
/// with [`Error::SingularMatrix`] when the condition estimate exceeds
/// [`MAX_CONDITION`] or the final residual is not below `1e-8 ‖B‖∞`.
pub fn solve_linear(m: &DMatrix<f64>, rhs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::invalid(format!(
            "solve_linear needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if rhs.nrows() != m.nrows() {
        return Err(Error::invalid(format!(
            "right-hand side has {} rows, matrix has {}",
            rhs.nrows(),
            m.nrows()
        )));
    }
    if m.iter().chain(rhs.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("linear system has non-finite entries"));
    }
    if m.nrows() == 0 {
        return Ok(rhs.clone());
    }
    let lu = m.clone().lu();
    let inv = lu
        .try_inverse()
        .ok_or(Error::SingularMatrix { condition: f64::INFINITY })?;
    let condition = norm1(m) * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularMatrix { condition });
    }
    let mut x = lu
        .solve(rhs)
        .ok_or(Error::SingularMatrix { condition: f64::INFINITY })?;
    let r = rhs - m * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let residual = (rhs - m * &x).amax();
    if residual > 1e-8 * rhs.amax() && residual > f64::MIN_POSITIVE {
        return Err(Error::SingularMatrix { condition });
    }
    Ok(x)
}

/// Single right-hand-side convenience wrapper around [`solve_linear`].
pub fn solve_linear_vec(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let b = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
    let x = solve_linear(m, &b)?;
    Ok(DVector::from_column_slice(x.as_slice()))
}
