//! Bernstein polynomials, rational basis functions and Gram integrals.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest `n` accepted by [`binomial`].
pub const MAX_BINOMIAL_N: usize = 64;

/// Binomial coefficient `C(n, k)` for `0 <= k <= n <= 64`.
///
/// Computed exactly in integer arithmetic; the conversion to `f64` is the
/// only rounding (none at all while `C(n, k) < 2^53`).
pub fn binomial(n: usize, k: i64) -> Result<f64> {
    if n > MAX_BINOMIAL_N {
        return Err(Error::invalid(format!(
            "binomial n = {n} exceeds {MAX_BINOMIAL_N}"
        )));
    }
    if k < 0 || k as usize > n {
        return Err(Error::invalid(format!("binomial k = {k} outside 0..={n}")));
    }
    Ok(binom(n, k as usize))
}

/// Unchecked `C(n, k)`, zero when `k > n`.
pub(crate) fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= MAX_BINOMIAL_N {
        let mut c: u128 = 1;
        for i in 0..k {
            // c * (n - i) is divisible by (i + 1) at every step
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        c as f64
    } else {
        (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
    }
}

fn check_param(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("parameter t = {t} outside [0, 1]")));
    }
    Ok(())
}

/// `B_i^n(t) = C(n, i) t^i (1 - t)^(n - i)`.
pub fn bernstein(n: usize, i: i64, t: f64) -> Result<f64> {
    if i < 0 || i as usize > n {
        return Err(Error::invalid(format!("basis index {i} outside 0..={n}")));
    }
    check_param(t)?;
    Ok(bernstein_all(n, t)[i as usize])
}

/// All `n + 1` Bernstein basis values at `t`.
///
/// Powers of `t` are accumulated upward and powers of `1 - t` downward, so
/// every value is a product of `n` factors with no cancellation.
pub fn bernstein_all(n: usize, t: f64) -> Vec<f64> {
    let s = 1.0 - t;
    let mut out = vec![0.0; n + 1];
    let mut tp = 1.0;
    for (i, o) in out.iter_mut().enumerate() {
        *o = binom(n, i) * tp;
        tp *= t;
    }
    let mut sp = 1.0;
    for o in out.iter_mut().rev() {
        *o *= sp;
        sp *= s;
    }
    out
}

/// `R_i^n(t) = ω_i B_i^n(t) / Σ_j ω_j B_j^n(t)`.
pub fn rational_basis(weights: &[f64], i: i64, t: f64) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::invalid("rational basis needs at least one weight"));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::invalid(format!("weights must be positive, got {w}")));
    }
    let n = weights.len() - 1;
    if i < 0 || i as usize > n {
        return Err(Error::invalid(format!("basis index {i} outside 0..={n}")));
    }
    check_param(t)?;
    Ok(rational_basis_all(weights, t)[i as usize])
}

pub(crate) fn rational_basis_all(weights: &[f64], t: f64) -> Vec<f64> {
    let mut b = bernstein_all(weights.len() - 1, t);
    let mut denom = 0.0;
    for (bi, w) in b.iter_mut().zip(weights) {
        *bi *= w;
        denom += *bi;
    }
    b.iter_mut().for_each(|v| *v /= denom);
    b
}

/// `H_ij = ∫_0^1 B_i^m B_j^m dt`, an `(m+1) x (m+1)` SPD matrix.
pub fn gram_same(m: usize) -> DMatrix<f64> {
    gram_cross(m, m)
}

/// `S_ij = ∫_0^1 B_i^m B_j^n dt = C(m,i) C(n,j) / ((m+n+1) C(m+n, i+j))`.
pub fn gram_cross(m: usize, n: usize) -> DMatrix<f64> {
    let scale = (m + n + 1) as f64;
    DMatrix::from_fn(m + 1, n + 1, |i, j| {
        binom(m, i) * binom(n, j) / (scale * binom(m + n, i + j))
    })
}

/// Matrix taking degree-`m` Bernstein coefficients to the equivalent
/// degree-`n` coefficients (`n >= m`):
/// `E_ij = C(m,j) C(n-m, i-j) / C(n, i)`.
pub fn elevation_matrix(m: usize, n: usize) -> DMatrix<f64> {
    assert!(n >= m, "cannot elevate degree {m} to {n}");
    let s = n - m;
    DMatrix::from_fn(n + 1, m + 1, |i, j| {
        if i < j || i - j > s {
            0.0
        } else {
            binom(m, j) * binom(s, i - j) / binom(n, i)
        }
    })
}

/// A polynomial in Bernstein form, `Σ b_i B_i^n(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly {
    coeffs: Vec<f64>,
}

impl BernsteinPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("Bernstein polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("Bernstein coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        dot_basis(&self.coeffs, t)
    }

    /// Same polynomial written in degree `degree + s`.
    pub fn elevate(&self, s: usize) -> BernsteinPoly {
        let e = elevation_matrix(self.degree(), self.degree() + s);
        let coeffs = (0..e.nrows())
            .map(|i| (0..e.ncols()).map(|j| e[(i, j)] * self.coeffs[j]).sum())
            .collect();
        BernsteinPoly { coeffs }
    }

    /// Derivative, in degree `n - 1` (zero polynomial for constants).
    pub fn derivative(&self) -> BernsteinPoly {
        let n = self.degree();
        if n == 0 {
            return BernsteinPoly { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .windows(2)
            .map(|w| n as f64 * (w[1] - w[0]))
            .collect();
        BernsteinPoly { coeffs }
    }

    /// `∫_0^1 p(t) dt`, the coefficient mean.
    pub fn integral(&self) -> f64 {
        self.coeffs.iter().sum::<f64>() / self.coeffs.len() as f64
    }
}

pub(crate) fn dot_basis(coeffs: &[f64], t: f64) -> f64 {
    bernstein_all(coeffs.len() - 1, t)
        .iter()
        .zip(coeffs)
        .map(|(b, c)| b * c)
        .sum()
}
