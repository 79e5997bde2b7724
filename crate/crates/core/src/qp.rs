//! Small dense strictly convex quadratic programs.
//!
//! ```text
//!     minimize     xᵀ H x − 2 cᵀ x
//!     subject to   A x ≥ b
//! ```
//!
//! Solved with a primal active-set method. A feasible starting point comes
//! from a phase-one program that shifts every row by a common slack `s` and
//! drives it to zero; it starts feasible from the unconstrained minimizer.
//! Each iteration solves the equality-constrained subproblem on the working
//! set through its KKT system, then either takes a ratio-tested step or drops
//! the constraint with the most negative multiplier. Ties go to the lowest
//! constraint index.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerances used by [`QpSolution::check_kkt`].
pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const KKT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct QpProblem {
    h: DMatrix<f64>,
    c: DVector<f64>,
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl QpProblem {
    /// Validates dimensions, symmetry and positive definiteness of `h`.
    pub fn new(h: DMatrix<f64>, c: DVector<f64>, a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let p = c.len();
        if h.nrows() != p || h.ncols() != p {
            return Err(Error::invalid(format!(
                "Hessian is {}x{}, expected {p}x{p}",
                h.nrows(),
                h.ncols()
            )));
        }
        if a.nrows() != b.len() || (a.nrows() > 0 && a.ncols() != p) {
            return Err(Error::invalid(format!(
                "constraint matrix is {}x{} with {} bounds, expected ?x{p}",
                a.nrows(),
                a.ncols(),
                b.len()
            )));
        }
        let a = if a.nrows() == 0 { DMatrix::zeros(0, p) } else { a };
        if h.iter().chain(c.iter()).chain(a.iter()).chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("quadratic program has non-finite data"));
        }
        let scale = h.amax().max(1.0);
        if (&h - h.transpose()).amax() > 1e-12 * scale {
            return Err(Error::invalid("Hessian is not symmetric"));
        }
        if p > 0 && h.clone().cholesky().is_none() {
            return Err(Error::invalid("Hessian is not positive definite"));
        }
        Ok(Self { h, c, a, b })
    }

    pub fn unconstrained(h: DMatrix<f64>, c: DVector<f64>) -> Result<Self> {
        let p = c.len();
        Self::new(h, c, DMatrix::zeros(0, p), DVector::zeros(0))
    }

    /// Same objective with extra rows appended to the constraints.
    pub fn with_constraints(&self, rows: &DMatrix<f64>, bounds: &DVector<f64>) -> Result<Self> {
        let mut a = DMatrix::zeros(self.a.nrows() + rows.nrows(), self.dim());
        a.rows_mut(0, self.a.nrows()).copy_from(&self.a);
        a.rows_mut(self.a.nrows(), rows.nrows()).copy_from(rows);
        let b = DVector::from_iterator(
            self.b.len() + bounds.len(),
            self.b.iter().chain(bounds.iter()).copied(),
        );
        Self::new(self.h.clone(), self.c.clone(), a, b)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.b.len()
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn constraints(&self) -> (&DMatrix<f64>, &DVector<f64>) {
        (&self.a, &self.b)
    }

    pub fn objective(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.h * x)) - 2.0 * self.c.dot(x)
    }

    /// Largest violation `max_i (b_i − a_iᵀx)`, or 0 when feasible.
    pub fn max_violation(&self, x: &DVector<f64>) -> f64 {
        (&self.b - &self.a * x).iter().fold(0.0, |m, v| m.max(*v))
    }
}

#[derive(Debug, Clone)]
pub struct QpSolution {
    pub x: Vec<f64>,
    /// One nonnegative multiplier per constraint row.
    pub multipliers: Vec<f64>,
    /// Indices of the working set at termination, ascending.
    pub active_set: Vec<usize>,
    pub kkt_residual: f64,
    pub objective: f64,
    pub iterations: usize,
}

/// Individual KKT measures for a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktReport {
    pub stationarity: f64,
    pub primal_violation: f64,
    pub dual_violation: f64,
    pub complementarity: f64,
}

impl KktReport {
    pub fn max(&self) -> f64 {
        self.stationarity
            .max(self.primal_violation)
            .max(self.dual_violation)
            .max(self.complementarity)
    }

    /// Primal feasibility within 1e-9, everything else within 1e-8.
    pub fn passes(&self) -> bool {
        self.primal_violation <= FEASIBILITY_TOL
            && self.stationarity < KKT_TOL
            && self.dual_violation == 0.0
            && self.complementarity < KKT_TOL
    }
}

pub fn kkt_report(p: &QpProblem, x: &[f64], multipliers: &[f64]) -> KktReport {
    let x = DVector::from_column_slice(x);
    let lambda = DVector::from_column_slice(multipliers);
    let slack = &p.a * &x - &p.b;
    let stationarity = (2.0 * (&p.h * &x) - 2.0 * &p.c - p.a.transpose() * &lambda).amax();
    let primal_violation = slack.iter().fold(0.0, |m: f64, s| m.max(-s));
    let dual_violation = lambda.iter().fold(0.0, |m: f64, l| m.max(-l));
    let complementarity = slack
        .iter()
        .zip(lambda.iter())
        .fold(0.0, |m: f64, (s, l)| m.max((s * l).abs()));
    KktReport {
        stationarity,
        primal_violation,
        dual_violation,
        complementarity,
    }
}

impl QpSolution {
    pub fn check_kkt(&self, p: &QpProblem) -> KktReport {
        kkt_report(p, &self.x, &self.multipliers)
    }
}

struct ActiveSetOutcome {
    x: DVector<f64>,
    working: Vec<usize>,
    lambda: Vec<f64>,
    iterations: usize,
}

/// Primal active-set iterations from a (near-)feasible `x`.
fn active_set(
    h: &DMatrix<f64>,
    c: &DVector<f64>,
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    mut x: DVector<f64>,
) -> Result<ActiveSetOutcome> {
    let p = c.len();
    let q = b.len();
    let scale = 1.0 + 2.0 * h.amax() + 2.0 * c.amax();
    let max_iter = 50 * (p + q) + 100;
    let mut working: Vec<usize> = Vec::new();

    for iter in 0..max_iter {
        let w = working.len();
        let n = p + w;
        let grad = 2.0 * (h * &x) - 2.0 * c;
        let mut kkt = DMatrix::zeros(n, n);
        kkt.view_mut((0, 0), (p, p)).copy_from(&(2.0 * h));
        for (k, &row) in working.iter().enumerate() {
            for j in 0..p {
                kkt[(p + k, j)] = a[(row, j)];
                kkt[(j, p + k)] = -a[(row, j)];
            }
        }
        let mut rhs = DVector::zeros(n);
        rhs.rows_mut(0, p).copy_from(&(-&grad));
        let sol = kkt
            .lu()
            .solve(&rhs)
            .ok_or(Error::SingularMatrix { condition: f64::INFINITY })?;
        let step = sol.rows(0, p).into_owned();
        let lambda: Vec<f64> = sol.rows(p, w).iter().copied().collect();

        // A full working set pins x; whatever step the solve returns is noise.
        let step_tol = 1e-10 * (1.0 + x.amax());
        if w >= p || step.amax() <= step_tol {
            if w < p {
                x += &step;
            }
            let mult_tol = 1e-12 * scale;
            let most_negative = lambda
                .iter()
                .enumerate()
                .filter(|(_, l)| **l < -mult_tol)
                .min_by(|(ia, la), (ib, lb)| {
                    la.total_cmp(lb).then(working[*ia].cmp(&working[*ib]))
                });
            match most_negative {
                None => {
                    return Ok(ActiveSetOutcome {
                        x,
                        working,
                        lambda,
                        iterations: iter + 1,
                    })
                }
                Some((k, _)) => {
                    working.remove(k);
                }
            }
            continue;
        }

        let mut alpha = 1.0;
        let mut blocking = None;
        for i in 0..q {
            if working.contains(&i) {
                continue;
            }
            let row = a.row(i);
            let ap = row.dot(&step.transpose());
            if ap < -1e-14 * (1.0 + row.amax() * step.amax()) {
                let slack = (row.dot(&x.transpose()) - b[i]).max(0.0);
                let ai = slack / -ap;
                if ai < alpha {
                    alpha = ai;
                    blocking = Some(i);
                }
            }
        }
        x += alpha * &step;
        if let Some(i) = blocking {
            working.push(i);
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// Finds a point with `A x ≥ b` near the unconstrained minimizer `x_u`.
///
/// Solves `min δ(‖x − x_u‖² + s²) + s` subject to `A x + s ≥ b`, `s ≥ 0`,
/// starting from `(x_u, max violation)`. The linear term in `s` is an exact
/// penalty once `δ` is small enough, so a positive optimal `s` after
/// shrinking `δ` certifies infeasibility.
fn phase_one(p: &QpProblem, xu: &DVector<f64>) -> Result<DVector<f64>> {
    let n = p.dim();
    let q = p.num_constraints();
    let s0 = p.max_violation(xu);
    let mut a = DMatrix::zeros(q + 1, n + 1);
    a.view_mut((0, 0), (q, n)).copy_from(&p.a);
    for i in 0..q {
        a[(i, n)] = 1.0;
    }
    a[(q, n)] = 1.0;
    let mut b = DVector::zeros(q + 1);
    b.rows_mut(0, q).copy_from(&p.b);

    let row_scale = p
        .a
        .row_iter()
        .map(|r| r.norm())
        .filter(|v| *v > 0.0)
        .fold(f64::INFINITY, f64::min)
        .min(1.0);
    let mut delta = 1e-3 * row_scale * row_scale / (1.0 + s0 * s0 + xu.norm_squared());
    let mut best: Option<(DVector<f64>, f64)> = None;
    for _ in 0..4 {
        let h = DMatrix::identity(n + 1, n + 1) * delta;
        let mut c = DVector::zeros(n + 1);
        c.rows_mut(0, n).copy_from(&(delta * xu));
        c[n] = -0.5;
        let mut start = DVector::zeros(n + 1);
        start.rows_mut(0, n).copy_from(xu);
        start[n] = s0;
        let out = active_set(&h, &c, &a, &b, start)?;
        let x = out.x.rows(0, n).into_owned();
        let viol = p.max_violation(&x);
        if viol <= FEASIBILITY_TOL * (1.0 + p.b.amax()) * 1e-3 {
            return Ok(x);
        }
        if best.as_ref().is_none_or(|(_, v)| viol < *v) {
            best = Some((x, viol));
        }
        delta *= 1e-4;
    }
    let (x, _) = best.expect("phase one ran at least once");
    let slack = &p.a * &x - &p.b;
    let (row, violation) = slack
        .iter()
        .enumerate()
        .map(|(i, s)| (i, -s))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    Err(Error::Infeasible { row, violation })
}

/// Global minimizer of a strictly convex QP with its KKT certificate.
pub fn solve_qp(p: &QpProblem) -> Result<QpSolution> {
    let n = p.dim();
    let q = p.num_constraints();
    if n == 0 {
        return Ok(QpSolution {
            x: vec![],
            multipliers: vec![0.0; q],
            active_set: vec![],
            kkt_residual: 0.0,
            objective: 0.0,
            iterations: 0,
        });
    }
    let xu = p
        .h
        .clone()
        .cholesky()
        .ok_or_else(|| Error::invalid("Hessian is not positive definite"))?
        .solve(&p.c);
    let start = if p.max_violation(&xu) == 0.0 {
        xu
    } else {
        phase_one(p, &xu)?
    };
    let out = active_set(&p.h, &p.c, &p.a, &p.b, start)?;

    let mut multipliers = vec![0.0; q];
    for (&row, &l) in out.working.iter().zip(&out.lambda) {
        multipliers[row] = l.max(0.0);
    }
    let mut active_set = out.working;
    active_set.sort_unstable();
    let x: Vec<f64> = out.x.iter().copied().collect();
    let report = kkt_report(p, &x, &multipliers);
    Ok(QpSolution {
        objective: p.objective(&out.x),
        kkt_residual: report.max(),
        x,
        multipliers,
        active_set,
        iterations: out.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vecd(v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(v)
    }

    fn random_pd(rng: &mut impl Rng, p: usize) -> DMatrix<f64> {
        let m = DMatrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        &m * m.transpose() + DMatrix::identity(p, p) * 0.1
    }

    #[test]
    fn unconstrained_minimizer() {
        let p = QpProblem::unconstrained(DMatrix::identity(2, 2), vecd(&[1.0, 1.0])).unwrap();
        let s = solve_qp(&p).unwrap();
        assert_eq!(s.x, vec![1.0, 1.0]);
        assert!(s.active_set.is_empty());
    }

    #[test]
    fn single_bound_hand_kkt() {
        // min x² + 4x s.t. x ≥ 0: unconstrained minimizer −2 is cut off.
        let p = QpProblem::new(
            DMatrix::identity(1, 1),
            vecd(&[-2.0]),
            DMatrix::identity(1, 1),
            vecd(&[0.0]),
        )
        .unwrap();
        let s = solve_qp(&p).unwrap();
        assert!(s.x[0].abs() < 1e-12);
        assert!((s.multipliers[0] - 4.0).abs() < 1e-10);
        assert_eq!(s.active_set, vec![0]);
        assert!(s.check_kkt(&p).passes());
    }

    #[test]
    fn matches_brute_force_on_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let h = random_pd(&mut rng, 3);
            let c = DVector::from_fn(3, |_, _| rng.random_range(-2.0..2.0));
            let p = QpProblem::new(h, c, DMatrix::identity(3, 3), DVector::from_element(3, 0.1)).unwrap();
            let s = solve_qp(&p).unwrap();
            assert!(s.check_kkt(&p).passes(), "{:?}", s.check_kkt(&p));

            // Every subset of bounds fixed at 0.1, the rest solved from
            // stationarity; the best feasible candidate is the optimum.
            let mut best = (f64::INFINITY, vecd(&[0.1; 3]));
            for mask in 0..8u32 {
                let free: Vec<usize> = (0..3).filter(|&i| mask & (1 << i) == 0).collect();
                let mut x = vecd(&[0.1; 3]);
                if !free.is_empty() {
                    let hf = DMatrix::from_fn(free.len(), free.len(), |a, b| p.h[(free[a], free[b])]);
                    let rhs = DVector::from_fn(free.len(), |a, _| {
                        p.c[free[a]] - (0..3).filter(|j| !free.contains(j)).map(|j| p.h[(free[a], j)] * 0.1).sum::<f64>()
                    });
                    let xf = hf.lu().solve(&rhs).unwrap();
                    for (a, &i) in free.iter().enumerate() {
                        x[i] = xf[a];
                    }
                }
                if x.iter().all(|&v| v >= 0.1 - 1e-12) && p.objective(&x) < best.0 {
                    best = (p.objective(&x), x);
                }
            }
            for d in 0..3 {
                assert!((s.x[d] - best.1[d]).abs() < 1e-9, "{:?} vs {:?}", s.x, best.1);
            }
        }
    }

    #[test]
    fn infeasible_reports_row() {
        // x ≥ 1 and −x ≥ 0 cannot both hold.
        let p = QpProblem::new(
            DMatrix::identity(1, 1),
            vecd(&[0.0]),
            DMatrix::from_row_slice(2, 1, &[1.0, -1.0]),
            vecd(&[1.0, 0.0]),
        )
        .unwrap();
        match solve_qp(&p).unwrap_err() {
            Error::Infeasible { violation, .. } => assert!(violation > 0.1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_bad_hessian() {
        let not_pd = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(QpProblem::unconstrained(not_pd, vecd(&[0.0, 0.0])).is_err());
        let not_sym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(QpProblem::unconstrained(not_sym, vecd(&[0.0, 0.0])).is_err());
        assert!(QpProblem::new(
            DMatrix::identity(2, 2),
            vecd(&[0.0, 0.0]),
            DMatrix::zeros(1, 3),
            vecd(&[0.0])
        )
        .is_err());
    }

    #[test]
    fn permuted_constraints_give_same_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.random_range(2..=5);
            let q = rng.random_range(1..=8);
            let h = random_pd(&mut rng, n);
            let c = DVector::from_fn(n, |_, _| rng.random_range(-3.0..3.0));
            let a = DMatrix::from_fn(q, n, |_, _| rng.random_range(-1.0..1.0));
            // Feasible by construction: the origin satisfies every row.
            let b = DVector::from_fn(q, |_, _| rng.random_range(-1.0..0.0));
            let p = QpProblem::new(h.clone(), c.clone(), a.clone(), b.clone()).unwrap();
            let mut perm: Vec<usize> = (0..q).collect();
            perm.reverse();
            let ap = DMatrix::from_fn(q, n, |i, j| a[(perm[i], j)]);
            let bp = DVector::from_fn(q, |i, _| b[perm[i]]);
            let pp = QpProblem::new(h, c, ap, bp).unwrap();
            let s1 = solve_qp(&p).unwrap();
            let s2 = solve_qp(&pp).unwrap();
            for (u, v) in s1.x.iter().zip(&s2.x) {
                assert!((u - v).abs() < 1e-8);
            }
            assert!(s1.check_kkt(&p).passes());
        }
    }

    #[test]
    fn adding_constraints_never_lowers_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(1..=5);
            let h = random_pd(&mut rng, n);
            let c = DVector::from_fn(n, |_, _| rng.random_range(-3.0..3.0));
            let mut p = QpProblem::unconstrained(h, c).unwrap();
            let mut last = solve_qp(&p).unwrap().objective;
            for _ in 0..5 {
                let row = DMatrix::from_fn(1, n, |_, _| rng.random_range(-1.0..1.0));
                let bound = DVector::from_element(1, rng.random_range(-1.0..0.0));
                p = p.with_constraints(&row, &bound).unwrap();
                let s = solve_qp(&p).unwrap();
                assert!(s.objective >= last - 1e-12);
                last = s.objective;
            }
        }
    }

    #[test]
    fn feasible_unconstrained_minimizer_is_returned() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.random_range(1..=6);
            let h = random_pd(&mut rng, n);
            let c = DVector::from_fn(n, |_, _| rng.random_range(-3.0..3.0));
            let xu = h.clone().lu().solve(&c).unwrap();
            // Bounds strictly below the unconstrained minimizer.
            let p = QpProblem::new(h, c, DMatrix::identity(n, n), xu.add_scalar(-1.0)).unwrap();
            let s = solve_qp(&p).unwrap();
            assert!(s.active_set.is_empty());
            for (u, v) in s.x.iter().zip(xu.iter()) {
                assert!((u - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Three constraints active at the origin in two dimensions.
        let p = QpProblem::new(
            DMatrix::identity(2, 2),
            vecd(&[-1.0, -1.0]),
            DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]),
            vecd(&[0.0, 0.0, 0.0]),
        )
        .unwrap();
        let s = solve_qp(&p).unwrap();
        assert!(s.x[0].abs() < 1e-12 && s.x[1].abs() < 1e-12);
        assert!(s.check_kkt(&p).passes(), "{:?}", s.check_kkt(&p));
    }
}
