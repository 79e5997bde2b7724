//! Disk rational Bézier curves.
//!
//! A degree-`n` curve has control disks `(p_i)_{r_i}` and positive weights
//! `ω_i`. Its center is the rational Bézier curve
//! `Σ ω_i p_i B_i^n(t) / Σ ω_i B_i^n(t)` and its radius is the plain
//! polynomial `Σ r_i B_i^n(t)`, so weights move the center but never the
//! radius.

use crate::bernstein::{bernstein_all, binom, elevation_matrix, BernsteinPoly};
use crate::disk::{Disk, Point};
use crate::error::{Error, Result};

/// Absolute tolerance for [`DiskRationalBezier::try_exact_reduce`].
pub const EXACT_REDUCTION_TOL: f64 = 1e-8;

/// The disk swept by a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub t: f64,
    pub center: Point,
    pub radius: f64,
}

impl CurvePoint {
    pub fn disk(&self) -> Result<Disk> {
        Disk::new(self.center.x, self.center.y, self.radius)
    }
}

/// One entry `(p_i^j, ω_i^j, r_i^j)` of the de Casteljau triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasteljauNode {
    pub point: Point,
    pub weight: f64,
    pub radius: f64,
}

/// The full de Casteljau triangle at one parameter.
///
/// `levels[j][i]` holds `(p_i^j, ω_i^j, r_i^j)` for `i = 0..=n-j`; level 0 is
/// the control polygon and `levels[n][0]` the curve point.
#[derive(Debug, Clone)]
pub struct DeCasteljau {
    pub t: f64,
    pub levels: Vec<Vec<CasteljauNode>>,
}

impl DeCasteljau {
    pub fn apex(&self) -> CurvePoint {
        let node = self.levels.last().expect("triangle has at least one level")[0];
        CurvePoint {
            t: self.t,
            center: node.point,
            radius: node.radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskRationalBezier {
    disks: Vec<Disk>,
    weights: Vec<f64>,
}

fn check_param(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::invalid(format!("parameter t = {t} outside [0, 1]")));
    }
    Ok(())
}

impl DiskRationalBezier {
    pub fn new(disks: Vec<Disk>, weights: Vec<f64>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::invalid("curve needs at least one control disk"));
        }
        if disks.len() != weights.len() {
            return Err(Error::invalid(format!(
                "{} control disks but {} weights",
                disks.len(),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::invalid(format!("weights[{i}] = {w} must be positive")));
        }
        Ok(Self { disks, weights })
    }

    /// Builds a curve from parallel slices of centers, radii and weights.
    pub fn from_parts(centers: &[Point], radii: &[f64], weights: &[f64]) -> Result<Self> {
        if centers.len() != radii.len() {
            return Err(Error::invalid(format!(
                "{} centers but {} radii",
                centers.len(),
                radii.len()
            )));
        }
        let disks = centers
            .iter()
            .zip(radii)
            .map(|(p, &r)| Disk::new(p.x, p.y, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(disks, weights.to_vec())
    }

    pub fn degree(&self) -> usize {
        self.disks.len() - 1
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn centers(&self) -> Vec<Point> {
        self.disks.iter().map(Disk::center).collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.disks.iter().map(Disk::radius).collect()
    }

    pub fn weight_poly(&self) -> BernsteinPoly {
        BernsteinPoly::new(self.weights.clone()).expect("weights validated")
    }

    pub fn radius_poly(&self) -> BernsteinPoly {
        BernsteinPoly::new(self.radii()).expect("radii validated")
    }

    /// Center curve at `t`; `t` is not range-checked.
    pub fn center_at(&self, t: f64) -> Point {
        // (ω x) / ω can round away from x, so the ends are returned as is.
        if t == 0.0 {
            return self.disks[0].center();
        }
        if t == 1.0 {
            return self.disks[self.degree()].center();
        }
        let b = bernstein_all(self.degree(), t);
        let (mut x, mut y, mut w) = (0.0, 0.0, 0.0);
        for ((bi, d), wi) in b.iter().zip(&self.disks).zip(&self.weights) {
            let f = bi * wi;
            x += f * d.cx();
            y += f * d.cy();
            w += f;
        }
        Point::new(x / w, y / w)
    }

    /// Radius polynomial at `t`; `t` is not range-checked.
    pub fn radius_at(&self, t: f64) -> f64 {
        bernstein_all(self.degree(), t)
            .iter()
            .zip(&self.disks)
            .map(|(b, d)| b * d.radius())
            .sum()
    }

    /// Basis-form evaluation: `Σ p_i R_i^n(t)` and `Σ r_i B_i^n(t)`.
    pub fn evaluate(&self, t: f64) -> Result<CurvePoint> {
        check_param(t)?;
        Ok(CurvePoint {
            t,
            center: self.center_at(t),
            radius: self.radius_at(t),
        })
    }

    /// Derivative of the center curve, `(x' ω − x ω') / ω²`.
    pub fn center_derivative(&self, t: f64) -> Point {
        let n = self.degree();
        if n == 0 {
            return Point::ORIGIN;
        }
        let b = bernstein_all(n, t);
        let db = bernstein_all(n - 1, t);
        let (mut x, mut y, mut w) = (0.0, 0.0, 0.0);
        for ((bi, d), wi) in b.iter().zip(&self.disks).zip(&self.weights) {
            x += bi * wi * d.cx();
            y += bi * wi * d.cy();
            w += bi * wi;
        }
        let (mut dx, mut dy, mut dw) = (0.0, 0.0, 0.0);
        for (i, dbi) in db.iter().enumerate() {
            let (w0, w1) = (self.weights[i], self.weights[i + 1]);
            let (p0, p1) = (self.disks[i].center(), self.disks[i + 1].center());
            dx += dbi * (w1 * p1.x - w0 * p0.x);
            dy += dbi * (w1 * p1.y - w0 * p0.y);
            dw += dbi * (w1 - w0);
        }
        let nf = n as f64;
        let (dx, dy, dw) = (nf * dx, nf * dy, nf * dw);
        Point::new((dx * w - x * dw) / (w * w), (dy * w - y * dw) / (w * w))
    }

    /// Runs the three de Casteljau recurrences (weighted centers, weights,
    /// radii) and keeps the whole triangle.
    pub fn de_casteljau(&self, t: f64) -> Result<DeCasteljau> {
        check_param(t)?;
        Ok(self.casteljau_unchecked(t))
    }

    fn casteljau_unchecked(&self, t: f64) -> DeCasteljau {
        let s = 1.0 - t;
        let base: Vec<CasteljauNode> = self
            .disks
            .iter()
            .zip(&self.weights)
            .map(|(d, &w)| CasteljauNode {
                point: d.center(),
                weight: w,
                radius: d.radius(),
            })
            .collect();
        let mut levels = vec![base];
        for _ in 0..self.degree() {
            let prev = levels.last().unwrap();
            let next = prev
                .windows(2)
                .map(|pair| {
                    let (a, b) = (pair[0], pair[1]);
                    let weight = s * a.weight + t * b.weight;
                    let point = a.point * (s * a.weight / weight) + b.point * (t * b.weight / weight);
                    CasteljauNode {
                        point,
                        weight,
                        radius: s * a.radius + t * b.radius,
                    }
                })
                .collect();
            levels.push(next);
        }
        DeCasteljau { t, levels }
    }

    fn from_nodes(nodes: impl Iterator<Item = CasteljauNode>) -> Result<Self> {
        let (disks, weights): (Vec<_>, Vec<_>) = nodes
            .map(|nd| Disk::new(nd.point.x, nd.point.y, nd.radius).map(|d| (d, nd.weight)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Self::new(disks, weights)
    }

    /// Splits at `cut` into the pieces over `[0, cut]` and `[cut, 1]`, each
    /// reparametrized to `[0, 1]`.
    pub fn subdivide(&self, cut: f64) -> Result<(Self, Self)> {
        if !(cut > 0.0 && cut < 1.0) {
            return Err(Error::invalid(format!(
                "subdivision parameter {cut} outside (0, 1)"
            )));
        }
        let tri = self.casteljau_unchecked(cut);
        let n = self.degree();
        let left = Self::from_nodes((0..=n).map(|i| tri.levels[i][0]))?;
        let right = Self::from_nodes((0..=n).map(|i| tri.levels[n - i][i]))?;
        Ok((left, right))
    }

    /// The same curve written in degree `n + s`.
    pub fn elevate(&self, s: usize) -> Result<Self> {
        if s == 0 {
            return Ok(self.clone());
        }
        let n = self.degree();
        let e = elevation_matrix(n, n + s);
        let mut disks = Vec::with_capacity(n + s + 1);
        let mut weights = Vec::with_capacity(n + s + 1);
        for i in 0..=n + s {
            let (mut w, mut x, mut y, mut r) = (0.0, 0.0, 0.0, 0.0);
            for j in i.saturating_sub(s)..=i.min(n) {
                let f = e[(i, j)];
                let d = &self.disks[j];
                w += f * self.weights[j];
                x += f * self.weights[j] * d.cx();
                y += f * self.weights[j] * d.cy();
                r += f * d.radius();
            }
            disks.push(Disk::new(x / w, y / w, r)?);
            weights.push(w);
        }
        Self::new(disks, weights)
    }

    /// Looks for a degree-`m` curve representing exactly the same disk curve.
    ///
    /// Radii come from the overdetermined elevation system. Weights and
    /// weighted centers are back-substituted from the leading rows of the
    /// elevation map (so `ω̌_0 = ω_0`), and the candidate is accepted only if
    /// the product identity `ω̌(t) x(t) = ω(t) x̌(t)` holds coefficient-wise
    /// in degree `n + m` within [`EXACT_REDUCTION_TOL`].
    pub fn try_exact_reduce(&self, m: usize) -> Result<Option<Self>> {
        let n = self.degree();
        if m == 0 || m >= n {
            return Err(Error::invalid(format!(
                "exact reduction target {m} must satisfy 1 <= m < {n}"
            )));
        }
        let tol = EXACT_REDUCTION_TOL;
        let e = elevation_matrix(m, n);

        let radii = nalgebra::DVector::from_vec(self.radii());
        let reduced_r = e
            .clone()
            .svd(true, true)
            .solve(&radii, 1e-14)
            .map_err(Error::invalid)?;
        if (&e * &reduced_r - &radii).amax() >= tol {
            return Ok(None);
        }
        let mut reduced_radii = Vec::with_capacity(m + 1);
        for &r in reduced_r.iter() {
            if r < -tol {
                return Ok(None);
            }
            // Round-off below zero on a zero radius.
            reduced_radii.push(r.max(0.0));
        }

        let mut w = vec![0.0; m + 1];
        let mut wx = vec![0.0; m + 1];
        let mut wy = vec![0.0; m + 1];
        for i in 0..=m {
            let (mut rw, mut rx, mut ry) = (
                self.weights[i],
                self.weights[i] * self.disks[i].cx(),
                self.weights[i] * self.disks[i].cy(),
            );
            for j in 0..i {
                rw -= e[(i, j)] * w[j];
                rx -= e[(i, j)] * wx[j];
                ry -= e[(i, j)] * wy[j];
            }
            let d = e[(i, i)];
            w[i] = rw / d;
            wx[i] = rx / d;
            wy[i] = ry / d;
            if w[i].is_nan() || w[i] <= 0.0 {
                return Ok(None);
            }
        }
        let centers: Vec<Point> = (0..=m).map(|j| Point::new(wx[j] / w[j], wy[j] / w[j])).collect();

        let p = self.centers();
        for i in 0..=n + m {
            let denom = binom(m + n, i);
            let (mut lx, mut ly, mut rx, mut ry, mut scale) = (0.0, 0.0, 0.0, 0.0, 0.0f64);
            for j in i.saturating_sub(n)..=i.min(m) {
                let k = i - j;
                let f = binom(m, j) * binom(n, k) / denom * w[j] * self.weights[k];
                lx += f * p[k].x;
                ly += f * p[k].y;
                rx += f * centers[j].x;
                ry += f * centers[j].y;
                scale = scale.max(f * p[k].norm()).max(f * centers[j].norm());
            }
            let resid = (lx - rx).abs().max((ly - ry).abs());
            if !resid.is_finite() || resid >= tol * scale.max(1.0) {
                return Ok(None);
            }
        }
        Self::from_parts(&centers, &reduced_radii, &w).map(Some)
    }

    /// Applies a point map (typically affine) to every control center.
    pub fn map_centers(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        let disks = self
            .disks
            .iter()
            .map(|d| {
                let c = f(d.center());
                Disk::new(c.x, c.y, d.radius())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(disks, self.weights.clone())
    }

    /// Multiplies every weight by `k > 0`; the disk curve is unchanged.
    pub fn scale_weights(&self, k: f64) -> Result<Self> {
        Self::new(self.disks.clone(), self.weights.iter().map(|w| w * k).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1() -> DiskRationalBezier {
        let c = [
            (96.0, 141.0, 1.0),
            (104.0, 271.0, 10.0),
            (178.0, 363.0, 15.0),
            (331.0, 378.0, 15.0),
            (486.0, 285.0, 10.0),
            (486.0, 140.0, 6.0),
        ];
        let disks = c.iter().map(|&(x, y, r)| Disk::new(x, y, r).unwrap()).collect();
        DiskRationalBezier::new(disks, vec![2.0, 1.0, 1.0, 2.0, 1.0, 2.0]).unwrap()
    }

    fn line(radii: [f64; 2]) -> DiskRationalBezier {
        DiskRationalBezier::from_parts(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0)], &radii, &[1.0, 1.0])
            .unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let d = Disk::new(0.0, 0.0, 1.0).unwrap();
        assert!(DiskRationalBezier::new(vec![], vec![]).is_err());
        assert!(DiskRationalBezier::new(vec![d, d], vec![1.0]).is_err());
        let err = DiskRationalBezier::new(vec![d, d], vec![1.0, 0.0]).unwrap_err();
        assert!(err.to_string().contains("weights[1]"));
        assert!(DiskRationalBezier::new(vec![d], vec![f64::NAN]).is_err());
    }

    #[test]
    fn end_interpolation() {
        let c = example1();
        let a = c.evaluate(0.0).unwrap();
        let b = c.evaluate(1.0).unwrap();
        assert_eq!(a.center, c.disks()[0].center());
        assert_eq!(a.radius, c.disks()[0].radius());
        assert_eq!(b.center, c.disks()[5].center());
        assert_eq!(b.radius, c.disks()[5].radius());
        assert!(c.evaluate(-0.01).is_err());
        assert!(c.evaluate(1.01).is_err());
    }

    #[test]
    fn linear_interpolation_midpoint() {
        let c = DiskRationalBezier::from_parts(
            &[Point::new(0.0, 0.0), Point::new(2.0, 0.0)],
            &[0.0, 2.0],
            &[1.0, 1.0],
        )
        .unwrap();
        let p = c.evaluate(0.5).unwrap();
        assert_eq!(p.center, Point::new(1.0, 0.0));
        assert_eq!(p.radius, 1.0);
    }

    #[test]
    fn de_casteljau_matches_basis_form() {
        let c = example1();
        let tri0 = c.de_casteljau(0.0).unwrap().apex();
        assert_eq!(tri0.center, c.disks()[0].center());
        let tri1 = c.de_casteljau(1.0).unwrap().apex();
        assert_eq!(tri1.center, c.disks()[5].center());
        let a = c.de_casteljau(0.5).unwrap();
        assert_eq!(a.levels.len(), 6);
        assert_eq!(a.levels[5].len(), 1);
        let a = a.apex();
        let b = c.evaluate(0.5).unwrap();
        assert!(a.center.distance(b.center) < 1e-10);
        assert!((a.radius - b.radius).abs() < 1e-10);
        assert!(c.de_casteljau(2.0).is_err());
    }

    #[test]
    fn subdivision_of_example_one() {
        let c = example1();
        let (l, r) = c.subdivide(0.5).unwrap();
        let mid = c.evaluate(0.5).unwrap();
        assert!(l.evaluate(1.0).unwrap().center.distance(mid.center) < 1e-12);
        assert!(r.evaluate(0.0).unwrap().center.distance(mid.center) < 1e-12);
        assert_eq!(l.evaluate(0.0).unwrap().center, c.evaluate(0.0).unwrap().center);
        let mut worst: f64 = 0.0;
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            let piece = if t <= 0.5 {
                l.evaluate(t / 0.5).unwrap()
            } else {
                r.evaluate((t - 0.5) / 0.5).unwrap()
            };
            let full = c.evaluate(t).unwrap();
            worst = worst.max(piece.center.distance(full.center));
            assert!((piece.radius - full.radius).abs() < 1e-9);
        }
        assert!(worst < 1e-9, "{worst}");
        assert!(c.subdivide(0.0).is_err());
        assert!(c.subdivide(1.0).is_err());
    }

    #[test]
    fn elevation_by_hand() {
        let e = line([0.0, 2.0]).elevate(1).unwrap();
        assert_eq!(e.weights(), &[1.0, 1.0, 1.0]);
        assert_eq!(e.centers(), vec![Point::new(0.0, 0.0), Point::new(0.5, 0.0), Point::new(1.0, 0.0)]);
        assert_eq!(e.radii(), vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn elevation_preserves_curve_and_composes() {
        let c = example1();
        let e1 = c.elevate(1).unwrap();
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let (a, b) = (c.evaluate(t).unwrap(), e1.evaluate(t).unwrap());
            assert!(a.center.distance(b.center) < 1e-10);
            assert!((a.radius - b.radius).abs() < 1e-10);
        }
        let e2 = c.elevate(2).unwrap();
        let e11 = e1.elevate(1).unwrap();
        for (d1, d2) in e2.disks().iter().zip(e11.disks()) {
            assert!(d1.center().distance(d2.center()) < 1e-12 * 500.0);
            assert!((d1.radius() - d2.radius()).abs() < 1e-12 * 20.0);
        }
        for (w1, w2) in e2.weights().iter().zip(e11.weights()) {
            assert!((w1 - w2).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_reduction_cases() {
        let c = example1();
        assert!(c.try_exact_reduce(4).unwrap().is_none());
        assert!(c.try_exact_reduce(5).is_err());
        assert!(c.try_exact_reduce(0).is_err());

        let e = c.elevate(2).unwrap();
        let back = e.try_exact_reduce(5).unwrap().expect("elevation is invertible");
        assert_eq!(back.weights().len(), 6);
        for ((a, b), (wa, wb)) in back.disks().iter().zip(c.disks()).zip(back.weights().iter().zip(c.weights())) {
            assert!(a.center().distance(b.center()) < 1e-9);
            assert!((a.radius() - b.radius()).abs() < 1e-12);
            assert!((wa - wb).abs() < 1e-12);
        }

        let quad = DiskRationalBezier::from_parts(
            &[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0)],
            &[0.0, 1.0, 2.0],
            &[1.0, 1.0, 1.0],
        )
        .unwrap();
        let lin = quad.try_exact_reduce(1).unwrap().unwrap();
        for (p, q) in lin.centers().iter().zip([Point::new(0.0, 0.0), Point::new(2.0, 0.0)]) {
            assert!(p.distance(q) < 1e-12);
        }
        for (r, e) in lin.radii().iter().zip([0.0, 2.0]) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn center_derivative_matches_finite_difference() {
        let c = example1();
        let h = 1e-6;
        for t in [0.05, 0.3, 0.5, 0.81] {
            let fd = (c.center_at(t + h) - c.center_at(t - h)) * (0.5 / h);
            let an = c.center_derivative(t);
            assert!(fd.distance(an) < 1e-4 * an.norm(), "{fd:?} vs {an:?}");
        }
    }

    #[test]
    fn weight_scaling_keeps_point_set() {
        let c = example1();
        let s = c.scale_weights(3.7).unwrap();
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!(c.center_at(t).distance(s.center_at(t)) < 1e-10);
        }
    }
}
