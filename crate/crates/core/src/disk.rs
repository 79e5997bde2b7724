//! Disk arithmetic in the plane and the projections from homogeneous disks.
//!
//! A disk `(x, y)_r` is the closed set of points within distance `r` of the
//! center `(x, y)`. Scaling multiplies the center by `k` and the radius by
//! `|k|`; addition adds centers and radii. Both are exact set-valued bounds
//! of the corresponding point operations.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// A closed disk with finite center and nonnegative finite radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    center: Point,
    radius: f64,
}

impl Disk {
    pub fn new(cx: f64, cy: f64, r: f64) -> Result<Self> {
        if !(cx.is_finite() && cy.is_finite()) {
            return Err(Error::invalid(format!(
                "disk center must be finite, got ({cx}, {cy})"
            )));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::invalid(format!(
                "disk radius must be finite and nonnegative, got {r}"
            )));
        }
        Ok(Self {
            center: Point::new(cx, cy),
            radius: r,
        })
    }

    /// A degenerate disk of radius zero.
    pub fn point(p: Point) -> Result<Self> {
        Self::new(p.x, p.y, 0.0)
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn cx(&self) -> f64 {
        self.center.x
    }

    pub fn cy(&self) -> f64 {
        self.center.y
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Whether `other` lies entirely inside this disk, up to `tol`.
    pub fn contains_disk(&self, other: &Disk, tol: f64) -> bool {
        self.center.distance(other.center) + other.radius <= self.radius + tol
    }
}

/// `k (x, y)_r = (kx, ky)_{|k| r}`.
pub fn scale_disk(k: f64, d: &Disk) -> Result<Disk> {
    if !k.is_finite() {
        return Err(Error::invalid(format!("scale factor must be finite, got {k}")));
    }
    Disk::new(k * d.cx(), k * d.cy(), k.abs() * d.radius())
}

/// `(x1, y1)_{r1} + (x2, y2)_{r2} = (x1 + x2, y1 + y2)_{r1 + r2}`.
pub fn add_disks(a: &Disk, b: &Disk) -> Result<Disk> {
    Disk::new(a.cx() + b.cx(), a.cy() + b.cy(), a.radius() + b.radius())
}

/// `Σ k_i (p_i)`: centers combine linearly, radii by `Σ |k_i| r_i`.
pub fn linear_combination(coeffs: &[f64], disks: &[Disk]) -> Result<Disk> {
    if coeffs.len() != disks.len() {
        return Err(Error::invalid(format!(
            "{} coefficients for {} disks",
            coeffs.len(),
            disks.len()
        )));
    }
    if disks.is_empty() {
        return Err(Error::invalid("linear combination of no disks"));
    }
    if let Some(k) = coeffs.iter().find(|k| !k.is_finite()) {
        return Err(Error::invalid(format!("coefficient must be finite, got {k}")));
    }
    let (mut x, mut y, mut r) = (0.0, 0.0, 0.0);
    for (&k, d) in coeffs.iter().zip(disks) {
        x += k * d.cx();
        y += k * d.cy();
        r += k.abs() * d.radius();
    }
    Disk::new(x, y, r)
}

/// How the radius of a [`HomogeneousDisk`] is stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusConvention {
    /// `(X, Y, ω)_R` with `R = ω r`; projects perspectively.
    WeightedRadius,
    /// `(X, Y, ω)_r`; projects obliquely and keeps `r`.
    PlainRadius,
}

/// A disk lifted to homogeneous coordinates `(X, Y, ω) = (ωx, ωy, ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneousDisk {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub rad: f64,
    pub convention: RadiusConvention,
}

impl HomogeneousDisk {
    pub fn new(x: f64, y: f64, w: f64, rad: f64, convention: RadiusConvention) -> Result<Self> {
        let h = Self {
            x,
            y,
            w,
            rad,
            convention,
        };
        h.validate()?;
        Ok(h)
    }

    /// Lifts a planar disk with weight `w` in the given convention.
    pub fn lift(d: &Disk, w: f64, convention: RadiusConvention) -> Result<Self> {
        let rad = match convention {
            RadiusConvention::WeightedRadius => w * d.radius(),
            RadiusConvention::PlainRadius => d.radius(),
        };
        Self::new(w * d.cx(), w * d.cy(), w, rad, convention)
    }

    fn validate(&self) -> Result<()> {
        if !(self.w.is_finite() && self.w > 0.0) {
            return Err(Error::invalid(format!(
                "homogeneous weight must be positive, got {}",
                self.w
            )));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::invalid("homogeneous coordinates must be finite"));
        }
        if !self.rad.is_finite() || self.rad < 0.0 {
            return Err(Error::invalid(format!(
                "homogeneous radius must be nonnegative, got {}",
                self.rad
            )));
        }
        Ok(())
    }
}

/// Perspective projection onto `ω = 1`: `(X/ω, Y/ω)_{R/ω}`.
pub fn perspective_project(h: &HomogeneousDisk) -> Result<Disk> {
    h.validate()?;
    if h.convention != RadiusConvention::WeightedRadius {
        return Err(Error::invalid(
            "perspective projection needs a weighted-radius homogeneous disk",
        ));
    }
    Disk::new(h.x / h.w, h.y / h.w, h.rad / h.w)
}

/// Oblique projection onto `ω = 1`: `(X/ω, Y/ω)_r`, radius unchanged.
pub fn oblique_project(h: &HomogeneousDisk) -> Result<Disk> {
    h.validate()?;
    if h.convention != RadiusConvention::PlainRadius {
        return Err(Error::invalid(
            "oblique projection needs a plain-radius homogeneous disk",
        ));
    }
    Disk::new(h.x / h.w, h.y / h.w, h.rad)
}
