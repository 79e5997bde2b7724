//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use diskbez::{DiskRationalBezier, Point};
use rand::Rng;

pub fn example1() -> DiskRationalBezier {
    DiskRationalBezier::from_parts(
        &[
            Point::new(96.0, 141.0),
            Point::new(104.0, 271.0),
            Point::new(178.0, 363.0),
            Point::new(331.0, 378.0),
            Point::new(486.0, 285.0),
            Point::new(486.0, 140.0),
        ],
        &[1.0, 10.0, 15.0, 15.0, 10.0, 6.0],
        &[2.0, 1.0, 1.0, 2.0, 1.0, 2.0],
    )
    .unwrap()
}

/// Reference reduced weights, centers and radii for the first example.
pub const EXAMPLE1_WEIGHTS: [f64; 5] = [2.0344, 0.5115, 1.9717, 1.0274, 1.9563];
pub const EXAMPLE1_CENTERS: [(f64, f64); 5] = [
    (96.0, 141.0),
    (23.0187, 356.9572),
    (264.3962, 378.1378),
    (466.7490, 365.0673),
    (486.0, 140.0),
];
pub const EXAMPLE1_RADII: [f64; 5] = [5.4759, 16.7259, 22.1426, 15.4759, 10.4759];
pub const EXAMPLE1_CENTER_ERR: f64 = 4.4759;
pub const EXAMPLE1_RADIUS_ERR: f64 = 4.6487;

pub fn example2() -> DiskRationalBezier {
    DiskRationalBezier::from_parts(
        &[
            Point::new(60.0, 149.0),
            Point::new(86.0, 250.0),
            Point::new(203.0, 300.0),
            Point::new(350.0, 310.0),
            Point::new(402.0, 250.0),
            Point::new(375.0, 115.0),
            Point::new(472.0, 81.0),
            Point::new(651.0, 112.0),
            Point::new(715.0, 250.0),
        ],
        &[10.0, 4.0, 10.0, 15.0, 20.0, 18.0, 8.0, 10.0, 5.0],
        &[10.0, 4.0, 10.0, 15.0, 20.0, 18.0, 8.0, 10.0, 5.0],
    )
    .unwrap()
}

pub const EXAMPLE2_CENTER_ERR: f64 = 6.2568;

/// Random curve with centers in `[-span, span]²`, weights in `[0.5, 3]` and
/// radii in `[0, 5]`.
pub fn random_curve(rng: &mut impl Rng, degree: usize, span: f64) -> DiskRationalBezier {
    let centers: Vec<Point> = (0..=degree)
        .map(|_| Point::new(rng.random_range(-span..=span), rng.random_range(-span..=span)))
        .collect();
    let radii: Vec<f64> = (0..=degree).map(|_| rng.random_range(0.0..=5.0)).collect();
    let weights: Vec<f64> = (0..=degree).map(|_| rng.random_range(0.5..=3.0)).collect();
    DiskRationalBezier::from_parts(&centers, &radii, &weights).unwrap()
}

/// Largest coordinate-wise gap between two point lists.
pub fn max_coord_gap(a: &[Point], b: &[Point]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p.x - q.x).abs().max((p.y - q.y).abs()))
        .fold(0.0, f64::max)
}

pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
