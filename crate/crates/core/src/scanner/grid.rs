//! Compact sample sets in the critical strip.

use crate::error::{Error, Result};
use crate::numerics::cis_turns;
use crate::scalar::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape<T> {
    Rect { sigma_min: T, sigma_max: T, t_min: T, t_max: T },
    Disk { center: [T; 2], radius: T },
}

/// A finite sample of a compact set, contained in the open vertical strip
/// `strip.0 < sigma < strip.1`.
///
/// Point sets are nested under mesh halving: rectangles use `2^j`
/// subdivisions per side, disks use the lattice `center + mesh (i, j)` plus
/// a boundary ring of `8 * 2^j` equally spaced points. Hence refining the
/// mesh can only enlarge a grid supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactGrid<T> {
    shape: Shape<T>,
    mesh: T,
    strip: (T, T),
    points: Vec<Complex<T>>,
}

fn pow2_at_least<T: Real>(x: T) -> usize {
    let mut n = 1usize;
    while T::from_usize(n).unwrap() < x {
        n *= 2;
    }
    n
}

impl<T: Real> CompactGrid<T> {
    pub fn new(shape: Shape<T>, mesh: T, strip: (T, T)) -> Result<Self> {
        if !(mesh > T::zero()) || !mesh.is_finite() {
            return Err(Error::InvalidInput(format!("mesh must be positive, got {mesh}")));
        }
        let (lo, hi) = match shape {
            Shape::Rect { sigma_min, sigma_max, t_min, t_max } => {
                if !(sigma_min <= sigma_max && t_min <= t_max) {
                    return Err(Error::InvalidInput("rectangle bounds are inverted".into()));
                }
                (sigma_min, sigma_max)
            }
            Shape::Disk { center, radius } => {
                if !(radius >= T::zero()) {
                    return Err(Error::InvalidInput("disk radius must be non-negative".into()));
                }
                (center[0] - radius, center[0] + radius)
            }
        };
        if !(lo > strip.0 && hi < strip.1) {
            return Err(Error::Domain(format!(
                "grid spans sigma in [{lo}, {hi}], outside the strip ({}, {})",
                strip.0, strip.1
            )));
        }
        let points = match shape {
            Shape::Rect { sigma_min, sigma_max, t_min, t_max } => {
                let ns = pow2_at_least((sigma_max - sigma_min) / mesh);
                let nt = pow2_at_least((t_max - t_min) / mesh);
                let ds = (sigma_max - sigma_min) / T::from_usize(ns).unwrap();
                let dt = (t_max - t_min) / T::from_usize(nt).unwrap();
                let mut pts = Vec::with_capacity((ns + 1) * (nt + 1));
                for i in 0..=ns {
                    for j in 0..=nt {
                        let s = sigma_min + ds * T::from_usize(i).unwrap();
                        let t = t_min + dt * T::from_usize(j).unwrap();
                        pts.push(Complex::new(s, t));
                    }
                }
                pts
            }
            Shape::Disk { center, radius } => {
                let c = Complex::new(center[0], center[1]);
                let span = (radius / mesh).floor().to_i64().unwrap();
                let mut pts = Vec::new();
                for i in -span..=span {
                    for j in -span..=span {
                        let x = mesh * T::from_i64(i).unwrap();
                        let y = mesh * T::from_i64(j).unwrap();
                        if x * x + y * y <= radius * radius {
                            pts.push(c + Complex::new(x, y));
                        }
                    }
                }
                if radius > T::zero() {
                    let circumference = T::two_pi() * radius;
                    let ring = 8 * pow2_at_least(circumference / (T::lit(8.0) * mesh));
                    let nr = T::from_usize(ring).unwrap();
                    for q in 0..ring {
                        pts.push(c + cis_turns(T::from_usize(q).unwrap() / nr) * radius);
                    }
                }
                pts
            }
        };
        Ok(Self { shape, mesh, strip, points })
    }

    /// A grid from explicit points (used for single-point and tabulated studies).
    pub fn from_points(points: Vec<Complex<T>>, strip: (T, T)) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one point".into()));
        }
        let lo = points.iter().map(|p| p.re).fold(T::infinity(), T::min);
        let hi = points.iter().map(|p| p.re).fold(T::neg_infinity(), T::max);
        if !(lo > strip.0 && hi < strip.1) {
            return Err(Error::Domain(format!("points leave the strip ({}, {})", strip.0, strip.1)));
        }
        let t_lo = points.iter().map(|p| p.im).fold(T::infinity(), T::min);
        let t_hi = points.iter().map(|p| p.im).fold(T::neg_infinity(), T::max);
        let shape = Shape::Rect { sigma_min: lo, sigma_max: hi, t_min: t_lo, t_max: t_hi };
        Ok(Self { shape, mesh: T::one(), strip, points })
    }

    pub fn shape(&self) -> Shape<T> {
        self.shape
    }

    pub fn mesh(&self) -> T {
        self.mesh
    }

    pub fn strip(&self) -> (T, T) {
        self.strip
    }

    pub fn points(&self) -> &[Complex<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same shape at half the mesh.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.shape, self.mesh * T::lit(0.5), self.strip)
    }

    /// Whether `z` lies in the closed shape.
    pub fn contains(&self, z: Complex<T>) -> bool {
        match self.shape {
            Shape::Rect { sigma_min, sigma_max, t_min, t_max } => {
                z.re >= sigma_min && z.re <= sigma_max && z.im >= t_min && z.im <= t_max
            }
            Shape::Disk { center, radius } => (z - Complex::new(center[0], center[1])).norm() <= radius,
        }
    }
}

/// Points grouped around a common expansion center.
#[derive(Debug, Clone)]
pub struct Cluster<T> {
    pub center: Complex<T>,
    pub members: Vec<usize>,
    pub radius: T,
}

/// Splits points into clusters of radius at most `max_radius` by recursive
/// bisection of the bounding box along its longer side.
pub fn clusters<T: Real>(points: &[Complex<T>], max_radius: T) -> Vec<Cluster<T>> {
    let mut out = Vec::new();
    let all: Vec<usize> = (0..points.len()).collect();
    split(points, all, max_radius, &mut out);
    out
}

fn split<T: Real>(points: &[Complex<T>], idx: Vec<usize>, max_radius: T, out: &mut Vec<Cluster<T>>) {
    if idx.is_empty() {
        return;
    }
    let (mut s0, mut s1, mut t0, mut t1) = (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity());
    for &i in &idx {
        s0 = s0.min(points[i].re);
        s1 = s1.max(points[i].re);
        t0 = t0.min(points[i].im);
        t1 = t1.max(points[i].im);
    }
    let half = T::lit(0.5);
    let center = Complex::new((s0 + s1) * half, (t0 + t1) * half);
    let radius = idx.iter().map(|&i| (points[i] - center).norm()).fold(T::zero(), T::max);
    if radius <= max_radius || idx.len() == 1 {
        out.push(Cluster { center, members: idx, radius });
        return;
    }
    let (left, right): (Vec<usize>, Vec<usize>) = if s1 - s0 >= t1 - t0 {
        idx.into_iter().partition(|&i| points[i].re <= center.re)
    } else {
        idx.into_iter().partition(|&i| points[i].im <= center.im)
    };
    split(points, left, max_radius, out);
    split(points, right, max_radius, out);
}
