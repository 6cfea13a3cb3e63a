//! Planar convex hulls of complex point sets and sampling of their boundary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{cmp_re_im, exact_eq, Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneracy {
    Point,
    Segment,
    Polygon,
}

/// Convex hull with vertices in counter-clockwise order and no three
/// consecutive collinear. Segments store their two endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct HullPolygon<T: Real> {
    pub vertices: Vec<Complex<T>>,
    pub degeneracy: Degeneracy,
    diameter: T,
}

fn cross<T: Real>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let u = a - o;
    let v = b - o;
    u.re * v.im - u.im * v.re
}

/// Andrew's monotone chain with the default collinearity tolerance.
pub fn convex_hull<T: Real>(points: &[Complex<T>]) -> Result<HullPolygon<T>> {
    convex_hull_with(points, 1e-12)
}

/// `collinear_tol` is relative to the squared diameter of the point set.
pub fn convex_hull_with<T: Real>(
    points: &[Complex<T>],
    collinear_tol: f64,
) -> Result<HullPolygon<T>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("convex hull of an empty set".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(cmp_re_im);
    pts.dedup_by(|a, b| exact_eq(*a, *b));
    if pts.len() == 1 {
        return Ok(HullPolygon {
            vertices: pts,
            degeneracy: Degeneracy::Point,
            diameter: T::zero(),
        });
    }
    let diameter = diameter_of(&pts);
    let tol = T::lit(collinear_tol) * diameter * diameter;

    let mut lower: Vec<Complex<T>> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Complex<T>> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    let degeneracy = if lower.len() <= 2 {
        Degeneracy::Segment
    } else {
        Degeneracy::Polygon
    };
    if degeneracy == Degeneracy::Segment {
        // extreme points along the sort order are the segment ends
        lower = vec![pts[0], pts[pts.len() - 1]];
    }
    Ok(HullPolygon {
        vertices: lower,
        degeneracy,
        diameter,
    })
}

fn diameter_of<T: Real>(pts: &[Complex<T>]) -> T {
    let mut d = T::zero();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

impl<T: Real> HullPolygon<T> {
    pub fn diameter(&self) -> T {
        self.diameter
    }

    /// Vertices plus `per_edge − 1` equally spaced interior points of every
    /// edge. Doubling `per_edge` yields a superset.
    pub fn boundary_samples(&self, per_edge: usize) -> Vec<Complex<T>> {
        let per_edge = per_edge.max(1);
        let k = T::from_usize_(per_edge);
        let edge_points = |a: Complex<T>, b: Complex<T>, out: &mut Vec<Complex<T>>| {
            for j in 0..per_edge {
                let s = T::from_usize_(j) / k;
                out.push(a + (b - a).scale(s));
            }
        };
        let mut out = Vec::new();
        match self.degeneracy {
            Degeneracy::Point => out.push(self.vertices[0]),
            Degeneracy::Segment => {
                edge_points(self.vertices[0], self.vertices[1], &mut out);
                out.push(self.vertices[1]);
            }
            Degeneracy::Polygon => {
                let n = self.vertices.len();
                for i in 0..n {
                    edge_points(self.vertices[i], self.vertices[(i + 1) % n], &mut out);
                }
            }
        }
        out
    }

    /// Closed-hull membership with tolerance `1e−12 · diameter`.
    pub fn contains(&self, z: Complex<T>) -> bool {
        let scale = self
            .vertices
            .iter()
            .map(|v| v.norm())
            .fold(T::one(), T::max);
        let tol = (T::lit(1e-12) * self.diameter).max(T::lit(4.0) * T::epsilon() * scale);
        match self.degeneracy {
            Degeneracy::Point => (z - self.vertices[0]).norm() <= tol,
            Degeneracy::Segment => {
                distance_to_segment(z, self.vertices[0], self.vertices[1]) <= tol
            }
            Degeneracy::Polygon => {
                let n = self.vertices.len();
                (0..n).all(|i| {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    // signed distance to the supporting line of edge ab
                    cross(a, b, z) / (b - a).norm() >= -tol
                })
            }
        }
    }
}

fn distance_to_segment<T: Real>(z: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2)
        .max(T::zero())
        .min(T::one());
    (z - (a + ab.scale(t))).norm()
}

pub fn boundary_samples<T: Real>(h: &HullPolygon<T>, per_edge: usize) -> Vec<Complex<T>> {
    h.boundary_samples(per_edge)
}

pub fn contains<T: Real>(h: &HullPolygon<T>, z: Complex<T>) -> bool {
    h.contains(z)
}
