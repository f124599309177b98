//! Closed parametric curves in a 3-dimensional real parameter space.
//!
//! A path stores its ordered sample points with the first point repeated at
//! the end; orientation is implicit in the ordering.

use crate::error::{Error, Result};

/// Tolerance for deciding that the first and last point of a closed path
/// coincide.
pub const CLOSURE_TOL: f64 = 1e-12;

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Right-handed orthonormal frame (e1, e2) spanning the plane orthogonal to
/// `axis`, chosen deterministically: e1 comes from the coordinate axis with
/// the smallest |axis| component (first such index on ties), e2 = axis x e1.
pub fn transverse_frame(axis: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut helper_idx = 0;
    for i in 1..3 {
        if axis[i].abs() < axis[helper_idx].abs() {
            helper_idx = i;
        }
    }
    let mut h = [0.0; 3];
    h[helper_idx] = 1.0;
    let dot = h[0] * axis[0] + h[1] * axis[1] + h[2] * axis[2];
    let mut e1 = [h[0] - dot * axis[0], h[1] - dot * axis[1], h[2] - dot * axis[2]];
    let n1 = norm(e1);
    for e in e1.iter_mut() {
        *e /= n1;
    }
    let e2 = cross(axis, e1);
    (e1, e2)
}

/// An ordered closed loop of sample points, first point repeated last.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedPath {
    points: Vec<[f64; 3]>,
}

impl ClosedPath {
    /// Validates and adopts an explicit point list. The list must contain at
    /// least 8 distinct samples plus the repeated closing point, the first
    /// and last point must agree within `CLOSURE_TOL` (the last is then
    /// replaced by a bitwise copy of the first), and consecutive points must
    /// be distinct.
    pub fn from_points(mut points: Vec<[f64; 3]>) -> Result<Self> {
        if points.len() < 9 {
            return Err(Error::InvalidPath {
                reason: format!(
                    "need at least 8 samples plus the closing point, got {}",
                    points.len()
                ),
            });
        }
        let first = points[0];
        let last = *points.last().expect("nonempty");
        if norm(sub(first, last)) > CLOSURE_TOL {
            return Err(Error::InvalidPath {
                reason: "first and last point do not coincide".into(),
            });
        }
        *points.last_mut().expect("nonempty") = first;
        for (j, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidPath {
                    reason: format!("consecutive samples {j} and {} coincide", j + 1),
                });
            }
        }
        Ok(Self { points })
    }

    /// A planar circle: `center + radius (cos t e1 + sin t e2)` with
    /// t = orientation * 2 pi j / samples and the deterministic transverse
    /// frame of `normal`. orientation +1 runs counterclockwise about the
    /// normal by the right-hand rule.
    pub fn circle(
        center: [f64; 3],
        normal: [f64; 3],
        radius: f64,
        samples: usize,
        orientation: i8,
    ) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidPath {
                reason: format!("radius must be positive, got {radius}"),
            });
        }
        if samples < 8 {
            return Err(Error::InvalidPath {
                reason: format!("need at least 8 samples, got {samples}"),
            });
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidPath {
                reason: format!("orientation must be +1 or -1, got {orientation}"),
            });
        }
        let n = norm(normal);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidPath {
                reason: "normal must be a nonzero finite vector".into(),
            });
        }
        let axis = [normal[0] / n, normal[1] / n, normal[2] / n];
        let (e1, e2) = transverse_frame(axis);
        let mut points = Vec::with_capacity(samples + 1);
        for j in 0..samples {
            let t = f64::from(orientation) * 2.0 * std::f64::consts::PI * (j as f64)
                / (samples as f64);
            let (s, c) = t.sin_cos();
            points.push([
                center[0] + radius * (c * e1[0] + s * e2[0]),
                center[1] + radius * (c * e1[1] + s * e2[1]),
                center[2] + radius * (c * e1[2] + s * e2[2]),
            ]);
        }
        points.push(points[0]);
        Self::from_points(points)
    }

    /// Closed polyline through `vertices` (first equal to last), subdivided
    /// so that the total sample count is close to `samples` with segment
    /// counts proportional to segment length. All original vertices remain
    /// sample points.
    pub fn polyline(vertices: &[[f64; 3]], samples: usize) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::InvalidPath {
                reason: "a closed polyline needs at least 3 distinct vertices".into(),
            });
        }
        let first = vertices[0];
        let last = *vertices.last().expect("nonempty");
        if norm(sub(first, last)) > CLOSURE_TOL {
            return Err(Error::InvalidPath {
                reason: "polyline is not closed (first vertex != last vertex)".into(),
            });
        }
        let seg_lens: Vec<f64> = vertices.windows(2).map(|w| norm(sub(w[1], w[0]))).collect();
        let total: f64 = seg_lens.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidPath {
                reason: "polyline has zero length".into(),
            });
        }
        let mut points = Vec::with_capacity(samples + vertices.len());
        for (i, len) in seg_lens.iter().enumerate() {
            if *len == 0.0 {
                return Err(Error::InvalidPath {
                    reason: format!("vertices {i} and {} coincide", i + 1),
                });
            }
            let n_sub = ((samples as f64) * len / total).round().max(1.0) as usize;
            let a = vertices[i];
            let b = vertices[i + 1];
            for j in 0..n_sub {
                let t = (j as f64) / (n_sub as f64);
                points.push([
                    a[0] + t * (b[0] - a[0]),
                    a[1] + t * (b[1] - a[1]),
                    a[2] + t * (b[2] - a[2]),
                ]);
            }
        }
        points.push(vertices[0]);
        Self::from_points(points)
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Number of distinct samples (the closing duplicate is not counted).
    pub fn n_samples(&self) -> usize {
        self.points.len() - 1
    }

    /// Length of segment j (from sample j to sample j+1).
    pub fn segment_length(&self, j: usize) -> f64 {
        norm(sub(self.points[j + 1], self.points[j]))
    }

    /// Local step length at sample j: the longer of its two adjacent
    /// segments.
    pub fn local_step(&self, j: usize) -> f64 {
        let n = self.n_samples();
        let prev = if j == 0 { n - 1 } else { j - 1 };
        let next = if j == n { 0 } else { j };
        self.segment_length(prev).max(self.segment_length(next))
    }

    /// The same loop with every segment split at its midpoint.
    pub fn refine(&self) -> ClosedPath {
        let mut points = Vec::with_capacity(self.points.len() * 2 - 1);
        for w in self.points.windows(2) {
            points.push(w[0]);
            points.push([
                0.5 * (w[0][0] + w[1][0]),
                0.5 * (w[0][1] + w[1][1]),
                0.5 * (w[0][2] + w[1][2]),
            ]);
        }
        points.push(self.points[0]);
        ClosedPath { points }
    }

    /// The same loop started `offset` samples further along.
    pub fn with_start(&self, offset: usize) -> ClosedPath {
        let n = self.n_samples();
        let offset = offset % n;
        let mut points = Vec::with_capacity(self.points.len());
        for j in 0..n {
            points.push(self.points[(j + offset) % n]);
        }
        points.push(self.points[offset]);
        ClosedPath { points }
    }
}
