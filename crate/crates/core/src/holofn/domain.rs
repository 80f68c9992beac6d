use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::f64::consts::TAU;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use super::HoloError;
use crate::geometry;
use crate::C64;

/// Default truncation of the left half-plane `Re w < 0`.
pub const HALF_PLANE_WIDTH: f64 = 6.0;
pub const HALF_PLANE_HEIGHT: f64 = 6.0;
pub const HALF_PLANE_GAP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub enum DomainShape {
    /// `|w| < radius`.
    Disk { radius: f64 },
    /// `[-width, -delta] × [-height, height]`, a truncation of `Re w < 0`.
    HalfPlane { width: f64, height: f64, delta: f64 },
    /// Simple polygon, stored counter-clockwise.
    Polygon { vertices: Vec<C64> },
}

/// A simply connected domain with a basepoint for antiderivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    shape: DomainShape,
    base: C64,
}

/// Structured sample of a domain. Points are row-major; `inside[k]` marks
/// samples that lie in the domain (polygons are sampled on their bounding
/// box). For disks rows are rings and columns are spokes, and the spoke
/// index wraps around.
#[derive(Clone, Debug)]
pub struct Grid {
    pub points: Vec<C64>,
    pub inside: Vec<bool>,
    pub rows: usize,
    pub cols: usize,
    pub wraps: bool,
}

impl Grid {
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    /// Pairs of neighbouring sample indices (right and up), both inside.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (rows, cols) = (self.rows, self.cols);
        (0..rows).flat_map(move |r| {
            (0..cols).flat_map(move |c| {
                let k = self.index(r, c);
                let right = if c + 1 < cols {
                    Some(self.index(r, c + 1))
                } else if self.wraps {
                    Some(self.index(r, 0))
                } else {
                    None
                };
                let up = if r + 1 < rows {
                    Some(self.index(r + 1, c))
                } else {
                    None
                };
                [right, up]
                    .into_iter()
                    .flatten()
                    .filter(move |&m| self.inside[k] && self.inside[m])
                    .map(move |m| (k, m))
            })
        })
    }

    pub fn interior_points(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter(|(k, _)| self.inside[*k])
            .map(|(k, p)| (k, *p))
    }
}

impl DomainSpec {
    pub fn disk(radius: f64) -> Result<Self, HoloError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(HoloError::InvalidDomain("disk radius must be positive"));
        }
        Ok(DomainSpec {
            shape: DomainShape::Disk { radius },
            base: C64::new(0.0, 0.0),
        })
    }

    pub fn unit_disk() -> Self {
        DomainSpec::disk(1.0).unwrap()
    }

    /// Truncated left half-plane with the basepoint at the centre of the
    /// rectangle.
    pub fn half_plane(width: f64, height: f64, delta: f64) -> Result<Self, HoloError> {
        if !(delta > 0.0 && width > delta && height > 0.0) {
            return Err(HoloError::InvalidDomain(
                "half-plane truncation needs 0 < delta < width and height > 0",
            ));
        }
        Ok(DomainSpec {
            shape: DomainShape::HalfPlane {
                width,
                height,
                delta,
            },
            base: C64::new(-0.5 * (width + delta), 0.0),
        })
    }

    pub fn default_half_plane() -> Self {
        DomainSpec::half_plane(HALF_PLANE_WIDTH, HALF_PLANE_HEIGHT, HALF_PLANE_GAP).unwrap()
    }

    /// Simple polygon; vertices are reoriented counter-clockwise.
    pub fn polygon(mut vertices: Vec<C64>, base: C64) -> Result<Self, HoloError> {
        if vertices.len() < 3 {
            return Err(HoloError::InvalidDomain("polygon needs at least three vertices"));
        }
        if !geometry::is_simple(&vertices) {
            return Err(HoloError::InvalidDomain("polygon must be simple"));
        }
        let area = geometry::signed_area(&vertices);
        if area == 0.0 {
            return Err(HoloError::InvalidDomain("polygon is degenerate"));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        let d = DomainSpec {
            shape: DomainShape::Polygon { vertices },
            base,
        };
        if !d.contains(base) {
            return Err(HoloError::InvalidDomain("basepoint must be interior"));
        }
        Ok(d)
    }

    pub fn with_base(mut self, base: C64) -> Result<Self, HoloError> {
        if !self.contains(base) {
            return Err(HoloError::InvalidDomain("basepoint must be interior"));
        }
        self.base = base;
        Ok(self)
    }

    pub fn shape(&self) -> &DomainShape {
        &self.shape
    }

    pub fn base(&self) -> C64 {
        self.base
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.shape, DomainShape::HalfPlane { .. })
    }

    pub fn disk_radius(&self) -> Option<f64> {
        match self.shape {
            DomainShape::Disk { radius } => Some(radius),
            _ => None,
        }
    }

    /// Open interior.
    pub fn contains(&self, w: C64) -> bool {
        match &self.shape {
            DomainShape::Disk { radius } => w.norm() < *radius,
            DomainShape::HalfPlane {
                width,
                height,
                delta,
            } => w.re > -width && w.re < -delta && w.im.abs() < *height,
            DomainShape::Polygon { vertices } => {
                geometry::point_in_polygon(vertices, w)
                    && vertices
                        .iter()
                        .zip(vertices.iter().cycle().skip(1))
                        .all(|(a, b)| geometry::point_segment_distance(w, *a, *b) > 0.0)
            }
        }
    }

    /// Closure of the domain, with a relative slack for boundary samples.
    pub fn contains_closed(&self, w: C64) -> bool {
        let slack = 1e-12 * self.diameter();
        match &self.shape {
            DomainShape::Disk { radius } => w.norm() <= radius + slack,
            DomainShape::HalfPlane {
                width,
                height,
                delta,
            } => {
                w.re >= -width - slack && w.re <= -delta + slack && w.im.abs() <= height + slack
            }
            DomainShape::Polygon { vertices } => {
                geometry::point_in_polygon(vertices, w)
                    || vertices
                        .iter()
                        .zip(vertices.iter().cycle().skip(1))
                        .any(|(a, b)| geometry::point_segment_distance(w, *a, *b) <= slack)
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.shape {
            DomainShape::Disk { radius } => 2.0 * radius,
            DomainShape::HalfPlane {
                width,
                height,
                delta,
            } => (width - delta).hypot(2.0 * height),
            DomainShape::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for a in vertices {
                    for b in vertices {
                        d = d.max((a - b).norm());
                    }
                }
                d
            }
        }
    }

    /// Positively oriented closed polyline with `count` vertices.
    pub fn boundary(&self, count: usize) -> Vec<C64> {
        let count = count.max(3);
        match &self.shape {
            DomainShape::Disk { radius } => (0..count)
                .map(|k| {
                    let phi = TAU * k as f64 / count as f64;
                    let (s, c) = phi.sin_cos();
                    C64::new(radius * c, radius * s)
                })
                .collect(),
            DomainShape::HalfPlane {
                width,
                height,
                delta,
            } => {
                let corners = [
                    C64::new(-width, -height),
                    C64::new(-delta, -height),
                    C64::new(-delta, *height),
                    C64::new(-width, *height),
                ];
                resample_closed(&corners, count)
            }
            DomainShape::Polygon { vertices } => resample_closed(vertices, count),
        }
    }

    /// Structured interior sample with resolution `n` in each direction.
    pub fn grid(&self, n: usize) -> Grid {
        let n = n.max(2);
        match &self.shape {
            DomainShape::Disk { radius } => {
                let cols = n.max(16);
                let mut points = Vec::with_capacity(n * cols);
                for r in 0..n {
                    let rho = radius * (r as f64 + 0.5) / n as f64;
                    for c in 0..cols {
                        let phi = TAU * c as f64 / cols as f64;
                        let (s, co) = phi.sin_cos();
                        points.push(C64::new(rho * co, rho * s));
                    }
                }
                Grid {
                    inside: vec![true; points.len()],
                    points,
                    rows: n,
                    cols,
                    wraps: true,
                }
            }
            DomainShape::HalfPlane {
                width,
                height,
                delta,
            } => {
                let lo = C64::new(-width, -height);
                let hi = C64::new(-delta, *height);
                rect_grid(lo, hi, n, |_| true)
            }
            DomainShape::Polygon { vertices } => {
                let (lo, hi) = geometry::bbox(vertices);
                rect_grid(lo, hi, n, |p| self.contains(p))
            }
        }
    }

    /// Interior polyline from `from` to `to` (both in the closed domain).
    pub fn route(&self, from: C64, to: C64) -> Result<Vec<C64>, HoloError> {
        for p in [from, to] {
            if !self.contains_closed(p) {
                return Err(HoloError::PathExitsDomain { at: p });
            }
        }
        match &self.shape {
            DomainShape::Disk { .. } | DomainShape::HalfPlane { .. } => Ok(vec![from, to]),
            DomainShape::Polygon { vertices } => polygon_route(vertices, from, to),
        }
    }
}

fn rect_grid(lo: C64, hi: C64, n: usize, inside: impl Fn(C64) -> bool) -> Grid {
    let dx = (hi.re - lo.re) / n as f64;
    let dy = (hi.im - lo.im) / n as f64;
    let mut points = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            points.push(C64::new(lo.re + (c as f64 + 0.5) * dx, lo.im + (r as f64 + 0.5) * dy));
        }
    }
    let inside = points.iter().map(|p| inside(*p)).collect();
    Grid {
        points,
        inside,
        rows: n,
        cols: n,
        wraps: false,
    }
}

/// Distribute `count` points along a closed polygon proportionally to edge
/// length, always keeping the corners.
fn resample_closed(corners: &[C64], count: usize) -> Vec<C64> {
    let m = corners.len();
    let lengths: Vec<f64> = (0..m).map(|k| (corners[(k + 1) % m] - corners[k]).norm()).collect();
    let total: f64 = lengths.iter().sum();
    let spare = count.saturating_sub(m);
    let mut out = Vec::with_capacity(count.max(m));
    let mut assigned = 0usize;
    let mut acc = 0.0;
    for k in 0..m {
        acc += lengths[k];
        let upto = ((acc / total) * spare as f64).round() as usize;
        let extra = upto.saturating_sub(assigned);
        assigned += extra;
        let a = corners[k];
        let b = corners[(k + 1) % m];
        for j in 0..=extra {
            out.push(a + (b - a) * (j as f64 / (extra + 1) as f64));
        }
    }
    out
}

fn polygon_route(vertices: &[C64], from: C64, to: C64) -> Result<Vec<C64>, HoloError> {
    if geometry::segment_inside_polygon(vertices, from, to) {
        return Ok(vec![from, to]);
    }
    // visibility graph over slightly inset reflex vertices
    let inset = 1e-7 * geometry::extent(vertices);
    let n = vertices.len();
    let mut nodes = vec![from, to];
    for k in 0..n {
        if geometry::is_reflex(vertices, k) {
            let prev = vertices[(k + n - 1) % n];
            let next = vertices[(k + 1) % n];
            let a = (prev - vertices[k]).unscale((prev - vertices[k]).norm());
            let b = (next - vertices[k]).unscale((next - vertices[k]).norm());
            // reflex: the interior lies opposite to the bisector of the edges
            let bis = -(a + b);
            let bis = if bis.norm() > 0.0 {
                bis.unscale(bis.norm())
            } else {
                C64::new(-a.im, a.re)
            };
            let p = vertices[k] + bis * inset;
            if geometry::point_in_polygon(vertices, p) {
                nodes.push(p);
            }
        }
    }
    let m = nodes.len();
    let mut dist = vec![f64::INFINITY; m];
    let mut prev = vec![usize::MAX; m];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push(Reverse((OrdF64(0.0), 0usize)));
    while let Some(Reverse((OrdF64(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == 1 {
            break;
        }
        for v in 0..m {
            if v == u || !geometry::segment_inside_polygon(vertices, nodes[u], nodes[v]) {
                continue;
            }
            let nd = d + (nodes[v] - nodes[u]).norm();
            if nd < dist[v] {
                dist[v] = nd;
                prev[v] = u;
                heap.push(Reverse((OrdF64(nd), v)));
            }
        }
    }
    if !dist[1].is_finite() {
        return Err(HoloError::PathExitsDomain { at: to });
    }
    let mut path = vec![nodes[1]];
    let mut cur = 1;
    while cur != 0 {
        cur = prev[cur];
        path.push(nodes[cur]);
    }
    path.reverse();
    Ok(path)
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub(crate) struct OrdF64(pub f64);
impl Eq for OrdF64 {}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn disk_boundary_is_ccw_square_for_four_samples() {
        let b = DomainSpec::unit_disk().boundary(4);
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (p, q) in b.iter().zip(expect) {
            assert!((p - q).norm() < 1e-15);
        }
        assert!(geometry::signed_area(&b) > 0.0);
    }

    #[test]
    fn half_plane_boundary_positive_and_closed() {
        let d = DomainSpec::default_half_plane();
        let b = d.boundary(400);
        assert!(b.len() >= 400);
        assert!(geometry::signed_area(&b) > 0.0);
        assert!(geometry::is_simple(&b));
        assert!(d.contains(d.base()));
        for p in &b {
            assert!(d.contains_closed(*p));
        }
    }

    #[test]
    fn polygon_reoriented_and_base_checked() {
        let cw = vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)];
        let d = DomainSpec::polygon(cw, c(0.5, 0.5)).unwrap();
        if let DomainShape::Polygon { vertices } = d.shape() {
            assert!(geometry::signed_area(vertices) > 0.0);
        }
        let bad = DomainSpec::polygon(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], c(2.0, 2.0));
        assert!(bad.is_err());
    }

    #[test]
    fn disk_grid_strictly_interior() {
        let d = DomainSpec::unit_disk();
        let g = d.grid(64);
        assert!(g.points.iter().all(|p| d.contains(*p)));
        assert_eq!(g.points.len(), 64 * 64);
        assert!(g.edges().count() > 0);
    }

    #[test]
    fn l_route_bends_at_notch() {
        let l = vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.5),
            c(0.5, 0.5),
            c(0.5, 1.0),
            c(0.0, 1.0),
        ];
        let d = DomainSpec::polygon(l, c(0.1, 0.1)).unwrap();
        let path = d.route(c(0.9, 0.4), c(0.4, 0.9)).unwrap();
        assert_eq!(path.len(), 3);
        assert!((path[1] - c(0.5, 0.5)).norm() < 1e-5);
    }
}
