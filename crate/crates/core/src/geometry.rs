//! Planar polyline helpers shared by the domain sampler, the univalence
//! oracle and the shape classifiers. Points are complex numbers; closed
//! polylines repeat no vertex (the closing edge is implicit).

use alloc::vec::Vec;


use crate::C64;

#[inline]
pub fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Signed area, positive for counter-clockwise polygons.
pub fn signed_area(poly: &[C64]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for k in 0..n {
        acc += cross(poly[k], poly[(k + 1) % n]);
    }
    0.5 * acc
}

/// Axis-aligned bounding box `(min, max)`.
pub fn bbox(points: &[C64]) -> (C64, C64) {
    let mut lo = C64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    (lo, hi)
}

/// Diagonal of the bounding box; within a factor √2 of the diameter.
pub fn extent(points: &[C64]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let (lo, hi) = bbox(points);
    (hi - lo).norm()
}

/// Winding number of the closed polyline around `p`.
pub fn winding_number(poly: &[C64], p: C64) -> i32 {
    let n = poly.len();
    let mut wn = 0;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        if a.im <= p.im {
            if b.im > p.im && cross(b - a, p - a) > 0.0 {
                wn += 1;
            }
        } else if b.im <= p.im && cross(b - a, p - a) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

pub fn point_in_polygon(poly: &[C64], p: C64) -> bool {
    winding_number(poly, p) != 0
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Intersection of segments `[a, b]` and `[c, d]` as parameters `(s, t)`
/// along each, if they meet (including touching and collinear overlap; for
/// collinear overlap the returned parameters mark one shared point).
pub fn segment_intersection(a: C64, b: C64, c: C64, d: C64) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = cross(r, s);
    let qp = c - a;
    let scale = r.norm().max(s.norm()).max(1e-300);
    if denom.abs() <= 1e-14 * scale * scale {
        // parallel
        if cross(qp, r).abs() > 1e-14 * scale * scale {
            return None;
        }
        let rr = r.norm_sqr();
        if rr == 0.0 {
            return None;
        }
        let t0 = (qp * r.conj()).re / rr;
        let t1 = ((d - a) * r.conj()).re / rr;
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        if hi < 0.0 || lo > 1.0 {
            return None;
        }
        let t = lo.max(0.0);
        let p = a + r * t;
        let ss = s.norm_sqr();
        let u = if ss == 0.0 { 0.0 } else { ((p - c) * s.conj()).re / ss };
        return Some((t, u.clamp(0.0, 1.0)));
    }
    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

/// A self-intersection of a closed polyline: edges `i` and `j` (edge `k`
/// joins vertex `k` to vertex `k+1 mod n`) meet at `point`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub s: f64,
    pub t: f64,
    pub point: C64,
}

/// Find intersections between non-adjacent edges of a closed polyline with
/// a sort-and-sweep over the x-extent of the edges. Stops after `limit`
/// crossings.
pub fn self_intersections(poly: &[C64], limit: usize) -> Vec<Crossing> {
    let n = poly.len();
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    let edge = |k: usize| (poly[k], poly[(k + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let lo_x = |k: usize| {
        let (a, b) = edge(k);
        a.re.min(b.re)
    };
    order.sort_by(|&p, &q| lo_x(p).total_cmp(&lo_x(q)));
    let mut active: Vec<usize> = Vec::new();
    for &k in &order {
        let (a, b) = edge(k);
        let x0 = a.re.min(b.re);
        active.retain(|&m| {
            let (c, d) = edge(m);
            c.re.max(d.re) >= x0
        });
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        for &m in &active {
            let adjacent = (m + 1) % n == k || (k + 1) % n == m;
            if adjacent {
                continue;
            }
            let (c, d) = edge(m);
            if c.im.max(d.im) < ylo || c.im.min(d.im) > yhi {
                continue;
            }
            if let Some((s, t)) = segment_intersection(a, b, c, d) {
                let (i, j, s, t) = if k < m { (k, m, s, t) } else { (m, k, t, s) };
                out.push(Crossing {
                    i,
                    j,
                    s,
                    t,
                    point: a + (b - a) * if i == k { s } else { t },
                });
                if out.len() >= limit {
                    return out;
                }
            }
        }
        active.push(k);
    }
    out
}

pub fn is_simple(poly: &[C64]) -> bool {
    self_intersections(poly, 1).is_empty()
}

/// Interior angle test helper: true when vertex `k` of a counter-clockwise
/// polygon is reflex.
pub fn is_reflex(poly: &[C64], k: usize) -> bool {
    let n = poly.len();
    let prev = poly[(k + n - 1) % n];
    let next = poly[(k + 1) % n];
    cross(poly[k] - prev, next - poly[k]) < 0.0
}

/// Does the open segment `(a, b)` stay inside the closed polygon?
pub fn segment_inside_polygon(poly: &[C64], a: C64, b: C64) -> bool {
    let n = poly.len();
    for k in 0..n {
        let c = poly[k];
        let d = poly[(k + 1) % n];
        let r = b - a;
        let s = d - c;
        let denom = cross(r, s);
        if denom.abs() < 1e-300 {
            continue;
        }
        let t = cross(c - a, s) / denom;
        let u = cross(c - a, r) / denom;
        let eps = 1e-12;
        if t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps {
            return false;
        }
    }
    // sample a few interior points to rule out passing through a vertex gap
    for q in [0.25, 0.5, 0.75] {
        if !point_in_polygon(poly, a + (b - a) * q) {
            return false;
        }
    }
    true
}

pub fn polyline_length(path: &[C64]) -> f64 {
    path.windows(2).map(|p| (p[1] - p[0]).norm()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn square() -> Vec<C64> {
        alloc::vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]
    }

    #[test]
    fn area_and_orientation() {
        assert!((signed_area(&square()) - 1.0).abs() < 1e-15);
        let mut r = square();
        r.reverse();
        assert!(signed_area(&r) < 0.0);
    }

    #[test]
    fn winding_inside_outside() {
        assert_eq!(winding_number(&square(), c(0.5, 0.5)), 1);
        assert_eq!(winding_number(&square(), c(1.5, 0.5)), 0);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bowtie = alloc::vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        let x = self_intersections(&bowtie, 4);
        assert_eq!(x.len(), 1);
        assert!((x[0].point - c(0.5, 0.5)).norm() < 1e-12);
        assert!(is_simple(&square()));
    }

    #[test]
    fn segment_in_l_shape() {
        let l = alloc::vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.5),
            c(0.5, 0.5),
            c(0.5, 1.0),
            c(0.0, 1.0)
        ];
        assert!(segment_inside_polygon(&l, c(0.1, 0.1), c(0.9, 0.2)));
        assert!(!segment_inside_polygon(&l, c(0.9, 0.4), c(0.4, 0.9)));
        assert!(is_reflex(&l, 3));
        assert!(!is_reflex(&l, 0));
    }
}
