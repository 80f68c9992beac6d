//! Numerical univalence of planar harmonic maps and shape classification of
//! their images.
//!
//! The oracle runs three stages on a domain grid: a Jacobian sign census
//! (a harmonic map is locally univalent exactly where its Jacobian does not
//! vanish), a collision search over the sampled image with a spatial hash,
//! and a self-intersection test of the boundary image. Every candidate
//! collision is re-solved with Newton's method before it counts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::geometry::{self, cross};
use crate::holofn::{DomainShape, DomainSpec, HoloError, HoloExpr};
use crate::C64;

pub const MIN_RESOLUTION: usize = 64;
/// Candidate collisions re-solved per oracle run.
pub const MAX_CONFIRMATIONS: usize = 64;
/// Side of the starlike-centre candidate grid.
pub const STAR_CANDIDATES: usize = 17;
/// Margin for `Re(1 + wφ''/φ') > margin`.
pub const CONVEXITY_MARGIN: f64 = -1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum UnivalenceError {
    ResolutionTooLow { n: usize, min: usize },
    NonSimplePolyline { near: C64 },
    DerivativeVanishes { at: C64 },
    NotADisk,
    Holo(HoloError),
}

impl fmt::Display for UnivalenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnivalenceError::ResolutionTooLow { n, min } => {
                write!(f, "resolution {n} is below the minimum {min}")
            }
            UnivalenceError::NonSimplePolyline { near } => {
                write!(f, "polyline intersects itself near {} {:+}i", near.re, near.im)
            }
            UnivalenceError::DerivativeVanishes { at } => {
                write!(f, "derivative vanishes near {} {:+}i", at.re, at.im)
            }
            UnivalenceError::NotADisk => f.write_str("domain must be a disk"),
            UnivalenceError::Holo(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for UnivalenceError {}

impl From<HoloError> for UnivalenceError {
    fn from(e: HoloError) -> Self {
        UnivalenceError::Holo(e)
    }
}

/// A planar map `f(w)` with Wirtinger derivatives `(f_w, f_w̄)`.
pub trait HarmonicMap {
    fn eval(&self, w: C64) -> Result<C64, HoloError>;

    /// Central differences by default.
    fn wirtinger(&self, w: C64) -> Result<(C64, C64), HoloError> {
        let h = 1e-5 * w.norm().max(1.0);
        let fx = (self.eval(w + C64::new(h, 0.0))? - self.eval(w - C64::new(h, 0.0))?) / (2.0 * h);
        let fy = (self.eval(w + C64::new(0.0, h))? - self.eval(w - C64::new(0.0, h))?) / (2.0 * h);
        let i = C64::new(0.0, 1.0);
        Ok(((fx - i * fy) * 0.5, (fx + i * fy) * 0.5))
    }

    /// `|f_w|² − |f_w̄|²`.
    fn jacobian(&self, w: C64) -> Result<f64, HoloError> {
        let (a, b) = self.wirtinger(w)?;
        Ok(a.norm_sqr() - b.norm_sqr())
    }
}

impl<M: HarmonicMap + ?Sized> HarmonicMap for &M {
    fn eval(&self, w: C64) -> Result<C64, HoloError> {
        (**self).eval(w)
    }

    fn wirtinger(&self, w: C64) -> Result<(C64, C64), HoloError> {
        (**self).wirtinger(w)
    }
}

/// Wrap a closure; derivatives by finite differences.
pub struct FnMap<F>(pub F);

impl<F: Fn(C64) -> C64> HarmonicMap for FnMap<F> {
    fn eval(&self, w: C64) -> Result<C64, HoloError> {
        let v = (self.0)(w);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(HoloError::PoleOrBranchCut { at: w })
        }
    }
}

/// A holomorphic map `φ`, viewed as a harmonic map with `f_w̄ = 0`.
#[derive(Clone, Debug)]
pub struct ConformalMap {
    phi: HoloExpr,
    dphi: HoloExpr,
}

impl ConformalMap {
    pub fn new(phi: HoloExpr) -> Self {
        ConformalMap {
            dphi: phi.derivative(),
            phi,
        }
    }
}

impl HarmonicMap for ConformalMap {
    fn eval(&self, w: C64) -> Result<C64, HoloError> {
        self.phi.eval(w)
    }

    fn wirtinger(&self, w: C64) -> Result<(C64, C64), HoloError> {
        Ok((self.dphi.eval(w)?, C64::new(0.0, 0.0)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Univalent,
    NotUnivalent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Univalent => "univalent",
            Verdict::NotUnivalent => "not_univalent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianSign {
    Positive,
    Negative,
    Mixed,
}

impl JacobianSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            JacobianSign::Positive => "positive",
            JacobianSign::Negative => "negative",
            JacobianSign::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JacobianCensus {
    pub positive: usize,
    pub negative: usize,
    /// Samples with `|J| ≤ 1e-13·(|f_w|² + |f_w̄|²)`.
    pub zero: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnivalenceReport {
    pub verdict: Verdict,
    pub jacobian_sign: JacobianSign,
    pub census: JacobianCensus,
    /// Two distinct preimages of (numerically) the same image point.
    pub collision_witness: Option<(C64, C64)>,
    /// A point on the zero set of the Jacobian.
    pub jacobian_zero_witness: Option<C64>,
    pub boundary_simple: bool,
    /// Image-plane location of the first boundary self-crossing.
    pub boundary_crossing: Option<C64>,
    pub grid_resolution: usize,
    pub boundary_samples: usize,
    pub image_extent: f64,
    pub eps_collide: f64,
    pub delta_sep: f64,
    pub candidates_checked: usize,
    /// Candidates Newton could not resolve either way.
    pub ambiguous: usize,
}

/// Image of a sampled domain boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryImage {
    pub points: Vec<C64>,
    pub preimages: Vec<C64>,
    /// The domain is a truncation of an unbounded one.
    pub truncated: bool,
}

/// Closed polyline `f(∂D)` with `m` samples. Samples where `f` cannot be
/// evaluated are nudged a relative `1e-9` towards the basepoint.
pub fn boundary_image<M: HarmonicMap + ?Sized>(
    map: &M,
    domain: &DomainSpec,
    m: usize,
) -> Result<BoundaryImage, HoloError> {
    let base = domain.base();
    let pre = domain.boundary(m);
    let mut points = Vec::with_capacity(pre.len());
    let mut preimages = Vec::with_capacity(pre.len());
    for b in pre {
        match map.eval(b) {
            Ok(v) => {
                points.push(v);
                preimages.push(b);
            }
            Err(_) => {
                let b2 = b + (base - b) * 1e-9;
                points.push(map.eval(b2)?);
                preimages.push(b2);
            }
        }
    }
    Ok(BoundaryImage {
        points,
        preimages,
        truncated: domain.is_truncated(),
    })
}

/// Damped Newton for `f(z) = target` from `start`, staying in the domain.
fn solve_preimage<M: HarmonicMap + ?Sized>(
    map: &M,
    domain: &DomainSpec,
    target: C64,
    start: C64,
    tol: f64,
) -> Option<C64> {
    let max_step = 0.25 * domain.diameter();
    let mut z = start;
    let mut r = target - map.eval(z).ok()?;
    for _ in 0..60 {
        if r.norm() <= tol {
            return Some(z);
        }
        let (a, b) = map.wirtinger(z).ok()?;
        let det = a.norm_sqr() - b.norm_sqr();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let mut dz = (a.conj() * r - b * r.conj()) / det;
        if dz.norm() > max_step {
            dz *= max_step / dz.norm();
        }
        let mut accepted = false;
        for _ in 0..30 {
            let cand = z + dz;
            if domain.contains(cand) {
                if let Ok(v) = map.eval(cand) {
                    let r2 = target - v;
                    if r2.norm() < r.norm() || r2.norm() <= tol {
                        z = cand;
                        r = r2;
                        accepted = true;
                        break;
                    }
                }
            }
            dz *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (r.norm() <= tol).then_some(z)
}

enum Confirmation {
    Distinct(C64),
    Same,
    Unresolved,
}

/// Look for a preimage of `f(own)` near `start` that is not `own`.
fn confirm<M: HarmonicMap + ?Sized>(
    map: &M,
    domain: &DomainSpec,
    own: C64,
    start: C64,
    sep: f64,
    tol: f64,
) -> Confirmation {
    let target = match map.eval(own) {
        Ok(v) => v,
        Err(_) => return Confirmation::Unresolved,
    };
    match solve_preimage(map, domain, target, start, tol) {
        Some(z) if (z - own).norm() > sep => Confirmation::Distinct(z),
        Some(_) => Confirmation::Same,
        None => Confirmation::Unresolved,
    }
}

fn bisect_jacobian<M: HarmonicMap + ?Sized>(map: &M, a: C64, b: C64, ja: f64) -> C64 {
    let (mut lo, mut hi) = (a, b);
    for _ in 0..60 {
        let mid = (lo + hi) * 0.5;
        match map.jacobian(mid) {
            Ok(j) if j == 0.0 => return mid,
            Ok(j) if j.signum() == ja.signum() => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    (lo + hi) * 0.5
}

fn cell_key(p: C64, eps: f64) -> (i64, i64) {
    ((p.re / eps).floor() as i64, (p.im / eps).floor() as i64)
}

/// Decide univalence of `map` on `domain` at grid resolution `n`.
pub fn univalence_oracle<M: HarmonicMap + ?Sized>(
    map: &M,
    domain: &DomainSpec,
    n: usize,
) -> Result<UnivalenceReport, UnivalenceError> {
    if n < MIN_RESOLUTION {
        return Err(UnivalenceError::ResolutionTooLow {
            n,
            min: MIN_RESOLUTION,
        });
    }
    let grid = domain.grid(n);
    let count = grid.points.len();
    let mut values = vec![C64::new(0.0, 0.0); count];
    let mut jac = vec![0.0f64; count];
    let mut census = JacobianCensus::default();
    let mut zero_at: Option<C64> = None;
    for (k, w) in grid.interior_points() {
        values[k] = map.eval(w)?;
        let (a, b) = map.wirtinger(w)?;
        let j = a.norm_sqr() - b.norm_sqr();
        jac[k] = j;
        if j.abs() <= 1e-13 * (a.norm_sqr() + b.norm_sqr()) {
            census.zero += 1;
            jac[k] = 0.0;
            zero_at.get_or_insert(w);
        } else if j > 0.0 {
            census.positive += 1;
        } else {
            census.negative += 1;
        }
    }
    let mixed = census.zero > 0 || (census.positive > 0 && census.negative > 0);
    let jacobian_sign = if mixed {
        JacobianSign::Mixed
    } else if census.negative == 0 {
        JacobianSign::Positive
    } else {
        JacobianSign::Negative
    };
    let mut jacobian_zero_witness = zero_at;
    if mixed && jacobian_zero_witness.is_none() {
        for (a, b) in grid.edges() {
            if jac[a].signum() != jac[b].signum() {
                jacobian_zero_witness = Some(bisect_jacobian(map, grid.points[a], grid.points[b], jac[a]));
                break;
            }
        }
    }

    let m = (4 * n).max(256);
    let bimg = boundary_image(map, domain, m)?;
    let mut all: Vec<C64> = grid.interior_points().map(|(k, _)| values[k]).collect();
    all.extend_from_slice(&bimg.points);
    let image_extent = geometry::extent(&all);
    let eps_collide = image_extent / (8 * n) as f64;
    let delta_sep = domain.diameter() * 4.0 / n as f64;
    let tol = 1e-11 * image_extent.max(f64::MIN_POSITIVE);

    // stage 2: spatial hash over the sampled image
    let mut collision_witness = None;
    let mut candidates_checked = 0;
    let mut ambiguous = 0;
    if eps_collide > 0.0 {
        let mut cells: Vec<((i64, i64), usize)> = grid
            .interior_points()
            .map(|(k, _)| (cell_key(values[k], eps_collide), k))
            .collect();
        cells.sort_unstable();
        let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
        'outer: for &(key, k) in &cells {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let nk = (key.0 + dx, key.1 + dy);
                    let start = cells.partition_point(|(c, _)| *c < nk);
                    for &(c, j) in &cells[start..] {
                        if c != nk {
                            break;
                        }
                        if j <= k {
                            continue;
                        }
                        let d = (values[j] - values[k]).norm();
                        if d < eps_collide && (grid.points[j] - grid.points[k]).norm() > delta_sep {
                            candidates.push((d, k, j));
                            if candidates.len() >= 50_000 {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        for &(_, k, j) in candidates.iter().take(MAX_CONFIRMATIONS) {
            candidates_checked += 1;
            let (wk, wj) = (grid.points[k], grid.points[j]);
            match confirm(map, domain, wj, wk, 0.5 * delta_sep, tol) {
                Confirmation::Distinct(z) => {
                    collision_witness = Some((z, wj));
                    break;
                }
                Confirmation::Same => {}
                Confirmation::Unresolved => ambiguous += 1,
            }
        }
    }

    // stage 3: boundary image
    let crossings = geometry::self_intersections(&bimg.points, 16);
    let boundary_simple = crossings.is_empty();
    let boundary_crossing = crossings.first().map(|x| x.point);
    let mut boundary_confirmed = false;
    if !boundary_simple {
        let base = domain.base();
        let pre = &bimg.preimages;
        let mm = pre.len();
        let pull = 2.0 / n as f64;
        for x in &crossings {
            let bi = pre[x.i] + (pre[(x.i + 1) % mm] - pre[x.i]) * x.s;
            let bj = pre[x.j] + (pre[(x.j + 1) % mm] - pre[x.j]) * x.t;
            let wi = bi + (base - bi) * pull;
            let wj = bj + (base - bj) * pull;
            if !(domain.contains(wi) && domain.contains(wj)) {
                continue;
            }
            if let Confirmation::Distinct(z) = confirm(map, domain, wi, wj, 0.5 * delta_sep, tol) {
                boundary_confirmed = true;
                collision_witness.get_or_insert((z, wi));
                break;
            }
        }
    }

    let verdict = if mixed || collision_witness.is_some() || boundary_confirmed {
        Verdict::NotUnivalent
    } else if !boundary_simple || ambiguous > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Univalent
    };
    Ok(UnivalenceReport {
        verdict,
        jacobian_sign,
        census,
        collision_witness,
        jacobian_zero_witness,
        boundary_simple,
        boundary_crossing,
        grid_resolution: n,
        boundary_samples: bimg.points.len(),
        image_extent,
        eps_collide,
        delta_sep,
        candidates_checked,
        ambiguous,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageClass {
    Convex,
    StarlikeNotConvex,
    Neither,
    Unknown,
}

impl ImageClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ImageClass::Convex => "convex",
            ImageClass::StarlikeNotConvex => "starlike_not_convex",
            ImageClass::Neither => "neither",
            ImageClass::Unknown => "unknown",
        }
    }
}

impl fmt::Display for ImageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageShape {
    pub boundary: Vec<C64>,
    pub class: ImageClass,
    pub starlike_center: Option<C64>,
    /// Interior candidate centres examined by the starlike search.
    pub candidates_tested: usize,
}

/// Classify the region bounded by a simple closed polyline as convex,
/// starlike (with a witness centre) or neither. Tolerances are
/// `1e-9·extent²` on edge cross products.
pub fn classify_image(poly: &[C64]) -> Result<ImageShape, UnivalenceError> {
    if let Some(x) = geometry::self_intersections(poly, 1).first() {
        return Err(UnivalenceError::NonSimplePolyline { near: x.point });
    }
    let mut shape = ImageShape {
        boundary: poly.to_vec(),
        class: ImageClass::Unknown,
        starlike_center: None,
        candidates_tested: 0,
    };
    let n = poly.len();
    let area = geometry::signed_area(poly);
    let scale = geometry::extent(poly);
    if n < 3 || area == 0.0 || !area.is_finite() || scale == 0.0 {
        return Ok(shape);
    }
    let sigma = area.signum();
    let tol = 1e-9 * scale * scale;
    let convex = (0..n).all(|k| {
        let e1 = poly[(k + 1) % n] - poly[k];
        let e2 = poly[(k + 2) % n] - poly[(k + 1) % n];
        sigma * cross(e1, e2) >= -tol
    });
    if convex {
        shape.class = ImageClass::Convex;
        return Ok(shape);
    }
    let (lo, hi) = geometry::bbox(poly);
    let centroid = polygon_centroid(poly, area);
    let mut candidates: Vec<C64> = Vec::new();
    for i in 0..STAR_CANDIDATES {
        for j in 0..STAR_CANDIDATES {
            let a = C64::new(
                lo.re + (i as f64 + 0.5) / STAR_CANDIDATES as f64 * (hi.re - lo.re),
                lo.im + (j as f64 + 0.5) / STAR_CANDIDATES as f64 * (hi.im - lo.im),
            );
            if geometry::point_in_polygon(poly, a) {
                candidates.push(a);
            }
        }
    }
    candidates.sort_by(|p, q| (*p - centroid).norm().total_cmp(&(*q - centroid).norm()));
    for a in candidates {
        shape.candidates_tested += 1;
        let sees_all = (0..n).all(|k| sigma * cross(poly[k] - a, poly[(k + 1) % n] - a) >= -tol);
        if sees_all {
            shape.class = ImageClass::StarlikeNotConvex;
            shape.starlike_center = Some(a);
            return Ok(shape);
        }
    }
    shape.class = ImageClass::Neither;
    Ok(shape)
}

fn polygon_centroid(poly: &[C64], area: f64) -> C64 {
    let n = poly.len();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let (p, q) = (poly[k], poly[(k + 1) % n]);
        acc += (p + q) * cross(p, q);
    }
    acc / (6.0 * area)
}

/// Sample points for the analytic convexity test: the polar grid plus a
/// ring closer to the boundary than the outermost grid ring.
fn convexity_samples(domain: &DomainSpec, n: usize) -> Result<Vec<C64>, UnivalenceError> {
    let radius = match domain.shape() {
        DomainShape::Disk { radius } if domain.base() == C64::new(0.0, 0.0) => *radius,
        _ => return Err(UnivalenceError::NotADisk),
    };
    let grid = domain.grid(n);
    let mut pts = grid.points;
    let m = (4 * n).max(256);
    let r = radius * (1.0 - 0.25 / n as f64);
    pts.extend((0..m).map(|k| C64::from_polar(r, core::f64::consts::TAU * k as f64 / m as f64)));
    Ok(pts)
}

/// Minimum of `Re(1 + w·d2/d1)` over the samples, with `d1 = φ'` and
/// `d2 = φ''`.
pub fn convexity_margin(
    d1: &HoloExpr,
    d2: &HoloExpr,
    domain: &DomainSpec,
    n: usize,
) -> Result<f64, UnivalenceError> {
    let pts = convexity_samples(domain, n)?;
    let mut vals = Vec::with_capacity(pts.len());
    let mut big: f64 = 0.0;
    for &w in &pts {
        let a = d1.eval(w).map_err(|_| UnivalenceError::DerivativeVanishes { at: w })?;
        if a.norm() == 0.0 {
            return Err(UnivalenceError::DerivativeVanishes { at: w });
        }
        big = big.max(a.norm());
        vals.push(a);
    }
    let mut min = f64::INFINITY;
    for (&w, &a) in pts.iter().zip(&vals) {
        if a.norm() <= 1e-12 * big {
            return Err(UnivalenceError::DerivativeVanishes { at: w });
        }
        let b = d2.eval(w)?;
        let q = (C64::new(1.0, 0.0) + w * b / a).re;
        min = min.min(q);
    }
    Ok(min)
}

/// `Re(1 + wφ''/φ') > −1e-9` on a polar grid of the disk and a ring next to
/// its boundary, i.e. `φ` maps the disk onto a convex domain.
pub fn analytic_convexity(phi: &HoloExpr, domain: &DomainSpec, n: usize) -> Result<bool, UnivalenceError> {
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    Ok(convexity_margin(&d1, &d2, domain, n)? > CONVEXITY_MARGIN)
}

/// The convexity test applied to `h = ∫F`: `Re(1 + wF'/F) > 0`.
pub fn weierstrass_convexity(f: &HoloExpr, domain: &DomainSpec, n: usize) -> Result<bool, UnivalenceError> {
    let d2 = f.derivative();
    Ok(convexity_margin(f, &d2, domain, n)? > CONVEXITY_MARGIN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use core::f64::consts::TAU;

    #[test]
    fn identity_is_univalent() {
        let r = univalence_oracle(&FnMap(|w| w), &DomainSpec::unit_disk(), 128).unwrap();
        assert_eq!(r.verdict, Verdict::Univalent);
        assert_eq!(r.jacobian_sign, JacobianSign::Positive);
        assert!(r.boundary_simple);
    }

    #[test]
    fn low_resolution_rejected() {
        let r = univalence_oracle(&FnMap(|w| w), &DomainSpec::unit_disk(), 32);
        assert_eq!(r.unwrap_err(), UnivalenceError::ResolutionTooLow { n: 32, min: 64 });
    }

    #[test]
    fn cube_map_overlaps_itself() {
        // w³ on a strip above the origin: locally univalent, arguments wrap past 2π
        let d = DomainSpec::polygon(
            alloc::vec![c(-1.0, 0.2), c(1.0, 0.2), c(1.0, 1.0), c(-1.0, 1.0)],
            c(0.0, 0.6),
        )
        .unwrap();
        let r = univalence_oracle(&FnMap(|w: C64| w * w * w), &d, 96).unwrap();
        assert_eq!(r.jacobian_sign, JacobianSign::Positive);
        assert_eq!(r.verdict, Verdict::NotUnivalent);
        let (a, b) = r.collision_witness.unwrap();
        assert!((a - b).norm() > r.delta_sep * 0.5);
        assert!((a * a * a - b * b * b).norm() < 1e-9);
    }

    #[test]
    fn fold_gives_mixed_jacobian() {
        // f = w + conj(w)²: f_w̄ = 2·conj(w), fold on |w| = 1/2
        let r = univalence_oracle(&FnMap(|w: C64| w + w.conj() * w.conj()), &DomainSpec::unit_disk(), 64).unwrap();
        assert_eq!(r.jacobian_sign, JacobianSign::Mixed);
        assert_eq!(r.verdict, Verdict::NotUnivalent);
        let z = r.jacobian_zero_witness.unwrap();
        // J = 1 − 4|w|²
        assert!((z.norm() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn square_boundary_from_four_samples() {
        let b = boundary_image(&FnMap(|w| w), &DomainSpec::unit_disk(), 4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (p, q) in b.points.iter().zip(expect) {
            assert!((p - q).norm() < 1e-15);
        }
        assert!(!b.truncated);
    }

    #[test]
    fn classify_polygons() {
        let gon: Vec<C64> = (0..64).map(|k| C64::from_polar(1.0, TAU * k as f64 / 64.0)).collect();
        assert_eq!(classify_image(&gon).unwrap().class, ImageClass::Convex);
        let star: Vec<C64> = (0..10)
            .map(|k| C64::from_polar(if k % 2 == 0 { 1.0 } else { 0.4 }, TAU * k as f64 / 10.0))
            .collect();
        let s = classify_image(&star).unwrap();
        assert_eq!(s.class, ImageClass::StarlikeNotConvex);
        assert!(s.starlike_center.unwrap().norm() < 0.2);
        let bowtie = alloc::vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(matches!(classify_image(&bowtie), Err(UnivalenceError::NonSimplePolyline { .. })));
    }

    #[test]
    fn spiral_is_neither() {
        // a thick spiral arm: not starlike from any point
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for k in 0..=200 {
            let t = 3.0 * TAU * k as f64 / 200.0;
            let r = 1.0 + 0.5 * t;
            outer.push(C64::from_polar(r + 0.3, t));
            inner.push(C64::from_polar(r - 0.3, t));
        }
        inner.reverse();
        outer.extend(inner);
        assert_eq!(classify_image(&outer).unwrap().class, ImageClass::Neither);
    }

    #[test]
    fn convexity_of_simple_maps() {
        let w = HoloExpr::var;
        let d = DomainSpec::unit_disk();
        assert!(analytic_convexity(&w(), &d, 64).unwrap());
        assert!(!analytic_convexity(&(w() + w().powi(3)), &d, 64).unwrap());
        assert!(weierstrass_convexity(&HoloExpr::one(), &d, 64).unwrap());
        let f = (HoloExpr::one() - w()).powi(-3);
        assert!(!weierstrass_convexity(&f, &DomainSpec::disk(0.999).unwrap(), 64).unwrap());
        let poly = DomainSpec::polygon(alloc::vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], c(0.2, 0.2)).unwrap();
        assert_eq!(analytic_convexity(&w(), &poly, 64).unwrap_err(), UnivalenceError::NotADisk);
        let sq = w().powi(2);
        assert!(matches!(
            analytic_convexity(&sq, &DomainSpec::disk(0.5).unwrap(), 64),
            Ok(_) | Err(UnivalenceError::DerivativeVanishes { .. })
        ));
    }
}
