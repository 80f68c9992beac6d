//! Graph and non-graph regions along the axis `ρ = |cλ²|`.
//!
//! Every bound depends on `(λ, c)` only through `ρ`, so a region is a set of
//! `ρ` intervals, each tagged with the argument that certifies it:
//!
//! * isotropic-convex: `h` maps onto a convex domain and `|G| ≤ 1`; graph
//!   for `ρ ≤ 1/‖G‖∞²`.
//! * seeded: a seed surface with convex planar image and
//!   `ρ₀ ≤ 1/‖G‖∞²`; graph for `ρ ≤ ρ₀`.
//! * restricted disk: the isotropic argument on `|w| < R`; with `G(0) = 0`
//!   the Schwarz lemma adds the bound `(R₀/R)²`.
//! * linear connectivity: `h` univalent with `M`-arcwise connected image;
//!   graph for `ρ < 1/(M‖G‖∞²)`.
//! * non-graph: `1/‖G‖∞² < ρ < 1/inf|G|²` forces a fold.
//!
//! Hypotheses are re-checked numerically, never assumed.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::f64::consts::TAU;
use core::fmt;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::geometry;
use crate::holofn::{DomainShape, HoloError};
use crate::univalence::{
    self, boundary_image, classify_image, univalence_oracle, ImageClass, UnivalenceError, Verdict,
};
use crate::weierstrass::{DataError, DeformParams, WeierstrassData};
use crate::C64;

/// Boundary samples for `sup |G|`.
pub const SUP_SAMPLES: usize = 4096;
/// Oracle resolution used when checking hypotheses.
pub const HYPOTHESIS_RESOLUTION: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub enum KrustError {
    HypothesisFailed(String),
    SeedOutsideBound { seed_rho: f64, bound: f64 },
    InvalidParams(&'static str),
    NonSimplePolyline { near: C64 },
    Univalence(UnivalenceError),
    Data(DataError),
    Holo(HoloError),
}

impl fmt::Display for KrustError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KrustError::HypothesisFailed(why) => write!(f, "hypothesis failed: {why}"),
            KrustError::SeedOutsideBound { seed_rho, bound } => {
                write!(f, "seed |cλ²| = {seed_rho} exceeds 1/sup|G|² = {bound}")
            }
            KrustError::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            KrustError::NonSimplePolyline { near } => {
                write!(f, "polyline intersects itself near {} {:+}i", near.re, near.im)
            }
            KrustError::Univalence(e) => write!(f, "{e}"),
            KrustError::Data(e) => write!(f, "{e}"),
            KrustError::Holo(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for KrustError {}

impl From<UnivalenceError> for KrustError {
    fn from(e: UnivalenceError) -> Self {
        match e {
            UnivalenceError::NonSimplePolyline { near } => KrustError::NonSimplePolyline { near },
            e => KrustError::Univalence(e),
        }
    }
}

impl From<DataError> for KrustError {
    fn from(e: DataError) -> Self {
        KrustError::Data(e)
    }
}

impl From<HoloError> for KrustError {
    fn from(e: HoloError) -> Self {
        KrustError::Holo(e)
    }
}

/// Which argument certifies an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TheoremId {
    IsotropicConvex,
    Seeded,
    RestrictedDisk,
    Schwarz,
    LinearConnectivity,
    NonGraph,
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::IsotropicConvex => "graph:isotropic-convex",
            TheoremId::Seeded => "graph:krust-seeded",
            TheoremId::RestrictedDisk => "graph:restricted-disk",
            TheoremId::Schwarz => "graph:schwarz",
            TheoremId::LinearConnectivity => "graph:linear-connectivity",
            TheoremId::NonGraph => "nongraph",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An interval of `ρ` values with open or closed ends; `hi` may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RhoInterval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        RhoInterval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        RhoInterval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// `[lo, hi)`.
    pub fn closed_open(lo: f64, hi: f64) -> Self {
        RhoInterval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: false,
        }
    }

    pub fn contains(&self, rho: f64) -> bool {
        let above = if self.lo_closed { rho >= self.lo } else { rho > self.lo };
        let below = if self.hi_closed { rho <= self.hi } else { rho < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn intersects(&self, other: &RhoInterval) -> bool {
        let lo = if self.lo > other.lo || (self.lo == other.lo && !self.lo_closed) {
            (self.lo, self.lo_closed)
        } else {
            (other.lo, other.lo_closed)
        };
        let hi = if self.hi < other.hi || (self.hi == other.hi && !self.hi_closed) {
            (self.hi, self.hi_closed)
        } else {
            (other.hi, other.hi_closed)
        };
        let lo_closed = lo.1 && self.contains(lo.0) && other.contains(lo.0);
        let hi_closed = hi.1 && self.contains(hi.0) && other.contains(hi.0);
        !RhoInterval {
            lo: lo.0,
            hi: hi.0,
            lo_closed,
            hi_closed,
        }
        .is_empty()
    }
}

impl fmt::Display for RhoInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        if self.hi.is_infinite() {
            write!(f, "{l}{}, inf{r}", self.lo)
        } else {
            write!(f, "{l}{}, {}{r}", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub theorem: TheoremId,
    pub interval: RhoInterval,
    /// Hypotheses that were checked, with the evidence.
    pub hypotheses: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupEstimate {
    /// Converges from below as sampling is refined.
    pub value: f64,
    /// Gain of the golden-section refinement over the best sample.
    pub refinement: f64,
    pub at: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfEstimate {
    pub value: f64,
    pub at: C64,
    pub has_interior_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimates {
    pub sup: SupEstimate,
    pub inf: InfEstimate,
    /// Estimates refer to a truncation of an unbounded domain.
    pub truncated: bool,
}

/// Round to 44 significant bits, well above the rounding noise of `|G|`
/// evaluation, so that e.g. `|w³|` on the unit circle reports exactly 1.
fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let e = x.abs().log2().floor() as i32;
    let s = 2f64.powi(44 - e);
    let q = (x * s).round() / s;
    // Only snap rounding noise; values genuinely off the grid are kept.
    if (q - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
        q
    } else {
        x
    }
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup |G|` over the domain: the maximum over a dense boundary sample,
/// refined by golden-section search around the best samples.
pub fn sup_abs_g(data: &WeierstrassData) -> SupEstimate {
    let domain = data.domain();
    let g = data.g();
    let pts = domain.boundary(SUP_SAMPLES);
    let m = pts.len();
    let modulus = |w: C64| g.eval(w).map(|v| v.norm()).unwrap_or(f64::INFINITY);
    let vals: Vec<f64> = pts.iter().map(|&w| modulus(w)).collect();
    let (mut best_k, mut best) = (0, f64::NEG_INFINITY);
    for (k, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_k = k;
        }
    }
    if best.is_infinite() {
        return SupEstimate {
            value: f64::INFINITY,
            refinement: 0.0,
            at: pts[best_k],
        };
    }
    // refine around the largest local maxima
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(8);
    let (mut value, mut at) = (best, pts[best_k]);
    for k in peaks {
        let (t, v) = match domain.shape() {
            DomainShape::Disk { radius } => {
                let phi0 = TAU * k as f64 / m as f64;
                let step = TAU / m as f64;
                let (t, v) = golden_max(
                    &|phi: f64| modulus(C64::from_polar(*radius, phi)),
                    phi0 - step,
                    phi0 + step,
                );
                (C64::from_polar(*radius, t), v)
            }
            _ => {
                let prev = pts[(k + m - 1) % m];
                let here = pts[k];
                let next = pts[(k + 1) % m];
                let along = |s: f64| {
                    if s < 0.0 {
                        here + (here - prev) * s
                    } else {
                        here + (next - here) * s
                    }
                };
                let (s, v) = golden_max(&|s: f64| modulus(along(s)), -1.0, 1.0);
                (along(s), v)
            }
        };
        if v > value {
            value = v;
            at = t;
        }
    }
    SupEstimate {
        value: quantize(value),
        refinement: value - best,
        at,
    }
}

/// `inf |G|` over the closed domain: grid and boundary minimum, replaced by
/// 0 when Newton's method from a grid local minimum converges to an
/// interior zero of `G`.
pub fn inf_abs_g(data: &WeierstrassData) -> InfEstimate {
    let domain = data.domain();
    let g = data.g();
    let dg = g.derivative();
    let grid = domain.grid(96);
    let n = grid.points.len();
    let mut vals = vec![f64::INFINITY; n];
    let mut best = (f64::INFINITY, domain.base());
    for (k, w) in grid.interior_points() {
        if let Ok(v) = g.eval(w) {
            vals[k] = v.norm();
            if vals[k] < best.0 {
                best = (vals[k], w);
            }
        }
    }
    for w in domain.boundary(1024) {
        if let Ok(v) = g.eval(w) {
            if v.norm() < best.0 {
                best = (v.norm(), w);
            }
        }
    }
    let mut is_min = grid.inside.clone();
    for (a, b) in grid.edges() {
        if vals[a] < vals[b] {
            is_min[b] = false;
        } else if vals[b] < vals[a] {
            is_min[a] = false;
        }
    }
    let scale = vals.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, &v| m.max(v)).max(f64::MIN_POSITIVE);
    let spacing = domain.diameter() / 96.0;
    for (k, start) in grid.interior_points() {
        if !is_min[k] {
            continue;
        }
        let mut z = start;
        for _ in 0..60 {
            let Ok(v) = g.eval(z) else { break };
            if v.norm() <= 1e-14 * scale {
                if domain.contains(z) {
                    return InfEstimate {
                        value: 0.0,
                        at: z,
                        has_interior_zero: true,
                    };
                }
                break;
            }
            let Ok(d) = dg.eval(z) else { break };
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if step.norm() > 8.0 * spacing {
                break;
            }
            z -= step;
        }
    }
    InfEstimate {
        value: quantize(best.0),
        at: best.1,
        has_interior_zero: false,
    }
}

pub fn norm_estimates(data: &WeierstrassData) -> NormEstimates {
    NormEstimates {
        sup: sup_abs_g(data),
        inf: inf_abs_g(data),
        truncated: data.domain().is_truncated(),
    }
}

fn graph_bound(sup: f64) -> f64 {
    1.0 / (sup * sup)
}

fn check_g_nonconstant(data: &WeierstrassData, est: &NormEstimates) -> Result<(), KrustError> {
    if data.g().is_constant() || est.sup.value - est.inf.value <= 1e-12 * est.sup.value.max(1.0) {
        return Err(KrustError::HypothesisFailed("G is constant".into()));
    }
    Ok(())
}

fn check_sup_at_most_one(est: &NormEstimates) -> Result<(), KrustError> {
    if !(est.sup.value <= 1.0) {
        return Err(KrustError::HypothesisFailed(format!(
            "sup|G| = {} exceeds 1",
            est.sup.value
        )));
    }
    Ok(())
}

fn truncation_notes(data: &WeierstrassData) -> Vec<String> {
    if data.domain().is_truncated() {
        vec!["bounds refer to the truncated domain".into()]
    } else {
        Vec::new()
    }
}

/// Check that `h` maps the domain onto a convex region. Disks use the
/// analytic test `Re(1 + wF'/F) > 0`; other domains use the univalence
/// oracle on `h` plus the shape of its boundary image.
fn check_h_convex(data: &WeierstrassData) -> Result<String, KrustError> {
    let domain = data.domain();
    if matches!(domain.shape(), DomainShape::Disk { .. }) && domain.base() == C64::new(0.0, 0.0) {
        let f = data.f();
        let margin = univalence::convexity_margin(f, &f.derivative(), domain, HYPOTHESIS_RESOLUTION)?;
        if margin > univalence::CONVEXITY_MARGIN {
            Ok(format!("h convex: min Re(1 + wF'/F) = {margin}"))
        } else {
            Err(KrustError::HypothesisFailed(format!(
                "h not convex: min Re(1 + wF'/F) = {margin}"
            )))
        }
    } else {
        let h = data.planar(DeformParams::new(0.0, 1.0, 0.0)?);
        let report = univalence_oracle(&h, domain, HYPOTHESIS_RESOLUTION)?;
        if report.verdict != Verdict::Univalent {
            return Err(KrustError::HypothesisFailed(format!("h is {}", report.verdict)));
        }
        let img = boundary_image(&h, domain, 4 * HYPOTHESIS_RESOLUTION)?;
        let shape = classify_image(&img.points)?;
        if shape.class != ImageClass::Convex {
            return Err(KrustError::HypothesisFailed(format!("h image is {}", shape.class)));
        }
        Ok("h univalent with convex image (oracle)".into())
    }
}

/// Graph for `ρ ≤ 1/‖G‖∞²` when `h` is convex, `G` non-constant and
/// `|G| ≤ 1`.
pub fn region_isotropic(data: &WeierstrassData) -> Result<Certificate, KrustError> {
    let est = norm_estimates(data);
    check_g_nonconstant(data, &est)?;
    check_sup_at_most_one(&est)?;
    let convex = check_h_convex(data)?;
    let bound = graph_bound(est.sup.value);
    let mut notes = truncation_notes(data);
    notes.push("endpoint 1/sup|G|² included".into());
    Ok(Certificate {
        theorem: TheoremId::IsotropicConvex,
        interval: RhoInterval::closed(0.0, bound),
        hypotheses: vec![
            "G non-constant".into(),
            format!("sup|G| = {} <= 1", est.sup.value),
            convex,
        ],
        notes,
    })
}

/// Graph for `ρ ≤ ρ₀ = |c₀λ₀²|` when the seed surface is a graph over a
/// convex domain and `ρ₀ ≤ 1/‖G‖∞²`.
pub fn region_seeded(data: &WeierstrassData, seed: &DeformParams) -> Result<Certificate, KrustError> {
    region_seeded_at(data, seed, HYPOTHESIS_RESOLUTION)
}

pub fn region_seeded_at(
    data: &WeierstrassData,
    seed: &DeformParams,
    resolution: usize,
) -> Result<Certificate, KrustError> {
    let sup = sup_abs_g(data);
    let bound = graph_bound(sup.value);
    let rho0 = seed.rho();
    if rho0 > bound {
        return Err(KrustError::SeedOutsideBound {
            seed_rho: rho0,
            bound,
        });
    }
    let map = data.planar(*seed);
    let report = univalence_oracle(&map, data.domain(), resolution)?;
    if report.verdict != Verdict::Univalent {
        return Err(KrustError::HypothesisFailed(format!(
            "seed {seed} planar map is {}",
            report.verdict
        )));
    }
    let img = boundary_image(&map, data.domain(), (4 * resolution).max(256))?;
    let shape = classify_image(&img.points)?;
    if shape.class != ImageClass::Convex {
        return Err(KrustError::HypothesisFailed(format!(
            "seed {seed} image is {}",
            shape.class
        )));
    }
    Ok(Certificate {
        theorem: TheoremId::Seeded,
        interval: RhoInterval::closed(0.0, rho0),
        hypotheses: vec![
            format!("seed {seed}: |c0 λ0²| = {rho0} <= 1/sup|G|² = {bound}"),
            format!("seed planar map univalent at resolution {resolution}"),
            "seed image convex".into(),
        ],
        notes: truncation_notes(data),
    })
}

/// Non-graph for `1/‖G‖∞² < ρ < 1/inf|G|²` (unbounded when `G` has a zero).
pub fn region_nongraph(data: &WeierstrassData) -> Result<Certificate, KrustError> {
    let est = norm_estimates(data);
    check_g_nonconstant(data, &est)?;
    let lo = graph_bound(est.sup.value);
    let hi = if est.inf.value == 0.0 {
        f64::INFINITY
    } else {
        graph_bound(est.inf.value)
    };
    let mut hypotheses = vec![
        "G non-constant".into(),
        format!("sup|G| = {}", est.sup.value),
        format!("inf|G| = {}", est.inf.value),
    ];
    if est.inf.has_interior_zero {
        hypotheses.push(format!("G vanishes at {} {:+}i", est.inf.at.re, est.inf.at.im));
    }
    Ok(Certificate {
        theorem: TheoremId::NonGraph,
        interval: RhoInterval::open(lo, hi),
        hypotheses,
        notes: truncation_notes(data),
    })
}

/// A point with `ρ|G(w)|² = 1`, where the Jacobian of every `f_{θ,λ,c}`
/// with `|cλ²| = ρ` vanishes. Found by bisection along an interior path
/// from the minimum of `|G|` towards its maximum.
pub fn nongraph_witness(data: &WeierstrassData, rho: f64) -> Result<Option<C64>, KrustError> {
    let est = norm_estimates(data);
    let domain = data.domain();
    let level = |w: C64| -> Result<f64, HoloError> { Ok(rho * data.g().eval(w)?.norm_sqr() - 1.0) };
    let base = domain.base();
    let mut a = est.inf.at;
    if !domain.contains(a) {
        a = a + (base - a) * 1e-9;
    }
    let mut b = est.sup.at + (base - est.sup.at) * 1e-9;
    if !domain.contains(b) {
        b = b + (base - b) * 1e-6;
    }
    if !(domain.contains(a) && domain.contains(b)) {
        return Ok(None);
    }
    let (la, lb) = (level(a)?, level(b)?);
    if !(la < 0.0 && lb > 0.0) {
        return Ok(None);
    }
    let path = domain.route(a, b)?;
    for seg in path.windows(2) {
        let (p, q) = (seg[0], seg[1]);
        let (lp, lq) = (level(p)?, level(q)?);
        if lp == 0.0 {
            return Ok(Some(p));
        }
        if lp.signum() == lq.signum() {
            continue;
        }
        let (mut lo, mut hi) = (p, q);
        for _ in 0..200 {
            let mid = (lo + hi) * 0.5;
            if mid == lo || mid == hi {
                break;
            }
            let v = level(mid)?;
            if v == 0.0 {
                return Ok(Some(mid));
            }
            if v.signum() == lp.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (vl, vh) = (level(lo)?.abs(), level(hi)?.abs());
        return Ok(Some(if vl <= vh { lo } else { hi }));
    }
    Ok(None)
}

/// Certificates for the data restricted to `|w| < radius`: the isotropic
/// bound with `sup|G|` over the smaller disk, and the Schwarz bound
/// `(R₀/R)²` when `G(0) = 0` and `|G| ≤ 1` on the full disk of radius `R₀`.
pub fn region_restricted(data: &WeierstrassData, radius: f64) -> Result<Vec<Certificate>, KrustError> {
    let outer = match data.domain().shape() {
        DomainShape::Disk { radius } if data.base() == C64::new(0.0, 0.0) => *radius,
        _ => return Err(KrustError::InvalidParams("restriction needs a disk centred at 0")),
    };
    if !(radius > 0.0 && radius <= outer) {
        return Err(KrustError::InvalidParams("restriction radius must lie in (0, R]"));
    }
    let restricted = data.restrict_to_disk(radius)?;
    let mut out = vec![region_isotropic(&restricted).map(|mut c| {
        c.theorem = TheoremId::RestrictedDisk;
        c.hypotheses.insert(0, format!("restricted to |w| < {radius}"));
        c
    })?];
    let g0 = data.g().eval(C64::new(0.0, 0.0))?;
    if g0.norm() == 0.0 {
        let full = sup_abs_g(data);
        if full.value <= 1.0 {
            let bound = (outer / radius) * (outer / radius);
            out.push(Certificate {
                theorem: TheoremId::Schwarz,
                interval: RhoInterval::closed(0.0, bound),
                hypotheses: vec![
                    format!("restricted to |w| < {radius}"),
                    "G(0) = 0".into(),
                    format!("sup|G| = {} <= 1 on |w| < {outer}", full.value),
                ],
                notes: vec![],
            });
        }
    }
    Ok(out)
}

/// Graph for `ρ < 1/(M‖G‖∞²)` when `h` is univalent onto an `M`-arcwise
/// connected domain (the caller supplies `M`).
pub fn region_linear_conn(data: &WeierstrassData, m: f64) -> Result<Certificate, KrustError> {
    if !(m >= 1.0 && m.is_finite()) {
        return Err(KrustError::InvalidParams("M must be at least 1"));
    }
    let sup = sup_abs_g(data);
    let h = data.planar(DeformParams::new(0.0, 1.0, 0.0)?);
    let report = univalence_oracle(&h, data.domain(), HYPOTHESIS_RESOLUTION)?;
    if report.verdict != Verdict::Univalent {
        return Err(KrustError::HypothesisFailed(format!("h is {}", report.verdict)));
    }
    let bound = 1.0 / (m * sup.value * sup.value);
    let mut notes = truncation_notes(data);
    notes.push(format!(
        "open endpoint; the isotropic-convex certificate gives the closed bound [0, {}] when the image is convex",
        graph_bound(sup.value)
    ));
    Ok(Certificate {
        theorem: TheoremId::LinearConnectivity,
        interval: RhoInterval::closed_open(0.0, bound),
        hypotheses: vec![
            "h univalent (oracle)".into(),
            format!("image M-arcwise connected with M = {m}"),
            format!("sup|G| = {}", sup.value),
        ],
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearConnectivity {
    /// Largest observed ratio of grid-path length to distance, at least 1.
    pub m: f64,
    pub resolution: usize,
    /// Raster cell size.
    pub cell: f64,
    pub worst_pair: Option<(C64, C64)>,
}

/// Raster neighbours: king moves plus knight moves, so that grid paths are
/// within 2.8% of straight segments in every direction.
const MOVES: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (2, 1),
    (2, -1),
    (-2, 1),
    (-2, -1),
    (1, 2),
    (1, -2),
    (-1, 2),
    (-1, -2),
];

/// Estimate the arcwise-connectivity constant of the region bounded by a
/// simple polyline: shortest interior grid paths from boundary and
/// reflex-corner sources, over straight-line distance.
pub fn estimate_linear_connectivity(poly: &[C64], resolution: usize) -> Result<LinearConnectivity, KrustError> {
    if let Some(x) = geometry::self_intersections(poly, 1).first() {
        return Err(KrustError::NonSimplePolyline { near: x.point });
    }
    if poly.len() < 3 || resolution < 8 {
        return Err(KrustError::InvalidParams("need a polygon and resolution >= 8"));
    }
    let (lo, hi) = geometry::bbox(poly);
    let span = (hi.re - lo.re).max(hi.im - lo.im);
    let cell = span / resolution as f64;
    let nx = ((hi.re - lo.re) / cell).ceil().max(1.0) as usize;
    let ny = ((hi.im - lo.im) / cell).ceil().max(1.0) as usize;
    let centre = |i: usize, j: usize| C64::new(lo.re + (i as f64 + 0.5) * cell, lo.im + (j as f64 + 0.5) * cell);
    let inside = rasterize(poly, lo, cell, nx, ny);
    let idx = |i: usize, j: usize| j * nx + i;
    let at = |i: i64, j: i64| -> bool {
        i >= 0 && j >= 0 && (i as usize) < nx && (j as usize) < ny && inside[idx(i as usize, j as usize)]
    };

    // sources: boundary samples and reflex corners, snapped to inside cells
    let orient = geometry::signed_area(poly).signum();
    let mut seeds: Vec<C64> = resample(poly, 64);
    let n = poly.len();
    for k in 0..n {
        let prev = poly[(k + n - 1) % n];
        let next = poly[(k + 1) % n];
        if orient * geometry::cross(poly[k] - prev, next - poly[k]) < 0.0 {
            seeds.push(poly[k]);
        }
    }
    let mut sources: Vec<(usize, usize)> = Vec::new();
    for s in seeds {
        if let Some(c) = nearest_inside(&inside, nx, ny, lo, cell, s) {
            if !sources.contains(&c) {
                sources.push(c);
            }
        }
    }

    // Short pairs only measure the raster staircase; the constant is scale
    // invariant, so pairs closer than a twentieth of the span are skipped.
    let min_sep = (4.0 * cell).max(0.05 * span);
    let mut best = 1.0f64;
    let mut worst_pair = None;
    let mut dist = vec![f64::INFINITY; nx * ny];
    for &(si, sj) in &sources {
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        let mut heap = BinaryHeap::new();
        dist[idx(si, sj)] = 0.0;
        heap.push(Reverse((crate::holofn::OrdF64(0.0), si, sj)));
        while let Some(Reverse((d, i, j))) = heap.pop() {
            if d.0 > dist[idx(i, j)] {
                continue;
            }
            for (di, dj) in MOVES {
                let (ti, tj) = (i as i64 + di, j as i64 + dj);
                if !at(ti, tj) {
                    continue;
                }
                if (di.abs() == 2 || dj.abs() == 2)
                    && !(at(i as i64 + di / 2, j as i64 + dj / 2)
                        && at(i as i64 + di - di / 2, j as i64 + dj - dj / 2)
                        && at(i as i64 + di.signum(), j as i64 + dj.signum()))
                {
                    continue;
                }
                // a diagonal step crosses only the shared corner
                if di.abs() == 1 && dj.abs() == 1 && !(at(ti, j as i64) || at(i as i64, tj)) {
                    continue;
                }
                let nd = d.0 + cell * ((di * di + dj * dj) as f64).sqrt();
                let t = idx(ti as usize, tj as usize);
                if nd < dist[t] {
                    dist[t] = nd;
                    heap.push(Reverse((crate::holofn::OrdF64(nd), ti as usize, tj as usize)));
                }
            }
        }
        let src = centre(si, sj);
        for j in 0..ny {
            for i in 0..nx {
                let d = dist[idx(i, j)];
                if !d.is_finite() {
                    continue;
                }
                let p = centre(i, j);
                let e = (p - src).norm();
                if e >= min_sep && d / e > best {
                    best = d / e;
                    worst_pair = Some((src, p));
                }
            }
        }
    }
    Ok(LinearConnectivity {
        m: best,
        resolution,
        cell,
        worst_pair,
    })
}

fn rasterize(poly: &[C64], lo: C64, cell: f64, nx: usize, ny: usize) -> Vec<bool> {
    let mut inside = vec![false; nx * ny];
    let n = poly.len();
    let mut xs: Vec<f64> = Vec::new();
    for j in 0..ny {
        let y = lo.im + (j as f64 + 0.5) * cell;
        xs.clear();
        for k in 0..n {
            let (a, b) = (poly[k], poly[(k + 1) % n]);
            if (a.im <= y) != (b.im <= y) {
                xs.push(a.re + (y - a.im) / (b.im - a.im) * (b.re - a.re));
            }
        }
        xs.sort_by(|p, q| p.total_cmp(q));
        for pair in xs.chunks(2) {
            if pair.len() < 2 {
                break;
            }
            for i in 0..nx {
                let x = lo.re + (i as f64 + 0.5) * cell;
                if x > pair[0] && x < pair[1] {
                    inside[j * nx + i] = true;
                }
            }
        }
    }
    inside
}

fn resample(poly: &[C64], count: usize) -> Vec<C64> {
    let n = poly.len();
    let total: f64 = (0..n).map(|k| (poly[(k + 1) % n] - poly[k]).norm()).sum();
    let step = total / count as f64;
    let mut out = Vec::with_capacity(count);
    let mut k = 0;
    let mut walked = 0.0;
    for s in 0..count {
        let target = s as f64 * step;
        while k < n && walked + (poly[(k + 1) % n] - poly[k]).norm() < target {
            walked += (poly[(k + 1) % n] - poly[k]).norm();
            k += 1;
        }
        if k >= n {
            break;
        }
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let len = (b - a).norm();
        let t = if len > 0.0 { (target - walked) / len } else { 0.0 };
        out.push(a + (b - a) * t);
    }
    out
}

fn nearest_inside(inside: &[bool], nx: usize, ny: usize, lo: C64, cell: f64, p: C64) -> Option<(usize, usize)> {
    let ci = ((p.re - lo.re) / cell).floor() as i64;
    let cj = ((p.im - lo.im) / cell).floor() as i64;
    let mut best: Option<(f64, usize, usize)> = None;
    for r in 0i64..4 {
        for i in (ci - r)..=(ci + r) {
            for j in (cj - r)..=(cj + r) {
                if i < 0 || j < 0 || i as usize >= nx || j as usize >= ny {
                    continue;
                }
                if !inside[j as usize * nx + i as usize] {
                    continue;
                }
                let c = C64::new(lo.re + (i as f64 + 0.5) * cell, lo.im + (j as f64 + 0.5) * cell);
                let d = (c - p).norm();
                if best.map_or(true, |b| d < b.0) {
                    best = Some((d, i as usize, j as usize));
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.map(|b| (b.1, b.2))
}

/// Optional certificates computed by [`classify_regions`].
#[derive(Clone, Debug, PartialEq)]
pub struct RegionSettings {
    pub seeds: Vec<DeformParams>,
    /// `M` for the linear-connectivity certificate.
    pub linear_conn: Option<f64>,
    pub hypothesis_resolution: usize,
}

impl Default for RegionSettings {
    fn default() -> Self {
        RegionSettings {
            seeds: vec![
                DeformParams::new(0.0, 1.0, 1.0).unwrap(),
                DeformParams::new(0.0, 1.0, -1.0).unwrap(),
            ],
            linear_conn: None,
            hypothesis_resolution: HYPOTHESIS_RESOLUTION,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rejection {
    pub theorem: TheoremId,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionLabel {
    Graph(TheoremId),
    NonGraph,
    Undetermined,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Graph(t) => t.as_str(),
            RegionLabel::NonGraph => "nongraph",
            RegionLabel::Undetermined => "undetermined",
        }
    }
}

/// Certified graph and non-graph intervals of one surface family.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionClassification {
    pub norms: NormEstimates,
    pub certified_graph: Vec<Certificate>,
    pub certified_nongraph: Option<Certificate>,
    /// Arguments whose hypotheses failed, with the reason.
    pub rejected: Vec<Rejection>,
}

impl RegionClassification {
    /// The first certificate covering `rho`.
    pub fn label(&self, rho: f64) -> RegionLabel {
        if let Some(c) = self.certified_graph.iter().find(|c| c.interval.contains(rho)) {
            return RegionLabel::Graph(c.theorem);
        }
        match &self.certified_nongraph {
            Some(c) if c.interval.contains(rho) => RegionLabel::NonGraph,
            _ => RegionLabel::Undetermined,
        }
    }

    /// Largest certified graph endpoint and whether it is included.
    pub fn graph_endpoint(&self) -> Option<(f64, bool)> {
        let mut best: Option<(f64, bool)> = None;
        for c in &self.certified_graph {
            let e = (c.interval.hi, c.interval.hi_closed);
            best = Some(match best {
                None => e,
                Some(b) if e.0 > b.0 || (e.0 == b.0 && e.1) => e,
                Some(b) => b,
            });
        }
        best
    }

    /// Graph and non-graph certificates are disjoint.
    pub fn is_consistent(&self) -> bool {
        match &self.certified_nongraph {
            None => true,
            Some(ng) => self.certified_graph.iter().all(|c| !c.interval.intersects(&ng.interval)),
        }
    }
}

/// Run every applicable argument and collect the certified intervals.
pub fn classify_regions(data: &WeierstrassData, settings: &RegionSettings) -> Result<RegionClassification, KrustError> {
    let norms = norm_estimates(data);
    let mut out = RegionClassification {
        norms,
        certified_graph: Vec::new(),
        certified_nongraph: None,
        rejected: Vec::new(),
    };
    let record = |out: &mut RegionClassification, theorem, r: Result<Certificate, KrustError>| match r {
        Ok(c) => out.certified_graph.push(c),
        Err(e) => out.rejected.push(Rejection {
            theorem,
            reason: format!("{e}"),
        }),
    };
    record(&mut out, TheoremId::IsotropicConvex, region_isotropic(data));
    for seed in &settings.seeds {
        record(
            &mut out,
            TheoremId::Seeded,
            region_seeded_at(data, seed, settings.hypothesis_resolution),
        );
    }
    if let Some(m) = settings.linear_conn {
        record(&mut out, TheoremId::LinearConnectivity, region_linear_conn(data, m));
    }
    match region_nongraph(data) {
        Ok(c) => out.certified_nongraph = Some(c),
        Err(e) => out.rejected.push(Rejection {
            theorem: TheoremId::NonGraph,
            reason: format!("{e}"),
        }),
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub rho: f64,
    /// Sign of `c`, ±1.
    pub c_sign: i8,
    pub certificate: RegionLabel,
    pub verdict: Verdict,
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub contradictions: usize,
    /// Certified cells where the oracle was inconclusive.
    pub unconfirmed: usize,
    /// Largest `|f_{0,2,ρ/4} − f_{0,1,ρ}|` over the spot-check samples.
    pub spot_check: f64,
}

/// Sweep `(θ, ρ, sign c)` with `λ = 1`, compare each certificate with the
/// univalence oracle at resolution `n`.
pub fn sweep_validate(
    data: &WeierstrassData,
    thetas: &[f64],
    rhos: &[f64],
    n: usize,
) -> Result<SweepReport, KrustError> {
    let regions = classify_regions(data, &RegionSettings::default())?;
    sweep_against(data, &regions, thetas, rhos, n)
}

/// [`sweep_validate`] against a given classification.
pub fn sweep_against(
    data: &WeierstrassData,
    regions: &RegionClassification,
    thetas: &[f64],
    rhos: &[f64],
    n: usize,
) -> Result<SweepReport, KrustError> {
    let mut rows = Vec::with_capacity(thetas.len() * rhos.len() * 2);
    let mut contradictions = 0;
    let mut unconfirmed = 0;
    for &theta in thetas {
        for &rho in rhos {
            for sign in [1i8, -1] {
                let p = DeformParams::new(theta, 1.0, sign as f64 * rho)?;
                let report = univalence_oracle(&data.planar(p), data.domain(), n)?;
                let label = regions.label(rho);
                let contradiction = match (label, report.verdict) {
                    (RegionLabel::Graph(_), Verdict::NotUnivalent) => true,
                    (RegionLabel::NonGraph, Verdict::Univalent) => true,
                    _ => false,
                };
                if label != RegionLabel::Undetermined && report.verdict == Verdict::Inconclusive {
                    unconfirmed += 1;
                }
                contradictions += contradiction as usize;
                rows.push(SweepRow {
                    theta: p.theta(),
                    rho,
                    c_sign: sign,
                    certificate: label,
                    verdict: report.verdict,
                    contradiction,
                });
            }
        }
    }
    let mut spot_check: f64 = 0.0;
    for &rho in rhos {
        let a = DeformParams::new(0.0, 2.0, rho / 4.0)?;
        let b = DeformParams::new(0.0, 1.0, rho)?;
        for (_, w) in data.domain().grid(8).interior_points() {
            let d = (data.planar_map(&a, w)? - data.planar_map(&b, w)?).norm();
            spot_check = spot_check.max(d);
        }
    }
    Ok(SweepReport {
        rows,
        contradictions,
        unconfirmed,
        spot_check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::holofn::{DomainSpec, HoloExpr};

    fn data(g: HoloExpr) -> WeierstrassData {
        WeierstrassData::new(HoloExpr::one(), g, DomainSpec::unit_disk()).unwrap()
    }

    #[test]
    fn quantize_snaps_rounding_noise() {
        assert_eq!(quantize(1.0000000000000004), 1.0);
        assert_eq!(quantize(0.5000000000000001), 0.5);
        assert_eq!(quantize(0.25), 0.25);
        for x in [0.3, 0.8, 0.1234567, 7.77] {
            assert!((quantize(x) - x).abs() <= 4.0 * f64::EPSILON * x);
        }
    }

    #[test]
    fn sup_and_inf_of_monomials() {
        let d = data(HoloExpr::var().powi(3));
        assert_eq!(sup_abs_g(&d).value, 1.0);
        let i = inf_abs_g(&d);
        assert_eq!(i.value, 0.0);
        assert!(i.has_interior_zero);
        let d = data((HoloExpr::var() + HoloExpr::real(3.0)) * HoloExpr::real(0.25));
        assert_eq!(inf_abs_g(&d).value, 0.5);
        assert!(!inf_abs_g(&d).has_interior_zero);
    }

    #[test]
    fn interval_logic() {
        let g = RhoInterval::closed(0.0, 1.0);
        let ng = RhoInterval::open(1.0, f64::INFINITY);
        assert!(g.contains(1.0));
        assert!(!ng.contains(1.0));
        assert!(!g.intersects(&ng));
        assert!(RhoInterval::closed(0.0, 1.5).intersects(&ng));
        assert!(RhoInterval::open(1.0, 1.0).is_empty());
        assert_eq!(alloc::format!("{ng}"), "(1, inf)");
    }

    #[test]
    fn nongraph_with_bounded_annulus() {
        let d = data((HoloExpr::var() + HoloExpr::real(3.0)) * HoloExpr::real(0.25));
        let c = region_nongraph(&d).unwrap();
        assert_eq!(c.interval.lo, 1.0);
        assert_eq!(c.interval.hi, 4.0);
        assert!(!c.interval.hi_closed);
    }

    #[test]
    fn constant_g_rejected() {
        let d = data(HoloExpr::real(0.5));
        assert!(matches!(region_isotropic(&d), Err(KrustError::HypothesisFailed(_))));
    }

    #[test]
    fn witness_on_half_radius_circle() {
        let d = data(HoloExpr::var());
        let w = nongraph_witness(&d, 4.0).unwrap().unwrap();
        assert!((4.0 * w.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((w.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn linear_connectivity_of_square() {
        let sq = alloc::vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let m = estimate_linear_connectivity(&sq, 64).unwrap();
        assert!(m.m >= 1.0 && m.m <= 1.05, "{}", m.m);
    }
}
