//! The three-parameter family `X_{θ,λ,c}` generated by Weierstrass data
//! `(F, G)` on a simply connected domain.
//!
//! With `h = ∫F`, `g = −∫G²F` and `T = ∫2GF` (all vanishing at the domain
//! basepoint) the surface is
//!
//! ```text
//! X_{θ,λ,c}(w) = ( (e^{iθ}/λ)·(h + cλ²e^{−2iθ}·conj(g)),  Re(e^{iθ}T) )
//! ```
//!
//! and its horizontal part is the planar harmonic map
//! `f_{θ,λ,c} = h + cλ²e^{−2iθ}·conj(g)` up to the similarity `e^{iθ}/λ`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, TAU};
use core::fmt;

#[allow(unused_imports)] // inherent f64 methods shadow it whenever std is linked
use num_traits::Float;

use crate::holofn::{quadrature, DomainShape, DomainSpec, HoloError, HoloExpr, DEFAULT_TOL};
use crate::univalence::HarmonicMap;
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub enum DataError {
    Holo(HoloError),
    /// `F` vanishes at every sample of the domain.
    FIdenticallyZero,
    /// A supplied closed-form potential does not differentiate to its
    /// integrand.
    ClosedFormMismatch { which: &'static str, at: C64 },
    ZeroC,
    InvalidParams(&'static str),
    /// `restrict_to_disk` needs a disk domain centred at the origin.
    NotADisk,
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::Holo(e) => write!(f, "{e}"),
            DataError::FIdenticallyZero => f.write_str("F vanishes identically on the domain"),
            DataError::ClosedFormMismatch { which, at } => write!(
                f,
                "closed form for {which} does not match its integrand at {} {:+}i",
                at.re, at.im
            ),
            DataError::ZeroC => f.write_str("c must be non-zero"),
            DataError::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            DataError::NotADisk => f.write_str("domain is not a disk centred at the origin"),
        }
    }
}

impl core::error::Error for DataError {}

impl From<HoloError> for DataError {
    fn from(e: HoloError) -> Self {
        DataError::Holo(e)
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point `(θ, λ, c)` of the parameter space `ℝ/2πℤ × (0, ∞) × ℝ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformParams {
    theta: f64,
    lambda: f64,
    c: f64,
}

impl DeformParams {
    pub fn new(theta: f64, lambda: f64, c: f64) -> Result<Self, DataError> {
        if !theta.is_finite() {
            return Err(DataError::InvalidParams("theta must be finite"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(DataError::InvalidParams("lambda must be positive"));
        }
        if !c.is_finite() {
            return Err(DataError::InvalidParams("c must be finite"));
        }
        Ok(DeformParams {
            theta: reduce_angle(theta),
            lambda,
            c,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `cλ²`, the only combination of `(λ, c)` the planar map sees.
    pub fn c_lambda2(&self) -> f64 {
        self.c * self.lambda * self.lambda
    }

    /// `ρ = |cλ²|`.
    pub fn rho(&self) -> f64 {
        self.c_lambda2().abs()
    }

    /// `e^{iθ}`.
    pub fn phase(&self) -> C64 {
        C64::from_polar(1.0, self.theta)
    }

    /// Coefficient of `conj(g)` in the planar map: `cλ²e^{−2iθ}`.
    pub fn conj_coeff(&self) -> C64 {
        C64::from_polar(self.c_lambda2(), -2.0 * self.theta)
    }

    pub fn conjugate(&self) -> Self {
        self.bonnet(FRAC_PI_2)
    }

    pub fn bonnet(&self, dtheta: f64) -> Self {
        DeformParams {
            theta: reduce_angle(self.theta + dtheta),
            ..*self
        }
    }

    pub fn lopez_ros(&self, mu: f64) -> Result<Self, DataError> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(DataError::InvalidParams("the scale factor must be positive"));
        }
        DeformParams::new(self.theta, self.lambda * mu, self.c)
    }

    pub fn c_shift(&self, c: f64) -> Self {
        DeformParams { c, ..*self }
    }

    /// Componentwise comparison, with `θ` compared on the circle.
    pub fn approx_eq(&self, other: &DeformParams, tol: f64) -> bool {
        let d = (self.theta - other.theta).abs();
        let dtheta = d.min(TAU - d);
        dtheta <= tol && (self.lambda - other.lambda).abs() <= tol && (self.c - other.c).abs() <= tol
    }
}

impl fmt::Display for DeformParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(θ={}, λ={}, c={})", self.theta, self.lambda, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    /// `x + iy`.
    pub horizontal: C64,
    /// `t`.
    pub height: f64,
    pub w: C64,
}

/// Symbolic antiderivatives `h, g, T` of `F, −G²F, 2GF`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForms {
    pub h: HoloExpr,
    pub g: HoloExpr,
    pub t: HoloExpr,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialValues {
    pub h: C64,
    pub g: C64,
    pub t: C64,
}

#[derive(Clone, Debug)]
enum PotentialKind {
    Symbolic { forms: ClosedForms, at_base: [C64; 3] },
    Quadrature { integrands: [HoloExpr; 3] },
}

/// Evaluators for `h, g, T`, normalised to vanish at the basepoint.
#[derive(Clone, Debug)]
pub struct Potentials {
    kind: PotentialKind,
    domain: DomainSpec,
    tol: f64,
}

impl Potentials {
    pub fn is_symbolic(&self) -> bool {
        matches!(self.kind, PotentialKind::Symbolic { .. })
    }

    /// Absolute quadrature tolerance (unused on the symbolic path).
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn eval(&self, w: C64) -> Result<PotentialValues, HoloError> {
        match &self.kind {
            PotentialKind::Symbolic { forms, at_base } => Ok(PotentialValues {
                h: forms.h.eval(w)? - at_base[0],
                g: forms.g.eval(w)? - at_base[1],
                t: forms.t.eval(w)? - at_base[2],
            }),
            PotentialKind::Quadrature { integrands } => {
                let base = self.domain.base();
                if w == base {
                    return Ok(PotentialValues {
                        h: C64::new(0.0, 0.0),
                        g: C64::new(0.0, 0.0),
                        t: C64::new(0.0, 0.0),
                    });
                }
                let path = self.domain.route(base, w)?;
                let [f, g2f, gf] = integrands;
                let v = quadrature::integrate_polyline(
                    &|z| Ok([f.eval(z)?, g2f.eval(z)?, gf.eval(z)?]),
                    &path,
                    self.tol,
                )?;
                Ok(PotentialValues {
                    h: v[0],
                    g: v[1],
                    t: v[2],
                })
            }
        }
    }

    pub fn h(&self, w: C64) -> Result<C64, HoloError> {
        Ok(self.eval(w)?.h)
    }

    pub fn g(&self, w: C64) -> Result<C64, HoloError> {
        Ok(self.eval(w)?.g)
    }

    pub fn t(&self, w: C64) -> Result<C64, HoloError> {
        Ok(self.eval(w)?.t)
    }
}

/// Weierstrass data `(F, G)` on a domain with a basepoint.
#[derive(Clone, Debug)]
pub struct WeierstrassData {
    f: HoloExpr,
    g: HoloExpr,
    df: HoloExpr,
    domain: DomainSpec,
    closed: Option<ClosedForms>,
    potentials: Potentials,
}

fn validation_samples(domain: &DomainSpec) -> (Vec<C64>, Vec<C64>) {
    let base = domain.base();
    let ring: Vec<C64> = domain
        .boundary(256)
        .into_iter()
        .map(|b| b + (base - b) * 1e-6)
        .filter(|&p| domain.contains(p))
        .collect();
    let grid = domain.grid(24);
    let mut interior: Vec<C64> = grid.interior_points().map(|(_, p)| p).collect();
    interior.push(base);
    (ring, interior)
}

impl WeierstrassData {
    /// Validate `(F, G)` on `domain` and set up quadrature-backed potentials.
    pub fn new(f: HoloExpr, g: HoloExpr, domain: DomainSpec) -> Result<Self, DataError> {
        let (ring, interior) = validation_samples(&domain);
        f.check_analytic_on(&ring, &interior)?;
        g.check_analytic_on(&ring, &interior)?;
        let mut nonzero = false;
        for &w in ring.iter().chain(&interior) {
            if f.eval(w)? != C64::new(0.0, 0.0) {
                nonzero = true;
                break;
            }
        }
        if !nonzero {
            return Err(DataError::FIdenticallyZero);
        }
        let integrands = [
            f.clone(),
            -(g.clone().powi(2) * f.clone()),
            HoloExpr::real(2.0) * g.clone() * f.clone(),
        ];
        let potentials = Potentials {
            kind: PotentialKind::Quadrature { integrands },
            domain: domain.clone(),
            tol: DEFAULT_TOL,
        };
        Ok(WeierstrassData {
            df: f.derivative(),
            f,
            g,
            domain,
            closed: None,
            potentials,
        })
    }

    /// Attach symbolic potentials after checking `h' = F`, `g' = −G²F` and
    /// `T' = 2GF` at sample points.
    pub fn with_closed_forms(mut self, forms: ClosedForms) -> Result<Self, DataError> {
        let (ring, interior) = validation_samples(&self.domain);
        let checks: [(&'static str, &HoloExpr); 3] = [("h", &forms.h), ("g", &forms.g), ("T", &forms.t)];
        for (which, e) in checks {
            e.check_analytic_on(&ring, &interior)?;
            let d = e.derivative();
            for &w in ring.iter().step_by(4).chain(interior.iter().step_by(3)) {
                let f = self.f.eval(w)?;
                let g = self.g.eval(w)?;
                let expect = match which {
                    "h" => f,
                    "g" => -(g * g * f),
                    _ => g * f * 2.0,
                };
                let got = d.eval(w)?;
                if (got - expect).norm() > 1e-8 * (1.0 + expect.norm()) {
                    return Err(DataError::ClosedFormMismatch { which, at: w });
                }
            }
        }
        let base = self.domain.base();
        let at_base = [forms.h.eval(base)?, forms.g.eval(base)?, forms.t.eval(base)?];
        self.potentials.kind = PotentialKind::Symbolic {
            forms: forms.clone(),
            at_base,
        };
        self.closed = Some(forms);
        Ok(self)
    }

    /// The same data with potentials forced onto the quadrature path.
    pub fn without_closed_forms(&self) -> Self {
        let integrands = [
            self.f.clone(),
            -(self.g.clone().powi(2) * self.f.clone()),
            HoloExpr::real(2.0) * self.g.clone() * self.f.clone(),
        ];
        WeierstrassData {
            closed: None,
            potentials: Potentials {
                kind: PotentialKind::Quadrature { integrands },
                domain: self.domain.clone(),
                tol: self.potentials.tol,
            },
            ..self.clone()
        }
    }

    /// Quadrature tolerance for the path-integral potentials.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.potentials.tol = tol;
        self
    }

    pub fn f(&self) -> &HoloExpr {
        &self.f
    }

    pub fn g(&self) -> &HoloExpr {
        &self.g
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn base(&self) -> C64 {
        self.domain.base()
    }

    pub fn closed_forms(&self) -> Option<&ClosedForms> {
        self.closed.as_ref()
    }

    pub fn potentials(&self) -> &Potentials {
        &self.potentials
    }

    /// `(F(w), G(w))`.
    pub fn eval_fg(&self, w: C64) -> Result<(C64, C64), HoloError> {
        Ok((self.f.eval(w)?, self.g.eval(w)?))
    }

    /// `f_{θ,λ,c}(w) = h + cλ²e^{−2iθ}·conj(g)`.
    pub fn planar_map(&self, p: &DeformParams, w: C64) -> Result<C64, HoloError> {
        let v = self.potentials.eval(w)?;
        Ok(v.h + p.conj_coeff() * v.g.conj())
    }

    pub fn surface_point(&self, p: &DeformParams, w: C64) -> Result<SurfacePoint, HoloError> {
        let v = self.potentials.eval(w)?;
        let phase = p.phase();
        let f = v.h + p.conj_coeff() * v.g.conj();
        Ok(SurfacePoint {
            horizontal: phase / p.lambda() * f,
            height: (phase * v.t).re,
            w,
        })
    }

    /// The dual surface: same horizontal part, height `−Im(e^{iθ}T)`.
    pub fn dual_point(&self, p: &DeformParams, w: C64) -> Result<SurfacePoint, HoloError> {
        let v = self.potentials.eval(w)?;
        let phase = p.phase();
        let f = v.h + p.conj_coeff() * v.g.conj();
        Ok(SurfacePoint {
            horizontal: phase / p.lambda() * f,
            height: -(phase * v.t).im,
            w,
        })
    }

    /// Wirtinger derivatives `(f_w, f_w̄)` of the planar map.
    pub fn planar_derivatives(&self, p: &DeformParams, w: C64) -> Result<(C64, C64), HoloError> {
        let (f, g) = self.eval_fg(w)?;
        let k = p.conj_coeff();
        Ok((f, k * (-(g * g * f)).conj()))
    }

    /// Second complex dilatation `ω = −cλ²e^{2iθ}G²`.
    pub fn dilatation(&self, p: &DeformParams, w: C64) -> Result<C64, HoloError> {
        let g = self.g.eval(w)?;
        Ok(-C64::from_polar(p.c_lambda2(), 2.0 * p.theta()) * g * g)
    }

    /// `|F|²(1 − c²λ⁴|G|⁴)`.
    pub fn jacobian(&self, p: &DeformParams, w: C64) -> Result<f64, HoloError> {
        let (f, g) = self.eval_fg(w)?;
        let k = p.c_lambda2() * g.norm_sqr();
        Ok(f.norm_sqr() * (1.0 - k * k))
    }

    /// Conformal factor `(|F|/λ)²(1 + cλ²|G|²)²` of the induced metric.
    pub fn metric_coeff(&self, p: &DeformParams, w: C64) -> Result<f64, HoloError> {
        let (f, g) = self.eval_fg(w)?;
        let s = 1.0 + p.c_lambda2() * g.norm_sqr();
        let a = f.norm() / p.lambda();
        Ok(a * a * s * s)
    }

    /// `|φ₁² + φ₂² + cφ₃²|` for the coordinate differentials of
    /// `X_{θ,λ,c}`, divided by `max(1, |φ₁|² + |φ₂|² + |c||φ₃|²)` so that
    /// the value measures rounding rather than the size of `F`.
    pub fn conformality_residual(&self, p: &DeformParams, w: C64) -> Result<f64, HoloError> {
        let (f, g) = self.eval_fg(w)?;
        let ft = p.phase() * f / p.lambda();
        let gt = g * p.lambda();
        let c = p.c();
        let g2 = gt * gt * c;
        let one = C64::new(1.0, 0.0);
        let phi1 = ft * (one - g2) * 0.5;
        let phi2 = ft * (one + g2) * C64::new(0.0, 0.5);
        let phi3 = ft * gt;
        let r = (phi1 * phi1 + phi2 * phi2 + phi3 * phi3 * c).norm();
        let scale = phi1.norm_sqr() + phi2.norm_sqr() + c.abs() * phi3.norm_sqr();
        Ok(r / scale.max(1.0))
    }

    /// Points where the metric degenerates: sign changes of
    /// `1 + cλ²|G|²` refined by bisection, zeros of `F` refined by Newton,
    /// and grid samples whose conformal factor is below `1e-10`.
    pub fn singular_locus(&self, p: &DeformParams, resolution: usize) -> Result<Vec<C64>, HoloError> {
        const TOL: f64 = 1e-10;
        let grid = self.domain.grid(resolution);
        let spacing = self.domain.diameter() / resolution.max(2) as f64;
        let k = p.c_lambda2();
        let n = grid.points.len();
        let mut s = vec![f64::NAN; n];
        let mut fabs = vec![f64::NAN; n];
        let mut found: Vec<C64> = Vec::new();
        let push = |found: &mut Vec<C64>, z: C64| {
            if !found.iter().any(|q| (*q - z).norm() < 0.25 * spacing) {
                found.push(z);
            }
        };
        for (i, w) in grid.interior_points() {
            let (f, g) = self.eval_fg(w)?;
            s[i] = 1.0 + k * g.norm_sqr();
            fabs[i] = f.norm();
            let m = (fabs[i] / p.lambda()).powi(2) * s[i] * s[i];
            if m < TOL {
                push(&mut found, w);
            }
        }
        let edges: Vec<(usize, usize)> = grid.edges().collect();
        let level = |z: C64| -> Result<f64, HoloError> { Ok(1.0 + k * self.g.eval(z)?.norm_sqr()) };
        for &(a, b) in &edges {
            if s[a] == 0.0 || s[a].signum() == s[b].signum() {
                continue;
            }
            let (mut lo, mut hi) = (grid.points[a], grid.points[b]);
            let lo_sign = s[a].signum();
            for _ in 0..80 {
                let mid = (lo + hi) * 0.5;
                let v = level(mid)?;
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if v.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            push(&mut found, (lo + hi) * 0.5);
        }
        // zeros of F: Newton from local minima of |F| on the grid
        let mut is_min: Vec<bool> = grid.inside.clone();
        for &(a, b) in &edges {
            if fabs[a] < fabs[b] {
                is_min[b] = false;
            } else if fabs[b] < fabs[a] {
                is_min[a] = false;
            }
        }
        let fscale = fabs.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, &v| m.max(v));
        for (i, start) in grid.interior_points() {
            if !is_min[i] || fabs[i] >= 0.5 * fscale {
                continue;
            }
            let mut z = start;
            let mut converged = false;
            for _ in 0..50 {
                let fz = self.f.eval(z)?;
                if fz.norm() <= 1e-14 * fscale.max(1e-300) {
                    converged = true;
                    break;
                }
                let d = match self.df.eval(z) {
                    Ok(d) if d.norm() > 0.0 => d,
                    _ => break,
                };
                let step = fz / d;
                if step.norm() > 4.0 * spacing {
                    break;
                }
                z -= step;
                if !self.domain.contains(z) {
                    break;
                }
            }
            if converged && self.domain.contains(z) {
                push(&mut found, z);
            }
        }
        Ok(found)
    }

    /// The same data on the disk `|w| < radius` (base at the origin).
    pub fn restrict_to_disk(&self, radius: f64) -> Result<Self, DataError> {
        match self.domain.shape() {
            DomainShape::Disk { radius: outer } if self.base() == C64::new(0.0, 0.0) => {
                if !(radius > 0.0 && radius <= *outer) {
                    return Err(DataError::InvalidParams("restriction radius must lie in (0, R]"));
                }
            }
            _ => return Err(DataError::NotADisk),
        }
        let domain = DomainSpec::disk(radius)?;
        let mut out = WeierstrassData::new(self.f.clone(), self.g.clone(), domain)?
            .with_tolerance(self.potentials.tol);
        if let Some(forms) = &self.closed {
            out = out.with_closed_forms(forms.clone())?;
        }
        Ok(out)
    }

    /// Data `(F, √|c|·G)` whose surface `X(sign c)` equals `X(c)` of `self`
    /// after scaling heights by `√|c|`. Returns the data and `sign(c)`.
    pub fn normalize_to_unit_c(&self, c: f64) -> Result<(Self, f64), DataError> {
        if c == 0.0 || !c.is_finite() {
            return Err(DataError::ZeroC);
        }
        let s = c.abs().sqrt();
        let g = HoloExpr::real(s) * self.g.clone();
        let mut out = WeierstrassData::new(self.f.clone(), g, self.domain.clone())?
            .with_tolerance(self.potentials.tol);
        if let Some(forms) = &self.closed {
            out = out.with_closed_forms(ClosedForms {
                h: forms.h.clone(),
                g: HoloExpr::real(c.abs()) * forms.g.clone(),
                t: HoloExpr::real(s) * forms.t.clone(),
            })?;
        }
        Ok((out, c.signum()))
    }

    /// The planar harmonic map `f_{θ,λ,c}` as a [`HarmonicMap`].
    pub fn planar(&self, p: DeformParams) -> PlanarMap<'_> {
        PlanarMap { data: self, params: p }
    }
}

/// `f_{θ,λ,c}` bound to its data, with exact Wirtinger derivatives.
#[derive(Clone, Copy, Debug)]
pub struct PlanarMap<'a> {
    data: &'a WeierstrassData,
    params: DeformParams,
}

impl PlanarMap<'_> {
    pub fn params(&self) -> DeformParams {
        self.params
    }
}

impl HarmonicMap for PlanarMap<'_> {
    fn eval(&self, w: C64) -> Result<C64, HoloError> {
        self.data.planar_map(&self.params, w)
    }

    fn wirtinger(&self, w: C64) -> Result<(C64, C64), HoloError> {
        self.data.planar_derivatives(&self.params, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use core::f64::consts::PI;

    fn enneper(n: i32) -> WeierstrassData {
        let w = HoloExpr::var;
        let m = 2 * n + 1;
        WeierstrassData::new(HoloExpr::one(), w().powi(n), DomainSpec::unit_disk())
            .unwrap()
            .with_closed_forms(ClosedForms {
                h: w(),
                g: HoloExpr::real(-1.0 / m as f64) * w().powi(m),
                t: HoloExpr::real(2.0 / (n + 1) as f64) * w().powi(n + 1),
            })
            .unwrap()
    }

    fn p(theta: f64, lambda: f64, cc: f64) -> DeformParams {
        DeformParams::new(theta, lambda, cc).unwrap()
    }

    #[test]
    fn enneper_surface_points() {
        let d = enneper(1);
        let x = d.surface_point(&p(0.0, 1.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!((x.horizontal - c(0.5 - 0.125 / 3.0, 0.0)).norm() < 1e-15);
        assert!((x.horizontal.re - 0.4583333).abs() < 1e-7);
        assert!((x.height - 0.25).abs() < 1e-15);
        let y = d.surface_point(&p(0.0, 1.0, -1.0), c(0.5, 0.0)).unwrap();
        assert!((y.horizontal.re - 0.5416667).abs() < 1e-7);
        assert!((y.height - 0.25).abs() < 1e-15);
        let o = d.surface_point(&p(1.0, 2.0, 3.0), c(0.0, 0.0)).unwrap();
        assert_eq!(o.horizontal, c(0.0, 0.0));
        assert_eq!(o.height, 0.0);
    }

    #[test]
    fn planar_map_values() {
        let d = enneper(3);
        let v = d.planar_map(&p(0.0, 1.0, 1.0), c(0.8, 0.0)).unwrap();
        assert!((v - c(0.8 - 0.8f64.powi(7) / 7.0, 0.0)).norm() < 1e-15);
        assert!((v.re - 0.7700407).abs() < 1e-7);
        let d1 = enneper(1);
        let v = d1.planar_map(&p(PI / 2.0, 1.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!((v - c(0.5 + 0.125 / 3.0, 0.0)).norm() < 1e-15);
        let w0 = c(0.3, -0.4);
        assert_eq!(d1.planar_map(&p(0.7, 1.3, 0.0), w0).unwrap(), d1.potentials().h(w0).unwrap());
    }

    #[test]
    fn dilatation_jacobian_metric_examples() {
        let d = enneper(1);
        let om = d.dilatation(&p(0.0, 1.0, -1.0), c(0.4, 0.3)).unwrap();
        assert!((om - c(0.07, 0.24)).norm() < 1e-15);
        assert!((om.norm() - 0.25).abs() < 1e-15);
        let d3 = enneper(3);
        let om = d3.dilatation(&p(0.0, 1.0, 1.0), c(0.8, 0.0)).unwrap();
        assert!((om - c(-0.262144, 0.0)).norm() < 1e-15);
        let j = d.jacobian(&p(0.0, 2.0, 1.0), c(0.8, 0.0)).unwrap();
        assert!((j + 5.5536).abs() < 1e-12);
        let j = d.jacobian(&p(0.0, 1.0, 1.0), C64::from_polar(0.6, 1.1)).unwrap();
        assert!((j - (1.0 - 0.6f64.powi(4))).abs() < 1e-14);
        let m = d.metric_coeff(&p(0.0, 1.0, 1.0), c(0.5, 0.0)).unwrap();
        assert!((m - 1.5625).abs() < 1e-15);
        assert_eq!(d.dilatation(&p(0.3, 1.0, 0.0), c(0.2, 0.1)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn parameter_operations() {
        let q = p(0.7, 1.5, -0.3);
        let qq = q.conjugate().conjugate();
        assert!((qq.theta() - (0.7 + PI)).abs() < 1e-15);
        assert_eq!(q.lopez_ros(1.0).unwrap(), q);
        assert!(q.bonnet(TAU).approx_eq(&q, 1e-15));
        assert!(q.lopez_ros(0.0).is_err());
        assert!(q.lopez_ros(-2.0).is_err());
        assert_eq!(q.c_shift(2.0).c(), 2.0);
        assert!(DeformParams::new(0.0, 0.0, 1.0).is_err());
        assert!((p(-0.5, 1.0, 0.0).theta() - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn dual_matches_rotated_conjugate() {
        let d = enneper(1);
        let q = p(0.0, 1.0, 1.0);
        let w = c(0.5, 0.0);
        let dual = d.dual_point(&q, w).unwrap();
        let other = d.surface_point(&q.conjugate().c_shift(-q.c()), w).unwrap();
        assert!(dual.height.abs() < 1e-15);
        assert!((dual.height - other.height).abs() < 1e-15);
        assert!((dual.horizontal - other.horizontal * C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_locus_examples() {
        let d = enneper(1);
        assert!(d.singular_locus(&p(0.0, 1.0, 1.0), 64).unwrap().is_empty());
        let circle = d.singular_locus(&p(0.0, 2.0, -1.0), 64).unwrap();
        assert!(circle.len() >= 32);
        for z in &circle {
            assert!((z.norm() - 0.5).abs() < 1e-10);
        }
        // F = w - 0.3i has a zero inside the disk
        let f = HoloExpr::var() - HoloExpr::constant(c(0.0, 0.3));
        let d = WeierstrassData::new(f, HoloExpr::var(), DomainSpec::unit_disk()).unwrap();
        let z = d.singular_locus(&p(0.0, 1.0, 1.0), 64).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - c(0.0, 0.3)).norm() < 1e-12);
    }

    #[test]
    fn normalization_scales_g() {
        let d = enneper(1);
        let (n, s) = d.normalize_to_unit_c(4.0).unwrap();
        assert_eq!(s, 1.0);
        let w = c(0.2, -0.35);
        assert!((n.g().eval(w).unwrap() - w * 2.0).norm() < 1e-15);
        let (n, s) = d.normalize_to_unit_c(-9.0).unwrap();
        assert_eq!(s, -1.0);
        assert!((n.g().eval(w).unwrap() - w * 3.0).norm() < 1e-15);
        assert_eq!(d.normalize_to_unit_c(0.0).unwrap_err(), DataError::ZeroC);
    }

    #[test]
    fn quadrature_path_matches_closed_form() {
        let d = enneper(3);
        let q = d.without_closed_forms().with_tolerance(1e-12);
        assert!(!q.potentials().is_symbolic());
        let w = c(-0.4, 0.55);
        let a = d.potentials().eval(w).unwrap();
        let b = q.potentials().eval(w).unwrap();
        assert!((a.h - b.h).norm() < 1e-11);
        assert!((a.g - b.g).norm() < 1e-11);
        assert!((a.t - b.t).norm() < 1e-11);
    }

    #[test]
    fn wrong_closed_form_is_rejected() {
        let r = WeierstrassData::new(HoloExpr::one(), HoloExpr::var(), DomainSpec::unit_disk())
            .unwrap()
            .with_closed_forms(ClosedForms {
                h: HoloExpr::var(),
                g: HoloExpr::var(),
                t: HoloExpr::var().powi(2),
            });
        assert!(matches!(r, Err(DataError::ClosedFormMismatch { which: "g", .. })));
    }

    #[test]
    fn zero_f_is_rejected() {
        let r = WeierstrassData::new(HoloExpr::zero(), HoloExpr::var(), DomainSpec::unit_disk());
        assert_eq!(r.unwrap_err(), DataError::FIdenticallyZero);
    }
}
