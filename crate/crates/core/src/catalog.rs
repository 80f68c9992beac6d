//! Built-in examples with closed-form potentials.

use alloc::string::String;
use alloc::format;

use crate::holofn::{DomainSpec, HoloError, HoloExpr, HALF_PLANE_GAP, HALF_PLANE_HEIGHT, HALF_PLANE_WIDTH};
use crate::weierstrass::{ClosedForms, DataError, WeierstrassData};
use crate::C64;

/// Default radius for the Scherk family, whose `F` has poles at the fourth
/// roots of unity.
pub const SCHERK_RADIUS: f64 = 1.0 - 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    /// `(F, G) = (1, wⁿ)` on the unit disk.
    Enneper(u32),
    /// `(F, G) = (1, e^{nw})` on a truncated left half-plane.
    Exponential(u32),
    /// `(F, G) = (4/(1 − w⁴), w)` on the unit disk.
    Scherk,
}

impl ExampleId {
    pub fn name(&self) -> String {
        match self {
            ExampleId::Enneper(n) => format!("enneper(n={n})"),
            ExampleId::Exponential(n) => format!("exponential(n={n})"),
            ExampleId::Scherk => "scherk".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub data: WeierstrassData,
    pub description: &'static str,
}

fn w() -> HoloExpr {
    HoloExpr::var()
}

fn one() -> HoloExpr {
    HoloExpr::one()
}

fn i_times(e: HoloExpr) -> HoloExpr {
    HoloExpr::constant(C64::new(0.0, 1.0)) * e
}

fn affine(scale: C64, shift: f64) -> HoloExpr {
    w().compose_affine(scale, C64::new(shift, 0.0))
}

impl ExampleSpec {
    /// Enneper-type family on the unit disk; `n ≥ 1`.
    pub fn enneper(n: u32) -> Result<Self, DataError> {
        Self::enneper_on(n, DomainSpec::unit_disk())
    }

    pub fn enneper_on(n: u32, domain: DomainSpec) -> Result<Self, DataError> {
        if n == 0 || n > 64 {
            return Err(DataError::InvalidParams("n must lie in 1..=64"));
        }
        let n = n as i32;
        let m = 2 * n + 1;
        let data = WeierstrassData::new(one(), w().powi(n), domain)?.with_closed_forms(ClosedForms {
            h: w(),
            g: HoloExpr::real(-1.0 / m as f64) * w().powi(m),
            t: HoloExpr::real(2.0 / (n + 1) as f64) * w().powi(n + 1),
        })?;
        Ok(ExampleSpec {
            id: ExampleId::Enneper(n as u32),
            data,
            description: "Enneper-type minimal graph, image bounded by a hypocycloid",
        })
    }

    /// Exponential family on `[-6, -0.001] × [-6, 6]`.
    pub fn exponential(n: u32) -> Result<Self, DataError> {
        Self::exponential_on(n, DomainSpec::half_plane(HALF_PLANE_WIDTH, HALF_PLANE_HEIGHT, HALF_PLANE_GAP)?)
    }

    /// Exponential family on `[-W, -0.001] × [-W, W]`.
    pub fn exponential_truncated(n: u32, width: f64) -> Result<Self, DataError> {
        Self::exponential_on(n, DomainSpec::half_plane(width, width, HALF_PLANE_GAP)?)
    }

    pub fn exponential_on(n: u32, domain: DomainSpec) -> Result<Self, DataError> {
        if n == 0 || n > 64 {
            return Err(DataError::InvalidParams("n must lie in 1..=64"));
        }
        let k = n as f64;
        let e = |a: f64| (HoloExpr::real(a) * w()).exp();
        let data = WeierstrassData::new(one(), e(k), domain)?.with_closed_forms(ClosedForms {
            h: w(),
            g: HoloExpr::real(-1.0 / (2.0 * k)) * e(2.0 * k),
            t: HoloExpr::real(2.0 / k) * e(k),
        })?;
        Ok(ExampleSpec {
            id: ExampleId::Exponential(n),
            data,
            description: "exponential family, graph over a close-to-convex domain for |cλ²| ≤ 1",
        })
    }

    /// Scherk family on the disk of radius [`SCHERK_RADIUS`].
    pub fn scherk() -> Result<Self, DataError> {
        Self::scherk_on(SCHERK_RADIUS)
    }

    pub fn scherk_on(radius: f64) -> Result<Self, DataError> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(DataError::Holo(HoloError::InvalidDomain(
                "the Scherk data has poles on the unit circle; radius must be < 1",
            )));
        }
        let f = HoloExpr::real(4.0) / (one() - w().powi(4));
        let g = w();
        let ln = |scale: C64| affine(scale, 1.0).ln();
        let re1 = C64::new(1.0, 0.0);
        let im1 = C64::new(0.0, 1.0);
        // log(1+w) − log(1−w) + i(log(1−iw) − log(1+iw))
        let h = ln(re1) - ln(-re1) + i_times(ln(-im1) - ln(im1));
        // log(1−w) − log(1+w) + i(log(1−iw) − log(1+iw))
        let gg = ln(-re1) - ln(re1) + i_times(ln(-im1) - ln(im1));
        // 2(log(1+w²) − log(1−w²))
        let sq = w().powi(2);
        let t = HoloExpr::real(2.0) * ((one() + sq.clone()).ln() - (one() - sq).ln());
        let data = WeierstrassData::new(f, g, DomainSpec::disk(radius)?)?
            .with_closed_forms(ClosedForms { h, g: gg, t })?;
        Ok(ExampleSpec {
            id: ExampleId::Scherk,
            data,
            description: "Scherk-type family, f_{0,1,1} maps onto a square of side 2π",
        })
    }

    /// The three default examples, `n = 3` for the Enneper family and
    /// `n = 2` for the exponential one.
    pub fn defaults() -> Result<[ExampleSpec; 3], DataError> {
        Ok([Self::enneper(3)?, Self::exponential(2)?, Self::scherk()?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::weierstrass::DeformParams;

    #[test]
    fn catalog_builds() {
        for e in ExampleSpec::defaults().unwrap() {
            assert!(e.data.potentials().is_symbolic(), "{}", e.id.name());
        }
    }

    #[test]
    fn scherk_potentials_vanish_at_origin() {
        let s = ExampleSpec::scherk().unwrap();
        let v = s.data.potentials().eval(c(0.0, 0.0)).unwrap();
        assert_eq!(v.h, c(0.0, 0.0));
        assert_eq!(v.g, c(0.0, 0.0));
        assert_eq!(v.t, c(0.0, 0.0));
    }

    #[test]
    fn exponential_normalized_at_base() {
        let e = ExampleSpec::exponential(2).unwrap();
        let base = e.data.base();
        assert_eq!(base, c(-3.0005, 0.0));
        let p = DeformParams::new(0.4, 1.0, 1.0).unwrap();
        let x = e.data.surface_point(&p, base).unwrap();
        assert_eq!(x.horizontal, c(0.0, 0.0));
        assert_eq!(x.height, 0.0);
    }

    #[test]
    fn scherk_radius_must_avoid_poles() {
        assert!(ExampleSpec::scherk_on(1.0).is_err());
    }
}
