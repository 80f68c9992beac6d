//! Closed-form holomorphic functions on simply connected domains.

mod domain;
mod expr;
pub mod quadrature;

use core::fmt;

pub use domain::{DomainShape, DomainSpec, Grid, HALF_PLANE_GAP, HALF_PLANE_HEIGHT, HALF_PLANE_WIDTH};
pub(crate) use domain::OrdF64;
pub use expr::{richardson_derivative, HoloExpr};
pub use quadrature::DEFAULT_TOL;

use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub enum HoloError {
    /// Evaluation hit a pole, a log branch point or produced a non-finite value.
    PoleOrBranchCut { at: C64 },
    /// A principal-log branch cut separates consecutive domain samples.
    BranchCutCrossesDomain { near: C64 },
    QuadratureNoConvergence { error_estimate: f64, subintervals: usize },
    PathExitsDomain { at: C64 },
    InvalidDomain(&'static str),
}

impl fmt::Display for HoloError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloError::PoleOrBranchCut { at } => {
                write!(f, "pole or branch point at {} {:+}i", at.re, at.im)
            }
            HoloError::BranchCutCrossesDomain { near } => {
                write!(f, "log branch cut crosses the domain near {} {:+}i", near.re, near.im)
            }
            HoloError::QuadratureNoConvergence {
                error_estimate,
                subintervals,
            } => write!(
                f,
                "quadrature did not converge (error estimate {error_estimate:e} with {subintervals} subintervals)"
            ),
            HoloError::PathExitsDomain { at } => {
                write!(f, "no interior path reaches {} {:+}i", at.re, at.im)
            }
            HoloError::InvalidDomain(why) => write!(f, "invalid domain: {why}"),
        }
    }
}

impl core::error::Error for HoloError {}

/// `∫_base^w e(ζ) dζ` along an interior polyline of `domain`, by adaptive
/// Gauss–Kronrod quadrature to absolute tolerance `tol`.
pub fn path_antiderivative(
    e: &HoloExpr,
    domain: &DomainSpec,
    base: C64,
    w: C64,
    tol: f64,
) -> Result<C64, HoloError> {
    let path = domain.route(base, w)?;
    antiderivative_along(e, &path, tol)
}

/// Integrate `e` along an explicit polyline (no domain check).
pub fn antiderivative_along(e: &HoloExpr, path: &[C64], tol: f64) -> Result<C64, HoloError> {
    let v = quadrature::integrate_polyline(&|z| Ok([e.eval(z)?]), path, tol)?;
    Ok(v[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use alloc::vec;

    fn w() -> HoloExpr {
        HoloExpr::var()
    }

    #[test]
    fn antiderivative_of_one() {
        let d = DomainSpec::unit_disk();
        let v = path_antiderivative(&HoloExpr::one(), &d, c(0.0, 0.0), c(0.5, 0.0), 1e-12).unwrap();
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn scherk_h_at_real_point() {
        let f = HoloExpr::real(4.0) / (HoloExpr::one() - w().powi(4));
        let d = DomainSpec::unit_disk();
        let v = path_antiderivative(&f, &d, c(0.0, 0.0), c(0.3, 0.0), 1e-12).unwrap();
        // log((1+w)/(1-w)) + i log((1-iw)/(1+iw)) at w = 0.3
        let z = c(0.3, 0.0);
        let one = c(1.0, 0.0);
        let expect = ((one + z) / (one - z)).ln() + crate::I * ((one - crate::I * z) / (one + crate::I * z)).ln();
        assert!((v - expect).norm() < 1e-11);
        // log(1.3/0.7) + 2·atan(0.3)
        assert!((v.re - 1.2019528).abs() < 1e-7);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn scherk_height_potential_on_imaginary_axis() {
        let f = HoloExpr::real(8.0) * w() / (HoloExpr::one() - w().powi(4));
        let d = DomainSpec::unit_disk();
        let v = path_antiderivative(&f, &d, c(0.0, 0.0), c(0.0, 0.5), 1e-12).unwrap();
        let expect = 2.0 * (0.75f64 / 1.25).ln();
        assert!((v - c(expect, 0.0)).norm() < 1e-11);
        assert!((expect + 1.0216512).abs() < 1e-7);
    }

    #[test]
    fn path_independence_in_l_shaped_polygon() {
        let l = DomainSpec::polygon(
            vec![
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.5),
                c(0.5, 0.5),
                c(0.5, 1.0),
                c(0.0, 1.0),
            ],
            c(0.9, 0.25),
        )
        .unwrap();
        let e = (w() * HoloExpr::real(1.5)).exp() + w().powi(2);
        let target = c(0.25, 0.9);
        let tol = 1e-11;
        let routed = path_antiderivative(&e, &l, l.base(), target, tol).unwrap();
        let other = antiderivative_along(
            &e,
            &[l.base(), c(0.9, 0.1), c(0.1, 0.1), c(0.1, 0.9), target],
            tol,
        )
        .unwrap();
        assert!((routed - other).norm() <= 2.0 * tol);
        let exact = |z: C64| (z * 1.5).exp() / 1.5 + z * z * z / 3.0;
        assert!((routed - (exact(target) - exact(l.base()))).norm() < 1e-10);
    }

    #[test]
    fn outside_point_is_rejected() {
        let d = DomainSpec::unit_disk();
        let r = path_antiderivative(&HoloExpr::one(), &d, c(0.0, 0.0), c(2.0, 0.0), 1e-10);
        assert!(matches!(r, Err(HoloError::PathExitsDomain { .. })));
    }
}
