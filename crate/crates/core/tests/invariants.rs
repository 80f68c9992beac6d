//! Property tests for the identities the surface family must satisfy.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use proptest::prelude::*;
use zmc_core::catalog::ExampleSpec;
use zmc_core::krust::{classify_regions, region_restricted, RegionSettings, TheoremId};
use zmc_core::univalence::{boundary_image, classify_image, univalence_oracle, FnMap, JacobianSign};
use zmc_core::{DeformParams, DomainShape, HarmonicMap, ImageClass, RegionClassification, Verdict, WeierstrassData, C64};

struct Case {
    name: &'static str,
    data: WeierstrassData,
    /// Tolerance for identities evaluated through the potentials.
    tol: f64,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        let [e, x, s] = ExampleSpec::defaults().unwrap();
        let quad_e = e.data.without_closed_forms();
        let quad_s = s.data.without_closed_forms();
        vec![
            Case { name: "enneper", data: e.data, tol: 1e-12 },
            Case { name: "exponential", data: x.data, tol: 1e-12 },
            Case { name: "scherk", data: s.data, tol: 1e-12 },
            Case { name: "enneper/quadrature", data: quad_e, tol: 1e-8 },
            Case { name: "scherk/quadrature", data: quad_s, tol: 1e-8 },
        ]
    })
}

/// A point of the domain, kept `margin` (relative) away from its edge.
fn point_in(data: &WeierstrassData, u: f64, v: f64, margin: f64) -> C64 {
    match data.domain().shape() {
        DomainShape::Disk { radius } => C64::from_polar(radius * (1.0 - margin) * u.sqrt(), TAU * v),
        DomainShape::HalfPlane { width, height, delta } => {
            let lo = -width * (1.0 - margin);
            let hi = -delta - margin * width;
            C64::new(lo + (hi - lo) * u, height * (1.0 - margin) * (2.0 * v - 1.0))
        }
        DomainShape::Polygon { .. } => data.base(),
    }
}

fn params() -> impl Strategy<Value = DeformParams> {
    (0.0..TAU, 0.25f64..3.0, -3.0f64..3.0).prop_map(|(t, l, c)| DeformParams::new(t, l, c).unwrap())
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn midpoint_identity(k in 0usize..5, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        let d = &case.data;
        let x0 = d.surface_point(&p.c_shift(0.0), w).unwrap();
        let xp = d.surface_point(&p, w).unwrap();
        let xm = d.surface_point(&p.c_shift(-p.c()), w).unwrap();
        let mid = (xp.horizontal + xm.horizontal) * 0.5;
        prop_assert!(rel(mid, x0.horizontal) <= case.tol, "{} at {w}", case.name);
        prop_assert!((0.5 * (xp.height + xm.height) - x0.height).abs() <= case.tol * x0.height.abs().max(1.0));
    }

    #[test]
    fn height_depends_on_theta_only(k in 0usize..5, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params(), q in params()) {
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        let same_theta = DeformParams::new(p.theta(), q.lambda(), q.c()).unwrap();
        let a = case.data.surface_point(&p, w).unwrap().height;
        let b = case.data.surface_point(&same_theta, w).unwrap().height;
        prop_assert_eq!(a, b, "{}", case.name);
    }

    #[test]
    fn metric_is_theta_invariant(k in 0usize..5, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params(), t in 0.0..TAU) {
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        let a = case.data.metric_coeff(&p, w).unwrap();
        let b = case.data.metric_coeff(&p.bonnet(t), w).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dual_is_rotated_conjugate_in_opposite_space(k in 0usize..5, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        let dual = case.data.dual_point(&p, w).unwrap();
        let star = case.data.surface_point(&p.conjugate().c_shift(-p.c()), w).unwrap();
        let j = C64::new(0.0, -1.0);
        prop_assert!(rel(j * star.horizontal, dual.horizontal) <= 1e-8);
        prop_assert!((star.height - dual.height).abs() <= 1e-8 * dual.height.abs().max(1.0));
    }

    #[test]
    fn coordinates_are_conformal(k in 0usize..5, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        prop_assert!(case.data.conformality_residual(&p, w).unwrap() <= 1e-12);
    }

    #[test]
    fn unit_c_normalization_agrees(k in 0usize..3, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        prop_assume!(p.c().abs() > 1e-3);
        let case = &cases()[k];
        let w = point_in(&case.data, u, v, 0.01);
        let (norm, sign) = case.data.normalize_to_unit_c(p.c()).unwrap();
        let x = case.data.surface_point(&p, w).unwrap();
        let y = norm.surface_point(&p.c_shift(sign), w).unwrap();
        prop_assert!(rel(y.horizontal, x.horizontal) <= 1e-8);
        let s = p.c().abs().sqrt();
        prop_assert!((y.height - s * x.height).abs() <= 1e-8 * (s * x.height).abs().max(1.0));
    }

    #[test]
    fn quadrature_matches_closed_forms(k in 0usize..2, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        let (sym, quad) = match k {
            0 => (&cases()[0], &cases()[3]),
            _ => (&cases()[2], &cases()[4]),
        };
        let w = point_in(&sym.data, u, v, 0.01);
        let a = sym.data.surface_point(&p, w).unwrap();
        let b = quad.data.surface_point(&p, w).unwrap();
        prop_assert!(rel(b.horizontal, a.horizontal) <= 1e-8);
        prop_assert!((a.height - b.height).abs() <= 1e-8 * a.height.abs().max(1.0));
    }

    #[test]
    fn dilatation_and_jacobian_match_finite_differences(k in 0usize..3, u in 0.0..1.0f64, v in 0.0..1.0f64, p in params()) {
        let d = &cases()[k].data;
        let w = point_in(d, u, v, 0.02);
        let f = |z: C64| d.planar_map(&p, z).unwrap();
        let partial = |dir: C64| {
            let c = |h: f64| (f(w + dir * h) - f(w - dir * h)) / (2.0 * h);
            (c(0.5e-4) * 4.0 - c(1e-4)) / 3.0
        };
        let fx = partial(C64::new(1.0, 0.0));
        let fy = partial(C64::new(0.0, 1.0));
        let i = C64::new(0.0, 1.0);
        let fw = (fx - i * fy) * 0.5;
        let fwb = (fx + i * fy) * 0.5;
        let omega = d.dilatation(&p, w).unwrap();
        prop_assert!((fwb.conj() / fw - omega).norm() <= 1e-6 * omega.norm().max(1.0));
        let jac = d.jacobian(&p, w).unwrap();
        let scale = fw.norm_sqr() + fwb.norm_sqr();
        prop_assert!((fw.norm_sqr() - fwb.norm_sqr() - jac).abs() <= 1e-6 * scale.max(1.0));
    }

    #[test]
    fn convex_polygons_classify_convex(
        mut angles in prop::collection::vec(0.0..TAU, 3..48),
        stretch in 0.2f64..5.0,
        shear in -2.0f64..2.0,
        shift in (-10.0f64..10.0, -10.0f64..10.0),
    ) {
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| *a - *b < 1e-2);
        prop_assume!(angles.len() >= 3 && TAU - (angles[angles.len() - 1] - angles[0]) > 1e-2);
        let poly: Vec<C64> = angles
            .iter()
            .map(|&t| {
                let (s, c) = t.sin_cos();
                C64::new(stretch * c + shear * s + shift.0, s + shift.1)
            })
            .collect();
        // Points on one ellipse, no three collinear: a convex polygon.
        let area: f64 = (0..poly.len()).map(|k| zmc_core::geometry::cross(poly[k], poly[(k + 1) % poly.len()])).sum();
        prop_assume!(area.abs() > 1e-3);
        prop_assert_eq!(classify_image(&poly).unwrap().class, ImageClass::Convex);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_verdict_is_affine_invariant(
        rho in prop_oneof![0.0f64..0.85, 1.2f64..3.0],
        theta in 0.0..TAU,
        a in (0.1f64..5.0, 0.0..TAU),
        b in (-5.0f64..5.0, -5.0f64..5.0),
    ) {
        let e = ExampleSpec::enneper(1).unwrap();
        let p = DeformParams::new(theta, 1.0, rho).unwrap();
        let map = e.data.planar(p);
        let a = C64::from_polar(a.0, a.1);
        let b = C64::new(b.0, b.1);
        let moved = FnMap(|w: C64| a * map.eval(w).unwrap() + b);
        let r1 = univalence_oracle(&map, e.data.domain(), 64).unwrap();
        let r2 = univalence_oracle(&moved, e.data.domain(), 64).unwrap();
        prop_assert_eq!(r1.verdict, r2.verdict);
        prop_assert_eq!(r1.verdict, if rho <= 1.0 { Verdict::Univalent } else { Verdict::NotUnivalent });
    }

    #[test]
    fn univalent_verdicts_never_have_mixed_jacobian(n in 1u32..5, rho in 0.0f64..3.0, theta in 0.0..TAU, neg in any::<bool>()) {
        let e = ExampleSpec::enneper(n).unwrap();
        let c = if neg { -rho } else { rho };
        let p = DeformParams::new(theta, 1.0, c).unwrap();
        let r = univalence_oracle(&e.data.planar(p), e.data.domain(), 64).unwrap();
        if r.verdict == Verdict::Univalent {
            prop_assert!(r.jacobian_sign != JacobianSign::Mixed);
        }
        if r.verdict == Verdict::NotUnivalent {
            prop_assert!(r.collision_witness.is_some() || r.jacobian_sign == JacobianSign::Mixed || r.boundary_crossing.is_some());
        }
    }

    #[test]
    fn hypocycloid_is_never_convex(n in 2u32..7, m in prop::sample::select(vec![601usize, 1204, 2003])) {
        let e = ExampleSpec::enneper(n).unwrap();
        let p = DeformParams::new(0.0, 1.0, 1.0).unwrap();
        let img = boundary_image(&e.data.planar(p), e.data.domain(), m).unwrap();
        prop_assert_ne!(classify_image(&img.points).unwrap().class, ImageClass::Convex);
    }

    #[test]
    fn restricted_bounds_are_ordered(n in 1u32..4, r in 0.2f64..0.95) {
        let e = ExampleSpec::enneper(n).unwrap();
        let certs = region_restricted(&e.data, r).unwrap();
        let bound = |t: TheoremId| certs.iter().find(|c| c.theorem == t).unwrap().interval.hi;
        let schwarz = bound(TheoremId::Schwarz);
        let restricted = bound(TheoremId::RestrictedDisk);
        prop_assert!((schwarz - 1.0 / (r * r)).abs() <= 1e-12 * schwarz);
        prop_assert!(schwarz <= restricted * (1.0 + 1e-12));
    }
}

fn enneper_regions() -> &'static RegionClassification {
    static R: OnceLock<RegionClassification> = OnceLock::new();
    R.get_or_init(|| classify_regions(&ExampleSpec::enneper(3).unwrap().data, &RegionSettings::default()).unwrap())
}

proptest! {
    #[test]
    fn graph_intervals_are_downward_closed(a in 0.0f64..2.0, b in 0.0f64..2.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let r = enneper_regions();
        for c in &r.certified_graph {
            if c.interval.contains(hi) {
                prop_assert!(c.interval.contains(lo));
            }
        }
        prop_assert!(r.is_consistent());
    }
}
