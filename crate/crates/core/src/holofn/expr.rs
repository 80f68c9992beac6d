use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::HoloError;
use crate::C64;

/// Closed-form holomorphic function of one complex variable `w`.
///
/// Trees are built through the smart constructors and the arithmetic
/// operators, which fold constants and flatten nested sums/products so that
/// symbolic derivatives stay small.
#[derive(Clone, Debug, PartialEq)]
pub enum HoloExpr {
    Var,
    Const(C64),
    Sum(Vec<HoloExpr>),
    Product(Vec<HoloExpr>),
    Pow(Box<HoloExpr>, i32),
    Recip(Box<HoloExpr>),
    Exp(Box<HoloExpr>),
    /// Principal branch.
    Log(Box<HoloExpr>),
    /// `inner(scale·w + shift)`.
    Affine {
        inner: Box<HoloExpr>,
        scale: C64,
        shift: C64,
    },
}

impl HoloExpr {
    pub fn var() -> Self {
        HoloExpr::Var
    }

    pub fn constant(value: C64) -> Self {
        HoloExpr::Const(value)
    }

    pub fn real(value: f64) -> Self {
        HoloExpr::Const(C64::new(value, 0.0))
    }

    pub fn zero() -> Self {
        HoloExpr::real(0.0)
    }

    pub fn one() -> Self {
        HoloExpr::real(1.0)
    }

    pub fn as_const(&self) -> Option<C64> {
        match self {
            HoloExpr::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HoloExpr::Const(v) if v.is_zero())
    }

    pub fn sum(terms: Vec<HoloExpr>) -> Self {
        let mut flat = Vec::with_capacity(terms.len());
        let mut constant = C64::zero();
        for t in terms {
            match t {
                HoloExpr::Sum(inner) => {
                    for u in inner {
                        match u {
                            HoloExpr::Const(v) => constant += v,
                            other => flat.push(other),
                        }
                    }
                }
                HoloExpr::Const(v) => constant += v,
                other => flat.push(other),
            }
        }
        if !constant.is_zero() {
            flat.push(HoloExpr::Const(constant));
        }
        match flat.len() {
            0 => HoloExpr::zero(),
            1 => flat.pop().unwrap(),
            _ => HoloExpr::Sum(flat),
        }
    }

    pub fn product(factors: Vec<HoloExpr>) -> Self {
        let mut flat = Vec::with_capacity(factors.len());
        let mut constant = C64::one();
        for f in factors {
            match f {
                HoloExpr::Product(inner) => {
                    for u in inner {
                        match u {
                            HoloExpr::Const(v) => constant *= v,
                            other => flat.push(other),
                        }
                    }
                }
                HoloExpr::Const(v) => constant *= v,
                other => flat.push(other),
            }
        }
        if constant.is_zero() {
            return HoloExpr::zero();
        }
        if !constant.is_one() {
            flat.insert(0, HoloExpr::Const(constant));
        }
        match flat.len() {
            0 => HoloExpr::one(),
            1 => flat.pop().unwrap(),
            _ => HoloExpr::Product(flat),
        }
    }

    pub fn powi(self, n: i32) -> Self {
        match (self, n) {
            (_, 0) => HoloExpr::one(),
            (e, 1) => e,
            (HoloExpr::Const(v), n) => HoloExpr::Const(v.powi(n)),
            (HoloExpr::Pow(inner, m), n) => HoloExpr::Pow(inner, m * n),
            (e, -1) => HoloExpr::Recip(Box::new(e)),
            (e, n) => HoloExpr::Pow(Box::new(e), n),
        }
    }

    pub fn recip(self) -> Self {
        match self {
            HoloExpr::Const(v) => HoloExpr::Const(v.inv()),
            HoloExpr::Recip(inner) => *inner,
            HoloExpr::Pow(inner, n) => inner.powi(-n),
            e => HoloExpr::Recip(Box::new(e)),
        }
    }

    pub fn exp(self) -> Self {
        match self {
            HoloExpr::Const(v) => HoloExpr::Const(v.exp()),
            e => HoloExpr::Exp(Box::new(e)),
        }
    }

    pub fn ln(self) -> Self {
        match self {
            HoloExpr::Const(v) if !v.is_zero() => HoloExpr::Const(v.ln()),
            e => HoloExpr::Log(Box::new(e)),
        }
    }

    /// `self(scale·w + shift)`.
    pub fn compose_affine(self, scale: C64, shift: C64) -> Self {
        match self {
            HoloExpr::Const(v) => HoloExpr::Const(v),
            HoloExpr::Var => HoloExpr::sum(vec![
                HoloExpr::product(vec![HoloExpr::Const(scale), HoloExpr::Var]),
                HoloExpr::Const(shift),
            ]),
            HoloExpr::Affine {
                inner,
                scale: s2,
                shift: t2,
            } => HoloExpr::Affine {
                inner,
                scale: s2 * scale,
                shift: s2 * shift + t2,
            },
            e if scale.is_one() && shift.is_zero() => e,
            e => HoloExpr::Affine {
                inner: Box::new(e),
                scale,
                shift,
            },
        }
    }

    /// Evaluate at `w`. Poles, log branch points and non-finite
    /// intermediate values are reported as [`HoloError::PoleOrBranchCut`].
    pub fn eval(&self, w: C64) -> Result<C64, HoloError> {
        let v = match self {
            HoloExpr::Var => w,
            HoloExpr::Const(v) => *v,
            HoloExpr::Sum(terms) => {
                let mut acc = C64::zero();
                for t in terms {
                    acc += t.eval(w)?;
                }
                acc
            }
            HoloExpr::Product(factors) => {
                let mut acc = C64::one();
                for f in factors {
                    acc *= f.eval(w)?;
                }
                acc
            }
            HoloExpr::Pow(inner, n) => {
                let x = inner.eval(w)?;
                if *n < 0 && x.is_zero() {
                    return Err(HoloError::PoleOrBranchCut { at: w });
                }
                x.powi(*n)
            }
            HoloExpr::Recip(inner) => {
                let x = inner.eval(w)?;
                if x.is_zero() {
                    return Err(HoloError::PoleOrBranchCut { at: w });
                }
                x.inv()
            }
            HoloExpr::Exp(inner) => inner.eval(w)?.exp(),
            HoloExpr::Log(inner) => {
                let x = inner.eval(w)?;
                if x.is_zero() {
                    return Err(HoloError::PoleOrBranchCut { at: w });
                }
                x.ln()
            }
            HoloExpr::Affine {
                inner,
                scale,
                shift,
            } => inner.eval(scale * w + shift)?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(HoloError::PoleOrBranchCut { at: w })
        }
    }

    /// Exact symbolic derivative with respect to `w`.
    pub fn derivative(&self) -> HoloExpr {
        match self {
            HoloExpr::Var => HoloExpr::one(),
            HoloExpr::Const(_) => HoloExpr::zero(),
            HoloExpr::Sum(terms) => HoloExpr::sum(terms.iter().map(|t| t.derivative()).collect()),
            HoloExpr::Product(factors) => {
                let mut terms = Vec::with_capacity(factors.len());
                for (i, fi) in factors.iter().enumerate() {
                    let d = fi.derivative();
                    if d.is_zero() {
                        continue;
                    }
                    let mut parts = Vec::with_capacity(factors.len());
                    parts.push(d);
                    for (j, fj) in factors.iter().enumerate() {
                        if j != i {
                            parts.push(fj.clone());
                        }
                    }
                    terms.push(HoloExpr::product(parts));
                }
                HoloExpr::sum(terms)
            }
            HoloExpr::Pow(inner, n) => HoloExpr::product(vec![
                HoloExpr::real(*n as f64),
                (**inner).clone().powi(n - 1),
                inner.derivative(),
            ]),
            HoloExpr::Recip(inner) => HoloExpr::product(vec![
                HoloExpr::real(-1.0),
                inner.derivative(),
                (**inner).clone().powi(-2),
            ]),
            HoloExpr::Exp(inner) => HoloExpr::product(vec![self.clone(), inner.derivative()]),
            HoloExpr::Log(inner) => {
                HoloExpr::product(vec![inner.derivative(), (**inner).clone().recip()])
            }
            HoloExpr::Affine {
                inner,
                scale,
                shift,
            } => {
                let d = inner.derivative();
                HoloExpr::product(vec![HoloExpr::Const(*scale), d.compose_affine(*scale, *shift)])
            }
        }
    }

    /// True when the expression does not depend on `w`.
    pub fn is_constant(&self) -> bool {
        match self {
            HoloExpr::Var => false,
            HoloExpr::Const(_) => true,
            HoloExpr::Sum(v) | HoloExpr::Product(v) => v.iter().all(|e| e.is_constant()),
            HoloExpr::Pow(e, _) | HoloExpr::Recip(e) | HoloExpr::Exp(e) | HoloExpr::Log(e) => {
                e.is_constant()
            }
            HoloExpr::Affine { inner, scale, .. } => scale.is_zero() || inner.is_constant(),
        }
    }

    /// Check that the expression is analytic along the closed polyline
    /// `ring` and at the scattered points `interior`: no poles, no log branch
    /// points, and no log argument crossing the negative real axis between
    /// consecutive ring samples.
    pub fn check_analytic_on(&self, ring: &[C64], interior: &[C64]) -> Result<(), HoloError> {
        for &w in ring.iter().chain(interior) {
            self.eval(w)?;
        }
        self.check_cuts(ring, &|w| w)
    }

    fn check_cuts(&self, ring: &[C64], map: &dyn Fn(C64) -> C64) -> Result<(), HoloError> {
        match self {
            HoloExpr::Var | HoloExpr::Const(_) => Ok(()),
            HoloExpr::Sum(v) | HoloExpr::Product(v) => {
                v.iter().try_for_each(|e| e.check_cuts(ring, map))
            }
            HoloExpr::Pow(e, _) | HoloExpr::Recip(e) | HoloExpr::Exp(e) => e.check_cuts(ring, map),
            HoloExpr::Log(e) => {
                e.check_cuts(ring, map)?;
                let n = ring.len();
                for k in 0..n {
                    let a = ring[k];
                    let b = ring[(k + 1) % n];
                    let za = e.eval(map(a))?;
                    let zb = e.eval(map(b))?;
                    let straddles = za.im.signum() != zb.im.signum()
                        && za.re < 0.0
                        && zb.re < 0.0
                        && (za.im != 0.0 || zb.im != 0.0);
                    if straddles {
                        return Err(HoloError::BranchCutCrossesDomain { near: a });
                    }
                }
                Ok(())
            }
            HoloExpr::Affine {
                inner,
                scale,
                shift,
            } => {
                let (s, t) = (*scale, *shift);
                inner.check_cuts(ring, &move |w| s * map(w) + t)
            }
        }
    }

    /// Node count, used to keep an eye on derivative growth.
    pub fn size(&self) -> usize {
        match self {
            HoloExpr::Var | HoloExpr::Const(_) => 1,
            HoloExpr::Sum(v) | HoloExpr::Product(v) => 1 + v.iter().map(|e| e.size()).sum::<usize>(),
            HoloExpr::Pow(e, _) | HoloExpr::Recip(e) | HoloExpr::Exp(e) | HoloExpr::Log(e) => {
                1 + e.size()
            }
            HoloExpr::Affine { inner, .. } => 1 + inner.size(),
        }
    }
}

impl From<C64> for HoloExpr {
    fn from(v: C64) -> Self {
        HoloExpr::Const(v)
    }
}

impl From<f64> for HoloExpr {
    fn from(v: f64) -> Self {
        HoloExpr::real(v)
    }
}

impl Add for HoloExpr {
    type Output = HoloExpr;
    fn add(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::sum(vec![self, rhs])
    }
}

impl Sub for HoloExpr {
    type Output = HoloExpr;
    fn sub(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::sum(vec![self, -rhs])
    }
}

impl Mul for HoloExpr {
    type Output = HoloExpr;
    fn mul(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::product(vec![self, rhs])
    }
}

impl Div for HoloExpr {
    type Output = HoloExpr;
    fn div(self, rhs: HoloExpr) -> HoloExpr {
        HoloExpr::product(vec![self, rhs.recip()])
    }
}

impl Neg for HoloExpr {
    type Output = HoloExpr;
    fn neg(self) -> HoloExpr {
        HoloExpr::product(vec![HoloExpr::real(-1.0), self])
    }
}

fn fmt_const(v: &C64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.im == 0.0 {
        write!(f, "{}", v.re)
    } else if v.re == 0.0 {
        write!(f, "{}*i", v.im)
    } else {
        write!(f, "({}{:+}*i)", v.re, v.im)
    }
}

impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloExpr::Var => f.write_str("w"),
            HoloExpr::Const(v) => fmt_const(v, f),
            HoloExpr::Sum(terms) => {
                f.write_str("(")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            HoloExpr::Product(factors) => {
                for (k, t) in factors.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            HoloExpr::Pow(e, n) => write!(f, "({e})^({n})"),
            HoloExpr::Recip(e) => write!(f, "1/({e})"),
            HoloExpr::Exp(e) => write!(f, "exp({e})"),
            HoloExpr::Log(e) => write!(f, "log({e})"),
            HoloExpr::Affine {
                inner,
                scale,
                shift,
            } => {
                write!(f, "[{inner}](w -> ")?;
                fmt_const(scale, f)?;
                f.write_str("*w + ")?;
                fmt_const(shift, f)?;
                f.write_str(")")
            }
        }
    }
}

/// Central-difference derivative with one Richardson extrapolation level.
pub fn richardson_derivative(
    e: &HoloExpr,
    w: C64,
    step: f64,
) -> Result<C64, HoloError> {
    let d = |h: f64| -> Result<C64, HoloError> {
        let hc = C64::new(h, 0.0);
        Ok((e.eval(w + hc)? - e.eval(w - hc)?) / (2.0 * h))
    };
    let d1 = d(step)?;
    let d2 = d(step * 0.5)?;
    Ok((d2 * 4.0 - d1) / 3.0)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn w() -> HoloExpr {
        HoloExpr::var()
    }

    #[test]
    fn identity_eval() {
        assert_eq!(w().eval(c(0.3, 0.4)).unwrap(), c(0.3, 0.4));
    }

    #[test]
    fn scherk_f_at_origin() {
        let f = HoloExpr::real(4.0) / (HoloExpr::one() - w().powi(4));
        assert!((f.eval(c(0.0, 0.0)).unwrap() - c(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exp_two_w() {
        let e = (HoloExpr::real(2.0) * w()).exp();
        let v = e.eval(c(-1.0, 0.0)).unwrap();
        // truncated series for e^{-2}
        let mut series = 0.0;
        let mut term = 1.0;
        for k in 0..40 {
            series += term;
            term *= -2.0 / (k as f64 + 1.0);
        }
        assert!((v.re - series).abs() < 1e-14);
        assert!((v.re - 0.1353353).abs() < 1e-7);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn derivative_of_var_is_one() {
        assert_eq!(w().derivative(), HoloExpr::one());
    }

    #[test]
    fn derivative_of_exp_affine() {
        let e = HoloExpr::Exp(Box::new(HoloExpr::Var)).compose_affine(c(2.0, 0.0), c(0.0, 0.0));
        let d = e.derivative();
        for z in [c(0.1, 0.2), c(-0.5, 0.3)] {
            let expect = (z * 2.0).exp() * 2.0;
            assert!((d.eval(z).unwrap() - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_log_ratio() {
        let e = (HoloExpr::one() + w()).ln() - (HoloExpr::one() - w()).ln();
        let d = e.derivative();
        for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.0, 0.9)] {
            let expect = c(2.0, 0.0) / (c(1.0, 0.0) - z * z);
            assert!((d.eval(z).unwrap() - expect).norm() < 1e-13);
            let fd = richardson_derivative(&e, z, 1e-4).unwrap();
            assert!((fd - expect).norm() / expect.norm() < 1e-6);
        }
    }

    #[test]
    fn pole_is_reported() {
        let e = (HoloExpr::one() - w()).recip();
        assert!(matches!(e.eval(c(1.0, 0.0)), Err(HoloError::PoleOrBranchCut { .. })));
        let l = w().ln();
        assert!(matches!(l.eval(c(0.0, 0.0)), Err(HoloError::PoleOrBranchCut { .. })));
    }

    #[test]
    fn branch_cut_crossing_detected() {
        // log(w) on a ring around the origin crosses the negative axis
        let ring: Vec<C64> = (0..64)
            .map(|k| C64::from_polar(0.5, k as f64 * core::f64::consts::TAU / 64.0))
            .collect();
        let e = w().ln();
        assert!(matches!(
            e.check_analytic_on(&ring, &[]),
            Err(HoloError::BranchCutCrossesDomain { .. })
        ));
        let ok = (HoloExpr::one() + w()).ln();
        assert!(ok.check_analytic_on(&ring, &[]).is_ok());
    }

    #[test]
    fn constant_folding() {
        let e = HoloExpr::real(2.0) * HoloExpr::real(3.0) + HoloExpr::real(1.0);
        assert_eq!(e.as_const(), Some(c(7.0, 0.0)));
        assert!((w() * HoloExpr::zero()).is_zero());
    }
}
