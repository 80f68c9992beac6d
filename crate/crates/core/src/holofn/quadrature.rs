//! Adaptive Gauss–Kronrod (7/15) quadrature of holomorphic integrands along
//! straight segments and polylines.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::Zero;

use super::HoloError;
use crate::C64;

/// Default absolute tolerance for path antiderivatives.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Maximum number of live subintervals per path.
pub const MAX_SUBINTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy)]
struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [C64; N],
    error: f64,
}

impl<const N: usize> PartialEq for Piece<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Piece<N> {}
impl<const N: usize> PartialOrd for Piece<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Piece<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<const N: usize, F>(f: &F, from: C64, to: C64, a: f64, b: f64) -> Result<Piece<N>, HoloError>
where
    F: Fn(C64) -> Result<[C64; N], HoloError>,
{
    let dir = to - from;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let at = |s: f64| from + dir * s;
    let mut kron = [C64::zero(); N];
    let mut gauss = [C64::zero(); N];
    let centre = f(at(mid))?;
    for k in 0..N {
        kron[k] = centre[k] * WGK[7];
        gauss[k] = centre[k] * WG[3];
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(at(mid - dx))?;
        let hi = f(at(mid + dx))?;
        for k in 0..N {
            let s = lo[k] + hi[k];
            kron[k] += s * WGK[j];
            if j % 2 == 1 {
                gauss[k] += s * WG[j / 2];
            }
        }
    }
    let scale = dir * half;
    let mut value = [C64::zero(); N];
    let mut error: f64 = 0.0;
    for k in 0..N {
        value[k] = kron[k] * scale;
        error = error.max(((kron[k] - gauss[k]) * scale).norm());
    }
    Ok(Piece { a, b, value, error })
}

/// Integrate a vector of holomorphic integrands along the straight segment
/// `from → to`, to absolute tolerance `tol` in every component.
pub fn integrate_segment<const N: usize, F>(
    f: &F,
    from: C64,
    to: C64,
    tol: f64,
) -> Result<[C64; N], HoloError>
where
    F: Fn(C64) -> Result<[C64; N], HoloError>,
{
    if from == to {
        return Ok([C64::zero(); N]);
    }
    let first = gk15(f, from, to, 0.0, 1.0)?;
    let mut heap = BinaryHeap::new();
    let mut total_err = first.error;
    heap.push(first);
    while total_err > tol {
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(HoloError::QuadratureNoConvergence {
                error_estimate: total_err,
                subintervals: heap.len(),
            });
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(HoloError::QuadratureNoConvergence {
                error_estimate: total_err,
                subintervals: heap.len() + 1,
            });
        }
        let left = gk15(f, from, to, worst.a, mid)?;
        let right = gk15(f, from, to, mid, worst.b)?;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // guard against drift in the running sum
        if total_err <= tol {
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    let mut pieces: Vec<Piece<N>> = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut out = [C64::zero(); N];
    for p in &pieces {
        for k in 0..N {
            out[k] += p.value[k];
        }
    }
    Ok(out)
}

/// Integrate along a polyline; the tolerance is split evenly over the legs.
pub fn integrate_polyline<const N: usize, F>(
    f: &F,
    path: &[C64],
    tol: f64,
) -> Result<[C64; N], HoloError>
where
    F: Fn(C64) -> Result<[C64; N], HoloError>,
{
    let legs = path.len().saturating_sub(1).max(1);
    let mut out = [C64::zero(); N];
    for pair in path.windows(2) {
        let part = integrate_segment(f, pair[0], pair[1], tol / legs as f64)?;
        for k in 0..N {
            out[k] += part[k];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn integrates_constant() {
        let v = integrate_segment(&|_| Ok([c(1.0, 0.0)]), c(0.0, 0.0), c(0.5, 0.0), 1e-12).unwrap();
        assert!((v[0] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn integrates_exp_along_complex_segment() {
        let a = c(0.1, -0.2);
        let b = c(-0.7, 1.3);
        let v = integrate_segment(&|z: C64| Ok([z.exp()]), a, b, 1e-12).unwrap();
        assert!((v[0] - (b.exp() - a.exp())).norm() < 1e-12);
    }

    #[test]
    fn nearly_singular_integrand_converges() {
        // 1/(1-z) close to the pole at 1
        let v = integrate_segment(
            &|z: C64| Ok([(c(1.0, 0.0) - z).inv()]),
            c(0.0, 0.0),
            c(0.999, 0.0),
            1e-10,
        )
        .unwrap();
        let expect = -(1.0f64 - 0.999).ln();
        assert!((v[0].re - expect).abs() < 1e-9);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = integrate_segment(
            &|z: C64| Ok([(c(1.0, 0.0) - z).inv()]),
            c(0.0, 0.0),
            c(1.0 - 1e-300, 0.0),
            1e-300,
        );
        assert!(matches!(r, Err(HoloError::QuadratureNoConvergence { .. }) | Err(HoloError::PoleOrBranchCut { .. })));
    }
}
