//! Quadrature rules used by the distance oracle and the degree contour integral.

use num_complex::Complex;

use crate::error::{HypError, Result};
use crate::scalar::{lit, Real};

/// Converged integral estimate and the panel count that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<V> {
    pub value: V,
    pub panels: usize,
}

const MIN_SIMPSON_PANELS: usize = 16;

/// Composite Simpson on `[a, b]`, doubling the panel count until two
/// successive estimates differ by less than `tol` (absolute).
///
/// Trapezoid sums are refined in place so each doubling only evaluates the
/// new midpoints.
pub fn simpson_doubling<T, F>(f: F, a: T, b: T, tol: T, max_panels: usize) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let half = lit::<T>(0.5);
    let mut n = 1usize;
    let mut h = b - a;
    let mut trap = (f(a) + f(b)) * h * half;
    let mut simpson_prev: Option<T> = None;
    loop {
        // refine trapezoid from n to 2n panels
        let mut mid_sum = T::zero();
        for k in 0..n {
            let x = a + h * (T::from_usize(k).unwrap() + half);
            mid_sum += f(x);
        }
        let trap_next = half * trap + half * h * mid_sum;
        let simpson = (lit::<T>(4.0) * trap_next - trap) / lit::<T>(3.0);
        n *= 2;
        h *= half;
        trap = trap_next;
        if !simpson.is_finite() {
            return Err(HypError::Numerical(format!("non-finite Simpson estimate at {n} panels")));
        }
        if let Some(prev) = simpson_prev {
            if n >= MIN_SIMPSON_PANELS && (simpson - prev).abs() < tol {
                return Ok(Quadrature { value: simpson, panels: n });
            }
        }
        if n >= max_panels {
            return Err(HypError::Numerical(format!("Simpson quadrature did not converge within {max_panels} panels")));
        }
        simpson_prev = Some(simpson);
    }
}

/// Simpson doubling over a graded partition of `[a, b]`.
///
/// The interval is bisected until the (positive) integrand varies by at most
/// a factor of two across each piece, then every piece is integrated with
/// [`simpson_doubling`], splitting the tolerance evenly. Densities
/// that blow up near one end of the path stay cheap this way.
pub fn simpson_graded<T, F>(f: F, a: T, b: T, tol: T, max_panels: usize) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    const MAX_DEPTH: u32 = 48;
    let total = (b - a).abs();
    if total == T::zero() {
        return Ok(Quadrature { value: T::zero(), panels: 0 });
    }
    let mut pieces = Vec::new();
    let mut stack = vec![(a, b, f(a).abs(), f(b).abs(), 0u32)];
    while let Some((lo, hi, flo, fhi, depth)) = stack.pop() {
        let mid = (lo + hi) * lit::<T>(0.5);
        let fmid = f(mid).abs();
        let big = flo.max(fhi).max(fmid);
        let small = flo.min(fhi).min(fmid);
        if depth < MAX_DEPTH && big > lit::<T>(2.0) * small {
            stack.push((mid, hi, fmid, fhi, depth + 1));
            stack.push((lo, mid, flo, fmid, depth + 1));
        } else {
            pieces.push((lo, hi));
        }
    }
    let piece_tol = tol / T::from_usize(pieces.len()).unwrap();
    let mut value = T::zero();
    let mut panels = 0;
    for (lo, hi) in pieces {
        let q = simpson_doubling(&f, lo, hi, piece_tol, max_panels)?;
        value += q.value;
        panels += q.panels;
    }
    Ok(Quadrature { value, panels })
}

/// Mean of a 1-periodic complex integrand over `[0, 1)` by the trapezoid rule.
///
/// Starts at `start_panels` and doubles until successive estimates agree to
/// `tol`. For analytic periodic integrands the rule converges geometrically.
pub fn periodic_trapezoid<T, F>(g: F, start_panels: usize, tol: T, max_panels: usize) -> Result<Quadrature<Complex<T>>>
where
    T: Real,
    F: Fn(T) -> Result<Complex<T>>,
{
    let mut n = start_panels.max(1);
    let inv = |k: usize, m: usize| T::from_usize(k).unwrap() / T::from_usize(m).unwrap();
    let mut sum = Complex::new(T::zero(), T::zero());
    for k in 0..n {
        sum += g(inv(k, n))?;
    }
    let mut est = sum / T::from_usize(n).unwrap();
    loop {
        if 2 * n > max_panels {
            return Err(HypError::Numerical(format!("periodic trapezoid did not converge within {max_panels} panels")));
        }
        let mut odd = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            odd += g(inv(2 * k + 1, 2 * n))?;
        }
        sum += odd;
        n *= 2;
        let next = sum / T::from_usize(n).unwrap();
        if (next - est).norm() < tol {
            return Ok(Quadrature { value: next, panels: n });
        }
        est = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_is_exact() {
        let q = simpson_doubling(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 1 << 20).unwrap();
        assert!((q.value - 0.0).abs() < 1e-12);
    }

    #[test]
    fn simpson_log_integrand() {
        // ∫_0^{1/2} 2/(1-r^2) dr = ln 3
        let q = simpson_doubling(|r: f64| 2.0 / (1.0 - r * r), 0.0, 0.5, 1e-12, 1 << 20).unwrap();
        assert!((q.value - 3f64.ln()).abs() < 1e-11);
    }

    #[test]
    fn graded_handles_steep_density() {
        // ∫_{e^-6}^{e^6} dy/y = 12
        let q = simpson_graded(|y: f64| 1.0 / y, (-6f64).exp(), 6f64.exp(), 1e-10, 1 << 20).unwrap();
        assert!((q.value - 12.0).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn simpson_reports_non_convergence() {
        let err = simpson_doubling(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, 1e-15, 1 << 6).unwrap_err();
        assert!(matches!(err, HypError::Numerical(_)));
    }

    #[test]
    fn trapezoid_winding_of_unit_circle() {
        // mean of 1/(1 - e^{2πit}/2) over a period is 1
        let g = |t: f64| {
            let w = Complex::new(0.0, 2.0 * std::f64::consts::PI * t).exp() * 0.5;
            Ok(Complex::new(1.0, 0.0) / (Complex::new(1.0, 0.0) - w))
        };
        let q = periodic_trapezoid(g, 64, 1e-12, 1 << 18).unwrap();
        assert!((q.value - Complex::new(1.0, 0.0)).norm() < 1e-12);
    }
}
