//! Double-exponential quadrature: tanh-sinh on finite intervals and exp-sinh
//! on half-lines. Both tolerate integrable endpoint singularities.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::scalar::C64;

const MAX_LEVEL: u32 = 10;

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: C64,
    pub error: f64,
}

/// Integral of `f` over `[a, b]`.
///
/// The integrand receives the abscissa together with its distances to the
/// two endpoints, computed without cancellation.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64, f64, f64) -> C64,
{
    let half = 0.5 * (b - a);
    let node = |t: f64| -> (f64, f64, f64, f64) {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        // distance from the nearer endpoint, scaled to [-1, 1]
        let gap = (-u.abs()).exp() / ch;
        let w = FRAC_PI_2 * t.cosh() / (ch * ch);
        if u < 0.0 {
            let d = half * gap;
            (a + d, d, b - a - d, w)
        } else {
            let d = half * gap;
            (b - d, b - a - d, d, w)
        }
    };
    let sum_level = |h: f64, odd_only: bool| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut k: i64 = if odd_only { 1 } else { 0 };
        let step = if odd_only { 2 } else { 1 };
        loop {
            let t = k as f64 * h;
            if t > 4.0 {
                break;
            }
            for s in if k == 0 { vec![0.0] } else { vec![t, -t] } {
                let (x, da, db, w) = node(s);
                if da > 0.0 && db > 0.0 && w > 1e-300 {
                    acc += f(x, da, db) * w;
                }
            }
            k += step;
        }
        acc
    };
    refine(
        |level, prev| {
            let h = 0.5f64.powi(level as i32);
            if level == 0 {
                sum_level(h, false) * h * half
            } else {
                prev * 0.5 + sum_level(h, true) * h * half
            }
        },
        tol,
    )
}

/// Integral of `f` over `[0, inf)`; `f` should decay at least exponentially.
pub fn exp_sinh<F>(f: F, tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> C64,
{
    let sum_level = |h: f64, odd_only: bool| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let mut k: i64 = if odd_only { 1 } else { 0 };
        let step = if odd_only { 2 } else { 1 };
        loop {
            let t = k as f64 * h;
            if t > 4.5 {
                break;
            }
            for s in if k == 0 { vec![0.0] } else { vec![t, -t] } {
                let x = (FRAC_PI_2 * s.sinh()).exp();
                let w = FRAC_PI_2 * s.cosh() * x;
                if x > 0.0 && x.is_finite() && w.is_finite() {
                    let v = f(x);
                    if v.re.is_finite() && v.im.is_finite() {
                        acc += v * w;
                    }
                }
            }
            k += step;
        }
        acc
    };
    refine(
        |level, prev| {
            let h = 0.5f64.powi(level as i32);
            if level == 0 {
                sum_level(h, false) * h
            } else {
                prev * 0.5 + sum_level(h, true) * h
            }
        },
        tol,
    )
}

fn refine<G>(mut level_sum: G, tol: f64) -> Result<Quadrature>
where
    G: FnMut(u32, C64) -> C64,
{
    let mut prev = level_sum(0, C64::new(0.0, 0.0));
    for level in 1..=MAX_LEVEL {
        let next = level_sum(level, prev);
        let err = (next - prev).norm();
        if level >= 3 && err <= tol * next.norm().max(1e-300) {
            return Ok(Quadrature { value: next, error: err });
        }
        prev = next;
    }
    Err(Error::Quadrature(format!("no convergence to {tol:e} after {MAX_LEVEL} levels")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;

    #[test]
    fn endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let q = tanh_sinh(|_, da, _| re(da.powf(-0.5)), 0.0, 1.0, 1e-12).unwrap();
        assert!((q.value.re - 2.0).abs() < 1e-11);
    }

    #[test]
    fn gamma_integral() {
        // int_0^inf t^{1.5} e^{-t} dt = Gamma(2.5)
        let q = exp_sinh(|t| re(t.powf(1.5) * (-t).exp()), 1e-12).unwrap();
        assert!((q.value.re - 1.329_340_388_179_137).abs() < 1e-11);
    }
}
