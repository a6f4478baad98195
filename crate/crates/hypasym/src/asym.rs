//! Large-parameter expansions of the Gauss function.
//!
//! * [`pfaff_fixed_z_expansion`]: the convergent inverse-factorial series
//!   obtained after a Pfaff transformation, for F(a, b+lambda; c+lambda; z).
//! * [`watson_expansion`]: Watson's lemma applied to the Laplace form of
//!   F(a, b; c+lambda; z).
//! * [`uniform_a_expansion`]: the same problem with confluent U scale
//!   functions, uniform as z grows.
//! * [`twopoint_a_leading`]: leading terms from both endpoints for F(-n, b; c; z).
//! * [`bcase_erfc_approx`]: the erfc approximation of F(-n, 1; n+2; -z) near z = 1.
//!
//! Error estimates are first-omitted-term heuristics, not bounds.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio, pochhammer_c, rgamma};
use crate::jacobi::jacobi_coefficients;
use crate::reference::{EvalResult, Method};
use crate::scalar::{expm1, ln1p, nonpositive_integer, rational, Rational, C64};
use crate::series::TruncatedSeries;
use crate::special::{erfcx, tricomi_u};

/// Largest expansion order accepted by the Watson and uniform expansions.
pub const MAX_ORDER: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// terms f_s (b)_s / lambda^(b+s)
    InversePowers,
    /// terms g_s (b)_s zeta^(b-a+s) U(b+s, b-a+1+s, zeta lambda)
    ConfluentU,
    ErfcLeading,
}

/// Coefficients of an expansion together with the prefactor they multiply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionSeries {
    pub coefficients: Vec<C64>,
    pub scale: Scale,
    pub normalization: String,
    pub prefactor: C64,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn check_order(s: usize) -> Result<()> {
    if s > MAX_ORDER {
        return Err(Error::Domain(format!("expansion order {s} exceeds {MAX_ORDER}")));
    }
    Ok(())
}

fn on_cut(z: C64) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

/// F(a, beta+lambda; gamma+lambda; z) as (1-z)^(-a) times the first `terms`
/// terms of F(a, gamma-beta; gamma+lambda; z/(z-1)).
pub fn pfaff_fixed_z_expansion(a: C64, beta: C64, gam: C64, z: C64, lambda: f64, terms: usize) -> Result<EvalResult> {
    if on_cut(z) {
        return Err(Error::BranchCut);
    }
    if terms == 0 {
        return Err(Error::Domain("at least one term is needed".into()));
    }
    let lower = gam + lambda;
    if let Some(m) = nonpositive_integer(lower) {
        if m < terms as u64 {
            return Err(Error::Pole(format!("gamma + lambda = -{m}")));
        }
    }
    let w = z / (z - 1.0);
    let upper = gam - beta;
    let mut term = one();
    let mut sum = term;
    for k in 0..terms {
        let kf = k as f64;
        term = term * (a + kf) * (upper + kf) / ((lower + kf) * (kf + 1.0)) * w;
        if k + 1 < terms {
            sum += term;
        }
    }
    let pre = (one() - z).powc(-a);
    let warning =
        (w.norm() >= 1.0).then(|| format!("|z/(z-1)| = {:.3} >= 1: the series is only asymptotic here", w.norm()));
    Ok(EvalResult {
        value: pre * sum,
        abs_error_estimate: (pre * term).norm(),
        terms_used: terms,
        method: Method::PfaffFixedZ,
        warning,
    })
}

/// (e^t - 1)/t as a series.
fn expm1_over_t(order: usize) -> TruncatedSeries<C64> {
    let mut fact = 1.0;
    TruncatedSeries::from_fn(order, |k| {
        fact *= (k + 1) as f64;
        C64::new(1.0 / fact, 0.0)
    })
}

/// ((e^t - 1)/t)^(b-1) e^((1-c)t), the part shared by f and g.
fn common_factor(b: C64, c: C64, order: usize) -> Result<TruncatedSeries<C64>> {
    let e = expm1_over_t(order).pow_unit(&(b - 1.0))?;
    let lin = TruncatedSeries::new(vec![C64::new(0.0, 0.0), one() - c], order).exp_unit()?;
    Ok(&e * &lin)
}

fn watson_f(a: C64, b: C64, c: C64, z: C64, order: usize) -> Result<TruncatedSeries<C64>> {
    let mut fact = 1.0;
    let inner = TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            return one();
        }
        fact *= k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        z * (sign / fact)
    });
    Ok(&common_factor(b, c, order)? * &inner.pow_unit(&-a)?)
}

/// Taylor coefficients f_0..f_S of
/// f(t) = ((e^t-1)/t)^(b-1) e^((1-c)t) (1-z+z e^(-t))^(-a).
///
/// The series has radius min(2 pi, |t0|) with t0 = ln(z/(z-1)); a warning is
/// attached when |t0| < 0.1.
pub fn watson_coefficients(a: C64, b: C64, c: C64, z: C64, s: usize) -> Result<ExpansionSeries> {
    check_order(s)?;
    let f = watson_f(a, b, c, z, s)?;
    Ok(ExpansionSeries {
        coefficients: f.into_coeffs(),
        scale: Scale::InversePowers,
        normalization: "Gamma(c+lambda)/Gamma(c+lambda-b)".into(),
        prefactor: one(),
        order: s + 1,
        warning: watson_warning(z),
    })
}

fn watson_warning(z: C64) -> Option<String> {
    let t0 = (z / (z - 1.0)).ln();
    (t0.norm() < 0.1).then(|| format!("|t0| = {:.3e}: expansion is not uniform for this z", t0.norm()))
}

/// Gamma(c+lambda)/Gamma(c+lambda-b) sum_{s<=S} f_s (b)_s lambda^(-b-s).
pub fn watson_expansion(a: C64, b: C64, c: C64, z: C64, lambda: f64, s: usize) -> Result<EvalResult> {
    check_order(s)?;
    if on_cut(z) {
        return Err(Error::BranchCut);
    }
    let f = watson_f(a, b, c, z, s + 1)?;
    let pre = gamma_ratio(c + lambda, c + lambda - b)?;
    let lam_b = (-b * lambda.ln()).exp();
    let term = |k: usize| f.coeff(k) * pochhammer_c(b, k) * lam_b / lambda.powi(k as i32);
    let sum: C64 = (0..=s).map(term).sum();
    Ok(EvalResult {
        value: pre * sum,
        abs_error_estimate: (pre * term(s + 1)).norm(),
        terms_used: s + 1,
        method: Method::Watson,
        warning: watson_warning(z),
    })
}

/// psi(u) = (1 - e^(-u))/u expanded in t at u = zeta + t.
fn psi_shifted(zeta: C64, order: usize) -> Result<TruncatedSeries<C64>> {
    if zeta.norm() < 1.0 {
        // psi(u) = sum_k (-u)^k/(k+1)!; re-expand each power binomially.
        const EXTRA: usize = 40;
        let kmax = order + EXTRA;
        let mut inv_fact = vec![1.0; kmax + 2];
        for k in 1..kmax + 2 {
            inv_fact[k] = inv_fact[k - 1] / k as f64;
        }
        let coeffs = (0..=order)
            .map(|j| {
                let mut acc = C64::new(0.0, 0.0);
                let mut binom = 1.0;
                let mut zpow = one();
                for k in j..=kmax {
                    if k > j {
                        binom = binom * k as f64 / (k - j) as f64;
                        zpow *= zeta;
                    }
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    acc += zpow * (sign * binom * inv_fact[k + 1]);
                }
                acc
            })
            .collect();
        return Ok(TruncatedSeries::new(coeffs, order));
    }
    let e = (-zeta).exp();
    let mut fact = 1.0;
    let num = TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            return -expm1(-zeta);
        }
        fact *= k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        -e * (sign / fact)
    });
    num.div(&TruncatedSeries::new(vec![zeta, one()], order))
}

/// g(t) = (t + zeta)^a f(t) = zeta^a (psi(zeta+t)/psi(zeta))^(-a) ((e^t-1)/t)^(b-1) e^((1-c)t).
fn uniform_g(a: C64, b: C64, c: C64, zeta: C64, order: usize) -> Result<TruncatedSeries<C64>> {
    let psi = psi_shifted(zeta, order)?;
    let mut unit = psi.scale(&psi.coeff(0).inv()).into_coeffs();
    unit[0] = one();
    let ratio = TruncatedSeries::new(unit, order).pow_unit(&-a)?;
    Ok((&common_factor(b, c, order)? * &ratio).scale(&zeta.powc(a)))
}

/// Coefficients g_0..g_S of the uniform expansion.
pub fn uniform_coefficients(a: C64, b: C64, c: C64, z: C64, s: usize) -> Result<ExpansionSeries> {
    check_order(s)?;
    let zeta = uniform_zeta(z)?;
    Ok(ExpansionSeries {
        coefficients: uniform_g(a, b, c, zeta, s)?.into_coeffs(),
        scale: Scale::ConfluentU,
        normalization: "Gamma(c+lambda)/Gamma(c+lambda-b)".into(),
        prefactor: one(),
        order: s + 1,
        warning: None,
    })
}

fn uniform_zeta(z: C64) -> Result<C64> {
    if on_cut(z) {
        return Err(Error::BranchCut);
    }
    let zeta = ln1p(-z.inv());
    if zeta.re <= 0.0 {
        return Err(Error::Domain(format!("zeta = ln((z-1)/z) = {zeta} is not in the right half-plane")));
    }
    Ok(zeta)
}

/// Gamma(c+lambda)/Gamma(c+lambda-b) sum_{s<=S} g_s (b)_s zeta^(b-a+s) U(b+s, b-a+1+s, zeta lambda)
/// with zeta = ln((z-1)/z).
pub fn uniform_a_expansion(a: C64, b: C64, c: C64, z: C64, lambda: f64, s: usize) -> Result<EvalResult> {
    check_order(s)?;
    let zeta = uniform_zeta(z)?;
    let g = uniform_g(a, b, c, zeta, s + 1)?;
    let pre = gamma_ratio(c + lambda, c + lambda - b)?;
    let x = zeta * lambda;
    let term = |k: usize| -> Result<C64> {
        let kf = k as f64;
        let u = tricomi_u(b + kf, b - a + 1.0 + kf, x)?;
        Ok(g.coeff(k) * pochhammer_c(b, k) * zeta.powc(b - a + kf) * u)
    };
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..=s {
        sum += term(k)?;
    }
    let next = term(s + 1)?;
    Ok(EvalResult {
        value: pre * sum,
        abs_error_estimate: (pre * next).norm(),
        terms_used: s + 1,
        method: Method::UniformU,
        warning: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    Zero,
    One,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPoint {
    pub result: EvalResult,
    pub dominant: Endpoint,
}

/// Distance from p to the segment [0, 1].
fn segment_distance(p: C64) -> f64 {
    if (0.0..=1.0).contains(&p.re) {
        p.im.abs()
    } else {
        p.norm().min((p - 1.0).norm())
    }
}

/// Leading two-endpoint approximation of F(-n, b; c; z).
///
/// With L = ln(1-z) and omega = (n+1) L the integral
/// J = int_0^1 f(u) u^(b-1) (1-u)^(c-b-1) e^(omega u) du is replaced by
/// f(0) Gamma(b) (-omega)^(-b) + f(1) e^omega Gamma(c-b) omega^(b-c).
/// Both terms are always kept; the dominant endpoint is reported. The
/// error estimate |value|/|omega| is a heuristic.
pub fn twopoint_a_leading(n: u64, b: C64, c: C64, z: C64) -> Result<TwoPoint> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if !(c.re > b.re && b.re > 0.0) {
        return Err(Error::Domain("needs Re c > Re b > 0".into()));
    }
    if z == one() {
        return Err(Error::Domain("z = 1".into()));
    }
    if on_cut(z) {
        return Err(Error::BranchCut);
    }
    let l = ln1p(-z);
    let omega = l * (n + 1) as f64;
    let dominant = if omega.re > 0.0 { Endpoint::One } else { Endpoint::Zero };
    if z == C64::new(0.0, 0.0) {
        let result = EvalResult {
            value: one(),
            abs_error_estimate: 0.0,
            terms_used: 1,
            method: Method::TwoPoint,
            warning: None,
        };
        return Ok(TwoPoint { result, dominant });
    }
    let f0 = (-z / (one() - z) / l).powc(c - b - 1.0);
    let f1 = (-z / l).powc(b - 1.0);
    let j0 = f0 * gamma(b)? * (-omega).powc(-b);
    let j1 = f1 * omega.exp() * gamma(c - b)? * omega.powc(b - c);
    let pre = gamma(c)? * rgamma(b) * rgamma(c - b) * (one() - z).powc(c - b - 1.0) * (-l / z).powc(c - 1.0);
    let value = pre * (j0 + j1);

    let mut near = Vec::new();
    for k in [-2i32, -1, 1, 2] {
        let shift = C64::new(0.0, 2.0 * PI * k as f64) / l;
        for (name, p) in [("u", shift), ("v", one() + shift)] {
            if segment_distance(p) < 0.2 {
                near.push(format!("{name}_{k} = {p:.3}"));
            }
        }
    }
    let warning = (!near.is_empty()).then(|| format!("singularities near [0,1]: {}", near.join(", ")));
    let result = EvalResult {
        value,
        abs_error_estimate: value.norm() / omega.norm(),
        terms_used: 2,
        method: Method::TwoPoint,
        warning,
    };
    Ok(TwoPoint { result, dominant })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BCaseGeometry {
    pub z: f64,
    pub t0: f64,
    pub alpha: f64,
    pub f_at_alpha: f64,
}

/// Peak location and the matching parameter alpha for F(-n, 1; n+2; -z):
/// alpha^2/2 = -ln(1 - ((z-1)/(z+1))^2), sign(alpha) = sign(z-1).
pub fn bcase_geometry(z: f64) -> Result<BCaseGeometry> {
    if z.is_nan() || z <= 0.0 {
        return Err(Error::Domain(format!("z = {z} must be positive")));
    }
    let r = (z - 1.0) / (z + 1.0);
    let alpha = (-2.0 * (-r * r).ln_1p()).sqrt().copysign(z - 1.0);
    let alpha = if z == 1.0 { 0.0 } else { alpha };
    Ok(BCaseGeometry { z, t0: (z - 1.0) / (2.0 * z), alpha, f_at_alpha: (1.0 + z) / (2.0 * SQRT_2 * z) })
}

/// sqrt(pi n) (1+z)/(4z) e^(n alpha^2/2) erfc(-alpha sqrt(n/2)), evaluated as
/// a scaled complementary error function so that no overflow occurs.
pub fn bcase_erfc_approx(n: u64, z: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let g = bcase_geometry(z)?;
    let nf = n as f64;
    Ok((PI * nf).sqrt() * (1.0 + z) / (4.0 * z) * erfcx(-g.alpha * (nf / 2.0).sqrt()))
}

/// Exact F(-n, 1; n+2; -z) by its terminating sum.
pub fn bcase_exact(n: u64, z: &Rational) -> Rational {
    let mut term = rational(1, 1);
    let mut sum = term.clone();
    let nn = n as i64;
    for k in 0..nn {
        term = term * rational(k - nn, 1) * rational(k + 1, 1) / (rational(nn + 2 + k, 1) * rational(k + 1, 1))
            * -z.clone();
        sum += term.clone();
    }
    sum
}

/// (n+1)!/(4^n (3/2)_n) (1+z)^n P_n^(n+1, -n-1)((1-z)/(1+z)), which equals
/// F(-n, 1; n+2; -z).
pub fn bcase_jacobi_bridge_exact(n: u64, z: &Rational) -> Result<Rational> {
    let one = rational(1, 1);
    let zp1 = &one + z;
    if zp1 <= rational(0, 1) {
        return Err(Error::Domain("needs z > -1".into()));
    }
    let nn = n as i64;
    let poly = jacobi_coefficients(n as usize, &rational(nn + 1, 1), &rational(-nn - 1, 1))?;
    let x = (&one - z) / &zp1;
    let mut scale = one.clone();
    for k in 1..=nn {
        // (k+1) / (4 (1/2 + k))
        scale = scale * rational(k + 1, 1) / rational(4 * k + 2, 1);
    }
    Ok(scale * num_traits::pow(zp1, n as usize) * poly.eval(&x))
}

/// Floating-point value of the Jacobi side of the bridge.
pub fn bcase_jacobi_bridge(n: u64, z: f64) -> Result<f64> {
    let zr = crate::scalar::rational_from_f64(z)?;
    Ok(crate::scalar::rational_to_f64(&bcase_jacobi_bridge_exact(n, &zr)?))
}
