//! Two terminating 3F2 studies at unit-modulus argument.
//!
//! The first is f(n) = 3F2(-n, 1/2, 1/2; 1/2-n, 1/2-n; -1), which tends to 2
//! and equals (n!)^3 c_n / (2^n ((1/2)_n)^2) with c_n the Taylor coefficients
//! of (e^(w/2) I_0(w/2))^2. The second is the two-term extension of
//! Kummer's 2F1 evaluation at -1:
//!
//! F(a+n, b; a-b; -1) = P(n) G1 + Q(n) G2,
//! G1 = Gamma(a-b) Gamma(a/2+1/2) / (Gamma(a) Gamma(a/2+1/2-b)),
//! G2 = Gamma(a-b) Gamma(a/2) / (Gamma(a) Gamma(a/2-b)),
//!
//! with P(-1) = 1, Q(-1) = 0 recovering Kummer's identity.

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma, ln_gamma, rgamma};
use crate::numfmt::g17;
use crate::quad::{exp_sinh, tanh_sinh};
use crate::reference::{eval_2f1, terminating_pfq, terminating_pfq_compensated, Params};
use crate::scalar::{nonpositive_integer, pochhammer, rational, rational_to_f64, rel_diff, Rational, C64};

fn fact(n: usize) -> Rational {
    pochhammer(&Rational::one(), n)
}

fn half() -> Rational {
    rational(1, 2)
}

/// f(n) exactly. Every term of the sum is positive.
pub fn larcombe_f(n: usize) -> Rational {
    let nr = rational(n as i64, 1);
    let low = half() - &nr;
    terminating_pfq(&[-nr, half(), half()], &[low.clone(), low], &rational(-1, 1)).expect("terminating")
}

/// c_0..c_N of (e^(w/2) I_0(w/2))^2.
///
/// With s_k the coefficients of e^(w/2) I_0(w/2), the integers
/// t_k = k! 8^k s_k = sum_m C(k, 2m) C(2m, m) 4^(k-m) give
/// c_n = sum_j C(n, j) t_j t_(n-j) / (n! 8^n), so the convolution runs in
/// integers with one division per coefficient.
pub fn bessel_sq_coeffs(n_max: usize) -> Vec<Rational> {
    let binomials: Vec<Vec<BigInt>> = (0..=n_max)
        .scan(Vec::<BigInt>::new(), |row, _| {
            let mut next = vec![BigInt::one()];
            next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
            if !row.is_empty() {
                next.push(BigInt::one());
            }
            *row = next.clone();
            Some(next)
        })
        .collect();
    let four = BigInt::from(4);
    let t: Vec<BigInt> = (0..=n_max)
        .map(|k| {
            (0..=k / 2).fold(BigInt::zero(), |acc, m| {
                acc + &binomials[k][2 * m] * &binomials[2 * m][m] * num_traits::pow(four.clone(), k - m)
            })
        })
        .collect();
    let mut factorial = BigInt::one();
    (0..=n_max)
        .map(|n| {
            if n > 0 {
                factorial *= n;
            }
            let sum = (0..=n).fold(BigInt::zero(), |acc, j| acc + &binomials[n][j] * &t[j] * &t[n - j]);
            Rational::new(sum, &factorial * num_traits::pow(BigInt::from(8), n))
        })
        .collect()
}

/// (n!)^3 / (2^n ((1/2)_n)^2), the factor linking c_n to f(n).
fn larcombe_weight(n: usize) -> Rational {
    let h = pochhammer(&half(), n);
    num_traits::pow(fact(n), 3) / (num_traits::pow(rational(2, 1), n) * &h * &h)
}

/// Saddle-point approximation c_n ~ 2/(pi n) 2^n / n!.
pub fn larcombe_cn_asymptotic(n: usize) -> f64 {
    let nf = n as f64;
    2.0 / (PI * nf) * (nf * LN_2 - ln_gamma(C64::new(nf + 1.0, 0.0)).expect("positive argument").re).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LarcombeRecord {
    pub n: usize,
    #[serde(skip)]
    pub f_exact: Rational,
    #[serde(skip)]
    pub c_n: Rational,
    pub identity_residual: f64,
    /// f(n) implied by the saddle-point c_n
    pub f_asymptotic: f64,
    /// c_n divided by its saddle-point approximation
    pub c_n_ratio: f64,
}

pub fn larcombe_records(n_max: usize) -> Vec<LarcombeRecord> {
    let cs = bessel_sq_coeffs(n_max);
    (0..=n_max)
        .map(|n| {
            let f = larcombe_f(n);
            let rhs = larcombe_weight(n) * &cs[n];
            let identity_residual = rational_to_f64(&((&f - &rhs) / &f)).abs();
            let (f_asymptotic, c_n_ratio) = if n == 0 {
                (f64::NAN, f64::NAN)
            } else {
                // both quantities stay O(1); form them from exact O(1) ratios
                let nf = n as f64;
                let q = rational_to_f64(&(fact(n) / pochhammer(&half(), n)));
                let scaled = rational_to_f64(&(&cs[n] * fact(n) / num_traits::pow(rational(2, 1), n)));
                (q * q * 2.0 / (PI * nf), scaled * PI * nf / 2.0)
            };
            LarcombeRecord { n, f_exact: f, c_n: cs[n].clone(), identity_residual, f_asymptotic, c_n_ratio }
        })
        .collect()
}

/// `n,f_exact,f_minus_2,c_n_ratio`
pub fn larcombe_csv(records: &[LarcombeRecord]) -> String {
    let mut out = String::from("n,f_exact,f_minus_2,c_n_ratio\n");
    for r in records {
        let fm2 = rational_to_f64(&(&r.f_exact - rational(2, 1)));
        out.push_str(&format!("{},{},{},{}\n", r.n, g17(rational_to_f64(&r.f_exact)), g17(fm2), g17(r.c_n_ratio)));
    }
    out
}

/// Gamma(1+a-b) Gamma(1+a/2) / (Gamma(1+a) Gamma(1+a/2-b)).
pub fn kummer_rhs(a: C64, b: C64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    if let Some(m) = nonpositive_integer(one + a - b) {
        return Err(Error::Pole(format!("1+a-b = -{m}")));
    }
    Ok(gamma(one + a - b)? * gamma(one + a / 2.0)? * rgamma(one + a) * rgamma(one + a / 2.0 - b))
}

/// F(a, b; 1+a-b; -1) through the reference evaluator, which maps the
/// argument to 1/2 before summing.
pub fn kummer_lhs(a: C64, b: C64) -> Result<C64> {
    Ok(eval_2f1(&Params::new(a, b, C64::new(1.0, 0.0) + a - b), C64::new(-1.0, 0.0))?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VidunasRecord {
    pub n: i64,
    pub a: C64,
    pub b: C64,
    pub p: C64,
    pub q: C64,
    pub identity_residual: f64,
}

/// Parameters of the two 3F2 sums (upper, lower) and their prefactors.
struct PqForm<F> {
    p_pre: F,
    p_upper: [F; 3],
    p_lower: [F; 2],
    q_pre: F,
    q_upper: [F; 3],
    q_lower: [F; 2],
}

trait Scalar: crate::scalar::Field + crate::reference::TerminatingField {
    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }
    fn pow2(k: i64) -> Self {
        let two = Self::from_i64(2);
        if k >= 0 {
            (0..k).fold(Self::one(), |acc, _| acc * two.clone())
        } else {
            Self::one() / Self::pow2(-k)
        }
    }
}
impl Scalar for C64 {}
impl Scalar for Rational {}

fn pq_form<F: Scalar>(n: i64, a: &F, b: &F) -> PqForm<F> {
    let h = F::half();
    let one = F::one();
    let a2 = a.clone() * h.clone();
    if n >= -1 {
        let nh = F::from_i64(n) * h.clone();
        PqForm {
            p_pre: F::pow2(-(n + 1)),
            p_upper: [-nh.clone(), -nh.clone() - h.clone(), a2.clone() - b.clone()],
            p_lower: [h.clone(), a2.clone()],
            q_pre: F::from_i64(n + 1) * F::pow2(-(n + 1)),
            q_upper: [-nh.clone() + h.clone(), -nh, a2.clone() + h.clone() - b.clone()],
            q_lower: [F::from_i64(3) * h.clone(), a2 + h],
        }
    } else {
        // n = -m-1 with m >= 1
        let m = -n - 1;
        let mu = m as usize;
        let mh = F::from_i64(m) * h.clone();
        let mf = F::from_i64(m);
        let denom = pochhammer(&(one.clone() - b.clone()), mu);
        PqForm {
            p_pre: F::pow2(m) * pochhammer(&(one.clone() - a2.clone()), mu) / denom.clone(),
            p_upper: [-mh.clone(), -mh.clone() + h.clone(), a2.clone() - b.clone()],
            p_lower: [h.clone(), a2.clone() - mf.clone()],
            q_pre: -mf.clone() * F::pow2(m) * pochhammer(&(h.clone() - a2.clone()), mu) / denom,
            q_upper: [-mh.clone() + h.clone(), -mh + one, a2.clone() + h.clone() - b.clone()],
            q_lower: [F::from_i64(3) * h.clone(), a2 + h - mf],
        }
    }
}

fn check_vidunas<F: Scalar>(n: i64, a: &F, b: &F) -> Result<()> {
    if n >= 0 && pochhammer(a, n as usize).is_zero() {
        return Err(Error::Domain(format!("(a)_{n} vanishes")));
    }
    if (a.clone() - b.clone()).nonpositive_integer().is_some() {
        return Err(Error::Pole("a-b is a nonpositive integer".into()));
    }
    if n < -1 && pochhammer(&(F::one() - b.clone()), (-n - 1) as usize).is_zero() {
        return Err(Error::Pole("(1-b)_m vanishes".into()));
    }
    Ok(())
}

/// P(n), Q(n) exactly for rational parameters.
pub fn vidunas_pq_exact(n: i64, a: &Rational, b: &Rational) -> Result<(Rational, Rational)> {
    check_vidunas(n, a, b)?;
    let f = pq_form(n, a, b);
    let one = Rational::one();
    let p = f.p_pre * terminating_pfq(&f.p_upper, &f.p_lower, &one)?;
    // Q(-1) = 0, and its 3F2 does not terminate
    let q = if f.q_pre.is_zero() { f.q_pre } else { f.q_pre * terminating_pfq(&f.q_upper, &f.q_lower, &one)? };
    Ok((p, q))
}

/// The alternative forms P(n) = 3F2(-n/2, -n/2-1/2, b; -n, a/2; 1)/2 and
/// Q(n) = 3F2(-n/2+1/2, -n/2, b; -n, a/2+1/2; 1)/2, valid for n >= 0.
pub fn vidunas_pq_alt_exact(n: i64, a: &Rational, b: &Rational) -> Result<(Rational, Rational)> {
    if n < 0 {
        return Err(Error::Domain("the alternative forms need n >= 0".into()));
    }
    check_vidunas(n, a, b)?;
    let nh = rational(n, 2);
    let a2 = a / rational(2, 1);
    let low = rational(-n, 1);
    let one = Rational::one();
    let p = terminating_pfq(&[-nh.clone(), -&nh - half(), b.clone()], &[low.clone(), a2.clone()], &one)? * half();
    let q = terminating_pfq(&[-&nh + half(), -nh, b.clone()], &[low, a2 + half()], &one)? * half();
    Ok((p, q))
}

/// P(n), Q(n) in floating point with compensated summation.
pub fn vidunas_pq(n: i64, a: C64, b: C64) -> Result<(C64, C64)> {
    check_vidunas(n, &a, &b)?;
    let f = pq_form(n, &a, &b);
    let one = C64::new(1.0, 0.0);
    let p = f.p_pre * terminating_pfq_compensated(&f.p_upper, &f.p_lower, one)?;
    let q =
        if f.q_pre.is_zero() { f.q_pre } else { f.q_pre * terminating_pfq_compensated(&f.q_upper, &f.q_lower, one)? };
    Ok((p, q))
}

/// The gamma ratios multiplying P(n) and Q(n).
pub fn vidunas_gamma_ratios(a: C64, b: C64) -> Result<(C64, C64)> {
    let common = gamma(a - b)? * rgamma(a);
    let g1 = common * gamma(a / 2.0 + 0.5)? * rgamma(a / 2.0 + 0.5 - b);
    let g2 = common * gamma(a / 2.0)? * rgamma(a / 2.0 - b);
    Ok((g1, g2))
}

pub fn vidunas_record(n: i64, a: C64, b: C64) -> Result<VidunasRecord> {
    let (p, q) = vidunas_pq(n, a, b)?;
    let (g1, g2) = vidunas_gamma_ratios(a, b)?;
    let lhs = eval_2f1(&Params::new(a + n as f64, b, a - b), C64::new(-1.0, 0.0))?.value;
    Ok(VidunasRecord { n, a, b, p, q, identity_residual: rel_diff(p * g1 + q * g2, lhs) })
}

/// Relative residual of F(a+n, b; a-b; -1) = P(n) G1 + Q(n) G2.
pub fn vidunas_identity_check(n: i64, a: C64, b: C64) -> Result<f64> {
    Ok(vidunas_record(n, a, b)?.identity_residual)
}

fn is_nonneg_integer(x: f64) -> bool {
    x >= -1e-12 && (x - x.round()).abs() < 1e-12
}

/// Large-n expansions
/// P(n) ~ 2^(2b-1) Gamma(a/2) / (Gamma(b) Gamma(a/2-b)) sum_k c_k Gamma(b+k/2) / n^(b+k/2)
/// and the same for Q with a/2 replaced by a/2+1/2, where c_0 = 1, c_1 = 0,
/// c_2 = (5b-4a+3)/2.
pub fn vidunas_pq_asymptotic(n: u64, a: f64, b: f64, k_max: usize) -> Result<(f64, f64)> {
    if k_max > 2 {
        return Err(Error::Domain("only c_0, c_1, c_2 are known".into()));
    }
    if is_nonneg_integer(b - a / 2.0) || is_nonneg_integer(b - a / 2.0 - 0.5) {
        return Err(Error::Domain(format!("b = {b} lies on the excluded lattice for a = {a}")));
    }
    let nf = n as f64;
    let ck = [1.0, 0.0, (5.0 * b - 4.0 * a + 3.0) / 2.0];
    let g = |x: f64| gamma(C64::new(x, 0.0)).map(|v| v.re);
    let rg = |x: f64| rgamma(C64::new(x, 0.0)).re;
    let mut sum = 0.0;
    for (k, c) in ck.iter().enumerate().take(k_max + 1) {
        let e = b + k as f64 / 2.0;
        sum += c * g(e)? * (-e * nf.ln()).exp();
    }
    let base = 2f64.powf(2.0 * b - 1.0) * rg(b) * sum;
    let p = base * g(a / 2.0)? * rg(a / 2.0 - b);
    let q = base * g(a / 2.0 + 0.5)? * rg(a / 2.0 + 0.5 - b);
    Ok((p, q))
}

fn ln_sinh(t: f64) -> f64 {
    if t < 1.0 {
        t.sinh().ln()
    } else {
        t + (-(-2.0 * t).exp()).ln_1p() - LN_2
    }
}

fn ln_cosh(t: f64) -> f64 {
    t.abs() + (-2.0 * t.abs()).exp().ln_1p() - LN_2
}

/// P(n) and Q(n) from their integral representations over [0, inf),
/// valid for Re a > 2 Re b > 0.
pub fn vidunas_pq_integral(n: u64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 2.0 * b && b > 0.0) {
        return Err(Error::Domain("needs a > 2b > 0".into()));
    }
    let nf = n as f64;
    let s = a - 2.0 * b - 1.0;
    let integrate = |odd: bool| -> Result<f64> {
        let log_f = move |t: f64| {
            let last = if odd { ln_sinh((nf + 1.0) * t) } else { ln_cosh((nf + 1.0) * t) };
            s * ln_sinh(t) - (a + nf) * ln_cosh(t) + last
        };
        let head = tanh_sinh(|t, _, _| C64::new(log_f(t).exp(), 0.0), 0.0, 1.0, 1e-12)?;
        let tail = exp_sinh(|u| C64::new(log_f(1.0 + u).exp(), 0.0), 1e-12)?;
        Ok(head.value.re + tail.value.re)
    };
    let g = |x: f64| gamma(C64::new(x, 0.0)).map(|v| v.re);
    let rg = |x: f64| rgamma(C64::new(x, 0.0)).re;
    let scale = 2f64.powf(-nf) * rg(b);
    let p = scale * g(a / 2.0)? * rg(a / 2.0 - b) * integrate(false)?;
    let q = scale * g(a / 2.0 + 0.5)? * rg(a / 2.0 + 0.5 - b) * integrate(true)?;
    Ok((p, q))
}

/// Largest relative discrepancy between the integral and the sum forms.
pub fn vidunas_integral_check(n: u64, a: f64, b: f64) -> Result<f64> {
    let (pi, qi) = vidunas_pq_integral(n, a, b)?;
    let (p, q) = vidunas_pq(n as i64, C64::new(a, 0.0), C64::new(b, 0.0))?;
    Ok(rel_diff(C64::new(pi, 0.0), p).max(rel_diff(C64::new(qi, 0.0), q)))
}

/// `n,a,b,P,Q,identity_residual,asym_rel_err`; the last column is empty
/// where the expansion does not apply.
pub fn vidunas_csv(records: &[VidunasRecord]) -> String {
    let mut out = String::from("n,a,b,P,Q,identity_residual,asym_rel_err\n");
    for r in records {
        let asym = (r.n > 0 && r.a.im == 0.0 && r.b.im == 0.0)
            .then(|| vidunas_pq_asymptotic(r.n as u64, r.a.re, r.b.re, 2).ok())
            .flatten()
            .map(|(p, _)| g17(rel_diff(C64::new(p, 0.0), r.p)))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            g17(r.a.re),
            g17(r.b.re),
            g17(r.p.re),
            g17(r.q.re),
            g17(r.identity_residual),
            asym
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;

    #[test]
    fn larcombe_small() {
        assert_eq!(larcombe_f(0), rational(1, 1));
        assert_eq!(larcombe_f(1), rational(2, 1));
        assert_eq!(larcombe_f(2), rational(20, 9));
        let c = bessel_sq_coeffs(2);
        assert_eq!(c, vec![rational(1, 1), rational(1, 1), rational(5, 8)]);
    }

    #[test]
    fn larcombe_identity_exact() {
        for r in larcombe_records(12) {
            assert_eq!(r.f_exact, larcombe_weight(r.n) * &r.c_n, "n = {}", r.n);
        }
    }

    #[test]
    fn kummer_quarter_pi() {
        let rhs = kummer_rhs(re(1.0), re(0.5)).unwrap();
        assert!(rel_diff(rhs, re(PI / 4.0)) < 1e-14);
        let lhs = kummer_lhs(re(1.0), re(0.5)).unwrap();
        assert!(rel_diff(lhs, re(PI / 4.0)) < 1e-11);
        assert!(rel_diff(kummer_rhs(re(0.7), re(0.0)).unwrap(), re(1.0)) < 1e-15);
    }

    #[test]
    fn vidunas_closed_forms_on_the_lattice() {
        let a = rational(7, 3);
        let b = &a / rational(2, 1);
        for n in -1..6i64 {
            let scale = num_traits::pow(rational(2, 1), (n + 1) as usize);
            let (p, _) = vidunas_pq_exact(n, &a, &b).unwrap();
            assert_eq!(p, Rational::one() / &scale);
            let (_, q) = vidunas_pq_exact(n, &a, &(&b + half())).unwrap();
            assert_eq!(q, rational(n + 1, 1) / &scale);
        }
    }

    #[test]
    fn vidunas_forms_agree() {
        let (a, b) = (rational(23, 10), rational(2, 5));
        for n in 0..10 {
            assert_eq!(vidunas_pq_exact(n, &a, &b).unwrap(), vidunas_pq_alt_exact(n, &a, &b).unwrap());
        }
    }

    #[test]
    fn vidunas_identity_samples() {
        assert!(vidunas_identity_check(-1, re(1.0), re(0.5)).unwrap() <= 1e-11);
        assert!(vidunas_identity_check(3, re(2.3), re(0.4)).unwrap() <= 1e-10);
        assert!(vidunas_identity_check(0, re(2.3), re(0.4)).unwrap() <= 1e-10);
        assert!(vidunas_identity_check(-3, re(2.3), re(0.4)).unwrap() <= 1e-10);
    }

    #[test]
    fn vidunas_integrals() {
        assert!(vidunas_integral_check(0, 3.0, 0.5).unwrap() <= 1e-8);
        assert!(vidunas_integral_check(5, 4.0, 1.0).unwrap() <= 1e-8);
        assert!(vidunas_pq_integral(2, 3.0, 0.5).unwrap().0 > 0.0);
    }

    #[test]
    fn vidunas_asymptotics() {
        let (a, b) = (1.5, 0.3);
        let (p, _) = vidunas_pq(200, re(a), re(b)).unwrap();
        let (p0, _) = vidunas_pq_asymptotic(200, a, b, 0).unwrap();
        let (p2, _) = vidunas_pq_asymptotic(200, a, b, 2).unwrap();
        assert!((p2 - p.re).abs() < (p0 - p.re).abs());
        assert!(vidunas_pq_asymptotic(10, 2.0, 1.0, 0).is_err());
    }
}
