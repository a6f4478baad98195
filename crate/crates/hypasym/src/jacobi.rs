//! Jacobi polynomials with non-classical parameters: exact monomial
//! coefficients, complex zeros, and distances from the zeros to their
//! limit curves.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::scalar::{pochhammer, rational, rational_to_f64, Rational, C64};

/// Which hypergeometric form produced the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    /// C(n+a, n) F(-n, a+b+n+1; a+1; (1-x)/2)
    Standard,
    /// C(n+a, n) ((1+x)/2)^(-b) F(a+n+1, -b-n; a+1; (1-x)/2)
    EulerLeft,
    /// (-1)^n C(n+b, n) ((1-x)/2)^(-a) F(b+n+1, -a-n; b+1; (1+x)/2)
    EulerRight,
    /// C(a+b+2n, n) ((x-1)/2)^n F(-n, -a-n; -2n-a-b; 2/(1-x))
    InvertedLeft,
    /// C(a+b+2n, n) ((x+1)/2)^n F(-n, -b-n; -2n-a-b; 2/(1+x))
    InvertedRight,
    /// explicit sum for a = b = -1/2 - n
    GegenbauerSum,
    Monomial,
}

impl Representation {
    /// Jacobi forms in the order they are tried.
    pub const JACOBI: [Representation; 5] = [
        Representation::Standard,
        Representation::InvertedLeft,
        Representation::InvertedRight,
        Representation::EulerLeft,
        Representation::EulerRight,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Jacobi,
    GegenbauerSpecial,
    Custom,
}

/// A polynomial with exact coefficients in the monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpec {
    pub coefficients: Vec<Rational>,
    pub family: Family,
    pub alpha: Rational,
    pub beta: Rational,
    pub representation: Representation,
}

impl PolySpec {
    pub fn from_coefficients(coefficients: Vec<Rational>) -> Result<Self> {
        let spec = PolySpec {
            coefficients,
            family: Family::Custom,
            alpha: Rational::zero(),
            beta: Rational::zero(),
            representation: Representation::Monomial,
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        match self.coefficients.last() {
            Some(c) if !c.is_zero() => Ok(()),
            _ => Err(Error::Degenerate("leading coefficient vanishes".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

type Poly = Vec<Rational>;

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// (c0 + c1 x)^m
fn affine_pow(c0: &Rational, c1: &Rational, m: usize) -> Poly {
    let base = vec![c0.clone(), c1.clone()];
    (0..m).fold(vec![Rational::one()], |acc, _| poly_mul(&acc, &base))
}

fn add_scaled(acc: &mut Poly, p: &Poly, s: &Rational) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Rational::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b * s;
    }
}

fn nonneg_integer(r: &Rational) -> Option<usize> {
    (r.is_integer() && !r.is_negative()).then(|| r.to_integer().try_into().ok()).flatten()
}

/// Coefficients of a terminating 2F1(u1, u2; l; .), or None when neither
/// upper parameter terminates the series or the lower one hits zero first.
fn hyp_terms(u1: &Rational, u2: &Rational, l: &Rational) -> Option<Vec<Rational>> {
    let k = [u1, u2].into_iter().filter_map(|u| nonneg_integer(&-u)).min()?;
    let mut term = Rational::one();
    let mut out = vec![term.clone()];
    for j in 0..k {
        let jr = rational(j as i64, 1);
        let den = (l + &jr) * rational(j as i64 + 1, 1);
        if den.is_zero() {
            return None;
        }
        term = term * (u1 + &jr) * (u2 + &jr) / den;
        out.push(term.clone());
    }
    Some(out)
}

/// Generalized binomial C(x + n, n) = (x+1)_n / n!.
fn binom(x: &Rational, n: usize) -> Rational {
    pochhammer(&(x + Rational::one()), n) / pochhammer(&Rational::one(), n)
}

fn half() -> Rational {
    rational(1, 2)
}

fn build(n: usize, a: &Rational, b: &Rational, rep: Representation) -> Option<Poly> {
    let one = Rational::one();
    let nr = rational(n as i64, 1);
    let mut out = Poly::new();
    match rep {
        Representation::Standard => {
            let terms = hyp_terms(&-nr.clone(), &(a + b + &nr + &one), &(a + &one))?;
            let pre = binom(a, n);
            for (k, t) in terms.iter().enumerate() {
                add_scaled(&mut out, &affine_pow(&half(), &-half(), k), &(&pre * t));
            }
        }
        Representation::EulerLeft | Representation::EulerRight => {
            let (p, q, sign) = match rep {
                Representation::EulerLeft => (a, b, one.clone()),
                _ => (b, a, if n.is_multiple_of(2) { one.clone() } else { -one.clone() }),
            };
            let m = nonneg_integer(&-q)?;
            let terms = hyp_terms(&(p + &nr + &one), &(-q - &nr), &(p + &one))?;
            // the argument of F is (1 -+ x)/2 and the factor ((1 +- x)/2)^m
            let (arg_slope, fac_slope) = match rep {
                Representation::EulerLeft => (-half(), half()),
                _ => (half(), -half()),
            };
            let factor = affine_pow(&half(), &fac_slope, m);
            let pre = binom(p, n) * sign;
            let mut inner = Poly::new();
            for (k, t) in terms.iter().enumerate() {
                add_scaled(&mut inner, &affine_pow(&half(), &arg_slope, k), &(&pre * t));
            }
            out = poly_mul(&factor, &inner);
        }
        Representation::InvertedLeft | Representation::InvertedRight => {
            let low = -(&nr + &nr) - a - b;
            let (upper, shift, sign) = match rep {
                Representation::InvertedLeft => (-a - &nr, -one.clone(), true),
                _ => (-b - &nr, one.clone(), false),
            };
            let terms = hyp_terms(&-nr.clone(), &upper, &low)?;
            let pre = binom(&(a + b + &nr), n);
            for (k, t) in terms.iter().enumerate() {
                // ((x -+ 1)/2)^(n-k), with (-1)^k for the left form
                let s = if sign && k % 2 == 1 { -pre.clone() } else { pre.clone() };
                add_scaled(&mut out, &affine_pow(&(shift.clone() / rational(2, 1)), &half(), n - k), &(s * t));
            }
        }
        Representation::GegenbauerSum | Representation::Monomial => return None,
    }
    if out.iter().skip(n + 1).any(|c| !c.is_zero()) {
        return None;
    }
    out.resize(n + 1, Rational::zero());
    Some(out)
}

/// P_n^(alpha, beta) in one specific representation, if it is admissible.
pub fn jacobi_coefficients_with(n: usize, alpha: &Rational, beta: &Rational, rep: Representation) -> Option<PolySpec> {
    let coefficients = build(n, alpha, beta, rep)?;
    Some(PolySpec {
        coefficients,
        family: Family::Jacobi,
        alpha: alpha.clone(),
        beta: beta.clone(),
        representation: rep,
    })
}

/// Exact monomial coefficients of P_n^(alpha, beta), from the first
/// admissible hypergeometric representation.
pub fn jacobi_coefficients(n: usize, alpha: &Rational, beta: &Rational) -> Result<PolySpec> {
    let spec =
        Representation::JACOBI.into_iter().find_map(|rep| jacobi_coefficients_with(n, alpha, beta, rep)).ok_or_else(
            || Error::Degenerate(format!("no admissible representation for n={n}, alpha={alpha}, beta={beta}")),
        )?;
    spec.check()?;
    Ok(spec)
}

/// (-1)^n sum_m (n!)^2 2^(-n-2m) x^(n-2m) / ((m!)^2 (n-2m)!), which is
/// proportional to P_n^(alpha, alpha) with alpha = -1/2 - n.
pub fn gegenbauer_special_coeffs(n: usize) -> Result<PolySpec> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let fact = |k: usize| pochhammer(&Rational::one(), k);
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut coefficients = vec![Rational::zero(); n + 1];
    for m in 0..=n / 2 {
        let num = fact(n) * fact(n);
        let den = fact(m) * fact(m) * fact(n - 2 * m) * num_traits::pow(rational(2, 1), n + 2 * m);
        coefficients[n - 2 * m] = &sign * num / den;
    }
    let alpha = -half() - rational(n as i64, 1);
    Ok(PolySpec {
        coefficients,
        family: Family::GegenbauerSpecial,
        alpha: alpha.clone(),
        beta: alpha,
        representation: Representation::GegenbauerSum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    /// |1 - ((3-z)/(1+z))^2| = 1
    Fig2,
    /// |1 - z^2| = 1
    Fig4,
    ImaginaryAxis,
    None,
}

impl Curve {
    pub fn from_tag(tag: &str) -> Result<Curve> {
        match tag {
            "fig2-curve" | "fig2" => Ok(Curve::Fig2),
            "fig4-curve" | "fig4" => Ok(Curve::Fig4),
            "imaginary-axis" => Ok(Curve::ImaginaryAxis),
            "none" => Ok(Curve::None),
            _ => Err(Error::Parse(format!("unknown curve '{tag}'"))),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Curve::Fig2 => "fig2-curve",
            Curve::Fig4 => "fig4-curve",
            Curve::ImaginaryAxis => "imaginary-axis",
            Curve::None => "none",
        }
    }

    /// Point of the curve at parameter theta on one of its two branches.
    fn point(self, theta: f64, branch: bool) -> C64 {
        let w = (C64::new(1.0, 0.0) - C64::from_polar(1.0, theta)).sqrt();
        let w = if branch { w } else { -w };
        match self {
            Curve::Fig4 => w,
            Curve::Fig2 => (3.0 - w) / (1.0 + w),
            _ => unreachable!("no parametrization"),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet {
    pub roots: Vec<C64>,
    /// |p(root)| / sum |a_k| |root|^k
    pub residuals: Vec<f64>,
    pub curve_distances: Option<Vec<f64>>,
    pub curve: Curve,
    pub converged: bool,
    pub iterations: usize,
}

pub const DEFAULT_SEED: u64 = 0x05ee_d2f1;
const MAX_ITER: usize = 2000;

fn horner(coeffs: &[CDd], z: CDd) -> (CDd, CDd) {
    let mut p = CDd::ZERO;
    let mut dp = CDd::ZERO;
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + *c;
    }
    (p, dp)
}

/// Cauchy's bound: the positive root of |a_n| r^n = sum_{k<n} |a_k| r^k.
fn cauchy_radius(mags: &[f64]) -> f64 {
    let n = mags.len() - 1;
    let lead = mags[n];
    // divided by r^n, which keeps it finite and increasing in r
    let g = |r: f64| lead - (0..n).map(|k| mags[k] * r.powi(k as i32 - n as i32)).sum::<f64>();
    let mut hi = 1.0 + mags[..n].iter().fold(0.0f64, |m, a| m.max(a / lead));
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// All complex zeros by Aberth-Ehrlich iteration in double-double
/// arithmetic, started on the Cauchy circle with seeded random phases.
pub fn find_roots(p: &PolySpec, seed: u64) -> Result<ZeroSet> {
    p.check()?;
    let n = p.degree();
    if n == 0 {
        return Err(Error::Domain("constant polynomial has no roots".into()));
    }
    let coeffs: Vec<CDd> = p.coefficients.iter().map(|c| CDd::from_real(Dd::from_rational(c))).collect();
    let mags: Vec<f64> = p.coefficients.iter().map(|c| rational_to_f64(c).abs()).collect();
    let radius = cauchy_radius(&mags);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<CDd> = (0..n)
        .map(|k| {
            let phase = 2.0 * PI * (k as f64 + rng.gen::<f64>() * 0.5) / n as f64 + 0.4;
            CDd::from_c64(C64::from_polar(radius, phase))
        })
        .collect();
    let mut converged = false;
    let mut iterations = 0;
    let mut done = vec![false; n];
    while iterations < MAX_ITER {
        iterations += 1;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (pv, dpv) = horner(&coeffs, z[k]);
            // below this the value is rounding noise and corrections are meaningless
            let noise = 1e-30 * mags.iter().rev().fold(0.0, |acc, m| acc * z[k].norm() + m);
            if pv.norm() <= noise {
                done[k] = true;
                continue;
            }
            let ratio = pv / dpv;
            let mut sum = CDd::ZERO;
            for j in 0..n {
                if j != k {
                    sum = sum + CDd::ONE / (z[k] - z[j]);
                }
            }
            let w = ratio / (CDd::ONE - ratio * sum);
            z[k] = z[k] - w;
            if w.norm() <= 1e-26 * z[k].norm().max(1.0) {
                done[k] = true;
            }
        }
        if done.iter().all(|d| *d) {
            converged = true;
            break;
        }
    }
    // Newton polish
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (pv, dpv) = horner(&coeffs, *zk);
            if dpv.norm() == 0.0 || pv.norm() == 0.0 {
                break;
            }
            *zk = *zk - pv / dpv;
        }
    }
    let mut roots: Vec<C64> = z.iter().map(|r| r.to_c64()).collect();
    // real parts at rounding level count as zero so conjugate pairs order by imaginary part
    let key = |r: &C64| if r.re.abs() <= 1e-20 * r.norm().max(1.0) { 0.0 } else { r.re };
    roots.sort_by(|a, b| key(a).total_cmp(&key(b)).then(a.im.total_cmp(&b.im)));
    let residuals = roots
        .iter()
        .map(|r| {
            let (pv, _) = horner(&coeffs, CDd::from_c64(*r));
            let scale: f64 = mags.iter().rev().fold(0.0, |acc, m| acc * r.norm() + m);
            pv.norm() / scale
        })
        .collect();
    Ok(ZeroSet { roots, residuals, curve_distances: None, curve: Curve::None, converged, iterations })
}

const SAMPLES: usize = 4096;

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Distance from a point to a curve: dense sampling of the parametrization
/// on both branches, then golden-section refinement around the best sample.
pub fn point_curve_distance(p: C64, curve: Curve) -> Result<f64> {
    match curve {
        Curve::None => Err(Error::Domain("no curve to measure against".into())),
        Curve::ImaginaryAxis => Ok(p.re.abs()),
        Curve::Fig2 | Curve::Fig4 => {
            let h = 2.0 * PI / SAMPLES as f64;
            let mut best = f64::INFINITY;
            for branch in [true, false] {
                let dist = |t: f64| (curve.point(t, branch) - p).norm();
                let (mut bi, mut bd) = (0, f64::INFINITY);
                for i in 0..SAMPLES {
                    let d = dist(i as f64 * h);
                    if d < bd {
                        bi = i;
                        bd = d;
                    }
                }
                let t = bi as f64 * h;
                best = best.min(bd).min(golden_min(dist, t - h, t + h));
            }
            Ok(best)
        }
    }
}

pub fn curve_distance(zeros: &ZeroSet, curve: Curve) -> Result<Vec<f64>> {
    zeros.roots.iter().map(|r| point_curve_distance(*r, curve)).collect()
}

/// Preset parameter families with known zero-distribution curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// alpha = 1/2, beta = -3n + 1
    One,
    /// alpha = -n + 1/2, beta = -2n + 1
    Two,
    /// alpha = n + 1, beta = -n - 1
    Four,
}

impl Figure {
    pub fn from_number(k: u32) -> Result<Figure> {
        match k {
            1 => Ok(Figure::One),
            2 => Ok(Figure::Two),
            4 => Ok(Figure::Four),
            _ => Err(Error::Parse(format!("no figure {k}; expected 1, 2 or 4"))),
        }
    }

    pub fn default_degree(self) -> usize {
        match self {
            Figure::Two => 25,
            _ => 30,
        }
    }

    pub fn parameters(self, n: usize) -> (Rational, Rational) {
        let n = n as i64;
        match self {
            Figure::One => (half(), rational(-3 * n + 1, 1)),
            Figure::Two => (rational(-2 * n + 1, 2), rational(-2 * n + 1, 1)),
            Figure::Four => (rational(n + 1, 1), rational(-n - 1, 1)),
        }
    }

    pub fn curve(self) -> Curve {
        match self {
            Figure::One => Curve::None,
            Figure::Two => Curve::Fig2,
            Figure::Four => Curve::Fig4,
        }
    }
}

/// Zeros of P_n^(alpha, beta) with residuals and, for a named curve, distances.
pub fn jacobi_zeros(n: usize, alpha: &Rational, beta: &Rational, curve: Curve, seed: u64) -> Result<ZeroSet> {
    let p = jacobi_coefficients(n, alpha, beta)?;
    let mut zs = find_roots(&p, seed)?;
    if curve != Curve::None {
        zs.curve_distances = Some(curve_distance(&zs, curve)?);
    }
    zs.curve = curve;
    Ok(zs)
}

/// Decimal form of a rational when it terminates, otherwise `p_q`.
pub fn rational_label(r: &Rational) -> String {
    let mut den = r.denom().clone();
    for p in [2u32, 5] {
        while (&den % p).is_zero() {
            den /= p;
        }
    }
    if den.is_one() {
        let mut digits = 0;
        let mut scaled = r.clone();
        while !scaled.is_integer() {
            scaled *= rational(10, 1);
            digits += 1;
        }
        let int = scaled.to_integer();
        if digits == 0 {
            return int.to_string();
        }
        let neg = int.is_negative();
        let s = int.abs().to_string();
        let s = format!("{s:0>width$}", width = digits + 1);
        let (whole, frac) = s.split_at(s.len() - digits);
        format!("{}{whole}.{frac}", if neg { "-" } else { "" })
    } else {
        format!("{}_{}", r.numer(), r.denom())
    }
}

pub fn dataset_file_name(n: usize, alpha: &Rational, beta: &Rational) -> String {
    format!("jacobi_n{n}_a{}_b{}.csv", rational_label(alpha), rational_label(beta))
}

/// CSV rows `re,im,residual,curve_distance`; the distance column is empty
/// when no curve is attached.
pub fn dataset_csv(zeros: &ZeroSet) -> String {
    let mut out = String::from("re,im,residual,curve_distance\n");
    for (i, r) in zeros.roots.iter().enumerate() {
        let d = zeros.curve_distances.as_ref().map(|d| crate::numfmt::g17(d[i])).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::numfmt::g17(r.re),
            crate::numfmt::g17(r.im),
            crate::numfmt::g17(zeros.residuals[i]),
            d
        ));
    }
    out
}
