//! Scalar types shared by the rest of the crate: complex doubles, exact
//! rationals, and a small field abstraction that lets series code run over
//! either one.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{NumOps, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type Rational = BigRational;

/// Coefficient field for truncated series and terminating sums.
pub trait Field: Clone + Debug + PartialEq + NumOps + Neg<Output = Self> + Zero + One {
    fn from_i64(k: i64) -> Self;

    /// Magnitude used for stopping rules; exact fields may return a rough value.
    fn magnitude(&self) -> f64;
}

impl Field for C64 {
    fn from_i64(k: i64) -> Self {
        C64::new(k as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for Rational {
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Returns `Some(n)` when `z` is exactly the non-positive integer `-n`.
pub fn nonpositive_integer(z: C64) -> Option<u64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() && z.re > -1e15 {
        Some((-z.re) as u64)
    } else {
        None
    }
}

pub fn is_integer(z: C64) -> bool {
    z.im == 0.0 && z.re == z.re.round() && z.re.abs() < 1e15
}

/// Distance from `z` to the nearest integer, measured in the complex plane.
pub fn integer_distance(z: C64) -> f64 {
    c(z.re - z.re.round(), z.im).norm()
}

/// Rising factorial (x)_n over any field.
pub fn pochhammer<F: Field>(x: &F, n: usize) -> F {
    let mut acc = F::one();
    let mut k = x.clone();
    for _ in 0..n {
        acc = acc * k.clone();
        k = k + F::one();
    }
    acc
}

/// log(1 + u) without cancellation for small `u`.
pub fn ln1p(u: C64) -> C64 {
    let x = u.re;
    let modulus = (2.0 * x + u.norm_sqr()).ln_1p() / 2.0;
    C64::new(modulus, u.im.atan2(1.0 + x))
}

/// exp(u) - 1 without cancellation for small `u`.
pub fn expm1(u: C64) -> C64 {
    if u.norm() < 0.5 {
        // series converges quickly for |u| < 1/2
        let mut term = u;
        let mut sum = u;
        for k in 2..40 {
            term = term * u / k as f64;
            sum += term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        u.exp() - 1.0
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn rational_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, an integer, or a plain decimal (with optional exponent)
/// into an exact rational. `0.3` becomes 3/10, not the nearest double.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|ch| ch.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Parses a complex number written as `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(re).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let parse_im = |txt: &str| -> Result<f64> {
        match txt {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => txt.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let r = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(c(r, parse_im(&body[i..])?))
        }
        None => Ok(c(0.0, parse_im(body)?)),
    }
}

/// Relative difference |x - y| / max(|y|, tiny).
pub fn rel_diff(x: C64, y: C64) -> f64 {
    (x - y).norm() / y.norm().max(f64::MIN_POSITIVE)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: C64) {
        let (s_re, c_re) = two_sum_step(self.sum.re, x.re);
        let (s_im, c_im) = two_sum_step(self.sum.im, x.im);
        self.sum = c(s_re, s_im);
        self.comp += c(c_re, c_im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

fn two_sum_step(s: f64, x: f64) -> (f64, f64) {
    let t = s + x;
    let err = if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
    (t, err)
}
