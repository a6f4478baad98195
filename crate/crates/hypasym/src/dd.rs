//! Double-double arithmetic (about 32 significant digits) and its complex
//! extension, used where polynomial roots are too ill-conditioned for f64.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{rational_from_f64, rational_to_f64, Rational, C64};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Nearest double-double to an exact rational.
    pub fn from_rational(r: &Rational) -> Self {
        let hi = rational_to_f64(r);
        if !hi.is_finite() || r.is_zero() {
            return Dd::new(hi);
        }
        let rest = r - rational_from_f64(hi).expect("finite");
        let (hi, lo) = quick_two_sum(hi, rational_to_f64(&rest));
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqr(self) -> Self {
        self * self
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    pub fn new(re: Dd, im: Dd) -> Self {
        CDd { re, im }
    }

    pub fn from_c64(z: C64) -> Self {
        CDd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn from_real(x: Dd) -> Self {
        CDd { re: x, im: Dd::ZERO }
    }

    pub fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// |z| to double precision, which is all the stopping rules need.
    pub fn norm(self) -> f64 {
        self.to_c64().norm()
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn conj(self) -> Self {
        CDd { re: self.re, im: -self.im }
    }

    pub fn inv(self) -> Self {
        let d = self.norm_sqr();
        CDd { re: self.re / d, im: -self.im / d }
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, b: CDd) -> CDd {
        CDd { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

impl Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        // scale to keep the squared modulus in range
        let s = b.re.hi.abs().max(b.im.hi.abs());
        if s == 0.0 {
            return CDd::from_c64(C64::new(f64::NAN, f64::NAN));
        }
        let k = Dd::new(1.0 / s);
        let bs = CDd { re: b.re * k, im: b.im * k };
        let num = self * bs.conj();
        let den = bs.norm_sqr();
        CDd { re: num.re / den * k, im: num.im / den * k }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn third_is_accurate_beyond_double() {
        let third = Dd::ONE / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let exact = Dd::from_rational(&rational(1, 3));
        assert!((exact - third).to_f64().abs() < 1e-32);
    }

    #[test]
    fn complex_division_round_trips() {
        let a = CDd::from_c64(C64::new(1.25, -3.5));
        let b = CDd::from_c64(C64::new(-0.75, 2.0));
        let r = a / b * b - a;
        assert!(r.norm() < 1e-30);
    }
}
