//! Truncated power series `sum_{k <= order} c_k t^k` over a coefficient field.
//!
//! Binary operations keep the smaller of the two orders. The transcendental
//! operations (`exp_unit`, `ln_unit`, `pow_unit`) use the classical
//! J. C. P. Miller recurrences, so they work unchanged over exact rationals;
//! the complex-only `exp`, `ln` and `powc` additionally peel off a nonzero
//! constant term.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Field, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<F> {
    coeffs: Vec<F>,
}

impl<F: Field> TruncatedSeries<F> {
    /// Builds a series of the given order; missing coefficients are zero and
    /// extra ones are dropped.
    pub fn new(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.resize(order + 1, F::zero());
        Self { coeffs }
    }

    pub fn constant(c0: F, order: usize) -> Self {
        Self::new(vec![c0], order)
    }

    /// The series `t`.
    pub fn variable(order: usize) -> Self {
        Self::new(vec![F::zero(), F::one()], order)
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> F) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Restricts to a lower order; asking for more terms than are known fails.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderMismatch { have: self.order(), need: order });
        }
        Ok(Self { coeffs: self.coeffs[..=order].to_vec() })
    }

    pub fn scale(&self, s: &F) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let s0 = self.coeffs[0].clone();
        if s0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = F::one() / s0;
        let n = self.order();
        let mut q: Vec<F> = Vec::with_capacity(n + 1);
        q.push(inv0.clone());
        for k in 1..=n {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: q })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    /// exp(s) for a series with zero constant term.
    pub fn exp_unit(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Domain("exp_unit needs a zero constant term".into()));
        }
        let n = self.order();
        let mut e: Vec<F> = Vec::with_capacity(n + 1);
        e.push(F::one());
        for k in 1..=n {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc + F::from_i64(j as i64) * self.coeffs[j].clone() * e[k - j].clone();
            }
            e.push(acc / F::from_i64(k as i64));
        }
        Ok(Self { coeffs: e })
    }

    /// ln(s) for a series with constant term one.
    pub fn ln_unit(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("ln_unit needs constant term 1".into()));
        }
        let n = self.order();
        let mut l: Vec<F> = vec![F::zero(); n + 1];
        for k in 1..=n {
            let mut acc = F::zero();
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc = acc + F::from_i64(j as i64) * lj.clone() * self.coeffs[k - j].clone();
            }
            l[k] = self.coeffs[k].clone() - acc / F::from_i64(k as i64);
        }
        Ok(Self { coeffs: l })
    }

    /// s^alpha for a series with constant term one.
    pub fn pow_unit(&self, alpha: &F) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain("pow_unit needs constant term 1".into()));
        }
        let n = self.order();
        let mut p: Vec<F> = Vec::with_capacity(n + 1);
        p.push(F::one());
        let alpha1 = alpha.clone() + F::one();
        for k in 1..=n {
            let mut acc = F::zero();
            for j in 1..=k {
                let w = alpha1.clone() * F::from_i64(j as i64) - F::from_i64(k as i64);
                acc = acc + w * self.coeffs[j].clone() * p[k - j].clone();
            }
            p.push(acc / F::from_i64(k as i64));
        }
        Ok(Self { coeffs: p })
    }

    /// Evaluates the truncated polynomial at `t`.
    pub fn eval(&self, t: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * t.clone() + c.clone())
    }
}

impl TruncatedSeries<C64> {
    pub fn exp(&self) -> Self {
        let c0 = self.coeffs[0];
        let mut shifted = self.clone();
        shifted.coeffs[0] = C64::zero();
        shifted.exp_unit().expect("constant term removed").scale(&c0.exp())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let mut l = self.scale(&c0.inv()).ln_unit()?;
        l.coeffs[0] = c0.ln();
        Ok(l)
    }

    /// s^alpha with the principal branch for the constant term.
    pub fn powc(&self, alpha: C64) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(self.scale(&c0.inv()).pow_unit(&alpha)?.scale(&c0.powc(alpha)))
    }
}

impl<F: Field> Add for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn add(self, rhs: Self) -> TruncatedSeries<F> {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
    }
}

impl<F: Field> Sub for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn sub(self, rhs: Self) -> TruncatedSeries<F> {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
    }
}

impl<F: Field> Mul for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn mul(self, rhs: Self) -> TruncatedSeries<F> {
        let n = self.order().min(rhs.order());
        TruncatedSeries::from_fn(n, |k| {
            (0..=k).fold(F::zero(), |acc, j| acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone())
        })
    }
}

impl<F: Field> Neg for &TruncatedSeries<F> {
    type Output = TruncatedSeries<F>;
    fn neg(self) -> TruncatedSeries<F> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| -x.clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, rational, Rational};

    fn exp_t(order: usize) -> TruncatedSeries<Rational> {
        let mut fact = rational(1, 1);
        TruncatedSeries::from_fn(order, |k| {
            if k > 0 {
                fact = fact.clone() / rational(k as i64, 1);
            }
            fact.clone()
        })
    }

    #[test]
    fn exp_of_t_is_exponential_series() {
        let e = TruncatedSeries::<Rational>::variable(8).exp_unit().unwrap();
        assert_eq!(e, exp_t(8));
    }

    #[test]
    fn log_of_one_minus_t() {
        let s = TruncatedSeries::new(vec![rational(1, 1), rational(-1, 1)], 5);
        let l = s.ln_unit().unwrap();
        let expected: Vec<Rational> =
            (0..=5).map(|k| if k == 0 { rational(0, 1) } else { rational(-1, k as i64) }).collect();
        assert_eq!(l.coeffs(), expected.as_slice());
    }

    #[test]
    fn sqrt_of_one_plus_t() {
        let s = TruncatedSeries::new(vec![rational(1, 1), rational(1, 1)], 4);
        let r = s.pow_unit(&rational(1, 2)).unwrap();
        let expected = [rational(1, 1), rational(1, 2), rational(-1, 8), rational(1, 16), rational(-5, 128)];
        assert_eq!(r.coeffs(), &expected);
    }

    #[test]
    fn order_propagates_to_minimum() {
        let a = TruncatedSeries::<Rational>::variable(3);
        let b = TruncatedSeries::<Rational>::variable(6);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
        assert!(matches!(a.truncate(5), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn complex_powc_peels_constant() {
        let s = TruncatedSeries::new(vec![c(4.0, 0.0), c(1.0, 0.0)], 3);
        let r = s.powc(c(0.5, 0.0)).unwrap();
        // sqrt(4 + t) = 2 + t/4 - t^2/64 + t^3/512
        let expected = [2.0, 0.25, -1.0 / 64.0, 1.0 / 512.0];
        for (got, want) in r.coeffs().iter().zip(expected) {
            assert!((got - c(want, 0.0)).norm() < 1e-15);
        }
        assert!(TruncatedSeries::<C64>::variable(3).recip().is_err());
    }
}
