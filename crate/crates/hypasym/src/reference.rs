//! Reference evaluation of the Gauss function F(a, b; c; z).
//!
//! Every region of the cut plane is mapped by a Pfaff, Euler or connection
//! formula to series whose argument has modulus at most 0.75. A small lens
//! around e^{+-i pi/3} escapes all of those maps; there the differential
//! equation is integrated by Taylor steps from |z| = 1/2.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma_ratio;
use crate::scalar::{is_integer, nonpositive_integer, pochhammer, CompensatedSum, Field, C64};

const EPS: f64 = 2.2e-16;
const MAX_TERMS: usize = 20_000;
const DIRECT_RADIUS: f64 = 0.5;
const SERIES_LIMIT: f64 = 0.75;
const LARGE_Z: f64 = 1.5;
/// Relative error estimate above which alternative regions are tried.
const ACCEPTABLE: f64 = 1e-13;

/// Upper and lower parameters of a Gauss function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl Params {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        Params { a, b, c }
    }

    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Params::new(C64::new(a, 0.0), C64::new(b, 0.0), C64::new(c, 0.0))
    }

    /// Index n at which the series terminates, if a or b equals -n.
    pub fn termination(&self) -> Option<u64> {
        match (nonpositive_integer(self.a), nonpositive_integer(self.b)) {
            (Some(m), Some(n)) => Some(m.min(n)),
            (m, n) => m.or(n),
        }
    }

    /// Fails when c hits a nonpositive integer before the series stops.
    pub fn check_admissible(&self) -> Result<()> {
        if let Some(m) = nonpositive_integer(self.c) {
            match self.termination() {
                Some(n) if n <= m => {}
                _ => return Err(Error::Inadmissible(format!("c = {} is a nonpositive integer", self.c))),
            }
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {})", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DirectSeries,
    Pfaff,
    Euler,
    #[serde(rename = "connection-1mz")]
    Connection1mz,
    #[serde(rename = "connection-1oz")]
    Connection1oz,
    Terminating,
    GaussValue,
    TaylorContinuation,
    PfaffFixedZ,
    Watson,
    UniformU,
    TwoPoint,
    BcaseErfc,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::DirectSeries => "direct-series",
            Method::Pfaff => "pfaff",
            Method::Euler => "euler",
            Method::Connection1mz => "connection-1mz",
            Method::Connection1oz => "connection-1oz",
            Method::Terminating => "terminating",
            Method::GaussValue => "gauss-value",
            Method::TaylorContinuation => "taylor-continuation",
            Method::PfaffFixedZ => "pfaff-fixed-z",
            Method::Watson => "watson",
            Method::UniformU => "uniform-u",
            Method::TwoPoint => "two-point",
            Method::BcaseErfc => "bcase-erfc",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Method> {
        use Method::*;
        [DirectSeries, Pfaff, Euler, Connection1mz, Connection1oz, Terminating, GaussValue, TaylorContinuation]
            .into_iter()
            .find(|m| m.tag() == tag)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: C64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl EvalResult {
    pub fn rel_error_estimate(&self) -> f64 {
        self.abs_error_estimate / self.value.norm().max(f64::MIN_POSITIVE)
    }
}

/// Raw partial sum of the Gauss series with its error bookkeeping.
#[derive(Debug, Clone, Copy)]
struct RawSum {
    value: C64,
    /// truncation error estimate (ten times the first omitted term)
    tail: f64,
    /// rounding error estimate
    rounding: f64,
    terms: usize,
}

impl RawSum {
    fn error(&self) -> f64 {
        self.tail + self.rounding
    }
}

fn raw_series(p: &Params, z: C64) -> Result<RawSum> {
    p.check_admissible()?;
    let mut acc = CompensatedSum::new();
    let mut term = C64::new(1.0, 0.0);
    acc.add(term);
    let mut rounding = EPS;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let num = (p.a + kf) * (p.b + kf);
        if num == C64::new(0.0, 0.0) {
            return Ok(RawSum { value: acc.value(), tail: 0.0, rounding, terms: k + 1 });
        }
        term = term * num / ((p.c + kf) * (kf + 1.0)) * z;
        acc.add(term);
        rounding += EPS * (kf + 2.0) * term.norm();
        let sum = acc.value().norm();
        if term.norm() <= EPS * sum {
            small += 1;
            if small == 3 {
                let next = term * (p.a + kf + 1.0) * (p.b + kf + 1.0) / ((p.c + kf + 1.0) * (kf + 2.0)) * z;
                return Ok(RawSum { value: acc.value(), tail: 10.0 * next.norm(), rounding, terms: k + 2 });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(MAX_TERMS))
}

fn on_branch_cut(z: C64) -> bool {
    z.im == 0.0 && z.re >= 1.0
}

/// Plain Gauss series, for |z| <= 0.75 or a terminating series.
pub fn gauss_series(p: &Params, z: C64) -> Result<EvalResult> {
    let terminating = p.termination().is_some();
    if !terminating && z.norm() > SERIES_LIMIT {
        return Err(Error::Domain(format!("|z| = {} exceeds {SERIES_LIMIT}", z.norm())));
    }
    let s = raw_series(p, z)?;
    Ok(EvalResult {
        value: s.value,
        abs_error_estimate: s.error(),
        terms_used: s.terms,
        method: if terminating { Method::Terminating } else { Method::DirectSeries },
        warning: None,
    })
}

/// Field operations needed by exact terminating sums, plus integer detection.
pub trait TerminatingField: Field {
    fn nonpositive_integer(&self) -> Option<u64>;
}

impl TerminatingField for C64 {
    fn nonpositive_integer(&self) -> Option<u64> {
        nonpositive_integer(*self)
    }
}

impl TerminatingField for crate::scalar::Rational {
    fn nonpositive_integer(&self) -> Option<u64> {
        use num_traits::{Signed, ToPrimitive};
        if self.is_integer() && !self.is_positive() {
            (-self.to_integer()).to_u64()
        } else {
            None
        }
    }
}

/// Terminating generalized hypergeometric sum pFq(upper; lower; z), exact
/// when `F` is the rational field.
pub fn terminating_pfq<F: TerminatingField>(upper: &[F], lower: &[F], z: &F) -> Result<F> {
    let n = termination_index(upper)?;
    check_lower(lower, n)?;
    let mut term = F::one();
    let mut sum = F::one();
    for k in 0..n {
        let kf = F::from_i64(k as i64);
        let mut num = F::one();
        for u in upper {
            num = num * (u.clone() + kf.clone());
        }
        let mut den = F::from_i64(k as i64 + 1);
        for l in lower {
            den = den * (l.clone() + kf.clone());
        }
        term = term * num / den * z.clone();
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Complex terminating pFq with compensated summation.
pub fn terminating_pfq_compensated(upper: &[C64], lower: &[C64], z: C64) -> Result<C64> {
    let n = termination_index(upper)?;
    check_lower(lower, n)?;
    let mut acc = CompensatedSum::new();
    let mut term = C64::new(1.0, 0.0);
    acc.add(term);
    for k in 0..n {
        let kf = k as f64;
        let num = upper.iter().fold(C64::new(1.0, 0.0), |m, u| m * (u + kf));
        let den = lower.iter().fold(C64::new(kf + 1.0, 0.0), |m, l| m * (l + kf));
        term = term * num / den * z;
        acc.add(term);
    }
    Ok(acc.value())
}

fn termination_index<F: TerminatingField>(upper: &[F]) -> Result<u64> {
    upper
        .iter()
        .filter_map(|u| u.nonpositive_integer())
        .min()
        .ok_or_else(|| Error::Inadmissible("no upper parameter is a nonpositive integer".into()))
}

fn check_lower<F: TerminatingField>(lower: &[F], n: u64) -> Result<()> {
    for l in lower {
        if let Some(m) = l.nonpositive_integer() {
            if m < n {
                return Err(Error::Inadmissible(format!("lower parameter -{m} hits zero before term {n}")));
            }
        }
    }
    Ok(())
}

/// Saalschutz's closed form (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n) for
/// 3F2(-n, a, b; c, 1+a+b-c-n; 1).
pub fn saalschutz<F: Field>(n: usize, a: &F, b: &F, c: &F) -> F {
    let num = pochhammer(&(c.clone() - a.clone()), n) * pochhammer(&(c.clone() - b.clone()), n);
    let den = pochhammer(c, n) * pochhammer(&(c.clone() - a.clone() - b.clone()), n);
    num / den
}

/// Gauss's value F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
pub fn gauss_at_one(p: &Params) -> Result<EvalResult> {
    p.check_admissible()?;
    if let Some(n) = p.termination() {
        let s = raw_series(p, C64::new(1.0, 0.0))?;
        debug_assert!(s.terms as u64 <= n + 1);
        return Ok(EvalResult {
            value: s.value,
            abs_error_estimate: s.error(),
            terms_used: s.terms,
            method: Method::Terminating,
            warning: None,
        });
    }
    let s = p.c - p.a - p.b;
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("series diverges at z = 1: Re(c-a-b) = {}", s.re)));
    }
    let value = gamma_ratio(p.c, p.c - p.a)? * gamma_ratio(s, p.c - p.b)?;
    Ok(EvalResult {
        value,
        abs_error_estimate: 1e-14 * value.norm(),
        terms_used: 0,
        method: Method::GaussValue,
        warning: None,
    })
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn combine(parts: &[(C64, RawSum)], terms: usize, method: Method) -> EvalResult {
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut scale = 0.0;
    for (coef, s) in parts {
        let t = coef * s.value;
        value += t;
        err += coef.norm() * s.error();
        scale += t.norm();
    }
    // gamma-prefactor rounding and cancellation between the parts
    err += 1e-15 * scale;
    EvalResult { value, abs_error_estimate: err, terms_used: terms, method, warning: None }
}

fn direct(p: &Params, z: C64) -> Result<EvalResult> {
    let s = raw_series(p, z)?;
    Ok(combine(&[(one(), s)], s.terms, Method::DirectSeries))
}

fn pfaff(p: &Params, z: C64) -> Result<EvalResult> {
    let w = z / (z - 1.0);
    let s = raw_series(&Params::new(p.a, p.c - p.b, p.c), w)?;
    let pre = (one() - z).powc(-p.a);
    Ok(combine(&[(pre, s)], s.terms, Method::Pfaff))
}

fn euler(p: &Params, z: C64) -> Result<EvalResult> {
    let s = raw_series(&Params::new(p.c - p.a, p.c - p.b, p.c), z)?;
    let pre = (one() - z).powc(p.c - p.a - p.b);
    Ok(combine(&[(pre, s)], s.terms, Method::Euler))
}

fn connection_1mz(p: &Params, z: C64) -> Result<EvalResult> {
    let (a, b, c) = (p.a, p.b, p.c);
    let s = c - a - b;
    if is_integer(s) {
        return Err(Error::Degenerate(format!("c - a - b = {s} is an integer")));
    }
    let w = one() - z;
    let k1 = gamma_ratio(c, c - a)? * gamma_ratio(s, c - b)?;
    let k2 = gamma_ratio(c, a)? * gamma_ratio(-s, b)? * w.powc(s);
    let s1 = raw_series(&Params::new(a, b, one() - s), w)?;
    let s2 = raw_series(&Params::new(c - a, c - b, s + 1.0), w)?;
    Ok(combine(&[(k1, s1), (k2, s2)], s1.terms + s2.terms, Method::Connection1mz))
}

fn connection_1oz(p: &Params, z: C64) -> Result<EvalResult> {
    let (a, b, c) = (p.a, p.b, p.c);
    let d = a - b;
    if is_integer(d) {
        return Err(Error::Degenerate(format!("a - b = {d} is an integer")));
    }
    let w = z.inv();
    let mz = -z;
    let k1 = gamma_ratio(c, c - a)? * gamma_ratio(-d, b)? * mz.powc(-a);
    let k2 = gamma_ratio(c, c - b)? * gamma_ratio(d, a)? * mz.powc(-b);
    let s1 = raw_series(&Params::new(a, a - c + 1.0, d + 1.0), w)?;
    let s2 = raw_series(&Params::new(b, b - c + 1.0, one() - d), w)?;
    Ok(combine(&[(k1, s1), (k2, s2)], s1.terms + s2.terms, Method::Connection1oz))
}

/// Integrates the hypergeometric equation along the ray from 0.5 z/|z| to z.
fn taylor_continuation(p: &Params, z: C64) -> Result<EvalResult> {
    let (a, b, c) = (p.a, p.b, p.c);
    let start = z / z.norm() * 0.5;
    let f0 = raw_series(p, start)?;
    let d0 = raw_series(&Params::new(a + 1.0, b + 1.0, c + 1.0), start)?;
    let mut w = f0.value;
    let mut dw = d0.value * a * b / c;
    let mut at = start;
    let mut terms = f0.terms + d0.terms;
    let mut err = f0.error() + d0.error() * (a * b / c).norm();
    while (z - at).norm() > 0.0 {
        let radius = at.norm().min((one() - at).norm());
        let mut h = z - at;
        if h.norm() > 0.5 * radius {
            h = h / h.norm() * (0.5 * radius);
        }
        let denom = at * (one() - at);
        let lin = c - (a + b + 1.0) * at;
        let slope = one() - at * 2.0;
        // coefficients w_k of the local expansion in t = zeta - at
        let (mut wk, mut wk1) = (w, dw);
        let mut val = CompensatedSum::new();
        let mut der = CompensatedSum::new();
        val.add(wk);
        val.add(wk1 * h);
        der.add(wk1);
        let mut hp = h; // h^{k+1}
        let mut small = 0;
        let mut k = 0usize;
        loop {
            let kf = k as f64;
            let wk2 = -(((slope * kf + lin) * (kf + 1.0)) * wk1 - (a + kf) * (b + kf) * wk)
                / (denom * ((kf + 2.0) * (kf + 1.0)));
            let dterm = wk2 * hp * (kf + 2.0);
            hp *= h;
            let vterm = wk2 * hp;
            val.add(vterm);
            der.add(dterm);
            if vterm.norm() <= EPS * val.value().norm() && dterm.norm() <= EPS * der.value().norm() {
                small += 1;
                if small == 3 {
                    break;
                }
            } else {
                small = 0;
            }
            wk = wk1;
            wk1 = wk2;
            k += 1;
            if k > 2000 {
                return Err(Error::NoConvergence(k));
            }
        }
        terms += k + 2;
        w = val.value();
        dw = der.value();
        err += 4.0 * EPS * (k as f64) * w.norm();
        at = if (z - at - h).norm() < 1e-15 * z.norm() { z } else { at + h };
    }
    Ok(EvalResult {
        value: w,
        abs_error_estimate: err,
        terms_used: terms,
        method: Method::TaylorContinuation,
        warning: None,
    })
}

fn run(method: Method, p: &Params, z: C64) -> Result<EvalResult> {
    match method {
        Method::DirectSeries => direct(p, z),
        Method::Pfaff => pfaff(p, z),
        Method::Euler => euler(p, z),
        Method::Connection1mz => connection_1mz(p, z),
        Method::Connection1oz => connection_1oz(p, z),
        Method::TaylorContinuation => taylor_continuation(p, z),
        Method::Terminating => gauss_series(p, z),
        Method::GaussValue => gauss_at_one(p),
        other => Err(Error::Domain(format!("{other} is not a reference method"))),
    }
}

/// Series argument modulus each region formula would use at `z`.
fn region_moduli(z: C64) -> [(Method, f64); 4] {
    [
        (Method::DirectSeries, z.norm()),
        (Method::Pfaff, (z / (z - 1.0)).norm()),
        (Method::Connection1mz, (one() - z).norm()),
        (Method::Connection1oz, z.inv().norm()),
    ]
}

fn primary_method(z: C64) -> Method {
    let w = (z / (z - 1.0)).norm();
    if z.norm() <= DIRECT_RADIUS {
        Method::DirectSeries
    } else if w <= DIRECT_RADIUS || (z.re < 0.0 && z.norm() <= LARGE_Z && w <= SERIES_LIMIT) {
        Method::Pfaff
    } else if (one() - z).norm() <= DIRECT_RADIUS {
        Method::Connection1mz
    } else if z.norm() > LARGE_Z {
        Method::Connection1oz
    } else {
        region_moduli(z)
            .into_iter()
            .filter(|(_, m)| *m <= SERIES_LIMIT)
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(m, _)| m)
            .unwrap_or(Method::TaylorContinuation)
    }
}

/// Region-dispatched evaluation of F(a, b; c; z) on the principal branch.
///
/// If the primary formula is degenerate or its error estimate is poor
/// (typically cancellation between two connection terms at large
/// parameters), the other admissible regions are tried and the one with the
/// smallest error estimate wins.
pub fn eval_2f1(p: &Params, z: C64) -> Result<EvalResult> {
    p.check_admissible()?;
    if p.termination().is_some() {
        return gauss_series(p, z);
    }
    if on_branch_cut(z) {
        return Err(Error::BranchCut);
    }
    if z == C64::new(0.0, 0.0) {
        return Ok(EvalResult {
            value: one(),
            abs_error_estimate: 0.0,
            terms_used: 1,
            method: Method::DirectSeries,
            warning: None,
        });
    }
    if nonpositive_integer(p.c - p.a).is_some() || nonpositive_integer(p.c - p.b).is_some() {
        // Euler's transformation leaves a polynomial
        return euler(p, z);
    }
    let primary = primary_method(z);
    let first = run(primary, p, z);
    if let Ok(r) = &first {
        if r.rel_error_estimate() <= ACCEPTABLE {
            return first;
        }
    }
    let mut best = first.clone().ok();
    for (m, modulus) in region_moduli(z) {
        if m == primary || modulus > SERIES_LIMIT {
            continue;
        }
        if let Ok(r) = run(m, p, z) {
            if best.as_ref().is_none_or(|b| r.abs_error_estimate < b.abs_error_estimate) {
                best = Some(r);
            }
        }
    }
    match best {
        Some(r) => Ok(r),
        None => first,
    }
}

/// Evaluation with a caller-chosen method.
pub fn eval_2f1_with(p: &Params, z: C64, method: Method) -> Result<EvalResult> {
    p.check_admissible()?;
    if on_branch_cut(z) && p.termination().is_none() && method != Method::GaussValue {
        return Err(Error::BranchCut);
    }
    if method == Method::DirectSeries && z.norm() >= 1.0 && p.termination().is_none() {
        return Err(Error::Domain(format!("direct series diverges at |z| = {}", z.norm())));
    }
    run(method, p, z)
}
