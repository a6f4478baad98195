//! Transformation and connection formulas as data.
//!
//! Each rule lists, for every term it produces, the new parameters as an
//! integer affine map of (a, b, c) and the new argument. The numeric
//! coefficients live next to the map, and direction effects for the case
//! reducer are read off the same matrices, so the two cannot drift apart.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_ratio, rgamma};
use crate::reference::{eval_2f1, Params};
use crate::scalar::{nonpositive_integer, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    #[serde(rename = "swap")]
    Swap,
    #[serde(rename = "pfaff-a")]
    PfaffA,
    #[serde(rename = "pfaff-b")]
    PfaffB,
    #[serde(rename = "euler")]
    Euler,
    #[serde(rename = "conn-1mz")]
    Conn1mz,
    #[serde(rename = "conn-a4")]
    ConnA4,
    #[serde(rename = "conn-a5")]
    ConnA5,
    #[serde(rename = "conn-1oz")]
    Conn1oz,
    #[serde(rename = "conn-euler-1oz")]
    ConnEuler1oz,
    #[serde(rename = "quadratic")]
    Quadratic,
}

impl Rule {
    /// Rules available to the case reducer, in tie-break order.
    pub const REWRITES: [Rule; 9] = [
        Rule::Swap,
        Rule::PfaffA,
        Rule::PfaffB,
        Rule::Euler,
        Rule::Conn1mz,
        Rule::ConnA4,
        Rule::ConnA5,
        Rule::Conn1oz,
        Rule::ConnEuler1oz,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Swap => "swap",
            Rule::PfaffA => "pfaff-a",
            Rule::PfaffB => "pfaff-b",
            Rule::Euler => "euler",
            Rule::Conn1mz => "conn-1mz",
            Rule::ConnA4 => "conn-a4",
            Rule::ConnA5 => "conn-a5",
            Rule::Conn1oz => "conn-1oz",
            Rule::ConnEuler1oz => "conn-euler-1oz",
            Rule::Quadratic => "quadratic",
        }
    }

    pub fn from_id(id: &str) -> Option<Rule> {
        Rule::REWRITES.into_iter().chain([Rule::Quadratic]).find(|r| r.id() == id)
    }

    /// Parameter maps and arguments of the produced terms. The quadratic
    /// rule has half-integer coefficients and no integer shape.
    pub fn shapes(self) -> Vec<TermShape> {
        use Arg::*;
        let t = |m: [[i8; 3]; 3], k: [i8; 3], arg: Arg| TermShape { map: Affine { m, k }, arg };
        match self {
            Rule::Swap => vec![t([[0, 1, 0], [1, 0, 0], [0, 0, 1]], [0; 3], Z)],
            Rule::PfaffA => vec![t([[1, 0, 0], [0, -1, 1], [0, 0, 1]], [0; 3], ZOverZMinus1)],
            Rule::PfaffB => vec![t([[-1, 0, 1], [0, 1, 0], [0, 0, 1]], [0; 3], ZOverZMinus1)],
            Rule::Euler => vec![t([[-1, 0, 1], [0, -1, 1], [0, 0, 1]], [0; 3], Z)],
            Rule::Conn1mz => vec![
                t([[-1, 0, 0], [0, -1, 0], [0, 0, -1]], [1, 1, 2], Z),
                t([[1, 0, 0], [0, 1, 0], [1, 1, -1]], [0, 0, 1], OneMinusZ),
            ],
            Rule::ConnA4 => vec![
                t([[1, 0, 0], [1, 0, -1], [1, 1, -1]], [0, 1, 1], OneMinusInvZ),
                t([[-1, 0, 0], [-1, 0, 1], [-1, 1, 0]], [1, 0, 1], InvZ),
            ],
            Rule::ConnA5 => vec![
                t([[-1, 0, 0], [0, -1, 0], [0, 0, -1]], [1, 1, 2], Z),
                t([[-1, 0, 0], [-1, 0, 1], [-1, 1, 0]], [1, 0, 1], InvZ),
            ],
            Rule::Conn1oz => vec![
                t([[1, 0, 0], [1, 0, -1], [1, -1, 0]], [0, 1, 1], InvZ),
                t([[0, 1, 0], [0, 1, -1], [-1, 1, 0]], [0, 1, 1], InvZ),
            ],
            Rule::ConnEuler1oz => vec![
                t([[0, -1, 0], [0, -1, 1], [1, -1, 0]], [1, 0, 1], InvZ),
                t([[-1, 0, 0], [-1, 0, 1], [-1, 1, 0]], [1, 0, 1], InvZ),
            ],
            Rule::Quadratic => Vec::new(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// New argument of a produced term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arg {
    Z,
    ZOverZMinus1,
    OneMinusZ,
    InvZ,
    OneMinusInvZ,
}

impl Arg {
    pub fn apply(self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self {
            Arg::Z => z,
            Arg::ZOverZMinus1 => z / (z - one),
            Arg::OneMinusZ => one - z,
            Arg::InvZ => z.inv(),
            Arg::OneMinusInvZ => one - z.inv(),
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Arg::Z => "z",
            Arg::ZOverZMinus1 => "z/(z-1)",
            Arg::OneMinusZ => "1-z",
            Arg::InvZ => "1/z",
            Arg::OneMinusInvZ => "1-1/z",
        }
    }
}

/// (a', b', c') = m (a, b, c) + k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub m: [[i8; 3]; 3],
    pub k: [i8; 3],
}

impl Affine {
    pub fn apply(&self, p: &Params) -> Params {
        let v = [p.a, p.b, p.c];
        let row = |i: usize| (0..3).fold(C64::new(self.k[i] as f64, 0.0), |acc, j| acc + v[j] * self.m[i][j] as f64);
        Params::new(row(0), row(1), row(2))
    }

    /// Linear part acting on a direction vector.
    pub fn direction(&self, d: [i32; 3]) -> [i32; 3] {
        let row = |i: usize| (0..3).map(|j| self.m[i][j] as i32 * d[j]).sum();
        [row(0), row(1), row(2)]
    }

    /// Human-readable parameter combination such as `(1-a, c-a, b-a+1)`.
    pub fn describe(&self) -> String {
        let names = ["a", "b", "c"];
        let entry = |i: usize| {
            let row = self.m[i];
            let mut s = String::new();
            let k = self.k[i];
            let has_positive = row.iter().any(|&x| x > 0);
            if !has_positive && k > 0 {
                s.push_str(&k.to_string());
            }
            let positives = (0..3).filter(|&j| row[j] > 0);
            let negatives = (0..3).filter(|&j| row[j] < 0);
            for j in positives.chain(negatives) {
                let coef = row[j];
                s.push_str(if coef < 0 {
                    "-"
                } else if s.is_empty() {
                    ""
                } else {
                    "+"
                });
                if coef.abs() != 1 {
                    s.push_str(&coef.abs().to_string());
                }
                s.push_str(names[j]);
            }
            if k < 0 || (k > 0 && has_positive) {
                s.push_str(&format!("{k:+}"));
            }
            if s.is_empty() {
                s.push('0');
            }
            s
        };
        format!("({}, {}, {})", entry(0), entry(1), entry(2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermShape {
    pub map: Affine,
    pub arg: Arg,
}

/// One term coefficient * F(params; z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub coefficient: C64,
    pub params: Params,
    pub z: C64,
}

/// F(p; z) = prefactor * sum of terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transformation {
    pub prefactor: C64,
    pub terms: Vec<Term>,
}

impl Transformation {
    /// Value of the right-hand side, each term by the reference evaluator.
    /// Terms with a vanishing coefficient are skipped.
    pub fn evaluate(&self) -> Result<C64> {
        let mut sum = C64::new(0.0, 0.0);
        for term in &self.terms {
            if term.coefficient != C64::new(0.0, 0.0) {
                sum += term.coefficient * eval_2f1(&term.params, term.z)?.value;
            }
        }
        Ok(self.prefactor * sum)
    }
}

/// Gamma(num...) / Gamma(den...), pairing factors of similar size so large
/// parameters do not cost accuracy. Numerator poles are errors; denominator
/// poles make the quotient vanish.
pub fn gamma_quotient(num: &[C64], den: &[C64]) -> Result<C64> {
    for x in num {
        if let Some(n) = nonpositive_integer(*x) {
            return Err(Error::Pole(format!("{}", -(n as f64))));
        }
    }
    if den.iter().any(|x| nonpositive_integer(*x).is_some()) {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut rest: Vec<C64> = den.to_vec();
    let mut value = C64::new(1.0, 0.0);
    for x in num {
        let best = rest
            .iter()
            .enumerate()
            .min_by(|(_, u), (_, v)| (*x - **u).norm().total_cmp(&(*x - **v).norm()))
            .map(|(i, _)| i);
        match best {
            Some(i) => {
                let y = rest.swap_remove(i);
                value *= gamma_ratio(*x, y)?;
            }
            None => value *= gamma(*x)?,
        }
    }
    for y in rest {
        value *= rgamma(y);
    }
    Ok(value)
}

fn phase(s: f64, x: C64) -> C64 {
    (C64::new(0.0, s * PI) * x).exp()
}

fn not_applicable(rule: Rule, reason: impl Into<String>) -> Error {
    Error::RuleNotApplicable { rule: rule.id().to_string(), reason: reason.into() }
}

/// Rewrites F(p; z) with the given rule.
pub fn apply_transformation(rule: Rule, p: &Params, z: C64) -> Result<Transformation> {
    let one = C64::new(1.0, 0.0);
    let (a, b, c) = (p.a, p.b, p.c);
    if rule == Rule::Quadratic {
        if c != b * 2.0 {
            return Err(not_applicable(rule, "needs c = 2b"));
        }
        let w = z * z / (z * 4.0 - 4.0);
        let term = Term { coefficient: one, params: Params::new(a / 2.0, b - a / 2.0, b + 0.5), z: w };
        return Ok(Transformation { prefactor: (one - z).powc(-a / 2.0), terms: vec![term] });
    }
    let shapes = rule.shapes();
    for shape in &shapes {
        let w = shape.arg.apply(z);
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(not_applicable(rule, format!("argument {} undefined at z = {z}", shape.arg.describe())));
        }
        if shape.arg != Arg::Z && w.im == 0.0 && w.re >= 1.0 {
            return Err(not_applicable(rule, format!("{} = {w} lies on the branch cut", shape.arg.describe())));
        }
    }
    let s = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let w1 = one - z;
    let (prefactor, coefs): (C64, Vec<C64>) = match rule {
        Rule::Swap => (one, vec![one]),
        Rule::PfaffA => (w1.powc(-a), vec![one]),
        Rule::PfaffB => (w1.powc(-b), vec![one]),
        Rule::Euler => (w1.powc(c - a - b), vec![one]),
        Rule::Conn1mz => {
            let k1 = -gamma_quotient(&[c - 1.0, a - c + 1.0, b - c + 1.0], &[a, b, one - c])?
                * z.powc(one - c)
                * w1.powc(c - a - b);
            let k2 = gamma_quotient(&[b - c + 1.0, a - c + 1.0], &[a + b - c + 1.0, one - c])?;
            (one, vec![k1, k2])
        }
        Rule::ConnA4 => {
            let k1 = phase(s, a) * gamma_quotient(&[c, b - c + 1.0], &[a + b - c + 1.0, c - a])? * z.powc(-a);
            let k2 = gamma_quotient(&[c, b - c + 1.0], &[a, b - a + 1.0])? * z.powc(a - c) * w1.powc(c - a - b);
            (one, vec![k1, k2])
        }
        Rule::ConnA5 => {
            let k1 = phase(s, c)
                * gamma_quotient(&[c - 1.0, b - c + 1.0, one - a], &[b, c - a, one - c])?
                * z.powc(one - c)
                * w1.powc(c - a - b);
            let k2 = phase(s, c - a)
                * gamma_quotient(&[one - a, b - c + 1.0], &[one - c, b - a + 1.0])?
                * z.powc(a - c)
                * w1.powc(c - a - b);
            (one, vec![k1, k2])
        }
        Rule::Conn1oz => {
            let k1 = phase(s, a) * gamma_quotient(&[c, b - a], &[b, c - a])? * z.powc(-a);
            let k2 = phase(s, b) * gamma_quotient(&[c, a - b], &[a, c - b])? * z.powc(-b);
            (one, vec![k1, k2])
        }
        Rule::ConnEuler1oz => {
            let common = w1.powc(c - a - b);
            let k1 = phase(s, c - b) * gamma_quotient(&[c, b - a], &[b, c - a])? * z.powc(b - c) * common;
            let k2 = phase(s, c - a) * gamma_quotient(&[c, a - b], &[a, c - b])? * z.powc(a - c) * common;
            (one, vec![k1, k2])
        }
        Rule::Quadratic => unreachable!("handled above"),
    };
    let terms = shapes
        .iter()
        .zip(coefs)
        .map(|(shape, coefficient)| Term { coefficient, params: shape.map.apply(p), z: shape.arg.apply(z) })
        .collect();
    Ok(Transformation { prefactor, terms })
}

/// Direction vectors of the terms a rule produces.
pub fn direction_effect(rule: Rule, d: [i32; 3]) -> Vec<[i32; 3]> {
    rule.shapes().iter().map(|s| s.map.direction(d)).collect()
}
