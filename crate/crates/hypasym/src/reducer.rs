//! Reduction of large-parameter directions (e1, e2, e3) to the four
//! canonical cases by rewriting with transformation and connection rules.
//!
//! The search runs over all directions with entries in [-2, 2] and finds,
//! for each, the cheapest rewrite tree: fewest rule applications, then
//! fewest leaves, then the lexicographically smallest rule sequence in
//! preorder (rules ordered as in [`Rule::REWRITES`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reference::{eval_2f1, Params};
use crate::scalar::C64;
use crate::transform::{apply_transformation, direction_effect, Rule};

pub type Direction = [i32; 3];

const BOUND: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    A,
    B,
    C,
    D,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::A, Case::B, Case::C, Case::D];

    pub fn direction(self) -> Direction {
        match self {
            Case::A => [0, 0, 1],
            Case::B => [0, -1, 1],
            Case::C => [1, -1, 0],
            Case::D => [1, 2, 0],
        }
    }

    pub fn of(d: Direction) -> Option<Case> {
        Case::ALL.into_iter().find(|c| c.direction() == d)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub id: usize,
    pub dir: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    pub node: usize,
    pub children: Vec<usize>,
    /// Parameter combination and argument of each child, e.g. `(a, c-b, c) at z/(z-1)`.
    pub derivation: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leaf {
    pub node: usize,
    pub case: Case,
}

/// A rewrite tree. Connection rules split a node in two, so this is a DAG
/// rather than a list; nodes are numbered in preorder with the root at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteChain {
    pub root: Direction,
    pub nodes: Vec<Node>,
    pub steps: Vec<Step>,
    pub leaves: Vec<Leaf>,
}

impl RewriteChain {
    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }

    fn step_at(&self, node: usize) -> Option<&Step> {
        self.steps.iter().find(|s| s.node == node)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    steps: usize,
    leaves: usize,
    sequence: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Best {
    cost: Cost,
    rule: Option<Rule>,
}

fn in_domain(d: &Direction) -> bool {
    d.iter().all(|x| x.abs() <= BOUND) && d.iter().any(|&x| x != 0)
}

fn all_directions() -> Vec<Direction> {
    let mut out = Vec::new();
    for e1 in -BOUND..=BOUND {
        for e2 in -BOUND..=BOUND {
            for e3 in -BOUND..=BOUND {
                let d = [e1, e2, e3];
                if in_domain(&d) {
                    out.push(d);
                }
            }
        }
    }
    out
}

/// Fixed-point iteration of the min-cost recursion. Every rule application
/// costs one step, so no optimal tree revisits a direction on a path and
/// the iteration settles after at most as many sweeps as the deepest tree.
fn solve() -> BTreeMap<Direction, Best> {
    let mut best: BTreeMap<Direction, Best> = BTreeMap::new();
    for case in Case::ALL {
        best.insert(case.direction(), Best { cost: Cost { steps: 0, leaves: 1, sequence: Vec::new() }, rule: None });
    }
    let dirs = all_directions();
    loop {
        let mut changed = false;
        for d in &dirs {
            if Case::of(*d).is_some() {
                continue;
            }
            for (idx, rule) in Rule::REWRITES.into_iter().enumerate() {
                let children = direction_effect(rule, *d);
                if !children.iter().all(in_domain) {
                    continue;
                }
                let Some(costs) = children.iter().map(|c| best.get(c).map(|b| &b.cost)).collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                let mut sequence = vec![idx];
                for c in &costs {
                    sequence.extend_from_slice(&c.sequence);
                }
                let cost = Cost {
                    steps: 1 + costs.iter().map(|c| c.steps).sum::<usize>(),
                    leaves: costs.iter().map(|c| c.leaves).sum(),
                    sequence,
                };
                if best.get(d).is_none_or(|b| cost < b.cost) {
                    best.insert(*d, Best { cost, rule: Some(rule) });
                    changed = true;
                }
            }
        }
        if !changed {
            return best;
        }
    }
}

fn table() -> &'static BTreeMap<Direction, Best> {
    static TABLE: OnceLock<BTreeMap<Direction, Best>> = OnceLock::new();
    TABLE.get_or_init(solve)
}

fn build(d: Direction, table: &BTreeMap<Direction, Best>, chain: &mut RewriteChain) -> usize {
    let id = chain.nodes.len();
    chain.nodes.push(Node { id, dir: d });
    match table[&d].rule {
        None => {
            chain.leaves.push(Leaf { node: id, case: Case::of(d).expect("leaf is canonical") });
        }
        Some(rule) => {
            let step_index = chain.steps.len();
            let derivation =
                rule.shapes().iter().map(|s| format!("{} at {}", s.map.describe(), s.arg.describe())).collect();
            chain.steps.push(Step { rule, node: id, children: Vec::new(), derivation });
            let children: Vec<usize> = direction_effect(rule, d).into_iter().map(|c| build(c, table, chain)).collect();
            chain.steps[step_index].children = children;
        }
    }
    id
}

/// Canonical case of a direction and the rewrite tree that reaches it.
pub fn classify(d: Direction) -> Result<(Case, RewriteChain)> {
    if d == [0, 0, 0] {
        return Err(Error::Domain("direction (0,0,0) has no large parameter".into()));
    }
    let table = table();
    if !table.contains_key(&d) {
        return Err(Error::NoChain(format!("{d:?}")));
    }
    let mut chain = RewriteChain { root: d, nodes: Vec::new(), steps: Vec::new(), leaves: Vec::new() };
    build(d, table, &mut chain);
    let case = chain.leaves[0].case;
    Ok((case, chain))
}

/// The 26 nonzero directions with entries in {-1, 0, 1}.
pub fn unit_directions() -> Vec<Direction> {
    all_directions().into_iter().filter(|d| d.iter().all(|x| x.abs() <= 1)).collect()
}

fn eval_node(chain: &RewriteChain, node: usize, p: &Params, z: C64) -> Result<C64> {
    match chain.step_at(node) {
        None => eval_2f1(p, z).map(|r| r.value).map_err(|e| match e {
            Error::Pole(_) | Error::Degenerate(_) | Error::BranchCut | Error::NoConvergence(_) | Error::Domain(_) => {
                Error::Domain(format!("leaf F{p} at z = {z} unevaluable: {e}"))
            }
            other => other,
        }),
        Some(step) => {
            let t = apply_transformation(step.rule, p, z).map_err(|e| match e {
                Error::Pole(at) => Error::Pole(format!("{at} in a {} coefficient", step.rule)),
                other => other,
            })?;
            let mut sum = C64::new(0.0, 0.0);
            for (term, &child) in t.terms.iter().zip(&step.children) {
                if term.coefficient == C64::new(0.0, 0.0) {
                    continue;
                }
                sum += term.coefficient * eval_node(chain, child, &term.params, term.z)?;
            }
            Ok(t.prefactor * sum)
        }
    }
}

/// Relative discrepancy between F(p + lambda d; z) evaluated directly and
/// through the rewrite tree.
pub fn certify_chain(chain: &RewriteChain, p: &Params, z: C64, lambda: f64) -> Result<f64> {
    let d = chain.root;
    let shifted = Params::new(p.a + lambda * d[0] as f64, p.b + lambda * d[1] as f64, p.c + lambda * d[2] as f64);
    let direct = eval_2f1(&shifted, z)?.value;
    let expanded = eval_node(chain, 0, &shifted, z)?;
    Ok((expanded - direct).norm() / direct.norm().max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c, re};

    #[test]
    fn canonical_directions_need_no_steps() {
        for case in Case::ALL {
            let (got, chain) = classify(case.direction()).unwrap();
            assert_eq!(got, case);
            assert!(chain.steps.is_empty());
        }
    }

    #[test]
    fn known_reductions() {
        let rules = |d| classify(d).unwrap().1.rules();
        assert_eq!(classify([0, 0, -1]).unwrap().0, Case::A);
        assert_eq!(rules([0, 0, -1]), vec![Rule::Conn1mz]);
        assert_eq!(classify([0, 1, -1]).unwrap().0, Case::B);
        assert_eq!(rules([0, 1, -1]), vec![Rule::ConnA5]);
        assert_eq!(rules([0, 1, 0]), vec![Rule::ConnA4]);
        assert_eq!(rules([1, 1, -1]), vec![Rule::Conn1oz]);
        assert_eq!(rules([-1, -1, 1]), vec![Rule::ConnEuler1oz]);
        assert_eq!(classify([-1, 0, 0]).unwrap().0, Case::A);
        assert_eq!(rules([-1, 0, 0]), vec![Rule::Swap, Rule::PfaffA, Rule::ConnA4]);
    }

    #[test]
    fn search_is_total_with_one_case_per_direction() {
        let dirs = unit_directions();
        assert_eq!(dirs.len(), 26);
        for d in dirs {
            let (case, chain) = classify(d).unwrap();
            assert!(chain.leaves.iter().all(|l| l.case == case), "{d:?}");
            assert_eq!(chain.nodes.len(), chain.steps.iter().map(|s| s.children.len()).sum::<usize>() + 1);
        }
        assert!(classify([0, 0, 0]).is_err());
    }

    #[test]
    fn certificates() {
        let (_, empty) = classify([0, 0, 1]).unwrap();
        assert_eq!(certify_chain(&empty, &Params::real(0.3, 0.4, 1.2), re(0.3), 5.0).unwrap(), 0.0);
        let (_, chain) = classify([1, 1, 0]).unwrap();
        assert_eq!(chain.rules(), vec![Rule::PfaffA]);
        assert!(certify_chain(&chain, &Params::real(1.0, 1.0, 2.0), re(-1.0), 5.0).unwrap() <= 1e-12);
        let (_, chain) = classify([0, 0, -1]).unwrap();
        let p = Params::new(c(0.21, 0.1), c(0.37, 0.0), c(1.63, 0.05));
        assert!(certify_chain(&chain, &p, re(0.3), 10.0).unwrap() <= 1e-10);
    }
}
