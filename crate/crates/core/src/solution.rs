//! Demand assignments, dominating multisets and the solution text format.
//!
//! ```text
//! s capdom <cost> <split|unsplit>
//! x <vertex> <count>
//! a <consumer> <server> <amount>
//! ```
//!
//! Only nonzero multiplicities and amounts are written. `c` and `t` lines are
//! ignored by the parser so traces and diagnostics may follow the block.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{parse_id, parse_num, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DemandModel {
    Splittable,
    Unsplittable,
}

impl DemandModel {
    pub fn as_str(self) -> &'static str {
        match self {
            DemandModel::Splittable => "split",
            DemandModel::Unsplittable => "unsplit",
        }
    }
}

impl fmt::Display for DemandModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemandModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(DemandModel::Splittable),
            "unsplit" => Ok(DemandModel::Unsplittable),
            _ => Err(Error::InvalidArgument(format!(
                "unknown demand model `{s}` (expected split or unsplit)"
            ))),
        }
    }
}

/// Demand assignment `f(consumer, server) = amount`, one entry per pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    amounts: BTreeMap<(usize, usize), i64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `amount` to `f(consumer, server)`. Zero amounts are ignored.
    pub fn add(&mut self, consumer: usize, server: usize, amount: i64) {
        debug_assert!(amount >= 0);
        if amount > 0 {
            *self.amounts.entry((consumer, server)).or_insert(0) += amount;
        }
    }

    pub fn get(&self, consumer: usize, server: usize) -> i64 {
        self.amounts.get(&(consumer, server)).copied().unwrap_or(0)
    }

    /// Overwrites `f(consumer, server)`; zero removes the entry.
    pub fn set(&mut self, consumer: usize, server: usize, amount: i64) {
        if amount > 0 {
            self.amounts.insert((consumer, server), amount);
        } else {
            self.amounts.remove(&(consumer, server));
        }
    }

    /// Triples `(consumer, server, amount)` ordered by consumer then server.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.amounts.iter().map(|(&(c, s), &a)| (c, s, a))
    }

    pub fn len(&self) -> usize {
        self.amounts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amounts.is_empty()
    }

    pub fn contains_consumer(&self, consumer: usize) -> bool {
        self.amounts
            .range((consumer, 0)..=(consumer, usize::MAX))
            .next()
            .is_some()
    }

    /// Total amount received by each server.
    pub fn loads(&self, n: usize) -> Vec<i64> {
        let mut loads = vec![0; n];
        for (_, s, a) in self.triples() {
            loads[s] += a;
        }
        loads
    }

    /// Total amount assigned away by each consumer.
    pub fn served(&self, n: usize) -> Vec<i64> {
        let mut served = vec![0; n];
        for (c, _, a) in self.triples() {
            served[c] += a;
        }
        served
    }

    pub fn extend(&mut self, other: &Assignment) {
        for (c, s, a) in other.triples() {
            self.add(c, s, a);
        }
    }
}

/// A dominating multiset (`multiplicity[u]` copies of `u`) with its demand
/// assignment and stated cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub multiplicity: Vec<i64>,
    pub assignment: Assignment,
    pub cost: i64,
}

impl Solution {
    pub fn empty(n: usize) -> Self {
        Solution {
            multiplicity: vec![0; n],
            assignment: Assignment::new(),
            cost: 0,
        }
    }

    /// `Σ w(u)·x(u)` recomputed from the multiplicities.
    pub fn computed_cost(&self, inst: &Instance) -> i64 {
        self.multiplicity
            .iter()
            .enumerate()
            .map(|(u, &x)| inst.weight(u) * x)
            .sum()
    }

    /// Serializes in the solution text format.
    pub fn to_text(&self, model: DemandModel) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        writeln!(out, "s capdom {} {}", self.cost, model).unwrap();
        for (u, &x) in self.multiplicity.iter().enumerate() {
            if x != 0 {
                writeln!(out, "x {} {}", u + 1, x).unwrap();
            }
        }
        for (c, s, a) in self.assignment.triples() {
            writeln!(out, "a {} {} {}", c + 1, s + 1, a).unwrap();
        }
        out
    }

    /// Parses the solution text format against `inst` (for the id range).
    pub fn parse(text: &str, inst: &Instance) -> Result<(Solution, DemandModel)> {
        let n = inst.n();
        let mut header = None;
        let mut multiplicity = vec![0; n];
        let mut seen_x = vec![false; n];
        let mut assignment = Assignment::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut toks = raw.split_ascii_whitespace();
            let Some(kind) = toks.next() else { continue };
            match kind {
                "c" | "t" => continue,
                "s" => {
                    if header.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    if toks.next() != Some("capdom") {
                        return Err(Error::parse(line, "expected `s capdom <cost> <model>`"));
                    }
                    let cost: i64 = parse_num(toks.next(), line, "cost")?;
                    let model: DemandModel = toks
                        .next()
                        .ok_or_else(|| Error::parse(line, "missing model"))?
                        .parse()
                        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
                    header = Some((cost, model));
                }
                "x" => {
                    let u = parse_id(toks.next(), n, line, "vertex")?;
                    let count: i64 = parse_num(toks.next(), line, "multiplicity")?;
                    if count < 0 {
                        return Err(Error::parse(line, "negative multiplicity"));
                    }
                    if std::mem::replace(&mut seen_x[u], true) {
                        return Err(Error::parse(line, format!("duplicate multiplicity for {}", u + 1)));
                    }
                    multiplicity[u] = count;
                }
                "a" => {
                    let c = parse_id(toks.next(), n, line, "consumer")?;
                    let s = parse_id(toks.next(), n, line, "server")?;
                    let amount: i64 = parse_num(toks.next(), line, "amount")?;
                    if amount <= 0 {
                        return Err(Error::parse(line, "assignment amounts must be positive"));
                    }
                    if assignment.get(c, s) != 0 {
                        return Err(Error::parse(
                            line,
                            format!("duplicate assignment ({}, {})", c + 1, s + 1),
                        ));
                    }
                    assignment.set(c, s, amount);
                }
                other => return Err(Error::parse(line, format!("unknown line type `{other}`"))),
            }
            if toks.next().is_some() {
                return Err(Error::parse(line, "trailing tokens"));
            }
        }
        let (cost, model) = header.ok_or_else(|| Error::parse(0, "missing `s capdom` header"))?;
        Ok((
            Solution {
                multiplicity,
                assignment,
                cost,
            },
            model,
        ))
    }
}

/// Fewest copies that satisfy the capacity constraint for `asg`:
/// `x(u) = ⌈load(u) / c(u)⌉`, cost recomputed.
pub fn minimum_multiplicities(inst: &Instance, asg: Assignment) -> Result<Solution> {
    let loads = asg.loads(inst.n());
    let mut multiplicity = vec![0; inst.n()];
    for (u, &load) in loads.iter().enumerate() {
        if load == 0 {
            continue;
        }
        let c = inst.capacity(u);
        if c == 0 {
            return Err(Error::ZeroCapacityServer(u));
        }
        multiplicity[u] = ceil_div(load, c);
    }
    let mut sol = Solution {
        multiplicity,
        assignment: asg,
        cost: 0,
    };
    sol.cost = sol.computed_cost(inst);
    Ok(sol)
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(a >= 0 && b > 0);
    (a + b - 1) / b
}
