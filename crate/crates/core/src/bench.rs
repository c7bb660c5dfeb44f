//! Seeded greedy-versus-optimum batches.
//!
//! Instance `i` of a batch is drawn with seed `seed + i`. The reference
//! optimum comes from the exact oracle up to `oracle_max_n` vertices and
//! from the DP above that. Items run in parallel; rows keep batch order.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::dp::solve_dp;
use crate::error::Result;
use crate::greedy::{greedy_splittable, greedy_unsplittable, greedy_unweighted_splittable, harmonic};
use crate::oracle::{exact, SearchBudget};
use crate::random::{random_instance, RandomParams};
use crate::solution::DemandModel;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub params: RandomParams,
    pub batch: usize,
    pub seed: u64,
    pub model: DemandModel,
    /// Use the unit-weight greedy (weights are forced to 1).
    pub unweighted: bool,
    pub oracle_max_n: usize,
    pub budget: SearchBudget,
}

impl BenchConfig {
    pub fn new(n: usize, batch: usize, seed: u64, model: DemandModel) -> Self {
        BenchConfig {
            params: RandomParams::new(n, 0.35, 5, 5, 5),
            batch,
            seed,
            model,
            unweighted: false,
            oracle_max_n: 9,
            budget: SearchBudget::default(),
        }
    }

    pub fn algo(&self) -> &'static str {
        match (self.model, self.unweighted) {
            (DemandModel::Unsplittable, _) => "greedy-unsplit",
            (DemandModel::Splittable, false) => "greedy-split",
            (DemandModel::Splittable, true) => "greedy-unweighted",
        }
    }

    /// Proven ratio bound of the algorithm on `n` vertices.
    pub fn bound(&self, n: usize) -> BigRational {
        let h = harmonic(n);
        let int = |x: i64| BigRational::from_integer(x.into());
        match (self.model, self.unweighted) {
            (DemandModel::Unsplittable, _) => h,
            (DemandModel::Splittable, false) => int(4) * h + int(2),
            (DemandModel::Splittable, true) => int(2) * h + int(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub index: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub greedy_cost: i64,
    /// `oracle` or `dp`.
    pub reference: &'static str,
    pub opt: i64,
    pub within_bound: bool,
}

fn run_item(cfg: &BenchConfig, index: usize) -> Result<BenchRow> {
    let seed = cfg.seed.wrapping_add(index as u64);
    let mut params = cfg.params.clone();
    if cfg.unweighted {
        params.weight = 1..=1;
    }
    let inst = random_instance(&params, seed);
    let greedy = match (cfg.model, cfg.unweighted) {
        (DemandModel::Unsplittable, _) => greedy_unsplittable(&inst)?,
        (DemandModel::Splittable, false) => greedy_splittable(&inst)?,
        (DemandModel::Splittable, true) => greedy_unweighted_splittable(&inst)?,
    };
    let (reference, opt) = if inst.n() <= cfg.oracle_max_n {
        ("oracle", exact(&inst, cfg.model, cfg.budget)?.cost)
    } else {
        ("dp", solve_dp(&inst, cfg.model)?.cost)
    };
    let cost = greedy.solution.cost;
    let within_bound = BigRational::from_integer(cost.into()) <= cfg.bound(inst.n()) * BigRational::from_integer(opt.into());
    Ok(BenchRow {
        index,
        seed,
        n: inst.n(),
        m: inst.num_edges(),
        greedy_cost: cost,
        reference,
        opt,
        within_bound,
    })
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    (0..cfg.batch).into_par_iter().map(|i| run_item(cfg, i)).collect()
}

pub const CSV_HEADER: &str = "index,seed,n,m,model,algo,greedy_cost,reference,opt,ratio,bound,within_bound";

fn ratio_text(cost: i64, opt: i64) -> String {
    match (cost, opt) {
        (0, 0) => "1.000000".into(),
        (_, 0) => "inf".into(),
        _ => format!("{:.6}", cost as f64 / opt as f64),
    }
}

pub fn to_csv(cfg: &BenchConfig, rows: &[BenchRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        let bound = cfg.bound(r.n).to_f64().unwrap_or(f64::INFINITY);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{:.6},{}",
            r.index,
            r.seed,
            r.n,
            r.m,
            cfg.model,
            cfg.algo(),
            r.greedy_cost,
            r.reference,
            r.opt,
            ratio_text(r.greedy_cost, r.opt),
            bound,
            r.within_bound
        )
        .unwrap();
    }
    out
}
