//! Shifting scheme for planar graphs.
//!
//! Vertices are layered by BFS distance. For every shift `r` the layers are
//! cut into overlapping bands of `k + 2` levels; each band keeps the demands
//! of its `k` interior levels, zeroes the two boundary levels, and is solved
//! exactly by the tree-decomposition DP. Band solutions are merged and the
//! cheapest shift wins. Disconnected inputs are handled one component at a
//! time.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::dp::solve_dp;
use crate::error::{Error, Result};
use crate::instance::{Instance, VertexAttrs};
use crate::solution::{Assignment, DemandModel, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels {
    pub level: Vec<usize>,
    pub num_levels: usize,
}

fn bfs(inst: &Instance, roots: &[usize]) -> Vec<usize> {
    let mut level = vec![usize::MAX; inst.n()];
    let mut queue = VecDeque::new();
    for &r in roots {
        level[r] = 0;
        queue.push_back(r);
    }
    while let Some(u) = queue.pop_front() {
        for &v in inst.neighbors(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    level
}

fn levels_of(level: Vec<usize>) -> Levels {
    let num_levels = level.iter().map(|&l| l + 1).max().unwrap_or(0);
    Levels { level, num_levels }
}

/// BFS distances from `root`; fails on the first unreachable vertex.
pub fn bfs_levels(inst: &Instance, root: usize) -> Result<Levels> {
    let level = bfs(inst, &[root]);
    if let Some(v) = level.iter().position(|&l| l == usize::MAX) {
        return Err(Error::Disconnected(v));
    }
    Ok(levels_of(level))
}

/// Connected components, each sorted, ordered by their lowest vertex.
pub fn components(inst: &Instance) -> Vec<Vec<usize>> {
    let mut seen = vec![false; inst.n()];
    let mut out = Vec::new();
    for s in 0..inst.n() {
        if seen[s] {
            continue;
        }
        let level = bfs(inst, &[s]);
        let comp: Vec<usize> = (0..inst.n()).filter(|&v| level[v] != usize::MAX).collect();
        for &v in &comp {
            seen[v] = true;
        }
        out.push(comp);
    }
    out
}

/// BFS levels with the lowest vertex of every component as a root.
pub fn component_levels(inst: &Instance) -> Levels {
    let roots: Vec<usize> = components(inst).iter().map(|c| c[0]).collect();
    levels_of(bfs(inst, &roots))
}

/// A band of consecutive levels as a stand-alone instance.
#[derive(Clone, Debug)]
pub struct Slice {
    /// First and last level spanned, clipped to the existing levels.
    pub lo: usize,
    pub hi: usize,
    /// Original id of each slice vertex; slice vertex `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// Original ids whose demand was zeroed.
    pub boundary: Vec<usize>,
    pub instance: Instance,
}

/// Bands for shift `r`: band `j` spans levels `(j−1)k + r` to `jk + r + 1`
/// and keeps the demand of the levels strictly between. Bands whose kept
/// levels all lie outside the graph are skipped, and a graph with at most
/// `k` levels is a single band with nothing zeroed.
pub fn make_slices(inst: &Instance, levels: &Levels, k: usize, r: usize) -> Vec<Slice> {
    assert!(k >= 2 && r < k, "need k >= 2 and 0 <= r < k");
    let m = levels.num_levels as i64;
    if m as usize <= k {
        return vec![Slice {
            lo: 0,
            hi: levels.num_levels.saturating_sub(1),
            vertices: (0..inst.n()).collect(),
            boundary: Vec::new(),
            instance: inst.clone(),
        }];
    }
    let (k, r) = (k as i64, r as i64);
    let mut slices = Vec::new();
    let mut j = 0i64;
    loop {
        let lo = (j - 1) * k + r;
        let hi = j * k + r + 1;
        j += 1;
        if lo + 1 > m - 1 {
            break;
        }
        if hi - 1 < 0 {
            continue;
        }
        let vertices: Vec<usize> = (0..inst.n())
            .filter(|&v| (lo..=hi).contains(&(levels.level[v] as i64)))
            .collect();
        let boundary: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|&v| {
                let l = levels.level[v] as i64;
                l == lo || l == hi
            })
            .collect();
        let instance = inst.induced(&vertices, |v, a| {
            if boundary.binary_search(&v).is_ok() {
                VertexAttrs { demand: 0, ..a }
            } else {
                a
            }
        });
        slices.push(Slice {
            lo: lo.max(0) as usize,
            hi: hi.min(m - 1) as usize,
            vertices,
            boundary,
            instance,
        });
    }
    slices
}

/// Sums multiplicities and concatenates assignments of per-slice solutions
/// given in slice-local ids.
pub fn merge_solutions(inst: &Instance, parts: &[(&[usize], &Solution)]) -> Result<Solution> {
    let n = inst.n();
    let mut multiplicity = vec![0; n];
    let mut assignment = Assignment::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (p, (vertices, sol)) in parts.iter().enumerate() {
        for (i, &x) in sol.multiplicity.iter().enumerate() {
            multiplicity[vertices[i]] += x;
        }
        for (c, s, amount) in sol.assignment.triples() {
            let consumer = vertices[c];
            match owner[consumer] {
                Some(q) if q != p => return Err(Error::MergeConflict(consumer)),
                _ => owner[consumer] = Some(p),
            }
            assignment.add(consumer, vertices[s], amount);
        }
    }
    let mut sol = Solution {
        multiplicity,
        assignment,
        cost: 0,
    };
    sol.cost = sol.computed_cost(inst);
    Ok(sol)
}

/// Merged solution of one shift.
pub fn solve_shift(inst: &Instance, levels: &Levels, k: usize, r: usize, model: DemandModel) -> Result<Solution> {
    let slices = make_slices(inst, levels, k, r);
    let sols = slices
        .iter()
        .map(|s| solve_dp(&s.instance, model))
        .collect::<Result<Vec<_>>>()?;
    let parts: Vec<(&[usize], &Solution)> = slices
        .iter()
        .zip(&sols)
        .map(|(s, sol)| (s.vertices.as_slice(), sol))
        .collect();
    merge_solutions(inst, &parts)
}

#[derive(Clone, Debug)]
pub struct BakerOutcome {
    pub solution: Solution,
    /// Total cost of every shift, summed over components.
    pub shift_costs: Vec<i64>,
    /// Maximum number of BFS levels over the components.
    pub num_levels: usize,
}

/// Best-shift solution, choosing the shift per component (lowest `r` on
/// ties). Shifts are evaluated in parallel.
pub fn baker_solve(inst: &Instance, k: usize, model: DemandModel) -> Result<BakerOutcome> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    inst.check_feasible()?;
    let mut shift_costs = vec![0; k];
    let mut num_levels = 0;
    let mut picked = Vec::new();
    let comps = components(inst);
    for comp in &comps {
        let sub = inst.induced(comp, |_, a| a);
        let levels = bfs_levels(&sub, 0)?;
        num_levels = num_levels.max(levels.num_levels);
        let per_shift: Vec<Solution> = (0..k)
            .into_par_iter()
            .map(|r| solve_shift(&sub, &levels, k, r, model))
            .collect::<Result<Vec<_>>>()?;
        for (r, s) in per_shift.iter().enumerate() {
            shift_costs[r] += s.cost;
        }
        let best = per_shift
            .into_iter()
            .enumerate()
            .min_by_key(|(r, s)| (s.cost, *r))
            .map(|(_, s)| s)
            .expect("k >= 2 shifts");
        picked.push(best);
    }
    let parts: Vec<(&[usize], &Solution)> = comps.iter().map(Vec::as_slice).zip(&picked).collect();
    let solution = merge_solutions(inst, &parts)?;
    Ok(BakerOutcome {
        solution,
        shift_costs,
        num_levels,
    })
}

/// `cost ≤ (1 + 4/(k−1))·opt`, compared exactly.
pub fn within_baker_ratio(cost: i64, opt: i64, k: usize) -> bool {
    let k = k as i128;
    cost as i128 * (k - 1) <= (k + 3) * opt as i128
}

/// Grid graph with `rows × cols` vertices in row-major order.
pub fn grid(rows: usize, cols: usize, attrs: impl Fn(usize) -> VertexAttrs) -> Instance {
    let mut edges = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let v = i * cols + j;
            if j + 1 < cols {
                edges.push((v, v + 1));
            }
            if i + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Instance::new((0..rows * cols).map(attrs).collect(), edges).expect("grid is simple")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact, SearchBudget};
    use crate::verify::verify_solution;

    const U: DemandModel = DemandModel::Unsplittable;

    fn unit(_: usize) -> VertexAttrs {
        VertexAttrs::new(1, 1, 1)
    }

    fn path(n: usize) -> Instance {
        grid(1, n, unit)
    }

    #[test]
    fn levels_on_small_graphs() {
        assert_eq!(bfs_levels(&path(3), 0).unwrap().level, vec![0, 1, 2]);
        let star = Instance::new(vec![unit(0); 4], [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(bfs_levels(&star, 0).unwrap().level, vec![0, 1, 1, 1]);
        let g = grid(3, 3, unit);
        assert_eq!(bfs_levels(&g, 0).unwrap().level, vec![0, 1, 2, 1, 2, 3, 2, 3, 4]);
        let two = Instance::new(vec![unit(0); 2], []).unwrap();
        assert!(matches!(bfs_levels(&two, 0), Err(Error::Disconnected(1))));
    }

    #[test]
    fn slices_of_five_levels() {
        let inst = path(5);
        let levels = bfs_levels(&inst, 0).unwrap();
        let s = make_slices(&inst, &levels, 2, 0);
        let spans: Vec<_> = s.iter().map(|s| (s.lo, s.hi)).collect();
        assert_eq!(spans, vec![(0, 1), (0, 3), (2, 4)]);
        assert_eq!(s[0].boundary, vec![1]);
        assert_eq!(s[1].boundary, vec![0, 3]);
        assert_eq!(s[2].boundary, vec![2]);
    }

    #[test]
    fn every_demand_live_once() {
        let inst = grid(3, 4, unit);
        let levels = bfs_levels(&inst, 0).unwrap();
        for k in 2..=4 {
            for r in 0..k {
                let mut live = vec![0; inst.n()];
                let mut seen = vec![0; inst.n()];
                for s in make_slices(&inst, &levels, k, r) {
                    assert!(s.hi - s.lo <= k + 1);
                    for (i, &v) in s.vertices.iter().enumerate() {
                        seen[v] += 1;
                        if s.instance.demand(i) > 0 {
                            live[v] += 1;
                        }
                    }
                }
                assert!(live.iter().all(|&c| c == 1), "k {k} r {r}");
                assert!(seen.iter().all(|&c| (1..=2).contains(&c)));
            }
        }
    }

    #[test]
    fn few_levels_single_slice() {
        let inst = path(3);
        let levels = bfs_levels(&inst, 0).unwrap();
        let s = make_slices(&inst, &levels, 3, 1);
        assert_eq!(s.len(), 1);
        assert!(s[0].boundary.is_empty());
    }

    #[test]
    fn merge_detects_double_service() {
        let inst = path(2);
        let mut a = Assignment::new();
        a.add(0, 0, 1);
        let sol = crate::minimum_multiplicities(&inst, a).unwrap();
        let ids = [0usize, 1];
        assert!(matches!(
            merge_solutions(&inst, &[(&ids, &sol), (&ids, &sol)]),
            Err(Error::MergeConflict(0))
        ));
        let merged = merge_solutions(&inst, &[]).unwrap();
        assert_eq!(merged.cost, 0);
    }

    #[test]
    fn merge_sums_copies() {
        let inst = path(3);
        let mut a = Assignment::new();
        a.add(0, 1, 1);
        let left = crate::minimum_multiplicities(&path(2), a).unwrap();
        let mut b = Assignment::new();
        b.add(1, 0, 1);
        let right = crate::minimum_multiplicities(&path(2), b).unwrap();
        let merged = merge_solutions(&inst, &[(&[0, 1], &left), (&[1, 2], &right)]).unwrap();
        assert_eq!(merged.multiplicity, vec![0, 2, 0]);
        assert_eq!(merged.cost, 2);
    }

    #[test]
    fn grid_four_by_four() {
        let inst = grid(4, 4, unit);
        let opt = exact(&inst, U, SearchBudget::default()).unwrap().cost;
        for k in [2, 3, 5] {
            let out = baker_solve(&inst, k, U).unwrap();
            assert!(verify_solution(&inst, &out.solution, U).is_pass());
            assert!(within_baker_ratio(out.solution.cost, opt, k), "k {k}");
            assert_eq!(out.solution.cost, *out.shift_costs.iter().min().unwrap());
        }
    }

    #[test]
    fn exact_when_levels_fit() {
        let inst = grid(2, 3, |v| VertexAttrs::new(1 + v as i64 % 3, 2, 1 + v as i64 % 2));
        let opt = exact(&inst, U, SearchBudget::default()).unwrap().cost;
        let out = baker_solve(&inst, 5, U).unwrap();
        assert_eq!(out.num_levels, 4);
        assert_eq!(out.solution.cost, opt);
    }

    #[test]
    fn disconnected_components() {
        let inst = Instance::new(vec![VertexAttrs::new(1, 2, 1); 4], [(0, 1), (2, 3)]).unwrap();
        let out = baker_solve(&inst, 2, U).unwrap();
        assert_eq!(out.solution.cost, 2);
    }
}
