//! Reduction from multicolor clique to capacitated domination.
//!
//! Each color class becomes a vertex star, each pair of classes an edge
//! star. Bridge nodes, one pair per ordered pair of classes, are linked to
//! the stars through propagation nodes whose demands encode vertex labels.
//! A `k`-clique exists iff the gadget has a solution of cost at most
//! `k* = 2k(k−1) + k(k+1)/2`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{parse_id, parse_num, Instance, VertexAttrs};
use crate::oracle::{exact, SearchBudget};
use crate::solution::{minimum_multiplicities, Assignment, DemandModel, Solution};

/// Vertices are 0-based; `label(v) = v + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueInstance {
    pub k: usize,
    /// Color class of every vertex.
    pub color: Vec<usize>,
    /// Cross-color edges with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl CliqueInstance {
    pub fn new(k: usize, color: Vec<usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidClique("k must be positive".into()));
        }
        if let Some(v) = color.iter().position(|&c| c >= k) {
            return Err(Error::InvalidClique(format!("vertex {} has color outside 1..={k}", v + 1)));
        }
        let n = color.len();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidClique(format!("edge ({}, {}) out of range", u + 1, v + 1)));
            }
            if color[u] == color[v] {
                return Err(Error::InvalidClique(format!(
                    "edge ({}, {}) joins two vertices of color {}",
                    u + 1,
                    v + 1,
                    color[u] + 1
                )));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidClique(format!("duplicate edge ({}, {})", u + 1, v + 1)));
            }
        }
        Ok(CliqueInstance {
            k,
            color,
            edges: set.into_iter().collect(),
        })
    }

    /// Number of vertices `N`.
    pub fn n(&self) -> usize {
        self.color.len()
    }

    pub fn part(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.color[v] == i).collect()
    }

    /// `k* = 2k(k−1) + k(k+1)/2`.
    pub fn budget(&self) -> i64 {
        let k = self.k as i64;
        2 * k * (k - 1) + k * (k + 1) / 2
    }

    /// Lexicographically first clique with one vertex per class, by
    /// exhaustive search.
    pub fn find_clique(&self) -> Option<Vec<usize>> {
        let parts: Vec<Vec<usize>> = (0..self.k).map(|i| self.part(i)).collect();
        let mut pick = Vec::with_capacity(self.k);
        self.extend_clique(&parts, &mut pick).then_some(pick)
    }

    fn extend_clique(&self, parts: &[Vec<usize>], pick: &mut Vec<usize>) -> bool {
        let i = pick.len();
        if i == self.k {
            return true;
        }
        for &v in &parts[i] {
            if pick.iter().all(|&u| self.has_edge(u, v)) {
                pick.push(v);
                if self.extend_clique(parts, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

impl fmt::Display for CliqueInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p mcq {} {} {}", self.k, self.n(), self.edges.len())?;
        for i in 0..self.k {
            write!(f, "part {}", i + 1)?;
            for v in self.part(i) {
                write!(f, " {}", v + 1)?;
            }
            writeln!(f)?;
        }
        for &(u, v) in &self.edges {
            writeln!(f, "e {} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for CliqueInstance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut color: Vec<Option<usize>> = Vec::new();
        let mut seen_parts = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let mut toks = raw.split_whitespace();
            let Some(first) = toks.next() else { continue };
            match first {
                "c" => continue,
                "p" => {
                    if header.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    if toks.next() != Some("mcq") {
                        return Err(Error::parse(line, "expected `p mcq`"));
                    }
                    let k = parse_num(toks.next(), line, "k")?;
                    let n = parse_num(toks.next(), line, "vertex count")?;
                    let m = parse_num(toks.next(), line, "edge count")?;
                    if toks.next().is_some() {
                        return Err(Error::parse(line, "trailing tokens"));
                    }
                    header = Some((k, n, m));
                    color = vec![None; n];
                }
                "part" => {
                    let (k, n, _) = header.ok_or_else(|| Error::parse(line, "missing header"))?;
                    let p = parse_id(toks.next(), k, line, "part")?;
                    if !seen_parts.insert(p) {
                        return Err(Error::parse(line, format!("duplicate part {}", p + 1)));
                    }
                    for t in toks {
                        let v = parse_id(Some(t), n, line, "vertex")?;
                        if color[v].replace(p).is_some() {
                            return Err(Error::parse(line, format!("vertex {} in two parts", v + 1)));
                        }
                    }
                }
                "e" => {
                    let (_, n, _) = header.ok_or_else(|| Error::parse(line, "missing header"))?;
                    let u = parse_id(toks.next(), n, line, "vertex")?;
                    let v = parse_id(toks.next(), n, line, "vertex")?;
                    if toks.next().is_some() {
                        return Err(Error::parse(line, "trailing tokens"));
                    }
                    edges.push((u, v));
                }
                other => return Err(Error::parse(line, format!("unknown line type `{other}`"))),
            }
        }
        let (k, _, m) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
        if edges.len() != m {
            return Err(Error::parse(0, format!("header announces {m} edges, found {}", edges.len())));
        }
        let color = color
            .into_iter()
            .enumerate()
            .map(|(v, c)| c.ok_or_else(|| Error::parse(0, format!("vertex {} in no part", v + 1))))
            .collect::<Result<Vec<_>>>()?;
        CliqueInstance::new(k, color, edges)
    }
}

/// What a gadget node stands for. Classes are 0-based; `alpha` is 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Center of vertex star `i`.
    X(usize),
    /// Selectable node of vertex `u`.
    Vertex(usize),
    /// Center of edge star `(i, j)`, `i < j`.
    Y(usize, usize),
    /// Selectable node of the edge with this index.
    Edge(usize),
    Bridge { i: usize, j: usize, alpha: u8 },
    VertexProp { v: usize, i: usize, j: usize, alpha: u8 },
    EdgeProp { e: usize, i: usize, j: usize, alpha: u8 },
}

impl Role {
    /// Text tag with 1-based ids.
    pub fn tag(&self, cq: &CliqueInstance) -> String {
        match *self {
            Role::X(i) => format!("x_{}", i + 1),
            Role::Vertex(u) => format!("vertex_{}", u + 1),
            Role::Y(i, j) => format!("y_{}_{}", i + 1, j + 1),
            Role::Edge(e) => {
                let (u, v) = cq.edges[e];
                format!("edge_{}_{}", u + 1, v + 1)
            }
            Role::Bridge { i, j, alpha } => format!("b{alpha}_{}_{}", i + 1, j + 1),
            Role::VertexProp { v, i, j, alpha } => format!("pv{alpha}_{}_{}_{}", v + 1, i + 1, j + 1),
            Role::EdgeProp { e, i, j, alpha } => {
                let (u, v) = cq.edges[e];
                format!("pe{alpha}_{}_{}_{}_{}", u + 1, v + 1, i + 1, j + 1)
            }
        }
    }

    pub fn is_bridge(&self) -> bool {
        matches!(self, Role::Bridge { .. })
    }
}

#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub instance: Instance,
    pub roles: Vec<Role>,
    pub budget: i64,
    /// Size `N` of the clique instance.
    pub n_source: usize,
}

impl GadgetInstance {
    /// `role <node> <tag>` lines, nodes 1-based.
    pub fn roles_text(&self, cq: &CliqueInstance) -> String {
        self.roles
            .iter()
            .enumerate()
            .map(|(i, r)| format!("role {} {}\n", i + 1, r.tag(cq)))
            .collect()
    }

    pub fn node_of(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }
}

/// `k + N + k(k−1)/2 + |E| + 2k(k−1) + 2N(k−1) + 4|E|`.
pub fn expected_node_count(k: usize, n: usize, m: usize) -> usize {
    k + n + k * (k - 1) / 2 + m + 2 * k * (k - 1) + 2 * n * (k - 1) + 4 * m
}

pub fn reduce(cq: &CliqueInstance) -> Result<GadgetInstance> {
    let k = cq.k;
    let n = cq.n() as i64;
    let budget = cq.budget();
    let heavy = budget + 1;
    let label = |v: usize| v as i64 + 1;

    let mut roles = Vec::new();
    let mut attrs = Vec::new();
    let mut edges = Vec::new();
    let mut add = |roles: &mut Vec<Role>, role, a| {
        roles.push(role);
        attrs.push(a);
        roles.len() - 1
    };

    let x: Vec<usize> = (0..k)
        .map(|i| add(&mut roles, Role::X(i), VertexAttrs::new(heavy, 0, 1)))
        .collect();
    let star_cap = 1 + (k as i64 - 1) * n;
    let vbar: Vec<usize> = (0..cq.n())
        .map(|u| add(&mut roles, Role::Vertex(u), VertexAttrs::new(1, star_cap, 0)))
        .collect();
    for u in 0..cq.n() {
        edges.push((vbar[u], x[cq.color[u]]));
    }
    let mut y = vec![vec![usize::MAX; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            y[i][j] = add(&mut roles, Role::Y(i, j), VertexAttrs::new(heavy, 0, 1));
        }
    }
    let ebar: Vec<usize> = (0..cq.edges.len())
        .map(|e| add(&mut roles, Role::Edge(e), VertexAttrs::new(1, 1 + 2 * n, 0)))
        .collect();
    for (e, &(u, v)) in cq.edges.iter().enumerate() {
        let (i, j) = (cq.color[u].min(cq.color[v]), cq.color[u].max(cq.color[v]));
        edges.push((ebar[e], y[i][j]));
    }
    // capacities are filled in once all neighbors exist
    let mut bridge = vec![vec![[usize::MAX; 2]; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                for alpha in 1..=2u8 {
                    bridge[i][j][alpha as usize - 1] =
                        add(&mut roles, Role::Bridge { i, j, alpha }, VertexAttrs::new(1, 0, 1));
                }
            }
        }
    }
    for v in 0..cq.n() {
        let i = cq.color[v];
        for j in (0..k).filter(|&j| j != i) {
            for alpha in 1..=2u8 {
                let d = if alpha == 1 { label(v) } else { n - label(v) };
                let p = add(&mut roles, Role::VertexProp { v, i, j, alpha }, VertexAttrs::new(heavy, 0, d));
                edges.push((p, vbar[v]));
                edges.push((p, bridge[i][j][alpha as usize - 1]));
            }
        }
    }
    for (e, &(a, b)) in cq.edges.iter().enumerate() {
        // orient so that u lies in the smaller class
        let (u, v) = if cq.color[a] < cq.color[b] { (a, b) } else { (b, a) };
        let (i, j) = (cq.color[u], cq.color[v]);
        for ((from, to), w) in [((i, j), u), ((j, i), v)] {
            for alpha in 1..=2u8 {
                let d = if alpha == 1 { n - label(w) } else { label(w) };
                let p = add(
                    &mut roles,
                    Role::EdgeProp { e, i: from, j: to, alpha },
                    VertexAttrs::new(heavy, 0, d),
                );
                edges.push((p, ebar[e]));
                edges.push((p, bridge[from][to][alpha as usize - 1]));
            }
        }
    }

    let mut closed_demand = vec![0i64; attrs.len()];
    for (node, a) in attrs.iter().enumerate() {
        closed_demand[node] += a.demand;
    }
    for &(p, q) in &edges {
        closed_demand[p] += attrs[q].demand;
        closed_demand[q] += attrs[p].demand;
    }
    for (node, role) in roles.iter().enumerate() {
        if role.is_bridge() {
            attrs[node].capacity = (closed_demand[node] - n).max(0);
        }
    }

    debug_assert_eq!(roles.len(), expected_node_count(k, cq.n(), cq.edges.len()));
    let instance = Instance::new(attrs, edges)?;
    Ok(GadgetInstance {
        instance,
        roles,
        budget,
        n_source: cq.n(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    /// Removing the bridges leaves a cycle through this edge.
    NotForest(usize, usize),
    BridgeCapacity { node: usize, expected: i64, found: i64 },
    StarCapacity { node: usize, expected: i64, found: i64 },
    Schedule { node: usize, reason: String },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureViolation::NotForest(u, v) => {
                write!(f, "forest: edge ({}, {}) closes a cycle without bridges", u + 1, v + 1)
            }
            StructureViolation::BridgeCapacity { node, expected, found } => write!(
                f,
                "capacity-schedule: bridge {} has capacity {found}, expected {expected}",
                node + 1
            ),
            StructureViolation::StarCapacity { node, expected, found } => write!(
                f,
                "capacity-schedule: star node {} has capacity {found}, expected {expected}",
                node + 1
            ),
            StructureViolation::Schedule { node, reason } => {
                write!(f, "attribute-schedule: node {}: {reason}", node + 1)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pass() {
            return writeln!(f, "PASS");
        }
        writeln!(f, "FAIL")?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Audits the gadget: acyclic after deleting bridges, bridge capacities
/// `max(0, Σ_{N[b]} d − N)`, selectable star nodes with capacity equal to
/// their closed-neighborhood demand, and the fixed weight/demand schedule.
pub fn verify_structure(g: &GadgetInstance) -> StructureReport {
    let inst = &g.instance;
    let n = g.n_source as i64;
    let heavy = g.budget + 1;
    let mut violations = Vec::new();

    let mut parent: Vec<usize> = (0..inst.n()).collect();
    for (u, v) in inst.edges() {
        if g.roles[u].is_bridge() || g.roles[v].is_bridge() {
            continue;
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            violations.push(StructureViolation::NotForest(u, v));
        } else {
            parent[a] = b;
        }
    }

    for (node, role) in g.roles.iter().enumerate() {
        let a = inst.attrs(node);
        let closed: i64 = inst.closed_neighborhood(node).iter().map(|&u| inst.demand(u)).sum();
        let mut expect = |what: &str, want: (i64, Option<i64>, i64)| {
            let (w, c, d) = want;
            if a.weight != w || a.demand != d || c.is_some_and(|c| a.capacity != c) {
                violations.push(StructureViolation::Schedule {
                    node,
                    reason: format!(
                        "{what} has (w, c, d) = ({}, {}, {})",
                        a.weight, a.capacity, a.demand
                    ),
                });
            }
        };
        match *role {
            Role::X(_) | Role::Y(..) => expect("star center", (heavy, Some(0), 1)),
            Role::Vertex(_) | Role::Edge(_) => {
                expect("selectable node", (1, None, 0));
                if a.capacity != closed {
                    violations.push(StructureViolation::StarCapacity {
                        node,
                        expected: closed,
                        found: a.capacity,
                    });
                }
            }
            Role::Bridge { .. } => {
                expect("bridge", (1, None, 1));
                let expected = (closed - n).max(0);
                if a.capacity != expected {
                    violations.push(StructureViolation::BridgeCapacity {
                        node,
                        expected,
                        found: a.capacity,
                    });
                }
            }
            Role::VertexProp { .. } | Role::EdgeProp { .. } => {
                if a.weight != heavy || a.capacity != 0 {
                    expect("propagation node", (heavy, Some(0), a.demand));
                }
            }
        }
    }
    StructureReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticsVerdict {
    /// Clique existence and `optimum ≤ k*` agree.
    Pass { clique: Option<Vec<usize>>, optimum: Option<i64> },
    Fail { clique: Option<Vec<usize>>, optimum: Option<i64> },
    /// The oracle ran out of budget; nothing is claimed.
    Inconclusive { nodes: u64 },
}

impl SemanticsVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, SemanticsVerdict::Pass { .. })
    }
}

/// Checks the iff on a tiny instance: exhaustive clique search on one side,
/// the exact oracle bounded by `k* + 1` on the other. `optimum` is `None`
/// when the gadget is infeasible or costs more than `k* + 1`.
pub fn verify_semantics(
    cq: &CliqueInstance,
    g: &GadgetInstance,
    budget: SearchBudget,
    model: DemandModel,
) -> Result<SemanticsVerdict> {
    let clique = cq.find_clique();
    let bounded = SearchBudget {
        upper_bound: Some(g.budget + 1),
        ..budget
    };
    let optimum = match exact(&g.instance, model, bounded) {
        Ok(sol) => Some(sol.cost),
        Err(Error::AboveBound(_)) | Err(Error::Infeasible(_)) => None,
        Err(Error::BudgetExhausted { nodes, .. }) => return Ok(SemanticsVerdict::Inconclusive { nodes }),
        Err(e) => return Err(e),
    };
    let cheap = optimum.is_some_and(|c| c <= g.budget);
    Ok(if clique.is_some() == cheap {
        SemanticsVerdict::Pass { clique, optimum }
    } else {
        SemanticsVerdict::Fail { clique, optimum }
    })
}

/// The solution a clique induces: every bridge once, the clique's vertex and
/// edge nodes once. Each selected star node serves its whole closed
/// neighborhood and the bridges serve everything else.
pub fn clique_witness(cq: &CliqueInstance, g: &GadgetInstance, clique: &[usize]) -> Result<Solution> {
    let inst = &g.instance;
    let mut chosen = BTreeSet::new();
    for &u in clique {
        chosen.insert(g.node_of(Role::Vertex(u)).expect("vertex node"));
    }
    for (a, &u) in clique.iter().enumerate() {
        for &v in &clique[a + 1..] {
            let e = cq
                .edges
                .binary_search(&(u.min(v), u.max(v)))
                .map_err(|_| Error::InvalidClique(format!("({}, {}) is not an edge", u + 1, v + 1)))?;
            chosen.insert(g.node_of(Role::Edge(e)).expect("edge node"));
        }
    }
    let mut asg = Assignment::new();
    for v in 0..inst.n() {
        if inst.demand(v) == 0 {
            continue;
        }
        let server = inst
            .closed_neighborhood(v)
            .into_iter()
            .find(|u| chosen.contains(u))
            .or_else(|| inst.closed_neighborhood(v).into_iter().find(|&u| g.roles[u].is_bridge()));
        match server {
            Some(s) => asg.add(v, s, inst.demand(v)),
            None => return Err(Error::Infeasible(v)),
        }
    }
    minimum_multiplicities(inst, asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treewidth::heuristic_decomposition;
    use crate::verify::verify_solution;

    fn tiny(edges: &[(usize, usize)]) -> CliqueInstance {
        CliqueInstance::new(2, vec![0, 1], edges.iter().copied()).unwrap()
    }

    #[test]
    fn node_count_and_budget() {
        let cq = tiny(&[(0, 1)]);
        let g = reduce(&cq).unwrap();
        assert_eq!(g.instance.n(), 18);
        assert_eq!(g.budget, 7);
        assert_eq!(expected_node_count(2, 2, 1), 18);
    }

    #[test]
    fn star_capacities() {
        let cq = CliqueInstance::new(3, vec![0, 0, 1, 1, 2], [(0, 2), (2, 4)]).unwrap();
        let g = reduce(&cq).unwrap();
        let u = g.node_of(Role::Vertex(0)).unwrap();
        assert_eq!(g.instance.capacity(u), 11);
        let e = g.node_of(Role::Edge(0)).unwrap();
        assert_eq!(g.instance.capacity(e), 11);
        assert!(verify_structure(&g).is_pass());
    }

    #[test]
    fn bridge_neighborhood_size() {
        let cq = CliqueInstance::new(3, vec![0, 0, 1, 1, 2], [(0, 2), (1, 2), (2, 4)]).unwrap();
        let g = reduce(&cq).unwrap();
        for (node, role) in g.roles.iter().enumerate() {
            if let Role::Bridge { i, j, .. } = *role {
                let eij = cq
                    .edges
                    .iter()
                    .filter(|&&(u, v)| {
                        (cq.color[u], cq.color[v]) == (i, j) || (cq.color[v], cq.color[u]) == (i, j)
                    })
                    .count();
                let want = 1 + cq.part(i).len() + eij;
                assert_eq!(g.instance.closed_neighborhood(node).len(), want);
            }
        }
    }

    #[test]
    fn perturbations_detected() {
        let cq = tiny(&[(0, 1)]);
        let g = reduce(&cq).unwrap();
        let b = g.roles.iter().position(Role::is_bridge).unwrap();
        let mut bad = g.clone();
        let mut attrs = bad.instance.all_attrs().to_vec();
        attrs[b].capacity += 1;
        bad.instance = Instance::new(attrs, g.instance.edges()).unwrap();
        assert!(matches!(
            verify_structure(&bad).violations[..],
            [StructureViolation::BridgeCapacity { .. }]
        ));

        // a second vertex in class 1 gives two leaves of star x_1 to join
        let cq = CliqueInstance::new(2, vec![0, 0, 1], [(0, 2)]).unwrap();
        let g = reduce(&cq).unwrap();
        let (a, c) = (g.node_of(Role::Vertex(0)).unwrap(), g.node_of(Role::Vertex(1)).unwrap());
        let mut bad = g.clone();
        let edges: Vec<_> = g.instance.edges().chain([(a, c)]).collect();
        bad.instance = Instance::new(g.instance.all_attrs().to_vec(), edges).unwrap();
        assert!(verify_structure(&bad)
            .violations
            .iter()
            .any(|v| matches!(v, StructureViolation::NotForest(..))));
    }

    #[test]
    fn semantics_on_tiny_instances() {
        let b = SearchBudget::default();
        let cq = tiny(&[(0, 1)]);
        let g = reduce(&cq).unwrap();
        let v = verify_semantics(&cq, &g, b, DemandModel::Unsplittable).unwrap();
        assert_eq!(
            v,
            SemanticsVerdict::Pass {
                clique: Some(vec![0, 1]),
                optimum: Some(7)
            }
        );

        let cq = tiny(&[]);
        let g = reduce(&cq).unwrap();
        let v = verify_semantics(&cq, &g, b, DemandModel::Unsplittable).unwrap();
        assert!(v.is_pass());

        let cq = CliqueInstance::new(2, vec![0, 0, 1], [(0, 2)]).unwrap();
        let g = reduce(&cq).unwrap();
        for model in [DemandModel::Unsplittable, DemandModel::Splittable] {
            assert!(verify_semantics(&cq, &g, b, model).unwrap().is_pass());
        }
    }

    #[test]
    fn forward_witness_costs_budget() {
        let cq = CliqueInstance::new(3, vec![0, 1, 2, 0], [(0, 1), (0, 2), (1, 2), (1, 3)]).unwrap();
        let clique = cq.find_clique().unwrap();
        assert_eq!(clique, vec![0, 1, 2]);
        let g = reduce(&cq).unwrap();
        let sol = clique_witness(&cq, &g, &clique).unwrap();
        assert_eq!(sol.cost, g.budget);
        assert_eq!(g.budget, 18);
        assert!(verify_solution(&g.instance, &sol, DemandModel::Unsplittable).is_pass());
    }

    #[test]
    fn gadget_width_tracks_bridges() {
        let cq = CliqueInstance::new(3, vec![0, 1, 2, 0, 1, 2], [(0, 1), (0, 2), (1, 2), (3, 4), (4, 5)]).unwrap();
        let g = reduce(&cq).unwrap();
        let w = heuristic_decomposition(&g.instance).width();
        assert!(w <= 2 * 3 * 2 + 2, "width {w}");
    }

    #[test]
    fn text_round_trip() {
        let cq = CliqueInstance::new(2, vec![0, 0, 1], [(0, 2)]).unwrap();
        let text = cq.to_string();
        assert_eq!(text, "p mcq 2 3 1\npart 1 1 2\npart 2 3\ne 1 3\n");
        assert_eq!(text.parse::<CliqueInstance>().unwrap(), cq);
        assert!("p mcq 2 2 1\npart 1 1 2\ne 1 2\n".parse::<CliqueInstance>().is_err());
        assert!("p mcq 2 2 0\npart 1 1\n".parse::<CliqueInstance>().is_err());
    }
}
