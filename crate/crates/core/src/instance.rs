//! Vertex-weighted graphs carrying a cost, capacity and demand per vertex.
//!
//! Vertices are indexed `0..n` in memory. The text format uses 1-based ids:
//!
//! ```text
//! c optional comment
//! p capdom <n> <m>
//! v <id> <weight> <capacity> <demand>
//! e <u> <v>
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexAttrs {
    pub weight: i64,
    pub capacity: i64,
    pub demand: i64,
}

impl VertexAttrs {
    pub const fn new(weight: i64, capacity: i64, demand: i64) -> Self {
        VertexAttrs {
            weight,
            capacity,
            demand,
        }
    }
}

/// A simple undirected graph with per-vertex attributes.
///
/// Adjacency lists are sorted and symmetric; there are no self-loops and no
/// parallel edges. Construction audits attribute sums so that every cost
/// computed by the solvers fits in an `i64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    attrs: Vec<VertexAttrs>,
    adj: Vec<Vec<usize>>,
}

impl Instance {
    pub fn new<I>(attrs: Vec<VertexAttrs>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = attrs.len();
        for (v, a) in attrs.iter().enumerate() {
            if a.weight < 0 || a.capacity < 0 || a.demand < 0 {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} has a negative attribute",
                    v + 1
                )));
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {}", u + 1)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({}, {})",
                    u + 1,
                    v + 1
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        audit_sums(&attrs)?;
        Ok(Instance { attrs, adj })
    }

    pub fn n(&self) -> usize {
        self.attrs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn attrs(&self, v: usize) -> VertexAttrs {
        self.attrs[v]
    }

    pub fn all_attrs(&self) -> &[VertexAttrs] {
        &self.attrs
    }

    pub fn weight(&self, v: usize) -> i64 {
        self.attrs[v].weight
    }

    pub fn capacity(&self, v: usize) -> i64 {
        self.attrs[v].capacity
    }

    pub fn demand(&self, v: usize) -> i64 {
        self.attrs[v].demand
    }

    pub fn total_demand(&self) -> i64 {
        self.attrs.iter().map(|a| a.demand).sum()
    }

    /// Open neighborhood, sorted by id.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// `N(v) ∪ {v}`, sorted by id.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.adj[v].len() + 1);
        let pos = self.adj[v].partition_point(|&u| u < v);
        out.extend_from_slice(&self.adj[v][..pos]);
        out.push(v);
        out.extend_from_slice(&self.adj[v][pos..]);
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// `true` when `server ∈ N[consumer]`.
    pub fn can_serve(&self, server: usize, consumer: usize) -> bool {
        server == consumer || self.is_adjacent(server, consumer)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// First vertex with positive demand whose closed neighborhood has no
    /// positive-capacity vertex. Soft capacities make every other instance
    /// feasible.
    pub fn infeasible_vertex(&self) -> Option<usize> {
        (0..self.n()).find(|&v| {
            self.demand(v) > 0
                && self.capacity(v) == 0
                && self.adj[v].iter().all(|&u| self.capacity(u) == 0)
        })
    }

    pub fn check_feasible(&self) -> Result<()> {
        match self.infeasible_vertex() {
            Some(v) => Err(Error::Infeasible(v)),
            None => Ok(()),
        }
    }

    /// Subgraph induced by `vertices` (any order, no duplicates). Local vertex
    /// `i` of the result corresponds to `vertices[i]`. `attrs_of` may rewrite
    /// the attributes of each kept vertex.
    pub fn induced<F>(&self, vertices: &[usize], mut attrs_of: F) -> Instance
    where
        F: FnMut(usize, VertexAttrs) -> VertexAttrs,
    {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let attrs = vertices.iter().map(|&v| attrs_of(v, self.attrs[v])).collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            for &u in &self.adj[v] {
                if local[u] != usize::MAX {
                    adj[i].push(local[u]);
                }
            }
            adj[i].sort_unstable();
        }
        Instance { attrs, adj }
    }

    /// Canonical text form: vertices in id order, edges sorted with the
    /// smaller endpoint first.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn audit_sums(attrs: &[VertexAttrs]) -> Result<()> {
    let n = attrs.len() as i128;
    let total_d: i128 = attrs.iter().map(|a| a.demand as i128).sum();
    let total_c: i128 = attrs.iter().map(|a| a.capacity as i128).sum();
    let total_w: i128 = attrs.iter().map(|a| a.weight as i128).sum();
    let max = i64::MAX as i128;
    if total_d > max {
        return Err(Error::Overflow("sum of demands"));
    }
    if total_c.checked_mul(n.max(1)).is_none_or(|x| x > max) {
        return Err(Error::Overflow("sum of capacities times n"));
    }
    if total_w.checked_mul(total_d).is_none_or(|x| x > max) {
        return Err(Error::Overflow("sum of weights times sum of demands"));
    }
    Ok(())
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p capdom {} {}", self.n(), self.num_edges())?;
        for (v, a) in self.attrs.iter().enumerate() {
            writeln!(f, "v {} {} {} {}", v + 1, a.weight, a.capacity, a.demand)?;
        }
        for (u, v) in self.edges() {
            writeln!(f, "e {} {}", u + 1, v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_instance(text)
    }
}

pub(crate) fn parse_num<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// Parses a 1-based id into a 0-based index, checking `1 <= id <= n`.
pub(crate) fn parse_id(tok: Option<&str>, n: usize, line: usize, what: &str) -> Result<usize> {
    let id: usize = parse_num(tok, line, what)?;
    if id == 0 || id > n {
        return Err(Error::parse(line, format!("{what} {id} out of range 1..={n}")));
    }
    Ok(id - 1)
}

fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut attrs: Vec<Option<VertexAttrs>> = Vec::new();
    let mut edges = Vec::new();
    let mut seen_edges = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_ascii_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                if toks.next() != Some("capdom") {
                    return Err(Error::parse(line, "expected `p capdom <n> <m>`"));
                }
                let n: usize = parse_num(toks.next(), line, "vertex count")?;
                let m: usize = parse_num(toks.next(), line, "edge count")?;
                header = Some((n, m));
                attrs = vec![None; n];
            }
            "v" => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "vertex before header"))?;
                let v = parse_id(toks.next(), n, line, "vertex id")?;
                let weight: i64 = parse_num(toks.next(), line, "weight")?;
                let capacity: i64 = parse_num(toks.next(), line, "capacity")?;
                let demand: i64 = parse_num(toks.next(), line, "demand")?;
                if weight < 0 || capacity < 0 || demand < 0 {
                    return Err(Error::parse(line, "attributes must be nonnegative"));
                }
                if attrs[v].is_some() {
                    return Err(Error::parse(line, format!("duplicate vertex {}", v + 1)));
                }
                attrs[v] = Some(VertexAttrs::new(weight, capacity, demand));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge before header"))?;
                let u = parse_id(toks.next(), n, line, "edge endpoint")?;
                let v = parse_id(toks.next(), n, line, "edge endpoint")?;
                if u == v {
                    return Err(Error::parse(line, format!("self-loop at vertex {}", u + 1)));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return Err(Error::parse(
                        line,
                        format!("duplicate edge ({}, {})", u + 1, v + 1),
                    ));
                }
                edges.push((u, v));
            }
            other => return Err(Error::parse(line, format!("unknown line type `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(Error::parse(line, "trailing tokens"));
        }
    }

    let (_, m) = header.ok_or_else(|| Error::parse(0, "missing `p capdom` header"))?;
    if edges.len() != m {
        return Err(Error::parse(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let attrs = attrs
        .into_iter()
        .enumerate()
        .map(|(v, a)| a.ok_or_else(|| Error::parse(0, format!("vertex {} missing", v + 1))))
        .collect::<Result<Vec<_>>>()?;
    Instance::new(attrs, edges)
}
