//! Simple undirected graphs and the DIMACS edge format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::ParseError;

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

/// Result of parsing a DIMACS file: the graph plus what the header claimed.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub declared_edges: usize,
    pub warnings: Vec<String>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints panic, use [`Graph::try_from_edges`] for
    /// untrusted input.
    pub fn from_edges(name: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Self {
        Self::try_from_edges(name, n, edges).expect("invalid edge list")
    }

    pub fn try_from_edges(
        name: impl Into<String>,
        n: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, ParseError> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(ParseError::VertexOutOfRange { line: 0, vertex: u.max(v) + 1, n });
            }
            if u == v {
                return Err(ParseError::SelfLoop { line: 0, vertex: u + 1 });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { name: name.into(), adjacency, edges: set.into_iter().collect() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of (distinct) edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Maximum vertex degree; 0 for edgeless (or empty) graphs.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Two-colors the graph by breadth-first search; `None` if an odd cycle exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.n();
        let mut side: Vec<Option<bool>> = vec![None; n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(false);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &self.adjacency[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.name.clone(), self.n(), &edges)
    }

    /// Canonical DIMACS text: header, then edges in sorted order, 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(out, "c {}", self.name);
        }
        let _ = writeln!(out, "p edge {} {}", self.n(), self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

/// Parses DIMACS `.col` text.
///
/// Accepts `c` comments, one `p edge n m` header (also `p col`), and `e u v`
/// lines with 1-based ids. LF and CRLF line endings both work. Duplicate edges
/// (in either orientation) collapse and produce a warning, as does a header
/// edge count that disagrees with the actual count.
pub fn parse_dimacs(text: &str) -> Result<ParsedGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = BTreeSet::new();
    let mut warnings = Vec::new();
    let mut name = String::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_ascii_whitespace();
        match tokens.next() {
            Some("c") => {
                if name.is_empty() && header.is_none() {
                    name = line[1..].trim().to_string();
                }
            }
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::DuplicateHeader { line: line_no });
                }
                let format = tokens.next().ok_or(ParseError::MalformedLine { line: line_no })?;
                if format != "edge" && format != "col" {
                    return Err(ParseError::UnsupportedFormat { line: line_no, format: format.into() });
                }
                let n = parse_number(tokens.next(), line_no)?;
                let m = parse_number(tokens.next(), line_no)?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or(ParseError::MissingHeader { line: line_no })?;
                let u = parse_number(tokens.next(), line_no)?;
                let v = parse_number(tokens.next(), line_no)?;
                if tokens.next().is_some() {
                    return Err(ParseError::MalformedLine { line: line_no });
                }
                for vertex in [u, v] {
                    if vertex == 0 || vertex > n {
                        return Err(ParseError::VertexOutOfRange { line: line_no, vertex, n });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop { line: line_no, vertex: u });
                }
                let key = ((u - 1).min(v - 1), (u - 1).max(v - 1));
                if !edges.insert(key) {
                    warnings.push(format!("line {line_no}: duplicate edge {u}-{v} ignored"));
                }
            }
            // Some generators emit vertex-weight or other descriptor lines; skip them.
            Some("n") | Some("x") | Some("%") => {}
            Some(_) => return Err(ParseError::MalformedLine { line: line_no }),
            None => {}
        }
    }

    let (n, declared) = header.ok_or(ParseError::MissingHeader { line: 0 })?;
    let edges: Vec<_> = edges.into_iter().collect();
    if edges.len() != declared {
        warnings.push(format!(
            "header declares {declared} edges but {} distinct edges were read",
            edges.len()
        ));
    }
    let graph = Graph::try_from_edges(name, n, &edges)?;
    Ok(ParsedGraph { graph, declared_edges: declared, warnings })
}

fn parse_number(token: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let token = token.ok_or(ParseError::MalformedLine { line })?;
    token
        .parse()
        .map_err(|_| ParseError::NotAnInteger { line, token: token.to_string() })
}

/// Small named graph families used throughout tests and examples.
pub mod fixtures {
    use super::Graph;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(format!("P{n}"), n, &edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::from_edges(format!("C{n}"), n, &edges)
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(format!("K{n}"), n, &edges)
    }

    /// Star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::from_edges(format!("K1,{leaves}"), leaves + 1, &edges)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_edges(format!("K{a},{b}"), a + b, &edges)
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph::from_edges(format!("E{n}"), n, &[])
    }

    /// Queen graph on a `k x k` board: squares adjacent when a queen attacks
    /// along a row, column or diagonal.
    pub fn queen(k: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..k * k {
            for b in a + 1..k * k {
                let (ra, ca) = (a / k, a % k);
                let (rb, cb) = (b / k, b % k);
                if ra == rb || ca == cb || ra.abs_diff(rb) == ca.abs_diff(cb) {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges(format!("queen{k}_{k}"), k * k, &edges)
    }

    /// Erdős–Rényi `G(n, density)` from a fixed seed.
    pub fn random(n: usize, density: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(format!("G{n}_{density}_{seed}"), n, &edges)
    }

    /// Uniform random graph with exactly `m` edges, for stand-in benchmark instances.
    pub fn random_with_edges(name: &str, n: usize, m: usize, seed: u64) -> Graph {
        assert!(m <= n * n.saturating_sub(1) / 2, "too many edges requested");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut set = std::collections::BTreeSet::new();
        while set.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        Graph::from_edges(name, n, &edges)
    }

    /// The small-graph corpus used for cross-checking models against the oracle:
    /// every path, cycle, clique, star and complete bipartite graph with at most
    /// 8 vertices, plus seeded random graphs at densities 0.2, 0.5 and 0.8.
    pub fn corpus() -> Vec<Graph> {
        let mut graphs = Vec::new();
        for n in 1..=8 {
            graphs.push(path(n));
            graphs.push(complete(n));
        }
        for n in 3..=8 {
            graphs.push(cycle(n));
        }
        for leaves in 2..=7 {
            graphs.push(star(leaves));
        }
        for a in 2..=4 {
            for b in a..=8 - a {
                graphs.push(complete_bipartite(a, b));
            }
        }
        let mut seed = 0u64;
        for &density in &[0.2, 0.5, 0.8] {
            for n in 3..=8 {
                for _ in 0..10 {
                    graphs.push(random(n, density, seed));
                    seed += 1;
                }
            }
        }
        graphs
    }
}
