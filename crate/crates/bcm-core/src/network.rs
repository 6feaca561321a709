//! Network graphs, matching schedules, and round-matrix spectral analysis.
//!
//! A network is an undirected connected graph of processors. A matching
//! schedule partitions its edges into color classes; applying the classes in
//! order defines one round of the balancing circuit. Each matching has an
//! associated doubly stochastic matrix (matched pairs average, unmatched
//! vertices keep their value), and the ordered product of those matrices is
//! the round matrix whose subdominant eigenvalue magnitude `lambda(M)`
//! controls the convergence speed of the continuous averaging process.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use nalgebra::linalg::{Hessenberg, Schur};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;
use crate::{Error, Result};

/// `lambda(M)` values within this distance of 1 are treated as non-ergodic.
pub const ERGODICITY_TOL: f64 = 1e-9;

/// An undirected, connected, simple graph over vertices `0..n`.
///
/// Edges are stored as `(u, v)` pairs with `u < v`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl NetworkGraph {
    /// Builds a graph from an edge list, normalizing edge orientation.
    ///
    /// Fails if `n < 2`, any edge is a self-loop or out of range, an edge
    /// appears twice, or the graph is not connected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("graph needs at least 2 vertices"));
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter("self-loops are not allowed"));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidParameter("edge endpoint out of range"));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        let before = normalized.len();
        normalized.dedup();
        if normalized.len() != before {
            return Err(Error::InvalidParameter("duplicate edge"));
        }
        let graph = NetworkGraph {
            n,
            edges: normalized,
        };
        if !graph.is_connected() {
            return Err(Error::InvalidParameter("graph is not connected"));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order: sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, w: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| u == w || v == w)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(w) = stack.pop() {
            for &x in &adj[w] {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == self.n
    }

    /// Serializes to the plain-text edge-list format: first line `n`, then
    /// one `u v` pair per line, 0-indexed with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the plain-text edge-list format accepted by [`to_edge_list`].
    ///
    /// [`to_edge_list`]: NetworkGraph::to_edge_list
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or(Error::InvalidParameter("edge list is empty"))?
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter("edge list header is not a vertex count"))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let u: usize = parts
                .next()
                .ok_or(Error::InvalidParameter("edge line missing endpoint"))?
                .parse()
                .map_err(|_| Error::InvalidParameter("edge endpoint is not an integer"))?;
            let v: usize = parts
                .next()
                .ok_or(Error::InvalidParameter("edge line missing endpoint"))?
                .parse()
                .map_err(|_| Error::InvalidParameter("edge endpoint is not an integer"))?;
            if parts.next().is_some() {
                return Err(Error::InvalidParameter("edge line has trailing tokens"));
            }
            edges.push((u, v));
        }
        NetworkGraph::new(n, edges)
    }
}

/// Ordered color classes of edges; class `t` is the matching applied in
/// sub-step `t` of every round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSchedule {
    n: usize,
    matchings: Vec<Vec<(usize, usize)>>,
}

impl MatchingSchedule {
    /// Builds a schedule, checking that every class is a matching over
    /// vertices `0..n` (pairwise vertex-disjoint edges, `u < v`).
    pub fn new(n: usize, matchings: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        for m in &matchings {
            validate_matching(n, m)?;
        }
        Ok(MatchingSchedule { n, matchings })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of matchings per round (`d`).
    pub fn num_matchings(&self) -> usize {
        self.matchings.len()
    }

    pub fn matchings(&self) -> &[Vec<(usize, usize)>] {
        &self.matchings
    }

    /// Total edges balanced in one round (classes are disjoint, so this is
    /// the edge count of the underlying graph when the schedule covers it).
    pub fn edges_per_round(&self) -> usize {
        self.matchings.iter().map(Vec::len).sum()
    }

    /// True when the union of the matchings equals the graph's edge set.
    pub fn covers(&self, graph: &NetworkGraph) -> bool {
        let mut union: Vec<(usize, usize)> = self.matchings.iter().flatten().copied().collect();
        union.sort_unstable();
        union.dedup();
        union == graph.edges()
    }
}

fn validate_matching(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut used = vec![false; n];
    for &(u, v) in edges {
        if u >= v {
            return Err(Error::InvalidParameter("matching edge must satisfy u < v"));
        }
        if v >= n {
            return Err(Error::InvalidParameter(
                "matching edge endpoint out of range",
            ));
        }
        if used[u] || used[v] {
            return Err(Error::InvalidParameter(
                "vertex matched twice in one matching",
            ));
        }
        used[u] = true;
        used[v] = true;
    }
    Ok(())
}

/// The ordered product of a schedule's matching matrices and its spectral
/// quantity `lambda(M) = max(|lambda_2|, |lambda_n|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundMatrix {
    matrix: DMatrix<f64>,
    lambda: f64,
}

impl RoundMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The averaging Markov chain is ergodic iff `lambda(M) < 1`.
    pub fn is_ergodic(&self) -> bool {
        self.lambda < 1.0 - ERGODICITY_TOL
    }
}

/// Generates a random connected simple graph on `n` vertices.
///
/// Uniformly random absent edges are added one at a time until the graph
/// first becomes connected (tracked with a union-find). Deterministic for a
/// fixed `(n, seed)`.
pub fn generate_connected_graph(n: usize, seed: u64) -> Result<NetworkGraph> {
    generate_connected_graph_with_extra(n, seed, 0)
}

/// Like [`generate_connected_graph`], then adds up to `extra_edges` more
/// uniformly random absent edges (stopping early at the complete graph).
///
/// The edge density at first connectivity is sparse; the extra-edge knob
/// exists for experiments on denser topologies.
pub fn generate_connected_graph_with_extra(
    n: usize,
    seed: u64,
    extra_edges: usize,
) -> Result<NetworkGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter("graph needs at least 2 vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present = vec![false; n * n];
    let mut uf = UnionFind::new(n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut components = n;
    let max_edges = n * (n - 1) / 2;

    let draw_absent = |present: &mut Vec<bool>, rng: &mut ChaCha8Rng| loop {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let (u, v) = (a.min(b), a.max(b));
        if !present[u * n + v] {
            present[u * n + v] = true;
            return (u, v);
        }
    };

    while components > 1 {
        let (u, v) = draw_absent(&mut present, &mut rng);
        edges.push((u, v));
        if uf.union(u, v) {
            components -= 1;
        }
    }
    for _ in 0..extra_edges {
        if edges.len() == max_edges {
            break;
        }
        edges.push(draw_absent(&mut present, &mut rng));
    }
    edges.sort_unstable();
    Ok(NetworkGraph { n, edges })
}

/// Greedy edge coloring in canonical edge order.
///
/// Each edge gets the smallest color unused by any incident edge; the color
/// classes, ordered by color index, form the matching schedule. Uses at most
/// `2 * max_degree - 1` colors and visits every edge exactly once, so the
/// schedule covers the graph.
pub fn color_edges(graph: &NetworkGraph) -> MatchingSchedule {
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); graph.vertex_count()];
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for &(u, v) in graph.edges() {
        let mut color = 0;
        while used[u].contains(&color) || used[v].contains(&color) {
            color += 1;
        }
        if color == classes.len() {
            classes.push(Vec::new());
        }
        classes[color].push((u, v));
        used[u].push(color);
        used[v].push(color);
    }
    MatchingSchedule {
        n: graph.vertex_count(),
        matchings: classes,
    }
}

/// The doubly stochastic matrix of a single matching: matched pairs get the
/// 1/2 averaging block, unmatched vertices keep 1 on the diagonal.
pub fn matching_matrix(n: usize, matching: &[(usize, usize)]) -> Result<DMatrix<f64>> {
    validate_matching(n, matching)?;
    let mut m = DMatrix::<f64>::identity(n, n);
    for &(u, v) in matching {
        m[(u, u)] = 0.5;
        m[(v, v)] = 0.5;
        m[(u, v)] = 0.5;
        m[(v, u)] = 0.5;
    }
    Ok(m)
}

/// Computes the round matrix (ordered product of the schedule's matching
/// matrices) together with `lambda(M)`.
///
/// The product is generally non-symmetric, so eigenvalues are taken from a
/// dense complex eigensolver, sorted by real part (descending) to identify
/// the second and last eigenvalue, and compared by magnitude.
pub fn round_matrix(schedule: &MatchingSchedule) -> Result<RoundMatrix> {
    let n = schedule.vertex_count();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "round matrix needs at least 2 vertices",
        ));
    }
    let mut product = DMatrix::<f64>::identity(n, n);
    for matching in schedule.matchings() {
        let factor = matching_matrix(n, matching)?;
        product = product * factor;
    }
    let eigenvalues = complex_eigenvalues_bounded(&product)?;
    let mut parts = eigenvalues;
    parts.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));
    let magnitude = |(re, im): (f64, f64)| math::sqrt(re * re + im * im);
    let lambda = magnitude(parts[1]).max(magnitude(parts[n - 1]));
    Ok(RoundMatrix {
        matrix: product,
        lambda,
    })
}

/// Eigenvalues of a general real matrix.
///
/// The library Schur decomposition runs first with a bounded iteration
/// budget: its Francis iteration has no exceptional shifts and stagnates
/// forever on some matching-matrix products. Non-converged matrices fall
/// back to [`hessenberg_qr_eigenvalues`], whose exceptional shifts break
/// exactly those stagnations.
fn complex_eigenvalues_bounded(matrix: &DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    let n = matrix.nrows();
    if let Some(schur) = Schur::try_new(matrix.clone(), f64::EPSILON, 200 * n.max(8)) {
        return Ok(schur
            .complex_eigenvalues()
            .iter()
            .map(|c| (c.re, c.im))
            .collect());
    }
    let hessenberg = Hessenberg::new(matrix.clone()).unpack_h();
    hessenberg_qr_eigenvalues(hessenberg)
}

/// Eigenvalues of a real upper Hessenberg matrix by the shifted double-step
/// QR iteration, including the classic exceptional shifts after 10 and 20
/// stalled steps per eigenvalue block. The matrix is consumed.
fn hessenberg_qr_eigenvalues(mut h: DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    let n = h.nrows();
    let mut eigenvalues: Vec<(f64, f64)> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigenvalues);
    }
    let mut norm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            norm += math::abs(h[(i, j)]);
        }
    }
    let mut shift_total = 0.0;
    let mut end = n - 1;
    'blocks: loop {
        let mut iterations = 0;
        loop {
            // Scan for a negligible subdiagonal entry from the bottom.
            let mut start = end;
            while start >= 1 {
                let mut scale = math::abs(h[(start - 1, start - 1)]) + math::abs(h[(start, start)]);
                if scale == 0.0 {
                    scale = norm;
                }
                if math::abs(h[(start, start - 1)]) <= f64::EPSILON * scale {
                    h[(start, start - 1)] = 0.0;
                    break;
                }
                start -= 1;
            }

            let mut x = h[(end, end)];
            if start == end {
                // One real eigenvalue isolated.
                eigenvalues.push((x + shift_total, 0.0));
                if end == 0 {
                    break 'blocks;
                }
                end -= 1;
                break;
            }
            let mut y = h[(end - 1, end - 1)];
            let mut w = h[(end, end - 1)] * h[(end - 1, end)];
            if start == end - 1 {
                // A trailing 2x2 block: solve its eigenvalues directly.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = math::sqrt(math::abs(q));
                x += shift_total;
                if q >= 0.0 {
                    let z = p + if p >= 0.0 { z } else { -z };
                    let first = x + z;
                    let second = if z != 0.0 { x - w / z } else { first };
                    eigenvalues.push((first, 0.0));
                    eigenvalues.push((second, 0.0));
                } else {
                    eigenvalues.push((x + p, z));
                    eigenvalues.push((x + p, -z));
                }
                if end <= 1 {
                    break 'blocks;
                }
                end -= 2;
                break;
            }

            if iterations == 30 {
                return Err(Error::Numerical("eigensolver did not converge"));
            }
            if iterations == 10 || iterations == 20 {
                // Exceptional shift.
                shift_total += x;
                for i in 0..=end {
                    h[(i, i)] -= x;
                }
                let scale = math::abs(h[(end, end - 1)]) + math::abs(h[(end - 1, end - 2)]);
                x = 0.75 * scale;
                y = x;
                w = -0.4375 * scale * scale;
            }
            iterations += 1;

            // Locate the start of the bulge chase.
            let mut m = end - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = h[(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - rr - ss;
                r = h[(m + 2, m + 1)];
                let scale = math::abs(p) + math::abs(q) + math::abs(r);
                p /= scale;
                q /= scale;
                r /= scale;
                if m == start {
                    break;
                }
                let u = math::abs(h[(m, m - 1)]) * (math::abs(q) + math::abs(r));
                let v = math::abs(p)
                    * (math::abs(h[(m - 1, m - 1)]) + math::abs(z) + math::abs(h[(m + 1, m + 1)]));
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=end {
                h[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR sweep over rows start..=end.
            for k in m..end {
                let mut col_scale = 0.0;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if k != end - 1 { h[(k + 2, k - 1)] } else { 0.0 };
                    col_scale = math::abs(p) + math::abs(q) + math::abs(r);
                    if col_scale != 0.0 {
                        p /= col_scale;
                        q /= col_scale;
                        r /= col_scale;
                    }
                }
                let magnitude = math::sqrt(p * p + q * q + r * r);
                let s = if p >= 0.0 { magnitude } else { -magnitude };
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if start != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                } else {
                    h[(k, k - 1)] = -s * col_scale;
                }
                p += s;
                let x2 = p / s;
                let y2 = q / s;
                let z2 = r / s;
                q /= p;
                r /= p;
                for j in k..=end {
                    let mut pp = h[(k, j)] + q * h[(k + 1, j)];
                    if k != end - 1 {
                        pp += r * h[(k + 2, j)];
                        h[(k + 2, j)] -= pp * z2;
                    }
                    h[(k + 1, j)] -= pp * y2;
                    h[(k, j)] -= pp * x2;
                }
                let row_limit = end.min(k + 3);
                for i in start..=row_limit {
                    let mut pp = x2 * h[(i, k)] + y2 * h[(i, k + 1)];
                    if k != end - 1 {
                        pp += z2 * h[(i, k + 2)];
                        h[(i, k + 2)] -= pp * r;
                    }
                    h[(i, k + 1)] -= pp * q;
                    h[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(eigenvalues)
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the union merged two distinct components.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
