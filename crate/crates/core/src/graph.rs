//! Small simple graphs, their packed 64-bit codes, and graph6 text.
//!
//! Vertex pairs are numbered in column-major upper-triangle order:
//! `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...`, so pair `(i, j)` with
//! `i < j` sits at bit `j(j-1)/2 + i`. This is the same order graph6 uses,
//! which lets codes and graph6 strings convert by re-packing bits only.

use std::fmt;

use thiserror::Error;

/// Largest order handled anywhere in the crate. 45 pair bits fit in a `u64`.
pub const MAX_ORDER: usize = 10;

/// Bitset of vertices, bit `v` set when vertex `v` is a member.
pub type VertexSet = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unsupported order {0}: orders 1..={MAX_ORDER} are supported")]
    UnsupportedOrder(usize),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("code has bits outside the {pairs} pair positions of order {order}")]
    StrayBits { order: usize, pairs: usize },
    #[error("graph6 parse error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },
}

/// Number of unordered vertex pairs for `order` vertices.
pub const fn pair_count(order: usize) -> usize {
    order * order.saturating_sub(1) / 2
}

/// Bit position of the pair `(i, j)`, `i < j`.
#[inline]
pub const fn pair_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn check_order(order: usize) -> Result<(), GraphError> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(GraphError::UnsupportedOrder(order))
    }
}

/// A simple undirected graph on at most [`MAX_ORDER`] vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    order: u8,
    adj: [VertexSet; MAX_ORDER],
}

impl Graph {
    /// Edgeless graph of the given order.
    pub fn empty(order: usize) -> Result<Self, GraphError> {
        check_order(order)?;
        Ok(Graph {
            order: order as u8,
            adj: [0; MAX_ORDER],
        })
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(order)?;
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(order: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(order)?;
        for v in 0..order {
            g.adj[v] = g.all_vertices() & !(1 << v);
        }
        Ok(g)
    }

    pub fn path(order: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..order).map(|v| (v - 1, v)).collect();
        Graph::from_edges(order, &edges)
    }

    /// Cycle on `order >= 3` vertices.
    pub fn cycle(order: usize) -> Result<Self, GraphError> {
        let mut g = Graph::path(order)?;
        if order >= 3 {
            g.add_edge(0, order - 1);
        }
        Ok(g)
    }

    /// Star with centre 0 and `order - 1` leaves.
    pub fn star(order: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..order).map(|v| (0, v)).collect();
        Graph::from_edges(order, &edges)
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        let mut g = Graph::empty(a + b)?;
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Mask with one bit per vertex.
    #[inline]
    pub fn all_vertices(&self) -> VertexSet {
        ((1u32 << self.order) - 1) as VertexSet
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.order()]
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.order();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    order: n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_edge(u, v);
        Ok(())
    }

    /// Adds `{u, v}`. Panics in debug builds on a loop or out-of-range vertex.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.order() && v < self.order());
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
    }

    /// Edges `(i, j)` with `i < j`, in ascending pair-bit order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.order()).flat_map(move |j| {
            (0..j)
                .filter(move |&i| self.has_edge(i, j))
                .map(move |i| (i, j))
        })
    }

    /// Vertex degrees, non-increasing.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph {
            order: self.order,
            adj: [0; MAX_ORDER],
        };
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Removes vertex `v`, shifting higher labels down by one. Order must stay >= 1.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(self.order() - 1)?;
        let shift = |w: usize| if w > v { w - 1 } else { w };
        for (a, b) in self.edges() {
            if a != v && b != v {
                g.add_edge(shift(a), shift(b));
            }
        }
        Ok(g)
    }

    /// Adds a new vertex (label `order`) joined to `nbrs`.
    pub fn with_vertex(&self, nbrs: VertexSet) -> Result<Graph, GraphError> {
        let n = self.order();
        check_order(n + 1)?;
        let mut g = *self;
        g.order += 1;
        g.adj[n] = nbrs & self.all_vertices();
        for u in 0..n {
            if nbrs & (1 << u) != 0 {
                g.adj[u] |= 1 << n;
            }
        }
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let all = self.all_vertices();
        let mut g = *self;
        for v in 0..self.order() {
            g.adj[v] = all & !self.adj[v] & !(1 << v);
        }
        g
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn component_of(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen: VertexSet = 1 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & within & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    /// Whether the subgraph induced on `within` is connected (empty counts as connected).
    pub fn is_connected_within(&self, within: VertexSet) -> bool {
        if within == 0 {
            return true;
        }
        self.component_of(within.trailing_zeros() as usize, within) == within
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.all_vertices())
    }

    pub fn code(&self) -> GraphCode {
        let mut bits = 0u64;
        for (i, j) in self.edges() {
            bits |= 1 << pair_index(i, j);
        }
        GraphCode {
            order: self.order,
            bits,
        }
    }

    /// Canonical code: the minimum code over all relabelings.
    pub fn canonical_code(&self) -> GraphCode {
        crate::canon::canonical_form(self).code
    }

    /// Size of the automorphism group.
    pub fn automorphism_count(&self) -> u64 {
        crate::canon::canonical_form(self).automorphisms
    }

    pub fn to_graph6(&self) -> String {
        encode_graph6(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().collect();
        write!(f, "Graph(n={}, edges={:?})", self.order, edges)
    }
}

/// Loopy multigraph on at most [`MAX_ORDER`] vertices, the shape that edge
/// contraction produces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Multigraph {
    order: u8,
    mult: [[u8; MAX_ORDER]; MAX_ORDER],
    loops: [u8; MAX_ORDER],
}

impl Multigraph {
    pub fn empty(order: usize) -> Result<Self, GraphError> {
        check_order(order)?;
        Ok(Multigraph {
            order: order as u8,
            mult: [[0; MAX_ORDER]; MAX_ORDER],
            loops: [0; MAX_ORDER],
        })
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Adds `count` parallel edges between `u` and `v`, or loops when equal.
    pub fn add_edges(&mut self, u: usize, v: usize, count: u8) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.order() {
                return Err(GraphError::VertexOutOfRange {
                    vertex: x,
                    order: self.order(),
                });
            }
        }
        if u == v {
            self.loops[u] += count;
        } else {
            self.mult[u][v] += count;
            self.mult[v][u] += count;
        }
        Ok(())
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u8 {
        self.mult[u][v]
    }

    pub fn loops(&self, v: usize) -> u8 {
        self.loops[v]
    }

    pub fn loop_count(&self) -> usize {
        self.loops[..self.order()].iter().map(|&l| l as usize).sum()
    }

    /// Edges counted with multiplicity, loops included.
    pub fn edge_count(&self) -> usize {
        let n = self.order();
        let mut m = self.loop_count();
        for v in 0..n {
            for u in 0..v {
                m += self.mult[u][v] as usize;
            }
        }
        m
    }

    pub fn without_loops(&self) -> Multigraph {
        Multigraph {
            loops: [0; MAX_ORDER],
            ..*self
        }
    }

    /// The simple graph on the same vertices with an edge wherever the
    /// multiplicity is positive.
    pub fn support(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n).expect("order already checked");
        for v in 0..n {
            for u in 0..v {
                if self.mult[u][v] > 0 {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.support().is_connected()
    }

    pub(crate) fn multiplicities(&self) -> &[[u8; MAX_ORDER]; MAX_ORDER] {
        &self.mult
    }

    /// Removes every edge between `u` and `v`.
    pub fn delete_edges(&self, u: usize, v: usize) -> Multigraph {
        let mut out = *self;
        out.mult[u][v] = 0;
        out.mult[v][u] = 0;
        out
    }

    /// Merges `v` into `u`; the `u`-`v` edges become loops at `u`. The last
    /// vertex is renumbered to `v`.
    pub fn contract(&self, u: usize, v: usize) -> Multigraph {
        assert!(u != v && u < self.order() && v < self.order());
        let n = self.order();
        let mut out = *self;
        out.loops[u] += out.loops[v] + out.mult[u][v];
        out.mult[u][v] = 0;
        out.mult[v][u] = 0;
        for x in 0..n {
            if x != u && x != v {
                let m = out.mult[v][x];
                out.mult[u][x] += m;
                out.mult[x][u] += m;
            }
        }
        let last = n - 1;
        if v != last {
            for x in 0..n {
                out.mult[v][x] = out.mult[last][x];
                out.mult[x][v] = out.mult[x][last];
            }
            out.mult[v][v] = 0;
            out.loops[v] = out.loops[last];
        }
        for x in 0..n {
            out.mult[last][x] = 0;
            out.mult[x][last] = 0;
        }
        out.loops[last] = 0;
        out.order -= 1;
        out
    }
}

impl From<&Graph> for Multigraph {
    fn from(g: &Graph) -> Self {
        let mut m = Multigraph::empty(g.order()).expect("graph order is valid");
        for (u, v) in g.edges() {
            m.add_edges(u, v, 1).expect("edge endpoints are in range");
        }
        m
    }
}

/// Packed upper-triangle adjacency of a graph plus its order.
///
/// Orders compare first, then the bit-string as an unsigned integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphCode {
    pub order: u8,
    pub bits: u64,
}

impl GraphCode {
    pub const BYTES: usize = 9;

    pub fn new(order: usize, bits: u64) -> Result<Self, GraphError> {
        check_order(order)?;
        let pairs = pair_count(order);
        if pairs < 64 && bits >> pairs != 0 {
            return Err(GraphError::StrayBits { order, pairs });
        }
        Ok(GraphCode {
            order: order as u8,
            bits,
        })
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn graph(&self) -> Graph {
        let mut g = Graph {
            order: self.order,
            adj: [0; MAX_ORDER],
        };
        let mut bits = self.bits;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (i, j) = pair_of_index(k);
            g.add_edge(i, j);
        }
        g
    }

    /// Little-endian `(u8 order, u64 bits)`.
    pub fn to_le_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[0] = self.order;
        out[1..].copy_from_slice(&self.bits.to_le_bytes());
        out
    }

    pub fn from_le_bytes(bytes: [u8; Self::BYTES]) -> Result<Self, GraphError> {
        let mut bits = [0u8; 8];
        bits.copy_from_slice(&bytes[1..]);
        GraphCode::new(bytes[0] as usize, u64::from_le_bytes(bits))
    }
}

impl fmt::Display for GraphCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.order, self.bits)
    }
}

/// Inverse of [`pair_index`].
pub fn pair_of_index(k: usize) -> (usize, usize) {
    let mut j = 1;
    while pair_index(0, j + 1) <= k {
        j += 1;
    }
    (k - pair_index(0, j), j)
}

pub fn code_of(g: &Graph) -> GraphCode {
    g.code()
}

pub fn graph_of(code: GraphCode) -> Result<Graph, GraphError> {
    GraphCode::new(code.order(), code.bits).map(|c| c.graph())
}

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let bits = g.code().bits;
    let pairs = pair_count(n);
    let mut out = String::with_capacity(1 + pairs.div_ceil(6));
    out.push((63 + n as u8) as char);
    for chunk in 0..pairs.div_ceil(6) {
        let mut six = 0u8;
        for b in 0..6 {
            let k = chunk * 6 + b;
            if k < pairs && bits >> k & 1 == 1 {
                six |= 1 << (5 - b);
            }
        }
        out.push((63 + six) as char);
    }
    out
}

/// Parses one graph6 string. A leading `>>graph6<<` header and surrounding
/// whitespace are accepted.
pub fn decode_graph6(text: &str) -> Result<Graph, GraphError> {
    let mut offset = 0;
    let mut s = text.trim_end().as_bytes();
    if let Some(rest) = s.strip_prefix(b">>graph6<<") {
        s = rest;
        offset = 10;
    }
    let err = |offset: usize, message: &str| GraphError::Graph6 {
        offset,
        message: message.to_string(),
    };
    let &first = s.first().ok_or_else(|| err(offset, "empty input"))?;
    if !(63..=126).contains(&first) {
        return Err(err(offset, "order byte outside '?'..='~'"));
    }
    if first == 126 {
        return Err(GraphError::UnsupportedOrder(63));
    }
    let n = (first - 63) as usize;
    check_order(n)?;
    let pairs = pair_count(n);
    let body = &s[1..];
    let expected = pairs.div_ceil(6);
    if body.len() != expected {
        return Err(err(
            offset + 1 + body.len().min(expected),
            &format!("expected {expected} data bytes, found {}", body.len()),
        ));
    }
    let mut bits = 0u64;
    for (c, &byte) in body.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(err(offset + 1 + c, "data byte outside '?'..='~'"));
        }
        let six = byte - 63;
        for b in 0..6 {
            if six >> (5 - b) & 1 == 1 {
                let k = c * 6 + b;
                if k >= pairs {
                    return Err(err(offset + 1 + c, "non-zero padding bit"));
                }
                bits |= 1 << k;
            }
        }
    }
    Ok(GraphCode::new(n, bits)?.graph())
}
