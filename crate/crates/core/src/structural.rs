//! Combinatorial invariants: distances, cycles, cuts, predicates,
//! regularity, independence and matchings, subgraph patterns, planarity.
//!
//! Small-order conventions follow the published count tables: `K1` is
//! Hamiltonian, Eulerian, bipartite, chordal, strongly and distance regular
//! but (by default) not regular; `K2` is neither Hamiltonian nor Eulerian.
//! Acyclic graphs report girth and circumference 0.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::blocks;
use crate::graph::{pair_index, Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown subgraph pattern {0:?}; known: {known}", known = Pattern::names().join(", "))]
    UnknownPattern(String),
}

/// Conventions that the published tables fix differently from textbooks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conventions {
    /// Whether the single-vertex graph counts as regular. The tables treat it
    /// as not regular.
    pub k1_regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distances {
    pub diameter: usize,
    pub radius: usize,
    pub eccentricity: Vec<usize>,
}

/// All-pairs shortest path lengths by BFS over bitsets.
pub fn distance_matrix(g: &Graph) -> Result<Vec<Vec<usize>>, InvariantError> {
    let n = g.order();
    let mut dist = vec![vec![usize::MAX; n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        let mut seen: VertexSet = 1 << s;
        let mut layer: VertexSet = 1 << s;
        let mut d = 0;
        while layer != 0 {
            let mut bits = layer;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                row[v] = d;
            }
            let mut next = 0;
            let mut bits = layer;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= g.neighbors(v);
            }
            layer = next & !seen;
            seen |= layer;
            d += 1;
        }
        if seen != g.all_vertices() {
            return Err(InvariantError::Disconnected);
        }
    }
    Ok(dist)
}

pub fn distances(g: &Graph) -> Result<Distances, InvariantError> {
    let dist = distance_matrix(g)?;
    let eccentricity: Vec<usize> = dist
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .collect();
    Ok(Distances {
        diameter: eccentricity.iter().copied().max().unwrap_or(0),
        radius: eccentricity.iter().copied().min().unwrap_or(0),
        eccentricity,
    })
}

/// Shortest cycle length, 0 when acyclic.
pub fn girth(g: &Graph) -> usize {
    let n = g.order();
    let mut best = usize::MAX;
    for root in 0..n {
        let mut dist = [usize::MAX; 16];
        let mut parent = [usize::MAX; 16];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut nbrs = g.neighbors(v);
            while nbrs != 0 {
                let u = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    parent[u] = v;
                    queue.push_back(u);
                } else if parent[v] != u {
                    best = best.min(dist[u] + dist[v] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

/// Longest cycle length, 0 when acyclic.
///
/// For each start `s`, a subset DP over vertices `>= s` records the end
/// points of simple paths from `s` covering each subset.
pub fn circumference(g: &Graph) -> usize {
    let n = g.order();
    let mut best = 0;
    let mut reach = vec![0 as VertexSet; 1 << n];
    for s in 0..n {
        if n - s <= best {
            break;
        }
        let allowed: VertexSet = g.all_vertices() & !((1 << s) - 1);
        reach.iter_mut().for_each(|r| *r = 0);
        reach[1 << s] = 1 << s;
        for mask in (1usize << s)..(1 << n) {
            let ends = reach[mask];
            if ends == 0 {
                continue;
            }
            let size = mask.count_ones() as usize;
            if size >= 3 && ends & g.neighbors(s) != 0 {
                best = best.max(size);
                if best == n {
                    return n;
                }
            }
            let mut e = ends;
            while e != 0 {
                let v = e.trailing_zeros() as usize;
                e &= e - 1;
                let mut ext = g.neighbors(v) & allowed & !(mask as VertexSet);
                while ext != 0 {
                    let u = ext.trailing_zeros() as usize;
                    ext &= ext - 1;
                    reach[mask | 1 << u] |= 1 << u;
                }
            }
        }
    }
    best
}

pub fn cycle_lengths(g: &Graph) -> (usize, usize) {
    (girth(g), circumference(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutStructure {
    pub articulation_points: usize,
    pub endpoints: usize,
    pub vertex_connectivity: usize,
    pub edge_connectivity: usize,
}

pub fn cut_structure(g: &Graph) -> Result<CutStructure, InvariantError> {
    if !g.is_connected() {
        return Err(InvariantError::Disconnected);
    }
    let adj: Vec<VertexSet> = (0..g.order()).map(|v| g.neighbors(v)).collect();
    let decomposition = blocks::decompose(&adj, g.all_vertices());
    Ok(CutStructure {
        articulation_points: decomposition.articulation.count_ones() as usize,
        endpoints: (0..g.order()).filter(|&v| g.degree(v) == 1).count(),
        vertex_connectivity: vertex_connectivity(g),
        edge_connectivity: edge_connectivity(g),
    })
}

/// Fewest vertices whose removal disconnects the graph; `n - 1` for `K_n`.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.order();
    let all = g.all_vertices();
    if g.edge_count() == n * (n - 1) / 2 {
        return n - 1;
    }
    let mut best = n - 1;
    for removed in 0..=all {
        let k = removed.count_ones() as usize;
        if k >= best || removed & !all != 0 {
            continue;
        }
        let rest = all & !removed;
        if rest.count_ones() >= 2 && !g.is_connected_within(rest) {
            best = k;
        }
    }
    best
}

/// Fewest edges whose removal disconnects the graph (unit-capacity max flow).
pub fn edge_connectivity(g: &Graph) -> usize {
    let n = g.order();
    (1..n).map(|t| max_flow(g, 0, t)).min().unwrap_or(0)
}

fn max_flow(g: &Graph, s: usize, t: usize) -> usize {
    let n = g.order();
    // residual[u][v] for the undirected unit edges
    let mut residual = [[0i8; 16]; 16];
    for (u, v) in g.edges() {
        residual[u][v] = 1;
        residual[v][u] = 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = [usize::MAX; 16];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if prev[u] == usize::MAX && residual[v][u] > 0 {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut v = t;
        while v != s {
            let p = prev[v];
            residual[p][v] -= 1;
            residual[v][p] += 1;
            v = p;
        }
        flow += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Predicates {
    pub is_bipartite: bool,
    pub is_tree: bool,
    pub is_eulerian: bool,
    pub is_hamiltonian: bool,
    pub is_chordal: bool,
}

pub fn boolean_predicates(g: &Graph) -> Result<Predicates, InvariantError> {
    if !g.is_connected() {
        return Err(InvariantError::Disconnected);
    }
    Ok(Predicates {
        is_bipartite: is_bipartite(g),
        is_tree: g.edge_count() + 1 == g.order(),
        is_eulerian: is_eulerian(g),
        is_hamiltonian: is_hamiltonian(g),
        is_chordal: is_chordal(g),
    })
}

pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.order();
    let mut color = [u8::MAX; 16];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let mut nbrs = g.neighbors(v);
            while nbrs != 0 {
                let u = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if color[u] == u8::MAX {
                    color[u] = 1 - color[v];
                    stack.push(u);
                } else if color[u] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Connected with every degree even. `K1` qualifies, `K2` does not.
pub fn is_eulerian(g: &Graph) -> bool {
    g.is_connected() && (0..g.order()).all(|v| g.degree(v).is_multiple_of(2))
}

/// Hamiltonian cycle exists. `K1` counts as Hamiltonian, `K2` does not.
pub fn is_hamiltonian(g: &Graph) -> bool {
    match g.order() {
        1 => true,
        2 => false,
        n => g.min_degree() >= 2 && circumference(g) == n,
    }
}

/// Chordality via a maximum cardinality search ordering, checked as a
/// perfect elimination ordering.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.order();
    let mut weight = [0usize; 16];
    let mut numbered: VertexSet = 0;
    // position in the elimination order: MCS numbers from the back
    let mut elim_pos = [0usize; 16];
    for step in (0..n).rev() {
        let v = (0..n)
            .filter(|&v| numbered & (1 << v) == 0)
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unnumbered vertex remains");
        numbered |= 1 << v;
        elim_pos[v] = step;
        let mut nbrs = g.neighbors(v) & !numbered;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            weight[u] += 1;
        }
    }
    for v in 0..n {
        let later: VertexSet = (0..n)
            .filter(|&u| g.has_edge(v, u) && elim_pos[u] > elim_pos[v])
            .fold(0, |acc, u| acc | 1 << u);
        if later == 0 {
            continue;
        }
        let first = (0..n)
            .filter(|&u| later & (1 << u) != 0)
            .min_by_key(|&u| elim_pos[u])
            .expect("non-empty");
        let rest = later & !(1 << first);
        if rest & !g.neighbors(first) != 0 {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub is_regular: bool,
    pub is_strongly_regular: bool,
    pub is_distance_regular: bool,
}

pub fn regularity(g: &Graph, conventions: Conventions) -> Result<Regularity, InvariantError> {
    let dist = distance_matrix(g)?;
    let n = g.order();
    let degree_regular = (0..n).all(|v| g.degree(v) == g.degree(0));
    let is_regular = if n == 1 {
        conventions.k1_regular
    } else {
        degree_regular
    };
    Ok(Regularity {
        is_regular,
        is_strongly_regular: degree_regular && is_strongly_regular(g),
        is_distance_regular: is_distance_regular(g, &dist),
    })
}

/// Constant common-neighbour counts over adjacent and over non-adjacent
/// pairs. Complete graphs qualify with the non-adjacent condition vacuous.
fn is_strongly_regular(g: &Graph) -> bool {
    let n = g.order();
    let mut adjacent = None;
    let mut nonadjacent = None;
    for v in 0..n {
        for u in v + 1..n {
            let common = (g.neighbors(u) & g.neighbors(v)).count_ones();
            let slot = if g.has_edge(u, v) {
                &mut adjacent
            } else {
                &mut nonadjacent
            };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return false,
                Some(_) => {}
            }
        }
    }
    true
}

/// Intersection numbers `b_i`, `c_i` depend only on the distance `i`.
fn is_distance_regular(g: &Graph, dist: &[Vec<usize>]) -> bool {
    let n = g.order();
    let mut b: Vec<Option<usize>> = vec![None; n + 1];
    let mut c: Vec<Option<usize>> = vec![None; n + 1];
    for row in dist {
        for w in 0..n {
            let i = row[w];
            let mut up = 0;
            let mut down = 0;
            let mut nbrs = g.neighbors(w);
            while nbrs != 0 {
                let x = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if row[x] == i + 1 {
                    up += 1;
                } else if i > 0 && row[x] == i - 1 {
                    down += 1;
                }
            }
            for (slot, value) in [(&mut b[i], up), (&mut c[i], down)] {
                match *slot {
                    None => *slot = Some(value),
                    Some(x) if x != value => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Matchings {
    pub independence_number: usize,
    pub clique_number: usize,
    pub matching_number: usize,
    /// Number of matchings, the empty one included.
    pub hosoya_index: u64,
}

pub fn independence_and_matchings(g: &Graph) -> Matchings {
    let (matching_number, hosoya_index) = matching_counts(g);
    Matchings {
        independence_number: independence_number(g),
        clique_number: independence_number(&g.complement()),
        matching_number,
        hosoya_index,
    }
}

pub fn independence_number(g: &Graph) -> usize {
    fn best(g: &Graph, candidates: VertexSet) -> usize {
        if candidates == 0 {
            return 0;
        }
        let v = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1 << v);
        let with_v = 1 + best(g, rest & !g.neighbors(v));
        if g.neighbors(v) & rest == 0 {
            return with_v;
        }
        if with_v > rest.count_ones() as usize {
            return with_v;
        }
        with_v.max(best(g, rest))
    }
    best(g, g.all_vertices())
}

/// Maximum matching size and total number of matchings, by recursion on the
/// lowest remaining vertex with a subset memo.
pub fn matching_counts(g: &Graph) -> (usize, u64) {
    let n = g.order();
    let mut size = vec![0usize; 1 << n];
    let mut count = vec![0u64; 1 << n];
    count[0] = 1;
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = size[rest];
        let mut total = count[rest];
        let mut nbrs = g.neighbors(v) as usize & rest;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            let sub = rest & !(1 << u);
            best = best.max(1 + size[sub]);
            total += count[sub];
        }
        size[mask] = best;
        count[mask] = total;
    }
    let full = (1usize << n) - 1;
    (size[full], count[full])
}

/// Named patterns for (not necessarily induced) subgraph counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    K3,
    K4,
    K5,
    C4,
    C5,
    C6,
    /// Triangle `0-1-2` with pendants `3` on `0` and `4` on `1`.
    Bull,
    /// Two triangles sharing vertex `0`: `0-1-2` and `0-3-4`.
    Bowtie,
    /// Triangle `0-1-2` with two pendants `3`, `4` on vertex `0`
    /// (the bowtie with edge `3-4` removed).
    OpenBowtie,
    /// `K4` minus an edge.
    Diamond,
}

impl Pattern {
    pub const ALL: [Pattern; 10] = [
        Pattern::K3,
        Pattern::K4,
        Pattern::K5,
        Pattern::C4,
        Pattern::C5,
        Pattern::C6,
        Pattern::Bull,
        Pattern::Bowtie,
        Pattern::OpenBowtie,
        Pattern::Diamond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::K3 => "k3",
            Pattern::K4 => "k4",
            Pattern::K5 => "k5",
            Pattern::C4 => "c4",
            Pattern::C5 => "c5",
            Pattern::C6 => "c6",
            Pattern::Bull => "bull",
            Pattern::Bowtie => "bowtie",
            Pattern::OpenBowtie => "open_bowtie",
            Pattern::Diamond => "diamond",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Pattern::ALL.iter().map(|p| p.name()).collect()
    }

    pub fn graph(self) -> Graph {
        let g = match self {
            Pattern::K3 => Graph::complete(3),
            Pattern::K4 => Graph::complete(4),
            Pattern::K5 => Graph::complete(5),
            Pattern::C4 => Graph::cycle(4),
            Pattern::C5 => Graph::cycle(5),
            Pattern::C6 => Graph::cycle(6),
            Pattern::Bull => Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)]),
            Pattern::Bowtie => {
                Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (0, 4), (3, 4)])
            }
            Pattern::OpenBowtie => Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)]),
            Pattern::Diamond => Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        };
        g.expect("pattern graphs are valid")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = InvariantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase().replace('-', "_");
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| InvariantError::UnknownPattern(s.to_string()))
    }
}

/// Number of subgraphs of `g` isomorphic to `pattern`: edge-preserving
/// injections divided by the pattern's automorphism count.
pub fn subgraph_count(g: &Graph, pattern: Pattern) -> u64 {
    let h = pattern.graph();
    embeddings(&h, g) / embeddings(&h, &h)
}

/// Count of injective maps `h -> g` sending edges to edges.
fn embeddings(h: &Graph, g: &Graph) -> u64 {
    let k = h.order();
    if k > g.order() || h.edge_count() > g.edge_count() {
        return 0;
    }
    // visit pattern vertices so that each one after the first has an
    // earlier neighbour
    let mut order = vec![0usize];
    let mut placed: VertexSet = 1;
    while order.len() < k {
        let next = (0..k)
            .find(|&v| placed & (1 << v) == 0 && h.neighbors(v) & placed != 0)
            .or_else(|| (0..k).find(|&v| placed & (1 << v) == 0))
            .expect("unplaced vertex");
        placed |= 1 << next;
        order.push(next);
    }
    let mut image = [0usize; 16];
    count_maps(h, g, &order, 0, &mut image, 0)
}

fn count_maps(
    h: &Graph,
    g: &Graph,
    order: &[usize],
    depth: usize,
    image: &mut [usize; 16],
    used: VertexSet,
) -> u64 {
    if depth == order.len() {
        return 1;
    }
    let v = order[depth];
    let mut candidates = g.all_vertices() & !used;
    for &u in &order[..depth] {
        if h.has_edge(u, v) {
            candidates &= g.neighbors(image[u]);
        }
    }
    let mut total = 0;
    while candidates != 0 {
        let x = candidates.trailing_zeros() as usize;
        candidates &= candidates - 1;
        if g.degree(x) < h.degree(v) {
            continue;
        }
        image[v] = x;
        total += count_maps(h, g, order, depth + 1, image, used | 1 << x);
    }
    total
}

/// Planarity by path addition on each block (Demoucron-Malgrange-Pertuiset).
pub fn is_planar(g: &Graph) -> bool {
    let n = g.order();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    let adj: Vec<VertexSet> = (0..n).map(|v| g.neighbors(v)).collect();
    let decomposition = blocks::decompose(&adj, g.all_vertices());
    decomposition
        .blocks
        .iter()
        .all(|&block| block_is_planar(g, block))
}

fn edge_bit(u: usize, v: usize) -> u64 {
    let (i, j) = if u < v { (u, v) } else { (v, u) };
    1 << pair_index(i, j)
}

enum Fragment {
    Edge(usize, usize),
    Component(VertexSet),
}

fn block_is_planar(g: &Graph, block: VertexSet) -> bool {
    let nb = block.count_ones() as usize;
    if nb <= 4 {
        return true;
    }
    let adj = |v: usize| g.neighbors(v) & block;
    let mut block_edges = 0u64;
    for (u, v) in g.edges() {
        if block & (1 << u) != 0 && block & (1 << v) != 0 {
            block_edges |= edge_bit(u, v);
        }
    }
    if block_edges.count_ones() as usize > 3 * nb - 6 {
        return false;
    }

    // initial cycle: an edge a-b closed by a shortest a..b path avoiding it
    let a = block.trailing_zeros() as usize;
    let b = adj(a).trailing_zeros() as usize;
    let Some(path) = bfs_path(g, block, a, 1 << b, |x, y| !(x == a && y == b)) else {
        return true;
    };
    let mut faces: Vec<Vec<usize>> = vec![path.clone(), path.clone()];
    let mut emb_vertices: VertexSet = path.iter().fold(0, |acc, &v| acc | 1 << v);
    let mut emb_edges = path
        .windows(2)
        .fold(0u64, |acc, w| acc | edge_bit(w[0], w[1]));
    emb_edges |= edge_bit(a, b);

    while emb_edges != block_edges {
        let mut fragments: Vec<(Fragment, VertexSet)> = Vec::new();
        let mut pending = block_edges & !emb_edges;
        while pending != 0 {
            let k = pending.trailing_zeros() as usize;
            pending &= pending - 1;
            let (u, v) = crate::graph::pair_of_index(k);
            if emb_vertices & (1 << u) != 0 && emb_vertices & (1 << v) != 0 {
                fragments.push((Fragment::Edge(u, v), 1 << u | 1 << v));
            }
        }
        let mut outside = block & !emb_vertices;
        while outside != 0 {
            let start = outside.trailing_zeros() as usize;
            let comp = g.component_of(start, block & !emb_vertices);
            outside &= !comp;
            let attach = (0..16)
                .filter(|&x| comp & (1 << x) != 0)
                .fold(0, |acc, x| acc | (adj(x) & emb_vertices));
            fragments.push((Fragment::Component(comp), attach));
        }

        let face_masks: Vec<VertexSet> = faces
            .iter()
            .map(|f| f.iter().fold(0, |acc, &v| acc | 1 << v))
            .collect();
        let mut choice: Option<(usize, usize, usize)> = None;
        for (fi, (_, attach)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = face_masks
                .iter()
                .enumerate()
                .filter(|(_, &m)| m & attach == *attach)
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                count => {
                    if choice.is_none_or(|(_, _, c)| count < c) {
                        choice = Some((fi, admissible[0], count));
                    }
                }
            }
        }
        let (fi, face_index, _) = choice.expect("at least one fragment");
        let path = match fragments[fi] {
            (Fragment::Edge(u, v), _) => vec![u, v],
            (Fragment::Component(comp), attach) => {
                let start = attach.trailing_zeros() as usize;
                let targets = attach & !(1 << start);
                let inner = comp | 1 << start | targets;
                bfs_path(g, inner, start, targets, |x, y| {
                    // interior vertices must come from the component
                    comp & (1 << y) != 0 || (comp & (1 << x) != 0)
                })
                .expect("fragment has two attachments")
            }
        };
        let face = faces.swap_remove(face_index);
        let (first, second) = split_face(&face, &path);
        faces.push(first);
        faces.push(second);
        for w in path.windows(2) {
            emb_edges |= edge_bit(w[0], w[1]);
        }
        emb_vertices |= path.iter().fold(0, |acc, &v| acc | 1 << v);
    }
    true
}

/// Shortest path from `start` to any vertex of `targets` inside `within`,
/// using only steps `x -> y` for which `allow(x, y)` holds.
fn bfs_path(
    g: &Graph,
    within: VertexSet,
    start: usize,
    targets: VertexSet,
    allow: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut prev = [usize::MAX; 16];
    prev[start] = start;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let mut nbrs = g.neighbors(x) & within;
        while nbrs != 0 {
            let y = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if prev[y] != usize::MAX || !allow(x, y) {
                continue;
            }
            prev[y] = x;
            if targets & (1 << y) != 0 {
                let mut path = vec![y];
                let mut v = y;
                while v != start {
                    v = prev[v];
                    path.push(v);
                }
                path.reverse();
                return Some(path);
            }
            // targets are endpoints only; never walk through them
            queue.push_back(y);
        }
    }
    None
}

/// Splits a face cycle along a path joining two of its vertices.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().expect("path has two ends");
    let len = face.len();
    let ia = face.iter().position(|&v| v == a).expect("a on face");
    let ib = face.iter().position(|&v| v == b).expect("b on face");
    let walk = |from: usize, to: usize| -> Vec<usize> {
        let mut out = vec![face[from]];
        let mut i = from;
        while i != to {
            i = (i + 1) % len;
            out.push(face[i]);
        }
        out
    };
    let interior = &path[1..path.len() - 1];
    let mut first = walk(ia, ib);
    first.extend(interior.iter().rev());
    let mut second = walk(ib, ia);
    second.extend(interior.iter());
    (first, second)
}

/// Every structural invariant of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralProfile {
    pub diameter: usize,
    pub radius: usize,
    pub girth: usize,
    pub circumference: usize,
    pub articulation_points: usize,
    pub endpoints: usize,
    pub vertex_connectivity: usize,
    pub edge_connectivity: usize,
    pub is_bipartite: bool,
    pub is_tree: bool,
    pub is_eulerian: bool,
    pub is_hamiltonian: bool,
    pub is_chordal: bool,
    pub is_planar: bool,
    pub is_regular: bool,
    pub is_strongly_regular: bool,
    pub is_distance_regular: bool,
    pub independence_number: usize,
    pub clique_number: usize,
    pub matching_number: usize,
    pub hosoya_index: u64,
    /// Indexed like [`Pattern::ALL`].
    pub subgraph_counts: [u64; 10],
}

impl StructuralProfile {
    pub fn subgraph(&self, pattern: Pattern) -> u64 {
        self.subgraph_counts[Pattern::ALL
            .iter()
            .position(|&p| p == pattern)
            .expect("pattern listed")]
    }
}

pub fn structural_profile(
    g: &Graph,
    conventions: Conventions,
) -> Result<StructuralProfile, InvariantError> {
    let d = distances(g)?;
    let cuts = cut_structure(g)?;
    let preds = boolean_predicates(g)?;
    let reg = regularity(g, conventions)?;
    let m = independence_and_matchings(g);
    let (girth, circumference) = cycle_lengths(g);
    let mut subgraph_counts = [0u64; 10];
    for (slot, p) in subgraph_counts.iter_mut().zip(Pattern::ALL) {
        *slot = subgraph_count(g, p);
    }
    Ok(StructuralProfile {
        diameter: d.diameter,
        radius: d.radius,
        girth,
        circumference,
        articulation_points: cuts.articulation_points,
        endpoints: cuts.endpoints,
        vertex_connectivity: cuts.vertex_connectivity,
        edge_connectivity: cuts.edge_connectivity,
        is_bipartite: preds.is_bipartite,
        is_tree: preds.is_tree,
        is_eulerian: preds.is_eulerian,
        is_hamiltonian: preds.is_hamiltonian,
        is_chordal: preds.is_chordal,
        is_planar: is_planar(g),
        is_regular: reg.is_regular,
        is_strongly_regular: reg.is_strongly_regular,
        is_distance_regular: reg.is_distance_regular,
        independence_number: m.independence_number,
        clique_number: m.clique_number,
        matching_number: m.matching_number,
        hosoya_index: m.hosoya_index,
        subgraph_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        Graph::from_edges(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn distances_of_paths_and_cliques() {
        let d = distances(&Graph::path(4).unwrap()).unwrap();
        assert_eq!((d.diameter, d.radius), (3, 2));
        assert_eq!(distances(&Graph::complete(5).unwrap()).unwrap().diameter, 1);
        let k1 = distances(&Graph::empty(1).unwrap()).unwrap();
        assert_eq!((k1.diameter, k1.radius), (0, 0));
        assert_eq!(
            distances(&Graph::empty(2).unwrap()),
            Err(InvariantError::Disconnected)
        );
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_lengths(&Graph::star(5).unwrap()), (0, 0));
        assert_eq!(cycle_lengths(&Graph::cycle(5).unwrap()), (5, 5));
        assert_eq!(cycle_lengths(&Graph::complete(6).unwrap()), (3, 6));
        assert_eq!(cycle_lengths(&petersen()), (5, 9));
        let k23 = Graph::complete_bipartite(2, 3).unwrap();
        assert_eq!(cycle_lengths(&k23), (4, 4));
    }

    #[test]
    fn cuts_of_small_graphs() {
        let p4 = cut_structure(&Graph::path(4).unwrap()).unwrap();
        assert_eq!(
            p4,
            CutStructure {
                articulation_points: 2,
                endpoints: 2,
                vertex_connectivity: 1,
                edge_connectivity: 1,
            }
        );
        let k5 = cut_structure(&Graph::complete(5).unwrap()).unwrap();
        assert_eq!((k5.vertex_connectivity, k5.edge_connectivity), (4, 4));
        let k1 = cut_structure(&Graph::empty(1).unwrap()).unwrap();
        assert_eq!((k1.vertex_connectivity, k1.edge_connectivity), (0, 0));
        let p = cut_structure(&petersen()).unwrap();
        assert_eq!((p.vertex_connectivity, p.edge_connectivity), (3, 3));
    }

    #[test]
    fn predicate_conventions() {
        let k1 = boolean_predicates(&Graph::empty(1).unwrap()).unwrap();
        assert!(
            k1.is_bipartite && k1.is_tree && k1.is_eulerian && k1.is_hamiltonian && k1.is_chordal
        );
        let k2 = boolean_predicates(&Graph::complete(2).unwrap()).unwrap();
        assert!(!k2.is_hamiltonian && !k2.is_eulerian && k2.is_tree);
        assert!(!is_chordal(&Graph::cycle(4).unwrap()));
        assert!(is_chordal(&Graph::star(6).unwrap()));
        assert!(is_chordal(&Graph::complete(6).unwrap()));
        assert!(!is_hamiltonian(&petersen()));
        assert!(is_hamiltonian(&Graph::cycle(7).unwrap()));
        assert!(!is_bipartite(&Graph::cycle(5).unwrap()));
    }

    #[test]
    fn regularity_examples() {
        let none = Conventions::default();
        let c5 = regularity(&Graph::cycle(5).unwrap(), none).unwrap();
        assert!(c5.is_regular && c5.is_strongly_regular && c5.is_distance_regular);
        let c6 = regularity(&Graph::cycle(6).unwrap(), none).unwrap();
        assert!(c6.is_regular && !c6.is_strongly_regular && c6.is_distance_regular);
        let k1 = regularity(&Graph::empty(1).unwrap(), none).unwrap();
        assert!(!k1.is_regular && k1.is_strongly_regular && k1.is_distance_regular);
        let k1 = regularity(&Graph::empty(1).unwrap(), Conventions { k1_regular: true }).unwrap();
        assert!(k1.is_regular);
        let p = regularity(&petersen(), none).unwrap();
        assert!(p.is_strongly_regular && p.is_distance_regular);
        // the triangular prism is regular but neither
        let prism = Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap();
        let r = regularity(&prism, none).unwrap();
        assert!(r.is_regular && !r.is_strongly_regular && !r.is_distance_regular);
    }

    #[test]
    fn matchings_and_independence() {
        let m = independence_and_matchings(&Graph::path(3).unwrap());
        assert_eq!(m.hosoya_index, 3);
        assert_eq!(m.matching_number, 1);
        assert_eq!(m.independence_number, 2);
        assert_eq!(m.clique_number, 2);
        let k4 = independence_and_matchings(&Graph::complete(4).unwrap());
        assert_eq!((k4.independence_number, k4.clique_number), (1, 4));
        assert_eq!(k4.hosoya_index, 10);
        assert_eq!(
            independence_and_matchings(&petersen()).independence_number,
            4
        );
        assert_eq!(matching_counts(&Graph::complete(10).unwrap()), (5, 9496));
    }

    #[test]
    fn hosoya_by_edge_subsets() {
        // oracle: count edge subsets with pairwise disjoint edges
        for g in [
            Graph::path(5).unwrap(),
            Graph::cycle(6).unwrap(),
            Graph::complete(5).unwrap(),
            petersen(),
        ] {
            let edges: Vec<_> = g.edges().collect();
            let mut count = 0u64;
            for subset in 0u32..1 << edges.len() {
                let mut used: VertexSet = 0;
                let ok = (0..edges.len()).filter(|&i| subset >> i & 1 == 1).all(|i| {
                    let (u, v) = edges[i];
                    let fresh = used & (1 << u | 1 << v) == 0;
                    used |= 1 << u | 1 << v;
                    fresh
                });
                count += u64::from(ok);
            }
            assert_eq!(matching_counts(&g).1, count);
        }
    }

    #[test]
    fn subgraph_counts() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(subgraph_count(&k4, Pattern::K3), 4);
        assert_eq!(subgraph_count(&k4, Pattern::C4), 3);
        assert_eq!(subgraph_count(&k4, Pattern::Diamond), 6);
        assert_eq!(subgraph_count(&k4, Pattern::K5), 0);
        let bowtie = Pattern::Bowtie.graph();
        assert_eq!(subgraph_count(&bowtie, Pattern::Bowtie), 1);
        assert_eq!(subgraph_count(&bowtie, Pattern::OpenBowtie), 2);
        assert_eq!(subgraph_count(&Graph::cycle(6).unwrap(), Pattern::C6), 1);
        assert_eq!(
            "open-bowtie".parse::<Pattern>().unwrap(),
            Pattern::OpenBowtie
        );
        assert!(matches!(
            "house".parse::<Pattern>(),
            Err(InvariantError::UnknownPattern(_))
        ));
    }

    #[test]
    fn planarity_examples() {
        assert!(is_planar(&Graph::complete(4).unwrap()));
        assert!(!is_planar(&Graph::complete(5).unwrap()));
        assert!(!is_planar(&Graph::complete_bipartite(3, 3).unwrap()));
        assert!(is_planar(&Graph::complete_bipartite(2, 5).unwrap()));
        assert!(!is_planar(&petersen()));
        // K5 minus an edge
        let mut g = Graph::complete(5).unwrap();
        g.remove_edge(0, 1);
        assert!(is_planar(&g));
        // octahedron and the 3-cube
        let octa = Graph::complete(6).unwrap();
        let mut octa = octa;
        octa.remove_edge(0, 1);
        octa.remove_edge(2, 3);
        octa.remove_edge(4, 5);
        assert!(is_planar(&octa));
        let cube = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 3),
                (3, 2),
                (2, 0),
                (4, 5),
                (5, 7),
                (7, 6),
                (6, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        )
        .unwrap();
        assert!(is_planar(&cube));
    }
}
