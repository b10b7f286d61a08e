//! Canonical labeling by ordered-partition refinement with backtracking.
//!
//! The canonical code of a graph is the minimum of its packed pair bits over
//! all vertex relabelings, compared as an unsigned integer. The most
//! significant bits belong to the highest column (pairs `(i, n-1)`), so
//! positions are filled from `n-1` downwards. Once the vertex `w` at the
//! current top position is chosen, every cell below is forced to put the
//! heavier neighbours of `w` at its low end; any other arrangement yields a
//! strictly larger column. Branching only happens between candidates for the
//! top position, and twins (vertices whose transposition is an automorphism)
//! are branched on once with their class size carried as a multiplicity, so
//! the number of optimal leaves is exactly the automorphism group order.
//!
//! The same engine runs on weighted adjacency matrices, which is how
//! multigraph memo keys for the Tutte polynomial are built.

use std::cmp::Ordering;

use crate::graph::{pair_count, pair_index, Graph, GraphCode, VertexSet, MAX_ORDER};

const MAX_PAIRS: usize = pair_count(MAX_ORDER);

/// Loopless weighted adjacency on at most [`MAX_ORDER`] vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WeightMatrix {
    pub n: usize,
    pub w: [[u8; MAX_ORDER]; MAX_ORDER],
}

impl WeightMatrix {
    pub fn from_graph(g: &Graph) -> Self {
        let mut w = [[0u8; MAX_ORDER]; MAX_ORDER];
        for (i, j) in g.edges() {
            w[i][j] = 1;
            w[j][i] = 1;
        }
        WeightMatrix { n: g.order(), w }
    }
}

/// Result of a canonical labeling search.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub code: GraphCode,
    /// `labeling[p]` is the original vertex placed at position `p`.
    pub labeling: [u8; MAX_ORDER],
    /// Order of the automorphism group.
    pub automorphisms: u64,
    /// Vertices that sit at position `n - 1` in some optimal labeling.
    /// This is one automorphism orbit.
    pub top_vertices: VertexSet,
}

/// Weighted canonical form: the minimal upper-triangle weight sequence in
/// significance order plus the labeling that realizes it.
#[derive(Clone, Debug)]
pub(crate) struct WeightedCanon {
    pub n: usize,
    pub sequence: [u8; MAX_PAIRS],
    pub labeling: [u8; MAX_ORDER],
    pub automorphisms: u64,
    pub top_vertices: VertexSet,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let wc = canonical_weighted(&WeightMatrix::from_graph(g));
    let mut bits = 0u64;
    for j in 1..wc.n {
        for i in 0..j {
            if g.has_edge(wc.labeling[i] as usize, wc.labeling[j] as usize) {
                bits |= 1 << pair_index(i, j);
            }
        }
    }
    CanonicalForm {
        code: GraphCode {
            order: g.order() as u8,
            bits,
        },
        labeling: wc.labeling,
        automorphisms: wc.automorphisms,
        top_vertices: wc.top_vertices,
    }
}

pub(crate) fn canonical_weighted(m: &WeightMatrix) -> WeightedCanon {
    let n = m.n;
    let mut perm = [0u8; MAX_ORDER];
    for (p, slot) in perm.iter_mut().enumerate().take(n) {
        *slot = p as u8;
    }
    if n <= 1 {
        return WeightedCanon {
            n,
            sequence: [0; MAX_PAIRS],
            labeling: perm,
            automorphisms: 1,
            top_vertices: if n == 1 { 1 } else { 0 },
        };
    }
    let mut search = Search {
        w: &m.w,
        twin: twin_classes(m),
        cur: [0; MAX_PAIRS],
        best: [0; MAX_PAIRS],
        best_perm: perm,
        have_best: false,
        generation: 0,
        count: 0,
        top_set: 0,
    };
    // position 0 starts the single initial cell
    search.descend(n - 1, perm, 1, 0, 1, 0);
    WeightedCanon {
        n,
        sequence: search.best,
        labeling: search.best_perm,
        automorphisms: search.count,
        top_vertices: search.top_set,
    }
}

/// `twin[a]` is the smallest vertex `b` such that swapping `a` and `b` fixes
/// every weight. The relation is an equivalence.
fn twin_classes(m: &WeightMatrix) -> [u8; MAX_ORDER] {
    let n = m.n;
    let mut twin = [0u8; MAX_ORDER];
    for a in 0..n {
        twin[a] = a as u8;
        for b in 0..a {
            if (0..n).all(|x| x == a || x == b || m.w[a][x] == m.w[b][x]) {
                twin[a] = twin[b];
                break;
            }
        }
    }
    twin
}

struct Search<'a> {
    w: &'a [[u8; MAX_ORDER]; MAX_ORDER],
    twin: [u8; MAX_ORDER],
    cur: [u8; MAX_PAIRS],
    best: [u8; MAX_PAIRS],
    best_perm: [u8; MAX_ORDER],
    have_best: bool,
    generation: u64,
    count: u64,
    top_set: VertexSet,
}

impl Search<'_> {
    /// Fills position `top` and everything below it.
    ///
    /// `starts` has bit `p` set when position `p` begins a cell; `at` is the
    /// index in the significance-ordered sequence where column `top` begins.
    fn descend(
        &mut self,
        top: usize,
        perm: [u8; MAX_ORDER],
        starts: u16,
        at: usize,
        mult: u64,
        first_class: VertexSet,
    ) {
        if top == 0 {
            self.leaf(perm, mult, first_class);
            return;
        }
        // the top cell runs from the highest cell start <= top
        let below = starts & ((2u32 << top) - 1) as u16;
        let cell_lo = 15 - below.leading_zeros() as usize;
        let mut comparing = self.have_best;
        let mut seen_twins: VertexSet = 0;
        for c in cell_lo..=top {
            let w = perm[c] as usize;
            let tw = self.twin[w];
            if seen_twins & (1 << tw) != 0 {
                continue;
            }
            seen_twins |= 1 << tw;
            let class: VertexSet = perm[cell_lo..=top]
                .iter()
                .filter(|&&v| self.twin[v as usize] == tw)
                .fold(0, |acc, &v| acc | 1 << v);
            let class_size = class.count_ones() as u64;

            let mut next = perm;
            next.swap(c, top);
            let mut next_starts = starts | 1 << top;
            let row = &self.w[w];
            // refine every cell below the top position by weight to w, heaviest first
            let mut lo = 0;
            while lo < top {
                let mut hi = lo + 1;
                while hi < top && next_starts & (1 << hi) == 0 {
                    hi += 1;
                }
                let cell = &mut next[lo..hi];
                if cell.len() > 1 {
                    cell.sort_by(|&a, &b| row[b as usize].cmp(&row[a as usize]));
                    for p in lo + 1..hi {
                        if row[next[p] as usize] != row[next[p - 1] as usize] {
                            next_starts |= 1 << p;
                        }
                    }
                }
                lo = hi;
            }

            let mut order = if comparing {
                Ordering::Equal
            } else {
                Ordering::Less
            };
            for (k, p) in (0..top).rev().enumerate() {
                let value = row[next[p] as usize];
                self.cur[at + k] = value;
                if order == Ordering::Equal {
                    order = value.cmp(&self.best[at + k]);
                    if order == Ordering::Greater {
                        break;
                    }
                }
            }
            if order == Ordering::Greater {
                continue;
            }
            // an Equal column keeps comparing below; a Less one stops comparing
            let generation = self.generation;
            let saved = self.have_best;
            if order != Ordering::Equal {
                self.have_best = false;
            }
            let fc = if first_class == 0 { class } else { first_class };
            self.descend(top - 1, next, next_starts, at + top, mult * class_size, fc);
            if self.generation == generation {
                self.have_best = saved;
            }
            // a new best found below shares this node's prefix
            comparing = self.have_best;
        }
    }

    fn leaf(&mut self, perm: [u8; MAX_ORDER], mult: u64, first_class: VertexSet) {
        if self.have_best {
            self.count += mult;
            self.top_set |= first_class;
        } else {
            self.best = self.cur;
            self.best_perm = perm;
            self.count = mult;
            self.top_set = first_class;
            self.have_best = true;
            self.generation += 1;
        }
    }
}
