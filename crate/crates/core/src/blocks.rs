//! Biconnected components and articulation points (Tarjan low-links).

use crate::graph::VertexSet;

#[derive(Clone, Debug, Default)]
pub(crate) struct BlockDecomposition {
    /// Vertex sets of the blocks. An isolated vertex forms its own block.
    pub blocks: Vec<VertexSet>,
    pub articulation: VertexSet,
}

/// Blocks of the simple graph with adjacency `adj` restricted to `within`.
///
/// Two blocks share at most one vertex, so a block's edges are exactly the
/// edges induced on its vertex set.
pub(crate) fn decompose(adj: &[VertexSet], within: VertexSet) -> BlockDecomposition {
    let mut state = Tarjan {
        adj,
        within,
        disc: [0; 16],
        low: [0; 16],
        time: 0,
        stack: Vec::with_capacity(16),
        out: BlockDecomposition::default(),
    };
    let mut remaining = within;
    while remaining != 0 {
        let root = remaining.trailing_zeros() as usize;
        if adj[root] & within == 0 {
            state.out.blocks.push(1 << root);
            state.time += 1;
            state.disc[root] = state.time;
        } else {
            state.visit(root, usize::MAX);
        }
        remaining &= !state.visited();
    }
    state.out
}

struct Tarjan<'a> {
    adj: &'a [VertexSet],
    within: VertexSet,
    disc: [u32; 16],
    low: [u32; 16],
    time: u32,
    stack: Vec<usize>,
    out: BlockDecomposition,
}

impl Tarjan<'_> {
    fn visited(&self) -> VertexSet {
        (0..16)
            .filter(|&v| self.disc[v] != 0)
            .fold(0, |acc, v| acc | 1 << v)
    }

    fn visit(&mut self, v: usize, parent: usize) {
        self.time += 1;
        self.disc[v] = self.time;
        self.low[v] = self.time;
        self.stack.push(v);
        let mut children = 0;
        let mut nbrs = self.adj[v] & self.within;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if self.disc[u] == 0 {
                children += 1;
                self.visit(u, v);
                self.low[v] = self.low[v].min(self.low[u]);
                if self.low[u] >= self.disc[v] {
                    if parent != usize::MAX || children > 1 {
                        self.out.articulation |= 1 << v;
                    }
                    let mut block: VertexSet = 1 << v;
                    while let Some(w) = self.stack.pop() {
                        block |= 1 << w;
                        if w == u {
                            break;
                        }
                    }
                    self.out.blocks.push(block);
                }
            } else if u != parent {
                self.low[v] = self.low[v].min(self.disc[u]);
            }
        }
        if parent == usize::MAX {
            self.stack.clear();
        }
    }
}
