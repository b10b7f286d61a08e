//! Isomorph-free generation of connected graphs.
//!
//! Canonical augmentation grows every graph of order `n - 1` (connected or
//! not) by one vertex joined to each possible neighbour subset. A child is
//! kept when the new vertex can occupy the top position of the child's
//! canonical labeling, which makes the parent the child's canonical
//! deletion; children of one parent are deduplicated locally. No global
//! table of seen graphs is needed.

use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::canonical_form;
use crate::graph::{pair_count, Graph, GraphCode, VertexSet, MAX_ORDER};

/// Largest order the brute-force filter accepts.
pub const BRUTE_FORCE_MAX_ORDER: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("order {order} is not supported by {method:?} (allowed 1..={max})")]
    UnsupportedOrder {
        order: usize,
        method: Method,
        max: usize,
    },
    #[error("invalid shard {index}/{total}: need total >= 1 and index < total")]
    InvalidShard { index: usize, total: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    CanonicalAugmentation,
    BruteFilter,
}

impl Method {
    pub fn max_order(self) -> usize {
        match self {
            Method::CanonicalAugmentation => MAX_ORDER,
            Method::BruteFilter => BRUTE_FORCE_MAX_ORDER,
        }
    }
}

/// One slice of a sharded run: parents are dealt round-robin to shards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub index: usize,
    pub total: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationPlan {
    pub order: usize,
    pub method: Method,
    pub shard: Option<Shard>,
}

impl EnumerationPlan {
    pub fn new(order: usize, method: Method) -> Result<Self, EnumerateError> {
        if order == 0 || order > method.max_order() {
            return Err(EnumerateError::UnsupportedOrder {
                order,
                method,
                max: method.max_order(),
            });
        }
        Ok(EnumerationPlan {
            order,
            method,
            shard: None,
        })
    }

    pub fn with_shard(mut self, index: usize, total: usize) -> Result<Self, EnumerateError> {
        if total == 0 || index >= total {
            return Err(EnumerateError::InvalidShard { index, total });
        }
        self.shard = Some(Shard { index, total });
        Ok(self)
    }
}

/// Canonical codes of all connected graphs of the plan's order, ascending.
pub fn enumerate_connected(plan: &EnumerationPlan) -> Result<Vec<GraphCode>, EnumerateError> {
    let plan = EnumerationPlan {
        shard: plan.shard,
        ..EnumerationPlan::new(plan.order, plan.method)?
    };
    let shard = plan.shard.unwrap_or(Shard { index: 0, total: 1 });
    match plan.method {
        Method::CanonicalAugmentation => Ok(augment_level(plan.order, shard, true)),
        Method::BruteFilter => {
            let all = enumerate_bruteforce(plan.order)?;
            Ok(all
                .into_iter()
                .enumerate()
                .filter(|(i, _)| i % shard.total == shard.index)
                .map(|(_, c)| c)
                .collect())
        }
    }
}

/// Canonical codes of every graph (connected or not) of the given order.
pub fn enumerate_all(order: usize) -> Result<Vec<GraphCode>, EnumerateError> {
    EnumerationPlan::new(order, Method::CanonicalAugmentation)?;
    Ok(augment_level(order, Shard { index: 0, total: 1 }, false))
}

fn augment_level(order: usize, shard: Shard, connected_only: bool) -> Vec<GraphCode> {
    if order == 1 {
        return if shard.index == 0 {
            vec![Graph::empty(1).expect("order 1").canonical_code()]
        } else {
            Vec::new()
        };
    }
    let parents = augment_level(order - 1, Shard { index: 0, total: 1 }, false);
    let mut out: Vec<GraphCode> = parents
        .par_iter()
        .enumerate()
        .filter(|(i, _)| i % shard.total == shard.index)
        .flat_map_iter(|(_, parent)| children(&parent.graph(), connected_only))
        .collect();
    out.sort_unstable();
    out
}

/// Accepted children of one canonical parent, deduplicated.
fn children(parent: &Graph, connected_only: bool) -> Vec<GraphCode> {
    let n = parent.order();
    let v = n;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for nbrs in 0..(1 as VertexSet) << n {
        let d = nbrs.count_ones() as usize;
        // the new vertex must have minimum degree in the child
        if (0..n).any(|u| parent.degree(u) + usize::from(nbrs >> u & 1 == 1) < d) {
            continue;
        }
        let child = parent.with_vertex(nbrs).expect("order bounded by caller");
        if connected_only && !child.is_connected() {
            continue;
        }
        let cf = canonical_form(&child);
        if cf.top_vertices & (1 << v) == 0 {
            continue;
        }
        if seen.insert(cf.code.bits) {
            out.push(cf.code);
        }
    }
    out
}

/// Connected canonical codes by filtering all labeled graphs. Oracle for
/// the generator; orders above [`BRUTE_FORCE_MAX_ORDER`] are refused.
pub fn enumerate_bruteforce(order: usize) -> Result<Vec<GraphCode>, EnumerateError> {
    EnumerationPlan::new(order, Method::BruteFilter)?;
    let pairs = pair_count(order);
    let top_column_shift = pair_count(order - 1);
    let mut out = Vec::new();
    for bits in 0..1u64 << pairs {
        let g = GraphCode {
            order: order as u8,
            bits,
        }
        .graph();
        // a canonical labeling puts a minimum-degree vertex last with its
        // neighbours at the lowest positions
        let d = g.min_degree();
        if bits >> top_column_shift != (1 << d) - 1 && order > 1 {
            continue;
        }
        if !g.is_connected() {
            continue;
        }
        if g.canonical_code().bits == bits {
            out.push(GraphCode {
                order: order as u8,
                bits,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        let one = enumerate_bruteforce(1).unwrap();
        assert_eq!(one, vec![GraphCode { order: 1, bits: 0 }]);
        assert_eq!(enumerate_bruteforce(3).unwrap().len(), 2);
        let plan = EnumerationPlan::new(4, Method::CanonicalAugmentation).unwrap();
        assert_eq!(enumerate_connected(&plan).unwrap().len(), 6);
    }

    #[test]
    fn all_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_all(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn brute_force_by_grouping_labeled_graphs() {
        // group all 64 labeled order-4 graphs by canonical code
        let mut classes = HashSet::new();
        for bits in 0..64u64 {
            let g = GraphCode { order: 4, bits }.graph();
            if g.is_connected() {
                classes.insert(g.canonical_code());
            }
        }
        assert_eq!(classes.len(), 6);
    }

    #[test]
    fn plan_errors() {
        assert!(EnumerationPlan::new(0, Method::CanonicalAugmentation).is_err());
        assert!(EnumerationPlan::new(11, Method::CanonicalAugmentation).is_err());
        assert!(EnumerationPlan::new(8, Method::BruteFilter).is_err());
        assert!(enumerate_bruteforce(8).is_err());
        let plan = EnumerationPlan::new(5, Method::BruteFilter).unwrap();
        assert_eq!(
            plan.with_shard(2, 2),
            Err(EnumerateError::InvalidShard { index: 2, total: 2 })
        );
        assert!(plan.with_shard(0, 0).is_err());
    }

    #[test]
    fn shards_partition_the_stream() {
        let base = EnumerationPlan::new(6, Method::CanonicalAugmentation).unwrap();
        let full = enumerate_connected(&base).unwrap();
        let mut merged = Vec::new();
        for i in 0..3 {
            let part = enumerate_connected(&base.with_shard(i, 3).unwrap()).unwrap();
            assert!(part.windows(2).all(|w| w[0] < w[1]));
            merged.extend(part);
        }
        merged.sort();
        assert_eq!(merged, full);
    }
}
