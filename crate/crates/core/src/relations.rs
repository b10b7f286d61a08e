//! Set relations between the graph sets picked out by single conditions:
//! equality, inclusion and disjointness, checked at every order at once.

use std::fmt;

use rayon::prelude::*;

use crate::store::{Comparator, Database, QueryCondition, StoreError, COLUMNS, DIGEST_COLUMNS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    Equal,
    Subset,
    Exclusive,
}

impl RelationKind {
    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Equal => "==",
            RelationKind::Subset => "<=",
            RelationKind::Exclusive => "excludes",
        }
    }
}

/// `left` and `right` are conjunctions of conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub left: Vec<QueryCondition>,
    pub right: Vec<QueryCondition>,
    pub kind: RelationKind,
    pub verified_to_order: usize,
}

impl Relation {
    pub fn new(left: Vec<QueryCondition>, kind: RelationKind, right: Vec<QueryCondition>) -> Self {
        Relation {
            left,
            right,
            kind,
            verified_to_order: 0,
        }
    }
}

fn side(conds: &[QueryCondition]) -> String {
    let parts: Vec<String> = conds.iter().map(|c| c.to_string()).collect();
    parts.join(" & ")
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  {}  {}  [to order {}]",
            side(&self.left),
            self.kind.symbol(),
            side(&self.right),
            self.verified_to_order
        )
    }
}

/// Single conditions `column = v` for every value `v` realised at some
/// order up to `max_order`, and `column > v` for each such value but the
/// largest. Digest columns are left out. Columns with more than
/// `max_values` distinct values are left out too, when a cap is given.
pub fn condition_catalog(
    db: &Database,
    max_order: usize,
    max_values: Option<usize>,
) -> Vec<QueryCondition> {
    let rows = 0..db.rows_of_order(max_order).end;
    let mut out = Vec::new();
    for (c, &name) in COLUMNS.iter().enumerate() {
        if DIGEST_COLUMNS.contains(&name) {
            continue;
        }
        let mut values: Vec<u64> = db.column_values(c)[rows.clone()].to_vec();
        values.sort_unstable();
        values.dedup();
        if max_values.is_some_and(|cap| values.len() > cap) {
            continue;
        }
        for &v in &values {
            out.push(QueryCondition::eq(name, v));
        }
        for &v in &values[..values.len().saturating_sub(1)] {
            out.push(QueryCondition::new(name, Comparator::Gt, v));
        }
    }
    out
}

struct Member {
    bits: Vec<u64>,
    counts: Vec<usize>,
}

fn membership(
    db: &Database,
    conditions: &[QueryCondition],
    max_order: usize,
) -> Result<Member, StoreError> {
    let total = db.rows_of_order(max_order).end;
    let mut bits = vec![0u64; total.div_ceil(64)];
    let mut counts = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        let rows = db.query_rows(conditions, n)?;
        counts.push(rows.len());
        for r in rows {
            bits[r / 64] |= 1 << (r % 64);
        }
    }
    Ok(Member { bits, counts })
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

/// Count-level necessary conditions for each relation kind.
pub fn counts_allow(kind: RelationKind, a: &[usize], b: &[usize], totals: &[usize]) -> bool {
    let per_order = a.iter().zip(b).zip(totals);
    match kind {
        RelationKind::Equal => a == b,
        RelationKind::Subset => per_order.clone().all(|((x, y), _)| x <= y),
        RelationKind::Exclusive => per_order.clone().all(|((x, y), t)| x + y <= *t),
    }
}

/// Every relation among catalog conditions on different columns, verified
/// on all orders `1..=max_order`. Each unordered pair is reported at most
/// once, as equal, subset (in either direction) or exclusive.
pub fn mine_relations(
    db: &Database,
    catalog: &[QueryCondition],
    max_order: usize,
) -> Result<Vec<Relation>, StoreError> {
    let members = catalog
        .par_iter()
        .map(|c| membership(db, std::slice::from_ref(c), max_order))
        .collect::<Result<Vec<_>, _>>()?;
    let totals: Vec<usize> = (1..=max_order).map(|n| db.rows_of_order(n).len()).collect();
    let found: Vec<Vec<Relation>> = (0..catalog.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let a = &members[i];
            if a.counts.iter().all(|&c| c == 0) {
                return out;
            }
            for j in i + 1..catalog.len() {
                if catalog[i].column == catalog[j].column {
                    continue;
                }
                let b = &members[j];
                if b.counts.iter().all(|&c| c == 0) {
                    continue;
                }
                let pair = |kind, l: usize, r: usize| Relation {
                    left: vec![catalog[l].clone()],
                    right: vec![catalog[r].clone()],
                    kind,
                    verified_to_order: max_order,
                };
                let ab = counts_allow(RelationKind::Subset, &a.counts, &b.counts, &totals)
                    && subset(&a.bits, &b.bits);
                let ba = counts_allow(RelationKind::Subset, &b.counts, &a.counts, &totals)
                    && subset(&b.bits, &a.bits);
                if ab && ba {
                    out.push(pair(RelationKind::Equal, i, j));
                } else if ab {
                    out.push(pair(RelationKind::Subset, i, j));
                } else if ba {
                    out.push(pair(RelationKind::Subset, j, i));
                } else if counts_allow(RelationKind::Exclusive, &a.counts, &b.counts, &totals)
                    && disjoint(&a.bits, &b.bits)
                {
                    out.push(pair(RelationKind::Exclusive, i, j));
                }
            }
            out
        })
        .collect();
    let mut all: Vec<Relation> = found.into_iter().flatten().collect();
    all.sort_by_key(|r| r.kind);
    Ok(all)
}

/// Largest `n` (up to the database's top order) such that the relation
/// holds at every order `1..=n`.
pub fn check_relation(db: &Database, relation: &Relation) -> Result<usize, StoreError> {
    let mut verified = 0;
    for n in 1..=db.max_order() {
        let left = db.query_rows(&relation.left, n)?;
        let right = db.query_rows(&relation.right, n)?;
        let contains =
            |big: &[usize], small: &[usize]| small.iter().all(|r| big.binary_search(r).is_ok());
        let holds = match relation.kind {
            RelationKind::Equal => left == right,
            RelationKind::Subset => contains(&right, &left),
            RelationKind::Exclusive => !left.iter().any(|r| right.binary_search(r).is_ok()),
        };
        if !holds {
            break;
        }
        verified = n;
    }
    Ok(verified)
}

pub fn report(relations: &[Relation]) -> String {
    relations.iter().map(|r| format!("{r}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{build_database, BuildOptions};

    fn db() -> (tempfile::TempDir, Database) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db");
        build_database(&[1, 2, 3, 4, 5, 6], &path, &BuildOptions::default()).unwrap();
        let db = Database::open(&path).unwrap();
        (dir, db)
    }

    #[test]
    fn catalog_lists_realised_values() {
        let (_dir, db) = db();
        let catalog = condition_catalog(&db, 6, None);
        assert!(catalog.contains(&QueryCondition::eq("girth", 0)));
        assert!(catalog.contains(&QueryCondition::new("girth", Comparator::Gt, 5)));
        assert!(!catalog.contains(&QueryCondition::new("girth", Comparator::Gt, 6)));
        assert!(!catalog.iter().any(|c| c.column.ends_with("_digest")));
        let capped = condition_catalog(&db, 6, Some(2));
        assert!(capped.len() < catalog.len());
        for c in &capped {
            let eqs = capped
                .iter()
                .filter(|d| d.column == c.column && d.op == Comparator::Eq)
                .count();
            assert!(eqs <= 2, "{c}");
        }
    }

    #[test]
    fn mined_relations_recheck() {
        let (_dir, db) = db();
        let catalog = condition_catalog(&db, 6, Some(12));
        let relations = mine_relations(&db, &catalog, 6).unwrap();
        let tree = Relation {
            left: vec![QueryCondition::eq("is_tree", 1)],
            right: vec![QueryCondition::eq("girth", 0)],
            kind: RelationKind::Equal,
            verified_to_order: 6,
        };
        assert!(relations.iter().any(|r| {
            r.kind == RelationKind::Equal
                && ((r.left == tree.left && r.right == tree.right)
                    || (r.left == tree.right && r.right == tree.left))
        }));
        for r in relations.iter().step_by(97) {
            assert_eq!(check_relation(&db, r).unwrap(), 6, "{r}");
        }
    }

    #[test]
    fn check_relation_finds_failures() {
        let (_dir, db) = db();
        let euler_ham = Relation::new(
            vec![QueryCondition::eq("is_eulerian", 1)],
            RelationKind::Subset,
            vec![QueryCondition::eq("is_hamiltonian", 1)],
        );
        assert_eq!(check_relation(&db, &euler_ham).unwrap(), 4);
        let bip_tri = Relation::new(
            vec![QueryCondition::eq("is_bipartite", 1)],
            RelationKind::Exclusive,
            vec![QueryCondition::eq("girth", 3)],
        );
        assert_eq!(check_relation(&db, &bip_tri).unwrap(), 6);
        let line = Relation {
            verified_to_order: 6,
            ..bip_tri
        }
        .to_string();
        assert_eq!(line, "is_bipartite=1  excludes  girth=3  [to order 6]");
    }

    #[test]
    fn prefilter_never_rejects_a_true_relation() {
        let (_dir, db) = db();
        let catalog = condition_catalog(&db, 6, Some(6));
        let totals: Vec<usize> = (1..=6).map(|n| db.rows_of_order(n).len()).collect();
        let members: Vec<Member> = catalog
            .iter()
            .map(|c| membership(&db, std::slice::from_ref(c), 6).unwrap())
            .collect();
        for a in &members {
            for b in &members {
                if subset(&a.bits, &b.bits) {
                    assert!(counts_allow(
                        RelationKind::Subset,
                        &a.counts,
                        &b.counts,
                        &totals
                    ));
                }
                if a.bits == b.bits {
                    assert!(counts_allow(
                        RelationKind::Equal,
                        &a.counts,
                        &b.counts,
                        &totals
                    ));
                }
                if disjoint(&a.bits, &b.bits) {
                    assert!(counts_allow(
                        RelationKind::Exclusive,
                        &a.counts,
                        &b.counts,
                        &totals
                    ));
                }
            }
        }
    }
}
