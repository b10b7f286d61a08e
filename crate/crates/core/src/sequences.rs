//! Integer sequences read off the database, one term per order from 1.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::store::{Database, QueryCondition, StoreError, COLUMNS};

/// Terms a sequence needs before it is worth submitting.
pub const MIN_NONZERO_TERMS: usize = 4;

/// Distinct-value targets that are not plain column names.
pub const DISTINCT_ALIASES: [(&str, &[&str]); 6] = [
    (
        "fractional_chromatic",
        &["fractional_numerator", "fractional_denominator"],
    ),
    ("tutte", &["tutte_poly_digest"]),
    ("chromatic_poly", &["chromatic_poly_digest"]),
    ("char_poly", &["char_poly_digest"]),
    ("laplacian_poly", &["laplacian_poly_digest"]),
    ("degree_sequence", &["degree_sequence_digest"]),
];

#[derive(Debug, Error)]
pub enum SequenceError {
    #[error("order {order} is not in the database (orders present: {present:?})")]
    MissingOrder { order: usize, present: Vec<usize> },
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSource {
    Conditions(Vec<QueryCondition>),
    /// Distinct values of the tuple of these columns.
    Distinct(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceResult {
    pub label: String,
    pub source: SequenceSource,
    /// `terms[i]` belongs to order `i + 1`.
    pub terms: Vec<u64>,
    pub nonzero_count: usize,
}

impl SequenceResult {
    fn new(label: String, source: SequenceSource, terms: Vec<u64>) -> Self {
        let nonzero_count = terms.iter().filter(|&&t| t != 0).count();
        SequenceResult {
            label,
            source,
            terms,
            nonzero_count,
        }
    }

    pub fn terms_text(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        parts.join(",")
    }

    pub fn to_json(&self) -> Value {
        let source = match &self.source {
            SequenceSource::Conditions(c) => {
                json!({ "conditions": c.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
            }
            SequenceSource::Distinct(cols) => json!({ "distinct_of": cols }),
        };
        json!({
            "label": self.label,
            "source": source,
            "first_order": 1,
            "terms": self.terms,
            "nonzero_count": self.nonzero_count,
        })
    }
}

impl fmt::Display for SequenceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.terms_text())
    }
}

pub fn conditions_label(conditions: &[QueryCondition]) -> String {
    if conditions.is_empty() {
        return "all".to_string();
    }
    let parts: Vec<String> = conditions.iter().map(|c| c.to_string()).collect();
    parts.join(" & ")
}

fn check_orders(db: &Database, max_order: usize) -> Result<(), SequenceError> {
    let present = db.orders();
    match (1..=max_order).find(|n| !present.contains(n)) {
        Some(order) => Err(SequenceError::MissingOrder { order, present }),
        None => Ok(()),
    }
}

/// `terms[n - 1] = |query(conditions, n)|` for `n` in `1..=max_order`.
pub fn build_sequence(
    db: &Database,
    conditions: &[QueryCondition],
    max_order: usize,
) -> Result<SequenceResult, SequenceError> {
    check_orders(db, max_order)?;
    let terms = (1..=max_order)
        .map(|n| db.count(conditions, n).map(|c| c as u64))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SequenceResult::new(
        conditions_label(conditions),
        SequenceSource::Conditions(conditions.to_vec()),
        terms,
    ))
}

/// Columns behind a distinct-value target: an alias or a column name.
pub fn distinct_columns(name: &str) -> Result<Vec<&'static str>, StoreError> {
    if let Some((_, cols)) = DISTINCT_ALIASES.iter().find(|(alias, _)| *alias == name) {
        return Ok(cols.to_vec());
    }
    COLUMNS
        .iter()
        .find(|&&c| c == name)
        .map(|&c| vec![c])
        .ok_or_else(|| StoreError::UnknownColumn {
            name: name.to_string(),
            valid: DISTINCT_ALIASES
                .iter()
                .map(|(a, _)| a.to_string())
                .chain(COLUMNS.iter().map(|c| c.to_string()))
                .collect(),
        })
}

/// Number of distinct values (or value tuples) per order.
pub fn distinct_value_sequence(
    db: &Database,
    name: &str,
    max_order: usize,
) -> Result<SequenceResult, SequenceError> {
    check_orders(db, max_order)?;
    let names = distinct_columns(name)?;
    let cols = names
        .iter()
        .map(|c| db.column_index(c))
        .collect::<Result<Vec<_>, _>>()?;
    let terms = (1..=max_order)
        .map(|n| {
            db.rows_of_order(n)
                .map(|r| cols.iter().map(|&c| db.value(r, c)).collect::<Vec<_>>())
                .collect::<BTreeSet<_>>()
                .len() as u64
        })
        .collect();
    Ok(SequenceResult::new(
        format!("distinct {name}"),
        SequenceSource::Distinct(names.iter().map(|c| c.to_string()).collect()),
        terms,
    ))
}

/// At least [`MIN_NONZERO_TERMS`] nonzero terms.
pub fn submission_filter(seq: &SequenceResult) -> bool {
    seq.nonzero_count >= MIN_NONZERO_TERMS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::{build_database, BuildOptions, Comparator};

    fn seq(terms: &[u64]) -> SequenceResult {
        SequenceResult::new(
            "t".into(),
            SequenceSource::Conditions(vec![]),
            terms.to_vec(),
        )
    }

    #[test]
    fn filter_counts_nonzero_terms() {
        assert!(submission_filter(&seq(&[0, 0, 0, 0, 1, 4, 25, 384])));
        assert!(!submission_filter(&seq(&[0, 0, 0, 0, 0, 0, 1, 1])));
        assert!(!submission_filter(&seq(&[0; 8])));
    }

    #[test]
    fn sequences_over_a_small_database() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("db");
        build_database(&[1, 2, 3, 4, 5], &path, &BuildOptions::default()).unwrap();
        let db = Database::open(&path).unwrap();
        let trees = build_sequence(&db, &[QueryCondition::eq("is_tree", 1)], 5).unwrap();
        assert_eq!(trees.terms, vec![1, 1, 1, 2, 3]);
        assert_eq!(trees.to_string(), "is_tree=1: 1,1,1,2,3");
        let json = trees.to_json();
        assert_eq!(json["terms"][4], 5 - 2);
        assert_eq!(json["source"]["conditions"][0], "is_tree=1");
        let tutte = distinct_value_sequence(&db, "tutte", 5).unwrap();
        assert_eq!(tutte.terms, vec![1, 1, 2, 5, 16]);
        let frac = distinct_value_sequence(&db, "fractional_chromatic", 5).unwrap();
        assert_eq!(frac.terms, vec![1, 1, 2, 3, 5]);
        assert!(matches!(
            build_sequence(&db, &[], 6),
            Err(SequenceError::MissingOrder { order: 6, .. })
        ));
        assert!(matches!(
            distinct_value_sequence(&db, "bogus", 5),
            Err(SequenceError::Store(StoreError::UnknownColumn { .. }))
        ));
        let all = build_sequence(&db, &[], 5).unwrap();
        let gt =
            build_sequence(&db, &[QueryCondition::new("girth", Comparator::Gt, 3)], 5).unwrap();
        let le =
            build_sequence(&db, &[QueryCondition::new("girth", Comparator::Le, 3)], 5).unwrap();
        for n in 0..5 {
            assert_eq!(gt.terms[n] + le.terms[n], all.terms[n]);
        }
    }
}
