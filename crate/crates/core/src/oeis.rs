//! Lookup against an OEIS "stripped" dump (`Annnnnn ,t1,t2,...,` lines).

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

/// Matched terms required before a match counts.
pub const MIN_OVERLAP: usize = 4;

pub const DEFAULT_MAX_SHIFT: usize = 1;

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate id {id}")]
    Duplicate { line: usize, id: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisEntry {
    pub id: String,
    pub terms: Vec<BigInt>,
}

impl OeisEntry {
    /// The entry in dump syntax.
    pub fn to_line(&self) -> String {
        let mut line = format!("{} ,", self.id);
        for t in &self.terms {
            line.push_str(&t.to_string());
            line.push(',');
        }
        line
    }
}

#[derive(Clone, Debug, Default)]
pub struct OeisCatalog {
    entries: Vec<OeisEntry>,
}

fn valid_id(id: &str) -> bool {
    id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit())
}

impl OeisCatalog {
    pub fn entries(&self) -> &[OeisEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&OeisEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn from_reader(reader: impl BufRead) -> Result<Self, OeisError> {
        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let number = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |message: &str| OeisError::Malformed {
                line: number,
                message: message.to_string(),
            };
            let (id, rest) = trimmed
                .split_once(' ')
                .ok_or_else(|| malformed("expected `Annnnnn ,terms,`"))?;
            if !valid_id(id) {
                return Err(malformed("bad sequence id"));
            }
            let rest = rest.trim();
            let body = rest
                .strip_prefix(',')
                .ok_or_else(|| malformed("terms must start with ','"))?;
            let body = body.strip_suffix(',').unwrap_or(body);
            let terms = if body.is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|t| t.trim().parse::<BigInt>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| malformed("non-integer term"))?
            };
            if !seen.insert(id.to_string()) {
                return Err(OeisError::Duplicate {
                    line: number,
                    id: id.to_string(),
                });
            }
            entries.push(OeisEntry {
                id: id.to_string(),
                terms,
            });
        }
        Ok(OeisCatalog { entries })
    }
}

pub fn parse_stripped(path: &Path) -> Result<OeisCatalog, OeisError> {
    OeisCatalog::from_reader(BufReader::new(File::open(path)?))
}

pub fn parse_stripped_str(text: &str) -> Result<OeisCatalog, OeisError> {
    OeisCatalog::from_reader(text.as_bytes())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchKind {
    Known,
    /// Our terms run past the entry's last term.
    Extension,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeisMatch {
    pub id: String,
    /// Our term `i` sits at entry position `i + shift`.
    pub shift: i64,
    pub kind: MatchKind,
}

/// Entries matching `terms` with our first term at entry position `shift`,
/// `|shift| <= max_shift`. Terms aligned before the entry's start must be
/// zero; terms aligned after its end make an extension candidate. At least
/// [`MIN_OVERLAP`] terms must line up.
pub fn lookup(catalog: &OeisCatalog, terms: &[u64], max_shift: usize) -> Vec<OeisMatch> {
    let ours: Vec<BigInt> = terms.iter().map(|&t| BigInt::from(t)).collect();
    let max_shift = max_shift as i64;
    let mut out = Vec::new();
    for entry in &catalog.entries {
        for shift in -max_shift..=max_shift {
            if let Some(kind) = aligned(&ours, &entry.terms, shift) {
                out.push(OeisMatch {
                    id: entry.id.clone(),
                    shift,
                    kind,
                });
            }
        }
    }
    out.sort_by_key(|m| (m.shift.abs(), m.kind == MatchKind::Extension, m.id.clone()));
    out
}

fn aligned(ours: &[BigInt], theirs: &[BigInt], shift: i64) -> Option<MatchKind> {
    let mut overlap = 0;
    let mut past_end = false;
    for (i, t) in ours.iter().enumerate() {
        let at = i as i64 + shift;
        if at < 0 {
            if !t.eq(&BigInt::from(0)) {
                return None;
            }
        } else if let Some(e) = theirs.get(at as usize) {
            if e != t {
                return None;
            }
            overlap += 1;
        } else {
            past_end = true;
        }
    }
    (overlap >= MIN_OVERLAP).then_some(if past_end {
        MatchKind::Extension
    } else {
        MatchKind::Known
    })
}

/// A report line: `label -> Annnnnn shift s` (first match) or
/// `label -> NOVEL`.
pub fn report_line(label: &str, matches: &[OeisMatch]) -> String {
    match matches.first() {
        None => format!("{label} -> NOVEL"),
        Some(m) => {
            let mut line = format!("{label} -> {} shift {}", m.id, m.shift);
            if m.kind == MatchKind::Extension {
                line.push_str(" (extension candidate)");
            }
            line
        }
    }
}

impl fmt::Display for OeisMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} shift {}", self.id, self.shift)
    }
}
