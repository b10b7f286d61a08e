//! Columnar invariant database.
//!
//! One row per connected graph, sorted by `(order, bits)`, one integer column
//! per invariant and a sorted value index per column. Polynomials are kept
//! as 64-bit digests; their text lives in an optional side file. The byte
//! layout is described in `docs/FORMAT.md`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebraic::{self, AlgebraicError, DEFAULT_TUTTE_BUDGET};
use crate::enumerate::{self, EnumerateError, EnumerationPlan, Method};
use crate::graph::{Graph, GraphCode, MAX_ORDER};
use crate::structural::{self, Conventions, InvariantError, Pattern};

pub const MAGIC: &[u8; 4] = b"EFG1";
pub const FORMAT_VERSION: u32 = 1;

/// Column names in file order.
pub const COLUMNS: [&str; 46] = [
    "edges",
    "diameter",
    "radius",
    "girth",
    "circumference",
    "articulation_points",
    "endpoints",
    "vertex_connectivity",
    "edge_connectivity",
    "is_bipartite",
    "is_tree",
    "is_eulerian",
    "is_hamiltonian",
    "is_chordal",
    "is_planar",
    "is_regular",
    "is_strongly_regular",
    "is_distance_regular",
    "independence_number",
    "clique_number",
    "matching_number",
    "hosoya_index",
    "subgraph_k3",
    "subgraph_k4",
    "subgraph_k5",
    "subgraph_c4",
    "subgraph_c5",
    "subgraph_c6",
    "subgraph_bull",
    "subgraph_bowtie",
    "subgraph_open_bowtie",
    "subgraph_diamond",
    "automorphism_count",
    "chromatic_number",
    "is_integral",
    "simple_spectrum",
    "has_chromatic_gap",
    "fractional_numerator",
    "fractional_denominator",
    "char_poly_digest",
    "laplacian_poly_digest",
    "tutte_poly_digest",
    "chromatic_poly_digest",
    "degree_sequence_digest",
    "min_degree",
    "max_degree",
];

/// Columns holding digests; they are compared for equality only.
pub const DIGEST_COLUMNS: [&str; 5] = [
    "char_poly_digest",
    "laplacian_poly_digest",
    "tutte_poly_digest",
    "chromatic_poly_digest",
    "degree_sequence_digest",
];

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("database {0} does not exist")]
    MissingDatabase(PathBuf),
    #[error("unknown column {name:?}; valid columns: {}", valid.join(", "))]
    UnknownColumn { name: String, valid: Vec<String> },
    #[error("malformed database: {0}")]
    Format(String),
    #[error("bad condition {0:?}: expected <column><op><value> with op one of = != < <= > >=")]
    BadCondition(String),
    #[error("orders must lie in 1..={MAX_ORDER}, got {0}")]
    BadOrder(usize),
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Algebraic(#[from] AlgebraicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn holds(self, left: u64, right: u64) -> bool {
        match self {
            Comparator::Eq => left == right,
            Comparator::Ne => left != right,
            Comparator::Lt => left < right,
            Comparator::Le => left <= right,
            Comparator::Gt => left > right,
            Comparator::Ge => left >= right,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

/// `column <op> value`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QueryCondition {
    pub column: String,
    pub op: Comparator,
    pub value: u64,
}

impl QueryCondition {
    pub fn new(column: impl Into<String>, op: Comparator, value: u64) -> Self {
        QueryCondition {
            column: column.into(),
            op,
            value,
        }
    }

    pub fn eq(column: impl Into<String>, value: u64) -> Self {
        Self::new(column, Comparator::Eq, value)
    }
}

impl fmt::Display for QueryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.column, self.op.symbol(), self.value)
    }
}

impl FromStr for QueryCondition {
    type Err = StoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StoreError::BadCondition(s.to_string());
        let at = s.find(['=', '!', '<', '>']).ok_or_else(bad)?;
        let (column, rest) = s.split_at(at);
        let (op, value) = [
            ("!=", Comparator::Ne),
            ("<=", Comparator::Le),
            (">=", Comparator::Ge),
            ("=", Comparator::Eq),
            ("<", Comparator::Lt),
            (">", Comparator::Gt),
        ]
        .into_iter()
        .find_map(|(sym, op)| rest.strip_prefix(sym).map(|v| (op, v)))
        .ok_or_else(bad)?;
        let column = column.trim();
        if column.is_empty() {
            return Err(bad());
        }
        let value = value.trim().parse().map_err(|_| bad())?;
        Ok(QueryCondition::new(column, op, value))
    }
}

/// One database row: the graph and its values in [`COLUMNS`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub code: GraphCode,
    pub values: Vec<u64>,
}

impl InvariantRecord {
    pub fn get(&self, column: &str) -> Option<u64> {
        COLUMNS
            .iter()
            .position(|&c| c == column)
            .map(|i| self.values[i])
    }
}

/// Canonical text of the degree sequence, largest degree first.
pub fn degree_sequence_text(g: &Graph) -> String {
    let mut degrees = g.degree_sequence();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let parts: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    parts.join(",")
}

/// Digest-to-text entries contributed by one graph's polynomials.
pub type PolynomialTexts = Vec<(u64, String)>;

/// Computes every column for a connected graph.
pub fn compute_record(
    code: GraphCode,
    tutte_budget: u64,
) -> Result<(InvariantRecord, PolynomialTexts), StoreError> {
    let g = code.graph();
    let s = structural::structural_profile(&g, Conventions::default())?;
    let a = algebraic::algebraic_profile(&g, tutte_budget)?;
    let (num, den) = algebraic::rational_parts(&a.fractional_chromatic);
    let char_text = a.spectral.char_poly.text();
    let lap_text = a.spectral.laplacian_poly.text();
    let tutte_text = a.tutte.line();
    let chrom_text = a.chromatic_poly.text();
    let degree_text = degree_sequence_text(&g);
    let digest = algebraic::stable_digest;
    let texts = vec![
        (digest(&char_text), char_text),
        (digest(&lap_text), lap_text),
        (a.tutte.digest(), tutte_text),
        (digest(&chrom_text), chrom_text),
        (digest(&degree_text), degree_text),
    ];
    let b = |x: bool| u64::from(x);
    let mut values = vec![
        g.edge_count() as u64,
        s.diameter as u64,
        s.radius as u64,
        s.girth as u64,
        s.circumference as u64,
        s.articulation_points as u64,
        s.endpoints as u64,
        s.vertex_connectivity as u64,
        s.edge_connectivity as u64,
        b(s.is_bipartite),
        b(s.is_tree),
        b(s.is_eulerian),
        b(s.is_hamiltonian),
        b(s.is_chordal),
        b(s.is_planar),
        b(s.is_regular),
        b(s.is_strongly_regular),
        b(s.is_distance_regular),
        s.independence_number as u64,
        s.clique_number as u64,
        s.matching_number as u64,
        s.hosoya_index,
    ];
    values.extend(Pattern::ALL.iter().map(|&p| s.subgraph(p)));
    values.extend([
        g.automorphism_count(),
        a.chromatic_number as u64,
        b(a.spectral.is_integral),
        b(a.spectral.simple_spectrum),
        b(a.has_chromatic_gap),
        num,
        den,
    ]);
    values.extend(texts.iter().map(|(d, _)| *d));
    values.extend([g.min_degree() as u64, g.max_degree() as u64]);
    debug_assert_eq!(values.len(), COLUMNS.len());
    Ok((InvariantRecord { code, values }, texts))
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    pub tutte_budget: u64,
    /// Also write `<path>.poly` with digest-to-text lines.
    pub side_file: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            threads: None,
            tutte_budget: DEFAULT_TUTTE_BUDGET,
            side_file: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BuildSummary {
    /// `(order, rows)` pairs in ascending order.
    pub rows_per_order: Vec<(usize, usize)>,
    pub total_rows: usize,
    pub elapsed: Duration,
}

/// Path of the polynomial side file that accompanies `db`.
pub fn side_file_path(db: &Path) -> PathBuf {
    let mut name = db.as_os_str().to_owned();
    name.push(".poly");
    PathBuf::from(name)
}

/// Enumerates the given orders, computes all invariants and writes the
/// database atomically.
pub fn build_database(
    orders: &[usize],
    out: &Path,
    options: &BuildOptions,
) -> Result<BuildSummary, StoreError> {
    let start = Instant::now();
    let orders: BTreeSet<usize> = orders.iter().copied().collect();
    if let Some(&bad) = orders.iter().find(|&&n| n == 0 || n > MAX_ORDER) {
        return Err(StoreError::BadOrder(bad));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = options.threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| StoreError::Io(io::Error::other(e)))?;
    let mut records = Vec::new();
    let mut texts = BTreeMap::new();
    let mut rows_per_order = Vec::new();
    for &n in &orders {
        let plan = EnumerationPlan::new(n, Method::CanonicalAugmentation)?;
        let codes = pool.install(|| enumerate::enumerate_connected(&plan))?;
        let computed: Vec<_> = pool.install(|| {
            codes
                .par_iter()
                .map(|&c| compute_record(c, options.tutte_budget))
                .collect::<Result<Vec<_>, _>>()
        })?;
        rows_per_order.push((n, computed.len()));
        for (record, poly) in computed {
            records.push(record);
            texts.extend(poly);
        }
    }
    write_database(&records, out)?;
    if options.side_file {
        write_atomically(&side_file_path(out), |w| {
            for (digest, text) in &texts {
                writeln!(w, "{digest}\t{text}")?;
            }
            Ok(())
        })?;
    }
    Ok(BuildSummary {
        total_rows: records.len(),
        rows_per_order,
        elapsed: start.elapsed(),
    })
}

fn write_atomically(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), StoreError> {
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let result = (|| {
        let mut w = BufWriter::new(File::create(&partial)?);
        body(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&partial, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&partial);
    }
    Ok(result?)
}

fn width_for(max: u64) -> u8 {
    match max {
        0..=0xff => 1,
        0x100..=0xffff => 2,
        0x1_0000..=0xffff_ffff => 4,
        _ => 8,
    }
}

/// Writes records (any order; they are sorted here) in the binary format.
pub fn write_database(records: &[InvariantRecord], out: &Path) -> Result<(), StoreError> {
    let mut sorted: Vec<&InvariantRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.code);
    if sorted.windows(2).any(|w| w[0].code == w[1].code) {
        return Err(StoreError::Format("duplicate graph code".into()));
    }
    if let Some(r) = sorted.iter().find(|r| r.values.len() != COLUMNS.len()) {
        return Err(StoreError::Format(format!(
            "record {} has {} values, expected {}",
            r.code,
            r.values.len(),
            COLUMNS.len()
        )));
    }
    let widths: Vec<u8> = (0..COLUMNS.len())
        .map(|c| width_for(sorted.iter().map(|r| r.values[c]).max().unwrap_or(0)))
        .collect();
    write_atomically(out, |w| {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(COLUMNS.len() as u32).to_le_bytes())?;
        w.write_all(&(sorted.len() as u64).to_le_bytes())?;
        for (name, &width) in COLUMNS.iter().zip(&widths) {
            w.write_all(&[name.len() as u8])?;
            w.write_all(name.as_bytes())?;
            w.write_all(&[width])?;
        }
        for r in &sorted {
            w.write_all(&[r.code.order])?;
            w.write_all(&r.code.bits.to_le_bytes())?;
            for (&v, &width) in r.values.iter().zip(&widths) {
                w.write_all(&v.to_le_bytes()[..width as usize])?;
            }
        }
        for c in 0..COLUMNS.len() {
            let mut rows: Vec<u32> = (0..sorted.len() as u32).collect();
            rows.sort_by_key(|&r| (sorted[r as usize].values[c], r));
            let mut entries: Vec<(u64, u32, u32)> = Vec::new();
            for (pos, &r) in rows.iter().enumerate() {
                let v = sorted[r as usize].values[c];
                match entries.last_mut() {
                    Some(e) if e.0 == v => e.2 += 1,
                    _ => entries.push((v, pos as u32, 1)),
                }
            }
            w.write_all(&(entries.len() as u32).to_le_bytes())?;
            for (v, start, len) in entries {
                w.write_all(&v.to_le_bytes())?;
                w.write_all(&start.to_le_bytes())?;
                w.write_all(&len.to_le_bytes())?;
            }
            for r in rows {
                w.write_all(&r.to_le_bytes())?;
            }
        }
        Ok(())
    })
}

#[derive(Clone, Debug)]
struct ColumnIndex {
    /// `(value, start, len)` into `rows`, ascending by value.
    entries: Vec<(u64, u32, u32)>,
    rows: Vec<u32>,
}

/// An opened, immutable database.
#[derive(Clone, Debug)]
pub struct Database {
    codes: Vec<GraphCode>,
    widths: Vec<u8>,
    /// Column-major values.
    columns: Vec<Vec<u64>>,
    indexes: Vec<ColumnIndex>,
    order_ranges: BTreeMap<usize, Range<usize>>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], StoreError> {
        let end = self
            .at
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| StoreError::Format(format!("truncated at byte {}", self.at)))?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }

    fn uint(&mut self, width: usize) -> Result<u64, StoreError> {
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(self.take(width)?);
        Ok(u64::from_le_bytes(buf))
    }
}

impl Database {
    pub fn open(path: &Path) -> Result<Database, StoreError> {
        let mut file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return Err(StoreError::MissingDatabase(path.to_path_buf()))
            }
            Err(e) => return Err(e.into()),
        };
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;
        Database::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Database, StoreError> {
        let mut cur = Cursor { bytes, at: 0 };
        if cur.take(4)? != MAGIC {
            return Err(StoreError::Format("bad magic".into()));
        }
        let version = cur.uint(4)? as u32;
        if version != FORMAT_VERSION {
            return Err(StoreError::Format(format!("unsupported version {version}")));
        }
        let ncols = cur.uint(4)? as usize;
        let nrows = cur.uint(8)? as usize;
        let mut widths = Vec::with_capacity(ncols);
        for c in 0..ncols {
            let len = cur.uint(1)? as usize;
            let name = std::str::from_utf8(cur.take(len)?)
                .map_err(|_| StoreError::Format("column name is not UTF-8".into()))?;
            if COLUMNS.get(c) != Some(&name) {
                return Err(StoreError::Format(format!(
                    "unexpected column {name:?} at {c}"
                )));
            }
            let width = cur.uint(1)? as u8;
            if ![1, 2, 4, 8].contains(&width) {
                return Err(StoreError::Format(format!("bad width {width} for {name}")));
            }
            widths.push(width);
        }
        if ncols != COLUMNS.len() {
            return Err(StoreError::Format(format!(
                "expected {} columns",
                COLUMNS.len()
            )));
        }
        let mut codes = Vec::with_capacity(nrows);
        let mut columns = vec![Vec::with_capacity(nrows); ncols];
        for _ in 0..nrows {
            let order = cur.uint(1)? as usize;
            let bits = cur.uint(8)?;
            let code = GraphCode::new(order, bits)
                .map_err(|e| StoreError::Format(format!("bad graph code: {e}")))?;
            if codes.last().is_some_and(|&last| last >= code) {
                return Err(StoreError::Format("rows are not strictly ascending".into()));
            }
            codes.push(code);
            for (column, &width) in columns.iter_mut().zip(&widths) {
                column.push(cur.uint(width as usize)?);
            }
        }
        let mut indexes = Vec::with_capacity(ncols);
        for _ in 0..ncols {
            let count = cur.uint(4)? as usize;
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                entries.push((cur.uint(8)?, cur.uint(4)? as u32, cur.uint(4)? as u32));
            }
            let mut rows = Vec::with_capacity(nrows);
            for _ in 0..nrows {
                let r = cur.uint(4)? as u32;
                if r as usize >= nrows {
                    return Err(StoreError::Format("index row out of range".into()));
                }
                rows.push(r);
            }
            if entries
                .iter()
                .any(|&(_, s, l)| s as usize + l as usize > nrows)
            {
                return Err(StoreError::Format("index range out of bounds".into()));
            }
            indexes.push(ColumnIndex { entries, rows });
        }
        if cur.at != bytes.len() {
            return Err(StoreError::Format("trailing bytes".into()));
        }
        let mut order_ranges: BTreeMap<usize, Range<usize>> = BTreeMap::new();
        for (i, code) in codes.iter().enumerate() {
            order_ranges
                .entry(code.order())
                .and_modify(|r| r.end = i + 1)
                .or_insert(i..i + 1);
        }
        Ok(Database {
            codes,
            widths,
            columns,
            indexes,
            order_ranges,
        })
    }

    pub fn row_count(&self) -> usize {
        self.codes.len()
    }

    pub fn codes(&self) -> &[GraphCode] {
        &self.codes
    }

    pub fn code(&self, row: usize) -> GraphCode {
        self.codes[row]
    }

    /// Orders present, ascending.
    pub fn orders(&self) -> Vec<usize> {
        self.order_ranges.keys().copied().collect()
    }

    pub fn max_order(&self) -> usize {
        self.order_ranges.keys().next_back().copied().unwrap_or(0)
    }

    pub fn rows_of_order(&self, order: usize) -> Range<usize> {
        self.order_ranges.get(&order).cloned().unwrap_or(0..0)
    }

    pub fn column_width(&self, column: usize) -> u8 {
        self.widths[column]
    }

    pub fn column_index(&self, name: &str) -> Result<usize, StoreError> {
        COLUMNS
            .iter()
            .position(|&c| c == name)
            .ok_or_else(|| StoreError::UnknownColumn {
                name: name.to_string(),
                valid: COLUMNS.iter().map(|c| c.to_string()).collect(),
            })
    }

    pub fn value(&self, row: usize, column: usize) -> u64 {
        self.columns[column][row]
    }

    pub fn column_values(&self, column: usize) -> &[u64] {
        &self.columns[column]
    }

    pub fn record(&self, row: usize) -> InvariantRecord {
        InvariantRecord {
            code: self.codes[row],
            values: self.columns.iter().map(|c| c[row]).collect(),
        }
    }

    fn check_columns(&self, conditions: &[QueryCondition]) -> Result<Vec<usize>, StoreError> {
        conditions
            .iter()
            .map(|c| self.column_index(&c.column))
            .collect()
    }

    /// Rows of `order` matching every condition, through the column indexes.
    pub fn query_rows(
        &self,
        conditions: &[QueryCondition],
        order: usize,
    ) -> Result<Vec<usize>, StoreError> {
        let cols = self.check_columns(conditions)?;
        let range = self.rows_of_order(order);
        let words = range.len().div_ceil(64);
        let mut acc = vec![u64::MAX; words];
        if let Some(last) = acc.last_mut() {
            let tail = range.len() % 64;
            if tail != 0 {
                *last = (1u64 << tail) - 1;
            }
        }
        for (cond, &col) in conditions.iter().zip(&cols) {
            let index = &self.indexes[col];
            let mut hits = vec![0u64; words];
            for &(value, start, len) in &index.entries {
                if !cond.op.holds(value, cond.value) {
                    continue;
                }
                for &r in &index.rows[start as usize..(start + len) as usize] {
                    let r = r as usize;
                    if range.contains(&r) {
                        let k = r - range.start;
                        hits[k / 64] |= 1 << (k % 64);
                    }
                }
            }
            for (a, h) in acc.iter_mut().zip(hits) {
                *a &= h;
            }
        }
        let mut rows = Vec::new();
        for (w, &word) in acc.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                rows.push(range.start + w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        Ok(rows)
    }

    /// Codes of `order` satisfying every condition, ascending.
    pub fn query(
        &self,
        conditions: &[QueryCondition],
        order: usize,
    ) -> Result<Vec<GraphCode>, StoreError> {
        Ok(self
            .query_rows(conditions, order)?
            .into_iter()
            .map(|r| self.codes[r])
            .collect())
    }

    pub fn count(&self, conditions: &[QueryCondition], order: usize) -> Result<usize, StoreError> {
        Ok(self.query_rows(conditions, order)?.len())
    }

    /// The same result as [`query`](Self::query) by scanning every row.
    pub fn scan_query(
        &self,
        conditions: &[QueryCondition],
        order: usize,
    ) -> Result<Vec<GraphCode>, StoreError> {
        let cols = self.check_columns(conditions)?;
        Ok(self
            .rows_of_order(order)
            .filter(|&r| {
                conditions
                    .iter()
                    .zip(&cols)
                    .all(|(c, &col)| c.op.holds(self.columns[col][r], c.value))
            })
            .map(|r| self.codes[r])
            .collect())
    }

    /// Distinct values of a column at one order, ascending, with counts.
    pub fn value_counts(&self, column: usize, order: usize) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for r in self.rows_of_order(order) {
            *out.entry(self.columns[column][r]).or_insert(0) += 1;
        }
        out
    }

    /// Distinct values a column takes anywhere in the database.
    pub fn distinct_values(&self, column: usize) -> Vec<u64> {
        self.indexes[column].entries.iter().map(|e| e.0).collect()
    }

    pub fn export_csv(&self, out: &Path) -> Result<(), StoreError> {
        write_atomically(out, |w| self.write_csv(w))
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        write!(w, "order,bits")?;
        for name in COLUMNS {
            write!(w, ",{name}")?;
        }
        writeln!(w)?;
        for (r, code) in self.codes.iter().enumerate() {
            write!(w, "{},{}", code.order, code.bits)?;
            for column in &self.columns {
                write!(w, ",{}", column[r])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Reads records back from [`Database::export_csv`] output.
pub fn import_csv(path: &Path) -> Result<Vec<InvariantRecord>, StoreError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    let expected: Vec<&str> = ["order", "bits"].into_iter().chain(COLUMNS).collect();
    if header.split(',').collect::<Vec<_>>() != expected {
        return Err(StoreError::Csv {
            line: 1,
            message: "unexpected header".into(),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let csv_err = |message: String| StoreError::Csv {
            line: i + 2,
            message,
        };
        let fields: Result<Vec<u64>, _> = line.split(',').map(str::parse::<u64>).collect();
        let fields = fields.map_err(|e| csv_err(e.to_string()))?;
        if fields.len() != expected.len() {
            return Err(csv_err(format!("expected {} fields", expected.len())));
        }
        let code =
            GraphCode::new(fields[0] as usize, fields[1]).map_err(|e| csv_err(e.to_string()))?;
        records.push(InvariantRecord {
            code,
            values: fields[2..].to_vec(),
        });
    }
    Ok(records)
}

/// Reads `digest<TAB>text` lines.
pub fn read_side_file(path: &Path) -> Result<HashMap<u64, String>, StoreError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let (digest, text) = line
            .split_once('\t')
            .ok_or_else(|| StoreError::Format(format!("side file line {} lacks a tab", i + 1)))?;
        let digest = digest.parse().map_err(|_| {
            StoreError::Format(format!("side file line {} has a bad digest", i + 1))
        })?;
        out.insert(digest, text.to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_db(dir: &Path) -> Database {
        let path = dir.join("small.efg");
        let summary = build_database(&[1, 2, 3, 4], &path, &BuildOptions::default()).unwrap();
        assert_eq!(summary.total_rows, 10);
        Database::open(&path).unwrap()
    }

    #[test]
    fn conditions_parse() {
        let c: QueryCondition = "girth>=4".parse().unwrap();
        assert_eq!(c, QueryCondition::new("girth", Comparator::Ge, 4));
        assert_eq!(
            "is_tree=1".parse::<QueryCondition>().unwrap().op,
            Comparator::Eq
        );
        assert_eq!("a!=2".parse::<QueryCondition>().unwrap().op, Comparator::Ne);
        assert_eq!("a<2".parse::<QueryCondition>().unwrap().op, Comparator::Lt);
        assert!("girth".parse::<QueryCondition>().is_err());
        assert!("=3".parse::<QueryCondition>().is_err());
        assert!("a=x".parse::<QueryCondition>().is_err());
        assert_eq!(c.to_string(), "girth>=4");
    }

    #[test]
    fn build_query_and_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let db = small_db(dir.path());
        assert_eq!(db.orders(), vec![1, 2, 3, 4]);
        assert_eq!(db.rows_of_order(4).len(), 6);
        let trees = db.query(&[QueryCondition::eq("is_tree", 1)], 4).unwrap();
        assert_eq!(trees.len(), 2);
        let none = db
            .query(
                &[
                    QueryCondition::eq("girth", 3),
                    QueryCondition::eq("girth", 4),
                ],
                4,
            )
            .unwrap();
        assert!(none.is_empty());
        assert!(matches!(
            db.query(&[QueryCondition::eq("nope", 1)], 4),
            Err(StoreError::UnknownColumn { .. })
        ));
        assert!(matches!(
            Database::open(&dir.path().join("absent")),
            Err(StoreError::MissingDatabase(_))
        ));
        let side = read_side_file(&side_file_path(&dir.path().join("small.efg"))).unwrap();
        let k4 = db.record(db.rows_of_order(4).end - 1);
        let text = &side[&k4.get("tutte_poly_digest").unwrap()];
        assert!(text.contains("x^3 y^0: 1"));
    }

    #[test]
    fn rebuild_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.efg");
        let b = dir.path().join("b.efg");
        build_database(&[1, 2, 3, 4, 5], &a, &BuildOptions::default()).unwrap();
        let options = BuildOptions {
            threads: Some(1),
            ..BuildOptions::default()
        };
        build_database(&[5, 4, 3, 2, 1], &b, &options).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
        assert_eq!(
            fs::read(side_file_path(&a)).unwrap(),
            fs::read(side_file_path(&b)).unwrap()
        );
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let db = small_db(dir.path());
        let csv = dir.path().join("out.csv");
        db.export_csv(&csv).unwrap();
        let records = import_csv(&csv).unwrap();
        assert_eq!(records.len(), 10);
        for (r, rec) in records.iter().enumerate() {
            assert_eq!(*rec, db.record(r));
        }
        let copy = dir.path().join("copy.efg");
        write_database(&records, &copy).unwrap();
        assert_eq!(
            fs::read(&copy).unwrap(),
            fs::read(dir.path().join("small.efg")).unwrap()
        );
    }

    #[test]
    fn fractional_columns_of_c5() {
        let c5 = Graph::cycle(5).unwrap().canonical_code();
        let (rec, _) = compute_record(c5, DEFAULT_TUTTE_BUDGET).unwrap();
        assert_eq!(rec.get("fractional_numerator"), Some(5));
        assert_eq!(rec.get("fractional_denominator"), Some(2));
        assert_eq!(rec.get("has_chromatic_gap"), Some(1));
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        small_db(dir.path());
        let bytes = fs::read(dir.path().join("small.efg")).unwrap();
        assert!(Database::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Database::from_bytes(&bad).is_err());
        let mut extra = bytes;
        extra.push(0);
        assert!(Database::from_bytes(&extra).is_err());
    }

    #[test]
    fn failed_build_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.efg");
        let options = BuildOptions {
            tutte_budget: 0,
            ..BuildOptions::default()
        };
        let err = build_database(&[1, 2, 3, 4, 5], &path, &options).unwrap_err();
        assert!(matches!(
            err,
            StoreError::Algebraic(AlgebraicError::TutteBudgetExceeded { .. })
        ));
        assert!(!path.exists());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
        assert!(matches!(
            build_database(&[11], &path, &BuildOptions::default()),
            Err(StoreError::BadOrder(11))
        ));
    }
}
