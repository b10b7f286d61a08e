//! `efg`: enumerate graphs, build the invariant database, query it, and mine
//! sequences and relations from it.

mod draw;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use efg_core::algebraic::{AlgebraicError, DEFAULT_TUTTE_BUDGET};
use efg_core::enumerate::{enumerate_connected, EnumerationPlan, Method};
use efg_core::oeis::{self, DEFAULT_MAX_SHIFT};
use efg_core::relations::{self, condition_catalog, mine_relations};
use efg_core::sequences::{
    build_sequence, distinct_value_sequence, submission_filter, SequenceError, SequenceResult,
    DISTINCT_ALIASES,
};
use efg_core::store::{build_database, BuildOptions, Database, QueryCondition, StoreError};
use efg_core::GraphCode;

const DEFAULT_DB: &str = "graphs.efg";

#[derive(Parser, Debug)]
#[command(
    name = "efg",
    version,
    about = "Small connected graphs, their invariants and integer sequences"
)]
struct Cli {
    /// Database file.
    #[arg(long, global = true, env = "EFG_DB", default_value = DEFAULT_DB)]
    db: PathBuf,

    /// Worker threads for enumeration and builds (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List canonical connected graphs of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Augment)]
        method: MethodArg,
        /// Shard as INDEX/TOTAL.
        #[arg(long)]
        shard: Option<String>,
        #[arg(long, value_enum, default_value_t = CodeFormat::Graph6)]
        format: CodeFormat,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Compute every invariant for the given orders and write the database.
    Build {
        /// Orders as a range `1-8` or a list `1,2,5`.
        #[arg(long, default_value = "1-8")]
        orders: String,
        #[arg(long, default_value_t = DEFAULT_TUTTE_BUDGET)]
        tutte_budget: u64,
        /// Skip the polynomial side file.
        #[arg(long)]
        no_side_file: bool,
    },
    /// Graphs of one order matching every condition.
    Query {
        #[arg(long)]
        order: usize,
        #[arg(long = "cond")]
        conditions: Vec<String>,
        #[arg(long, value_enum, default_value_t = CodeFormat::Graph6)]
        format: CodeFormat,
        #[arg(long)]
        count: bool,
    },
    /// Per-order counts of graphs matching every condition.
    Sequence {
        #[arg(long = "cond")]
        conditions: Vec<String>,
        /// Highest order (default: the database's).
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Per-order number of distinct values of a column or polynomial.
    Distinct {
        /// Column name, or one of: tutte, chromatic_poly, char_poly,
        /// laplacian_poly, degree_sequence, fractional_chromatic.
        name: String,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Equalities, inclusions and exclusions between single conditions.
    Relations {
        #[arg(long)]
        max_order: Option<usize>,
        /// Leave out columns with more distinct values than this.
        #[arg(long, default_value_t = 40)]
        max_values: usize,
        /// Only print relations involving this column.
        #[arg(long)]
        column: Option<String>,
    },
    /// Look sequences up in an OEIS stripped dump.
    OeisCheck {
        /// Path to the stripped file.
        #[arg(long, env = "OEIS_STRIPPED")]
        dump: PathBuf,
        #[arg(long = "cond")]
        conditions: Vec<String>,
        /// Distinct-value sequence to check instead of a condition sequence.
        #[arg(long)]
        distinct: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_SHIFT)]
        max_shift: usize,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Draw the graphs of one order matching every condition.
    View {
        #[arg(long)]
        order: usize,
        #[arg(long = "cond")]
        conditions: Vec<String>,
        #[arg(long, value_enum, default_value_t = DrawFormat::Dot)]
        format: DrawFormat,
        /// Write one file per graph here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write every record as CSV.
    Export {
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Augment,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CodeFormat {
    Graph6,
    Code,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DrawFormat {
    Dot,
    Svg,
}

/// Rewrites `-i col val` and `-i-gt col val` style conditions into
/// `--cond col>val`.
fn rewrite_conditions(args: Vec<String>) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        let op = match arg.as_str() {
            "-i" => "=",
            "-i-ne" => "!=",
            "-i-gt" => ">",
            "-i-ge" => ">=",
            "-i-lt" => "<",
            "-i-le" => "<=",
            _ => {
                out.push(arg);
                continue;
            }
        };
        let (Some(column), Some(value)) = (it.next(), it.next()) else {
            bail!("{arg} needs a column and a value");
        };
        out.push("--cond".to_string());
        out.push(format!("{column}{op}{value}"));
    }
    Ok(out)
}

fn parse_conditions(raw: &[String]) -> Result<Vec<QueryCondition>> {
    raw.iter()
        .map(|c| c.parse::<QueryCondition>().map_err(Into::into))
        .collect()
}

fn parse_orders(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once('-') {
            let a: usize = a
                .trim()
                .parse()
                .with_context(|| format!("bad order range {part:?}"))?;
            let b: usize = b
                .trim()
                .parse()
                .with_context(|| format!("bad order range {part:?}"))?;
            out.extend(a..=b);
        } else {
            out.push(
                part.parse()
                    .with_context(|| format!("bad order {part:?}"))?,
            );
        }
    }
    Ok(out)
}

fn open_db(path: &Path) -> Result<Database> {
    Ok(Database::open(path)?)
}

fn write_code(out: &mut impl Write, code: GraphCode, format: CodeFormat) -> io::Result<()> {
    match format {
        CodeFormat::Graph6 => writeln!(out, "{}", code.graph().to_graph6()),
        CodeFormat::Code => writeln!(out, "{code}"),
    }
}

fn print_sequence(out: &mut impl Write, seq: &SequenceResult, json: bool) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string(&seq.to_json())?)?;
    } else {
        writeln!(out, "{seq}")?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let threads = cli.threads.map(usize::from);
    match cli.command {
        Command::Enumerate {
            order,
            method,
            shard,
            format,
            count,
        } => {
            let method = match method {
                MethodArg::Augment => Method::CanonicalAugmentation,
                MethodArg::Brute => Method::BruteFilter,
            };
            let mut plan = EnumerationPlan::new(order, method)?;
            if let Some(shard) = shard {
                let (i, k) = shard
                    .split_once('/')
                    .context("shard must look like INDEX/TOTAL")?;
                plan = plan.with_shard(i.parse()?, k.parse()?)?;
            }
            let codes = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()?
                    .install(|| enumerate_connected(&plan))?,
                None => enumerate_connected(&plan)?,
            };
            if count {
                writeln!(out, "{}", codes.len())?;
            } else {
                for code in codes {
                    write_code(out, code, format)?;
                }
            }
        }
        Command::Build {
            orders,
            tutte_budget,
            no_side_file,
        } => {
            let orders = parse_orders(&orders)?;
            let options = BuildOptions {
                threads,
                tutte_budget,
                side_file: !no_side_file,
            };
            let summary = build_database(&orders, &cli.db, &options)?;
            for (order, rows) in &summary.rows_per_order {
                writeln!(out, "order {order}: {rows} graphs")?;
            }
            writeln!(
                out,
                "wrote {} rows to {} in {:.2}s",
                summary.total_rows,
                cli.db.display(),
                summary.elapsed.as_secs_f64()
            )?;
        }
        Command::Query {
            order,
            conditions,
            format,
            count,
        } => {
            let db = open_db(&cli.db)?;
            let codes = db.query(&parse_conditions(&conditions)?, order)?;
            if count {
                writeln!(out, "{}", codes.len())?;
            } else {
                for code in codes {
                    write_code(out, code, format)?;
                }
            }
        }
        Command::Sequence {
            conditions,
            max_order,
            json,
        } => {
            let db = open_db(&cli.db)?;
            let max = max_order.unwrap_or(db.max_order());
            let seq = build_sequence(&db, &parse_conditions(&conditions)?, max)?;
            print_sequence(out, &seq, json)?;
        }
        Command::Distinct {
            name,
            max_order,
            json,
        } => {
            let db = open_db(&cli.db)?;
            let max = max_order.unwrap_or(db.max_order());
            let seq = distinct_value_sequence(&db, &name, max)?;
            print_sequence(out, &seq, json)?;
        }
        Command::Relations {
            max_order,
            max_values,
            column,
        } => {
            let db = open_db(&cli.db)?;
            let max = max_order.unwrap_or(db.max_order());
            if let Some(c) = &column {
                db.column_index(c)?;
            }
            let catalog = condition_catalog(&db, max, Some(max_values));
            let found = mine_relations(&db, &catalog, max)?;
            let shown: Vec<_> = found
                .into_iter()
                .filter(|r| {
                    column
                        .as_ref()
                        .is_none_or(|c| r.left.iter().chain(&r.right).any(|q| &q.column == c))
                })
                .collect();
            write!(out, "{}", relations::report(&shown))?;
        }
        Command::OeisCheck {
            dump,
            conditions,
            distinct,
            max_shift,
            max_order,
        } => {
            let db = open_db(&cli.db)?;
            let catalog = oeis::parse_stripped(&dump)
                .with_context(|| format!("reading {}", dump.display()))?;
            let max = max_order.unwrap_or(db.max_order());
            let seqs = match (&distinct, conditions.is_empty()) {
                (Some(name), true) => vec![distinct_value_sequence(&db, name, max)?],
                (None, false) => vec![build_sequence(&db, &parse_conditions(&conditions)?, max)?],
                (Some(_), false) => bail!("give either conditions or --distinct, not both"),
                (None, true) => {
                    // every single-condition sequence worth submitting
                    let mut all = Vec::new();
                    for cond in condition_catalog(&db, max, Some(40)) {
                        let seq = build_sequence(&db, std::slice::from_ref(&cond), max)?;
                        if submission_filter(&seq) {
                            all.push(seq);
                        }
                    }
                    for (alias, _) in DISTINCT_ALIASES {
                        all.push(distinct_value_sequence(&db, alias, max)?);
                    }
                    all
                }
            };
            for seq in seqs {
                let matches = oeis::lookup(&catalog, &seq.terms, max_shift);
                writeln!(out, "{}", oeis::report_line(&seq.label, &matches))?;
            }
        }
        Command::View {
            order,
            conditions,
            format,
            out_dir,
        } => {
            let db = open_db(&cli.db)?;
            let codes = db.query(&parse_conditions(&conditions)?, order)?;
            let render = |code| match format {
                DrawFormat::Dot => draw::dot(code),
                DrawFormat::Svg => draw::svg(code),
            };
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    let ext = match format {
                        DrawFormat::Dot => "dot",
                        DrawFormat::Svg => "svg",
                    };
                    for code in &codes {
                        let path = dir.join(format!("{}.{ext}", draw::graph_name(*code)));
                        fs::write(&path, render(*code))?;
                    }
                    writeln!(out, "wrote {} drawings to {}", codes.len(), dir.display())?;
                }
                None => {
                    for code in codes {
                        write!(out, "{}", render(code))?;
                    }
                }
            }
        }
        Command::Export { csv } => {
            let db = open_db(&cli.db)?;
            db.export_csv(&csv)?;
            writeln!(out, "wrote {} rows to {}", db.row_count(), csv.display())?;
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        let store = cause.downcast_ref::<StoreError>().or_else(|| {
            match cause.downcast_ref::<SequenceError>() {
                Some(SequenceError::Store(s)) => Some(s),
                _ => None,
            }
        });
        match store {
            Some(StoreError::MissingDatabase(_)) => return 2,
            Some(StoreError::UnknownColumn { .. }) => return 3,
            Some(StoreError::Algebraic(AlgebraicError::TutteBudgetExceeded { .. })) => return 4,
            _ => {}
        }
        if let Some(AlgebraicError::TutteBudgetExceeded { .. }) = cause.downcast_ref() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let args = match rewrite_conditions(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
