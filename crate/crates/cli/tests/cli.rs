use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn efg() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_efg"));
    cmd.env_remove("EFG_DB").env_remove("OEIS_STRIPPED");
    cmd
}

fn run(args: &[&str]) -> Output {
    efg().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Orders 1..8, built once per test binary.
fn database() -> &'static Path {
    static DB: OnceLock<(tempfile::TempDir, PathBuf)> = OnceLock::new();
    let (_, path) = DB.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("graphs.efg");
        stdout(&run(&[
            "--db",
            path.to_str().unwrap(),
            "build",
            "--orders",
            "1-8",
        ]));
        (dir, path)
    });
    path
}

fn with_db(args: &[&str]) -> String {
    let mut full = vec!["--db", database().to_str().unwrap()];
    full.extend_from_slice(args);
    stdout(&run(&full))
}

#[test]
fn tree_sequence() {
    assert_eq!(
        with_db(&["sequence", "-i", "is_tree", "1"]),
        "is_tree=1: 1,1,1,2,3,6,11,23\n"
    );
    assert_eq!(
        with_db(&["sequence", "--cond", "is_tree=1", "--max-order", "5"]),
        "is_tree=1: 1,1,1,2,3\n"
    );
}

#[test]
fn comparison_flags() {
    assert_eq!(
        with_db(&["sequence", "-i-gt", "vertex_connectivity", "3"]),
        "vertex_connectivity>3: 0,0,0,0,1,4,25,384\n"
    );
    assert_eq!(
        with_db(&["sequence", "-i-ge", "vertex_connectivity", "4"]),
        "vertex_connectivity>=4: 0,0,0,0,1,4,25,384\n"
    );
    let json = with_db(&["sequence", "-i", "is_planar", "1", "--json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(
        value["terms"],
        serde_json::json!([1, 1, 2, 6, 20, 99, 646, 5974])
    );
}

#[test]
fn query_count_matches_sequence_term() {
    let seq = with_db(&[
        "sequence",
        "-i",
        "is_hamiltonian",
        "1",
        "-i",
        "is_chordal",
        "1",
    ]);
    let terms: Vec<usize> = seq
        .trim()
        .rsplit(": ")
        .next()
        .unwrap()
        .split(',')
        .map(|t| t.parse().unwrap())
        .collect();
    for order in 1..=8 {
        let count = with_db(&[
            "query",
            "--order",
            &order.to_string(),
            "-i",
            "is_hamiltonian",
            "1",
            "-i",
            "is_chordal",
            "1",
            "--count",
        ]);
        assert_eq!(count.trim().parse::<usize>().unwrap(), terms[order - 1]);
    }
    let listed = with_db(&[
        "query",
        "--order",
        "7",
        "-i",
        "is_hamiltonian",
        "1",
        "-i",
        "is_chordal",
        "1",
    ]);
    assert_eq!(listed.lines().count(), terms[6]);
}

#[test]
fn view_bipartite_eulerian_order_eight() {
    let dot = with_db(&[
        "view",
        "--order",
        "8",
        "-i",
        "is_bipartite",
        "1",
        "-i",
        "is_eulerian",
        "1",
    ]);
    assert_eq!(dot.matches("graph g8_").count(), 6);
    let dir = tempfile::tempdir().unwrap();
    let out = with_db(&[
        "view",
        "--order",
        "8",
        "-i",
        "is_bipartite",
        "1",
        "-i",
        "is_eulerian",
        "1",
        "--format",
        "svg",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.starts_with("wrote 6 drawings"));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 6);
    for f in files {
        let text = std::fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(text.starts_with("<svg"));
        assert_eq!(text.matches("<circle").count(), 8);
    }
}

#[test]
fn distinct_values() {
    assert_eq!(
        with_db(&["distinct", "tutte"]),
        "distinct tutte: 1,1,2,5,16,73,532,7245\n"
    );
    assert_eq!(
        with_db(&["distinct", "fractional_chromatic"]),
        "distinct fractional_chromatic: 1,1,2,3,5,7,11,17\n"
    );
}

#[test]
fn relations_include_tree_girth_equality() {
    let out = with_db(&["relations", "--max-order", "7", "--column", "is_tree"]);
    assert!(
        out.lines()
            .any(|l| l == "is_tree=1  ==  girth=0  [to order 7]"
                || l == "girth=0  ==  is_tree=1  [to order 7]"),
        "{out}"
    );
    assert!(out.lines().all(|l| l.contains("is_tree")));
}

#[test]
fn oeis_check_finds_trees() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("stripped");
    std::fs::write(
        &dump,
        "# sample\nA000055 ,1,1,1,1,2,3,6,11,23,47,106,\nA000108 ,1,1,2,5,14,42,132,429,\n",
    )
    .unwrap();
    let out = with_db(&[
        "oeis-check",
        "--dump",
        dump.to_str().unwrap(),
        "-i",
        "is_tree",
        "1",
    ]);
    assert_eq!(out, "is_tree=1 -> A000055 shift 1\n");
    let out = with_db(&[
        "oeis-check",
        "--dump",
        dump.to_str().unwrap(),
        "-i",
        "girth",
        "5",
    ]);
    assert_eq!(out, "girth=5 -> NOVEL\n");
}

#[test]
fn enumerate_lists_graphs() {
    assert_eq!(
        stdout(&run(&["enumerate", "--order", "8", "--count"])),
        "11117\n"
    );
    let listed = stdout(&run(&["enumerate", "--order", "4"]));
    assert_eq!(listed.lines().count(), 6);
    let brute = stdout(&run(&["enumerate", "--order", "4", "--method", "brute"]));
    assert_eq!(listed, brute);
    let mut sharded: Vec<String> = (0..2)
        .flat_map(|i| {
            stdout(&run(&[
                "enumerate",
                "--order",
                "6",
                "--shard",
                &format!("{i}/2"),
            ]))
            .lines()
            .map(str::to_string)
            .collect::<Vec<_>>()
        })
        .collect();
    sharded.sort();
    let mut whole: Vec<String> = stdout(&run(&["enumerate", "--order", "6"]))
        .lines()
        .map(str::to_string)
        .collect();
    whole.sort();
    assert_eq!(sharded, whole);
}

#[test]
fn builds_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.efg");
    let b = dir.path().join("b.efg");
    stdout(&run(&[
        "--db",
        a.to_str().unwrap(),
        "build",
        "--orders",
        "1-6",
    ]));
    stdout(&run(&[
        "--db",
        b.to_str().unwrap(),
        "--threads",
        "1",
        "build",
        "--orders",
        "6,1-5",
    ]));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let side = |p: &Path| std::fs::read(format!("{}.poly", p.display())).unwrap();
    assert_eq!(side(&a), side(&b));
}

#[test]
fn database_path_from_environment() {
    let out = efg()
        .env("EFG_DB", database())
        .args(["sequence", "-i", "is_tree", "1", "--max-order", "4"])
        .output()
        .unwrap();
    assert_eq!(stdout(&out), "is_tree=1: 1,1,1,2\n");
}

#[test]
fn export_writes_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    with_db(&["export", "--csv", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("order,bits,edges,diameter,"));
    assert_eq!(text.lines().count(), 1 + 12113);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.efg");
    let out = run(&[
        "--db",
        missing.to_str().unwrap(),
        "sequence",
        "-i",
        "is_tree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let db = database().to_str().unwrap();
    let out = run(&["--db", db, "sequence", "-i", "no_such_column", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("is_planar"));
    assert_eq!(
        run(&["--db", db, "distinct", "nothing"]).status.code(),
        Some(3)
    );

    let tiny = dir.path().join("tiny.efg");
    let out = run(&[
        "--db",
        tiny.to_str().unwrap(),
        "build",
        "--orders",
        "6",
        "--tutte-budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!tiny.exists());

    assert_eq!(
        run(&["--db", db, "sequence", "--cond", "girth~3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
