//! Command-line front end. Exit codes: 0 success, 1 verification
//! counterexample, 2 usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::quadratic::QuadSqrt5;
use crate::semigroup::Semigroup;
use crate::stats::{self, EpsilonParams, VerifyOptions};
use crate::tree::{self, SubtreeSize, Traversal, TreeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest genus `draw` accepts without `--force`.
pub const DRAW_GENUS_GUARD: u32 = 14;

/// Node budget used when checking that finite-chain semigroups really have
/// finite subtrees.
pub const CHAIN_NODE_BUDGET: u64 = 10_000_000;

/// Chain consistency is checked exhaustively up to this genus.
pub const CHAIN_CHECK_MAX_GENUS: u32 = 12;

#[derive(Debug, Parser)]
#[command(name = "sgtree", version, about = "Explore the tree of numerical semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of semigroups of each genus
    Count {
        #[arg(long)]
        max_genus: u32,
        #[arg(long, default_value_t = 1, value_parser = parse_workers)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Per-genus counts of the multiplicity/Frobenius window sets
    Stats {
        #[arg(long)]
        max_genus: u32,
        /// Positive rational written p/q
        #[arg(long, default_value = "1/10", value_parser = parse_epsilon)]
        epsilon: BigRational,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 1, value_parser = parse_workers)]
        workers: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Exhaustively check the window inclusions and the chain classifier
    Verify {
        #[arg(long)]
        max_genus: u32,
        #[arg(long, default_value_t = 1, value_parser = parse_workers)]
        workers: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Every semigroup of one genus
    List {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The tree as a Graphviz digraph, infinite-chain edges highlighted
    Draw {
        #[arg(long)]
        max_genus: u32,
        #[arg(long)]
        no_highlight: bool,
        /// Allow genus above the readability guard
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_workers(text: &str) -> Result<usize, String> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("workers must be an integer >= 1, got {text:?}")),
    }
}

/// Parses `p/q` or a bare integer into a positive rational.
pub fn parse_epsilon(text: &str) -> Result<BigRational, String> {
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("expected p/q, got {text:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("expected p/q, got {text:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    let q = BigRational::new(num, den);
    if q <= BigRational::zero() {
        return Err(format!("epsilon must be positive, got {text}"));
    }
    Ok(q)
}

/// Settings that do not come from flags.
#[derive(Debug, Clone, Copy, Default)]
pub struct Env {
    /// Global node budget (`SGTREE_MAX_NODES`).
    pub max_nodes: Option<u64>,
}

impl Env {
    pub fn from_process() -> Result<Self, String> {
        match std::env::var("SGTREE_MAX_NODES") {
            Ok(v) => v
                .trim()
                .parse()
                .map(|n| Env { max_nodes: Some(n) })
                .map_err(|_| format!("SGTREE_MAX_NODES must be a nonnegative integer, got {v:?}")),
            Err(_) => Ok(Env::default()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, env: Env, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, env, stdout) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, String> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| format!("cannot create {}: {e}", p.display())),
        None => Ok(Box::new(stdout)),
    }
}

fn tree_err(e: TreeError) -> String {
    e.to_string()
}

fn execute(command: Command, env: Env, stdout: &mut dyn Write) -> Result<i32, String> {
    let io_err = |e: io::Error| e.to_string();
    match command {
        Command::Count {
            max_genus,
            workers,
            format,
            output,
        } => {
            let counts = Traversal::new(max_genus)
                .workers(workers)
                .node_cap(env.max_nodes)
                .enumerate_parallel(|_, _| {})
                .map_err(tree_err)?
                .per_genus_counts;
            let text = render_counts(&counts, format)?;
            open_output(&output, stdout)?.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Stats {
            max_genus,
            epsilon,
            format,
            workers,
            output,
        } => {
            let p = EpsilonParams::linked(QuadSqrt5::from_rational(epsilon)).map_err(|e| e.to_string())?;
            let traversal = Traversal::new(max_genus).workers(workers).node_cap(env.max_nodes);
            let rows = stats::stats_with(traversal, &p).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Csv => stats::render_csv(&rows),
                Format::Json => stats::render_json(&rows),
                other => return Err(format!("stats cannot be rendered as {other:?}")),
            };
            open_output(&output, stdout)?.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            max_genus,
            workers,
            output,
        } => {
            if max_genus < 6 {
                return Err(format!("verify needs --max-genus of at least 6, got {max_genus}"));
            }
            let config = VerifyConfig {
                max_genus,
                workers,
                chain_node_budget: CHAIN_NODE_BUDGET,
            };
            let mut out = open_output(&output, stdout)?;
            let passed = run_verify(&config, &|s: &Semigroup| s.in_infinite_chain(), &mut *out).map_err(io_err)?;
            Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::List { genus, format, output } => {
            let text = render_list(genus, format, env.max_nodes)?;
            open_output(&output, stdout)?.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Draw {
            max_genus,
            no_highlight,
            force,
            format,
            output,
        } => {
            if max_genus > DRAW_GENUS_GUARD && !force {
                return Err(format!(
                    "drawing beyond genus {DRAW_GENUS_GUARD} produces huge graphs; pass --force to proceed"
                ));
            }
            if env.max_nodes.is_some() {
                Traversal::new(max_genus)
                    .node_cap(env.max_nodes)
                    .enumerate(|_, _| {})
                    .map_err(tree_err)?;
            }
            let text = match format {
                Format::Dot => render_dot(max_genus, !no_highlight),
                Format::Json => render_tree_json(max_genus),
                other => return Err(format!("draw cannot be rendered as {other:?}")),
            };
            open_output(&output, stdout)?.write_all(text.as_bytes()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct CountRow {
    genus: usize,
    n_g: u64,
}

fn render_counts(counts: &[u64], format: Format) -> Result<String, String> {
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("genus,n_g\n");
            for (g, n) in counts.iter().enumerate() {
                s.push_str(&format!("{g},{n}\n"));
            }
            s
        }
        Format::Text => counts
            .iter()
            .enumerate()
            .map(|(g, n)| format!("{g:>4} {n}\n"))
            .collect(),
        Format::Json => {
            let rows: Vec<CountRow> = counts
                .iter()
                .enumerate()
                .map(|(genus, &n_g)| CountRow { genus, n_g })
                .collect();
            serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())? + "\n"
        }
        Format::Dot => return Err("counts cannot be rendered as dot".into()),
    })
}

#[derive(Serialize)]
struct ListRow {
    gaps: String,
    multiplicity: u32,
    frobenius: i32,
    gcd_left: u32,
    infinite: bool,
}

impl ListRow {
    fn new(s: &Semigroup) -> Self {
        ListRow {
            gaps: s.canonical_string(),
            multiplicity: s.multiplicity(),
            frobenius: s.frobenius(),
            gcd_left: s.gcd_left(),
            infinite: s.in_infinite_chain(),
        }
    }
}

fn render_list(genus: u32, format: Format, cap: Option<u64>) -> Result<String, String> {
    let mut rows = Vec::new();
    Traversal::new(genus)
        .node_cap(cap)
        .enumerate(|s, depth| {
            if depth == genus {
                rows.push(ListRow::new(s));
            }
        })
        .map_err(tree_err)?;
    Ok(match format {
        Format::Text => rows
            .iter()
            .map(|r| format!("{}\t{}\t{}\t{}\t{}\n", r.gaps, r.multiplicity, r.frobenius, r.gcd_left, r.infinite))
            .collect(),
        Format::Csv => {
            let mut s = String::from("gaps,multiplicity,frobenius,gcd_left,infinite\n");
            for r in &rows {
                s.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    r.gaps, r.multiplicity, r.frobenius, r.gcd_left, r.infinite
                ));
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())? + "\n",
        Format::Dot => return Err("list cannot be rendered as dot".into()),
    })
}

fn generator_label(s: &Semigroup) -> String {
    s.to_string()
}

/// Graphviz rendering of the tree down to `max_genus`. Node ids are gap
/// strings, labels are generating sets; every node carries its genus. Output
/// order is the serial depth-first order, so it is byte-stable.
pub fn render_dot(max_genus: u32, highlight: bool) -> String {
    let mut out = String::from("digraph semigroup_tree {\n  node [shape=box, fontname=\"Helvetica\"];\n");
    let mut stack: Vec<(Semigroup, Option<(String, u32)>)> = vec![(Semigroup::trivial(), None)];
    while let Some((s, from)) = stack.pop() {
        let id = s.canonical_string();
        out.push_str(&format!(
            "  \"{id}\" [label=\"{}\", genus={}];\n",
            generator_label(&s),
            s.genus()
        ));
        if let Some((parent, x)) = from {
            let attrs = if highlight && s.in_infinite_chain() {
                ", class=\"infinite\", color=\"red\", penwidth=2"
            } else {
                ""
            };
            out.push_str(&format!("  \"{parent}\" -> \"{id}\" [label=\"{x}\"{attrs}];\n"));
        }
        if s.genus() < max_genus {
            for (x, child) in tree::children(&s).into_iter().rev() {
                stack.push((child, Some((id.clone(), x))));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct JsonNode {
    id: String,
    gaps: String,
    genus: u32,
    generators: Vec<u32>,
    infinite: bool,
}

#[derive(Serialize)]
struct JsonTree {
    nodes: Vec<JsonNode>,
    edges: Vec<tree::TreeEdge>,
}

fn render_tree_json(max_genus: u32) -> String {
    let mut nodes = Vec::new();
    Traversal::new(max_genus)
        .enumerate(|s, _| {
            nodes.push(JsonNode {
                id: s.canonical_id(),
                gaps: s.canonical_string(),
                genus: s.genus(),
                generators: s.minimal_generators().to_vec(),
                infinite: s.in_infinite_chain(),
            })
        })
        .expect("uncapped serial traversal cannot fail");
    let doc = JsonTree {
        nodes,
        edges: tree::edges(max_genus),
    };
    serde_json::to_string_pretty(&doc).expect("tree serializes") + "\n"
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub max_genus: u32,
    pub workers: usize,
    pub chain_node_budget: u64,
}

const LISTED_COUNTEREXAMPLES: usize = 20;

fn report_line(out: &mut dyn Write, ok: bool, what: &str, bad: &[String]) -> io::Result<()> {
    writeln!(out, "{} {what}", if ok { "PASS" } else { "FAIL" })?;
    for s in bad.iter().take(LISTED_COUNTEREXAMPLES) {
        writeln!(out, "  counterexample: {{{s}}}")?;
    }
    if bad.len() > LISTED_COUNTEREXAMPLES {
        writeln!(out, "  ... and {} more", bad.len() - LISTED_COUNTEREXAMPLES)?;
    }
    Ok(())
}

/// Runs every verification check with the given infinite-chain classifier,
/// printing one PASS/FAIL line per check. Returns whether all passed.
pub fn run_verify(
    config: &VerifyConfig,
    in_infinite_chain: &(dyn Fn(&Semigroup) -> bool + Sync),
    out: &mut dyn Write,
) -> io::Result<bool> {
    let mut all_ok = true;
    let opts = VerifyOptions {
        workers: config.workers,
        allow_out_of_range: false,
    };
    for g in 6..=config.max_genus {
        let bound = stats::epsilon_max(g).expect("genus is at least 6");
        let half = bound.clone() / QuadSqrt5::from_integer(2);
        for (name, eps) in [("epsilon_max", bound), ("epsilon_max/2", half)] {
            let r = stats::verify_inclusions_with(g, &eps, opts, in_infinite_chain)
                .map_err(|e| io::Error::other(e.to_string()))?;
            let label = |what: &str| format!("g={g} eps={name} {what} (n_g={}, |AmF|={}, |B|={})", r.n_g, r.count_amf, r.count_b);
            for (what, bad) in [
                ("AmF subset of B", &r.violations_amf_in_b),
                ("B has consecutive left elements", &r.violations_b_consecutive),
                ("B subset of not-infinite", &r.violations_b_in_not_infinite),
            ] {
                report_line(out, bad.is_empty(), &label(what), bad)?;
                all_ok &= bad.is_empty();
            }
        }
    }
    let chain_genus = config.max_genus.min(CHAIN_CHECK_MAX_GENUS);
    let bad = chain_consistency(chain_genus, config.chain_node_budget, in_infinite_chain);
    report_line(
        out,
        bad.is_empty(),
        &format!("chain consistency up to genus {chain_genus}"),
        &bad,
    )?;
    all_ok &= bad.is_empty();
    Ok(all_ok)
}

/// Semigroups of genus at most `max_genus` where the classifier disagrees
/// with the tree: a finite-chain verdict whose subtree does not terminate
/// within `node_budget`, or an infinite-chain verdict with no child that is
/// itself classified infinite.
pub fn chain_consistency(
    max_genus: u32,
    node_budget: u64,
    in_infinite_chain: &(dyn Fn(&Semigroup) -> bool + Sync),
) -> Vec<String> {
    let mut bad = Vec::new();
    Traversal::new(max_genus)
        .enumerate(|s, _| {
            let ok = if in_infinite_chain(s) {
                tree::children(s).iter().any(|(_, c)| in_infinite_chain(c))
            } else {
                matches!(tree::subtree_is_finite(s, node_budget), SubtreeSize::Finite(_))
            };
            if !ok {
                bad.push(s.canonical_string());
            }
        })
        .expect("uncapped serial traversal cannot fail");
    bad
}
