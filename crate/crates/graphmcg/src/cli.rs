//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a computation failure (including oracle
//! disagreement and failed self-test criteria), 2 on usage or parse errors.
//! Every successful run ends with a machine-readable `#RESULT` line.

use crate::acceptance;
use crate::cech::{BasisFamily, RawFn};
use crate::classify::{build_generating_set, classify_coarse, table_cell};
use crate::endspace::EndSpaceExpr;
use crate::flux::{
    flux_fast, flux_oracle_clopen, flux_projection, marked_subexpression, ClopenSet, FluxContext,
};
use crate::graphmodel::{parse_descriptor, wedge_decomposition, GraphDescriptor};
use crate::mcgelems::parse_mcg_word;
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "graphmcg",
    about = "Coarse geometry and flux calculus for pure mapping class groups of infinite graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Path to a graph descriptor file.
    #[arg(short, long, value_name = "FILE")]
    graph: Option<String>,
    /// Positional alternative to --graph.
    #[arg(value_name = "FILE")]
    graph_positional: Option<String>,
}

impl GraphArg {
    fn path(&self) -> Result<&str, String> {
        self.graph
            .as_deref()
            .or(self.graph_positional.as_deref())
            .ok_or_else(|| "missing graph descriptor (pass a file or --graph)".to_string())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the coarse geometry of the pure mapping class group.
    Classify {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Rank of the first integral cohomology.
    H1 {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Basis family of cylinder sets of the end space.
    Basis {
        #[command(flatten)]
        graph: GraphArg,
        /// Truncation depth of the family.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Use the marked subspace instead of the whole end space.
        #[arg(long)]
        marked: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decompose a cylinder indicator (or function literal) over the basis.
    Decompose {
        #[command(flatten)]
        graph: GraphArg,
        /// Function literal such as "2*[00] + -1*[10]".
        #[arg(long, value_name = "EXPR")]
        clopen: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        marked: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Flux of a mapping class word against a clopen set of marked ends,
    /// by the fast path and by the corank oracle.
    Flux {
        #[command(flatten)]
        graph: GraphArg,
        /// Mapping class word, e.g. "shift(1)^2 swap({1.0},{2.0})".
        #[arg(long, value_name = "WORD")]
        word: String,
        /// Clopen subset of the marked ends, e.g. "[A1]" or "[0]".
        #[arg(long, value_name = "EXPR")]
        clopen: String,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The coarsely bounded generating set of a CB-generated graph.
    Genset {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Residual finiteness and Tits-alternative verdicts.
    Props {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Finite witnesses for the infinite-rank obstructions.
    Witness {
        /// Which witness family: "wreath" or "grigorchuk".
        #[arg(value_name = "FAMILY")]
        family: String,
        /// Truncation depth (grigorchuk) or block count bound (wreath).
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the acceptance criteria headlessly.
    Selftest,
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own message; keep its exit code for help
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
        Err(CliError::Computation(message)) => {
            eprintln!("error: {message}");
            EXIT_COMPUTATION
        }
    }
}

enum CliError {
    Usage(String),
    Computation(String),
}

fn load_graph(arg: &GraphArg) -> Result<GraphDescriptor, CliError> {
    let path = arg.path().map_err(CliError::Usage)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    parse_descriptor(&text).map_err(|e| CliError::Usage(e.to_string()))
}

/// Stable 64-bit digest of the inputs, for reproducible reports.
fn digest(parts: &[&str]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for byte in part.bytes().chain([0x1f]) {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{hash:016x}")
}

fn print_result_line(command: &str, inputs: &[&str], fields: &[(&str, String)]) {
    let mut line = format!("#RESULT command={command} digest={}", digest(inputs));
    for (key, value) in fields {
        let _ = write!(line, " {key}={value}");
    }
    println!("{line}");
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Classify { graph, format } => {
            let g = load_graph(&graph)?;
            let classification = classify_coarse(&g);
            let cell = table_cell(&g).map_err(|e| CliError::Computation(e.to_string()))?;
            let wedge = wedge_decomposition(&g);
            if format == Format::Text {
                println!("class: {}", classification.class);
                println!("cell: {cell}");
                println!("clause: {}", classification.witness);
                match wedge {
                    Some(w) => {
                        println!("wedge: {}", w.raw);
                        println!("wedge canonical: {}", w.canonical);
                    }
                    None => println!("wedge: not decomposable"),
                }
            }
            let ends = g.ends().to_string();
            print_result_line(
                "classify",
                &[&ends, &g.rank().to_string()],
                &[
                    ("class", format!("{:?}", classification.class)),
                    ("cell", format!("{cell}").replace(' ', "")),
                    (
                        "wedge",
                        wedge
                            .map(|w| format!("{}", w.canonical).replace(' ', ","))
                            .unwrap_or_else(|| "none".into()),
                    ),
                ],
            );
            Ok(EXIT_OK)
        }
        Command::H1 { graph, format } => {
            let g = load_graph(&graph)?;
            let rank = crate::classify::h1_rank(&g);
            if format == Format::Text {
                println!("first cohomology rank: {rank}");
            }
            let ends = g.ends().to_string();
            print_result_line("h1", &[&ends], &[("rank", rank.to_string())]);
            Ok(EXIT_OK)
        }
        Command::Basis { graph, depth, marked, format } => {
            let g = load_graph(&graph)?;
            let expr = select_space(&g, marked)?;
            let basis = BasisFamily::new(&expr, depth.max(1));
            if format == Format::Text {
                for (i, address) in basis.elements().iter().enumerate() {
                    println!("A{} = [{address}]", i + 1);
                }
            }
            let listing = basis
                .elements()
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let expr_text = expr.to_string();
            print_result_line(
                "basis",
                &[&expr_text, &depth.to_string()],
                &[("size", basis.len().to_string()), ("elements", listing)],
            );
            Ok(EXIT_OK)
        }
        Command::Decompose { graph, clopen, depth, marked, format } => {
            let g = load_graph(&graph)?;
            let expr = select_space(&g, marked)?;
            let basis = BasisFamily::new(&expr, depth.max(1));
            let raw = RawFn::parse(&expr, &clopen).map_err(|e| CliError::Usage(e.to_string()))?;
            let class = basis
                .canonicalize(&raw)
                .map_err(|e| CliError::Computation(e.to_string()))?;
            if format == Format::Text {
                println!("input: {clopen}");
                println!("canonical: {class}");
                println!("class modulo constants: {}", class.chom_class());
            }
            let expr_text = expr.to_string();
            print_result_line(
                "decompose",
                &[&expr_text, &clopen],
                &[("canonical", class.to_string().replace(' ', ""))],
            );
            Ok(EXIT_OK)
        }
        Command::Flux { graph, word, clopen, depth, format } => {
            let g = load_graph(&graph)?;
            let ctx = FluxContext::new(&g, depth.max(1))
                .map_err(|e| CliError::Computation(e.to_string()))?;
            let w = parse_mcg_word(&word).map_err(|e| CliError::Usage(e.to_string()))?;
            let set = ClopenSet::parse(&ctx, &clopen).map_err(|e| CliError::Usage(e.to_string()))?;
            let fast =
                flux_fast(&ctx, &w, &set).map_err(|e| CliError::Computation(e.to_string()))?;
            let oracle = flux_oracle_clopen(&ctx, &w, &set)
                .map_err(|e| CliError::Computation(e.to_string()))?;
            let agree = fast == oracle;
            let vector = flux_projection(&ctx, &w)
                .map_err(|e| CliError::Computation(e.to_string()))?;
            if format == Format::Text {
                println!(
                    "fast={fast} oracle={oracle} {}",
                    if agree { "AGREE" } else { "DISAGREE" }
                );
                println!("flux vector: {vector}");
            }
            print_result_line(
                "flux",
                &[&word, &clopen],
                &[
                    ("fast", fast.to_string()),
                    ("oracle", oracle.to_string()),
                    ("agree", agree.to_string()),
                ],
            );
            Ok(if agree { EXIT_OK } else { EXIT_COMPUTATION })
        }
        Command::Genset { graph, format } => {
            let g = load_graph(&graph)?;
            let set = build_generating_set(&g).map_err(|e| CliError::Computation(e.to_string()))?;
            let (w, b, h) = set.counts();
            if format == Format::Text {
                println!("wedge: {}", set.wedge);
                println!("neighborhood: {}", set.neighborhood_note);
                for g in &set.word_maps {
                    println!("W: {g}");
                }
                for g in &set.loop_swaps {
                    println!("B: {g}");
                }
                for g in &set.loop_shifts {
                    println!("H: {g}");
                }
                if set.uses_millipede_loop {
                    println!("note: word maps push over the first millipede loop");
                }
            }
            let ends = g.ends().to_string();
            print_result_line(
                "genset",
                &[&ends],
                &[
                    ("word_maps", w.to_string()),
                    ("loop_swaps", b.to_string()),
                    ("loop_shifts", h.to_string()),
                ],
            );
            Ok(EXIT_OK)
        }
        Command::Props { graph, format } => {
            let g = load_graph(&graph)?;
            let rf = crate::algprops::is_residually_finite(&g);
            let ta_pmap = crate::algprops::satisfies_tits_alternative_pmap(&g);
            let ta_map = crate::algprops::satisfies_tits_alternative_map(&g);
            if format == Format::Text {
                println!(
                    "residually finite: {rf} (finite rank: {})",
                    g.rank().is_finite()
                );
                println!("Tits alternative (pure group): {ta_pmap} (finite rank)");
                println!(
                    "Tits alternative (full group): {ta_map} (finite rank and finite end space)"
                );
            }
            let ends = g.ends().to_string();
            print_result_line(
                "props",
                &[&ends, &g.rank().to_string()],
                &[
                    ("rf", rf.to_string()),
                    ("ta_pmap", ta_pmap.to_string()),
                    ("ta_map", ta_map.to_string()),
                ],
            );
            Ok(EXIT_OK)
        }
        Command::Witness { family, depth, format } => match family.as_str() {
            "wreath" => {
                let bound = depth.clamp(1, 4) as i64;
                let mut all = true;
                for n in 1..=bound.min(3) as u32 {
                    for m in 1..=bound {
                        let ok = crate::algprops::wreath_relation_check(n, m, 0);
                        all &= ok;
                        if format == Format::Text {
                            println!("shift relation n={n} m={m}: {}", if ok { "ok" } else { "FAILED" });
                        }
                    }
                }
                print_result_line("witness", &["wreath", &depth.to_string()], &[(
                    "holds",
                    all.to_string(),
                )]);
                Ok(if all { EXIT_OK } else { EXIT_COMPUTATION })
            }
            "grigorchuk" => {
                let report = crate::algprops::grigorchuk_relation_check(depth.clamp(1, 6));
                if format == Format::Text {
                    println!(
                        "depth {}: squares {} product {}",
                        report.depth,
                        if report.squares_are_identity { "ok" } else { "FAILED" },
                        if report.product_bcd_is_identity { "ok" } else { "FAILED" }
                    );
                }
                print_result_line("witness", &["grigorchuk", &depth.to_string()], &[(
                    "holds",
                    report.holds().to_string(),
                )]);
                Ok(if report.holds() { EXIT_OK } else { EXIT_COMPUTATION })
            }
            other => Err(CliError::Usage(format!(
                "unknown witness family {other:?} (expected wreath or grigorchuk)"
            ))),
        },
        Command::Selftest => {
            let outcomes = acceptance::run_all();
            let mut all = true;
            for o in &outcomes {
                println!(
                    "criterion {}: {} — {} ({})",
                    o.id,
                    o.name,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.details
                );
                all &= o.passed;
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            print_result_line(
                "selftest",
                &[],
                &[
                    ("passed", passed.to_string()),
                    ("total", outcomes.len().to_string()),
                ],
            );
            Ok(if all { EXIT_OK } else { EXIT_COMPUTATION })
        }
    }
}

fn select_space(g: &GraphDescriptor, marked: bool) -> Result<EndSpaceExpr, CliError> {
    if marked {
        marked_subexpression(g.ends())
            .ok_or_else(|| CliError::Computation("the graph has no marked ends".into()))
    } else {
        Ok(g.ends().clone())
    }
}
