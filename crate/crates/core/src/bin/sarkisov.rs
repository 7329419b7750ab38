use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sarkisov_core::anchors::{self, AnchorCheck};
use sarkisov_core::cases::{
    case_birational_times_birational, case_conic_times_conic, case_conic_times_curve_blowup,
    case_conic_times_point, derive_diamond_list, CaseOutcome, SearchBounds, DEFAULT_DC_MAX,
    DEFAULT_G_MAX,
};
use sarkisov_core::classify::{rows_from_outcomes, run_derived_cases, Parallelism};
use sarkisov_core::report::{canonical_json, emit_report, Format, ReportMeta, TextTable};
use sarkisov_core::solver::{solve_system, DiophantineSystem, IntegralityMode};
use sarkisov_core::tables::Tables;
use sarkisov_core::Error;

const TABLES_ENV: &str = "SARKISOV_TABLES";

#[derive(Parser, Debug)]
#[command(
    name = "sarkisov",
    version,
    about = "Case analysis of Sarkisov links from one-nodal Fano threefolds"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Dataset override (JSON). Falls back to $SARKISOV_TABLES.
    #[arg(long, global = true)]
    tables: Option<PathBuf>,
    /// Include derivation trails.
    #[arg(long, global = true)]
    trail: bool,
    /// Run case analyses on a single thread.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Md,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Md => Format::Markdown,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct BoundArgs {
    #[arg(long, default_value_t = DEFAULT_G_MAX, allow_negative_numbers = true)]
    g_max: i64,
    #[arg(long, default_value_t = DEFAULT_DC_MAX, allow_negative_numbers = true)]
    dc_max: i64,
}

impl From<BoundArgs> for SearchBounds {
    fn from(b: BoundArgs) -> Self {
        SearchBounds {
            g_max: b.g_max,
            dc_max: b.dc_max,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pipeline: the 17-row classification table.
    Classify(BoundArgs),
    /// Admissible (d, h12, d1) triples.
    Diamond,
    /// Solve the transfer system for one (d, d1, q, l).
    #[command(allow_negative_numbers = true)]
    Solve {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        d1: i64,
        #[arg(long)]
        rhs_q: i64,
        #[arg(long)]
        rhs_l: i64,
        /// Half-integer solutions (required iff d1 = 0).
        #[arg(long)]
        half: bool,
    },
    /// Run one case analysis.
    Case {
        #[arg(value_enum)]
        which: CaseArg,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Intersection-form checks on the rank-three lattice.
    Lattice,
    /// Dump the loaded datasets.
    Tables,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CaseArg {
    ConicPoint,
    ConicCurve,
    ConicConic,
    Birational,
}

/// Rendered output plus the anchored checks that apply to it.
struct Output {
    text: String,
    checks: Vec<AnchorCheck>,
}

fn load_tables(flag: Option<PathBuf>) -> sarkisov_core::Result<Tables> {
    let path = flag.or_else(|| {
        std::env::var_os(TABLES_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    match path {
        Some(p) => Tables::load(p),
        None => Ok(Tables::builtin()),
    }
}

fn table_output(table: TextTable, json: Value, format: Format) -> sarkisov_core::Result<String> {
    match format {
        Format::Json => canonical_json(&json),
        f => table.render(f),
    }
}

fn opt_str<T: ToString>(v: Option<&T>) -> Value {
    v.map_or(Value::Null, |x| Value::String(x.to_string()))
}

fn render_case(
    outcome: &CaseOutcome,
    format: Format,
    with_trail: bool,
) -> sarkisov_core::Result<String> {
    let mut table = TextTable::new(["d", "h12", "left", "right", "(a,b)", "link", "errata"]);
    let mut cands = Vec::new();
    for c in &outcome.candidates {
        let errata: Vec<String> = c.errata.iter().map(ToString::to_string).collect();
        table.push([
            c.d.to_string(),
            c.h12.to_string(),
            c.left.to_string(),
            c.right.to_string(),
            c.solution
                .as_ref()
                .map_or_else(|| "-".into(), ToString::to_string),
            c.link_id.map_or_else(|| "-".into(), |i| i.to_string()),
            errata.join(" | "),
        ]);
        let mut v = json!({
            "d": c.d,
            "h12": c.h12,
            "left": c.left.to_string(),
            "right": c.right.to_string(),
            "a": opt_str(c.solution.as_ref().map(|s| &s.a)),
            "b": opt_str(c.solution.as_ref().map(|s| &s.b)),
            "link_id": c.link_id,
            "system": c.system,
            "errata": errata,
        });
        if with_trail {
            v["trail"] =
                serde_json::to_value(&c.trail).map_err(|e| Error::Inconsistency(e.to_string()))?;
        }
        cands.push(v);
    }
    let mut json = json!({"case": outcome.case, "candidates": cands});
    if with_trail {
        json["trail"] = serde_json::to_value(&outcome.trail)
            .map_err(|e| Error::Inconsistency(e.to_string()))?;
    }
    let mut text = table_output(table, json, format)?;
    if with_trail && format == Format::Markdown {
        text.push_str("\n### trail\n\n");
        for step in &outcome.trail {
            text.push_str(&format!("- {}\n", step.text));
            for c in &step.checks {
                text.push_str(&format!("  - {c}\n"));
            }
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> sarkisov_core::Result<Output> {
    let format: Format = cli.format.into();
    let parallelism = if cli.serial {
        Parallelism::Serial
    } else {
        Parallelism::Threads
    };

    if let Command::Solve {
        d,
        d1,
        rhs_q,
        rhs_l,
        half,
    } = cli.command
    {
        let mode = if half {
            IntegralityMode::HalfIntegers
        } else {
            IntegralityMode::Integers
        };
        let sys = DiophantineSystem::new(d, d1, rhs_q, rhs_l, mode)?;
        let sols = solve_system(&sys)?;
        let mut table = TextTable::new(["a", "b"]);
        for s in &sols {
            table.push([s.a.to_string(), s.b.to_string()]);
        }
        let json = serde_json::to_value(&sols).map_err(|e| Error::Inconsistency(e.to_string()))?;
        return Ok(Output {
            text: table_output(table, json, format)?,
            checks: Vec::new(),
        });
    }

    let tables = load_tables(cli.tables)?;
    match cli.command {
        Command::Solve { .. } => unreachable!("handled above"),
        Command::Classify(bounds) => {
            let bounds: SearchBounds = bounds.into();
            let outcomes = run_derived_cases(&tables, bounds, parallelism)?;
            let rows = rows_from_outcomes(&tables, &outcomes)?;
            let mut checks = anchors::check_conic_conic(&outcomes[0]);
            checks.extend(anchors::check_conic_curve(&outcomes[1]));
            checks.extend(anchors::check_birational(&outcomes[2]));
            checks.extend(anchors::check_classification(&rows));
            let meta = ReportMeta {
                dataset_hash: tables.dataset_hash(),
                bounds,
            };
            Ok(Output {
                text: emit_report(&rows, format, &meta, cli.trail)?,
                checks,
            })
        }
        Command::Diamond => {
            let list = derive_diamond_list(&tables);
            let mut table = TextTable::new(["d", "h12", "d1"]);
            for t in &list {
                table.push([t.d.to_string(), t.h12.to_string(), t.d1.to_string()]);
            }
            let json =
                serde_json::to_value(&list).map_err(|e| Error::Inconsistency(e.to_string()))?;
            Ok(Output {
                text: table_output(table, json, format)?,
                checks: anchors::check_diamond(&list),
            })
        }
        Command::Case { which, bounds } => {
            let (outcome, checks) = match which {
                CaseArg::ConicPoint => {
                    let o = case_conic_times_point(&tables)?;
                    let c = anchors::check_conic_point(&o);
                    (o, c)
                }
                CaseArg::ConicCurve => {
                    let o = case_conic_times_curve_blowup(&tables)?;
                    let c = anchors::check_conic_curve(&o);
                    (o, c)
                }
                CaseArg::ConicConic => {
                    let o = case_conic_times_conic(&tables)?;
                    let c = anchors::check_conic_conic(&o);
                    (o, c)
                }
                CaseArg::Birational => {
                    let bounds: SearchBounds = bounds.into();
                    let o = case_birational_times_birational(&tables, bounds)?;
                    // containment is only promised at the default bounds or wider
                    let c = if bounds.g_max >= DEFAULT_G_MAX && bounds.dc_max >= DEFAULT_DC_MAX {
                        anchors::check_birational(&o)
                    } else {
                        Vec::new()
                    };
                    (o, c)
                }
            };
            Ok(Output {
                text: render_case(&outcome, format, cli.trail)?,
                checks,
            })
        }
        Command::Lattice => {
            let checks = anchors::check_lattice();
            let mut table = TextTable::new(["check", "passed", "value"]);
            for c in &checks {
                table.push([c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
            }
            let json =
                serde_json::to_value(&checks).map_err(|e| Error::Inconsistency(e.to_string()))?;
            Ok(Output {
                text: table_output(table, json, format)?,
                checks,
            })
        }
        Command::Tables => {
            let mut table = TextTable::new(["kind", "d", "index", "h12", "id", "citation"]);
            for r in tables.master_table() {
                table.push([
                    "fano".to_string(),
                    r.d.to_string(),
                    r.index.to_string(),
                    r.h12.to_string(),
                    String::new(),
                    String::new(),
                ]);
            }
            for c in tables.cited_links() {
                let cell = |v: Option<i64>| v.map_or_else(String::new, |x| x.to_string());
                table.push([
                    "cited".to_string(),
                    cell(c.d),
                    cell(c.index),
                    String::new(),
                    c.link_id.to_string(),
                    c.citation.clone(),
                ]);
            }
            let json = json!({
                "fano_rows": tables.master_table(),
                "cited_links": tables.cited_links().iter().map(|c| json!({
                    "id": c.link_id, "citation": c.citation, "d": c.d, "index": c.index,
                })).collect::<Vec<_>>(),
                "dataset_hash": tables.dataset_hash(),
            });
            Ok(Output {
                text: table_output(table, json, format)?,
                checks: Vec::new(),
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistency(_)
        | Error::EmptyReport
        | Error::SingularSystem
        | Error::NotACube { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            let failed: Vec<_> = out.checks.iter().filter(|c| !c.passed).collect();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                for c in failed {
                    eprintln!("sarkisov: anchored check {c}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("sarkisov: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
