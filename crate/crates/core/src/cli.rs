//! The `zac` command-line surface.
//!
//! Exit codes: 0 success, 1 internal fault, 2 unreadable input or bad
//! model, 3 bad plan, 4 mismatched plans, 5 unknown visualization mode.
//! Parse diagnostics never affect the exit status.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::lexer::dump_tokens;
use crate::metrics::{
    characteristic_label, compare, correlate_reports, run_plan, ComparisonRow, CorrelationResult,
    GqmPlan, MetricsReport,
};
use crate::model::{build_model, derive_namespaces, scan_tree, ArtifactKind, ScanOptions};
use crate::parser::dump_events;
use crate::pipeline::analyze_artifacts;
use crate::store::{
    export_model_csv, export_report_csv, load_model, record_run, save_model, utc_timestamp,
};
use crate::viz::{bar_chart, inheritance_graph, namespace_graph, treemap, GraphMode};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_BAD_PLAN: i32 = 3;
pub const EXIT_PLAN_MISMATCH: i32 = 4;
pub const EXIT_UNKNOWN_MODE: i32 = 5;

#[derive(Parser)]
#[command(
    name = "zac",
    version,
    about = "Analyze C++ source trees: semantic model, metrics, version deltas, visualizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan and parse a source tree into a model file
    Analyze {
        /// Root directory of the product tree
        root: PathBuf,
        /// Output model path (`-` for stdout); default `<root>.model.json`
        #[arg(long)]
        out: Option<String>,
        /// Glob patterns to exclude, matched against root-relative paths
        #[arg(long = "exclude", value_name = "GLOB")]
        exclude: Vec<String>,
        /// Extension map overrides, e.g. `source=c,cpp` or `doc=rst`
        #[arg(long = "ext-map", value_name = "KIND=EXT,...")]
        ext_map: Vec<String>,
        /// Print every token as `LINE:COL KIND LEXEME`
        #[arg(long)]
        dump_tokens: bool,
        /// Print every parse event as `LINE VARIANT detail`
        #[arg(long)]
        dump_events: bool,
    },
    /// Compute metrics for a saved model
    Measure {
        model: PathBuf,
        /// GQM plan file; the bundled default plan covers everything
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Output report path (`-` for stdout); default `<model stem>.report.json`
        #[arg(long)]
        out: Option<String>,
        /// Append this run to a JSON-lines run log
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Compare two metric reports (old vs new)
    Compare {
        old: PathBuf,
        new: PathBuf,
        /// Write comparison rows as JSON (`-` for stdout)
        #[arg(long)]
        out: Option<String>,
    },
    /// Correlate traditional and product-line measures across two reports
    Correlate { old: PathBuf, new: PathBuf },
    /// Render a visualization of a saved model
    Viz {
        model: PathBuf,
        /// One of: treemap, namespaces, bars, inheritance, includes
        #[arg(long)]
        mode: String,
        /// Output path (`-` for stdout); default `<model stem>.<mode>.svg|dot`
        #[arg(long)]
        out: Option<String>,
        /// Canvas size as WxH pixels (default 1024x768)
        #[arg(long)]
        canvas: Option<String>,
    },
    /// Export a model table or a report as CSV
    Export {
        /// A model or report JSON file
        file: PathBuf,
        /// Model table name, or `report` for a report file
        #[arg(long)]
        table: String,
        /// Output path (`-` for stdout)
        #[arg(long)]
        out: Option<String>,
    },
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::Plan(_) | Error::UnknownMetric(_) => EXIT_BAD_PLAN,
        Error::PlanMismatch(_) => EXIT_PLAN_MISMATCH,
        _ => EXIT_BAD_INPUT,
    }
}

/// Parses and runs a full command line (argv[0] included), returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("zac: {error}");
            exit_code_for(&error)
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Analyze {
            root,
            out,
            exclude,
            ext_map,
            dump_tokens,
            dump_events,
        } => cmd_analyze(&root, out, exclude, ext_map, dump_tokens, dump_events),
        Command::Measure {
            model,
            plan,
            out,
            log,
        } => cmd_measure(&model, plan.as_deref(), out, log.as_deref()),
        Command::Compare { old, new, out } => cmd_compare(&old, &new, out),
        Command::Correlate { old, new } => cmd_correlate(&old, &new),
        Command::Viz {
            model,
            mode,
            out,
            canvas,
        } => cmd_viz(&model, &mode, out, canvas),
        Command::Export { file, table, out } => cmd_export(&file, &table, out),
    }
}

fn parse_ext_map(specs: &[String]) -> Result<BTreeMap<String, ArtifactKind>, Error> {
    let mut map = crate::model::default_extension_map();
    for spec in specs {
        let (kind_name, exts) = spec.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!("--ext-map expects KIND=EXT,... got {spec:?}"))
        })?;
        let kind = match kind_name {
            "source" => ArtifactKind::Source,
            "header" => ArtifactKind::Header,
            "doc" => ArtifactKind::Doc,
            "other" => ArtifactKind::Other,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown artifact kind {other:?}; expected source, header, doc or other"
                )))
            }
        };
        for ext in exts.split(',').filter(|e| !e.is_empty()) {
            map.insert(ext.trim_start_matches('.').to_lowercase(), kind);
        }
    }
    Ok(map)
}

fn parse_canvas(spec: Option<&str>) -> Result<(f64, f64), Error> {
    let Some(spec) = spec else {
        return Ok((1024.0, 768.0));
    };
    let parsed = spec.split_once('x').and_then(|(w, h)| {
        let w: f64 = w.parse().ok()?;
        let h: f64 = h.parse().ok()?;
        (w > 0.0 && h > 0.0).then_some((w, h))
    });
    parsed.ok_or_else(|| {
        Error::InvalidArgument(format!("--canvas expects WxH with positive sizes, got {spec:?}"))
    })
}

/// Status chatter goes to stderr whenever the primary document occupies
/// stdout, so `--out -` pipes stay clean.
fn info(stdout_taken: bool, message: &str) {
    if stdout_taken {
        eprintln!("{message}");
    } else {
        println!("{message}");
    }
}

/// `--out -` means stdout.
fn write_output(out: &str, content: &str) -> Result<(), Error> {
    if out == "-" {
        print!("{content}");
        std::io::stdout().flush().map_err(|source| Error::Write {
            path: PathBuf::from("-"),
            source,
        })
    } else {
        std::fs::write(out, content).map_err(|source| Error::Write {
            path: PathBuf::from(out),
            source,
        })
    }
}

fn parallel_enabled() -> bool {
    std::env::var("ZAC_NO_PARALLEL").map(|v| v != "1").unwrap_or(true)
}

fn cmd_analyze(
    root: &Path,
    out: Option<String>,
    exclude: Vec<String>,
    ext_map: Vec<String>,
    want_tokens: bool,
    want_events: bool,
) -> Result<i32, Error> {
    let options = ScanOptions {
        extension_map: parse_ext_map(&ext_map)?,
        include_extensions: None,
        exclude_globs: exclude,
    };
    let (descriptors, scan_diags) = scan_tree(root, &options)?;
    let parsed = analyze_artifacts(root, &descriptors, parallel_enabled())?;

    if want_tokens || want_events {
        for artifact in &parsed {
            println!("== {}", artifact.descriptor.rel_path);
            if want_tokens {
                if let Some(stream) = &artifact.stream {
                    print!("{}", dump_tokens(stream));
                }
            }
            if want_events {
                print!("{}", dump_events(&artifact.outcome));
            }
        }
    }

    let mut outcomes = BTreeMap::new();
    let mut diagnostic_count = scan_diags.len();
    for artifact in parsed {
        diagnostic_count += artifact.outcome.diagnostics.len();
        outcomes.insert(artifact.descriptor.rel_path.clone(), artifact.outcome);
    }
    let namespaces = derive_namespaces(&descriptors);
    let (model, build_diags) = build_model(&descriptors, &outcomes, namespaces);
    diagnostic_count += build_diags.len();

    let out = out.unwrap_or_else(|| default_model_path(root));
    let to_stdout = out == "-";
    if to_stdout {
        write_output("-", &crate::store::model_to_json(&model))?;
    } else {
        save_model(&model, Path::new(&out))?;
    }
    info(
        to_stdout,
        &format!(
            "analyzed {} artifacts ({} parsed), {} namespaces, {} classes ({} external); {} diagnostics",
            model.artifacts.len(),
            model.artifacts.iter().filter(|a| a.kind.is_parsed()).count(),
            model.namespaces.len(),
            model.internal_classes().count(),
            model.classes.iter().filter(|c| c.is_external).count(),
            diagnostic_count
        ),
    );
    if !to_stdout {
        info(false, &format!("model written to {out}"));
    }
    Ok(EXIT_OK)
}

fn default_model_path(root: &Path) -> String {
    let stem = root
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .filter(|n| !n.is_empty() && n != "." && n != "..")
        .unwrap_or_else(|| "tree".to_string());
    format!("{stem}.model.json")
}

fn stem_of(path: &Path) -> String {
    path.with_extension("").to_string_lossy().into_owned()
}

fn cmd_measure(
    model_path: &Path,
    plan_path: Option<&Path>,
    out: Option<String>,
    log: Option<&Path>,
) -> Result<i32, Error> {
    let model = load_model(model_path)?;
    let plan = match plan_path {
        // Any failure to obtain the plan is a plan error (exit 3),
        // including an unreadable plan file.
        Some(path) => GqmPlan::load(path).map_err(|e| match e {
            Error::Plan(_) | Error::UnknownMetric(_) => e,
            other => Error::Plan(other.to_string()),
        })?,
        None => GqmPlan::default_plan(),
    };
    let report = run_plan(&model, &plan, &model_path.to_string_lossy())?;

    let out = out.unwrap_or_else(|| format!("{}.report.json", stem_of(model_path)));
    let to_stdout = out == "-";
    if to_stdout {
        eprint!("{}", render_report_table(&report));
    } else {
        print!("{}", render_report_table(&report));
    }
    write_output(&out, &report.to_json())?;
    if !to_stdout {
        info(false, &format!("report written to {out}"));
    }
    if let Some(log_path) = log {
        let run_id = record_run(
            log_path,
            utc_timestamp(),
            model_path.to_string_lossy().into_owned(),
            plan.name.clone(),
            report,
        )?;
        info(to_stdout, &format!("recorded run {run_id} in {}", log_path.display()));
    }
    Ok(EXIT_OK)
}

fn render_report_table(report: &MetricsReport) -> String {
    let mut out = String::new();
    let characteristics = report.characteristics_in_order();
    if !characteristics.is_empty() {
        out.push_str(&format!("{:<22} {:>10}\n", "Characteristic", "Value"));
        for (name, value) in characteristics {
            out.push_str(&format!("{:<22} {:>10}\n", characteristic_label(name), value));
        }
    }
    let measures = report.measures_in_order();
    if !measures.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!(
            "{:<10} {:>10} {:>8} {:>10}\n",
            "Measure", "Sum", "Max", "Mean"
        ));
        for (name, value) in measures {
            out.push_str(&format!(
                "{:<10} {:>10} {:>8} {:>10.2}\n",
                name, value.aggregate_sum, value.aggregate_max, value.aggregate_mean
            ));
        }
    }
    out
}

fn render_compare_table(rows: &[ComparisonRow]) -> String {
    let mut out = format!(
        "{:<20} {:>10} {:>10} {:>10} {:>10}\n",
        "Name", "Old", "New", "Absolute", "Relative"
    );
    for row in rows {
        let relative = row
            .relative_rendered()
            .map(|r| format!("{r} %"))
            .unwrap_or_else(|| "n/a".to_string());
        out.push_str(&format!(
            "{:<20} {:>10} {:>10} {:>10} {:>10}\n",
            row.name, row.old_value, row.new_value, row.absolute_improvement, relative
        ));
    }
    out
}

fn cmd_compare(old: &Path, new: &Path, out: Option<String>) -> Result<i32, Error> {
    let old_report = MetricsReport::load(old)?;
    let new_report = MetricsReport::load(new)?;
    let rows = compare(&old_report, &new_report)?;
    if out.as_deref() == Some("-") {
        eprint!("{}", render_compare_table(&rows));
    } else {
        print!("{}", render_compare_table(&rows));
    }
    if let Some(out) = out {
        let mut json = serde_json::to_string_pretty(&rows).expect("row serialization");
        json.push('\n');
        write_output(&out, &json)?;
    }
    Ok(EXIT_OK)
}

fn render_correlation(result: &CorrelationResult) -> String {
    let mut out = format!(
        "{:<16} {:>12} {:>13}\n",
        "Pair", "Traditional", "Product-line"
    );
    for pair in &result.pairs {
        out.push_str(&format!(
            "{:<16} {:>12} {:>13}\n",
            pair.label, pair.traditional, pair.product_line
        ));
    }
    out.push_str(&format!(
        "r = {:+.4} (reference value: +0.93)\n",
        result.r
    ));
    out
}

fn cmd_correlate(old: &Path, new: &Path) -> Result<i32, Error> {
    let old_report = MetricsReport::load(old)?;
    let new_report = MetricsReport::load(new)?;
    let result = correlate_reports(&old_report, &new_report)?;
    print!("{}", render_correlation(&result));
    Ok(EXIT_OK)
}

fn cmd_viz(
    model_path: &Path,
    mode: &str,
    out: Option<String>,
    canvas: Option<String>,
) -> Result<i32, Error> {
    let extension = match mode {
        "treemap" | "bars" => "svg",
        "namespaces" | "inheritance" | "includes" => "dot",
        other => {
            eprintln!(
                "zac: unknown visualization mode {other:?}; \
                 expected treemap, namespaces, bars, inheritance or includes"
            );
            return Ok(EXIT_UNKNOWN_MODE);
        }
    };
    let (width, height) = parse_canvas(canvas.as_deref())?;
    let model = load_model(model_path)?;
    let document = match mode {
        "treemap" => treemap(&model, width, height),
        "bars" => bar_chart(&model, width, height),
        "namespaces" => namespace_graph(&model),
        "inheritance" => inheritance_graph(&model, GraphMode::ClassInheritance),
        "includes" => inheritance_graph(&model, GraphMode::IncludeRelationship),
        _ => unreachable!("mode validated above"),
    };
    let out = out.unwrap_or_else(|| format!("{}.{mode}.{extension}", stem_of(model_path)));
    write_output(&out, &document)?;
    if out != "-" {
        println!("{mode} written to {out}");
    }
    Ok(EXIT_OK)
}

fn cmd_export(file: &Path, table: &str, out: Option<String>) -> Result<i32, Error> {
    let text = std::fs::read_to_string(file).map_err(|source| Error::Io {
        path: file.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: file.to_path_buf(),
            source,
        })?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or("");

    let mut buffer = Vec::new();
    if schema == crate::metrics::REPORT_SCHEMA || table == "report" {
        if table != "report" {
            return Err(Error::UnknownTable {
                name: table.to_string(),
                valid: "report (for report files)".to_string(),
            });
        }
        let report: MetricsReport = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: file.to_path_buf(),
            source,
        })?;
        export_report_csv(&report, &mut buffer)?;
    } else {
        let model = load_model(file)?;
        export_model_csv(&model, table, &mut buffer)?;
    }
    let content = String::from_utf8(buffer).expect("csv output is UTF-8");
    match out {
        Some(out) => write_output(&out, &content)?,
        None => print!("{content}"),
    }
    Ok(EXIT_OK)
}
