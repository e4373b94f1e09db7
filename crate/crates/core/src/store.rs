//! Persistence: the canonical model document, CSV exports and the
//! append-only run log.
//!
//! The store is file-based. Models are single JSON documents with a fixed
//! key order so equal models serialize to equal bytes; runs append to a
//! JSON-lines log. Timestamps appear only in the run log and are excluded
//! from any canonical-bytes comparison.

use std::io::{BufRead, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::metrics::MetricsReport;
use crate::model::{
    Artifact, ClassEntity, CodeModel, DeclaredNamespaceRecord, DecisionRecord, IncludeEdge,
    InheritanceEdge, MacroDef, MacroExpansionRecord, NamespaceNode, PragmaCount,
};
use crate::Error;

pub const MODEL_SCHEMA: &str = "zac-model/1";

/// Valid table names for CSV export, in schema order.
pub const MODEL_TABLES: &[&str] = &[
    "artifacts",
    "namespaces",
    "classes",
    "inheritance_edges",
    "include_edges",
    "macro_defs",
    "declared_namespaces",
    "decision_events",
    "macro_expansions",
    "pragmas",
];

#[derive(Serialize)]
struct ModelDocumentRef<'a> {
    schema: &'a str,
    artifacts: &'a [Artifact],
    namespaces: &'a [NamespaceNode],
    classes: &'a [ClassEntity],
    inheritance_edges: &'a [InheritanceEdge],
    include_edges: &'a [IncludeEdge],
    macro_defs: &'a [MacroDef],
    declared_namespaces: &'a [DeclaredNamespaceRecord],
    decision_events: &'a [DecisionRecord],
    macro_expansions: &'a [MacroExpansionRecord],
    pragmas: &'a [PragmaCount],
}

#[derive(Deserialize)]
struct ModelDocument {
    schema: String,
    #[serde(flatten)]
    model: CodeModel,
}

/// Canonical JSON bytes for a model: fixed key order, two-space indent,
/// trailing newline. Equal models produce equal bytes.
pub fn model_to_json(model: &CodeModel) -> String {
    let doc = ModelDocumentRef {
        schema: MODEL_SCHEMA,
        artifacts: &model.artifacts,
        namespaces: &model.namespaces,
        classes: &model.classes,
        inheritance_edges: &model.inheritance_edges,
        include_edges: &model.include_edges,
        macro_defs: &model.macro_defs,
        declared_namespaces: &model.declared_namespaces,
        decision_events: &model.decision_events,
        macro_expansions: &model.macro_expansions,
        pragmas: &model.pragmas,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("model serialization cannot fail");
    text.push('\n');
    text
}

pub fn save_model(model: &CodeModel, path: &Path) -> Result<(), Error> {
    std::fs::write(path, model_to_json(model)).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a model document, checking the schema version and referential
/// integrity before handing the model out.
pub fn load_model(path: &Path) -> Result<CodeModel, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let doc: ModelDocument = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if doc.schema != MODEL_SCHEMA {
        return Err(Error::SchemaVersion {
            found: doc.schema,
            expected: MODEL_SCHEMA.to_string(),
        });
    }
    doc.model.validate()?;
    Ok(doc.model)
}

fn csv_error(source: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv write failed: {source}"))
}

/// Writes one model table as CSV with a header row, rows in id order.
pub fn export_model_csv(
    model: &CodeModel,
    table: &str,
    out: &mut dyn std::io::Write,
) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    match table {
        "artifacts" => {
            w.write_record(["id", "path", "kind", "size_bytes", "namespace_id"])
                .map_err(csv_error)?;
            for a in &model.artifacts {
                w.write_record(&[
                    a.id.to_string(),
                    a.path.clone(),
                    a.kind.name().to_string(),
                    a.size_bytes.to_string(),
                    a.namespace_id.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        "namespaces" => {
            w.write_record(["id", "name", "parent", "path"]).map_err(csv_error)?;
            for n in &model.namespaces {
                w.write_record(&[
                    n.id.to_string(),
                    n.name.clone(),
                    n.parent.map(|p| p.to_string()).unwrap_or_default(),
                    n.path.clone(),
                ])
                .map_err(csv_error)?;
            }
        }
        "classes" => {
            w.write_record(["id", "qualified_name", "artifact", "kind", "is_external"])
                .map_err(csv_error)?;
            for c in &model.classes {
                w.write_record(&[
                    c.id.to_string(),
                    c.qualified_name.clone(),
                    c.artifact.map(|a| a.to_string()).unwrap_or_default(),
                    c.kind.name().to_string(),
                    c.is_external.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        "inheritance_edges" => {
            w.write_record(["derived", "base", "access", "is_virtual"])
                .map_err(csv_error)?;
            for e in &model.inheritance_edges {
                w.write_record(&[
                    e.derived.to_string(),
                    e.base.to_string(),
                    e.access.name().to_string(),
                    e.is_virtual.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        "include_edges" => {
            w.write_record(["from_artifact", "target_text", "resolved_artifact", "style"])
                .map_err(csv_error)?;
            for e in &model.include_edges {
                w.write_record(&[
                    e.from_artifact.to_string(),
                    e.target_text.clone(),
                    e.resolved_artifact.map(|a| a.to_string()).unwrap_or_default(),
                    match e.style {
                        crate::parser::IncludeStyle::Angle => "angle".to_string(),
                        crate::parser::IncludeStyle::Quote => "quote".to_string(),
                    },
                ])
                .map_err(csv_error)?;
            }
        }
        "macro_defs" => {
            w.write_record(["name", "artifact", "is_function_like"])
                .map_err(csv_error)?;
            for m in &model.macro_defs {
                w.write_record(&[
                    m.name.clone(),
                    m.artifact.to_string(),
                    m.is_function_like.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        "declared_namespaces" => {
            w.write_record(["artifact", "name", "line"]).map_err(csv_error)?;
            for r in &model.declared_namespaces {
                w.write_record(&[r.artifact.to_string(), r.name.clone(), r.line.to_string()])
                    .map_err(csv_error)?;
            }
        }
        "decision_events" => {
            w.write_record(["artifact", "kind", "line"]).map_err(csv_error)?;
            for r in &model.decision_events {
                w.write_record(&[
                    r.artifact.to_string(),
                    r.kind.name().to_string(),
                    r.line.to_string(),
                ])
                .map_err(csv_error)?;
            }
        }
        "macro_expansions" => {
            w.write_record(["artifact", "name", "line"]).map_err(csv_error)?;
            for r in &model.macro_expansions {
                w.write_record(&[r.artifact.to_string(), r.name.clone(), r.line.to_string()])
                    .map_err(csv_error)?;
            }
        }
        "pragmas" => {
            w.write_record(["artifact", "count"]).map_err(csv_error)?;
            for r in &model.pragmas {
                w.write_record(&[r.artifact.to_string(), r.count.to_string()])
                    .map_err(csv_error)?;
            }
        }
        other => {
            return Err(Error::UnknownTable {
                name: other.to_string(),
                valid: format!("{}, report", MODEL_TABLES.join(", ")),
            })
        }
    }
    w.flush().map_err(|source| Error::InvalidArgument(format!("csv flush failed: {source}")))?;
    Ok(())
}

/// Writes a metrics report as CSV: one row per characteristic, then one
/// per measure.
pub fn export_report_csv(
    report: &MetricsReport,
    out: &mut dyn std::io::Write,
) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["group", "name", "value"]).map_err(csv_error)?;
    for (name, value) in report.characteristics_in_order() {
        w.write_record(&["characteristic".to_string(), name.to_string(), value.to_string()])
            .map_err(csv_error)?;
    }
    for (name, value) in report.measures_in_order() {
        w.write_record(&[
            "measure".to_string(),
            name.to_string(),
            value.aggregate_sum.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush().map_err(|source| Error::InvalidArgument(format!("csv flush failed: {source}")))?;
    Ok(())
}

/// One measurement run, as appended to the run log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRun {
    pub run_id: u32,
    /// UTC ISO-8601, seconds precision.
    pub timestamp: String,
    pub model_path: String,
    pub plan_name: String,
    pub report: MetricsReport,
}

pub fn utc_timestamp() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// Appends a run to the JSON-lines log, assigning `1 + max existing id`.
pub fn record_run(
    store_path: &Path,
    timestamp: String,
    model_path: String,
    plan_name: String,
    report: MetricsReport,
) -> Result<u32, Error> {
    let existing = if store_path.exists() {
        list_runs(store_path)?
    } else {
        Vec::new()
    };
    let run_id = existing.iter().map(|r| r.run_id).max().unwrap_or(0) + 1;
    let run = MetricsRun {
        run_id,
        timestamp,
        model_path,
        plan_name,
        report,
    };
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(store_path)
        .map_err(|source| Error::Write {
            path: store_path.to_path_buf(),
            source,
        })?;
    let line = serde_json::to_string(&run).expect("run serialization cannot fail");
    writeln!(file, "{line}").map_err(|source| Error::Write {
        path: store_path.to_path_buf(),
        source,
    })?;
    Ok(run_id)
}

/// Reads the run log; a corrupt line fails with its line number.
pub fn list_runs(store_path: &Path) -> Result<Vec<MetricsRun>, Error> {
    let file = std::fs::File::open(store_path).map_err(|source| Error::Io {
        path: store_path.to_path_buf(),
        source,
    })?;
    let mut runs = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: store_path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let run: MetricsRun = serde_json::from_str(&line).map_err(|e| Error::RunLog {
            line: i + 1,
            message: e.to_string(),
        })?;
        runs.push(run);
    }
    runs.sort_by_key(|r| r.run_id);
    Ok(runs)
}
