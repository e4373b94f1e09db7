//! Measurement: the nine source-code characteristics, the three
//! traditional measures (CLD, DIT, NOC), the three product-line measures
//! (NIT, NOA, CIR), GQM plan execution, cross-version comparison and the
//! Pearson correlation between the two measure families.
//!
//! Headline values for CLD/DIT/NOC are sums over classes; NIT, NOA and CIR
//! are aggregate-only. All operations are pure functions of the model.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{ClassId, CodeModel};
use crate::Error;

/// Characteristic names in report order.
pub const CHARACTERISTIC_NAMES: &[&str] = &[
    "artifacts",
    "namespaces",
    "components",
    "decisions",
    "define_macros",
    "pragma_directives",
    "macro_expressions",
    "classes",
    "includes",
];

/// Display labels matching the characteristic names, for text tables and
/// comparison rows.
pub const CHARACTERISTIC_LABELS: &[&str] = &[
    "Artifacts",
    "Namespaces",
    "Components",
    "Decisions",
    "Define Macros",
    "Pragma Directives",
    "Macro Expressions",
    "Classes",
    "Include",
];

/// Measure names in report order: traditional first, then product-line.
pub const MEASURE_NAMES: &[&str] = &["CLD", "DIT", "NOC", "NIT", "NOA", "CIR"];
pub const TRADITIONAL_MEASURES: &[&str] = &["CLD", "DIT", "NOC"];
pub const PRODUCT_LINE_MEASURES: &[&str] = &["NIT", "NOA", "CIR"];

pub fn characteristic_label(name: &str) -> &str {
    CHARACTERISTIC_NAMES
        .iter()
        .position(|n| *n == name)
        .map(|i| CHARACTERISTIC_LABELS[i])
        .unwrap_or(name)
}

/// The nine counted characteristics of one model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicCounts {
    pub artifacts: u64,
    pub namespaces: u64,
    pub components: u64,
    pub decisions: u64,
    pub define_macros: u64,
    pub pragma_directives: u64,
    pub macro_expressions: u64,
    pub classes: u64,
    pub includes: u64,
}

impl CharacteristicCounts {
    pub fn get(&self, name: &str) -> Option<u64> {
        Some(match name {
            "artifacts" => self.artifacts,
            "namespaces" => self.namespaces,
            "components" => self.components,
            "decisions" => self.decisions,
            "define_macros" => self.define_macros,
            "pragma_directives" => self.pragma_directives,
            "macro_expressions" => self.macro_expressions,
            "classes" => self.classes,
            "includes" => self.includes,
            _ => return None,
        })
    }
}

/// Counts the nine characteristics. "Components" is pinned as class,
/// struct and union definitions plus function-like macro definitions, so
/// classes can never exceed components.
pub fn count_characteristics(model: &CodeModel) -> CharacteristicCounts {
    let classes = model.internal_classes().count() as u64;
    let function_like = model.macro_defs.iter().filter(|m| m.is_function_like).count() as u64;
    CharacteristicCounts {
        artifacts: model.artifacts.len() as u64,
        namespaces: model.namespaces.len() as u64,
        components: classes + function_like,
        decisions: model.decision_events.len() as u64,
        define_macros: model.macro_defs.len() as u64,
        pragma_directives: model.pragmas.iter().map(|p| p.count).sum(),
        macro_expressions: model.macro_expansions.len() as u64,
        classes,
        includes: model.include_edges.len() as u64,
    }
}

/// One computed measure: per-entity values (internal classes only; empty
/// for the aggregate-only measures) plus aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub per_entity: BTreeMap<ClassId, u64>,
    pub aggregate_sum: u64,
    pub aggregate_max: u64,
    pub aggregate_mean: f64,
}

impl MetricValue {
    fn from_per_entity(name: &str, per_entity: BTreeMap<ClassId, u64>) -> Self {
        let aggregate_sum: u64 = per_entity.values().sum();
        let aggregate_max = per_entity.values().copied().max().unwrap_or(0);
        let aggregate_mean = if per_entity.is_empty() {
            0.0
        } else {
            aggregate_sum as f64 / per_entity.len() as f64
        };
        MetricValue {
            name: name.to_string(),
            per_entity,
            aggregate_sum,
            aggregate_max,
            aggregate_mean,
        }
    }

    /// Aggregate-only measures carry their single headline value in every
    /// aggregate field and have no per-entity table.
    fn aggregate_only(name: &str, value: u64) -> Self {
        MetricValue {
            name: name.to_string(),
            per_entity: BTreeMap::new(),
            aggregate_sum: value,
            aggregate_max: value,
            aggregate_mean: value as f64,
        }
    }
}

/// Adjacency over internal-to-internal inheritance edges.
struct InternalGraph {
    /// derived -> bases (upward)
    bases: BTreeMap<ClassId, Vec<ClassId>>,
    /// base -> deriveds (downward)
    deriveds: BTreeMap<ClassId, Vec<ClassId>>,
    /// derived -> number of external bases
    external_bases: BTreeMap<ClassId, u64>,
}

impl InternalGraph {
    fn build(model: &CodeModel) -> Self {
        let mut graph = InternalGraph {
            bases: BTreeMap::new(),
            deriveds: BTreeMap::new(),
            external_bases: BTreeMap::new(),
        };
        for edge in &model.inheritance_edges {
            if model.class(edge.base).is_external {
                *graph.external_bases.entry(edge.derived).or_insert(0) += 1;
            } else {
                graph.bases.entry(edge.derived).or_default().push(edge.base);
                graph.deriveds.entry(edge.base).or_default().push(edge.derived);
            }
        }
        graph
    }
}

fn longest_path(
    start: ClassId,
    step: &BTreeMap<ClassId, Vec<ClassId>>,
    memo: &mut BTreeMap<ClassId, u64>,
) -> u64 {
    if let Some(v) = memo.get(&start) {
        return *v;
    }
    let best = step
        .get(&start)
        .map(|next| {
            next.iter()
                .map(|n| 1 + longest_path(*n, step, memo))
                .max()
                .unwrap_or(0)
        })
        .unwrap_or(0);
    memo.insert(start, best);
    best
}

/// Class Leaf Depth: per internal class, the longest chain of derived
/// classes below it; 0 for classes nothing derives from.
pub fn cld(model: &CodeModel) -> MetricValue {
    let graph = InternalGraph::build(model);
    let mut memo = BTreeMap::new();
    let per_entity: BTreeMap<ClassId, u64> = model
        .internal_classes()
        .map(|c| (c.id, longest_path(c.id, &graph.deriveds, &mut memo)))
        .collect();
    MetricValue::from_per_entity("CLD", per_entity)
}

/// Depth of Inheritance Tree: per internal class, the longest base-edge
/// path to a root. An external base contributes one level and stops.
pub fn dit(model: &CodeModel) -> MetricValue {
    let graph = InternalGraph::build(model);
    let mut memo: BTreeMap<ClassId, u64> = BTreeMap::new();
    fn depth(
        class: ClassId,
        graph: &InternalGraph,
        memo: &mut BTreeMap<ClassId, u64>,
    ) -> u64 {
        if let Some(v) = memo.get(&class) {
            return *v;
        }
        let via_internal = graph
            .bases
            .get(&class)
            .map(|bases| {
                bases
                    .iter()
                    .map(|b| 1 + depth(*b, graph, memo))
                    .max()
                    .unwrap_or(0)
            })
            .unwrap_or(0);
        let via_external = if graph.external_bases.contains_key(&class) {
            1
        } else {
            0
        };
        let best = via_internal.max(via_external);
        memo.insert(class, best);
        best
    }
    let per_entity: BTreeMap<ClassId, u64> = model
        .internal_classes()
        .map(|c| (c.id, depth(c.id, &graph, &mut memo)))
        .collect();
    MetricValue::from_per_entity("DIT", per_entity)
}

/// Number of Children: per internal class, its count of direct derived
/// classes. The headline sum equals the number of edges onto internal
/// bases, which is CIR.
pub fn noc(model: &CodeModel) -> MetricValue {
    let mut per_entity: BTreeMap<ClassId, u64> =
        model.internal_classes().map(|c| (c.id, 0)).collect();
    for edge in model.internal_edges() {
        *per_entity.get_mut(&edge.base).expect("internal base") += 1;
    }
    MetricValue::from_per_entity("NOC", per_entity)
}

/// Namespace Inheritance Tree: parent-child links in the namespace tree,
/// i.e. namespace count minus one.
pub fn nit(model: &CodeModel) -> MetricValue {
    let value = model.namespaces.iter().filter(|n| n.parent.is_some()).count() as u64;
    MetricValue::aggregate_only("NIT", value)
}

/// Number of Artifacts: file artifacts plus non-root namespace containers.
pub fn noa(model: &CodeModel) -> MetricValue {
    let non_root = model.namespaces.iter().filter(|n| n.parent.is_some()).count() as u64;
    MetricValue::aggregate_only("NOA", model.artifacts.len() as u64 + non_root)
}

/// Class Inheritance Relationship: total base-specifier relationships
/// among internal classes; multiple inheritance counts multiply.
pub fn cir(model: &CodeModel) -> MetricValue {
    MetricValue::aggregate_only("CIR", model.internal_edges().count() as u64)
}

pub fn compute_measure(model: &CodeModel, name: &str) -> Result<MetricValue, Error> {
    Ok(match name {
        "CLD" => cld(model),
        "DIT" => dit(model),
        "NOC" => noc(model),
        "NIT" => nit(model),
        "NOA" => noa(model),
        "CIR" => cir(model),
        other => return Err(Error::UnknownMetric(other.to_string())),
    })
}

/// A GQM plan: goals broken into questions, each question naming the
/// characteristics and measures that answer it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GqmPlan {
    pub schema: String,
    pub name: String,
    pub goals: Vec<Goal>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Goal {
    pub text: String,
    pub questions: Vec<Question>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Question {
    pub text: String,
    pub metrics: Vec<String>,
}

pub const PLAN_SCHEMA: &str = "zac-plan/1";
const DEFAULT_PLAN_TOML: &str = include_str!("../plans/default-plan.toml");

impl GqmPlan {
    /// The bundled plan: both goals, all nine characteristics, all six
    /// measures.
    pub fn default_plan() -> GqmPlan {
        GqmPlan::from_toml(DEFAULT_PLAN_TOML).expect("bundled plan must be valid")
    }

    pub fn from_toml(text: &str) -> Result<GqmPlan, Error> {
        let plan: GqmPlan =
            toml::from_str(text).map_err(|e| Error::Plan(e.to_string()))?;
        if plan.schema != PLAN_SCHEMA {
            return Err(Error::Plan(format!(
                "unsupported plan schema {:?}, expected {PLAN_SCHEMA:?}",
                plan.schema
            )));
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &std::path::Path) -> Result<GqmPlan, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        GqmPlan::from_toml(&text)
    }

    /// Every referenced metric name must be a known characteristic or
    /// measure.
    pub fn validate(&self) -> Result<(), Error> {
        for goal in &self.goals {
            for question in &goal.questions {
                for metric in &question.metrics {
                    let known = CHARACTERISTIC_NAMES.contains(&metric.as_str())
                        || MEASURE_NAMES.contains(&metric.as_str());
                    if !known {
                        return Err(Error::UnknownMetric(metric.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// (selected characteristics, selected measures), each in report order.
    pub fn selection(&self) -> (Vec<&'static str>, Vec<&'static str>) {
        let referenced: BTreeSet<&str> = self
            .goals
            .iter()
            .flat_map(|g| g.questions.iter())
            .flat_map(|q| q.metrics.iter().map(String::as_str))
            .collect();
        let characteristics = CHARACTERISTIC_NAMES
            .iter()
            .copied()
            .filter(|n| referenced.contains(n))
            .collect();
        let measures = MEASURE_NAMES
            .iter()
            .copied()
            .filter(|n| referenced.contains(n))
            .collect();
        (characteristics, measures)
    }
}

/// The result of one measurement run: the selected characteristic counts
/// and measures, grouped by family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema: String,
    pub plan_name: String,
    pub model_path: String,
    pub characteristics: BTreeMap<String, u64>,
    pub traditional: BTreeMap<String, MetricValue>,
    pub product_line: BTreeMap<String, MetricValue>,
}

impl MetricsReport {
    pub fn characteristics_in_order(&self) -> Vec<(&str, u64)> {
        CHARACTERISTIC_NAMES
            .iter()
            .filter_map(|n| self.characteristics.get(*n).map(|v| (*n, *v)))
            .collect()
    }

    pub fn measures_in_order(&self) -> Vec<(&str, &MetricValue)> {
        MEASURE_NAMES
            .iter()
            .filter_map(|n| {
                self.traditional
                    .get(*n)
                    .or_else(|| self.product_line.get(*n))
                    .map(|v| (*n, v))
            })
            .collect()
    }

    /// The set of selected names, used to check that two reports came from
    /// the same plan.
    pub fn selected_names(&self) -> BTreeSet<String> {
        self.characteristics
            .keys()
            .chain(self.traditional.keys())
            .chain(self.product_line.keys())
            .cloned()
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    pub fn load(path: &std::path::Path) -> Result<MetricsReport, Error> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

pub const REPORT_SCHEMA: &str = "zac-report/1";

/// Computes exactly the characteristics and measures the plan references.
pub fn run_plan(
    model: &CodeModel,
    plan: &GqmPlan,
    model_path: &str,
) -> Result<MetricsReport, Error> {
    plan.validate()?;
    let (characteristic_names, measure_names) = plan.selection();
    let counts = count_characteristics(model);
    let mut characteristics = BTreeMap::new();
    for name in characteristic_names {
        characteristics.insert(name.to_string(), counts.get(name).expect("known name"));
    }
    let mut traditional = BTreeMap::new();
    let mut product_line = BTreeMap::new();
    for name in measure_names {
        let value = compute_measure(model, name)?;
        if TRADITIONAL_MEASURES.contains(&name) {
            traditional.insert(name.to_string(), value);
        } else {
            product_line.insert(name.to_string(), value);
        }
    }
    Ok(MetricsReport {
        schema: REPORT_SCHEMA.to_string(),
        plan_name: plan.name.clone(),
        model_path: model_path.to_string(),
        characteristics,
        traditional,
        product_line,
    })
}

/// One row of a cross-version comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub old_value: u64,
    pub new_value: u64,
    /// old - new; positive numbers are improvements (decreases).
    pub absolute_improvement: i64,
    /// 100 * (old - new) / old, full precision; absent when old is 0.
    pub relative_improvement_pct: Option<f64>,
}

impl ComparisonRow {
    fn new(name: &str, old_value: u64, new_value: u64) -> Self {
        let absolute_improvement = old_value as i64 - new_value as i64;
        let relative_improvement_pct = (old_value != 0)
            .then(|| 100.0 * (old_value as f64 - new_value as f64) / old_value as f64);
        ComparisonRow {
            name: name.to_string(),
            old_value,
            new_value,
            absolute_improvement,
            relative_improvement_pct,
        }
    }

    /// The relative improvement rendered to two decimals, computed with
    /// exact integer arithmetic and round-half-up (away from zero), e.g.
    /// `"37.84"`. `None` when the old value is zero.
    pub fn relative_rendered(&self) -> Option<String> {
        if self.old_value == 0 {
            return None;
        }
        let numerator = (self.old_value as i128 - self.new_value as i128) * 10_000;
        let denominator = self.old_value as i128;
        let hundredths = if numerator >= 0 {
            (2 * numerator + denominator) / (2 * denominator)
        } else {
            (2 * numerator - denominator) / (2 * denominator)
        };
        let sign = if hundredths < 0 { "-" } else { "" };
        let magnitude = hundredths.abs();
        Some(format!("{sign}{}.{:02}", magnitude / 100, magnitude % 100))
    }
}

/// Compares two reports computed with the same plan: one row per shared
/// characteristic, then per measure, in report order.
pub fn compare(old: &MetricsReport, new: &MetricsReport) -> Result<Vec<ComparisonRow>, Error> {
    let old_names = old.selected_names();
    let new_names = new.selected_names();
    if old_names != new_names {
        let difference: Vec<String> =
            old_names.symmetric_difference(&new_names).cloned().collect();
        return Err(Error::PlanMismatch(difference.join(", ")));
    }
    let mut rows = Vec::new();
    for (name, old_value) in old.characteristics_in_order() {
        let new_value = new.characteristics[name];
        rows.push(ComparisonRow::new(
            characteristic_label(name),
            old_value,
            new_value,
        ));
    }
    for (name, old_value) in old.measures_in_order() {
        let new_value = new
            .traditional
            .get(name)
            .or_else(|| new.product_line.get(name))
            .expect("same selection");
        rows.push(ComparisonRow::new(
            name,
            old_value.aggregate_sum,
            new_value.aggregate_sum,
        ));
    }
    Ok(rows)
}

/// Pearson product-moment correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, Error> {
    if xs.len() != ys.len() {
        return Err(Error::Stats(format!(
            "pearson requires equal lengths, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Stats(
            "pearson requires at least 2 points".to_string(),
        ));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut covariance, mut var_x, mut var_y) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        covariance += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::Stats(
            "pearson is undefined for zero-variance input".to_string(),
        ));
    }
    // Exactly collinear data can land a rounding error above 1.
    Ok((covariance / (var_x.sqrt() * var_y.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationPair {
    pub label: String,
    pub traditional: f64,
    pub product_line: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: f64,
    pub pairs: Vec<CorrelationPair>,
}

/// Builds the six-point pairing across two versions — CLD with NIT, DIT
/// with NOA, NOC with CIR — and correlates the families.
pub fn correlate_reports(
    old: &MetricsReport,
    new: &MetricsReport,
) -> Result<CorrelationResult, Error> {
    let mut pairs = Vec::new();
    for (version, report) in [("old", old), ("new", new)] {
        for (trad, pl) in TRADITIONAL_MEASURES.iter().zip(PRODUCT_LINE_MEASURES) {
            let t = report.traditional.get(*trad);
            let p = report.product_line.get(*pl);
            match (t, p) {
                (Some(t), Some(p)) => pairs.push(CorrelationPair {
                    label: format!("{trad}:{pl} ({version})"),
                    traditional: t.aggregate_sum as f64,
                    product_line: p.aggregate_sum as f64,
                }),
                _ => {
                    return Err(Error::PlanMismatch(format!(
                        "correlation needs all six measures; {version} report lacks {trad} or {pl}"
                    )))
                }
            }
        }
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.traditional).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.product_line).collect();
    let r = pearson(&xs, &ys)?;
    Ok(CorrelationResult { r, pairs })
}
