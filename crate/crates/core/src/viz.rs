//! Deterministic 2D renderings of a code model: a squarified treemap and
//! a bar chart as SVG, namespace and inheritance/include graphs as DOT.
//! Equal models render to byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{ArtifactId, ArtifactKind, CodeModel, NamespaceId};
use crate::Error;

/// Fill colors keyed by artifact kind, plus the bar-chart color.
pub struct ColorScheme;

impl ColorScheme {
    pub const SOURCE: &'static str = "#FFC0CB"; // pink
    pub const HEADER: &'static str = "#4682B4"; // steel blue
    pub const DOC: &'static str = "#2E8B57"; // sea green
    pub const OTHER: &'static str = "#A9A9A9"; // gray
    pub const BAR: &'static str = "#CC0000"; // red

    pub fn fill(kind: ArtifactKind) -> &'static str {
        match kind {
            ArtifactKind::Source => Self::SOURCE,
            ArtifactKind::Header => Self::HEADER,
            ArtifactKind::Doc => Self::DOC,
            ArtifactKind::Other => Self::OTHER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn area(&self) -> f64 {
        self.w * self.h
    }
}

/// One leaf cell of the treemap.
#[derive(Debug, Clone)]
pub struct TreemapCell {
    pub artifact: ArtifactId,
    pub rect: Rect,
    pub fill: &'static str,
}

/// One stroked namespace frame.
#[derive(Debug, Clone)]
pub struct TreemapFrame {
    pub namespace: NamespaceId,
    pub rect: Rect,
}

/// The computed layout: cells tile the canvas exactly (up to floating
/// point), frames outline namespace regions.
#[derive(Debug, Clone)]
pub struct TreemapLayout {
    pub width: f64,
    pub height: f64,
    pub cells: Vec<TreemapCell>,
    pub frames: Vec<TreemapFrame>,
}

/// Worst aspect ratio a row of areas would have when laid along a side of
/// the given length.
fn worst_ratio(areas: &[f64], sum: f64, side: f64) -> f64 {
    if side <= 0.0 || sum <= 0.0 {
        return f64::INFINITY;
    }
    let thickness = sum / side;
    let mut worst: f64 = 0.0;
    for a in areas {
        let len = a / thickness;
        if len <= 0.0 || thickness <= 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max((thickness / len).max(len / thickness));
    }
    worst
}

/// Squarified packing: areas (non-increasing, summing to the container
/// area) are grouped into rows along the shorter side while the worst
/// aspect ratio keeps improving. The final row and the final item of each
/// row absorb the remaining extent so the container is tiled exactly.
fn squarify(areas: &[f64], container: Rect) -> Vec<Rect> {
    let mut out = Vec::with_capacity(areas.len());
    let mut rest = container;
    let mut i = 0;
    while i < areas.len() {
        let side = rest.w.min(rest.h);
        let mut row_end = i + 1;
        let mut row_sum = areas[i];
        let mut best = worst_ratio(&areas[i..row_end], row_sum, side);
        while row_end < areas.len() {
            let next_sum = row_sum + areas[row_end];
            let candidate = worst_ratio(&areas[i..=row_end], next_sum, side);
            if candidate <= best {
                row_sum = next_sum;
                row_end += 1;
                best = candidate;
            } else {
                break;
            }
        }
        let is_last_row = row_end == areas.len();
        if rest.w >= rest.h {
            // Vertical strip on the left, items stacked top to bottom.
            let thickness = if is_last_row || side <= 0.0 {
                rest.w
            } else {
                (row_sum / side).min(rest.w)
            };
            let mut y = rest.y;
            for (k, a) in areas[i..row_end].iter().enumerate() {
                let h = if k + 1 == row_end - i {
                    rest.y + rest.h - y
                } else {
                    a / row_sum * rest.h
                };
                out.push(Rect {
                    x: rest.x,
                    y,
                    w: thickness,
                    h,
                });
                y += h;
            }
            rest.x += thickness;
            rest.w = (rest.w - thickness).max(0.0);
        } else {
            // Horizontal strip on top, items laid left to right.
            let thickness = if is_last_row || side <= 0.0 {
                rest.h
            } else {
                (row_sum / side).min(rest.h)
            };
            let mut x = rest.x;
            for (k, a) in areas[i..row_end].iter().enumerate() {
                let w = if k + 1 == row_end - i {
                    rest.x + rest.w - x
                } else {
                    a / row_sum * rest.w
                };
                out.push(Rect {
                    x,
                    y: rest.y,
                    w,
                    h: thickness,
                });
                x += w;
            }
            rest.y += thickness;
            rest.h = (rest.h - thickness).max(0.0);
        }
        i = row_end;
    }
    out
}

enum TreemapItem {
    Namespace(NamespaceId),
    Artifact(ArtifactId),
}

struct TreemapBuilder<'a> {
    model: &'a CodeModel,
    children: BTreeMap<NamespaceId, Vec<NamespaceId>>,
    artifacts: BTreeMap<NamespaceId, Vec<ArtifactId>>,
    weights: BTreeMap<NamespaceId, f64>,
}

impl<'a> TreemapBuilder<'a> {
    fn new(model: &'a CodeModel) -> Self {
        let mut children: BTreeMap<NamespaceId, Vec<NamespaceId>> = BTreeMap::new();
        for n in &model.namespaces {
            if let Some(parent) = n.parent {
                children.entry(parent).or_default().push(n.id);
            }
        }
        let mut artifacts: BTreeMap<NamespaceId, Vec<ArtifactId>> = BTreeMap::new();
        for a in &model.artifacts {
            artifacts.entry(a.namespace_id).or_default().push(a.id);
        }
        let mut builder = TreemapBuilder {
            model,
            children,
            artifacts,
            weights: BTreeMap::new(),
        };
        if !model.namespaces.is_empty() {
            builder.weight_of(0);
        }
        builder
    }

    /// Zero-byte files get a one-byte floor so every artifact is visible.
    fn artifact_weight(&self, id: ArtifactId) -> f64 {
        (self.model.artifacts[id as usize].size_bytes.max(1)) as f64
    }

    fn weight_of(&mut self, ns: NamespaceId) -> f64 {
        if let Some(w) = self.weights.get(&ns) {
            return *w;
        }
        let mut total = 0.0;
        for id in self.artifacts.get(&ns).cloned().unwrap_or_default() {
            total += self.artifact_weight(id);
        }
        for child in self.children.get(&ns).cloned().unwrap_or_default() {
            total += self.weight_of(child);
        }
        self.weights.insert(ns, total);
        total
    }

    fn layout(
        &self,
        ns: NamespaceId,
        rect: Rect,
        cells: &mut Vec<TreemapCell>,
        frames: &mut Vec<TreemapFrame>,
    ) {
        frames.push(TreemapFrame {
            namespace: ns,
            rect,
        });
        let mut items: Vec<(f64, &str, TreemapItem)> = Vec::new();
        for id in self.children.get(&ns).into_iter().flatten() {
            items.push((
                self.weights[id],
                self.model.namespaces[*id as usize].path.as_str(),
                TreemapItem::Namespace(*id),
            ));
        }
        for id in self.artifacts.get(&ns).into_iter().flatten() {
            items.push((
                self.artifact_weight(*id),
                self.model.artifacts[*id as usize].path.as_str(),
                TreemapItem::Artifact(*id),
            ));
        }
        if items.is_empty() {
            return;
        }
        // Descending weight, ties by path.
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.cmp(b.1)));
        let total: f64 = items.iter().map(|i| i.0).sum();
        let areas: Vec<f64> = items
            .iter()
            .map(|i| i.0 / total * rect.area())
            .collect();
        let rects = squarify(&areas, rect);
        for ((_, _, item), assigned) in items.iter().zip(rects) {
            match item {
                TreemapItem::Namespace(id) => self.layout(*id, assigned, cells, frames),
                TreemapItem::Artifact(id) => cells.push(TreemapCell {
                    artifact: *id,
                    rect: assigned,
                    fill: ColorScheme::fill(self.model.artifacts[*id as usize].kind),
                }),
            }
        }
    }
}

/// Computes the nested squarified layout: namespaces frame their
/// subtrees, leaf cell area is proportional to artifact size.
pub fn treemap_layout(model: &CodeModel, width: f64, height: f64) -> TreemapLayout {
    let mut cells = Vec::new();
    let mut frames = Vec::new();
    let root = Rect {
        x: 0.0,
        y: 0.0,
        w: width,
        h: height,
    };
    if model.namespaces.is_empty() {
        frames.push(TreemapFrame {
            namespace: 0,
            rect: root,
        });
    } else {
        let builder = TreemapBuilder::new(model);
        builder.layout(0, root, &mut cells, &mut frames);
    }
    TreemapLayout {
        width,
        height,
        cells,
        frames,
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn svg_open(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" \
         width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    )
}

/// Renders the file treemap as an SVG document: one filled `rect` per
/// artifact (with a `<title>` naming its path) and one stroked `rect` per
/// namespace frame.
pub fn treemap(model: &CodeModel, width: f64, height: f64) -> String {
    let layout = treemap_layout(model, width, height);
    let mut svg = svg_open(width, height);
    for cell in &layout.cells {
        let path = &model.artifacts[cell.artifact as usize].path;
        let _ = writeln!(
            svg,
            "  <rect class=\"cell\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"{}\"><title>{}</title></rect>",
            cell.rect.x,
            cell.rect.y,
            cell.rect.w,
            cell.rect.h,
            cell.fill,
            xml_escape(path)
        );
    }
    for frame in &layout.frames {
        let label = if model.namespaces.is_empty() {
            "default"
        } else {
            &model.namespaces[frame.namespace as usize].name
        };
        let _ = writeln!(
            svg,
            "  <rect class=\"frame\" x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"><title>{}</title></rect>",
            frame.rect.x,
            frame.rect.y,
            frame.rect.w,
            frame.rect.h,
            xml_escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Renders the artifact bar chart: one vertical red bar per file in path
/// order, height proportional to size (normalized to the largest file),
/// equal widths, axis line at the baseline.
pub fn bar_chart(model: &CodeModel, width: f64, height: f64) -> String {
    let mut svg = svg_open(width, height);
    let n = model.artifacts.len();
    if n > 0 {
        let bar_width = ((width / n as f64).floor()).max(1.0);
        let max_size = model
            .artifacts
            .iter()
            .map(|a| a.size_bytes)
            .max()
            .unwrap_or(0)
            .max(1) as f64;
        for (i, artifact) in model.artifacts.iter().enumerate() {
            let bar_height = artifact.size_bytes as f64 / max_size * height;
            let x = i as f64 * bar_width;
            let _ = writeln!(
                svg,
                "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\">\
                 <title>{}</title></rect>",
                x,
                height - bar_height,
                bar_width,
                bar_height,
                ColorScheme::BAR,
                xml_escape(&artifact.path)
            );
        }
    }
    let _ = writeln!(
        svg,
        "  <line x1=\"0\" y1=\"{height:.2}\" x2=\"{width:.2}\" y2=\"{height:.2}\" \
         stroke=\"#000000\" stroke-width=\"1\"/>"
    );
    svg.push_str("</svg>\n");
    svg
}

fn dot_quote(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the namespace tree as DOT: one node per namespace, one edge
/// per parent link, the root styled distinctly.
pub fn namespace_graph(model: &CodeModel) -> String {
    let mut dot = String::from("digraph namespaces {\n    rankdir=TB;\n    node [shape=box];\n");
    for n in &model.namespaces {
        let style = if n.parent.is_none() {
            " style=bold"
        } else {
            ""
        };
        let _ = writeln!(dot, "    n{} [label={}{}];", n.id, dot_quote(&n.name), style);
    }
    for n in &model.namespaces {
        if let Some(parent) = n.parent {
            let _ = writeln!(dot, "    n{} -> n{};", parent, n.id);
        }
    }
    dot.push_str("}\n");
    dot
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    ClassInheritance,
    IncludeRelationship,
}

impl std::str::FromStr for GraphMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "class_inheritance" | "inheritance" => Ok(GraphMode::ClassInheritance),
            "include_relationship" | "includes" => Ok(GraphMode::IncludeRelationship),
            other => Err(Error::InvalidArgument(format!(
                "unknown graph mode {other:?}; expected class_inheritance or include_relationship"
            ))),
        }
    }
}

/// Renders the class-inheritance or include-relationship graph as DOT,
/// with nodes clustered by the namespace of their declaring artifact.
/// External or unresolved nodes are dashed and sit outside the clusters.
pub fn inheritance_graph(model: &CodeModel, mode: GraphMode) -> String {
    match mode {
        GraphMode::ClassInheritance => class_graph(model),
        GraphMode::IncludeRelationship => include_graph(model),
    }
}

fn class_graph(model: &CodeModel) -> String {
    let mut dot = String::from("digraph class_inheritance {\n    rankdir=BT;\n");
    let mut by_namespace: BTreeMap<NamespaceId, Vec<&crate::model::ClassEntity>> = BTreeMap::new();
    for class in model.internal_classes() {
        let ns = model.artifacts[class.artifact.expect("internal class") as usize].namespace_id;
        by_namespace.entry(ns).or_default().push(class);
    }
    for (ns, classes) in &by_namespace {
        let label = &model.namespaces[*ns as usize].name;
        let _ = writeln!(dot, "    subgraph cluster_{ns} {{");
        let _ = writeln!(dot, "        label={};", dot_quote(label));
        for class in classes {
            let _ = writeln!(
                dot,
                "        c{} [label={}];",
                class.id,
                dot_quote(&class.qualified_name)
            );
        }
        dot.push_str("    }\n");
    }
    for class in model.classes.iter().filter(|c| c.is_external) {
        let _ = writeln!(
            dot,
            "    c{} [label={} style=dashed];",
            class.id,
            dot_quote(&class.qualified_name)
        );
    }
    for edge in &model.inheritance_edges {
        let _ = writeln!(dot, "    c{} -> c{};", edge.derived, edge.base);
    }
    dot.push_str("}\n");
    dot
}

fn include_graph(model: &CodeModel) -> String {
    let mut dot = String::from("digraph include_relationship {\n    rankdir=LR;\n");
    let mut participants: BTreeMap<ArtifactId, ()> = BTreeMap::new();
    let mut unresolved: BTreeMap<&str, usize> = BTreeMap::new();
    for edge in &model.include_edges {
        participants.insert(edge.from_artifact, ());
        match edge.resolved_artifact {
            Some(to) => {
                participants.insert(to, ());
            }
            None => {
                let next = unresolved.len();
                unresolved.entry(&edge.target_text).or_insert(next);
            }
        }
    }
    let mut by_namespace: BTreeMap<NamespaceId, Vec<ArtifactId>> = BTreeMap::new();
    for id in participants.keys() {
        by_namespace
            .entry(model.artifacts[*id as usize].namespace_id)
            .or_default()
            .push(*id);
    }
    for (ns, ids) in &by_namespace {
        let label = &model.namespaces[*ns as usize].name;
        let _ = writeln!(dot, "    subgraph cluster_{ns} {{");
        let _ = writeln!(dot, "        label={};", dot_quote(label));
        for id in ids {
            let _ = writeln!(
                dot,
                "        a{} [label={}];",
                id,
                dot_quote(&model.artifacts[*id as usize].path)
            );
        }
        dot.push_str("    }\n");
    }
    for (target, key) in &unresolved {
        let _ = writeln!(dot, "    u{key} [label={} style=dashed];", dot_quote(target));
    }
    for edge in &model.include_edges {
        match edge.resolved_artifact {
            Some(to) => {
                let _ = writeln!(dot, "    a{} -> a{};", edge.from_artifact, to);
            }
            None => {
                let _ = writeln!(
                    dot,
                    "    a{} -> u{};",
                    edge.from_artifact,
                    unresolved[edge.target_text.as_str()]
                );
            }
        }
    }
    dot.push_str("}\n");
    dot
}
