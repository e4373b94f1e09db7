//! The semantic code model: artifacts, the directory-derived namespace
//! tree, the class inheritance graph, the include graph and the macro
//! tables, assembled from per-artifact parse outcomes.
//!
//! Namespaces here are *directories*: the scanned root becomes the
//! synthetic `default` namespace and every artifact-bearing subdirectory
//! becomes a child node. C++ `namespace` declarations are kept in a side
//! table for inspection and play no part in the namespace metrics.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::parser::{Access, ClassKind, DecisionKind, Diagnostic, IncludeStyle, ParseEventKind, ParseOutcome};
use crate::Error;

pub type ArtifactId = u32;
pub type NamespaceId = u32;
pub type ClassId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Source,
    Header,
    Doc,
    Other,
}

impl ArtifactKind {
    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::Source => "source",
            ArtifactKind::Header => "header",
            ArtifactKind::Doc => "doc",
            ArtifactKind::Other => "other",
        }
    }

    /// Only source and header artifacts are lexed and parsed; doc and
    /// other artifacts contribute size and placement only.
    pub fn is_parsed(self) -> bool {
        matches!(self, ArtifactKind::Source | ArtifactKind::Header)
    }
}

/// One file of the analyzed product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub id: ArtifactId,
    /// Root-relative path with `/` separators.
    pub path: String,
    pub kind: ArtifactKind,
    pub size_bytes: u64,
    pub namespace_id: NamespaceId,
}

/// One directory node of the namespace tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamespaceNode {
    pub id: NamespaceId,
    pub name: String,
    pub parent: Option<NamespaceId>,
    /// Root-relative directory path; empty for the root.
    pub path: String,
}

/// One class, struct or union. External entities are base names that were
/// never defined inside the corpus; they carry no artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntity {
    pub id: ClassId,
    pub qualified_name: String,
    pub artifact: Option<ArtifactId>,
    pub kind: ClassKind,
    pub is_external: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InheritanceEdge {
    pub derived: ClassId,
    pub base: ClassId,
    pub access: Access,
    pub is_virtual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncludeEdge {
    pub from_artifact: ArtifactId,
    pub target_text: String,
    pub resolved_artifact: Option<ArtifactId>,
    pub style: IncludeStyle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacroDef {
    pub name: String,
    pub artifact: ArtifactId,
    pub is_function_like: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredNamespaceRecord {
    pub artifact: ArtifactId,
    pub name: String,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub artifact: ArtifactId,
    pub kind: DecisionKind,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacroExpansionRecord {
    pub artifact: ArtifactId,
    pub name: String,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PragmaCount {
    pub artifact: ArtifactId,
    pub count: u64,
}

/// The assembled semantic model. Immutable once built; safe to share
/// read-only across threads.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CodeModel {
    pub artifacts: Vec<Artifact>,
    pub namespaces: Vec<NamespaceNode>,
    pub classes: Vec<ClassEntity>,
    pub inheritance_edges: Vec<InheritanceEdge>,
    pub include_edges: Vec<IncludeEdge>,
    pub macro_defs: Vec<MacroDef>,
    pub declared_namespaces: Vec<DeclaredNamespaceRecord>,
    pub decision_events: Vec<DecisionRecord>,
    pub macro_expansions: Vec<MacroExpansionRecord>,
    pub pragmas: Vec<PragmaCount>,
}

impl CodeModel {
    pub fn class(&self, id: ClassId) -> &ClassEntity {
        &self.classes[id as usize]
    }

    pub fn internal_classes(&self) -> impl Iterator<Item = &ClassEntity> {
        self.classes.iter().filter(|c| !c.is_external)
    }

    /// Edges whose base endpoint is an internal class. The derived
    /// endpoint is always internal by construction.
    pub fn internal_edges(&self) -> impl Iterator<Item = &InheritanceEdge> {
        self.inheritance_edges
            .iter()
            .filter(|e| !self.class(e.base).is_external)
    }

    /// Full referential-integrity scan; every id referenced by any table
    /// must exist, the namespace tree must be a tree rooted at `default`,
    /// and internal inheritance must be acyclic.
    pub fn validate(&self) -> Result<(), Error> {
        let integrity = |ok: bool, what: String| {
            if ok {
                Ok(())
            } else {
                Err(Error::Integrity(what))
            }
        };
        for (i, table_id) in self.artifacts.iter().map(|a| a.id).enumerate() {
            integrity(table_id == i as u32, format!("artifact id {table_id} out of order"))?;
        }
        for (i, n) in self.namespaces.iter().enumerate() {
            integrity(n.id == i as u32, format!("namespace id {} out of order", n.id))?;
        }
        for (i, c) in self.classes.iter().enumerate() {
            integrity(c.id == i as u32, format!("class id {} out of order", c.id))?;
        }
        let roots: Vec<&NamespaceNode> =
            self.namespaces.iter().filter(|n| n.parent.is_none()).collect();
        integrity(
            self.namespaces.is_empty() || (roots.len() == 1 && roots[0].name == "default"),
            "namespace tree must have exactly one root named \"default\"".to_string(),
        )?;
        for n in &self.namespaces {
            if let Some(p) = n.parent {
                integrity(
                    (p as usize) < self.namespaces.len() && p < n.id,
                    format!("namespace {} has dangling or forward parent {p}", n.id),
                )?;
            }
        }
        for a in &self.artifacts {
            integrity(
                (a.namespace_id as usize) < self.namespaces.len(),
                format!("artifact {} references missing namespace {}", a.path, a.namespace_id),
            )?;
        }
        for c in &self.classes {
            if let Some(a) = c.artifact {
                integrity(
                    (a as usize) < self.artifacts.len(),
                    format!("class {} references missing artifact {a}", c.qualified_name),
                )?;
            }
            integrity(
                c.is_external == c.artifact.is_none(),
                format!("class {} external flag disagrees with artifact link", c.qualified_name),
            )?;
        }
        for e in &self.inheritance_edges {
            integrity(
                (e.derived as usize) < self.classes.len() && (e.base as usize) < self.classes.len(),
                format!("inheritance edge {} -> {} references missing class", e.derived, e.base),
            )?;
            integrity(
                e.derived != e.base,
                format!("self inheritance edge on class {}", e.derived),
            )?;
        }
        for e in &self.include_edges {
            integrity(
                (e.from_artifact as usize) < self.artifacts.len(),
                format!("include edge from missing artifact {}", e.from_artifact),
            )?;
            if let Some(to) = e.resolved_artifact {
                integrity(
                    (to as usize) < self.artifacts.len(),
                    format!("include edge resolves to missing artifact {to}"),
                )?;
            }
        }
        for m in &self.macro_defs {
            integrity(
                (m.artifact as usize) < self.artifacts.len(),
                format!("macro {} defined in missing artifact {}", m.name, m.artifact),
            )?;
        }
        for records in [
            self.decision_events.iter().map(|r| r.artifact).collect::<Vec<_>>(),
            self.macro_expansions.iter().map(|r| r.artifact).collect(),
            self.declared_namespaces.iter().map(|r| r.artifact).collect(),
            self.pragmas.iter().map(|r| r.artifact).collect(),
        ] {
            for a in records {
                integrity(
                    (a as usize) < self.artifacts.len(),
                    format!("event record references missing artifact {a}"),
                )?;
            }
        }
        // Internal inheritance must be a DAG; walk it topologically.
        let n = self.classes.len();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in self.internal_edges() {
            out[e.derived as usize].push(e.base as usize);
            indegree[e.base as usize] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|i| indegree[*i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push(w);
                }
            }
        }
        integrity(seen == n, "internal inheritance graph contains a cycle".to_string())?;
        Ok(())
    }
}

/// A file accepted by the tree scan, before model assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtifactDescriptor {
    pub rel_path: String,
    pub kind: ArtifactKind,
    pub size_bytes: u64,
}

/// Scan configuration: the extension map plus include/exclude filters.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Lowercased extension -> kind. Unmapped extensions become `Other`.
    pub extension_map: BTreeMap<String, ArtifactKind>,
    /// When set, only files with these (lowercased) extensions are accepted.
    pub include_extensions: Option<BTreeSet<String>>,
    /// Glob patterns matched against the root-relative path.
    pub exclude_globs: Vec<String>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            extension_map: default_extension_map(),
            include_extensions: None,
            exclude_globs: Vec::new(),
        }
    }
}

pub fn default_extension_map() -> BTreeMap<String, ArtifactKind> {
    let mut map = BTreeMap::new();
    for ext in ["cpp", "cc", "cxx"] {
        map.insert(ext.to_string(), ArtifactKind::Source);
    }
    for ext in ["h", "hpp", "hxx"] {
        map.insert(ext.to_string(), ArtifactKind::Header);
    }
    for ext in ["doc", "md", "txt"] {
        map.insert(ext.to_string(), ArtifactKind::Doc);
    }
    map
}

fn kind_for_path(rel_path: &str, options: &ScanOptions) -> Option<ArtifactKind> {
    let ext = Path::new(rel_path)
        .extension()
        .map(|e| e.to_string_lossy().to_lowercase())
        .unwrap_or_default();
    if let Some(allowed) = &options.include_extensions {
        if !allowed.contains(&ext) {
            return None;
        }
    }
    Some(
        options
            .extension_map
            .get(&ext)
            .copied()
            .unwrap_or(ArtifactKind::Other),
    )
}

/// Deterministic recursive walk of the product tree, lexicographic by
/// path component. An unreadable root is fatal; unreadable files and
/// excluded paths are skipped (the former with a diagnostic).
pub fn scan_tree(
    root: &Path,
    options: &ScanOptions,
) -> Result<(Vec<ArtifactDescriptor>, Vec<Diagnostic>), Error> {
    let mut patterns = Vec::new();
    for g in &options.exclude_globs {
        let pattern = glob::Pattern::new(g)
            .map_err(|e| Error::InvalidArgument(format!("bad exclude glob {g:?}: {e}")))?;
        patterns.push(pattern);
    }
    let mut descriptors = Vec::new();
    let mut diagnostics = Vec::new();
    walk(root, "", options, &patterns, &mut descriptors, &mut diagnostics, true)?;
    descriptors.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
    Ok((descriptors, diagnostics))
}

#[allow(clippy::too_many_arguments)]
fn walk(
    dir: &Path,
    rel: &str,
    options: &ScanOptions,
    patterns: &[glob::Pattern],
    out: &mut Vec<ArtifactDescriptor>,
    diagnostics: &mut Vec<Diagnostic>,
    is_root: bool,
) -> Result<(), Error> {
    let entries = match std::fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(source) if is_root => {
            return Err(Error::Io {
                path: dir.to_path_buf(),
                source,
            })
        }
        Err(_) => {
            diagnostics.push(Diagnostic {
                line: 0,
                message: format!("unreadable directory skipped: {}", dir.display()),
            });
            return Ok(());
        }
    };
    let mut names: Vec<(String, std::fs::FileType)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let name = entry.file_name().to_string_lossy().into_owned();
        match entry.file_type() {
            Ok(ft) => names.push((name, ft)),
            Err(_) => diagnostics.push(Diagnostic {
                line: 0,
                message: format!("unreadable entry skipped: {}/{name}", dir.display()),
            }),
        }
    }
    names.sort_by(|a, b| a.0.cmp(&b.0));

    for (name, file_type) in names {
        let rel_path = if rel.is_empty() {
            name.clone()
        } else {
            format!("{rel}/{name}")
        };
        if patterns.iter().any(|p| p.matches(&rel_path)) {
            continue;
        }
        let full = dir.join(&name);
        if file_type.is_dir() {
            walk(&full, &rel_path, options, patterns, out, diagnostics, false)?;
        } else if file_type.is_file() {
            let Some(kind) = kind_for_path(&rel_path, options) else {
                continue;
            };
            match std::fs::metadata(&full) {
                Ok(meta) => out.push(ArtifactDescriptor {
                    rel_path,
                    kind,
                    size_bytes: meta.len(),
                }),
                Err(_) => diagnostics.push(Diagnostic {
                    line: 0,
                    message: format!("unreadable file skipped: {}", full.display()),
                }),
            }
        } else {
            // Symlinks are not followed; cycle safety beats coverage here.
            diagnostics.push(Diagnostic {
                line: 0,
                message: format!("symlink skipped: {}", full.display()),
            });
        }
    }
    Ok(())
}

/// Derives the namespace tree from accepted artifact paths. The root is
/// the synthetic `default` node; every directory that holds at least one
/// artifact, directly or transitively, becomes a node named after it.
pub fn derive_namespaces(descriptors: &[ArtifactDescriptor]) -> Vec<NamespaceNode> {
    let mut dir_paths: BTreeSet<String> = BTreeSet::new();
    dir_paths.insert(String::new());
    for d in descriptors {
        let mut path = d.rel_path.as_str();
        while let Some(slash) = path.rfind('/') {
            path = &path[..slash];
            dir_paths.insert(path.to_string());
        }
    }
    let ids: BTreeMap<&str, NamespaceId> = dir_paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i as NamespaceId))
        .collect();
    dir_paths
        .iter()
        .map(|path| {
            let (parent, name) = if path.is_empty() {
                (None, "default".to_string())
            } else {
                let (parent_path, name) = match path.rfind('/') {
                    Some(slash) => (&path[..slash], &path[slash + 1..]),
                    None => ("", path.as_str()),
                };
                (Some(ids[parent_path]), name.to_string())
            };
            NamespaceNode {
                id: ids[path.as_str()],
                name,
                parent,
                path: path.clone(),
            }
        })
        .collect()
}

fn namespace_of(rel_path: &str) -> &str {
    match rel_path.rfind('/') {
        Some(slash) => &rel_path[..slash],
        None => "",
    }
}

fn last_segment(qualified: &str) -> &str {
    qualified.rsplit("::").next().unwrap_or(qualified)
}

/// Assembles the code model from sorted artifact descriptors, per-artifact
/// parse outcomes (keyed by relative path) and the namespace table.
///
/// Irregularities never fail the build: duplicate class definitions keep
/// the first, self-inheritance is dropped, and inheritance cycles are
/// broken by removing the highest `(derived, base)` edge participating in
/// a cycle — each with a diagnostic.
pub fn build_model(
    descriptors: &[ArtifactDescriptor],
    outcomes: &BTreeMap<String, ParseOutcome>,
    namespaces: Vec<NamespaceNode>,
) -> (CodeModel, Vec<Diagnostic>) {
    let mut diagnostics = Vec::new();

    let ns_ids: BTreeMap<&str, NamespaceId> =
        namespaces.iter().map(|n| (n.path.as_str(), n.id)).collect();

    let mut sorted = descriptors.to_vec();
    sorted.sort_by(|a, b| a.rel_path.cmp(&b.rel_path));
    let artifacts: Vec<Artifact> = sorted
        .iter()
        .enumerate()
        .map(|(i, d)| Artifact {
            id: i as ArtifactId,
            path: d.rel_path.clone(),
            kind: d.kind,
            size_bytes: d.size_bytes,
            namespace_id: ns_ids.get(namespace_of(&d.rel_path)).copied().unwrap_or(0),
        })
        .collect();
    let artifact_ids: BTreeMap<&str, ArtifactId> =
        artifacts.iter().map(|a| (a.path.as_str(), a.id)).collect();
    let mut basename_matches: BTreeMap<&str, Vec<ArtifactId>> = BTreeMap::new();
    for a in &artifacts {
        let base = a.path.rsplit('/').next().unwrap_or(&a.path);
        basename_matches.entry(base).or_default().push(a.id);
    }

    struct PendingClass {
        artifact: ArtifactId,
        kind: ClassKind,
        bases: Vec<crate::parser::BaseSpecifier>,
    }

    // First definition wins; artifacts are visited in path order so the
    // outcome is independent of input permutation.
    let mut definitions: BTreeMap<String, PendingClass> = BTreeMap::new();
    let mut include_raw = Vec::new();
    let mut macro_defs = Vec::new();
    let mut declared = Vec::new();
    let mut decisions = Vec::new();
    let mut expansions = Vec::new();
    let mut pragma_counts: BTreeMap<ArtifactId, u64> = BTreeMap::new();

    for artifact in &artifacts {
        let Some(outcome) = outcomes.get(&artifact.path) else {
            continue;
        };
        for event in &outcome.events {
            match &event.kind {
                ParseEventKind::ClassDecl {
                    name,
                    kind,
                    bases,
                    is_definition: true,
                } => {
                    if definitions.contains_key(name) {
                        diagnostics.push(Diagnostic {
                            line: event.line,
                            message: format!(
                                "duplicate definition of {name} in {} ignored",
                                artifact.path
                            ),
                        });
                    } else {
                        definitions.insert(
                            name.clone(),
                            PendingClass {
                                artifact: artifact.id,
                                kind: *kind,
                                bases: bases.clone(),
                            },
                        );
                    }
                }
                ParseEventKind::ClassDecl {
                    is_definition: false,
                    ..
                } => {}
                ParseEventKind::IncludeDirective { target, style } => {
                    include_raw.push((artifact.id, target.clone(), *style));
                }
                ParseEventKind::DefineMacro {
                    name,
                    is_function_like,
                    ..
                } => macro_defs.push(MacroDef {
                    name: name.clone(),
                    artifact: artifact.id,
                    is_function_like: *is_function_like,
                }),
                ParseEventKind::PragmaDirective { .. } => {
                    *pragma_counts.entry(artifact.id).or_insert(0) += 1;
                }
                ParseEventKind::DeclaredNamespace { name } => {
                    declared.push(DeclaredNamespaceRecord {
                        artifact: artifact.id,
                        name: name.clone(),
                        line: event.line,
                    })
                }
                ParseEventKind::DecisionPoint { kind } => decisions.push(DecisionRecord {
                    artifact: artifact.id,
                    kind: *kind,
                    line: event.line,
                }),
                ParseEventKind::MacroExpansion { name } => {
                    expansions.push(MacroExpansionRecord {
                        artifact: artifact.id,
                        name: name.clone(),
                        line: event.line,
                    })
                }
            }
        }
    }

    // Resolve base names: exact qualified match first, then a unique match
    // on the unqualified trailing segment; anything else becomes an
    // external entity.
    let mut segment_index: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for name in definitions.keys() {
        segment_index
            .entry(last_segment(name))
            .or_default()
            .push(name.as_str());
    }
    let resolve = |base: &str| -> Option<String> {
        if definitions.contains_key(base) {
            return Some(base.to_string());
        }
        match segment_index.get(last_segment(base)) {
            Some(candidates) if candidates.len() == 1 => Some(candidates[0].to_string()),
            _ => None,
        }
    };

    let mut externals: BTreeSet<String> = BTreeSet::new();
    for pending in definitions.values() {
        for base in &pending.bases {
            if resolve(&base.base_name).is_none() {
                externals.insert(base.base_name.clone());
            }
        }
    }

    let mut all_names: Vec<(String, bool)> = definitions
        .keys()
        .map(|n| (n.clone(), false))
        .chain(externals.iter().map(|n| (n.clone(), true)))
        .collect();
    all_names.sort();
    let class_ids: BTreeMap<&str, ClassId> = all_names
        .iter()
        .enumerate()
        .map(|(i, (name, _))| (name.as_str(), i as ClassId))
        .collect();
    let classes: Vec<ClassEntity> = all_names
        .iter()
        .enumerate()
        .map(|(i, (name, is_external))| {
            let pending = (!is_external).then(|| &definitions[name]);
            ClassEntity {
                id: i as ClassId,
                qualified_name: name.clone(),
                artifact: pending.map(|p| p.artifact),
                kind: pending.map(|p| p.kind).unwrap_or(ClassKind::Class),
                is_external: *is_external,
            }
        })
        .collect();

    let mut edges: Vec<InheritanceEdge> = Vec::new();
    for (name, pending) in &definitions {
        let derived = class_ids[name.as_str()];
        for base in &pending.bases {
            let base_name = resolve(&base.base_name).unwrap_or_else(|| base.base_name.clone());
            let base_id = class_ids[base_name.as_str()];
            if base_id == derived {
                diagnostics.push(Diagnostic {
                    line: 0,
                    message: format!("self inheritance on {name} dropped"),
                });
                continue;
            }
            edges.push(InheritanceEdge {
                derived,
                base: base_id,
                access: base.access,
                is_virtual: base.is_virtual,
            });
        }
    }
    edges.sort_by_key(|e| (e.derived, e.base, e.access, e.is_virtual));
    break_cycles(&mut edges, &classes, &mut diagnostics);

    let include_edges: Vec<IncludeEdge> = include_raw
        .into_iter()
        .map(|(from, target, style)| {
            let normalized = target.trim_start_matches("./").replace('\\', "/");
            let resolved = artifact_ids.get(normalized.as_str()).copied().or_else(|| {
                let base = normalized.rsplit('/').next().unwrap_or(&normalized);
                match basename_matches.get(base) {
                    Some(ids) if ids.len() == 1 => Some(ids[0]),
                    _ => None,
                }
            });
            IncludeEdge {
                from_artifact: from,
                target_text: target,
                resolved_artifact: resolved,
                style,
            }
        })
        .collect();

    let model = CodeModel {
        artifacts,
        namespaces,
        classes,
        inheritance_edges: edges,
        include_edges,
        macro_defs,
        declared_namespaces: declared,
        decision_events: decisions,
        macro_expansions: expansions,
        pragmas: pragma_counts
            .into_iter()
            .map(|(artifact, count)| PragmaCount { artifact, count })
            .collect(),
    };
    debug_assert!(model.validate().is_ok(), "built model failed validation");
    (model, diagnostics)
}

/// Removes edges until the internal-internal inheritance graph is acyclic.
/// Each round drops the highest `(derived, base)` edge that participates
/// in a cycle, which makes the result independent of traversal order.
fn break_cycles(
    edges: &mut Vec<InheritanceEdge>,
    classes: &[ClassEntity],
    diagnostics: &mut Vec<Diagnostic>,
) {
    loop {
        let internal: Vec<(usize, &InheritanceEdge)> = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !classes[e.base as usize].is_external)
            .collect();
        let mut adjacency: BTreeMap<ClassId, Vec<ClassId>> = BTreeMap::new();
        for (_, e) in &internal {
            adjacency.entry(e.derived).or_default().push(e.base);
        }
        let reaches = |from: ClassId, to: ClassId| -> bool {
            let mut stack = vec![from];
            let mut seen = BTreeSet::new();
            while let Some(v) = stack.pop() {
                if v == to {
                    return true;
                }
                if seen.insert(v) {
                    if let Some(next) = adjacency.get(&v) {
                        stack.extend(next.iter().copied());
                    }
                }
            }
            false
        };
        // An edge d->b lies on a cycle iff b reaches d.
        let worst = internal
            .iter()
            .filter(|(_, e)| reaches(e.base, e.derived))
            .max_by_key(|(_, e)| (e.derived, e.base))
            .map(|(i, _)| *i);
        match worst {
            Some(index) => {
                let e = edges.remove(index);
                diagnostics.push(Diagnostic {
                    line: 0,
                    message: format!(
                        "inheritance cycle broken by dropping {} -> {}",
                        classes[e.derived as usize].qualified_name,
                        classes[e.base as usize].qualified_name
                    ),
                });
            }
            None => return,
        }
    }
}
