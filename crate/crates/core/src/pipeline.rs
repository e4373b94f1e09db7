//! End-to-end analysis: scan the tree, lex and parse each source or
//! header artifact (two passes, so macro-expansion counts see the global
//! macro name set), then assemble the code model.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;

use crate::lexer::{tokenize, SourceText, TokenStream};
use crate::model::{
    build_model, derive_namespaces, scan_tree, ArtifactDescriptor, CodeModel, ScanOptions,
};
use crate::parser::{parse, Diagnostic, ParseOutcome};
use crate::Error;

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub scan: ScanOptions,
    /// Serial analysis when false; output is identical either way because
    /// results are merged in canonical path order.
    pub parallel: bool,
}

impl AnalyzeOptions {
    pub fn serial() -> Self {
        AnalyzeOptions {
            scan: ScanOptions::default(),
            parallel: false,
        }
    }

    pub fn parallel() -> Self {
        AnalyzeOptions {
            scan: ScanOptions::default(),
            parallel: true,
        }
    }
}

/// One artifact after lexing and second-pass parsing. The token stream is
/// kept so debug dumps can render it.
pub struct ParsedArtifact {
    pub descriptor: ArtifactDescriptor,
    pub stream: Option<TokenStream>,
    pub outcome: ParseOutcome,
}

pub struct AnalysisResult {
    pub model: CodeModel,
    /// (artifact path, diagnostic) pairs from parsing and model assembly.
    pub diagnostics: Vec<(String, Diagnostic)>,
    pub scan_diagnostics: Vec<Diagnostic>,
}

/// Lexes and parses the given artifacts. Pass 1 collects macro names from
/// every artifact; pass 2 re-parses with the merged set so expansion
/// counts are independent of artifact order.
pub fn analyze_artifacts(
    root: &Path,
    descriptors: &[ArtifactDescriptor],
    parallel: bool,
) -> Result<Vec<ParsedArtifact>, Error> {
    let streams: Vec<Option<TokenStream>> = {
        let lex_one = |d: &ArtifactDescriptor| -> Result<Option<TokenStream>, Error> {
            if !d.kind.is_parsed() {
                return Ok(None);
            }
            let source = SourceText::read(&root.join(&d.rel_path))?;
            Ok(Some(tokenize(source)))
        };
        if parallel {
            descriptors
                .par_iter()
                .map(lex_one)
                .collect::<Result<_, _>>()?
        } else {
            descriptors.iter().map(lex_one).collect::<Result<_, _>>()?
        }
    };

    let empty = BTreeSet::new();
    let first_pass = |stream: &Option<TokenStream>| {
        stream.as_ref().map(|s| parse(s, &empty)).unwrap_or_default()
    };
    let pass_one: Vec<ParseOutcome> = if parallel {
        streams.par_iter().map(first_pass).collect()
    } else {
        streams.iter().map(first_pass).collect()
    };

    let known_macros: BTreeSet<String> = pass_one
        .iter()
        .flat_map(|o| o.defined_macro_names().map(str::to_string))
        .collect();

    let second_pass = |stream: &Option<TokenStream>| {
        stream
            .as_ref()
            .map(|s| parse(s, &known_macros))
            .unwrap_or_default()
    };
    let pass_two: Vec<ParseOutcome> = if parallel {
        streams.par_iter().map(second_pass).collect()
    } else {
        streams.iter().map(second_pass).collect()
    };

    Ok(descriptors
        .iter()
        .zip(streams)
        .zip(pass_two)
        .map(|((descriptor, stream), outcome)| ParsedArtifact {
            descriptor: descriptor.clone(),
            stream,
            outcome,
        })
        .collect())
}

/// Full analysis of a product tree: scan, two-pass parse, model assembly.
pub fn analyze_tree(root: &Path, options: &AnalyzeOptions) -> Result<AnalysisResult, Error> {
    let (descriptors, scan_diagnostics) = scan_tree(root, &options.scan)?;
    let parsed = analyze_artifacts(root, &descriptors, options.parallel)?;
    let mut diagnostics = Vec::new();
    let mut outcomes: BTreeMap<String, ParseOutcome> = BTreeMap::new();
    for artifact in parsed {
        for d in &artifact.outcome.diagnostics {
            diagnostics.push((artifact.descriptor.rel_path.clone(), d.clone()));
        }
        outcomes.insert(artifact.descriptor.rel_path.clone(), artifact.outcome);
    }
    let namespaces = derive_namespaces(&descriptors);
    let (model, build_diags) = build_model(&descriptors, &outcomes, namespaces);
    for d in build_diags {
        diagnostics.push((String::new(), d));
    }
    Ok(AnalysisResult {
        model,
        diagnostics,
        scan_diagnostics,
    })
}
