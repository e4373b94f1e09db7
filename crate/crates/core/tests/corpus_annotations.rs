//! Per-file event conservation on the fixture corpus: for every parsed
//! artifact, the multiset of recognized events must equal the committed
//! hand annotation exactly. Totals are covered by the acceptance suite;
//! this pins the distribution.

use std::path::Path;

use zac_core::model::{scan_tree, ScanOptions};
use zac_core::parser::ParseEventKind;
use zac_core::pipeline::analyze_artifacts;

struct Annotation {
    path: &'static str,
    /// [includes, defines, pragmas, declared namespaces,
    ///  class definitions, forward declarations, decisions, expansions]
    events: [usize; 8],
}

const fn annotated(path: &'static str, events: [usize; 8]) -> Annotation {
    Annotation { path, events }
}

const ANNOTATIONS: &[Annotation] = &[
    annotated("app.cpp", [3, 1, 0, 1, 2, 0, 3, 1]),
    annotated("gfx/color.h", [0, 1, 0, 1, 1, 1, 0, 1]),
    annotated("gfx/draw.cpp", [2, 0, 0, 1, 0, 0, 1, 0]),
    annotated("gfx/shader.h", [0, 3, 0, 1, 2, 0, 0, 1]),
    annotated("io/file.cpp", [1, 1, 0, 1, 0, 0, 5, 1]),
    annotated("io/file.h", [0, 2, 0, 1, 2, 0, 0, 1]),
    annotated("io/net/socket.cpp", [2, 0, 0, 2, 1, 0, 1, 0]),
    annotated("legacy/old.cxx", [1, 0, 0, 0, 0, 0, 1, 1]),
    annotated("legacy/old.hxx", [0, 2, 0, 0, 2, 0, 0, 1]),
    annotated("main.cpp", [2, 0, 0, 0, 0, 0, 7, 3]),
    annotated("util.h", [0, 3, 1, 1, 2, 0, 1, 1]),
    annotated("widgets/button.cpp", [1, 1, 0, 1, 0, 0, 2, 1]),
    annotated("widgets/button.h", [1, 0, 1, 1, 2, 0, 0, 0]),
    annotated("widgets/chrome/tabs.cpp", [1, 0, 0, 2, 2, 0, 0, 0]),
];

#[test]
fn per_file_event_counts_match_hand_annotations() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let (descriptors, _) = scan_tree(&root, &ScanOptions::default()).unwrap();
    let parsed = analyze_artifacts(&root, &descriptors, false).unwrap();

    let mut seen = 0;
    for artifact in &parsed {
        if !artifact.descriptor.kind.is_parsed() {
            assert!(artifact.outcome.events.is_empty());
            continue;
        }
        let annotation = ANNOTATIONS
            .iter()
            .find(|a| a.path == artifact.descriptor.rel_path)
            .unwrap_or_else(|| panic!("no annotation for {}", artifact.descriptor.rel_path));
        seen += 1;

        let mut counts = [0usize; 8];
        for event in &artifact.outcome.events {
            let slot = match &event.kind {
                ParseEventKind::IncludeDirective { .. } => 0,
                ParseEventKind::DefineMacro { .. } => 1,
                ParseEventKind::PragmaDirective { .. } => 2,
                ParseEventKind::DeclaredNamespace { .. } => 3,
                ParseEventKind::ClassDecl {
                    is_definition: true,
                    ..
                } => 4,
                ParseEventKind::ClassDecl {
                    is_definition: false,
                    ..
                } => 5,
                ParseEventKind::DecisionPoint { .. } => 6,
                ParseEventKind::MacroExpansion { .. } => 7,
            };
            counts[slot] += 1;
        }
        assert_eq!(
            counts, annotation.events,
            "{}: [includes, defines, pragmas, namespaces, class defs, forwards, decisions, expansions]",
            artifact.descriptor.rel_path
        );
        assert!(
            artifact.outcome.diagnostics.is_empty(),
            "{}: unexpected diagnostics {:?}",
            artifact.descriptor.rel_path,
            artifact.outcome.diagnostics
        );
    }
    assert_eq!(seen, ANNOTATIONS.len(), "every annotated file was parsed");
}
