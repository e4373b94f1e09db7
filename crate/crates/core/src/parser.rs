//! Tolerant structural-event recognizer over a token stream.
//!
//! This is not a grammar-complete C++ parser. It recognizes the constructs
//! the code model needs — includes, macro definitions, pragmas, declared
//! namespaces, class heads with base clauses, decision points and macro
//! expansions — and skips everything else, emitting diagnostics instead of
//! failing.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::lexer::{whitespace_ends_line, Token, TokenKind, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Class,
    Struct,
    Union,
}

impl ClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassKind::Class => "class",
            ClassKind::Struct => "struct",
            ClassKind::Union => "union",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Access {
    Public,
    Protected,
    Private,
}

impl Access {
    pub fn name(self) -> &'static str {
        match self {
            Access::Public => "public",
            Access::Protected => "protected",
            Access::Private => "private",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncludeStyle {
    Angle,
    Quote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionKind {
    If,
    For,
    While,
    Do,
    Switch,
    Case,
    Ternary,
    Catch,
}

impl DecisionKind {
    pub fn name(self) -> &'static str {
        match self {
            DecisionKind::If => "if",
            DecisionKind::For => "for",
            DecisionKind::While => "while",
            DecisionKind::Do => "do",
            DecisionKind::Switch => "switch",
            DecisionKind::Case => "case",
            DecisionKind::Ternary => "ternary",
            DecisionKind::Catch => "catch",
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "if" => DecisionKind::If,
            "for" => DecisionKind::For,
            "while" => DecisionKind::While,
            "do" => DecisionKind::Do,
            "switch" => DecisionKind::Switch,
            "case" => DecisionKind::Case,
            "catch" => DecisionKind::Catch,
            _ => return None,
        })
    }
}

/// One base specifier of a class head, with access resolved against the
/// class kind's default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSpecifier {
    pub base_name: String,
    pub access: Access,
    pub is_virtual: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ParseEventKind {
    IncludeDirective {
        target: String,
        style: IncludeStyle,
    },
    DefineMacro {
        name: String,
        is_function_like: bool,
        parameter_count: u32,
        body: String,
    },
    PragmaDirective {
        text: String,
    },
    DeclaredNamespace {
        name: String,
    },
    ClassDecl {
        name: String,
        kind: ClassKind,
        bases: Vec<BaseSpecifier>,
        is_definition: bool,
    },
    DecisionPoint {
        kind: DecisionKind,
    },
    MacroExpansion {
        name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseEvent {
    pub line: u32,
    #[serde(flatten)]
    pub kind: ParseEventKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line: u32,
    pub message: String,
}

/// Ordered structural events plus diagnostics for skipped constructs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOutcome {
    pub events: Vec<ParseEvent>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseOutcome {
    /// Names of all macros defined in this outcome, in definition order.
    pub fn defined_macro_names(&self) -> impl Iterator<Item = &str> {
        self.events.iter().filter_map(|e| match &e.kind {
            ParseEventKind::DefineMacro { name, .. } => Some(name.as_str()),
            _ => None,
        })
    }
}

struct ScopeEntry {
    name: String,
    open_depth: u32,
}

struct Parser<'a> {
    stream: &'a TokenStream,
    tokens: &'a [Token],
    known_macros: &'a BTreeSet<String>,
    pos: usize,
    depth: u32,
    scopes: Vec<ScopeEntry>,
    /// Lexeme of the previous significant token, for the ternary rule.
    prev_significant: Option<String>,
    events: Vec<ParseEvent>,
    diagnostics: Vec<Diagnostic>,
}

/// Recognizes structural events in one artifact's token stream.
///
/// The measurement convention is two-pass: a first pass over all artifacts
/// (with an empty `known_macros`) collects the defined macro names, then a
/// second pass with the merged global name set makes macro-expansion counts
/// independent of artifact order.
pub fn parse(stream: &TokenStream, known_macros: &BTreeSet<String>) -> ParseOutcome {
    let mut parser = Parser {
        stream,
        tokens: stream.tokens(),
        known_macros,
        pos: 0,
        depth: 0,
        scopes: Vec::new(),
        prev_significant: None,
        events: Vec::new(),
        diagnostics: Vec::new(),
    };
    parser.run();
    ParseOutcome {
        events: parser.events,
        diagnostics: parser.diagnostics,
    }
}

impl<'a> Parser<'a> {
    fn run(&mut self) {
        while self.pos < self.tokens.len() {
            let token = self.tokens[self.pos];
            match token.kind {
                TokenKind::PreprocDirective => self.handle_directive(),
                TokenKind::Keyword => self.handle_keyword(),
                TokenKind::Identifier => {
                    self.check_macro_expansion(self.pos, None);
                    self.note_significant(self.pos);
                    self.pos += 1;
                }
                TokenKind::Punctuation => {
                    self.handle_punctuation(self.pos);
                    self.note_significant(self.pos);
                    self.pos += 1;
                }
                TokenKind::Whitespace | TokenKind::Comment => self.pos += 1,
                _ => {
                    self.note_significant(self.pos);
                    self.pos += 1;
                }
            }
        }
    }

    fn text(&self, index: usize) -> &str {
        let token = &self.tokens[index];
        std::str::from_utf8(self.stream.lexeme(token)).unwrap_or("")
    }

    fn is_significant(&self, index: usize) -> bool {
        !matches!(
            self.tokens[index].kind,
            TokenKind::Whitespace | TokenKind::Comment
        )
    }

    fn next_significant(&self, mut index: usize) -> Option<usize> {
        while index < self.tokens.len() {
            if self.is_significant(index) {
                return Some(index);
            }
            index += 1;
        }
        None
    }

    fn note_significant(&mut self, index: usize) {
        self.prev_significant = Some(self.text(index).to_string());
    }

    fn diagnostic(&mut self, line: u32, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            line,
            message: message.into(),
        });
    }

    fn emit(&mut self, line: u32, kind: ParseEventKind) {
        self.events.push(ParseEvent { line, kind });
    }

    fn check_macro_expansion(&mut self, index: usize, excluded: Option<&str>) {
        let word = self.text(index);
        if excluded == Some(word) {
            return;
        }
        if self.known_macros.contains(word) {
            self.emit(
                self.tokens[index].line,
                ParseEventKind::MacroExpansion {
                    name: word.to_string(),
                },
            );
        }
    }

    fn check_ternary(&mut self, index: usize) {
        // A `?` counts as a decision only when the preceding significant
        // token exists and is not an opening bracket; this excludes
        // degenerate matches in skipped regions.
        let counts = matches!(
            self.prev_significant.as_deref(),
            Some(prev) if !matches!(prev, "(" | "{" | "[")
        );
        if counts {
            self.emit(
                self.tokens[index].line,
                ParseEventKind::DecisionPoint {
                    kind: DecisionKind::Ternary,
                },
            );
        }
    }

    fn handle_punctuation(&mut self, index: usize) {
        match self.text(index) {
            "{" => self.depth += 1,
            "}" => {
                if self.depth == 0 {
                    self.diagnostic(self.tokens[index].line, "unbalanced closing brace");
                } else {
                    self.depth -= 1;
                    let depth = self.depth;
                    while self
                        .scopes
                        .last()
                        .is_some_and(|scope| scope.open_depth >= depth)
                    {
                        self.scopes.pop();
                    }
                }
            }
            "?" => self.check_ternary(index),
            _ => {}
        }
    }

    /// Flat scan of a token range: decisions and macro expansions only, no
    /// structural recognition. Used for directive bodies and template
    /// parameter lists, where braces are not scope delimiters.
    fn scan_flat(&mut self, range: std::ops::Range<usize>, excluded_macro: Option<&str>) {
        for index in range {
            if !self.is_significant(index) {
                continue;
            }
            let token = self.tokens[index];
            match token.kind {
                TokenKind::Keyword => {
                    if let Some(kind) = DecisionKind::from_keyword(self.text(index)) {
                        self.emit(token.line, ParseEventKind::DecisionPoint { kind });
                    }
                }
                TokenKind::Identifier => self.check_macro_expansion(index, excluded_macro),
                TokenKind::Punctuation if self.text(index) == "?" => self.check_ternary(index),
                _ => {}
            }
            self.note_significant(index);
        }
    }

    /// Exclusive end of the directive logical line starting at `start`:
    /// the index of the first whitespace token containing an unescaped
    /// newline, or of the next directive token, or the stream end.
    fn directive_end(&self, start: usize) -> usize {
        let mut index = start + 1;
        while index < self.tokens.len() {
            let token = self.tokens[index];
            match token.kind {
                TokenKind::Whitespace => {
                    if whitespace_ends_line(self.stream.lexeme(&token)) {
                        return index;
                    }
                }
                TokenKind::PreprocDirective => return index,
                _ => {}
            }
            index += 1;
        }
        self.tokens.len()
    }

    /// Directive body rendered as text with whitespace runs collapsed to
    /// single spaces (continuations included).
    fn body_text(&self, range: std::ops::Range<usize>) -> String {
        let mut out = String::new();
        let mut pending_space = false;
        for index in range {
            if self.is_significant(index) {
                if pending_space && !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(&self.stream.lexeme_text(&self.tokens[index]));
                pending_space = false;
            } else {
                pending_space = true;
            }
        }
        out
    }

    fn handle_directive(&mut self) {
        let start = self.pos;
        let token = self.tokens[start];
        let end = self.directive_end(start);
        let word: String = self
            .text(start)
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '#')
            .collect();

        let mut excluded_macro = None;
        match word.as_str() {
            "include" => self.handle_include(start, end),
            "define" => excluded_macro = self.handle_define(start, end),
            "pragma" => {
                let text = match self.next_significant(start + 1).filter(|i| *i < end) {
                    Some(first) => self.body_text(first..end),
                    None => String::new(),
                };
                self.emit(token.line, ParseEventKind::PragmaDirective { text });
            }
            _ => {}
        }

        // Directive-line tokens still yield decisions and expansions, but
        // never class heads or brace-depth changes.
        self.scan_flat(start + 1..end, excluded_macro.as_deref());
        self.pos = end;
    }

    fn handle_include(&mut self, start: usize, end: usize) {
        let line = self.tokens[start].line;
        let Some(first) = self.next_significant(start + 1).filter(|i| *i < end) else {
            self.diagnostic(line, "include directive without a target");
            return;
        };
        let token = self.tokens[first];
        match token.kind {
            TokenKind::StringLiteral => {
                let text = self.stream.lexeme_text(&token).into_owned();
                let target = text.trim_matches('"').to_string();
                self.emit(
                    line,
                    ParseEventKind::IncludeDirective {
                        target,
                        style: IncludeStyle::Quote,
                    },
                );
            }
            TokenKind::Punctuation if self.text(first) == "<" => {
                // The raw source between the angle brackets is the target;
                // it may lex as several tokens (`sys/socket.h`).
                let mut index = first + 1;
                while index < end {
                    if self.is_significant(index) && self.text(index).starts_with('>') {
                        break;
                    }
                    index += 1;
                }
                if index >= end {
                    self.diagnostic(line, "unterminated <...> include target");
                    return;
                }
                let bytes = &self.stream.source().bytes()
                    [self.tokens[first].end..self.tokens[index].start];
                let target = String::from_utf8_lossy(bytes).trim().to_string();
                self.emit(
                    line,
                    ParseEventKind::IncludeDirective {
                        target,
                        style: IncludeStyle::Angle,
                    },
                );
            }
            _ => self.diagnostic(line, "unrecognized include target"),
        }
    }

    /// Emits the DefineMacro event and returns the macro's name so the
    /// flat scan can exclude it on its own definition line.
    fn handle_define(&mut self, start: usize, end: usize) -> Option<String> {
        let line = self.tokens[start].line;
        let Some(name_index) = self
            .next_significant(start + 1)
            .filter(|i| *i < end && self.tokens[*i].kind == TokenKind::Identifier)
        else {
            self.diagnostic(line, "define directive without a macro name");
            return None;
        };
        let name = self.text(name_index).to_string();

        // Function-like only when the parenthesis immediately abuts the
        // macro name, with no whitespace between.
        let paren = name_index + 1;
        let is_function_like = paren < end
            && self.tokens[paren].kind == TokenKind::Punctuation
            && self.text(paren) == "("
            && self.tokens[paren].start == self.tokens[name_index].end;

        let mut parameter_count = 0u32;
        let mut body_start = name_index + 1;
        if is_function_like {
            let mut depth = 1u32;
            let mut index = paren + 1;
            let mut segment_has_content = false;
            while index < end && depth > 0 {
                if self.is_significant(index) {
                    match self.text(index) {
                        "(" => depth += 1,
                        ")" => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        "," if depth == 1 => {
                            if segment_has_content {
                                parameter_count += 1;
                            }
                            segment_has_content = false;
                        }
                        _ => segment_has_content = true,
                    }
                }
                index += 1;
            }
            if segment_has_content {
                parameter_count += 1;
            }
            body_start = (index + 1).min(end);
        }

        let body = self.body_text(body_start..end);
        self.emit(
            line,
            ParseEventKind::DefineMacro {
                name: name.clone(),
                is_function_like,
                parameter_count,
                body,
            },
        );
        Some(name)
    }

    fn handle_keyword(&mut self) {
        let index = self.pos;
        let word = self.text(index).to_string();
        if let Some(kind) = DecisionKind::from_keyword(&word) {
            self.emit(self.tokens[index].line, ParseEventKind::DecisionPoint { kind });
            self.note_significant(index);
            self.pos += 1;
            return;
        }
        match word.as_str() {
            "namespace" => self.handle_namespace(),
            "class" => self.handle_class_head(ClassKind::Class),
            "struct" => self.handle_class_head(ClassKind::Struct),
            "union" => self.handle_class_head(ClassKind::Union),
            "template" => self.handle_template(),
            _ => {
                self.note_significant(index);
                self.pos += 1;
            }
        }
    }

    /// Skips a template parameter list so `template <class T>` does not
    /// register a class head. The skipped tokens still get a flat scan.
    fn handle_template(&mut self) {
        let start = self.pos;
        self.note_significant(start);
        self.pos += 1;
        let Some(open) = self.next_significant(self.pos) else {
            return;
        };
        if self.text(open) != "<" {
            return;
        }
        let mut depth = 0i32;
        let mut index = open;
        while index < self.tokens.len() {
            if self.is_significant(index) {
                match self.text(index) {
                    "<" => depth += 1,
                    ">" => depth -= 1,
                    ">>" => depth -= 2,
                    "{" | "}" | ";" => {
                        self.diagnostic(
                            self.tokens[index].line,
                            "unterminated template parameter list",
                        );
                        self.scan_flat(open..index, None);
                        self.pos = index;
                        return;
                    }
                    _ => {}
                }
                if depth <= 0 {
                    break;
                }
            }
            index += 1;
        }
        let close = index.min(self.tokens.len());
        self.scan_flat(open..close, None);
        self.pos = (close + 1).min(self.tokens.len());
        if close < self.tokens.len() {
            self.note_significant(close);
        }
    }

    fn handle_namespace(&mut self) {
        let kw = self.pos;
        self.note_significant(kw);
        self.pos = kw + 1;
        let Some(name_index) = self.next_significant(self.pos) else {
            return;
        };
        if self.tokens[name_index].kind != TokenKind::Identifier {
            // Anonymous namespace or something stranger; the `{` (if any)
            // is handled by the main loop as a plain depth change.
            return;
        }
        let Some(brace) = self.next_significant(name_index + 1) else {
            self.check_macro_expansion(name_index, None);
            self.note_significant(name_index);
            self.pos = name_index + 1;
            return;
        };
        if self.text(brace) != "{" {
            // `namespace A = B;` alias or qualified use; not a declaration.
            self.check_macro_expansion(name_index, None);
            self.note_significant(name_index);
            self.pos = name_index + 1;
            return;
        }
        let name = self.text(name_index).to_string();
        self.emit(
            self.tokens[kw].line,
            ParseEventKind::DeclaredNamespace { name: name.clone() },
        );
        self.scopes.push(ScopeEntry {
            name,
            open_depth: self.depth,
        });
        self.depth += 1;
        self.note_significant(brace);
        self.pos = brace + 1;
    }

    fn qualified(&self, name: &str) -> String {
        if self.scopes.is_empty() {
            name.to_string()
        } else {
            let mut out = String::new();
            for scope in &self.scopes {
                out.push_str(&scope.name);
                out.push_str("::");
            }
            out.push_str(name);
            out
        }
    }

    fn handle_class_head(&mut self, kind: ClassKind) {
        let kw = self.pos;
        let line = self.tokens[kw].line;
        self.note_significant(kw);

        // Optional (possibly qualified) name: IDENT ("::" IDENT)*
        let mut name_parts: Vec<String> = Vec::new();
        let mut cursor = kw + 1;
        let mut last_name_index = None;
        while let Some(next) = self.next_significant(cursor) {
            let expect_ident = name_parts.len().is_multiple_of(2);
            let text = self.text(next);
            let matched = if expect_ident {
                self.tokens[next].kind == TokenKind::Identifier
            } else {
                text == "::"
            };
            if !matched {
                break;
            }
            name_parts.push(text.to_string());
            last_name_index = Some(next);
            cursor = next + 1;
        }
        if name_parts.last().map(String::as_str) == Some("::") {
            // Trailing `::` means this was a qualified mention, not a name.
            name_parts.pop();
            cursor = last_name_index.unwrap();
        }
        let name = if name_parts.is_empty() {
            None
        } else {
            Some(name_parts.concat())
        };

        let after_name = self.next_significant(cursor);
        let Some(after) = after_name else {
            self.pos = kw + 1;
            return;
        };
        match self.text(after) {
            ";" if name.is_some() => {
                // Forward declaration.
                self.emit(
                    line,
                    ParseEventKind::ClassDecl {
                        name: self.qualified(name.as_deref().unwrap()),
                        kind,
                        bases: Vec::new(),
                        is_definition: false,
                    },
                );
                self.note_significant(after);
                self.pos = after + 1;
            }
            "{" => {
                self.emit_class_definition(kind, line, name, Vec::new(), after);
            }
            ":" => {
                // Collect the base clause up to the opening brace.
                let mut angle_depth = 0i32;
                let mut index = after + 1;
                let mut brace = None;
                while index < self.tokens.len() {
                    if self.is_significant(index) {
                        match self.text(index) {
                            "<" => angle_depth += 1,
                            ">" => angle_depth -= 1,
                            ">>" => angle_depth -= 2,
                            "{" if angle_depth <= 0 => {
                                brace = Some(index);
                                break;
                            }
                            ";" | "}" if angle_depth <= 0 => break,
                            _ => {}
                        }
                    }
                    index += 1;
                }
                let Some(brace) = brace else {
                    self.diagnostic(line, "class head with base clause but no body");
                    self.pos = after + 1;
                    return;
                };
                let clause: Vec<Token> = self.tokens[after + 1..brace].to_vec();
                let (bases, mut diags) = parse_base_clause(self.stream, &clause, kind);
                self.diagnostics.append(&mut diags);
                // Identifiers in the base clause are ordinary macro
                // expansion candidates too.
                self.emit_class_definition(kind, line, name, bases, brace);
                self.scan_range_for_expansions(after + 1..brace);
            }
            _ => {
                // `class T` in other positions (variable declarations,
                // elaborated specifiers); not a class declaration. Resume
                // right after the keyword so the name gets normal scanning.
                self.pos = kw + 1;
            }
        }
    }

    fn scan_range_for_expansions(&mut self, range: std::ops::Range<usize>) {
        for index in range {
            if self.is_significant(index) && self.tokens[index].kind == TokenKind::Identifier {
                self.check_macro_expansion(index, None);
            }
        }
    }

    fn emit_class_definition(
        &mut self,
        kind: ClassKind,
        line: u32,
        name: Option<String>,
        bases: Vec<BaseSpecifier>,
        brace: usize,
    ) {
        let own_name = name.unwrap_or_else(|| format!("(anon@{line})"));
        self.emit(
            line,
            ParseEventKind::ClassDecl {
                name: self.qualified(&own_name),
                kind,
                bases,
                is_definition: true,
            },
        );
        self.scopes.push(ScopeEntry {
            name: own_name,
            open_depth: self.depth,
        });
        self.depth += 1;
        self.note_significant(brace);
        self.pos = brace + 1;
    }
}

/// Splits a base clause (the tokens between `:` and `{`) into base
/// specifiers. Commas inside template argument lists do not split; access
/// defaults to public for `struct` and private otherwise.
pub fn parse_base_clause(
    stream: &TokenStream,
    clause: &[Token],
    kind: ClassKind,
) -> (Vec<BaseSpecifier>, Vec<Diagnostic>) {
    let default_access = match kind {
        ClassKind::Struct => Access::Public,
        ClassKind::Class | ClassKind::Union => Access::Private,
    };
    let mut specifiers = Vec::new();
    let mut diagnostics = Vec::new();

    let mut segments: Vec<Vec<&Token>> = vec![Vec::new()];
    let mut angle_depth = 0i32;
    for token in clause {
        if matches!(token.kind, TokenKind::Whitespace | TokenKind::Comment) {
            continue;
        }
        let text = std::str::from_utf8(stream.lexeme(token)).unwrap_or("");
        match text {
            "<" => angle_depth += 1,
            ">" => angle_depth -= 1,
            ">>" => angle_depth -= 2,
            "," if angle_depth <= 0 => {
                segments.push(Vec::new());
                continue;
            }
            _ => {}
        }
        segments.last_mut().unwrap().push(token);
    }

    for segment in segments {
        if clause.is_empty() {
            continue;
        }
        let line = segment
            .first()
            .map(|t| t.line)
            .unwrap_or_else(|| clause[0].line);
        let mut access = None;
        let mut is_virtual = false;
        let mut name = String::new();
        let mut depth = 0i32;
        for token in segment {
            let text = std::str::from_utf8(stream.lexeme(token)).unwrap_or("");
            match text {
                "<" => depth += 1,
                ">" => depth -= 1,
                ">>" => depth -= 2,
                _ if depth > 0 => {} // template arguments are stripped
                "public" => access = Some(Access::Public),
                "protected" => access = Some(Access::Protected),
                "private" => access = Some(Access::Private),
                "virtual" => is_virtual = true,
                "::" => name.push_str("::"),
                _ if token.kind == TokenKind::Identifier => name.push_str(text),
                _ => {}
            }
        }
        if name.is_empty() {
            diagnostics.push(Diagnostic {
                line,
                message: "empty base specifier dropped".to_string(),
            });
            continue;
        }
        specifiers.push(BaseSpecifier {
            base_name: name,
            access: access.unwrap_or(default_access),
            is_virtual,
        });
    }

    (specifiers, diagnostics)
}

/// Debug rendering used by the CLI `--dump-events` flag:
/// one `LINE VARIANT detail…` line per event.
pub fn dump_events(outcome: &ParseOutcome) -> String {
    let mut out = String::new();
    for event in &outcome.events {
        let line = event.line;
        let rendered = match &event.kind {
            ParseEventKind::IncludeDirective { target, style } => format!(
                "include {} ({})",
                target,
                match style {
                    IncludeStyle::Angle => "angle",
                    IncludeStyle::Quote => "quote",
                }
            ),
            ParseEventKind::DefineMacro {
                name,
                is_function_like,
                parameter_count,
                ..
            } => {
                if *is_function_like {
                    format!("define {name}({parameter_count} params)")
                } else {
                    format!("define {name}")
                }
            }
            ParseEventKind::PragmaDirective { text } => format!("pragma {text}"),
            ParseEventKind::DeclaredNamespace { name } => format!("namespace {name}"),
            ParseEventKind::ClassDecl {
                name,
                kind,
                bases,
                is_definition,
            } => {
                let bases: Vec<String> = bases
                    .iter()
                    .map(|b| {
                        format!(
                            "{}{} {}",
                            if b.is_virtual { "virtual " } else { "" },
                            b.access.name(),
                            b.base_name
                        )
                    })
                    .collect();
                format!(
                    "{} {}{}{}",
                    kind.name(),
                    name,
                    if *is_definition { "" } else { " (forward)" },
                    if bases.is_empty() {
                        String::new()
                    } else {
                        format!(" : {}", bases.join(", "))
                    }
                )
            }
            ParseEventKind::DecisionPoint { kind } => format!("decision {}", kind.name()),
            ParseEventKind::MacroExpansion { name } => format!("expand {name}"),
        };
        out.push_str(&format!("{line} {rendered}\n"));
    }
    out
}
