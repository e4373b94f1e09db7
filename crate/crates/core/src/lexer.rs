//! Lossless lexical decomposition of preprocessed C++ source.
//!
//! Every byte of the input is covered by exactly one token, so concatenating
//! the lexemes in stream order reproduces the source byte-for-byte. The
//! tokenizer never fails on content: byte runs it cannot classify become
//! [`TokenKind::Unknown`] tokens.

use std::borrow::Cow;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::Error;

/// The C++03 keyword set. The analyzed corpora predate C++11, so the
/// classic list is the one that matters; anything newer lexes as an
/// identifier, which is harmless for counting purposes.
pub const CPP03_KEYWORDS: &[&str] = &[
    "and",
    "and_eq",
    "asm",
    "auto",
    "bitand",
    "bitor",
    "bool",
    "break",
    "case",
    "catch",
    "char",
    "class",
    "compl",
    "const",
    "const_cast",
    "continue",
    "default",
    "delete",
    "do",
    "double",
    "dynamic_cast",
    "else",
    "enum",
    "explicit",
    "export",
    "extern",
    "false",
    "float",
    "for",
    "friend",
    "goto",
    "if",
    "inline",
    "int",
    "long",
    "mutable",
    "namespace",
    "new",
    "not",
    "not_eq",
    "operator",
    "or",
    "or_eq",
    "private",
    "protected",
    "public",
    "register",
    "reinterpret_cast",
    "return",
    "short",
    "signed",
    "sizeof",
    "static",
    "static_cast",
    "struct",
    "switch",
    "template",
    "this",
    "throw",
    "true",
    "try",
    "typedef",
    "typeid",
    "typename",
    "union",
    "unsigned",
    "using",
    "virtual",
    "void",
    "volatile",
    "wchar_t",
    "while",
    "xor",
    "xor_eq",
];

/// Multi-character punctuation, longest first so maximal munch is a simple
/// prefix scan.
const MULTI_PUNCT: &[&str] = &[
    "...", "->*", "<<=", ">>=", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", ".*", "##",
];

const SINGLE_PUNCT: &[u8] = b"()[]{}<>;:,.?~!+-*/%^&|=#";

/// Classification of one lexical token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    StringLiteral,
    CharLiteral,
    Punctuation,
    PreprocDirective,
    Comment,
    Whitespace,
    Unknown,
}

impl TokenKind {
    pub fn name(self) -> &'static str {
        match self {
            TokenKind::Identifier => "identifier",
            TokenKind::Keyword => "keyword",
            TokenKind::Number => "number",
            TokenKind::StringLiteral => "string_literal",
            TokenKind::CharLiteral => "char_literal",
            TokenKind::Punctuation => "punctuation",
            TokenKind::PreprocDirective => "preproc_directive",
            TokenKind::Comment => "comment",
            TokenKind::Whitespace => "whitespace",
            TokenKind::Unknown => "unknown",
        }
    }
}

/// One source artifact held in memory, with an index of line starts so
/// token positions can be recovered from byte offsets.
#[derive(Debug, Clone)]
pub struct SourceText {
    path: PathBuf,
    bytes: Vec<u8>,
    newline_index: Vec<usize>,
}

impl SourceText {
    pub fn new(path: impl Into<PathBuf>, bytes: Vec<u8>) -> Self {
        let mut newline_index = vec![0];
        for (i, b) in bytes.iter().enumerate() {
            if *b == b'\n' {
                newline_index.push(i + 1);
            }
        }
        SourceText {
            path: path.into(),
            bytes,
            newline_index,
        }
    }

    /// Reads an artifact from disk. I/O failure is the only way lexing a
    /// source can fail; the error carries the offending path.
    pub fn read(path: &Path) -> Result<Self, Error> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(SourceText::new(path, bytes))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn newline_index(&self) -> &[usize] {
        &self.newline_index
    }

    /// 1-based (line, column) of a byte offset. Columns count bytes.
    pub fn line_col(&self, offset: usize) -> (u32, u32) {
        let line = match self.newline_index.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let col = offset - self.newline_index[line];
        (line as u32 + 1, col as u32 + 1)
    }
}

/// One classified token, stored as a span into the source bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

/// The lossless token sequence for one artifact.
#[derive(Debug)]
pub struct TokenStream {
    source: SourceText,
    tokens: Vec<Token>,
}

impl TokenStream {
    pub fn source(&self) -> &SourceText {
        &self.source
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn lexeme(&self, token: &Token) -> &[u8] {
        &self.source.bytes[token.start..token.end]
    }

    /// Lexeme as text. Identifier, keyword, number and punctuation tokens
    /// are always pure ASCII, so this is lossless everywhere it matters;
    /// invalid byte runs (which only occur in `Unknown` tokens) are
    /// replaced.
    pub fn lexeme_text(&self, token: &Token) -> Cow<'_, str> {
        String::from_utf8_lossy(self.lexeme(token))
    }
}

/// Classifies an identifier-shaped word as keyword or identifier.
pub fn classify_word(lexeme: &str) -> TokenKind {
    if CPP03_KEYWORDS.binary_search(&lexeme).is_ok() {
        TokenKind::Keyword
    } else {
        TokenKind::Identifier
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_plain_ws(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c)
}

/// True when `bytes[i]` begins a backslash-newline continuation.
fn is_continuation(bytes: &[u8], i: usize) -> bool {
    bytes.get(i) == Some(&b'\\')
        && (bytes.get(i + 1) == Some(&b'\n')
            || (bytes.get(i + 1) == Some(&b'\r') && bytes.get(i + 2) == Some(&b'\n')))
}

/// True when a whitespace lexeme contains a newline that is not escaped by
/// a preceding backslash. Such a newline terminates a preprocessor
/// directive's logical line.
pub fn whitespace_ends_line(lexeme: &[u8]) -> bool {
    for (i, b) in lexeme.iter().enumerate() {
        if *b != b'\n' {
            continue;
        }
        let mut j = i;
        if j > 0 && lexeme[j - 1] == b'\r' {
            j -= 1;
        }
        if j == 0 || lexeme[j - 1] != b'\\' {
            return true;
        }
    }
    false
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
    /// Only whitespace seen so far on the current line; a `#` here starts
    /// a preprocessor directive.
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    fn peek(&self, offset: usize) -> Option<u8> {
        self.bytes.get(self.pos + offset).copied()
    }

    fn scan_whitespace(&mut self) -> (usize, bool) {
        let start = self.pos;
        let mut saw_newline = false;
        loop {
            match self.peek(0) {
                Some(b) if is_plain_ws(b) => {
                    if b == b'\n' {
                        saw_newline = true;
                    }
                    self.pos += 1;
                }
                Some(b'\\') if is_continuation(self.bytes, self.pos) => {
                    // Backslash-newline folds into the whitespace run and
                    // does not end a directive's logical line.
                    self.pos += if self.peek(1) == Some(b'\r') { 3 } else { 2 };
                }
                _ => break,
            }
        }
        (start, saw_newline)
    }

    fn scan_line_comment(&mut self) {
        while let Some(b) = self.peek(0) {
            if b == b'\n' {
                break;
            }
            self.pos += 1;
        }
    }

    fn scan_block_comment(&mut self) {
        self.pos += 2; // opening "/*"
        while self.pos < self.bytes.len() {
            if self.peek(0) == Some(b'*') && self.peek(1) == Some(b'/') {
                self.pos += 2;
                return;
            }
            self.pos += 1;
        }
    }

    /// Strings and char literals: backslash escapes the next byte
    /// (including a newline). An unterminated literal ends at the first
    /// unescaped newline or at end of input.
    fn scan_quoted(&mut self, quote: u8) {
        self.pos += 1;
        while let Some(b) = self.peek(0) {
            match b {
                b'\\' if self.pos + 1 < self.bytes.len() => self.pos += 2,
                b'\n' => return,
                _ => {
                    self.pos += 1;
                    if b == quote {
                        return;
                    }
                }
            }
        }
    }

    /// Greedy pp-number: no validation, just the shape of a numeric
    /// literal including hex prefixes, suffixes and decimal points.
    fn scan_number(&mut self) {
        self.pos += 1;
        while let Some(b) = self.peek(0) {
            let sign_after_exponent = (b == b'+' || b == b'-')
                && matches!(self.bytes[self.pos - 1], b'e' | b'E' | b'p' | b'P');
            if is_ident_continue(b) || b == b'.' || sign_after_exponent {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn scan_identifier(&mut self) {
        self.pos += 1;
        while let Some(b) = self.peek(0) {
            if is_ident_continue(b) {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// The directive token spans `#`, any interior spaces or tabs, and the
    /// directive word, e.g. `#include` or `# define`.
    fn scan_directive(&mut self) {
        self.pos += 1;
        let mut probe = self.pos;
        while matches!(self.bytes.get(probe), Some(b' ') | Some(b'\t')) {
            probe += 1;
        }
        if self.bytes.get(probe).copied().is_some_and(is_ident_start) {
            self.pos = probe + 1;
            while self.peek(0).is_some_and(is_ident_continue) {
                self.pos += 1;
            }
        }
    }

    fn scan_punctuation(&mut self) {
        let rest = &self.bytes[self.pos..];
        for p in MULTI_PUNCT {
            if rest.starts_with(p.as_bytes()) {
                self.pos += p.len();
                return;
            }
        }
        self.pos += 1;
    }

    /// Maximal run of bytes that cannot begin any recognized token.
    fn scan_unknown(&mut self) {
        while let Some(b) = self.peek(0) {
            let recognizable = is_plain_ws(b)
                || is_ident_start(b)
                || b.is_ascii_digit()
                || b == b'"'
                || b == b'\''
                || SINGLE_PUNCT.contains(&b)
                || is_continuation(self.bytes, self.pos);
            if recognizable {
                break;
            }
            self.pos += 1;
        }
    }
}

/// Splits a source artifact into its lossless token stream.
pub fn tokenize(source: SourceText) -> TokenStream {
    let mut lexer = Lexer {
        bytes: source.bytes(),
        pos: 0,
        at_line_start: true,
    };
    let mut tokens = Vec::new();

    while lexer.pos < lexer.bytes.len() {
        let start = lexer.pos;
        let b = lexer.bytes[start];
        let kind = match b {
            _ if is_plain_ws(b) || is_continuation(lexer.bytes, start) => {
                let (_, saw_newline) = lexer.scan_whitespace();
                if saw_newline {
                    lexer.at_line_start = true;
                }
                TokenKind::Whitespace
            }
            b'/' if lexer.peek(1) == Some(b'/') => {
                lexer.scan_line_comment();
                TokenKind::Comment
            }
            b'/' if lexer.peek(1) == Some(b'*') => {
                lexer.scan_block_comment();
                TokenKind::Comment
            }
            b'"' => {
                lexer.scan_quoted(b'"');
                TokenKind::StringLiteral
            }
            b'\'' => {
                lexer.scan_quoted(b'\'');
                TokenKind::CharLiteral
            }
            _ if b.is_ascii_digit() => {
                lexer.scan_number();
                TokenKind::Number
            }
            b'.' if lexer.peek(1).is_some_and(|n| n.is_ascii_digit()) => {
                lexer.scan_number();
                TokenKind::Number
            }
            _ if is_ident_start(b) => {
                lexer.scan_identifier();
                let word = std::str::from_utf8(&lexer.bytes[start..lexer.pos])
                    .expect("identifier bytes are ASCII");
                classify_word(word)
            }
            b'#' if lexer.at_line_start => {
                lexer.scan_directive();
                TokenKind::PreprocDirective
            }
            _ if SINGLE_PUNCT.contains(&b) => {
                lexer.scan_punctuation();
                TokenKind::Punctuation
            }
            _ => {
                lexer.scan_unknown();
                TokenKind::Unknown
            }
        };
        debug_assert!(lexer.pos > start, "lexer must always make progress");
        if kind != TokenKind::Whitespace {
            lexer.at_line_start = false;
        }
        let (line, column) = source.line_col(start);
        tokens.push(Token {
            kind,
            start,
            end: lexer.pos,
            line,
            column,
        });
    }

    TokenStream { source, tokens }
}

/// Debug rendering used by the CLI `--dump-tokens` flag:
/// one `LINE:COL KIND LEXEME-escaped` line per token.
pub fn dump_tokens(stream: &TokenStream) -> String {
    let mut out = String::new();
    for token in stream.tokens() {
        let escaped: String = stream
            .lexeme(token)
            .iter()
            .flat_map(|b| std::ascii::escape_default(*b))
            .map(char::from)
            .collect();
        out.push_str(&format!(
            "{}:{} {} {}\n",
            token.line,
            token.column,
            token.kind.name(),
            escaped
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(text: &str) -> TokenStream {
        tokenize(SourceText::new("test.cpp", text.as_bytes().to_vec()))
    }

    fn kinds_and_lexemes(stream: &TokenStream) -> Vec<(TokenKind, String)> {
        stream
            .tokens()
            .iter()
            .map(|t| (t.kind, stream.lexeme_text(t).into_owned()))
            .collect()
    }

    fn assert_lossless(input: &[u8]) {
        let stream = tokenize(SourceText::new("t", input.to_vec()));
        let mut joined = Vec::new();
        let mut prev_end = 0;
        for t in stream.tokens() {
            assert_eq!(t.start, prev_end, "gap or overlap at offset {}", t.start);
            assert!(t.end > t.start, "empty lexeme");
            prev_end = t.end;
            joined.extend_from_slice(stream.lexeme(t));
        }
        assert_eq!(joined, input);
    }

    #[test]
    fn empty_input_yields_no_tokens() {
        assert!(lex("").tokens().is_empty());
    }

    #[test]
    fn define_line_matches_hand_tokenization() {
        let stream = lex("#define MAX 10");
        let got = kinds_and_lexemes(&stream);
        assert_eq!(
            got,
            vec![
                (TokenKind::PreprocDirective, "#define".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Identifier, "MAX".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Number, "10".to_string()),
            ]
        );
    }

    #[test]
    fn class_head_matches_hand_tokenization() {
        let stream = lex("class A : public B {};");
        let got = kinds_and_lexemes(&stream);
        assert_eq!(
            got,
            vec![
                (TokenKind::Keyword, "class".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Identifier, "A".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Punctuation, ":".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Keyword, "public".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Identifier, "B".to_string()),
                (TokenKind::Whitespace, " ".to_string()),
                (TokenKind::Punctuation, "{".to_string()),
                (TokenKind::Punctuation, "}".to_string()),
                (TokenKind::Punctuation, ";".to_string()),
            ]
        );
    }

    #[test]
    fn classify_word_uses_fixed_keyword_set() {
        assert_eq!(classify_word("class"), TokenKind::Keyword);
        assert_eq!(classify_word("namespace"), TokenKind::Keyword);
        assert_eq!(classify_word("MyClass"), TokenKind::Identifier);
        // C++11 keywords are identifiers to this lexer.
        assert_eq!(classify_word("constexpr"), TokenKind::Identifier);
    }

    #[test]
    fn keyword_table_is_sorted_for_binary_search() {
        let mut sorted = CPP03_KEYWORDS.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, CPP03_KEYWORDS);
    }

    #[test]
    fn comment_with_quote_is_one_token() {
        let stream = lex("/* a \"b\" */");
        assert_eq!(stream.tokens().len(), 1);
        assert_eq!(stream.tokens()[0].kind, TokenKind::Comment);
    }

    #[test]
    fn string_with_keywords_is_opaque() {
        let stream = lex("\"if (x) { while }\"");
        assert_eq!(stream.tokens().len(), 1);
        assert_eq!(stream.tokens()[0].kind, TokenKind::StringLiteral);
    }

    #[test]
    fn directive_with_interior_space_keeps_losslessness() {
        let stream = lex("#  define X 1\n");
        assert_eq!(stream.tokens()[0].kind, TokenKind::PreprocDirective);
        assert_eq!(stream.lexeme_text(&stream.tokens()[0]), "#  define");
        assert_lossless("#  define X 1\n".as_bytes());
    }

    #[test]
    fn hash_mid_line_is_punctuation() {
        let stream = lex("x # y");
        let hash = &stream.tokens()[2];
        assert_eq!(hash.kind, TokenKind::Punctuation);
        assert_eq!(stream.lexeme_text(hash), "#");
    }

    #[test]
    fn continuation_joins_directive_logical_line() {
        let text = "#define F(x) \\\n    (x + 1)\nint a;\n";
        let stream = lex(text);
        assert_lossless(text.as_bytes());
        // The continuation folds into a whitespace token that does not end
        // the logical line; the plain newline after ")" does.
        let ws: Vec<&Token> = stream
            .tokens()
            .iter()
            .filter(|t| t.kind == TokenKind::Whitespace)
            .collect();
        assert!(!whitespace_ends_line(stream.lexeme(ws[1])));
        let after_body = ws
            .iter()
            .find(|t| stream.lexeme_text(t).contains('\n') && whitespace_ends_line(stream.lexeme(t)))
            .expect("directive must terminate");
        assert!(after_body.start > stream.tokens()[0].end);
    }

    #[test]
    fn multi_char_operators_use_maximal_munch() {
        let stream = lex("a::b->c<<=d");
        let puncts: Vec<String> = stream
            .tokens()
            .iter()
            .filter(|t| t.kind == TokenKind::Punctuation)
            .map(|t| stream.lexeme_text(t).into_owned())
            .collect();
        assert_eq!(puncts, vec!["::", "->", "<<="]);
    }

    #[test]
    fn unknown_bytes_become_unknown_runs() {
        let stream = tokenize(SourceText::new("t", b"a @@\xff$ b".to_vec()));
        let unknown: Vec<&Token> = stream
            .tokens()
            .iter()
            .filter(|t| t.kind == TokenKind::Unknown)
            .collect();
        assert_eq!(unknown.len(), 1);
        assert_eq!(stream.lexeme(unknown[0]), b"@@\xff$");
        assert_lossless(b"a @@\xff$ b");
    }

    #[test]
    fn positions_are_one_based_and_monotone() {
        let stream = lex("int a;\n  char b;\n");
        let first = &stream.tokens()[0];
        assert_eq!((first.line, first.column), (1, 1));
        let char_kw = stream
            .tokens()
            .iter()
            .find(|t| stream.lexeme_text(t) == "char")
            .unwrap();
        assert_eq!((char_kw.line, char_kw.column), (2, 3));
        let mut prev = (0, 0);
        for t in stream.tokens() {
            assert!((t.line, t.column) >= prev);
            prev = (t.line, t.column);
        }
    }

    #[test]
    fn newline_index_starts_at_zero_and_increases() {
        let src = SourceText::new("t", b"a\nb\nc".to_vec());
        let idx = src.newline_index();
        assert_eq!(idx[0], 0);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(idx, &[0, 2, 4]);
    }

    #[test]
    fn lossless_on_tricky_inputs() {
        for text in [
            "",
            "\n",
            "\\\n",
            "\\",
            "x\\\ny",
            "#define A \\\n B \\\r\n C\n",
            "\"unterminated\nint x;",
            "'a' 'bc' '\\''",
            "1.5e+10 0xFFull .5f 1..2",
            "/* unterminated",
            "// trailing",
            "#\n#!\n# \n",
            "int/**/x;",
        ] {
            assert_lossless(text.as_bytes());
        }
    }

    #[test]
    fn tokenize_is_deterministic() {
        let text = "#include <vector>\nclass A {};\n";
        let a = dump_tokens(&lex(text));
        let b = dump_tokens(&lex(text));
        assert_eq!(a, b);
    }
}
