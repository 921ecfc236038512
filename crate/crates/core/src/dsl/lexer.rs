use num_bigint::BigInt;

use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(char),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

const PUNCT: &str = "{}[](),=+-*/^";

pub(crate) fn tokenize(file: &str, text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let column = i + 1;
            if ch.is_whitespace() {
                i += 1;
            } else if ch == '#' || (ch == '/' && chars.get(i + 1) == Some(&'/')) {
                break;
            } else if ch.is_ascii_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: lineno + 1,
                    column,
                    length: i - start,
                });
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                    return Err(ParseError::new(
                        ParseErrorKind::SyntaxError,
                        "identifiers cannot start with a digit",
                        SourceSpan::new(file, lineno + 1, column, i + 1 - start),
                    ));
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Int(digits.parse().expect("decimal digits")),
                    line: lineno + 1,
                    column,
                    length: i - start,
                });
            } else if PUNCT.contains(ch) {
                out.push(Token {
                    tok: Tok::Punct(ch),
                    line: lineno + 1,
                    column,
                    length: 1,
                });
                i += 1;
            } else {
                return Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    format!("unexpected character `{ch}`"),
                    SourceSpan::new(file, lineno + 1, column, 1),
                ));
            }
        }
    }
    let (line, column) = match text.lines().enumerate().last() {
        Some((n, l)) => (n + 1, l.chars().count() + 1),
        None => (1, 1),
    };
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
        length: 0,
    });
    Ok(out)
}
