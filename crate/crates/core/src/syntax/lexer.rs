use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Nat(u32),
    Nu,
    Zeta,
    ActorOp,
    SendOp,
    ParOp,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Equals,
    Caret,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Nat(n) => write!(f, "number `{n}`"),
            TokenKind::Nu => f.write_str("`nu`"),
            TokenKind::Zeta => f.write_str("`zeta`"),
            TokenKind::ActorOp => f.write_str("`|>`"),
            TokenKind::SendOp => f.write_str("`<|`"),
            TokenKind::ParOp => f.write_str("`||`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBrack => f.write_str("`[`"),
            TokenKind::RBrack => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Equals => f.write_str("`=`"),
            TokenKind::Caret => f.write_str("`^`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        // line comment
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two = |a: char, b: char| c == a && chars.get(i + 1) == Some(&b);
        let (kind, len) = if two('|', '>') {
            (TokenKind::ActorOp, 2)
        } else if two('<', '|') {
            (TokenKind::SendOp, 2)
        } else if two('|', '|') {
            (TokenKind::ParOp, 2)
        } else {
            match c {
                '(' => (TokenKind::LParen, 1),
                ')' => (TokenKind::RParen, 1),
                '[' => (TokenKind::LBrack, 1),
                ']' => (TokenKind::RBrack, 1),
                ',' => (TokenKind::Comma, 1),
                '.' => (TokenKind::Dot, 1),
                '=' => (TokenKind::Equals, 1),
                '^' => (TokenKind::Caret, 1),
                d if d.is_ascii_digit() => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let text: String = chars[start..j].iter().collect();
                    let n = text.parse::<u32>().map_err(|_| ParseError::Syntax {
                        line,
                        col,
                        expected: "a number below 2^32".into(),
                        found: text.clone(),
                    })?;
                    (TokenKind::Nat(n), j - start)
                }
                a if a.is_ascii_alphabetic() || a == '_' => {
                    let start = i;
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                        j += 1;
                    }
                    let text: String = chars[start..j].iter().collect();
                    let kind = match text.as_str() {
                        "nu" => TokenKind::Nu,
                        "zeta" => TokenKind::Zeta,
                        _ => TokenKind::Ident(text),
                    };
                    (kind, j - start)
                }
                other => {
                    return Err(ParseError::UnexpectedChar { line, col, ch: other });
                }
            }
        };
        out.push(Token { kind, pos });
        i += len;
        col += len;
    }
    out.push(Token { kind: TokenKind::Eof, pos: Pos { line, col } });
    Ok(out)
}
