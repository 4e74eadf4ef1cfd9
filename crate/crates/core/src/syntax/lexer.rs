use super::ast::Span;
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Dot,
    Comma,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Lt,
    Gt,
    Minus,
    Tilde,
    Bar,
    Amp,
    Arrow,
    Question,
    Semi,
    Plus,
    Star,
    /// `U{`, opening a program-indexed until.
    UBrace,
    RBrace,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Question => "`?`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::UBrace => "`U{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "action",
    "fluent",
    "inertial",
    "test",
    "law",
    "caused",
    "initially",
    "impossible",
    "constraint",
    "if",
    "not",
    "next",
    "true",
    "false",
    "X",
    "F",
    "G",
    "U",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Splits source text into tokens. Identifiers immediately followed by `(`
/// absorb the parenthesised argument list, so `deliver(a)` is one name.
pub fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut name = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                name.push(chars[i]);
                bump!();
            }
            if name == "U" && i < chars.len() && chars[i] == '{' {
                bump!();
                out.push((Tok::UBrace, span));
                continue;
            }
            if !is_keyword(&name) && i < chars.len() && chars[i] == '(' {
                let mut depth = 0usize;
                loop {
                    if i >= chars.len() {
                        return Err(SyntaxError::Syntax {
                            span,
                            expected: vec!["`)`".into()],
                            found: "end of input".into(),
                        });
                    }
                    let ch = chars[i];
                    match ch {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        c if c.is_ascii_alphanumeric() || c == '_' || c == ',' => {}
                        c if c.is_whitespace() => {
                            bump!();
                            continue;
                        }
                        other => {
                            return Err(SyntaxError::Syntax {
                                span: Span { line, col },
                                expected: vec!["argument".into()],
                                found: format!("`{other}`"),
                            })
                        }
                    }
                    name.push(ch);
                    bump!();
                    if depth == 0 {
                        break;
                    }
                }
            }
            out.push((Tok::Ident(name), span));
            continue;
        }
        let tok = match c {
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '~' => Tok::Tilde,
            '|' => Tok::Bar,
            '&' => Tok::Amp,
            '?' => Tok::Question,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '}' => Tok::RBrace,
            '-' => {
                if i + 1 < chars.len() && chars[i + 1] == '>' {
                    bump!();
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            other => {
                return Err(SyntaxError::Syntax { span, expected: vec!["token".into()], found: format!("`{other}`") })
            }
        };
        bump!();
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}
