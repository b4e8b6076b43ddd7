use super::ast::Pos;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub start: Pos,
    pub end: Pos,
}

const KEYWORDS: [&str; 13] = [
    "func", "var", "if", "else", "while", "for", "return", "print", "true", "false", "int", "bool", "str",
];

// Longest match first.
const SYMBOLS: [&str; 27] = [
    "||", "&&", "==", "!=", "<=", ">=", "+=", "-=", "*=", "<", ">", "+", "-", "*", "/", "%", "!", "=", "(", ")", "{",
    "}", "[", "]", ",", ";", ":",
];

pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! advance {
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
        if c.is_whitespace() {
            advance!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
            continue;
        }
        let start = Pos { line, col };
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                word.push(chars[i]);
                advance!();
            }
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(kw) => Tok::Kw(kw),
                None => Tok::Ident(word),
            };
            tokens.push(Token {
                tok,
                start,
                end: Pos { line, col },
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                digits.push(chars[i]);
                advance!();
            }
            let value: i64 = digits
                .parse()
                .map_err(|_| SyntaxError::new(start, format!("integer literal `{digits}` out of range")))?;
            tokens.push(Token {
                tok: Tok::Int(value),
                start,
                end: Pos { line, col },
            });
            continue;
        }
        if c == '"' {
            advance!();
            let mut text = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(SyntaxError::new(start, "unterminated string literal")),
                    Some('"') => {
                        advance!();
                        break;
                    }
                    Some('\\') => {
                        let esc = chars.get(i + 1).copied();
                        let decoded = match esc {
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('"') => '"',
                            Some('\\') => '\\',
                            _ => return Err(SyntaxError::new(Pos { line, col }, "unknown escape sequence")),
                        };
                        text.push(decoded);
                        advance!();
                        advance!();
                    }
                    Some(&ch) => {
                        text.push(ch);
                        advance!();
                    }
                }
            }
            tokens.push(Token {
                tok: Tok::Str(text),
                start,
                end: Pos { line, col },
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(sym) => {
                for _ in 0..sym.len() {
                    advance!();
                }
                tokens.push(Token {
                    tok: Tok::Sym(sym),
                    start,
                    end: Pos { line, col },
                });
            }
            None => return Err(SyntaxError::new(start, format!("unexpected character `{c}`"))),
        }
    }
    let eof = Pos { line, col };
    tokens.push(Token {
        tok: Tok::Eof,
        start: eof,
        end: eof,
    });
    Ok(tokens)
}
