use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Sym(char),
    Arrow,
    Newline,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[char] = &['{', '}', '(', ')', '[', ']', ',', ';', '=', ':'];

/// Splits text into identifiers, punctuation and line breaks. `#` starts
/// a comment. Identifiers are maximal runs of anything else, cut before `->`.
pub fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |tok| Token {
                tok,
                line: li + 1,
                col,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(at(Tok::Arrow));
                i += 2;
            } else if SYMBOLS.contains(&c) {
                out.push(at(Tok::Sym(c)));
                i += 1;
            } else if c.is_control() {
                return Err(Error::parse(li + 1, col, format!("unexpected character {c:?}")));
            } else {
                let start = i;
                while i < chars.len() {
                    let d = chars[i];
                    if d.is_whitespace() || SYMBOLS.contains(&d) || d == '#' {
                        break;
                    }
                    if d == '-' && chars.get(i + 1) == Some(&'>') {
                        break;
                    }
                    i += 1;
                }
                out.push(at(Tok::Ident(chars[start..i].iter().collect())));
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line: li + 1,
            col: chars.len() + 1,
        });
    }
    Ok(out)
}
