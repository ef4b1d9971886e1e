//! Expression syntax: a function call `name(arg, …)`, a flag `--name value`
//! inside an argument list, or an atom (tree, forest, linear combination,
//! number or file path) that the called function interprets.

use crate::{CliError, Result};

pub const FUNCTIONS: &[&str] = &[
    "graft", "gograft", "gl", "shuffle", "concat", "bracket", "mkw", "bplus", "bminus", "antipode", "omega", "ck",
    "pair", "reg", "rhoS", "rhoT", "rhoT0", "rhoTnp", "cointeract", "phi", "deltaplusPB", "deltaminusPB", "modelpi",
    "modelgamma", "renorm", "dgraft", "starplus", "deltaplus", "deltaplus0", "up", "down", "gamma", "insert",
    "dinsert", "starminus", "deltaminus", "deltaminusnr", "cointeract4", "cointeractex",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Call { name: String, args: Vec<Expr>, pos: usize },
    Flag { name: String, value: String, pos: usize },
    /// Raw text starting at byte `pos` of the full expression.
    Atom { text: String, pos: usize },
}

impl Expr {
    pub fn pos(&self) -> usize {
        match self {
            Expr::Call { pos, .. } | Expr::Flag { pos, .. } | Expr::Atom { pos, .. } => *pos,
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn parse(src: &str) -> Result<Expr> {
    parse_at(src, 0)
}

fn parse_at(src: &str, base: usize) -> Result<Expr> {
    let lead = src.len() - src.trim_start().len();
    let s = src.trim();
    let pos = base + lead;
    if s.is_empty() {
        return Err(CliError::Parse { pos, msg: "empty expression".into() });
    }
    if let Some(rest) = s.strip_prefix("--") {
        let (name, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        return Ok(Expr::Flag { name: name.to_string(), value: value.trim().to_string(), pos });
    }
    let name_len = s.find(|c: char| !is_ident_char(c)).unwrap_or(s.len());
    let after = s[name_len..].trim_start();
    if name_len > 0 && after.starts_with('(') && s.as_bytes()[0].is_ascii_alphabetic() {
        let name = &s[..name_len];
        if !FUNCTIONS.contains(&name) {
            return Err(CliError::UnknownFunction { name: name.to_string(), pos });
        }
        let open = s.len() - after.len();
        let close = matching(s, open).ok_or(CliError::Parse { pos: pos + open, msg: "unbalanced '('".into() })?;
        if close != s.len() - 1 {
            return Err(CliError::Parse { pos: pos + close + 1, msg: "unexpected input after ')'".into() });
        }
        let inner = &s[open + 1..close];
        let mut args = Vec::new();
        if !inner.trim().is_empty() {
            for (off, part) in split_top(inner) {
                args.push(parse_at(part, pos + open + 1 + off)?);
            }
        }
        return Ok(Expr::Call { name: name.to_string(), args, pos });
    }
    Ok(Expr::Atom { text: s.to_string(), pos })
}

fn matching(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices().skip_while(|(i, _)| *i < open) {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth == 0 {
                    return (c == ')').then_some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Splits at commas outside brackets, keeping byte offsets.
fn split_top(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}
