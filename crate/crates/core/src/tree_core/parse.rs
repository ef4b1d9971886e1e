use num_bigint::BigInt;
use num_traits::One;

use super::error::{Error, Result};
use super::lincomb::LinComb;
use super::rational::Rational;
use super::tree::{EdgeDec, EdgeKind, Forest, MultiIndex, Tree, VertexDec};

/// Recursive-descent reader for the tree grammar.
pub struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '•' || c == '\''
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn set_pos(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c)))
        }
    }

    pub fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.bump();
        }
        (self.pos > start).then(|| self.src[start..self.pos].to_string())
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    pub fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let d = self.digits().ok_or_else(|| self.error("expected integer"))?;
        d.parse().map_err(|_| self.error("integer out of range"))
    }

    /// `int` or `int/int`.
    pub fn rational(&mut self) -> Option<Rational> {
        self.skip_ws();
        let start = self.pos;
        let n = self.digits()?;
        let save = self.pos;
        let mut d = "1";
        if self.peek() == Some('/') {
            self.bump();
            match self.digits() {
                Some(x) => d = x,
                None => self.pos = save,
            }
        }
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d == BigInt::from(0) {
            self.pos = start;
            return None;
        }
        Some(Rational::new(n, d))
    }

    fn multi_index(&mut self) -> Result<MultiIndex> {
        self.expect('(')?;
        let mut v = vec![self.uint()?];
        while self.eat(',') {
            v.push(self.uint()?);
        }
        self.expect(')')?;
        Ok(MultiIndex(v))
    }

    fn vertex_dec(&mut self) -> Result<VertexDec> {
        self.skip_ws();
        match self.peek() {
            Some('(') => Ok(VertexDec::Multi(self.multi_index()?)),
            _ => match self.ident() {
                Some(s) if s == "•" => Ok(VertexDec::Blank),
                Some(s) => Ok(VertexDec::Label(s)),
                None => Err(self.error("expected vertex decoration")),
            },
        }
    }

    fn try_edge_dec(&mut self) -> Result<Option<EdgeDec>> {
        self.skip_ws();
        let start = self.pos;
        let rest = self.rest();
        if rest.starts_with('K') || rest.starts_with('X') {
            let kind = self.bump().unwrap();
            if let Some(id) = self.digits() {
                let id: u32 = id.parse().map_err(|_| self.error("kind id out of range"))?;
                if self.peek() == Some('#') {
                    self.bump();
                    self.skip_ws();
                    let m = if self.peek() == Some('(') { self.multi_index()? } else { MultiIndex(vec![self.uint()?]) };
                    self.expect(':')?;
                    let k = if kind == 'K' { EdgeKind::Kernel(id) } else { EdgeKind::Noise(id) };
                    return Ok(Some(EdgeDec::Typed(k, m)));
                }
            }
            self.pos = start;
            return Ok(None);
        }
        if let Some(d) = self.digits() {
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some(':') {
                self.bump();
                let n: u32 = d.parse().map_err(|_| self.error("edge label out of range"))?;
                return Ok(Some(if n == 0 { EdgeDec::None } else { EdgeDec::Plain(n) }));
            }
            let _ = save;
        }
        self.pos = start;
        Ok(None)
    }

    pub fn tree(&mut self) -> Result<Tree> {
        let dec = self.vertex_dec()?;
        let mut children = Vec::new();
        self.skip_ws();
        if self.peek() == Some('[') {
            self.bump();
            loop {
                let e = self.try_edge_dec()?.unwrap_or(EdgeDec::None);
                children.push((e, self.tree()?));
                if self.eat(',') {
                    continue;
                }
                self.expect(']')?;
                break;
            }
        }
        Ok(Tree { dec, children })
    }

    /// A tree, `{}` or `{t1 t2 …}`.
    pub fn forest(&mut self) -> Result<Forest> {
        self.skip_ws();
        if self.peek() == Some('{') {
            self.bump();
            let mut trees = Vec::new();
            loop {
                self.skip_ws();
                if self.peek() == Some('}') {
                    self.bump();
                    return Ok(Forest(trees));
                }
                if self.peek().is_none() {
                    return Err(self.error("unterminated forest"));
                }
                trees.push(self.tree()?);
            }
        }
        Ok(Forest::single(self.tree()?))
    }

    /// Optional `rat '*'` prefix.
    pub fn coefficient(&mut self) -> Rational {
        let start = self.pos;
        if let Some(r) = self.rational() {
            if self.eat('*') {
                return r;
            }
        }
        self.pos = start;
        Rational::one()
    }

    pub fn lincomb(&mut self) -> Result<LinComb<Forest>> {
        let mut out = LinComb::zero();
        let mut sign = Rational::one();
        if self.eat('-') {
            sign = -sign;
        } else {
            self.eat('+');
        }
        loop {
            let c = self.coefficient();
            let f = self.forest()?;
            out.add_term(f, sign * c);
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        Ok(out)
    }
}

fn has_typed(t: &Tree) -> bool {
    matches!(t.dec, VertexDec::Multi(_)) || t.children.iter().any(|(e, c)| matches!(e, EdgeDec::Typed(..)) || has_typed(c))
}

/// Reads integer vertex labels as one-dimensional multi-indices.
pub fn labels_to_multi(t: &Tree) -> Tree {
    t.map_vertices(&|v| match v {
        VertexDec::Label(s) => match s.parse::<u32>() {
            Ok(k) => VertexDec::Multi(MultiIndex(vec![k])),
            Err(_) => v.clone(),
        },
        _ => v.clone(),
    })
}

/// Integer labels become one-dimensional multi-indices when any term is typed.
pub fn normalize_typed(x: &LinComb<Forest>) -> LinComb<Forest> {
    if x.basis_iter().any(|f| f.0.iter().any(has_typed)) {
        x.map_basis(|f| Forest(f.0.iter().map(labels_to_multi).collect()))
    } else {
        x.clone()
    }
}

pub fn parse_tree(s: &str) -> Result<Tree> {
    let mut p = Parser::new(s);
    let t = p.tree()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(if has_typed(&t) { labels_to_multi(&t) } else { t })
}

pub fn parse_forest(s: &str) -> Result<Forest> {
    let mut p = Parser::new(s);
    let f = p.forest()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(if f.0.iter().any(has_typed) { Forest(f.0.iter().map(labels_to_multi).collect()) } else { f })
}

pub fn parse_lincomb(s: &str) -> Result<LinComb<Forest>> {
    let mut p = Parser::new(s);
    let x = p.lincomb()?;
    if !p.at_end() {
        return Err(p.error("trailing input"));
    }
    Ok(normalize_typed(&x))
}
