use std::collections::BTreeMap;

use num_traits::{One, Zero};
use planarhopf_core::coactions::{cointeraction_t0, rho_np, rho_s, rho_t, rho_t0, PiNorm};
use planarhopf_core::deformed_negative::{
    cointeraction_check_ex, cointeraction_check_trunc, delta_minus, delta_minus_nonroot, dinsert_lc, insert,
    star_minus_lc, NegMonomial,
};
use planarhopf_core::deformed_positive::{
    delta_plus, delta_plus_0, dgraft_v, down_root, gamma_g, rs_lc, rs_tree, star_plus, unit_tree, up_all,
};
use planarhopf_core::free_postlie::{
    antipode, b_minus, b_plus, bracket, ck_coproduct, concat, gl_product, go_graft, graft_tree, mkw_coproduct,
    omega_lc, shuffle,
};
use planarhopf_core::rough_model::{
    delta_minus_pb, delta_plus_pb_lc, phi, renormalise, ExpCharacter, Model, RenormCharacter,
};
use planarhopf_core::tree_core::{normalize_typed, parse_rational, NonplanarForest, Parser};
use planarhopf_core::{pair, regularity, Forest, LinComb, MultiIndex, Rational, Tree, VertexDec};

use crate::config::{parse_alphabet, Session};
use crate::expr::{self, Expr};
use crate::render::{rat_latex, terms1, terms2, terms_json, terms_latex, terms_text, Format, Terms};
use crate::{CliError, Result};

/// Result of an evaluation. Only `Lin` values can feed another call.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Lin(LinComb<Forest>),
    Terms(Terms),
    Scalar(Rational),
    Bool(bool),
}

impl Value {
    pub fn render(&self, format: Format) -> String {
        let owned;
        let terms = match self {
            Value::Lin(x) => {
                owned = terms1(x);
                &owned
            }
            Value::Terms(t) => t,
            Value::Scalar(r) => {
                return match format {
                    Format::Json => serde_json::Value::String(r.to_string()).to_string(),
                    Format::Latex => rat_latex(r),
                    Format::Text => r.to_string(),
                }
            }
            Value::Bool(b) => return b.to_string(),
        };
        match format {
            Format::Json => serde_json::to_string_pretty(&terms_json(terms)).expect("json"),
            Format::Latex => terms_latex(terms),
            Format::Text => terms_text(terms),
        }
    }
}

pub fn eval(src: &str, session: &Session) -> Result<Value> {
    eval_expr(&expr::parse(src)?, session)
}

pub fn eval_expr(e: &Expr, s: &Session) -> Result<Value> {
    match e {
        Expr::Atom { text, pos } => Ok(Value::Lin(atom_lincomb(text, *pos)?)),
        Expr::Flag { name, pos, .. } => {
            Err(CliError::Parse { pos: *pos, msg: format!("flag --{name} outside an argument list") })
        }
        Expr::Call { name, args, pos } => Call::new(name, args, *pos, s).run(),
    }
}

fn atom_lincomb(text: &str, pos: usize) -> Result<LinComb<Forest>> {
    let mut p = Parser::new(text);
    let x = p.lincomb().map_err(|e| shift(e, pos))?;
    if !p.at_end() {
        return Err(CliError::Parse { pos: pos + p.pos(), msg: "unexpected input".into() });
    }
    Ok(normalize_typed(&x))
}

fn shift(e: planarhopf_core::Error, base: usize) -> CliError {
    match e {
        planarhopf_core::Error::Parse { pos, msg } => CliError::Parse { pos: base + pos, msg },
        other => CliError::Core { context: "parse".into(), source: other },
    }
}

fn forests(x: &LinComb<Tree>) -> LinComb<Forest> {
    x.map_basis(|t| Forest::single(t.clone()))
}

struct Call<'a> {
    name: &'a str,
    pos: usize,
    positional: Vec<&'a Expr>,
    flags: BTreeMap<&'a str, &'a str>,
    s: &'a Session,
}

impl<'a> Call<'a> {
    fn new(name: &'a str, args: &'a [Expr], pos: usize, s: &'a Session) -> Self {
        let mut positional = Vec::new();
        let mut flags = BTreeMap::new();
        for a in args {
            match a {
                Expr::Flag { name, value, .. } => {
                    flags.insert(name.as_str(), value.as_str());
                }
                other => positional.push(other),
            }
        }
        Call { name, pos, positional, flags, s }
    }

    fn bad(&self, msg: impl Into<String>) -> CliError {
        CliError::BadArgs { func: self.name.to_string(), msg: msg.into() }
    }

    fn core<T>(&self, r: planarhopf_core::Result<T>) -> Result<T> {
        r.map_err(|source| CliError::Core { context: format!("{} at {}", self.name, self.pos), source })
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.positional.len() != n {
            return Err(self.bad(format!("expected {} argument(s), got {}", n, self.positional.len())));
        }
        Ok(())
    }

    fn lin(&self, i: usize) -> Result<LinComb<Forest>> {
        match eval_expr(self.positional[i], self.s)? {
            Value::Lin(x) => Ok(x),
            _ => Err(self.bad(format!("argument {} is not a linear combination", i + 1))),
        }
    }

    fn trees(&self, i: usize) -> Result<LinComb<Tree>> {
        let x = self.lin(i)?;
        let mut out = LinComb::zero();
        for (f, c) in x.iter() {
            match f.0.as_slice() {
                [t] => out.add_term(t.clone(), c.clone()),
                _ => return Err(self.bad(format!("argument {} has the non-tree term {}", i + 1, f))),
            }
        }
        Ok(out)
    }

    fn typed(&self, i: usize) -> Result<LinComb<Tree>> {
        let x = self.trees(i)?;
        self.core(rs_lc(&x, self.s.cfg.d))
    }

    fn monomials(&self, i: usize) -> Result<LinComb<NegMonomial>> {
        let mut out = LinComb::zero();
        for (f, c) in self.lin(i)?.iter() {
            let ts: Vec<Tree> = f.0.iter().map(|t| self.core(rs_tree(t, self.s.cfg.d))).collect::<Result<_>>()?;
            out.add_term(NegMonomial::from_vec(ts), c.clone());
        }
        Ok(out)
    }

    fn raw(&self, i: usize) -> Result<&'a str> {
        match self.positional[i] {
            Expr::Atom { text, .. } => Ok(text),
            _ => Err(self.bad(format!("argument {} must be a literal", i + 1))),
        }
    }

    fn rational(&self, i: usize) -> Result<Rational> {
        let t = self.raw(i)?;
        parse_rational(t).ok_or_else(|| self.bad(format!("'{}' is not a rational", t)))
    }

    fn index(&self, i: usize) -> Result<usize> {
        let t = self.raw(i)?;
        t.parse().map_err(|_| self.bad(format!("'{}' is not an index", t)))
    }

    fn cap(&self) -> Result<MultiIndex> {
        let k = match self.flags.get("cap") {
            Some(v) => v.parse().map_err(|_| self.bad(format!("--cap '{}' is not an integer", v)))?,
            None => self.s.cap,
        };
        Ok(MultiIndex(vec![k; self.s.cfg.d]))
    }

    fn norm(&self) -> Result<PiNorm> {
        match self.flags.get("pi") {
            Some(v) => v.parse().map_err(|e: String| self.bad(e)),
            None => Ok(self.s.norm),
        }
    }

    fn alphabet(&self) -> Vec<VertexDec> {
        self.flags.get("alphabet").map_or_else(|| self.s.alphabet.clone(), |a| parse_alphabet(a))
    }

    /// Tree → value table, from a JSON file or a linear combination of trees.
    fn table(&self, i: usize) -> Result<BTreeMap<Tree, Rational>> {
        let typed = |t: &Tree| self.core(rs_tree(t, self.s.cfg.d)).or_else(|_| Ok::<_, CliError>(t.clone()));
        if let Ok(path) = self.raw(i) {
            if path.ends_with(".json") {
                let src = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.to_string(), source })?;
                let m: BTreeMap<String, String> =
                    serde_json::from_str(&src).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
                let mut out = BTreeMap::new();
                for (k, v) in m {
                    let t = self.core(planarhopf_core::parse_tree(&k))?;
                    let r = parse_rational(&v).ok_or_else(|| self.bad(format!("'{}' is not a rational", v)))?;
                    out.insert(typed(&t)?, r);
                }
                return Ok(out);
            }
        }
        let mut out = BTreeMap::new();
        for (t, c) in self.trees(i)?.iter() {
            out.insert(typed(t)?, c.clone());
        }
        Ok(out)
    }

    fn model(&self) -> Result<Model> {
        let path = self.core(ExpCharacter::from_letters(&self.s.letters, self.s.cfg.truncation))?;
        let m = Model::new(path, self.s.cfg.clone());
        Ok(if self.s.ell.values.is_empty() { m } else { m.renormalised(self.s.ell.clone()) })
    }

    fn bilinear_trees(
        &self,
        f: impl Fn(&Tree, &Tree) -> planarhopf_core::Result<LinComb<Tree>>,
        typed: bool,
    ) -> Result<Value> {
        self.arity(2)?;
        let (a, b) = if typed { (self.typed(0)?, self.typed(1)?) } else { (self.trees(0)?, self.trees(1)?) };
        let mut out = LinComb::zero();
        for (x, c1) in a.iter() {
            for (y, c2) in b.iter() {
                out.add_scaled(&self.core(f(x, y))?, &(c1 * c2));
            }
        }
        Ok(Value::Lin(forests(&out)))
    }

    fn all_trees(&self, check: impl Fn(&Tree) -> planarhopf_core::Result<bool>) -> Result<Value> {
        self.arity(1)?;
        for t in self.trees(0)?.basis_iter() {
            if !self.core(check(t))? {
                return Ok(Value::Bool(false));
            }
        }
        Ok(Value::Bool(true))
    }

    fn run(&self) -> Result<Value> {
        let s = self.s;
        let cfg = &s.cfg;
        match self.name {
            "graft" => self.bilinear_trees(graft_tree, false),
            "gograft" | "gl" | "shuffle" => {
                self.arity(2)?;
                let (x, y) = (self.lin(0)?, self.lin(1)?);
                let out = match self.name {
                    "gograft" => go_graft(&x, &y),
                    "gl" => gl_product(&x, &y),
                    _ => shuffle(&x, &y),
                };
                Ok(Value::Lin(self.core(out)?))
            }
            "concat" | "bracket" => {
                self.arity(2)?;
                let (x, y) = (self.lin(0)?, self.lin(1)?);
                Ok(Value::Lin(if self.name == "concat" { concat(&x, &y) } else { bracket(&x, &y) }))
            }
            "mkw" => {
                self.arity(1)?;
                Ok(Value::Terms(terms2(&mkw_coproduct(&self.lin(0)?))))
            }
            "bplus" => {
                self.arity(1)?;
                Ok(Value::Lin(forests(&self.lin(0)?.map_basis(b_plus))))
            }
            "bminus" => {
                self.arity(1)?;
                let mut out = LinComb::zero();
                for (t, c) in self.trees(0)?.iter() {
                    out.add_term(self.core(b_minus(t))?, c.clone());
                }
                Ok(Value::Lin(out))
            }
            "antipode" => {
                self.arity(1)?;
                Ok(Value::Lin(antipode(&self.lin(0)?)))
            }
            "omega" => {
                self.arity(1)?;
                Ok(Value::Lin(omega_lc(&self.lin(0)?.map_basis(NonplanarForest::from_forest))))
            }
            "ck" => {
                self.arity(1)?;
                let mut out = LinComb::zero();
                for (f, c) in self.lin(0)?.iter() {
                    out.add_scaled(&ck_coproduct(&NonplanarForest::from_forest(f)), c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "pair" => {
                self.arity(2)?;
                Ok(Value::Scalar(self.core(pair(&self.lin(0)?, &self.lin(1)?))?))
            }
            "reg" => {
                self.arity(1)?;
                let x = self.lin(0)?;
                match x.basis_iter().collect::<Vec<_>>().as_slice() {
                    [f] => Ok(Value::Scalar(self.core(regularity(f, cfg))?)),
                    _ => Err(self.bad("expects a single basis element")),
                }
            }
            "rhoS" | "rhoT" => {
                self.arity(1)?;
                let (alpha, norm) = (self.alphabet(), self.norm()?);
                let mut out = LinComb::zero();
                for (w, c) in self.lin(0)?.iter() {
                    let r = if self.name == "rhoS" { rho_s(w, &alpha, norm) } else { rho_t(w, &alpha, norm) };
                    out.add_scaled(&r, c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "rhoT0" => {
                self.arity(1)?;
                let norm = self.norm()?;
                let mut out = LinComb::zero();
                for (w, c) in self.lin(0)?.iter() {
                    out.add_scaled(&rho_t0(w, norm), c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "rhoTnp" => {
                self.arity(1)?;
                let alpha = self.alphabet();
                let mut out = LinComb::zero();
                for (w, c) in self.lin(0)?.iter() {
                    out.add_scaled(&rho_np(&NonplanarForest::from_forest(w), &alpha, false), c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "cointeract" => {
                self.arity(1)?;
                let norm = self.norm()?;
                Ok(Value::Bool(self.lin(0)?.basis_iter().all(|w| cointeraction_t0(w, norm))))
            }
            "phi" => {
                self.arity(1)?;
                Ok(Value::Lin(self.core(phi(&self.lin(0)?))?))
            }
            "deltaplusPB" => {
                self.arity(1)?;
                Ok(Value::Terms(terms2(&delta_plus_pb_lc(&self.trees(0)?))))
            }
            "deltaminusPB" => {
                self.arity(1)?;
                let mut out = LinComb::zero();
                for (t, c) in self.trees(0)?.iter() {
                    out.add_scaled(&self.core(delta_minus_pb(t, cfg))?, c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "modelpi" => {
                self.arity(3)?;
                let (a, b, x) = (self.rational(0)?, self.rational(1)?, self.trees(2)?);
                Ok(Value::Scalar(self.core(self.model()?.pi_lc(&a, &b, &x))?))
            }
            "modelgamma" => {
                self.arity(3)?;
                let (a, b, x) = (self.rational(0)?, self.rational(1)?, self.trees(2)?);
                Ok(Value::Lin(forests(&self.core(self.model()?.gamma(&a, &b, &x))?)))
            }
            "renorm" => {
                self.arity(2)?;
                let ell = RenormCharacter { values: self.table(0)? };
                Ok(Value::Lin(forests(&self.core(renormalise(&ell, &self.trees(1)?, cfg))?)))
            }
            "dgraft" => {
                self.arity(2)?;
                Ok(Value::Lin(forests(&dgraft_v(&self.typed(0)?, &self.typed(1)?))))
            }
            "starplus" => {
                self.arity(2)?;
                Ok(Value::Lin(forests(&self.core(star_plus(&self.typed(0)?, &self.typed(1)?))?)))
            }
            "deltaplus" | "deltaplus0" => {
                self.arity(1)?;
                let cap = self.cap()?;
                let mut out = LinComb::zero();
                for (t, c) in self.typed(0)?.iter() {
                    let d = if self.name == "deltaplus" { delta_plus(t, cfg) } else { delta_plus_0(t, &cap) };
                    out.add_scaled(&self.core(d)?, c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "up" | "down" => {
                self.arity(2)?;
                let i = self.index(1)?;
                if i >= cfg.d {
                    return Err(self.bad(format!("direction {} out of range for d = {}", i, cfg.d)));
                }
                let m = MultiIndex::unit(cfg.d, i);
                let x = self.typed(0)?;
                let out = if self.name == "up" { x.flat_map(|t| up_all(t, &m)) } else { down_root(&x, &m) };
                Ok(Value::Lin(forests(&out)))
            }
            "gamma" => {
                self.arity(2)?;
                let mut g = self.table(0)?;
                g.entry(unit_tree(cfg.d)).or_insert_with(Rational::one);
                let gf = |t: &Tree| g.get(t).cloned().unwrap_or_else(Rational::zero);
                let mut out = LinComb::zero();
                for (t, c) in self.typed(1)?.iter() {
                    out.add_scaled(&self.core(gamma_g(&gf, t, cfg))?, c);
                }
                Ok(Value::Lin(forests(&out)))
            }
            "insert" => self.bilinear_trees(|a, b| Ok(insert(a, b)), true),
            "dinsert" => {
                self.arity(2)?;
                Ok(Value::Lin(forests(&dinsert_lc(&self.typed(0)?, &self.typed(1)?))))
            }
            "starminus" => {
                self.arity(2)?;
                Ok(Value::Terms(terms1(&star_minus_lc(&self.monomials(0)?, &self.monomials(1)?))))
            }
            "deltaminus" | "deltaminusnr" => {
                self.arity(1)?;
                let mut out = LinComb::zero();
                for (t, c) in self.typed(0)?.iter() {
                    let d = if self.name == "deltaminus" { delta_minus(t, cfg) } else { delta_minus_nonroot(t, cfg) };
                    out.add_scaled(&self.core(d)?, c);
                }
                Ok(Value::Terms(terms2(&out)))
            }
            "cointeract4" => {
                let cap = self.cap()?;
                self.all_trees(|t| cointeraction_check_trunc(t, &cap, cfg))
            }
            "cointeractex" => self.all_trees(|t| cointeraction_check_ex(t, cfg)),
            other => Err(CliError::UnknownFunction { name: other.to_string(), pos: self.pos }),
        }
    }
}
