//! Text, JSON and LaTeX output for linear combinations and tensors.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use planarhopf_core::coactions::{Tagged, TaggedTree};
use planarhopf_core::deformed_positive::ExTree;
use planarhopf_core::tree_core::{Multiset, NonplanarForest, NonplanarTree};
use planarhopf_core::{EdgeDec, EdgeKind, Forest, LinComb, MultiIndex, Rational, Tree, VertexDec};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Latex,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Latex => "latex",
            Format::Text => "text",
        })
    }
}

/// One tensor factor in both renderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub text: String,
    pub latex: String,
}

pub type Terms = Vec<(Vec<Part>, Rational)>;

pub trait Atom {
    fn text(&self) -> String;
    fn latex(&self) -> String;

    fn part(&self) -> Part {
        Part { text: self.text(), latex: self.latex() }
    }
}

fn multi_latex(m: &MultiIndex) -> String {
    if m.dim() == 1 {
        m.0[0].to_string()
    } else {
        let xs: Vec<String> = m.0.iter().map(u32::to_string).collect();
        format!("({})", xs.join(","))
    }
}

fn vertex_latex(v: &VertexDec) -> String {
    match v {
        VertexDec::Blank => "\\bullet".into(),
        VertexDec::Label(s) => s.clone(),
        VertexDec::Multi(m) => multi_latex(m),
    }
}

fn edge_latex(e: &EdgeDec) -> Option<String> {
    match e {
        EdgeDec::None => None,
        EdgeDec::Plain(i) => Some(i.to_string()),
        EdgeDec::Typed(EdgeKind::Kernel(k), m) => Some(format!("\\mathcal{{I}}_{{{}}}^{{{}}}", k, multi_latex(m))),
        EdgeDec::Typed(EdgeKind::Noise(k), m) => Some(format!("\\Xi_{{{}}}^{{{}}}", k, multi_latex(m))),
    }
}

fn node(label: &str, edge: Option<&EdgeDec>, kids: &str) -> String {
    let el = edge
        .and_then(edge_latex)
        .map(|l| format!(", edge label={{node[midway,left,font=\\scriptsize]{{${l}$}}}}"))
        .unwrap_or_default();
    format!("[${label}${el}{kids}]")
}

fn tree_nodes(t: &Tree, edge: Option<&EdgeDec>) -> String {
    let kids: String = t.children.iter().map(|(e, c)| tree_nodes(c, Some(e))).collect();
    node(&vertex_latex(&t.dec), edge, &kids)
}

fn ex_nodes(t: &ExTree, edge: Option<&EdgeDec>) -> String {
    let mut label = multi_latex(&t.dec);
    if !num_traits::Zero::is_zero(&t.ext) {
        label = format!("{}^{{{}}}", label, rat_latex(&t.ext));
    }
    let kids: String = t.children.iter().map(|(e, c)| ex_nodes(c, Some(e))).collect();
    node(&label, edge, &kids)
}

fn forest_env(body: &str) -> String {
    format!("\\Forest{{{body}}}")
}

impl Atom for Tree {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        forest_env(&tree_nodes(self, None))
    }
}

impl Atom for Forest {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        if self.is_unit() {
            return "\\mathbf{1}".into();
        }
        self.0.iter().map(Atom::latex).collect::<Vec<_>>().join("\\,")
    }
}

impl Atom for ExTree {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        forest_env(&ex_nodes(self, None))
    }
}

impl Atom for NonplanarTree {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        self.tree().latex()
    }
}

impl Atom for NonplanarForest {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        self.as_forest().latex()
    }
}

impl Atom for Tagged {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        format!("({}, {})", self.forest.latex(), vertex_latex(&self.tag))
    }
}

impl Atom for TaggedTree {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        format!("({}, {})", self.tree.latex(), vertex_latex(&self.tag))
    }
}

impl<T: Atom + Ord + Clone + fmt::Display> Atom for Multiset<T> {
    fn text(&self) -> String {
        self.to_string()
    }
    fn latex(&self) -> String {
        if self.is_empty() {
            return "\\mathbf{1}".into();
        }
        self.items().iter().map(Atom::latex).collect::<Vec<_>>().join("\\cdot ")
    }
}

pub fn terms1<A: Atom + Ord + Clone>(x: &LinComb<A>) -> Terms {
    x.iter().map(|(a, c)| (vec![a.part()], c.clone())).collect()
}

pub fn terms2<A: Atom + Ord + Clone, B: Atom + Ord + Clone>(x: &LinComb<(A, B)>) -> Terms {
    x.iter().map(|((a, b), c)| (vec![a.part(), b.part()], c.clone())).collect()
}

pub fn terms3<A, B, C>(x: &LinComb<(A, B, C)>) -> Terms
where
    A: Atom + Ord + Clone,
    B: Atom + Ord + Clone,
    C: Atom + Ord + Clone,
{
    x.iter().map(|((a, b, cc), c)| (vec![a.part(), b.part(), cc.part()], c.clone())).collect()
}

pub fn rat_latex(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{}\\frac{{{}}}{{{}}}", sign, r.numer().abs(), r.denom())
    }
}

fn joined_text(parts: &[Part]) -> String {
    parts.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(" ⊗ ")
}

pub fn terms_json(t: &Terms) -> serde_json::Value {
    let list: Vec<serde_json::Value> = t
        .iter()
        .map(|(parts, c)| {
            json!({
                "coeff": c.to_string(),
                "basis": joined_text(parts),
                "factors": parts.iter().map(|p| p.text.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "terms": list })
}

pub fn terms_text(t: &Terms) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter().map(|(parts, c)| format!("{} * {}", c, joined_text(parts))).collect::<Vec<_>>().join("\n")
}

pub fn terms_latex(t: &Terms) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (parts, c)) in t.iter().enumerate() {
        let body = parts.iter().map(|p| p.latex.as_str()).collect::<Vec<_>>().join(" \\otimes ");
        let mag = c.abs();
        let coeff = if mag.is_one() { String::new() } else { format!("{} ", rat_latex(&mag)) };
        let sign = match (i, c.is_negative()) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        out.push_str(&format!("{sign}{coeff}{body}"));
    }
    out
}
