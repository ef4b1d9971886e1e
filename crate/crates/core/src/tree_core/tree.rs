use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::error::{Error, Result};
use super::rational::binomial;

/// Element of ℕ^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zeros(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = vec![0; d];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn scalar(k: u32) -> Self {
        MultiIndex(vec![k])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MultiIndex)
    }

    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise binomial coefficient.
    pub fn binom(&self, k: &MultiIndex) -> BigInt {
        self.0.iter().zip(&k.0).fold(BigInt::one(), |acc, (&n, &k)| acc * binomial(n as u64, k as u64))
    }

    /// All ℓ with 0 ≤ ℓ ≤ self componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.dim()))];
        for &n in &self.0 {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=n).map(move |k| {
                        let mut v = m.0.clone();
                        v.push(k);
                        MultiIndex(v)
                    })
                })
                .collect();
        }
        out
    }

    /// All ℓ with |ℓ| ≤ total, in dimension d.
    pub fn with_total_at_most(d: usize, total: u32) -> Vec<MultiIndex> {
        MultiIndex(vec![total; d]).below().into_iter().filter(|m| m.total() <= total as u64).collect()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VertexDec {
    Blank,
    Label(String),
    Multi(MultiIndex),
}

impl VertexDec {
    pub fn label(s: &str) -> Self {
        VertexDec::Label(s.to_string())
    }

    pub fn multi(&self) -> Option<&MultiIndex> {
        match self {
            VertexDec::Multi(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, VertexDec::Blank)
    }
}

impl fmt::Display for VertexDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexDec::Blank => write!(f, "•"),
            VertexDec::Label(s) => write!(f, "{}", s),
            VertexDec::Multi(m) if m.dim() == 1 => write!(f, "{}", m.0[0]),
            VertexDec::Multi(m) => write!(f, "{}", m),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum EdgeKind {
    Kernel(u32),
    Noise(u32),
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeKind::Kernel(i) => write!(f, "K{}", i),
            EdgeKind::Noise(i) => write!(f, "X{}", i),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeDec {
    None,
    Plain(u32),
    Typed(EdgeKind, MultiIndex),
}

impl EdgeDec {
    pub fn is_noise(&self) -> bool {
        matches!(self, EdgeDec::Typed(EdgeKind::Noise(_), _))
    }

    pub fn is_undecorated(&self) -> bool {
        matches!(self, EdgeDec::None)
    }

    pub fn index(&self) -> Option<&MultiIndex> {
        match self {
            EdgeDec::Typed(_, m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeDec::None => Ok(()),
            EdgeDec::Plain(i) => write!(f, "{}", i),
            EdgeDec::Typed(k, m) => write!(f, "{}#{}", k, m),
        }
    }
}

impl fmt::Debug for EdgeDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Planar rooted tree; child order is the planar embedding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    pub dec: VertexDec,
    pub children: Vec<(EdgeDec, Tree)>,
}

pub type Path = Vec<usize>;

impl Tree {
    pub fn leaf(dec: VertexDec) -> Tree {
        Tree { dec, children: Vec::new() }
    }

    pub fn blank() -> Tree {
        Tree::leaf(VertexDec::Blank)
    }

    pub fn label(s: &str) -> Tree {
        Tree::leaf(VertexDec::label(s))
    }

    pub fn multi(m: MultiIndex) -> Tree {
        Tree::leaf(VertexDec::Multi(m))
    }

    pub fn new(dec: VertexDec, children: Vec<(EdgeDec, Tree)>) -> Tree {
        Tree { dec, children }
    }

    /// Tree with undecorated edges to the given children.
    pub fn node(dec: VertexDec, children: Vec<Tree>) -> Tree {
        Tree { dec, children: children.into_iter().map(|c| (EdgeDec::None, c)).collect() }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Vertex paths in preorder.
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        fn walk(t: &Tree, cur: &mut Path, out: &mut Vec<Path>) {
            out.push(cur.clone());
            for (i, (_, c)) in t.children.iter().enumerate() {
                cur.push(i);
                walk(c, cur, out);
                cur.pop();
            }
        }
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at(&self, path: &[usize]) -> &Tree {
        path.iter().fold(self, |t, &i| &t.children[i].1)
    }

    pub fn at_mut(&mut self, path: &[usize]) -> &mut Tree {
        path.iter().fold(self, |t, &i| &mut t.children[i].1)
    }

    /// Edge entering the vertex at `path`, if not the root.
    pub fn edge_to(&self, path: &[usize]) -> Option<&EdgeDec> {
        let (last, parent) = path.split_last()?;
        Some(&self.at(parent).children[*last].0)
    }

    pub fn vertex_decs(&self) -> Vec<&VertexDec> {
        let mut out = vec![&self.dec];
        for (_, c) in &self.children {
            out.extend(c.vertex_decs());
        }
        out
    }

    pub fn edge_decs(&self) -> Vec<&EdgeDec> {
        let mut out = Vec::new();
        for (e, c) in &self.children {
            out.push(e);
            out.extend(c.edge_decs());
        }
        out
    }

    pub fn map_vertices(&self, f: &impl Fn(&VertexDec) -> VertexDec) -> Tree {
        Tree {
            dec: f(&self.dec),
            children: self.children.iter().map(|(e, c)| (e.clone(), c.map_vertices(f))).collect(),
        }
    }

    pub fn map_edges(&self, f: &impl Fn(&EdgeDec) -> EdgeDec) -> Tree {
        Tree {
            dec: self.dec.clone(),
            children: self.children.iter().map(|(e, c)| (f(e), c.map_edges(f))).collect(),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dec)?;
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, (e, c)) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                if !e.is_undecorated() {
                    write!(f, "{}:", e)?;
                }
                write!(f, "{}", c)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Ordered forest; the empty forest is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Forest(pub Vec<Tree>);

impl Forest {
    pub fn unit() -> Forest {
        Forest(Vec::new())
    }

    pub fn single(t: Tree) -> Forest {
        Forest(vec![t])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Tree::size).sum()
    }

    pub fn concat(&self, other: &Forest) -> Forest {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Forest(v)
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Forest {
        Forest::single(t)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.len() {
            0 => write!(f, "{{}}"),
            1 => write!(f, "{}", self.0[0]),
            _ => {
                write!(f, "{{")?;
                for (i, t) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", t)?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Commutative monomial: a sorted multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<T: Ord>(Vec<T>);

impl<T: Ord + Clone> Multiset<T> {
    pub fn unit() -> Self {
        Multiset(Vec::new())
    }

    pub fn from_vec(mut v: Vec<T>) -> Self {
        v.sort();
        Multiset(v)
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Multiset::from_vec(v)
    }

    pub fn items(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<T: Ord + fmt::Display> fmt::Display for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

impl<T: Ord + fmt::Display> fmt::Debug for Multiset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Non-planar tree stored in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonplanarTree(Tree);

fn np_key(e: &EdgeDec, t: &Tree) -> (usize, String) {
    let s = if e.is_undecorated() { t.to_string() } else { format!("{}:{}", e, t) };
    (s.len(), s)
}

fn canonical_np(t: &Tree) -> Tree {
    let mut children: Vec<(EdgeDec, Tree)> = t.children.iter().map(|(e, c)| (e.clone(), canonical_np(c))).collect();
    children.sort_by_cached_key(|(e, c)| np_key(e, c));
    Tree { dec: t.dec.clone(), children }
}

impl NonplanarTree {
    pub fn new(t: &Tree) -> Self {
        NonplanarTree(canonical_np(t))
    }

    pub fn tree(&self) -> &Tree {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }
}

impl fmt::Display for NonplanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for NonplanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Non-planar forest: canonically sorted multiset of canonical trees.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NonplanarForest(Vec<NonplanarTree>);

impl NonplanarForest {
    pub fn unit() -> Self {
        NonplanarForest(Vec::new())
    }

    pub fn new(trees: Vec<NonplanarTree>) -> Self {
        let mut trees = trees;
        trees.sort_by_cached_key(|t| np_key(&EdgeDec::None, &t.0));
        NonplanarForest(trees)
    }

    pub fn from_forest(f: &Forest) -> Self {
        NonplanarForest::new(f.0.iter().map(NonplanarTree::new).collect())
    }

    pub fn trees(&self) -> &[NonplanarTree] {
        &self.0
    }

    pub fn product(&self, other: &Self) -> Self {
        NonplanarForest::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn as_forest(&self) -> Forest {
        Forest(self.0.iter().map(|t| t.0.clone()).collect())
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(NonplanarTree::size).sum()
    }
}

impl fmt::Display for NonplanarForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_forest(), f)
    }
}

impl fmt::Debug for NonplanarForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Decoration mode of an expression.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Labelled,
    Plain,
    Typed,
}

fn merge_mode(a: Option<Mode>, b: Option<Mode>) -> Result<Option<Mode>> {
    match (a, b) {
        (None, m) | (m, None) => Ok(m),
        (Some(x), Some(y)) if x == y => Ok(Some(x)),
        (Some(x), Some(y)) => Err(Error::ModeMismatch(format!("{:?} vs {:?}", x, y))),
    }
}

/// Mode of a tree; `None` when every vertex is blank and every edge undecorated.
pub fn tree_mode(t: &Tree) -> Result<Option<Mode>> {
    let mut m = match &t.dec {
        VertexDec::Blank => None,
        VertexDec::Label(_) => Some(Mode::Labelled),
        VertexDec::Multi(_) => Some(Mode::Typed),
    };
    for (e, c) in &t.children {
        let em = match e {
            EdgeDec::None => None,
            EdgeDec::Plain(_) => Some(Mode::Plain),
            EdgeDec::Typed(..) => Some(Mode::Typed),
        };
        m = merge_mode(m, em)?;
        m = merge_mode(m, tree_mode(c)?)?;
    }
    Ok(m)
}

pub fn forest_mode(f: &Forest) -> Result<Option<Mode>> {
    f.0.iter().try_fold(None, |m, t| merge_mode(m, tree_mode(t)?))
}

pub fn same_mode(a: Option<Mode>, b: Option<Mode>) -> Result<Option<Mode>> {
    merge_mode(a, b)
}

/// Checks the noise constraints of typed trees: at most one outgoing noise edge per vertex, noise targets are leaves.
pub fn validate_typed(t: &Tree) -> Result<()> {
    let noise = t.children.iter().filter(|(e, _)| e.is_noise()).count();
    if noise > 1 {
        return Err(Error::InvalidTree(format!("{} has {} outgoing noise edges at one vertex", t, noise)));
    }
    for (e, c) in &t.children {
        if e.is_noise() && !c.is_leaf() {
            return Err(Error::InvalidTree(format!("noise edge into non-leaf {}", c)));
        }
        validate_typed(c)?;
    }
    Ok(())
}

/// Canonical form: planar trees are returned unchanged after validation.
pub fn canonicalize(t: &Tree) -> Result<Tree> {
    if tree_mode(t)? == Some(Mode::Typed) {
        validate_typed(t)?;
    }
    Ok(t.clone())
}

pub fn canonicalize_np(t: &Tree) -> Result<NonplanarTree> {
    if tree_mode(t)? == Some(Mode::Typed) {
        validate_typed(t)?;
    }
    Ok(NonplanarTree::new(t))
}
