//! Deformed grafting on typed planar trees, the post-Lie algebra of planted
//! trees and X^i, the deformed Grossman–Larson action ∗₊ and its dual Δ⁺.
//!
//! Trees here carry `Multi` vertex decorations and `Typed` edges. A noise
//! vertex is the target of a noise edge; it never receives grafts or
//! decoration. Coproduct weights are the Kronecker duals of the products.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::free_postlie::shuffle_many;
use crate::tree_core::{
    to_rational, validate_typed, EdgeDec, EdgeKind, Error, LinComb, MultiIndex, Path, Rational, RegularityConfig, Result,
    TensorSum, Tree, VertexDec,
};

fn find_dim(t: &Tree) -> Option<usize> {
    if let VertexDec::Multi(m) = &t.dec {
        return Some(m.dim());
    }
    t.children.iter().find_map(|(e, c)| e.index().map(|m| m.dim()).or_else(|| find_dim(c)))
}

/// Typed form of a tree: blank vertices become zero multi-indices of the
/// tree's own dimension, or `d` when the tree carries none.
pub fn rs_tree(t: &Tree, d: usize) -> Result<Tree> {
    fn go(t: &Tree, d: usize) -> Result<Tree> {
        let dec = match &t.dec {
            VertexDec::Blank => MultiIndex::zeros(d),
            VertexDec::Multi(m) if m.dim() == d => m.clone(),
            VertexDec::Label(s) => match s.parse::<u32>() {
                Ok(k) if d == 1 => MultiIndex(vec![k]),
                _ => return Err(Error::UnknownDecoration(format!("vertex {}", s))),
            },
            other => return Err(Error::ModeMismatch(format!("vertex {} in dimension {}", other, d))),
        };
        let mut children = Vec::with_capacity(t.children.len());
        for (e, c) in &t.children {
            match e {
                EdgeDec::Typed(_, m) if m.dim() == d => {}
                _ => return Err(Error::ModeMismatch(format!("edge '{}' in a typed tree", e))),
            }
            children.push((e.clone(), go(c, d)?));
        }
        Ok(Tree { dec: VertexDec::Multi(dec), children })
    }
    let out = go(t, find_dim(t).unwrap_or(d))?;
    validate_typed(&out)?;
    Ok(out)
}

pub fn rs_lc(x: &LinComb<Tree>, d: usize) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (t, c) in x.iter() {
        out.add_term(rs_tree(t, d)?, c.clone());
    }
    Ok(out)
}

pub(crate) fn dec(t: &Tree) -> &MultiIndex {
    t.dec.multi().expect("typed vertex")
}

pub(crate) fn edge_index(e: &EdgeDec) -> MultiIndex {
    e.index().cloned().expect("typed edge")
}

pub(crate) fn shift_edge(e: &EdgeDec, up: &MultiIndex, down: &MultiIndex) -> Option<EdgeDec> {
    match e {
        EdgeDec::Typed(k, m) => Some(EdgeDec::Typed(*k, m.add(up).checked_sub(down)?)),
        _ => None,
    }
}

pub(crate) fn msum(parts: &[MultiIndex], d: usize) -> MultiIndex {
    parts.iter().fold(MultiIndex::zeros(d), |a, b| a.add(b))
}

/// n! / (ℓ₁!⋯ℓ_k!(n−Σℓ)!) componentwise; zero when Σℓ exceeds n.
pub fn multinomial(n: &MultiIndex, parts: &[MultiIndex]) -> BigInt {
    let mut rest = n.clone();
    let mut acc = BigInt::one();
    for p in parts {
        match rest.checked_sub(p) {
            Some(r) => {
                acc *= rest.binom(p);
                rest = r;
            }
            None => return BigInt::zero(),
        }
    }
    acc
}

/// Ordered r-tuples of multi-indices summing to m.
pub fn compositions(m: &MultiIndex, r: usize) -> Vec<Vec<MultiIndex>> {
    if r == 0 {
        return if m.is_zero() { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in m.below() {
        let rest = m.checked_sub(&first).expect("below");
        for mut tail in compositions(&rest, r - 1) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

pub(crate) fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, l| {
        acc.iter()
            .flat_map(|a| {
                l.iter().map(move |x| {
                    let mut v = a.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Tuples of multi-indices with total weight at most `budget`.
pub(crate) fn bounded_tuples(n: usize, d: usize, budget: u32) -> Vec<Vec<MultiIndex>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in MultiIndex::with_total_at_most(d, budget) {
        let left = budget - first.total() as u32;
        for mut tail in bounded_tuples(n - 1, d, left) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

pub(crate) fn is_noise_vertex(t: &Tree, p: &[usize]) -> bool {
    t.edge_to(p).is_some_and(|e| e.is_noise())
}

/// Non-noise vertices in preorder.
pub fn non_noise_paths(t: &Tree, with_root: bool) -> Vec<Path> {
    t.paths().into_iter().filter(|p| (with_root || !p.is_empty()) && !is_noise_vertex(t, p)).collect()
}

fn add_dec(t: &mut Tree, p: &[usize], m: &MultiIndex) {
    let v = t.at_mut(p);
    v.dec = VertexDec::Multi(dec(v).add(m));
}

/// ↑^ℓ_v: adds ℓ to the decoration of the non-noise vertex v.
pub fn up(t: &Tree, v: &[usize], l: &MultiIndex) -> Result<Tree> {
    if is_noise_vertex(t, v) {
        return Err(Error::InvalidTree(format!("↑ at a noise vertex of {}", t)));
    }
    let mut s = t.clone();
    add_dec(&mut s, v, l);
    Ok(s)
}

fn spread(t: &Tree, m: &MultiIndex, targets: &[Path]) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for parts in compositions(m, targets.len()) {
        let mut s = t.clone();
        for (p, x) in targets.iter().zip(&parts) {
            add_dec(&mut s, p, x);
        }
        out.add_term(s, to_rational(multinomial(m, &parts)));
    }
    out
}

/// ↑^m over all non-noise vertices, root included.
pub fn up_all(t: &Tree, m: &MultiIndex) -> LinComb<Tree> {
    spread(t, m, &non_noise_paths(t, true))
}

/// ↑^m over the non-noise vertices below the root, as for planted trees.
pub fn up_nonroot(t: &Tree, m: &MultiIndex) -> LinComb<Tree> {
    spread(t, m, &non_noise_paths(t, false))
}

/// ↓^m on root edges. Repeated unit steps spread m over the edges with multinomial weights.
pub fn down_root_tree(t: &Tree, m: &MultiIndex) -> LinComb<Tree> {
    if m.is_zero() {
        return LinComb::basis(t.clone());
    }
    let mut out = LinComb::zero();
    for parts in compositions(m, t.children.len()) {
        let lowered: Option<Vec<_>> = t
            .children
            .iter()
            .zip(&parts)
            .map(|((e, c), p)| Some((shift_edge(e, &MultiIndex::zeros(m.dim()), p)?, c.clone())))
            .collect();
        if let Some(children) = lowered {
            out.add_term(Tree { dec: t.dec.clone(), children }, to_rational(multinomial(m, &parts)));
        }
    }
    out
}

pub fn down_root(x: &LinComb<Tree>, m: &MultiIndex) -> LinComb<Tree> {
    x.flat_map(|t| down_root_tree(t, m))
}

/// Grafts `branches` in order onto non-noise vertices of `y` (the root only
/// when `with_root`). Each new edge goes leftmost at its target and is deformed
/// against the target's decoration. Then `raise` is spread over the same
/// vertices of `y`.
pub fn graft_deformed(y: &Tree, branches: &[(EdgeDec, Tree)], with_root: bool, raise: &MultiIndex) -> LinComb<Tree> {
    let d = raise.dim();
    let targets = non_noise_paths(y, with_root);
    let mut out = LinComb::zero();
    let raises = compositions(raise, targets.len());
    let slots: Vec<usize> = (0..targets.len()).collect();
    for assign in cartesian(&vec![slots; branches.len()]) {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
        for (b, &ti) in assign.iter().enumerate() {
            groups[ti].push(b);
        }
        let per_target: Vec<Vec<(Vec<MultiIndex>, BigInt)>> = groups
            .iter()
            .zip(&targets)
            .map(|(g, p)| {
                let nv = dec(y.at(p));
                let opts: Vec<Vec<MultiIndex>> = g.iter().map(|&b| edge_index(&branches[b].0).below()).collect();
                cartesian(&opts)
                    .into_iter()
                    .filter_map(|ls| {
                        let c = multinomial(nv, &ls);
                        (!c.is_zero()).then_some((ls, c))
                    })
                    .collect()
            })
            .collect();
        for choice in cartesian(&per_target) {
            for parts in &raises {
                let mut coeff = multinomial(raise, parts);
                let mut s = y.clone();
                // reverse preorder: prepending children never invalidates a path still to visit
                for ti in (0..targets.len()).rev() {
                    let (ls, c) = &choice[ti];
                    coeff *= c;
                    let v = s.at_mut(&targets[ti]);
                    let nv = dec(v).checked_sub(&msum(ls, d)).expect("bounded by multinomial").add(&parts[ti]);
                    v.dec = VertexDec::Multi(nv);
                    let new: Vec<(EdgeDec, Tree)> = groups[ti]
                        .iter()
                        .zip(ls)
                        .map(|(&b, l)| {
                            let e = shift_edge(&branches[b].0, &MultiIndex::zeros(d), l).expect("ℓ below index");
                            (e, branches[b].1.clone())
                        })
                        .collect();
                    v.children.splice(0..0, new);
                }
                out.add_term(s, to_rational(coeff));
            }
        }
    }
    out
}

pub fn planted(e: EdgeDec, t: Tree) -> Tree {
    let d = edge_index(&e).dim();
    Tree { dec: VertexDec::Multi(MultiIndex::zeros(d)), children: vec![(e, t)] }
}

pub fn is_planted(t: &Tree) -> bool {
    t.dec.multi().is_some_and(|m| m.is_zero()) && t.children.len() == 1 && !t.children[0].0.is_noise()
}

/// The symbol X^i as a bare vertex decorated by the i-th unit vector.
pub fn x_unit(d: usize, i: usize) -> Tree {
    Tree::multi(MultiIndex::unit(d, i))
}

fn is_bare(t: &Tree) -> bool {
    t.children.is_empty()
}

/// I_a(τ1) ⋆̂ I_b(τ2).
pub fn dgraft_planted(p1: &Tree, p2: &Tree) -> Result<LinComb<Tree>> {
    for p in [p1, p2] {
        if !is_planted(p) {
            return Err(Error::InvalidTree(format!("{} is not planted", p)));
        }
    }
    Ok(dgraft_v_tree(p1, p2))
}

/// ⋆̂ on basis elements of V: planted forests (root 0) and bare X^i vertices.
pub fn dgraft_v_tree(x: &Tree, y: &Tree) -> LinComb<Tree> {
    if is_bare(y) {
        return LinComb::zero();
    }
    if is_bare(x) {
        return up_nonroot(y, dec(x));
    }
    graft_deformed(y, &x.children, false, &MultiIndex::zeros(dec(x).dim()))
}

pub fn dgraft_v(x: &LinComb<Tree>, y: &LinComb<Tree>) -> LinComb<Tree> {
    x.bilinear(y, dgraft_v_tree)
}

fn merge(x: &Tree, y: &Tree) -> Tree {
    let mut children = x.children.clone();
    children.extend(y.children.iter().cloned());
    Tree { dec: VertexDec::Multi(dec(x).add(dec(y))), children }
}

/// [·,·]₀ on basis elements of V.
pub fn bracket0_tree(x: &Tree, y: &Tree) -> LinComb<Tree> {
    match (is_bare(x), is_bare(y)) {
        (true, true) => LinComb::zero(),
        (false, true) if dec(y).is_zero() => LinComb::zero(),
        (true, false) if dec(x).is_zero() => LinComb::zero(),
        (false, true) => down_root_tree(x, dec(y)),
        (true, false) => -down_root_tree(y, dec(x)),
        (false, false) => {
            let mut out = LinComb::basis(merge(x, y));
            out.add_term(merge(y, x), -Rational::one());
            out
        }
    }
}

pub fn bracket0(x: &LinComb<Tree>, y: &LinComb<Tree>) -> LinComb<Tree> {
    x.bilinear(y, bracket0_tree)
}

/// x ∗₊ y for x in the X^m τ₁…τ_k form: the branches of x are deformed-grafted
/// onto every non-noise vertex of y, root included, and m is spread over the
/// vertices of y.
pub fn star_plus_tree(x: &Tree, y: &Tree) -> Result<LinComb<Tree>> {
    if let Some((e, _)) = x.children.iter().find(|(e, _)| e.is_noise()) {
        return Err(Error::InvalidTree(format!("noise edge {} at the root of the left factor {}", e, x)));
    }
    Ok(graft_deformed(y, &x.children, true, dec(x)))
}

pub fn star_plus(x: &LinComb<Tree>, y: &LinComb<Tree>) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_scaled(&star_plus_tree(a, b)?, &(ca * cb));
        }
    }
    Ok(out)
}

/// Letters of U(V): unit symbols X^i and planted trees (edge and subtree).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X(usize),
    P(EdgeDec, Tree),
}

/// The word X^m τ₁…τ_k of a tree, with X^m spelled out in unit letters.
pub fn word_of(t: &Tree) -> Vec<Letter> {
    let mut w = Vec::new();
    for (i, &k) in dec(t).0.iter().enumerate() {
        w.extend(std::iter::repeat_n(Letter::X(i), k as usize));
    }
    w.extend(t.children.iter().map(|(e, c)| Letter::P(e.clone(), c.clone())));
    w
}

/// Normal form in U(V), moving X letters left with τX^i = X^iτ + ↓^iτ.
pub fn normalize_word(w: &[Letter], d: usize) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    let mut todo: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
    todo.insert(w.to_vec(), Rational::one());
    while let Some((w, c)) = todo.pop_first() {
        let pos = w.windows(2).position(|p| matches!((&p[0], &p[1]), (Letter::P(..), Letter::X(_))));
        let Some(j) = pos else {
            let mut m = MultiIndex::zeros(d);
            let mut children = Vec::new();
            for l in &w {
                match l {
                    Letter::X(i) => m = m.add(&MultiIndex::unit(d, *i)),
                    Letter::P(e, t) => children.push((e.clone(), t.clone())),
                }
            }
            out.add_term(Tree { dec: VertexDec::Multi(m), children }, c);
            continue;
        };
        let (Letter::P(e, t), Letter::X(i)) = (&w[j], &w[j + 1]) else { unreachable!() };
        let mut swapped = w.clone();
        swapped.swap(j, j + 1);
        *todo.entry(swapped).or_insert_with(Rational::zero) += &c;
        if let Some(e2) = shift_edge(e, &MultiIndex::zeros(d), &MultiIndex::unit(d, *i)) {
            let mut lowered = w.clone();
            lowered.splice(j..j + 2, [Letter::P(e2, t.clone())]);
            *todo.entry(lowered).or_insert_with(Rational::zero) += &c;
        }
    }
    out.filter(|_| true)
}

/// Product of U(V) on normal forms.
pub fn uv_product(a: &Tree, b: &Tree) -> LinComb<Tree> {
    let mut w = word_of(a);
    w.extend(word_of(b));
    normalize_word(&w, dec(a).dim())
}

/// Typed tree whose vertices also carry an extended decoration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExTree {
    pub dec: MultiIndex,
    pub ext: Rational,
    pub children: Vec<(EdgeDec, ExTree)>,
}

impl ExTree {
    pub fn from_tree(t: &Tree) -> ExTree {
        ExTree {
            dec: dec(t).clone(),
            ext: Rational::zero(),
            children: t.children.iter().map(|(e, c)| (e.clone(), ExTree::from_tree(c))).collect(),
        }
    }

    /// Drops extended decorations.
    pub fn to_tree(&self) -> Tree {
        Tree {
            dec: VertexDec::Multi(self.dec.clone()),
            children: self.children.iter().map(|(e, c)| (e.clone(), c.to_tree())).collect(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.children.is_empty() && self.dec.is_zero() && self.ext.is_zero()
    }
}

impl fmt::Display for ExTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", VertexDec::Multi(self.dec.clone()))?;
        if !self.ext.is_zero() {
            write!(f, "{{{}}}", self.ext)?;
        }
        if !self.children.is_empty() {
            write!(f, "[")?;
            for (i, (e, c)) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}:{}", e, c)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// |·|₊: regularity plus all extended decorations.
pub fn reg_plus(t: &ExTree, cfg: &RegularityConfig) -> Result<Rational> {
    let mut r = Rational::from_integer(BigInt::from(t.dec.total())) + &t.ext;
    for (e, c) in &t.children {
        r += cfg.edge_weight(e)?;
        r += reg_plus(c, cfg)?;
    }
    Ok(r)
}

/// How Δ⁺ bounds its edge increments.
#[derive(Clone, Debug)]
pub enum PlusBound<'a> {
    /// Keep left factors that are the unit or have positive |·|₊.
    Positive(&'a RegularityConfig),
    /// Keep everything, each increment at most the cap componentwise.
    Cap(&'a MultiIndex),
}

#[derive(Clone)]
struct CutNode {
    dec: MultiIndex,
    ext: Rational,
    noise: bool,
    cut: Vec<(EdgeDec, ExTree)>,
    kids: Vec<(EdgeDec, CutNode)>,
}

// Left admissible cuts avoiding noise edges: a noise-free prefix at each vertex.
fn cut_nodes(t: &ExTree, noise: bool) -> Vec<CutNode> {
    let mut out = Vec::new();
    for p in 0..=t.children.len() {
        if p > 0 && t.children[p - 1].0.is_noise() {
            break;
        }
        let rest: Vec<Vec<CutNode>> = t.children[p..].iter().map(|(e, c)| cut_nodes(c, e.is_noise())).collect();
        for combo in cartesian(&rest) {
            out.push(CutNode {
                dec: t.dec.clone(),
                ext: t.ext.clone(),
                noise,
                cut: t.children[..p].to_vec(),
                kids: t.children[p..].iter().map(|(e, _)| e.clone()).zip(combo).collect(),
            });
        }
    }
    out
}

fn flatten<'a>(n: &'a CutNode, out: &mut Vec<&'a CutNode>) {
    out.push(n);
    for (_, k) in &n.kids {
        flatten(k, out);
    }
}

fn rebuild(n: &CutNode, decs: &[MultiIndex], idx: &mut usize) -> ExTree {
    let me = *idx;
    *idx += 1;
    let children = n.kids.iter().map(|(e, k)| (e.clone(), rebuild(k, decs, idx))).collect();
    ExTree { dec: decs[me].clone(), ext: n.ext.clone(), children }
}

fn cut_terms(node: &CutNode, bound: &PlusBound, d: usize) -> Result<TensorSum<ExTree, ExTree>> {
    let mut verts = Vec::new();
    flatten(node, &mut verts);
    let edges: Vec<(usize, &(EdgeDec, ExTree))> =
        verts.iter().enumerate().flat_map(|(v, n)| n.cut.iter().map(move |b| (v, b))).collect();
    let increments: Vec<Vec<MultiIndex>> = match bound {
        PlusBound::Cap(cap) => cartesian(&vec![cap.below(); edges.len()]),
        PlusBound::Positive(cfg) => {
            let mut r0 = Rational::zero();
            for (_, (e, c)) in &edges {
                r0 += cfg.edge_weight(e)? + reg_plus(c, cfg)?;
            }
            let k: u64 = verts.iter().filter(|n| !n.noise).map(|n| n.dec.total()).sum();
            let budget = (r0 + Rational::from_integer(BigInt::from(k))).floor().to_integer();
            let budget = if budget.is_positive() { u32::try_from(budget).unwrap_or(u32::MAX) } else { 0 };
            bounded_tuples(edges.len(), d, budget)
        }
    };
    let deltas = cartesian(
        &verts.iter().map(|n| if n.noise { vec![MultiIndex::zeros(d)] } else { n.dec.below() }).collect::<Vec<_>>(),
    );
    let mut out = LinComb::zero();
    for ls in &increments {
        let mut at: Vec<Vec<MultiIndex>> = vec![Vec::new(); verts.len()];
        for ((v, _), l) in edges.iter().zip(ls) {
            at[*v].push(l.clone());
        }
        let mut groups: Vec<Vec<(EdgeDec, ExTree)>> = vec![Vec::new(); verts.len()];
        for ((v, (e, c)), l) in edges.iter().zip(ls) {
            groups[*v].push((shift_edge(e, l, &MultiIndex::zeros(d)).expect("typed"), c.clone()));
        }
        let shuffles = shuffle_many(&groups);
        for ds in &deltas {
            let m = msum(ds, d);
            let mut coeff = multinomial(&m, ds);
            let mut decs = Vec::with_capacity(verts.len());
            for (v, n) in verts.iter().enumerate() {
                let y = n.dec.checked_sub(&ds[v]).expect("δ below").add(&msum(&at[v], d));
                coeff *= multinomial(&y, &at[v]);
                decs.push(y);
            }
            let y = rebuild(node, &decs, &mut 0);
            let c = to_rational(coeff);
            for sh in &shuffles {
                let x = ExTree { dec: m.clone(), ext: Rational::zero(), children: sh.clone() };
                if let PlusBound::Positive(cfg) = bound {
                    if !x.is_unit() && !reg_plus(&x, cfg)?.is_positive() {
                        continue;
                    }
                }
                out.add_term((x, y.clone()), c.clone());
            }
        }
    }
    Ok(out)
}

/// Δ⁺ on extended trees by left admissible cuts and the deformed tensor.
pub fn delta_plus_core(z: &ExTree, bound: &PlusBound) -> Result<TensorSum<ExTree, ExTree>> {
    let d = z.dec.dim();
    let parts: Vec<Result<TensorSum<ExTree, ExTree>>> =
        cut_nodes(z, false).par_iter().map(|n| cut_terms(n, bound, d)).collect();
    let mut out = LinComb::zero();
    for p in parts {
        out += &p?;
    }
    Ok(out)
}

fn plain_pairs(x: &TensorSum<ExTree, ExTree>) -> TensorSum<Tree, Tree> {
    x.map_basis(|(a, b)| (a.to_tree(), b.to_tree()))
}

/// Δ⁺ projected onto left factors that are the unit or have positive regularity.
pub fn delta_plus(t: &Tree, cfg: &RegularityConfig) -> Result<TensorSum<Tree, Tree>> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    Ok(plain_pairs(&delta_plus_core(&z, &PlusBound::Positive(cfg))?))
}

/// Δ⁺₀: no projection, each edge increment at most `cap` componentwise.
pub fn delta_plus_0(t: &Tree, cap: &MultiIndex) -> Result<TensorSum<Tree, Tree>> {
    let z = ExTree::from_tree(&rs_tree(t, cap.dim())?);
    Ok(plain_pairs(&delta_plus_core(&z, &PlusBound::Cap(cap))?))
}

/// Γ_g τ = (g ⊗ id)Δ⁺τ.
pub fn gamma_g(g: &dyn Fn(&Tree) -> Rational, t: &Tree, cfg: &RegularityConfig) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for ((x, y), c) in delta_plus(t, cfg)?.iter() {
        let v = g(x);
        if !v.is_zero() {
            out.add_term(y.clone(), c * v);
        }
    }
    Ok(out)
}

/// The unit 1 = X^0 of 𝔗⁺.
pub fn unit_tree(d: usize) -> Tree {
    Tree::multi(MultiIndex::zeros(d))
}

/// Coproduct of the Hopf algebra 𝔗⁺: Δ⁺ with both factors projected.
pub fn delta_plus_hopf(t: &Tree, cfg: &RegularityConfig) -> Result<TensorSum<Tree, Tree>> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    let full = delta_plus_core(&z, &PlusBound::Positive(cfg))?;
    let mut out = LinComb::zero();
    for ((x, y), c) in full.iter() {
        if y.is_unit() || reg_plus(y, cfg)?.is_positive() {
            out.add_term((x.to_tree(), y.to_tree()), c.clone());
        }
    }
    Ok(out)
}

/// The functional (h ⊗ g)Δ⁺ on 𝔗⁺, so that Γ_g Γ_h = Γ_k.
pub fn convolve<'a>(
    h: &'a dyn Fn(&Tree) -> Rational,
    g: &'a dyn Fn(&Tree) -> Rational,
    cfg: &'a RegularityConfig,
) -> impl Fn(&Tree) -> Rational + 'a {
    move |x: &Tree| {
        let Ok(dx) = delta_plus_hopf(x, cfg) else { return Rational::zero() };
        dx.iter().fold(Rational::zero(), |acc, ((a, b), c)| acc + c * h(a) * g(b))
    }
}

/// Kernel type carrying the undecorated edges of a blue tree in the typed setting.
pub const PB_KERNEL: u32 = 0;

/// Reads a blue tree as a typed tree with zero vertex decorations: undecorated
/// edges become kernel edges, `Plain(i)` edges noise edges, all indices zero.
pub fn from_pb(t: &Tree) -> Tree {
    let z = MultiIndex::zeros(1);
    Tree {
        dec: VertexDec::Multi(z.clone()),
        children: t
            .children
            .iter()
            .map(|(e, c)| {
                let e = match e {
                    EdgeDec::Plain(i) if *i > 0 => EdgeDec::Typed(EdgeKind::Noise(*i), z.clone()),
                    _ => EdgeDec::Typed(EdgeKind::Kernel(PB_KERNEL), z.clone()),
                };
                (e, from_pb(c))
            })
            .collect(),
    }
}

/// Typed configuration matching a blue-tree one: the kernel of undecorated edges has regularity 1.
pub fn pb_config(cfg: &RegularityConfig) -> RegularityConfig {
    cfg.clone().with_d(1).with_kernel(PB_KERNEL, Rational::one())
}

pub fn all_zero(t: &Tree) -> bool {
    t.dec.multi().is_some_and(|m| m.is_zero()) && t.children.iter().all(|(e, c)| e.index().is_some_and(|m| m.is_zero()) && all_zero(c))
}
