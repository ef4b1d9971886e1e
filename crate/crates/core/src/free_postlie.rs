//! Free post-Lie algebra on planar trees, planar Grossman–Larson product,
//! Munthe-Kaas–Wright coproduct, and the non-planar BCK structures.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use crate::tree_core::{
    forest_mode, same_mode, tree_mode, EdgeDec, Error, Forest, LinComb, Mode, NonplanarForest, NonplanarTree, Path,
    Rational, Result, TensorSum, Tree, VertexDec,
};

pub type LiePoly = LinComb<Forest>;

/// Rebuilds `t` with the listed branches prepended, in order, to the vertices at the given paths.
pub fn graft_multi(t: &Tree, assign: &BTreeMap<Path, Vec<(EdgeDec, Tree)>>) -> Tree {
    fn go(t: &Tree, cur: &mut Path, assign: &BTreeMap<Path, Vec<(EdgeDec, Tree)>>) -> Tree {
        let mut children = assign.get(cur).cloned().unwrap_or_default();
        for (i, (e, c)) in t.children.iter().enumerate() {
            cur.push(i);
            children.push((e.clone(), go(c, cur, assign)));
            cur.pop();
        }
        Tree { dec: t.dec.clone(), children }
    }
    go(t, &mut Vec::new(), assign)
}

/// `t2` with `t1` attached through `edge` as the new leftmost child of the vertex at `path`.
pub fn graft_at(t1: &Tree, path: &[usize], edge: EdgeDec, t2: &Tree) -> Tree {
    let mut out = t2.clone();
    out.at_mut(path).children.insert(0, (edge, t1.clone()));
    out
}

/// Left grafting τ1 ⟶ τ2: sum over all vertices of τ2.
pub fn graft_tree(t1: &Tree, t2: &Tree) -> Result<LinComb<Tree>> {
    same_mode(tree_mode(t1)?, tree_mode(t2)?)?;
    Ok(t2.paths().iter().map(|p| (graft_at(t1, p, EdgeDec::None, t2), Rational::one())).collect())
}

fn forest_vertices(f: &Forest) -> Vec<(usize, Path)> {
    f.0.iter().enumerate().flat_map(|(i, t)| t.paths().into_iter().map(move |p| (i, p))).collect()
}

/// ω ⟶ ω' on basis forests: every tree of ω picks a vertex of ω'; trees sent to one vertex
/// become its leftmost children in their original order.
pub fn go_graft_forest(w: &Forest, target: &Forest) -> LinComb<Forest> {
    if w.is_unit() {
        return LinComb::basis(target.clone());
    }
    let verts = forest_vertices(target);
    let mut out = LinComb::zero();
    if verts.is_empty() {
        return out;
    }
    let k = w.len();
    let mut choice = vec![0usize; k];
    loop {
        let mut assign: Vec<BTreeMap<Path, Vec<(EdgeDec, Tree)>>> = vec![BTreeMap::new(); target.len()];
        for (j, &c) in choice.iter().enumerate() {
            let (ti, p) = &verts[c];
            assign[*ti].entry(p.clone()).or_default().push((EdgeDec::None, w.0[j].clone()));
        }
        let f = Forest(target.0.iter().zip(&assign).map(|(t, a)| graft_multi(t, a)).collect());
        out.add_term(f, Rational::one());
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            choice[i] += 1;
            if choice[i] < verts.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn check_modes(xs: &[&LinComb<Forest>]) -> Result<Option<Mode>> {
    let mut m = None;
    for x in xs {
        for f in x.basis_iter() {
            m = same_mode(m, forest_mode(f)?)?;
        }
    }
    Ok(m)
}

/// Guin–Oudom extension of left grafting to ordered forests.
pub fn go_graft(x: &LinComb<Forest>, y: &LinComb<Forest>) -> Result<LinComb<Forest>> {
    check_modes(&[x, y])?;
    Ok(x.bilinear(y, go_graft_forest))
}

/// Deshuffle coproduct: ordered subsequence ⊗ complement.
pub fn deshuffle(w: &Forest) -> TensorSum<Forest, Forest> {
    let n = w.len();
    let mut out = LinComb::zero();
    for mask in 0u64..(1u64 << n) {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for (i, t) in w.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                l.push(t.clone());
            } else {
                r.push(t.clone());
            }
        }
        out.add_term((Forest(l), Forest(r)), Rational::one());
    }
    out
}

pub fn deshuffle_lc(x: &LinComb<Forest>) -> TensorSum<Forest, Forest> {
    x.flat_map(deshuffle)
}

/// Shuffle of two sequences.
pub fn shuffle_seq<T: Clone>(a: &[T], b: &[T]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return vec![b.to_vec()];
    }
    if b.is_empty() {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for mut rest in shuffle_seq(&a[1..], b) {
        rest.insert(0, a[0].clone());
        out.push(rest);
    }
    for mut rest in shuffle_seq(a, &b[1..]) {
        rest.insert(0, b[0].clone());
        out.push(rest);
    }
    out
}

/// Shuffle of several sequences.
pub fn shuffle_many<T: Clone>(parts: &[Vec<T>]) -> Vec<Vec<T>> {
    parts.iter().fold(vec![Vec::new()], |acc, p| acc.iter().flat_map(|a| shuffle_seq(a, p)).collect())
}

pub fn shuffle_forest(a: &Forest, b: &Forest) -> LinComb<Forest> {
    shuffle_seq(&a.0, &b.0).into_iter().map(|v| (Forest(v), Rational::one())).collect()
}

pub fn shuffle(x: &LinComb<Forest>, y: &LinComb<Forest>) -> Result<LinComb<Forest>> {
    check_modes(&[x, y])?;
    Ok(x.bilinear(y, shuffle_forest))
}

/// Concatenation product.
pub fn concat(x: &LinComb<Forest>, y: &LinComb<Forest>) -> LinComb<Forest> {
    x.bilinear(y, |a, b| LinComb::basis(a.concat(b)))
}

/// Commutator of concatenation.
pub fn bracket(x: &LinComb<Forest>, y: &LinComb<Forest>) -> LinComb<Forest> {
    concat(x, y) - concat(y, x)
}

pub fn gl_product_forest(a: &Forest, b: &Forest) -> LinComb<Forest> {
    let mut out = LinComb::zero();
    for ((a1, a2), c) in deshuffle(a) {
        for (g, c2) in go_graft_forest(&a2, b) {
            out.add_term(a1.concat(&g), &c * c2);
        }
    }
    out
}

/// Planar Grossman–Larson product ω ∗ ω' = ω(1)(ω(2) ⟶ ω').
pub fn gl_product(x: &LinComb<Forest>, y: &LinComb<Forest>) -> Result<LinComb<Forest>> {
    check_modes(&[x, y])?;
    Ok(x.bilinear(y, gl_product_forest))
}

pub fn b_plus(w: &Forest) -> Tree {
    Tree::node(VertexDec::Blank, w.0.clone())
}

pub fn b_minus(t: &Tree) -> Result<Forest> {
    if !t.dec.is_blank() || t.children.iter().any(|(e, _)| !e.is_undecorated()) {
        return Err(Error::DecoratedRoot(t.to_string()));
    }
    Ok(Forest(t.children.iter().map(|(_, c)| c.clone()).collect()))
}

/// A left admissible cut: the branches removed at each trunk vertex, and the trunk.
#[derive(Clone, Debug)]
pub struct Cut {
    pub pruned: Vec<(Path, Vec<(EdgeDec, Tree)>)>,
    pub trunk: Tree,
}

/// Left admissible cuts whose cut edges all satisfy `allowed`: at each vertex a
/// prefix of the outgoing edges is cut, and no path is cut twice.
pub fn left_cuts(t: &Tree, allowed: &dyn Fn(&EdgeDec) -> bool) -> Vec<Cut> {
    let n = t.children.len();
    let max_k = t.children.iter().take_while(|(e, _)| allowed(e)).count();
    let mut out = Vec::new();
    for k in 0..=max_k.min(n) {
        let mut partial = vec![Cut {
            pruned: if k > 0 { vec![(Vec::new(), t.children[..k].to_vec())] } else { Vec::new() },
            trunk: Tree { dec: t.dec.clone(), children: Vec::new() },
        }];
        for (i, (e, c)) in t.children[k..].iter().enumerate() {
            let sub = left_cuts(c, allowed);
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for p in &partial {
                for s in &sub {
                    let mut q = p.clone();
                    for (path, group) in &s.pruned {
                        let mut full = vec![i];
                        full.extend(path);
                        q.pruned.push((full, group.clone()));
                    }
                    q.trunk.children.push((e.clone(), s.trunk.clone()));
                    next.push(q);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    out
}

/// Pruned part of a cut: per-vertex groups concatenated, different vertices shuffled.
pub fn pruned_forests(cut: &Cut) -> Vec<Vec<Tree>> {
    let groups: Vec<Vec<Tree>> = cut.pruned.iter().map(|(_, g)| g.iter().map(|(_, t)| t.clone()).collect()).collect();
    shuffle_many(&groups)
}

pub fn mkw_forest(w: &Forest) -> TensorSum<Forest, Forest> {
    let mut out = LinComb::zero();
    for cut in left_cuts(&b_plus(w), &|_| true) {
        let trunk = Forest(cut.trunk.children.iter().map(|(_, c)| c.clone()).collect());
        for p in pruned_forests(&cut) {
            out.add_term((Forest(p), trunk.clone()), Rational::one());
        }
    }
    out
}

/// Munthe-Kaas–Wright coproduct via left admissible cuts of B₊(ω).
pub fn mkw_coproduct(x: &LinComb<Forest>) -> TensorSum<Forest, Forest> {
    x.flat_map(mkw_forest)
}

/// Antipode of (𝒪ℱ, ⧢, Δ_MKW).
pub struct Antipode {
    memo: HashMap<Forest, LinComb<Forest>>,
}

impl Default for Antipode {
    fn default() -> Self {
        Antipode { memo: HashMap::new() }
    }
}

impl Antipode {
    pub fn forest(&mut self, w: &Forest) -> LinComb<Forest> {
        if w.is_unit() {
            return LinComb::basis(Forest::unit());
        }
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        let mut out = LinComb::zero();
        for ((l, r), c) in mkw_forest(w) {
            if &l == w {
                continue;
            }
            let s = self.forest(&l);
            out.add_scaled(&shuffle(&s, &LinComb::basis(r)).expect("same mode"), &-c);
        }
        self.memo.insert(w.clone(), out.clone());
        out
    }

    pub fn apply(&mut self, x: &LinComb<Forest>) -> LinComb<Forest> {
        x.flat_map(|w| self.forest(w))
    }
}

pub fn antipode(x: &LinComb<Forest>) -> LinComb<Forest> {
    Antipode::default().apply(x)
}

/// Whether `x` is primitive for the deshuffle coproduct.
pub fn is_primitive(x: &LinComb<Forest>) -> bool {
    let mut d = deshuffle_lc(x);
    for (f, c) in x.iter() {
        d.add_term((f.clone(), Forest::unit()), -c.clone());
        d.add_term((Forest::unit(), f.clone()), -c.clone());
    }
    d.is_zero()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn embeddings_seq(items: &[Tree]) -> LinComb<Vec<(EdgeDec, Tree)>> {
    let each: Vec<LinComb<Tree>> = items.iter().map(tree_embeddings).collect();
    let mut out = LinComb::zero();
    for perm in permutations(items.len()) {
        let mut acc: LinComb<Vec<(EdgeDec, Tree)>> = LinComb::basis(Vec::new());
        for &i in &perm {
            acc = acc.bilinear(&each[i], |v, t| {
                let mut v = v.clone();
                v.push((EdgeDec::None, t.clone()));
                LinComb::basis(v)
            });
        }
        out += &acc;
    }
    out
}

fn tree_embeddings(t: &Tree) -> LinComb<Tree> {
    let edges: Vec<EdgeDec> = t.children.iter().map(|(e, _)| e.clone()).collect();
    if edges.iter().any(|e| !e.is_undecorated()) {
        // decorated edges travel with their subtrees
        let wrapped: Vec<Tree> = t.children.iter().map(|(e, c)| Tree::new(VertexDec::Blank, vec![(e.clone(), c.clone())])).collect();
        return embeddings_seq(&wrapped).map_basis(|v| Tree {
            dec: t.dec.clone(),
            children: v.iter().map(|(_, w)| w.children[0].clone()).collect(),
        });
    }
    let kids: Vec<Tree> = t.children.iter().map(|(_, c)| c.clone()).collect();
    embeddings_seq(&kids).map_basis(|v| Tree { dec: t.dec.clone(), children: v.clone() })
}

/// Ω: sum over all ways to endow a non-planar forest with a planar embedding.
/// Each distinct embedding appears once, weighted by the number of orderings producing it.
pub fn omega_embed(x: &NonplanarForest) -> LinComb<Forest> {
    let trees: Vec<Tree> = x.trees().iter().map(|t| t.tree().clone()).collect();
    embeddings_seq(&trees).map_basis(|v| Forest(v.iter().map(|(_, t)| t.clone()).collect()))
}

pub fn omega_lc(x: &LinComb<NonplanarForest>) -> LinComb<Forest> {
    x.flat_map(omega_embed)
}

/// All admissible cuts (no planarity condition): pruned trees and trunk.
fn all_cuts(t: &Tree) -> Vec<(Vec<Tree>, Tree)> {
    let n = t.children.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let mut partial = vec![(Vec::new(), Tree { dec: t.dec.clone(), children: Vec::new() })];
        for (i, (e, c)) in t.children.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for p in partial.iter_mut() {
                    p.0.push(c.clone());
                }
            } else {
                let sub = all_cuts(c);
                let mut next = Vec::new();
                for p in &partial {
                    for (sp, st) in &sub {
                        let mut q = p.clone();
                        q.0.extend(sp.iter().cloned());
                        q.1.children.push((e.clone(), st.clone()));
                        next.push(q);
                    }
                }
                partial = next;
            }
        }
        out.extend(partial);
    }
    out
}

/// Connes–Kreimer coproduct via admissible cuts of B₊(ω).
pub fn ck_coproduct(x: &NonplanarForest) -> TensorSum<NonplanarForest, NonplanarForest> {
    let mut out = LinComb::zero();
    for (pruned, trunk) in all_cuts(&b_plus(&x.as_forest())) {
        let p = NonplanarForest::new(pruned.iter().map(NonplanarTree::new).collect());
        let t = NonplanarForest::new(trunk.children.iter().map(|(_, c)| NonplanarTree::new(c)).collect());
        out.add_term((p, t), Rational::one());
    }
    out
}

pub fn np_product(x: &LinComb<NonplanarForest>, y: &LinComb<NonplanarForest>) -> LinComb<NonplanarForest> {
    x.bilinear(y, |a, b| LinComb::basis(a.product(b)))
}

pub fn forest_lc(t: Tree) -> LinComb<Forest> {
    LinComb::basis(Forest::single(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_core::{parse_forest, parse_lincomb, parse_tree};

    fn lc(s: &str) -> LinComb<Forest> {
        parse_lincomb(s).unwrap()
    }

    #[test]
    fn graft_single_vertex_target() {
        let r = graft_tree(&parse_tree("a").unwrap(), &parse_tree("b").unwrap()).unwrap();
        assert_eq!(r, LinComb::basis(parse_tree("b[a]").unwrap()));
    }

    #[test]
    fn graft_two_vertex_target() {
        let r = graft_tree(&parse_tree("a").unwrap(), &parse_tree("a[a]").unwrap()).unwrap();
        let want: LinComb<Tree> = ["a[a,a]", "a[a[a]]"].iter().map(|s| (parse_tree(s).unwrap(), Rational::one())).collect();
        assert_eq!(r, want);
    }

    #[test]
    fn go_graft_units() {
        assert_eq!(go_graft(&lc("{}"), &lc("{a b}")).unwrap(), lc("{a b}"));
        assert!(go_graft(&lc("a"), &lc("{}")).unwrap().is_zero());
        assert_eq!(go_graft(&lc("{a b}"), &lc("c")).unwrap(), lc("c[a,b]"));
    }

    #[test]
    fn deshuffle_two_trees() {
        let d = deshuffle(&parse_forest("{a b}").unwrap());
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn gl_of_two_vertices() {
        assert_eq!(gl_product(&lc("a"), &lc("b")).unwrap(), lc("{a b} + b[a]"));
        assert_eq!(gl_product(&lc("{}"), &lc("a[b]")).unwrap(), lc("a[b]"));
    }

    #[test]
    fn shuffle_three() {
        assert_eq!(shuffle(&lc("a"), &lc("{c d}")).unwrap(), lc("{a c d} + {c a d} + {c d a}"));
    }

    #[test]
    fn mode_mismatch_rejected() {
        assert!(matches!(gl_product(&lc("a"), &lc("•[1:•]")), Err(Error::ModeMismatch(_))));
    }

    #[test]
    fn b_minus_rejects_decorated_root() {
        assert!(matches!(b_minus(&parse_tree("a[b]").unwrap()), Err(Error::DecoratedRoot(_))));
    }

    #[test]
    fn antipode_small() {
        assert_eq!(antipode(&lc("{}")), lc("{}"));
        assert_eq!(antipode(&lc("a")), lc("-1*a"));
    }
}
