#![allow(dead_code)]

use planarhopf_core::tree_core::{EdgeDec, Forest, LinComb, Rational, Tree, VertexDec};
use planarhopf_core::{parse_forest, parse_lincomb, parse_tree};
use proptest::prelude::*;
use proptest::sample::Index;

pub fn t(s: &str) -> Tree {
    parse_tree(s).unwrap()
}

pub fn f(s: &str) -> Forest {
    parse_forest(s).unwrap()
}

pub fn lc(s: &str) -> LinComb<Forest> {
    parse_lincomb(s).unwrap()
}

pub fn r(n: i64, d: i64) -> Rational {
    planarhopf_core::rat(n, d)
}

/// Tree from a preorder parent table: vertex i > 0 hangs below `parents[i] < i`.
pub fn from_parents(decs: &[VertexDec], parents: &[usize], edges: &[EdgeDec]) -> Tree {
    fn build(i: usize, decs: &[VertexDec], parents: &[usize], edges: &[EdgeDec]) -> Tree {
        let children = (i + 1..decs.len())
            .filter(|&j| parents[j] == i)
            .map(|j| (edges[j].clone(), build(j, decs, parents, edges)))
            .collect();
        Tree { dec: decs[i].clone(), children }
    }
    build(0, decs, parents, edges)
}

pub fn arb_labelled_tree(max: usize, letters: &'static [&'static str]) -> impl Strategy<Value = Tree> {
    (1..=max)
        .prop_flat_map(move |n| {
            (proptest::collection::vec(0..letters.len(), n), proptest::collection::vec(any::<Index>(), n))
        })
        .prop_map(move |(labs, idx)| {
            let n = labs.len();
            let decs: Vec<VertexDec> = labs.iter().map(|&i| VertexDec::label(letters[i])).collect();
            let parents: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { idx[i].index(i) }).collect();
            from_parents(&decs, &parents, &vec![EdgeDec::None; n])
        })
}

/// Ordered forest with at most `max` vertices.
pub fn arb_labelled_forest(max: usize, letters: &'static [&'static str]) -> impl Strategy<Value = Forest> {
    arb_labelled_tree(max + 1, letters).prop_map(|t| Forest(t.children.into_iter().map(|(_, c)| c).collect()))
}

use planarhopf_core::tree_core::enumerate::planar_trees;
use planarhopf_core::tree_core::{validate_typed, EdgeKind, MultiIndex};
use rand::Rng;

pub mod negative;
pub mod positive;

pub fn m1(k: u32) -> MultiIndex {
    MultiIndex(vec![k])
}

pub fn kern(i: u32, a: u32) -> EdgeDec {
    EdgeDec::Typed(EdgeKind::Kernel(i), m1(a))
}

pub fn noise(i: u32) -> EdgeDec {
    EdgeDec::Typed(EdgeKind::Noise(i), m1(0))
}

fn with_decs(shape: &Tree, vd: &mut impl Iterator<Item = u32>, ed: &mut impl Iterator<Item = EdgeDec>) -> Tree {
    let dec = VertexDec::Multi(m1(vd.next().unwrap()));
    let children = shape.children.iter().map(|(_, c)| (ed.next().unwrap(), with_decs(c, vd, ed))).collect();
    Tree { dec, children }
}

/// All valid one-dimensional typed trees with `n` vertices. Noise vertices are
/// leaves decorated by zero.
pub fn typed_trees(n: usize, vdecs: &[u32], edges: &[EdgeDec]) -> Vec<Tree> {
    let mut out = Vec::new();
    for shape in planar_trees(n, &[VertexDec::Blank]) {
        let vs: Vec<Vec<u32>> = cartesian(&vec![vdecs.to_vec(); n]);
        let es: Vec<Vec<EdgeDec>> = cartesian(&vec![edges.to_vec(); n - 1]);
        for v in &vs {
            for e in &es {
                let t = with_decs(&shape, &mut v.iter().copied(), &mut e.iter().cloned());
                if validate_typed(&t).is_ok() && noise_leaves_zero(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn noise_leaves_zero(t: &Tree) -> bool {
    t.children.iter().all(|(e, c)| (!e.is_noise() || c.dec.multi().unwrap().is_zero()) && noise_leaves_zero(c))
}

pub fn typed_trees_up_to(max_edges: usize, vdecs: &[u32], edges: &[EdgeDec]) -> Vec<Tree> {
    (1..=max_edges + 1).flat_map(|n| typed_trees(n, vdecs, edges)).collect()
}

pub fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
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

/// Random typed tree, d = 1, one kernel type, decorations up to `max_dec`.
/// With `noisy`, some leaves hang from noise edges.
pub fn random_typed_tree(rng: &mut impl Rng, max_edges: usize, max_dec: u32, noisy: bool) -> Tree {
    let n = rng.gen_range(1..=max_edges + 1);
    let parents: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { rng.gen_range(0..i) }).collect();
    let decs: Vec<VertexDec> = (0..n).map(|_| VertexDec::Multi(m1(rng.gen_range(0..=max_dec)))).collect();
    let edges: Vec<EdgeDec> = (0..n).map(|_| kern(1, rng.gen_range(0..=max_dec))).collect();
    let mut t = from_parents(&decs, &parents, &edges);
    if noisy {
        add_noise(&mut t, rng);
    }
    t
}

fn add_noise(t: &mut Tree, rng: &mut impl Rng) {
    let mut has = false;
    for (e, c) in t.children.iter_mut() {
        if !has && c.children.is_empty() && rng.gen_bool(0.3) {
            *e = noise(1);
            c.dec = VertexDec::Multi(m1(0));
            has = true;
        } else {
            add_noise(c, rng);
        }
    }
}

/// Random planted tree I_a(τ) with τ as above.
pub fn random_planted(rng: &mut impl Rng, max_edges: usize, max_dec: u32, noisy: bool) -> Tree {
    let inner = random_typed_tree(rng, max_edges.saturating_sub(1), max_dec, noisy);
    Tree { dec: VertexDec::Multi(m1(0)), children: vec![(kern(1, rng.gen_range(0..=max_dec)), inner)] }
}
