//! Tree generators for the suites: exhaustive small sets and seeded random draws.

use planarhopf_core::deformed_positive::{bracket0, x_unit};
use planarhopf_core::free_postlie::b_plus;
use planarhopf_core::rough_model::{phi_forest, phi_tree};
use planarhopf_core::tree_core::enumerate::{forests_up_to, letters, planar_trees};
use planarhopf_core::tree_core::validate_typed;
use planarhopf_core::{EdgeDec, EdgeKind, LinComb, MultiIndex, Tree, VertexDec};
use rand::Rng;

pub fn m1(k: u32) -> MultiIndex {
    MultiIndex(vec![k])
}

pub fn kern(i: u32, a: u32) -> EdgeDec {
    EdgeDec::Typed(EdgeKind::Kernel(i), m1(a))
}

pub fn noise(i: u32) -> EdgeDec {
    EdgeDec::Typed(EdgeKind::Noise(i), m1(0))
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

fn from_parents(decs: &[VertexDec], parents: &[usize], edges: &[EdgeDec]) -> Tree {
    fn build(i: usize, decs: &[VertexDec], parents: &[usize], edges: &[EdgeDec]) -> Tree {
        let children = (i + 1..decs.len())
            .filter(|&j| parents[j] == i)
            .map(|j| (edges[j].clone(), build(j, decs, parents, edges)))
            .collect();
        Tree::new(decs[i].clone(), children)
    }
    build(0, decs, parents, edges)
}

fn with_decs(shape: &Tree, vd: &mut impl Iterator<Item = u32>, ed: &mut impl Iterator<Item = EdgeDec>) -> Tree {
    let dec = VertexDec::Multi(m1(vd.next().unwrap()));
    let children = shape.children.iter().map(|(_, c)| (ed.next().unwrap(), with_decs(c, vd, ed))).collect();
    Tree::new(dec, children)
}

fn noise_leaves_zero(t: &Tree) -> bool {
    t.children.iter().all(|(e, c)| (!e.is_noise() || c.dec.multi().is_some_and(|m| m.is_zero())) && noise_leaves_zero(c))
}

/// Valid one-dimensional typed trees with at most `max_edges` edges.
pub fn typed_trees_up_to(max_edges: usize, vdecs: &[u32], edges: &[EdgeDec]) -> Vec<Tree> {
    let mut out = Vec::new();
    for n in 1..=max_edges + 1 {
        let vs = cartesian(&vec![vdecs.to_vec(); n]);
        let es = cartesian(&vec![edges.to_vec(); n - 1]);
        for shape in planar_trees(n, &[VertexDec::Blank]) {
            for v in &vs {
                for e in &es {
                    let t = with_decs(&shape, &mut v.iter().copied(), &mut e.iter().cloned());
                    if validate_typed(&t).is_ok() && noise_leaves_zero(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// The standard small test set: decorations 0 and 1, one kernel, one noise.
pub fn small_typed(max_edges: usize) -> Vec<Tree> {
    typed_trees_up_to(max_edges, &[0, 1], &[kern(1, 0), kern(1, 1), noise(1)])
}

/// Blue trees B₊φ(ω) and φ(τ) with at most `max` vertices.
pub fn image_trees(max: usize, labs: &[&str]) -> Vec<Tree> {
    let decs = letters(labs);
    let mut out = Vec::new();
    for n in 1..max {
        for s in planar_trees(n, &decs) {
            let p = phi_tree(&s).expect("letters are indices");
            if p.size() <= max {
                out.push(p);
            }
        }
    }
    for w in forests_up_to(max - 1, &decs) {
        let p = b_plus(&phi_forest(&w).expect("letters are indices"));
        if p.size() <= max {
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn random_labelled_tree(rng: &mut impl Rng, max: usize, labs: &[&str]) -> Tree {
    let n = rng.gen_range(1..=max);
    let parents: Vec<usize> = (0..n).map(|i| if i == 0 { 0 } else { rng.gen_range(0..i) }).collect();
    let decs: Vec<VertexDec> = (0..n).map(|_| VertexDec::label(labs[rng.gen_range(0..labs.len())])).collect();
    from_parents(&decs, &parents, &vec![EdgeDec::None; n])
}

/// Random typed tree, d = 1, one kernel type, decorations up to `max_dec`.
/// With `noisy`, at most one leaf per vertex hangs from a noise edge.
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

pub fn random_planted(rng: &mut impl Rng, max_edges: usize, max_dec: u32, noisy: bool) -> Tree {
    let inner = random_typed_tree(rng, max_edges.saturating_sub(1), max_dec, noisy);
    Tree::new(VertexDec::Multi(m1(0)), vec![(kern(1, rng.gen_range(0..=max_dec)), inner)])
}

/// Random element of V: X¹, a planted tree, or a bracket of two planted trees.
pub fn random_v(rng: &mut impl Rng, max_edges: usize, max_dec: u32) -> LinComb<Tree> {
    match rng.gen_range(0..6) {
        0 => LinComb::basis(x_unit(1, 0)),
        1 => {
            let p = random_planted(rng, max_edges / 2, max_dec, true);
            let q = random_planted(rng, max_edges - max_edges / 2, max_dec, true);
            bracket0(&LinComb::basis(p), &LinComb::basis(q))
        }
        _ => LinComb::basis(random_planted(rng, max_edges, max_dec, true)),
    }
}
