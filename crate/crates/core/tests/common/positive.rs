//! Independent oracles for the deformed positive side.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use planarhopf_core::deformed_positive::*;
use planarhopf_core::tree_core::{
    binomial, to_rational, tree_regularity, EdgeDec, LinComb, MultiIndex, Rational, RegularityConfig, Tree,
    VertexDec,
};
use rand::Rng;
use rayon::prelude::*;

use super::{cartesian, kern, m1};

pub fn v(k: u32, children: Vec<(EdgeDec, Tree)>) -> Tree {
    Tree { dec: VertexDec::Multi(m1(k)), children }
}

pub fn leaf(k: u32) -> Tree {
    v(k, vec![])
}

// ---- Guin–Oudom construction on words of U(V) ----

type Words = LinComb<Vec<Letter>>;

fn letter_tree(l: &Letter) -> Tree {
    match l {
        Letter::X(i) => x_unit(1, *i),
        Letter::P(e, t) => planted(e.clone(), t.clone()),
    }
}

fn planted_letters(x: &LinComb<Tree>) -> Words {
    x.map_basis(|p| {
        assert_eq!(p.children.len(), 1, "⋆̂ of letters stays in planted trees");
        let (e, t) = p.children[0].clone();
        vec![Letter::P(e, t)]
    })
}

fn act_letter(a: &Letter, b: &Letter) -> Words {
    planted_letters(&dgraft_v_tree(&letter_tree(a), &letter_tree(b)))
}

fn act_letter_word(a: &Letter, w: &[Letter]) -> Words {
    let mut out = LinComb::zero();
    for i in 0..w.len() {
        for (mid, c) in act_letter(a, &w[i]).iter() {
            let mut nw = w[..i].to_vec();
            nw.extend(mid.iter().cloned());
            nw.extend(w[i + 1..].iter().cloned());
            out.add_term(nw, c.clone());
        }
    }
    out
}

// A ▷ B with (aA') ▷ B = a ▷ (A' ▷ B) − (a ▷ A') ▷ B.
fn act_word(a: &[Letter], b: &Words) -> Words {
    let Some((first, rest)) = a.split_first() else { return b.clone() };
    let inner = act_word(rest, b);
    let mut out = inner.flat_map(|w| act_letter_word(first, w));
    for (w, c) in act_letter_word(first, rest).iter() {
        out.add_scaled(&act_word(w, b), &-c.clone());
    }
    out
}

/// x ∗ y = x₍₁₎ (x₍₂₎ ▷ y) with letters primitive, normalised in 𝔗⁺.
pub fn go_star(x: &Tree, y: &Tree) -> LinComb<Tree> {
    let a = word_of(x);
    let b = LinComb::basis(word_of(y));
    let mut words = LinComb::zero();
    for mask in 0..(1u32 << a.len()) {
        let (left, right): (Vec<_>, Vec<_>) = a.iter().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
        let left: Vec<Letter> = left.into_iter().map(|(_, l)| l.clone()).collect();
        let right: Vec<Letter> = right.into_iter().map(|(_, l)| l.clone()).collect();
        for (w, c) in act_word(&right, &b).iter() {
            let mut nw = left.clone();
            nw.extend(w.iter().cloned());
            words.add_term(nw, c.clone());
        }
    }
    words.flat_map(|w| normalize_word(w, 1))
}

// ---- the displayed two-branch ∗₊ formula ----

fn b(n: u32, k: u32) -> Rational {
    if k > n {
        Rational::zero()
    } else {
        to_rational(binomial(n as u64, k as u64))
    }
}

fn b2(n: u32, k1: u32, k2: u32) -> Rational {
    if k1 + k2 > n {
        Rational::zero()
    } else {
        b(n, k1) * b(n - k1, k2)
    }
}

/// δ[b:β, c:γ] ∗₊ ω[a:α] expanded by its four families.
pub fn four_family(delta: u32, beta: u32, gamma: u32, omega: u32, alpha: u32, eb: u32, ec: u32, ea: u32) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    let mut put = |t: Option<Tree>, c: Rational| {
        if let Some(t) = t {
            out.add_term(t, c);
        }
    };
    let sub = |x: u32, y: u32| x.checked_sub(y);
    for d1 in 0..=delta {
        let d2 = delta - d1;
        let cd = b(delta, d1);
        for l1 in 0..=eb {
            for l2 in 0..=ec {
                let bb = || (kern(1, eb - l1), leaf(beta));
                let cc = || (kern(1, ec - l2), leaf(gamma));
                // both at the root
                put(
                    sub(omega + d1, l1 + l2).map(|r| v(r, vec![bb(), cc(), (kern(1, ea), leaf(alpha + d2))])),
                    &cd * b2(omega, l1, l2),
                );
                // β at the root, γ on α
                put(
                    sub(omega + d1, l1).zip(sub(alpha + d2, l2)).map(|(r, s)| v(r, vec![bb(), (kern(1, ea), v(s, vec![cc()]))])),
                    &cd * b(omega, l1) * b(alpha, l2),
                );
                // γ at the root, β on α
                put(
                    sub(omega + d1, l2).zip(sub(alpha + d2, l1)).map(|(r, s)| v(r, vec![cc(), (kern(1, ea), v(s, vec![bb()]))])),
                    &cd * b(omega, l2) * b(alpha, l1),
                );
                // both on α
                put(
                    sub(alpha + d2, l1 + l2).map(|s| v(omega + d1, vec![(kern(1, ea), v(s, vec![bb(), cc()]))])),
                    &cd * b2(alpha, l1, l2),
                );
            }
        }
    }
    out
}

// ---- Δ⁺₀ against ∗₊ ----

#[derive(Debug, Default)]
pub struct DualityReport {
    pub trees: usize,
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

fn max_edge_index(t: &Tree) -> u32 {
    t.children.iter().map(|(e, c)| e.index().map_or(0, |m| m.0[0]).max(max_edge_index(c))).max().unwrap_or(0)
}

/// Checks ⟨x ∗₊ y, z⟩ = ⟨x ⊗ y, Δ⁺₀ z⟩ on the set `zs` in both directions.
/// Coproduct terms are indexed by pair; each pair's product is computed once
/// and compared with every z it reaches. Pairs whose left edges all respect
/// the cap must agree exactly; for the others the truncated coefficient is a
/// lower bound.
pub fn duality_sweep(zs: &[Tree], cap: u32) -> DualityReport {
    let capm = m1(cap);
    let index: HashMap<&Tree, u32> = zs.iter().enumerate().map(|(i, z)| (z, i as u32)).collect();
    let mut by_pair: BTreeMap<(Tree, Tree), Vec<(u32, Rational)>> = BTreeMap::new();
    let coproducts: Vec<(u32, LinComb<(Tree, Tree)>)> =
        zs.par_iter().enumerate().map(|(i, z)| (i as u32, delta_plus_0(z, &capm).unwrap())).collect();
    for (i, d) in coproducts {
        for (pair, c) in d.iter() {
            by_pair.entry(pair.clone()).or_default().push((i, c.clone()));
        }
    }
    let pairs = by_pair.len();
    let mismatches: Vec<String> = by_pair
        .into_par_iter()
        .flat_map_iter(|((x, y), mut claimed)| {
            let mut bad = Vec::new();
            let prod = star_plus_tree(&x, &y).unwrap();
            let exact = max_edge_index(&x) <= cap;
            claimed.sort();
            let get = |i: u32| claimed.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| claimed[k].1.clone());
            for (i, c) in &claimed {
                let p = prod.coeff(&zs[*i as usize]);
                // a left edge above the cap may also reach z through an increment above the cap
                if !(if exact { &p == c } else { c <= &p }) {
                    bad.push(format!("Δ⁺₀({}) has {} on {} ⊗ {}, product gives {}", zs[*i as usize], c, x, y, p));
                }
            }
            if exact {
                for (z, c) in prod.iter() {
                    if let Some(&i) = index.get(z) {
                        let q = get(i).unwrap_or_else(Rational::zero);
                        if &q != c {
                            bad.push(format!("{} ∗₊ {} has {} on {}, Δ⁺₀ gives {}", x, y, c, z, q));
                        }
                    }
                }
            }
            bad
        })
        .collect();
    DualityReport { trees: zs.len(), pairs, mismatches }
}

// ---- post-Lie axioms on V ----

/// Random element of V: X¹, a planted tree, or a bracket of two planted trees.
pub fn random_v(rng: &mut impl Rng, max_edges: usize, max_dec: u32) -> LinComb<Tree> {
    match rng.gen_range(0..6) {
        0 => LinComb::basis(x_unit(1, 0)),
        1 => {
            let p = super::random_planted(rng, max_edges / 2, max_dec, true);
            let q = super::random_planted(rng, max_edges - max_edges / 2, max_dec, true);
            bracket0(&LinComb::basis(p), &LinComb::basis(q))
        }
        _ => LinComb::basis(super::random_planted(rng, max_edges, max_dec, true)),
    }
}

fn assoc(x: &LinComb<Tree>, y: &LinComb<Tree>, z: &LinComb<Tree>) -> LinComb<Tree> {
    dgraft_v(x, &dgraft_v(y, z)) - dgraft_v(&dgraft_v(x, y), z)
}

/// Both post-Lie identities for one triple; returns the failing ones.
pub fn post_lie_failures(x: &LinComb<Tree>, y: &LinComb<Tree>, z: &LinComb<Tree>) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let lhs = dgraft_v(x, &bracket0(y, z));
    let rhs = bracket0(&dgraft_v(x, y), z) + bracket0(y, &dgraft_v(x, z));
    if lhs != rhs {
        bad.push("x ⋆̂ [y,z] = [x ⋆̂ y, z] + [y, x ⋆̂ z]");
    }
    let lhs = dgraft_v(&bracket0(x, y), z);
    let rhs = assoc(x, y, z) - assoc(y, x, z);
    if lhs != rhs {
        bad.push("[x,y] ⋆̂ z = a(x,y,z) − a(y,x,z)");
    }
    bad
}

// ---- Δ⁺ by the displayed families, with weights inverted ----

/// Δ⁺ of δ[b:β, c:γ[a:α]] summed family by family. The printed weights are
/// reciprocals; the Kronecker dual of ∗₊ carries the denominators instead.
pub fn delta_plus_families(
    dv: [u32; 4],
    ev: [u32; 3],
    cfg: &RegularityConfig,
    lmax: u32,
) -> LinComb<(Tree, Tree)> {
    let [delta, beta, gamma, alpha] = dv;
    let [eb, ec, ea] = ev;
    let mut out = LinComb::zero();
    let keep = |x: &Tree| {
        (x.children.is_empty() && x.dec.multi().unwrap().is_zero()) || tree_regularity(x, cfg).unwrap() > Rational::zero()
    };
    let mut put = |x: Tree, y: Option<Tree>, c: Rational| {
        if let Some(y) = y {
            if !c.is_zero() && keep(&x) {
                out.add_term((x, y), c);
            }
        }
    };
    let s = |x: u32, y: u32| x.checked_sub(y);
    let mn = |parts: &[u32]| {
        let n: u32 = parts.iter().sum();
        let mut rest = n;
        let mut acc = Rational::one();
        for &p in parts {
            acc *= b(rest, p);
            rest -= p;
        }
        acc
    };
    // cut {b}
    for (n1, n2, n3) in itertools3(delta, gamma, alpha) {
        for l1 in 0..=lmax {
            let n = n1 + n2 + n3;
            let y = s(delta + l1, n1).zip(s(gamma, n2)).zip(s(alpha, n3)).map(|((r, g), a)| {
                v(r, vec![(kern(1, ec), v(g, vec![(kern(1, ea), leaf(a))]))])
            });
            put(v(n, vec![(kern(1, eb + l1), leaf(beta))]), y, mn(&[n1, n2, n3]) * b(delta + l1 - n1, l1));
        }
    }
    // cut {a}
    for (n1, n2, n3) in itertools3(delta, beta, gamma) {
        for l1 in 0..=lmax {
            let n = n1 + n2 + n3;
            let y = Some(v(delta - n1, vec![(kern(1, eb), leaf(beta - n2)), (kern(1, ec), leaf(gamma + l1 - n3))]));
            put(v(n, vec![(kern(1, ea + l1), leaf(alpha))]), y, mn(&[n1, n2, n3]) * b(gamma + l1 - n3, l1));
        }
    }
    // cut {b, a}
    for n1 in 0..=delta {
        for n2 in 0..=gamma {
            for l1 in 0..=lmax {
                for l2 in 0..=lmax {
                    let n = n1 + n2;
                    let c = mn(&[n1, n2]) * b(delta + l1 - n1, l1) * b(gamma + l2 - n2, l2);
                    let y = Some(v(delta + l1 - n1, vec![(kern(1, ec), leaf(gamma + l2 - n2))]));
                    let pb = (kern(1, eb + l1), leaf(beta));
                    let pa = (kern(1, ea + l2), leaf(alpha));
                    put(v(n, vec![pb.clone(), pa.clone()]), y.clone(), c.clone());
                    put(v(n, vec![pa, pb]), y, c);
                }
            }
        }
    }
    // cut {b, c}
    for n in 0..=delta {
        for l1 in 0..=lmax {
            for l2 in 0..=lmax {
                let x = v(n, vec![(kern(1, eb + l1), leaf(beta)), (kern(1, ec + l2), v(gamma, vec![(kern(1, ea), leaf(alpha))]))]);
                let r = delta + l1 + l2 - n;
                put(x, Some(leaf(r)), b2(r, l1, l2));
            }
        }
    }
    // empty cut
    for (n1, n3, n4) in itertools3(delta, beta, gamma) {
        for n2 in 0..=alpha {
            let n = n1 + n2 + n3 + n4;
            let y = v(delta - n1, vec![(kern(1, eb), leaf(beta - n3)), (kern(1, ec), v(gamma - n4, vec![(kern(1, ea), leaf(alpha - n2))]))]);
            put(leaf(n), Some(y), mn(&[n1, n2, n3, n4]));
        }
    }
    out
}

fn itertools3(a: u32, b: u32, c: u32) -> Vec<(u32, u32, u32)> {
    cartesian(&[(0..=a).collect(), (0..=b).collect(), (0..=c).collect()])
        .into_iter()
        .map(|v: Vec<u32>| (v[0], v[1], v[2]))
        .collect()
}

pub fn one_d(t: &Tree) -> MultiIndex {
    t.dec.multi().unwrap().clone()
}
