#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use planarhopf_core::deformed_negative::*;
use planarhopf_core::deformed_positive::multinomial;
use planarhopf_core::tree_core::{
    to_rational, tree_regularity, EdgeDec, LinComb, Multiset, Rational, RegularityConfig, TensorSum, Tree,
};
use rand::Rng;
use rayon::prelude::*;

use super::positive::{leaf, v};
use super::{cartesian, kern, m1, noise, random_typed_tree};

fn c(n: u32, parts: &[u32]) -> BigInt {
    multinomial(&m1(n), &parts.iter().map(|&p| m1(p)).collect::<Vec<_>>())
}

fn upto(n: u32) -> Vec<u32> {
    (0..=n).collect()
}

// ---- insertion at k5, written out as the nine assignment families ----

/// The two trees of the insertion example: k1[d1:k2, d2:k3] and
/// k4[d3:k5[d4:k7[d5:k8], d6:k9], d7:k6]. `k` holds k1..k9, `d` holds d1..d7.
pub fn insertion_pair(k: &[u32; 9], d: &[u32; 7]) -> (Tree, Tree) {
    let t1 = v(k[0], vec![(kern(1, d[0]), leaf(k[1])), (kern(1, d[1]), leaf(k[2]))]);
    let k5 = v(k[4], vec![(kern(1, d[3]), v(k[6], vec![(kern(1, d[4]), leaf(k[7]))])), (kern(1, d[5]), leaf(k[8]))]);
    let t2 = v(k[3], vec![(kern(1, d[2]), k5), (kern(1, d[6]), leaf(k[5]))]);
    (t1, t2)
}

/// Brute-force sum over the targets of the two branches of k5, the split of
/// k5 over k1,k2,k3 and, when deforming, the increments ℓ1 ≤ d4, ℓ2 ≤ d6.
pub fn insertion_family(k: &[u32; 9], d: &[u32; 7], deform: bool) -> LinComb<Tree> {
    let b4 = v(k[6], vec![(kern(1, d[4]), leaf(k[7]))]);
    let b6 = leaf(k[8]);
    let mut out = LinComb::zero();
    let ls = |n: u32| if deform { upto(n) } else { vec![0] };
    for a4 in 0..3 {
        for a6 in 0..3 {
            for ds in cartesian(&[upto(k[4]), upto(k[4]), upto(k[4])]) {
                if ds.iter().sum::<u32>() != k[4] {
                    continue;
                }
                for l1 in ls(d[3]) {
                    for l2 in ls(d[5]) {
                        let mut coeff = c(k[4], &ds);
                        let mut node_dec = [k[0], k[1], k[2]];
                        let mut grafts: [Vec<(EdgeDec, Tree)>; 3] = Default::default();
                        grafts[a4].push((kern(1, d[3] - l1), b4.clone()));
                        grafts[a6].push((kern(1, d[5] - l2), b6.clone()));
                        for i in 0..3 {
                            let at: Vec<u32> = [(a4, l1), (a6, l2)].iter().filter(|(a, _)| *a == i).map(|(_, l)| *l).collect();
                            coeff *= c(node_dec[i], &at);
                            node_dec[i] = (node_dec[i] + ds[i]).saturating_sub(at.iter().sum());
                        }
                        if coeff.is_zero() {
                            continue;
                        }
                        let mk = |i: usize, rest: Vec<(EdgeDec, Tree)>| {
                            let mut ch = grafts[i].clone();
                            ch.extend(rest);
                            v(node_dec[i], ch)
                        };
                        let n2 = mk(1, vec![]);
                        let n3 = mk(2, vec![]);
                        let n1 = mk(0, vec![(kern(1, d[0]), n2), (kern(1, d[1]), n3)]);
                        let t = v(k[3], vec![(kern(1, d[2]), n1), (kern(1, d[6]), leaf(k[5]))]);
                        out.add_term(t, to_rational(coeff));
                    }
                }
            }
        }
    }
    out
}

// ---- the coaction example, family by family ----

/// k1[d1:k2, d2:k3[d3:k4], Ξ:k5] with `k` = k1..k4 and `d` = d1..d3.
pub fn coaction_tree(k: &[u32; 4], d: &[u32; 3]) -> Tree {
    v(k[0], vec![(kern(1, d[0]), leaf(k[1])), (kern(1, d[1]), v(k[2], vec![(kern(1, d[2]), leaf(k[3]))])), (noise(1), leaf(0))])
}

/// The six displayed families of Δ⁻ on `coaction_tree`, plus the two the
/// display leaves out: the empty family and k3[d3:k4] on its own. Weights
/// are the multinomials themselves (Kronecker pairing). A term survives only
/// when every extracted tree is negative.
pub fn coaction_families(k: &[u32; 4], d: &[u32; 3], cfg: &RegularityConfig, lmax: u32) -> TensorSum<Multiset<Tree>, Tree> {
    let [k1, k2, k3, k4] = *k;
    let [d1, d2, d3] = *d;
    let xi = || (noise(1), leaf(0));
    let neg = |t: &Tree| tree_regularity(t, cfg).unwrap() < Rational::zero();
    let mut out: TensorSum<Multiset<Tree>, Tree> = LinComb::zero();
    let mut add = |left: Vec<Tree>, rights: Vec<Tree>, coeff: BigInt| {
        if coeff.is_zero() || !left.iter().all(|t| neg(t)) {
            return;
        }
        let m = Multiset::from_vec(left);
        for r in rights {
            out.add_term((m.clone(), r), to_rational(coeff.clone()));
        }
    };
    add(vec![], vec![coaction_tree(k, d)], BigInt::one());
    let l = upto(lmax);
    // the whole tree
    for ds in cartesian(&[upto(k1), upto(k2), upto(k3), upto(k4)]) {
        let s: u32 = ds.iter().sum();
        let left = v(k1 - ds[0], vec![(kern(1, d1), leaf(k2 - ds[1])), (kern(1, d2), v(k3 - ds[2], vec![(kern(1, d3), leaf(k4 - ds[3]))])), xi()]);
        add(vec![left], vec![leaf(s)], c(s, &ds));
    }
    // k1[Ξ:k5]
    for dl in upto(k1) {
        for ls in cartesian(&[l.clone(), l.clone()]) {
            let n = k1 - dl + ls[0] + ls[1];
            let left = v(n, vec![xi()]);
            let right = v(dl, vec![(kern(1, d1 + ls[0]), leaf(k2)), (kern(1, d2 + ls[1]), v(k3, vec![(kern(1, d3), leaf(k4))]))]);
            add(vec![left], vec![right], c(n, &ls));
        }
    }
    // k1[d2:k3, Ξ:k5]
    for ds in cartesian(&[upto(k1), upto(k3)]) {
        for ls in cartesian(&[l.clone(), l.clone()]) {
            let (n1, n3) = (k1 - ds[0] + ls[0], k3 - ds[1] + ls[1]);
            let s = ds[0] + ds[1];
            let left = v(n1, vec![(kern(1, d2), leaf(n3)), xi()]);
            let a = (kern(1, d1 + ls[0]), leaf(k2));
            let b = (kern(1, d3 + ls[1]), leaf(k4));
            let rights = vec![v(s, vec![a.clone(), b.clone()]), v(s, vec![b, a])];
            add(vec![left], rights, c(s, &ds) * c(n1, &[ls[0]]) * c(n3, &[ls[1]]));
        }
    }
    // k1[d2:k3[d3:k4], Ξ:k5]
    for ds in cartesian(&[upto(k1), upto(k3), upto(k4)]) {
        for l1 in l.clone() {
            let n1 = k1 - ds[0] + l1;
            let s: u32 = ds.iter().sum();
            let left = v(n1, vec![(kern(1, d2), v(k3 - ds[1], vec![(kern(1, d3), leaf(k4 - ds[2]))])), xi()]);
            let right = v(s, vec![(kern(1, d1 + l1), leaf(k2))]);
            add(vec![left], vec![right], c(s, &ds) * c(n1, &[l1]));
        }
    }
    // k1[d1:k2, d2:k3, Ξ:k5]
    for ds in cartesian(&[upto(k1), upto(k2), upto(k3)]) {
        for l1 in l.clone() {
            let n3 = k3 - ds[2] + l1;
            let s: u32 = ds.iter().sum();
            let left = v(k1 - ds[0], vec![(kern(1, d1), leaf(k2 - ds[1])), (kern(1, d2), leaf(n3)), xi()]);
            let right = v(s, vec![(kern(1, d3 + l1), leaf(k4))]);
            add(vec![left], vec![right], c(s, &ds) * c(n3, &[l1]));
        }
    }
    // k1[Ξ:k5] and k3[d3:k4] together
    for dl in upto(k1) {
        for ls in cartesian(&[l.clone(), l.clone()]) {
            for dp in cartesian(&[upto(k3), upto(k4)]) {
                let n = k1 - dl + ls[0] + ls[1];
                let sp = dp[0] + dp[1];
                let a = v(n, vec![xi()]);
                let b = v(k3 - dp[0], vec![(kern(1, d3), leaf(k4 - dp[1]))]);
                let right = v(dl, vec![(kern(1, d1 + ls[0]), leaf(k2)), (kern(1, d2 + ls[1]), leaf(sp))]);
                add(vec![a, b], vec![right], c(sp, &dp) * c(n, &ls));
            }
        }
    }
    // k3[d3:k4] alone
    for dp in cartesian(&[upto(k3), upto(k4)]) {
        let sp = dp[0] + dp[1];
        let b = v(k3 - dp[0], vec![(kern(1, d3), leaf(k4 - dp[1]))]);
        let right = v(k1, vec![(kern(1, d1), leaf(k2)), (kern(1, d2), leaf(sp)), xi()]);
        add(vec![b], vec![right], c(sp, &dp));
    }
    out
}

// ---- Guin–Oudom recursion and the deshuffle coproduct ----

/// ω ⋄̂ σ through τω ⋄̂ σ = τ ⋄̂ (ω ⋄̂ σ) − (τ ⋄̂ ω) ⋄̂ σ, where τ ⋄̂ ω acts on
/// the factors of ω as a derivation.
pub fn go_multi(w: &[Tree], s: &LinComb<Tree>) -> LinComb<Tree> {
    let Some((first, rest)) = w.split_first() else { return s.clone() };
    let inner = go_multi(rest, s);
    let mut out = dinsert_lc(&LinComb::basis(first.clone()), &inner);
    for i in 0..rest.len() {
        for (ti, ci) in dinsert(first, &rest[i]).iter() {
            let mut w2 = rest.to_vec();
            w2[i] = ti.clone();
            out.add_scaled(&go_multi(&w2, s), &-ci.clone());
        }
    }
    out
}

/// Δ_⧢ on a monomial: every split of its factors, positions kept distinct.
pub fn deshuffle(w: &Multiset<Tree>) -> TensorSum<Multiset<Tree>, Multiset<Tree>> {
    let items = w.items();
    let mut out = LinComb::zero();
    for mask in 0u32..(1 << items.len()) {
        let (a, b): (Vec<_>, Vec<_>) = items.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
        let a = Multiset::from_vec(a.into_iter().map(|(_, t)| t.clone()).collect());
        let b = Multiset::from_vec(b.into_iter().map(|(_, t)| t.clone()).collect());
        out.add_term((a, b), Rational::one());
    }
    out
}

pub fn symmetry(w: &Multiset<Tree>) -> Rational {
    let mut counts: BTreeMap<&Tree, u64> = BTreeMap::new();
    for t in w.items() {
        *counts.entry(t).or_default() += 1;
    }
    counts.values().fold(Rational::one(), |acc, &n| acc * to_rational((1..=n).map(BigInt::from).product()))
}

pub fn is_negative(t: &Tree, cfg: &RegularityConfig) -> bool {
    tree_regularity(t, cfg).is_ok_and(|r| r < Rational::zero())
}

/// Random tree of negative regularity, possibly with a noise leaf.
pub fn random_negative(rng: &mut impl Rng, cfg: &RegularityConfig, max_edges: usize) -> Tree {
    loop {
        let t = random_typed_tree(rng, max_edges, 1, true);
        if is_negative(&t, cfg) {
            return t;
        }
    }
}

pub struct MinusReport {
    pub trees: usize,
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

/// Checks ⟨ω ⋄̂ τ', τ⟩ = sym(ω) ⟨ω ⊗ τ', Δ⁻τ⟩ over `zs`, in both directions.
pub fn minus_duality_sweep(zs: &[Tree], cfg: &RegularityConfig) -> MinusReport {
    let index: HashMap<&Tree, u32> = zs.iter().enumerate().map(|(i, z)| (z, i as u32)).collect();
    let mut by_pair: BTreeMap<(Multiset<Tree>, Tree), Vec<(u32, Rational)>> = BTreeMap::new();
    let coactions: Vec<(u32, TensorSum<Multiset<Tree>, Tree>)> =
        zs.par_iter().enumerate().map(|(i, z)| (i as u32, delta_minus(z, cfg).unwrap())).collect();
    for (i, d) in coactions {
        for (pair, c) in d.iter() {
            by_pair.entry(pair.clone()).or_default().push((i, c.clone()));
        }
    }
    let pairs = by_pair.len();
    let mismatches = by_pair
        .into_par_iter()
        .flat_map_iter(|((w, tp), mut claimed)| {
            let mut bad = Vec::new();
            let sym = symmetry(&w);
            let prod = dinsert_multi(&w, &tp);
            claimed.sort();
            for (i, c) in &claimed {
                let p = prod.coeff(&zs[*i as usize]);
                if p != c * &sym {
                    bad.push(format!("Δ⁻({}) has {} on {} ⊗ {}, insertion gives {}", zs[*i as usize], c, w, tp, p));
                }
            }
            for (z, p) in prod.iter() {
                if let Some(&i) = index.get(z) {
                    let q = claimed.iter().find(|(j, _)| *j == i).map_or_else(Rational::zero, |(_, c)| c.clone());
                    if &(q.clone() * &sym) != p {
                        bad.push(format!("{} ⋄̂ {} has {} on {}, Δ⁻ gives {}", w, tp, p, z, q));
                    }
                }
            }
            bad
        })
        .collect();
    MinusReport { trees: zs.len(), pairs, mismatches }
}
