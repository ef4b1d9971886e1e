//! Insertion of negative trees, the Hopf algebra (S(𝔗⁻), ∗₋), the
//! renormalisation coaction Δ⁻ with extended decorations, and its
//! cointeraction with Δ⁺.
//!
//! Δ⁻ weights are the Kronecker duals of deformed insertion, so the pairing of
//! a monomial with itself is its symmetry factor.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::deformed_positive::{
    bounded_tuples, cartesian, compositions, dec, delta_plus_core, edge_index, is_noise_vertex, multinomial, msum,
    rs_tree, shift_edge, star_plus_tree, ExTree, PlusBound,
};
use crate::free_postlie::shuffle_many;
use crate::tree_core::{
    to_rational, EdgeDec, Error, LinComb, MultiIndex, Multiset, Path, Rational, RegularityConfig, Result, Tensor3,
    TensorSum, Tree, VertexDec,
};

/// A commutative monomial of negative trees.
pub type NegMonomial = Multiset<Tree>;

fn noise_adjacent(t: &Tree, v: &[usize]) -> bool {
    is_noise_vertex(t, v) || t.at(v).children.iter().any(|(e, _)| e.is_noise())
}

/// The vertex set Ñ: vertices touching no noise edge, in preorder.
pub fn insertable(t: &Tree) -> Vec<Path> {
    t.paths().into_iter().filter(|p| !noise_adjacent(t, p)).collect()
}

fn check_insertable(t: &Tree, v: &[usize]) -> Result<()> {
    if noise_adjacent(t, v) {
        let i = t.paths().iter().position(|p| p == v).unwrap_or(0);
        return Err(Error::NoiseAdjacentVertex(i));
    }
    Ok(())
}

/// The subtree rooted at v.
pub fn p_v(t: &Tree, v: &[usize]) -> Tree {
    t.at(v).clone()
}

/// τ with the branches of v removed and its decoration set to zero.
pub fn t_v(t: &Tree, v: &[usize]) -> Tree {
    let mut s = t.clone();
    let n = s.at_mut(v);
    n.dec = VertexDec::Multi(MultiIndex::zeros(dec(n).dim()));
    n.children.clear();
    s
}

/// x ⟶_v t: the root of x is identified with v. Decorations add and the
/// branches of x come first.
pub fn identify_at(x: &Tree, v: &[usize], t: &Tree) -> Tree {
    let mut s = t.clone();
    let n = s.at_mut(v);
    n.dec = VertexDec::Multi(dec(x).add(dec(n)));
    let mut children = x.children.clone();
    children.append(&mut n.children);
    n.children = children;
    s
}

// Places `branches` on the non-noise vertices of `t`, leftmost and in order at
// each target, and spreads `raise` over the same vertices. With `deform` a
// branch lowers its edge index by ℓ against its target's original decoration.
fn place(t: &Tree, noise: bool, branches: &[(EdgeDec, Tree)], raise: &MultiIndex, deform: bool) -> Vec<(Tree, BigInt)> {
    if noise {
        return if branches.is_empty() && raise.is_zero() { vec![(t.clone(), BigInt::one())] } else { vec![] };
    }
    let d = raise.dim();
    let nb = branches.len();
    let nc = t.children.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << nb) {
        let (here, rest): (Vec<usize>, Vec<usize>) = (0..nb).partition(|i| mask >> i & 1 == 1);
        if nc == 0 && !rest.is_empty() {
            continue;
        }
        let local: Vec<(MultiIndex, Vec<(EdgeDec, Tree)>, BigInt)> = if deform {
            let opts: Vec<Vec<MultiIndex>> = here.iter().map(|&b| edge_index(&branches[b].0).below()).collect();
            cartesian(&opts)
                .into_iter()
                .filter_map(|ls| {
                    let c = multinomial(dec(t), &ls);
                    if c.is_zero() {
                        return None;
                    }
                    let edges = here
                        .iter()
                        .zip(&ls)
                        .map(|(&b, l)| (shift_edge(&branches[b].0, &MultiIndex::zeros(d), l).expect("ℓ below index"), branches[b].1.clone()))
                        .collect();
                    Some((dec(t).checked_sub(&msum(&ls, d)).expect("bounded"), edges, c))
                })
                .collect()
        } else {
            vec![(dec(t).clone(), here.iter().map(|&b| branches[b].clone()).collect(), BigInt::one())]
        };
        for assign in cartesian(&vec![(0..nc).collect::<Vec<_>>(); rest.len()]) {
            let mut sub: Vec<Vec<(EdgeDec, Tree)>> = vec![Vec::new(); nc];
            for (k, &b) in rest.iter().enumerate() {
                sub[assign[k]].push(branches[b].clone());
            }
            for parts in compositions(raise, nc + 1) {
                let kids: Vec<Vec<(Tree, BigInt)>> = t
                    .children
                    .iter()
                    .enumerate()
                    .map(|(i, (e, c))| place(c, e.is_noise(), &sub[i], &parts[i + 1], deform))
                    .collect();
                if kids.iter().any(|k| k.is_empty()) {
                    continue;
                }
                let c0 = multinomial(raise, &parts);
                for combo in cartesian(&kids) {
                    let ck: BigInt = combo.iter().map(|(_, c)| c).product();
                    for (nd, edges, cl) in &local {
                        let mut children = edges.clone();
                        children.extend(t.children.iter().zip(&combo).map(|((e, _), (c, _))| (e.clone(), c.clone())));
                        let node = Tree { dec: VertexDec::Multi(nd.add(&parts[0])), children };
                        out.push((node, &c0 * &ck * cl));
                    }
                }
            }
        }
    }
    out
}

fn insert_at(t1: &Tree, v: &[usize], t2: &Tree, deform: bool) -> Result<LinComb<Tree>> {
    check_insertable(t2, v)?;
    let node = t2.at(v);
    let mut out = LinComb::zero();
    for (r, c) in place(t1, false, &node.children, dec(node), deform) {
        let mut s = t2.clone();
        *s.at_mut(v) = r;
        out.add_term(s, to_rational(c));
    }
    Ok(out)
}

/// τ₁ ◇_v τ₂: plain insertion of τ₁ at v.
pub fn insert_v(t1: &Tree, v: &[usize], t2: &Tree) -> Result<LinComb<Tree>> {
    insert_at(t1, v, t2, false)
}

/// τ₁ ◇ τ₂, summed over Ñ.
pub fn insert(t1: &Tree, t2: &Tree) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for v in insertable(t2) {
        out += &insert_at(t1, &v, t2, false).expect("insertable");
    }
    out
}

/// τ₁ ⋄̂_v τ₂: deformed insertion, the branches of v deform-grafted onto τ₁.
pub fn dinsert_v(t1: &Tree, v: &[usize], t2: &Tree) -> Result<LinComb<Tree>> {
    insert_at(t1, v, t2, true)
}

pub fn dinsert(t1: &Tree, t2: &Tree) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for v in insertable(t2) {
        out += &insert_at(t1, &v, t2, true).expect("insertable");
    }
    out
}

/// Second route to ⋄̂_v: (P_v(τ₂) ∗₊ τ₁) ⟶_v T_v(τ₂).
pub fn dinsert_lemma_v(t1: &Tree, v: &[usize], t2: &Tree) -> Result<LinComb<Tree>> {
    check_insertable(t2, v)?;
    let base = t_v(t2, v);
    Ok(star_plus_tree(&p_v(t2, v), t1)?.map_basis(|r| identify_at(r, v, &base)))
}

pub fn dinsert_lemma(t1: &Tree, t2: &Tree) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for v in insertable(t2) {
        out += &dinsert_lemma_v(t1, &v, t2).expect("insertable");
    }
    out
}

pub fn dinsert_lc(x: &LinComb<Tree>, y: &LinComb<Tree>) -> LinComb<Tree> {
    x.bilinear(y, dinsert)
}

fn multi_place(t: &Tree, noise: bool, factors: &[&Tree]) -> Vec<(Tree, BigInt)> {
    let nc = t.children.len();
    let open = !noise && !t.children.iter().any(|(e, _)| e.is_noise());
    let mut takes: Vec<Option<usize>> = vec![None];
    if open {
        takes.extend((0..factors.len()).map(Some));
    }
    let mut out = Vec::new();
    for take in takes {
        let rest: Vec<&Tree> = factors.iter().enumerate().filter(|(i, _)| Some(*i) != take).map(|(_, f)| *f).collect();
        if nc == 0 && !rest.is_empty() {
            continue;
        }
        for assign in cartesian(&vec![(0..nc).collect::<Vec<_>>(); rest.len()]) {
            let mut sub: Vec<Vec<&Tree>> = vec![Vec::new(); nc];
            for (k, f) in rest.iter().enumerate() {
                sub[assign[k]].push(f);
            }
            let kids: Vec<Vec<(Tree, BigInt)>> =
                t.children.iter().enumerate().map(|(i, (e, c))| multi_place(c, e.is_noise(), &sub[i])).collect();
            if kids.iter().any(|k| k.is_empty()) {
                continue;
            }
            for combo in cartesian(&kids) {
                let ck: BigInt = combo.iter().map(|(_, c)| c).product();
                let children: Vec<(EdgeDec, Tree)> =
                    t.children.iter().zip(&combo).map(|((e, _), (c, _))| (e.clone(), c.clone())).collect();
                match take {
                    None => out.push((Tree { dec: t.dec.clone(), children }, ck)),
                    Some(i) => {
                        for (r, c) in place(factors[i], false, &children, dec(t), true) {
                            out.push((r, c * &ck));
                        }
                    }
                }
            }
        }
    }
    out
}

/// ω ⋄̂ τ: the factors of ω go to pairwise distinct vertices of Ñ and are
/// inserted simultaneously. Zero when ω has more factors than τ has vertices.
pub fn dinsert_multi(w: &NegMonomial, t: &Tree) -> LinComb<Tree> {
    let factors: Vec<&Tree> = w.items().iter().collect();
    let mut out = LinComb::zero();
    for (r, c) in multi_place(t, false, &factors) {
        out.add_term(r, to_rational(c));
    }
    out
}

/// ω₁ ∗₋ ω₂ = ω₁₍₁₎ (ω₁₍₂₎ ⋄̂ ω₂), with ⋄̂ extended to products by the
/// deshuffle coproduct.
pub fn star_minus(w1: &NegMonomial, w2: &NegMonomial) -> LinComb<NegMonomial> {
    let a = w1.items();
    let b = w2.items();
    let mut out = LinComb::zero();
    for assign in cartesian(&vec![(0..=b.len()).collect::<Vec<_>>(); a.len()]) {
        let outside: Vec<Tree> = a.iter().zip(&assign).filter(|(_, &j)| j == 0).map(|(t, _)| t.clone()).collect();
        let mut acc: LinComb<Vec<Tree>> = LinComb::basis(outside);
        for (j, target) in b.iter().enumerate() {
            let sub = Multiset::from_vec(a.iter().zip(&assign).filter(|(_, &k)| k == j + 1).map(|(t, _)| t.clone()).collect());
            let here = dinsert_multi(&sub, target);
            acc = acc.bilinear(&here, |v, t| {
                let mut v = v.clone();
                v.push(t.clone());
                LinComb::basis(v)
            });
        }
        out += &acc.map_basis(|v| Multiset::from_vec(v.clone()));
    }
    out
}

pub fn star_minus_lc(x: &LinComb<NegMonomial>, y: &LinComb<NegMonomial>) -> LinComb<NegMonomial> {
    x.bilinear(y, star_minus)
}

struct Flat<'a> {
    nodes: Vec<&'a ExTree>,
    edge: Vec<Option<EdgeDec>>,
    kids: Vec<Vec<usize>>,
}

impl<'a> Flat<'a> {
    fn new(z: &'a ExTree) -> Flat<'a> {
        fn go<'a>(t: &'a ExTree, e: Option<EdgeDec>, f: &mut Flat<'a>) -> usize {
            let me = f.nodes.len();
            f.nodes.push(t);
            f.edge.push(e);
            f.kids.push(Vec::new());
            for (e, c) in &t.children {
                let k = go(c, Some(e.clone()), f);
                f.kids[me].push(k);
            }
            me
        }
        let mut f = Flat { nodes: Vec::new(), edge: Vec::new(), kids: Vec::new() };
        go(z, None, &mut f);
        f
    }

    fn noise(&self, v: usize) -> bool {
        self.edge[v].as_ref().is_some_and(|e| e.is_noise())
    }
}

struct Block {
    root: usize,
    verts: Vec<usize>,
}

// Connected vertex sets whose edges at each vertex form a suffix of its
// children and which swallow every noise edge they touch.
fn blocks_at(f: &Flat, root: usize) -> Vec<Vec<usize>> {
    fn grow(f: &Flat, pending: &[usize], cur: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&u, rest)) = pending.split_first() else {
            out.push(cur);
            return;
        };
        let kids = &f.kids[u];
        let last = kids.iter().position(|&c| f.noise(c)).unwrap_or(kids.len());
        for p in 0..=last {
            let mut pend = rest.to_vec();
            pend.extend(&kids[p..]);
            let mut next = cur.clone();
            next.extend(&kids[p..]);
            grow(f, &pend, next, out);
        }
    }
    let mut out = Vec::new();
    grow(f, &[root], vec![root], &mut out);
    out
}

fn candidate_blocks(f: &Flat, cfg: &RegularityConfig, nonroot: bool) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    for root in usize::from(nonroot)..f.nodes.len() {
        if f.noise(root) {
            continue;
        }
        for mut verts in blocks_at(f, root) {
            if verts.len() < 2 {
                continue;
            }
            let mut w = Rational::zero();
            for &v in &verts[1..] {
                w += cfg.edge_weight(f.edge[v].as_ref().expect("non-root"))?;
            }
            // vertex decorations only add, so the edges alone must already be negative
            if !w.is_negative() {
                continue;
            }
            verts.sort_unstable();
            out.push(Block { root, verts });
        }
    }
    Ok(out)
}

struct Choice {
    coeff: BigInt,
    extracted: Tree,
    k: MultiIndex,
    ext: Rational,
    ell: Vec<(usize, MultiIndex)>,
}

fn block_choices(f: &Flat, b: &Block, cfg: &RegularityConfig, d: usize) -> Result<Vec<Choice>> {
    let inside = |v: usize| b.verts.binary_search(&v).is_ok();
    let mut e_w = Rational::zero();
    for &v in &b.verts[1..] {
        e_w += cfg.edge_weight(f.edge[v].as_ref().expect("non-root"))?;
    }
    let d_tot: u64 = b.verts.iter().map(|&v| f.nodes[v].dec.total()).sum();
    let ext_sum: Rational = b.verts.iter().map(|&v| f.nodes[v].ext.clone()).sum();
    let outs: Vec<(usize, usize)> =
        b.verts.iter().flat_map(|&u| f.kids[u].iter().filter(|&&c| !inside(c)).map(move |&c| (u, c))).collect();
    let deltas = cartesian(
        &b.verts
            .iter()
            .map(|&v| if f.noise(v) { vec![MultiIndex::zeros(d)] } else { f.nodes[v].dec.below() })
            .collect::<Vec<_>>(),
    );
    let mut out = Vec::new();
    for ds in deltas {
        let k = msum(&ds, d);
        // extracted regularity is d_tot − |k| + Σ|ℓ| + e_w, which must stay negative
        let room = Rational::from_integer(BigInt::from(k.total())) - Rational::from_integer(BigInt::from(d_tot)) - &e_w;
        if !room.is_positive() {
            continue;
        }
        let budget = u32::try_from(room.ceil().to_integer() - 1).unwrap_or(u32::MAX);
        let ck = multinomial(&k, &ds);
        for ls in bounded_tuples(outs.len(), d, budget) {
            let mut coeff = ck.clone();
            let mut decs = Vec::with_capacity(b.verts.len());
            for (i, &u) in b.verts.iter().enumerate() {
                let at: Vec<MultiIndex> = outs.iter().zip(&ls).filter(|((s, _), _)| *s == u).map(|(_, l)| l.clone()).collect();
                let n = f.nodes[u].dec.checked_sub(&ds[i]).expect("δ below").add(&msum(&at, d));
                coeff *= multinomial(&n, &at);
                decs.push(n);
            }
            let reg = Rational::from_integer(BigInt::from(decs.iter().map(|m| m.total()).sum::<u64>())) + &e_w;
            if !reg.is_negative() {
                continue;
            }
            let extracted = extract(f, b, &decs, b.root);
            out.push(Choice {
                coeff,
                extracted,
                k: k.clone(),
                ext: reg + &ext_sum,
                ell: outs.iter().map(|&(_, c)| c).zip(ls.iter().cloned()).collect(),
            });
        }
    }
    Ok(out)
}

fn extract(f: &Flat, b: &Block, decs: &[MultiIndex], v: usize) -> Tree {
    let i = b.verts.binary_search(&v).expect("block vertex");
    let children = f.kids[v]
        .iter()
        .filter(|c| b.verts.binary_search(c).is_ok())
        .map(|&c| (f.edge[c].clone().expect("edge"), extract(f, b, decs, c)))
        .collect();
    Tree { dec: VertexDec::Multi(decs[i].clone()), children }
}

struct Family<'a> {
    blocks: Vec<&'a Block>,
    choices: Vec<&'a Choice>,
    owner: Vec<Option<usize>>,
    ell: Vec<Option<MultiIndex>>,
    write_ext: bool,
}

fn contract(f: &Flat, fam: &Family, v: usize, d: usize) -> Vec<ExTree> {
    let branch = |c: usize, l: Option<&MultiIndex>| -> Vec<(EdgeDec, ExTree)> {
        let e = f.edge[c].clone().expect("edge");
        let e = match l {
            Some(l) => shift_edge(&e, l, &MultiIndex::zeros(d)).expect("typed"),
            None => e,
        };
        contract(f, fam, c, d).into_iter().map(|t| (e.clone(), t)).collect()
    };
    match fam.owner[v] {
        None => {
            let kids: Vec<Vec<(EdgeDec, ExTree)>> = f.kids[v].iter().map(|&c| branch(c, None)).collect();
            let n = f.nodes[v];
            cartesian(&kids).into_iter().map(|children| ExTree { dec: n.dec.clone(), ext: n.ext.clone(), children }).collect()
        }
        Some(bi) => {
            let b = fam.blocks[bi];
            debug_assert_eq!(b.root, v);
            let ch = fam.choices[bi];
            let groups: Vec<Vec<usize>> = b
                .verts
                .iter()
                .map(|&u| f.kids[u].iter().copied().filter(|c| b.verts.binary_search(c).is_err()).collect())
                .collect();
            let alts: Vec<(usize, Vec<(EdgeDec, ExTree)>)> =
                groups.iter().flatten().map(|&c| (c, branch(c, fam.ell[c].as_ref()))).collect();
            let ext = if fam.write_ext { ch.ext.clone() } else { Rational::zero() };
            let mut out = Vec::new();
            for order in shuffle_many(&groups) {
                let lists: Vec<Vec<(EdgeDec, ExTree)>> =
                    order.iter().map(|c| alts.iter().find(|(k, _)| k == c).expect("child").1.clone()).collect();
                for children in cartesian(&lists) {
                    out.push(ExTree { dec: ch.k.clone(), ext: ext.clone(), children });
                }
            }
            out
        }
    }
}

/// Δ⁻ on extended trees. Sums over families of disjoint negative blocks, the
/// empty family included; `nonroot` keeps the root out of every block and
/// `write_ext` stores each block's |·|₊ on its contraction vertex.
pub fn delta_minus_core(
    z: &ExTree,
    cfg: &RegularityConfig,
    nonroot: bool,
    write_ext: bool,
) -> Result<TensorSum<NegMonomial, ExTree>> {
    let d = z.dec.dim();
    let f = Flat::new(z);
    let n = f.nodes.len();
    if n > 128 {
        return Err(Error::TruncationExceeded(format!("{} vertices", n)));
    }
    let blocks = candidate_blocks(&f, cfg, nonroot)?;
    let masks: Vec<u128> = blocks.iter().map(|b| b.verts.iter().fold(0u128, |m, &v| m | 1 << v)).collect();
    let choices: Vec<Vec<Choice>> = blocks.iter().map(|b| block_choices(&f, b, cfg, d)).collect::<Result<_>>()?;

    let mut families: Vec<Vec<usize>> = Vec::new();
    fn pick(i: usize, used: u128, cur: &mut Vec<usize>, masks: &[u128], out: &mut Vec<Vec<usize>>) {
        if i == masks.len() {
            out.push(cur.clone());
            return;
        }
        pick(i + 1, used, cur, masks, out);
        if used & masks[i] == 0 {
            cur.push(i);
            pick(i + 1, used | masks[i], cur, masks, out);
            cur.pop();
        }
    }
    pick(0, 0, &mut Vec::new(), &masks, &mut families);

    let parts: Vec<TensorSum<NegMonomial, ExTree>> = families
        .par_iter()
        .map(|fam| {
            let mut out = LinComb::zero();
            let opts: Vec<Vec<usize>> = fam.iter().map(|&b| (0..choices[b].len()).collect()).collect();
            for pickc in cartesian(&opts) {
                let mut owner = vec![None; n];
                let mut ell = vec![None; n];
                let mut coeff = BigInt::one();
                let mut left = Vec::new();
                let mut fb = Vec::new();
                let mut fc = Vec::new();
                for (slot, (&b, &ci)) in fam.iter().zip(&pickc).enumerate() {
                    let ch = &choices[b][ci];
                    for &v in &blocks[b].verts {
                        owner[v] = Some(slot);
                    }
                    for (c, l) in &ch.ell {
                        ell[*c] = Some(l.clone());
                    }
                    coeff *= &ch.coeff;
                    left.push(ch.extracted.clone());
                    fb.push(&blocks[b]);
                    fc.push(ch);
                }
                // only block roots are visited, other block vertices are skipped by the contraction
                let family = Family { blocks: fb, choices: fc, owner, ell, write_ext };
                let mono = Multiset::from_vec(left);
                let c = to_rational(coeff);
                for r in contract(&f, &family, 0, d) {
                    out.add_term((mono.clone(), r), c.clone());
                }
            }
            out
        })
        .collect();
    let mut out = LinComb::zero();
    for p in parts {
        out += &p;
    }
    Ok(out)
}

fn plain_right(x: TensorSum<NegMonomial, ExTree>) -> TensorSum<NegMonomial, Tree> {
    x.map_basis(|(a, b)| (a.clone(), b.to_tree()))
}

/// Δ⁻: negative monomial ⊗ contracted tree.
pub fn delta_minus(t: &Tree, cfg: &RegularityConfig) -> Result<TensorSum<NegMonomial, Tree>> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    Ok(plain_right(delta_minus_core(&z, cfg, false, false)?))
}

/// Δ⁻ without blocks containing the root.
pub fn delta_minus_nonroot(t: &Tree, cfg: &RegularityConfig) -> Result<TensorSum<NegMonomial, Tree>> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    Ok(plain_right(delta_minus_core(&z, cfg, true, false)?))
}

/// Typed tree with every extended decoration zero.
pub fn to_ex(t: &Tree) -> Result<ExTree> {
    Ok(ExTree::from_tree(&rs_tree(t, 1)?))
}

/// Δ⁺_ex: extended decorations stay put, left factors projected by |·|₊.
pub fn delta_plus_ex(z: &ExTree, cfg: &RegularityConfig) -> Result<TensorSum<ExTree, ExTree>> {
    delta_plus_core(z, &PlusBound::Positive(cfg))
}

/// Δ⁻_ex: each contraction vertex records the |·|₊ of its block.
pub fn delta_minus_ex(z: &ExTree, cfg: &RegularityConfig) -> Result<TensorSum<NegMonomial, ExTree>> {
    delta_minus_core(z, cfg, false, true)
}

pub fn delta_minus_ex_nonroot(z: &ExTree, cfg: &RegularityConfig) -> Result<TensorSum<NegMonomial, ExTree>> {
    delta_minus_core(z, cfg, true, true)
}

fn root_within(x: &ExTree, cap: &MultiIndex) -> bool {
    x.children.iter().all(|(e, _)| edge_index(e).le(cap))
}

/// Both sides of the cointeraction with Δ⁺₀ at `cap`, kept to terms whose
/// middle factor has root edges within the cap. Left: (Id ⊗ Δ⁺₀)Δ⁻. Right:
/// m^{1,3}(Δ⁻_nr ⊗ Δ⁻)Δ⁺₀.
pub fn cointeraction_sides_trunc(
    t: &Tree,
    cap: &MultiIndex,
    cfg: &RegularityConfig,
) -> Result<(Tensor3<NegMonomial, Tree, Tree>, Tensor3<NegMonomial, Tree, Tree>)> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    let bound = PlusBound::Cap(cap);
    let mut lhs = LinComb::zero();
    for ((a, zp), c) in delta_minus_core(&z, cfg, false, false)?.iter() {
        for ((b, y), c2) in delta_plus_core(zp, &bound)?.iter() {
            if root_within(b, cap) {
                lhs.add_term((a.clone(), b.to_tree(), y.to_tree()), c * c2);
            }
        }
    }
    let mut rhs = LinComb::zero();
    for ((x, y), c) in delta_plus_core(&z, &bound)?.iter() {
        if !root_within(x, cap) {
            continue;
        }
        let dy = delta_minus_core(y, cfg, false, false)?;
        for ((a, b), c1) in delta_minus_core(x, cfg, true, false)?.iter() {
            for ((a2, y2), c2) in dy.iter() {
                rhs.add_term((a.product(a2), b.to_tree(), y2.to_tree()), c * c1 * c2);
            }
        }
    }
    Ok((lhs, rhs))
}

pub fn cointeraction_check_trunc(t: &Tree, cap: &MultiIndex, cfg: &RegularityConfig) -> Result<bool> {
    let (l, r) = cointeraction_sides_trunc(t, cap, cfg)?;
    Ok(l == r)
}

/// Both sides of the extended cointeraction (Id ⊗ Δ⁺_ex)Δ⁻_ex = m^{1,3}(Δ⁻_ex,nr ⊗ Δ⁻_ex)Δ⁺_ex.
pub fn cointeraction_sides_ex(
    t: &Tree,
    cfg: &RegularityConfig,
) -> Result<(Tensor3<NegMonomial, ExTree, ExTree>, Tensor3<NegMonomial, ExTree, ExTree>)> {
    let z = ExTree::from_tree(&rs_tree(t, cfg.d)?);
    let mut lhs = LinComb::zero();
    for ((a, zp), c) in delta_minus_ex(&z, cfg)?.iter() {
        for ((b, y), c2) in delta_plus_ex(zp, cfg)?.iter() {
            lhs.add_term((a.clone(), b.clone(), y.clone()), c * c2);
        }
    }
    let mut rhs = LinComb::zero();
    for ((x, y), c) in delta_plus_ex(&z, cfg)?.iter() {
        let dy = delta_minus_ex(y, cfg)?;
        for ((a, b), c1) in delta_minus_ex_nonroot(x, cfg)?.iter() {
            for ((a2, y2), c2) in dy.iter() {
                rhs.add_term((a.product(a2), b.clone(), y2.clone()), c * c1 * c2);
            }
        }
    }
    Ok((lhs, rhs))
}

pub fn cointeraction_check_ex(t: &Tree, cfg: &RegularityConfig) -> Result<bool> {
    let (l, r) = cointeraction_sides_ex(t, cfg)?;
    Ok(l == r)
}

/// Σ_κ C(n−m; ℓ−κ) C(m; κ) = C(n; ℓ) for the multinomials of a profile ℓ
/// (κ ranges over tuples below ℓ). Needs m ≤ n.
pub fn chu_vandermonde(n: &MultiIndex, m: &MultiIndex, profile: &[MultiIndex]) -> bool {
    let Some(rest) = n.checked_sub(m) else { return false };
    let opts: Vec<Vec<MultiIndex>> = profile.iter().map(|l| l.below()).collect();
    let mut lhs = BigInt::zero();
    for ks in cartesian(&opts) {
        let diff: Vec<MultiIndex> = profile.iter().zip(&ks).map(|(l, k)| l.checked_sub(k).expect("below")).collect();
        lhs += multinomial(&rest, &diff) * multinomial(m, &ks);
    }
    lhs == multinomial(n, profile)
}
