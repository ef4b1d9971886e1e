//! Admissible partitions, cosubstitution and cotranslation coactions, and their cointeraction with Δ_MKW.

use std::fmt;

use crate::free_postlie::{bracket, concat, deshuffle, mkw_forest, shuffle_many};
use crate::tree_core::{
    rat, EdgeDec, Forest, LinComb, Multiset, NonplanarForest, NonplanarTree, Path, Tensor3, TensorSum,
    Tree, VertexDec,
};

/// Flattened vertex table of a forest, in preorder.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub verts: Vec<VInfo>,
    pub roots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct VInfo {
    pub dec: VertexDec,
    pub edge: EdgeDec,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub tree: usize,
    pub path: Path,
}

impl Indexed {
    pub fn new(f: &Forest) -> Indexed {
        let mut verts = Vec::new();
        let mut roots = Vec::new();
        fn walk(t: &Tree, edge: EdgeDec, parent: Option<usize>, tree: usize, path: &mut Path, verts: &mut Vec<VInfo>) -> usize {
            let id = verts.len();
            verts.push(VInfo { dec: t.dec.clone(), edge, parent, children: Vec::new(), tree, path: path.clone() });
            for (i, (e, c)) in t.children.iter().enumerate() {
                path.push(i);
                let cid = walk(c, e.clone(), Some(id), tree, path, verts);
                path.pop();
                verts[id].children.push(cid);
            }
            id
        }
        for (i, t) in f.0.iter().enumerate() {
            roots.push(walk(t, EdgeDec::None, None, i, &mut Vec::new(), &mut verts));
        }
        Indexed { verts, roots }
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    fn siblings(&self, v: usize) -> &[usize] {
        match self.verts[v].parent {
            Some(p) => &self.verts[p].children,
            None => &self.roots,
        }
    }

    /// Roots of the sub-forest induced by `mask`, in planar order.
    pub fn block_roots(&self, mask: u64) -> Vec<usize> {
        (0..self.len()).filter(|&v| mask >> v & 1 == 1 && self.verts[v].parent.is_none_or(|p| mask >> p & 1 == 0)).collect()
    }

    /// Whether the induced vertex set `mask` is connected.
    pub fn is_connected(&self, mask: u64) -> bool {
        mask != 0 && self.block_roots(mask).len() == 1
    }

    /// Both admissibility bullets for one block.
    pub fn is_admissible_block(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let roots = self.block_roots(mask);
        let parent = self.verts[roots[0]].parent;
        if roots.iter().any(|&r| self.verts[r].parent != parent) {
            return false;
        }
        let sib = self.siblings(roots[0]);
        let pos: Vec<usize> = roots.iter().map(|r| sib.iter().position(|x| x == r).unwrap()).collect();
        if pos.windows(2).any(|w| w[1] != w[0] + 1) {
            return false;
        }
        for v in 0..self.len() {
            if mask >> v & 1 == 0 {
                continue;
            }
            let ch = &self.verts[v].children;
            if let Some(first) = ch.iter().position(|&c| mask >> c & 1 == 1) {
                if ch[first..].iter().any(|&c| mask >> c & 1 == 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Induced sub-forest of `mask`.
    pub fn subforest(&self, mask: u64) -> Forest {
        fn build(ix: &Indexed, v: usize, mask: u64) -> Tree {
            let children = ix.verts[v]
                .children
                .iter()
                .filter(|&&c| mask >> c & 1 == 1)
                .map(|&c| (ix.verts[c].edge.clone(), build(ix, c, mask)))
                .collect();
            Tree { dec: ix.verts[v].dec.clone(), children }
        }
        Forest(self.block_roots(mask).iter().map(|&r| build(self, r, mask)).collect())
    }

    /// Contracts each block to one vertex with the given decoration. Outgoing branches of a
    /// block keep their order per vertex; branches from different block vertices are shuffled
    /// when `shuffle` is set and concatenated in preorder otherwise.
    pub fn contract(&self, blocks: &[u64], decs: &[VertexDec], shuffle: bool) -> LinComb<Forest> {
        let owner: Vec<Option<usize>> =
            (0..self.len()).map(|v| blocks.iter().position(|&b| b >> v & 1 == 1)).collect();
        let seqs = self.contract_list(&self.roots, &owner, blocks, decs, shuffle);
        seqs.map_basis(|v| Forest(v.iter().map(|(_, t)| t.clone()).collect()))
    }

    fn contract_list(
        &self,
        ids: &[usize],
        owner: &[Option<usize>],
        blocks: &[u64],
        decs: &[VertexDec],
        shuffle: bool,
    ) -> LinComb<Vec<(EdgeDec, Tree)>> {
        let mut acc: LinComb<Vec<(EdgeDec, Tree)>> = LinComb::basis(Vec::new());
        let mut seen = Vec::new();
        for &v in ids {
            let node = match owner[v] {
                Some(b) if seen.contains(&b) => continue,
                Some(b) => {
                    seen.push(b);
                    self.contract_block(b, owner, blocks, decs, shuffle)
                }
                None => {
                    let kids = self.contract_list(&self.verts[v].children, owner, blocks, decs, shuffle);
                    kids.map_basis(|k| Tree { dec: self.verts[v].dec.clone(), children: k.clone() })
                }
            };
            let edge = self.verts[v].edge.clone();
            acc = acc.bilinear(&node, |seq, t| {
                let mut s = seq.clone();
                s.push((edge.clone(), t.clone()));
                LinComb::basis(s)
            });
        }
        acc
    }

    fn contract_block(
        &self,
        b: usize,
        owner: &[Option<usize>],
        blocks: &[u64],
        decs: &[VertexDec],
        shuffle: bool,
    ) -> LinComb<Tree> {
        let mask = blocks[b];
        let mut groups: Vec<LinComb<Vec<(EdgeDec, Tree)>>> = Vec::new();
        for u in 0..self.len() {
            if mask >> u & 1 == 0 {
                continue;
            }
            let outside: Vec<usize> = self.verts[u].children.iter().copied().filter(|&c| mask >> c & 1 == 0).collect();
            if !outside.is_empty() {
                groups.push(self.contract_list(&outside, owner, blocks, decs, shuffle));
            }
        }
        let mut acc: LinComb<Vec<Vec<(EdgeDec, Tree)>>> = LinComb::basis(Vec::new());
        for g in &groups {
            acc = acc.bilinear(g, |parts, seq| {
                let mut p = parts.clone();
                p.push(seq.clone());
                LinComb::basis(p)
            });
        }
        let mut out = LinComb::zero();
        for (parts, c) in acc {
            let merged = if shuffle { shuffle_many(&parts) } else { vec![parts.concat()] };
            for children in merged {
                out.add_term(Tree { dec: decs[b].clone(), children }, c.clone());
            }
        }
        out
    }
}

/// A family of disjoint blocks of a forest's vertices (preorder ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<u64>,
    pub spanning: bool,
}

impl Partition {
    pub fn block_vertices(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&m| (0..64).filter(|v| m >> v & 1 == 1).collect()).collect()
    }
}

fn families(n: usize, candidates: &[u64], spanning: bool) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn go(i: usize, n: usize, used: u64, cur: &mut Vec<u64>, cands: &[u64], spanning: bool, out: &mut Vec<Vec<u64>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        if used >> i & 1 == 1 {
            return go(i + 1, n, used, cur, cands, spanning, out);
        }
        if !spanning {
            go(i + 1, n, used, cur, cands, spanning, out);
        }
        for &b in cands {
            if b & used == 0 && b.trailing_zeros() as usize == i {
                cur.push(b);
                go(i + 1, n, used | b, cur, cands, spanning, out);
                cur.pop();
            }
        }
    }
    go(0, n, 0, &mut Vec::new(), candidates, spanning, &mut out);
    out
}

fn all_masks(n: usize) -> impl Iterator<Item = u64> {
    assert!(n < 63, "forest too large for partition enumeration");
    1u64..(1u64 << n)
}

/// Admissible partitions (families of disjoint admissible blocks), optionally spanning only.
pub fn admissible_partitions(w: &Forest, spanning: bool) -> Vec<Partition> {
    let ix = Indexed::new(w);
    let cands: Vec<u64> = all_masks(ix.len()).filter(|&m| ix.is_admissible_block(m)).collect();
    families(ix.len(), &cands, spanning)
        .into_iter()
        .map(|blocks| {
            let covered = blocks.iter().fold(0u64, |a, b| a | b);
            Partition { spanning: covered.count_ones() as usize == ix.len(), blocks }
        })
        .collect()
}

/// Families of disjoint connected subtrees, for the non-planar coactions.
pub fn subtree_families(w: &Forest, spanning: bool) -> Vec<Partition> {
    let ix = Indexed::new(w);
    let cands: Vec<u64> = all_masks(ix.len()).filter(|&m| ix.is_connected(m)).collect();
    families(ix.len(), &cands, spanning)
        .into_iter()
        .map(|blocks| {
            let covered = blocks.iter().fold(0u64, |a, b| a | b);
            Partition { spanning: covered.count_ones() as usize == ix.len(), blocks }
        })
        .collect()
}

/// Normalisation of the projection onto Lie polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PiNorm {
    /// First Eulerian idempotent, the convolution logarithm of the identity.
    #[default]
    Eulerian,
    /// π(τ₁…τ_k) = [τ₁, π(τ₂…τ_k)].
    LeftBracket,
}

impl PiNorm {
    pub fn name(&self) -> &'static str {
        match self {
            PiNorm::Eulerian => "eulerian",
            PiNorm::LeftBracket => "leftbracket",
        }
    }
}

impl std::str::FromStr for PiNorm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eulerian" => Ok(PiNorm::Eulerian),
            "leftbracket" => Ok(PiNorm::LeftBracket),
            _ => Err(format!("unknown pi normalisation {}", s)),
        }
    }
}

/// (id − ε)^{∗k} for the concatenation/deshuffle convolution.
fn reduced_power(w: &Forest, k: usize) -> LinComb<Forest> {
    if k == 0 {
        return if w.is_unit() { LinComb::basis(Forest::unit()) } else { LinComb::zero() };
    }
    if w.is_unit() {
        return LinComb::zero();
    }
    let mut out = LinComb::zero();
    for ((a, b), c) in deshuffle(w) {
        if a.is_unit() {
            continue;
        }
        out.add_scaled(&concat(&LinComb::basis(a), &reduced_power(&b, k - 1)), &c);
    }
    out
}

pub fn lie_project_forest(w: &Forest, norm: PiNorm) -> LinComb<Forest> {
    if w.is_unit() {
        return LinComb::zero();
    }
    match norm {
        PiNorm::Eulerian => {
            let mut out = LinComb::zero();
            for k in 1..=w.len() {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                out.add_scaled(&reduced_power(w, k), &rat(sign, k as i64));
            }
            out
        }
        PiNorm::LeftBracket => {
            let head = LinComb::basis(Forest::single(w.0[0].clone()));
            if w.len() == 1 {
                head
            } else {
                bracket(&head, &lie_project_forest(&Forest(w.0[1..].to_vec()), norm))
            }
        }
    }
}

/// Projection π onto Lie polynomials.
pub fn lie_project(x: &LinComb<Forest>, norm: PiNorm) -> LinComb<Forest> {
    x.flat_map(|w| lie_project_forest(w, norm))
}

/// A tagged block (π-term, decoration).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tagged {
    pub forest: Forest,
    pub tag: VertexDec,
}

impl fmt::Display for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.forest, self.tag)
    }
}

impl fmt::Debug for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type TaggedMonomial = Multiset<Tagged>;

/// Symmetric product of linear factors, expanded multilinearly.
pub fn sym_product<T: Ord + Clone>(factors: &[LinComb<T>]) -> LinComb<Multiset<T>> {
    let mut acc: LinComb<Multiset<T>> = LinComb::basis(Multiset::unit());
    for fct in factors {
        acc = acc.bilinear(fct, |m, x| LinComb::basis(m.product(&Multiset::from_vec(vec![x.clone()]))));
    }
    acc
}

fn tuples(alphabet: &[VertexDec], n: usize) -> Vec<Vec<VertexDec>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.iter()
            .flat_map(|v| {
                alphabet.iter().map(move |c| {
                    let mut w = v.clone();
                    w.push(c.clone());
                    w
                })
            })
            .collect()
    })
}

fn rho(w: &Forest, alphabet: &[VertexDec], norm: PiNorm, spanning: bool) -> TensorSum<TaggedMonomial, Forest> {
    let ix = Indexed::new(w);
    let mut out = LinComb::zero();
    for p in admissible_partitions(w, spanning) {
        let pis: Vec<LinComb<Forest>> =
            p.blocks.iter().map(|&b| lie_project_forest(&ix.subforest(b), norm)).collect();
        for cs in tuples(alphabet, p.blocks.len()) {
            let factors: Vec<LinComb<Tagged>> = pis
                .iter()
                .zip(&cs)
                .map(|(pi, c)| pi.map_basis(|f| Tagged { forest: f.clone(), tag: c.clone() }))
                .collect();
            let left = sym_product(&factors);
            let right = ix.contract(&p.blocks, &cs, true);
            out += &left.tensor(&right);
        }
    }
    out
}

/// Cosubstitution ρ_S: spanning admissible partitions.
pub fn rho_s(w: &Forest, alphabet: &[VertexDec], norm: PiNorm) -> TensorSum<TaggedMonomial, Forest> {
    rho(w, alphabet, norm, true)
}

/// Cotranslation ρ_T: all admissible partitions.
pub fn rho_t(w: &Forest, alphabet: &[VertexDec], norm: PiNorm) -> TensorSum<TaggedMonomial, Forest> {
    rho(w, alphabet, norm, false)
}

pub fn time_letter() -> VertexDec {
    VertexDec::label("0")
}

/// Time-cotranslation ρ_T⁰: contraction decoration fixed to the time letter, tags dropped.
pub fn rho_t0(w: &Forest, norm: PiNorm) -> TensorSum<Multiset<Forest>, Forest> {
    let ix = Indexed::new(w);
    let mut out = LinComb::zero();
    for p in admissible_partitions(w, false) {
        let pis: Vec<LinComb<Forest>> =
            p.blocks.iter().map(|&b| lie_project_forest(&ix.subforest(b), norm)).collect();
        let decs = vec![time_letter(); p.blocks.len()];
        out += &sym_product(&pis).tensor(&ix.contract(&p.blocks, &decs, true));
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedTree {
    pub tree: NonplanarTree,
    pub tag: VertexDec,
}

impl fmt::Display for TaggedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tree, self.tag)
    }
}

impl fmt::Debug for TaggedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Non-planar ρ_S^np (spanning) or ρ_T^np: disjoint subtrees, no planarity conditions.
pub fn rho_np(
    x: &NonplanarForest,
    alphabet: &[VertexDec],
    spanning: bool,
) -> TensorSum<Multiset<TaggedTree>, NonplanarForest> {
    let w = x.as_forest();
    let ix = Indexed::new(&w);
    let mut out = LinComb::zero();
    for p in subtree_families(&w, spanning) {
        let trees: Vec<NonplanarTree> = p.blocks.iter().map(|&b| NonplanarTree::new(&ix.subforest(b).0[0])).collect();
        for cs in tuples(alphabet, p.blocks.len()) {
            let left = Multiset::from_vec(
                trees.iter().zip(&cs).map(|(t, c)| TaggedTree { tree: t.clone(), tag: c.clone() }).collect(),
            );
            for (f, c) in ix.contract(&p.blocks, &cs, false) {
                out.add_term((left.clone(), NonplanarForest::from_forest(&f)), c);
            }
        }
    }
    out
}

/// Both sides of m^{1,3}(ρ⊗ρ)Δ = (id⊗Δ)ρ.
pub fn cointeraction_sides<L: Ord + Clone>(
    w: &Forest,
    coaction: &dyn Fn(&Forest) -> TensorSum<Multiset<L>, Forest>,
    coproduct: &dyn Fn(&Forest) -> TensorSum<Forest, Forest>,
) -> (Tensor3<Multiset<L>, Forest, Forest>, Tensor3<Multiset<L>, Forest, Forest>) {
    let mut lhs = LinComb::zero();
    for ((a, b), c) in coproduct(w) {
        let ra = coaction(&a);
        let rb = coaction(&b);
        for ((la, fa), ca) in ra.iter() {
            for ((lb, fb), cb) in rb.iter() {
                lhs.add_term((la.product(lb), fa.clone(), fb.clone()), &c * ca * cb);
            }
        }
    }
    let mut rhs = LinComb::zero();
    for ((l, f), c) in coaction(w) {
        for ((x, y), c2) in coproduct(&f) {
            rhs.add_term((l.clone(), x, y), &c * c2);
        }
    }
    (lhs, rhs)
}

pub fn cointeraction_check<L: Ord + Clone>(
    w: &Forest,
    coaction: &dyn Fn(&Forest) -> TensorSum<Multiset<L>, Forest>,
    coproduct: &dyn Fn(&Forest) -> TensorSum<Forest, Forest>,
) -> bool {
    let (l, r) = cointeraction_sides(w, coaction, coproduct);
    l == r
}

/// Cointeraction of ρ_T⁰ with Δ_MKW under the given π.
pub fn cointeraction_t0(w: &Forest, norm: PiNorm) -> bool {
    cointeraction_check(w, &|x| rho_t0(x, norm), &mkw_forest)
}

/// Applies ε to the left factor: keeps only the empty-partition term.
pub fn counit_left<L: Ord + Clone>(x: &TensorSum<Multiset<L>, Forest>) -> LinComb<Forest> {
    let mut out = LinComb::zero();
    for ((l, f), c) in x.iter() {
        if l.is_empty() {
            out.add_term(f.clone(), c.clone());
        }
    }
    out
}
