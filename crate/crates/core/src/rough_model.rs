//! Planarly branched rough paths seen as a regularity structure: the blue-tree
//! isomorphism φ, the coaction Δ⁺ and the renormalisation coaction Δ⁻ on edge
//! decorated trees, and the model (Π, Γ) induced by an exponential rough path.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coactions::{rho_t0, Indexed, Partition, PiNorm};
use crate::free_postlie::{b_minus, b_plus, gl_product_forest, is_primitive, left_cuts, pruned_forests, shuffle_seq};
use crate::tree_core::{
    int, tree_regularity, EdgeDec, Error, Forest, LinComb, Multiset, Rational, RegularityConfig, Result, TensorSum,
    Tree, VertexDec,
};

/// Letter of a rough-path vertex; blank counts as the time letter 0.
fn letter(d: &VertexDec) -> Result<u32> {
    match d {
        VertexDec::Blank => Ok(0),
        VertexDec::Label(s) => s.parse().map_err(|_| Error::UnknownDecoration(s.clone())),
        VertexDec::Multi(m) if m.dim() == 1 => Ok(m.0[0]),
        other => Err(Error::UnknownDecoration(other.to_string())),
    }
}

pub fn phi_tree(t: &Tree) -> Result<Tree> {
    let mut children = Vec::with_capacity(t.children.len() + 1);
    for (e, c) in &t.children {
        if !e.is_undecorated() {
            return Err(Error::InvalidTree(format!("decorated edge in rough path tree {t}")));
        }
        children.push((EdgeDec::None, phi_tree(c)?));
    }
    let i = letter(&t.dec)?;
    if i != 0 {
        children.push((EdgeDec::Plain(i), Tree::blank()));
    }
    Ok(Tree::new(VertexDec::Blank, children))
}

pub fn phi_forest(w: &Forest) -> Result<Forest> {
    Ok(Forest(w.0.iter().map(phi_tree).collect::<Result<_>>()?))
}

/// φ extended tree-wise, hence a shuffle morphism.
pub fn phi(x: &LinComb<Forest>) -> Result<LinComb<Forest>> {
    let mut out = LinComb::zero();
    for (w, c) in x {
        out.add_term(phi_forest(w)?, c.clone());
    }
    Ok(out)
}

pub fn phi_inv_tree(t: &Tree) -> Result<Tree> {
    let not_in = || Error::NotInImage(t.to_string());
    if !t.dec.is_blank() {
        return Err(not_in());
    }
    let mut kids: &[(EdgeDec, Tree)] = &t.children;
    let mut dec = VertexDec::label("0");
    if let Some((EdgeDec::Plain(i), leaf)) = kids.last() {
        if !leaf.is_leaf() || !leaf.dec.is_blank() {
            return Err(not_in());
        }
        dec = VertexDec::label(&i.to_string());
        kids = &kids[..kids.len() - 1];
    }
    let mut children = Vec::with_capacity(kids.len());
    for (e, c) in kids {
        if !e.is_undecorated() {
            return Err(not_in());
        }
        children.push((EdgeDec::None, phi_inv_tree(c)?));
    }
    Ok(Tree::new(dec, children))
}

pub fn phi_inv_forest(w: &Forest) -> Result<Forest> {
    Ok(Forest(w.0.iter().map(phi_inv_tree).collect::<Result<_>>()?))
}

pub fn phi_inv(x: &LinComb<Forest>) -> Result<LinComb<Forest>> {
    let mut out = LinComb::zero();
    for (w, c) in x {
        out.add_term(phi_inv_forest(w)?, c.clone());
    }
    Ok(out)
}

/// Tree product: merge the roots and shuffle the two branch sequences.
pub fn tree_product_pb(a: &Tree, b: &Tree) -> LinComb<Tree> {
    shuffle_seq(&a.children, &b.children)
        .into_iter()
        .map(|ch| (Tree::new(VertexDec::Blank, ch), Rational::one()))
        .collect()
}

pub fn b_plus_pb(w: &Forest) -> Tree {
    b_plus(w)
}

pub fn b_plus_lc(x: &LinComb<Forest>) -> LinComb<Tree> {
    x.map_basis(b_plus)
}

pub fn pb_degree(t: &Tree, cfg: &RegularityConfig) -> Result<Rational> {
    tree_regularity(t, cfg)
}

/// Δ⁺ by left admissible cuts of undecorated edges; the pruned branches are
/// shuffled and grafted on a fresh root.
pub fn delta_plus_pb(t: &Tree) -> TensorSum<Tree, Tree> {
    let mut out = LinComb::zero();
    for cut in left_cuts(t, &|e| e.is_undecorated()) {
        for p in pruned_forests(&cut) {
            out.add_term((b_plus(&Forest(p)), cut.trunk.clone()), Rational::one());
        }
    }
    out
}

pub fn delta_plus_pb_lc(x: &LinComb<Tree>) -> TensorSum<Tree, Tree> {
    x.flat_map(delta_plus_pb)
}

/// Families of disjoint subtrees that are right-closed, contain both ends of any
/// decorated edge they touch, and have negative degree.
pub fn pb_minus_partitions(t: &Tree, cfg: &RegularityConfig) -> Result<Vec<Partition>> {
    let w = Forest::single(t.clone());
    let ix = Indexed::new(&w);
    let n = ix.len();
    if n > 24 {
        return Err(Error::TruncationExceeded(format!("{n} vertices")));
    }
    let mut blocks = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 || !ix.is_connected(mask) || !ix.is_admissible_block(mask) {
            continue;
        }
        let cuts_decorated = (0..n).any(|v| {
            let p = match ix.verts[v].parent {
                Some(p) => p,
                None => return false,
            };
            !ix.verts[v].edge.is_undecorated() && (mask >> v & 1) != (mask >> p & 1)
        });
        if cuts_decorated {
            continue;
        }
        let sub = &ix.subforest(mask).0[0];
        if tree_regularity(sub, cfg)? < Rational::zero() {
            blocks.push(mask);
        }
    }
    let mut out = Vec::new();
    fn go(i: usize, used: u64, cur: &mut Vec<u64>, blocks: &[u64], out: &mut Vec<Partition>) {
        out.push(Partition { blocks: cur.clone(), spanning: false });
        for j in i..blocks.len() {
            if blocks[j] & used == 0 {
                cur.push(blocks[j]);
                go(j + 1, used | blocks[j], cur, blocks, out);
                cur.pop();
            }
        }
    }
    go(0, 0, &mut Vec::new(), &blocks, &mut out);
    Ok(out)
}

/// Δ⁻: symmetric product of the extracted negative subtrees ⊗ the contracted tree.
pub fn delta_minus_pb(t: &Tree, cfg: &RegularityConfig) -> Result<TensorSum<Multiset<Tree>, Tree>> {
    let w = Forest::single(t.clone());
    let ix = Indexed::new(&w);
    let mut out = LinComb::zero();
    for p in pb_minus_partitions(t, cfg)? {
        let left = Multiset::from_vec(p.blocks.iter().map(|&b| ix.subforest(b).0[0].clone()).collect());
        let decs = vec![VertexDec::Blank; p.blocks.len()];
        for (f, c) in ix.contract(&p.blocks, &decs, true) {
            out.add_term((left.clone(), f.0[0].clone()), c);
        }
    }
    Ok(out)
}

/// The second route: (φ⊗φ) applied to time-cotranslation of φ⁻¹(τ), keeping only
/// monomials made of single trees of negative degree.
pub fn delta_minus_via_rho(t: &Tree, cfg: &RegularityConfig, norm: PiNorm) -> Result<TensorSum<Multiset<Tree>, Tree>> {
    let w = Forest::single(phi_inv_tree(t)?);
    let mut out = LinComb::zero();
    'terms: for ((mono, right), c) in rho_t0(&w, norm) {
        let mut left = Vec::new();
        for f in mono.items() {
            if f.len() != 1 {
                continue 'terms;
            }
            let b = phi_tree(&f.0[0])?;
            if tree_regularity(&b, cfg)? >= Rational::zero() {
                continue 'terms;
            }
            left.push(b);
        }
        out.add_term((Multiset::from_vec(left), phi_tree(&right.0[0])?), c);
    }
    Ok(out)
}

/// exp_∗(aL) for the Grossman–Larson product, stored as the homogeneous layers
/// L^{∗k}/k! so that pairings are polynomials in a.
#[derive(Clone, Debug)]
pub struct ExpCharacter {
    pub generator: LinComb<Forest>,
    pub truncation: usize,
    layers: Vec<LinComb<Forest>>,
}

impl ExpCharacter {
    pub fn new(l: &LinComb<Forest>, truncation: usize) -> Result<ExpCharacter> {
        if l.iter().any(|(f, _)| f.is_unit()) || !is_primitive(l) {
            return Err(Error::NotPrimitive(l.to_string()));
        }
        let mut layers = vec![LinComb::basis(Forest::unit())];
        for k in 1..=truncation {
            let next = gl_product_truncated(&layers[k - 1], l, truncation);
            layers.push(next.scaled(&(Rational::one() / int(k as i64))));
        }
        Ok(ExpCharacter { generator: l.clone(), truncation, layers })
    }

    /// L = •₀ + Σ c_i •_i from letter coefficients.
    pub fn from_letters(coeffs: &BTreeMap<u32, Rational>, truncation: usize) -> Result<ExpCharacter> {
        let l = coeffs
            .iter()
            .map(|(i, c)| (Forest::single(Tree::label(&i.to_string())), c.clone()))
            .collect();
        ExpCharacter::new(&l, truncation)
    }

    /// Whether ⟨exp(aL), •₀⟩ = a, i.e. the path is time-augmented.
    pub fn is_time_augmented(&self) -> bool {
        self.generator.coeff(&Forest::single(Tree::label("0"))).is_one()
    }

    fn check(&self, w: &Forest) -> Result<()> {
        if w.size() > self.truncation {
            return Err(Error::TruncationExceeded(w.to_string()));
        }
        Ok(())
    }

    /// Coefficients of ⟨exp(aL), ω⟩ as a polynomial in a.
    pub fn poly(&self, w: &Forest) -> Result<Vec<Rational>> {
        self.check(w)?;
        Ok(self.layers.iter().map(|l| l.coeff(w)).collect())
    }

    pub fn pair(&self, a: &Rational, w: &Forest) -> Result<Rational> {
        Ok(horner(&self.poly(w)?, a))
    }

    /// d/da ⟨exp(aL), ω⟩ = ⟨exp(aL) ∗ L, ω⟩.
    pub fn pair_deriv(&self, a: &Rational, w: &Forest) -> Result<Rational> {
        let p = self.poly(w)?;
        let d: Vec<Rational> = p.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect();
        Ok(horner(&d, a))
    }

    /// exp(aL) truncated, as an element of the Grossman–Larson algebra.
    pub fn element(&self, a: &Rational) -> LinComb<Forest> {
        let mut out = LinComb::zero();
        let mut pw = Rational::one();
        for l in &self.layers {
            out.add_scaled(l, &pw);
            pw *= a;
        }
        out
    }

    pub fn layer(&self, k: usize) -> Option<&LinComb<Forest>> {
        self.layers.get(k)
    }
}

/// Grossman–Larson product keeping only forests with at most `n` vertices.
pub fn gl_product_truncated(x: &LinComb<Forest>, y: &LinComb<Forest>, n: usize) -> LinComb<Forest> {
    let mut out = LinComb::zero();
    for (a, ca) in x {
        for (b, cb) in y {
            if a.size() + b.size() <= n {
                out.add_scaled(&gl_product_forest(a, b), &(ca * cb));
            }
        }
    }
    out
}

fn horner(p: &[Rational], a: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * a + c)
}

/// Character on the symmetric algebra of negative trees, given on generators.
#[derive(Clone, Debug, Default)]
pub struct RenormCharacter {
    pub values: BTreeMap<Tree, Rational>,
}

impl RenormCharacter {
    pub fn single(t: Tree, c: Rational) -> Self {
        RenormCharacter { values: BTreeMap::from([(t, c)]) }
    }

    pub fn eval(&self, m: &Multiset<Tree>) -> Rational {
        m.items().iter().map(|t| self.values.get(t).cloned().unwrap_or_else(Rational::zero)).product()
    }
}

/// M_ℓ = (ℓ ⊗ id)Δ⁻.
pub fn renormalise(ell: &RenormCharacter, x: &LinComb<Tree>, cfg: &RegularityConfig) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (t, c) in x {
        for ((m, r), c2) in delta_minus_pb(t, cfg)? {
            let v = ell.eval(&m);
            if !v.is_zero() {
                out.add_term(r, c * c2 * v);
            }
        }
    }
    Ok(out)
}

/// The model built from X_st = exp((t−s)L), optionally renormalised by ℓ.
#[derive(Clone, Debug)]
pub struct Model {
    pub path: ExpCharacter,
    pub cfg: RegularityConfig,
    pub renorm: Option<RenormCharacter>,
}

impl Model {
    pub fn new(path: ExpCharacter, cfg: RegularityConfig) -> Model {
        Model { path, cfg, renorm: None }
    }

    pub fn renormalised(mut self, ell: RenormCharacter) -> Model {
        self.renorm = Some(ell);
        self
    }

    fn apply_m(&self, t: &Tree) -> Result<LinComb<Tree>> {
        match &self.renorm {
            None => Ok(LinComb::basis(t.clone())),
            Some(ell) => renormalise(ell, &LinComb::basis(t.clone()), &self.cfg),
        }
    }

    /// γ_st(B₊φ(ω)) = ⟨X_st, ω⟩, without renormalisation.
    fn gamma_char(&self, s: &Rational, t: &Rational, tau: &Tree) -> Result<Rational> {
        let w = phi_inv_forest(&b_minus(tau)?)?;
        self.path.pair(&(t - s), &w)
    }

    fn pi_bare(&self, s: &Rational, t: &Rational, tau: &Tree) -> Result<Rational> {
        if tau.children.iter().all(|(e, _)| e.is_undecorated()) {
            let w = phi_inv_forest(&b_minus(tau)?)?;
            self.path.pair(&(t - s), &w)
        } else {
            let w = Forest::single(phi_inv_tree(tau)?);
            self.path.pair_deriv(&(t - s), &w)
        }
    }

    /// Π_s(τ)(t).
    pub fn pi(&self, s: &Rational, t: &Rational, tau: &Tree) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (r, c) in self.apply_m(tau)? {
            acc += c * self.pi_bare(s, t, &r)?;
        }
        Ok(acc)
    }

    pub fn pi_lc(&self, s: &Rational, t: &Rational, x: &LinComb<Tree>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (tau, c) in x {
            acc += c * self.pi(s, t, tau)?;
        }
        Ok(acc)
    }

    /// Γ_st = (γ_ts ⊗ id)Δ⁺, with γ_ts precomposed by M_ℓ when renormalised.
    pub fn gamma(&self, s: &Rational, t: &Rational, x: &LinComb<Tree>) -> Result<LinComb<Tree>> {
        let mut out = LinComb::zero();
        let mut cache: BTreeMap<Tree, Rational> = BTreeMap::new();
        for ((l, r), c) in delta_plus_pb_lc(x) {
            let g = match cache.get(&l) {
                Some(g) => g.clone(),
                None => {
                    let mut g = Rational::zero();
                    for (m, cm) in self.apply_m(&l)? {
                        g += cm * self.gamma_char(t, s, &m)?;
                    }
                    cache.insert(l.clone(), g.clone());
                    g
                }
            };
            if !g.is_zero() {
                out.add_term(r, c * g);
            }
        }
        Ok(out)
    }
}
