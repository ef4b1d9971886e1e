use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::error::{Error, Result};
use super::lincomb::LinComb;
use super::rational::{int, Rational};
use super::tree::{same_mode, forest_mode, EdgeDec, EdgeKind, Forest, Tree, VertexDec};

/// Dimension, noise and kernel regularities, and the global grading bound.
///
/// The Hölder exponent of a rough path and its analytic bounds have no finite
/// counterpart here and are not represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityConfig {
    pub d: usize,
    pub alphas: BTreeMap<u32, Rational>,
    pub kernels: BTreeMap<u32, Rational>,
    pub truncation: usize,
}

impl Default for RegularityConfig {
    fn default() -> Self {
        RegularityConfig { d: 1, alphas: BTreeMap::new(), kernels: BTreeMap::new(), truncation: 6 }
    }
}

impl RegularityConfig {
    pub fn with_alpha(mut self, i: u32, a: Rational) -> Self {
        self.alphas.insert(i, a);
        self
    }

    pub fn with_kernel(mut self, k: u32, b: Rational) -> Self {
        self.kernels.insert(k, b);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_truncation(mut self, n: usize) -> Self {
        self.truncation = n;
        self
    }

    pub fn alpha(&self, i: u32) -> Result<&Rational> {
        self.alphas.get(&i).ok_or_else(|| Error::UnknownDecoration(format!("noise {}", i)))
    }

    pub fn beta(&self, k: u32) -> Result<&Rational> {
        self.kernels.get(&k).ok_or_else(|| Error::UnknownDecoration(format!("kernel {}", k)))
    }

    /// Contribution of a single edge, excluding its multi-index.
    pub fn edge_weight(&self, e: &EdgeDec) -> Result<Rational> {
        Ok(match e {
            EdgeDec::None => Rational::one(),
            EdgeDec::Plain(0) => Rational::one(),
            EdgeDec::Plain(i) => self.alpha(*i)? - Rational::one(),
            EdgeDec::Typed(EdgeKind::Kernel(k), m) => self.beta(*k)? - int(m.total() as i64),
            EdgeDec::Typed(EdgeKind::Noise(i), m) => self.alpha(*i)? - Rational::one() - int(m.total() as i64),
        })
    }
}

pub fn vertex_count(f: &Forest) -> usize {
    f.size()
}

pub fn tree_regularity(t: &Tree, cfg: &RegularityConfig) -> Result<Rational> {
    let mut r = match &t.dec {
        VertexDec::Multi(m) => int(m.total() as i64),
        _ => Rational::zero(),
    };
    for (e, c) in &t.children {
        r += cfg.edge_weight(e)?;
        r += tree_regularity(c, cfg)?;
    }
    Ok(r)
}

/// Vertex decorations count positively, edge multi-indices negatively, kernel edges add β, noise edges add α − 1.
pub fn regularity(f: &Forest, cfg: &RegularityConfig) -> Result<Rational> {
    f.0.iter().try_fold(Rational::zero(), |acc, t| Ok(acc + tree_regularity(t, cfg)?))
}

/// Kronecker pairing on the forest basis.
pub fn pair(x: &LinComb<Forest>, y: &LinComb<Forest>) -> Result<Rational> {
    let mx = x.basis_iter().try_fold(None, |m, f| same_mode(m, forest_mode(f)?))?;
    let my = y.basis_iter().try_fold(None, |m, f| same_mode(m, forest_mode(f)?))?;
    same_mode(mx, my)?;
    Ok(pair_unchecked(x, y))
}

pub fn pair_unchecked<B: Ord + Clone>(x: &LinComb<B>, y: &LinComb<B>) -> Rational {
    let (small, large) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    small.iter().fold(Rational::zero(), |acc, (b, c)| acc + c * large.coeff(b))
}
