use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::rational::Rational;

/// Finite formal linear combination with exact coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, Rational>,
}

pub type TensorSum<L, R> = LinComb<(L, R)>;
pub type Tensor3<A, B, C> = LinComb<(A, B, C)>;
pub type Tensor4<A, B, C, D> = LinComb<(A, B, C, D)>;

impl<B: Ord> Default for LinComb<B> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> LinComb<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Rational::one())
    }

    pub fn term(b: B, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn add_term(&mut self, b: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (b, v) in other.iter() {
            self.add_term(b.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb { terms: self.terms.iter().map(|(b, v)| (b.clone(), v * c)).collect() }
    }

    pub fn coeff(&self, b: &B) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Rational> {
        self.terms.iter()
    }

    pub fn basis_iter(&self) -> btree_map::Keys<'_, B, Rational> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Linear extension of `f` on basis elements.
    pub fn flat_map<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> LinComb<C>) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b), c);
        }
        out
    }

    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b), c.clone());
        }
        out
    }

    /// Bilinear extension of `f`.
    pub fn bilinear<R: Ord + Clone, C: Ord + Clone>(
        &self,
        other: &LinComb<R>,
        mut f: impl FnMut(&B, &R) -> LinComb<C>,
    ) -> LinComb<C> {
        let mut out = LinComb::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_scaled(&f(a, b), &(ca * cb));
            }
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        LinComb { terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect() }
    }

    pub fn tensor<R: Ord + Clone>(&self, other: &LinComb<R>) -> TensorSum<B, R> {
        self.bilinear(other, |a, b| LinComb::basis((a.clone(), b.clone())))
    }
}

impl<B: Ord> IntoIterator for LinComb<B> {
    type Item = (B, Rational);
    type IntoIter = btree_map::IntoIter<B, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, B: Ord> IntoIterator for &'a LinComb<B> {
    type Item = (&'a B, &'a Rational);
    type IntoIter = btree_map::Iter<'a, B, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<B: Ord + Clone> FromIterator<(B, Rational)> for LinComb<B> {
    fn from_iter<I: IntoIterator<Item = (B, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord + Clone> AddAssign<&LinComb<B>> for LinComb<B> {
    fn add_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<&LinComb<B>> for LinComb<B> {
    fn sub_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), -c.clone());
        }
    }
}

impl<B: Ord + Clone> Add for LinComb<B> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone> Add<&LinComb<B>> for &LinComb<B> {
    type Output = LinComb<B>;
    fn add(self, rhs: &LinComb<B>) -> LinComb<B> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<B: Ord + Clone> Sub for LinComb<B> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<B: Ord + Clone> Sub<&LinComb<B>> for &LinComb<B> {
    type Output = LinComb<B>;
    fn sub(self, rhs: &LinComb<B>) -> LinComb<B> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<B: Ord + Clone> Neg for LinComb<B> {
    type Output = Self;
    fn neg(self) -> Self {
        LinComb { terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect() }
    }
}

impl<B: Ord + Clone> Mul<&Rational> for &LinComb<B> {
    type Output = LinComb<B>;
    fn mul(self, rhs: &Rational) -> LinComb<B> {
        self.scaled(rhs)
    }
}

impl<B: Ord + fmt::Display> fmt::Display for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "{}", b)?;
            } else {
                write!(f, "{}*{}", mag, b)?;
            }
        }
        Ok(())
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(b, c)| (b, c.to_string()))).finish()
    }
}
