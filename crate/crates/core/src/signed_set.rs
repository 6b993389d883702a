//! Signed subsets of a finite ground set and the exact rational vectors they
//! act on.
//!
//! A signed subset `(X, Y)` is a pair of disjoint index sets. The family of all
//! of them is walked in ternary-counter order: element `k` contributes digit
//! `0` (absent), `1` (in `X`) or `2` (in `Y`) with weight `3^(k-1)`. Every
//! brute-force scan in the crate uses this order, so table files and test
//! fixtures line up with it.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Largest ground set a machine word of element bits can hold.
pub const MAX_GROUND: usize = 62;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

/// Sign of an element inside a signed subset or at an arc endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A set of ground-set elements packed into a word. Element `i` (1-based)
/// lives in bit `i - 1`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(elem: usize) -> Self {
        debug_assert!((1..=MAX_GROUND).contains(&elem));
        ElementSet(1u64 << (elem - 1))
    }

    pub fn contains(self, elem: usize) -> bool {
        elem >= 1 && elem <= 64 && self.0 & (1u64 << (elem - 1)) != 0
    }

    pub fn with(self, elem: usize) -> Self {
        ElementSet(self.0 | Self::singleton(elem).0)
    }

    pub fn without(self, elem: usize) -> Self {
        ElementSet(self.0 & !Self::singleton(elem).0)
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let low = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(low + 1)
        })
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ElementSet::EMPTY, ElementSet::with)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// An ordered pair `(X, Y)` of disjoint element sets.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSubset {
    pos: ElementSet,
    neg: ElementSet,
}

impl SignedSubset {
    pub const EMPTY: SignedSubset = SignedSubset {
        pos: ElementSet::EMPTY,
        neg: ElementSet::EMPTY,
    };

    pub fn new(pos: ElementSet, neg: ElementSet) -> Result<Self> {
        match pos.intersection(neg).iter().next() {
            Some(elem) => Err(Error::OverlappingSides { elem }),
            None => Ok(SignedSubset { pos, neg }),
        }
    }

    /// Builds `(X, Y)` from 1-based element lists.
    pub fn from_slices(pos: &[usize], neg: &[usize]) -> Result<Self> {
        for &e in pos.iter().chain(neg) {
            if !(1..=MAX_GROUND).contains(&e) {
                return Err(Error::ElementOutOfRange {
                    elem: e,
                    n: MAX_GROUND,
                });
            }
        }
        Self::new(pos.iter().copied().collect(), neg.iter().copied().collect())
    }

    pub(crate) fn from_disjoint(pos: ElementSet, neg: ElementSet) -> Self {
        debug_assert!(pos.intersection(neg).is_empty());
        SignedSubset { pos, neg }
    }

    pub fn pos(self) -> ElementSet {
        self.pos
    }

    pub fn neg(self) -> ElementSet {
        self.neg
    }

    /// `X ∪ Y`.
    pub fn support(self) -> ElementSet {
        self.pos.union(self.neg)
    }

    pub fn is_empty(self) -> bool {
        self.support().is_empty()
    }

    /// The sign of `elem` in this subset, `None` when it is absent.
    pub fn sign_of(self, elem: usize) -> Option<Sign> {
        if self.pos.contains(elem) {
            Some(Sign::Plus)
        } else if self.neg.contains(elem) {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    /// Entry of the characteristic vector at `elem`.
    pub fn chi(self, elem: usize) -> i64 {
        self.sign_of(elem).map_or(0, Sign::as_i64)
    }

    /// Reduced union: elements carrying opposite signs cancel.
    pub fn reduced_union(self, other: Self) -> Self {
        let pos = self.pos.union(other.pos);
        let neg = self.neg.union(other.neg);
        SignedSubset {
            pos: pos.difference(neg),
            neg: neg.difference(pos),
        }
    }

    pub fn reduced_intersection(self, other: Self) -> Self {
        SignedSubset {
            pos: self.pos.intersection(other.pos),
            neg: self.neg.intersection(other.neg),
        }
    }

    /// `self ⊑ other`: componentwise inclusion.
    pub fn leq(self, other: Self) -> bool {
        self.pos.is_subset(other.pos) && self.neg.is_subset(other.neg)
    }

    /// `self ⊏ other`: `self ⊑ other` with a strictly smaller support.
    pub fn strictly_below(self, other: Self) -> bool {
        self.leq(other) && self.support() != other.support()
    }

    pub fn with_pos(self, elem: usize) -> Self {
        SignedSubset {
            pos: self.pos.with(elem),
            neg: self.neg.without(elem),
        }
    }

    pub fn with_neg(self, elem: usize) -> Self {
        SignedSubset {
            pos: self.pos.without(elem),
            neg: self.neg.with(elem),
        }
    }

    /// Drops `elem` from whichever side holds it.
    pub fn without(self, elem: usize) -> Self {
        SignedSubset {
            pos: self.pos.without(elem),
            neg: self.neg.without(elem),
        }
    }

    /// Swaps the two sides.
    pub fn mirrored(self) -> Self {
        SignedSubset {
            pos: self.neg,
            neg: self.pos,
        }
    }

    /// Inner product of the characteristic vector with an integer vector
    /// indexed by `elem - 1`.
    pub fn dot(self, coeffs: &[i64]) -> i64 {
        self.pos.iter().map(|e| coeffs[e - 1]).sum::<i64>()
            - self.neg.iter().map(|e| coeffs[e - 1]).sum::<i64>()
    }
}

impl fmt::Debug for SignedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SignedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.pos, self.neg)
    }
}

/// The ground set `N = {1, ..., n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(GroundSet { n })
        } else {
            Err(Error::GroundSetSize { n, max: MAX_GROUND })
        }
    }

    pub fn size(self) -> usize {
        self.n
    }

    pub fn elements(self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn all(self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn contains(self, p: SignedSubset) -> bool {
        p.support().is_subset(self.all())
    }

    pub fn check(self, p: SignedSubset) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::MismatchedGroundSet {
                subset: p,
                n: self.n,
            })
        }
    }

    /// Number of signed subsets, `3^n`. Saturates for ground sets too large to
    /// enumerate.
    pub fn family_size(self) -> usize {
        3usize.saturating_pow(self.n as u32)
    }

    /// Position of `p` in ternary-counter order.
    pub fn index_of(self, p: SignedSubset) -> usize {
        let mut index = 0usize;
        let mut weight = 1usize;
        for e in self.elements() {
            if p.pos.contains(e) {
                index += weight;
            } else if p.neg.contains(e) {
                index += 2 * weight;
            }
            weight = weight.saturating_mul(3);
        }
        index
    }

    pub fn subset_at(self, mut index: usize) -> SignedSubset {
        let mut p = SignedSubset::EMPTY;
        for e in self.elements() {
            match index % 3 {
                1 => p.pos = p.pos.with(e),
                2 => p.neg = p.neg.with(e),
                _ => {}
            }
            index /= 3;
        }
        p
    }

    /// All of `3^N` in ternary-counter order.
    pub fn signed_subsets(self) -> SignedSubsets {
        SignedSubsets {
            n: self.n,
            digits: vec![0; self.n],
            current: Some(SignedSubset::EMPTY),
        }
    }

    pub fn reduced_union(self, p: SignedSubset, q: SignedSubset) -> Result<SignedSubset> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.reduced_union(q))
    }

    pub fn reduced_intersection(self, p: SignedSubset, q: SignedSubset) -> Result<SignedSubset> {
        self.check(p)?;
        self.check(q)?;
        Ok(p.reduced_intersection(q))
    }

    pub fn char_vector(self, p: SignedSubset) -> Result<RationalVector> {
        self.check(p)?;
        Ok(RationalVector::new(
            self.elements().map(|e| integer(p.chi(e))).collect(),
        ))
    }

    /// `x(X, Y)` for every signed subset, in ternary-counter order.
    pub fn signed_sums(self, x: &RationalVector) -> Vec<Rational> {
        debug_assert_eq!(x.len(), self.n);
        let mut sums = vec![Rational::zero(); self.family_size()];
        let mut block = 1;
        for value in x.iter() {
            for c in 0..block {
                sums[c + block] = &sums[c] + value;
                sums[c + 2 * block] = &sums[c] - value;
            }
            block *= 3;
        }
        sums
    }
}

/// Ternary-counter iterator over `3^N`.
pub struct SignedSubsets {
    n: usize,
    digits: Vec<u8>,
    current: Option<SignedSubset>,
}

impl Iterator for SignedSubsets {
    type Item = SignedSubset;

    fn next(&mut self) -> Option<SignedSubset> {
        let out = self.current?;
        let mut next = out;
        let mut k = 0;
        loop {
            if k == self.n {
                self.current = None;
                return Some(out);
            }
            let e = k + 1;
            match self.digits[k] {
                0 => {
                    self.digits[k] = 1;
                    next.pos = next.pos.with(e);
                    break;
                }
                1 => {
                    self.digits[k] = 2;
                    next.pos = next.pos.without(e);
                    next.neg = next.neg.with(e);
                    break;
                }
                _ => {
                    self.digits[k] = 0;
                    next.neg = next.neg.without(e);
                    k += 1;
                }
            }
        }
        self.current = Some(next);
        Some(out)
    }
}

/// A point of `R^N` with exact rational coordinates, indexed by ground-set
/// element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Rational::zero(); n])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RationalVector(values.iter().map(|&v| integer(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate of 1-based element `elem`.
    pub fn coord(&self, elem: usize) -> &Rational {
        &self.0[elem - 1]
    }

    pub fn set_coord(&mut self, elem: usize, value: Rational) {
        self.0[elem - 1] = value;
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    /// `x(X) - x(Y)`.
    pub fn eval_signed(&self, p: SignedSubset) -> Rational {
        let mut total = Rational::zero();
        for e in p.pos().iter() {
            total += self.coord(e);
        }
        for e in p.neg().iter() {
            total -= self.coord(e);
        }
        total
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `self + step * d` for an integer direction `d`.
    pub fn step(&self, d: &[i64], step: &Rational) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .zip(d)
                .map(|(x, &di)| match di {
                    0 => x.clone(),
                    1 => x + step,
                    -1 => x - step,
                    _ => x + step * integer(di),
                })
                .collect(),
        )
    }

    /// Lexicographic comparison of `(x(n), ..., x(1))`.
    pub fn cmp_from_top(&self, other: &RationalVector) -> std::cmp::Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }

    /// Machine words taken by the coordinates (numerator and denominator
    /// limbs).
    pub fn words(&self) -> usize {
        self.0.iter().map(rational_words).sum()
    }

    /// Parses comma- or whitespace-separated rationals (`p/q` or integers).
    pub fn parse(text: &str) -> Result<Self> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<Rational>()
                    .map_err(|e| Error::Instance(format!("bad rational {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(RationalVector)
    }
}

pub(crate) fn rational_words(r: &Rational) -> usize {
    let limbs = |v: &num_bigint::BigInt| v.iter_u64_digits().len().max(1);
    limbs(r.numer()) + limbs(r.denom())
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.0
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Space-separated coordinates, each as `p/q` in lowest terms (integers
/// without a denominator).
impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Add<&RationalVector> for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&RationalVector> for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}
