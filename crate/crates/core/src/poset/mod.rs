//! Bidirected graphs over the ground set, the signed-poset axioms, transitive
//! closure, Hasse diagrams and ideals.
//!
//! An arc is identified with its boundary `∂a`, an integer vector with either
//! two unit entries at distinct elements (`i-j`, `i+j`, `-i-j`) or a single
//! entry `±2` (the selfloops `+2(i)` and `-2(i)`). The zero boundary of a
//! selfloop `i-i` is unrepresentable.

mod build;
mod dot;
mod family;

use std::fmt;

pub use build::{build_poset, rule_arcs, VertexStructure};
pub use dot::to_dot;
pub use family::{classify_family, separates, support, FamilyClass};

use crate::error::{Error, Result};
use crate::signed_set::{GroundSet, Sign, SignedSubset};

/// An arc of a bidirected graph, stored canonically with `lo <= hi`. A
/// selfloop has `lo == hi` and equal signs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    lo: u8,
    hi: u8,
    lo_sign: Sign,
    hi_sign: Sign,
}

/// The five boundary shapes, read with `i <= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `+2(i)`.
    PlusLoop,
    /// `-2(i)`.
    MinusLoop,
    /// `i+j`.
    PlusPair,
    /// `-i-j`.
    MinusPair,
    /// `i-j` with the tail at the smaller index.
    TailLow,
    /// `j-i` with the tail at the larger index.
    TailHigh,
}

impl Arc {
    pub fn selfloop(elem: usize, sign: Sign) -> Arc {
        debug_assert!(elem >= 1);
        Arc {
            lo: elem as u8,
            hi: elem as u8,
            lo_sign: sign,
            hi_sign: sign,
        }
    }

    /// `si·e_i + sj·e_j` for distinct `i`, `j`.
    pub fn pair(i: usize, si: Sign, j: usize, sj: Sign) -> Arc {
        assert!(
            i != j && i >= 1 && j >= 1,
            "pair arcs need two distinct endpoints"
        );
        if i < j {
            Arc {
                lo: i as u8,
                hi: j as u8,
                lo_sign: si,
                hi_sign: sj,
            }
        } else {
            Arc {
                lo: j as u8,
                hi: i as u8,
                lo_sign: sj,
                hi_sign: si,
            }
        }
    }

    /// `i-j`: tail at `i`, head at `j`.
    pub fn tail_head(i: usize, j: usize) -> Arc {
        Arc::pair(i, Sign::Plus, j, Sign::Minus)
    }

    /// `i+j`, or `+2(i)` when `i == j`.
    pub fn plus(i: usize, j: usize) -> Arc {
        if i == j {
            Arc::selfloop(i, Sign::Plus)
        } else {
            Arc::pair(i, Sign::Plus, j, Sign::Plus)
        }
    }

    /// `-i-j`, or `-2(i)` when `i == j`.
    pub fn minus(i: usize, j: usize) -> Arc {
        if i == j {
            Arc::selfloop(i, Sign::Minus)
        } else {
            Arc::pair(i, Sign::Minus, j, Sign::Minus)
        }
    }

    /// The arc with boundary `Σ coeff·e_elem`, if that boundary is one of the
    /// admissible shapes.
    pub fn from_boundary(terms: &[(usize, i64)]) -> Option<Arc> {
        let mut nonzero = terms.iter().filter(|(_, c)| *c != 0);
        let first = nonzero.next();
        let second = nonzero.next();
        if nonzero.next().is_some() {
            return None;
        }
        let sign = |c: i64| if c > 0 { Sign::Plus } else { Sign::Minus };
        match (first, second) {
            (Some(&(e, c)), None) if c.abs() == 2 && e >= 1 => Some(Arc::selfloop(e, sign(c))),
            (Some(&(e, c)), Some(&(f, d)))
                if c.abs() == 1 && d.abs() == 1 && e != f && e >= 1 && f >= 1 =>
            {
                Some(Arc::pair(e, sign(c), f, sign(d)))
            }
            _ => None,
        }
    }

    pub fn lo(self) -> usize {
        self.lo as usize
    }

    pub fn hi(self) -> usize {
        self.hi as usize
    }

    pub fn is_selfloop(self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_sign(self) -> Sign {
        self.lo_sign
    }

    pub fn hi_sign(self) -> Sign {
        self.hi_sign
    }

    pub fn shape(self) -> Shape {
        use Sign::*;
        match (self.is_selfloop(), self.lo_sign, self.hi_sign) {
            (true, Plus, _) => Shape::PlusLoop,
            (true, Minus, _) => Shape::MinusLoop,
            (false, Plus, Plus) => Shape::PlusPair,
            (false, Minus, Minus) => Shape::MinusPair,
            (false, Plus, Minus) => Shape::TailLow,
            (false, Minus, Plus) => Shape::TailHigh,
        }
    }

    /// Nonzero entries of `∂a`.
    pub fn terms(self) -> impl Iterator<Item = (usize, i64)> {
        let first = if self.is_selfloop() {
            (self.lo(), 2 * self.lo_sign.as_i64())
        } else {
            (self.lo(), self.lo_sign.as_i64())
        };
        let second = (!self.is_selfloop()).then(|| (self.hi(), self.hi_sign.as_i64()));
        std::iter::once(first).chain(second)
    }

    /// Entry of `∂a` at `elem`.
    pub fn coeff(self, elem: usize) -> i64 {
        self.terms().find(|&(e, _)| e == elem).map_or(0, |(_, c)| c)
    }

    /// `∂a` as a dense integer vector of length `n`.
    pub fn boundary(self, n: usize) -> Vec<i64> {
        let mut out = vec![0; n];
        for (e, c) in self.terms() {
            out[e - 1] = c;
        }
        out
    }

    /// The arc with boundary `-∂a`.
    pub fn negated(self) -> Arc {
        Arc {
            lo: self.lo,
            hi: self.hi,
            lo_sign: self.lo_sign.flip(),
            hi_sign: self.hi_sign.flip(),
        }
    }

    /// `⟨∂a, χ_(X,Y)⟩`.
    pub fn dot(self, p: SignedSubset) -> i64 {
        self.terms().map(|(e, c)| c * p.chi(e)).sum()
    }

    fn index(self, n: usize) -> usize {
        let signs =
            (self.lo_sign == Sign::Minus) as usize * 2 + (self.hi_sign == Sign::Minus) as usize;
        ((self.lo() - 1) * n + (self.hi() - 1)) * 4 + signs
    }

    fn from_index(index: usize, n: usize) -> Arc {
        let signs = index % 4;
        let cell = index / 4;
        let sign = |bit: bool| if bit { Sign::Minus } else { Sign::Plus };
        Arc {
            lo: (cell / n + 1) as u8,
            hi: (cell % n + 1) as u8,
            lo_sign: sign(signs & 2 != 0),
            hi_sign: sign(signs & 1 != 0),
        }
    }

    fn fits(self, n: usize) -> bool {
        self.hi() <= n
    }
}

/// Composition of two arcs under the transitivity rules: arcs (not both
/// selfloops) meeting with opposite signs at a common element give the arc
/// with boundary `∂a + ∂b`; selfloops at distinct elements give the arc with
/// boundary `(∂a + ∂b) / 2`. Cancelling sums yield nothing.
pub fn compose(a: Arc, b: Arc) -> Option<Arc> {
    if a.is_selfloop() && b.is_selfloop() {
        return (a.lo != b.lo).then(|| Arc::pair(a.lo(), a.lo_sign, b.lo(), b.lo_sign));
    }
    if !a.terms().any(|(e, c)| c * b.coeff(e) < 0) {
        return None;
    }
    let mut sum: Vec<(usize, i64)> = a.terms().collect();
    for (e, c) in b.terms() {
        match sum.iter_mut().find(|(f, _)| *f == e) {
            Some(slot) => slot.1 += c,
            None => sum.push((e, c)),
        }
    }
    Arc::from_boundary(&sum)
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `i-j`, `i+j`, `-i-j`, `+2(i)`, `-2(i)`; mixed arcs are written tail first.
impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = (self.lo, self.hi);
        match self.shape() {
            Shape::PlusLoop => write!(f, "+2({i})"),
            Shape::MinusLoop => write!(f, "-2({i})"),
            Shape::PlusPair => write!(f, "{i}+{j}"),
            Shape::MinusPair => write!(f, "-{i}-{j}"),
            Shape::TailLow => write!(f, "{i}-{j}"),
            Shape::TailHigh => write!(f, "{j}-{i}"),
        }
    }
}

/// A set of arcs over a ground set of size `n`, iterated in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ArcSet {
    n: usize,
    words: Vec<u64>,
    len: usize,
}

impl ArcSet {
    pub fn new(n: usize) -> ArcSet {
        ArcSet {
            n,
            words: vec![0; (4 * n * n).div_ceil(64)],
            len: 0,
        }
    }

    pub fn contains(&self, a: Arc) -> bool {
        if !a.fits(self.n) {
            return false;
        }
        let k = a.index(self.n);
        self.words[k / 64] & (1 << (k % 64)) != 0
    }

    /// Returns `true` when the arc was not present.
    pub fn insert(&mut self, a: Arc) -> bool {
        assert!(
            a.fits(self.n),
            "arc {a} outside a ground set of size {}",
            self.n
        );
        let k = a.index(self.n);
        let fresh = self.words[k / 64] & (1 << (k % 64)) == 0;
        if fresh {
            self.words[k / 64] |= 1 << (k % 64);
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, a: Arc) -> bool {
        if !self.contains(a) {
            return false;
        }
        let k = a.index(self.n);
        self.words[k / 64] &= !(1 << (k % 64));
        self.len -= 1;
        true
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Arc> + '_ {
        let n = self.n;
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let low = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Arc::from_index(w * 64 + low, n))
            })
        })
    }
}

impl fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A bidirected graph on the ground set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BidirectedGraph {
    ground: GroundSet,
    arcs: ArcSet,
}

impl BidirectedGraph {
    pub fn new(ground: GroundSet) -> Self {
        BidirectedGraph {
            ground,
            arcs: ArcSet::new(ground.size()),
        }
    }

    pub fn from_arcs(ground: GroundSet, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut g = Self::new(ground);
        for a in arcs {
            if !a.fits(ground.size()) {
                return Err(Error::ElementOutOfRange {
                    elem: a.hi(),
                    n: ground.size(),
                });
            }
            g.arcs.insert(a);
        }
        Ok(g)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn insert(&mut self, a: Arc) -> bool {
        self.arcs.insert(a)
    }

    pub fn remove(&mut self, a: Arc) -> bool {
        self.arcs.remove(a)
    }

    pub fn contains(&self, a: Arc) -> bool {
        self.arcs.contains(a)
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// A copy with one more arc.
    pub fn with(&self, a: Arc) -> Self {
        let mut g = self.clone();
        g.insert(a);
        g
    }

    fn first_cycle(&self) -> Option<(Arc, Arc)> {
        self.arcs()
            .find(|a| a < &a.negated() && self.contains(a.negated()))
            .map(|a| (a, a.negated()))
    }
}

impl fmt::Debug for BidirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.arcs()).finish()
    }
}

/// The first failing signed-poset axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetViolation {
    /// Two arcs with opposite boundaries.
    Cyclic(Arc, Arc),
    /// Oppositely incident arcs whose sum is missing.
    Transitivity(Arc, Arc, Arc),
    /// Selfloops at distinct elements whose half-sum is missing.
    LoopTransitivity(Arc, Arc, Arc),
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::Cyclic(a, b) => write!(f, "acyclicity: {a} and {b} are opposite"),
            PosetViolation::Transitivity(a, b, c) => {
                write!(f, "transitivity: {a} and {b} need {c}")
            }
            PosetViolation::LoopTransitivity(a, b, c) => {
                write!(f, "selfloop transitivity: {a} and {b} need {c}")
            }
        }
    }
}

/// Checks acyclicity and both transitivity axioms, naming the first violation.
pub fn is_signed_poset(g: &BidirectedGraph) -> Result<(), PosetViolation> {
    if let Some((a, b)) = g.first_cycle() {
        return Err(PosetViolation::Cyclic(a, b));
    }
    for a in g.arcs() {
        for b in g.arcs().filter(|&b| b > a) {
            if let Some(c) = compose(a, b) {
                if !g.contains(c) {
                    return Err(if a.is_selfloop() && b.is_selfloop() {
                        PosetViolation::LoopTransitivity(a, b, c)
                    } else {
                        PosetViolation::Transitivity(a, b, c)
                    });
                }
            }
        }
    }
    Ok(())
}

/// Least fixpoint of the composition rules, without any acyclicity check.
/// Needed for the graphs `G(x) + ā` of the adjacency test, which contain a
/// 2-cycle by construction.
pub fn closure_allow_cycles(g: &BidirectedGraph) -> BidirectedGraph {
    let mut out = g.clone();
    let mut queue: Vec<Arc> = g.arcs().collect();
    let mut k = 0;
    while k < queue.len() {
        let a = queue[k];
        let mut m = 0;
        while m <= k {
            if let Some(c) = compose(a, queue[m]) {
                if out.insert(c) {
                    queue.push(c);
                }
            }
            m += 1;
        }
        k += 1;
    }
    out
}

/// The transitive closure of an acyclic bidirected graph. Fails if `g` is
/// cyclic or if the closure creates a pair of opposite arcs.
pub fn transitive_closure(g: &BidirectedGraph) -> Result<BidirectedGraph> {
    if let Some((a, b)) = g.first_cycle() {
        return Err(Error::Cyclic(a, b));
    }
    let closed = closure_allow_cycles(g);
    match closed.first_cycle() {
        Some((a, b)) => Err(Error::Cyclic(a, b)),
        None => Ok(closed),
    }
}

/// The minimal bidirected graph with the same transitive closure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HasseDiagram {
    pub graph: BidirectedGraph,
}

impl HasseDiagram {
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.graph.arcs()
    }

    pub fn contains(&self, a: Arc) -> bool {
        self.graph.contains(a)
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }
}

impl fmt::Debug for HasseDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.graph.fmt(f)
    }
}

/// The Hasse diagram of an acyclic graph.
///
/// In a closed acyclic arc set an arc is indispensable exactly when it is not
/// the composition of two other arcs of the closure, and the indispensable
/// arcs generate the closure whenever any generating subset does; that set is
/// returned. Should it fail to regenerate the closure, arcs are instead
/// deleted one at a time in canonical order while still implied by the rest.
pub fn hasse(g: &BidirectedGraph) -> Result<HasseDiagram> {
    let closed = transitive_closure(g)?;
    let arcs: Vec<Arc> = closed.arcs().collect();
    let mut reduced = closed.clone();
    for (k, &a) in arcs.iter().enumerate() {
        for &b in &arcs[k + 1..] {
            if let Some(c) = compose(a, b) {
                reduced.remove(c);
            }
        }
    }
    if closure_allow_cycles(&reduced) != closed {
        reduced = closed.clone();
        for &a in &arcs {
            let mut rest = reduced.clone();
            rest.remove(a);
            if closure_allow_cycles(&rest).contains(a) {
                reduced = rest;
            }
        }
    }
    Ok(HasseDiagram { graph: reduced })
}

/// Ideals of a bidirected graph, in ternary-counter order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSet {
    pub members: Vec<SignedSubset>,
}

/// All `(X, Y)` with `⟨∂a, χ_(X,Y)⟩ <= 0` for every arc, by exhaustive scan.
pub fn ideals(g: &BidirectedGraph) -> IdealSet {
    let arcs: Vec<Arc> = g.arcs().collect();
    IdealSet {
        members: g
            .ground()
            .signed_subsets()
            .filter(|&p| arcs.iter().all(|a| a.dot(p) <= 0))
            .collect(),
    }
}
