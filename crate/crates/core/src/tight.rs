//! Per-point structure of `P_*(f)`: membership, greedy vertices of signed
//! chains, the tight family `F(x)`, signed saturation and signed dependence.

use std::fmt;

use crate::bisubfn::BisubFunction;
use crate::error::{Error, Result};
use crate::signed_set::{ElementSet, GroundSet, RationalVector, Sign, SignedSubset};

/// A signed permutation `(e_1, s_1), ..., (e_n, s_n)`. Step `k` adds `e_k` to
/// the positive (`s_k = +`) or negative side, giving the chain
/// `(∅,∅) = (U_0,W_0) ⊏ (U_1,W_1) ⊏ ... ⊏ (U_n,W_n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedChain {
    steps: Vec<(usize, Sign)>,
}

impl SignedChain {
    pub fn new(ground: GroundSet, steps: Vec<(usize, Sign)>) -> Result<Self> {
        if steps.len() != ground.size() {
            return Err(Error::InvalidChain(format!(
                "expected {} steps, got {}",
                ground.size(),
                steps.len()
            )));
        }
        let mut seen = ElementSet::EMPTY;
        for &(e, _) in &steps {
            if !ground.elements().contains(&e) {
                return Err(Error::ElementOutOfRange {
                    elem: e,
                    n: ground.size(),
                });
            }
            if seen.contains(e) {
                return Err(Error::InvalidChain(format!("element {e} repeated")));
            }
            seen = seen.with(e);
        }
        Ok(SignedChain { steps })
    }

    /// Parses `+2 -1 +3` style chains.
    pub fn parse(ground: GroundSet, text: &str) -> Result<Self> {
        let steps = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                let (sign, rest) = match t.as_bytes()[0] {
                    b'+' => (Sign::Plus, &t[1..]),
                    b'-' => (Sign::Minus, &t[1..]),
                    _ => (Sign::Plus, t),
                };
                rest.parse::<usize>()
                    .map(|e| (e, sign))
                    .map_err(|_| Error::InvalidChain(format!("bad step {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, steps)
    }

    pub fn steps(&self) -> &[(usize, Sign)] {
        &self.steps
    }

    /// The chain `(U_0,W_0), ..., (U_n,W_n)`.
    pub fn sets(&self) -> Vec<SignedSubset> {
        let mut current = SignedSubset::EMPTY;
        let mut out = vec![current];
        for &(e, s) in &self.steps {
            current = match s {
                Sign::Plus => current.with_pos(e),
                Sign::Minus => current.with_neg(e),
            };
            out.push(current);
        }
        out
    }
}

impl fmt::Debug for SignedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SignedChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (e, s)) in self.steps.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}{e}", s.symbol())?;
        }
        f.write_str("]")
    }
}

/// An extreme point, optionally with a signed chain that generates it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub coords: RationalVector,
    pub provenance: Option<SignedChain>,
}

impl Vertex {
    pub fn new(coords: RationalVector) -> Self {
        Vertex {
            coords,
            provenance: None,
        }
    }
}

/// The first signed subset whose inequality `x(X,Y) <= f(X,Y)` fails.
pub fn first_violated<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
) -> Option<SignedSubset> {
    let ground = f.ground();
    let values = f.values();
    let sums = ground.signed_sums(x);
    sums.iter()
        .zip(values.iter())
        .position(|(lhs, rhs)| lhs > rhs)
        .map(|k| ground.subset_at(k))
}

pub fn is_member<F: BisubFunction + ?Sized>(f: &F, x: &RationalVector) -> bool {
    x.len() == f.ground().size() && first_violated(f, x).is_none()
}

/// The vertex given by the greedy formula along `chain`: the element added at
/// step `k` gets `±(f(U_k,W_k) - f(U_{k-1},W_{k-1}))`.
pub fn greedy_vertex<F: BisubFunction + ?Sized>(f: &F, chain: &SignedChain) -> Vertex {
    let n = f.ground().size();
    let mut coords = RationalVector::zeros(n);
    let sets = chain.sets();
    let mut previous = f.eval(sets[0]);
    for (&(e, s), &set) in chain.steps.iter().zip(&sets[1..]) {
        let value = f.eval(set);
        let gain = &value - &previous;
        coords.set_coord(
            e,
            match s {
                Sign::Plus => gain,
                Sign::Minus => -gain,
            },
        );
        previous = value;
    }
    Vertex {
        coords,
        provenance: Some(chain.clone()),
    }
}

/// The all-positive chain adding `n, n-1, ..., 1`.
pub fn xstar_chain(ground: GroundSet) -> SignedChain {
    SignedChain {
        steps: ground.elements().rev().map(|e| (e, Sign::Plus)).collect(),
    }
}

/// The vertex maximizing `x(n)` first, then `x(n-1)`, and so on down to `x(1)`.
pub fn compute_xstar<F: BisubFunction + ?Sized>(f: &F) -> Vertex {
    greedy_vertex(f, &xstar_chain(f.ground()))
}

/// Signed subsets tight at a point, in ternary-counter order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightFamily {
    ground: GroundSet,
    members: Vec<SignedSubset>,
}

impl TightFamily {
    /// Wraps an arbitrary family; members are sorted into ternary order.
    pub fn from_members(ground: GroundSet, mut members: Vec<SignedSubset>) -> Self {
        members.sort_by_key(|&p| ground.index_of(p));
        members.dedup();
        TightFamily { ground, members }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn members(&self) -> &[SignedSubset] {
        &self.members
    }

    pub fn contains(&self, p: SignedSubset) -> bool {
        self.members.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn intersection(&self, other: &TightFamily) -> TightFamily {
        TightFamily {
            ground: self.ground,
            members: self
                .members
                .iter()
                .copied()
                .filter(|p| other.contains(*p))
                .collect(),
        }
    }
}

/// `F(x)` by an exhaustive scan of `3^N`. Rejects points outside `P_*(f)`.
pub fn tight_family<F: BisubFunction + ?Sized>(f: &F, x: &RationalVector) -> Result<TightFamily> {
    let ground = f.ground();
    if x.len() != ground.size() {
        return Err(Error::DimensionMismatch {
            expected: ground.size(),
            got: x.len(),
        });
    }
    let values = f.values();
    let sums = ground.signed_sums(x);
    let mut members = Vec::new();
    for (k, (lhs, rhs)) in sums.iter().zip(values.iter()).enumerate() {
        if lhs > rhs {
            let subset = ground.subset_at(k);
            return Err(Error::NotMember {
                subset,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
        if lhs == rhs {
            members.push(ground.subset_at(k));
        }
    }
    Ok(TightFamily { ground, members })
}

/// Elements that cannot move up (`pos`) or down (`neg`) inside `P_*(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationPair {
    pub pos: ElementSet,
    pub neg: ElementSet,
}

impl SaturationPair {
    pub fn side(&self, sign: Sign) -> ElementSet {
        match sign {
            Sign::Plus => self.pos,
            Sign::Minus => self.neg,
        }
    }
}

/// An element is positively saturated exactly when some tight set holds it on
/// its positive side; the step along `+χ_i` is the least slack over the sets
/// with `i ∈ X`, which is zero iff one of them is tight.
pub fn saturation(family: &TightFamily) -> SaturationPair {
    family.members.iter().fold(
        SaturationPair {
            pos: ElementSet::EMPTY,
            neg: ElementSet::EMPTY,
        },
        |acc, p| SaturationPair {
            pos: acc.pos.union(p.pos()),
            neg: acc.neg.union(p.neg()),
        },
    )
}

/// `dep(x, ±i)`: the reduced intersection of the tight sets holding `elem` on
/// the `sign` side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepResult {
    pub base: SignedSubset,
    pub elem: usize,
    pub sign: Sign,
}

impl DepResult {
    pub fn pos(&self) -> ElementSet {
        self.base.pos()
    }

    pub fn neg(&self) -> ElementSet {
        self.base.neg()
    }
}

pub fn dep(family: &TightFamily, elem: usize, sign: Sign) -> Result<DepResult> {
    let holds = |p: &SignedSubset| match sign {
        Sign::Plus => p.pos().contains(elem),
        Sign::Minus => p.neg().contains(elem),
    };
    family
        .members
        .iter()
        .copied()
        .filter(holds)
        .reduce(SignedSubset::reduced_intersection)
        .map(|base| DepResult { base, elem, sign })
        .ok_or(Error::UndefinedDep {
            elem,
            sign: sign.symbol(),
        })
}
