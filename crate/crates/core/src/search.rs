//! Reverse search over the vertices of `P_*(f)`: the local search function,
//! reverse arc lists, capacities and the enumeration state machine.

use std::cmp::Reverse;
use std::fmt;

use num_traits::Zero;

use crate::bisubfn::BisubFunction;
use crate::error::{Error, Result};
use crate::poset::{build_poset, closure_allow_cycles, Arc, HasseDiagram, Shape, VertexStructure};
use crate::signed_set::{
    integer, rational_words, ElementSet, Rational, RationalVector, Sign, SignedSubset,
};
use crate::tight::compute_xstar;

/// Arcs of `H(x)` that may carry the local search step: `i+j` (including
/// `+2(i)`) and `j-i` with the tail at the larger index.
pub fn eligible_arcs(h: &HasseDiagram) -> Vec<Arc> {
    h.arcs()
        .filter(|a| {
            matches!(
                a.shape(),
                Shape::PlusLoop | Shape::PlusPair | Shape::TailHigh
            )
        })
        .collect()
}

/// The local search arc: largest `j`, then a `+` shape with the largest `i`
/// (a selfloop counts as `i = j`), else the `j-i` shape with the largest `i`.
pub fn select_local_arc(eligible: &[Arc]) -> Option<Arc> {
    let top = eligible.iter().map(|a| a.hi()).max()?;
    let at_top = || eligible.iter().copied().filter(move |a| a.hi() == top);
    at_top()
        .filter(|a| a.shape() != Shape::TailHigh)
        .max_by_key(|a| a.lo())
        .or_else(|| at_top().max_by_key(|a| a.lo()))
}

/// `dep(x, ±i)` for every element, as stored by the enumerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepTable {
    pos: Vec<Option<SignedSubset>>,
    neg: Vec<Option<SignedSubset>>,
}

impl DepTable {
    pub fn from_structure(s: &VertexStructure) -> Self {
        DepTable {
            pos: s.dep_pos.iter().map(|d| d.map(|d| d.base)).collect(),
            neg: s.dep_neg.iter().map(|d| d.map(|d| d.base)).collect(),
        }
    }

    pub fn get(&self, elem: usize, sign: Sign) -> Option<SignedSubset> {
        match sign {
            Sign::Plus => self.pos[elem - 1],
            Sign::Minus => self.neg[elem - 1],
        }
    }

    fn words(&self) -> usize {
        self.pos.len() + self.neg.len()
    }
}

fn is_tight<F: BisubFunction + ?Sized>(f: &F, x: &RationalVector, p: SignedSubset) -> bool {
    x.eval_signed(p) == f.eval(p)
}

fn sub(p: SignedSubset, pos: ElementSet, neg: ElementSet) -> SignedSubset {
    SignedSubset::from_disjoint(p.pos().difference(pos), p.neg().difference(neg))
}

/// Every tight orthant usable for the selfloop formula together with its value.
/// For `+2(i)` an orthant `(S, T)` qualifies when `i ∈ T` and `(S, T - i)` is
/// also tight; for `-2(i)` when `i ∈ S` and `(S - i, T)` is tight.
pub fn selfloop_orthant_values<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    sign: Sign,
    elem: usize,
) -> Vec<(SignedSubset, Rational)> {
    let ground = f.ground();
    let all = ground.all();
    let two = integer(2);
    (0..1u64 << ground.size())
        .filter_map(|bits| {
            let s = ElementSet::from_bits(bits);
            let orthant = SignedSubset::new(s, all.difference(s)).expect("complementary sides");
            let (inner, flipped) = match sign {
                Sign::Plus if orthant.neg().contains(elem) => {
                    (orthant.without(elem), orthant.without(elem).with_pos(elem))
                }
                Sign::Minus if orthant.pos().contains(elem) => {
                    (orthant.without(elem), orthant.without(elem).with_neg(elem))
                }
                _ => return None,
            };
            if !is_tight(f, x, orthant) || !is_tight(f, x, inner) {
                return None;
            }
            let doubled = f.eval(orthant) + f.eval(flipped) - &two * f.eval(inner);
            Some((orthant, doubled / &two))
        })
        .collect()
}

/// Step length along `±2χ_i` from a vertex, by the selfloop formula on the
/// first qualifying tight orthant.
pub fn capacity_selfloop<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    sign: Sign,
    elem: usize,
) -> Result<Rational> {
    selfloop_orthant_values(f, x, sign, elem)
        .into_iter()
        .next()
        .map(|(_, c)| c)
        .ok_or(Error::NoTightOrthant {
            arc: Arc::selfloop(elem, sign),
        })
}

/// Step length along `χ_i + χ_j` from `dep(x, +i)` when `j ∈ dep(x, +i)⁻`.
pub fn capacity_pair<F: BisubFunction + ?Sized>(
    f: &F,
    deps: &DepTable,
    i: usize,
    j: usize,
) -> Result<Rational> {
    let arc = Arc::plus(i, j);
    let d = deps
        .get(i, Sign::Plus)
        .ok_or_else(|| Error::CapacityPrecondition {
            arc,
            detail: format!("dep(+{i}) is undefined"),
        })?;
    if !d.neg().contains(j) {
        return Err(Error::CapacityPrecondition {
            arc,
            detail: format!("{j} is not in dep(+{i})- = {}", d.neg()),
        });
    }
    let (ei, ej, none) = (
        ElementSet::singleton(i),
        ElementSet::singleton(j),
        ElementSet::EMPTY,
    );
    Ok(f.eval(sub(d, ei, none)) + f.eval(sub(d, none, ej)) - f.eval(sub(d, ei, ej)) - f.eval(d))
}

/// Step length along `-χ_i - χ_j` from `dep(x, -i)` when `j ∈ dep(x, -i)⁺`.
pub fn capacity_pair_minus<F: BisubFunction + ?Sized>(
    f: &F,
    deps: &DepTable,
    i: usize,
    j: usize,
) -> Result<Rational> {
    let arc = Arc::minus(i, j);
    let e = deps
        .get(i, Sign::Minus)
        .ok_or_else(|| Error::CapacityPrecondition {
            arc,
            detail: format!("dep(-{i}) is undefined"),
        })?;
    if !e.pos().contains(j) {
        return Err(Error::CapacityPrecondition {
            arc,
            detail: format!("{j} is not in dep(-{i})+ = {}", e.pos()),
        });
    }
    let (ei, ej, none) = (
        ElementSet::singleton(i),
        ElementSet::singleton(j),
        ElementSet::EMPTY,
    );
    Ok(f.eval(sub(e, none, ei)) + f.eval(sub(e, ej, none)) - f.eval(sub(e, ej, ei)) - f.eval(e))
}

/// The largest `c` with `x + c d` in `P_*(f)`, by scanning every constraint.
pub fn capacity_generic<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    d: &[i64],
) -> Result<Rational> {
    let ground = f.ground();
    if d.len() != ground.size() || x.len() != ground.size() {
        return Err(Error::DimensionMismatch {
            expected: ground.size(),
            got: d.len().min(x.len()),
        });
    }
    let values = f.values();
    let sums = ground.signed_sums(x);
    let mut best: Option<Rational> = None;
    for (k, p) in ground.signed_subsets().enumerate() {
        let rate = p.dot(d);
        if rate > 0 {
            let c = (&values[k] - &sums[k]) / integer(rate);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.ok_or(Error::Unbounded)
}

/// How a capacity was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Selfloop,
    Pair,
    MirroredPair,
    /// Mixed-sign directions, which have no closed formula.
    Generic,
    /// A formula whose precondition failed at this vertex.
    Fallback,
}

/// One capacity evaluation along an arc boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityRecord {
    pub arc: Arc,
    pub route: Route,
    pub value: Rational,
    pub fast: Option<Rational>,
    pub generic: Option<Rational>,
    /// Both orientations of a pair formula, when both are defined.
    pub symmetric: Option<(Rational, Rational)>,
}

/// Capacity along `∂a`, dispatched to the closed formulas where they apply.
/// With `crosscheck` the constraint scan also runs and any disagreement is an
/// error.
pub fn capacity<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    deps: &DepTable,
    arc: Arc,
    crosscheck: bool,
) -> Result<CapacityRecord> {
    let (i, j) = (arc.lo(), arc.hi());
    let mut symmetric = None;
    let (route, fast) = match arc.shape() {
        Shape::PlusLoop | Shape::MinusLoop => match capacity_selfloop(f, x, arc.lo_sign(), i) {
            Ok(c) => (Route::Selfloop, Some(c)),
            Err(_) => (Route::Fallback, None),
        },
        Shape::PlusPair | Shape::MinusPair => {
            let (route, one, other) = if arc.shape() == Shape::PlusPair {
                (
                    Route::Pair,
                    capacity_pair(f, deps, i, j).ok(),
                    capacity_pair(f, deps, j, i).ok(),
                )
            } else {
                (
                    Route::MirroredPair,
                    capacity_pair_minus(f, deps, i, j).ok(),
                    capacity_pair_minus(f, deps, j, i).ok(),
                )
            };
            if let (Some(a), Some(b)) = (&one, &other) {
                symmetric = Some((a.clone(), b.clone()));
            }
            match one.or(other) {
                Some(c) => (route, Some(c)),
                None => (Route::Fallback, None),
            }
        }
        Shape::TailLow | Shape::TailHigh => (Route::Generic, None),
    };
    let generic = if crosscheck || fast.is_none() {
        Some(capacity_generic(f, x, &arc.boundary(x.len()))?)
    } else {
        None
    };
    if crosscheck {
        let g = generic.as_ref().expect("computed above");
        let fast_values = fast.iter().chain(symmetric.iter().map(|(_, b)| b));
        if let Some(bad) = fast_values.into_iter().find(|c| *c != g) {
            return Err(Error::CapacityMismatch {
                arc,
                fast: bad.to_string(),
                generic: g.to_string(),
            });
        }
    }
    let value = fast
        .clone()
        .or_else(|| generic.clone())
        .expect("one route always yields a value");
    Ok(CapacityRecord {
        arc,
        route,
        value,
        fast,
        generic,
        symmetric,
    })
}

/// The parent step `g(x)` of a non-root vertex.
#[derive(Clone, Debug)]
pub struct LocalStep {
    pub arc: Arc,
    pub capacity: CapacityRecord,
    pub parent: RationalVector,
}

/// `g(x)` from the structure of `x`.
pub fn local_search_at<F: BisubFunction + ?Sized>(
    f: &F,
    s: &VertexStructure,
    crosscheck: bool,
) -> Result<LocalStep> {
    let arc = select_local_arc(&eligible_arcs(&s.hasse)).ok_or(Error::AtRoot)?;
    let capacity = capacity(f, &s.point, &DepTable::from_structure(s), arc, crosscheck)?;
    if capacity.value.is_zero() {
        return Err(Error::BrokenParent {
            point: s.point.to_string(),
            arc: arc.to_string(),
        });
    }
    let parent = s.point.step(&arc.boundary(s.point.len()), &capacity.value);
    Ok(LocalStep {
        arc,
        capacity,
        parent,
    })
}

/// `g(x)` for a vertex `x`.
pub fn local_search<F: BisubFunction + ?Sized>(f: &F, x: &RationalVector) -> Result<LocalStep> {
    local_search_at(f, &build_poset(f, x)?, false)
}

fn reverse_key(a: &Arc) -> (Reverse<usize>, Reverse<usize>, bool) {
    (
        Reverse(a.hi()),
        Reverse(a.lo()),
        a.shape() == Shape::TailLow,
    )
}

/// `A_R`: the arcs `-i-j` (including `-2(i)`) and `i-j` with `i < j` of a
/// Hasse diagram, scanned by decreasing `j`, then decreasing `i`, with `-i-j`
/// ahead of `i-j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReverseArcList {
    arcs: Vec<Arc>,
    cursor: usize,
}

impl ReverseArcList {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_exhausted(&self) -> bool {
        self.cursor >= self.arcs.len()
    }

    /// Moves the cursor just past `arc`; `false` if the arc is not listed.
    pub fn resume_after(&mut self, arc: Arc) -> bool {
        match self.arcs.iter().position(|&a| a == arc) {
            Some(k) => {
                self.cursor = k + 1;
                true
            }
            None => false,
        }
    }
}

impl Iterator for ReverseArcList {
    type Item = Arc;

    fn next(&mut self) -> Option<Arc> {
        let a = self.arcs.get(self.cursor).copied();
        if a.is_some() {
            self.cursor += 1;
        }
        a
    }
}

pub fn reverse_arc_list(h: &HasseDiagram) -> ReverseArcList {
    let mut arcs: Vec<Arc> = h
        .arcs()
        .filter(|a| {
            matches!(
                a.shape(),
                Shape::MinusLoop | Shape::MinusPair | Shape::TailLow
            )
        })
        .collect();
    arcs.sort_by_key(reverse_key);
    ReverseArcList { arcs, cursor: 0 }
}

/// Checks adjacency of two vertices through their Hasse diagrams: some
/// `a ∈ H(x)` and `a' ∈ H(x')` with `∂a = -∂a'` such that adding the reverse
/// of each to its own poset yields the same closure. Returns that pair.
pub fn adjacency_certificate<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    y: &RationalVector,
) -> Result<Option<(Arc, Arc)>> {
    if x == y {
        return Err(Error::SameVertex);
    }
    let sx = build_poset(f, x)?;
    let sy = build_poset(f, y)?;
    for a in sx.hasse.arcs() {
        let b = a.negated();
        if sy.hasse.contains(b)
            && closure_allow_cycles(&sx.graph.with(b)) == closure_allow_cycles(&sy.graph.with(a))
        {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// A vertex as reported to observers.
#[derive(Clone, Debug)]
pub struct Visit<'a> {
    pub coords: &'a RationalVector,
    pub depth: usize,
    /// The arc of `H(x)` along which the parent lies; `None` at the root.
    pub parent_arc: Option<Arc>,
}

/// One transition of the enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Init {
        root: RationalVector,
    },
    /// The next arc taken from the current list.
    Scan {
        arc: Arc,
    },
    /// The current list has no arcs left.
    Exhausted,
    /// Step from the current vertex along `arc`; `accepted` when the
    /// candidate's parent is the current vertex.
    Reverse {
        arc: Arc,
        capacity: Rational,
        candidate: RationalVector,
        accepted: bool,
    },
    /// Return to the parent along the local search arc.
    Forward {
        arc: Arc,
        to: RationalVector,
    },
    Stop,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Init { root } => write!(f, "init {root}"),
            Step::Scan { arc } => write!(f, "RS {arc}"),
            Step::Exhausted => write!(f, "RS exhausted"),
            Step::Reverse {
                arc,
                candidate,
                accepted,
                ..
            } => {
                write!(
                    f,
                    "RT {arc} -> {candidate} {}",
                    if *accepted { "accepted" } else { "rejected" }
                )
            }
            Step::Forward { arc, to } => write!(f, "FT {arc} -> {to}"),
            Step::Stop => write!(f, "stop"),
        }
    }
}

/// Hooks into the enumeration. All methods default to doing nothing.
pub trait Observer {
    fn vertex(&mut self, _visit: &Visit<'_>) {}
    fn step(&mut self, _step: &Step) {}
    fn capacity(&mut self, _record: &CapacityRecord) {}
    /// Called once per vertex structure built, including rejected candidates.
    fn structure(&mut self, _s: &VertexStructure) {}
    /// Words held by the enumerator after each step.
    fn state(&mut self, _words: usize) {}
}

struct Emit<V>(V);

impl<V: FnMut(&Visit<'_>)> Observer for Emit<V> {
    fn vertex(&mut self, visit: &Visit<'_>) {
        (self.0)(visit)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    /// Evaluate every closed-form capacity against the constraint scan.
    pub crosscheck: bool,
    pub order: EmitOrder,
}

/// When a vertex is handed to the observer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmitOrder {
    /// On first arrival, so vertices come out in depth-first preorder.
    #[default]
    Entry,
    /// On arrival at even depth and on departure at odd depth. The gap
    /// between two outputs then spans a bounded number of tree moves instead
    /// of a whole climb back towards the root.
    Alternating,
}

/// What the enumerator keeps between steps: the current vertex, the root,
/// the current Hasse diagram with its reverse arc list and dep table, the
/// parent step of the current vertex, and the depth.
#[derive(Clone, Debug)]
pub struct EnumeratorState {
    pub current: RationalVector,
    pub root: RationalVector,
    pub hasse: HasseDiagram,
    pub deps: DepTable,
    pub arc_list: ReverseArcList,
    /// The local search arc and capacity leading to the parent; `None` at
    /// the root.
    pub up: Option<(Arc, Rational)>,
    pub depth: usize,
}

impl EnumeratorState {
    fn at(
        s: &VertexStructure,
        root: RationalVector,
        up: Option<(Arc, Rational)>,
        depth: usize,
    ) -> Self {
        EnumeratorState {
            current: s.point.clone(),
            root,
            hasse: s.hasse.clone(),
            deps: DepTable::from_structure(s),
            arc_list: reverse_arc_list(&s.hasse),
            up,
            depth,
        }
    }

    /// Machine words: coordinate limbs of the two stored points, one word per
    /// stored arc and dep entry, the parent step, the cursor and the depth.
    pub fn words(&self) -> usize {
        let up = self.up.as_ref().map_or(0, |(_, c)| 1 + rational_words(c));
        self.current.words()
            + self.root.words()
            + self.hasse.len()
            + self.arc_list.len()
            + self.deps.words()
            + up
            + 2
    }
}

/// Reverse search over the vertices of `P_*(f)`.
pub struct Enumerator<'f, F: BisubFunction + ?Sized> {
    f: &'f F,
    options: Options,
}

impl<'f, F: BisubFunction + ?Sized> Enumerator<'f, F> {
    pub fn new(f: &'f F, options: Options) -> Self {
        Enumerator { f, options }
    }

    fn structure(&self, x: &RationalVector, obs: &mut impl Observer) -> Result<VertexStructure> {
        let s = build_poset(self.f, x)?;
        obs.structure(&s);
        Ok(s)
    }

    fn local_search(&self, s: &VertexStructure, obs: &mut impl Observer) -> Result<LocalStep> {
        let step = local_search_at(self.f, s, self.options.crosscheck)?;
        obs.capacity(&step.capacity);
        Ok(step)
    }

    /// Runs to completion and returns the number of vertices visited.
    pub fn run(&self, obs: &mut impl Observer) -> Result<usize> {
        let n = self.f.ground().size();
        let alternating = self.options.order == EmitOrder::Alternating;
        let root = compute_xstar(self.f).coords;
        let s = self.structure(&root, obs)?;
        let mut state = EnumeratorState::at(&s, root.clone(), None, 0);
        obs.step(&Step::Init { root: root.clone() });
        obs.vertex(&Visit {
            coords: &root,
            depth: 0,
            parent_arc: None,
        });
        obs.state(state.words());
        let mut count = 1;
        loop {
            if let Some(arc) = state.arc_list.next() {
                obs.step(&Step::Scan { arc });
                let record = capacity(
                    self.f,
                    &state.current,
                    &state.deps,
                    arc,
                    self.options.crosscheck,
                )?;
                obs.capacity(&record);
                let c = record.value;
                let candidate = state.current.step(&arc.boundary(n), &c);
                let mut next = None;
                if !c.is_zero() {
                    let s = self.structure(&candidate, obs)?;
                    let up = self.local_search(&s, obs)?;
                    if up.parent == state.current {
                        next = Some((s, up.arc, up.capacity.value));
                    }
                }
                obs.step(&Step::Reverse {
                    arc,
                    capacity: c,
                    candidate,
                    accepted: next.is_some(),
                });
                if let Some((s, up_arc, up_capacity)) = next {
                    state = EnumeratorState::at(
                        &s,
                        root.clone(),
                        Some((up_arc, up_capacity)),
                        state.depth + 1,
                    );
                    if !alternating || state.depth % 2 == 0 {
                        obs.vertex(&Visit {
                            coords: &state.current,
                            depth: state.depth,
                            parent_arc: Some(up_arc),
                        });
                        count += 1;
                    }
                }
            } else {
                obs.step(&Step::Exhausted);
                let Some((up_arc, up_capacity)) = state.up.clone() else {
                    obs.step(&Step::Stop);
                    return Ok(count);
                };
                if alternating && state.depth % 2 == 1 {
                    obs.vertex(&Visit {
                        coords: &state.current,
                        depth: state.depth,
                        parent_arc: Some(up_arc),
                    });
                    count += 1;
                }
                let parent = state.current.step(&up_arc.boundary(n), &up_capacity);
                let s = self.structure(&parent, obs)?;
                let up = match parent == root {
                    true => None,
                    false => {
                        let step = self.local_search(&s, obs)?;
                        Some((step.arc, step.capacity.value))
                    }
                };
                let from =
                    std::mem::replace(&mut state, EnumeratorState::at(&s, root.clone(), up, 0));
                state.depth = from.depth - 1;
                if !state.arc_list.resume_after(up_arc.negated()) {
                    return Err(Error::BrokenParent {
                        point: from.current.to_string(),
                        arc: up_arc.to_string(),
                    });
                }
                obs.step(&Step::Forward {
                    arc: up_arc,
                    to: parent,
                });
            }
            obs.state(state.words());
        }
    }
}

/// Calls `visitor` once per vertex, root first, and returns the count.
pub fn enumerate<F: BisubFunction + ?Sized>(
    f: &F,
    visitor: impl FnMut(&Visit<'_>),
) -> Result<usize> {
    Enumerator::new(f, Options::default()).run(&mut Emit(visitor))
}

/// Collects every vertex in preorder.
pub fn enumerate_all<F: BisubFunction + ?Sized>(f: &F) -> Result<Vec<RationalVector>> {
    let mut out = Vec::new();
    enumerate(f, |v| out.push(v.coords.clone()))?;
    Ok(out)
}
