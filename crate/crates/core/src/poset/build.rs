//! The signed poset `G(x)` of a vertex, assembled from saturation and
//! dependence data.

use super::{hasse, ideals, transitive_closure, Arc, BidirectedGraph, HasseDiagram};
use crate::bisubfn::BisubFunction;
use crate::error::{Error, Result};
use crate::signed_set::{RationalVector, Sign};
use crate::tight::{dep, saturation, tight_family, DepResult, SaturationPair, TightFamily};

use super::classify_family;

/// Everything derived from the tight family at one vertex.
#[derive(Clone, Debug)]
pub struct VertexStructure {
    pub point: RationalVector,
    pub family: TightFamily,
    pub saturation: SaturationPair,
    /// `dep(x, +i)` at index `i - 1`, `None` when `i` is not positively saturated.
    pub dep_pos: Vec<Option<DepResult>>,
    pub dep_neg: Vec<Option<DepResult>>,
    /// Arcs produced directly by the construction rules.
    pub rules: BidirectedGraph,
    /// `G(x)`: the transitive closure of `rules`.
    pub graph: BidirectedGraph,
    pub hasse: HasseDiagram,
}

impl VertexStructure {
    pub fn dep(&self, elem: usize, sign: Sign) -> Option<&DepResult> {
        match sign {
            Sign::Plus => self.dep_pos[elem - 1].as_ref(),
            Sign::Minus => self.dep_neg[elem - 1].as_ref(),
        }
    }
}

fn deps(family: &TightFamily, sign: Sign) -> Vec<Option<DepResult>> {
    family
        .ground()
        .elements()
        .map(|e| dep(family, e, sign).ok())
        .collect()
}

/// The arcs of rules (1a)-(2c). A clause that refers to an undefined dep
/// contributes nothing.
pub fn rule_arcs(family: &TightFamily) -> BidirectedGraph {
    let ground = family.ground();
    let sat = saturation(family);
    let dep_pos = deps(family, Sign::Plus);
    let dep_neg = deps(family, Sign::Minus);
    let in_pos = |d: &[Option<DepResult>], of: usize, e: usize| {
        d[of - 1].as_ref().is_some_and(|r| r.pos().contains(e))
    };
    let in_neg = |d: &[Option<DepResult>], of: usize, e: usize| {
        d[of - 1].as_ref().is_some_and(|r| r.neg().contains(e))
    };

    let mut g = BidirectedGraph::new(ground);
    for i in ground.elements() {
        if !sat.pos.contains(i) {
            g.insert(Arc::selfloop(i, Sign::Plus));
        }
        if !sat.neg.contains(i) {
            g.insert(Arc::selfloop(i, Sign::Minus));
        }
    }
    for i in ground.elements() {
        for j in ground.elements().filter(|&j| j != i) {
            if in_pos(&dep_pos, i, j) || in_neg(&dep_neg, j, i) {
                g.insert(Arc::tail_head(i, j));
            }
            if i < j {
                if in_neg(&dep_pos, i, j) || in_neg(&dep_pos, j, i) {
                    g.insert(Arc::plus(i, j));
                }
                if in_pos(&dep_neg, i, j) || in_pos(&dep_neg, j, i) {
                    g.insert(Arc::minus(i, j));
                }
            }
        }
    }
    g
}

/// `G(x)` and `H(x)` at a vertex `x`. Fails if `x` is outside the polyhedron,
/// is not a vertex, or if the ideals of the constructed poset differ from the
/// tight family.
pub fn build_poset<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
) -> Result<VertexStructure> {
    let family = tight_family(f, x)?;
    let class = classify_family(&family)?;
    if !class.spanning {
        return Err(Error::NotAVertex { reason: "spanning" });
    }
    if !class.simple {
        return Err(Error::NotAVertex { reason: "simple" });
    }
    let rules = rule_arcs(&family);
    let graph = transitive_closure(&rules)?;
    let ideal_set = ideals(&graph);
    if ideal_set.members != family.members() {
        let extra = ideal_set.members.iter().find(|p| !family.contains(**p));
        let missing = family
            .members()
            .iter()
            .find(|p| !ideal_set.members.contains(p));
        let detail = match (extra, missing) {
            (Some(p), _) => format!("{p} is an ideal but not tight"),
            (None, Some(p)) => format!("{p} is tight but not an ideal"),
            (None, None) => "orderings differ".to_string(),
        };
        return Err(Error::IdealMismatch {
            point: x.to_string(),
            detail,
        });
    }
    let hasse = hasse(&graph)?;
    Ok(VertexStructure {
        point: x.clone(),
        saturation: saturation(&family),
        dep_pos: deps(&family, Sign::Plus),
        dep_neg: deps(&family, Sign::Minus),
        family,
        rules,
        graph,
        hasse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisubfn::gen_strict_example;
    use crate::poset::{closure_allow_cycles, is_signed_poset};

    fn names<'a>(arcs: impl Iterator<Item = Arc> + 'a) -> Vec<String> {
        arcs.map(|a| a.to_string()).collect()
    }

    fn structure(values: &[i64]) -> VertexStructure {
        let f = gen_strict_example(values.len()).unwrap();
        build_poset(&f, &RationalVector::from_integers(values)).unwrap()
    }

    #[test]
    fn strict_example_at_2_1() {
        let s = structure(&[2, 1]);
        assert_eq!(names(s.rules.arcs()), ["-2(1)", "2-1", "-2(2)"]);
        assert!(s.graph.contains(Arc::minus(1, 2)));
        assert_eq!(names(s.hasse.arcs()), ["2-1", "-2(2)"]);
    }

    #[test]
    fn strict_example_at_minus2_1() {
        let s = structure(&[-2, 1]);
        assert_eq!(names(s.rules.arcs()), ["+2(1)", "1+2", "-2(2)"]);
        assert!(s.graph.contains(Arc::tail_head(1, 2)));
        assert_eq!(names(s.hasse.arcs()), ["1+2", "-2(2)"]);
    }

    #[test]
    fn strict_example_at_xstar() {
        let s = structure(&[1, 2]);
        assert_eq!(names(s.hasse.arcs()), ["-2(1)", "1-2"]);
        assert!(s.graph.contains(Arc::minus(1, 2)));
        assert!(s.graph.contains(Arc::selfloop(2, Sign::Minus)));
    }

    #[test]
    fn non_vertices_are_rejected() {
        let f = gen_strict_example(2).unwrap();
        let err = build_poset(&f, &RationalVector::from_integers(&[0, 0])).unwrap_err();
        assert!(matches!(err, Error::NotAVertex { .. }));
        let err = build_poset(&f, &RationalVector::from_integers(&[1, 1])).unwrap_err();
        assert!(matches!(err, Error::NotAVertex { .. }));
        let err = build_poset(&f, &RationalVector::from_integers(&[3, 0])).unwrap_err();
        assert!(matches!(err, Error::NotMember { .. }));
    }

    #[test]
    fn structure_invariants_on_strict_n3() {
        let f = gen_strict_example(3).unwrap();
        for v in crate::oracle::brute_vertices(&f).iter() {
            let s = build_poset(&f, v).unwrap();
            assert_eq!(is_signed_poset(&s.graph), Ok(()));
            assert_eq!(closure_allow_cycles(&s.hasse.graph), s.graph);
            assert_eq!(ideals(&s.rules).members, s.family.members());
        }
    }
}
