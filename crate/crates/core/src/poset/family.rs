//! Support, spanning and simplicity of closed families of signed subsets.

use crate::error::{Error, Result};
use crate::oracle::check_closed;
use crate::signed_set::{ElementSet, SignedSubset};
use crate::tight::TightFamily;

/// The common `X ∪ Y` of the ⊑-maximal members. Requires a closed family.
pub fn support(family: &TightFamily) -> Result<ElementSet> {
    let members = family.members();
    if !check_closed(members) {
        return Err(Error::NotClosed(format!("{} members", members.len())));
    }
    let mut maximal = members
        .iter()
        .filter(|p| !members.iter().any(|q| p.strictly_below(*q)))
        .map(|p| p.support());
    let first = maximal.next().unwrap_or(ElementSet::EMPTY);
    match maximal.find(|s| *s != first) {
        Some(other) => Err(Error::NotClosed(format!(
            "maximal members have supports {first} and {other}"
        ))),
        None => Ok(first),
    }
}

/// A member separates `i` and `j` when exactly one of them lies in its
/// support.
pub fn separates(p: SignedSubset, i: usize, j: usize) -> bool {
    p.support().contains(i) != p.support().contains(j)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FamilyClass {
    pub spanning: bool,
    pub pre_spanning: bool,
    pub simple: bool,
    pub pre_simple: bool,
}

impl FamilyClass {
    pub fn is_vertex_family(&self) -> bool {
        self.spanning && self.simple
    }
}

pub fn classify_family(family: &TightFamily) -> Result<FamilyClass> {
    let n = family.ground().size();
    let supp = support(family)?.len();
    let mut unseparated = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            if !family.members().iter().any(|&p| separates(p, i, j)) {
                unseparated += 1;
            }
        }
    }
    Ok(FamilyClass {
        spanning: supp == n,
        pre_spanning: supp + 1 == n,
        simple: unseparated == 0,
        pre_simple: unseparated == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisubfn::gen_strict_example;
    use crate::signed_set::{GroundSet, RationalVector};
    use crate::tight::tight_family;

    fn family_at(values: &[i64]) -> TightFamily {
        let f = gen_strict_example(values.len()).unwrap();
        tight_family(&f, &RationalVector::from_integers(values)).unwrap()
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&family_at(&[2, 1])).unwrap(), ElementSet::full(2));
        let g = GroundSet::new(2).unwrap();
        let trivial = TightFamily::from_members(g, vec![SignedSubset::EMPTY]);
        assert_eq!(support(&trivial).unwrap(), ElementSet::EMPTY);
        let edge = family_at(&[2, 1]).intersection(&family_at(&[2, -1]));
        assert_eq!(support(&edge).unwrap().len(), 1);
    }

    #[test]
    fn support_rejects_open_family() {
        let g = GroundSet::new(2).unwrap();
        let open = TightFamily::from_members(
            g,
            vec![
                SignedSubset::from_slices(&[1], &[]).unwrap(),
                SignedSubset::from_slices(&[2], &[]).unwrap(),
            ],
        );
        assert!(matches!(support(&open), Err(Error::NotClosed(_))));
    }

    #[test]
    fn vertex_and_edge_classes() {
        for x in [
            [1, 2],
            [2, 1],
            [2, -1],
            [1, -2],
            [-1, -2],
            [-2, -1],
            [-2, 1],
            [-1, 2],
        ] {
            assert!(
                classify_family(&family_at(&x)).unwrap().is_vertex_family(),
                "{x:?}"
            );
        }
        let selfloop_edge = family_at(&[2, -1]).intersection(&family_at(&[2, 1]));
        let class = classify_family(&selfloop_edge).unwrap();
        assert!(class.pre_spanning && !class.spanning);

        let pair_edge = family_at(&[2, 1]).intersection(&family_at(&[1, 2]));
        let class = classify_family(&pair_edge).unwrap();
        assert!(class.spanning && class.pre_simple && !class.simple);

        assert!(!classify_family(&family_at(&[0, 0])).unwrap().spanning);
    }
}
