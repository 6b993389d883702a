//! Bisubmodular set functions on `3^N`: table storage, the bisubmodular and
//! strict inequality checks, and the instance generators.

use std::borrow::Cow;
use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::signed_set::{integer, rational, GroundSet, Rational, RationalVector, SignedSubset};

/// Ground sets larger than this cannot be stored as a dense `3^n` table.
pub const MAX_TABLE_GROUND: usize = 16;

/// An evaluation oracle `f: 3^N -> Q` with `f(∅,∅) = 0`.
pub trait BisubFunction {
    fn ground(&self) -> GroundSet;

    fn eval(&self, p: SignedSubset) -> Rational;

    /// All values in ternary-counter order.
    fn values(&self) -> Cow<'_, [Rational]> {
        Cow::Owned(
            self.ground()
                .signed_subsets()
                .map(|p| self.eval(p))
                .collect(),
        )
    }
}

impl<F: BisubFunction + ?Sized> BisubFunction for &F {
    fn ground(&self) -> GroundSet {
        (**self).ground()
    }

    fn eval(&self, p: SignedSubset) -> Rational {
        (**self).eval(p)
    }

    fn values(&self) -> Cow<'_, [Rational]> {
        (**self).values()
    }
}

/// Dense table of all `3^n` values in ternary-counter order.
#[derive(Clone, PartialEq, Eq)]
pub struct TableFunction {
    ground: GroundSet,
    values: Vec<Rational>,
}

impl TableFunction {
    pub fn new(ground: GroundSet, values: Vec<Rational>) -> Result<Self> {
        let n = ground.size();
        if n > MAX_TABLE_GROUND {
            return Err(Error::GroundSetSize {
                n,
                max: MAX_TABLE_GROUND,
            });
        }
        let expected = ground.family_size();
        if values.len() != expected {
            return Err(Error::TableSize {
                n,
                expected,
                got: values.len(),
            });
        }
        if !values[0].is_zero() {
            return Err(Error::NonzeroAtEmpty {
                value: values[0].to_string(),
            });
        }
        Ok(TableFunction { ground, values })
    }

    /// Tabulates `value(p)` over `3^N`; the value at `(∅,∅)` is forced to 0.
    pub fn from_fn(
        ground: GroundSet,
        mut value: impl FnMut(SignedSubset) -> Rational,
    ) -> Result<Self> {
        let values = ground
            .signed_subsets()
            .map(|p| {
                if p.is_empty() {
                    Rational::zero()
                } else {
                    value(p)
                }
            })
            .collect();
        Self::new(ground, values)
    }

    pub fn tabulate<F: BisubFunction + ?Sized>(f: &F) -> Result<Self> {
        Self::new(f.ground(), f.values().into_owned())
    }

    pub fn table(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, p: SignedSubset) -> &Rational {
        &self.values[self.ground.index_of(p)]
    }
}

impl BisubFunction for TableFunction {
    fn ground(&self) -> GroundSet {
        self.ground
    }

    fn eval(&self, p: SignedSubset) -> Rational {
        self.get(p).clone()
    }

    fn values(&self) -> Cow<'_, [Rational]> {
        Cow::Borrowed(&self.values)
    }
}

impl fmt::Debug for TableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (p, v) in self.ground.signed_subsets().zip(&self.values) {
            map.entry(&p, &format_args!("{v}"));
        }
        map.finish()
    }
}

/// `f'(X, Y) = n + (n - 1) + ... + (n + 1 - |X ∪ Y|)`, a strict bisubmodular
/// function whose polyhedron has the maximum `2^n n!` vertices.
pub fn gen_strict_example(n: usize) -> Result<TableFunction> {
    let ground = GroundSet::new(n)?;
    let n = n as i64;
    TableFunction::from_fn(ground, |p| {
        let k = p.support().len() as i64;
        integer((0..k).map(|i| n - i).sum())
    })
}

/// `f(X, Y) = r |X ∪ Y|`; the polyhedron is the cube `[-r, r]^n`.
pub fn gen_scaled_cube(n: usize, r: &Rational) -> Result<TableFunction> {
    if !r.is_positive() {
        return Err(Error::Instance(format!(
            "cube half-width must be positive, got {r}"
        )));
    }
    let ground = GroundSet::new(n)?;
    TableFunction::from_fn(ground, |p| r * integer(p.support().len() as i64))
}

/// `f(X, Y) + v(X) - v(Y)`: shifts the polyhedron by `v`.
pub fn translate<F: BisubFunction + ?Sized>(f: &F, v: &RationalVector) -> Result<TableFunction> {
    let ground = f.ground();
    if v.len() != ground.size() {
        return Err(Error::DimensionMismatch {
            expected: ground.size(),
            got: v.len(),
        });
    }
    let values = f.values();
    let shift = ground.signed_sums(v);
    TableFunction::new(
        ground,
        values.iter().zip(shift).map(|(a, b)| a + b).collect(),
    )
}

/// `r f` for `r > 0`: scales the polyhedron about the origin.
pub fn scale<F: BisubFunction + ?Sized>(f: &F, r: &Rational) -> Result<TableFunction> {
    if !r.is_positive() {
        return Err(Error::Instance(format!(
            "scale factor must be positive, got {r}"
        )));
    }
    TableFunction::new(f.ground(), f.values().iter().map(|v| v * r).collect())
}

/// A positively scaled, translated copy of `f'(n)` with small random rational
/// parameters. Both operations preserve bisubmodularity.
pub fn gen_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<TableFunction> {
    let base = gen_strict_example(n)?;
    let factor = rational(rng.gen_range(1..=12), rng.gen_range(1..=6));
    let shift = RationalVector::new(
        (0..n)
            .map(|_| rational(rng.gen_range(-20..=20), rng.gen_range(1..=5)))
            .collect(),
    );
    translate(&scale(&base, &factor)?, &shift)
}

/// A pair of signed subsets together with the four function values of the
/// bisubmodular inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub first: SignedSubset,
    pub second: SignedSubset,
    pub f_first: Rational,
    pub f_second: Rational,
    pub f_union: Rational,
    pub f_intersection: Rational,
    /// `f(p) + f(q) - f(p ⊔ q) - f(p ⊓ q)`.
    pub slack: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} + {} vs {} + {} (slack {})",
            self.first,
            self.second,
            self.f_first,
            self.f_second,
            self.f_union,
            self.f_intersection,
            self.slack
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

fn scan_pairs<F: BisubFunction + ?Sized>(
    f: &F,
    mut keep: impl FnMut(SignedSubset, SignedSubset, &Rational) -> bool,
) -> ViolationReport {
    let ground = f.ground();
    let values = f.values();
    let subsets: Vec<SignedSubset> = ground.signed_subsets().collect();
    let mut report = ViolationReport::default();
    for (a, &p) in subsets.iter().enumerate() {
        for (b, &q) in subsets.iter().enumerate().skip(a + 1) {
            let u = ground.index_of(p.reduced_union(q));
            let m = ground.index_of(p.reduced_intersection(q));
            let slack = &values[a] + &values[b] - &values[u] - &values[m];
            if keep(p, q, &slack) {
                report.violations.push(Violation {
                    first: p,
                    second: q,
                    f_first: values[a].clone(),
                    f_second: values[b].clone(),
                    f_union: values[u].clone(),
                    f_intersection: values[m].clone(),
                    slack,
                });
            }
        }
    }
    report
}

/// Every unordered pair (in ternary order) violating
/// `f(p) + f(q) >= f(p ⊔ q) + f(p ⊓ q)`.
pub fn validate_bisubmodular<F: BisubFunction + ?Sized>(f: &F) -> ViolationReport {
    scan_pairs(f, |_, _, slack| slack.is_negative())
}

/// Every pair of `⊑`-incomparable signed subsets on which the inequality is
/// not strict. Comparable pairs are exempt since `{p ⊔ q, p ⊓ q} = {p, q}`
/// makes them hold with equality.
pub fn validate_strict<F: BisubFunction + ?Sized>(f: &F) -> ViolationReport {
    scan_pairs(f, |p, q, slack| {
        !p.leq(q) && !q.leq(p) && !slack.is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ss(pos: &[usize], neg: &[usize]) -> SignedSubset {
        SignedSubset::from_slices(pos, neg).unwrap()
    }

    pub(crate) fn violating_n1() -> TableFunction {
        let g = GroundSet::new(1).unwrap();
        TableFunction::new(g, vec![integer(0), integer(1), integer(-2)]).unwrap()
    }

    #[test]
    fn strict_example_values() {
        let f2 = gen_strict_example(2).unwrap();
        assert_eq!(f2.eval(SignedSubset::EMPTY), integer(0));
        for p in [ss(&[1], &[]), ss(&[], &[1]), ss(&[2], &[]), ss(&[], &[2])] {
            assert_eq!(f2.eval(p), integer(2));
        }
        for p in [
            ss(&[1, 2], &[]),
            ss(&[1], &[2]),
            ss(&[2], &[1]),
            ss(&[], &[1, 2]),
        ] {
            assert_eq!(f2.eval(p), integer(3));
        }
        let f3 = gen_strict_example(3).unwrap();
        assert_eq!(f3.eval(ss(&[3], &[1])), integer(5));
        let f1 = gen_strict_example(1).unwrap();
        assert_eq!(f1.eval(ss(&[1], &[])), integer(1));
    }

    #[test]
    fn strict_example_depends_only_on_support_size() {
        let f = gen_strict_example(4).unwrap();
        let g = f.ground();
        for p in g.signed_subsets() {
            for q in g.signed_subsets() {
                if p.support().len() == q.support().len() {
                    assert_eq!(f.eval(p), f.eval(q));
                }
            }
        }
    }

    #[test]
    fn cube_values() {
        let f = gen_scaled_cube(2, &integer(1)).unwrap();
        assert_eq!(f.eval(ss(&[1], &[2])), integer(2));
        assert!(gen_scaled_cube(2, &integer(0)).is_err());
    }

    #[test]
    fn bisubmodular_validation() {
        assert!(validate_bisubmodular(&gen_strict_example(2).unwrap()).is_empty());
        assert!(validate_bisubmodular(&gen_scaled_cube(2, &integer(1)).unwrap()).is_empty());

        let report = validate_bisubmodular(&violating_n1());
        assert_eq!(report.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.first, v.second), (ss(&[1], &[]), ss(&[], &[1])));
        assert_eq!(v.f_union, integer(0));
        assert_eq!(v.f_intersection, integer(0));
        assert_eq!(v.slack, integer(-1));
    }

    #[test]
    fn strict_validation() {
        assert!(validate_strict(&gen_strict_example(2).unwrap()).is_empty());

        let cube = gen_scaled_cube(2, &integer(1)).unwrap();
        let report = validate_strict(&cube);
        assert!(report
            .violations
            .iter()
            .any(|v| (v.first, v.second) == (ss(&[1], &[]), ss(&[2], &[])) && v.slack.is_zero()));

        let g = GroundSet::new(1).unwrap();
        let f = TableFunction::new(g, vec![integer(0), integer(2), integer(1)]).unwrap();
        assert!(validate_strict(&f).is_empty());
    }

    #[test]
    fn generated_families_validate() {
        for n in 1..=4 {
            let strict = gen_strict_example(n).unwrap();
            assert!(validate_bisubmodular(&strict).is_empty());
            assert!(validate_strict(&strict).is_empty());
            assert!(
                validate_bisubmodular(&gen_scaled_cube(n, &rational(3, 2)).unwrap()).is_empty()
            );
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for k in 0..20 {
            let f = gen_random(1 + k % 4, &mut rng).unwrap();
            assert!(validate_bisubmodular(&f).is_empty());
        }
    }

    #[test]
    fn translation() {
        let f = gen_strict_example(2).unwrap();
        assert_eq!(translate(&f, &RationalVector::zeros(2)).unwrap(), f);
        let moved = translate(&f, &RationalVector::from_integers(&[1, 0])).unwrap();
        assert_eq!(moved.eval(ss(&[1], &[])), integer(3));

        let v = RationalVector::new(vec![rational(3, 7), integer(-2)]);
        let back = translate(&translate(&f, &v).unwrap(), &-&v).unwrap();
        assert_eq!(back, f);
        assert!(translate(&f, &RationalVector::zeros(3)).is_err());
    }

    #[test]
    fn table_shape_is_checked() {
        let g = GroundSet::new(1).unwrap();
        assert!(matches!(
            TableFunction::new(g, vec![integer(0), integer(1)]),
            Err(Error::TableSize { .. })
        ));
        assert!(matches!(
            TableFunction::new(g, vec![integer(1), integer(1), integer(1)]),
            Err(Error::NonzeroAtEmpty { .. })
        ));
    }
}
