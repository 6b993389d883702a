//! Ground truth independent of the reverse search: greedy vertices over every
//! signed permutation, lexicographic argmax, closure checks and a rank test
//! for adjacency.

use std::collections::BTreeSet;
use std::thread;

use num_traits::Zero;

use crate::bisubfn::BisubFunction;
use crate::error::{Error, Result};
use crate::signed_set::{integer, GroundSet, Rational, RationalVector, Sign, SignedSubset};
use crate::tight::{greedy_vertex, tight_family, SignedChain, Vertex};

/// Distinct points ordered lexicographically by coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSet {
    points: BTreeSet<RationalVector>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` when the point was not present.
    pub fn insert(&mut self, x: RationalVector) -> bool {
        self.points.insert(x)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.points.contains(x)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RationalVector> {
        self.points.iter()
    }
}

impl FromIterator<RationalVector> for VertexSet {
    fn from_iter<I: IntoIterator<Item = RationalVector>>(iter: I) -> Self {
        VertexSet {
            points: iter.into_iter().collect(),
        }
    }
}

impl Extend<RationalVector> for VertexSet {
    fn extend<I: IntoIterator<Item = RationalVector>>(&mut self, iter: I) {
        self.points.extend(iter)
    }
}

/// Permutations of `1..=n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(k) = (0..n.saturating_sub(1))
            .rev()
            .find(|&k| current[k] < current[k + 1])
        else {
            return out;
        };
        let l = (k + 1..n).rev().find(|&l| current[k] < current[l]).unwrap();
        current.swap(k, l);
        current[k + 1..].reverse();
        out.push(current.clone());
    }
}

/// All `2^n n!` signed permutations: permutations in lexicographic order, and
/// for each one the sign vectors counted in binary (bit `k` set means the
/// `k`-th added element goes negative).
pub fn signed_permutations(ground: GroundSet) -> Vec<SignedChain> {
    let n = ground.size();
    let mut out = Vec::new();
    for perm in permutations(n) {
        for mask in 0u64..(1 << n) {
            let steps = perm
                .iter()
                .enumerate()
                .map(|(k, &e)| {
                    (
                        e,
                        if mask >> k & 1 == 1 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        },
                    )
                })
                .collect();
            out.push(SignedChain::new(ground, steps).expect("permutation is a valid chain"));
        }
    }
    out
}

/// The greedy vertices of every signed permutation, deduplicated.
pub fn brute_vertices<F: BisubFunction + ?Sized>(f: &F) -> VertexSet {
    signed_permutations(f.ground())
        .iter()
        .map(|c| greedy_vertex(f, c).coords)
        .collect()
}

/// [`brute_vertices`] spread over `jobs` threads. The result does not depend
/// on `jobs`.
pub fn brute_vertices_parallel<F: BisubFunction + Sync + ?Sized>(f: &F, jobs: usize) -> VertexSet {
    let chains = signed_permutations(f.ground());
    let jobs = jobs.clamp(1, chains.len());
    let chunk = chains.len().div_ceil(jobs);
    thread::scope(|scope| {
        let workers: Vec<_> = chains
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|c| greedy_vertex(f, c).coords)
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        workers
            .into_iter()
            .flat_map(|w| w.join().expect("oracle worker panicked"))
            .collect()
    })
}

/// The maximizer of `(x(n), ..., x(1))` in lexicographic order.
pub fn lex_argmax(vertices: &VertexSet) -> Result<Vertex> {
    vertices
        .iter()
        .max_by(|a, b| a.cmp_from_top(b))
        .map(|x| Vertex::new(x.clone()))
        .ok_or(Error::EmptyVertexSet)
}

/// Whether a family is closed under reduced union and intersection.
pub fn check_closed(family: &[SignedSubset]) -> bool {
    let members: BTreeSet<SignedSubset> = family.iter().copied().collect();
    members.iter().all(|&p| {
        members.iter().all(|&q| {
            members.contains(&p.reduced_union(q)) && members.contains(&p.reduced_intersection(q))
        })
    })
}

/// Rank of a set of integer vectors over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| integer(v)).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = &m[r][col] / &lead;
                for c in col..cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Two distinct vertices are adjacent exactly when the constraints tight at
/// both have rank `n - 1`.
pub fn brute_adjacent<F: BisubFunction + ?Sized>(
    f: &F,
    x: &RationalVector,
    y: &RationalVector,
) -> Result<bool> {
    if x == y {
        return Err(Error::SameVertex);
    }
    let ground = f.ground();
    let common = tight_family(f, x)?.intersection(&tight_family(f, y)?);
    let rows: Vec<Vec<i64>> = common
        .members()
        .iter()
        .map(|p| ground.elements().map(|e| p.chi(e)).collect())
        .collect();
    Ok(rank(&rows) + 1 == ground.size())
}
