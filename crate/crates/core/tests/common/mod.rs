#![allow(dead_code)]

use bisubmod::bisubfn::{gen_random, gen_scaled_cube, gen_strict_example};
use bisubmod::poset::{Arc, VertexStructure};
use bisubmod::search::{CapacityRecord, Enumerator, Observer, Options, Step, Visit};
use bisubmod::signed_set::{integer, rational};
use bisubmod::{BisubFunction, GroundSet, RationalVector, TableFunction};
use rand::SeedableRng;

pub fn pt(values: &[i64]) -> RationalVector {
    RationalVector::from_integers(values)
}

/// `g(|X ∪ Y|)` with `g(k) = min(k, 2)`: bisubmodular, not strict, and highly
/// degenerate for `n >= 3`.
pub fn truncated_rank(n: usize) -> TableFunction {
    let g = GroundSet::new(n).unwrap();
    TableFunction::from_fn(g, |p| integer(p.support().len().min(2) as i64)).unwrap()
}

/// A 2-dimensional instance whose polyhedron is the quadrilateral with
/// vertices (2,2), (2,0), (1,-1), (0,0). Values in ternary order.
pub fn quadrilateral() -> TableFunction {
    let g = GroundSet::new(2).unwrap();
    TableFunction::new(
        g,
        [0, 2, 0, 2, 4, 0, 1, 2, 0]
            .iter()
            .map(|&v| integer(v))
            .collect(),
    )
    .unwrap()
}

pub fn random_instances(count: usize, seed: u64) -> Vec<TableFunction> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| gen_random(2 + k % 3, &mut rng).unwrap())
        .collect()
}

/// Named instances with `n <= max_n`.
pub fn corpus(max_n: usize) -> Vec<(String, TableFunction)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push((format!("strict n={n}"), gen_strict_example(n).unwrap()));
        out.push((
            format!("cube n={n}"),
            gen_scaled_cube(n, &integer(1)).unwrap(),
        ));
        out.push((
            format!("cube r=3/2 n={n}"),
            gen_scaled_cube(n, &rational(3, 2)).unwrap(),
        ));
        out.push((format!("truncated n={n}"), truncated_rank(n)));
    }
    out.push(("quadrilateral".into(), quadrilateral()));
    for (k, f) in random_instances(20, 2024).into_iter().enumerate() {
        if f.ground().size() <= max_n {
            out.push((format!("random #{k} n={}", f.ground().size()), f));
        }
    }
    out
}

/// Records everything the enumerator reports.
#[derive(Default)]
pub struct Recorder {
    pub visits: Vec<(RationalVector, usize, Option<Arc>)>,
    pub steps: Vec<Step>,
    pub capacities: Vec<CapacityRecord>,
    pub structures: Vec<VertexStructure>,
    pub max_words: usize,
    pub keep_structures: bool,
}

impl Observer for Recorder {
    fn vertex(&mut self, visit: &Visit<'_>) {
        self.visits
            .push((visit.coords.clone(), visit.depth, visit.parent_arc));
    }
    fn step(&mut self, step: &Step) {
        self.steps.push(step.clone());
    }
    fn capacity(&mut self, record: &CapacityRecord) {
        self.capacities.push(record.clone());
    }
    fn structure(&mut self, s: &VertexStructure) {
        if self.keep_structures {
            self.structures.push(s.clone());
        }
    }
    fn state(&mut self, words: usize) {
        self.max_words = self.max_words.max(words);
    }
}

pub fn record(f: &TableFunction, crosscheck: bool, keep_structures: bool) -> Recorder {
    let mut rec = Recorder {
        keep_structures,
        ..Recorder::default()
    };
    Enumerator::new(
        f,
        Options {
            crosscheck,
            ..Options::default()
        },
    )
    .run(&mut rec)
    .unwrap();
    rec
}
