//! Random corpora and brute-force references shared by the integration
//! tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use causal_core::{Atom, CausalTerm, Head, Label, Program, Rule};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const LABELS: [&str; 4] = ["a", "b", "c", "d"];

fn leaf(rng: &mut TestRng, labels: &[&str]) -> CausalTerm {
    match rng.gen_range(0..10) {
        0 => CausalTerm::zero(),
        1 => CausalTerm::one(),
        _ => CausalTerm::label(labels.choose(rng).unwrap()),
    }
}

/// A finite term of depth at most `depth`; Sum and Product nodes have at
/// most `max_arity` children.
pub fn random_term(rng: &mut TestRng, labels: &[&str], depth: usize, max_arity: usize) -> CausalTerm {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng, labels);
    }
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(0..=max_arity);
            CausalTerm::Sum((0..n).map(|_| random_term(rng, labels, depth - 1, max_arity)).collect())
        }
        1 => {
            let n = rng.gen_range(0..=max_arity);
            CausalTerm::Product((0..n).map(|_| random_term(rng, labels, depth - 1, max_arity)).collect())
        }
        _ => CausalTerm::app(
            random_term(rng, labels, depth - 1, max_arity),
            random_term(rng, labels, depth - 1, max_arity),
        ),
    }
}

pub fn random_chain(rng: &mut TestRng, labels: &[&str], max_len: usize) -> CausalTerm {
    let n = rng.gen_range(1..=max_len);
    let mut t = CausalTerm::label(labels.choose(rng).unwrap());
    for _ in 1..n {
        t = CausalTerm::app(t, CausalTerm::label(labels.choose(rng).unwrap()));
    }
    t
}

/// A product of chains (possibly the empty product `1`).
pub fn random_cause(rng: &mut TestRng, labels: &[&str]) -> CausalTerm {
    let n = rng.gen_range(0..=3);
    let mut chains: Vec<CausalTerm> = (0..n).map(|_| random_chain(rng, labels, 3)).collect();
    if chains.len() == 1 {
        chains.pop().unwrap()
    } else {
        CausalTerm::Product(chains)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_rules: usize,
    pub max_atoms: usize,
    pub max_labels: usize,
    pub negation: bool,
    pub constraints: bool,
}

pub const POSITIVE: Shape = Shape { max_rules: 8, max_atoms: 6, max_labels: 4, negation: false, constraints: false };
pub const NORMAL: Shape = Shape { max_rules: 8, max_atoms: 6, max_labels: 4, negation: true, constraints: true };

fn random_label(rng: &mut TestRng, labels: &[&str]) -> CausalTerm {
    match rng.gen_range(0..20) {
        0..=5 => CausalTerm::one(),
        6..=16 => CausalTerm::label(labels.choose(rng).unwrap()),
        17 => CausalTerm::Sum(vec![
            CausalTerm::label(labels.choose(rng).unwrap()),
            CausalTerm::label(labels.choose(rng).unwrap()),
        ]),
        18 => CausalTerm::Product(vec![
            CausalTerm::label(labels.choose(rng).unwrap()),
            CausalTerm::label(labels.choose(rng).unwrap()),
        ]),
        _ => random_chain(rng, labels, 2),
    }
}

/// A random ground program. Labels never contain `0`.
pub fn random_program(rng: &mut TestRng, shape: Shape) -> Program {
    let n_atoms = rng.gen_range(1..=shape.max_atoms);
    let atom_names: Vec<String> = (0..n_atoms).map(|i| format!("p{i}")).collect();
    let n_labels = rng.gen_range(1..=shape.max_labels);
    let labels: Vec<&str> = LABELS[..n_labels].to_vec();
    let n_rules = rng.gen_range(1..=shape.max_rules);
    let pick = |rng: &mut TestRng| Atom::new(atom_names.choose(rng).unwrap());
    let rules = (0..n_rules)
        .map(|_| {
            let head = if shape.constraints && rng.gen_bool(0.1) {
                Head::Falsum
            } else {
                Head::Atom(pick(rng))
            };
            let n_pos = if head != Head::Falsum && rng.gen_bool(0.35) { 0 } else { rng.gen_range(1..=2) };
            let positive: BTreeSet<Atom> = (0..n_pos).map(|_| pick(rng)).collect();
            let negative: BTreeSet<Atom> = if shape.negation && rng.gen_bool(0.4) {
                (0..rng.gen_range(1..=2)).map(|_| pick(rng)).collect()
            } else {
                BTreeSet::new()
            };
            Rule { label: random_label(rng, &labels), head, positive, negative }
        })
        .collect();
    Program::new(rules)
}

/// A label of the program and a replacement (`None` for `1`).
pub fn random_replacement(rng: &mut TestRng, program: &Program) -> Option<(Label, Option<Label>)> {
    let labels: Vec<Label> = program.labels().into_iter().collect();
    let from = labels.choose(rng)?.clone();
    let to = match rng.gen_range(0..3) {
        0 => None,
        1 => Some(Label::new(LABELS.choose(rng).unwrap())),
        _ => Some(Label::new("fresh")),
    };
    Some((from, to))
}

/// Reference valuation by syntactic expansion into a sum of products of
/// chains (no absorption) plus the filter membership test.
pub mod reference {
    use causal_core::{CausalTerm, CausalValue};

    pub type Chain = Vec<String>;
    pub type Cause = Vec<Chain>;
    /// Sum of products of chains.
    pub type Dnf = Vec<Cause>;

    pub fn expand(term: &CausalTerm) -> Dnf {
        match term {
            CausalTerm::Label(l) => vec![vec![vec![l.name().to_string()]]],
            CausalTerm::Sum(ts) => ts.iter().flat_map(expand).collect(),
            CausalTerm::Product(ts) => ts.iter().fold(vec![vec![]], |acc, t| {
                let right = expand(t);
                let mut out = Vec::new();
                for c in &acc {
                    for d in &right {
                        out.push(c.iter().chain(d.iter()).cloned().collect());
                    }
                }
                out
            }),
            CausalTerm::App(l, r) => {
                let (left, right) = (expand(l), expand(r));
                let mut out = Vec::new();
                for c in &left {
                    for d in &right {
                        out.push(apply(c, d));
                    }
                }
                out
            }
        }
    }

    fn apply(c: &Cause, d: &Cause) -> Cause {
        if c.is_empty() {
            return d.clone();
        }
        if d.is_empty() {
            return c.clone();
        }
        let mut out = Vec::new();
        for x in c {
            for y in d {
                out.push(x.iter().chain(y.iter()).cloned().collect());
            }
        }
        out
    }

    /// `small` can be obtained from `big` by deleting labels.
    pub fn is_subsequence(small: &[String], big: &[String]) -> bool {
        let mut it = big.iter();
        small.iter().all(|s| it.any(|b| b == s))
    }

    /// `cause` lies in the value filter generated by `generator`: every
    /// chain of `generator` embeds into some chain of `cause`.
    fn generates(generator: &Cause, cause: &Cause) -> bool {
        generator
            .iter()
            .filter(|y| !y.is_empty())
            .all(|y| cause.iter().any(|x| is_subsequence(y, x)))
    }

    /// Membership of a finite cause in the value denoted by a sum of
    /// products.
    pub fn member(cause: &Cause, value: &Dnf) -> bool {
        value.iter().any(|g| generates(g, cause))
    }

    pub fn from_value(value: &CausalValue) -> Dnf {
        value
            .causes()
            .map(|c| {
                c.chains()
                    .map(|x| x.labels().iter().map(|l| l.name().to_string()).collect())
                    .collect()
            })
            .collect()
    }

    /// Both denote the same filter of causes.
    pub fn same_value(a: &Dnf, b: &Dnf) -> bool {
        a.iter().all(|c| member(c, b)) && b.iter().all(|c| member(c, a))
    }
}
