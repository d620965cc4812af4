//! Proof-tree enumeration.
//!
//! An independent route to the value of an atom: enumerate every proof
//! tree of the atom, take the product of its source-to-sink label paths,
//! and sum over the trees. For the least model of a positive program, and
//! for every causal stable model of a normal program (restricted to rules
//! whose negative body is not defeated), the result coincides with the
//! model's value.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::algebra::{evaluate, CausalTerm, CausalValue};
use crate::semantics::{causal_stable_models, Atom, Head, Interpretation, Program, Rule, SolveOptions};
use crate::Error;

/// Default limit on the number of rules the subset scan accepts.
pub const DEFAULT_RULE_CAP: usize = 12;

/// A proof DAG over rules of a program, identified by rule index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProofTree {
    pub vertices: BTreeSet<usize>,
    /// `(provider, consumer)` pairs.
    pub edges: BTreeSet<(usize, usize)>,
}

impl ProofTree {
    fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |(from, _)| *from == v).map(|(_, to)| *to)
    }

    fn has_incoming(&self, v: usize) -> bool {
        self.edges.iter().any(|(_, to)| *to == v)
    }

    /// The unique vertex without outgoing edges, if there is exactly one.
    pub fn sink(&self) -> Option<usize> {
        let mut sinks = self
            .vertices
            .iter()
            .copied()
            .filter(|v| self.successors(*v).next().is_none());
        let first = sinks.next()?;
        if sinks.next().is_some() {
            None
        } else {
            Some(first)
        }
    }

    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied().filter(|v| !self.has_incoming(*v))
    }

    fn is_acyclic(&self) -> bool {
        // Kahn's algorithm.
        let mut indegree: BTreeMap<usize, usize> = self.vertices.iter().map(|v| (*v, 0)).collect();
        for (_, to) in &self.edges {
            *indegree.get_mut(to).unwrap() += 1;
        }
        let mut ready: Vec<usize> = indegree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for w in self.successors(v) {
                let d = indegree.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(w);
                }
            }
        }
        seen == self.vertices.len()
    }

    fn reaches(&self, from: usize, target: usize) -> bool {
        let mut stack = alloc::vec![from];
        let mut visited = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if v == target {
                return true;
            }
            if visited.insert(v) {
                stack.extend(self.successors(v));
            }
        }
        false
    }

    /// Checks acyclicity, the single sink, exactly one provider with the
    /// right head per positive body atom (and no other edges), and that
    /// every vertex reaches the sink.
    pub fn is_valid(&self, program: &Program) -> bool {
        let rules = program.rules();
        if self.vertices.is_empty() || self.vertices.iter().any(|v| *v >= rules.len()) {
            return false;
        }
        if self.edges.iter().any(|(a, b)| !self.vertices.contains(a) || !self.vertices.contains(b)) {
            return false;
        }
        if !self.is_acyclic() {
            return false;
        }
        let Some(sink) = self.sink() else { return false };
        for &v in &self.vertices {
            let incoming: Vec<usize> =
                self.edges.iter().filter(|(_, to)| *to == v).map(|(from, _)| *from).collect();
            let mut provided = BTreeSet::new();
            for from in &incoming {
                match &rules[*from].head {
                    Head::Atom(h) if rules[v].positive.contains(h) => {
                        if !provided.insert(h.clone()) {
                            return false;
                        }
                    }
                    _ => return false,
                }
            }
            if provided != rules[v].positive {
                return false;
            }
        }
        self.vertices.iter().all(|v| self.reaches(*v, sink))
    }

    /// Every source-to-sink route, as the sequence of rule indices.
    pub fn vertex_paths(&self) -> Vec<Vec<usize>> {
        let Some(sink) = self.sink() else { return Vec::new() };
        let mut out = Vec::new();
        for source in self.sources() {
            let mut stack = alloc::vec![alloc::vec![source]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == sink {
                    out.push(path);
                    continue;
                }
                for next in self.successors(last) {
                    let mut extended = path.clone();
                    extended.push(next);
                    stack.push(extended);
                }
            }
        }
        out.sort();
        out
    }

    /// `Paths(T)`: the label sequences of all source-to-sink routes.
    pub fn paths(&self, program: &Program) -> BTreeSet<Vec<CausalTerm>> {
        self.vertex_paths()
            .into_iter()
            .map(|p| p.into_iter().map(|v| program.rules()[v].label.clone()).collect())
            .collect()
    }

    /// `cause(T)` as a term: the product of the concatenated path labels.
    /// Unlabelled steps are dropped from each path.
    pub fn cause_term(&self, program: &Program) -> CausalTerm {
        let mut factors: Vec<CausalTerm> = self
            .paths(program)
            .into_iter()
            .map(|labels| {
                let mut steps = labels.into_iter().filter(|t| !t.is_one());
                match steps.next() {
                    None => CausalTerm::one(),
                    Some(first) => steps.fold(first, CausalTerm::app),
                }
            })
            .collect();
        factors.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        factors.dedup();
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            CausalTerm::Product(factors)
        }
    }

    pub fn cause(&self, program: &Program) -> CausalValue {
        evaluate(&self.cause_term(program))
    }
}

fn check_rule_cap(program: &Program, rule_cap: usize) -> Result<(), Error> {
    if program.len() > rule_cap || program.len() >= 64 {
        return Err(Error::RuleCapExceeded { rules: program.len(), cap: rule_cap });
    }
    Ok(())
}

/// All proof trees whose sink has head `atom`, with vertices drawn from the
/// rules accepted by `keep`.
///
/// Exhaustive: every vertex subset, then every choice of one provider per
/// positive body atom, keeping the acyclic single-sink choices.
pub fn enumerate_proof_trees<F>(
    program: &Program,
    atom: &Atom,
    keep: F,
    rule_cap: usize,
) -> Result<Vec<ProofTree>, Error>
where
    F: Fn(&Rule) -> bool,
{
    check_rule_cap(program, rule_cap)?;
    let rules = program.rules();
    let usable: Vec<usize> = (0..rules.len()).filter(|i| keep(&rules[*i])).collect();
    let mut trees = Vec::new();
    for mask in 1u64..(1u64 << usable.len()) {
        let vertices: BTreeSet<usize> = usable
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, r)| *r)
            .collect();
        if !vertices.iter().any(|v| rules[*v].head.atom() == Some(atom)) {
            continue;
        }
        // One slot per (consumer, body atom), listing candidate providers.
        let mut slots: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut feasible = true;
        for &v in &vertices {
            for needed in &rules[v].positive {
                let providers: Vec<usize> = vertices
                    .iter()
                    .copied()
                    .filter(|u| rules[*u].head.atom() == Some(needed))
                    .collect();
                if providers.is_empty() {
                    feasible = false;
                    break;
                }
                slots.push((v, providers));
            }
            if !feasible {
                break;
            }
        }
        if !feasible {
            continue;
        }
        // A vertex whose head no other member consumes can only be the sink.
        let forced_sinks: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|u| !slots.iter().any(|(v, ps)| v != u && ps.contains(u)))
            .collect();
        if forced_sinks.len() > 1
            || forced_sinks.iter().any(|s| rules[*s].head.atom() != Some(atom))
        {
            continue;
        }
        let mut successors: Vec<Vec<usize>> = alloc::vec![Vec::new(); rules.len()];
        assign_providers(&slots, 0, &mut successors, &mut |successors| {
            let sinks: Vec<usize> =
                vertices.iter().copied().filter(|v| successors[*v].is_empty()).collect();
            if let [sink] = sinks[..] {
                if rules[sink].head.atom() == Some(atom) {
                    let edges = vertices
                        .iter()
                        .flat_map(|u| successors[*u].iter().map(move |v| (*u, *v)))
                        .collect();
                    trees.push(ProofTree { vertices: vertices.clone(), edges });
                }
            }
        });
    }
    trees.sort();
    Ok(trees)
}

fn reaches(successors: &[Vec<usize>], from: usize, target: usize) -> bool {
    let mut stack = alloc::vec![from];
    let mut visited = BTreeSet::new();
    while let Some(v) = stack.pop() {
        if v == target {
            return true;
        }
        if visited.insert(v) {
            stack.extend(successors[v].iter().copied());
        }
    }
    false
}

/// Backtracks over one provider per slot, skipping any edge that would
/// close a cycle.
fn assign_providers<F>(slots: &[(usize, Vec<usize>)], next: usize, successors: &mut Vec<Vec<usize>>, emit: &mut F)
where
    F: FnMut(&[Vec<usize>]),
{
    let Some((consumer, providers)) = slots.get(next) else {
        emit(successors);
        return;
    };
    for &provider in providers {
        if reaches(successors, *consumer, provider) {
            continue;
        }
        successors[provider].push(*consumer);
        assign_providers(slots, next + 1, successors, emit);
        successors[provider].pop();
    }
}

/// Rules that survive in the reduct with respect to `interp`.
pub fn undefeated(interp: &Interpretation) -> impl Fn(&Rule) -> bool + '_ {
    move |rule: &Rule| rule.negative.iter().all(|a| interp.get(a).is_zero())
}

/// The raw sum of tree causes for `atom`, before canonicalization.
pub fn justification_term(
    program: &Program,
    atom: &Atom,
    interp: &Interpretation,
    rule_cap: usize,
) -> Result<CausalTerm, Error> {
    let trees = enumerate_proof_trees(program, atom, undefeated(interp), rule_cap)?;
    let mut terms: Vec<CausalTerm> = trees.iter().map(|t| t.cause_term(program)).collect();
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { CausalTerm::Sum(terms) })
}

/// `Σ cause(T)` over the proof trees of `atom` built from rules not
/// defeated by `interp`.
pub fn justification_sum(
    program: &Program,
    atom: &Atom,
    interp: &Interpretation,
    rule_cap: usize,
) -> Result<CausalValue, Error> {
    let trees = enumerate_proof_trees(program, atom, undefeated(interp), rule_cap)?;
    Ok(trees
        .iter()
        .fold(CausalValue::zero(), |acc, t| acc.add(&t.cause(program))))
}

/// Outcome of comparing one atom of one model against its proof trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomCheck {
    pub atom: Atom,
    pub model_value: CausalValue,
    pub tree_value: CausalValue,
    /// The raw tree sum, which may be redundant.
    pub raw_term: CausalTerm,
}

impl AtomCheck {
    pub fn passed(&self) -> bool {
        self.model_value == self.tree_value
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCheck {
    pub model: Interpretation,
    pub atoms: Vec<AtomCheck>,
}

impl ModelCheck {
    pub fn passed(&self) -> bool {
        self.atoms.iter().all(AtomCheck::passed)
    }
}

/// Compares every atom of every causal stable model with the proof-tree
/// sum.
pub fn check_program(
    program: &Program,
    options: &SolveOptions,
    rule_cap: usize,
) -> Result<Vec<ModelCheck>, Error> {
    check_rule_cap(program, rule_cap)?;
    let models = causal_stable_models(program, options)?;
    let atoms = program.atoms();
    let mut out = Vec::new();
    for model in models {
        let mut checks = Vec::new();
        for atom in &atoms {
            let raw_term = justification_term(program, atom, &model, rule_cap)?;
            checks.push(AtomCheck {
                atom: atom.clone(),
                model_value: model.get(atom).clone(),
                tree_value: evaluate(&raw_term),
                raw_term,
            });
        }
        out.push(ModelCheck { model, atoms: checks });
    }
    Ok(out)
}
