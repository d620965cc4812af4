//! Causal interpretations, least models of positive programs and causal
//! stable models of normal programs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{evaluate, CausalTerm, CausalValue, Label};
use crate::Error;

/// A propositional atom. Atoms and labels live in separate namespaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Atom(Atom),
    /// The head of a constraint.
    Falsum,
}

impl Head {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Head::Atom(a) => Some(a),
            Head::Falsum => None,
        }
    }
}

/// `label: head :- positive, not negative`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub label: CausalTerm,
    pub head: Head,
    pub positive: BTreeSet<Atom>,
    pub negative: BTreeSet<Atom>,
}

impl Rule {
    pub fn fact(label: CausalTerm, head: &str) -> Self {
        Rule {
            label,
            head: Head::Atom(Atom::new(head)),
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.negative.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Program {
    rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Every atom occurring in a head or body.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.head.atom().cloned());
            out.extend(r.positive.iter().cloned());
            out.extend(r.negative.iter().cloned());
        }
        out
    }

    /// Atoms heading at least one rule; only these can be nonzero.
    pub fn head_atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().filter_map(|r| r.head.atom().cloned()).collect()
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.rules.iter().flat_map(|r| r.label.labels()).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    pub fn into_positive(self) -> Result<PositiveProgram, Error> {
        if let Some(rule) = self.rules.iter().position(|r| !r.is_positive()) {
            return Err(Error::NotPositive { rule });
        }
        Ok(PositiveProgram::new_unchecked(self))
    }

    /// Replaces label `from` by `to` (by `1` when `to` is `None`) in every
    /// rule label.
    pub fn replace_label(&self, from: &Label, to: Option<&Label>) -> Program {
        Program::new(
            self.rules
                .iter()
                .map(|r| Rule { label: r.label.substitute(from, to), ..r.clone() })
                .collect(),
        )
    }

    /// The positive program left after dropping every rule with a negative
    /// body atom in `support` and erasing the remaining negative bodies.
    pub fn reduct(&self, support: &BTreeSet<Atom>) -> PositiveProgram {
        let rules = self
            .rules
            .iter()
            .filter(|r| r.negative.is_disjoint(support))
            .map(|r| Rule { negative: BTreeSet::new(), ..r.clone() })
            .collect();
        PositiveProgram::new_unchecked(Program::new(rules))
    }
}

/// A program without negative bodies, with each rule label evaluated once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveProgram {
    program: Program,
    label_values: Vec<CausalValue>,
}

impl PositiveProgram {
    fn new_unchecked(program: Program) -> Self {
        let label_values = program.rules.iter().map(|r| evaluate(&r.label)).collect();
        PositiveProgram { program, label_values }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    /// `max(|rules| * (1 + total label size), 64)`.
    pub fn default_iteration_cap(&self) -> usize {
        let label_size: usize = self.program.rules.iter().map(|r| r.label.size()).sum();
        (self.program.len() * (1 + label_size)).max(64)
    }

    /// `(I(b1) * ... * I(bm)) . label` for one rule.
    fn fire(&self, index: usize, interp: &Interpretation) -> CausalValue {
        let rule = &self.program.rules[index];
        let mut body = CausalValue::one();
        for atom in &rule.positive {
            body = body.mul(interp.get(atom));
            if body.is_zero() {
                return body;
            }
        }
        body.app(&self.label_values[index])
    }

    /// One application of the direct consequences operator.
    pub fn tp_step(&self, interp: &Interpretation) -> Interpretation {
        let mut out: BTreeMap<Atom, CausalValue> = BTreeMap::new();
        for (i, rule) in self.program.rules.iter().enumerate() {
            let Head::Atom(head) = &rule.head else { continue };
            let v = self.fire(i, interp);
            if v.is_zero() {
                continue;
            }
            match out.get_mut(head) {
                Some(acc) => *acc = acc.add(&v),
                None => {
                    out.insert(head.clone(), v);
                }
            }
        }
        Interpretation(out)
    }

    /// Sum of the bodies of all constraints under `interp`.
    pub fn falsum_value(&self, interp: &Interpretation) -> CausalValue {
        self.program
            .rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.head == Head::Falsum)
            .fold(CausalValue::zero(), |acc, (i, _)| acc.add(&self.fire(i, interp)))
    }

    /// Every rule inequality `body . label <= I(head)` holds; constraints
    /// require the left side to be `0`.
    pub fn is_model(&self, interp: &Interpretation) -> bool {
        self.program.rules.iter().enumerate().all(|(i, rule)| {
            let v = self.fire(i, interp);
            match &rule.head {
                Head::Atom(a) => v.leq(interp.get(a)),
                Head::Falsum => v.is_zero(),
            }
        })
    }

    pub fn least_model(&self) -> Result<LeastModel, Error> {
        self.least_model_with_cap(self.default_iteration_cap())
    }

    /// Iterates the direct consequences operator from the bottom
    /// interpretation until two consecutive interpretations coincide.
    /// `steps` counts operator applications, including the one that
    /// confirmed the fixpoint.
    pub fn least_model_with_cap(&self, cap: usize) -> Result<LeastModel, Error> {
        let mut current = Interpretation::new();
        let mut steps = 0;
        loop {
            if steps >= cap {
                return Err(Error::NoConvergence { cap, last: current });
            }
            let next = self.tp_step(&current);
            steps += 1;
            if next == current {
                let falsum = self.falsum_value(&current);
                return Ok(LeastModel { interpretation: current, falsum, steps });
            }
            current = next;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeastModel {
    pub interpretation: Interpretation,
    /// The value the constraints give to `⊥`.
    pub falsum: CausalValue,
    pub steps: usize,
}

/// A mapping from atoms to causal values. Atoms not stored are `0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Interpretation(BTreeMap<Atom, CausalValue>);

static ZERO: CausalValue = CausalValue::zero();

impl Interpretation {
    pub fn new() -> Self {
        Interpretation(BTreeMap::new())
    }

    pub fn get(&self, atom: &Atom) -> &CausalValue {
        self.0.get(atom).unwrap_or(&ZERO)
    }

    pub fn set(&mut self, atom: Atom, value: CausalValue) {
        if value.is_zero() {
            self.0.remove(&atom);
        } else {
            self.0.insert(atom, value);
        }
    }

    /// Nonzero assignments in atom order.
    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &CausalValue)> + '_ {
        self.0.iter()
    }

    /// Atoms with a nonzero value.
    pub fn support(&self) -> BTreeSet<Atom> {
        self.0.keys().cloned().collect()
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Interpretation) -> bool {
        self.0.iter().all(|(a, v)| v.leq(other.get(a)))
    }

    pub fn substitute(&self, from: &Label, to: Option<&Label>) -> Interpretation {
        let mut out = Interpretation::new();
        for (a, v) in &self.0 {
            out.set(a.clone(), v.substitute(from, to));
        }
        out
    }
}

impl FromIterator<(Atom, CausalValue)> for Interpretation {
    fn from_iter<I: IntoIterator<Item = (Atom, CausalValue)>>(iter: I) -> Self {
        let mut out = Interpretation::new();
        for (a, v) in iter {
            out.set(a, v);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Stop after this many models.
    pub max_models: Option<usize>,
    /// Refuse programs whose candidate atom set exceeds this size.
    pub atom_cap: usize,
    /// Override of [`PositiveProgram::default_iteration_cap`].
    pub iteration_cap: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_models: None, atom_cap: 20, iteration_cap: None }
    }
}

fn subset(atoms: &[Atom], mask: u64) -> BTreeSet<Atom> {
    atoms
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, a)| a.clone())
        .collect()
}

/// Enumerates causal stable models: for every candidate support `S` over
/// the head atoms, the least model of the reduct with respect to `S` is
/// accepted iff its support is exactly `S` and no constraint fires.
/// Models are returned in candidate order (binary counting over the sorted
/// head atoms).
pub fn causal_stable_models(program: &Program, options: &SolveOptions) -> Result<Vec<Interpretation>, Error> {
    let atoms: Vec<Atom> = program.head_atoms().into_iter().collect();
    if atoms.len() > options.atom_cap || atoms.len() >= 64 {
        return Err(Error::AtomCapExceeded { atoms: atoms.len(), cap: options.atom_cap });
    }
    let mut models = Vec::new();
    for mask in 0..(1u64 << atoms.len()) {
        if options.max_models.is_some_and(|m| models.len() >= m) {
            break;
        }
        let support = subset(&atoms, mask);
        let reduct = program.reduct(&support);
        let cap = options.iteration_cap.unwrap_or_else(|| reduct.default_iteration_cap());
        let model = reduct.least_model_with_cap(cap)?;
        if model.falsum.is_zero() && model.interpretation.support() == support {
            models.push(model.interpretation);
        }
    }
    Ok(models)
}

/// Brute-force classical stable models of the program with its labels
/// ignored. Uses Boolean evaluation only.
pub fn classical_stable_models(program: &Program, atom_cap: usize) -> Result<Vec<BTreeSet<Atom>>, Error> {
    let atoms: Vec<Atom> = program.atoms().into_iter().collect();
    if atoms.len() > atom_cap || atoms.len() >= 64 {
        return Err(Error::AtomCapExceeded { atoms: atoms.len(), cap: atom_cap });
    }
    let mut out = Vec::new();
    for mask in 0..(1u64 << atoms.len()) {
        let candidate = subset(&atoms, mask);
        let rules: Vec<&Rule> = program
            .rules()
            .iter()
            .filter(|r| r.negative.is_disjoint(&candidate))
            .collect();
        let mut derived: BTreeSet<Atom> = BTreeSet::new();
        loop {
            let before = derived.len();
            for r in &rules {
                if let Head::Atom(h) = &r.head {
                    if r.positive.is_subset(&derived) {
                        derived.insert(h.clone());
                    }
                }
            }
            if derived.len() == before {
                break;
            }
        }
        let violated = rules
            .iter()
            .any(|r| r.head == Head::Falsum && r.positive.is_subset(&derived));
        if !violated && derived == candidate {
            out.push(candidate);
        }
    }
    Ok(out)
}
