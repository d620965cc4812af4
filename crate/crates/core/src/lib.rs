//! Causal logic programs.
//!
//! Every true atom of a causal stable model carries a causal value: a sum
//! of alternative causes, each a product of chains of rule labels. The
//! [`algebra`] module implements the values and their three operations,
//! [`syntax`] parses and prints terms and programs, [`semantics`] computes
//! least models and causal stable models, and [`oracle`] recomputes the
//! same values from explicit proof trees.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod oracle;
pub mod semantics;
pub mod syntax;

pub use algebra::{canonical_term, evaluate, is_normal, CausalTerm, CausalValue, Cause, Chain, Label};
pub use semantics::{
    causal_stable_models, classical_stable_models, Atom, Head, Interpretation, LeastModel, PositiveProgram,
    Program, Rule, SolveOptions,
};
pub use syntax::{parse_program, parse_term, print_program, print_term, print_value, ParseError, SourceProgram};

/// Failures of the solver and the proof-tree oracle.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("rule {rule} has a negative body; the program is not positive")]
    NotPositive { rule: usize },
    #[error("no fixpoint within {cap} steps; last interpretation:\n{last}")]
    NoConvergence { cap: usize, last: Interpretation },
    #[error("{atoms} candidate atoms exceed the atom cap of {cap}")]
    AtomCapExceeded { atoms: usize, cap: usize },
    #[error("{rules} rules exceed the rule cap of {cap}")]
    RuleCapExceeded { rules: usize, cap: usize },
}
