//! Finite representation of causal values.
//!
//! A causal value is an order filter of causes, and a cause is an order
//! filter of chains. Both filters are infinite in general, so every type
//! here stores only the minimal generators:
//!
//! * a [`Chain`] is a sequence of labels, ordered by subsequence embedding
//!   (`x <= y` iff `y` can be obtained from `x` by deleting labels);
//! * a [`Cause`] is an antichain of chains, none a subsequence of another;
//! * a [`CausalValue`] is an antichain of causes under filter inclusion.
//!
//! `0` is the empty value and `1` is the value holding the single empty
//! cause. Addition, product and application are computed directly on the
//! generators and always return canonical antichains.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// An opaque rule label. Two labels are equal iff their names are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite sequence of labels. The empty chain is the identity for
/// concatenation and stands for `1`.
///
/// The `Ord` impl is the canonical printing order (length first, then
/// lexicographic by label name). Subsumption is [`Chain::leq`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Chain(Vec<Label>);

impl Chain {
    pub fn new(labels: Vec<Label>) -> Self {
        Chain(labels)
    }

    pub fn empty() -> Self {
        Chain(Vec::new())
    }

    pub fn single(label: Label) -> Self {
        Chain(alloc::vec![label])
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Chain subsumption `self <= other`: `other` is a (not necessarily
    /// contiguous) subsequence of `self`. The empty chain is above every
    /// chain.
    pub fn leq(&self, other: &Chain) -> bool {
        if other.len() > self.len() {
            return false;
        }
        let mut mine = self.0.iter();
        other.0.iter().all(|l| mine.any(|m| m == l))
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Chain) -> Chain {
        let mut labels = Vec::with_capacity(self.len() + other.len());
        labels.extend_from_slice(&self.0);
        labels.extend_from_slice(&other.0);
        Chain(labels)
    }

    /// Replaces every occurrence of `from` by `to`, or deletes it when `to`
    /// is `None` (replacement by `1`).
    pub fn substitute(&self, from: &Label, to: Option<&Label>) -> Chain {
        Chain(
            self.0
                .iter()
                .filter_map(|l| if l == from { to.cloned() } else { Some(l.clone()) })
                .collect(),
        )
    }
}

impl Ord for Chain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(l.name())?;
        }
        Ok(())
    }
}

/// A joint justification: the set of `<=`-minimal chains generating an
/// order filter of chains. The empty cause generates nothing and is `1`
/// as a product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cause(BTreeSet<Chain>);

impl Cause {
    /// The empty product of chains.
    pub fn unit() -> Self {
        Cause(BTreeSet::new())
    }

    pub fn single(chain: Chain) -> Self {
        Cause::normalize(core::iter::once(chain))
    }

    /// Builds the cause generated by `chains`, keeping only chains that are
    /// not a proper subsequence of another member. Empty chains are the
    /// identity of the product and are dropped.
    pub fn normalize<I: IntoIterator<Item = Chain>>(chains: I) -> Self {
        let mut kept: Vec<Chain> = Vec::new();
        // Longest first: a chain can only be absorbed by one at least as long.
        let mut all: Vec<Chain> = chains.into_iter().filter(|c| !c.is_empty()).collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        all.dedup();
        for chain in all {
            if !kept.iter().any(|k| k.leq(&chain)) {
                kept.push(chain);
            }
        }
        Cause(kept.into_iter().collect())
    }

    pub fn chains(&self) -> impl ExactSizeIterator<Item = &Chain> + '_ {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The empty cause is the unit `1`.
    pub fn is_unit(&self) -> bool {
        self.is_empty()
    }

    /// Filter inclusion: every chain of `self` is a subsequence of some
    /// chain of `other`.
    pub fn leq(&self, other: &Cause) -> bool {
        self.0.iter().all(|x| other.0.iter().any(|y| y.leq(x)))
    }

    /// The union of both filters (the product of two causes).
    pub fn join(&self, other: &Cause) -> Cause {
        Cause::normalize(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// Application `self . other`, distributed pairwise over the chains.
    /// The unit cause is a two-sided identity.
    pub fn apply(&self, other: &Cause) -> Cause {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        Cause::normalize(
            self.0
                .iter()
                .flat_map(|x| other.0.iter().map(move |y| x.concat(y))),
        )
    }

    pub fn substitute(&self, from: &Label, to: Option<&Label>) -> Cause {
        Cause::normalize(self.0.iter().map(|c| c.substitute(from, to)))
    }
}

impl fmt::Debug for Cause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// A set of alternative justifications, stored as its `⊆`-minimal causes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CausalValue(BTreeSet<Cause>);

/// Accumulates causes while keeping them an antichain.
#[derive(Default)]
struct MinimalCauses(Vec<Cause>);

impl MinimalCauses {
    fn insert(&mut self, cause: Cause) {
        if self.0.iter().any(|d| d.leq(&cause)) {
            return;
        }
        self.0.retain(|e| !cause.leq(e));
        self.0.push(cause);
    }

    fn finish(self) -> CausalValue {
        CausalValue(self.0.into_iter().collect())
    }
}

impl CausalValue {
    pub const fn zero() -> Self {
        CausalValue(BTreeSet::new())
    }

    pub fn one() -> Self {
        CausalValue(core::iter::once(Cause::unit()).collect())
    }

    /// The value `|||label|||`.
    pub fn label(label: Label) -> Self {
        CausalValue::from_chain(Chain::single(label))
    }

    pub fn from_chain(chain: Chain) -> Self {
        CausalValue::from_causes(core::iter::once(Cause::single(chain)))
    }

    /// Builds the value generated by `causes`, dropping every cause whose
    /// filter contains another member's filter.
    pub fn from_causes<I: IntoIterator<Item = Cause>>(causes: I) -> Self {
        let mut acc = MinimalCauses::default();
        for c in causes {
            acc.insert(c);
        }
        acc.finish()
    }

    pub fn causes(&self) -> impl ExactSizeIterator<Item = &Cause> + '_ {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.iter().all(Cause::is_unit)
    }

    /// Filter union (`+`).
    pub fn add(&self, other: &CausalValue) -> CausalValue {
        CausalValue::from_causes(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// Filter intersection (`*`).
    pub fn mul(&self, other: &CausalValue) -> CausalValue {
        let mut acc = MinimalCauses::default();
        for c in &self.0 {
            for d in &other.0 {
                acc.insert(c.join(d));
            }
        }
        acc.finish()
    }

    /// Application (`.`), distributed over sums and then over products.
    pub fn app(&self, other: &CausalValue) -> CausalValue {
        let mut acc = MinimalCauses::default();
        for c in &self.0 {
            for d in &other.0 {
                acc.insert(c.apply(d));
            }
        }
        acc.finish()
    }

    /// `self <= other`, i.e. the filter of `self` is contained in the filter
    /// of `other`.
    pub fn leq(&self, other: &CausalValue) -> bool {
        self.0.iter().all(|c| other.0.iter().any(|d| d.leq(c)))
    }

    /// Replaces label `from` by `to` (or by `1` when `to` is `None`) in
    /// every chain and re-canonicalizes.
    pub fn substitute(&self, from: &Label, to: Option<&Label>) -> CausalValue {
        CausalValue::from_causes(self.0.iter().map(|c| c.substitute(from, to)))
    }

    /// Every label occurring in the value.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.0
            .iter()
            .flat_map(|c| c.chains())
            .flat_map(|x| x.labels().iter().cloned())
            .collect()
    }
}

impl fmt::Debug for CausalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Source-level causal term. `Sum(vec![])` is `0` and `Product(vec![])` is
/// `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CausalTerm {
    Label(Label),
    Sum(Vec<CausalTerm>),
    Product(Vec<CausalTerm>),
    App(Box<CausalTerm>, Box<CausalTerm>),
}

impl CausalTerm {
    pub fn zero() -> Self {
        CausalTerm::Sum(Vec::new())
    }

    pub fn one() -> Self {
        CausalTerm::Product(Vec::new())
    }

    pub fn label(name: &str) -> Self {
        CausalTerm::Label(Label::new(name))
    }

    pub fn app(left: CausalTerm, right: CausalTerm) -> Self {
        CausalTerm::App(Box::new(left), Box::new(right))
    }

    /// Left-nested application of `labels`, or `1` when empty.
    pub fn chain(chain: &Chain) -> Self {
        let mut labels = chain.labels().iter().cloned().map(CausalTerm::Label);
        match labels.next() {
            None => CausalTerm::one(),
            Some(first) => labels.fold(first, CausalTerm::app),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CausalTerm::Sum(ts) if ts.is_empty())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CausalTerm::Product(ts) if ts.is_empty())
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            CausalTerm::Label(_) => 1,
            CausalTerm::Sum(ts) | CausalTerm::Product(ts) => {
                1 + ts.iter().map(CausalTerm::size).sum::<usize>()
            }
            CausalTerm::App(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut BTreeSet<Label>) {
        match self {
            CausalTerm::Label(l) => {
                out.insert(l.clone());
            }
            CausalTerm::Sum(ts) | CausalTerm::Product(ts) => {
                ts.iter().for_each(|t| t.collect_labels(out))
            }
            CausalTerm::App(l, r) => {
                l.collect_labels(out);
                r.collect_labels(out);
            }
        }
    }

    /// Syntactic replacement of label `from` by `to`, or by `1` when `to`
    /// is `None`.
    pub fn substitute(&self, from: &Label, to: Option<&Label>) -> CausalTerm {
        match self {
            CausalTerm::Label(l) if l == from => match to {
                Some(m) => CausalTerm::Label(m.clone()),
                None => CausalTerm::one(),
            },
            CausalTerm::Label(_) => self.clone(),
            CausalTerm::Sum(ts) => {
                CausalTerm::Sum(ts.iter().map(|t| t.substitute(from, to)).collect())
            }
            CausalTerm::Product(ts) => {
                CausalTerm::Product(ts.iter().map(|t| t.substitute(from, to)).collect())
            }
            CausalTerm::App(l, r) => CausalTerm::app(l.substitute(from, to), r.substitute(from, to)),
        }
    }

    fn is_chain(&self) -> bool {
        match self {
            CausalTerm::Label(_) => true,
            CausalTerm::App(l, r) => l.is_chain() && r.is_chain(),
            _ => false,
        }
    }
}

/// The valuation of a term: its canonical causal value.
pub fn evaluate(term: &CausalTerm) -> CausalValue {
    match term {
        CausalTerm::Label(l) => CausalValue::label(l.clone()),
        CausalTerm::Sum(ts) => ts
            .iter()
            .fold(CausalValue::zero(), |acc, t| acc.add(&evaluate(t))),
        CausalTerm::Product(ts) => {
            let mut acc = CausalValue::one();
            for t in ts {
                if acc.is_zero() {
                    break;
                }
                acc = acc.mul(&evaluate(t));
            }
            acc
        }
        CausalTerm::App(l, r) => evaluate(l).app(&evaluate(r)),
    }
}

/// True iff application only ever joins chains of labels.
pub fn is_normal(term: &CausalTerm) -> bool {
    match term {
        CausalTerm::Label(_) => true,
        CausalTerm::Sum(ts) | CausalTerm::Product(ts) => ts.iter().all(is_normal),
        CausalTerm::App(_, _) => term.is_chain(),
    }
}

/// The canonical sum-of-products-of-chains term of a value. Causes and
/// chains appear in their canonical order; singleton sums and products are
/// collapsed.
pub fn canonical_term(value: &CausalValue) -> CausalTerm {
    let mut products: Vec<CausalTerm> = value
        .causes()
        .map(|cause| {
            let mut chains: Vec<CausalTerm> = cause.chains().map(CausalTerm::chain).collect();
            if chains.len() == 1 {
                chains.pop().unwrap()
            } else {
                CausalTerm::Product(chains)
            }
        })
        .collect();
    if products.len() == 1 {
        products.pop().unwrap()
    } else {
        CausalTerm::Sum(products)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ch(s: &str) -> Chain {
        if s.is_empty() {
            return Chain::empty();
        }
        Chain::new(s.split('.').map(Label::new).collect())
    }

    fn cause(chains: &[&str]) -> Cause {
        Cause::normalize(chains.iter().map(|c| ch(c)))
    }

    fn value(causes: &[&[&str]]) -> CausalValue {
        CausalValue::from_causes(causes.iter().map(|c| cause(c)))
    }

    fn l(name: &str) -> CausalTerm {
        CausalTerm::label(name)
    }

    #[test]
    fn chain_subsumption() {
        assert!(ch("a.b.c.d.e").leq(&ch("a.c")));
        assert!(ch("a").leq(&ch("a")));
        assert!(!ch("a.c").leq(&ch("a.b.c.d.e")));
        assert!(!ch("a.b").leq(&ch("b.a")));
        assert!(ch("a.b").leq(&ch("")));
        assert!(!ch("").leq(&ch("a")));
    }

    #[test]
    fn chain_concatenation() {
        assert_eq!(ch("w").concat(&ch("b")), ch("w.b"));
        assert_eq!(ch("a.b").concat(&Chain::empty()), ch("a.b"));
        assert_eq!(ch("a.b").concat(&ch("c.d")), ch("a.b.c.d"));
    }

    #[test]
    fn cause_normalization() {
        assert_eq!(cause(&["a", "a.b"]), cause(&["a.b"]));
        assert_eq!(cause(&["a"]).len(), 1);
        assert_eq!(cause(&["a", "b", "a.b"]), cause(&["a.b"]));
        assert_eq!(cause(&["a.b", "b.a"]).len(), 2);
        assert!(cause(&[""]).is_unit());
    }

    #[test]
    fn cause_inclusion() {
        assert!(cause(&["a"]).leq(&cause(&["a.b"])));
        assert!(cause(&["a.b", "c"]).leq(&cause(&["a.b", "c"])));
        assert!(!cause(&["a.b"]).leq(&cause(&["a"])));
        assert!(Cause::unit().leq(&cause(&["a"])));
    }

    #[test]
    fn value_addition() {
        let v = value(&[&["a"], &["a.b"], &["a.b.b"]]);
        assert_eq!(v, value(&[&["a"]]));
        let w = value(&[&["p", "s"], &["w"]]);
        assert_eq!(w.add(&CausalValue::zero()), w);
        let abc = value(&[&["a.b", "c"]]);
        assert_eq!(abc.add(&value(&[&["a"]])), value(&[&["a"]]));
        assert_eq!(w.add(&CausalValue::one()), CausalValue::one());
    }

    #[test]
    fn value_product() {
        let a = value(&[&["a"]]);
        let ab = value(&[&["a.b"]]);
        assert_eq!(a.mul(&ab), ab);
        let p12 = value(&[&["p1"], &["p2"]]);
        let s = value(&[&["s"]]);
        assert_eq!(p12.mul(&s), value(&[&["p1", "s"], &["p2", "s"]]));
        assert_eq!(p12.mul(&CausalValue::one()), p12);
        assert!(p12.mul(&CausalValue::zero()).is_zero());
    }

    #[test]
    fn value_application() {
        let psw = value(&[&["p", "s"], &["w"]]);
        let k = value(&[&["k"]]);
        assert_eq!(psw.app(&k), value(&[&["p.k", "s.k"], &["w.k"]]));
        assert_eq!(psw.app(&CausalValue::one()), psw);
        assert_eq!(CausalValue::one().app(&psw), psw);
        assert!(psw.app(&CausalValue::zero()).is_zero());
        assert!(CausalValue::zero().app(&psw).is_zero());
        let a_plus_b = value(&[&["a"], &["b"]]);
        let c_times_d = value(&[&["c", "d"]]);
        assert_eq!(
            a_plus_b.app(&c_times_d),
            value(&[&["a.c", "a.d"], &["b.c", "b.d"]])
        );
    }

    #[test]
    fn value_order() {
        let w = value(&[&["w"]]);
        let psw = value(&[&["p", "s"], &["w"]]);
        assert!(w.leq(&psw));
        assert!(value(&[&["p", "s"]]).leq(&value(&[&["p"]])));
        assert!(!psw.leq(&w));
        assert!(CausalValue::zero().leq(&psw));
        assert!(psw.leq(&CausalValue::one()));
        assert!(value(&[&["w.b"]]).leq(&w));
    }

    #[test]
    fn evaluation_of_terms() {
        let t = CausalTerm::Sum(vec![
            CausalTerm::Product(vec![
                CausalTerm::app(l("p"), l("a")),
                CausalTerm::app(l("s"), l("a")),
            ]),
            CausalTerm::app(l("w"), l("b")),
        ]);
        assert_eq!(evaluate(&t), value(&[&["p.a", "s.a"], &["w.b"]]));
        assert!(evaluate(&CausalTerm::zero()).is_zero());
        assert!(evaluate(&CausalTerm::one()).is_one());
        let absorbed = CausalTerm::Sum(vec![
            CausalTerm::Product(vec![CausalTerm::app(l("a"), l("b")), l("c")]),
            l("a"),
        ]);
        assert_eq!(evaluate(&absorbed), value(&[&["a"]]));
    }

    #[test]
    fn normal_terms() {
        assert!(is_normal(&CausalTerm::app(l("a"), l("b"))));
        let sum_app = CausalTerm::app(CausalTerm::Sum(vec![l("a"), l("b")]), l("c"));
        assert!(!is_normal(&sum_app));
        let t = CausalTerm::Sum(vec![
            CausalTerm::Product(vec![CausalTerm::app(l("a"), l("b")), l("c")]),
            l("a"),
        ]);
        assert!(is_normal(&t));
        assert!(!is_normal(&CausalTerm::app(CausalTerm::one(), l("a"))));
    }

    #[test]
    fn canonical_terms() {
        let v = value(&[&["p.a", "s.a"], &["w.b"]]);
        let t = canonical_term(&v);
        assert_eq!(
            t,
            CausalTerm::Sum(vec![
                CausalTerm::Product(vec![
                    CausalTerm::app(l("p"), l("a")),
                    CausalTerm::app(l("s"), l("a")),
                ]),
                CausalTerm::app(l("w"), l("b")),
            ])
        );
        assert_eq!(evaluate(&t), v);
        assert!(canonical_term(&CausalValue::zero()).is_zero());
        assert!(canonical_term(&CausalValue::one()).is_one());
        assert!(canonical_term(&value(&[&[""]])).is_one());
    }

    #[test]
    fn substitution_deletes_or_renames() {
        let v = value(&[&["p.a", "s.a"], &["w.b"]]);
        let a = Label::new("a");
        assert_eq!(v.substitute(&a, None), value(&[&["p", "s"], &["w.b"]]));
        let w = Label::new("w");
        let vv = Label::new("v");
        assert_eq!(
            v.substitute(&w, Some(&vv)),
            value(&[&["p.a", "s.a"], &["v.b"]])
        );
        assert!(value(&[&["a"]]).substitute(&a, None).is_one());
    }
}
