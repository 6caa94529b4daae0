//! LTL formulas: hash-consed syntax trees, parsing and printing, negation
//! normal form, decomposition into output-disjoint conjuncts, and detection
//! of the `G(b1) & (phi <-> G F b2)` shape.

mod bypass;
mod decompose;
pub mod eval;
mod nnf;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock, Weak};

pub use bypass::{detect_bypass, BypassPattern, Polarity};
pub use decompose::{decompose, SubSpecification};
pub use nnf::{is_nnf, to_nnf};
pub use parse::{parse_ltl, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    True,
    False,
    Ap,
    Not,
    And,
    Or,
    Xor,
    Iff,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Globally,
    WeakUntil,
}

impl Kind {
    pub fn arity(self) -> usize {
        match self {
            Kind::True | Kind::False | Kind::Ap => 0,
            Kind::Not | Kind::Next | Kind::Eventually | Kind::Globally => 1,
            _ => 2,
        }
    }

    pub fn is_temporal(self) -> bool {
        matches!(
            self,
            Kind::Next | Kind::Until | Kind::Release | Kind::Eventually | Kind::Globally | Kind::WeakUntil
        )
    }
}

struct Node {
    kind: Kind,
    children: Vec<Formula>,
    name: Option<Arc<str>>,
    id: u64,
    depth: u32,
}

/// An immutable, hash-consed LTL formula. Structurally equal formulas share
/// one allocation, so equality and hashing are pointer-based.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
struct Key {
    kind: Kind,
    children: Vec<u64>,
    name: Option<Arc<str>>,
}

#[derive(Default)]
struct Interner {
    table: HashMap<Key, Weak<Node>>,
    sweep_at: usize,
}

fn interner() -> &'static Mutex<Interner> {
    static TABLE: OnceLock<Mutex<Interner>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Interner { table: HashMap::new(), sweep_at: 1024 }))
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl Formula {
    fn make(kind: Kind, children: Vec<Formula>, name: Option<Arc<str>>) -> Formula {
        debug_assert_eq!(children.len(), kind.arity());
        let key = Key {
            kind,
            children: children.iter().map(|c| c.0.id).collect(),
            name: name.clone(),
        };
        let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(node) = guard.table.get(&key).and_then(Weak::upgrade) {
            return Formula(node);
        }
        if guard.table.len() >= guard.sweep_at {
            guard.table.retain(|_, w| w.strong_count() > 0);
            guard.sweep_at = (guard.table.len() * 2).max(1024);
        }
        let depth = children.iter().map(|c| c.0.depth + 1).max().unwrap_or(0);
        let node = Arc::new(Node {
            kind,
            children,
            name,
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            depth,
        });
        guard.table.insert(key, Arc::downgrade(&node));
        Formula(node)
    }

    pub fn ap(name: &str) -> Formula {
        assert!(!name.is_empty(), "atomic proposition names must be nonempty");
        Formula::make(Kind::Ap, Vec::new(), Some(Arc::from(name)))
    }

    pub fn tt() -> Formula {
        Formula::make(Kind::True, Vec::new(), None)
    }

    pub fn ff() -> Formula {
        Formula::make(Kind::False, Vec::new(), None)
    }

    pub fn constant(value: bool) -> Formula {
        if value {
            Formula::tt()
        } else {
            Formula::ff()
        }
    }

    pub fn unary(kind: Kind, child: Formula) -> Formula {
        assert_eq!(kind.arity(), 1);
        Formula::make(kind, vec![child], None)
    }

    pub fn binary(kind: Kind, lhs: Formula, rhs: Formula) -> Formula {
        assert_eq!(kind.arity(), 2);
        Formula::make(kind, vec![lhs, rhs], None)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::unary(Kind::Not, f)
    }
    pub fn next(f: Formula) -> Formula {
        Formula::unary(Kind::Next, f)
    }
    pub fn eventually(f: Formula) -> Formula {
        Formula::unary(Kind::Eventually, f)
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::unary(Kind::Globally, f)
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::And, a, b)
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Or, a, b)
    }
    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Xor, a, b)
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Iff, a, b)
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Implies, a, b)
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Until, a, b)
    }
    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::Release, a, b)
    }
    pub fn weak_until(a: Formula, b: Formula) -> Formula {
        Formula::binary(Kind::WeakUntil, a, b)
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or_else(Formula::tt)
    }

    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or_else(Formula::ff)
    }

    pub fn kind(&self) -> Kind {
        self.0.kind
    }

    pub fn children(&self) -> &[Formula] {
        &self.0.children
    }

    pub fn child(&self) -> &Formula {
        &self.0.children[0]
    }

    pub fn lhs(&self) -> &Formula {
        &self.0.children[0]
    }

    pub fn rhs(&self) -> &Formula {
        &self.0.children[1]
    }

    /// Name of an atomic proposition.
    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn is_ap(&self) -> bool {
        self.0.kind == Kind::Ap
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.0.kind, Kind::True | Kind::False)
    }

    /// No temporal operator occurs in the formula.
    pub fn is_boolean(&self) -> bool {
        !self.0.kind.is_temporal() && self.children().iter().all(Formula::is_boolean)
    }

    /// Atomic propositions in order of first occurrence (left to right).
    pub fn atoms(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_atoms(&mut seen, &mut out);
        out
    }

    fn collect_atoms(&self, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
        if let Some(n) = self.name() {
            if seen.insert(n.to_string()) {
                out.push(n.to_string());
            }
        }
        for c in self.children() {
            c.collect_atoms(seen, out);
        }
    }

    /// Top-level conjuncts: `(a & b) & c` yields `[a, b, c]`.
    pub fn conjuncts(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self.clone()];
        while let Some(f) = stack.pop() {
            if f.kind() == Kind::And {
                stack.push(f.rhs().clone());
                stack.push(f.lhs().clone());
            } else {
                out.push(f);
            }
        }
        out
    }

    /// Calls `visit` on every distinct subformula, children before parents.
    pub fn for_each_subformula(&self, visit: &mut impl FnMut(&Formula)) {
        let mut seen = std::collections::HashSet::new();
        self.post_order(&mut seen, visit);
    }

    fn post_order(&self, seen: &mut std::collections::HashSet<Formula>, visit: &mut impl FnMut(&Formula)) {
        if !seen.insert(self.clone()) {
            return;
        }
        for c in self.children() {
            c.post_order(seen, visit);
        }
        visit(self);
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl Ord for Formula {
    /// Structural order, independent of allocation history.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.0
            .kind
            .cmp(&other.0.kind)
            .then_with(|| self.0.name.cmp(&other.0.name))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Whether `name` can be printed bare and lexes back as a single atom.
fn is_plain_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    if !(first.is_ascii_alphabetic() || first == '_') {
        return false;
    }
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    !parse::is_reserved(name)
}

impl fmt::Display for Formula {
    /// Fully parenthesized canonical syntax accepted by [`parse_ltl`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::True => write!(f, "true"),
            Kind::False => write!(f, "false"),
            Kind::Ap => {
                let name = self.name().unwrap_or_default();
                if is_plain_identifier(name) {
                    write!(f, "{name}")
                } else {
                    write!(f, "\"{name}\"")
                }
            }
            Kind::Not | Kind::Next | Kind::Eventually | Kind::Globally => {
                let op = match self.kind() {
                    Kind::Not => "!",
                    Kind::Next => "X",
                    Kind::Eventually => "F",
                    _ => "G",
                };
                let c = self.child();
                if c.kind().arity() == 2 {
                    write!(f, "{op}{c}")
                } else {
                    write!(f, "{op}({c})")
                }
            }
            kind => {
                let op = match kind {
                    Kind::And => "&",
                    Kind::Or => "|",
                    Kind::Xor => "xor",
                    Kind::Iff => "<->",
                    Kind::Implies => "->",
                    Kind::Until => "U",
                    Kind::Release => "R",
                    _ => "W",
                };
                write!(f, "({} {op} {})", self.lhs(), self.rhs())
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Canonical printed form; alias of the `Display` implementation.
pub fn print_ltl(f: &Formula) -> String {
    f.to_string()
}

/// The input signals `I` and output signals `O` of a specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalPartition {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("signal `{0}` is declared both as input and output")]
    Overlap(String),
    #[error("signal `{0}` is declared twice")]
    Duplicate(String),
    #[error("proposition `{0}` is neither an input nor an output")]
    Undeclared(String),
}

impl SignalPartition {
    pub fn new<S: AsRef<str>>(inputs: &[S], outputs: &[S]) -> Result<SignalPartition, PartitionError> {
        let inputs: Vec<String> = inputs.iter().map(|s| s.as_ref().to_string()).collect();
        let outputs: Vec<String> = outputs.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for s in &inputs {
            if !seen.insert(s.clone()) {
                return Err(PartitionError::Duplicate(s.clone()));
            }
        }
        for s in &outputs {
            if inputs.contains(s) {
                return Err(PartitionError::Overlap(s.clone()));
            }
            if !seen.insert(s.clone()) {
                return Err(PartitionError::Duplicate(s.clone()));
            }
        }
        Ok(SignalPartition { inputs, outputs })
    }

    /// Inputs followed by outputs: the proposition order used by the pipeline.
    pub fn alphabet(&self) -> Vec<String> {
        self.inputs.iter().chain(self.outputs.iter()).cloned().collect()
    }

    pub fn is_input(&self, name: &str) -> bool {
        self.inputs.iter().any(|s| s == name)
    }

    pub fn is_output(&self, name: &str) -> bool {
        self.outputs.iter().any(|s| s == name)
    }

    /// Every atom of `f` is a declared signal.
    pub fn check_covers(&self, f: &Formula) -> Result<(), PartitionError> {
        for a in f.atoms() {
            if !self.is_input(&a) && !self.is_output(&a) {
                return Err(PartitionError::Undeclared(a));
            }
        }
        Ok(())
    }

    /// Bit mask of the inputs within `aps`.
    pub fn input_mask(&self, aps: &[String]) -> u64 {
        mask_of(aps, |n| self.is_input(n))
    }

    pub fn output_mask(&self, aps: &[String]) -> u64 {
        mask_of(aps, |n| self.is_output(n))
    }
}

fn mask_of(aps: &[String], pred: impl Fn(&str) -> bool) -> u64 {
    aps.iter()
        .enumerate()
        .filter(|(_, n)| pred(n))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing_shares_structure() {
        let a = Formula::and(Formula::ap("p"), Formula::globally(Formula::ap("q")));
        let b = Formula::and(Formula::ap("p"), Formula::globally(Formula::ap("q")));
        assert_eq!(a, b);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_ne!(a, Formula::and(Formula::ap("q"), Formula::globally(Formula::ap("p"))));
    }

    #[test]
    fn structural_order_is_total_and_consistent() {
        let x = Formula::ap("x");
        let y = Formula::ap("y");
        assert!(x < y);
        assert_eq!(x.cmp(&Formula::ap("x")), Ordering::Equal);
        assert!(Formula::and(x.clone(), y.clone()) != Formula::and(y, x));
    }

    #[test]
    fn atoms_in_first_occurrence_order() {
        let f = parse_ltl("G(req -> F grant) & X req").unwrap();
        assert_eq!(f.atoms(), vec!["req", "grant"]);
    }

    #[test]
    fn partition_rejects_overlap() {
        assert_eq!(
            SignalPartition::new(&["a"], &["a"]),
            Err(PartitionError::Overlap("a".into()))
        );
        let p = SignalPartition::new(&["i"], &["o"]).unwrap();
        assert!(p.check_covers(&parse_ltl("G(i -> o)").unwrap()).is_ok());
        assert!(p.check_covers(&parse_ltl("G(z)").unwrap()).is_err());
    }

    #[test]
    fn formulas_are_shareable_across_threads() {
        let handles: Vec<_> = (0..4)
            .map(|k| {
                std::thread::spawn(move || {
                    let f = parse_ltl(&format!("G(a{k} -> F b)")).unwrap();
                    f.to_string()
                })
            })
            .collect();
        for (k, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), format!("G(a{k} -> F(b))"));
        }
    }
}
