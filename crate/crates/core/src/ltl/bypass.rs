use super::{Formula, Kind, SignalPartition};

/// Orientation of the equivalence in a bypass-shaped specification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// `phi <-> G F b2`
    Recurrence,
    /// `phi <-> F G b2`, handled as `!phi <-> G F !b2`.
    Persistence,
}

/// A specification of the form `G(b1) & (phi <-> G F b2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BypassPattern {
    pub b1: Formula,
    pub phi: Formula,
    pub b2: Formula,
    pub polarity: Polarity,
}

impl BypassPattern {
    /// Re-checks the side conditions: `b1` and `b2` are Boolean, `phi` uses
    /// only inputs, `b2` uses only outputs.
    pub fn is_valid(&self, p: &SignalPartition) -> bool {
        self.b1.is_boolean()
            && self.b2.is_boolean()
            && self.b1.atoms().iter().all(|a| p.is_input(a) || p.is_output(a))
            && self.phi.atoms().iter().all(|a| p.is_input(a))
            && self.b2.atoms().iter().all(|a| p.is_output(a))
    }

    /// The recurrence reading: `(phi', b2')` with `phi' <-> G F b2'`.
    pub fn recurrence_form(&self) -> (Formula, Formula) {
        match self.polarity {
            Polarity::Recurrence => (self.phi.clone(), self.b2.clone()),
            Polarity::Persistence => (Formula::not(self.phi.clone()), Formula::not(self.b2.clone())),
        }
    }
}

fn inputs_only(f: &Formula, p: &SignalPartition) -> bool {
    f.atoms().iter().all(|a| p.is_input(a))
}

fn outputs_only(f: &Formula, p: &SignalPartition) -> bool {
    f.atoms().iter().all(|a| p.is_output(a))
}

/// Matches `G F b2` / `F G b2` with `b2` a Boolean formula over outputs.
fn fairness_side(f: &Formula, p: &SignalPartition) -> Option<(Formula, Polarity)> {
    let (outer, inner) = match f.kind() {
        Kind::Globally => (Kind::Globally, f.child()),
        Kind::Eventually => (Kind::Eventually, f.child()),
        _ => return None,
    };
    let expected = if outer == Kind::Globally { Kind::Eventually } else { Kind::Globally };
    if inner.kind() != expected {
        return None;
    }
    let b2 = inner.child();
    if !b2.is_boolean() || !outputs_only(b2, p) {
        return None;
    }
    let polarity = if outer == Kind::Globally { Polarity::Recurrence } else { Polarity::Persistence };
    Some((b2.clone(), polarity))
}

fn match_equivalence(f: &Formula, p: &SignalPartition) -> Option<(Formula, Formula, Polarity)> {
    if f.kind() != Kind::Iff {
        return None;
    }
    for (phi, other) in [(f.lhs(), f.rhs()), (f.rhs(), f.lhs())] {
        if let Some((b2, pol)) = fairness_side(other, p) {
            if inputs_only(phi, p) {
                return Some((phi.clone(), b2, pol));
            }
        }
    }
    None
}

/// Recognizes specifications that admit a strategy built directly from a
/// deterministic Büchi automaton for `phi`.
///
/// All top-level conjuncts except one equivalence must be of the form
/// `G(b)` with `b` Boolean; their bodies form `b1` (`true` when there are
/// none). A specification made only of `G(b)` conjuncts is matched with
/// `phi = b2 = true`.
pub fn detect_bypass(f: &Formula, p: &SignalPartition) -> Option<BypassPattern> {
    let mut safety = Vec::new();
    let mut equivalence = None;
    for c in f.conjuncts() {
        if c.kind() == Kind::Globally && c.child().is_boolean() {
            safety.push(c.child().clone());
            continue;
        }
        if c.kind() == Kind::True {
            continue;
        }
        let m = match_equivalence(&c, p)?;
        if equivalence.replace(m).is_some() {
            return None;
        }
    }
    let has_safety = !safety.is_empty();
    let b1 = Formula::and_all(safety);
    let (phi, b2, polarity) = match equivalence {
        Some(m) => m,
        None if has_safety => (Formula::tt(), Formula::tt(), Polarity::Recurrence),
        None => return None,
    };
    let pattern = BypassPattern { b1, phi, b2, polarity };
    pattern.is_valid(p).then_some(pattern)
}
