use std::fmt;

use super::ColorSet;

/// Positive Boolean formula over `Inf(c)` and `Fin(c)` atoms, kept flat:
/// `And`/`Or` never directly contain a node of the same kind or a constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AccCond {
    True,
    False,
    Inf(u32),
    Fin(u32),
    And(Vec<AccCond>),
    Or(Vec<AccCond>),
}

impl AccCond {
    pub fn and(items: impl IntoIterator<Item = AccCond>) -> AccCond {
        let mut out = Vec::new();
        for it in items {
            match it {
                AccCond::True => {}
                AccCond::False => return AccCond::False,
                AccCond::And(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => AccCond::True,
            1 => out.pop().expect("one item"),
            _ => AccCond::And(out),
        }
    }

    pub fn or(items: impl IntoIterator<Item = AccCond>) -> AccCond {
        let mut out = Vec::new();
        for it in items {
            match it {
                AccCond::False => {}
                AccCond::True => return AccCond::True,
                AccCond::Or(xs) => out.extend(xs),
                x => out.push(x),
            }
        }
        match out.len() {
            0 => AccCond::False,
            1 => out.pop().expect("one item"),
            _ => AccCond::Or(out),
        }
    }

    /// Truth value when exactly the colors of `inf` occur infinitely often.
    pub fn eval(&self, inf: ColorSet) -> bool {
        match self {
            AccCond::True => true,
            AccCond::False => false,
            AccCond::Inf(c) => inf.contains(*c),
            AccCond::Fin(c) => !inf.contains(*c),
            AccCond::And(xs) => xs.iter().all(|x| x.eval(inf)),
            AccCond::Or(xs) => xs.iter().any(|x| x.eval(inf)),
        }
    }

    /// The dual formula: accepting exactly the runs this one rejects.
    pub fn negate(&self) -> AccCond {
        match self {
            AccCond::True => AccCond::False,
            AccCond::False => AccCond::True,
            AccCond::Inf(c) => AccCond::Fin(*c),
            AccCond::Fin(c) => AccCond::Inf(*c),
            AccCond::And(xs) => AccCond::or(xs.iter().map(AccCond::negate)),
            AccCond::Or(xs) => AccCond::and(xs.iter().map(AccCond::negate)),
        }
    }

    /// Renames every color through `f`.
    pub fn map_colors(&self, f: &impl Fn(u32) -> u32) -> AccCond {
        match self {
            AccCond::True => AccCond::True,
            AccCond::False => AccCond::False,
            AccCond::Inf(c) => AccCond::Inf(f(*c)),
            AccCond::Fin(c) => AccCond::Fin(f(*c)),
            AccCond::And(xs) => AccCond::and(xs.iter().map(|x| x.map_colors(f))),
            AccCond::Or(xs) => AccCond::or(xs.iter().map(|x| x.map_colors(f))),
        }
    }

    /// Colors occurring in `Fin` atoms.
    pub fn fin_colors(&self) -> ColorSet {
        self.atoms(false)
    }

    /// Colors occurring in `Inf` atoms.
    pub fn inf_colors(&self) -> ColorSet {
        self.atoms(true)
    }

    fn atoms(&self, inf: bool) -> ColorSet {
        match self {
            AccCond::Inf(c) if inf => ColorSet::single(*c),
            AccCond::Fin(c) if !inf => ColorSet::single(*c),
            AccCond::And(xs) | AccCond::Or(xs) => {
                xs.iter().fold(ColorSet::EMPTY, |acc, x| acc.union(x.atoms(inf)))
            }
            _ => ColorSet::EMPTY,
        }
    }

    pub fn max_color(&self) -> Option<u32> {
        self.fin_colors().union(self.inf_colors()).max()
    }

    /// Canonical max-odd parity condition over colors `0..k`.
    pub fn parity_max_odd(k: u32) -> AccCond {
        if k == 0 {
            return AccCond::False;
        }
        let mut cond = AccCond::Fin(0);
        for c in 1..k {
            cond = if c % 2 == 1 {
                AccCond::or([AccCond::Inf(c), cond])
            } else {
                AccCond::and([AccCond::Fin(c), cond])
            };
        }
        cond
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccCond::And(_) | AccCond::Or(_) => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for AccCond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccCond::True => write!(f, "t"),
            AccCond::False => write!(f, "f"),
            AccCond::Inf(c) => write!(f, "Inf({c})"),
            AccCond::Fin(c) => write!(f, "Fin({c})"),
            AccCond::And(xs) | AccCond::Or(xs) => {
                let sep = if matches!(self, AccCond::And(_)) { " & " } else { " | " };
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    x.fmt_child(f)?;
                }
                Ok(())
            }
        }
    }
}

/// Recognized shape of an acceptance formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccKind {
    /// A single `Inf(c)`.
    Buchi,
    /// The canonical max-odd condition over colors `0..k`.
    ParityMaxOdd(u32),
    /// A conjunction of `Inf` atoms (including `t`).
    Generalized,
    Arbitrary,
}

/// An Emerson–Lei acceptance condition with its declared color count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acceptance {
    pub num_colors: u32,
    pub cond: AccCond,
    pub kind: AccKind,
}

impl Acceptance {
    /// Builds an acceptance and derives its kind. Panics if the formula
    /// references a color `>= num_colors`.
    pub fn new(num_colors: u32, cond: AccCond) -> Acceptance {
        if let Some(m) = cond.max_color() {
            assert!(m < num_colors, "acceptance uses color {m} but declares {num_colors}");
        }
        let kind = classify(num_colors, &cond);
        Acceptance { num_colors, cond, kind }
    }

    pub fn buchi() -> Acceptance {
        Acceptance::new(1, AccCond::Inf(0))
    }

    pub fn parity_max_odd(k: u32) -> Acceptance {
        Acceptance::new(k, AccCond::parity_max_odd(k))
    }

    pub fn all() -> Acceptance {
        Acceptance::new(0, AccCond::True)
    }

    pub fn is_parity(&self) -> bool {
        matches!(self.kind, AccKind::ParityMaxOdd(_))
    }

    pub fn accepts(&self, inf: ColorSet) -> bool {
        self.cond.eval(inf)
    }

    /// Conventional name for the `acc-name:` header, when the kind has one.
    pub fn name(&self) -> Option<String> {
        match self.kind {
            AccKind::Buchi if self.cond == AccCond::Inf(0) && self.num_colors == 1 => Some("Buchi".into()),
            AccKind::ParityMaxOdd(k) => Some(format!("parity max odd {k}")),
            AccKind::Generalized if self.cond == AccCond::True && self.num_colors == 0 => Some("all".into()),
            AccKind::Generalized if is_generalized_prefix(self) => {
                Some(format!("generalized-Buchi {}", self.num_colors))
            }
            _ => None,
        }
    }
}

fn is_generalized_prefix(a: &Acceptance) -> bool {
    a.num_colors >= 2
        && a.cond == AccCond::and((0..a.num_colors).map(AccCond::Inf))
}

fn classify(num_colors: u32, cond: &AccCond) -> AccKind {
    if matches!(cond, AccCond::Inf(_)) {
        return AccKind::Buchi;
    }
    if num_colors > 0 && *cond == AccCond::parity_max_odd(num_colors) {
        return AccKind::ParityMaxOdd(num_colors);
    }
    match cond {
        AccCond::True => AccKind::Generalized,
        AccCond::And(xs) if xs.iter().all(|x| matches!(x, AccCond::Inf(_))) => AccKind::Generalized,
        _ => AccKind::Arbitrary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_parity_forms() {
        assert_eq!(AccCond::parity_max_odd(1).to_string(), "Fin(0)");
        assert_eq!(AccCond::parity_max_odd(2).to_string(), "Inf(1) | Fin(0)");
        assert_eq!(AccCond::parity_max_odd(3).to_string(), "Fin(2) & (Inf(1) | Fin(0))");
        assert_eq!(Acceptance::parity_max_odd(3).kind, AccKind::ParityMaxOdd(3));
    }

    #[test]
    fn parity_condition_means_max_odd() {
        for k in 1..6u32 {
            let cond = AccCond::parity_max_odd(k);
            for bits in 1u64..(1 << k) {
                let inf = ColorSet(bits);
                let max = inf.max().unwrap();
                assert_eq!(cond.eval(inf), max % 2 == 1, "k={k} inf={bits:b}");
            }
        }
    }

    #[test]
    fn kinds() {
        assert_eq!(Acceptance::buchi().kind, AccKind::Buchi);
        assert_eq!(Acceptance::all().kind, AccKind::Generalized);
        let gen = Acceptance::new(2, AccCond::and([AccCond::Inf(0), AccCond::Inf(1)]));
        assert_eq!(gen.kind, AccKind::Generalized);
        assert_eq!(gen.name().as_deref(), Some("generalized-Buchi 2"));
        let arb = Acceptance::new(2, AccCond::and([AccCond::Fin(0), AccCond::Inf(1)]));
        assert_eq!(arb.kind, AccKind::Arbitrary);
        assert_eq!(arb.name(), None);
    }

    #[test]
    fn negation_is_dual() {
        let c = AccCond::or([AccCond::and([AccCond::Fin(0), AccCond::Inf(1)]), AccCond::Inf(2)]);
        for bits in 0u64..8 {
            assert_eq!(c.negate().eval(ColorSet(bits)), !c.eval(ColorSet(bits)));
        }
    }
}
