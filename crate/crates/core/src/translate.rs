//! LTL to nondeterministic Büchi automata with transition-based acceptance.
//!
//! A tableau over sets of NNF obligations: every state is expanded into
//! terms `(now-label, next-obligations, deferred eventualities)`. An edge
//! carries color `k` (generalized acceptance) when it does not defer the
//! `k`-th eventuality. Top-level conjuncts are translated separately,
//! combined by product, and the result is degeneralized with a level counter.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{product, AccCond, AccKind, Acceptance, Automaton, ColorSet, Edge};
use crate::graph::sccs;
use crate::label::Label;
use crate::ltl::{to_nnf, Formula, Kind};
use crate::parity::{determinize_nba, minimize_colors, DeterminizeError};

/// Language-equivalent transition-based Büchi automaton (acceptance
/// `Inf(0)`) over `aps`, which must contain every atom of `f`.
pub fn ltl_to_nba(f: &Formula, aps: &[String]) -> Automaton {
    let f = to_nnf(f);
    let parts = f.conjuncts();
    if parts.len() <= 1 {
        return ltl_to_nba_direct(&f, aps);
    }
    let mut acc: Option<Automaton> = None;
    for part in parts {
        let tgba = tableau(&part, aps);
        acc = Some(match acc {
            None => tgba,
            Some(prev) => {
                let p = product(&prev, &tgba).expect("shared alphabet");
                if p.acceptance.num_colors > 48 {
                    // keep the color count bounded by degeneralizing early
                    degeneralize(&p)
                } else {
                    p
                }
            }
        });
    }
    finish(degeneralize(&acc.expect("at least one conjunct")))
}

/// Translation without splitting the top-level conjunction.
pub fn ltl_to_nba_direct(f: &Formula, aps: &[String]) -> Automaton {
    let f = to_nnf(f);
    finish(degeneralize(&tableau(&f, aps)))
}

/// A deterministic Büchi automaton for `f`, if `f` is a recurrence property
/// recognized after determinization and color minimization.
pub fn ltl_to_dba_if_recurrence(f: &Formula, aps: &[String]) -> Result<Option<Automaton>, DeterminizeError> {
    let nba = ltl_to_nba(f, aps);
    let dpa = minimize_colors(&determinize_nba(&nba, crate::parity::DEFAULT_STATE_BUDGET)?);
    let used = dpa.edges.iter().flatten().fold(ColorSet::EMPTY, |acc, e| acc.union(e.colors));
    if used.iter().any(|c| c > 1) {
        return Ok(None);
    }
    let mut dba = dpa.clone();
    dba.acceptance = Acceptance::buchi();
    for es in &mut dba.edges {
        for e in es {
            e.colors = if e.colors.contains(1) { ColorSet::single(0) } else { ColorSet::EMPTY };
        }
    }
    Ok(Some(dba))
}

/// The label of a Boolean formula over `aps`; `None` when `f` is temporal
/// or mentions a proposition outside `aps`.
pub fn boolean_label(f: &Formula, aps: &[String]) -> Option<Label> {
    let bin = |g: fn(&Label, &Label) -> Label| -> Option<Label> {
        Some(g(&boolean_label(f.lhs(), aps)?, &boolean_label(f.rhs(), aps)?))
    };
    match f.kind() {
        Kind::True => Some(Label::tt()),
        Kind::False => Some(Label::ff()),
        Kind::Ap => {
            let name = f.name()?;
            aps.iter().position(|a| a == name).map(|k| Label::literal(k, true))
        }
        Kind::Not => Some(boolean_label(f.child(), aps)?.not()),
        Kind::And => bin(|a, b| a.and(b)),
        Kind::Or => bin(|a, b| a.or(b)),
        Kind::Implies => bin(|a, b| a.not().or(b)),
        Kind::Iff => bin(|a, b| a.and(b).or(&a.not().and(&b.not()))),
        Kind::Xor => bin(|a, b| a.and_not(b).or(&b.and_not(a))),
        _ => None,
    }
}

fn finish(a: Automaton) -> Automaton {
    let mut a = prune_useless(&a);
    simplify_edges(&mut a);
    a.update_flags();
    a
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    label: Label,
    next: BTreeSet<Formula>,
    deferred: u64,
}

struct Tableau<'a> {
    aps: &'a [String],
    eventualities: Vec<Formula>,
    memo: HashMap<Formula, Vec<Term>>,
}

impl Tableau<'_> {
    fn ev_bit(&self, f: &Formula) -> u64 {
        let k = self.eventualities.iter().position(|e| e == f).expect("eventuality registered");
        1 << k
    }

    fn expand(&mut self, f: &Formula) -> Vec<Term> {
        if let Some(t) = self.memo.get(f) {
            return t.clone();
        }
        let only = |label: Label, next: Vec<Formula>, deferred: u64| {
            vec![Term { label, next: next.into_iter().collect(), deferred }]
        };
        let terms = match f.kind() {
            Kind::True => only(Label::tt(), vec![], 0),
            Kind::False => vec![],
            Kind::Ap => {
                let v = self.var(f);
                only(Label::literal(v, true), vec![], 0)
            }
            Kind::Not => {
                let v = self.var(f.child());
                only(Label::literal(v, false), vec![], 0)
            }
            Kind::And => {
                let l = self.expand(f.lhs());
                let r = self.expand(f.rhs());
                conjoin(&l, &r)
            }
            Kind::Or => {
                let mut t = self.expand(f.lhs());
                t.extend(self.expand(f.rhs()));
                t
            }
            Kind::Next => only(Label::tt(), vec![f.child().clone()], 0),
            Kind::Until => {
                let bit = self.ev_bit(f);
                let mut t = self.expand(f.rhs());
                let stay = only(Label::tt(), vec![f.clone()], bit);
                t.extend(conjoin(&self.expand(f.lhs()), &stay));
                t
            }
            Kind::Eventually => {
                let bit = self.ev_bit(f);
                let mut t = self.expand(f.child());
                t.extend(only(Label::tt(), vec![f.clone()], bit));
                t
            }
            Kind::Release => {
                // g & (f | X(f R g))
                let both = conjoin(&self.expand(f.lhs()), &self.expand(f.rhs()));
                let stay = only(Label::tt(), vec![f.clone()], 0);
                let mut t = both;
                t.extend(conjoin(&self.expand(f.rhs()), &stay));
                t
            }
            Kind::Globally => {
                let stay = only(Label::tt(), vec![f.clone()], 0);
                conjoin(&self.expand(f.child()), &stay)
            }
            Kind::WeakUntil => {
                let mut t = self.expand(f.rhs());
                let stay = only(Label::tt(), vec![f.clone()], 0);
                t.extend(conjoin(&self.expand(f.lhs()), &stay));
                t
            }
            Kind::Xor | Kind::Iff | Kind::Implies => unreachable!("input is in negation normal form"),
        };
        let terms = reduce_terms(terms);
        self.memo.insert(f.clone(), terms.clone());
        terms
    }

    fn var(&self, ap: &Formula) -> usize {
        let name = ap.name().expect("atomic proposition");
        self.aps
            .iter()
            .position(|a| a == name)
            .unwrap_or_else(|| panic!("proposition `{name}` is not in the alphabet"))
    }
}

fn conjoin(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            let label = x.label.and(&y.label);
            if label.is_false() {
                continue;
            }
            let next = simplify_obligations(x.next.union(&y.next).cloned().collect());
            let Some(next) = next else { continue };
            out.push(Term { label, next, deferred: x.deferred | y.deferred });
        }
    }
    out
}

/// Drops duplicates and terms dominated by another term with the same
/// obligations, fewer deferrals and a weaker label requirement.
fn reduce_terms(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort();
    terms.dedup();
    let mut keep = vec![true; terms.len()];
    for i in 0..terms.len() {
        for j in 0..terms.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (a, b) = (&terms[j], &terms[i]);
            // a dominates b
            if a.next.is_subset(&b.next) && a.deferred & !b.deferred == 0 && b.label.implies(&a.label) {
                keep[i] = false;
                break;
            }
        }
    }
    terms.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect()
}

/// Removes obligations implied by another member; `None` when the set is
/// syntactically contradictory.
fn simplify_obligations(set: BTreeSet<Formula>) -> Option<BTreeSet<Formula>> {
    if set.iter().any(|f| f.kind() == Kind::False) {
        return None;
    }
    let items: Vec<Formula> = set.into_iter().filter(|f| f.kind() != Kind::True).collect();
    let mut out = BTreeSet::new();
    for (i, f) in items.iter().enumerate() {
        let implied = items
            .iter()
            .enumerate()
            .any(|(j, g)| j != i && implies(g, f) && (!implies(f, g) || j < i));
        if !implied {
            out.insert(f.clone());
        }
    }
    Some(out)
}

/// Sound syntactic implication `f -> g` between NNF formulas.
pub(crate) fn implies(f: &Formula, g: &Formula) -> bool {
    if f == g || g.kind() == Kind::True || f.kind() == Kind::False {
        return true;
    }
    match g.kind() {
        Kind::Or if implies(f, g.lhs()) || implies(f, g.rhs()) => return true,
        Kind::And => return implies(f, g.lhs()) && implies(f, g.rhs()),
        Kind::Eventually if implies(f, g.child()) => return true,
        Kind::Until if implies(f, g.rhs()) => return true,
        Kind::WeakUntil if implies(f, g.rhs()) => return true,
        Kind::Release if implies(f, g.lhs()) && implies(f, g.rhs()) => return true,
        _ => {}
    }
    match f.kind() {
        Kind::Or => implies(f.lhs(), g) && implies(f.rhs(), g),
        Kind::And => implies(f.lhs(), g) || implies(f.rhs(), g),
        Kind::Globally => {
            implies(f.child(), g)
                || match g.kind() {
                    Kind::Globally | Kind::Eventually => implies(f.child(), g.child()),
                    Kind::Next => implies(f, g.child()),
                    _ => false,
                }
        }
        Kind::Release => implies(f.rhs(), g),
        Kind::Until => {
            (implies(f.lhs(), g) && implies(f.rhs(), g))
                || (g.kind() == Kind::Eventually && implies(f.rhs(), g.child()))
        }
        Kind::Eventually => g.kind() == Kind::Eventually && implies(f.child(), g.child()),
        Kind::Next => g.kind() == Kind::Next && implies(f.child(), g.child()),
        _ => false,
    }
}

/// Transition-based generalized Büchi automaton for an NNF formula; one
/// color per eventuality in discovery order.
fn tableau(f: &Formula, aps: &[String]) -> Automaton {
    let mut eventualities = Vec::new();
    f.for_each_subformula(&mut |g| {
        if matches!(g.kind(), Kind::Until | Kind::Eventually) {
            eventualities.push(g.clone());
        }
    });
    assert!(eventualities.len() <= ColorSet::MAX_COLORS as usize, "too many eventualities");
    let k = eventualities.len() as u32;
    let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut tab = Tableau { aps, eventualities, memo: HashMap::new() };
    let acc = Acceptance::new(k, AccCond::and((0..k).map(AccCond::Inf)));
    let mut out = Automaton::new(aps.to_vec(), 1, acc);

    let Some(init) = simplify_obligations([f.clone()].into_iter().collect()) else {
        return out;
    };
    let mut index: HashMap<BTreeSet<Formula>, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    index.insert(init, 0);
    let mut i = 0;
    while i < states.len() {
        let set = states[i].clone();
        let mut terms = vec![Term { label: Label::tt(), next: BTreeSet::new(), deferred: 0 }];
        for g in &set {
            terms = reduce_terms(conjoin(&terms, &tab.expand(g)));
        }
        let mut edges = Vec::new();
        for t in terms {
            let dst = *index.entry(t.next.clone()).or_insert_with(|| {
                states.push(t.next.clone());
                states.len() - 1
            });
            edges.push(Edge { label: t.label, colors: ColorSet(all & !t.deferred), dst });
        }
        if out.edges.len() <= i {
            out.edges.push(Vec::new());
        }
        out.edges[i] = edges;
        i += 1;
    }
    out.edges.resize(states.len(), Vec::new());
    simplify_edges(&mut out);
    out.update_flags();
    out
}

/// Level-counter degeneralization of a generalized Büchi automaton into
/// `Inf(0)`. A Büchi input is returned as is.
pub fn degeneralize(a: &Automaton) -> Automaton {
    let colors: Vec<u32> = match (&a.acceptance.kind, &a.acceptance.cond) {
        (AccKind::Buchi, AccCond::Inf(c)) => vec![*c],
        (AccKind::Generalized, AccCond::True) => vec![],
        (AccKind::Generalized, AccCond::And(xs)) => xs
            .iter()
            .map(|x| match x {
                AccCond::Inf(c) => *c,
                _ => unreachable!("generalized Büchi has only Inf atoms"),
            })
            .collect(),
        _ => panic!("degeneralize expects generalized Büchi acceptance"),
    };
    let k = colors.len();
    let mut out = Automaton::new(a.aps.clone(), 1, Acceptance::buchi());
    if k == 1 {
        out.initial = a.initial;
        out.edges = a
            .edges
            .iter()
            .map(|es| {
                es.iter()
                    .map(|e| Edge {
                        label: e.label.clone(),
                        colors: if e.colors.contains(colors[0]) { ColorSet::single(0) } else { ColorSet::EMPTY },
                        dst: e.dst,
                    })
                    .collect()
            })
            .collect();
        out.update_flags();
        return out;
    }
    let levels = k.max(1);
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states = vec![(a.initial, 0usize)];
    index.insert((a.initial, 0), 0);
    let mut i = 0;
    while i < states.len() {
        let (q, level) = states[i];
        let mut edges = Vec::new();
        for e in &a.edges[q] {
            let mut l = level;
            while l < k && e.colors.contains(colors[l]) {
                l += 1;
            }
            let accepting = l == k;
            if accepting {
                l = 0;
                while l + 1 < k && e.colors.contains(colors[l]) {
                    l += 1;
                }
            }
            let l = l % levels;
            let key = (e.dst, l);
            let dst = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            let colors = if accepting { ColorSet::single(0) } else { ColorSet::EMPTY };
            edges.push(Edge { label: e.label.clone(), colors, dst });
        }
        if out.edges.len() <= i {
            out.edges.push(Vec::new());
        }
        out.edges[i] = edges;
        i += 1;
    }
    out.edges.resize(states.len(), Vec::new());
    out.update_flags();
    out
}

/// Keeps the states that are reachable and can reach an accepting cycle of
/// a Büchi automaton.
pub fn prune_useless(a: &Automaton) -> Automaton {
    let a = a.trim();
    let succ = a.successors();
    let comps = sccs(&succ, None);
    let n = a.num_states();
    let mut good = vec![false; n];
    // components come sinks first, so successors are settled before
    for (k, members) in comps.members.iter().enumerate() {
        let accepting = members.iter().any(|&s| {
            a.edges[s]
                .iter()
                .any(|e| comps.comp[e.dst] == k && a.acceptance.accepts(e.colors) && !e.colors.is_empty()
                    || comps.comp[e.dst] == k && a.acceptance.cond == AccCond::True)
        });
        let leads = members
            .iter()
            .any(|&s| a.edges[s].iter().any(|e| comps.comp[e.dst] != k && good[e.dst]));
        if accepting || leads {
            for &s in members {
                good[s] = true;
            }
        }
    }
    if !good[a.initial] {
        let mut empty = Automaton::new(a.aps.clone(), 1, a.acceptance.clone());
        empty.update_flags();
        return empty;
    }
    a.restrict(&good)
}

/// Merges parallel edges with equal colors and shrinks labels dominated by
/// a parallel edge with at least the same colors.
pub fn simplify_edges(a: &mut Automaton) {
    for es in &mut a.edges {
        let mut merged: Vec<Edge> = Vec::new();
        for e in es.drain(..) {
            match merged.iter_mut().find(|m| m.dst == e.dst && m.colors == e.colors) {
                Some(m) => m.label = m.label.or(&e.label),
                None => merged.push(e),
            }
        }
        // valid for monotone acceptance: a run may always take the edge with more colors
        if a.acceptance.kind == AccKind::Buchi || a.acceptance.kind == AccKind::Generalized {
            for i in 0..merged.len() {
                for j in 0..merged.len() {
                    if i != j
                        && merged[i].dst == merged[j].dst
                        && merged[j].colors.0 & !merged[i].colors.0 == 0
                        && merged[j].colors != merged[i].colors
                    {
                        let l = merged[j].label.and_not(&merged[i].label);
                        merged[j].label = l;
                    }
                }
            }
            merged.retain(|e| e.label.is_sat());
        }
        *es = merged;
    }
}
