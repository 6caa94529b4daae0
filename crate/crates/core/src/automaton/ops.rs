use std::collections::HashMap;

use thiserror::Error;

use super::emptiness::{accepting_cycle_exists, ColoredGraph, EmptinessError};
use super::{AccCond, Acceptance, Automaton, ColorSet, Edge};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpError {
    #[error("alphabets differ: {0:?} vs {1:?}")]
    AlphabetMismatch(Vec<String>, Vec<String>),
    #[error("automaton must be deterministic and complete")]
    NotDeterministicComplete,
    #[error("automaton must have parity max odd acceptance")]
    NotParity,
    #[error("product needs {0} colors, more than {max}", max = ColorSet::MAX_COLORS)]
    TooManyColors(u32),
    #[error("lasso period must be nonempty")]
    EmptyPeriod,
    #[error(transparent)]
    Emptiness(#[from] EmptinessError),
}

/// Synchronized product over a shared alphabet. Colors of `b` are shifted
/// above those of `a`; the acceptance is the conjunction. Only reachable
/// pairs are built, in breadth-first order.
pub fn product(a: &Automaton, b: &Automaton) -> Result<Automaton, OpError> {
    if a.aps != b.aps {
        return Err(OpError::AlphabetMismatch(a.aps.clone(), b.aps.clone()));
    }
    let shift = a.acceptance.num_colors;
    let total = shift + b.acceptance.num_colors;
    if total > ColorSet::MAX_COLORS {
        return Err(OpError::TooManyColors(total));
    }
    let cond = AccCond::and([a.acceptance.cond.clone(), b.acceptance.cond.map_colors(&|c| c + shift)]);
    let mut out = Automaton::new(a.aps.clone(), 1, Acceptance::new(total, cond));
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut order = vec![(a.initial, b.initial)];
    index.insert((a.initial, b.initial), 0);
    let mut k = 0;
    while k < order.len() {
        let (p, q) = order[k];
        let mut edges = Vec::new();
        for ea in &a.edges[p] {
            for eb in &b.edges[q] {
                let label = ea.label.and(&eb.label);
                if label.is_false() {
                    continue;
                }
                let key = (ea.dst, eb.dst);
                let dst = *index.entry(key).or_insert_with(|| {
                    order.push(key);
                    order.len() - 1
                });
                edges.push(Edge { label, colors: ea.colors.union(eb.colors.map(|c| c + shift)), dst });
            }
        }
        if out.edges.len() <= k {
            out.edges.push(Vec::new());
        }
        out.edges[k] = edges;
        k += 1;
    }
    out.edges.resize(order.len(), Vec::new());
    out.update_flags();
    Ok(out)
}

/// Complement of a deterministic complete max-odd parity automaton: every
/// color is incremented by one.
pub fn complement_parity(a: &Automaton) -> Result<Automaton, OpError> {
    if !a.deterministic || !a.complete {
        return Err(OpError::NotDeterministicComplete);
    }
    if !a.acceptance.is_parity() {
        return Err(OpError::NotParity);
    }
    let k = a.acceptance.num_colors + 1;
    if k > ColorSet::MAX_COLORS {
        return Err(OpError::TooManyColors(k));
    }
    let mut out = a.clone();
    out.acceptance = Acceptance::parity_max_odd(k);
    for es in &mut out.edges {
        for e in es {
            // an uncolored edge ranks below color 0 and turns into 0
            e.colors = ColorSet::single(e.colors.max().map_or(0, |c| c + 1));
        }
    }
    Ok(out)
}

/// Complement of a deterministic complete automaton with any acceptance, by
/// negating the acceptance formula.
pub fn complement_deterministic(a: &Automaton) -> Result<Automaton, OpError> {
    if !a.deterministic || !a.complete {
        return Err(OpError::NotDeterministicComplete);
    }
    let mut out = a.clone();
    out.acceptance = Acceptance::new(a.acceptance.num_colors, a.acceptance.cond.negate());
    Ok(out)
}

/// Whether `a` accepts `prefix · period^ω`. Letters are bit sets over
/// `a.aps`. Works for nondeterministic automata by searching the product
/// with the lasso's position graph.
pub fn accepts_lasso(a: &Automaton, prefix: &[u64], period: &[u64]) -> Result<bool, OpError> {
    if period.is_empty() {
        return Err(OpError::EmptyPeriod);
    }
    let len = prefix.len() + period.len();
    let letter = |i: usize| if i < prefix.len() { prefix[i] } else { period[i - prefix.len()] };
    let next = |i: usize| if i + 1 < len { i + 1 } else { prefix.len() };
    let node = |q: usize, i: usize| q * len + i;
    let mut g = ColoredGraph { succ: vec![Vec::new(); a.num_states() * len], initial: node(a.initial, 0) };
    for (q, es) in a.edges.iter().enumerate() {
        for i in 0..len {
            let w = letter(i);
            g.succ[node(q, i)] = es
                .iter()
                .filter(|e| e.label.eval(w))
                .map(|e| (e.colors, node(e.dst, next(i))))
                .collect();
        }
    }
    Ok(accepting_cycle_exists(&g, &a.acceptance)?)
}
