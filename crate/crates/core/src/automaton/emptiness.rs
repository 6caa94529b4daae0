use std::collections::HashSet;

use thiserror::Error;

use super::{AccKind, Acceptance, Automaton, ColorSet};
use crate::graph::sccs;

/// Maximum color count for emptiness checks on arbitrary acceptance.
pub const COLOR_BUDGET: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmptinessError {
    #[error("emptiness check needs at most {COLOR_BUDGET} colors for this acceptance, found {0}")]
    ColorBudget(u32),
}

/// A graph with colored edges, used as the common substrate of the
/// emptiness and membership checks.
#[derive(Clone, Debug, Default)]
pub struct ColoredGraph {
    pub succ: Vec<Vec<(ColorSet, usize)>>,
    pub initial: usize,
}

impl ColoredGraph {
    pub fn from_automaton(a: &Automaton) -> ColoredGraph {
        ColoredGraph {
            succ: a.edges.iter().map(|es| es.iter().map(|e| (e.colors, e.dst)).collect()).collect(),
            initial: a.initial,
        }
    }
}

/// Whether a run from the initial state satisfies `acc`.
pub fn accepting_cycle_exists(g: &ColoredGraph, acc: &Acceptance) -> Result<bool, EmptinessError> {
    if !matches!(acc.kind, AccKind::Buchi | AccKind::ParityMaxOdd(_) | AccKind::Generalized)
        && acc.num_colors > COLOR_BUDGET
    {
        return Err(EmptinessError::ColorBudget(acc.num_colors));
    }
    let n = g.succ.len();
    let mut reach = vec![false; n];
    reach[g.initial] = true;
    let mut stack = vec![g.initial];
    while let Some(s) = stack.pop() {
        for &(_, d) in &g.succ[s] {
            if !reach[d] {
                reach[d] = true;
                stack.push(d);
            }
        }
    }
    let fin = acc.cond.fin_colors();
    let mut visited: HashSet<ColorSet> = HashSet::new();
    let mut todo = vec![ColorSet::EMPTY];
    // Each entry is a set of removed colors; explores the restriction of the
    // reachable graph to edges avoiding them. Removing only Fin colors is
    // complete because the condition is monotone in its Inf atoms.
    while let Some(removed) = todo.pop() {
        if !visited.insert(removed) {
            continue;
        }
        let adj: Vec<Vec<usize>> = g
            .succ
            .iter()
            .map(|es| es.iter().filter(|(c, _)| c.intersect(removed).is_empty()).map(|&(_, d)| d).collect())
            .collect();
        let comps = sccs(&adj, Some(&reach));
        for (k, members) in comps.members.iter().enumerate() {
            let mut seen = ColorSet::EMPTY;
            let mut cyclic = false;
            for &s in members {
                for &(c, d) in &g.succ[s] {
                    if reach[d] && comps.comp[d] == k && c.intersect(removed).is_empty() {
                        cyclic = true;
                        seen = seen.union(c);
                    }
                }
            }
            if !cyclic {
                continue;
            }
            if acc.accepts(seen) {
                return Ok(true);
            }
            match acc.kind {
                AccKind::ParityMaxOdd(_) => {
                    // max color is even here: drop it
                    if let Some(m) = seen.max() {
                        todo.push(removed.union(ColorSet::single(m)));
                    }
                }
                _ => {
                    for c in seen.intersect(fin).iter() {
                        todo.push(removed.union(ColorSet::single(c)));
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Language emptiness, with the color budget enforced for arbitrary
/// acceptance.
pub fn try_is_empty(a: &Automaton) -> Result<bool, EmptinessError> {
    accepting_cycle_exists(&ColoredGraph::from_automaton(a), &a.acceptance).map(|b| !b)
}

/// Language emptiness. Panics when the color budget is exceeded; use
/// [`try_is_empty`] to handle that case.
pub fn is_empty(a: &Automaton) -> bool {
    try_is_empty(a).expect("emptiness check")
}
