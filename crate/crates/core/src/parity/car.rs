//! Color appearance records: deterministic Emerson–Lei to parity, one SCC
//! at a time.

use std::collections::HashMap;

use thiserror::Error;

use crate::automaton::{AccCond, AccKind, Acceptance, Automaton, ColorSet, Edge};
use crate::graph::sccs;

/// Maximum number of acceptance-relevant colors in a CAR input.
pub const CAR_COLOR_BUDGET: u32 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CarError {
    #[error("color appearance records support at most {CAR_COLOR_BUDGET} colors, found {0}")]
    ColorBudget(u32),
    #[error("paritization expects a deterministic automaton")]
    NotDeterministic,
}

/// Deterministic max-odd parity automaton equivalent to the deterministic
/// automaton `a`.
///
/// Within an SCC a state is paired with a record ordering the SCC's colors
/// by most recent visit. An edge with colors `C` moves `C` to the front
/// (keeping their relative order) and emits `2|H| + [H accepting]`, where
/// `H` is the prefix of the old record up to the last moved color. Edges
/// between SCCs emit 0 and reset the record.
pub fn car_paritize(a: &Automaton) -> Result<Automaton, CarError> {
    if !a.deterministic {
        return Err(CarError::NotDeterministic);
    }
    match a.acceptance.kind {
        AccKind::ParityMaxOdd(_) => return Ok(a.clone()),
        AccKind::Buchi => {
            let AccCond::Inf(c) = a.acceptance.cond else { unreachable!("Büchi is a single Inf") };
            let mut out = a.clone();
            out.acceptance = Acceptance::parity_max_odd(2);
            for es in &mut out.edges {
                for e in es {
                    e.colors = ColorSet::single(u32::from(e.colors.contains(c)));
                }
            }
            return Ok(out);
        }
        _ => {}
    }
    let relevant = a.acceptance.cond.fin_colors().union(a.acceptance.cond.inf_colors());
    if relevant.len() > CAR_COLOR_BUDGET {
        return Err(CarError::ColorBudget(relevant.len()));
    }
    let succ = a.successors();
    let comps = sccs(&succ, None);
    // colors of each SCC's internal edges, restricted to relevant ones
    let mut scc_colors = vec![ColorSet::EMPTY; comps.len()];
    for (s, es) in a.edges.iter().enumerate() {
        for e in es {
            if comps.comp[e.dst] == comps.comp[s] {
                scc_colors[comps.comp[s]] = scc_colors[comps.comp[s]].union(e.colors.intersect(relevant));
            }
        }
    }
    let fresh = |q: usize| -> Vec<u32> { scc_colors[comps.comp[q]].iter().collect() };

    let mut index: HashMap<(usize, Vec<u32>), usize> = HashMap::new();
    let mut states: Vec<(usize, Vec<u32>)> = vec![(a.initial, fresh(a.initial))];
    index.insert(states[0].clone(), 0);
    let mut edges: Vec<Vec<Edge>> = Vec::new();
    let mut top = 0u32;
    let mut i = 0;
    while i < states.len() {
        let (q, record) = states[i].clone();
        let mut out = Vec::with_capacity(a.edges[q].len());
        for e in &a.edges[q] {
            let (key, color) = if comps.comp[e.dst] != comps.comp[q] {
                ((e.dst, fresh(e.dst)), 0)
            } else {
                let moved = e.colors.intersect(relevant);
                let last = record.iter().rposition(|c| moved.contains(*c));
                let (h, new_record) = match last {
                    None => (ColorSet::EMPTY, record.clone()),
                    Some(m) => {
                        let h = ColorSet::from_colors(record[..=m].iter().copied());
                        let mut r: Vec<u32> = record.iter().copied().filter(|c| moved.contains(*c)).collect();
                        r.extend(record.iter().copied().filter(|c| !moved.contains(*c)));
                        (h, r)
                    }
                };
                let p = 2 * h.len() + u32::from(a.acceptance.accepts(h));
                ((e.dst, new_record), p)
            };
            top = top.max(color);
            let dst = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            out.push(Edge { label: e.label.clone(), colors: ColorSet::single(color), dst });
        }
        edges.push(out);
        i += 1;
    }
    let mut out = Automaton::new(a.aps.clone(), states.len(), Acceptance::parity_max_odd(top + 1));
    out.initial = 0;
    out.edges = edges;
    out.update_flags();
    Ok(super::compress_automaton_colors(&out))
}
