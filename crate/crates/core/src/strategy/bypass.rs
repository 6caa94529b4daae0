//! Strategies read off a deterministic Büchi automaton, without a game,
//! for specifications `G(b1) & (phi <-> G F b2)` with `phi` over inputs.

use thiserror::Error;

use super::{MealyMachine, MealyTransition};
use crate::graph::sccs;
use crate::label::{refine, Label};
use crate::ltl::{BypassPattern, SignalPartition};
use crate::parity::DeterminizeError;
use crate::translate::{boolean_label, ltl_to_dba_if_recurrence};

#[derive(Debug, Error)]
pub enum BypassError {
    #[error("pattern side conditions do not hold")]
    InvalidPattern,
    #[error("phi is not recognized as a recurrence property")]
    NotRecurrence,
    #[error("an always-accepting edge cannot emit b2; the game decides")]
    Inconclusive,
    #[error(transparent)]
    Determinize(#[from] DeterminizeError),
}

/// How an automaton edge can occur on cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    /// On some cycle without accepting edges.
    Rejecting,
    /// On cycles, all of them accepting.
    Accepting,
    /// On no cycle.
    Transient,
}

/// Classes of the edges of a Büchi automaton (acceptance `Inf(0)`).
pub fn classify_edges(a: &crate::automaton::Automaton) -> Vec<Vec<EdgeClass>> {
    let all = sccs(&a.successors(), None);
    let plain: Vec<Vec<usize>> = a
        .edges
        .iter()
        .map(|es| es.iter().filter(|e| !e.colors.contains(0)).map(|e| e.dst).collect())
        .collect();
    let rejecting = sccs(&plain, None);
    a.edges
        .iter()
        .enumerate()
        .map(|(s, es)| {
            es.iter()
                .map(|e| {
                    if all.comp[s] != all.comp[e.dst] {
                        EdgeClass::Transient
                    } else if !e.colors.contains(0) && rejecting.comp[s] == rejecting.comp[e.dst] {
                        EdgeClass::Rejecting
                    } else {
                        EdgeClass::Accepting
                    }
                })
                .collect()
        })
        .collect()
}

/// Decides the pattern directly. Each edge of a deterministic Büchi
/// automaton for `phi` is conjoined with `b1 & !b2` if it lies on a
/// rejecting cycle, `b1 & b2` if every cycle through it is accepting, and
/// `b1` if it is on no cycle. An empty constraint on a rejecting or
/// transient edge makes the specification unrealizable; on an accepting
/// edge the result is inconclusive.
pub fn bypass_strategy(pattern: &BypassPattern, p: &SignalPartition) -> Result<(bool, Option<MealyMachine>), BypassError> {
    if !pattern.is_valid(p) {
        return Err(BypassError::InvalidPattern);
    }
    let aps = p.alphabet();
    let (phi, b2) = pattern.recurrence_form();
    let b1 = boolean_label(&pattern.b1, &aps).ok_or(BypassError::InvalidPattern)?;
    let b2 = boolean_label(&b2, &aps).ok_or(BypassError::InvalidPattern)?;
    let dba = ltl_to_dba_if_recurrence(&phi, &aps)?.ok_or(BypassError::NotRecurrence)?;
    let classes = classify_edges(&dba);
    let inputs = p.input_mask(&aps);
    let outputs = p.output_mask(&aps);
    let mut m = MealyMachine::new(aps, inputs, outputs, dba.num_states());
    m.initial = dba.initial;
    let mut unrealizable = false;
    for (s, es) in dba.edges.iter().enumerate() {
        for (e, class) in es.iter().zip(&classes[s]) {
            let constraint = match class {
                EdgeClass::Rejecting => b1.and(&b2.not()),
                EdgeClass::Accepting => b1.and(&b2),
                EdgeClass::Transient => b1.clone(),
            };
            let full = e.label.and(&constraint);
            let input_parts: Vec<Label> =
                full.cubes().iter().map(|c| Label::from_cube(c.forget(outputs))).collect();
            let covered = input_parts.iter().fold(Label::ff(), |acc, l| acc.or(l));
            let missing = e.label.and_not(&covered);
            if missing.is_sat() {
                let b1_fails = missing.and_not(&e.label.and(&b1).exists(outputs)).is_sat();
                if *class == EdgeClass::Accepting && !b1_fails {
                    return Err(BypassError::Inconclusive);
                }
                unrealizable = true;
                continue;
            }
            for region in refine(&input_parts) {
                let region = region.and(&e.label);
                if region.is_false() {
                    continue;
                }
                let out = Label::from_cubes(
                    full.cubes()
                        .iter()
                        .filter(|c| region.intersects(&Label::from_cube(c.forget(outputs))))
                        .map(|c| c.forget(inputs)),
                );
                match m.transitions[s].iter_mut().find(|t| t.output == out && t.dst == e.dst) {
                    Some(t) => t.input = t.input.or(&region),
                    None => m.transitions[s].push(MealyTransition { input: region, output: out, dst: e.dst }),
                }
            }
        }
    }
    if unrealizable {
        return Ok((false, None));
    }
    Ok((true, Some(m.trim())))
}
