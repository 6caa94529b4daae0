//! Deterministic parity automata: determinization of Büchi automata,
//! paritization of deterministic Emerson–Lei automata, color minimization
//! and merging of states with identical successors.

mod car;
mod minimize;
mod safra;

pub use car::{car_paritize, CarError, CAR_COLOR_BUDGET};
pub use minimize::{merge_identical_successors, merge_identical_successors_by, minimize_colors, parity_color};
pub use safra::{determinize_nba, DeterminizeError, DEFAULT_STATE_BUDGET};

use crate::automaton::{Acceptance, Automaton, ColorSet};

/// Renumbers the colors of a parity automaton onto a contiguous range
/// starting at 0 or 1, preserving order and parity. Uncolored edges rank
/// below every color with odd parity, so afterwards every edge carries
/// exactly one color.
pub fn compress_automaton_colors(a: &Automaton) -> Automaton {
    let rank = |e: &crate::automaton::Edge| e.colors.max().map_or(1, |c| c + 2);
    let mut used: Vec<u32> = a.edges.iter().flatten().map(rank).collect();
    used.sort_unstable();
    used.dedup();
    let mapped = crate::game::compress_parities(&used);
    let mut out = a.clone();
    let mut top = 0;
    for es in &mut out.edges {
        for e in es {
            let v = mapped[used.binary_search(&rank(e)).expect("used rank")];
            top = top.max(v);
            e.colors = ColorSet::single(v);
        }
    }
    out.acceptance = Acceptance::parity_max_odd(top + 1);
    out
}
