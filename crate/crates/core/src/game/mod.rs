//! Max-odd parity games with colors on edges.
//!
//! The controller wins a play iff the largest color seen infinitely often is
//! odd. Uncolored edges are neutral; every cycle must carry a colored edge.

mod brute;
mod zielonka;

use thiserror::Error;

pub use brute::{brute_force_solve, BRUTE_FORCE_LIMIT};
pub use zielonka::solve_game;

use crate::graph::sccs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    Env,
    Ctrl,
}

impl Owner {
    /// The player favored by color `c`.
    pub fn of_color(c: u32) -> Owner {
        if c % 2 == 1 {
            Owner::Ctrl
        } else {
            Owner::Env
        }
    }

    pub fn opponent(self) -> Owner {
        match self {
            Owner::Env => Owner::Ctrl,
            Owner::Ctrl => Owner::Env,
        }
    }
}

/// A game graph: `edges[v]` lists `(color, destination)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    pub owner: Vec<Owner>,
    pub edges: Vec<Vec<(Option<u32>, usize)>>,
    pub initial: usize,
}

impl Game {
    pub fn num_states(&self) -> usize {
        self.owner.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("state {0} has no outgoing edge")]
    DeadEnd(usize),
    #[error("game has {0} vertices, more than the brute-force limit {BRUTE_FORCE_LIMIT}")]
    TooLarge(usize),
}

/// Winning regions and positional strategies (edge indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Vec<Owner>,
    /// Defined on controller states won by the controller.
    pub strategy: Vec<Option<usize>>,
    /// Defined on environment states won by the environment.
    pub env_strategy: Vec<Option<usize>>,
}

impl SolveResult {
    pub fn initial_winner(&self, g: &Game) -> Owner {
        self.winner[g.initial]
    }
}

/// Order- and parity-preserving renumbering onto a minimal range: the
/// smallest value maps to 0 if even and 1 if odd, and each next distinct
/// value keeps the previous number when it has the same parity.
pub fn compress_parities(colors: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut mapped = Vec::with_capacity(distinct.len());
    for (i, &c) in distinct.iter().enumerate() {
        let v = if i == 0 {
            c % 2
        } else {
            let prev: u32 = mapped[i - 1];
            if c % 2 == distinct[i - 1] % 2 {
                prev
            } else {
                prev + 1
            }
        };
        mapped.push(v);
    }
    colors
        .iter()
        .map(|c| mapped[distinct.binary_search(c).expect("present")])
        .collect()
}

/// Checks a solution: winners are consistent with the strategies, the
/// regions are closed for the winner, and every cycle compatible with a
/// winner's strategy inside its region has the winner's parity as maximum.
pub fn validate_solution(g: &Game, r: &SolveResult) -> Result<(), String> {
    for player in [Owner::Ctrl, Owner::Env] {
        let strat = if player == Owner::Ctrl { &r.strategy } else { &r.env_strategy };
        let region: Vec<bool> = r.winner.iter().map(|w| *w == player).collect();
        // restricted graph: winner's states keep their strategy edge
        let mut kept: Vec<Vec<(Option<u32>, usize)>> = vec![Vec::new(); g.num_states()];
        for v in 0..g.num_states() {
            if !region[v] {
                continue;
            }
            if g.owner[v] == player {
                let Some(k) = strat[v] else {
                    return Err(format!("winning state {v} of {player:?} has no strategy"));
                };
                let Some(&e) = g.edges[v].get(k) else {
                    return Err(format!("state {v}: strategy edge {k} does not exist"));
                };
                if !region[e.1] {
                    return Err(format!("state {v}: strategy leaves the winning region"));
                }
                kept[v].push(e);
            } else {
                for &e in &g.edges[v] {
                    if !region[e.1] {
                        return Err(format!("state {v}: opponent escapes the region of {player:?}"));
                    }
                    kept[v].push(e);
                }
            }
        }
        let mut colors: Vec<u32> = kept.iter().flatten().filter_map(|e| e.0).collect();
        colors.sort_unstable();
        colors.dedup();
        // a losing cycle exists iff for some color c of the wrong parity, the
        // subgraph of edges colored at most c has an SCC containing a c-edge
        let wrong: Vec<u32> = colors.into_iter().filter(|c| Owner::of_color(*c) != player).collect();
        let check = |bound: Option<u32>| -> bool {
            let ok = |c: Option<u32>| match (c, bound) {
                (None, _) => true,
                (Some(x), Some(b)) => x <= b,
                (Some(_), None) => false,
            };
            let succ: Vec<Vec<usize>> = kept
                .iter()
                .map(|es| es.iter().filter(|e| ok(e.0)).map(|e| e.1).collect())
                .collect();
            let comps = sccs(&succ, Some(&region));
            for (v, es) in kept.iter().enumerate() {
                for e in es {
                    let top = match bound {
                        Some(b) => e.0 == Some(b),
                        None => e.0.is_none(),
                    };
                    if top && ok(e.0) && region[v] && comps.comp[v] == comps.comp[e.1] {
                        return true;
                    }
                }
            }
            false
        };
        for c in wrong {
            if check(Some(c)) {
                return Err(format!("{player:?} strategy admits a cycle with maximal color {c}"));
            }
        }
        if player == Owner::Ctrl && check(None) {
            return Err("controller strategy admits an uncolored cycle".into());
        }
    }
    Ok(())
}
