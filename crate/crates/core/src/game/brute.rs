//! Reference solver: the classic recursive Zielonka algorithm on the
//! state-based game obtained by turning every edge into a vertex.

use super::{Game, GameError, Owner, SolveResult};

/// Maximum number of vertices (states plus edges) of the expanded game.
pub const BRUTE_FORCE_LIMIT: usize = 1 << 12;

struct Expanded {
    owner: Vec<Owner>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

fn attractor(x: &Expanded, alive: &[bool], player: Owner, target: &[bool], strat: &mut [Option<usize>]) -> Vec<bool> {
    let n = x.owner.len();
    let mut a = target.to_vec();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            if !alive[v] || a[v] {
                continue;
            }
            let live: Vec<usize> = x.succ[v].iter().copied().filter(|w| alive[*w]).collect();
            let take = if x.owner[v] == player {
                live.iter().copied().find(|w| a[*w])
            } else {
                None
            };
            if let Some(w) = take {
                strat[v] = Some(w);
                a[v] = true;
                changed = true;
            } else if x.owner[v] != player && live.iter().all(|w| a[*w]) {
                a[v] = true;
                changed = true;
            }
        }
    }
    for v in 0..n {
        a[v] &= alive[v];
    }
    a
}

/// Returns the region won by the controller; fills `strat` with successor
/// vertices for the winners' states.
fn solve_rec(x: &Expanded, alive: &[bool], strat: &mut [Option<usize>]) -> Vec<bool> {
    let n = x.owner.len();
    let Some(d) = (0..n).filter(|v| alive[*v]).map(|v| x.priority[v]).max() else {
        return vec![false; n];
    };
    let p = Owner::of_color(d);
    let top: Vec<bool> = (0..n).map(|v| alive[v] && x.priority[v] == d).collect();
    // the top vertices of `p` may stay anywhere in the region
    for v in 0..n {
        if top[v] && x.owner[v] == p {
            strat[v] = x.succ[v].iter().copied().find(|w| alive[*w]);
        }
    }
    let a = attractor(x, alive, p, &top, strat);
    let sub: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
    let ctrl1 = solve_rec(x, &sub, strat);
    let won_by = |ctrl: &Vec<bool>, v: usize, who: Owner| -> bool {
        if who == Owner::Ctrl {
            ctrl[v]
        } else {
            !ctrl[v]
        }
    };
    let opp = p.opponent();
    let w_opp: Vec<bool> = (0..n).map(|v| sub[v] && won_by(&ctrl1, v, opp)).collect();
    if !w_opp.iter().any(|b| *b) {
        return (0..n).map(|v| alive[v] && p == Owner::Ctrl).collect();
    }
    let b = attractor(x, alive, opp, &w_opp, strat);
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
    let ctrl2 = solve_rec(x, &rest, strat);
    (0..n).map(|v| alive[v] && if b[v] { opp == Owner::Ctrl } else { ctrl2[v] }).collect()
}

/// Solves `g` through its expansion. Errors when the expansion has more
/// than [`BRUTE_FORCE_LIMIT`] vertices.
pub fn brute_force_solve(g: &Game) -> Result<SolveResult, GameError> {
    let n = g.num_states();
    if let Some(v) = g.edges.iter().position(|es| es.is_empty()) {
        return Err(GameError::DeadEnd(v));
    }
    let total = n + g.edges.iter().map(Vec::len).sum::<usize>();
    if total > BRUTE_FORCE_LIMIT {
        return Err(GameError::TooLarge(total));
    }
    let mut x = Expanded { owner: g.owner.clone(), priority: vec![0; n], succ: vec![Vec::new(); n], pred: Vec::new() };
    let mut edge_vertex: Vec<Vec<usize>> = Vec::new();
    for (v, es) in g.edges.iter().enumerate() {
        let mut ids = Vec::new();
        for &(c, d) in es {
            let id = x.owner.len();
            x.owner.push(Owner::Env);
            x.priority.push(c.unwrap_or(0));
            x.succ.push(vec![d]);
            x.succ[v].push(id);
            ids.push(id);
        }
        edge_vertex.push(ids);
    }
    x.pred = vec![Vec::new(); x.owner.len()];
    for v in 0..x.owner.len() {
        for &w in &x.succ[v].clone() {
            x.pred[w].push(v);
        }
    }
    let alive = vec![true; x.owner.len()];
    let mut strat = vec![None; x.owner.len()];
    let ctrl = solve_rec(&x, &alive, &mut strat);
    let winner: Vec<Owner> = (0..n).map(|v| if ctrl[v] { Owner::Ctrl } else { Owner::Env }).collect();
    let pick = |v: usize| -> Option<usize> {
        let w = strat[v]?;
        edge_vertex[v].iter().position(|id| *id == w)
    };
    let strategy = (0..n).map(|v| (g.owner[v] == Owner::Ctrl && ctrl[v]).then(|| pick(v)).flatten()).collect();
    let env_strategy = (0..n).map(|v| (g.owner[v] == Owner::Env && !ctrl[v]).then(|| pick(v)).flatten()).collect();
    Ok(SolveResult { winner, strategy, env_strategy })
}
