//! Zielonka's algorithm with an explicit work stack, run per strongly
//! connected component in reverse topological order.

use super::{compress_parities, Game, GameError, Owner, SolveResult};
use crate::graph::sccs;

const NONE: usize = usize::MAX;

/// How an edge takes part in an attractor computation.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Absent,
    Plain,
    Target,
}

struct Solver<'a> {
    g: &'a Game,
    /// `preds[v]` lists `(source, edge index)` of the edges entering `v`.
    preds: Vec<Vec<(usize, usize)>>,
    offset: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    winner: Vec<Owner>,
    strat: Vec<usize>,
    // scratch buffers reused by attractors
    in_attr: Vec<bool>,
    good: Vec<bool>,
    count: Vec<usize>,
}

struct Frame {
    states: Vec<usize>,
    bound: Option<u32>,
    resume: Option<Resume>,
}

struct Resume {
    player: Owner,
    attracted: Vec<usize>,
    rest: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Game) -> Solver<'a> {
        let n = g.num_states();
        let mut preds = vec![Vec::new(); n];
        let mut offset = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (v, es) in g.edges.iter().enumerate() {
            offset.push(total);
            total += es.len();
            for (k, e) in es.iter().enumerate() {
                preds[e.1].push((v, k));
            }
        }
        offset.push(total);
        Solver {
            g,
            preds,
            offset,
            stamp: vec![0; n],
            epoch: 0,
            winner: vec![Owner::Env; n],
            strat: vec![NONE; n],
            in_attr: vec![false; n],
            good: vec![false; total],
            count: vec![0; n],
        }
    }

    fn enter(&mut self, states: &[usize]) {
        self.epoch += 1;
        for &v in states {
            self.stamp[v] = self.epoch;
        }
    }

    fn member(&self, v: usize) -> bool {
        self.stamp[v] == self.epoch
    }

    fn in_sub(&self, v: usize, e: (Option<u32>, usize), bound: Option<u32>) -> bool {
        self.member(v) && self.member(e.1) && within(e.0, bound)
    }

    /// States of the current member set from which `player` forces a
    /// target edge or a `seeds` state. Sets the strategy of the attracted
    /// states owned by `player`.
    fn attract(&mut self, states: &[usize], player: Owner, seeds: &[usize], kind: impl Fn(&Self, usize, (Option<u32>, usize)) -> Kind) -> Vec<usize> {
        let g = self.g;
        let mut queue: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = Vec::new();
        for &v in states {
            self.count[v] = 0;
            for (k, &e) in g.edges[v].iter().enumerate() {
                let kd = kind(self, v, e);
                self.good[self.offset[v] + k] = false;
                if kd != Kind::Absent {
                    self.count[v] += 1;
                }
            }
        }
        for &s in seeds {
            if !self.in_attr[s] {
                self.in_attr[s] = true;
                queue.push(s);
                order.push(s);
            }
        }
        let mark = |this: &mut Self, v: usize, k: usize, queue: &mut Vec<usize>, order: &mut Vec<usize>| {
            let id = this.offset[v] + k;
            if this.in_attr[v] || this.good[id] {
                return;
            }
            this.good[id] = true;
            let added = if g.owner[v] == player {
                this.strat[v] = k;
                true
            } else {
                this.count[v] -= 1;
                this.count[v] == 0
            };
            if added {
                this.in_attr[v] = true;
                queue.push(v);
                order.push(v);
            }
        };
        for &v in states {
            for (k, &e) in g.edges[v].iter().enumerate() {
                if kind(self, v, e) == Kind::Target {
                    mark(self, v, k, &mut queue, &mut order);
                }
            }
        }
        while let Some(w) = queue.pop() {
            for i in 0..self.preds[w].len() {
                let (u, k) = self.preds[w][i];
                if self.member(u) && kind(self, u, g.edges[u][k]) != Kind::Absent {
                    mark(self, u, k, &mut queue, &mut order);
                }
            }
        }
        for &v in &order {
            self.in_attr[v] = false;
        }
        order.retain(|v| self.member(*v));
        order
    }

    /// Solves the subgame on `states` (edges colored above `bound` removed).
    fn zielonka(&mut self, states: Vec<usize>) {
        let mut stack = vec![Frame { states, bound: None, resume: None }];
        while let Some(frame) = stack.pop() {
            match frame.resume {
                None => self.start(frame, &mut stack),
                Some(r) => self.resume(frame.states, frame.bound, r, &mut stack),
            }
        }
    }

    fn start(&mut self, frame: Frame, stack: &mut Vec<Frame>) {
        let Frame { states, bound, .. } = frame;
        if states.is_empty() {
            return;
        }
        self.enter(&states);
        let mut colors: Vec<u32> = Vec::new();
        for &v in &states {
            for &e in &self.g.edges[v] {
                if self.in_sub(v, e, bound) {
                    if let Some(c) = e.0 {
                        colors.push(c);
                    }
                }
            }
        }
        colors.sort_unstable();
        colors.dedup();
        let compressed = compress_parities(&colors);
        let single = compressed.first() == compressed.last();
        if single {
            // one parity: uncolored cycles count as even
            let p = colors.last().map_or(Owner::Env, |c| Owner::of_color(*c));
            for &v in &states {
                self.winner[v] = p;
                if self.g.owner[v] == p {
                    let k = self.g.edges[v].iter().position(|&e| self.in_sub(v, e, bound));
                    self.strat[v] = k.expect("subgame states keep an edge");
                }
            }
            return;
        }
        let top = *compressed.last().expect("nonempty");
        let low = colors[compressed.iter().position(|c| *c == top).expect("present")];
        let player = Owner::of_color(top);
        let attracted = self.attract(&states, player, &[], |s, v, e| {
            if !s.in_sub(v, e, bound) {
                Kind::Absent
            } else if e.0.is_some_and(|c| c >= low) {
                Kind::Target
            } else {
                Kind::Plain
            }
        });
        for &v in &attracted {
            self.in_attr[v] = true;
        }
        let rest: Vec<usize> = states.iter().copied().filter(|v| !self.in_attr[*v]).collect();
        for &v in &attracted {
            self.in_attr[v] = false;
        }
        stack.push(Frame { states, bound, resume: Some(Resume { player, attracted, rest: rest.clone() }) });
        stack.push(Frame { states: rest, bound: Some(low - 1), resume: None });
    }

    fn resume(&mut self, states: Vec<usize>, bound: Option<u32>, r: Resume, stack: &mut Vec<Frame>) {
        let opp = r.player.opponent();
        let lost: Vec<usize> = r.rest.iter().copied().filter(|v| self.winner[*v] == opp).collect();
        if lost.is_empty() {
            for &v in &r.attracted {
                self.winner[v] = r.player;
            }
            return;
        }
        self.enter(&states);
        let b = self.attract(&states, opp, &lost, |s, v, e| {
            if s.in_sub(v, e, bound) {
                Kind::Plain
            } else {
                Kind::Absent
            }
        });
        for &v in &b {
            self.winner[v] = opp;
            self.in_attr[v] = true;
        }
        let remaining: Vec<usize> = states.iter().copied().filter(|v| !self.in_attr[*v]).collect();
        for &v in &b {
            self.in_attr[v] = false;
        }
        stack.push(Frame { states: remaining, bound, resume: None });
    }
}

fn within(c: Option<u32>, bound: Option<u32>) -> bool {
    match (c, bound) {
        (Some(c), Some(b)) => c <= b,
        _ => true,
    }
}

/// Solves `g` exactly. Ties between winning edges go to the lowest edge
/// index found first by the attractor or subgame order.
pub fn solve_game(g: &Game) -> Result<SolveResult, GameError> {
    if let Some(v) = g.edges.iter().position(|es| es.is_empty()) {
        return Err(GameError::DeadEnd(v));
    }
    let n = g.num_states();
    let succ: Vec<Vec<usize>> = g.edges.iter().map(|es| es.iter().map(|e| e.1).collect()).collect();
    let comps = sccs(&succ, None);
    let mut s = Solver::new(g);
    let mut solved = vec![false; n];
    for members in &comps.members {
        // attractors into the regions solved in lower components
        let mut decided: Vec<usize> = Vec::new();
        for player in [Owner::Ctrl, Owner::Env] {
            s.enter(members);
            let attracted = s.attract(members, player, &[], |s, _v, e| {
                if s.member(e.1) {
                    Kind::Plain
                } else if solved[e.1] && s.winner[e.1] == player {
                    Kind::Target
                } else {
                    Kind::Plain
                }
            });
            for &v in &attracted {
                s.winner[v] = player;
            }
            decided.extend(attracted);
        }
        for &v in &decided {
            solved[v] = true;
        }
        let rest: Vec<usize> = members.iter().copied().filter(|v| !solved[*v]).collect();
        s.zielonka(rest.clone());
        for v in rest {
            solved[v] = true;
        }
    }
    let mut strategy = vec![None; n];
    let mut env_strategy = vec![None; n];
    for v in 0..n {
        let k = (s.strat[v] != NONE).then_some(s.strat[v]);
        match (g.owner[v], s.winner[v]) {
            (Owner::Ctrl, Owner::Ctrl) => strategy[v] = k,
            (Owner::Env, Owner::Env) => env_strategy[v] = k,
            _ => {}
        }
    }
    Ok(SolveResult { winner: s.winner, strategy, env_strategy })
}
