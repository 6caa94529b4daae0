//! Safra-style determinization with compact trees and transition-based
//! parity colors.
//!
//! Node names encode age: after every step names are compacted to
//! `0..k` preserving order, so an older node always has a smaller name. A
//! step emits the min-even priority `2e+2` when node `e` turns green, `2f+1`
//! when an old node `f` dies, and the neutral `2n+1` otherwise (`n` the
//! number of NBA states, which bounds the tree size). A death outranks a
//! green event of the same name, since compaction reuses names. The max-odd
//! color is `2n+3-p`, and used colors are compressed at the end.

use std::collections::HashMap;

use thiserror::Error;

use crate::automaton::{AccKind, Acceptance, Automaton, ColorSet, Edge};
use crate::label::{refine, Label};

/// Default cap on the number of macro-states.
pub const DEFAULT_STATE_BUDGET: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeterminizeError {
    #[error("determinization exceeded the budget of {0} states")]
    StateBudget(usize),
    #[error("determinization expects Büchi acceptance Inf(0)")]
    NotBuchi,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct StateSet(Vec<u64>);

impl StateSet {
    fn empty(n: usize) -> StateSet {
        StateSet(vec![0; n.div_ceil(64).max(1)])
    }

    fn insert(&mut self, q: usize) {
        self.0[q / 64] |= 1 << (q % 64);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn union_with(&mut self, o: &StateSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a |= b;
        }
    }

    fn intersect_with(&mut self, o: &StateSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= b;
        }
    }

    fn minus_with(&mut self, o: &StateSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }
}

/// A tree node in preorder: `depth` is the distance to the root.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Node {
    depth: u32,
    name: u32,
    label: StateSet,
}

/// Working tree with explicit children.
struct Work {
    name: u32,
    label: StateSet,
    children: Vec<usize>,
    old: bool,
}

fn build(nodes: &[Node]) -> Vec<Work> {
    let mut out: Vec<Work> = Vec::with_capacity(nodes.len());
    let mut path: Vec<usize> = Vec::new();
    for (i, n) in nodes.iter().enumerate() {
        path.truncate(n.depth as usize);
        if let Some(&p) = path.last() {
            out[p].children.push(i);
        }
        out.push(Work { name: n.name, label: n.label.clone(), children: Vec::new(), old: true });
        path.push(i);
    }
    out
}

struct Step<'a> {
    nba: &'a Automaton,
    size: usize,
}

impl Step<'_> {
    /// Successor tree on the letter class represented by `letter`, and the
    /// min-even priority of the step.
    fn run(&self, tree: &[Node], letter: &Label) -> (Vec<Node>, u32) {
        let n = self.size;
        let neutral = 2 * n as u32 + 1;
        if tree.is_empty() {
            return (Vec::new(), neutral);
        }
        let mut w = build(tree);
        let mut next_name = tree.iter().map(|t| t.name + 1).max().unwrap_or(0);
        // successor labels and spawned children
        let old_count = w.len();
        for i in 0..old_count {
            let mut all = StateSet::empty(n);
            let mut acc = StateSet::empty(n);
            for q in w[i].label.iter() {
                for e in &self.nba.edges[q] {
                    if e.label.intersects(letter) {
                        all.insert(e.dst);
                        if e.colors.contains(0) {
                            acc.insert(e.dst);
                        }
                    }
                }
            }
            w[i].label = all;
            if !acc.is_empty() {
                let id = w.len();
                w.push(Work { name: next_name, label: acc, children: Vec::new(), old: false });
                next_name += 1;
                w[i].children.push(id);
            }
        }
        // horizontal merge: a state stays with the oldest sibling
        fn restrict(w: &mut Vec<Work>, i: usize, allowed: &StateSet) {
            w[i].label.intersect_with(allowed);
            let mut remaining = w[i].label.clone();
            let children = w[i].children.clone();
            for c in children {
                restrict(w, c, &remaining);
                let taken = w[c].label.clone();
                remaining.minus_with(&taken);
            }
        }
        let root_label = w[0].label.clone();
        restrict(&mut w, 0, &root_label);

        let mut red: Option<u32> = None;
        let mut green: Option<u32> = None;
        let mut out: Vec<Node> = Vec::new();
        // remove empty nodes, then vertical merge, emitting preorder
        fn emit(
            w: &Vec<Work>,
            i: usize,
            depth: u32,
            out: &mut Vec<Node>,
            red: &mut Option<u32>,
            green: &mut Option<u32>,
        ) {
            if w[i].label.is_empty() {
                mark_dead(w, i, red);
                return;
            }
            let mut union = StateSet(vec![0; w[i].label.0.len()]);
            for &c in &w[i].children {
                union.union_with(&w[c].label);
            }
            if !w[i].children.is_empty() && union == w[i].label {
                *green = Some(green.map_or(w[i].name, |g| g.min(w[i].name)));
                out.push(Node { depth, name: w[i].name, label: w[i].label.clone() });
                return;
            }
            out.push(Node { depth, name: w[i].name, label: w[i].label.clone() });
            for &c in &w[i].children {
                emit(w, c, depth + 1, out, red, green);
            }
        }
        fn mark_dead(w: &Vec<Work>, i: usize, red: &mut Option<u32>) {
            if w[i].old {
                *red = Some(red.map_or(w[i].name, |r| r.min(w[i].name)));
            }
            for &c in &w[i].children {
                mark_dead(w, c, red);
            }
        }
        emit(&w, 0, 0, &mut out, &mut red, &mut green);

        let mut p = neutral;
        if let Some(g) = green {
            p = p.min(2 * g + 2);
        }
        if let Some(r) = red {
            p = p.min(2 * r + 1);
        }
        // compact names preserving age order
        let mut names: Vec<u32> = out.iter().map(|n| n.name).collect();
        names.sort_unstable();
        for node in &mut out {
            node.name = names.binary_search(&node.name).expect("present") as u32;
        }
        (out, p)
    }
}

/// Deterministic complete max-odd parity automaton equivalent to the
/// Büchi automaton `nba`, with at most `budget` states.
pub fn determinize_nba(nba: &Automaton, budget: usize) -> Result<Automaton, DeterminizeError> {
    if nba.acceptance.kind != AccKind::Buchi || nba.acceptance.cond != crate::automaton::AccCond::Inf(0) {
        return Err(DeterminizeError::NotBuchi);
    }
    let n = nba.num_states();
    let step = Step { nba, size: n };
    let mut init = StateSet::empty(n);
    init.insert(nba.initial);
    let start = vec![Node { depth: 0, name: 0, label: init }];
    let mut index: HashMap<Vec<Node>, usize> = HashMap::new();
    let mut states = vec![start.clone()];
    index.insert(start, 0);
    let mut edges: Vec<Vec<(Label, u32, usize)>> = Vec::new();
    let top = 2 * n as u32 + 3;
    let mut i = 0;
    while i < states.len() {
        let tree = states[i].clone();
        let mut labels: Vec<Label> = Vec::new();
        if let Some(root) = tree.first() {
            for q in root.label.iter() {
                for e in &nba.edges[q] {
                    if !labels.contains(&e.label) {
                        labels.push(e.label.clone());
                    }
                }
            }
        }
        let mut out: Vec<(Label, u32, usize)> = Vec::new();
        for letter in refine(&labels) {
            let (succ, p) = step.run(&tree, &letter);
            let color = top - p;
            let dst = match index.get(&succ) {
                Some(&d) => d,
                None => {
                    if states.len() >= budget {
                        return Err(DeterminizeError::StateBudget(budget));
                    }
                    states.push(succ.clone());
                    index.insert(succ, states.len() - 1);
                    states.len() - 1
                }
            };
            match out.iter_mut().find(|(_, c, d)| *c == color && *d == dst) {
                Some(slot) => slot.0 = slot.0.or(&letter),
                None => out.push((letter, color, dst)),
            }
        }
        edges.push(out);
        i += 1;
    }
    // raw priorities may exceed the color range; compress them first
    let mut used: Vec<u32> = edges.iter().flatten().map(|e| e.1).collect();
    used.sort_unstable();
    used.dedup();
    let compressed = crate::game::compress_parities(&used);
    let k = compressed.iter().max().map_or(1, |m| m + 1);
    let mut a = Automaton::new(nba.aps.clone(), states.len(), Acceptance::parity_max_odd(k));
    for (s, es) in edges.into_iter().enumerate() {
        a.edges[s] = es
            .into_iter()
            .map(|(label, c, dst)| {
                let color = compressed[used.binary_search(&c).expect("collected")];
                Edge { label, colors: ColorSet::single(color), dst }
            })
            .collect();
    }
    a.update_flags();
    Ok(a)
}
