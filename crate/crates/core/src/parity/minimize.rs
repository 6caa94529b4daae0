use std::collections::HashMap;

use crate::automaton::{Acceptance, Automaton, ColorSet, Edge};
use crate::graph::sccs;
use crate::label::Label;

/// The color of an edge of a parity automaton whose edges all carry one
/// color (see [`super::compress_automaton_colors`]).
pub fn parity_color(e: &Edge) -> u32 {
    e.colors.max().unwrap_or(0)
}

/// Minimal recoloring of a parity automaton on the same structure.
///
/// Bottom-up over nested SCCs: in an SCC whose maximal color is `m`, the
/// edges below `m` are handled first; the `m`-colored edges then take the
/// smallest value of parity `m` not below the inner maximum. Edges on no
/// cycle of their level take that level's top value, and edges on no cycle
/// at all take the smallest color used. The smallest value may be even or
/// odd; both choices are computed and the one with fewer colors is kept.
pub fn minimize_colors(a: &Automaton) -> Automaton {
    let a = &super::compress_automaton_colors(a);
    let edge_ids: Vec<(usize, usize)> = a
        .edges
        .iter()
        .enumerate()
        .flat_map(|(s, es)| (0..es.len()).map(move |k| (s, k)))
        .collect();
    let even = Levels { a, edge_ids: &edge_ids, shift: 0 }.assign();
    // start from an odd value: flip every parity, then shift back
    let odd: Vec<u32> = Levels { a, edge_ids: &edge_ids, shift: 1 }.assign().into_iter().map(|v| v + 1).collect();
    let distinct = |v: &[u32]| {
        let mut d = v.to_vec();
        d.sort_unstable();
        d.dedup();
        d.len()
    };
    let value = if distinct(&odd) < distinct(&even) { odd } else { even };
    let mut out = a.clone();
    for (i, &(s, k)) in edge_ids.iter().enumerate() {
        out.edges[s][k].colors = ColorSet::single(value[i]);
    }
    out.acceptance = Acceptance::parity_max_odd(out.used_color_bound().max(1));
    out
}

struct Levels<'a> {
    a: &'a Automaton,
    edge_ids: &'a [(usize, usize)],
    /// Added to every color before assignment.
    shift: u32,
}

impl Levels<'_> {
    fn assign(&self) -> Vec<u32> {
        let mut value: Vec<Option<u32>> = vec![None; self.edge_ids.len()];
        let (_, acyclic) = self.level((0..self.edge_ids.len()).collect(), &mut value);
        let min_used = value.iter().flatten().copied().min().unwrap_or(0);
        for e in acyclic {
            value[e] = Some(min_used);
        }
        value.into_iter().map(|v| v.unwrap_or(min_used)).collect()
    }

    fn color(&self, e: usize) -> u32 {
        parity_color(self.edge(e)) + self.shift
    }

    fn edge(&self, i: usize) -> &Edge {
        let (s, k) = self.edge_ids[i];
        &self.a.edges[s][k]
    }

    /// Assigns the edges of `edges` lying on a cycle; returns the largest
    /// value assigned and the edges on no cycle of this level. Recursion
    /// depth is bounded by the number of colors.
    fn level(&self, edges: Vec<usize>, value: &mut [Option<u32>]) -> (Option<u32>, Vec<usize>) {
        let mut succ = vec![Vec::new(); self.a.num_states()];
        for &e in &edges {
            succ[self.edge_ids[e].0].push(self.edge(e).dst);
        }
        let comps = sccs(&succ, None);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        let mut acyclic = Vec::new();
        for &e in &edges {
            let (cs, cd) = (comps.comp[self.edge_ids[e].0], comps.comp[self.edge(e).dst]);
            if cs == cd {
                groups[cs].push(e);
            } else {
                acyclic.push(e);
            }
        }
        let mut best: Option<u32> = None;
        for g in groups.into_iter().filter(|g| !g.is_empty()) {
            let m = g.iter().map(|&e| self.color(e)).max().expect("nonempty");
            let (top, inner): (Vec<usize>, Vec<usize>) = g.into_iter().partition(|&e| self.color(e) == m);
            let (inner_max, inner_acyclic) = self.level(inner, value);
            let v = match inner_max {
                None => m % 2,
                Some(x) if x % 2 == m % 2 => x,
                Some(x) => x + 1,
            };
            for e in top.into_iter().chain(inner_acyclic) {
                value[e] = Some(v);
            }
            best = Some(best.map_or(v, |b| b.max(v)));
        }
        (best, acyclic)
    }
}

/// Merges states with identical rows of `(label, colors, destination)`
/// until a fixpoint; the representative of a class is its smallest state.
pub fn merge_identical_successors(a: &Automaton) -> Automaton {
    merge_identical_successors_by(a, |_| 0)
}

/// Like [`merge_identical_successors`], never merging states with a
/// different `class`.
pub fn merge_identical_successors_by(a: &Automaton, class: impl Fn(usize) -> u32) -> Automaton {
    let n = a.num_states();
    let mut rep: Vec<usize> = (0..n).collect();
    loop {
        let mut seen: HashMap<(u32, Vec<(usize, ColorSet, Label)>), usize> = HashMap::new();
        let mut changed = false;
        let mut next = rep.clone();
        for s in 0..n {
            if rep[s] != s {
                continue;
            }
            let key = (class(s), row(a, s, &rep));
            match seen.get(&key) {
                Some(&r) => {
                    next[s] = r;
                    changed = true;
                }
                None => {
                    seen.insert(key, s);
                }
            }
        }
        if !changed {
            break;
        }
        // path-compress through representatives
        for s in 0..n {
            let mut r = next[s];
            while next[r] != r {
                r = next[r];
            }
            next[s] = r;
        }
        rep = next;
    }
    let mut out = a.clone();
    out.initial = rep[a.initial];
    for s in 0..n {
        let mut es: Vec<Edge> = Vec::new();
        for (dst, colors, label) in row(a, s, &rep) {
            es.push(Edge { label, colors, dst });
        }
        out.edges[s] = if rep[s] == s { es } else { Vec::new() };
    }
    let keep: Vec<bool> = (0..n).map(|s| rep[s] == s).collect();
    let mut out = out.restrict(&keep);
    out.update_flags();
    out.trim()
}

/// Canonical row of state `s` with destinations mapped through `rep`:
/// labels of edges with equal colors and destination are joined.
fn row(a: &Automaton, s: usize, rep: &[usize]) -> Vec<(usize, ColorSet, Label)> {
    let mut groups: Vec<(usize, ColorSet, Label)> = Vec::new();
    for e in &a.edges[s] {
        let d = rep[e.dst];
        match groups.iter_mut().find(|(gd, gc, _)| *gd == d && *gc == e.colors) {
            Some(g) => g.2 = g.2.or(&e.label),
            None => groups.push((d, e.colors, e.label.clone())),
        }
    }
    groups.sort();
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{complement_parity, is_empty, product};

    fn equivalent(a: &Automaton, b: &Automaton) -> bool {
        is_empty(&product(a, &complement_parity(b).unwrap()).unwrap())
            && is_empty(&product(b, &complement_parity(a).unwrap()).unwrap())
    }

    fn colors(a: &Automaton) -> Vec<u32> {
        let mut v: Vec<u32> = a.edges.iter().flatten().map(parity_color).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn two_state(c: [u32; 4]) -> Automaton {
        let mut a = Automaton::new(vec!["x".into()], 2, Acceptance::parity_max_odd(c.iter().max().unwrap() + 1));
        let x = Label::literal(0, true);
        a.add_edge(0, x.clone(), ColorSet::single(c[0]), 0);
        a.add_edge(0, x.not(), ColorSet::single(c[1]), 1);
        a.add_edge(1, x.clone(), ColorSet::single(c[2]), 0);
        a.add_edge(1, x.not(), ColorSet::single(c[3]), 1);
        a.update_flags();
        a
    }

    #[test]
    fn all_even_collapses_to_zero() {
        let m = minimize_colors(&two_state([2, 4, 0, 2]));
        assert_eq!(colors(&m), vec![0]);
    }

    #[test]
    fn all_odd_collapses_to_one() {
        let m = minimize_colors(&two_state([1, 1, 3, 5]));
        assert_eq!(colors(&m), vec![1]);
    }

    #[test]
    fn alternation_is_kept() {
        let a = two_state([4, 3, 3, 2]);
        let m = minimize_colors(&a);
        assert!(equivalent(&a, &m));
        assert_eq!(colors(&m).len(), 3);
        assert_eq!(minimize_colors(&m), m);
    }

    #[test]
    fn duplicate_sinks_merge() {
        let mut a = Automaton::new(vec![], 3, Acceptance::parity_max_odd(2));
        a.add_edge(0, Label::tt(), ColorSet::single(0), 1);
        a.add_edge(1, Label::tt(), ColorSet::single(1), 2);
        a.add_edge(2, Label::tt(), ColorSet::single(1), 2);
        a.update_flags();
        let m = merge_identical_successors(&a);
        // 1 and 2 both loop into the same class once merged
        assert_eq!(m.num_states(), 2);
        assert!(equivalent(&a, &m));
        assert_eq!(merge_identical_successors(&m), m);
    }

    #[test]
    fn fixpoint_exposes_second_pair() {
        // 0 -> 2, 1 -> 3, 2 and 3 are identical sinks: merging them makes 0, 1 identical
        let mut a = Automaton::new(vec![], 5, Acceptance::parity_max_odd(2));
        a.add_edge(4, Label::tt(), ColorSet::single(0), 0);
        a.add_edge(0, Label::tt(), ColorSet::single(0), 2);
        a.add_edge(1, Label::tt(), ColorSet::single(0), 3);
        a.add_edge(2, Label::tt(), ColorSet::single(1), 2);
        a.add_edge(3, Label::tt(), ColorSet::single(1), 3);
        a.initial = 4;
        a.update_flags();
        let m = merge_identical_successors_by(&a, |_| 0);
        assert_eq!(m.num_states(), 3);
        let unchanged = merge_identical_successors(&m);
        assert_eq!(unchanged, m);
    }
}
