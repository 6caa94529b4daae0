//! Transition-based omega-automata with Emerson–Lei acceptance, HOA text
//! I/O, and the product, complement, emptiness and lasso-membership oracles.

mod acceptance;
mod emptiness;
mod hoa;
mod ops;

use std::fmt;

use thiserror::Error;

use crate::label::{Cube, Label};

pub use acceptance::{AccCond, AccKind, Acceptance};
pub use emptiness::{accepting_cycle_exists, is_empty, try_is_empty, ColoredGraph, EmptinessError, COLOR_BUDGET};
pub use hoa::{parse_hoa, print_hoa, HoaError};
pub use ops::{accepts_lasso, complement_deterministic, complement_parity, product, OpError};

/// A set of colors `< 64`, as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColorSet(pub u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);
    pub const MAX_COLORS: u32 = 64;

    pub fn single(c: u32) -> ColorSet {
        assert!(c < Self::MAX_COLORS, "color {c} out of range");
        ColorSet(1 << c)
    }

    pub fn from_colors(cs: impl IntoIterator<Item = u32>) -> ColorSet {
        cs.into_iter().fold(ColorSet::EMPTY, |acc, c| acc.union(ColorSet::single(c)))
    }

    pub fn contains(self, c: u32) -> bool {
        c < Self::MAX_COLORS && self.0 >> c & 1 == 1
    }

    pub fn insert(&mut self, c: u32) {
        *self = self.union(ColorSet::single(c));
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersect(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn minus(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn max(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn min(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (0..Self::MAX_COLORS).filter(move |&c| self.contains(c))
    }

    pub fn map(self, f: impl Fn(u32) -> u32) -> ColorSet {
        ColorSet::from_colors(self.iter().map(f))
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: Label,
    pub colors: ColorSet,
    pub dst: usize,
}

/// An edge-labeled omega-automaton. Labels are over `aps` (variable `k` is
/// `aps[k]`), colors live on edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    pub aps: Vec<String>,
    pub initial: usize,
    pub edges: Vec<Vec<Edge>>,
    pub acceptance: Acceptance,
    /// Out-edge labels of every state are pairwise disjoint.
    pub deterministic: bool,
    /// Out-edge labels of every state cover all assignments.
    pub complete: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("proposition `{0}` is missing from the target alphabet")]
    Missing(String),
    #[error("alphabet exceeds {} propositions", crate::label::MAX_VARS)]
    TooLarge,
}

impl Automaton {
    /// An automaton with `num_states` edgeless states.
    pub fn new(aps: Vec<String>, num_states: usize, acceptance: Acceptance) -> Automaton {
        assert!(aps.len() <= crate::label::MAX_VARS);
        let mut a = Automaton {
            aps,
            initial: 0,
            edges: vec![Vec::new(); num_states.max(1)],
            acceptance,
            deterministic: true,
            complete: false,
        };
        a.update_flags();
        a
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn add_state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    /// Adds an edge; unsatisfiable labels are dropped. Flags are not updated.
    pub fn add_edge(&mut self, src: usize, label: Label, colors: ColorSet, dst: usize) {
        if label.is_sat() {
            self.edges[src].push(Edge { label, colors, dst });
        }
    }

    /// Mask of all alphabet variables.
    pub fn ap_mask(&self) -> u64 {
        if self.aps.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.aps.len()) - 1
        }
    }

    pub fn compute_deterministic(&self) -> bool {
        self.edges.iter().all(|es| {
            es.iter()
                .enumerate()
                .all(|(i, e)| es[i + 1..].iter().all(|f| !e.label.intersects(&f.label)))
        })
    }

    pub fn compute_complete(&self) -> bool {
        self.edges.iter().all(|es| {
            es.iter().fold(Label::ff(), |acc, e| acc.or(&e.label)).is_true()
        })
    }

    /// Recomputes the stored determinism and completeness flags.
    pub fn update_flags(&mut self) {
        self.deterministic = self.compute_deterministic();
        self.complete = self.compute_complete();
    }

    /// Stored flags agree with the structure.
    pub fn flags_consistent(&self) -> bool {
        self.deterministic == self.compute_deterministic() && self.complete == self.compute_complete()
    }

    /// Largest color used on any edge, plus one.
    pub fn used_color_bound(&self) -> u32 {
        self.edges
            .iter()
            .flatten()
            .filter_map(|e| e.colors.max())
            .max()
            .map_or(0, |m| m + 1)
    }

    /// State adjacency lists (with repetitions for parallel edges).
    pub fn successors(&self) -> Vec<Vec<usize>> {
        self.edges.iter().map(|es| es.iter().map(|e| e.dst).collect()).collect()
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if !seen[e.dst] {
                    seen[e.dst] = true;
                    stack.push(e.dst);
                }
            }
        }
        seen
    }

    /// Keeps only states marked in `keep` (which must include the initial
    /// state), renumbered in ascending order. Edges to dropped states vanish.
    pub fn restrict(&self, keep: &[bool]) -> Automaton {
        assert!(keep[self.initial]);
        let mut map = vec![usize::MAX; self.num_states()];
        let mut n = 0;
        for (s, &k) in keep.iter().enumerate() {
            if k {
                map[s] = n;
                n += 1;
            }
        }
        let mut out = Automaton::new(self.aps.clone(), n, self.acceptance.clone());
        out.initial = map[self.initial];
        for (s, es) in self.edges.iter().enumerate() {
            if !keep[s] {
                continue;
            }
            for e in es {
                if keep[e.dst] {
                    out.edges[map[s]].push(Edge { label: e.label.clone(), colors: e.colors, dst: map[e.dst] });
                }
            }
        }
        out.update_flags();
        out
    }

    /// Drops unreachable states.
    pub fn trim(&self) -> Automaton {
        self.restrict(&self.reachable())
    }

    /// Renumbers reachable states in breadth-first order from the initial
    /// state, following edge order.
    pub fn bfs_normalize(&self) -> Automaton {
        let mut order = vec![self.initial];
        let mut map = vec![usize::MAX; self.num_states()];
        map[self.initial] = 0;
        let mut k = 0;
        while k < order.len() {
            let s = order[k];
            k += 1;
            for e in &self.edges[s] {
                if map[e.dst] == usize::MAX {
                    map[e.dst] = order.len();
                    order.push(e.dst);
                }
            }
        }
        let mut out = Automaton::new(self.aps.clone(), order.len(), self.acceptance.clone());
        for (i, &s) in order.iter().enumerate() {
            out.edges[i] = self.edges[s]
                .iter()
                .map(|e| Edge { label: e.label.clone(), colors: e.colors, dst: map[e.dst] })
                .collect();
        }
        out.update_flags();
        out
    }

    /// Adds, where needed, edges to a fresh sink whose self-loop carries
    /// `sink_colors`. Returns the automaton unchanged if already complete.
    pub fn complete_with_sink(&self, sink_colors: ColorSet) -> Automaton {
        if self.complete {
            return self.clone();
        }
        let mut out = self.clone();
        let sink = out.add_state();
        for s in 0..sink {
            let covered = out.edges[s].iter().fold(Label::ff(), |acc, e| acc.or(&e.label));
            let missing = covered.not();
            if missing.is_sat() {
                out.edges[s].push(Edge { label: missing, colors: sink_colors, dst: sink });
            }
        }
        out.edges[sink].push(Edge { label: Label::tt(), colors: sink_colors, dst: sink });
        out.update_flags();
        out
    }

    /// Re-expresses labels over the alphabet `aps`, which must contain every
    /// proposition of `self.aps`.
    pub fn with_aps(&self, aps: &[String]) -> Result<Automaton, AlphabetError> {
        if aps.len() > crate::label::MAX_VARS {
            return Err(AlphabetError::TooLarge);
        }
        let mut map = Vec::with_capacity(self.aps.len());
        for a in &self.aps {
            map.push(aps.iter().position(|b| b == a).ok_or_else(|| AlphabetError::Missing(a.clone()))?);
        }
        let mut out = self.clone();
        out.aps = aps.to_vec();
        for es in &mut out.edges {
            for e in es {
                e.label = remap_label(&e.label, &map);
            }
        }
        out.update_flags();
        Ok(out)
    }

    /// Renders the automaton as HOA text.
    pub fn to_hoa(&self) -> String {
        print_hoa(self)
    }
}

/// Renames label variable `k` to `map[k]`.
pub fn remap_label(l: &Label, map: &[usize]) -> Label {
    Label::from_cubes(l.cubes().iter().map(|c| {
        let mut pos = 0u64;
        let mut neg = 0u64;
        for (v, positive) in c.literals() {
            if positive {
                pos |= 1 << map[v];
            } else {
                neg |= 1 << map[v];
            }
        }
        Cube::new(pos, neg).expect("injective renaming keeps cubes consistent")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aps(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn color_set_basics() {
        let s = ColorSet::from_colors([0, 3, 5]);
        assert_eq!(s.max(), Some(5));
        assert_eq!(s.min(), Some(0));
        assert_eq!(s.len(), 3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(ColorSet::EMPTY.max().is_none());
    }

    #[test]
    fn flags_and_completion() {
        let mut a = Automaton::new(aps(1), 1, Acceptance::buchi());
        a.add_edge(0, Label::literal(0, true), ColorSet::single(0), 0);
        a.update_flags();
        assert!(a.deterministic);
        assert!(!a.complete);
        let c = a.complete_with_sink(ColorSet::EMPTY);
        assert!(c.complete && c.deterministic);
        assert_eq!(c.num_states(), 2);
        assert!(c.flags_consistent());
    }

    #[test]
    fn alphabet_extension() {
        let mut a = Automaton::new(vec!["b".into()], 1, Acceptance::all());
        a.add_edge(0, Label::literal(0, true), ColorSet::EMPTY, 0);
        let b = a.with_aps(&["a".into(), "b".into()]).unwrap();
        assert_eq!(b.edges[0][0].label, Label::literal(1, true));
        assert!(a.with_aps(&["a".into()]).is_err());
    }
}
