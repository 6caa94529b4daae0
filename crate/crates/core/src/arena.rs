//! Bipartite game arenas obtained by splitting automaton edges into an
//! environment half reading inputs and a controller half choosing outputs.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Automaton, ColorSet, Edge};
use crate::game::{Game, Owner};
use crate::label::{refine, Cube, Label};
use crate::parity::{merge_identical_successors_by, minimize_colors};
use crate::strategy::{MealyMachine, MealyTransition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("state {0} is not complete: splitting needs a complete automaton")]
    Incomplete(usize),
    #[error("state {0} is reached both on environment and controller turns")]
    NotBipartite(usize),
    #[error("controller state {0} has no strategy")]
    MissingChoice(usize),
    #[error("state {0}: {1}")]
    Malformed(usize, String),
}

/// An arena: an automaton over `inputs ∪ outputs` whose states alternate
/// between the environment (labels over inputs) and the controller (labels
/// over outputs). Split arenas carry colors on controller edges only;
/// determinized ones may color both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    pub automaton: Automaton,
    pub owner: Vec<Owner>,
    pub inputs: u64,
    pub outputs: u64,
}

impl Arena {
    pub fn num_states(&self) -> usize {
        self.owner.len()
    }

    pub fn initial(&self) -> usize {
        self.automaton.initial
    }

    /// Game graph with one color per edge (the largest of its set).
    pub fn to_game(&self) -> Game {
        Game {
            owner: self.owner.clone(),
            edges: self
                .automaton
                .edges
                .iter()
                .map(|es| es.iter().map(|e| (e.colors.max(), e.dst)).collect())
                .collect(),
            initial: self.automaton.initial,
        }
    }

    /// Checks alternation and label supports.
    pub fn check(&self) -> Result<(), ArenaError> {
        if self.owner[self.initial()] != Owner::Env {
            return Err(ArenaError::Malformed(self.initial(), "initial state is not an environment state".into()));
        }
        for (s, es) in self.automaton.edges.iter().enumerate() {
            if es.is_empty() {
                return Err(ArenaError::Malformed(s, "no outgoing edge".into()));
            }
            let side = if self.owner[s] == Owner::Env { self.inputs } else { self.outputs };
            for e in es {
                if self.owner[e.dst] == self.owner[s] {
                    return Err(ArenaError::NotBipartite(e.dst));
                }
                if e.label.support() & !side != 0 {
                    return Err(ArenaError::Malformed(s, "label mentions the wrong side".into()));
                }
            }
        }
        Ok(())
    }

    /// Minimal recoloring. Uncolored environment edges stay uncolored:
    /// no cycle consists of environment edges only, so a recolored
    /// environment edge takes the value of a controller edge dominating it
    /// on every cycle, and dropping that color is harmless.
    pub fn minimize_colors(&self) -> Arena {
        let env_plain = self
            .automaton
            .edges
            .iter()
            .enumerate()
            .all(|(s, es)| self.owner[s] == Owner::Ctrl || es.iter().all(|e| e.colors.is_empty()));
        let mut automaton = minimize_colors(&self.automaton);
        for (s, es) in automaton.edges.iter_mut().enumerate() {
            if env_plain && self.owner[s] == Owner::Env {
                for e in es {
                    e.colors = ColorSet::EMPTY;
                }
            }
        }
        Arena { automaton, ..self.clone() }
    }

    /// Merges states with the same owner and identical successors.
    pub fn merge_identical_successors(&self) -> Arena {
        let owner = &self.owner;
        let merged = merge_identical_successors_by(&self.automaton, |s| owner[s] as u32);
        // merging keeps the arena alternating from its initial state
        let owner = owners_by_alternation(&merged).expect("merge preserves alternation");
        Arena { automaton: merged, owner, inputs: self.inputs, outputs: self.outputs }
    }

    /// PGSolver-like listing: `id owner dst:color,... "labels";` with owner 0
    /// for the environment and 1 for the controller, `-` for no color.
    pub fn debug_dump(&self) -> String {
        let a = &self.automaton;
        let mut s = String::new();
        let _ = writeln!(s, "arena {} start {};", self.num_states(), a.initial);
        for (q, es) in a.edges.iter().enumerate() {
            let succ: Vec<String> = es
                .iter()
                .map(|e| match e.colors.max() {
                    Some(c) => format!("{}:{}", e.dst, c),
                    None => format!("{}:-", e.dst),
                })
                .collect();
            let labels: Vec<String> = es.iter().map(|e| e.label.display_with(&a.aps).to_string()).collect();
            let _ = writeln!(
                s,
                "{q} {} {} \"{}\";",
                u8::from(self.owner[q] == Owner::Ctrl),
                succ.join(","),
                labels.join(" ; ")
            );
        }
        s
    }
}

/// Splits every edge of the complete automaton `a` into an environment
/// edge labeled by an input region and a controller edge labeled by the
/// output part; colors go on the controller edges.
///
/// For each state the input parts of its edge cubes are refined into
/// disjoint regions. Intermediate controller states are identified by
/// their edge sets and shared; environment edges to the same controller
/// state are joined. State `s` of `a` stays state `s` of the arena.
pub fn split_automaton(a: &Automaton, inputs: u64) -> Result<Arena, ArenaError> {
    let outputs = a.ap_mask() & !inputs;
    for (s, es) in a.edges.iter().enumerate() {
        if !es.iter().fold(Label::ff(), |acc, e| acc.or(&e.label)).is_true() {
            return Err(ArenaError::Incomplete(s));
        }
    }
    let n = a.num_states();
    let mut edges: Vec<Vec<Edge>> = vec![Vec::new(); n];
    let mut ctrl_index: HashMap<Vec<(Label, ColorSet, usize)>, usize> = HashMap::new();
    // per label-set signature: regions with the output part of each edge
    let mut decomposition: HashMap<Vec<Label>, Vec<(Label, Vec<Label>)>> = HashMap::new();
    for s in 0..n {
        let labels: Vec<Label> = a.edges[s].iter().map(|e| e.label.clone()).collect();
        let regions = decomposition
            .entry(labels.clone())
            .or_insert_with(|| decompose(&labels, inputs, outputs))
            .clone();
        let mut env: Vec<(usize, Label)> = Vec::new();
        for (region, parts) in regions {
            let mut row: Vec<(Label, ColorSet, usize)> = Vec::new();
            for (e, out) in a.edges[s].iter().zip(parts) {
                if out.is_false() {
                    continue;
                }
                match row.iter_mut().find(|(_, c, d)| *c == e.colors && *d == e.dst) {
                    Some(slot) => slot.0 = slot.0.or(&out),
                    None => row.push((out, e.colors, e.dst)),
                }
            }
            row.sort();
            let next = n + ctrl_index.len();
            let c = *ctrl_index.entry(row.clone()).or_insert_with(|| {
                edges.push(row.iter().map(|(l, cs, d)| Edge { label: l.clone(), colors: *cs, dst: *d }).collect());
                next
            });
            match env.iter_mut().find(|(d, _)| *d == c) {
                Some(slot) => slot.1 = slot.1.or(&region),
                None => env.push((c, region)),
            }
        }
        edges[s] = env.into_iter().map(|(d, l)| Edge { label: l, colors: ColorSet::EMPTY, dst: d }).collect();
    }
    let total = edges.len();
    let mut automaton = Automaton::new(a.aps.clone(), total, a.acceptance.clone());
    automaton.initial = a.initial;
    automaton.edges = edges;
    automaton.update_flags();
    let mut owner = vec![Owner::Env; n];
    owner.resize(total, Owner::Ctrl);
    let arena = Arena { automaton, owner, inputs, outputs };
    Ok(trim_arena(&arena))
}

/// Input regions of a state with edge labels `labels`, each paired with
/// the output part of every edge inside the region.
fn decompose(labels: &[Label], inputs: u64, outputs: u64) -> Vec<(Label, Vec<Label>)> {
    let input_parts: Vec<Label> = labels
        .iter()
        .flat_map(|l| l.cubes().iter().map(|c| Label::from_cube(c.forget(outputs))))
        .collect();
    refine(&input_parts)
        .into_iter()
        .map(|region| {
            let parts = labels
                .iter()
                .map(|l| {
                    Label::from_cubes(
                        l.cubes()
                            .iter()
                            .filter(|c| region.intersects(&Label::from_cube(c.forget(outputs))))
                            .map(|c: &Cube| c.forget(inputs)),
                    )
                })
                .collect();
            (region, parts)
        })
        .collect()
}

fn trim_arena(ar: &Arena) -> Arena {
    let keep = ar.automaton.reachable();
    let owner = (0..ar.num_states()).filter(|s| keep[*s]).map(|s| ar.owner[s]).collect();
    Arena { automaton: ar.automaton.restrict(&keep), owner, inputs: ar.inputs, outputs: ar.outputs }
}

/// Owners of a split-shaped automaton by alternation from the initial
/// (environment) state.
pub fn owners_by_alternation(a: &Automaton) -> Result<Vec<Owner>, ArenaError> {
    let mut owner: Vec<Option<Owner>> = vec![None; a.num_states()];
    owner[a.initial] = Some(Owner::Env);
    let mut stack = vec![a.initial];
    while let Some(s) = stack.pop() {
        let next = owner[s].expect("visited").opponent();
        for e in &a.edges[s] {
            match owner[e.dst] {
                None => {
                    owner[e.dst] = Some(next);
                    stack.push(e.dst);
                }
                Some(o) if o != next => return Err(ArenaError::NotBipartite(e.dst)),
                Some(_) => {}
            }
        }
    }
    Ok(owner.into_iter().map(|o| o.unwrap_or(Owner::Env)).collect())
}

/// Arena from a split-shaped automaton such as a determinized split
/// automaton: owners alternate from the initial environment state.
pub fn arena_from_split(a: &Automaton, inputs: u64) -> Result<Arena, ArenaError> {
    let a = a.trim();
    let owner = owners_by_alternation(&a)?;
    let outputs = a.ap_mask() & !inputs;
    Ok(Arena { automaton: a, owner, inputs, outputs })
}

/// Joins every environment edge with the controller edges after it: the
/// inverse of [`split_automaton`] up to the state numbering.
pub fn unsplit(ar: &Arena) -> Automaton {
    let a = &ar.automaton;
    let env: Vec<usize> = (0..ar.num_states()).filter(|s| ar.owner[*s] == Owner::Env).collect();
    let mut index = vec![usize::MAX; ar.num_states()];
    for (i, &s) in env.iter().enumerate() {
        index[s] = i;
    }
    let mut out = Automaton::new(a.aps.clone(), env.len(), a.acceptance.clone());
    out.initial = index[a.initial];
    for (i, &s) in env.iter().enumerate() {
        let mut row: Vec<Edge> = Vec::new();
        for e in &a.edges[s] {
            for f in &a.edges[e.dst] {
                let label = e.label.and(&f.label);
                let dst = index[f.dst];
                let colors = e.colors.union(f.colors);
                match row.iter_mut().find(|g| g.dst == dst && g.colors == colors) {
                    Some(g) => g.label = g.label.or(&label),
                    None => row.push(Edge { label, colors, dst }),
                }
            }
        }
        out.edges[i] = row;
    }
    out.update_flags();
    out
}

/// Mealy machine of a controller strategy (`choice[c]` is the edge taken
/// in controller state `c`), over the environment states reachable under
/// it. The initial state becomes state 0.
pub fn unsplit_strategy(ar: &Arena, choice: &[Option<usize>]) -> Result<MealyMachine, ArenaError> {
    let a = &ar.automaton;
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut order = vec![a.initial];
    index.insert(a.initial, 0);
    let mut transitions: Vec<Vec<MealyTransition>> = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let s = order[k];
        let mut ts: Vec<MealyTransition> = Vec::new();
        for e in &a.edges[s] {
            let c = e.dst;
            let j = choice[c].ok_or(ArenaError::MissingChoice(c))?;
            let f = &a.edges[c][j];
            let next = order.len();
            let dst = *index.entry(f.dst).or_insert_with(|| {
                order.push(f.dst);
                next
            });
            match ts.iter_mut().find(|t| t.dst == dst && t.output == f.label) {
                Some(t) => t.input = t.input.or(&e.label),
                None => ts.push(MealyTransition { input: e.label.clone(), output: f.label.clone(), dst }),
            }
        }
        transitions.push(ts);
        k += 1;
    }
    Ok(MealyMachine { aps: a.aps.clone(), inputs: ar.inputs, outputs: ar.outputs, initial: 0, transitions })
}
