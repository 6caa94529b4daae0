//! Mealy machines over an input/output split of an alphabet.

use std::fmt::Write as _;

use crate::label::Label;

/// A transition reading a set of input valuations and producing any
/// valuation of its (never false) output label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MealyTransition {
    pub input: Label,
    pub output: Label,
    pub dst: usize,
}

/// A Mealy machine whose labels range over `aps`: input labels mention only
/// variables in `inputs`, output labels only variables in `outputs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    pub aps: Vec<String>,
    pub inputs: u64,
    pub outputs: u64,
    pub initial: usize,
    pub transitions: Vec<Vec<MealyTransition>>,
}

impl MealyMachine {
    pub fn new(aps: Vec<String>, inputs: u64, outputs: u64, num_states: usize) -> MealyMachine {
        MealyMachine { aps, inputs, outputs, initial: 0, transitions: vec![Vec::new(); num_states] }
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    /// First transition of `state` whose input label holds on `input`.
    pub fn step(&self, state: usize, input: u64) -> Option<&MealyTransition> {
        self.transitions[state].iter().find(|t| t.input.eval(input))
    }

    /// Every input valuation has a transition from every state.
    pub fn is_input_complete(&self) -> bool {
        self.transitions
            .iter()
            .all(|ts| ts.iter().fold(Label::ff(), |acc, t| acc.or(&t.input)).is_true())
    }

    /// Input labels of each state are pairwise disjoint.
    pub fn is_input_deterministic(&self) -> bool {
        self.transitions.iter().all(|ts| {
            ts.iter()
                .enumerate()
                .all(|(i, t)| ts[i + 1..].iter().all(|u| !t.input.intersects(&u.input)))
        })
    }

    /// Structural checks: labels stay on their side of the split, outputs
    /// are satisfiable, destinations exist.
    pub fn check(&self) -> Result<(), String> {
        if self.initial >= self.num_states() {
            return Err("initial state out of range".into());
        }
        for (s, ts) in self.transitions.iter().enumerate() {
            for t in ts {
                if t.input.support() & !self.inputs != 0 {
                    return Err(format!("state {s}: input label mentions a non-input"));
                }
                if t.output.support() & !self.outputs != 0 {
                    return Err(format!("state {s}: output label mentions a non-output"));
                }
                if t.output.is_false() {
                    return Err(format!("state {s}: false output label"));
                }
                if t.dst >= self.num_states() {
                    return Err(format!("state {s}: destination {} out of range", t.dst));
                }
            }
        }
        Ok(())
    }

    /// Keeps the states reachable from the initial one, renumbered in
    /// breadth-first order with the initial state first.
    pub fn trim(&self) -> MealyMachine {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        map[self.initial] = 0;
        let mut k = 0;
        while k < order.len() {
            for t in &self.transitions[order[k]] {
                if map[t.dst] == usize::MAX {
                    map[t.dst] = order.len();
                    order.push(t.dst);
                }
            }
            k += 1;
        }
        let mut out = MealyMachine::new(self.aps.clone(), self.inputs, self.outputs, order.len());
        for (i, &s) in order.iter().enumerate() {
            out.transitions[i] = self.transitions[s]
                .iter()
                .map(|t| MealyTransition { input: t.input.clone(), output: t.output.clone(), dst: map[t.dst] })
                .collect();
        }
        out
    }

    /// Human-readable listing.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (q, ts) in self.transitions.iter().enumerate() {
            for t in ts {
                let _ = writeln!(
                    s,
                    "{q}{} --[{}] / [{}]--> {}",
                    if q == self.initial { "*" } else { "" },
                    t.input.display_with(&self.aps),
                    t.output.display_with(&self.aps),
                    t.dst
                );
            }
        }
        s
    }
}
