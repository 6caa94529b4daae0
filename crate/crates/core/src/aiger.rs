//! And-inverter graphs: encoding of Mealy machines, the ASCII `aag`
//! format, and simulation.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::label::{Cube, Label};
use crate::ltl::SignalPartition;
use crate::strategy::MealyMachine;

/// An AIGER circuit. Inputs take variables `1..=I`, latches the next `L`
/// variables, and gates follow in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AigerCircuit {
    pub inputs: Vec<String>,
    /// `(next-state literal, optional name)`; latch `k` is variable `I+1+k`.
    pub latches: Vec<(u32, Option<String>)>,
    pub outputs: Vec<(u32, String)>,
    /// `(lhs, rhs0, rhs1)` with `lhs` even.
    pub ands: Vec<(u32, u32, u32)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AigerError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("output `{0}` is produced by more than one machine")]
    OverlappingOutputs(String),
    #[error("machine {0} is not input-complete and input-deterministic")]
    IncompleteMachine(usize),
    #[error("machine {0} reads `{1}`, which is not an input")]
    UnknownSignal(usize, String),
}

impl AigerCircuit {
    pub fn max_var(&self) -> u32 {
        (self.inputs.len() + self.latches.len() + self.ands.len()) as u32
    }

    pub fn input_lit(&self, k: usize) -> u32 {
        2 * (k as u32 + 1)
    }

    pub fn latch_lit(&self, k: usize) -> u32 {
        2 * (self.inputs.len() + k) as u32 + 2
    }

    /// Gates are topologically ordered and every literal is defined.
    pub fn check(&self) -> Result<(), String> {
        let m = self.max_var();
        let base = (self.inputs.len() + self.latches.len()) as u32;
        let defined = |lit: u32, bound: u32| lit / 2 <= bound;
        for (k, &(lhs, a, b)) in self.ands.iter().enumerate() {
            let v = base + 1 + k as u32;
            if lhs != 2 * v {
                return Err(format!("gate {k} defines literal {lhs}, expected {}", 2 * v));
            }
            if !defined(a, v - 1) || !defined(b, v - 1) {
                return Err(format!("gate {lhs} uses a literal not defined before it"));
            }
        }
        for &(next, _) in &self.latches {
            if !defined(next, m) {
                return Err(format!("latch next literal {next} is undefined"));
            }
        }
        for (lit, _) in &self.outputs {
            if !defined(*lit, m) {
                return Err(format!("output literal {lit} is undefined"));
            }
        }
        Ok(())
    }

    /// Evaluates one step from the latch values `state`; returns the
    /// outputs and the next latch values.
    pub fn step(&self, state: &[bool], inputs: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let mut val = vec![false; self.max_var() as usize + 1];
        for (k, &b) in inputs.iter().enumerate() {
            val[k + 1] = b;
        }
        for (k, &b) in state.iter().enumerate() {
            val[self.inputs.len() + 1 + k] = b;
        }
        let lit = |val: &[bool], l: u32| val[(l / 2) as usize] ^ (l % 2 == 1);
        for &(lhs, a, b) in &self.ands {
            val[(lhs / 2) as usize] = lit(&val, a) && lit(&val, b);
        }
        let outs = self.outputs.iter().map(|(l, _)| lit(&val, *l)).collect();
        let next = self.latches.iter().map(|(l, _)| lit(&val, *l)).collect();
        (outs, next)
    }
}

/// Cycle-accurate simulation from the all-zero latch state.
pub fn simulate(c: &AigerCircuit, inputs: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let mut state = vec![false; c.latches.len()];
    let mut out = Vec::with_capacity(inputs.len());
    for step in inputs {
        let (o, next) = c.step(&state, step);
        out.push(o);
        state = next;
    }
    out
}

/// AND-gate builder with structural hashing and constant propagation.
struct Builder {
    first_gate: u32,
    ands: Vec<(u32, u32, u32)>,
    table: HashMap<(u32, u32), u32>,
}

impl Builder {
    fn and(&mut self, a: u32, b: u32) -> u32 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a == 0 {
            return 0;
        }
        if a == 1 {
            return b;
        }
        if a == b {
            return a;
        }
        if a ^ 1 == b {
            return 0;
        }
        if let Some(&l) = self.table.get(&(a, b)) {
            return l;
        }
        let lhs = 2 * (self.first_gate + self.ands.len() as u32);
        self.ands.push((lhs, b, a));
        self.table.insert((a, b), lhs);
        lhs
    }

    fn or(&mut self, a: u32, b: u32) -> u32 {
        self.and(a ^ 1, b ^ 1) ^ 1
    }

    fn and_all(&mut self, lits: impl IntoIterator<Item = u32>) -> u32 {
        lits.into_iter().fold(1, |acc, l| self.and(acc, l))
    }

    fn or_all(&mut self, lits: impl IntoIterator<Item = u32>) -> u32 {
        lits.into_iter().fold(0, |acc, l| self.or(acc, l))
    }

    fn cube(&mut self, c: Cube, var_lit: &[u32]) -> u32 {
        let lits: Vec<u32> = c.literals().map(|(v, pos)| var_lit[v] ^ u32::from(!pos)).collect();
        self.and_all(lits)
    }

    fn label(&mut self, l: &Label, var_lit: &[u32]) -> u32 {
        let cubes: Vec<u32> = l.cubes().iter().map(|c| self.cube(*c, var_lit)).collect();
        self.or_all(cubes)
    }
}

fn bits_for(n: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

/// One circuit for machines with disjoint outputs. Machine states are
/// binary-encoded in latches with the initial state as code 0; outputs a
/// transition leaves unspecified take `dontcare`, as do outputs of `p` no
/// machine produces. Gates are shared across machines.
pub fn encode(machines: &[MealyMachine], p: &SignalPartition, dontcare: bool) -> Result<AigerCircuit, AigerError> {
    let mut owner: HashMap<&str, usize> = HashMap::new();
    for (j, m) in machines.iter().enumerate() {
        if !m.is_input_complete() || !m.is_input_deterministic() {
            return Err(AigerError::IncompleteMachine(j));
        }
        for (v, name) in m.aps.iter().enumerate() {
            if m.outputs >> v & 1 == 1 {
                let used = m.transitions.iter().flatten().any(|t| t.output.support() >> v & 1 == 1);
                if !used && !p.is_output(name) {
                    continue;
                }
                if owner.insert(name.as_str(), j).is_some() {
                    return Err(AigerError::OverlappingOutputs(name.clone()));
                }
            }
        }
    }
    let num_inputs = p.inputs.len();
    let widths: Vec<usize> = machines.iter().map(|m| bits_for(m.num_states())).collect();
    let num_latches: usize = widths.iter().sum();
    let mut b = Builder { first_gate: (num_inputs + num_latches) as u32 + 1, ands: Vec::new(), table: HashMap::new() };
    let mut latch_next: Vec<u32> = Vec::with_capacity(num_latches);
    let mut latch_names: Vec<Option<String>> = Vec::with_capacity(num_latches);
    let mut output_lit: HashMap<String, u32> = HashMap::new();
    let mut latch_base = num_inputs;
    for (j, m) in machines.iter().enumerate() {
        let width = widths[j];
        let mut var_lit = vec![0u32; m.aps.len()];
        for (v, name) in m.aps.iter().enumerate() {
            if m.inputs >> v & 1 == 1 {
                let k = p.inputs.iter().position(|s| s == name).ok_or_else(|| AigerError::UnknownSignal(j, name.clone()))?;
                var_lit[v] = 2 * (k as u32 + 1);
            }
        }
        let code = |s: usize| -> usize {
            if s == m.initial {
                0
            } else if s == 0 {
                m.initial
            } else {
                s
            }
        };
        let latch = |k: usize| 2 * (latch_base + k) as u32 + 2;
        let mut next_terms: Vec<Vec<u32>> = vec![Vec::new(); width];
        let mut out_terms: HashMap<usize, Vec<u32>> = HashMap::new();
        for (s, ts) in m.transitions.iter().enumerate() {
            let c = code(s);
            let state_lits: Vec<u32> = (0..width).map(|k| latch(k) ^ u32::from(c >> k & 1 == 0)).collect();
            let state = b.and_all(state_lits);
            for t in ts {
                let input = b.label(&t.input, &var_lit);
                let cond = b.and(state, input);
                let d = code(t.dst);
                for (k, terms) in next_terms.iter_mut().enumerate() {
                    if d >> k & 1 == 1 {
                        terms.push(cond);
                    }
                }
                let chosen = t.output.cubes().first().copied().unwrap_or(Cube::TRUE);
                for v in crate::label::mask_vars(m.outputs) {
                    let value = if chosen.pos() >> v & 1 == 1 {
                        true
                    } else if chosen.neg() >> v & 1 == 1 {
                        false
                    } else {
                        dontcare
                    };
                    if value {
                        out_terms.entry(v).or_default().push(cond);
                    }
                }
            }
        }
        for terms in next_terms {
            latch_next.push(b.or_all(terms));
        }
        for k in 0..width {
            latch_names.push(Some(if machines.len() == 1 { format!("s{k}") } else { format!("m{j}_s{k}") }));
        }
        for v in crate::label::mask_vars(m.outputs) {
            let name = &m.aps[v];
            if owner.get(name.as_str()) == Some(&j) {
                let terms = out_terms.remove(&v).unwrap_or_default();
                output_lit.insert(name.clone(), b.or_all(terms));
            }
        }
        latch_base += width;
    }
    let outputs = p
        .outputs
        .iter()
        .map(|o| (output_lit.get(o).copied().unwrap_or(u32::from(dontcare)), o.clone()))
        .collect();
    Ok(AigerCircuit {
        inputs: p.inputs.clone(),
        latches: latch_next.into_iter().zip(latch_names).collect(),
        outputs,
        ands: b.ands,
    })
}

/// ASCII AIGER with a symbol table.
pub fn print_aag(c: &AigerCircuit) -> String {
    let mut s = format!(
        "aag {} {} {} {} {}\n",
        c.max_var(),
        c.inputs.len(),
        c.latches.len(),
        c.outputs.len(),
        c.ands.len()
    );
    for k in 0..c.inputs.len() {
        let _ = writeln!(s, "{}", c.input_lit(k));
    }
    for (k, (next, _)) in c.latches.iter().enumerate() {
        let _ = writeln!(s, "{} {}", c.latch_lit(k), next);
    }
    for (lit, _) in &c.outputs {
        let _ = writeln!(s, "{lit}");
    }
    for (lhs, a, b) in &c.ands {
        let _ = writeln!(s, "{lhs} {a} {b}");
    }
    for (k, name) in c.inputs.iter().enumerate() {
        let _ = writeln!(s, "i{k} {name}");
    }
    for (k, (_, name)) in c.latches.iter().enumerate() {
        if let Some(name) = name {
            let _ = writeln!(s, "l{k} {name}");
        }
    }
    for (k, (_, name)) in c.outputs.iter().enumerate() {
        let _ = writeln!(s, "o{k} {name}");
    }
    s
}

/// Parses ASCII AIGER as printed by [`print_aag`]: inputs, latches and
/// gates must use the canonical variable numbering.
pub fn parse_aag(text: &str) -> Result<AigerCircuit, AigerError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
    let err = |n: usize, m: &str| AigerError::Parse(n, m.to_string());
    let (n, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "aag" {
        return Err(err(n, "expected `aag M I L O A`"));
    }
    let nums: Vec<usize> = fields[1..]
        .iter()
        .map(|f| f.parse().map_err(|_| err(n, "header fields must be numbers")))
        .collect::<Result<_, _>>()?;
    let (m, ni, nl, no, na) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if m != ni + nl + na {
        return Err(err(n, "M must equal I + L + A"));
    }
    let mut numbers = |count: usize, arity: usize| -> Result<Vec<(usize, Vec<u32>)>, AigerError> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let (ln, line) = lines.next().ok_or_else(|| err(0, "unexpected end of file"))?;
            let vals: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(ln, "expected a literal")))
                .collect::<Result<_, _>>()?;
            if vals.len() != arity {
                return Err(err(ln, &format!("expected {arity} literals")));
            }
            if vals.iter().any(|&l| l as usize > 2 * m + 1) {
                return Err(err(ln, "literal exceeds 2M+1"));
            }
            out.push((ln, vals));
        }
        Ok(out)
    };
    let ins = numbers(ni, 1)?;
    let lats = numbers(nl, 2)?;
    let outs = numbers(no, 1)?;
    let gates = numbers(na, 3)?;
    for (k, (ln, v)) in ins.iter().enumerate() {
        if v[0] != 2 * (k as u32 + 1) {
            return Err(err(*ln, "inputs must be numbered 2, 4, ..."));
        }
    }
    for (k, (ln, v)) in lats.iter().enumerate() {
        if v[0] != 2 * (ni + k) as u32 + 2 {
            return Err(err(*ln, "latches must follow the inputs"));
        }
    }
    let mut c = AigerCircuit {
        inputs: (0..ni).map(|k| format!("i{k}")).collect(),
        latches: lats.iter().map(|(_, v)| (v[1], None)).collect(),
        outputs: outs.iter().enumerate().map(|(k, (_, v))| (v[0], format!("o{k}"))).collect(),
        ands: gates.iter().map(|(_, v)| (v[0], v[1], v[2])).collect(),
    };
    let mut named_inputs = vec![false; ni];
    let mut named_outputs = vec![false; no];
    for (ln, line) in lines {
        if line == "c" || line.starts_with("c ") {
            break;
        }
        if line.is_empty() {
            continue;
        }
        let (key, name) = line.split_once(' ').ok_or_else(|| err(ln, "malformed symbol"))?;
        let (kind, idx) = key.split_at(1);
        let idx: usize = idx.parse().map_err(|_| err(ln, "malformed symbol index"))?;
        match kind {
            "i" if idx < ni => {
                c.inputs[idx] = name.to_string();
                named_inputs[idx] = true;
            }
            "l" if idx < nl => c.latches[idx].1 = Some(name.to_string()),
            "o" if idx < no => {
                c.outputs[idx].1 = name.to_string();
                named_outputs[idx] = true;
            }
            _ => return Err(err(ln, "unknown symbol")),
        }
    }
    c.check().map_err(|m| err(0, &m))?;
    Ok(c)
}
