//! CNF problems, a built-in DPLL solver and an external DIMACS backend.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::Command;

use thiserror::Error;

/// A CNF problem over variables `1..=num_vars`; literals are signed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SatProblem {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

/// A satisfying assignment: `values[v - 1]` is the value of variable `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatModel {
    pub values: Vec<bool>,
}

impl SatModel {
    pub fn value(&self, lit: i32) -> bool {
        let v = self.values[lit.unsigned_abs() as usize - 1];
        if lit > 0 {
            v
        } else {
            !v
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(SatModel),
    Unsat,
}

#[derive(Debug, Error)]
pub enum SatError {
    #[error("clause literal {0} references an undeclared variable")]
    BadLiteral(i32),
    #[error("cannot run SAT solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("unexpected SAT solver output: {0}")]
    Output(String),
    #[error("SAT solver returned a model that violates the problem")]
    WrongModel,
}

impl SatProblem {
    pub fn new() -> SatProblem {
        SatProblem::default()
    }

    pub fn new_var(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = i32>) {
        self.clauses.push(lits.into_iter().collect());
    }

    pub fn validate(&self) -> Result<(), SatError> {
        for c in &self.clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > self.num_vars {
                    return Err(SatError::BadLiteral(l));
                }
            }
        }
        Ok(())
    }

    pub fn satisfied_by(&self, m: &SatModel) -> bool {
        m.values.len() >= self.num_vars && self.clauses.iter().all(|c| c.iter().any(|&l| m.value(l)))
    }

    /// DIMACS CNF text: a `p cnf V C` header and one zero-terminated clause
    /// per line.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }
}

pub trait SatSolver {
    fn solve(&mut self, p: &SatProblem) -> Result<SatOutcome, SatError>;
}

/// Built-in DPLL with two watched literals and chronological backtracking.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dpll;

impl SatSolver for Dpll {
    fn solve(&mut self, p: &SatProblem) -> Result<SatOutcome, SatError> {
        p.validate()?;
        Ok(dpll(p))
    }
}

fn code(l: i32) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

struct State {
    value: Vec<i8>,
    trail: Vec<i32>,
    /// per decision level: trail length before the decision, decision
    /// literal, and whether its opposite was already tried
    levels: Vec<(usize, i32, bool)>,
    head: usize,
}

impl State {
    fn lit_value(&self, l: i32) -> i8 {
        let v = self.value[l.unsigned_abs() as usize - 1];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, l: i32) {
        self.value[l.unsigned_abs() as usize - 1] = if l > 0 { 1 } else { -1 };
        self.trail.push(l);
    }
}

fn dpll(p: &SatProblem) -> SatOutcome {
    let n = p.num_vars;
    let mut clauses: Vec<Vec<i32>> = Vec::with_capacity(p.clauses.len());
    let mut st = State { value: vec![0; n], trail: Vec::new(), levels: Vec::new(), head: 0 };
    let mut units = Vec::new();
    for c in &p.clauses {
        let mut c = c.clone();
        c.sort_unstable();
        c.dedup();
        if c.iter().any(|l| c.contains(&-l)) {
            continue;
        }
        match c.len() {
            0 => return SatOutcome::Unsat,
            1 => units.push(c[0]),
            _ => clauses.push(c),
        }
    }
    let mut watches: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (i, c) in clauses.iter().enumerate() {
        watches[code(c[0])].push(i);
        watches[code(c[1])].push(i);
    }
    // static order: most frequent variables first
    let mut freq = vec![0usize; n];
    for c in p.clauses.iter().flatten() {
        freq[c.unsigned_abs() as usize - 1] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|v| std::cmp::Reverse(freq[*v]));

    for u in units {
        match st.lit_value(u) {
            1 => {}
            -1 => return SatOutcome::Unsat,
            _ => st.assign(u),
        }
    }
    loop {
        if !propagate(&mut clauses, &mut watches, &mut st) {
            // backtrack to the last decision whose opposite is untried
            loop {
                let Some((start, lit, flipped)) = st.levels.pop() else {
                    return SatOutcome::Unsat;
                };
                for l in st.trail.drain(start..) {
                    st.value[l.unsigned_abs() as usize - 1] = 0;
                }
                st.head = start;
                if !flipped {
                    st.levels.push((start, -lit, true));
                    st.assign(-lit);
                    break;
                }
            }
            continue;
        }
        let Some(&v) = order.iter().find(|v| st.value[**v] == 0) else {
            let values = st.value.iter().map(|x| *x > 0).collect();
            return SatOutcome::Sat(SatModel { values });
        };
        let lit = -(v as i32 + 1);
        st.levels.push((st.trail.len(), lit, false));
        st.assign(lit);
    }
}

/// Unit propagation over the trail; false on conflict.
fn propagate(clauses: &mut [Vec<i32>], watches: &mut [Vec<usize>], st: &mut State) -> bool {
    while st.head < st.trail.len() {
        let l = st.trail[st.head];
        st.head += 1;
        let false_lit = -l;
        let mut ws = std::mem::take(&mut watches[code(false_lit)]);
        let mut i = 0;
        let mut ok = true;
        while i < ws.len() {
            let ci = ws[i];
            let c = &mut clauses[ci];
            if c[0] == false_lit {
                c.swap(0, 1);
            }
            // c[1] is the false watch
            if st.lit_value(c[0]) == 1 {
                i += 1;
                continue;
            }
            if let Some(k) = (2..c.len()).find(|&k| st.lit_value(c[k]) != -1) {
                c.swap(1, k);
                watches[code(c[1])].push(ci);
                ws.swap_remove(i);
                continue;
            }
            match st.lit_value(c[0]) {
                0 => {
                    let u = c[0];
                    st.assign(u);
                    i += 1;
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        watches[code(false_lit)].extend(ws);
        if !ok {
            return false;
        }
    }
    true
}

/// An external solver run as `program args... <cnf-file>`, printing an
/// `s SATISFIABLE` / `s UNSATISFIABLE` line and the model on `v` lines.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
}

impl ExternalSolver {
    /// Parses a command line such as `kissat -q`.
    pub fn from_command(command: &str) -> Option<ExternalSolver> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next()?;
        Some(ExternalSolver { program, args: parts.collect() })
    }
}

impl SatSolver for ExternalSolver {
    fn solve(&mut self, p: &SatProblem) -> Result<SatOutcome, SatError> {
        p.validate()?;
        let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
        file.write_all(p.to_dimacs().as_bytes())?;
        file.flush()?;
        let out = Command::new(&self.program).args(&self.args).arg(file.path()).output()?;
        let text = String::from_utf8_lossy(&out.stdout);
        let outcome = parse_solver_output(&text, p.num_vars)?;
        if let SatOutcome::Sat(m) = &outcome {
            if !p.satisfied_by(m) {
                return Err(SatError::WrongModel);
            }
        }
        Ok(outcome)
    }
}

/// Reads SAT-competition style output.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SatOutcome, SatError> {
    let mut status: Option<bool> = None;
    let mut values = vec![false; num_vars];
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                other => return Err(SatError::Output(other.to_string())),
            };
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for tok in rest.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| SatError::Output(line.to_string()))?;
                if l == 0 {
                    continue;
                }
                let v = l.unsigned_abs() as usize;
                if v > num_vars {
                    return Err(SatError::Output(format!("literal {l} out of range")));
                }
                values[v - 1] = l > 0;
            }
        }
    }
    match status {
        Some(true) => Ok(SatOutcome::Sat(SatModel { values })),
        Some(false) => Ok(SatOutcome::Unsat),
        None => Err(SatError::Output("no status line".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute(p: &SatProblem) -> bool {
        (0u64..1 << p.num_vars).any(|bits| {
            let m = SatModel { values: (0..p.num_vars).map(|v| bits >> v & 1 == 1).collect() };
            p.satisfied_by(&m)
        })
    }

    #[test]
    fn random_3cnf_agrees_with_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=10);
            let m = rng.gen_range(1..=45);
            let mut p = SatProblem { num_vars: n, clauses: Vec::new() };
            for _ in 0..m {
                let len = rng.gen_range(1..=3);
                p.add_clause((0..len).map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                }));
            }
            match Dpll.solve(&p).unwrap() {
                SatOutcome::Sat(model) => assert!(p.satisfied_by(&model)),
                SatOutcome::Unsat => assert!(!brute(&p), "{p:?}"),
            }
        }
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 4 pigeons, 3 holes
        let mut p = SatProblem::new();
        let x: Vec<Vec<i32>> = (0..4).map(|_| (0..3).map(|_| p.new_var()).collect()).collect();
        for row in &x {
            p.add_clause(row.clone());
        }
        for h in 0..3 {
            for a in 0..4 {
                for b in a + 1..4 {
                    p.add_clause([-x[a][h], -x[b][h]]);
                }
            }
        }
        assert_eq!(Dpll.solve(&p).unwrap(), SatOutcome::Unsat);
    }

    #[test]
    fn dimacs_and_model_parsing() {
        let mut p = SatProblem::new();
        let a = p.new_var();
        let b = p.new_var();
        p.add_clause([a, -b]);
        assert_eq!(p.to_dimacs(), "p cnf 2 1\n1 -2 0\n");
        let out = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2 0\n", 2).unwrap();
        assert_eq!(out, SatOutcome::Sat(SatModel { values: vec![true, false] }));
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 2).unwrap(), SatOutcome::Unsat);
        assert!(parse_solver_output("garbage", 2).is_err());
        p.add_clause([7]);
        assert!(matches!(Dpll.solve(&p), Err(SatError::BadLiteral(7))));
    }
}
