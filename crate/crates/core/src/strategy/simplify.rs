//! State reduction of incompletely specified Mealy machines.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::sat::{SatError, SatOutcome, SatProblem, SatSolver};
use super::{MealyMachine, MealyTransition};
use crate::label::{refine, Label};

#[derive(Debug, Error)]
pub enum SimplifyError {
    #[error("machine is not input-deterministic")]
    NotDeterministic,
    #[error(transparent)]
    Sat(#[from] SatError),
}

/// Per state and input letter: the output constraint and destination,
/// `None` where the input is unspecified.
type Table = Vec<Vec<Option<(Label, usize)>>>;

/// Input letters: the atoms generated by every input label of `machines`.
fn letters(machines: &[&MealyMachine]) -> Vec<Label> {
    let mut labels: Vec<Label> = Vec::new();
    for m in machines {
        for t in m.transitions.iter().flatten() {
            if !labels.contains(&t.input) {
                labels.push(t.input.clone());
            }
        }
    }
    refine(&labels)
}

fn table(m: &MealyMachine, letters: &[Label]) -> Table {
    m.transitions
        .iter()
        .map(|ts| {
            letters
                .iter()
                .map(|x| ts.iter().find(|t| t.input.intersects(x)).map(|t| (t.output.clone(), t.dst)))
                .collect()
        })
        .collect()
}

/// Builds a machine from per-letter behavior, joining letters with equal
/// output and destination.
fn from_table(m: &MealyMachine, letters: &[Label], rows: &[Vec<Option<(Label, usize)>>], initial: usize) -> MealyMachine {
    let mut out = MealyMachine::new(m.aps.clone(), m.inputs, m.outputs, rows.len());
    out.initial = initial;
    for (s, row) in rows.iter().enumerate() {
        let mut ts: Vec<MealyTransition> = Vec::new();
        for (x, cell) in letters.iter().zip(row) {
            let Some((o, d)) = cell else { continue };
            match ts.iter_mut().find(|t| t.output == *o && t.dst == *d) {
                Some(t) => t.input = t.input.or(x),
                None => ts.push(MealyTransition { input: x.clone(), output: o.clone(), dst: *d }),
            }
        }
        out.transitions[s] = ts;
    }
    out.trim()
}

/// Whether every behavior of `fine` on inputs specified by `coarse` is
/// allowed by `coarse`: a simulation from the initial pair where outputs
/// of `fine` imply those of `coarse`.
pub fn refines(fine: &MealyMachine, coarse: &MealyMachine) -> bool {
    let xs = letters(&[fine, coarse]);
    let (tf, tc) = (table(fine, &xs), table(coarse, &xs));
    let mut seen = HashSet::new();
    let mut stack = vec![(fine.initial, coarse.initial)];
    seen.insert(stack[0]);
    while let Some((p, q)) = stack.pop() {
        for k in 0..xs.len() {
            let Some((oc, dc)) = &tc[q][k] else { continue };
            let Some((of, df)) = &tf[p][k] else { return false };
            if !of.implies(oc) {
                return false;
            }
            if seen.insert((*df, *dc)) {
                stack.push((*df, *dc));
            }
        }
    }
    true
}

/// Reduction by the greatest simulation preorder where `a` may replace `b`
/// when on every input specified for `b`, `a` is specified, its outputs
/// imply those of `b`, and the successors are again related. The states
/// that nothing strictly refines are kept; each state is redirected to the
/// smallest kept state refining it.
pub fn simplify_signatures(m: &MealyMachine) -> MealyMachine {
    let xs = letters(&[m]);
    let t = table(m, &xs);
    let n = m.num_states();
    // rel[a][b]: a may replace b
    let mut rel = vec![vec![true; n]; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if !rel[a][b] {
                    continue;
                }
                let ok = (0..xs.len()).all(|k| match (&t[a][k], &t[b][k]) {
                    (_, None) => true,
                    (None, Some(_)) => false,
                    (Some((oa, da)), Some((ob, db))) => oa.implies(ob) && rel[*da][*db],
                });
                if !ok {
                    rel[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let kept: Vec<usize> = (0..n)
        .filter(|&a| {
            // no strictly stronger state, and the smallest among equivalents
            (0..n).all(|c| !rel[c][a] || rel[a][c]) && (0..a).all(|c| !(rel[c][a] && rel[a][c]))
        })
        .collect();
    let rep: Vec<usize> = (0..n)
        .map(|b| *kept.iter().find(|&&a| rel[a][b]).expect("a minimal state refines b"))
        .collect();
    let index: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let rows: Vec<Vec<Option<(Label, usize)>>> = kept
        .iter()
        .map(|&a| t[a].iter().map(|c| c.as_ref().map(|(o, d)| (o.clone(), index[&rep[*d]]))).collect())
        .collect();
    from_table(m, &xs, &rows, index[&rep[m.initial]])
}

/// Pairs of states that no common refinement can serve: some shared input
/// forces disjoint outputs or leads to an incompatible pair.
fn incompatibility(t: &Table) -> Vec<Vec<bool>> {
    let n = t.len();
    let mut inc = vec![vec![false; n]; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in a + 1..n {
                if inc[a][b] {
                    continue;
                }
                let clash = t[a].iter().zip(&t[b]).any(|(x, y)| match (x, y) {
                    (Some((oa, da)), Some((ob, db))) => !oa.intersects(ob) || inc[*da][*db],
                    _ => false,
                });
                if clash {
                    inc[a][b] = true;
                    inc[b][a] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return inc;
        }
    }
}

/// Largest clique found greedily from every start state.
fn greedy_clique(inc: &[Vec<bool>]) -> Vec<usize> {
    let n = inc.len();
    let degree: Vec<usize> = inc.iter().map(|r| r.iter().filter(|b| **b).count()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|v| (std::cmp::Reverse(degree[*v]), *v));
    let mut best: Vec<usize> = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| inc[u][v]) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Exact minimization: the fewest states of a machine refining `m`.
///
/// States of `m` are covered by `k` classes of pairwise compatible states
/// closed under successors, for `k` growing from the size of a clique of
/// pairwise incompatible states. Classes whose outputs have no common
/// valuation on some input are excluded lazily with blocking clauses.
pub fn minimize_sat(m: &MealyMachine, solver: &mut dyn SatSolver) -> Result<MealyMachine, SimplifyError> {
    if !m.is_input_deterministic() {
        return Err(SimplifyError::NotDeterministic);
    }
    let m = &m.trim();
    let xs = letters(&[m]);
    let t = table(m, &xs);
    let n = m.num_states();
    let inc = incompatibility(&t);
    let clique = greedy_clique(&inc);
    for k in clique.len().max(1)..=n {
        let mut p = SatProblem::new();
        let x: Vec<Vec<i32>> = (0..n).map(|_| (0..k).map(|_| p.new_var()).collect()).collect();
        let y: Vec<Vec<Vec<i32>>> = (0..k)
            .map(|_| (0..xs.len()).map(|_| (0..k).map(|_| p.new_var()).collect()).collect())
            .collect();
        for (j, &q) in clique.iter().enumerate() {
            p.add_clause([x[q][j]]);
        }
        p.add_clause(x[m.initial].clone());
        for a in 0..n {
            for b in a + 1..n {
                if inc[a][b] {
                    for c in 0..k {
                        p.add_clause([-x[a][c], -x[b][c]]);
                    }
                }
            }
        }
        for c in 0..k {
            for l in 0..xs.len() {
                p.add_clause(y[c][l].clone());
                for s in 0..n {
                    if let Some((_, d)) = &t[s][l] {
                        for e in 0..k {
                            p.add_clause([-x[s][c], -y[c][l][e], x[*d][e]]);
                        }
                    }
                }
            }
        }
        loop {
            let model = match solver.solve(&p)? {
                SatOutcome::Unsat => break,
                SatOutcome::Sat(model) => model,
            };
            let members: Vec<Vec<usize>> = (0..k).map(|c| (0..n).filter(|&s| model.value(x[s][c])).collect()).collect();
            // joint outputs per class and letter
            let mut blocked = false;
            let mut rows: Vec<Vec<Option<(Label, usize)>>> = Vec::with_capacity(k);
            for c in 0..k {
                let mut row = Vec::with_capacity(xs.len());
                for l in 0..xs.len() {
                    let mut out: Option<Label> = None;
                    let mut used: Vec<usize> = Vec::new();
                    for &s in &members[c] {
                        if let Some((o, _)) = &t[s][l] {
                            let joint = out.as_ref().map_or(o.clone(), |prev| prev.and(o));
                            used.push(s);
                            if joint.is_false() {
                                p.add_clause(used.iter().map(|&u| -x[u][c]));
                                blocked = true;
                                break;
                            }
                            out = Some(joint);
                        }
                    }
                    if blocked {
                        break;
                    }
                    let dst = (0..k).find(|&e| model.value(y[c][l][e])).expect("successor class");
                    row.push(out.map(|o| (o, dst)));
                }
                if blocked {
                    break;
                }
                rows.push(row);
            }
            if blocked {
                continue;
            }
            let init = (0..k).find(|&c| model.value(x[m.initial][c])).expect("initial covered");
            return Ok(from_table(m, &xs, &rows, init));
        }
    }
    Ok(m.clone())
}
