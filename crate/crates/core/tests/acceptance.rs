//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Every check compares against an
//! oracle that shares no code with the component under test.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use synthkit::aiger::{parse_aag, print_aag};
use synthkit::arena::{arena_from_split, split_automaton, unsplit, Arena};
use synthkit::automaton::{
    accepts_lasso, complement_deterministic, complement_parity, is_empty, parse_hoa, print_hoa, product, AccCond,
    Acceptance, Automaton, ColorSet, Edge,
};
use synthkit::game::{brute_force_solve, solve_game, validate_solution, Game, Owner};
use synthkit::label::Label;
use synthkit::ltl::eval::{all_lassos, holds_on_lasso};
use synthkit::ltl::{parse_ltl, Formula, SignalPartition};
use synthkit::parity::{car_paritize, determinize_nba, minimize_colors, parity_color, DEFAULT_STATE_BUDGET};
use synthkit::pipeline::{synthesize, synthesize_automaton, verify_circuit, Algo, PipelineConfig, Simplify, Verdict};
use synthkit::strategy::{minimize_sat, refines, simplify_signatures, Dpll, MealyMachine, MealyTransition};
use synthkit::translate::ltl_to_nba;

// pinned tolerances and sizes
const SEED: u64 = 0x5EED_2026;
const CORPUS_MIN: usize = 30;
const CORPUS_TIME: Duration = Duration::from_secs(60);
const VERIFY_TIME: Duration = Duration::from_secs(60);
const LAR_MIN: usize = 5;
const LASSO_FORMULAS_MIN: usize = 40;
const LASSO_MAX_LEN: usize = 6;
const RANDOM_NBAS: usize = 100;
const NBA_MAX_STATES: usize = 5;
const RANDOM_ELS: usize = 100;
const EL_MAX_STATES: usize = 5;
const EL_MAX_COLORS: u32 = 3;
const RANDOM_DPAS: usize = 100;
const DPA_MAX_STATES: usize = 6;
const DPA_MAX_COLORS: u32 = 5;
const RANDOM_ARENAS: usize = 200;
const ARENA_MAX_STATES: usize = 30;
const ARENA_MAX_COLORS: u32 = 6;
const ARENA_MAX_DEGREE: usize = 3;
const ISMMS: usize = 50;
const ISMM_MAX_STATES: usize = 6;
const GOLDEN_MIN: usize = 20;
const PROFILE_CAP: usize = 200_000;

type Check = Result<String, String>;

/// Specification corpus with verdicts established by hand.
const CORPUS: &[(&str, &[&str], &[&str], bool)] = &[
    ("G(i -> F o)", &["i"], &["o"], true),
    ("G(o <-> X i)", &["i"], &["o"], false),
    ("G F i <-> G F o", &["i"], &["o"], true),
    ("G(o <-> i)", &["i"], &["o"], true),
    ("G(X o <-> i)", &["i"], &["o"], true),
    ("G o & F !o", &["i"], &["o"], false),
    ("F G i -> G F o", &["i"], &["o"], true),
    ("F G i <-> G F o", &["i"], &["o"], false),
    ("G F o & G F !o", &["i"], &["o"], true),
    ("G !(g1 & g2) & G(r1 -> F g1) & G(r2 -> F g2)", &["r1", "r2"], &["g1", "g2"], true),
    ("G(r1 -> X g1) & G(r2 -> X g2) & G !(g1 & g2)", &["r1", "r2"], &["g1", "g2"], false),
    ("G(r1 -> g1) & G(r2 -> g2) & G !(g1 & g2)", &["r1", "r2"], &["g1", "g2"], false),
    ("G(o1 <-> i1) & G F o2", &["i1", "i2"], &["o1", "o2"], true),
    ("G(o1 <-> i1) & G(o2 <-> X i2)", &["i1", "i2"], &["o1", "o2"], false),
    ("G(i1 -> F o1) & G(i2 -> F o2)", &["i1", "i2"], &["o1", "o2"], true),
    ("G(i1 -> o1) & (G F i2 <-> G F o2)", &["i1", "i2"], &["o1", "o2"], true),
    ("G(o1 | o2) & (G F i1 <-> G F (o1 & o2))", &["i1"], &["o1", "o2"], true),
    ("G(i1 -> !o1) & (G F i1 <-> G F o1)", &["i1"], &["o1"], false),
    ("G(i1 -> o1) & (F G i2 <-> F G o2)", &["i1", "i2"], &["o1", "o2"], true),
    ("(G F i1 <-> G F o1) & G(o1 -> X !o1)", &["i1"], &["o1"], true),
    ("G(X X o1 <-> i1)", &["i1"], &["o1"], true),
    ("G F i1 -> G F (o1 & X o1)", &["i1"], &["o1"], true),
    ("G(o1 -> X !o1) & G F o1", &["i1"], &["o1"], true),
    ("G(i1 -> o1) & G(i2 -> !o1)", &["i1", "i2"], &["o1"], false),
    ("G((i1 & i2) -> (o1 & !o1))", &["i1", "i2"], &["o1"], false),
    ("F o1 & G(o1 -> G !o2) & G F o2", &["i1"], &["o1", "o2"], false),
    ("G(i1 U o1)", &["i1"], &["o1"], true),
    ("(G F i1 & G F i2) -> G F o1", &["i1", "i2"], &["o1"], true),
    ("G(o1 <-> (i1 xor i2))", &["i1", "i2"], &["o1"], true),
    ("F G o1 & G F !o1", &["i1"], &["o1"], false),
    ("G(i1 -> F(o1 & o2)) & G(o1 -> !o2)", &["i1"], &["o1", "o2"], false),
    ("F i1 -> F o1", &["i1"], &["o1"], true),
    ("G(o1 -> X i1)", &["i1"], &["o1"], true),
    ("G(i1 -> X o1) & G(!i1 -> X !o1)", &["i1"], &["o1"], true),
    ("X o1 <-> F i1", &["i1"], &["o1"], false),
    ("G F (i1 <-> o1)", &["i1"], &["o1"], true),
    ("G(o1 <-> X o2) & G(o2 <-> i1)", &["i1"], &["o1", "o2"], false),
    ("G(o1 -> F o2) & G(o2 -> F !o1)", &["i1"], &["o1", "o2"], true),
];

/// Formulas over `a`, `b` for the lasso semantics check.
const LASSO_FORMULAS: &[&str] = &[
    "a", "!a", "X a", "F a", "G a", "a U b", "a R b", "a W b", "G F a", "F G a",
    "G(a -> F b)", "G(a -> X b)", "F(a & X b)", "G F a & G F b", "G F a -> G F b", "F G a | G F b",
    "(a U b) U a", "X X a", "X(a U !b)", "G(a <-> X b)", "a xor X a", "F(a & F(b & F a))",
    "G(a | X G b)", "!(a U b) & F b", "F G(a xor b)", "G(a -> (b W !a))", "G F a <-> G F b",
    "F(G a & F !b)", "a R (b | X a)", "G(X a <-> b)", "X F G a", "!G F a", "F a & F !a",
    "G(a U b)", "(a W b) & G !b", "G(a -> X X b)", "F G a <-> G F b", "X(a R b) | F !a",
    "true", "false", "a & !a", "G(F a -> F b)", "(F a & F b) U b",
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn partition(ins: &[&str], outs: &[&str]) -> SignalPartition {
    SignalPartition::new(ins, outs).expect("valid partition")
}

fn signal_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn verdict_of(realizable: bool) -> Verdict {
    if realizable {
        Verdict::Realizable
    } else {
        Verdict::Unrealizable
    }
}

fn nba_of(f: &Formula, aps: &[String]) -> Automaton {
    ltl_to_nba(f, aps)
}

fn letter_cube(mask: u64, letter: u64) -> Label {
    Label::minterm(mask, letter)
}

fn full_mask(aps: usize) -> u64 {
    (1u64 << aps) - 1
}

// ---------------------------------------------------------------- oracles

/// Explicit game of the formula: environment vertices are states of a
/// deterministic parity automaton, controller vertices pair a state with
/// an input letter. Built letter by letter, without splitting or merging.
fn explicit_game(f: &Formula, p: &SignalPartition) -> (Automaton, Game) {
    let aps = p.alphabet();
    let nba = nba_of(f, &aps).complete_with_sink(ColorSet::EMPTY);
    let dpa = determinize_nba(&nba, DEFAULT_STATE_BUDGET).expect("determinization within budget");
    let (ni, no) = (p.inputs.len(), p.outputs.len());
    let n = dpa.num_states();
    let ctrl = |d: usize, x: u64| n + (d << ni) + x as usize;
    let mut owner = vec![Owner::Env; n];
    owner.extend(vec![Owner::Ctrl; n << ni]);
    let mut edges = vec![Vec::new(); n + (n << ni)];
    for d in 0..n {
        for x in 0..1u64 << ni {
            edges[d].push((None, ctrl(d, x)));
            for o in 0..1u64 << no {
                let letter = x | o << ni;
                let e = dpa.edges[d].iter().find(|e| e.label.eval(letter)).expect("complete automaton");
                edges[ctrl(d, x)].push((Some(parity_color(e)), e.dst));
            }
        }
    }
    let initial = dpa.initial;
    (dpa, Game { owner, edges, initial })
}

/// Whether the environment strategy of `r` defeats every controller: the
/// plays it allows, as words, contain no model of `f`.
fn env_certificate(f: &Formula, p: &SignalPartition, dpa: &Automaton, g: &Game, r: &synthkit::game::SolveResult) -> bool {
    let aps = p.alphabet();
    let (ni, no) = (p.inputs.len(), p.outputs.len());
    let n = dpa.num_states();
    let mut plays = Automaton::new(aps.clone(), n, Acceptance::all());
    plays.initial = dpa.initial;
    for d in 0..n {
        if r.winner[d] != Owner::Env {
            continue;
        }
        let Some(k) = r.env_strategy[d] else { return false };
        let x = (g.edges[d][k].1 - n) as u64 & ((1 << ni) - 1);
        for o in 0..1u64 << no {
            let letter = x | o << ni;
            let e = dpa.edges[d].iter().find(|e| e.label.eval(letter)).expect("complete automaton");
            if r.winner[e.dst] != Owner::Env {
                return false;
            }
            plays.add_edge(d, letter_cube(full_mask(aps.len()), letter), ColorSet::EMPTY, e.dst);
        }
    }
    plays.update_flags();
    is_empty(&product(&plays, &nba_of(f, &aps)).expect("same alphabet"))
}

/// Finite-word profile of an NBA: `m[p * n + q]` is 0 (no path), 1 (a
/// path) or 2 (a path through an accepting edge).
type Profile = Vec<u8>;

fn compose(a: &Profile, b: &Profile, n: usize) -> Profile {
    let mut m = vec![0u8; n * n];
    for p in 0..n {
        for q in 0..n {
            let x = a[p * n + q];
            if x == 0 {
                continue;
            }
            for r in 0..n {
                let y = b[q * n + r];
                if y != 0 && x.max(y) > m[p * n + r] {
                    m[p * n + r] = x.max(y);
                }
            }
        }
    }
    m
}

/// Profiles of all finite words over the alphabet of `nba`, closed under
/// appending a letter. Index 0 is the empty word.
struct Profiles {
    n: usize,
    all: Vec<Profile>,
    /// `times[k][w]`: profile of word `k` followed by letter `w`.
    times: Vec<Vec<usize>>,
    index: HashMap<Profile, usize>,
}

impl Profiles {
    fn new(nba: &Automaton) -> Result<Profiles, String> {
        let n = nba.num_states();
        let letters = 1u64 << nba.aps.len();
        let gens: Vec<Profile> = (0..letters)
            .map(|w| {
                let mut m = vec![0u8; n * n];
                for (p, es) in nba.edges.iter().enumerate() {
                    for e in es.iter().filter(|e| e.label.eval(w)) {
                        let v = if e.colors.contains(0) { 2 } else { 1 };
                        m[p * n + e.dst] = m[p * n + e.dst].max(v);
                    }
                }
                m
            })
            .collect();
        let mut eps = vec![0u8; n * n];
        for q in 0..n {
            eps[q * n + q] = 1;
        }
        let mut pr = Profiles { n, all: vec![eps.clone()], times: Vec::new(), index: HashMap::from([(eps, 0)]) };
        let mut k = 0;
        while k < pr.all.len() {
            let mut row = Vec::with_capacity(gens.len());
            for g in &gens {
                let c = compose(&pr.all[k], g, n);
                row.push(pr.intern(c)?);
            }
            pr.times.push(row);
            k += 1;
        }
        Ok(pr)
    }

    fn intern(&mut self, c: Profile) -> Result<usize, String> {
        if let Some(&id) = self.index.get(&c) {
            return Ok(id);
        }
        if self.all.len() >= PROFILE_CAP {
            return Err(format!("more than {PROFILE_CAP} profiles"));
        }
        self.index.insert(c.clone(), self.all.len());
        self.all.push(c);
        Ok(self.all.len() - 1)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.all[a], &self.all[b], self.n)]
    }

    /// The idempotent power of profile `t`.
    fn idempotent_power(&self, t: usize) -> usize {
        let mut x = t;
        while self.mul(x, x) != x {
            x = self.mul(x, t);
        }
        x
    }
}

/// Successor and parity rank of a deterministic complete automaton on the
/// letter `w`. The rank is the color plus one, or 0 when uncolored.
fn det_step(det: &Automaton, s: usize, w: u64) -> (usize, u32) {
    let e = det.edges[s].iter().find(|e| e.label.eval(w)).expect("complete");
    (e.dst, e.colors.max().map_or(0, |c| c + 1))
}

/// Whether every word of the deterministic complete parity automaton `det`
/// is accepted by `nba`, by Ramsey-based profiles. A word `u v^ω` where `v`
/// loops on a state `d` of `det` has prefix profile `S` and loop profile
/// `T`; taking powers of `v`, `T` is idempotent and `S T = S`, and `nba`
/// accepts exactly when some `q` reachable under `S` has an accepting
/// `T`-loop.
fn det_within_nba(det: &Automaton, nba: &Automaton) -> Result<bool, String> {
    let pr = Profiles::new(nba)?;
    let letters = 1u64 << nba.aps.len();
    let q0 = nba.initial;
    let n = pr.n;
    let mut idem: HashMap<usize, usize> = HashMap::new();
    // prefix profiles reaching each state of det
    let mut prefixes: Vec<HashSet<usize>> = vec![HashSet::new(); det.num_states()];
    let mut stack = vec![(det.initial, 0usize)];
    prefixes[det.initial].insert(0);
    while let Some((d, s)) = stack.pop() {
        for w in 0..letters {
            let (e, _) = det_step(det, d, w);
            let t = pr.times[s][w as usize];
            if prefixes[e].insert(t) {
                stack.push((e, t));
            }
        }
    }
    for d in 0..det.num_states() {
        if prefixes[d].is_empty() {
            continue;
        }
        // nonempty words looping on d with their profile and maximal rank
        let mut seen: HashSet<(usize, usize, u32)> = HashSet::new();
        let mut stack: Vec<(usize, usize, u32)> = Vec::new();
        for w in 0..letters {
            let (e, r) = det_step(det, d, w);
            let item = (e, pr.times[0][w as usize], r);
            if seen.insert(item) {
                stack.push(item);
            }
        }
        let mut loops: HashSet<(usize, u32)> = HashSet::new();
        while let Some((e, t, m)) = stack.pop() {
            if e == d {
                loops.insert((t, m));
            }
            for w in 0..letters {
                let (f, r) = det_step(det, e, w);
                let item = (f, pr.times[t][w as usize], m.max(r));
                if seen.insert(item) {
                    stack.push(item);
                }
            }
        }
        // max-odd parity with uncolored ranking below 0: rank r accepts iff even
        for &(t, _) in loops.iter().filter(|(_, m)| m % 2 == 0) {
            let t = *idem.entry(t).or_insert_with(|| pr.idempotent_power(t));
            for &s in &prefixes[d] {
                let st = pr.mul(s, t);
                let accepted = (0..n).any(|q| pr.all[st][q0 * n + q] > 0 && pr.all[t][q * n + q] == 2);
                if !accepted {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Language equality of a Büchi automaton and a deterministic complete
/// parity automaton: both differences are empty.
fn nba_equal(nba: &Automaton, det: &Automaton) -> Result<bool, String> {
    let not_det = complement_parity(det).map_err(|e| e.to_string())?;
    Ok(is_empty(&product(nba, &not_det).unwrap()) && det_within_nba(det, nba)?)
}

/// Language equality of two deterministic complete automata by exact
/// emptiness of both differences.
fn det_equal(a: &Automaton, b: &Automaton) -> bool {
    let ca = complement_deterministic(a).expect("deterministic complete");
    let cb = complement_deterministic(b).expect("deterministic complete");
    is_empty(&product(a, &cb).expect("same alphabet")) && is_empty(&product(b, &ca).expect("same alphabet"))
}

/// Fewest distinct colors of a recoloring that keeps the parity of the
/// maximal color on every strongly connected set of edges.
fn brute_force_min_colors(a: &Automaton) -> u32 {
    let edges: Vec<(usize, usize)> =
        a.edges.iter().enumerate().flat_map(|(s, es)| es.iter().map(move |e| (s, e.dst))).collect();
    let colors: Vec<u32> = a.edges.iter().flatten().map(parity_color).collect();
    let m = edges.len();
    assert!(m <= 16, "too many edges for subset enumeration");
    // constraints grouped by their last edge
    let mut by_last: Vec<Vec<(u32, u32)>> = vec![Vec::new(); m];
    let mut constrained = vec![false; m];
    for mask in 1u32..1 << m {
        if strongly_connected(&edges, mask, a.num_states()) {
            let parity = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| colors[i]).max().unwrap() % 2;
            let last = 31 - mask.leading_zeros() as usize;
            by_last[last].push((mask, parity));
            for (i, c) in constrained.iter_mut().enumerate() {
                *c |= mask >> i & 1 == 1;
            }
        }
    }
    fn assign(i: usize, vals: &mut [u32], range: (u32, u32), by_last: &[Vec<(u32, u32)>], constrained: &[bool]) -> bool {
        if i == vals.len() {
            return true;
        }
        let choices: Vec<u32> = if constrained[i] { (range.0..range.1).collect() } else { vec![range.0] };
        for v in choices {
            vals[i] = v;
            let ok = by_last[i].iter().all(|&(mask, parity)| {
                (0..vals.len()).filter(|j| mask >> j & 1 == 1).map(|j| vals[j]).max().unwrap() % 2 == parity
            });
            if ok && assign(i + 1, vals, range, by_last, constrained) {
                return true;
            }
        }
        false
    }
    for k in 1.. {
        for base in [0, 1] {
            let mut vals = vec![0; m];
            if assign(0, &mut vals, (base, base + k), &by_last, &constrained) {
                return k;
            }
        }
    }
    unreachable!()
}

fn strongly_connected(edges: &[(usize, usize)], mask: u32, n: usize) -> bool {
    let sel: Vec<(usize, usize)> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
    let mut touched = vec![false; n];
    for &(s, d) in &sel {
        touched[s] = true;
        touched[d] = true;
    }
    let reach = |forward: bool| {
        let start = sel[0].0;
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(s, d) in &sel {
                let (from, to) = if forward { (s, d) } else { (d, s) };
                if from == v && !seen[to] {
                    seen[to] = true;
                    stack.push(to);
                }
            }
        }
        seen
    };
    let (f, b) = (reach(true), reach(false));
    (0..n).all(|v| !touched[v] || (f[v] && b[v]))
}

/// Per state and input letter of a one-input, one-output machine: the set
/// of allowed output values (bit 0: `o` false, bit 1: `o` true) and the
/// destination.
type IsmmTable = Vec<[Option<(u8, usize)>; 2]>;

fn ismm_table(m: &MealyMachine) -> IsmmTable {
    m.transitions
        .iter()
        .map(|ts| {
            let cell = |x: u64| {
                ts.iter().find(|t| t.input.eval(x)).map(|t| {
                    let allowed = u8::from(t.output.eval(0)) | u8::from(t.output.eval(2)) << 1;
                    (allowed, t.dst)
                })
            };
            [cell(1), cell(0)]
        })
        .collect()
}

/// Fewest states of a machine refining `m`, by searching closed covers of
/// jointly compatible state sets.
fn brute_force_min_states(m: &MealyMachine) -> usize {
    let t = ismm_table(m);
    let n = t.len();
    let compatible = |set: u32| {
        (0..2).all(|x| {
            (0..n).filter(|s| set >> s & 1 == 1).filter_map(|s| t[s][x]).fold(3u8, |acc, (a, _)| acc & a) != 0
        })
    };
    let succ = |set: u32, x: usize| {
        (0..n).filter(|s| set >> s & 1 == 1).filter_map(|s| t[s][x]).fold(0u32, |acc, (_, d)| acc | 1 << d)
    };
    let classes: Vec<u32> = (1u32..1 << n).filter(|&c| compatible(c)).collect();
    fn search(
        chosen: &mut Vec<u32>,
        k: usize,
        init: u32,
        classes: &[u32],
        succ: &dyn Fn(u32, usize) -> u32,
    ) -> bool {
        let mut needs = vec![init];
        for &c in chosen.iter() {
            for x in 0..2 {
                let s = succ(c, x);
                if s != 0 {
                    needs.push(s);
                }
            }
        }
        let Some(&open) = needs.iter().find(|&&s| !chosen.iter().any(|&c| c & s == s)) else {
            return true;
        };
        if chosen.len() == k {
            return false;
        }
        for &c in classes {
            if c & open == open && !chosen.contains(&c) {
                chosen.push(c);
                if search(chosen, k, init, classes, succ) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    (1..=n).find(|&k| search(&mut Vec::new(), k, 1 << m.initial, &classes, &succ)).expect("the machine covers itself")
}

// ------------------------------------------------------------- generators

fn random_letters_label(rng: &mut ChaCha8Rng, num_aps: usize) -> Label {
    let letters = 1u64 << num_aps;
    let set: u64 = rng.gen_range(1..1u64 << letters);
    (0..letters)
        .filter(|w| set >> w & 1 == 1)
        .fold(Label::ff(), |acc, w| acc.or(&letter_cube(full_mask(num_aps), w)))
}

fn aps_named(k: usize) -> Vec<String> {
    ["a", "b", "c"][..k].iter().map(|s| s.to_string()).collect()
}

fn random_nba(rng: &mut ChaCha8Rng) -> Automaton {
    let n = rng.gen_range(1..=NBA_MAX_STATES);
    let num_aps = rng.gen_range(1..=2);
    let mut a = Automaton::new(aps_named(num_aps), n, Acceptance::buchi());
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            let label = random_letters_label(rng, num_aps);
            let colors = if rng.gen_bool(0.35) { ColorSet::single(0) } else { ColorSet::EMPTY };
            a.add_edge(s, label, colors, rng.gen_range(0..n));
        }
    }
    a.update_flags();
    a
}

/// Deterministic complete automaton: per letter a random destination and
/// color set from `color_of`, joining letters with equal targets.
fn random_det(
    rng: &mut ChaCha8Rng,
    n: usize,
    num_aps: usize,
    acc: Acceptance,
    color_of: &mut dyn FnMut(&mut ChaCha8Rng) -> ColorSet,
) -> Automaton {
    let mut a = Automaton::new(aps_named(num_aps), n, acc);
    for s in 0..n {
        let mut row: Vec<Edge> = Vec::new();
        for w in 0..1u64 << num_aps {
            let (dst, colors) = (rng.gen_range(0..n), color_of(rng));
            let l = letter_cube(full_mask(num_aps), w);
            match row.iter_mut().find(|e| e.dst == dst && e.colors == colors) {
                Some(e) => e.label = e.label.or(&l),
                None => row.push(Edge { label: l, colors, dst }),
            }
        }
        a.edges[s] = row;
    }
    a.update_flags();
    a
}

fn random_cond(rng: &mut ChaCha8Rng, k: u32, depth: u32) -> AccCond {
    if depth == 0 || rng.gen_bool(0.4) {
        let c = rng.gen_range(0..k);
        return if rng.gen_bool(0.5) { AccCond::Inf(c) } else { AccCond::Fin(c) };
    }
    let parts: Vec<AccCond> = (0..rng.gen_range(2..=3)).map(|_| random_cond(rng, k, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        AccCond::and(parts)
    } else {
        AccCond::or(parts)
    }
}

fn random_el(rng: &mut ChaCha8Rng) -> Automaton {
    let n = rng.gen_range(1..=EL_MAX_STATES);
    let num_aps = rng.gen_range(1..=2);
    let k = rng.gen_range(1..=EL_MAX_COLORS);
    let cond = random_cond(rng, k, 2);
    random_det(rng, n, num_aps, Acceptance::new(k, cond), &mut |r| {
        ColorSet::from_colors((0..k).filter(|_| r.gen_bool(0.35)))
    })
}

fn random_dpa(rng: &mut ChaCha8Rng, num_aps: usize) -> Automaton {
    let n = rng.gen_range(1..=DPA_MAX_STATES);
    random_det(rng, n, num_aps, Acceptance::parity_max_odd(DPA_MAX_COLORS), &mut |r| {
        ColorSet::single(r.gen_range(0..DPA_MAX_COLORS))
    })
    .trim()
}

fn random_arena(rng: &mut ChaCha8Rng) -> Game {
    let n = rng.gen_range(2..=ARENA_MAX_STATES);
    let owner = (0..n).map(|_| if rng.gen_bool(0.5) { Owner::Env } else { Owner::Ctrl }).collect();
    let edges = (0..n)
        .map(|_| {
            (0..rng.gen_range(1..=ARENA_MAX_DEGREE))
                .map(|_| (Some(rng.gen_range(0..ARENA_MAX_COLORS)), rng.gen_range(0..n)))
                .collect()
        })
        .collect();
    Game { owner, edges, initial: 0 }
}

fn random_ismm(rng: &mut ChaCha8Rng) -> MealyMachine {
    let n = rng.gen_range(2..=ISMM_MAX_STATES);
    let aps = vec!["i".to_string(), "o".to_string()];
    let mut m = MealyMachine::new(aps, 1, 2, n);
    for s in 0..n {
        for x in [true, false] {
            if rng.gen_bool(0.2) {
                continue;
            }
            let output = match rng.gen_range(0..3) {
                0 => Label::tt(),
                1 => Label::literal(1, true),
                _ => Label::literal(1, false),
            };
            m.transitions[s].push(MealyTransition { input: Label::literal(0, x), output, dst: rng.gen_range(0..n) });
        }
    }
    m.trim()
}

// -------------------------------------------------------------- criteria

fn corpus_stats() -> String {
    let dec = CORPUS.iter().filter(|c| parse_ltl(c.0).unwrap().conjuncts().len() > 1).count();
    format!("{} specs ({} conjunctions)", CORPUS.len(), dec)
}

fn criterion_1() -> Check {
    if CORPUS.len() < CORPUS_MIN {
        return Err(format!("corpus has {} specs, need {CORPUS_MIN}", CORPUS.len()));
    }
    let mut elapsed = Duration::ZERO;
    for &(text, ins, outs, expected) in CORPUS {
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let p = partition(ins, outs);
        let start = Instant::now();
        let report = synthesize(&f, &p, &PipelineConfig::default()).map_err(|e| format!("{text}: {e}"))?;
        elapsed += start.elapsed();
        let (dpa, game) = explicit_game(&f, &p);
        let r = brute_force_solve(&game).map_err(|e| format!("{text}: {e}"))?;
        let oracle = r.initial_winner(&game) == Owner::Ctrl;
        if oracle != expected {
            return Err(format!("{text}: brute-force solver disagrees with the hand verdict"));
        }
        if report.verdict != verdict_of(oracle) {
            return Err(format!("{text}: pipeline says {:?}, brute force {oracle}", report.verdict));
        }
        if !oracle && !env_certificate(&f, &p, &dpa, &game, &r) {
            return Err(format!("{text}: environment strategy does not refute the specification"));
        }
    }
    if elapsed > CORPUS_TIME {
        return Err(format!("corpus took {elapsed:?}"));
    }
    Ok(format!("{} matched, pipeline time {:.2}s", corpus_stats(), elapsed.as_secs_f64()))
}

fn criterion_2() -> Check {
    let configs = [
        PipelineConfig::default(),
        PipelineConfig { algo: Algo::Sd, bypass: false, simplify: Simplify::Both, ..PipelineConfig::default() },
        PipelineConfig { decompose: false, simplify: Simplify::Sat, dontcare: true, ..PipelineConfig::default() },
        PipelineConfig { simplify: Simplify::None, workers: 2, ..PipelineConfig::default() },
    ];
    let start = Instant::now();
    let mut circuits = 0;
    for &(text, ins, outs, expected) in CORPUS.iter().filter(|c| c.3) {
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let p = partition(ins, outs);
        for cfg in &configs {
            let report = synthesize(&f, &p, cfg).map_err(|e| format!("{text}: {e}"))?;
            if report.verdict != verdict_of(expected) {
                return Err(format!("{text}: wrong verdict"));
            }
            let c = report.circuit.ok_or_else(|| format!("{text}: no circuit"))?;
            c.check().map_err(|e| format!("{text}: malformed circuit: {e}"))?;
            if !verify_circuit(&c, &f, &p).map_err(|e| format!("{text}: {e}"))? {
                return Err(format!("{text}: circuit violates the specification ({cfg:?})"));
            }
            circuits += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed > VERIFY_TIME {
        return Err(format!("verification took {elapsed:?}"));
    }
    Ok(format!("{circuits} circuits verified in {:.2}s", elapsed.as_secs_f64()))
}

fn criterion_3() -> Check {
    let variants = [
        (Algo::Ds, true, true),
        (Algo::Ds, false, true),
        (Algo::Sd, true, true),
        (Algo::Sd, false, true),
        (Algo::Ds, false, false),
        (Algo::Sd, false, false),
    ];
    let mut bypassed = 0;
    for &(text, ins, outs, _) in CORPUS {
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let p = partition(ins, outs);
        let mut verdicts = Vec::new();
        for &(algo, bypass, decompose) in &variants {
            let cfg = PipelineConfig { algo, bypass, decompose, realizability_only: true, ..PipelineConfig::default() };
            let r = synthesize(&f, &p, &cfg).map_err(|e| format!("{text}: {e}"))?;
            if bypass && r.methods.contains(&synthkit::pipeline::Method::Bypass) {
                bypassed += 1;
            }
            verdicts.push(r.verdict);
        }
        if verdicts.iter().any(|v| *v != verdicts[0]) {
            return Err(format!("{text}: verdicts differ: {verdicts:?}"));
        }
    }
    if bypassed == 0 {
        return Err("no specification went through the bypass".into());
    }
    let manifest = std::fs::read_to_string(golden_dir().join("lar.txt")).map_err(|e| e.to_string())?;
    let mut lar = 0;
    for line in manifest.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split('|').map(str::trim).collect();
        let [file, ins, outs, text] = parts[..] else { return Err(format!("bad manifest line `{line}`")) };
        let p = partition(&signal_list(ins), &signal_list(outs));
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let hoa = std::fs::read_to_string(golden_dir().join("hoa").join(file)).map_err(|e| e.to_string())?;
        let a = parse_hoa(&hoa).map_err(|e| format!("{file}: {e}"))?;
        // the automaton is an Emerson–Lei equivalent of the formula
        let aps = p.alphabet();
        let det = a.with_aps(&aps).map_err(|e| e.to_string())?.complete_with_sink(ColorSet::EMPTY);
        let not_det = complement_deterministic(&det).map_err(|e| e.to_string())?;
        let equivalent = is_empty(&product(&nba_of(&f, &aps), &not_det).unwrap())
            && is_empty(&product(&det, &nba_of(&Formula::not(f.clone()), &aps)).unwrap());
        if !equivalent {
            return Err(format!("{file} is not equivalent to {text}"));
        }
        let cfg = PipelineConfig { algo: Algo::Lar, verify: true, ..PipelineConfig::default() };
        let via_lar = synthesize_automaton(&a, &p, &cfg).map_err(|e| format!("{file}: {e}"))?.verdict;
        let via_ds = synthesize(&f, &p, &PipelineConfig::default()).map_err(|e| format!("{text}: {e}"))?.verdict;
        if via_lar != via_ds {
            return Err(format!("{file}: lar {via_lar:?}, ds {via_ds:?}"));
        }
        lar += 1;
    }
    if lar < LAR_MIN {
        return Err(format!("only {lar} Emerson–Lei equivalents"));
    }
    Ok(format!("{} specs x {} variants agree ({bypassed} bypassed), lar agrees on {lar}", CORPUS.len(), variants.len()))
}

fn criterion_4() -> Check {
    if LASSO_FORMULAS.len() < LASSO_FORMULAS_MIN {
        return Err(format!("only {} formulas", LASSO_FORMULAS.len()));
    }
    let aps = aps_named(2);
    let lassos = all_lassos(aps.len(), LASSO_MAX_LEN);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let failures: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (aps, lassos) = (&aps, &lassos);
                scope.spawn(move || {
                    let mut bad = Vec::new();
                    for text in LASSO_FORMULAS.iter().skip(w).step_by(workers) {
                        let f = parse_ltl(text).expect("formula parses");
                        let nba = nba_of(&f, aps);
                        if let Some((pre, per)) = lassos.iter().find(|(pre, per)| {
                            accepts_lasso(&nba, pre, per).expect("nonempty period") != holds_on_lasso(&f, aps, pre, per)
                        }) {
                            bad.push(format!("{text} on {pre:?}({per:?})^w"));
                        }
                    }
                    bad
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
    });
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    Ok(format!("{} formulas x {} lassos", LASSO_FORMULAS.len(), lassos.len()))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    for k in 0..RANDOM_NBAS {
        let nba = random_nba(&mut rng);
        let dpa = determinize_nba(&nba, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        if !(dpa.deterministic && dpa.complete && dpa.acceptance.is_parity()) {
            return Err(format!("NBA {k}: result is not a complete DPA"));
        }
        if !nba_equal(&nba, &dpa)? {
            return Err(format!("NBA {k}: languages differ\n{}", nba.to_hoa()));
        }
        // the oracle must tell a language from its complement
        if nba_equal(&nba, &complement_parity(&dpa).unwrap())? {
            return Err(format!("NBA {k}: oracle accepts the complement"));
        }
    }
    for k in 0..RANDOM_ELS {
        let el = random_el(&mut rng);
        let dpa = car_paritize(&el).map_err(|e| e.to_string())?;
        if !(dpa.deterministic && dpa.complete && dpa.acceptance.is_parity()) {
            return Err(format!("EL {k}: result is not a complete DPA"));
        }
        let exact = is_empty(&product(&dpa, &complement_deterministic(&el).unwrap()).unwrap())
            && is_empty(&product(&el, &complement_parity(&dpa).unwrap()).unwrap());
        if !exact {
            return Err(format!("EL {k}: languages differ\n{}", el.to_hoa()));
        }
    }
    Ok(format!("{RANDOM_NBAS} NBAs determinized, {RANDOM_ELS} Emerson–Lei automata paritized"))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut total_before = 0;
    let mut total_after = 0;
    for k in 0..RANDOM_DPAS {
        let a = random_dpa(&mut rng, 1);
        let m = minimize_colors(&a);
        let used: HashSet<u32> = m.edges.iter().flatten().map(parity_color).collect();
        let oracle = brute_force_min_colors(&a);
        if used.len() as u32 != oracle {
            return Err(format!("DPA {k}: {} colors, minimum {oracle}\n{}", used.len(), a.to_hoa()));
        }
        if minimize_colors(&m) != m {
            return Err(format!("DPA {k}: minimization is not idempotent"));
        }
        if !det_equal(&a, &m) {
            return Err(format!("DPA {k}: language changed"));
        }
        total_before += a.edges.iter().flatten().map(parity_color).collect::<HashSet<_>>().len();
        total_after += used.len();
    }
    Ok(format!("{RANDOM_DPAS} DPAs minimal ({total_before} -> {total_after} colors in total), idempotent"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut ctrl_wins = 0;
    for k in 0..RANDOM_ARENAS {
        let g = random_arena(&mut rng);
        let fast = solve_game(&g).map_err(|e| e.to_string())?;
        let brute = brute_force_solve(&g).map_err(|e| e.to_string())?;
        if fast.winner != brute.winner {
            return Err(format!("arena {k}: winners differ {g:?}"));
        }
        validate_solution(&g, &fast).map_err(|e| format!("arena {k}: {e}"))?;
        validate_solution(&g, &brute).map_err(|e| format!("arena {k} (brute force): {e}"))?;
        ctrl_wins += fast.winner.iter().filter(|w| **w == Owner::Ctrl).count();
    }
    Ok(format!("{RANDOM_ARENAS} arenas, {ctrl_wins} controller vertices, strategies validated"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut machines = 0;
    let mut reduced = 0;
    while machines < ISMMS {
        let m = random_ismm(&mut rng);
        if m.num_states() < 2 {
            continue;
        }
        machines += 1;
        let oracle = brute_force_min_states(&m);
        let sat = minimize_sat(&m, &mut Dpll).map_err(|e| e.to_string())?;
        if sat.num_states() != oracle || !refines(&sat, &m) || !sat.is_input_deterministic() {
            return Err(format!("machine {machines}: {} states (minimum {oracle})\n{}", sat.num_states(), m.render()));
        }
        let sig = simplify_signatures(&m);
        if sig.num_states() > m.num_states() || !refines(&sig, &m) {
            return Err(format!("machine {machines}: signatures produced {} states\n{}", sig.num_states(), m.render()));
        }
        if oracle < m.num_states() {
            reduced += 1;
        }
    }
    Ok(format!("{ISMMS} machines exact ({reduced} reducible), signatures sound"))
}

fn check_split_bounds(ar: &Arena, ni: usize, no: usize) -> Result<(), String> {
    ar.check().map_err(|e| e.to_string())?;
    for s in 0..ar.num_states() {
        let deg = ar.automaton.edges[s].len();
        let bound = if ar.owner[s] == Owner::Env { 1usize << ni } else { 1usize << no };
        if deg > bound {
            return Err(format!("state {s} ({:?}) has out-degree {deg} > {bound}", ar.owner[s]));
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let mut arenas = 0;
    for &(text, ins, outs, _) in CORPUS {
        let f = parse_ltl(text).map_err(|e| e.to_string())?;
        let p = partition(ins, outs);
        let aps = p.alphabet();
        let mask = p.input_mask(&aps);
        let nba = nba_of(&f, &aps).complete_with_sink(ColorSet::EMPTY);
        let dpa = determinize_nba(&nba, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let ds = split_automaton(&dpa, mask).map_err(|e| format!("{text}: {e}"))?;
        let sd_split = split_automaton(&nba, mask).map_err(|e| format!("{text}: {e}"))?;
        let sd = arena_from_split(&determinize_nba(&sd_split.automaton, DEFAULT_STATE_BUDGET).unwrap(), mask)
            .map_err(|e| format!("{text}: {e}"))?;
        for (name, ar) in [("ds", &ds), ("sd", &sd)] {
            check_split_bounds(ar, ins.len(), outs.len()).map_err(|e| format!("{text} ({name}): {e}"))?;
            arenas += 1;
        }
        let merged = ds.minimize_colors().merge_identical_successors();
        check_split_bounds(&merged, ins.len(), outs.len()).map_err(|e| format!("{text} (merged): {e}"))?;
        for (name, ar) in [("ds", &ds), ("merged", &merged)] {
            if !det_equal(&unsplit(ar), &dpa) {
                return Err(format!("{text} ({name}): round trip changes the language"));
            }
        }
        // splitting the NBA keeps its language too
        let rejoined = determinize_nba(&unsplit(&sd_split), DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        if !det_equal(&rejoined, &dpa) {
            return Err(format!("{text}: NBA split round trip changes the language"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for k in 0..50 {
        let a = random_dpa(&mut rng, 2);
        let ar = split_automaton(&a, 1).map_err(|e| e.to_string())?;
        check_split_bounds(&ar, 1, 1).map_err(|e| format!("random DPA {k}: {e}"))?;
        if !det_equal(&unsplit(&ar), &a) {
            return Err(format!("random DPA {k}: round trip changes the language"));
        }
        arenas += 1;
    }
    Ok(format!("{arenas} arenas within bounds, round trips language-equal"))
}

fn criterion_10() -> Check {
    let mut files = 0;
    let mut read = |sub: &str, ext: &str| -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        let dir = golden_dir().join(sub);
        let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| format!("{}: {e}", dir.display()))?
            .map(|e| e.expect("directory entry").path())
            .filter(|p| p.extension().is_some_and(|x| x == ext))
            .collect();
        entries.sort();
        for p in entries {
            out.push((p.display().to_string(), std::fs::read_to_string(&p).map_err(|e| e.to_string())?));
            files += 1;
        }
        Ok(out)
    };
    let hoa = read("hoa", "hoa")?;
    let aag = read("aag", "aag")?;
    for (name, text) in &hoa {
        let a = parse_hoa(text).map_err(|e| format!("{name}: {e}"))?;
        let once = print_hoa(&a);
        let b = parse_hoa(&once).map_err(|e| format!("{name} normalized: {e}"))?;
        if b != a || print_hoa(&b) != once {
            return Err(format!("{name}: HOA round trip is not stable"));
        }
    }
    for (name, text) in &aag {
        let c = parse_aag(text).map_err(|e| format!("{name}: {e}"))?;
        let once = print_aag(&c);
        let d = parse_aag(&once).map_err(|e| format!("{name} normalized: {e}"))?;
        if d != c || print_aag(&d) != once {
            return Err(format!("{name}: aag round trip is not stable"));
        }
    }
    if files < GOLDEN_MIN {
        return Err(format!("only {files} golden files"));
    }
    Ok(format!("{} HOA and {} aag files byte-stable", hoa.len(), aag.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("corpus verdicts match brute force", criterion_1),
        ("synthesized circuits verify", criterion_2),
        ("pipelines and bypass agree", criterion_3),
        ("NBA lasso acceptance matches LTL semantics", criterion_4),
        ("determinization and paritization preserve languages", criterion_5),
        ("color minimization is minimal and idempotent", criterion_6),
        ("parity game winners and strategies", criterion_7),
        ("Mealy machine minimization", criterion_8),
        ("split bounds and round trips", criterion_9),
        ("HOA and aag round trips", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} PASS ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
