//! End-to-end synthesis: decomposition, game construction, solving,
//! strategy extraction and simplification, circuit encoding and
//! verification.

use std::collections::HashMap;

use thiserror::Error;

use crate::aiger::{encode, AigerCircuit, AigerError};
use crate::arena::{arena_from_split, split_automaton, unsplit_strategy, Arena, ArenaError};
use crate::automaton::{accepting_cycle_exists, complement_deterministic, Automaton, ColorSet, ColoredGraph, EmptinessError};
use crate::game::{solve_game, validate_solution, GameError, Owner};
use crate::ltl::{decompose, detect_bypass, Formula, SignalPartition};
use crate::parity::{car_paritize, determinize_nba, CarError, DeterminizeError, DEFAULT_STATE_BUDGET};
use crate::strategy::{
    bypass_strategy, minimize_sat, simplify_signatures, BypassError, Dpll, ExternalSolver, MealyMachine, SatSolver,
    SimplifyError,
};
use crate::translate::ltl_to_nba;

/// Order of splitting and determinization, or paritization of a given
/// deterministic Emerson–Lei automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    /// Determinize, then split.
    Ds,
    /// Split, then determinize.
    Sd,
    /// Color appearance records on a deterministic automaton read from HOA.
    Lar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Simplify {
    None,
    Signatures,
    Sat,
    Both,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub algo: Algo,
    pub realizability_only: bool,
    pub decompose: bool,
    pub bypass: bool,
    pub simplify: Simplify,
    pub verify: bool,
    /// Value of outputs left unspecified by the strategy.
    pub dontcare: bool,
    pub workers: usize,
    /// External DIMACS solver command; the built-in DPLL when absent.
    pub sat_solver: Option<String>,
    /// Collect a dump of every arena solved.
    pub debug_arena: bool,
    pub state_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            algo: Algo::Ds,
            realizability_only: false,
            decompose: true,
            bypass: true,
            simplify: Simplify::Signatures,
            verify: false,
            dontcare: false,
            workers: 1,
            sat_solver: None,
            debug_arena: false,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Realizable,
    Unrealizable,
}

/// How a component was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Bypass,
    Game,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    /// Present when realizable and not in realizability-only mode.
    pub circuit: Option<AigerCircuit>,
    pub machines: Vec<MealyMachine>,
    pub methods: Vec<Method>,
    pub arena_dumps: Vec<String>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("state budget exhausted: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("synthesized circuit violates the specification")]
    VerificationFailed,
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<DeterminizeError> for PipelineError {
    fn from(e: DeterminizeError) -> Self {
        match e {
            DeterminizeError::StateBudget(_) => PipelineError::Budget(e.to_string()),
            DeterminizeError::NotBuchi => PipelineError::Internal(e.to_string()),
        }
    }
}

impl From<CarError> for PipelineError {
    fn from(e: CarError) -> Self {
        match e {
            CarError::ColorBudget(_) => PipelineError::Budget(e.to_string()),
            CarError::NotDeterministic => PipelineError::Input(e.to_string()),
        }
    }
}

impl From<ArenaError> for PipelineError {
    fn from(e: ArenaError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<GameError> for PipelineError {
    fn from(e: GameError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<AigerError> for PipelineError {
    fn from(e: AigerError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<SimplifyError> for PipelineError {
    fn from(e: SimplifyError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<VerifyError> for PipelineError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Budget(_) => PipelineError::Budget(e.to_string()),
            _ => PipelineError::Internal(e.to_string()),
        }
    }
}

/// Outcome of one component.
struct Component {
    realizable: bool,
    machine: Option<MealyMachine>,
    method: Method,
    dump: Option<String>,
}

/// Synthesizes a controller for `f` under the partition `p`.
pub fn synthesize(f: &Formula, p: &SignalPartition, cfg: &PipelineConfig) -> Result<Report, PipelineError> {
    p.check_covers(f).map_err(|e| PipelineError::Input(e.to_string()))?;
    if cfg.algo == Algo::Lar {
        return Err(PipelineError::Input("--algo=lar reads a deterministic automaton from HOA".into()));
    }
    let parts: Vec<(Formula, SignalPartition)> = if cfg.decompose {
        decompose(f, p)
            .into_iter()
            .map(|s| {
                let sp = SignalPartition::new(&s.inputs, &s.outputs).expect("component signals are disjoint");
                (s.formula, sp)
            })
            .collect()
    } else {
        vec![(f.clone(), p.clone())]
    };
    let results = run_components(&parts, cfg)?;
    let mut report = Report {
        verdict: Verdict::Realizable,
        circuit: None,
        machines: Vec::new(),
        methods: Vec::new(),
        arena_dumps: Vec::new(),
    };
    for c in results {
        report.methods.push(c.method);
        report.arena_dumps.extend(c.dump);
        if !c.realizable {
            report.verdict = Verdict::Unrealizable;
            return Ok(report);
        }
        report.machines.extend(c.machine);
    }
    if !cfg.realizability_only {
        let circuit = encode(&report.machines, p, cfg.dontcare)?;
        if cfg.verify && !verify_circuit(&circuit, f, p)? {
            return Err(PipelineError::VerificationFailed);
        }
        report.circuit = Some(circuit);
    }
    Ok(report)
}

/// Solves components on up to `cfg.workers` threads. Results come back in
/// component order; with one worker, an unrealizable component stops the
/// remaining ones.
fn run_components(parts: &[(Formula, SignalPartition)], cfg: &PipelineConfig) -> Result<Vec<Component>, PipelineError> {
    let workers = cfg.workers.max(1).min(parts.len().max(1));
    if workers == 1 {
        let mut out = Vec::new();
        for (f, p) in parts {
            let c = solve_component(f, p, cfg)?;
            let stop = !c.realizable;
            out.push(c);
            if stop {
                break;
            }
        }
        return Ok(out);
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let failed = std::sync::atomic::AtomicBool::new(false);
    let slots: Vec<std::sync::Mutex<Option<Result<Component, PipelineError>>>> =
        parts.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                use std::sync::atomic::Ordering;
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= parts.len() || failed.load(Ordering::SeqCst) {
                    break;
                }
                let r = solve_component(&parts[k].0, &parts[k].1, cfg);
                if !matches!(r, Ok(Component { realizable: true, .. })) {
                    failed.store(true, Ordering::SeqCst);
                }
                *slots[k].lock().expect("slot lock") = Some(r);
            });
        }
    });
    let mut out = Vec::new();
    for slot in slots {
        match slot.into_inner().expect("slot lock") {
            Some(r) => {
                let c = r?;
                let stop = !c.realizable;
                out.push(c);
                if stop {
                    break;
                }
            }
            // skipped after a failure elsewhere
            None => continue,
        }
    }
    Ok(out)
}

fn solve_component(f: &Formula, p: &SignalPartition, cfg: &PipelineConfig) -> Result<Component, PipelineError> {
    if cfg.bypass {
        if let Some(pattern) = detect_bypass(f, p) {
            match bypass_strategy(&pattern, p) {
                Ok((realizable, machine)) => {
                    let machine = machine.map(|m| simplify(&m, cfg)).transpose()?;
                    return Ok(Component { realizable, machine, method: Method::Bypass, dump: None });
                }
                Err(BypassError::NotRecurrence | BypassError::Inconclusive) => {}
                Err(BypassError::Determinize(e)) => return Err(e.into()),
                Err(BypassError::InvalidPattern) => return Err(PipelineError::Internal("bypass pattern".into())),
            }
        }
    }
    let aps = p.alphabet();
    let inputs = p.input_mask(&aps);
    // a rejecting sink makes the automaton complete, as splitting requires
    let nba = ltl_to_nba(f, &aps).complete_with_sink(ColorSet::EMPTY);
    let arena = match cfg.algo {
        Algo::Ds => split_automaton(&determinize_nba(&nba, cfg.state_budget)?, inputs)?,
        Algo::Sd => {
            let split = split_automaton(&nba, inputs)?;
            arena_from_split(&determinize_nba(&split.automaton, cfg.state_budget)?, inputs)?
        }
        Algo::Lar => unreachable!("handled by synthesize_automaton"),
    };
    solve_arena(arena, cfg)
}

fn solve_arena(arena: Arena, cfg: &PipelineConfig) -> Result<Component, PipelineError> {
    let arena = arena.minimize_colors().merge_identical_successors();
    let dump = cfg.debug_arena.then(|| arena.debug_dump());
    let game = arena.to_game();
    let result = solve_game(&game)?;
    if result.winner[game.initial] == Owner::Env {
        validate_solution(&game, &result).map_err(PipelineError::Internal)?;
        return Ok(Component { realizable: false, machine: None, method: Method::Game, dump });
    }
    if cfg.realizability_only {
        return Ok(Component { realizable: true, machine: None, method: Method::Game, dump });
    }
    let machine = unsplit_strategy(&arena, &result.strategy)?;
    let machine = simplify(&machine, cfg)?;
    Ok(Component { realizable: true, machine: Some(machine), method: Method::Game, dump })
}

fn simplify(m: &MealyMachine, cfg: &PipelineConfig) -> Result<MealyMachine, PipelineError> {
    let mut solver: Box<dyn SatSolver> = match &cfg.sat_solver {
        Some(cmd) => Box::new(
            ExternalSolver::from_command(cmd).ok_or_else(|| PipelineError::Input("empty SAT solver command".into()))?,
        ),
        None => Box::new(Dpll),
    };
    Ok(match cfg.simplify {
        Simplify::None => m.clone(),
        Simplify::Signatures => simplify_signatures(m),
        Simplify::Sat => minimize_sat(m, solver.as_mut())?,
        Simplify::Both => minimize_sat(&simplify_signatures(m), solver.as_mut())?,
    })
}

/// Synthesis from a deterministic Emerson–Lei automaton whose language is
/// the specification, through color appearance records.
pub fn synthesize_automaton(a: &Automaton, p: &SignalPartition, cfg: &PipelineConfig) -> Result<Report, PipelineError> {
    let aps = p.alphabet();
    let a = a.with_aps(&aps).map_err(|e| PipelineError::Input(e.to_string()))?;
    if !a.deterministic {
        return Err(PipelineError::Input("the automaton is not deterministic".into()));
    }
    let dpa = car_paritize(&a)?;
    let dpa = crate::parity::compress_automaton_colors(&dpa).complete_with_sink(ColorSet::single(0));
    let arena = split_automaton(&dpa, p.input_mask(&aps))?;
    let c = solve_arena(arena, cfg)?;
    let mut report = Report {
        verdict: if c.realizable { Verdict::Realizable } else { Verdict::Unrealizable },
        circuit: None,
        machines: c.machine.into_iter().collect(),
        methods: vec![c.method],
        arena_dumps: c.dump.into_iter().collect(),
    };
    if c.realizable && !cfg.realizability_only {
        let circuit = encode(&report.machines, p, cfg.dontcare)?;
        if cfg.verify {
            let bad = complement_deterministic(&a.complete_with_sink(ColorSet::EMPTY))
                .map_err(|e| PipelineError::Internal(e.to_string()))?;
            if !verify_against(&circuit, &bad, p)? {
                return Err(PipelineError::VerificationFailed);
            }
        }
        report.circuit = Some(circuit);
    }
    Ok(report)
}

/// Maximum number of circuit states explored by verification.
pub const VERIFY_STATE_BUDGET: usize = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("circuit signals do not match the partition")]
    Signals,
    #[error("more than {0} reachable circuit states")]
    Budget(usize),
    #[error(transparent)]
    Emptiness(#[from] EmptinessError),
}

/// Whether every behavior of the circuit, read as a Mealy machine where
/// the environment moves first, satisfies `f`.
pub fn verify_circuit(c: &AigerCircuit, f: &Formula, p: &SignalPartition) -> Result<bool, VerifyError> {
    let bad = ltl_to_nba(&Formula::not(f.clone()), &p.alphabet());
    verify_against(c, &bad, p)
}

/// Whether the circuit has no behavior accepted by `bad`, an automaton
/// over `p.alphabet()`.
pub fn verify_against(c: &AigerCircuit, bad: &Automaton, p: &SignalPartition) -> Result<bool, VerifyError> {
    if c.inputs != p.inputs || c.outputs.iter().map(|o| &o.1).ne(p.outputs.iter()) || bad.aps != p.alphabet() {
        return Err(VerifyError::Signals);
    }
    let ni = p.inputs.len();
    // reachable circuit states and their transitions
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut states = vec![vec![false; c.latches.len()]];
    index.insert(states[0].clone(), 0);
    let mut moves: Vec<Vec<(u64, usize)>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let mut row = Vec::with_capacity(1 << ni);
        for bits in 0u64..(1u64 << ni) {
            let ins: Vec<bool> = (0..ni).map(|v| bits >> v & 1 == 1).collect();
            let (outs, next) = c.step(&states[k], &ins);
            let letter = outs.iter().enumerate().fold(bits, |acc, (j, &o)| acc | u64::from(o) << (ni + j));
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= VERIFY_STATE_BUDGET {
                        return Err(VerifyError::Budget(VERIFY_STATE_BUDGET));
                    }
                    states.push(next.clone());
                    index.insert(next, states.len() - 1);
                    states.len() - 1
                }
            };
            row.push((letter, id));
        }
        moves.push(row);
        k += 1;
    }
    // product with the automaton of bad behaviors
    let q = bad.num_states();
    let node = |s: usize, a: usize| s * q + a;
    let mut g = ColoredGraph { succ: vec![Vec::new(); states.len() * q], initial: node(0, bad.initial) };
    for (s, row) in moves.iter().enumerate() {
        for a in 0..q {
            let mut succ = Vec::new();
            for &(letter, t) in row {
                for e in &bad.edges[a] {
                    if e.label.eval(letter) {
                        succ.push((e.colors, node(t, e.dst)));
                    }
                }
            }
            g.succ[node(s, a)] = succ;
        }
    }
    Ok(!accepting_cycle_exists(&g, &bad.acceptance)?)
}
