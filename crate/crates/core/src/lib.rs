//! Reactive synthesis from LTL: translation to Büchi automata,
//! determinization to parity automata, parity games, Mealy machine
//! simplification, and AIGER circuit encoding.

pub mod label;
pub mod ltl;
pub mod automaton;
pub mod graph;
pub mod translate;
pub mod parity;
pub mod game;
pub mod arena;
pub mod strategy;
pub mod aiger;
pub mod pipeline;
