//! Mealy machines extracted from winning strategies, and their
//! simplification.

mod mealy;

pub use mealy::{MealyMachine, MealyTransition};
mod sat;

pub use sat::{parse_solver_output, Dpll, ExternalSolver, SatError, SatModel, SatOutcome, SatProblem, SatSolver};
mod simplify;

pub use simplify::{minimize_sat, refines, simplify_signatures, SimplifyError};
mod bypass;

pub use bypass::{bypass_strategy, classify_edges, BypassError, EdgeClass};
