//! Integer Hamiltonian cellular automata: exact evolution, conservation and
//! variational audits, and the sampling bridge to continuous time.

pub mod conservation;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod io;
pub mod nonlinear;
pub mod sampling;
pub mod variational;

pub use dynamics::{
    central_difference, evolve, evolve_backward, hamiltonian_value, step_backward, step_forward,
    to_state_vector, AutomatonState, CouplingTensor, Evolution, HamiltonianSpec, Lapse, Monomial,
    Remainder, Trajectory, Variable,
};
pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
