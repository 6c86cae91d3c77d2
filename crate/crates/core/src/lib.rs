//! Exchange-operator construction of Calogero eigenstates, scattering states and the
//! kernel that maps them onto lowest-Landau-level anyon wavefunctions.

pub mod algebra;
pub mod anyon;
pub mod calogero;
pub mod error;
pub mod kernel_map;
pub mod scattering;

pub use error::{Error, Result};
