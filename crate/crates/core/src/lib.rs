//! Sets of naturals whose sumsets `A + B` (finite `B`) and `kA` have a
//! prescribed asymptotic density, with exact finite-horizon verification.

pub mod cli;
pub mod constructions;
pub mod density;
pub mod error;
pub mod greedy;
pub mod numeric;
pub mod oracle;
pub mod sets;

pub use error::{Error, Result};
pub use numeric::{parse_density, DensityTarget, FixedPointReal, IrrationalNumber, Theta};
pub use sets::{FiniteSet, GroundSet, PeriodicSet};
