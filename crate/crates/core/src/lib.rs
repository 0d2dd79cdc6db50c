pub mod boundary;
pub mod cli;
pub mod configuration;
pub mod connectivity;
pub mod error;
pub mod lattice;
pub mod unionfind;

pub use boundary::BoundaryCondition;
pub use configuration::{Configuration, EdgeStates, Mask, Restricted};
pub use error::{Error, Result};
pub use lattice::{build_region, dual_region, pstar, solve_critical_point, Direction, DualMap, LatticeSpec, Region, Side, UnitCell};
pub mod exact;
pub use exact::{EventSpec, RcParams};
pub mod dynamics;
pub mod experiments;
pub mod verify;
