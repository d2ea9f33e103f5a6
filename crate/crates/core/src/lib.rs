//! Critical points of the two-point Green function on rectangular flat tori,
//! degeneracy thresholds in the p(p)-plane, and conditional stability sets
//! of the associated generalized Lame equation.

pub mod acceptance;
pub mod disks;
pub mod error;
pub mod gle;
pub mod green;
pub mod hitchin;
pub mod kernel;
pub mod lattice;
pub mod ode;
pub mod point;
pub mod stability;

pub use error::{Error, Result};
pub use kernel::{inverse_wp, inverse_wp_real, Segment, WpValues};
pub use lattice::{compute_invariants, LatticeData};
pub use num_complex::Complex64;
pub use point::TorusPoint;
