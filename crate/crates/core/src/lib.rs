//! Areas, logarithmic capacities and condenser capacities of polynomial
//! lemniscates and preimages, with numerical checks of the inequalities that
//! relate them.

pub mod capacity;
pub mod contour;
pub mod error;
pub mod format;
pub mod polynomial;
pub mod region;
pub mod sampling;
pub mod svg;
pub mod sweep;
pub mod theorems;

pub use error::{Error, Result};
pub use polynomial::Polynomial;
pub use region::{AreaEstimate, AreaMethod, Region, SamplingBudget};
