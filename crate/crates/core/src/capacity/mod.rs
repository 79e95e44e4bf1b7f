//! Logarithmic capacity, condenser capacity and Schwarz symmetrization.

mod dirichlet;
mod fekete;
mod grid;

use num_complex::Complex64;

pub use dirichlet::{
    condenser_capacity, condenser_capacity_detailed, solve_condenser, solve_on_layout, CondenserRun, CondenserSolution,
    GridLayout, CG_TOLERANCE,
};
pub use fekete::{discrete_diameter, fekete_points, log_capacity, log_capacity_numeric, MIN_POINTS};
pub use grid::{dirichlet_energy, schwarz_symmetrize, GridFunction};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::region::{preimage_region, Region};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMethod {
    ClosedForm,
    Fekete,
    GridDirichlet,
}

impl CapacityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CapacityMethod::ClosedForm => "closed_form",
            CapacityMethod::Fekete => "fekete",
            CapacityMethod::GridDirichlet => "grid_dirichlet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CapacityDetail {
    ClosedForm,
    /// Discrete diameters at `n/4`, `n/2`, `n` and the fitted `log(n)/(n-1)` slope.
    Fekete {
        n: usize,
        candidates: usize,
        diameters: [f64; 3],
        slope: f64,
    },
    GridDirichlet {
        h: f64,
        raw_h: f64,
        raw_2h: f64,
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityEstimate {
    pub value: f64,
    pub err: f64,
    pub method: CapacityMethod,
    pub detail: CapacityDetail,
}

/// A plane condenser: field region `E` (its interior is meant) and plate
/// `B` compactly inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Condenser {
    pub field: Region,
    pub plate: Region,
}

/// Sampling resolution of the nesting check, in cells across `E`.
const NESTING_CELLS: f64 = 256.0;

impl Condenser {
    /// Checks `B ⊂ E` at pixel resolution: every sampled point of `B`, and
    /// its four neighbours one cell away, must lie in `E`.
    pub fn new(field: Region, plate: Region) -> Result<Condenser> {
        let outer = field.bounding_disc();
        let bd = plate.bounding_disc();
        let mut h = 2.0 * outer.radius / NESTING_CELLS;
        let step = h;
        let mut tested = 0usize;
        for _ in 0..6 {
            let n = (2.0 * bd.radius / h).ceil().max(1.0) as usize;
            let origin = bd.center - C::new(1.0, 1.0) * (n as f64 * h / 2.0);
            for j in 0..n {
                for i in 0..n {
                    let z = origin + C::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
                    if !plate.contains(z) {
                        continue;
                    }
                    tested += 1;
                    let probes = [
                        z,
                        z + C::new(step, 0.0),
                        z - C::new(step, 0.0),
                        z + C::new(0.0, step),
                        z - C::new(0.0, step),
                    ];
                    if let Some(bad) = probes.iter().find(|w| !field.contains(**w)) {
                        return Err(Error::NotNested(format!("point {bad} near B lies outside E")));
                    }
                }
            }
            if tested > 0 {
                break;
            }
            h /= 4.0;
        }
        if tested == 0 && !field.contains(bd.center) {
            return Err(Error::NotNested("plate not found inside the field region".into()));
        }
        Ok(Condenser { field, plate })
    }
}

/// `(p^{-1}(E), p^{-1}(B))` for monic `p`; its capacity is `deg p` times
/// that of the original condenser.
pub fn pullback_condenser(p: &Polynomial, condenser: &Condenser) -> Result<Condenser> {
    Condenser::new(
        preimage_region(p, &condenser.field)?,
        preimage_region(p, &condenser.plate)?,
    )
}
