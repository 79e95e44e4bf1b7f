//! Logarithmic capacity from discrete point energies.
//!
//! Boundary candidates are sampled densely, a Leja sequence is built
//! greedily over them and then improved by coordinate-ascent sweeps on the
//! Vandermonde product. The discrete diameters `d_m` at `m = n/4, n/2, n`
//! are fitted to `log d_m = log cap + c log(m)/(m-1)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{CapacityDetail, CapacityEstimate, CapacityMethod};
use crate::error::{Error, Result};
use crate::region::Region;
use crate::sampling::CompensatedSum;

type C = Complex64;

pub const MIN_POINTS: usize = 16;
pub const SWEEPS: usize = 3;
/// Boundary candidates per optimized point.
pub const CANDIDATES_PER_POINT: usize = 32;

fn log_dist(a: C, b: C) -> f64 {
    // Coincident points get a large finite penalty so sums stay finite.
    0.5 * (a - b).norm_sqr().max(1e-300).ln()
}

/// `d_n = exp(-E_n)` with `E_n = 2/(n(n-1)) sum_{i<j} -log|z_i - z_j|`.
pub fn discrete_diameter(points: &[C]) -> f64 {
    let n = points.len();
    assert!(n >= 2, "need at least two points");
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = CompensatedSum::default();
            for j in (i + 1)..n {
                s.add(log_dist(points[i], points[j]));
            }
            s.value()
        })
        .collect();
    let total: CompensatedSum = rows.into_iter().collect();
    (2.0 * total.value() / (n as f64 * (n as f64 - 1.0))).exp()
}

/// Near-Fekete configuration of `n` points drawn from `candidates`.
pub fn fekete_points(candidates: &[C], n: usize, sweeps: usize) -> Vec<C> {
    let m = candidates.len();
    assert!(m >= n && n >= 2);
    let centroid = candidates.iter().sum::<C>() / m as f64;
    let first = (0..m)
        .max_by(|&a, &b| {
            (candidates[a] - centroid)
                .norm_sqr()
                .total_cmp(&(candidates[b] - centroid).norm_sqr())
        })
        .unwrap();

    let mut potential = vec![0.0; m];
    let mut chosen = vec![false; m];
    let mut picks = Vec::with_capacity(n);

    let add = |potential: &mut [f64], z: C, sign: f64| {
        potential
            .par_iter_mut()
            .zip(candidates.par_iter())
            .for_each(|(u, &c)| *u += sign * log_dist(c, z));
    };
    let best_free = |potential: &[f64], chosen: &[bool]| {
        (0..m)
            .filter(|&k| !chosen[k])
            .max_by(|&a, &b| potential[a].total_cmp(&potential[b]).then(b.cmp(&a)))
            .unwrap()
    };

    picks.push(first);
    chosen[first] = true;
    add(&mut potential, candidates[first], 1.0);
    while picks.len() < n {
        let k = best_free(&potential, &chosen);
        picks.push(k);
        chosen[k] = true;
        add(&mut potential, candidates[k], 1.0);
    }

    for _ in 0..sweeps {
        let mut moved = false;
        for slot in picks.iter_mut() {
            let old = *slot;
            add(&mut potential, candidates[old], -1.0);
            chosen[old] = false;
            let mut best = best_free(&potential, &chosen);
            if potential[best] <= potential[old] {
                best = old;
            }
            if best != old {
                moved = true;
            }
            *slot = best;
            chosen[best] = true;
            add(&mut potential, candidates[best], 1.0);
        }
        if !moved {
            break;
        }
    }
    picks.into_iter().map(|k| candidates[k]).collect()
}

fn dedup(mut points: Vec<C>) -> Vec<C> {
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    points.dedup_by(|a, b| (*a - *b).norm() <= 1e-14 * (1.0 + a.norm()));
    points
}

/// Logarithmic capacity; closed form for discs and annuli.
pub fn log_capacity(region: &Region, n_points: usize) -> Result<CapacityEstimate> {
    match region {
        Region::Disc { radius, .. } | Region::Annulus { r_out: radius, .. } => Ok(CapacityEstimate {
            value: *radius,
            err: 0.0,
            method: CapacityMethod::ClosedForm,
            detail: CapacityDetail::ClosedForm,
        }),
        _ => log_capacity_numeric(region, n_points),
    }
}

/// Point-energy estimate, used for every region (including discs).
pub fn log_capacity_numeric(region: &Region, n_points: usize) -> Result<CapacityEstimate> {
    if n_points < MIN_POINTS {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_POINTS} points, got {n_points}"
        )));
    }
    if let Region::Mask(m) = region {
        if m.count() == 0 {
            return Err(Error::EmptyRegion);
        }
    }
    let candidates = dedup(region.boundary_samples(CANDIDATES_PER_POINT * n_points)?);
    if candidates.len() < n_points {
        return Err(Error::DegenerateBoundary {
            found: candidates.len(),
            needed: n_points,
        });
    }
    let sizes = [n_points / 4, n_points / 2, n_points];
    let diameters: Vec<f64> = sizes
        .iter()
        .map(|&m| discrete_diameter(&fekete_points(&candidates, m, SWEEPS)))
        .collect();
    let u = |m: usize| (m as f64).ln() / (m as f64 - 1.0);
    let y: Vec<f64> = diameters.iter().map(|d| d.ln()).collect();
    let slope = (y[2] - y[1]) / (u(sizes[2]) - u(sizes[1]));
    let log_cap = y[2] - slope * u(sizes[2]);
    let extrapolated = log_cap.exp();
    let residual = y[0] - (log_cap + slope * u(sizes[0]));
    let err = (diameters[2] - extrapolated).abs() + extrapolated * (2.0 * residual.abs()).exp_m1();
    Ok(CapacityEstimate {
        value: extrapolated,
        err,
        method: CapacityMethod::Fekete,
        detail: CapacityDetail::Fekete {
            n: n_points,
            candidates: candidates.len(),
            diameters: [diameters[0], diameters[1], diameters[2]],
            slope,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn roots_of_unity_diameter_is_closed_form() {
        for n in [16, 64, 257] {
            let pts: Vec<C> = (0..n).map(|k| C::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
            let expected = (n as f64).powf(1.0 / (n as f64 - 1.0));
            assert!((discrete_diameter(&pts) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn leja_on_circle_recovers_roots_of_unity() {
        let cands: Vec<C> = (0..4096).map(|k| C::from_polar(1.0, TAU * k as f64 / 4096.0)).collect();
        let pts = fekete_points(&cands, 64, 0);
        let d = discrete_diameter(&pts);
        assert!((d - 64f64.powf(1.0 / 63.0)).abs() < 1e-12);
    }

    #[test]
    fn sweeps_never_lower_the_energy() {
        let cands: Vec<C> = (0..3000)
            .map(|k| {
                let t = TAU * k as f64 / 3000.0;
                C::new(2.0 * t.cos(), t.sin())
            })
            .collect();
        let before = discrete_diameter(&fekete_points(&cands, 48, 0));
        let after = discrete_diameter(&fekete_points(&cands, 48, 3));
        assert!(after >= before - 1e-14);
    }

    #[test]
    fn too_few_points_rejected() {
        let sq = Region::rectangle(C::new(0.0, 0.0), C::new(1.0, 1.0)).unwrap();
        assert!(matches!(log_capacity(&sq, 8), Err(Error::InvalidInput(_))));
    }
}
