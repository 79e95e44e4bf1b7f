use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::sampling::CompensatedSum;

type C = Complex64;

/// A real function sampled at cell centres of a uniform grid, with masks of
/// cells clamped to 0 and to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub origin: C,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `values[j * nx + i]`.
    pub values: Vec<f64>,
    pub fixed_zero: Vec<bool>,
    pub fixed_one: Vec<bool>,
}

impl GridFunction {
    /// Samples `f` at cell centres; no cells are clamped.
    pub fn from_fn(origin: C, h: f64, nx: usize, ny: usize, f: impl Fn(C) -> f64) -> Self {
        let values = (0..nx * ny)
            .map(|k| f(origin + C::new(((k % nx) as f64 + 0.5) * h, ((k / nx) as f64 + 0.5) * h)))
            .collect();
        GridFunction {
            origin,
            h,
            nx,
            ny,
            values,
            fixed_zero: vec![false; nx * ny],
            fixed_one: vec![false; nx * ny],
        }
    }

    pub fn cell_center(&self, i: usize, j: usize) -> C {
        self.origin + C::new((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// True when clamps hold exactly and values lie in `[0, 1 + tol]`.
    pub fn is_admissible(&self, tol: f64) -> bool {
        self.values.iter().enumerate().all(|(k, &v)| {
            (!self.fixed_zero[k] || v == 0.0) && (!self.fixed_one[k] || v == 1.0) && (-tol..=1.0 + tol).contains(&v)
        }) && !self.fixed_zero.iter().zip(&self.fixed_one).any(|(a, b)| *a && *b)
    }

    /// Writes values as CSV, top row first.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        for j in (0..self.ny).rev() {
            let row: Vec<String> = (0..self.nx).map(|i| self.get(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Sum of squared differences over horizontally and vertically adjacent
/// cells. The planar Dirichlet integral is scale free, so no `h` factor.
pub fn dirichlet_energy(f: &GridFunction) -> f64 {
    let mut s = CompensatedSum::default();
    for j in 0..f.ny {
        for i in 0..f.nx {
            let v = f.get(i, j);
            if i + 1 < f.nx {
                let d = v - f.get(i + 1, j);
                s.add(d * d);
            }
            if j + 1 < f.ny {
                let d = v - f.get(i, j + 1);
                s.add(d * d);
            }
        }
    }
    s.value()
}

/// Candidate rearrangement centres per axis inside one cell.
pub const CENTRE_OFFSETS: usize = 4;

fn rearrange(f: &GridFunction, sorted: &[f64], a: usize, b: usize) -> GridFunction {
    let (nx, ny, k) = (f.nx as i64, f.ny as i64, CENTRE_OFFSETS as i64);
    // Offsets from the centre scaled by 2k are integers, so distance ties are exact.
    let mut cells: Vec<(i64, f64, usize)> = (0..f.nx * f.ny)
        .map(|c| {
            let dx = 2 * k * (c % f.nx) as i64 + k - k * nx - 2 * a as i64;
            let dy = 2 * k * (c / f.nx) as i64 + k - k * ny - 2 * b as i64;
            (dx * dx + dy * dy, (dy as f64).atan2(dx as f64), c)
        })
        .collect();
    cells.sort_by(|p, q| p.0.cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut values = vec![0.0; f.values.len()];
    for ((_, _, c), v) in cells.into_iter().zip(sorted) {
        values[c] = *v;
    }
    GridFunction {
        values,
        fixed_zero: vec![false; f.values.len()],
        fixed_one: vec![false; f.values.len()],
        ..f.clone()
    }
}

/// Schwarz symmetrization on the grid: the values, sorted in decreasing
/// order, are laid out on cells sorted by increasing distance from a centre
/// (equal distances ordered by angle). The value multiset is kept.
///
/// Centres range over a `CENTRE_OFFSETS x CENTRE_OFFSETS` lattice of points
/// in the cell up and to the right of the grid centre; the layout with the
/// least energy is returned, the grid centre itself on ties.
pub fn schwarz_symmetrize(f: &GridFunction) -> GridFunction {
    let mut sorted = f.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let candidates: Vec<(f64, GridFunction)> = (0..CENTRE_OFFSETS * CENTRE_OFFSETS)
        .into_par_iter()
        .map(|k| {
            let g = rearrange(f, &sorted, k % CENTRE_OFFSETS, k / CENTRE_OFFSETS);
            (dirichlet_energy(&g), g)
        })
        .collect();
    let best = candidates
        .iter()
        .enumerate()
        .fold(0, |best, (k, (e, _))| if *e < candidates[best].0 { k } else { best });
    candidates.into_iter().nth(best).map(|(_, g)| g).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, TAU};

    #[test]
    fn constant_has_zero_energy() {
        let f = GridFunction::from_fn(C::new(0.0, 0.0), 0.1, 10, 10, |_| 0.7);
        assert_eq!(dirichlet_energy(&f), 0.0);
    }

    #[test]
    fn linear_ramp_energy_tends_to_one() {
        for m in [10usize, 50, 200] {
            let h = 1.0 / m as f64;
            let f = GridFunction::from_fn(C::new(0.0, 0.0), h, m, m, |z| z.re);
            let l = dirichlet_energy(&f);
            assert!((l - 1.0).abs() <= 2.0 / m as f64, "m = {m}: {l}");
        }
    }

    #[test]
    fn radial_profile_on_annulus() {
        // f = 1 - log|z| between r = 1 and R = e: exact energy 2 pi / log(R/r) = 2 pi.
        let h = 0.01;
        let n = (2.0 * (E + 0.05) / h).ceil() as usize;
        let origin = -C::new(1.0, 1.0) * (n as f64 * h / 2.0);
        let f = GridFunction::from_fn(origin, h, n, n, |z| (1.0 - z.norm().ln()).clamp(0.0, 1.0));
        let l = dirichlet_energy(&f);
        assert!((l - TAU).abs() < 0.03 * TAU, "{l}");
    }

    #[test]
    fn symmetrization_keeps_value_multiset() {
        let f = GridFunction::from_fn(C::new(-1.0, -1.0), 0.05, 40, 40, |z| {
            (3.0 * z.re).sin().abs() * z.im.abs()
        });
        let s = schwarz_symmetrize(&f);
        let mut a = f.values.clone();
        let mut b = s.values.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }

    #[test]
    fn symmetrization_fixes_centered_radial_functions() {
        let f = GridFunction::from_fn(C::new(-1.0, -1.0), 0.02, 100, 100, |z| (1.0 - z.norm()).max(0.0));
        let s = schwarz_symmetrize(&f);
        // Equal-distance cells carry equal values, so the layout is unchanged
        // up to ties within one ring.
        for (a, b) in f.values.iter().zip(&s.values) {
            assert!((a - b).abs() <= 0.02 * 1.5);
        }
    }

    #[test]
    fn symmetrization_lowers_off_center_bump_energy() {
        let f = GridFunction::from_fn(C::new(-1.0, -1.0), 0.02, 100, 100, |z| {
            (1.0 - 4.0 * (z - 0.5).norm()).max(0.0)
        });
        let s = schwarz_symmetrize(&f);
        assert!(dirichlet_energy(&s) <= dirichlet_energy(&f) * 1.02);
    }

    #[test]
    fn symmetrization_handles_generic_bump_offsets() {
        for centre in [C::new(0.213, -0.071), C::new(-0.3, 0.41), C::new(0.01, 0.0)] {
            let f = GridFunction::from_fn(C::new(-1.0, -1.0), 0.02, 100, 100, |z| {
                (1.0 - 5.0 * (z - centre).norm()).max(0.0)
            });
            let s = schwarz_symmetrize(&f);
            assert!(dirichlet_energy(&s) <= dirichlet_energy(&f) * 1.02, "{centre}");
        }
    }

    #[test]
    fn csv_dump_has_one_line_per_row() {
        let f = GridFunction::from_fn(C::new(0.0, 0.0), 1.0, 3, 2, |z| z.im);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1.5,1.5,1.5\n0.5,0.5,0.5\n");
    }
}
