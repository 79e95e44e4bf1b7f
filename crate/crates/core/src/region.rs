//! Bounded plane regions: discs, annuli, polygons, filled lemniscates,
//! polynomial preimages, unions and pixel masks.
//!
//! Every region is closed: boundary points count as inside.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::contour::{Contour, NodeField};
use crate::error::{Error, Result};
use crate::polynomial::{Polynomial, STRUCTURE_TOLERANCE};
use crate::sampling::{sample_box, SampleBox};

type C = Complex64;

/// Parts of a union whose exact area is below this fraction of the main
/// disc are treated as null sets when recognizing discs.
pub const NULL_AREA_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: C,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, z: C) -> bool {
        (z - self.center).norm() <= self.radius
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    /// Smallest disc containing both.
    pub fn merge(&self, other: &Disc) -> Disc {
        let d = (other.center - self.center).norm();
        if d + other.radius <= self.radius {
            return *self;
        }
        if d + self.radius <= other.radius {
            return *other;
        }
        let radius = 0.5 * (d + self.radius + other.radius);
        let dir = (other.center - self.center) / d;
        Disc {
            center: self.center + dir * (radius - self.radius),
            radius,
        }
    }
}

/// A boolean raster; cell `(i, j)` covers
/// `[origin.re + i h, origin.re + (i+1) h] x [origin.im + j h, origin.im + (j+1) h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask {
    pub origin: C,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `bits[j * nx + i]`.
    pub bits: Vec<bool>,
}

impl PixelMask {
    pub fn cell_center(&self, i: usize, j: usize) -> C {
        self.origin + C::new((i as f64 + 0.5) * self.h, (j as f64 + 0.5) * self.h)
    }

    pub fn cell_of(&self, z: C) -> Option<(usize, usize)> {
        let u = (z.re - self.origin.re) / self.h;
        let v = (z.im - self.origin.im) / self.h;
        if u < 0.0 || v < 0.0 {
            return None;
        }
        let (i, j) = (u.floor() as usize, v.floor() as usize);
        (i < self.nx && j < self.ny).then_some((i, j))
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.nx + i]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn area(&self) -> f64 {
        self.count() as f64 * self.h * self.h
    }

    /// Cells whose state differs from at least one 4-neighbour (outside the
    /// footprint counts as unset).
    pub fn boundary_cells(&self) -> usize {
        let at = |i: isize, j: isize| {
            i >= 0 && j >= 0 && (i as usize) < self.nx && (j as usize) < self.ny && self.get(i as usize, j as usize)
        };
        let mut count = 0;
        for j in 0..self.ny as isize {
            for i in 0..self.nx as isize {
                let b = at(i, j);
                if at(i - 1, j) != b || at(i + 1, j) != b || at(i, j - 1) != b || at(i, j + 1) != b {
                    count += 1;
                }
            }
        }
        count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Disc {
        center: C,
        radius: f64,
    },
    Annulus {
        center: C,
        r_in: f64,
        r_out: f64,
    },
    /// Simple closed polygon; the closing edge is implicit.
    Polygon {
        vertices: Vec<C>,
    },
    /// `{w : |g(w)| <= x}`.
    Sublevel {
        g: Polynomial,
        x: f64,
    },
    /// `{z : p(z) in inner}` for monic `p`.
    Preimage {
        p: Polynomial,
        inner: Box<Region>,
    },
    Union {
        parts: Vec<Region>,
    },
    Mask(PixelMask),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaMethod {
    Exact,
    Grid,
    #[serde(rename = "montecarlo")]
    MonteCarlo,
}

impl AreaMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            AreaMethod::Exact => "exact",
            AreaMethod::Grid => "grid",
            AreaMethod::MonteCarlo => "montecarlo",
        }
    }
}

/// An area with an error bar: 3-sigma for Monte Carlo, boundary-cell area
/// for grids, zero for closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaEstimate {
    pub value: f64,
    pub err: f64,
    pub method: AreaMethod,
    pub samples_or_resolution: usize,
}

impl AreaEstimate {
    pub fn exact(value: f64) -> Self {
        AreaEstimate {
            value,
            err: 0.0,
            method: AreaMethod::Exact,
            samples_or_resolution: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingBudget {
    pub samples: usize,
    pub seed: u64,
    /// `None` picks the closed form when one exists, Monte Carlo otherwise.
    pub method: Option<AreaMethod>,
    /// Cell size for the grid method; derived from `samples` when absent.
    pub grid_h: Option<f64>,
    /// Fail with `BudgetTooSmall` when `err > max_rel_err * value`.
    pub max_rel_err: Option<f64>,
}

impl Default for SamplingBudget {
    fn default() -> Self {
        SamplingBudget {
            samples: 1_000_000,
            seed: 42,
            method: None,
            grid_h: None,
            max_rel_err: None,
        }
    }
}

impl SamplingBudget {
    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        SamplingBudget {
            samples,
            seed,
            method: Some(AreaMethod::MonteCarlo),
            ..Default::default()
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SamplingBudget { seed, ..self.clone() }
    }
}

fn polygon_signed_area(v: &[C]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|k| {
            let (a, b) = (v[k], v[(k + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
}

fn segment_distance(a: C, b: C, z: C) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let t = if len2 > 0.0 {
        (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (z - (a + ab * t)).norm()
}

fn winding_number(v: &[C], z: C) -> i32 {
    let n = v.len();
    let mut wn = 0;
    for k in 0..n {
        let (a, b) = (v[k], v[(k + 1) % n]);
        let is_left = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
        if a.im <= z.im {
            if b.im > z.im && is_left > 0.0 {
                wn += 1;
            }
        } else if b.im <= z.im && is_left < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn polygon_boundary_distance(v: &[C], z: C) -> f64 {
    let n = v.len();
    (0..n)
        .map(|k| segment_distance(v[k], v[(k + 1) % n], z))
        .fold(f64::INFINITY, f64::min)
}

fn polygon_contains(v: &[C], z: C) -> bool {
    let scale = v.iter().map(|c| c.norm()).fold(1.0, f64::max);
    winding_number(v, z) != 0 || polygon_boundary_distance(v, z) <= 1e-12 * scale
}

/// Points spread evenly by arc length along a contour.
fn resample(contour: &Contour, k: usize) -> Vec<C> {
    let pts = &contour.points;
    if pts.is_empty() || k == 0 {
        return Vec::new();
    }
    let mut ring = pts.clone();
    if contour.closed {
        ring.push(pts[0]);
    }
    let total = contour.length();
    if total == 0.0 {
        return vec![pts[0]];
    }
    let step = total / k as f64;
    let mut out = Vec::with_capacity(k);
    let mut seg = 0;
    let mut seg_start = 0.0;
    for m in 0..k {
        let s = m as f64 * step;
        while seg + 1 < ring.len() - 1 && seg_start + (ring[seg + 1] - ring[seg]).norm() < s {
            seg_start += (ring[seg + 1] - ring[seg]).norm();
            seg += 1;
        }
        let len = (ring[seg + 1] - ring[seg]).norm();
        let t = if len > 0.0 {
            ((s - seg_start) / len).clamp(0.0, 1.0)
        } else {
            0.0
        };
        out.push(ring[seg] + (ring[seg + 1] - ring[seg]) * t);
    }
    out
}

impl Region {
    pub fn disc(center: C, radius: f64) -> Result<Region> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        Ok(Region::Disc { center, radius })
    }

    pub fn annulus(center: C, r_in: f64, r_out: f64) -> Result<Region> {
        if !(r_in >= 0.0 && r_out > r_in && r_out.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "annulus needs 0 <= r_in < r_out, got {r_in}, {r_out}"
            )));
        }
        Ok(Region::Annulus { center, r_in, r_out })
    }

    pub fn polygon(vertices: Vec<C>) -> Result<Region> {
        if vertices.len() < 3 {
            return Err(Error::InvalidInput("polygon needs at least 3 vertices".into()));
        }
        if polygon_signed_area(&vertices) == 0.0 {
            return Err(Error::InvalidInput("polygon has zero area".into()));
        }
        Ok(Region::Polygon { vertices })
    }

    /// Axis-aligned rectangle given by two opposite corners.
    pub fn rectangle(lo: C, hi: C) -> Result<Region> {
        Region::polygon(vec![lo, C::new(hi.re, lo.im), hi, C::new(lo.re, hi.im)])
    }

    pub fn union(parts: Vec<Region>) -> Result<Region> {
        if parts.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Ok(Region::Union { parts })
    }

    pub fn mask(mask: PixelMask) -> Result<Region> {
        if mask.h.is_nan() || mask.h <= 0.0 || mask.bits.len() != mask.nx * mask.ny || mask.nx == 0 || mask.ny == 0 {
            return Err(Error::InvalidInput("mask dimensions do not match its bits".into()));
        }
        Ok(Region::Mask(mask))
    }

    pub fn contains(&self, z: C) -> bool {
        match self {
            Region::Disc { center, radius } => (z - center).norm() <= *radius,
            Region::Annulus { center, r_in, r_out } => {
                let d = (z - center).norm();
                *r_in <= d && d <= *r_out
            }
            Region::Polygon { vertices } => polygon_contains(vertices, z),
            Region::Sublevel { g, x } => g.eval(z).norm() <= *x,
            Region::Preimage { p, inner } => inner.contains(p.eval(z)),
            Region::Union { parts } => parts.iter().any(|r| r.contains(z)),
            Region::Mask(m) => m.cell_of(z).is_some_and(|(i, j)| m.get(i, j)),
        }
    }

    /// A continuous function that is `<= 0` on the region and `> 0` off it
    /// (up to the resolution of pixel masks).
    pub fn level(&self, z: C) -> f64 {
        match self {
            Region::Disc { center, radius } => (z - center).norm() - radius,
            Region::Annulus { center, r_in, r_out } => {
                let d = (z - center).norm();
                (r_in - d).max(d - r_out)
            }
            Region::Polygon { vertices } => {
                let d = polygon_boundary_distance(vertices, z);
                if winding_number(vertices, z) != 0 {
                    -d
                } else {
                    d
                }
            }
            Region::Sublevel { g, x } => g.eval(z).norm() - x,
            Region::Preimage { p, inner } => inner.level(p.eval(z)),
            Region::Union { parts } => parts.iter().map(|r| r.level(z)).fold(f64::INFINITY, f64::min),
            Region::Mask(m) => {
                if self.contains(z) {
                    -0.5 * m.h
                } else {
                    0.5 * m.h
                }
            }
        }
    }

    pub fn bounding_disc(&self) -> Disc {
        match self {
            Region::Disc { center, radius } => Disc {
                center: *center,
                radius: *radius,
            },
            Region::Annulus { center, r_out, .. } => Disc {
                center: *center,
                radius: *r_out,
            },
            Region::Polygon { vertices } => {
                let (lo, hi) = bbox(vertices.iter().copied());
                let center = (lo + hi) / 2.0;
                let radius = vertices.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
                Disc { center, radius }
            }
            Region::Sublevel { g, x } => {
                // |g| <= x  <=>  |g/a| <= x/|a|, recentred at the root centroid.
                let (monic, lead) = g.monic_normalized().expect("sublevel of nonzero polynomial");
                let n = monic.degree();
                let shift = -monic.coeffs()[n - 1] / n as f64;
                let shifted = monic.compose_affine(C::new(1.0, 0.0), shift);
                let radius = shifted.cauchy_radius(x / lead.norm()).expect("monic");
                Disc { center: shift, radius }
            }
            Region::Preimage { p, inner } => {
                let outer = inner.bounding_disc();
                let n = p.degree();
                let shift = -p.coeffs()[n - 1] / n as f64;
                let shifted = p.compose_affine(C::new(1.0, 0.0), shift).add_constant(-outer.center);
                let radius = shifted.cauchy_radius(outer.radius).expect("monic");
                Disc { center: shift, radius }
            }
            Region::Union { parts } => {
                let mut it = parts.iter().map(|r| r.bounding_disc());
                let first = it.next().expect("nonempty union");
                it.fold(first, |acc, d| acc.merge(&d))
            }
            Region::Mask(m) => {
                let half = C::new(m.nx as f64 * m.h, m.ny as f64 * m.h) / 2.0;
                Disc {
                    center: m.origin + half,
                    radius: half.norm(),
                }
            }
        }
    }

    /// If the region equals a disc up to a null set, that disc.
    pub fn essential_disc(&self) -> Option<Disc> {
        match self {
            Region::Disc { center, radius } => Some(Disc {
                center: *center,
                radius: *radius,
            }),
            Region::Sublevel { g, x } => {
                let d = g.degree();
                let a = g.leading();
                if d == 1 {
                    return Some(Disc {
                        center: -g.coeffs()[0] / a,
                        radius: x / a.norm(),
                    });
                }
                let b = g.unique_critical_point()?;
                let critical_value = g.eval(b).norm();
                (critical_value <= STRUCTURE_TOLERANCE * g.magnitude_bound(b).max(1.0)).then(|| Disc {
                    center: b,
                    radius: (x / a.norm()).powf(1.0 / d as f64),
                })
            }
            Region::Preimage { p, inner } => {
                let target = inner.essential_disc()?;
                let n = p.degree();
                if n == 1 {
                    return Some(Disc {
                        center: target.center - p.coeffs()[0],
                        radius: target.radius,
                    });
                }
                let b = p.unique_critical_point()?;
                let cv = p.eval(b);
                let tol = STRUCTURE_TOLERANCE * (1.0 + target.center.norm() + target.radius);
                ((cv - target.center).norm() <= tol).then(|| Disc {
                    center: b,
                    radius: target.radius.powf(1.0 / n as f64),
                })
            }
            Region::Union { parts } => {
                let main = parts
                    .iter()
                    .filter_map(|r| r.essential_disc())
                    .max_by(|a, b| a.radius.total_cmp(&b.radius))?;
                let negligible = parts.iter().all(|r| {
                    if let Some(d) = r.essential_disc() {
                        if (d.center - main.center).norm() + d.radius <= main.radius * (1.0 + 1e-12) {
                            return true;
                        }
                    }
                    r.closed_form_area()
                        .is_some_and(|a| a <= NULL_AREA_FRACTION * main.area())
                });
                negligible.then_some(main)
            }
            _ => None,
        }
    }

    /// Area from a closed form, when one applies.
    pub fn closed_form_area(&self) -> Option<f64> {
        match self {
            Region::Disc { radius, .. } => Some(std::f64::consts::PI * radius * radius),
            Region::Annulus { r_in, r_out, .. } => Some(std::f64::consts::PI * (r_out * r_out - r_in * r_in)),
            Region::Polygon { vertices } => Some(polygon_signed_area(vertices).abs()),
            Region::Mask(m) => Some(m.area()),
            Region::Sublevel { .. } => self.essential_disc().map(|d| d.area()),
            Region::Union { parts } if parts.len() == 1 => parts[0].closed_form_area(),
            _ => None,
        }
    }

    pub fn area(&self, budget: &SamplingBudget) -> Result<AreaEstimate> {
        let est = match budget.method {
            Some(AreaMethod::Exact) => self
                .closed_form_area()
                .map(AreaEstimate::exact)
                .ok_or_else(|| Error::InvalidInput("no closed-form area for this region".into()))?,
            Some(AreaMethod::Grid) => self.grid_area(budget)?,
            Some(AreaMethod::MonteCarlo) => self.monte_carlo_area(budget)?,
            None => match self.closed_form_area() {
                Some(a) => AreaEstimate::exact(a),
                None => self.monte_carlo_area(budget)?,
            },
        };
        if let Some(rel) = budget.max_rel_err {
            if est.err > rel * est.value {
                return Err(Error::BudgetTooSmall(format!(
                    "area error {:.3e} exceeds {rel} x {:.6}",
                    est.err, est.value
                )));
            }
        }
        Ok(est)
    }

    fn monte_carlo_area(&self, budget: &SamplingBudget) -> Result<AreaEstimate> {
        if budget.samples == 0 {
            return Err(Error::BudgetTooSmall("zero samples".into()));
        }
        let disc = self.bounding_disc();
        let bx = SampleBox::square(disc.center, disc.radius);
        let box_area = bx.area();
        let m = sample_box(budget.seed, budget.samples, bx, |z| {
            if self.contains(z) {
                1.0
            } else {
                0.0
            }
        });
        let n = m.count as f64;
        let hits = (m.mean * n).round();
        // Add-one smoothing keeps the error bar positive when no sample hits.
        let p = (hits + 1.0) / (n + 2.0);
        Ok(AreaEstimate {
            value: m.mean * box_area,
            err: 3.0 * (p * (1.0 - p) / n).sqrt() * box_area,
            method: AreaMethod::MonteCarlo,
            samples_or_resolution: m.count,
        })
    }

    fn grid_area(&self, budget: &SamplingBudget) -> Result<AreaEstimate> {
        let disc = self.bounding_disc();
        let h = budget
            .grid_h
            .unwrap_or_else(|| 2.0 * disc.radius / (budget.samples.max(1) as f64).sqrt());
        let Region::Mask(mask) = self.pixelize(h)? else {
            unreachable!()
        };
        Ok(AreaEstimate {
            value: mask.area(),
            err: (mask.boundary_cells() as f64 * h * h).max(f64::MIN_POSITIVE),
            method: AreaMethod::Grid,
            samples_or_resolution: mask.nx,
        })
    }

    /// Rasterizes the region over its bounding square; a bit is set iff the
    /// cell centre lies in the region.
    pub fn pixelize(&self, h: f64) -> Result<Region> {
        if h.is_nan() || h <= 0.0 {
            return Err(Error::InvalidInput(format!("cell size must be positive, got {h}")));
        }
        let disc = self.bounding_disc();
        let cells = 2.0 * disc.radius / h;
        if cells < 16.0 {
            return Err(Error::ResolutionTooCoarse { cells });
        }
        let n = cells.ceil() as usize;
        let origin = disc.center - C::new(1.0, 1.0) * (n as f64 * h / 2.0);
        let bits = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % n, k / n);
                self.contains(origin + C::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h))
            })
            .collect();
        Ok(Region::Mask(PixelMask {
            origin,
            h,
            nx: n,
            ny: n,
            bits,
        }))
    }

    /// The image `{a z + b : z in K}` for `a != 0`.
    pub fn map_affine(&self, a: C, b: C) -> Result<Region> {
        if a.norm() == 0.0 {
            return Err(Error::InvalidInput("affine map with zero scale".into()));
        }
        Ok(match self {
            Region::Disc { center, radius } => Region::Disc {
                center: a * center + b,
                radius: a.norm() * radius,
            },
            Region::Annulus { center, r_in, r_out } => Region::Annulus {
                center: a * center + b,
                r_in: a.norm() * r_in,
                r_out: a.norm() * r_out,
            },
            Region::Polygon { vertices } => Region::Polygon {
                vertices: vertices.iter().map(|v| a * v + b).collect(),
            },
            Region::Sublevel { g, x } => Region::Sublevel {
                g: g.compose_affine(a.inv(), -b / a),
                x: *x,
            },
            Region::Preimage { p, inner } => {
                let pulled = p.compose_affine(a.inv(), -b / a);
                let (monic, lead) = pulled.monic_normalized()?;
                Region::Preimage {
                    p: monic,
                    inner: Box::new(inner.map_affine(lead.inv(), C::new(0.0, 0.0))?),
                }
            }
            Region::Union { parts } => Region::Union {
                parts: parts.iter().map(|r| r.map_affine(a, b)).collect::<Result<_>>()?,
            },
            Region::Mask(m) => {
                if a.im != 0.0 || a.re <= 0.0 {
                    return Err(Error::InvalidInput(
                        "pixel masks only support positive real scaling".into(),
                    ));
                }
                Region::Mask(PixelMask {
                    origin: a * m.origin + b,
                    h: a.re * m.h,
                    ..m.clone()
                })
            }
        })
    }

    /// Roughly `count` points on the outer boundary of the region, used as
    /// candidates for point-energy optimization. Parts of a union hidden in
    /// the interior of another part are dropped.
    pub fn boundary_samples(&self, count: usize) -> Result<Vec<C>> {
        let count = count.max(8);
        Ok(match self {
            Region::Disc { center, radius }
            | Region::Annulus {
                center, r_out: radius, ..
            } => (0..count)
                .map(|k| center + C::from_polar(*radius, std::f64::consts::TAU * k as f64 / count as f64))
                .collect(),
            Region::Polygon { vertices } => {
                let n = vertices.len();
                let edges: Vec<(C, C)> = (0..n).map(|k| (vertices[k], vertices[(k + 1) % n])).collect();
                let perimeter: f64 = edges.iter().map(|(a, b)| (b - a).norm()).sum();
                edges
                    .iter()
                    .flat_map(|&(a, b)| {
                        let k = ((count as f64 * (b - a).norm() / perimeter).round() as usize).max(1);
                        (0..k).map(move |m| a + (b - a) * (m as f64 / k as f64))
                    })
                    .collect()
            }
            Region::Sublevel { g, x } => {
                let d = g.degree();
                let targets: Vec<C> = (0..count.div_ceil(d))
                    .map(|k| C::from_polar(*x, std::f64::consts::TAU * (k as f64 + 0.5) / count.div_ceil(d) as f64))
                    .collect();
                pull_back_points(g, &targets)?
            }
            Region::Preimage { p, inner } => {
                let targets = inner.boundary_samples(count.div_ceil(p.degree()))?;
                pull_back_points(p, &targets)?
            }
            Region::Union { parts } => {
                let weights: Vec<f64> = parts.iter().map(|r| r.bounding_disc().radius).collect();
                let total: f64 = weights.iter().sum();
                let mut out = Vec::new();
                for (k, part) in parts.iter().enumerate() {
                    let share = ((count as f64 * weights[k] / total).round() as usize).max(8);
                    let scale = 1e-9 * (1.0 + part.bounding_disc().radius);
                    out.extend(part.boundary_samples(share)?.into_iter().filter(|&z| {
                        parts
                            .iter()
                            .enumerate()
                            .all(|(m, other)| m == k || other.level(z) >= -scale)
                    }));
                }
                out
            }
            Region::Mask(m) => {
                let field = NodeField::sample(
                    m.origin - C::new(0.5 * m.h, 0.5 * m.h),
                    m.h,
                    m.h,
                    m.nx + 2,
                    m.ny + 2,
                    |z| if self.contains(z) { -1.0 } else { 1.0 },
                );
                let contours = field.trace();
                let total: f64 = contours.iter().map(|c| c.length()).sum();
                contours
                    .iter()
                    .flat_map(|c| resample(c, (count as f64 * c.length() / total).ceil() as usize))
                    .collect()
            }
        })
    }

    /// Canonical one-line JSON text of the region.
    pub fn describe(&self) -> String {
        crate::format::region_to_json(self).to_string()
    }
}

fn pull_back_points(p: &Polynomial, targets: &[C]) -> Result<Vec<C>> {
    let sets: Vec<Result<Vec<C>>> = targets
        .par_iter()
        .map(|&w| p.preimages(w).map(|s| s.flattened()))
        .collect();
    let mut out = Vec::with_capacity(targets.len() * p.degree());
    for s in sets {
        out.extend(s?);
    }
    Ok(out)
}

fn bbox(points: impl Iterator<Item = C>) -> (C, C) {
    points.fold(
        (
            C::new(f64::INFINITY, f64::INFINITY),
            C::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), z| {
            (
                C::new(lo.re.min(z.re), lo.im.min(z.im)),
                C::new(hi.re.max(z.re), hi.im.max(z.im)),
            )
        },
    )
}

/// `{w : |g(w)| <= x}`, the filled lemniscate of `g` at level `x`.
pub fn sublevel_region(g: &Polynomial, x: f64) -> Result<Region> {
    if g.degree() < 1 {
        return Err(Error::DegreeTooLow(g.degree(), 1));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidInput(format!("sublevel needs x > 0, got {x}")));
    }
    Ok(Region::Sublevel { g: g.clone(), x })
}

/// `p^{-1}(K)` for monic `p` of degree at least one.
pub fn preimage_region(p: &Polynomial, k: &Region) -> Result<Region> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow(p.degree(), 1));
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(Region::Preimage {
        p: p.clone(),
        inner: Box::new(k.clone()),
    })
}
