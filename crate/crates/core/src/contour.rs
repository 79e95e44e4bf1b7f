//! Marching squares for the zero level of a sampled scalar field.

use std::collections::HashMap;

use num_complex::Complex64;

type C = Complex64;

/// A traced level curve. Closed contours do not repeat their first point.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<C>,
    pub closed: bool,
}

impl Contour {
    pub fn length(&self) -> f64 {
        let open: f64 = self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        if self.closed && self.points.len() > 1 {
            open + (self.points[0] - self.points[self.points.len() - 1]).norm()
        } else {
            open
        }
    }
}

/// Node values sampled on a regular lattice, row-major with `nx` nodes per row.
#[derive(Debug, Clone)]
pub struct NodeField {
    pub origin: C,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl NodeField {
    pub fn sample(origin: C, dx: f64, dy: f64, nx: usize, ny: usize, f: impl Fn(C) -> f64 + Sync) -> Self {
        use rayon::prelude::*;
        let values = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                f(origin + C::new(i as f64 * dx, j as f64 * dy))
            })
            .collect();
        NodeField {
            origin,
            dx,
            dy,
            nx,
            ny,
            values,
        }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn node(&self, i: usize, j: usize) -> C {
        self.origin + C::new(i as f64 * self.dx, j as f64 * self.dy)
    }

    // Edge ids: 2*node for the edge to the right, 2*node+1 for the edge up.
    fn edge_point(&self, edge: usize) -> C {
        let node = edge / 2;
        let (i, j) = (node % self.nx, node / self.nx);
        let (i1, j1) = if edge.is_multiple_of(2) { (i + 1, j) } else { (i, j + 1) };
        let (v0, v1) = (self.at(i, j), self.at(i1, j1));
        let t = (v0 / (v0 - v1)).clamp(0.0, 1.0);
        let (p0, p1) = (self.node(i, j), self.node(i1, j1));
        p0 + (p1 - p0) * t
    }

    /// Traces `{value = 0}` separating `value <= 0` (inside) from `value > 0`.
    pub fn trace(&self) -> Vec<Contour> {
        let nx = self.nx;
        let mut segments: Vec<(usize, usize)> = Vec::new();
        for j in 0..self.ny.saturating_sub(1) {
            for i in 0..nx.saturating_sub(1) {
                let v = [
                    self.at(i, j),
                    self.at(i + 1, j),
                    self.at(i + 1, j + 1),
                    self.at(i, j + 1),
                ];
                let case = v
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (k, &x)| if x <= 0.0 { acc | (1 << k) } else { acc });
                let bottom = 2 * (j * nx + i);
                let right = 2 * (j * nx + i + 1) + 1;
                let top = 2 * ((j + 1) * nx + i);
                let left = 2 * (j * nx + i) + 1;
                let center_inside = v.iter().sum::<f64>() <= 0.0;
                match case {
                    0 | 15 => {}
                    5 => {
                        if center_inside {
                            segments.push((bottom, right));
                            segments.push((top, left));
                        } else {
                            segments.push((left, bottom));
                            segments.push((right, top));
                        }
                    }
                    10 => {
                        if center_inside {
                            segments.push((left, bottom));
                            segments.push((top, right));
                        } else {
                            segments.push((bottom, right));
                            segments.push((top, left));
                        }
                    }
                    _ => {
                        let inside = |k: usize| case & (1 << k) != 0;
                        let mut crossed = Vec::with_capacity(2);
                        if inside(0) != inside(1) {
                            crossed.push(bottom);
                        }
                        if inside(1) != inside(2) {
                            crossed.push(right);
                        }
                        if inside(2) != inside(3) {
                            crossed.push(top);
                        }
                        if inside(3) != inside(0) {
                            crossed.push(left);
                        }
                        debug_assert_eq!(crossed.len(), 2);
                        segments.push((crossed[0], crossed[1]));
                    }
                }
            }
        }
        self.assemble(&segments)
    }

    fn assemble(&self, segments: &[(usize, usize)]) -> Vec<Contour> {
        let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, &(a, b)) in segments.iter().enumerate() {
            by_edge.entry(a).or_default().push(k);
            by_edge.entry(b).or_default().push(k);
        }
        let mut used = vec![false; segments.len()];
        let mut out = Vec::new();

        let walk = |start_seg: usize, start_edge: usize, used: &mut Vec<bool>| {
            let mut edges = vec![start_edge];
            let mut seg = start_seg;
            let mut at = start_edge;
            let mut closed = false;
            loop {
                used[seg] = true;
                let (a, b) = segments[seg];
                let next = if a == at { b } else { a };
                if next == start_edge {
                    closed = true;
                    break;
                }
                edges.push(next);
                at = next;
                match by_edge[&next].iter().copied().find(|&s| !used[s]) {
                    Some(s) => seg = s,
                    None => break,
                }
            }
            Contour {
                points: edges.iter().map(|&e| self.edge_point(e)).collect(),
                closed,
            }
        };

        // Open chains start at edges touched by a single segment.
        let mut ends: Vec<usize> = by_edge
            .iter()
            .filter(|(_, segs)| segs.len() == 1)
            .map(|(&e, _)| e)
            .collect();
        ends.sort_unstable();
        for e in ends {
            let s = by_edge[&e][0];
            if !used[s] {
                out.push(walk(s, e, &mut used));
            }
        }
        for s in 0..segments.len() {
            if !used[s] {
                out.push(walk(s, segments[s].0, &mut used));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_traces_one_closed_contour() {
        let n = 101;
        let h = 3.0 / (n - 1) as f64;
        let field = NodeField::sample(C::new(-1.5, -1.5), h, h, n, n, |z| z.norm() - 1.0);
        let contours = field.trace();
        assert_eq!(contours.len(), 1);
        assert!(contours[0].closed);
        assert!((contours[0].length() - std::f64::consts::TAU).abs() < 1e-2);
        for p in &contours[0].points {
            assert!((p.norm() - 1.0).abs() < 2e-3);
        }
    }

    #[test]
    fn two_discs_give_two_contours() {
        let n = 121;
        let h = 6.0 / (n - 1) as f64;
        let field = NodeField::sample(C::new(-3.0, -3.0), h, h, n, n, |z| {
            ((z - 1.5).norm() - 1.0).min((z + 1.5).norm() - 1.0)
        });
        let contours = field.trace();
        assert_eq!(contours.len(), 2);
        assert!(contours.iter().all(|c| c.closed));
    }
}
