//! Complex polynomials: evaluation, differentiation, simultaneous root
//! finding and preimage solving.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

type C = Complex64;

const ROOT_ITERATION_CAP: usize = 500;
const RESIDUAL_TOLERANCE: f64 = 1e-12;
/// Approximations closer than this are always reported as one root.
pub const CLUSTER_RADIUS: f64 = 1e-7;
/// Relative tolerance used when deciding that a polynomial is a pure power
/// `a (z - b)^n + c`.
pub const STRUCTURE_TOLERANCE: f64 = 1e-6;

/// A polynomial with complex coefficients stored low-to-high.
///
/// Trailing zero coefficients are trimmed on construction, so the last stored
/// coefficient is nonzero unless the polynomial is identically zero. Monicity
/// is recorded at construction from the exact leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<C>,
    monic: bool,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&C::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C::new(0.0, 0.0));
        }
        let monic = *coeffs.last().unwrap() == C::new(1.0, 0.0);
        Polynomial { coeffs, monic }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::new(c, 0.0)).collect())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); n + 1];
        coeffs[n] = C::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(roots: &[C]) -> Self {
        let mut coeffs = vec![C::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![C::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        let n = coeffs.len() - 1;
        coeffs[n] = C::new(1.0, 0.0);
        Self::new(coeffs)
    }

    /// `(z - b)^n + c`.
    pub fn centered_power(n: usize, b: C, c: C) -> Self {
        let mut p = Self::from_roots(&vec![b; n]).add_constant(c);
        let last = p.coeffs.len() - 1;
        p.coeffs[last] = C::new(1.0, 0.0);
        p.monic = true;
        p
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C {
        *self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == C::new(0.0, 0.0)
    }

    pub fn eval(&self, z: C) -> C {
        self.coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: C) -> (C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |a_k| |z|^k`, the scale against which evaluation error is measured.
    pub fn magnitude_bound(&self, z: C) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::constant(C::new(0.0, 0.0));
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn add_constant(&self, c: C) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        let mut p = Polynomial::new(coeffs);
        if self.degree() >= 1 {
            p.monic = self.monic;
        }
        p
    }

    pub fn scale(&self, s: C) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![C::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let monic = self.monic && other.monic;
        let mut p = Polynomial::new(out);
        if monic {
            let last = p.coeffs.len() - 1;
            p.coeffs[last] = C::new(1.0, 0.0);
            p.monic = true;
        }
        p
    }

    /// `z -> p(a z + b)`.
    pub fn compose_affine(&self, a: C, b: C) -> Polynomial {
        let inner = Polynomial::new(vec![b, a]);
        let mut acc = Polynomial::constant(C::new(0.0, 0.0));
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner).add_constant(c);
        }
        let mut out = Polynomial::new(acc.coeffs);
        if self.monic && a == C::new(1.0, 0.0) {
            let last = out.coeffs.len() - 1;
            out.coeffs[last] = C::new(1.0, 0.0);
            out.monic = true;
        }
        out
    }

    /// Divides by the leading coefficient; the result is monic exactly.
    /// Returns the normalized polynomial and the leading coefficient removed.
    pub fn monic_normalized(&self) -> Result<(Polynomial, C)> {
        if self.is_zero() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        let lead = self.leading();
        let mut coeffs: Vec<C> = self.coeffs.iter().map(|&c| c / lead).collect();
        let n = coeffs.len() - 1;
        coeffs[n] = C::new(1.0, 0.0);
        Ok((Polynomial::new(coeffs), lead))
    }

    /// All complex roots with multiplicity.
    pub fn roots(&self) -> Result<PreimageSet> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::DegreeTooLow(0, 1));
        }
        let zeros = self.coeffs.iter().take_while(|c| **c == C::new(0.0, 0.0)).count();
        let mut points = Vec::new();
        if zeros > 0 {
            points.push((C::new(0.0, 0.0), zeros));
        }
        if zeros < n {
            let reduced = Polynomial::new(self.coeffs[zeros..].to_vec());
            points.extend(simultaneous_roots(&reduced)?);
        }
        let total = points.iter().map(|(_, m)| m).sum();
        debug_assert_eq!(total, n);
        Ok(PreimageSet { points, total })
    }

    /// Solutions of `p(z) = w` with multiplicity.
    pub fn preimages(&self, w: C) -> Result<PreimageSet> {
        if self.degree() == 0 {
            return Err(Error::DegreeTooLow(0, 1));
        }
        self.add_constant(-w).roots()
    }

    /// A radius `r` with `|z| > r => |p(z)| > big_r`, for monic `p`.
    pub fn escape_radius(&self, big_r: f64) -> Result<f64> {
        if !self.monic {
            return Err(Error::NotMonic);
        }
        let n = self.degree();
        if n == 0 {
            return Err(Error::DegreeTooLow(0, 1));
        }
        let tail: f64 = self.coeffs[..n].iter().map(|c| c.norm()).sum();
        Ok((tail + big_r.max(1.0)).max(1.0))
    }

    /// The smallest `r` with `|z| > r => |p(z)| > big_r` obtainable from the
    /// triangle inequality: the positive root of `r^n - sum_{i<n} |a_i| r^i = big_r`.
    /// Never larger than [`Polynomial::escape_radius`].
    pub fn cauchy_radius(&self, big_r: f64) -> Result<f64> {
        let crude = self.escape_radius(big_r)?;
        let n = self.degree();
        let f = |r: f64| {
            let tail = self.coeffs[..n].iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
            r.powi(n as i32) - tail - big_r
        };
        let (mut lo, mut hi) = (0.0, crude);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        Ok(hi * (1.0 + 1e-12))
    }

    /// If `p = a (z - b)^n + c` with `n >= 2`, returns `b`, the unique
    /// critical point. Found by clustering the roots of `p'` and confirmed
    /// against the expanded power coefficient by coefficient.
    pub fn unique_critical_point(&self) -> Option<C> {
        let n = self.degree();
        if n < 2 {
            return None;
        }
        let dp = self.derivative();
        let roots = dp.roots().ok()?;
        if roots.points.len() != 1 {
            return None;
        }
        let b = roots.points[0].0;
        let m = dp.degree();
        let expected = Polynomial::from_roots(&vec![b; m]).scale(dp.leading());
        let scale: f64 =
            dp.coeffs.iter().map(|c| c.norm()).sum::<f64>() + expected.coeffs.iter().map(|c| c.norm()).sum::<f64>();
        let diff: f64 = dp
            .coeffs
            .iter()
            .zip(expected.coeffs.iter())
            .map(|(a, b)| (a - b).norm())
            .sum();
        (diff <= STRUCTURE_TOLERANCE * scale).then_some(b)
    }

    /// The unique critical value `c` of `p = a (z - b)^n + c`, if any.
    pub fn unique_critical_value(&self) -> Option<C> {
        self.unique_critical_point().map(|b| self.eval(b))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&crate::format::format_complex(*c))?;
        }
        Ok(())
    }
}

/// Roots of a polynomial (or preimages of a point) with their valencies.
#[derive(Debug, Clone, PartialEq)]
pub struct PreimageSet {
    pub points: Vec<(C, usize)>,
    pub total: usize,
}

impl PreimageSet {
    pub fn iter(&self) -> impl Iterator<Item = &(C, usize)> {
        self.points.iter()
    }

    /// Sum of multiplicities of points satisfying `pred`.
    pub fn count_where(&self, mut pred: impl FnMut(C) -> bool) -> usize {
        self.points.iter().filter(|(z, _)| pred(*z)).map(|(_, m)| m).sum()
    }

    /// Every point repeated according to its multiplicity.
    pub fn flattened(&self) -> Vec<C> {
        self.points
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect()
    }
}

fn horner_error_bound(p: &Polynomial, z: C) -> f64 {
    4.0 * (p.degree() as f64 + 1.0) * f64::EPSILON * p.magnitude_bound(z)
}

// Aberth iteration (Gauss-Seidel sweep), inclusion-disc clustering for
// multiplicities, then Newton polishing. `p(0) != 0` is assumed.
fn simultaneous_roots(p: &Polynomial) -> Result<Vec<(C, usize)>> {
    let (q, _) = p.monic_normalized()?;
    let n = q.degree();
    if n == 1 {
        return Ok(vec![(-q.coeffs[0], 1)]);
    }
    let center = -q.coeffs[n - 1] / n as f64;
    let mut radius = q.eval(center).norm().powf(1.0 / n as f64);
    if !(radius.is_finite() && radius > 0.0) {
        radius = q.escape_radius(0.0).unwrap_or(1.0);
    }
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let rk = radius * (1.0 + 0.01 * (k % 3) as f64);
            center + C::from_polar(rk, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < ROOT_ITERATION_CAP && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = q.eval_with_derivative(z[i]);
            if v.norm() <= horner_error_bound(&q, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = v / dv;
            let step = if ratio.is_finite() {
                let s: C = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| C::new(1.0, 0.0) / (z[i] - z[j]))
                    .sum();
                let w = ratio / (C::new(1.0, 0.0) - ratio * s);
                if w.is_finite() {
                    w
                } else {
                    ratio
                }
            } else {
                C::from_polar(radius.max(1e-3) * 1e-3, i as f64)
            };
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
    }

    // Inclusion radii from Weierstrass corrections, padded by the
    // evaluation error so that multiple-root clusters overlap.
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let v = q.eval(z[i]).norm() + horner_error_bound(&q, z[i]);
            let prod: f64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product();
            if prod > 0.0 {
                n as f64 * v / prod
            } else {
                f64::INFINITY
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (z[i] - z[j]).norm();
            if d <= CLUSTER_RADIUS || d <= radii[i] + radii[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }

    let mut out = Vec::with_capacity(groups.len());
    let mut worst = 0.0f64;
    for (_, members) in groups {
        let m = members.len();
        let mean = members.iter().map(|&i| z[i]).sum::<C>() / m as f64;
        let root = polish(&q, mean, m);
        let residual = q.eval(root).norm() / q.magnitude_bound(root).max(1.0);
        worst = worst.max(residual);
        out.push((root, m));
    }
    if worst > RESIDUAL_TOLERANCE {
        return Err(Error::NonConvergence {
            residual: worst,
            iterations,
        });
    }
    Ok(out)
}

// Newton on the (m-1)-th derivative, which has a simple root at an m-fold
// root of `q`. Steps are kept only while the residual of `q` does not grow.
fn polish(q: &Polynomial, start: C, m: usize) -> C {
    let mut target = q.clone();
    for _ in 1..m {
        target = target.derivative();
    }
    // Judged on `target`: near an m-fold root `|q|` is flat at rounding level.
    let mut best = start;
    let mut best_res = target.eval(start).norm();
    let mut x = start;
    for _ in 0..8 {
        let (v, dv) = target.eval_with_derivative(x);
        if v == C::new(0.0, 0.0) {
            break;
        }
        let step = v / dv;
        if !step.is_finite() {
            break;
        }
        x -= step;
        let res = target.eval(x).norm();
        if res <= best_res {
            best = x;
            best_res = res;
        }
        if step.norm() <= f64::EPSILON * x.norm() {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Polynomial::monomial(2).eval(c(1.0, 1.0)), c(0.0, 2.0));
        assert_eq!(Polynomial::from_real(&[-1.0, 0.0, 1.0]).eval(c(0.0, 0.0)), c(-1.0, 0.0));
        assert_eq!(
            Polynomial::from_real(&[0.0, 2.0, 0.0, 1.0]).eval(c(2.0, 0.0)),
            c(12.0, 0.0)
        );
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            Polynomial::monomial(4).derivative(),
            Polynomial::from_real(&[0.0, 0.0, 0.0, 4.0])
        );
        assert_eq!(
            Polynomial::from_real(&[-1.0, 0.0, 1.0]).derivative(),
            Polynomial::from_real(&[0.0, 2.0])
        );
        let d = Polynomial::from_real(&[5.0]).derivative();
        assert!(d.is_zero());
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn monic_flag_is_exact() {
        assert!(Polynomial::from_real(&[3.0, 1.0]).is_monic());
        assert!(!Polynomial::from_real(&[3.0, 1.0 + 1e-15]).is_monic());
        assert!(Polynomial::from_real(&[1.0, 2.0, 0.0])
            .monic_normalized()
            .unwrap()
            .0
            .is_monic());
    }

    #[test]
    fn roots_examples() {
        let r = Polynomial::from_real(&[-1.0, 0.0, 1.0]).roots().unwrap();
        assert_eq!(r.total, 2);
        assert_eq!(r.count_where(|z| close(z, c(1.0, 0.0), 1e-12)), 1);
        assert_eq!(r.count_where(|z| close(z, c(-1.0, 0.0), 1e-12)), 1);

        let r = Polynomial::monomial(2).roots().unwrap();
        assert_eq!(r.points, vec![(c(0.0, 0.0), 2)]);

        let r = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]).roots().unwrap();
        assert_eq!(r.points.len(), 3);
        for k in 0..3 {
            let w = C::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0);
            assert_eq!(r.count_where(|z| close(z, w, 1e-12)), 1);
        }
    }

    #[test]
    fn preimage_examples() {
        let sq = Polynomial::monomial(2);
        let r = sq.preimages(c(4.0, 0.0)).unwrap();
        assert_eq!(r.count_where(|z| close(z, c(2.0, 0.0), 1e-12)), 1);
        assert_eq!(r.count_where(|z| close(z, c(-2.0, 0.0), 1e-12)), 1);
        assert_eq!(sq.preimages(c(0.0, 0.0)).unwrap().points, vec![(c(0.0, 0.0), 2)]);

        let shifted = Polynomial::centered_power(2, c(1.0, 0.0), c(3.0, 0.0));
        let r = shifted.preimages(c(3.0, 0.0)).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(close(r.points[0].0, c(1.0, 0.0), 1e-7));
        assert_eq!(r.points[0].1, 2);
    }

    #[test]
    fn constant_has_no_roots() {
        assert_eq!(
            Polynomial::constant(c(2.0, 0.0)).preimages(c(2.0, 0.0)),
            Err(Error::DegreeTooLow(0, 1))
        );
    }

    #[test]
    fn escape_radius_examples() {
        let sq = Polynomial::monomial(2);
        assert_eq!(sq.escape_radius(4.0).unwrap(), 4.0);
        let min = (0..1024)
            .map(|k| {
                sq.eval(C::from_polar(4.0, k as f64 * std::f64::consts::TAU / 1024.0))
                    .norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((min - 16.0).abs() < 1e-9);

        let bern = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(bern.escape_radius(1.0).unwrap(), 2.0);
        // |z^2 - 1| on |z| = 2 is minimized at z = 2i with value 3
        let min = (0..4096)
            .map(|k| {
                bern.eval(C::from_polar(2.0, k as f64 * std::f64::consts::TAU / 4096.0))
                    .norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((min - 3.0).abs() < 1e-6);

        assert_eq!(Polynomial::monomial(3).escape_radius(0.0).unwrap(), 1.0);
        assert_eq!(
            Polynomial::from_real(&[0.0, 2.0]).escape_radius(1.0),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn critical_point_detection() {
        let b = c(0.3, -1.2);
        let p = Polynomial::centered_power(4, b, c(2.0, 1.0)).scale(c(0.5, 0.5));
        let found = p.unique_critical_point().unwrap();
        assert!(close(found, b, 1e-6));
        assert!(Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0])
            .unique_critical_point()
            .is_none());
        // every quadratic is a centered power
        assert!(close(
            Polynomial::from_real(&[-1.0, 0.0, 1.0])
                .unique_critical_value()
                .unwrap(),
            c(-1.0, 0.0),
            1e-12
        ));
    }

    #[test]
    fn compose_affine_matches_eval() {
        let p = Polynomial::new(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.0), c(1.0, 0.0)]);
        let a = c(0.7, -0.2);
        let b = c(-1.0, 0.4);
        let q = p.compose_affine(a, b);
        for z in [c(0.1, 0.2), c(-1.3, 0.8), c(2.0, -2.0)] {
            assert!(close(q.eval(z), p.eval(a * z + b), 1e-12));
        }
    }

    #[test]
    fn display_round_trips_through_parser() {
        let p = Polynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let text = p.to_string();
        assert_eq!(text, "-1+0i,0+0i,1+0i");
        assert_eq!(crate::format::parse_polynomial(&text).unwrap(), p);
    }
}
