//! SVG export of lemniscates `{z : |p(z)| = r^n}`.

use std::fmt::Write;

use num_complex::Complex64;

use crate::contour::NodeField;
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::region::sublevel_region;

type C = Complex64;

pub const DEFAULT_RESOLUTION: usize = 512;
const MIN_RESOLUTION: usize = 16;
const MARGIN: f64 = 1.05;

/// Traces `|p| - r^n` on a `resolution x resolution` lattice over the
/// bounding square of the filled lemniscate. SVG's y axis points down, so
/// points are written as `(x, -y)`.
pub fn lemniscate_svg(p: &Polynomial, r: f64, resolution: usize) -> Result<String> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::DegreeTooLow(n, 1));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("level radius must be positive, got {r}")));
    }
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooCoarse {
            cells: resolution as f64,
        });
    }
    let level = r.powi(n as i32);
    let disc = sublevel_region(p, level)?.bounding_disc();
    let half = disc.radius * MARGIN;
    let origin = disc.center - C::new(half, half);
    let step = 2.0 * half / resolution as f64;
    let field = NodeField::sample(origin, step, step, resolution + 1, resolution + 1, |z| {
        p.eval(z).norm() - level
    });
    let contours = field.trace();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        origin.re,
        -(disc.center.im + half),
        2.0 * half,
        2.0 * half
    );
    let _ = writeln!(out, "<!-- |p(z)| = {level}, p = {p} -->");
    for c in &contours {
        let mut d = String::new();
        for (k, z) in c.points.iter().enumerate() {
            let _ = write!(d, "{}{:.6} {:.6} ", if k == 0 { "M" } else { "L" }, z.re, -z.im);
        }
        if c.closed {
            d.push('Z');
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
            d.trim_end(),
            2.0 * step
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paths(svg: &str) -> Vec<Vec<C>> {
        svg.lines()
            .filter_map(|l| l.split("d=\"").nth(1))
            .map(|d| {
                let d = d.split('"').next().unwrap();
                d.trim_end_matches('Z')
                    .split(['M', 'L'])
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        let mut it = s.split_whitespace().map(|v| v.parse::<f64>().unwrap());
                        C::new(it.next().unwrap(), -it.next().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cube_at_two_is_circle_of_radius_two() {
        let svg = lemniscate_svg(&Polynomial::monomial(3), 2.0, 256).unwrap();
        let ps = paths(&svg);
        assert_eq!(ps.len(), 1);
        assert!(ps[0].iter().all(|z| (z.norm() - 2.0).abs() < 0.03));
        assert!(svg.contains("Z\""));
    }

    #[test]
    fn identity_gives_unit_circle() {
        let svg = lemniscate_svg(&Polynomial::monomial(1), 1.0, DEFAULT_RESOLUTION).unwrap();
        let ps = paths(&svg);
        assert_eq!(ps.len(), 1);
        assert!(ps[0].iter().all(|z| (z.norm() - 1.0).abs() < 0.01));
    }

    #[test]
    fn bernoulli_curve_lies_on_level_set() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let svg = lemniscate_svg(&p, 1.0, DEFAULT_RESOLUTION).unwrap();
        let pts: Vec<C> = paths(&svg).concat();
        assert!(pts.iter().all(|z| (p.eval(*z).norm() - 1.0).abs() < 0.02));
        // Reaches both lobes.
        assert!(pts.iter().any(|z| z.re > 1.4) && pts.iter().any(|z| z.re < -1.4));
    }

    #[test]
    fn bad_arguments() {
        assert!(lemniscate_svg(&Polynomial::monomial(2), 0.0, 64).is_err());
        assert!(lemniscate_svg(&Polynomial::monomial(2), 1.0, 4).is_err());
    }
}
