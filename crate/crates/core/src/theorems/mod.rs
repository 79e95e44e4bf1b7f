//! Numerical checks of the area and capacity inequalities for polynomial
//! images and preimages, each returning a [`Report`].

mod report;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use report::{inputs_digest, Report, StatementId, Verdict, ROUNDING};

use crate::capacity::{condenser_capacity, log_capacity, pullback_condenser, CapacityEstimate, Condenser};
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::region::{preimage_region, sublevel_region, AreaEstimate, AreaMethod, Disc, Region, SamplingBudget};
use crate::sampling::{derive_seed, sample_box, Moments, SampleBox};

type C = Complex64;

/// Numerical resources for one verification.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyBudget {
    pub sampling: SamplingBudget,
    /// Samples for the image-side multiplicity estimate.
    pub image_samples: usize,
    pub fekete_n: usize,
    pub grid_h: f64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            sampling: SamplingBudget::default(),
            image_samples: 200_000,
            fekete_n: 256,
            grid_h: 0.02,
        }
    }
}

impl VerifyBudget {
    pub fn seed(&self) -> u64 {
        self.sampling.seed
    }

    fn sub(&self, k: u64) -> SamplingBudget {
        self.sampling.with_seed(derive_seed(self.sampling.seed, k))
    }
}

/// `sum_k |q_k| r^k` for `q(w) = p(w + center)`: bounds `|p|` on the disc.
fn modulus_bound(p: &Polynomial, center: C, r: f64) -> f64 {
    p.compose_affine(C::new(1.0, 0.0), center)
        .coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * r + c.norm())
}

fn square_of(d: &Disc) -> SampleBox {
    SampleBox::square(d.center, d.radius)
}

/// Monte Carlo estimate with a 3-sigma error bar, floored at one sample's
/// worth of the integrand bound so a blank sample never reports zero error.
fn mc_estimate(m: Moments, bx: SampleBox, bound: f64) -> AreaEstimate {
    let area = bx.area();
    AreaEstimate {
        value: m.mean * area,
        err: (3.0 * m.standard_error() * area).max(bound * area / m.count as f64),
        method: AreaMethod::MonteCarlo,
        samples_or_resolution: m.count,
    }
}

/// Largest change of `f` when `x` moves by `e` either way (kept non-negative).
fn spread(f: impl Fn(f64) -> f64, x: f64, e: f64) -> f64 {
    let y = f(x);
    let up = (f(x + e) - y).abs();
    let down = (f((x - e).max(0.0)) - y).abs();
    let s = up.max(down);
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

fn require_monic(p: &Polynomial) -> Result<()> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow(p.degree(), 1));
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    Ok(())
}

/// `p = a (z - b)^n + c` with `c` at `target`.
fn critical_value_at(p: &Polynomial, target: C, scale: f64) -> bool {
    p.unique_critical_value()
        .is_some_and(|c| (c - target).norm() <= crate::polynomial::STRUCTURE_TOLERANCE * (1.0 + scale))
}

/// Equality case of the preimage area and roundness bounds. Affine maps
/// scale area and capacity exactly, so degree one is always an equality.
fn disc_equality(p: &Polynomial, k: &Region) -> bool {
    p.degree() == 1
        || k.essential_disc()
            .is_some_and(|d| critical_value_at(p, d.center, d.center.norm() + d.radius))
}

/// `int_K |p'|^2 dA`, the area of `p(K)` counted with multiplicity.
pub fn mass_integral(p: &Polynomial, k: &Region, budget: &SamplingBudget) -> Result<AreaEstimate> {
    if p.degree() < 1 {
        return Err(Error::DegreeTooLow(p.degree(), 1));
    }
    if budget.samples == 0 {
        return Err(Error::BudgetTooSmall("zero samples".into()));
    }
    let dp = p.derivative();
    let disc = k.bounding_disc();
    let bx = square_of(&disc);
    let bound = modulus_bound(&dp, disc.center, disc.radius * std::f64::consts::SQRT_2).powi(2);
    let m = sample_box(budget.seed, budget.samples, bx, |z| {
        if k.contains(z) {
            dp.eval(z).norm_sqr()
        } else {
            0.0
        }
    });
    let est = mc_estimate(m, bx, bound);
    check_relative(est, budget)
}

fn check_relative(est: AreaEstimate, budget: &SamplingBudget) -> Result<AreaEstimate> {
    match budget.max_rel_err {
        Some(rel) if est.err > rel * est.value => Err(Error::BudgetTooSmall(format!(
            "error {:.3e} exceeds {rel} x {:.6}",
            est.err, est.value
        ))),
        _ => Ok(est),
    }
}

/// Image-side estimate of `int n(w, p, K) dA(w)`: sample `w` over a box
/// containing `p(K)` and count its preimages in `K` with valency.
pub fn multiplicity_area(p: &Polynomial, k: &Region, samples: usize, seed: u64) -> Result<AreaEstimate> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::DegreeTooLow(n, 1));
    }
    if samples == 0 {
        return Err(Error::BudgetTooSmall("zero samples".into()));
    }
    let disc = k.bounding_disc();
    let image_center = p.eval(disc.center);
    let reach = modulus_bound(&p.add_constant(-image_center), disc.center, disc.radius);
    let bx = SampleBox::square(image_center, reach.max(f64::MIN_POSITIVE));
    let m = sample_box(seed, samples, bx, |w| match p.preimages(w) {
        Ok(set) => set.count_where(|z| k.contains(z)) as f64,
        Err(_) => f64::NAN,
    });
    if m.mean.is_nan() {
        return Err(Error::NonConvergence {
            residual: f64::NAN,
            iterations: 0,
        });
    }
    Ok(mc_estimate(m, bx, n as f64))
}

/// `rho(K) = Area(K) / (pi cap(K)^2)` with its parts.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundnessValue {
    pub rho: f64,
    pub err: f64,
    pub area_est: AreaEstimate,
    pub cap_est: CapacityEstimate,
}

pub fn roundness(k: &Region, budget: &VerifyBudget) -> Result<RoundnessValue> {
    let area_est = k.area(&budget.sampling)?;
    let cap_est = log_capacity(k, budget.fekete_n)?;
    let (a, c) = (area_est.value, cap_est.value);
    if c <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    let rho = a / (PI * c * c);
    let err = spread(|a| a / (PI * c * c), a, area_est.err) + spread(|c| a / (PI * c * c), c, cap_est.err);
    Ok(RoundnessValue {
        rho,
        err,
        area_est,
        cap_est,
    })
}

fn poly_digest(id: StatementId, p: &Polynomial, rest: &[&str]) -> String {
    let text = p.to_string();
    let mut parts = vec![id.as_str(), text.as_str()];
    parts.extend_from_slice(rest);
    inputs_digest(&parts)
}

/// `Area(p^{-1}(D)) <= pi (Area(D)/pi)^{1/n}` for a disc `D` and monic `p`.
pub fn verify_polya(p: &Polynomial, d: &Region, budget: &VerifyBudget) -> Result<Report> {
    if !matches!(d, Region::Disc { .. }) {
        return Err(Error::InvalidInput("the target must be a disc".into()));
    }
    preimage_area_report(StatementId::Polya, p, d, budget)
}

/// `Area(p^{-1}(K)) <= pi (Area(K)/pi)^{1/n}` for any region `K` and monic `p`.
pub fn verify_main(p: &Polynomial, k: &Region, budget: &VerifyBudget) -> Result<Report> {
    preimage_area_report(StatementId::Main, p, k, budget)
}

fn preimage_area_report(id: StatementId, p: &Polynomial, k: &Region, budget: &VerifyBudget) -> Result<Report> {
    require_monic(p)?;
    let n = p.degree() as f64;
    let pre = preimage_region(p, k)?;
    let lhs = pre.area(&budget.sub(0))?;
    let target = k.area(&budget.sub(1))?;
    let f = |a: f64| PI * (a / PI).powf(1.0 / n);
    let rhs = (f(target.value), spread(f, target.value, target.err));
    Ok(Report::new(
        id,
        (lhs.value, lhs.err),
        rhs,
        disc_equality(p, k),
        budget.seed(),
        poly_digest(id, p, &[&k.describe(), &budget.sampling.samples.to_string()]),
    ))
}

/// `int_K |p'|^2 >= n pi (Area(K)/pi)^n`, with an image-side cross-check
/// recorded in the note.
pub fn verify_multiplicity(p: &Polynomial, k: &Region, budget: &VerifyBudget) -> Result<Report> {
    require_monic(p)?;
    let n = p.degree();
    let area = k.area(&budget.sub(0))?;
    let f = |a: f64| n as f64 * PI * (a / PI).powi(n as i32);
    let lhs = (f(area.value), spread(f, area.value, area.err));
    let mass = mass_integral(p, k, &budget.sub(1))?;
    let image = multiplicity_area(p, k, budget.image_samples, derive_seed(budget.seed(), 2))?;
    let gap = (mass.value - image.value).abs();
    let agree = gap <= mass.err + image.err;
    // Equality needs K to be a disc centred at the unique critical point,
    // or p of degree one. Whether the critical value sits at the centre
    // instead is reported alongside, since the two readings can differ.
    let centred_at = |w: Option<C>| {
        k.essential_disc().is_some_and(|d| {
            w.is_some_and(|b| {
                (b - d.center).norm() <= crate::polynomial::STRUCTURE_TOLERANCE * (1.0 + d.center.norm() + d.radius)
            })
        })
    };
    let point_rule = centred_at(p.unique_critical_point());
    let value_rule = centred_at(p.unique_critical_value());
    let equality = n == 1 || point_rule;
    Ok(Report::new(
        StatementId::Multiplicity,
        lhs,
        (mass.value, mass.err),
        equality,
        budget.seed(),
        poly_digest(
            StatementId::Multiplicity,
            p,
            &[&k.describe(), &budget.sampling.samples.to_string()],
        ),
    )
    .with_note(format!(
        "image_side={} image_err={} cross_check={} critical_point_at_centre={} critical_value_at_centre={}",
        image.value,
        image.err,
        if agree { "agree" } else { "disagree" },
        point_rule,
        value_rule
    )))
}

/// `rho(p^{-1}(K)) <= rho(K)^{1/n}`. A non-monic `p = a p_hat` is handled
/// through `p^{-1}(K) = p_hat^{-1}(K / a)`, which leaves `rho(K)` unchanged.
pub fn verify_roundness(p: &Polynomial, k: &Region, budget: &VerifyBudget) -> Result<Report> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::DegreeTooLow(n, 1));
    }
    let (monic, lead) = p.monic_normalized()?;
    let scaled = k.map_affine(lead.inv(), C::new(0.0, 0.0))?;
    let pre = preimage_region(&monic, &scaled)?;
    let lhs = roundness(
        &pre,
        &VerifyBudget {
            sampling: budget.sub(0),
            ..budget.clone()
        },
    )?;
    let base = roundness(
        k,
        &VerifyBudget {
            sampling: budget.sub(1),
            ..budget.clone()
        },
    )?;
    let f = |r: f64| r.powf(1.0 / n as f64);
    let rhs = (f(base.rho), spread(f, base.rho, base.err));
    Ok(Report::new(
        StatementId::Roundness,
        (lhs.rho, lhs.err),
        rhs,
        disc_equality(p, k),
        budget.seed(),
        poly_digest(
            StatementId::Roundness,
            p,
            &[
                &k.describe(),
                &budget.fekete_n.to_string(),
                &budget.sampling.samples.to_string(),
            ],
        ),
    ))
}

fn concentric_discs(e: &Region, b: &Region) -> bool {
    match (e.essential_disc(), b.essential_disc()) {
        (Some(de), Some(db)) => {
            (de.center - db.center).norm() <= crate::polynomial::STRUCTURE_TOLERANCE * (1.0 + de.radius)
        }
        _ => false,
    }
}

/// `1 / cap(E, B) <= log(Area(E) / Area(B))`.
pub fn verify_carleman(c: &Condenser, budget: &VerifyBudget) -> Result<Report> {
    let cap = condenser_capacity(c, budget.grid_h)?;
    let lhs = (1.0 / cap.value, spread(|v| 1.0 / v, cap.value, cap.err));
    let ae = c.field.area(&budget.sub(0))?;
    let ab = c.plate.area(&budget.sub(1))?;
    let rhs_err = spread(|a| (a / ab.value).ln(), ae.value, ae.err) + spread(|a| (ae.value / a).ln(), ab.value, ab.err);
    Ok(Report::new(
        StatementId::Carleman,
        lhs,
        ((ae.value / ab.value).ln(), rhs_err),
        concentric_discs(&c.field, &c.plate),
        budget.seed(),
        inputs_digest(&[
            StatementId::Carleman.as_str(),
            &c.field.describe(),
            &c.plate.describe(),
            &budget.grid_h.to_string(),
        ]),
    ))
}

/// `Area(K) <= pi cap(K)^2`.
pub fn verify_isoperimetric(k: &Region, budget: &VerifyBudget) -> Result<Report> {
    let area = k.area(&budget.sampling)?;
    let cap = log_capacity(k, budget.fekete_n)?;
    let f = |c: f64| PI * c * c;
    Ok(Report::new(
        StatementId::Isoperimetric,
        (area.value, area.err),
        (f(cap.value), spread(f, cap.value, cap.err)),
        k.essential_disc().is_some(),
        budget.seed(),
        inputs_digest(&[
            StatementId::Isoperimetric.as_str(),
            &k.describe(),
            &budget.fekete_n.to_string(),
            &budget.sampling.samples.to_string(),
        ]),
    ))
}

/// `cap(p^{-1}(E), p^{-1}(B)) = n cap(E, B)`.
pub fn verify_pullback_lemma(p: &Polynomial, c: &Condenser, budget: &VerifyBudget) -> Result<Report> {
    require_monic(p)?;
    let n = p.degree() as f64;
    let pulled = pullback_condenser(p, c)?;
    let lhs = condenser_capacity(&pulled, budget.grid_h)?;
    let base = condenser_capacity(c, budget.grid_h)?;
    Ok(Report::new(
        StatementId::PullbackLemma,
        (lhs.value, lhs.err),
        (n * base.value, n * base.err),
        true,
        budget.seed(),
        poly_digest(
            StatementId::PullbackLemma,
            p,
            &[&c.field.describe(), &c.plate.describe(), &budget.grid_h.to_string()],
        ),
    ))
}

/// `cap(p^{-1}(B)) = cap(B)^{1/n}`.
pub fn verify_capacity_pullback(p: &Polynomial, b: &Region, budget: &VerifyBudget) -> Result<Report> {
    require_monic(p)?;
    let n = p.degree() as f64;
    let lhs = log_capacity(&preimage_region(p, b)?, budget.fekete_n)?;
    let base = log_capacity(b, budget.fekete_n)?;
    let f = |c: f64| c.powf(1.0 / n);
    Ok(Report::new(
        StatementId::CapacityPullback,
        (lhs.value, lhs.err),
        (f(base.value), spread(f, base.value, base.err)),
        true,
        budget.seed(),
        poly_digest(
            StatementId::CapacityPullback,
            p,
            &[&b.describe(), &budget.fekete_n.to_string()],
        ),
    ))
}

/// `(2x / (d + 2)) Area(|g| <= x) <= int_{|g| <= x} |g| dA`.
pub fn verify_integrated_carleman(g: &Polynomial, x: f64, budget: &VerifyBudget) -> Result<Report> {
    let d = g.degree();
    let k = sublevel_region(g, x)?;
    let area = k.area(&budget.sub(0))?;
    let factor = 2.0 * x / (d as f64 + 2.0);
    let disc = k.bounding_disc();
    let bx = square_of(&disc);
    let m = sample_box(derive_seed(budget.seed(), 1), budget.sampling.samples.max(1), bx, |z| {
        let v = g.eval(z).norm();
        if v <= x {
            v
        } else {
            0.0
        }
    });
    let rhs = mc_estimate(m, bx, x);
    Ok(Report::new(
        StatementId::IntegratedCarleman,
        (factor * area.value, factor * area.err),
        (rhs.value, rhs.err),
        k.essential_disc().is_some(),
        budget.seed(),
        poly_digest(
            StatementId::IntegratedCarleman,
            g,
            &[&x.to_string(), &budget.sampling.samples.to_string()],
        ),
    ))
}

/// The level `t` at which `K_t = {|p'|^2 <= t}` has area `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub t: f64,
    pub t_err: f64,
    /// `n^2 (A / pi)^{n-1}`.
    pub bound: f64,
    pub report: Report,
}

const BISECTION_STEPS: usize = 60;

fn bisect(mut lo: f64, mut hi: f64, target: f64, area: &impl Fn(f64) -> f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if area(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-9 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solves `Area(K_t) = A` by bisection and checks `t >= n^2 (A/pi)^{n-1}`.
/// When `p'` is a pure power the sublevel sets are discs and `t` is exact;
/// otherwise areas come from one fixed set of Monte Carlo samples, so the
/// estimated area is monotone in `t`.
pub fn sublevel_threshold(p: &Polynomial, a: f64, budget: &VerifyBudget) -> Result<Threshold> {
    require_monic(p)?;
    let n = p.degree();
    if n < 2 {
        return Err(Error::DegreeTooLow(n, 2));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput(format!("target area must be positive, got {a}")));
    }
    let dp = p.derivative();
    let bound = (n * n) as f64 * (a / PI).powi(n as i32 - 1);
    let pure_power = sublevel_region(&dp, 1.0)?.essential_disc().is_some();

    let (t, t_err) = if pure_power {
        let lead = dp.leading().norm();
        (lead * lead * (a / PI).powi(n as i32 - 1), 0.0)
    } else {
        let samples = budget.sampling.samples;
        if samples == 0 {
            return Err(Error::BudgetTooSmall("zero samples".into()));
        }
        let seed = derive_seed(budget.seed(), 0);
        let mut hi = bound.max(1e-12);
        let mut grow = 0;
        loop {
            let est = sublevel_region(&dp, hi.sqrt())?.area(&SamplingBudget::monte_carlo(samples, seed))?;
            if est.value - est.err > a {
                break;
            }
            hi *= 4.0;
            grow += 1;
            if grow > 200 {
                return Err(Error::BudgetTooSmall("no level reaches the target area".into()));
            }
        }
        let bx = square_of(&sublevel_region(&dp, hi.sqrt())?.bounding_disc());
        let area = |t: f64| {
            let m = sample_box(
                seed,
                samples,
                bx,
                |z| if dp.eval(z).norm_sqr() <= t { 1.0 } else { 0.0 },
            );
            m.mean * bx.area()
        };
        let t = bisect(0.0, hi, a, &area);
        let count = crate::sampling::shard_count(samples) * crate::sampling::SHARD_SIZE;
        let frac = (a / bx.area()).clamp(0.0, 1.0);
        let smoothed = (frac * count as f64 + 1.0) / (count as f64 + 2.0);
        let a_err = 3.0 * (smoothed * (1.0 - smoothed) / count as f64).sqrt() * bx.area();
        let t_up = bisect(0.0, hi, a + a_err, &area);
        let t_down = bisect(0.0, hi, (a - a_err).max(0.0), &area);
        (t, (t_up - t).max(t - t_down))
    };

    let report = Report::new(
        StatementId::ThresholdBound,
        (bound, 0.0),
        (t, t_err),
        p.unique_critical_point().is_some(),
        budget.seed(),
        poly_digest(
            StatementId::ThresholdBound,
            p,
            &[&a.to_string(), &budget.sampling.samples.to_string()],
        ),
    );
    Ok(Threshold {
        t,
        t_err,
        bound,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn unit() -> Region {
        Region::disc(c(0.0, 0.0), 1.0).unwrap()
    }

    fn quick() -> VerifyBudget {
        VerifyBudget {
            sampling: SamplingBudget::default().with_seed(5),
            image_samples: 100_000,
            fekete_n: 128,
            grid_h: 0.04,
        }
    }

    #[test]
    fn modulus_bound_dominates_on_disc() {
        let p = Polynomial::from_real(&[-1.0, 2.0, 0.5, 1.0]);
        let center = c(0.3, -0.2);
        let bound = modulus_bound(&p, center, 1.5);
        for k in 0..200 {
            let z = center + C::from_polar(1.5 * (k as f64 / 200.0), 0.91 * k as f64);
            assert!(p.eval(z).norm() <= bound);
        }
    }

    #[test]
    fn mass_integral_examples() {
        let b = SamplingBudget::default();
        let m = mass_integral(&Polynomial::monomial(2), &unit(), &b).unwrap();
        assert!((m.value - 2.0 * PI).abs() <= m.err, "{m:?}");
        let disc2 = Region::disc(c(0.0, 0.0), 2.0).unwrap();
        let m = mass_integral(&Polynomial::monomial(2), &disc2, &b).unwrap();
        assert!((m.value - 32.0 * PI).abs() <= m.err, "{m:?}");
        let sq = Region::rectangle(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        let m = mass_integral(&Polynomial::monomial(1), &sq, &b).unwrap();
        assert!((m.value - 1.0).abs() <= m.err, "{m:?}");
    }

    #[test]
    fn multiplicity_area_matches_mass_integral() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
        let mass = mass_integral(&p, &unit(), &SamplingBudget::default()).unwrap();
        let image = multiplicity_area(&p, &unit(), 200_000, 9).unwrap();
        assert!(
            (mass.value - image.value).abs() <= mass.err + image.err,
            "{mass:?} {image:?}"
        );
        let sq = Region::rectangle(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        let image = multiplicity_area(&Polynomial::monomial(1), &sq, 100_000, 3).unwrap();
        assert!((image.value - 1.0).abs() <= image.err);
    }

    #[test]
    fn roundness_of_disc_is_exactly_one() {
        let r = roundness(&Region::disc(c(2.0, 1.0), 0.3).unwrap(), &quick()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert_eq!(r.err, 0.0);
    }

    #[test]
    fn polya_equality_and_strictness() {
        let r = verify_polya(&Polynomial::monomial(2), &unit(), &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::Equality, "{r:?}");
        let r = verify_polya(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), &unit(), &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:?}");
        let p = Polynomial::centered_power(3, c(1.0, 0.0), c(0.0, 2.0));
        let d = Region::disc(c(0.0, 2.0), 8.0).unwrap();
        let r = verify_polya(&p, &d, &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::Equality, "{r:?}");
        assert!((r.lhs - 4.0 * PI).abs() <= r.lhs_err);
    }

    #[test]
    fn polya_rejects_non_monic_and_non_disc() {
        let sq = Region::rectangle(c(0.0, 0.0), c(1.0, 1.0)).unwrap();
        assert!(matches!(
            verify_polya(&Polynomial::monomial(2), &sq, &quick()),
            Err(Error::InvalidInput(_))
        ));
        assert_eq!(
            verify_polya(&Polynomial::from_real(&[0.0, 0.0, 3.0]), &unit(), &quick()),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn threshold_closed_forms() {
        let th = sublevel_threshold(&Polynomial::monomial(2), PI, &quick()).unwrap();
        assert_eq!((th.t, th.bound), (4.0, 4.0));
        assert_eq!(th.report.verdict, Verdict::Equality);
        let th = sublevel_threshold(&Polynomial::monomial(3), PI, &quick()).unwrap();
        assert!((th.t - 9.0).abs() < 1e-12 && (th.bound - 9.0).abs() < 1e-12);
    }

    #[test]
    fn threshold_with_distinct_critical_points_is_strict() {
        let p = Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0]);
        let th = sublevel_threshold(&p, 1.0, &quick()).unwrap();
        assert_eq!(th.report.verdict, Verdict::Holds, "{th:?}");
        let area = sublevel_region(&p.derivative(), th.t.sqrt())
            .unwrap()
            .area(&SamplingBudget::monte_carlo(1_000_000, 77))
            .unwrap();
        assert!((area.value - 1.0).abs() <= area.err + 0.01, "{area:?}");
    }
}
