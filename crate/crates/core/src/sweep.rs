//! Randomized sweeps over all statements with reproducible per-case seeds.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::capacity::Condenser;
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::region::{Region, SamplingBudget};
use crate::sampling::{derive_seed, stream_rng};
use crate::theorems::{self, Report, StatementId, Verdict, VerifyBudget};

type C = Complex64;

/// Upper bin edges for `margin / budget`; the last bin is open.
pub const HISTOGRAM_EDGES: [f64; 6] = [-1.0, 0.0, 1.0, 10.0, 100.0, 1000.0];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub cases: usize,
    #[serde(default = "default_degree_max")]
    pub degree_max: usize,
    #[serde(default)]
    pub statements: Vec<String>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default = "default_grid_h")]
    pub grid_h: f64,
    #[serde(default)]
    pub output_path: Option<String>,
}

fn default_degree_max() -> usize {
    5
}

fn default_mc_samples() -> usize {
    100_000
}

fn default_grid_h() -> f64 {
    0.04
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<SweepConfig> {
        let config: SweepConfig = serde_json::from_str(text).map_err(|e| Error::parse("sweep", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cases < 1 {
            return Err(Error::parse("cases", "must be at least 1"));
        }
        if !(1..=10).contains(&self.degree_max) {
            return Err(Error::parse("degree_max", "must lie in [1, 10]"));
        }
        if self.mc_samples < 10_000 {
            return Err(Error::parse("mc_samples", "must be at least 10000"));
        }
        if !(self.grid_h > 0.0 && self.grid_h <= 0.25) {
            return Err(Error::parse("grid_h", "must lie in (0, 0.25]"));
        }
        self.statement_ids()?;
        Ok(())
    }

    /// The configured statements, or all of them when none are listed.
    pub fn statement_ids(&self) -> Result<Vec<StatementId>> {
        if self.statements.is_empty() {
            return Ok(StatementId::ALL.to_vec());
        }
        self.statements
            .iter()
            .enumerate()
            .map(|(k, s)| {
                s.parse()
                    .map_err(|_| Error::parse(format!("statements[{k}]"), format!("unknown statement `{s}`")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: usize,
    pub statement_id: StatementId,
    pub seed: u64,
    pub inputs: String,
    pub result: std::result::Result<Report, Error>,
}

impl CaseOutcome {
    pub fn to_line(&self) -> String {
        match &self.result {
            Ok(r) => format!("case={} {} inputs={}", self.case, r.to_line(), self.inputs),
            Err(e) => format!(
                "case={} statement_id={} seed={} error={} inputs={}",
                self.case, self.statement_id, self.seed, e, self.inputs
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub counts: BTreeMap<Verdict, usize>,
    pub errors: usize,
    pub min_margin: f64,
    /// Smallest `margin / budget` over all reports.
    pub min_scaled_margin: f64,
    pub histogram: [usize; HISTOGRAM_EDGES.len() + 1],
}

impl SweepSummary {
    pub fn violated(&self) -> usize {
        self.counts.get(&Verdict::Violated).copied().unwrap_or(0)
    }

    fn from_cases(cases: &[CaseOutcome]) -> SweepSummary {
        let mut counts = BTreeMap::new();
        for v in [
            Verdict::Holds,
            Verdict::Equality,
            Verdict::Inconclusive,
            Verdict::Violated,
        ] {
            counts.insert(v, 0);
        }
        let mut summary = SweepSummary {
            counts,
            errors: 0,
            min_margin: f64::INFINITY,
            min_scaled_margin: f64::INFINITY,
            histogram: [0; HISTOGRAM_EDGES.len() + 1],
        };
        for c in cases {
            match &c.result {
                Ok(r) => {
                    *summary.counts.entry(r.verdict).or_default() += 1;
                    summary.min_margin = summary.min_margin.min(r.margin);
                    let scaled = r.margin / r.budget();
                    summary.min_scaled_margin = summary.min_scaled_margin.min(scaled);
                    let bin = HISTOGRAM_EDGES
                        .iter()
                        .position(|&edge| scaled < edge)
                        .unwrap_or(HISTOGRAM_EDGES.len());
                    summary.histogram[bin] += 1;
                }
                Err(_) => summary.errors += 1,
            }
        }
        summary
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (v, n) in &self.counts {
            let _ = writeln!(out, "{}={n}", v.as_str().to_lowercase());
        }
        let _ = writeln!(out, "errors={}", self.errors);
        let _ = writeln!(out, "min_margin={}", self.min_margin);
        let _ = writeln!(out, "min_margin_over_budget={}", self.min_scaled_margin);
        let mut lo = "-inf".to_string();
        for (k, count) in self.histogram.iter().enumerate() {
            let hi = HISTOGRAM_EDGES.get(k).map_or("inf".to_string(), |e| e.to_string());
            let _ = writeln!(out, "histogram[{lo},{hi})={count}");
            lo = hi;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub cases: Vec<CaseOutcome>,
    pub summary: SweepSummary,
}

impl SweepOutcome {
    /// Per-case lines followed by the summary.
    pub fn render(&self, config: &SweepConfig) -> String {
        let mut out = format!(
            "seed={} cases={} degree_max={} mc_samples={} grid_h={}\n",
            config.seed, config.cases, config.degree_max, config.mc_samples, config.grid_h
        );
        for c in &self.cases {
            out.push_str(&c.to_line());
            out.push('\n');
        }
        out.push_str(&self.summary.render());
        out
    }
}

/// Runs every case; case `k` checks statement `k mod len` with a seed
/// derived from `(config.seed, k)`, so output does not depend on scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let ids = config.statement_ids()?;
    let cases: Vec<CaseOutcome> = (0..config.cases)
        .into_par_iter()
        .map(|k| run_case(config, ids[k % ids.len()], k))
        .collect();
    let summary = SweepSummary::from_cases(&cases);
    Ok(SweepOutcome { cases, summary })
}

fn run_case(config: &SweepConfig, id: StatementId, case: usize) -> CaseOutcome {
    let seed = derive_seed(config.seed, case as u64);
    let mut rng = stream_rng(seed, u64::MAX);
    let budget = VerifyBudget {
        sampling: SamplingBudget {
            samples: config.mc_samples,
            ..SamplingBudget::default().with_seed(seed)
        },
        image_samples: (config.mc_samples / 4).max(10_000),
        fekete_n: 128,
        grid_h: config.grid_h,
    };
    let (inputs, result) = match Case::draw(id, config.degree_max, &mut rng) {
        Ok(c) => (c.describe(), c.verify(&budget)),
        Err(e) => (String::new(), Err(e)),
    };
    CaseOutcome {
        case,
        statement_id: id,
        seed,
        inputs,
        result,
    }
}

enum Case {
    PolyRegion(StatementId, Polynomial, Region),
    Region(Region),
    Condenser(Condenser),
    Pullback(Polynomial, Condenser),
    Integrated(Polynomial, f64),
    Threshold(Polynomial, f64),
}

impl Case {
    fn draw(id: StatementId, degree_max: usize, rng: &mut ChaCha8Rng) -> Result<Case> {
        let degree = rng.gen_range(1..=degree_max);
        Ok(match id {
            StatementId::Polya => {
                if rng.gen_bool(0.3) {
                    let b = point(rng, 1.0);
                    let c = point(rng, 1.0);
                    let p = Polynomial::centered_power(degree, b, c);
                    Case::PolyRegion(id, p, Region::disc(c, rng.gen_range(0.3..2.0))?)
                } else {
                    Case::PolyRegion(
                        id,
                        monic(rng, degree),
                        Region::disc(point(rng, 1.0), rng.gen_range(0.3..2.0))?,
                    )
                }
            }
            StatementId::Main | StatementId::CapacityPullback => Case::PolyRegion(id, monic(rng, degree), region(rng)?),
            StatementId::Multiplicity => {
                if rng.gen_bool(0.3) {
                    let b = point(rng, 1.0);
                    let p = Polynomial::centered_power(degree, b, point(rng, 1.0));
                    Case::PolyRegion(id, p, Region::disc(b, rng.gen_range(0.3..1.2))?)
                } else {
                    Case::PolyRegion(id, monic(rng, degree), region(rng)?)
                }
            }
            StatementId::Roundness => {
                let lead = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
                Case::PolyRegion(id, monic(rng, degree).scale(lead), region(rng)?)
            }
            StatementId::Isoperimetric => Case::Region(region(rng)?),
            StatementId::Carleman => Case::Condenser(condenser(rng)?),
            StatementId::PullbackLemma => {
                let p = small_monic(rng, degree.min(3));
                let values: Vec<C> = if p.degree() >= 2 {
                    p.derivative().roots()?.iter().map(|(z, _)| p.eval(*z)).collect()
                } else {
                    vec![p.eval(C::new(0.0, 0.0))]
                };
                let center = values.iter().sum::<C>() / values.len() as f64;
                let spread = values.iter().map(|v| (v - center).norm()).fold(0.0, f64::max);
                let rb = spread + rng.gen_range(0.3..0.8);
                let re = (rb * rng.gen_range(2.0..3.5)).min(5.0).max(1.5 * rb);
                let c = Condenser::new(Region::disc(center, re)?, Region::disc(center, rb)?)?;
                Case::Pullback(p, c)
            }
            StatementId::IntegratedCarleman => {
                let lead = C::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
                Case::Integrated(monic(rng, degree).scale(lead), rng.gen_range(0.3..2.0))
            }
            StatementId::ThresholdBound => Case::Threshold(monic(rng, degree.max(2)), rng.gen_range(0.5..3.0)),
        })
    }

    fn describe(&self) -> String {
        match self {
            Case::PolyRegion(_, p, k) => format!("p={p};K={}", k.describe()),
            Case::Region(k) => format!("K={}", k.describe()),
            Case::Condenser(c) => format!("E={};B={}", c.field.describe(), c.plate.describe()),
            Case::Pullback(p, c) => format!("p={p};E={};B={}", c.field.describe(), c.plate.describe()),
            Case::Integrated(g, x) => format!("g={g};x={x}"),
            Case::Threshold(p, a) => format!("p={p};A={a}"),
        }
    }

    fn verify(&self, budget: &VerifyBudget) -> Result<Report> {
        match self {
            Case::PolyRegion(id, p, k) => match id {
                StatementId::Polya => theorems::verify_polya(p, k, budget),
                StatementId::Main => theorems::verify_main(p, k, budget),
                StatementId::Multiplicity => theorems::verify_multiplicity(p, k, budget),
                StatementId::Roundness => theorems::verify_roundness(p, k, budget),
                StatementId::CapacityPullback => theorems::verify_capacity_pullback(p, k, budget),
                _ => unreachable!("statement {id} does not take (p, K)"),
            },
            Case::Region(k) => theorems::verify_isoperimetric(k, budget),
            Case::Condenser(c) => theorems::verify_carleman(c, budget),
            Case::Pullback(p, c) => theorems::verify_pullback_lemma(p, c, budget),
            Case::Integrated(g, x) => theorems::verify_integrated_carleman(g, *x, budget),
            Case::Threshold(p, a) => theorems::sublevel_threshold(p, *a, budget).map(|t| t.report),
        }
    }
}

fn point(rng: &mut ChaCha8Rng, r: f64) -> C {
    C::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn monic(rng: &mut ChaCha8Rng, degree: usize) -> Polynomial {
    let mut coeffs: Vec<C> = (0..degree).map(|_| point(rng, 1.0)).collect();
    coeffs.push(C::new(1.0, 0.0));
    Polynomial::new(coeffs)
}

fn small_monic(rng: &mut ChaCha8Rng, degree: usize) -> Polynomial {
    let mut coeffs: Vec<C> = (0..degree).map(|_| point(rng, 0.4)).collect();
    coeffs.push(C::new(1.0, 0.0));
    Polynomial::new(coeffs)
}

fn convex_polygon(rng: &mut ChaCha8Rng, center: C, r: f64) -> Result<Region> {
    let k = rng.gen_range(3..=7);
    let mut angles: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 0.2);
    if angles.len() < 3 {
        angles = vec![0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
    }
    Region::polygon(angles.iter().map(|&t| center + C::from_polar(r, t)).collect())
}

fn region(rng: &mut ChaCha8Rng) -> Result<Region> {
    let center = point(rng, 1.0);
    match rng.gen_range(0..6) {
        0 => Region::disc(center, rng.gen_range(0.3..1.5)),
        1 => {
            let size = C::new(rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5));
            Region::rectangle(center - size / 2.0, center + size / 2.0)
        }
        2 => {
            let r = rng.gen_range(0.5..1.3);
            convex_polygon(rng, center, r)
        }
        3 => {
            let r_out = rng.gen_range(0.6..1.5);
            Region::annulus(center, r_out * rng.gen_range(0.2..0.7), r_out)
        }
        4 => {
            let r = rng.gen_range(0.4..1.0);
            let size = C::new(rng.gen_range(0.3..1.0), rng.gen_range(0.3..1.0));
            let offset = C::from_polar(r, rng.gen_range(0.0..TAU));
            Region::union(vec![
                Region::disc(center, r)?,
                Region::rectangle(center + offset - size / 2.0, center + offset + size / 2.0)?,
            ])
        }
        _ => {
            // Disc with a thin radial slit.
            let r = rng.gen_range(0.4..1.0);
            let dir = C::from_polar(1.0, rng.gen_range(0.0..TAU));
            let normal = dir * C::new(0.0, 1e-5);
            let (a, b) = (center + dir * (0.9 * r), center + dir * (r * rng.gen_range(1.1..1.6)));
            Region::union(vec![
                Region::disc(center, r)?,
                Region::polygon(vec![a - normal, b - normal, b + normal, a + normal])?,
            ])
        }
    }
}

fn condenser(rng: &mut ChaCha8Rng) -> Result<Condenser> {
    let center = point(rng, 1.0);
    let big: f64 = rng.gen_range(1.0..2.0);
    let small = big * rng.gen_range(0.2..0.5);
    let offset = C::from_polar(
        rng.gen_range(0.0..0.8) * (0.8 * big - small).max(0.0),
        rng.gen_range(0.0..TAU),
    );
    let field = if rng.gen_bool(0.5) {
        Region::disc(center, big)?
    } else {
        Region::rectangle(center - C::new(big, big), center + C::new(big, big))?
    };
    let plate = if rng.gen_bool(0.5) {
        Region::disc(center + offset, small)?
    } else {
        let h = C::new(small, small) * 0.7;
        Region::rectangle(center + offset - h, center + offset + h)?
    };
    Condenser::new(field, plate)
}
