//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line
//! and then asserts. Run with `--nocapture` to see the lines.

use std::f64::consts::{E, PI, TAU};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lemlab_core::capacity::{
    condenser_capacity, dirichlet_energy, log_capacity, log_capacity_numeric, schwarz_symmetrize, CapacityMethod,
    Condenser, GridFunction,
};
use lemlab_core::sweep::{run_sweep, SweepConfig};
use lemlab_core::theorems::{self, Verdict, VerifyBudget};
use lemlab_core::{Polynomial, Region};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn disc(re: f64, radius: f64) -> Region {
    Region::disc(c(re, 0.0), radius).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn conclude(n: u32, name: &str, checks: &[(bool, String)], elapsed: Duration, limit: Duration) {
    let timely = elapsed <= limit;
    let ok = timely && checks.iter().all(|(pass, _)| *pass);
    let detail: Vec<&str> = checks.iter().map(|(_, d)| d.as_str()).collect();
    println!(
        "criterion {n:>2} {name}: {} [{:.1}s / {}s] {}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        detail.join("; ")
    );
    for (pass, d) in checks {
        assert!(*pass, "criterion {n}: {d}");
    }
    assert!(timely, "criterion {n}: took {elapsed:?}, limit {limit:?}");
}

#[test]
fn c01_polya_equality() {
    let start = Instant::now();
    let r = theorems::verify_polya(&Polynomial::monomial(2), &disc(0.0, 1.0), &VerifyBudget::default()).unwrap();
    let checks = [
        (rel(r.lhs, PI) < 0.01, format!("area {:.5} vs pi", r.lhs)),
        (r.verdict == Verdict::Equality, format!("verdict {}", r.verdict)),
    ];
    conclude(1, "polya equality", &checks, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn c02_bernoulli_strictness() {
    let start = Instant::now();
    let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]);
    let r = theorems::verify_polya(&p, &disc(0.0, 1.0), &VerifyBudget::default()).unwrap();
    // Polar form of |z^2 - 1| <= 1: r^2 <= 2 cos(2 theta), area 2.
    let checks = [
        (rel(r.lhs, 2.0) < 0.02, format!("lhs {:.5} vs 2", r.lhs)),
        (r.rhs == PI, format!("rhs {}", r.rhs)),
        (r.verdict == Verdict::Holds, format!("verdict {}", r.verdict)),
    ];
    conclude(
        2,
        "bernoulli strictness",
        &checks,
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn c03_multiplicity_equality() {
    let start = Instant::now();
    let budget = VerifyBudget::default();
    let mut checks = Vec::new();
    for n in [2usize, 3] {
        let r = theorems::verify_multiplicity(&Polynomial::monomial(n), &disc(0.0, 1.0), &budget).unwrap();
        let truth = n as f64 * PI;
        checks.push((rel(r.lhs, truth) < 0.01, format!("n={n} lhs {:.5}", r.lhs)));
        checks.push((rel(r.rhs, truth) < 0.01, format!("n={n} rhs {:.5}", r.rhs)));
        checks.push((r.verdict == Verdict::Equality, format!("n={n} verdict {}", r.verdict)));
    }
    conclude(
        3,
        "multiplicity equality",
        &checks,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn c04_integrated_carleman() {
    let start = Instant::now();
    let budget = VerifyBudget::default();
    let eq = theorems::verify_integrated_carleman(&Polynomial::monomial(1), 1.0, &budget).unwrap();
    let strict = theorems::verify_integrated_carleman(&Polynomial::from_real(&[-1.0, 0.0, 1.0]), 1.0, &budget).unwrap();
    let truth = TAU / 3.0;
    let checks = [
        (rel(eq.lhs, truth) < 0.01, format!("g=z lhs {:.5}", eq.lhs)),
        (rel(eq.rhs, truth) < 0.01, format!("g=z rhs {:.5}", eq.rhs)),
        (eq.verdict == Verdict::Equality, format!("g=z verdict {}", eq.verdict)),
        (
            strict.verdict == Verdict::Holds,
            format!("g=z^2-1 verdict {}", strict.verdict),
        ),
    ];
    conclude(
        4,
        "integrated carleman",
        &checks,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn c05_annulus_condenser() {
    let start = Instant::now();
    let cond = Condenser::new(disc(0.0, E), disc(0.0, 1.0)).unwrap();
    let est = condenser_capacity(&cond, 0.02).unwrap();
    let r = theorems::verify_carleman(&cond, &VerifyBudget::default()).unwrap();
    let checks = [
        (
            rel(est.value, 0.5) < 0.02,
            format!("cap {:.6} +- {:.1e}", est.value, est.err),
        ),
        (est.method == CapacityMethod::GridDirichlet, "grid method".to_string()),
        (
            r.verdict == Verdict::Equality,
            format!("carleman {} (1/cap {:.5}, log ratio {:.5})", r.verdict, r.lhs, r.rhs),
        ),
    ];
    conclude(
        5,
        "annulus condenser",
        &checks,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn c06_pullback_lemma() {
    let start = Instant::now();
    let cond = Condenser::new(disc(0.0, 4.0), disc(0.0, 1.0)).unwrap();
    let r = theorems::verify_pullback_lemma(&Polynomial::monomial(2), &cond, &VerifyBudget::default()).unwrap();
    // cap(Disc(0,R), Disc(0,r)) = 1 / (2 log(R/r)).
    let base = 1.0 / (2.0 * 4f64.ln());
    let checks = [
        (
            rel(r.lhs, 2.0 * base) < 0.04,
            format!("lhs {:.5} vs {:.5}", r.lhs, 2.0 * base),
        ),
        (rel(r.rhs, 2.0 * base) < 0.04, format!("rhs {:.5}", r.rhs)),
        (r.verdict == Verdict::Equality, format!("verdict {}", r.verdict)),
    ];
    conclude(6, "pullback lemma", &checks, start.elapsed(), Duration::from_secs(120));
}

#[test]
fn c07_logarithmic_capacity() {
    let start = Instant::now();
    let exact = log_capacity(&disc(1.0, 3.0), 256).unwrap();
    let numeric = log_capacity_numeric(&disc(0.0, 1.0), 256).unwrap();
    let bernoulli = theorems::verify_capacity_pullback(
        &Polynomial::from_real(&[-1.0, 0.0, 1.0]),
        &disc(0.0, 1.0),
        &VerifyBudget::default(),
    )
    .unwrap();
    let checks = [
        (
            exact.value == 3.0 && exact.err == 0.0 && exact.method == CapacityMethod::ClosedForm,
            format!("closed form {}", exact.value),
        ),
        (
            rel(numeric.value, 1.0) < 0.01,
            format!("fekete disc {:.5} +- {:.1e}", numeric.value, numeric.err),
        ),
        (
            rel(bernoulli.lhs, 1.0) < 0.02,
            format!("cap(bernoulli) {:.5}", bernoulli.lhs),
        ),
        (
            bernoulli.verdict == Verdict::Equality,
            format!("identity {}", bernoulli.verdict),
        ),
    ];
    conclude(
        7,
        "logarithmic capacity",
        &checks,
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn c08_threshold_bound() {
    let start = Instant::now();
    let budget = VerifyBudget::default();
    let sq = theorems::sublevel_threshold(&Polynomial::monomial(2), PI, &budget).unwrap();
    let cube = theorems::sublevel_threshold(&Polynomial::monomial(3), PI, &budget).unwrap();
    let cheb = theorems::sublevel_threshold(&Polynomial::from_real(&[0.0, -3.0, 0.0, 1.0]), PI, &budget).unwrap();
    let checks = [
        (rel(sq.t, 4.0) < 0.01, format!("z^2 t {:.6}", sq.t)),
        (rel(cube.t, 9.0) < 0.01, format!("z^3 t {:.6}", cube.t)),
        (
            cheb.report.margin > cheb.report.budget() && cheb.report.verdict == Verdict::Holds,
            format!("z^3-3z t {:.4} +- {:.1e} vs {}", cheb.t, cheb.t_err, cheb.bound),
        ),
    ];
    conclude(8, "threshold bound", &checks, start.elapsed(), Duration::from_secs(30));
}

#[test]
fn c09_symmetrization() {
    let start = Instant::now();
    let h: f64 = 0.02;
    let m = (2.0 / h).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut passed = 0;
    for k in 0..50 {
        // The first case is the reference bump; the rest vary centre and
        // slope with the support kept inside the grid.
        let (centre, slope) = if k == 0 {
            (c(0.5, 0.0), 4.0)
        } else {
            let slope = rng.gen_range(2.0..6.0);
            let lim = 0.98 - 1.0 / slope;
            (c(rng.gen_range(-lim..lim), rng.gen_range(-lim..lim)), slope)
        };
        let f = GridFunction::from_fn(c(-1.0, -1.0), h, m, m, |z| (1.0 - slope * (z - centre).norm()).max(0.0));
        let ratio = dirichlet_energy(&schwarz_symmetrize(&f)) / dirichlet_energy(&f);
        worst = worst.max(ratio);
        if ratio <= 1.02 {
            passed += 1;
        }
    }
    let checks = [(passed == 50, format!("{passed}/50 within 1.02, worst ratio {worst:.4}"))];
    conclude(9, "symmetrization", &checks, start.elapsed(), Duration::from_secs(30));
}

#[test]
fn c10_randomized_sweep() {
    let start = Instant::now();
    let config = SweepConfig::parse(r#"{"seed": 42, "cases": 200, "degree_max": 5}"#).unwrap();
    let first = run_sweep(&config).unwrap();
    let second = run_sweep(&config).unwrap();
    let (a, b) = (first.render(&config), second.render(&config));
    let s = &first.summary;
    let mut covered: Vec<_> = first.cases.iter().map(|c| c.statement_id).collect();
    covered.sort();
    covered.dedup();
    let checks = [
        (s.violated() == 0, format!("violated={}", s.violated())),
        (s.errors == 0, format!("errors={}", s.errors)),
        (covered.len() == 10, format!("{} statements", covered.len())),
        (a == b, "byte-identical rerun".to_string()),
    ];
    let counts: Vec<String> = s
        .counts
        .iter()
        .map(|(v, n)| format!("{}={n}", v.as_str().to_lowercase()))
        .collect();
    println!("sweep summary: {}", counts.join(" "));
    conclude(
        10,
        "randomized sweep",
        &checks,
        start.elapsed(),
        Duration::from_secs(900),
    );
}
