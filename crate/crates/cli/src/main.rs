use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use lemlab_core::capacity::{condenser_capacity_detailed, log_capacity, CapacityDetail, CapacityEstimate};
use lemlab_core::format::{format_complex, parse_condenser, parse_disc, parse_polynomial, parse_region};
use lemlab_core::svg::{lemniscate_svg, DEFAULT_RESOLUTION};
use lemlab_core::sweep::{run_sweep, SweepConfig};
use lemlab_core::theorems::{self, Report, StatementId, Verdict, VerifyBudget};
use lemlab_core::{AreaMethod, Error, Polynomial, Region, SamplingBudget};

const THREADS_VAR: &str = "LEMLAB_THREADS";

#[derive(Parser)]
#[command(name = "lemlab", version, about = "Areas and capacities of polynomial lemniscates")]
struct Cli {
    /// Emit one JSON document instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mc,
    Grid,
    Exact,
}

impl From<MethodArg> for AreaMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mc => AreaMethod::MonteCarlo,
            MethodArg::Grid => AreaMethod::Grid,
            MethodArg::Exact => AreaMethod::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Area of a region file.
    Area {
        region: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Defaults to the closed form when one exists, Monte Carlo otherwise.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cell size for `--method grid`.
        #[arg(long)]
        grid_h: Option<f64>,
        /// Fail (exit 3) when err exceeds this fraction of the value.
        #[arg(long)]
        max_rel_err: Option<f64>,
    },
    /// Logarithmic capacity of a region file.
    Capacity {
        region: PathBuf,
        #[arg(long, default_value_t = 256)]
        fekete_n: usize,
    },
    /// Capacity of a condenser file `{E, B}`.
    Condenser {
        condenser: PathBuf,
        #[arg(long, default_value_t = 0.02)]
        grid_h: f64,
        /// Write the fine-grid minimizer as a CSV matrix.
        #[arg(long)]
        dump_grid: Option<PathBuf>,
    },
    /// Check one statement on the given inputs.
    Verify {
        statement_id: String,
        /// Comma-separated coefficients, lowest degree first.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// `center,radius`
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<String>,
        #[arg(long)]
        region: Option<PathBuf>,
        #[arg(long)]
        condenser: Option<PathBuf>,
        /// Sublevel for integrated_carleman.
        #[arg(long)]
        x: Option<f64>,
        /// Target area for threshold_bound.
        #[arg(long)]
        area: Option<f64>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0.02)]
        grid_h: f64,
        #[arg(long, default_value_t = 256)]
        fekete_n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Randomized checks driven by a JSON config.
    Sweep { config: PathBuf },
    /// SVG of the level curve `|p(z)| = r^n`.
    LemniscateSvg {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::BudgetTooSmall(_)) => 3,
            Failure::Core(Error::NonConvergence { .. } | Error::SolveFailure { .. }) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(path, e) => format!("{}: {e}", path.display()),
            Failure::Usage(m) => m.clone(),
        }
    }
}

/// Ordered key/value output, rendered as lines or as one JSON object.
#[derive(Default)]
struct Record(Vec<(String, Value)>);

impl Record {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    fn extend_json(&mut self, obj: Value) {
        if let Value::Object(map) = obj {
            self.0.extend(map);
        }
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let map: Map<String, Value> = self.0.iter().cloned().collect();
            return format!("{}\n", Value::Object(map));
        }
        self.0
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}\n"),
                other => format!("{k}={other}\n"),
            })
            .collect()
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn configure_threads() -> Result<usize, Failure> {
    if let Ok(text) = std::env::var(THREADS_VAR) {
        let n: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got `{text}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(rayon::current_num_threads())
}

fn capacity_record(out: &mut Record, est: &CapacityEstimate) {
    out.put("value", est.value)
        .put("err", est.err)
        .put("method", est.method.as_str());
    match &est.detail {
        CapacityDetail::ClosedForm => {}
        CapacityDetail::Fekete {
            n,
            candidates,
            diameters,
            slope,
        } => {
            out.put("fekete_n", *n)
                .put("candidates", *candidates)
                .put("diameters", json!(diameters))
                .put("slope", *slope);
        }
        CapacityDetail::GridDirichlet {
            h,
            raw_h,
            raw_2h,
            iterations,
        } => {
            out.put("grid_h", *h)
                .put("raw_h", *raw_h)
                .put("raw_2h", *raw_2h)
                .put("iterations", *iterations);
        }
    }
}

fn require<T>(value: Option<T>, flag: &str, id: StatementId) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("`verify {id}` needs {flag}")))
}

struct VerifyInputs {
    poly: Option<String>,
    disc: Option<String>,
    region: Option<PathBuf>,
    condenser: Option<PathBuf>,
    x: Option<f64>,
    area: Option<f64>,
}

impl VerifyInputs {
    fn poly(&self, id: StatementId) -> Result<Polynomial, Failure> {
        Ok(parse_polynomial(require(self.poly.as_deref(), "--poly", id)?)?)
    }

    fn region(&self, id: StatementId) -> Result<Region, Failure> {
        match (&self.disc, &self.region) {
            (Some(_), Some(_)) => Err(Failure::Usage("give only one of --disc and --region".into())),
            (Some(d), None) => Ok(parse_disc(d)?),
            (None, Some(path)) => Ok(parse_region(&read(path)?)?),
            (None, None) => Err(Failure::Usage(format!("`verify {id}` needs --disc or --region"))),
        }
    }

    fn condenser(&self, id: StatementId) -> Result<lemlab_core::capacity::Condenser, Failure> {
        let path = require(self.condenser.as_ref(), "--condenser", id)?;
        Ok(parse_condenser(&read(path)?)?)
    }
}

fn verify(id: StatementId, inputs: &VerifyInputs, budget: &VerifyBudget) -> Result<Report, Failure> {
    let report = match id {
        StatementId::Polya => theorems::verify_polya(&inputs.poly(id)?, &inputs.region(id)?, budget)?,
        StatementId::Main => theorems::verify_main(&inputs.poly(id)?, &inputs.region(id)?, budget)?,
        StatementId::Multiplicity => theorems::verify_multiplicity(&inputs.poly(id)?, &inputs.region(id)?, budget)?,
        StatementId::Roundness => theorems::verify_roundness(&inputs.poly(id)?, &inputs.region(id)?, budget)?,
        StatementId::Carleman => theorems::verify_carleman(&inputs.condenser(id)?, budget)?,
        StatementId::Isoperimetric => theorems::verify_isoperimetric(&inputs.region(id)?, budget)?,
        StatementId::PullbackLemma => {
            theorems::verify_pullback_lemma(&inputs.poly(id)?, &inputs.condenser(id)?, budget)?
        }
        StatementId::CapacityPullback => {
            theorems::verify_capacity_pullback(&inputs.poly(id)?, &inputs.region(id)?, budget)?
        }
        StatementId::IntegratedCarleman => {
            theorems::verify_integrated_carleman(&inputs.poly(id)?, require(inputs.x, "--x", id)?, budget)?
        }
        StatementId::ThresholdBound => {
            let th = theorems::sublevel_threshold(&inputs.poly(id)?, require(inputs.area, "--area", id)?, budget)?;
            th.report
        }
    };
    Ok(report)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Holds | Verdict::Equality => 0,
        Verdict::Inconclusive => 4,
        Verdict::Violated => 5,
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let threads = configure_threads()?;
    let mut out = Record::default();
    let code = match cli.command {
        Command::Area {
            region,
            samples,
            method,
            seed,
            grid_h,
            max_rel_err,
        } => {
            let region = parse_region(&read(&region)?)?;
            let budget = SamplingBudget {
                samples,
                seed,
                method: method.map(AreaMethod::from),
                grid_h,
                max_rel_err,
            };
            let est = region.area(&budget)?;
            out.put("seed", seed)
                .put("threads", threads)
                .put("value", est.value)
                .put("err", est.err)
                .put("method", est.method.as_str())
                .put("samples_or_resolution", est.samples_or_resolution);
            0
        }
        Command::Capacity { region, fekete_n } => {
            let region = parse_region(&read(&region)?)?;
            let est = log_capacity(&region, fekete_n)?;
            out.put("threads", threads);
            capacity_record(&mut out, &est);
            0
        }
        Command::Condenser {
            condenser,
            grid_h,
            dump_grid,
        } => {
            let condenser = parse_condenser(&read(&condenser)?)?;
            let run = condenser_capacity_detailed(&condenser, grid_h)?;
            if let Some(path) = &dump_grid {
                let file = fs::File::create(path).map_err(|e| Failure::Io(path.clone(), e))?;
                run.fine
                    .f
                    .write_csv(std::io::BufWriter::new(file))
                    .map_err(|e| Failure::Io(path.clone(), e))?;
            }
            out.put("threads", threads);
            capacity_record(&mut out, &run.estimate);
            out.put("cells_h", run.fine.f.nx * run.fine.f.ny)
                .put("residual", run.fine.residual)
                .put("dump_grid", dump_grid.map(|p| p.display().to_string()));
            0
        }
        Command::Verify {
            statement_id,
            poly,
            disc,
            region,
            condenser,
            x,
            area,
            samples,
            grid_h,
            fekete_n,
            seed,
        } => {
            let id: StatementId = statement_id.parse()?;
            let budget = VerifyBudget {
                sampling: SamplingBudget {
                    samples,
                    ..SamplingBudget::default().with_seed(seed)
                },
                grid_h,
                fekete_n,
                ..VerifyBudget::default()
            };
            let inputs = VerifyInputs {
                poly,
                disc,
                region,
                condenser,
                x,
                area,
            };
            let report = verify(id, &inputs, &budget)?;
            out.put("threads", threads);
            out.extend_json(report.to_json());
            verdict_code(report.verdict)
        }
        Command::Sweep { config } => {
            let config = SweepConfig::parse(&read(&config)?)?;
            let outcome = run_sweep(&config)?;
            if let Some(path) = &config.output_path {
                fs::write(path, outcome.render(&config)).map_err(|e| Failure::Io(path.into(), e))?;
            }
            let s = &outcome.summary;
            out.put("seed", config.seed)
                .put("threads", threads)
                .put("cases", config.cases)
                .put("holds", s.counts.get(&Verdict::Holds).copied().unwrap_or(0))
                .put("equality", s.counts.get(&Verdict::Equality).copied().unwrap_or(0))
                .put(
                    "inconclusive",
                    s.counts.get(&Verdict::Inconclusive).copied().unwrap_or(0),
                )
                .put("violated", s.violated())
                .put("errors", s.errors)
                .put("min_margin", s.min_margin)
                .put("min_margin_over_budget", s.min_scaled_margin)
                .put("histogram", json!(s.histogram))
                .put("output_path", config.output_path.clone());
            if s.violated() > 0 {
                5
            } else {
                0
            }
        }
        Command::LemniscateSvg {
            poly,
            r,
            out: path,
            resolution,
        } => {
            let p = parse_polynomial(&poly)?;
            let svg = lemniscate_svg(&p, r, resolution)?;
            fs::write(&path, &svg).map_err(|e| Failure::Io(path.clone(), e))?;
            out.put(
                "poly",
                p.coeffs()
                    .iter()
                    .map(|c| format_complex(*c))
                    .collect::<Vec<_>>()
                    .join(","),
            )
            .put("r", r)
            .put("resolution", resolution)
            .put("paths", svg.matches("<path").count())
            .put("out", path.display().to_string());
            0
        }
    };
    print!("{}", out.render(cli.json));
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
