//! Command-line front end: parse maps and points, run one operation, and
//! report in plain text or as `key=value` lines.

pub mod error;
pub mod mapfile;

use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodred::arith::{FqField, PrimeContext};
use goodred::geom::{chart_of, reduce_morphism, reduce_point, taylor_expand, Morphism, ProjPointQ};
use goodred::orbits::{certify_period, cycle_census, orbit_fq, PeriodCertificate};
use goodred::periods::{bound_report, check_lemma_recurrences, decompose_point, exceptional_primes, valuation_trace};
use goodred::reduction::{good_primes_with, has_good_reduction_with, Certificate, SearchOptions, Verdict, DEFAULT_SEARCH_BUDGET};
use goodred::search::{candidate_periods, search_periodic};

pub use error::CliError;
pub use mapfile::{parse_morphism, parse_point, render};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Kv,
}

#[derive(Debug, Parser)]
#[command(name = "goodred", version, about = "Periodic points of maps of projective space and their reductions mod p")]
pub struct Cli {
    /// Output style; `kv` prints one key=value per line.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct MapArg {
    /// Morphism file.
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward orbit of the reduction of a point.
    Orbit {
        #[command(flatten)]
        map: MapArg,
        /// Point as comma-separated rationals, e.g. `0,1` or `[1:-1/2]`.
        #[arg(long)]
        point: String,
        /// A prime number.
        #[arg(long)]
        prime: u64,
    },
    /// Reduce the map modulo a prime.
    Reduce {
        #[command(flatten)]
        map: MapArg,
        /// A prime number.
        #[arg(long)]
        prime: u64,
    },
    /// Decide good reduction at a prime, with a certificate.
    Goodred {
        #[command(flatten)]
        map: MapArg,
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Largest |P^{N-1}(F_{p^j})| searched at one extension degree.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u128,
    },
    /// Primes at which the reduced period of a periodic point may drop.
    Primes {
        #[command(flatten)]
        map: MapArg,
        /// Point as comma-separated rationals, e.g. `0,1` or `[1:-1/2]`.
        #[arg(long)]
        point: String,
        /// Also list primes up to this bound without certified good reduction.
        #[arg(long, default_value_t = 50)]
        bound: u64,
        /// Largest period tried.
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
    },
    /// Certify the exact period of a rational point.
    Certify {
        #[command(flatten)]
        map: MapArg,
        /// Point as comma-separated rationals, e.g. `0,1` or `[1:-1/2]`.
        #[arg(long)]
        point: String,
        /// Largest period tried.
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
    },
    /// Split the period as n = m r' p^e at a prime of good reduction.
    Decompose {
        #[command(flatten)]
        map: MapArg,
        /// Point as comma-separated rationals, e.g. `0,1` or `[1:-1/2]`.
        #[arg(long)]
        point: String,
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Largest period tried.
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
    },
    /// Period bounds for a prime with v(p) given.
    Bounds {
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Valuation v(p) of the prime in the base ring.
        #[arg(long, default_value_t = 1)]
        vp: u64,
        /// Dimension d of the induced map on the cotangent space.
        #[arg(long, default_value_t = 1)]
        dim: u32,
    },
    /// Every cycle of the reduced map over F_{p^j}.
    Census {
        #[command(flatten)]
        map: MapArg,
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Extension degree j of the field F_{p^j}.
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Lift a reduced periodic point to Z/p^K.
    Lift {
        #[command(flatten)]
        map: MapArg,
        /// Point with p-integral coordinates; only its reduction is used.
        #[arg(long)]
        point: String,
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Precision K: work modulo p^K.
        #[arg(long)]
        precision: u32,
        /// Lift a fixed point of the m-th iterate (default: the reduced period).
        #[arg(long)]
        period: Option<u64>,
    },
    /// Rational periodic points of bounded naive height.
    Search {
        #[command(flatten)]
        map: MapArg,
        /// Largest naive height of the points enumerated.
        #[arg(long)]
        height: u64,
        /// Comma-separated good primes (default: every good prime up to 13).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Valuations along p-power iterates near a point fixed mod p, and the lemma check.
    Trace {
        #[command(flatten)]
        map: MapArg,
        /// Point as comma-separated rationals, e.g. `0,1` or `[1:-1/2]`.
        #[arg(long)]
        point: String,
        /// A prime number.
        #[arg(long)]
        prime: u64,
        /// Precision K: work modulo p^K.
        #[arg(long)]
        precision: u32,
        /// Number of p-power steps traced.
        #[arg(long, default_value_t = 3)]
        steps: u32,
        /// Truncation order of the local expansion.
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
}

/// A finished report: human lines, machine pairs and an exit status.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<String>,
    pub pairs: Vec<(String, String)>,
    pub exit: i32,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.pairs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Plain => {
                for l in &self.lines {
                    out.push_str(l);
                    out.push('\n');
                }
            }
            Format::Kv => {
                for (k, v) in &self.pairs {
                    out.push_str(&format!("{k}={v}\n"));
                }
                out.push_str(&format!("exit={}\n", self.exit));
            }
        }
        out
    }
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = cli.format;
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| execute(&cli.command, j > 1)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => execute(&cli.command, true),
    };
    match result {
        Ok(report) => Outcome { code: report.exit, stdout: report.render(format), stderr: String::new() },
        Err(err) => {
            let code = err.exit_code();
            let stdout = match format {
                Format::Kv => format!("error={err}\nexit={code}\n"),
                Format::Plain => String::new(),
            };
            Outcome { code, stdout, stderr: format!("error: {err}\n") }
        }
    }
}

fn load_map(arg: &MapArg) -> Result<Morphism, CliError> {
    let text = std::fs::read_to_string(&arg.map)
        .map_err(|e| CliError::Io { path: arg.map.display().to_string(), message: e.to_string() })?;
    parse_morphism(&text)
}

fn join<T: Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn certified(phi: &Morphism, point: &ProjPointQ, nmax: u64) -> Result<u64, CliError> {
    match certify_period(phi, point, nmax)? {
        PeriodCertificate::Periodic(n) => Ok(n),
        PeriodCertificate::NotPeriodic { .. } => Err(goodred::Error::NotPeriodic(nmax).into()),
    }
}

fn execute(cmd: &Command, parallel: bool) -> Result<Report, CliError> {
    let mut r = Report::default();
    match cmd {
        Command::Orbit { map, point, prime } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            let opts = SearchOptions { parallel, ..SearchOptions::default() };
            has_good_reduction_with(&phi, *prime, &opts)?.ensure_good()?;
            let field = FqField::prime(*prime)?;
            let orbit = orbit_fq(&reduce_morphism(&phi, &field), &reduce_point(&point, &field))?;
            let path = join(&orbit.points, " -> ");
            r.line(format!("orbit of {point} mod {prime}: {path} -> {}", orbit.points[orbit.tail]));
            r.line(format!("tail {}, cycle length {}", orbit.tail, orbit.cycle));
            r.kv("prime", prime).kv("tail", orbit.tail).kv("m", orbit.cycle).kv("orbit", join(&orbit.points, ","));
        }
        Command::Reduce { map, prime } => {
            let phi = load_map(map)?;
            let red = reduce_morphism(&phi, &FqField::prime(*prime)?);
            r.line(red.to_string());
            r.kv("prime", prime).kv("map", &red);
        }
        Command::Goodred { map, prime, budget } => {
            let phi = load_map(map)?;
            let opts = SearchOptions { budget: *budget, parallel };
            let report = has_good_reduction_with(&phi, *prime, &opts)?;
            r.kv("prime", prime).kv("verdict", report.verdict);
            let cert = match &report.certificate {
                Certificate::Resultant(v) => format!("resultant {v} mod {prime}"),
                Certificate::ExhaustiveSearch { max_degree } => format!("no common zero over F_{prime}^j, j <= {max_degree}"),
                Certificate::Witness { degree, point } => {
                    r.kv("witness", point).kv("witness_degree", degree);
                    format!("common zero {point} over F_{prime}^{degree}")
                }
                Certificate::ZeroResultant { searched_degree } => {
                    format!("resultant vanishes; no witness found up to degree {searched_degree}")
                }
                Certificate::BudgetExceeded { degree } => format!("search budget exceeded at degree {degree}"),
            };
            r.line(format!("{} reduction at p = {prime}: {cert}", report.verdict));
            r.kv("certificate", cert);
            r.exit = if report.verdict == Verdict::Good { 0 } else { 1 };
        }
        Command::Primes { map, point, bound, nmax } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            let n = certified(&phi, &point, *nmax)?;
            let primes = exceptional_primes(&phi, &point, n, *bound)?;
            r.line(format!("{point} has period {n}"));
            r.line(if primes.is_empty() {
                "no exceptional primes".to_string()
            } else {
                format!("exceptional primes: {}", join(&primes, ", "))
            });
            r.kv("n", n).kv("bound", bound).kv("primes", join(&primes, ","));
        }
        Command::Certify { map, point, nmax } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            match certify_period(&phi, &point, *nmax)? {
                PeriodCertificate::Periodic(n) => {
                    r.line(format!("{point} is periodic with exact period {n}"));
                    r.kv("verdict", "periodic").kv("n", n);
                }
                PeriodCertificate::NotPeriodic { orbit, height_exceeded } => {
                    let why = if height_exceeded { "height exceeded the cap" } else { "no return within the bound" };
                    r.line(format!("{point} is not periodic with period <= {nmax}: {why} after {} steps", orbit.len()));
                    r.kv("verdict", "not-periodic").kv("steps", orbit.len());
                    r.exit = 1;
                }
            }
        }
        Command::Decompose { map, point, prime, nmax } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            let d = decompose_point(&phi, &point, *prime, *nmax)?;
            let p_part = prime.pow(d.e);
            r.line(format!("n = {} = m * r' * p^e = {} * {} * {p_part}  (p = {prime}, e = {})", d.n, d.m, d.r_prime, d.e));
            r.line(format!("multiplier order {}", d.r_full));
            r.kv("prime", prime).kv("n", d.n).kv("m", d.m).kv("r", d.r_prime).kv("e", d.e).kv("multiplier_order", d.r_full);
        }
        Command::Bounds { prime, vp, dim } => {
            let b = bound_report(*prime, *vp, *dim)?;
            r.line(format!("p = {prime}, v(p) = {vp}, dimension {dim}"));
            r.line(format!("e <= {}", b.e_max));
            r.line(format!("r' <= {}", b.r_max));
            if let Some(n) = b.n_max {
                r.line(format!("n <= {n}"));
            }
            r.kv("prime", prime).kv("e_max", b.e_max).kv("r_max", b.r_max);
            if let Some(n) = b.n_max {
                r.kv("n_max", n);
            }
        }
        Command::Census { map, prime, degree } => {
            let phi = load_map(map)?;
            let opts = SearchOptions { parallel, ..SearchOptions::default() };
            has_good_reduction_with(&phi, *prime, &opts)?.ensure_good()?;
            let field = FqField::new(*prime, *degree)?;
            let red = reduce_morphism(&phi, &FqField::prime(*prime)?).over_field(&field)?;
            let census = cycle_census(&red)?;
            r.line(census.to_string());
            let orders = census.cycles.iter().map(|c| c.multiplier_order.map_or("singular".into(), |t| t.to_string()));
            r.kv("q", field.size())
                .kv("cycle_lengths", join(census.cycle_lengths(), ","))
                .kv("cycles", join(census.cycles.iter().map(|c| join(&c.points, " ")), ","))
                .kv("multiplier_orders", join(orders, ","))
                .kv("periodic", census.periodic_points())
                .kv("tail", census.tail_points);
        }
        Command::Lift { map, point, prime, precision, period } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            let field = FqField::prime(*prime)?;
            let ctx = PrimeContext::new(*prime, *precision)?;
            let bar = reduce_point(&point, &field);
            let opts = SearchOptions { parallel, ..SearchOptions::default() };
            has_good_reduction_with(&phi, *prime, &opts)?.ensure_good()?;
            let m = match period {
                Some(m) => *m,
                None => goodred::orbits::reduced_period(&reduce_morphism(&phi, &field), &bar)?,
            };
            let lift = goodred::lift::lift_periodic(&phi, &bar, m, &ctx)?;
            let coords = join(lift.coords.iter().map(|c| c.to_bigint()), ",");
            r.line(format!("fixed point of phi^{m} lifting {bar}, mod {prime}^{precision} on chart {}: ({coords})", lift.chart));
            r.kv("prime", prime).kv("precision", precision).kv("m", m).kv("chart", lift.chart).kv("coords", coords);
        }
        Command::Search { map, height, primes } => {
            let phi = load_map(map)?;
            let primes = if primes.is_empty() {
                let opts = SearchOptions { parallel, ..SearchOptions::default() };
                let good = good_primes_with(&phi, 13, &opts)?.good;
                if good.is_empty() {
                    return Err(CliError::Usage("no good prime up to 13; pass --primes".into()));
                }
                good
            } else {
                primes.clone()
            };
            let candidates = candidate_periods(&phi, &primes)?;
            let found = search_periodic(&phi, *height, &primes, parallel)?;
            r.line(format!("candidate periods from primes {}: {{{}}}", join(&primes, ", "), join(&candidates.global, ", ")));
            r.line(format!("{} periodic points of height <= {height}", found.len()));
            for (pt, n) in &found {
                r.line(format!("  {pt}  period {n}"));
            }
            r.kv("primes", join(&primes, ","))
                .kv("candidates", join(&candidates.global, ","))
                .kv("count", found.len())
                .kv("points", join(found.iter().map(|f| &f.0), ","))
                .kv("periods", join(found.iter().map(|f| f.1), ","));
        }
        Command::Trace { map, point, prime, precision, steps, order } => {
            let phi = load_map(map)?;
            let point = parse_point(point)?;
            let ctx = PrimeContext::new(*prime, *precision)?;
            let bar = reduce_point(&point, &FqField::prime(*prime)?);
            let series = taylor_expand(&phi, &point, chart_of(&bar), &ctx, *order)?;
            let trace = valuation_trace(&series, &ctx, *steps)?;
            let check = check_lemma_recurrences(&trace, *prime, 1);
            r.line(trace.to_string());
            r.kv("prime", prime).kv("precision", precision).kv("b", join(&trace.b, ",")).kv("c", join(&trace.c, ","));
            match &check.violation {
                None => {
                    r.line("lemma inequalities hold");
                    r.kv("verdict", "pass");
                }
                Some(v) => {
                    r.line(format!("lemma violated: {v}"));
                    r.kv("verdict", "fail").kv("violation", format!("{:?}", v.inequality)).kv("k", v.k);
                    r.exit = 3;
                }
            }
            if !check.untestable.is_empty() {
                r.line(format!("{} closed-form bounds exceed the precision", check.untestable.len()));
            }
        }
    }
    Ok(r)
}
