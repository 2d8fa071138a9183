//! Command-line front end for the terraced-matrix analyses.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use terraced::bracket::Verdict;
use terraced::config::{AnalysisConfig, OutputFormat};
use terraced::criteria::{self, CriteriaParams};
use terraced::epsl;
use terraced::hadamard;
use terraced::interval::{interval_report, NaturalInterval};
use terraced::jsonout::Json;
use terraced::operator;
use terraced::sequences::{load_sequence, save_sequence, SequenceSpec};
use terraced::spectral;
use terraced::verify;
use terraced::{Result, TerracedError};

#[derive(Parser)]
#[command(
    name = "terraced",
    about = "Certified analysis of terraced (Rhaly) matrices on l2",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Cesaro,
    Power,
    Logpower,
    Moments,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Bounded,
    Compact,
    Schatten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    Rhaly,
    Gram,
    Tc,
}

/// Where the coefficient sequence comes from.
#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Built-in family or `custom` (requires --values-file).
    #[arg(long, value_enum, default_value = "cesaro")]
    family: Family,
    /// Power / log-power exponent.
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Multiplicative scale for the power families.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Log exponent for the log-power family.
    #[arg(long, default_value_t = 0.0)]
    log_exp: f64,
    /// Atoms "w@t" separated by ';' for the moments family; complex weights
    /// as "re", "re+imj" or "re-imj".
    #[arg(long)]
    atoms: Option<String>,
    /// Sequence file ("#terraced-seq v1" format) for the custom family.
    #[arg(long)]
    values_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full certified report: norm, essential norm, compactness, Schatten
    /// verdicts, and spectral lower bounds along the schedule.
    Analyze {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, alias = "N-schedule", value_delimiter = ',')]
        n_schedule: Option<Vec<usize>>,
        #[arg(long, default_value_t = 20)]
        kmax: u32,
        /// Schatten exponents (repeatable).
        #[arg(long = "q")]
        q_list: Vec<f64>,
        /// Fail with exit 1 when the named verdict comes back "no".
        #[arg(long, value_enum)]
        expect: Vec<Expectation>,
    },
    /// Dyadic profile table (k, sigma_k, block_energy_k).
    Sigma {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 20)]
        kmax: u32,
    },
    /// Tail supremum brackets J_n.
    Jn {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Indices n (repeatable; default a doubling grid).
        #[arg(long = "n")]
        n_list: Vec<u64>,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Interval functionals mu, L, K, J on [a, b].
    Interval {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Threshold cut sequences and their approximation-number bounds.
    Epsl {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Thresholds (repeatable, required).
        #[arg(long = "eps", required = true)]
        eps_grid: Vec<f64>,
        #[arg(long, default_value_t = 4096)]
        cap: u64,
    },
    /// Singular values and Schatten brackets along a truncation schedule.
    Spectral {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, alias = "N-schedule", value_delimiter = ',')]
        n_schedule: Option<Vec<usize>>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long = "q")]
        q_list: Vec<f64>,
    },
    /// Multiplier-matrix verdicts and the block-sum table for a coefficient
    /// sequence c.
    Hadamard {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 20)]
        kmax: u32,
        #[arg(long = "q")]
        q_list: Vec<f64>,
        #[arg(long, value_enum)]
        expect: Vec<Expectation>,
    },
    /// Dense matrix sections as CSV.
    Dump {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "rhaly")]
        matrix: MatrixKind,
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Run the seeded invariant suites and report pass/fail counts.
    Verify {
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Materialize a family to a sequence file.
    Save {
        #[command(flatten)]
        source: SourceArgs,
        /// Number of leading coefficients to store.
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Destination path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || TerracedError::invalid(format!("malformed complex number {s:?}"));
    if let Some(body) = s.strip_suffix('j') {
        // Split into re and im at the last +/- that is neither an exponent
        // sign nor the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i].parse().map_err(|_| bad())?;
                let im: f64 = match &body[i..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = body.parse().map_err(|_| bad())?;
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn parse_atoms(s: &str) -> Result<Vec<(Complex64, f64)>> {
    let mut atoms = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (w, t) = part
            .split_once('@')
            .ok_or_else(|| TerracedError::invalid(format!("atom {part:?} must look like \"w@t\"")))?;
        let weight = parse_complex(w)?;
        let node: f64 = t
            .trim()
            .parse()
            .map_err(|_| TerracedError::invalid(format!("malformed node {t:?}")))?;
        atoms.push((weight, node));
    }
    if atoms.is_empty() {
        return Err(TerracedError::invalid("no atoms given"));
    }
    Ok(atoms)
}

impl SourceArgs {
    fn build(&self) -> Result<SequenceSpec> {
        match self.family {
            Family::Cesaro => Ok(SequenceSpec::cesaro()),
            Family::Power => SequenceSpec::power(self.s, self.scale),
            Family::Logpower => SequenceSpec::log_power(self.s, self.scale, self.log_exp),
            Family::Moments => {
                let atoms = self
                    .atoms
                    .as_deref()
                    .ok_or_else(|| TerracedError::invalid("moments family needs --atoms"))?;
                SequenceSpec::moments(parse_atoms(atoms)?)
            }
            Family::Custom => {
                let path = self
                    .values_file
                    .as_ref()
                    .ok_or_else(|| TerracedError::invalid("custom family needs --values-file"))?;
                load_sequence(path)
            }
        }
    }
}

impl OutputArgs {
    fn format(&self) -> OutputFormat {
        match self.format {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }

    fn emit(&self, payload: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, payload).map_err(|source| TerracedError::Io {
                path: path.clone(),
                source,
            }),
            None => std::io::stdout()
                .write_all(payload.as_bytes())
                .map_err(|source| TerracedError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                }),
        }
    }

    fn reject_csv(&self, what: &str) -> Result<()> {
        if self.format() == OutputFormat::Csv {
            return Err(TerracedError::invalid(format!(
                "{what} has no CSV form; use --format json"
            )));
        }
        Ok(())
    }
}

fn versioned(fields: Vec<(&'static str, Json)>) -> Json {
    let mut all = vec![("schema", Json::Str("terraced-report/1".into()))];
    all.extend(fields);
    Json::Obj(all)
}

/// Exit 1 when an expected property came back "no"; undetermined passes.
fn check_expectations(
    expect: &[Expectation],
    bounded: Verdict,
    compact: Verdict,
    schatten: &[(f64, Verdict)],
) -> u8 {
    let mut code = 0;
    for e in expect {
        let violated = match e {
            Expectation::Bounded => bounded == Verdict::No,
            Expectation::Compact => compact == Verdict::No,
            Expectation::Schatten => schatten.iter().any(|(_, v)| *v == Verdict::No),
        };
        if violated {
            code = 1;
        }
    }
    code
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Analyze {
            source,
            output,
            n_schedule,
            kmax,
            q_list,
            expect,
        } => {
            output.reject_csv("analyze")?;
            let mut cfg = AnalysisConfig::default();
            if let Some(s) = n_schedule {
                cfg.schedule = s;
            }
            cfg.k_max = kmax;
            if !q_list.is_empty() {
                cfg.q_list = q_list;
            }
            cfg.validate()?;
            let spec = source.build()?;
            let params = CriteriaParams {
                horizon: None,
                k_max: cfg.k_max,
                trunc_n: *cfg.schedule.last().unwrap(),
                q_list: cfg.q_list.clone(),
            };
            let report = criteria::criteria_report(&spec, &params)?;
            let n_max = 8.min(cfg.schedule[0]);
            let spec_report = spectral::spectral_report(&spec, n_max, &cfg.schedule, &cfg.q_list)?;
            let json = versioned(vec![
                ("criteria", report.to_json()),
                ("spectral", spec_report.to_json()),
            ]);
            output.emit(&json.render())?;
            let schatten: Vec<(f64, Verdict)> =
                report.schatten.iter().map(|(q, v, _)| (*q, *v)).collect();
            Ok(check_expectations(
                &expect,
                report.bounded,
                report.compact,
                &schatten,
            ))
        }
        Cmd::Sigma {
            source,
            output,
            kmax,
        } => {
            let spec = source.build()?;
            let profile = criteria::sigma_profile(&spec, kmax);
            match output.format() {
                OutputFormat::Csv => output.emit(&profile.to_csv())?,
                OutputFormat::Json => {
                    output.emit(&versioned(vec![("sigma_profile", profile.to_json())]).render())?
                }
            }
            Ok(0)
        }
        Cmd::Jn {
            source,
            output,
            n_list,
            horizon,
        } => {
            let spec = source.build()?;
            let horizon = horizon.unwrap_or_else(|| criteria::default_horizon(&spec));
            let ns = if n_list.is_empty() {
                let mut v = vec![0u64, 1, 2];
                let mut n = 4;
                while n <= horizon / 2 {
                    v.push(n);
                    n *= 4;
                }
                v
            } else {
                n_list
            };
            let mut rows = Vec::new();
            let mut csv = String::from("n,lo,hi,attained_m\n");
            for n in ns {
                let jn = criteria::jn_bracket(&spec, n, horizon.max(n))?;
                csv.push_str(&format!(
                    "{n},{:.16e},{:.16e},{}\n",
                    jn.bracket.lo(),
                    jn.bracket.hi(),
                    jn.attained_m.map(|m| m.to_string()).unwrap_or_default()
                ));
                rows.push(Json::Obj(vec![
                    ("n", Json::U64(n)),
                    ("bracket", Json::from(&jn.bracket)),
                    (
                        "attained_m",
                        jn.attained_m.map(Json::U64).unwrap_or(Json::Null),
                    ),
                ]));
            }
            match output.format() {
                OutputFormat::Csv => output.emit(&csv)?,
                OutputFormat::Json => output.emit(
                    &versioned(vec![
                        ("horizon", Json::U64(horizon)),
                        ("jn", Json::Arr(rows)),
                    ])
                    .render(),
                )?,
            }
            Ok(0)
        }
        Cmd::Interval {
            source,
            output,
            a,
            b,
        } => {
            output.reject_csv("interval")?;
            let spec = source.build()?;
            let iv = NaturalInterval::new(a, b)?;
            let report = interval_report(&spec, iv);
            output.emit(&versioned(vec![("interval", report.to_json())]).render())?;
            Ok(0)
        }
        Cmd::Epsl {
            source,
            output,
            eps_grid,
            cap,
        } => {
            output.reject_csv("epsl")?;
            let spec = source.build()?;
            let mut items = Vec::new();
            for &eps in &eps_grid {
                let seq = epsl::build_eps_l(&spec, eps, cap)?;
                let bounds = epsl::approx_number_bounds(&seq)
                    .into_iter()
                    .map(|b| match b {
                        epsl::ApproxBound::Upper { index, value } => Json::Obj(vec![
                            ("kind", Json::Str("upper".into())),
                            ("index", Json::U64(index as u64)),
                            ("value", Json::Num(value)),
                        ]),
                        epsl::ApproxBound::Lower { index, value } => Json::Obj(vec![
                            ("kind", Json::Str("lower".into())),
                            ("index", Json::U64(index as u64)),
                            ("value", Json::Num(value)),
                        ]),
                    })
                    .collect();
                items.push(Json::Obj(vec![
                    ("sequence", seq.to_json()),
                    ("approx_bounds", Json::Arr(bounds)),
                ]));
            }
            output.emit(&versioned(vec![("epsl", Json::Arr(items))]).render())?;
            Ok(0)
        }
        Cmd::Spectral {
            source,
            output,
            n_schedule,
            n_max,
            q_list,
        } => {
            let spec = source.build()?;
            let mut cfg = AnalysisConfig::default();
            if let Some(s) = n_schedule {
                cfg.schedule = s;
            }
            if !q_list.is_empty() {
                cfg.q_list = q_list;
            }
            cfg.validate()?;
            let report = spectral::spectral_report(
                &spec,
                n_max.min(cfg.schedule[0]).max(1),
                &cfg.schedule,
                &cfg.q_list,
            )?;
            match output.format() {
                OutputFormat::Csv => output.emit(&report.to_csv())?,
                OutputFormat::Json => {
                    output.emit(&versioned(vec![("spectral", report.to_json())]).render())?
                }
            }
            Ok(0)
        }
        Cmd::Hadamard {
            source,
            output,
            kmax,
            q_list,
            expect,
        } => {
            let spec = source.build()?;
            let qs = if q_list.is_empty() {
                vec![1.5, 2.0, 3.0]
            } else {
                q_list
            };
            let report = hadamard::main4_report(&spec, &qs, kmax)?;
            match output.format() {
                OutputFormat::Csv => output.emit(&report.block_table_csv())?,
                OutputFormat::Json => {
                    output.emit(&versioned(vec![("hadamard", report.to_json())]).render())?
                }
            }
            Ok(check_expectations(
                &expect,
                report.bounded,
                report.compact,
                &report.schatten,
            ))
        }
        Cmd::Dump {
            source,
            output,
            matrix,
            n,
        } => {
            if n == 0 {
                return Err(TerracedError::invalid("section size must be at least 1"));
            }
            let spec = source.build()?;
            let m = match matrix {
                MatrixKind::Rhaly => operator::truncate_rhaly(&spec, n)?.matrix,
                MatrixKind::Gram => operator::gram_lshape(&spec, n)?,
                MatrixKind::Tc => hadamard::build_tc(&spec, n)?,
            };
            output.emit(&m.to_csv())?;
            Ok(0)
        }
        Cmd::Verify { output, seed } => {
            let report = verify::run_all(seed);
            match output.format() {
                OutputFormat::Json => output.emit(&report.to_json().render())?,
                OutputFormat::Csv => {
                    let mut text = String::from("suite,cases,failures\n");
                    for s in &report.suites {
                        text.push_str(&format!("{},{},{}\n", s.name, s.cases, s.failures));
                    }
                    output.emit(&text)?;
                }
            }
            let mut summary = String::new();
            for s in &report.suites {
                summary.push_str(&format!(
                    "{}: {} ({} cases, {} failures)\n",
                    s.name,
                    if s.passed() { "PASS" } else { "FAIL" },
                    s.cases,
                    s.failures
                ));
            }
            eprint!("{summary}");
            Ok(if report.all_passed() { 0 } else { 1 })
        }
        Cmd::Save { source, n, out } => {
            let spec = source.build()?.materialize(n);
            save_sequence(&spec, &out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
