//! `cfdim`: batch front end for the dimension laboratory.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 malformed input,
//! 3 solver or enumeration failure, 4 the upper growth function has no limit.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cfdim::cantor::{
    build_scheme, build_strict, CantorScheme, Layout, SchemeParams, DEFAULT_ENUMERATION_BUDGET,
};
use cfdim::cf::Word;
use cfdim::classify::{
    classify_e1, classify_e2, classify_f, classify_f2, classify_fbb, default_ladder, dim_ea, ClassifierConfig,
    Verdict,
};
use cfdim::cover::{boxcount, covering_root, dyadic_ladder, predicted_dimension, sample_cloud, CoverReport};
use cfdim::growth::GrowthSpec;
use cfdim::pressure::{
    dim_ladder, dim_root, direct_sum, extrapolate_alphabet, spectral_eigenvalue, LadderEntry, Potential,
    SpectralConfig, SumQuery, DEFAULT_BUDGET,
};
use cfdim::verify::{run_suite, Report, Suite, VerifyConfig};
use cfdim::Error;

const SCHEMA_VERSION: u32 = 1;

/// Alphabet cap for the solver commands when `--M` is absent.
const SOLVER_M: u64 = 128;
/// Digit cap for the Cantor commands when `--M` is absent.
const SCHEME_M: u64 = 3;

#[derive(Parser)]
#[command(name = "cfdim", version, about = "Hausdorff dimensions of continued-fraction exceptional sets")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Alphabet cap: solver truncation (default 128) or scheme digit cap (default 3).
    #[arg(long = "M", global = true)]
    alphabet_max: Option<u64>,
    /// Collocation nodes.
    #[arg(long = "K", global = true, default_value_t = 32)]
    nodes: usize,
    /// Root bisection tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads; never changes numeric output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Word budget: direct sums (default 10^7) or scheme enumeration (default 2·10^5).
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensional numbers s_B, s_0 and g_{B1,B2}.
    Dim {
        #[command(subcommand)]
        target: DimTarget,
    },
    /// Classify an exceptional set from its growth functions.
    Classify {
        #[command(subcommand)]
        target: ClassifyTarget,
    },
    /// Run an invariant suite: props, pressure, cantor, cover or all.
    Verify { suite: String },
    /// Tabulate dimensional numbers or the F_{B1,B2} regime map.
    Table {
        #[command(subcommand)]
        target: TableTarget,
    },
    /// Build, sample or enumerate a Cantor scheme.
    Cantor {
        #[command(subcommand)]
        target: CantorTarget,
    },
    /// Covering-sum and box-counting estimates for a Cantor scheme.
    Cover {
        #[command(subcommand)]
        target: CoverTarget,
    },
}

#[derive(Subcommand)]
enum DimTarget {
    #[command(name = "sB")]
    SB {
        #[arg(long = "B")]
        base: f64,
    },
    #[command(name = "s0")]
    S0 {
        #[arg(long = "B")]
        base: f64,
    },
    #[command(name = "g")]
    G {
        #[arg(long = "B1")]
        b1: f64,
        #[arg(long = "B2")]
        b2: f64,
    },
}

#[derive(Subcommand)]
enum ClassifyTarget {
    /// a_{n+1} >= Φ(n) infinitely often
    E1 {
        #[arg(long)]
        phi: GrowthSpec,
    },
    /// a_n a_{n+1} >= Φ(n) infinitely often
    E2 {
        #[arg(long)]
        phi: GrowthSpec,
    },
    /// E2(Φ) minus E1(Φ)
    F {
        #[arg(long)]
        phi: GrowthSpec,
    },
    /// a_n a_{n+1} >= Φ1(n) infinitely often, a_{n+1} < Φ2(n) eventually
    F2 {
        #[arg(long)]
        phi1: GrowthSpec,
        #[arg(long)]
        phi2: GrowthSpec,
    },
    /// F2 with Φ1 = B1^n, Φ2 = B2^n
    Fbb {
        #[arg(long = "B1")]
        b1: f64,
        #[arg(long = "B2")]
        b2: f64,
    },
    /// Cantor target set E(A1, A2): min{s_A1, g_(A1·A2),A1}
    Ea {
        #[arg(long = "A1")]
        a1: f64,
        #[arg(long = "A2")]
        a2: f64,
    },
}

#[derive(Subcommand)]
enum TableTarget {
    /// s_B for each base
    #[command(name = "sB")]
    SB {
        #[arg(long = "B", value_delimiter = ',', required = true)]
        bases: Vec<f64>,
    },
    /// s_0 for each base
    #[command(name = "s0")]
    S0 {
        #[arg(long = "B", value_delimiter = ',', required = true)]
        bases: Vec<f64>,
    },
    /// Verdict for every (B1, B2) pair
    Fbb {
        #[arg(long = "B1", value_delimiter = ',', required = true)]
        b1: Vec<f64>,
        #[arg(long = "B2", value_delimiter = ',', required = true)]
        b2: Vec<f64>,
    },
}

#[derive(Args, Clone)]
struct SchemeArgs {
    #[arg(long = "A1", default_value_t = 2.0)]
    a1: f64,
    #[arg(long = "A2", default_value_t = 2.0)]
    a2: f64,
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    /// Block length.
    #[arg(long = "N", default_value_t = 3)]
    block: usize,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 2)]
    levels: usize,
    #[arg(long, value_enum, default_value_t = LayoutArg::Explicit)]
    layout: LayoutArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Explicit,
    Literal,
}

#[derive(Subcommand)]
enum CantorTarget {
    /// Sparse lengths, positions, windows and block roots.
    Describe {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Enforce the full largeness condition; positions only.
        #[arg(long)]
        strict: bool,
    },
    /// Sampled points as numerator, denominator, depth, word.
    Sample {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
    },
    /// Every admissible prefix of one length with its masses and length.
    Enumerate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum CoverTarget {
    /// Covering root at one depth (JSON) or the convergence table up to it (CSV).
    Root {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Defaults to the deepest depth within the budget.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Box-counting slope of sampled points. Heuristic.
    Box {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        /// Coarsest scale 2^-from.
        #[arg(long, default_value_t = 3)]
        from: i32,
        /// Finest scale 2^-to.
        #[arg(long, default_value_t = 10)]
        to: i32,
    },
}

/// The configuration embedded in every JSON output. Thread count is left
/// out: it never affects results.
#[derive(Serialize)]
struct RunConfig {
    #[serde(rename = "M")]
    alphabet_max: u64,
    #[serde(rename = "K")]
    nodes: usize,
    tol: f64,
    seed: u64,
    format: Format,
    budget: u64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

enum Failure {
    /// A verification check failed; the report was printed.
    Checks,
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome = std::result::Result<String, (Option<String>, Failure)>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LimitMissing => 4,
        Error::Parse(_)
        | Error::InvalidGrowth(_)
        | Error::InvalidParameter(_)
        | Error::InvalidDigit { .. }
        | Error::EmptyWord
        | Error::OutOfUnitInterval(_)
        | Error::TailUndeclared => 2,
        _ => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidDigit { .. } => "invalid_digit",
        Error::EmptyWord => "empty_word",
        Error::OutOfUnitInterval(_) => "out_of_unit_interval",
        Error::InvalidGrowth(_) => "invalid_growth",
        Error::Parse(_) => "parse",
        Error::TailUndeclared => "tail_undeclared",
        Error::LimitMissing => "limit_missing",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::NoRoot { .. } => "no_root",
        Error::NonConvergence { .. } => "non_convergence",
        Error::UnderResolved { .. } => "under_resolved",
        Error::MonotonicityViolation { .. } => "monotonicity_violation",
        Error::Unsupported(_) => "unsupported",
        Error::Infeasible(_) => "infeasible",
        Error::NotInScheme => "not_in_scheme",
        Error::DegenerateLadder(_) => "degenerate_ladder",
        Error::ContinuantOverflow { .. } => "continuant_overflow",
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "kind": kind, "message": message },
    })
    .to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            println!("{}", error_json("usage", message.trim()));
            eprint!("{message}");
            return ExitCode::from(2);
        }
    };
    if let Some(threads) = cli.global.threads {
        if threads == 0 {
            println!("{}", error_json("usage", "--threads must be at least 1"));
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            println!("{}", error_json("usage", &e.to_string()));
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err((out, Failure::Checks)) => {
            print!("{}", out.unwrap_or_default());
            ExitCode::from(1)
        }
        Err((_, Failure::Run(e))) => {
            println!("{}", error_json(error_kind(&e), &e.to_string()));
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn is_scheme_command(cmd: &Command) -> bool {
    matches!(cmd, Command::Cantor { .. } | Command::Cover { .. } | Command::Verify { .. })
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let scheme_cmd = is_scheme_command(&cli.command);
    let default_m = if matches!(cli.command, Command::Cantor { .. } | Command::Cover { .. }) {
        SCHEME_M
    } else {
        SOLVER_M
    };
    let default_budget = if scheme_cmd { DEFAULT_ENUMERATION_BUDGET } else { DEFAULT_BUDGET };
    let config = RunConfig {
        alphabet_max: g.alphabet_max.unwrap_or(default_m),
        nodes: g.nodes,
        tol: g.tol,
        seed: g.seed,
        format: g.format,
        budget: g.budget.unwrap_or(default_budget),
    };
    let spectral = SpectralConfig {
        alphabet_max: config.alphabet_max,
        nodes: config.nodes,
        root_tol: config.tol,
        ..SpectralConfig::default()
    };
    let fail = |e: Error| (None, Failure::Run(e));
    spectral.validate().map_err(fail)?;
    let ctx = Ctx { config: &config, spectral };
    match &cli.command {
        Command::Dim { target } => ctx.dim(target).map_err(fail),
        Command::Classify { target } => ctx.classify(target).map_err(fail),
        Command::Verify { suite } => ctx.verify(suite),
        Command::Table { target } => ctx.table(target).map_err(fail),
        Command::Cantor { target } => ctx.cantor(target).map_err(fail),
        Command::Cover { target } => ctx.cover(target).map_err(fail),
    }
}

struct Ctx<'a> {
    config: &'a RunConfig,
    spectral: SpectralConfig,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct MethodAgreement {
    #[serde(rename = "M")]
    alphabet_max: u64,
    depth: usize,
    s: f64,
    spectral_log_lambda: f64,
    direct_ratio: f64,
    difference: f64,
}

#[derive(Serialize)]
struct DimOutput {
    potential: Potential,
    value: f64,
    #[serde(rename = "M_ladder")]
    ladder: Vec<LadderEntry>,
    extrapolated: f64,
    error_estimate: f64,
    method_agreement: MethodAgreement,
}

#[derive(Serialize)]
struct TableRow {
    #[serde(rename = "B")]
    base: f64,
    value: f64,
}

#[derive(Serialize)]
struct FbbRow {
    #[serde(rename = "B1")]
    b1: f64,
    #[serde(rename = "B2")]
    b2: f64,
    verdict: Verdict,
}

#[derive(Serialize)]
struct EnumeratedWord {
    word: Word,
    logmass1: f64,
    logmass2: f64,
    log_length: f64,
}

impl Ctx<'_> {
    fn json<T: Serialize>(&self, command: &str, body: T) -> cfdim::Result<String> {
        let env = Envelope {
            schema_version: SCHEMA_VERSION,
            command,
            config: self.config,
            body,
        };
        serde_json::to_string_pretty(&env)
            .map(|s| s + "\n")
            .map_err(|e| Error::Unsupported(format!("serialization failed: {e}")))
    }

    fn classifier(&self) -> ClassifierConfig {
        ClassifierConfig {
            spectral: self.spectral,
            ladder: default_ladder(self.spectral.alphabet_max),
            ..ClassifierConfig::default()
        }
    }

    fn dim(&self, target: &DimTarget) -> cfdim::Result<String> {
        let (name, potential) = match *target {
            DimTarget::SB { base } => ("dim sB", Potential::sb(base)?),
            DimTarget::S0 { base } => ("dim s0", Potential::s0(base)?),
            DimTarget::G { b1, b2 } => ("dim g", Potential::g(b1, b2)?),
        };
        let m = self.spectral.alphabet_max;
        let (ladder, value, extrapolated, error) = match default_ladder(m) {
            Some(rungs) => {
                let ladder = dim_ladder(&potential, &self.spectral, &rungs)?;
                let ext = extrapolate_alphabet(&ladder)?;
                (ladder, ext.last, ext.extrapolated, ext.error.max(self.spectral.root_tol))
            }
            None => {
                let v = dim_root(&potential, &self.spectral)?;
                (
                    vec![LadderEntry { alphabet_max: m, value: v }],
                    v,
                    v,
                    self.spectral.root_tol,
                )
            }
        };
        let small = m.min(3);
        let depth = 12;
        let spectral_log_lambda = spectral_eigenvalue(&potential, value, &self.spectral.with_alphabet(small))?;
        let mut query = SumQuery::new(potential, value, depth + 1, small);
        query.budget = self.config.budget;
        let hi = direct_sum(&query)?;
        query.depth = depth;
        let direct_ratio = hi - direct_sum(&query)?;
        let out = DimOutput {
            potential,
            value,
            ladder,
            extrapolated,
            error_estimate: error,
            method_agreement: MethodAgreement {
                alphabet_max: small,
                depth,
                s: value,
                spectral_log_lambda,
                direct_ratio,
                difference: (spectral_log_lambda - direct_ratio).abs(),
            },
        };
        match self.config.format {
            Format::Json => self.json(name, out),
            Format::Csv => {
                let mut s = String::from("M,value\n");
                for e in &out.ladder {
                    s.push_str(&format!("{},{}\n", e.alphabet_max, e.value));
                }
                Ok(s)
            }
        }
    }

    fn classify(&self, target: &ClassifyTarget) -> cfdim::Result<String> {
        let cfg = self.classifier();
        let (name, input, verdict) = match target {
            ClassifyTarget::E1 { phi } => ("classify e1", serde_json::json!({ "phi": phi.to_string() }), classify_e1(phi, &cfg)?),
            ClassifyTarget::E2 { phi } => ("classify e2", serde_json::json!({ "phi": phi.to_string() }), classify_e2(phi, &cfg)?),
            ClassifyTarget::F { phi } => ("classify f", serde_json::json!({ "phi": phi.to_string() }), classify_f(phi, &cfg)?),
            ClassifyTarget::F2 { phi1, phi2 } => (
                "classify f2",
                serde_json::json!({ "phi1": phi1.to_string(), "phi2": phi2.to_string() }),
                classify_f2(phi1, phi2, &cfg)?,
            ),
            ClassifyTarget::Fbb { b1, b2 } => (
                "classify fbb",
                serde_json::json!({ "B1": b1, "B2": b2 }),
                classify_fbb(*b1, *b2, &cfg)?,
            ),
            ClassifyTarget::Ea { a1, a2 } => (
                "classify ea",
                serde_json::json!({ "A1": a1, "A2": a2 }),
                dim_ea(*a1, *a2, &cfg)?,
            ),
        };
        match self.config.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Out {
                    input: serde_json::Value,
                    verdict: Verdict,
                }
                self.json(name, Out { input, verdict })
            }
            Format::Csv => Ok(format!(
                "kind,value,regime,boundary\n{},{},{},{}\n",
                enum_label(&verdict.kind),
                verdict.value.map(|v| v.to_string()).unwrap_or_default(),
                enum_label(&verdict.regime),
                verdict.boundary
            )),
        }
    }

    fn verify(&self, suite: &str) -> Outcome {
        let fail = |e: Error| (None, Failure::Run(e));
        let suites: Vec<Suite> = if suite == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![suite.parse().map_err(fail)?]
        };
        let cfg = VerifyConfig {
            spectral: self.spectral,
            budget: self.config.budget,
            seed: self.config.seed,
        };
        let reports = suites
            .iter()
            .map(|&s| run_suite(s, &cfg))
            .collect::<cfdim::Result<Vec<Report>>>()
            .map_err(fail)?;
        let out = match self.config.format {
            Format::Json => {
                #[derive(Serialize)]
                struct Out {
                    passed: bool,
                    reports: Vec<Report>,
                }
                self.json(
                    &format!("verify {suite}"),
                    Out {
                        passed: reports.iter().all(|r| r.passed),
                        reports: reports.clone(),
                    },
                )
                .map_err(fail)?
            }
            Format::Csv => {
                let mut s = String::from("suite,check,passed,detail\n");
                for r in &reports {
                    for c in &r.checks {
                        s.push_str(&format!("{},{},{},{}\n", r.suite, csv_field(&c.name), c.passed, csv_field(&c.detail)));
                    }
                }
                s
            }
        };
        if reports.iter().all(|r| r.passed) {
            Ok(out)
        } else {
            Err((Some(out), Failure::Checks))
        }
    }

    fn table(&self, target: &TableTarget) -> cfdim::Result<String> {
        match target {
            TableTarget::SB { bases } | TableTarget::S0 { bases } => {
                let sb = matches!(target, TableTarget::SB { .. });
                let rows = bases
                    .iter()
                    .map(|&b| {
                        let pot = if sb { Potential::sb(b)? } else { Potential::s0(b)? };
                        Ok(TableRow { base: b, value: dim_root(&pot, &self.spectral)? })
                    })
                    .collect::<cfdim::Result<Vec<_>>>()?;
                match self.config.format {
                    Format::Json => self.json(if sb { "table sB" } else { "table s0" }, serde_json::json!({ "rows": rows })),
                    Format::Csv => {
                        let mut s = String::from("B,value\n");
                        for r in rows {
                            s.push_str(&format!("{},{}\n", r.base, r.value));
                        }
                        Ok(s)
                    }
                }
            }
            TableTarget::Fbb { b1, b2 } => {
                let cfg = ClassifierConfig::single(self.spectral);
                let mut rows = Vec::new();
                for &x in b1 {
                    for &y in b2 {
                        rows.push(FbbRow { b1: x, b2: y, verdict: classify_fbb(x, y, &cfg)? });
                    }
                }
                match self.config.format {
                    Format::Json => self.json("table fbb", serde_json::json!({ "rows": rows })),
                    Format::Csv => {
                        let mut s = String::from("B1,B2,kind,value,regime,boundary\n");
                        for r in rows {
                            s.push_str(&format!(
                                "{},{},{},{},{},{}\n",
                                r.b1,
                                r.b2,
                                enum_label(&r.verdict.kind),
                                r.verdict.value.map(|v| v.to_string()).unwrap_or_default(),
                                enum_label(&r.verdict.regime),
                                r.verdict.boundary
                            ));
                        }
                        Ok(s)
                    }
                }
            }
        }
    }

    fn scheme_params(&self, a: &SchemeArgs) -> SchemeParams {
        SchemeParams {
            c1: a.c1,
            c2: a.c2,
            eps: a.eps,
            levels: a.levels,
            layout: match a.layout {
                LayoutArg::Explicit => Layout::Explicit,
                LayoutArg::Literal => Layout::Literal,
            },
            ..SchemeParams::toy(a.a1, a.a2, self.config.alphabet_max, a.block)
        }
    }

    fn scheme(&self, a: &SchemeArgs) -> cfdim::Result<CantorScheme> {
        build_scheme(&self.scheme_params(a))
    }

    fn cantor(&self, target: &CantorTarget) -> cfdim::Result<String> {
        match target {
            CantorTarget::Describe { scheme, strict: true } => {
                let layout = build_strict(&self.scheme_params(scheme))?;
                #[derive(Serialize)]
                struct Out {
                    params: SchemeParams,
                    ells: Vec<String>,
                    positions: Vec<String>,
                }
                self.json(
                    "cantor describe --strict",
                    Out {
                        params: layout.params,
                        ells: layout.ells.iter().map(u128::to_string).collect(),
                        positions: layout.positions.iter().map(u128::to_string).collect(),
                    },
                )
            }
            CantorTarget::Describe { scheme, strict: false } => {
                let sc = self.scheme(scheme)?;
                self.json("cantor describe", sc.summary())
            }
            CantorTarget::Sample { scheme, count, depth } => {
                let sc = self.scheme(scheme)?;
                let points = sc.sample_points(self.config.seed, *count, *depth)?;
                match self.config.format {
                    Format::Csv => {
                        let mut s = String::from("numerator,denominator,depth,word\n");
                        for (x, w) in points {
                            s.push_str(&format!("{},{},{},{}\n", x.numer(), x.denom(), w.len(), csv_field(&w.to_string())));
                        }
                        Ok(s)
                    }
                    Format::Json => {
                        let rows: Vec<_> = points
                            .iter()
                            .map(|(x, w)| {
                                serde_json::json!({
                                    "numerator": x.numer().to_string(),
                                    "denominator": x.denom().to_string(),
                                    "depth": w.len(),
                                    "word": w,
                                })
                            })
                            .collect();
                        self.json("cantor sample", serde_json::json!({ "points": rows }))
                    }
                }
            }
            CantorTarget::Enumerate { scheme, depth } => {
                let sc = self.scheme(scheme)?;
                let rows = sc.enumerate(*depth, self.config.budget, |d| -> cfdim::Result<EnumeratedWord> {
                    let word = Word::new(d.to_vec())?;
                    Ok(EnumeratedWord {
                        logmass1: sc.mass(&word, 1)?.logmass,
                        logmass2: sc.mass(&word, 2)?.logmass,
                        log_length: sc.basic_cylinder(&word).log_length,
                        word,
                    })
                })?;
                let rows = rows.into_iter().collect::<cfdim::Result<Vec<_>>>()?;
                match self.config.format {
                    Format::Json => self.json("cantor enumerate", serde_json::json!({ "depth": depth, "words": rows })),
                    Format::Csv => {
                        let mut s = String::from("word,logmass1,logmass2,log_length\n");
                        for r in rows {
                            s.push_str(&format!(
                                "{},{},{},{}\n",
                                csv_field(&r.word.to_string()),
                                r.logmass1,
                                r.logmass2,
                                r.log_length
                            ));
                        }
                        Ok(s)
                    }
                }
            }
        }
    }

    fn cover(&self, target: &CoverTarget) -> cfdim::Result<String> {
        match target {
            CoverTarget::Root { scheme, depth } => {
                let sc = self.scheme(scheme)?;
                let predicted = predicted_dimension(&sc, &self.spectral)?;
                let depth = depth.unwrap_or_else(|| sc.max_enumerable_depth(self.config.budget));
                match self.config.format {
                    Format::Json => {
                        let rep = covering_root(&sc, depth, predicted, self.config.budget)?;
                        self.json("cover root", rep)
                    }
                    Format::Csv => {
                        let mut s = String::from("depth,root,sum_at_prediction\n");
                        for n in 1..=depth {
                            let rep: CoverReport = covering_root(&sc, n, predicted, self.config.budget)?;
                            s.push_str(&format!("{},{},{}\n", rep.depth, rep.root, rep.sum_at_prediction));
                        }
                        Ok(s)
                    }
                }
            }
            CoverTarget::Box { scheme, samples, depth, from, to } => {
                let sc = self.scheme(scheme)?;
                let points = sample_cloud(&sc, self.config.seed, *samples, *depth)?;
                let bc = boxcount(&points, &dyadic_ladder(*from, *to))?;
                match self.config.format {
                    Format::Json => self.json("cover box", bc),
                    Format::Csv => {
                        let mut s = String::from("eps,boxes\n");
                        for l in &bc.levels {
                            s.push_str(&format!("{},{}\n", l.eps, l.boxes));
                        }
                        Ok(s)
                    }
                }
            }
        }
    }
}

/// The serde name of a unit enum variant.
fn enum_label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
