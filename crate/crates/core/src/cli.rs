//! Command-line front end: model configuration, tables and triangles, and
//! batch verification with machine-readable output.
//!
//! Exit codes: 0 on success (and on verification pass), 1 when a `verify`
//! subcommand finds a counterexample, 2 on usage or configuration errors.

use crate::basis::{fn_eval_exact, fn_residue};
use crate::domain::{verify_vwdwo, DvdModel, ModelKind, RepSpec, SplitMix64, VwdwoReport};
use crate::error::Error;
use crate::genpoly::{eps_counts, gen_poly, verify_main_theorem, EpsMethod};
use crate::residue_field::{FieldElement, ResidueField};
use crate::words::{random_word, verify_bijection, BijectionReport};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "dvdbinom", version, about = "Generalized binomial coefficients in discrete valuation domains", long_about = None)]
struct Cli {
    /// Valuation domain model: integers at (p), or F_q[t] at (t)
    #[arg(long, value_enum, default_value = "zp", global = true)]
    model: ModelArg,

    /// Residue characteristic
    #[arg(long, default_value_t = 3, global = true)]
    p: u64,

    /// Extension degree; q = p^d (fqt only)
    #[arg(long, default_value_t = 1, global = true)]
    d: u32,

    /// Extension modulus, little-endian coefficients like "1,1,1" for
    /// 1 + y + y^2 (defaults to the smallest irreducible)
    #[arg(long, global = true)]
    modulus: Option<String>,

    /// Representatives: "default", "seed:<u64>", or an explicit
    /// comma-separated element list
    #[arg(long, default_value = "default", global = true)]
    reps: String,

    /// Override the primitive root by element code
    #[arg(long, global = true)]
    primitive_root: Option<u16>,

    /// Emit JSON instead of text (overrides --format)
    #[arg(long, global = true)]
    json: bool,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    /// Z localized at p (requires d = 1)
    Zp,
    /// F_q[t] localized at t
    Fqt,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the resolved field, representatives, and primitive root
    Info,
    /// Print the node element u_n
    Un { n: u64 },
    /// Coefficient F_n(u_m): fast residue plus exact value
    Coeff {
        n: u64,
        m: u64,
        /// Re-derive the residue from the exact value and cross-check
        #[arg(long)]
        oracle: bool,
    },
    /// Digit expansion of an element literal
    Expand {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        depth: usize,
    },
    /// Coefficient-class triangle over 0 <= n <= m <= max
    Triangle {
        max: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TriangleFormat,
    },
    /// Residue-class distribution counts for one index
    Dist { n: u64 },
    /// Generating polynomial of the distribution counts
    Genpoly { n: u64 },
    /// Batch verification of the library's identities
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleFormat {
    Text,
    Csv,
    Pgm,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Digit-factorized residues against the exact oracle on a full grid
    Lucas {
        #[arg(long, default_value_t = 50)]
        max: u64,
    },
    /// Generating-polynomial product identity for all n <= max
    Gw {
        #[arg(long, default_value_t = 200)]
        max: u64,
    },
    /// Index-set bijection and cardinality convolution on random words
    Bijection {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
    },
    /// Valuation of node differences against digit agreement
    Vwdwo {
        #[arg(long, default_value_t = 100)]
        max: u64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

/// Parses and executes; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Box<dyn std::error::Error>> {
    let model = build_model(&cli)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let code = dispatch(&cli, &model, &mut out)?;
    out.flush()?;
    Ok(code)
}

fn build_model(cli: &Cli) -> Result<DvdModel, Error> {
    let kind = match cli.model {
        ModelArg::Zp => ModelKind::RationalLocalization,
        ModelArg::Fqt => ModelKind::PowerSeriesLocalization,
    };
    if kind == ModelKind::RationalLocalization && cli.d != 1 {
        return Err(Error::InvalidConfig("--model zp requires --d 1".into()));
    }
    let modulus = cli
        .modulus
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<u16>()
                        .map_err(|_| Error::Parse(format!("bad modulus coefficient '{c}'")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    let mut field = ResidueField::new(cli.p, cli.d, modulus)?;
    if let Some(code) = cli.primitive_root {
        field = field.with_primitive_root(code)?;
    }

    let reps = cli.reps.trim();
    let spec = if reps == "default" {
        RepSpec::Default
    } else if let Some(seed) = reps.strip_prefix("seed:") {
        let seed = seed
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("bad seed '{seed}'")))?;
        RepSpec::Seeded(seed)
    } else {
        // explicit list; element literals never contain commas
        let probe = DvdModel::new(kind, field.clone(), RepSpec::Default)?;
        let list = reps
            .split(',')
            .map(|s| probe.parse_element(s))
            .collect::<Result<Vec<_>, _>>()?;
        RepSpec::Explicit(list)
    };
    DvdModel::new(kind, field, spec)
}

fn model_name(model: &DvdModel) -> &'static str {
    match model.kind() {
        ModelKind::RationalLocalization => "zp",
        ModelKind::PowerSeriesLocalization => "fqt",
    }
}

/// The field object used across CLI JSON output.
#[derive(Serialize)]
struct FieldDescription {
    p: u64,
    d: u32,
    modulus: Vec<u16>,
    q: u64,
    primitive_root: u16,
}

impl FieldDescription {
    fn of(model: &DvdModel) -> Self {
        let spec = model.field().spec();
        FieldDescription {
            p: spec.p,
            d: spec.d,
            modulus: spec.modulus.clone(),
            q: spec.q,
            primitive_root: model.field().primitive_root().code(),
        }
    }
}

fn class_of(model: &DvdModel, r: FieldElement) -> i64 {
    if r.is_zero() {
        -1
    } else {
        model.field().dlog(r).expect("nonzero residue") as i64
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)
}

fn dispatch(
    cli: &Cli,
    model: &DvdModel,
    out: &mut Box<dyn Write>,
) -> Result<i32, Box<dyn std::error::Error>> {
    match &cli.command {
        Command::Info => {
            #[derive(Serialize)]
            struct InfoOut {
                model: &'static str,
                field: FieldDescription,
                reps: Vec<String>,
            }
            let info = InfoOut {
                model: model_name(model),
                field: FieldDescription::of(model),
                reps: model.reps().iter().map(|r| r.render()).collect(),
            };
            if cli.json {
                emit_json(out, &info)?;
            } else {
                writeln!(out, "model: {}", info.model)?;
                writeln!(
                    out,
                    "field: p = {}, d = {}, q = {}",
                    info.field.p, info.field.d, info.field.q
                )?;
                if !info.field.modulus.is_empty() {
                    let poly: Vec<String> =
                        info.field.modulus.iter().map(|c| c.to_string()).collect();
                    writeln!(out, "modulus: [{}]", poly.join(", "))?;
                }
                writeln!(out, "primitive_root: {}", info.field.primitive_root)?;
                writeln!(out, "reps: {}", info.reps.join(", "))?;
            }
            Ok(0)
        }
        Command::Un { n } => {
            let element = model.u_of(*n).render();
            if cli.json {
                #[derive(Serialize)]
                struct UnOut {
                    n: u64,
                    element: String,
                }
                emit_json(out, &UnOut { n: *n, element })?;
            } else {
                writeln!(out, "u_{n} = {element}")?;
            }
            Ok(0)
        }
        Command::Coeff { n, m, oracle } => {
            let fast = fn_residue(*n, *m, model);
            let exact = fn_eval_exact(*n, &model.u_of(*m), model);
            let exact_text = exact.reduced(model.field()).render();
            let oracle_agrees = if *oracle {
                Some(model.residue(&exact)? == fast)
            } else {
                None
            };
            if cli.json {
                #[derive(Serialize)]
                struct CoeffOut {
                    n: u64,
                    m: u64,
                    residue_code: u16,
                    class: i64,
                    exact: String,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    oracle_agrees: Option<bool>,
                }
                emit_json(
                    out,
                    &CoeffOut {
                        n: *n,
                        m: *m,
                        residue_code: fast.code(),
                        class: class_of(model, fast),
                        exact: exact_text,
                        oracle_agrees,
                    },
                )?;
            } else {
                writeln!(
                    out,
                    "F_{n}(u_{m}): residue {} (class {}), exact {}",
                    fast.code(),
                    class_of(model, fast),
                    exact_text
                )?;
                if let Some(ok) = oracle_agrees {
                    writeln!(out, "oracle: {}", if ok { "agree" } else { "MISMATCH" })?;
                }
            }
            Ok(if oracle_agrees == Some(false) { 1 } else { 0 })
        }
        Command::Expand { element, depth } => {
            let x = model.parse_element(element)?;
            let digits = model.expand(&x, *depth)?;
            if cli.json {
                #[derive(Serialize)]
                struct ExpandOut {
                    element: String,
                    depth: usize,
                    digits: Vec<u16>,
                }
                emit_json(
                    out,
                    &ExpandOut {
                        element: element.clone(),
                        depth: *depth,
                        digits,
                    },
                )?;
            } else {
                let list: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                writeln!(out, "{}", list.join(","))?;
            }
            Ok(0)
        }
        Command::Triangle { max, format } => {
            triangle(cli, model, *max, *format, out)?;
            Ok(0)
        }
        Command::Dist { n } => {
            let counts = eps_counts(*n, model, EpsMethod::BruteForce);
            if cli.json {
                emit_json(out, &counts)?;
            } else {
                let eps: Vec<String> = counts.eps.iter().map(|c| c.to_string()).collect();
                writeln!(
                    out,
                    "n = {}: eps = [{}], zero_count = {}",
                    counts.n,
                    eps.join(", "),
                    counts.zero_count
                )?;
            }
            Ok(0)
        }
        Command::Genpoly { n } => {
            let g = gen_poly(*n, model);
            if cli.json {
                emit_json(out, &g)?;
            } else {
                writeln!(out, "G_{n} = {}", g.render())?;
            }
            Ok(0)
        }
        Command::Verify { check } => verify(cli, model, check, out),
    }
}

fn triangle(
    cli: &Cli,
    model: &DvdModel,
    max: u64,
    format: TriangleFormat,
    out: &mut Box<dyn Write>,
) -> Result<(), Box<dyn std::error::Error>> {
    let q = model.q();
    let cell = |n: u64, m: u64| class_of(model, fn_residue(n, m, model));
    if cli.json {
        #[derive(Serialize)]
        struct TriangleOut {
            max: u64,
            q: u64,
            rows: Vec<Vec<i64>>,
        }
        let rows: Vec<Vec<i64>> = (0..=max)
            .map(|m| (0..=m).map(|n| cell(n, m)).collect())
            .collect();
        emit_json(out, &TriangleOut { max, q, rows })?;
        return Ok(());
    }
    match format {
        TriangleFormat::Text => {
            for m in 0..=max {
                let row: Vec<String> = (0..=m).map(|n| cell(n, m).to_string()).collect();
                writeln!(out, "{}", row.join(" "))?;
            }
        }
        TriangleFormat::Csv => {
            writeln!(out, "n,m,class")?;
            for m in 0..=max {
                for n in 0..=m {
                    writeln!(out, "{n},{m},{}", cell(n, m))?;
                }
            }
        }
        TriangleFormat::Pgm => {
            let side = max + 1;
            write!(out, "P5\n{side} {side}\n255\n")?;
            let mut row = Vec::with_capacity(side as usize);
            for m in 0..=max {
                row.clear();
                for n in 0..=max {
                    row.push(if n > m {
                        255u8
                    } else {
                        match cell(n, m) {
                            -1 => 0,
                            j => (255.0 * (j as f64 + 1.0) / q as f64).round() as u8,
                        }
                    });
                }
                out.write_all(&row)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GridFailure {
    n: u64,
    m: u64,
    fast_code: u16,
    exact_code: u16,
}

#[derive(Serialize)]
struct LucasOut {
    check: &'static str,
    pass: bool,
    pairs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<GridFailure>,
}

#[derive(Serialize)]
struct GwOut {
    check: &'static str,
    pass: bool,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure: Option<u64>,
}

#[derive(Serialize)]
struct BijectionOut {
    check: &'static str,
    pass: bool,
    trials: u64,
    cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<BijectionFailure>,
}

#[derive(Serialize)]
struct BijectionFailure {
    alpha: String,
    beta: String,
    report: BijectionReport,
}

#[derive(Serialize)]
struct VwdwoOut {
    check: &'static str,
    #[serde(flatten)]
    report: VwdwoReport,
}

fn verify(
    cli: &Cli,
    model: &DvdModel,
    check: &VerifyCommand,
    out: &mut Box<dyn Write>,
) -> Result<i32, Box<dyn std::error::Error>> {
    match check {
        VerifyCommand::Lucas { max } => {
            // fan out over rows; take the lexicographically first failure
            // for a deterministic report
            let failure = (0..=*max)
                .into_par_iter()
                .filter_map(|n| {
                    for m in 0..=*max {
                        let fast = fn_residue(n, m, model);
                        let exact = model
                            .residue(&fn_eval_exact(n, &model.u_of(m), model))
                            .expect("coefficients are integral");
                        if fast != exact {
                            return Some(GridFailure {
                                n,
                                m,
                                fast_code: fast.code(),
                                exact_code: exact.code(),
                            });
                        }
                    }
                    None
                })
                .min_by_key(|f| (f.n, f.m));
            let pairs = (*max + 1) * (*max + 1);
            let result = LucasOut {
                check: "lucas",
                pass: failure.is_none(),
                pairs,
                failure,
            };
            if cli.json {
                emit_json(out, &result)?;
            } else if result.pass {
                writeln!(out, "lucas: PASS ({pairs} pairs, n,m <= {max})")?;
            } else {
                let f = result.failure.as_ref().unwrap();
                writeln!(
                    out,
                    "lucas: FAIL at n={}, m={} (fast {}, exact {})",
                    f.n, f.m, f.fast_code, f.exact_code
                )?;
            }
            Ok(if result.pass { 0 } else { 1 })
        }
        VerifyCommand::Gw { max } => {
            let first_failure = (0..=*max)
                .into_par_iter()
                .filter(|&n| !verify_main_theorem(n, model).pass)
                .min();
            let result = GwOut {
                check: "gw",
                pass: first_failure.is_none(),
                count: *max + 1,
                first_failure,
            };
            if cli.json {
                emit_json(out, &result)?;
            } else if result.pass {
                writeln!(out, "gw: PASS (n <= {max})")?;
            } else {
                writeln!(out, "gw: FAIL at n = {}", result.first_failure.unwrap())?;
            }
            Ok(if result.pass { 0 } else { 1 })
        }
        VerifyCommand::Bijection {
            trials,
            seed,
            max_deg,
        } => {
            let q = model.q();
            let classes = (q - 1) as i64;
            let mut rng = SplitMix64::new(*seed);
            let mut cases = 0u64;
            let mut failure = None;
            'trials: for _ in 0..*trials {
                let da = 1 + (rng.next_u64() % *max_deg as u64) as usize;
                let db = 1 + (rng.next_u64() % *max_deg as u64) as usize;
                let alpha = random_word(da, q, || rng.next_u64());
                let beta = random_word(db, q, || rng.next_u64());
                for n in 0..classes {
                    cases += 1;
                    let report = verify_bijection(&alpha, &beta, n, model);
                    if !report.pass {
                        failure = Some(BijectionFailure {
                            alpha: alpha.render(),
                            beta: beta.render(),
                            report,
                        });
                        break 'trials;
                    }
                }
            }
            let result = BijectionOut {
                check: "bijection",
                pass: failure.is_none(),
                trials: *trials,
                cases,
                failure,
            };
            if cli.json {
                emit_json(out, &result)?;
            } else if result.pass {
                writeln!(out, "bijection: PASS ({} trials, {} cases)", trials, cases)?;
            } else {
                let f = result.failure.as_ref().unwrap();
                writeln!(
                    out,
                    "bijection: FAIL for alpha = {}, beta = {}, n = {}",
                    f.alpha, f.beta, f.report.n
                )?;
            }
            Ok(if result.pass { 0 } else { 1 })
        }
        VerifyCommand::Vwdwo { max, depth } => {
            let report = verify_vwdwo(model, *max, *depth);
            let pass = report.pass;
            if cli.json {
                emit_json(
                    out,
                    &VwdwoOut {
                        check: "vwdwo",
                        report,
                    },
                )?;
            } else if pass {
                writeln!(
                    out,
                    "vwdwo: PASS ({} pairs, k <= {depth})",
                    report.pairs_checked
                )?;
            } else {
                let f = report.failure.as_ref().unwrap();
                writeln!(out, "vwdwo: FAIL at n={}, m={}, k={}", f.n, f.m, f.k)?;
            }
            Ok(if pass { 0 } else { 1 })
        }
    }
}
