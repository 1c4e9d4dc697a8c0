//! Command-line front end: decide admissibility, screen finite groups,
//! construct truncation operators, run the verification suite, and print
//! cyclotomic polynomials. All subcommands speak JSON ("schema": 1);
//! --format human renders the same JSON as indented text.
//!
//! Exit codes: 0 = pass, 1 = a verification/screening check failed,
//! 2 = refusal (inadmissible group, malformed input, unusable arguments).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use sphere_actions::groups::{CayleyDocument, CayleyTable, PresentationDocument};
use sphere_actions::operators::{combined_action, cyclotomic_poly, euler_totient};
use sphere_actions::verify::verify_construction;
use sphere_actions::{
    decide_fg_abelian, Ball, FgAbelianPresentation, GroupElement, GroupKind, VerificationConfig,
};

const DEFAULT_SEED: u64 = 0x5EED;
const SEED_ENV: &str = "SPHERE_ACTIONS_SEED";

#[derive(Parser)]
#[command(
    name = "sphere-actions",
    version,
    about = "Free isometric group actions on the infinite-dimensional unit sphere: \
             decision procedure, operator construction, and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a finitely generated Abelian group acts freely,
    /// isometrically, and properly discontinuously on the unit sphere
    Decide {
        /// Inline JSON {"generators": n, "relations": [[..], ..]}, a path, or - for stdin
        input: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Screen a finite multiplication table for the order conditions every
    /// sphere-acting group must satisfy
    Screen {
        /// Inline JSON {"cayley": [[..], ..], "identity": i}, a path, or - for stdin
        input: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Construct one group element's operator on a radius-R truncation and
    /// print its descriptor
    Construct {
        /// Inline JSON {"generators", "relations", "shift"?, "exponents"?, "primitive_roots"?}
        input: String,
        /// Word-length radius of the truncation ball
        #[arg(long, default_value_t = 6)]
        radius: u32,
        /// Refuse balls larger than this many elements
        #[arg(long, default_value_t = sphere_actions::hilbert::DEFAULT_BALL_CAP)]
        cap_ball: usize,
        /// Also emit the dense matrix (rows of the paired layout)
        #[arg(long)]
        dense: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Decide, construct, and run the full verification suite
    Verify {
        /// Inline JSON {"generators": n, "relations": [[..], ..]}, a path, or - for stdin
        input: String,
        #[arg(long)]
        radius: Option<u32>,
        /// Random unit vectors per sampled check (at least 1)
        #[arg(long)]
        samples: Option<usize>,
        /// Sampling seed; falls back to SPHERE_ACTIONS_SEED, then a built-in default
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol_isometry: Option<f64>,
        #[arg(long)]
        tol_kernel: Option<f64>,
        #[arg(long)]
        cap_ball: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Print the coefficients of the m-th cyclotomic polynomial,
    /// constant term first
    Cyclo {
        m: u64,
        #[command(flatten)]
        out: OutputOpts,
    },
}

#[derive(Args)]
struct OutputOpts {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the rendering to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    match Cli::parse().command {
        Command::Decide { input, out } => cmd_decide(&input, &out),
        Command::Screen { input, out } => cmd_screen(&input, &out),
        Command::Construct {
            input,
            radius,
            cap_ball,
            dense,
            out,
        } => cmd_construct(&input, radius, cap_ball, dense, &out),
        Command::Verify {
            input,
            radius,
            samples,
            seed,
            tol_isometry,
            tol_kernel,
            cap_ball,
            out,
        } => {
            let mut config = VerificationConfig::default();
            if let Some(r) = radius {
                config.radius = r;
            }
            if let Some(s) = samples {
                if s == 0 {
                    return Err("--samples must be at least 1".into());
                }
                config.samples = s;
            }
            config.seed = resolve_seed(seed)?;
            if let Some(t) = tol_isometry {
                config.tol_isometry = t;
            }
            if let Some(t) = tol_kernel {
                config.tol_kernel = t;
            }
            if let Some(c) = cap_ball {
                config.ball_cap = c;
            }
            cmd_verify(&input, &config, &out)
        }
        Command::Cyclo { m, out } => cmd_cyclo(m, &out),
    }
}

fn cmd_decide(input: &str, out: &OutputOpts) -> Result<ExitCode, String> {
    let doc: PresentationDocument = parse_input(input)?;
    let presentation = FgAbelianPresentation::from_document(&doc).map_err(|e| e.to_string())?;
    let verdict = decide_fg_abelian(&presentation);
    let admissible = verdict.admissible;
    emit(with_schema(to_value(&verdict)?), out)?;
    Ok(if admissible {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_screen(input: &str, out: &OutputOpts) -> Result<ExitCode, String> {
    let doc: CayleyDocument = parse_input(input)?;
    let table = CayleyTable::from_document(&doc).map_err(|e| e.to_string())?;
    let report = table.screen();
    let passed = report.passed();
    let mut fields = Map::new();
    fields.insert("order".into(), json!(table.order()));
    fields.insert("passed".into(), json!(passed));
    fields.insert("violations".into(), to_value(&report.violations)?);
    emit(with_schema(Value::Object(fields)), out)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstructRequest {
    generators: usize,
    relations: Vec<Vec<i64>>,
    /// Free-part shift vector, one entry per free generator; defaults to 0.
    #[serde(default)]
    shift: Option<Vec<i64>>,
    /// Torsion exponents, one per prime-power factor; defaults to 0.
    #[serde(default)]
    exponents: Option<Vec<i64>>,
    /// Rotation numerators kᵢ (coprime to pᵢ^{αᵢ}); defaults to 1.
    #[serde(default)]
    primitive_roots: Option<Vec<i64>>,
}

fn cmd_construct(
    input: &str,
    radius: u32,
    cap_ball: usize,
    dense: bool,
    out: &OutputOpts,
) -> Result<ExitCode, String> {
    let request: ConstructRequest = parse_input(input)?;
    let presentation = FgAbelianPresentation::from_document(&PresentationDocument {
        generators: request.generators,
        relations: request.relations.clone(),
    })
    .map_err(|e| e.to_string())?;
    let verdict = decide_fg_abelian(&presentation);
    let Some(certificate) = verdict.certificate.clone() else {
        // refuse, but still surface the witness in the decide shape
        emit(with_schema(to_value(&verdict)?), out)?;
        return Ok(ExitCode::from(2));
    };

    let prime_powers: Vec<(u64, u32)> = certificate
        .torsion
        .iter()
        .map(|pp| {
            u64::try_from(&pp.prime)
                .map(|p| (p, pp.exponent))
                .map_err(|_| format!("torsion prime {} is too large to construct", pp.prime))
        })
        .collect::<Result<_, _>>()?;

    let free_rank = certificate.free_rank;
    let shift = request.shift.unwrap_or_else(|| vec![0; free_rank]);
    if shift.len() != free_rank {
        return Err(format!(
            "shift has {} entries but the group has free rank {free_rank}",
            shift.len()
        ));
    }
    let exponents = request
        .exponents
        .unwrap_or_else(|| vec![0; prime_powers.len()]);
    let roots = request
        .primitive_roots
        .unwrap_or_else(|| vec![1; prime_powers.len()]);
    if exponents.len() != prime_powers.len() || roots.len() != prime_powers.len() {
        return Err(format!(
            "expected {} torsion exponents and primitive roots",
            prime_powers.len()
        ));
    }

    let host_rank = free_rank.max(1);
    let host_shift = if free_rank == 0 { vec![0] } else { shift };
    let ball = Ball::enumerate_with_cap(GroupKind::FreeAbelian(host_rank), radius, cap_ball)
        .map_err(|e| e.to_string())?;
    let op = combined_action(
        &GroupElement::free_abelian(host_shift),
        &ball,
        &prime_powers,
        &exponents,
        &roots,
    )
    .map_err(|e| e.to_string())?;

    let mut fields = Map::new();
    fields.insert("radius".into(), json!(radius));
    fields.insert("group".into(), to_value(&certificate)?);
    fields.insert("operator".into(), to_value(&op.to_descriptor())?);
    fields.insert("order".into(), to_value(&op.order().finite())?);
    if dense {
        let m = op.dense_paired(ball.len()).map_err(|e| e.to_string())?;
        let rows: Vec<Vec<f64>> = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect();
        fields.insert("dense_rows".into(), json!(rows));
    }
    emit(with_schema(Value::Object(fields)), out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    input: &str,
    config: &VerificationConfig,
    out: &OutputOpts,
) -> Result<ExitCode, String> {
    let doc: PresentationDocument = parse_input(input)?;
    let presentation = FgAbelianPresentation::from_document(&doc).map_err(|e| e.to_string())?;
    let report = verify_construction(&presentation, config).map_err(|e| e.to_string())?;
    let code = if report.refused {
        ExitCode::from(2)
    } else if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    };
    emit(to_value(&report)?, out)?;
    Ok(code)
}

fn cmd_cyclo(m: u64, out: &OutputOpts) -> Result<ExitCode, String> {
    let phi = cyclotomic_poly(m).map_err(|e| e.to_string())?;
    let coefficients = phi.coefficients_i64().map_err(|e| e.to_string())?;
    let mut fields = Map::new();
    fields.insert("m".into(), json!(m));
    fields.insert("degree".into(), json!(euler_totient(m)));
    fields.insert("coefficients".into(), json!(coefficients));
    emit(with_schema(Value::Object(fields)), out)?;
    Ok(ExitCode::SUCCESS)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got {text:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Inline JSON (starts with `{`), `-` for stdin, anything else is a path.
fn parse_input<T: serde::de::DeserializeOwned>(input: &str) -> Result<T, String> {
    let text = if input.trim_start().starts_with('{') {
        input.to_string()
    } else if input == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buffer
    } else {
        std::fs::read_to_string(input).map_err(|e| format!("reading {input}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("malformed input: {e}"))
}

fn to_value<T: serde::Serialize>(value: &T) -> Result<Value, String> {
    serde_json::to_value(value).map_err(|e| e.to_string())
}

fn with_schema(value: Value) -> Value {
    let mut fields = Map::new();
    fields.insert("schema".into(), json!(1));
    if let Value::Object(rest) = value {
        fields.extend(rest);
    }
    Value::Object(fields)
}

fn emit(value: Value, out: &OutputOpts) -> Result<(), String> {
    let rendering = match out.format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
            text.push('\n');
            text
        }
        Format::Human => render_human(&value),
    };
    match &out.output {
        Some(path) => {
            std::fs::write(path, rendering).map_err(|e| format!("writing {}: {e}", path.display()))
        }
        None => {
            print!("{rendering}");
            Ok(())
        }
    }
}

fn render_human(value: &Value) -> String {
    let mut text = String::new();
    walk(value, 0, &mut text);
    text
}

fn walk(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(fields) => {
            for (key, item) in fields {
                if let Some(line) = leaf(item) {
                    out.push_str(&format!("{pad}{key}: {line}\n"));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    walk(item, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if let Some(line) = leaf(item) {
                    out.push_str(&format!("{pad}- {line}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    walk(item, indent + 1, out);
                }
            }
        }
        scalar => {
            let line = leaf(scalar).unwrap_or_default();
            out.push_str(&format!("{pad}{line}\n"));
        }
    }
}

/// Scalars, and arrays of scalars, render on one line.
fn leaf(value: &Value) -> Option<String> {
    match value {
        Value::Object(_) => None,
        Value::Array(items) => {
            if items
                .iter()
                .all(|i| !matches!(i, Value::Object(_) | Value::Array(_)))
            {
                Some(serde_json::to_string(value).expect("scalars serialize"))
            } else {
                None
            }
        }
        Value::String(text) => Some(text.clone()),
        scalar => Some(scalar.to_string()),
    }
}
