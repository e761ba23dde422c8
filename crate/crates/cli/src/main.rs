use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use realbun_core::verify::{run_all, CheckConfig};
use realbun_core::{
    adapted_basis, classify, cross_check, cup1_height, dickson_invariant, em_column_series,
    indecomposable_chain, omega_bso_presentation, s_set, series_of, stack_series,
    type1_involution_matrix, type2_involution_matrix, BitMatrix, CurveType, InvolutionMatrix,
    ModuliParams, PoincareSeries,
};

#[derive(Parser, Debug)]
#[command(name = "realbun", version, about = "Mod-2 cohomology of moduli stacks of real vector bundles")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Truncation {
    /// Top degree of every printed series.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u16).range(0..=512))]
    cap: u16,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct TypeOneArgs {
    #[arg(long = "g-prime")]
    g_prime: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    rank: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type, g', parity correction and Dickson invariant of a curve.
    Classify {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u32,
    },
    /// Dickson invariant from curve invariants, from a matrix file, or both.
    Dickson {
        #[arg(long, requires_all = ["n", "a"])]
        g: Option<u32>,
        #[arg(long, requires_all = ["g", "a"])]
        n: Option<u32>,
        #[arg(long, requires_all = ["g", "n"])]
        a: Option<u32>,
        #[arg(long, required_unless_present = "g")]
        matrix: Option<PathBuf>,
    },
    /// Adapted basis of an involution given as a matrix file.
    Basis {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Presentation and Poincaré series of the moduli stack of a type I curve.
    Present {
        #[command(flatten)]
        curve: TypeOneArgs,
        /// Bundle degree; recorded only.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// Cohomology of Omega BSO(r) with its cup-1 heights.
    OmegaBso {
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// A closed-form Poincaré series.
    Series {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long = "g-prime", default_value_t = 0)]
        g_prime: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        rank: u32,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// Run every acceptance criterion and print a pass/fail table.
    Check {
        #[arg(long = "max-gprime", default_value_t = 4)]
        max_gprime: u32,
        #[arg(long = "max-n", default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
        #[arg(long = "max-rank", default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        max_rank: u32,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[command(flatten)]
        truncation: Truncation,
    },
    /// `present` over a grid, one JSON object per line.
    Sweep {
        #[arg(long = "max-gprime", default_value_t = 2)]
        max_gprime: u32,
        #[arg(long = "max-n", default_value_t = 3)]
        max_n: u32,
        #[arg(long = "max-rank", default_value_t = 3)]
        max_rank: u32,
        #[command(flatten)]
        truncation: Truncation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Eilenberg-Moore column.
    Em,
    /// Full stack, with the loop-group factor.
    Stack,
    /// `prod_{i<r} (1 + t^i)`.
    So,
}

enum Failure {
    Input(anyhow::Error),
    /// Printed report, if any, then the message.
    Verification(String, Option<Output>),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

enum Output {
    Rendered { json: Value, text: String },
    /// Same bytes in both formats.
    Lines(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg, report)) => {
            if let Some(out) = report {
                emit(&out, cli.format);
            }
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Output, format: Format) {
    match (out, format) {
        (Output::Rendered { json, .. }, Format::Json) => {
            println!("{}", serde_json::to_string(json).expect("values serialize"))
        }
        (Output::Rendered { text, .. }, Format::Text) => print!("{text}"),
        (Output::Lines(lines), _) => print!("{lines}"),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn run(command: &Command) -> Result<Output, Failure> {
    match *command {
        Command::Classify { g, n, a } => cmd_classify(g, n, a),
        Command::Dickson { g, n, a, ref matrix } => {
            let curve = match (g, n, a) {
                (Some(g), Some(n), Some(a)) => Some((g, n, a)),
                _ => None,
            };
            cmd_dickson(curve, matrix.as_ref())
        }
        Command::Basis { ref matrix } => cmd_basis(matrix),
        Command::Present { curve, d, truncation } => {
            let params = ModuliParams::from_type_one(curve.g_prime, curve.n, curve.rank, d)?;
            let (json, text, passed) = present(&params, truncation.cap as usize)?;
            let out = Output::Rendered { json, text };
            if passed {
                Ok(out)
            } else {
                Err(Failure::Verification("series cross-check failed".into(), Some(out)))
            }
        }
        Command::OmegaBso { rank, truncation } => cmd_omega_bso(rank, truncation.cap as usize),
        Command::Series { preset, g_prime, n, rank, truncation } => {
            cmd_series(preset, g_prime, n, rank, truncation.cap as usize)
        }
        Command::Check { max_gprime, max_n, max_rank, seed, truncation } => cmd_check(CheckConfig {
            max_gprime,
            max_n,
            max_rank,
            cap: truncation.cap as usize,
            seed,
        }),
        Command::Sweep { max_gprime, max_n, max_rank, truncation } => {
            cmd_sweep(max_gprime, max_n, max_rank, truncation.cap as usize)
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_classify(g: u32, n: u32, a: u32) -> Result<Output, Failure> {
    let d = classify(g, n, a)?;
    let dickson = d.dickson.map_or("undefined".to_string(), |x| x.to_string());
    let text = format!(
        "type {}  g={} n={} a={}  g'={} c={}  D={}  M-curve={}\n",
        d.curve_type, d.g, d.n, d.a, d.g_prime, d.c, dickson, yes_no(d.is_m_curve)
    );
    Ok(Output::Rendered { json: to_value(&d), text })
}

fn read_matrix(path: &PathBuf) -> anyhow::Result<BitMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    BitMatrix::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_involution(path: &PathBuf) -> anyhow::Result<InvolutionMatrix> {
    InvolutionMatrix::new(read_matrix(path)?).with_context(|| format!("validating {}", path.display()))
}

fn cmd_dickson(curve: Option<(u32, u32, u32)>, matrix: Option<&PathBuf>) -> Result<Output, Failure> {
    let mut json = serde_json::Map::new();
    let mut text = String::new();
    let mut values = Vec::new();
    if let Some((g, n, a)) = curve {
        let derived = classify(g, n, a)?;
        let formula = derived.dickson.ok_or_else(|| {
            anyhow::anyhow!("the Dickson formula covers type I and type II curves; ({g},{n},{a}) is type 0")
        })?;
        let model = match derived.curve_type {
            CurveType::TypeI => type1_involution_matrix(derived.g_prime, n)?,
            _ => type2_involution_matrix(g, n)?,
        };
        let model_rank = dickson_invariant(&model) as u32;
        json.insert("formula".into(), json!(formula));
        json.insert("model".into(), json!(model_rank));
        writeln!(text, "formula: D = {formula}").unwrap();
        writeln!(text, "model:   rank(s + Id) = {model_rank}").unwrap();
        values.push(("formula", formula));
        values.push(("model", model_rank));
    }
    if let Some(path) = matrix {
        let s = read_involution(path)?;
        let d = dickson_invariant(&s) as u32;
        if let Some((g, ..)) = curve {
            if s.genus() != g as usize {
                return Err(Failure::Input(anyhow::anyhow!(
                    "matrix has genus {} but --g is {g}",
                    s.genus()
                )));
            }
        }
        json.insert("matrix".into(), json!(d));
        writeln!(text, "matrix:  rank(s + Id) = {d}").unwrap();
        values.push(("matrix", d));
    }
    let d = values[0].1;
    let agree = values.iter().all(|&(_, v)| v == d);
    json.insert("dickson".into(), json!(d));
    json.insert("agree".into(), json!(agree));
    if !agree {
        let parts: Vec<String> = values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        return Err(Failure::Verification(format!("Dickson invariants disagree: {}", parts.join(", ")), None));
    }
    if values.len() == 1 {
        text = format!("{d}\n");
    }
    Ok(Output::Rendered { json: Value::Object(json), text })
}

fn cmd_basis(path: &PathBuf) -> Result<Output, Failure> {
    let s = read_involution(path)?;
    let basis = adapted_basis(&s)?;
    let normal = basis.conjugate(&s)?;
    let verified = basis.verify(&s)?;
    if !verified {
        return Err(Failure::Verification("conjugated matrix is not in normal form".into(), None));
    }
    let roles: Vec<Value> = basis
        .roles
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "role": r.kind,
                "index": r.index,
                "vector": basis.change_of_basis.row(i).to_bitstring(),
            })
        })
        .collect();
    let json = json!({
        "g": basis.g,
        "dickson": basis.dickson,
        "fixed_pairs": basis.fixed_pairs,
        "change_of_basis": basis.change_of_basis.to_json(),
        "roles": roles,
        "normal_form": normal.to_json(),
        "verified": verified,
    });
    let mut text = format!("g={} D={}\n", basis.g, basis.dickson);
    for (i, r) in basis.roles.iter().enumerate() {
        writeln!(text, "{:>6}_{:<3} {}", r.kind.to_string(), r.index, basis.change_of_basis.row(i).to_bitstring()).unwrap();
    }
    text.push_str("normal form:\n");
    for row in normal.rows() {
        writeln!(text, "  {}", row.to_bitstring()).unwrap();
    }
    Ok(Output::Rendered { json, text })
}

fn present(params: &ModuliParams, cap: usize) -> Result<(Value, String, bool), Failure> {
    let presentation = params.presentation();
    let series = series_of(&presentation, cap)?;
    let checks = cross_check(params.g_prime, params.n, params.r, cap)?;
    let json = json!({
        "params": {
            "g": params.g,
            "n": params.n,
            "a": params.a,
            "g_prime": params.g_prime,
            "r": params.r,
            "d": params.d,
        },
        "presentation": presentation,
        "poincare": series,
        "checks": checks,
    });
    let text = format!(
        "g={} n={} a={} g'={} r={} d={}\n{}\n{}\nchecks: {}\n",
        params.g,
        params.n,
        params.a,
        params.g_prime,
        params.r,
        params.d,
        presentation,
        series,
        if checks.passed() { "pass" } else { "FAIL" }
    );
    Ok((json, text, checks.passed()))
}

fn cmd_omega_bso(rank: u32, cap: usize) -> Result<Output, Failure> {
    if rank == 0 {
        return Err(Failure::Input(anyhow::anyhow!("rank must be >= 1")));
    }
    let presentation = omega_bso_presentation(rank);
    let series = series_of(&presentation, cap)?;
    let mut heights = Vec::new();
    let mut text = format!("{presentation}\n{series}\n");
    for k in (2..=rank).step_by(2) {
        let nu = cup1_height(k, rank)?;
        let chain = indecomposable_chain(k, rank)?;
        writeln!(text, "nu_{k} = {nu}  exponent {}  chain {chain:?}", 1u64 << (nu + 1)).unwrap();
        heights.push(json!({"k": k, "nu": nu, "exponent": 1u64 << (nu + 1), "chain": chain}));
    }
    let s: Vec<u32> = s_set(rank).into_iter().collect();
    writeln!(text, "S = {s:?}").unwrap();
    let json = json!({
        "rank": rank,
        "presentation": presentation,
        "poincare": series,
        "heights": heights,
        "s_set": s,
    });
    Ok(Output::Rendered { json, text })
}

fn cmd_series(preset: Preset, g_prime: u32, n: u32, rank: u32, cap: usize) -> Result<Output, Failure> {
    if rank == 0 {
        return Err(Failure::Input(anyhow::anyhow!("rank must be >= 1")));
    }
    let series: PoincareSeries = match preset {
        Preset::Em => em_column_series(g_prime, n, rank, cap)?,
        Preset::Stack => stack_series(g_prime, n, rank, cap)?,
        Preset::So => realbun_core::product_closed_form(&realbun_core::series::one_plus_range(1, rank - 1, 1), cap)?,
    };
    let text = format!("{series}\n");
    Ok(Output::Rendered { json: to_value(&series), text })
}

fn cmd_check(config: CheckConfig) -> Result<Output, Failure> {
    let outcomes = run_all(&config);
    let mut text = String::new();
    for o in &outcomes {
        writeln!(text, "{}", o.line()).unwrap();
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    writeln!(text, "{} passed, {} failed", outcomes.len() - failed.len(), failed.len()).unwrap();
    let json = json!({ "config": config, "criteria": outcomes, "passed": failed.is_empty() });
    let out = Output::Rendered { json, text };
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Verification(format!("criteria {failed:?} failed"), Some(out)))
    }
}

fn cmd_sweep(max_gprime: u32, max_n: u32, max_rank: u32, cap: usize) -> Result<Output, Failure> {
    let mut lines = String::new();
    let mut failures = Vec::new();
    for gp in 0..=max_gprime {
        for n in 1..=max_n {
            if 2 * gp + n - 1 < 2 {
                continue;
            }
            for r in 1..=max_rank {
                let params = ModuliParams::from_type_one(gp, n, r, 0)?;
                let (json, _, passed) = present(&params, cap)?;
                if !passed {
                    failures.push(format!("({gp},{n},{r})"));
                }
                lines.push_str(&serde_json::to_string(&json).expect("values serialize"));
                lines.push('\n');
            }
        }
    }
    let out = Output::Lines(lines);
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Verification(format!("cross-check failed at {}", failures.join(", ")), Some(out)))
    }
}
