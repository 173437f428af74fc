use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sls::engine::{DecideOptions, Outcome, Verdict, DEFAULT_MAX_DEPTH, INCONCLUSIVE_NOTE};
use sls::oracle::{grid_classify, GridSpec};
use sls::scheme_file::{load_scheme_spec, write_scheme};
use sls::subdivision::{check_convergence, SchemeSpec, SubdivisionScheme};
use sls::{decide_with, parse_form, Form, VariableContext};

const EXIT_USAGE: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "sls", version, about = "Decide nonnegativity of forms on the nonnegative orthant")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the substitution search on a form.
    Decide {
        /// Comma-separated variable names; their order is the coordinate order.
        #[arg(long)]
        vars: String,
        #[arg(long)]
        form: String,
        /// wds, midpoint3, trisection3, central3 or file:<path>
        #[arg(long, default_value = "wds")]
        scheme: String,
        /// Dimension for `wds`; defaults to the number of variables.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Drop repeated forms within a level.
        #[arg(long)]
        dedup: bool,
        #[arg(long, value_enum, default_value = "text")]
        output: OutputFormat,
        /// Print per-level counts to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Validate a scheme and check convergence.
    AnalyzeScheme {
        #[arg(long, conflicts_with = "file")]
        scheme: Option<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Evaluate a form on the grid of points of the simplex with denominator D.
    Sample {
        #[arg(long)]
        vars: String,
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 16)]
        denominator: u32,
    },
    /// Write a built-in scheme in the scheme file format.
    GenScheme {
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl ToString) -> Failure {
    Failure { code: EXIT_INPUT, message: message.to_string() }
}

fn usage_error(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Decide { vars, form, scheme, n, max_depth, dedup, output, trace } => {
            let (ctx, f) = read_form(&vars, &form)?;
            let scheme = select_scheme(&scheme, n.unwrap_or(ctx.len()))?;
            if scheme.n() != ctx.len() {
                return Err(input_error(format!(
                    "scheme {} has dimension {} but the form has {} variables",
                    scheme.name(),
                    scheme.n(),
                    ctx.len()
                )));
            }
            if max_depth < 1 {
                return Err(usage_error("--max-depth must be at least 1"));
            }
            let verdict = decide_with(&f, &scheme, &DecideOptions { max_depth, dedup })
                .map_err(input_error)?;
            if trace {
                eprint!("{}", trace_text(&verdict));
            }
            match output {
                OutputFormat::Text => emit(&verdict_text(&verdict, &ctx)),
                OutputFormat::Json => {
                    let json = serde_json::to_string_pretty(&verdict.report())
                        .expect("report serializes");
                    emit(&format!("{json}\n"));
                }
            }
            Ok(exit_code(&verdict))
        }
        Command::AnalyzeScheme { scheme, n, file } => {
            let spec = match (scheme, file) {
                (_, Some(path)) => load_scheme_spec(&path).map_err(input_error)?,
                (Some(sel), None) => select_spec(&sel, n)?,
                (None, None) => return Err(usage_error("give --scheme or --file")),
            };
            let (text, ok) = analyze_text(&spec);
            emit(&text);
            Ok(if ok { 0 } else { EXIT_INPUT })
        }
        Command::Sample { vars, form, denominator } => {
            let (ctx, f) = read_form(&vars, &form)?;
            if denominator < 1 {
                return Err(usage_error("--denominator must be at least 1"));
            }
            let r = grid_classify(&f, GridSpec::new(ctx.len(), denominator)).map_err(input_error)?;
            let argmin: Vec<String> = r.argmin.iter().map(ToString::to_string).collect();
            emit(&format!(
                "points: {}\nmin: {}\nargmin: ({})\nnegative_found: {}\n",
                r.points,
                r.min_value,
                argmin.join(", "),
                r.negative_found
            ));
            Ok(0)
        }
        Command::GenScheme { scheme, n, out } => {
            let scheme = SubdivisionScheme::builtin(&scheme, n).map_err(usage_error)?;
            let text = write_scheme(&scheme);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?,
                None => emit(&text),
            }
            Ok(0)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read_form(vars: &str, form: &str) -> Result<(VariableContext, Form), Failure> {
    let ctx = VariableContext::from_list(vars).map_err(usage_error)?;
    let f = parse_form(form, &ctx).map_err(|e| input_error(format!("cannot parse form: {e}")))?;
    if f.is_zero() {
        return Err(input_error("the form is identically zero"));
    }
    Ok((ctx, f))
}

fn select_spec(selector: &str, n: usize) -> Result<SchemeSpec, Failure> {
    if let Some(path) = selector.strip_prefix("file:") {
        return load_scheme_spec(path.as_ref()).map_err(input_error);
    }
    SubdivisionScheme::builtin(selector, n).map(|s| s.to_spec()).map_err(usage_error)
}

fn select_scheme(selector: &str, n: usize) -> Result<SubdivisionScheme, Failure> {
    select_spec(selector, n)?
        .into_scheme()
        .map_err(|e| input_error(format!("invalid scheme: {e}")))
}

fn exit_code(v: &Verdict) -> u8 {
    match v.outcome {
        Outcome::Psd => 0,
        Outcome::Indefinite(_) => 1,
        Outcome::Inconclusive => 2,
    }
}

fn verdict_text(v: &Verdict, ctx: &VariableContext) -> String {
    let mut out = String::new();
    match &v.outcome {
        Outcome::Psd => {
            let _ = writeln!(out, "PSD at depth {}", v.depth_reached);
        }
        Outcome::Indefinite(w) => {
            let _ = writeln!(out, "INDEFINITE at depth {}", v.depth_reached);
            let path: Vec<String> = w.path.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "path: [{}]", path.join(", "));
            let coords: Vec<String> = ctx
                .names()
                .iter()
                .zip(&w.point)
                .map(|(name, x)| format!("{name} = {x}"))
                .collect();
            let _ = writeln!(out, "point: {}", coords.join(", "));
            let _ = writeln!(out, "value: {}", w.value);
        }
        Outcome::Inconclusive => {
            let _ = writeln!(out, "INCONCLUSIVE after depth {}", v.depth_reached);
            let _ = writeln!(out, "{INCONCLUSIVE_NOTE}");
        }
    }
    out
}

fn trace_text(v: &Verdict) -> String {
    let mut out = String::new();
    for l in &v.stats.levels {
        let _ = writeln!(
            out,
            "depth {}: expanded {}, pruned {}, duplicates {}, frontier {}",
            l.depth, l.expanded, l.pruned_positive, l.duplicates, l.frontier_size
        );
    }
    out
}

fn analyze_text(spec: &SchemeSpec) -> (String, bool) {
    let mut out = String::new();
    let report = spec.validate();
    let _ = writeln!(out, "scheme {} (n = {}), {} matrices", spec.name, spec.n, spec.matrices.len());
    for m in &report.matrices {
        let status = if m.failures.is_empty() {
            "ok".to_string()
        } else {
            m.failures.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        };
        let _ = writeln!(out, "matrix {}: |det| = {}, {}", m.index, m.abs_det, status);
    }
    let _ = writeln!(
        out,
        "sum |det| = {}{}",
        report.volume_sum,
        if report.volume_ok { "" } else { " (expected 1)" }
    );
    if !report.count_ok {
        let _ = writeln!(out, "too few matrices");
    }
    if !report.passed() {
        let _ = writeln!(out, "validation FAILED");
        return (out, false);
    }
    let _ = writeln!(out, "validation passed");
    let scheme = spec.clone().into_scheme().expect("validated scheme builds");
    let conv = check_convergence(&scheme);
    match conv.contraction_ratio_sq {
        Some(r) if conv.convergent => {
            let _ = writeln!(out, "convergent; contraction_ratio_sq = {r}");
        }
        _ => {
            let edges: Vec<String> = conv
                .shared_edges
                .iter()
                .map(|e| format!("shared edge in matrix {} (columns {},{})", e.matrix, e.columns.0, e.columns.1))
                .collect();
            let _ = writeln!(out, "NOT convergent; {}", edges.join("; "));
        }
    }
    (out, true)
}
