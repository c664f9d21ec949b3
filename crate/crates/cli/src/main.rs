//! Command-line driver: read a germ, compute its Milnor / mixed Newton
//! number (or intermediate quantities), and emit human-readable and JSON
//! reports.
//!
//! Exit codes: 0 on success, 2 when the non-convenient evaluation fails to
//! stabilize (the trace is included in the report), 1 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use newton_milnor::mixed::EngineError;
use newton_milnor::nondegen::export_face_systems;
use newton_milnor::parser::{parse_map, parse_support_json};
use newton_milnor::{
    covolume, kouchnirenko_report, milnor_number, newton_number, newton_polyhedron, rat_string,
    AnalyticMapGerm, NewtonNumberReport, NewtonPolyhedron, StabilizationPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Milnor number via the mixed Newton number; handles non-convenient
    /// input by axis extension with stabilization detection.
    Milnor,
    /// Mixed Newton number of convenient input only.
    Newton,
    /// Classical single-polyhedron Newton number (requires p = 1).
    Kouchnirenko,
    /// Covolume of the Newton polyhedron (requires p = 1, convenient).
    Covolume,
    /// Export the compact-face systems of the Minkowski sum as JSON.
    ExportFaces,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Milnor => "milnor",
            Mode::Newton => "newton",
            Mode::Kouchnirenko => "kouchnirenko",
            Mode::Covolume => "covolume",
            Mode::ExportFaces => "export-faces",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// The polynomial expression language, e.g. `x^2 + y^3; x*y`.
    Text,
    /// The JSON support format `{"n":…, "components":…}`.
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "newton-milnor",
    about = "Exact Milnor numbers of Newton-non-degenerate complete intersection germs"
)]
struct Args {
    /// Read the germ from this file.
    #[arg(long, conflicts_with = "expr")]
    input: Option<PathBuf>,

    /// Inline germ text, e.g. "x^2 + y^3" or "x^2; y^3".
    #[arg(long)]
    expr: Option<String>,

    /// Input format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, value_enum, default_value_t = Mode::Milnor)]
    mode: Mode,

    /// Initial extension exponent for non-convenient input
    /// (default: n · (1 + largest exponent in the supports)).
    #[arg(long)]
    n0: Option<u64>,

    /// Cap on extension doublings before giving up.
    #[arg(long)]
    max_doublings: Option<u32>,

    /// Write the canonical JSON report here; `-` writes it to stdout
    /// instead of the human-readable summary.
    #[arg(long)]
    json_out: Option<PathBuf>,

    /// Print per-subset contributions and every mixed covolume used.
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(doc) => {
            if let Err(e) = deliver(&args, &doc) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            let doc = json!({ "error": { "code": failure.code, "message": failure.message } });
            let rendered = to_canonical_string(&doc);
            println!("{rendered}");
            if let Some(path) = &args.json_out {
                if path != &PathBuf::from("-") {
                    let _ = fs::write(path, rendered + "\n");
                }
            }
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

struct Failure {
    code: &'static str,
    message: String,
    exit: u8,
}

impl Failure {
    fn input(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            exit: 1,
        }
    }
}

fn engine_failure(err: EngineError) -> Failure {
    let code = match &err {
        EngineError::NoStabilization { .. } => "no_stabilization",
        EngineError::NonConvenient { .. } => "non_convenient",
        EngineError::TooManyComponents { .. } => "p_exceeds_n",
        EngineError::DimensionMismatch => "dimension_mismatch",
        EngineError::SingularInterpolation => "singular_interpolation",
        EngineError::PolynomialityViolation { .. } => "polynomiality_violation",
        EngineError::Volume(_) => "volume_error",
        EngineError::Polytope(_) => "polytope_error",
    };
    let exit = if matches!(err, EngineError::NoStabilization { .. }) {
        2
    } else {
        1
    };
    Failure {
        code,
        message: err.to_string(),
        exit,
    }
}

fn run(args: &Args) -> Result<Output, Failure> {
    let text = match (&args.expr, &args.input) {
        (Some(expr), _) => expr.clone(),
        (None, Some(path)) => fs::read_to_string(path)
            .map_err(|e| Failure::input("io_error", format!("{}: {e}", path.display())))?,
        (None, None) => {
            return Err(Failure::input(
                "missing_input",
                "provide a germ with --expr TEXT or --input PATH",
            ))
        }
    };

    let germ = match args.format {
        Format::Text => parse_map(&text, None),
        Format::Json => parse_support_json(&text),
    }
    .map_err(|e| Failure::input("parse_error", e.to_string()))?;

    match args.mode {
        Mode::Milnor => {
            let policy = policy_for(args, &germ);
            let report = milnor_number(&germ, policy).map_err(engine_failure)?;
            Ok(Output::Report(Box::new(report), args.mode))
        }
        Mode::Newton => {
            let polys = build_polyhedra(&germ)?;
            let refs: Vec<&NewtonPolyhedron> = polys.iter().collect();
            let report = newton_number(&refs).map_err(engine_failure)?;
            Ok(Output::Report(Box::new(report), args.mode))
        }
        Mode::Kouchnirenko => {
            if germ.p() != 1 {
                return Err(Failure::input(
                    "mode_requires_p1",
                    "mode kouchnirenko requires p = 1",
                ));
            }
            let polys = build_polyhedra(&germ)?;
            let report = kouchnirenko_report(&polys[0]).map_err(engine_failure)?;
            Ok(Output::Report(Box::new(report), args.mode))
        }
        Mode::Covolume => {
            if germ.p() != 1 {
                return Err(Failure::input(
                    "mode_requires_p1",
                    "mode covolume requires p = 1",
                ));
            }
            let polys = build_polyhedra(&germ)?;
            let value = covolume(&polys[0]).map_err(|e| engine_failure(EngineError::Volume(e)))?;
            let doc = json!({
                "n": germ.n(),
                "p": 1,
                "mode": "covolume",
                "covolume": rat_string(&value),
                "convenient": [polys[0].is_convenient()],
                "warnings": [],
            });
            Ok(Output::Document(
                doc,
                format!("covolume = {}", rat_string(&value)),
            ))
        }
        Mode::ExportFaces => {
            let bundle = export_face_systems(&germ)
                .map_err(|e| Failure::input("polytope_error", e.to_string()))?;
            let count = bundle.faces.len();
            Ok(Output::Document(
                bundle.to_json(),
                format!("exported {count} compact face systems"),
            ))
        }
    }
}

fn policy_for(args: &Args, germ: &AnalyticMapGerm) -> Option<StabilizationPolicy> {
    if args.n0.is_none() && args.max_doublings.is_none() {
        return None;
    }
    let mut policy = StabilizationPolicy::for_supports(germ.n(), germ.max_exponent());
    if let Some(n0) = args.n0 {
        policy.initial = n0.max(1);
    }
    if let Some(cap) = args.max_doublings {
        policy.max_doublings = cap;
    }
    Some(policy)
}

fn build_polyhedra(germ: &AnalyticMapGerm) -> Result<Vec<NewtonPolyhedron>, Failure> {
    germ.components()
        .iter()
        .map(|c| {
            newton_polyhedron(c.support(), germ.n())
                .map_err(|e| Failure::input("polytope_error", e.to_string()))
        })
        .collect()
}

enum Output {
    Report(Box<NewtonNumberReport>, Mode),
    Document(Value, String),
}

fn deliver(args: &Args, output: &Output) -> Result<(), std::io::Error> {
    let (doc, human) = match output {
        Output::Report(report, mode) => (
            report.to_json(mode.name()),
            render_report(report, *mode, args.verbose),
        ),
        Output::Document(doc, summary) => (doc.clone(), summary.clone()),
    };
    let rendered = to_canonical_string(&doc);
    match &args.json_out {
        Some(path) if path == &PathBuf::from("-") => println!("{rendered}"),
        Some(path) => {
            fs::write(path, rendered + "\n")?;
            println!("{human}");
        }
        None => println!("{human}"),
    }
    Ok(())
}

fn to_canonical_string(doc: &Value) -> String {
    serde_json::to_string(doc).expect("report serialization is infallible")
}

fn render_report(report: &NewtonNumberReport, mode: Mode, verbose: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "n = {}, p = {}, mode = {}\n",
        report.n,
        report.p,
        mode.name()
    ));
    out.push_str(&format!(
        "convenient: [{}]\n",
        report
            .convenient
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    if let Some(n_exp) = report.extension_used {
        out.push_str(&format!("extension exponent: {n_exp}\n"));
    }
    if !report.stabilization_trace.is_empty() {
        let trace = report
            .stabilization_trace
            .iter()
            .map(|(n, v)| format!("N={n}: nu={}", rat_string(v)))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("stabilization trace: {trace}\n"));
    }
    if verbose {
        for (subset, contribution) in &report.per_subset {
            let key = subset
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "  I = {{{key}}}: contribution {}\n",
                rat_string(contribution)
            ));
        }
        out.push_str(&format!("  constant term: {}\n", report.constant_term));
        for (subset, table) in &report.tables {
            let key = subset
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",");
            for (k, v) in table.entries() {
                out.push_str(&format!("  covol I={{{key}}} k={k:?}: {}\n", rat_string(v)));
            }
        }
    }
    for warning in &report.warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }
    out.push_str(&format!("nu = {}", rat_string(&report.nu)));
    if let Some(mu) = report.mu {
        out.push_str(&format!("\nmu = {mu}"));
    }
    out
}
