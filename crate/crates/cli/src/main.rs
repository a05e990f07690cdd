//! `krein`: exact Krein boundary operators and extension classification from
//! the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 a verification or cross-check failed.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krein_core::classify::ExtensionInput;
use krein_core::spectral::{count_negative_with_grid, grid_csv};
use krein_core::triplet::boundary_condition_table;
use krein_core::verify::{run_suite, Fault};
use krein_core::weyl::{friedrichs_divergence_check, limit_table_csv, weyl_m};
use krein_core::{
    build_bk, build_t, classification_matrix, exact_weyl_at_zero, negative_squares, rational, render,
    second_order_rk_crosscheck, Error, ScanConfig, TripletSpec,
};
use num_complex::Complex64;
use serde_json::json;

use output::{instance, to_value, Format, Output};

#[derive(Parser)]
#[command(name = "krein", version, about = "Krein boundary operators for (-1)^n d^2n/dx^2n on (a, b)")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Add a version field (JSON) or header line (CSV, LaTeX).
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Instance {
    /// Half order: the operator is (-1)^n d^2n/dx^2n.
    #[arg(long)]
    n: usize,
    /// Left endpoint, as "p/q", an integer or a finite decimal.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    /// Right endpoint.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: String,
}

impl Instance {
    fn spec(&self) -> krein_core::Result<TripletSpec> {
        TripletSpec::parse(self.n, &self.a, &self.b)
    }
}

#[derive(Subcommand)]
enum Command {
    /// The Krein boundary operator B_K with Γ1 = B_K Γ0.
    Bk(Instance),
    /// The transport matrix T taking descending jets at a to those at b.
    TMatrix {
        #[command(flatten)]
        instance: Instance,
        /// Print the Krein boundary conditions instead of the matrix.
        #[arg(long)]
        conditions: bool,
    },
    /// Negative squares of the extension given by an input file.
    Classify { input: PathBuf },
    /// Run the exact self-check suite for n = 1..=n_max.
    Verify {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// The Weyl function M(z).
    Weyl {
        #[command(flatten)]
        instance: Instance,
        /// Real part of z.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        /// Imaginary part of z.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z_im: f64,
        /// M(0) in exact arithmetic.
        #[arg(long, conflicts_with_all = ["z", "limit_scan", "divergence"])]
        exact_zero: bool,
        /// Distance of M(-10^-k) from B_K for k = 1..=K.
        #[arg(long, value_name = "K", conflicts_with_all = ["z", "divergence"])]
        limit_scan: Option<i32>,
        /// Smallest eigenvalue of M(x) for x = -1, -10, -100, -1000.
        #[arg(long, conflicts_with = "z")]
        divergence: bool,
    },
    /// Count negative eigenvalues of the extension in an input file by shooting.
    Spectrum {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda_min: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
        #[arg(long)]
        bisect_tol: Option<f64>,
        #[arg(long)]
        nullity_tol: Option<f64>,
        /// Exit 2 unless the count equals the exact negative-squares count.
        #[arg(long)]
        check_against_inertia: bool,
        /// Write the (λ, sign, log|det|) grid as CSV.
        #[arg(long, value_name = "PATH")]
        grid_dump: Option<PathBuf>,
    },
    /// Second-order R_K = S T S and M(0) = B_K cross-checks.
    Xcheck(Instance),
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipQSign,
}

enum Failure {
    Input(String),
    Check(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidExtension(violations) => {
                let lines: Vec<String> = violations.iter().map(|v| format!("  - {v}")).collect();
                Failure::Input(format!("InvalidExtension:\n{}", lines.join("\n")))
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (result, code) = match run(&cli.command) {
        Ok(out) => (out, 0),
        Err(Failure::Check(out)) => (out, 2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match result.render(cli.format, cli.stamp) {
        Some(text) => print!("{text}"),
        None => {
            eprintln!("error: this command has no {:?} output", cli.format);
            return ExitCode::from(1);
        }
    }
    ExitCode::from(code)
}

fn run(command: &Command) -> Outcome {
    match command {
        Command::Bk(inst) => {
            let spec = inst.spec()?;
            Ok(Output::matrix(&spec, &build_bk(&spec)?))
        }
        Command::TMatrix { instance: inst, conditions } => {
            let spec = inst.spec()?;
            if *conditions {
                let table = boundary_condition_table(&spec);
                let mut obj = instance(&spec);
                obj.insert("conditions".into(), json!(table));
                Ok(Output::json(obj).with_latex(table))
            } else {
                Ok(Output::matrix(&spec, &build_t(&spec)))
            }
        }
        Command::Classify { input } => classify(input),
        Command::Verify { n_max, a, b, inject_fault } => verify(*n_max, a, b, *inject_fault),
        Command::Weyl { instance: inst, z, z_im, exact_zero, limit_scan, divergence } => {
            let spec = inst.spec()?;
            if *exact_zero {
                Ok(Output::matrix(&spec, &exact_weyl_at_zero(&spec)?))
            } else if let Some(k) = limit_scan {
                limit_scan_cmd(&spec, *k)
            } else if *divergence {
                divergence_cmd(&spec)
            } else {
                let z = z.ok_or_else(|| Failure::Input("one of --z, --exact-zero, --limit-scan, --divergence is required".into()))?;
                weyl_sample(&spec, Complex64::new(z, *z_im))
            }
        }
        Command::Spectrum { input, lambda_min, grid_points, bisect_tol, nullity_tol, check_against_inertia, grid_dump } => {
            let job = read_input(input)?;
            let mut config = ScanConfig::default_for(&job.spec);
            config.lambda_min = lambda_min.unwrap_or(config.lambda_min);
            config.grid_points = grid_points.unwrap_or(config.grid_points);
            config.bisect_tol = bisect_tol.unwrap_or(config.bisect_tol);
            config.nullity_tol = nullity_tol.unwrap_or(config.nullity_tol);
            spectrum(&job, &config, *check_against_inertia, grid_dump.as_deref())
        }
        Command::Xcheck(inst) => xcheck(inst),
    }
}

fn read_input(path: &Path) -> std::result::Result<ExtensionInput, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(ExtensionInput::from_json(&text)?)
}

fn classify(path: &Path) -> Outcome {
    let job = read_input(path)?;
    let report = negative_squares(&job.params, &job.spec)?;
    let matrix = classification_matrix(&job.params, &job.spec)?;
    let i = report.classifier_inertia;
    let mut obj = instance(&job.spec);
    if let serde_json::Value::Object(fields) = to_value(&report) {
        obj.extend(fields);
    }
    let csv = format!(
        "kappa,n_neg,n_zero,n_pos,nonnegative,posdef_verdict\n{},{},{},{},{},{}\n",
        report.kappa,
        i.n_neg,
        i.n_zero,
        i.n_pos,
        report.nonnegative,
        to_value(report.posdef_verdict).as_str().unwrap_or_default()
    );
    Ok(Output::json(obj).with_csv(csv).with_latex(render::latex_pmatrix(&matrix)))
}

fn verify(n_max: usize, a: &str, b: &str, fault: Option<FaultArg>) -> Outcome {
    if n_max < 1 {
        return Err(Failure::Input("--n-max must be at least 1".into()));
    }
    let (a, b) = (rational::parse(a)?, rational::parse(b)?);
    TripletSpec::new(1, a.clone(), b.clone())?;
    let fault = fault.map(|FaultArg::FlipQSign| Fault::FlipQSign);
    let report = run_suite(n_max, &a, &b, fault)?;
    let mut csv = String::from("n,check,passed,detail\n");
    for c in &report.checks {
        csv.push_str(&format!("{},{},{},{}\n", c.n, c.name, c.passed, c.detail.as_deref().unwrap_or("")));
    }
    let out = Output::json(&report).with_csv(csv);
    if report.all_passed {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn weyl_sample(spec: &TripletSpec, z: Complex64) -> Outcome {
    let sample = weyl_m(spec, z)?;
    let mut obj = instance(spec);
    if let serde_json::Value::Object(fields) = to_value(&sample) {
        obj.extend(fields);
    }
    let mut csv = String::from("row,col,re,im\n");
    for i in 0..sample.m.nrows() {
        for j in 0..sample.m.ncols() {
            let v = sample.m[(i, j)];
            csv.push_str(&format!("{},{},{:e},{:e}\n", i + 1, j + 1, v.re, v.im));
        }
    }
    Ok(Output::json(obj).with_csv(csv))
}

fn limit_scan_cmd(spec: &TripletSpec, k: i32) -> Outcome {
    if k < 1 {
        return Err(Failure::Input("--limit-scan must be at least 1".into()));
    }
    let exponents: Vec<i32> = (1..=k).collect();
    let rows = krein_core::weyl_limit_scan(spec, &exponents)?;
    let mut obj = instance(spec);
    obj.insert("rows".into(), to_value(&rows));
    Ok(Output::json(obj).with_csv(limit_table_csv(&rows)))
}

fn divergence_cmd(spec: &TripletSpec) -> Outcome {
    let table = friedrichs_divergence_check(spec, &[-1.0, -10.0, -100.0, -1000.0])?;
    let mut csv = String::from("x,min_eigenvalue\n");
    for r in &table.rows {
        csv.push_str(&format!("{:e},{:e}\n", r.x, r.min_eigenvalue));
    }
    let mut obj = instance(spec);
    if let serde_json::Value::Object(fields) = to_value(&table) {
        obj.extend(fields);
    }
    let out = Output::json(obj).with_csv(csv);
    if table.strictly_decreasing {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn spectrum(job: &ExtensionInput, config: &ScanConfig, check: bool, grid_dump: Option<&Path>) -> Outcome {
    let (report, samples) = count_negative_with_grid(&job.params, &job.spec, config)?;
    if let Some(path) = grid_dump {
        std::fs::write(path, grid_csv(&samples)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    let mut obj = instance(&job.spec);
    obj.insert("config".into(), to_value(config));
    if let serde_json::Value::Object(fields) = to_value(&report) {
        obj.extend(fields);
    }
    let mut agrees = true;
    if check {
        let predicted = negative_squares(&job.params, &job.spec)?.kappa;
        agrees = predicted == report.negative_count;
        obj.insert("predicted_kappa".into(), json!(predicted));
        obj.insert("agrees".into(), json!(agrees));
    }
    let mut csv = String::from("lambda,nullity\n");
    for r in &report.roots {
        csv.push_str(&format!("{:e},{}\n", r.lambda, r.nullity));
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let out = Output::json(obj).with_csv(csv);
    if agrees {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn xcheck(inst: &Instance) -> Outcome {
    let spec = inst.spec()?;
    let rk = second_order_rk_crosscheck(spec.a(), spec.b())?;
    let m0_equals_bk = exact_weyl_at_zero(&spec)? == build_bk(&spec)?;
    let mut obj = instance(&spec);
    obj.insert("R_K".into(), to_value(&rk.rk));
    obj.insert("STS".into(), to_value(&rk.sts));
    obj.insert("R_K_equals_STS".into(), json!(rk.equal));
    obj.insert("M0_equals_B_K".into(), json!(m0_equals_bk));
    let csv = format!("check,passed\nR_K = STS,{}\nM(0) = B_K,{}\n", rk.equal, m0_equals_bk);
    let out = Output::json(obj).with_csv(csv);
    if rk.equal && m0_equals_bk {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
