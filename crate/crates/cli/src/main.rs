use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use interpcert::bounds::{run_method, BoundOptions, Method};
use interpcert::demo::chebyshev_demo;
use interpcert::experiment::{
    norms_curve, rectangle_nodes, run_experiment, stats_json, trial_matrices, write_curve_csv,
    write_records_csv, ExperimentConfig, Rect,
};
use interpcert::interp::parse::{parse_complex, parse_node_lines, parse_node_list};
use interpcert::interp::{
    chebyshev_nodes, divided_differences_with, AnalyticFunction, Exp, Polynomial,
};
use interpcert::linalg::{
    matrix_exp_info, schur_with, FrobeniusNorm, MatrixNorm, OneNorm, SpectralNorm,
};
use interpcert::mmio::{read_matrix_market, write_matrix_market, write_matrix_market_string};
use interpcert::{bounds, ComplexMatrix, Error, NodeSet, Tolerances};

#[derive(Parser)]
#[command(
    name = "interpcert",
    version,
    about = "Interpolation of matrix functions with a-priori error bounds"
)]
struct Cli {
    /// Worker threads for grid and trial evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the interpolation polynomial p(A) and write it in Matrix Market format.
    Interp(InterpArgs),
    /// Compute error bounds for ‖f(A) − p(A)‖ and print them as JSON.
    Bound(BoundArgs),
    /// Chebyshev-node comparison for exp on [−1, 1].
    ChebDemo(ChebArgs),
    /// Randomized bound-validity experiment.
    Experiment(ExperimentArgs),
    /// Matrix exponential by scaling and squaring.
    Expm(ExpmArgs),
    /// Complex Schur decomposition A = QᴴTQ.
    Schur(SchurArgs),
}

#[derive(Args)]
struct Problem {
    /// Matrix Market file holding A.
    #[arg(long)]
    matrix: PathBuf,
    /// Nodes: a comma list (`0, -1+pij, pi/2j`), `rect16`, `cheb:N`, or a file of `re im` lines.
    #[arg(long, allow_hyphen_values = true)]
    nodes: String,
    /// `exp` or `poly:c0,c1,...` (ascending coefficients).
    #[arg(long, default_value = "exp")]
    function: String,
}

#[derive(Args)]
struct InterpArgs {
    #[command(flatten)]
    problem: Problem,
    /// Output file for p(A); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reference f(A) for reporting the true error.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormChoice {
    Spectral,
    Frobenius,
    One,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    problem: Problem,
    /// Comma-separated subset of theorem1,cor3,cor4,cor5,cor6,taylor (default: all that apply).
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long, default_value_t = 101)]
    t_count: usize,
    #[arg(long, default_value_t = 64)]
    per_edge: usize,
    #[arg(long, value_enum, default_value = "spectral")]
    norm: NormChoice,
    /// Force β in the exponential bounds instead of max Re over the nodes.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Skip the grid-refinement stability check.
    #[arg(long)]
    no_refine: bool,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Args)]
struct ChebArgs {
    #[arg(default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    grid: usize,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 128)]
    dim: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = ExperimentConfig::default().seed)]
    seed: u64,
    /// re_lo,re_hi,im_lo,im_hi (`pi` literals allowed).
    #[arg(long, allow_hyphen_values = true)]
    rect: Option<String>,
    #[arg(long, default_value_t = 1e5)]
    kappa_cutoff: f64,
    #[arg(long, default_value_t = 101)]
    t_count: usize,
    /// Per-trial records; stdout when neither output is given.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Summary statistics; stdout when absent.
    #[arg(long)]
    out_json: Option<PathBuf>,
    /// The curve ‖Ω(A)e^{tA}‖ of trial 0, as CSV.
    #[arg(long)]
    curve_csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExpmArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SchurArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    q_out: PathBuf,
    #[arg(long)]
    t_out: PathBuf,
}

enum Function {
    Exp(Exp),
    Poly(Polynomial<f64>),
}

impl Function {
    fn parse(spec: &str) -> Result<Self, Error> {
        if spec == "exp" {
            return Ok(Function::Exp(Exp));
        }
        if let Some(list) = spec.strip_prefix("poly:") {
            let coeffs = list
                .split(',')
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Function::Poly(Polynomial::new(coeffs)));
        }
        Err(Error::InvalidArgument(format!(
            "unknown function '{spec}' (expected exp or poly:c0,c1,...)"
        )))
    }

    fn as_dyn(&self) -> &dyn AnalyticFunction<f64> {
        match self {
            Function::Exp(f) => f,
            Function::Poly(p) => p,
        }
    }
}

fn read_nodes(spec: &str) -> Result<NodeSet, Error> {
    let spec = spec.trim();
    if spec == "rect16" {
        return Ok(rectangle_nodes());
    }
    if let Some(n) = spec.strip_prefix("cheb:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad node count in '{spec}'")))?;
        return chebyshev_nodes(n, -1.0, 1.0);
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        return parse_node_lines(&text);
    }
    parse_node_list(spec)
}

struct Loaded {
    a: ComplexMatrix,
    nodes: NodeSet,
    f: Function,
}

fn load(p: &Problem) -> Result<Loaded, Error> {
    Ok(Loaded {
        a: read_matrix_market(&p.matrix)?,
        nodes: read_nodes(&p.nodes)?,
        f: Function::parse(&p.function)?,
    })
}

fn emit_matrix(a: &ComplexMatrix, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => write_matrix_market(path, a),
        None => {
            io::stdout().write_all(write_matrix_market_string(a).as_bytes())?;
            Ok(())
        }
    }
}

fn print_json(v: &Value) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn cmd_interp(args: &InterpArgs) -> Result<(), Error> {
    let tol = Tolerances::default();
    let Loaded { a, nodes, f } = load(&args.problem)?;
    let p = divided_differences_with(f.as_dyn(), &nodes, &tol)?;
    let pa = p.eval_matrix(&a)?;
    for w in &p.warnings {
        eprintln!("warning: {w}");
    }
    let mut summary = json!({
        "nodes": nodes.len(),
        "dim": a.rows(),
        "warnings": p.warnings,
    });
    if let Some(path) = &args.reference {
        let reference = read_matrix_market(path)?;
        let err = bounds::true_error(
            &a,
            &nodes,
            f.as_dyn(),
            &reference,
            &SpectralNorm::new(tol.clone()),
            &tol,
        )?;
        summary["true_error"] = json!(err);
    }
    emit_matrix(&pa, args.out.as_deref())?;
    if args.out.is_some() {
        print_json(&summary)
    } else {
        eprintln!("{summary}");
        Ok(())
    }
}

fn cmd_bound(args: &BoundArgs) -> Result<bool, Error> {
    let Loaded { a, nodes, f } = load(&args.problem)?;
    let tol = Tolerances::default();
    let norm: Box<dyn MatrixNorm<f64>> = match args.norm {
        NormChoice::Spectral => Box::new(SpectralNorm::new(tol.clone())),
        NormChoice::Frobenius => Box::new(FrobeniusNorm),
        NormChoice::One => Box::new(OneNorm),
    };
    let methods: Vec<Method> = if args.methods.is_empty() {
        Method::ALL
            .into_iter()
            .filter(|m| *m != Method::Taylor && (f.as_dyn().is_exp() || !m.requires_exp()))
            .collect()
    } else {
        args.methods
            .iter()
            .map(|s| {
                Method::parse(s.trim())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
            })
            .collect::<Result<_, _>>()?
    };
    let opts = BoundOptions {
        t_count: args.t_count,
        per_edge: args.per_edge,
        refine_check: !args.no_refine,
        beta_override: args.beta,
        tol,
    };

    let results: Vec<(Method, Result<bounds::BoundReport, Error>)> = methods
        .iter()
        .map(|&m| {
            (
                m,
                run_method(m, &a, &nodes, f.as_dyn(), &opts, norm.as_ref()),
            )
        })
        .collect();
    let tightest = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|r| r.value))
        .fold(f64::INFINITY, f64::min);
    let mut any_ok = false;
    let mut entries = Vec::new();
    for (m, r) in results {
        match r {
            Ok(rep) => {
                any_ok = true;
                let mut v = serde_json::to_value(&rep).map_err(|e| Error::Io(e.to_string()))?;
                v["tightest"] = json!(rep.value == tightest);
                entries.push(v);
            }
            Err(e) if e.is_usage() => return Err(e),
            Err(e) => {
                eprintln!("{}: {e}", m.label());
                entries.push(json!({ "method": m, "error": e.to_string() }));
            }
        }
    }
    print_json(&Value::Array(entries))?;
    Ok(any_ok)
}

fn cmd_cheb(args: &ChebArgs) -> Result<(), Error> {
    let demo = chebyshev_demo(args.n, args.grid)?;
    match args.format {
        Format::Plain => print!("{}", demo.to_table()),
        Format::Json => {
            print_json(&serde_json::to_value(&demo).map_err(|e| Error::Io(e.to_string()))?)?
        }
    }
    Ok(())
}

fn parse_rect(spec: &str) -> Result<Rect, Error> {
    let v = spec
        .split(',')
        .map(|s| parse_complex(s).map(|z| z.re))
        .collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [re_lo, re_hi, im_lo, im_hi] => Ok(Rect {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }),
        _ => Err(Error::InvalidArgument(format!(
            "--rect needs four values, got '{spec}'"
        ))),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<(), Error> {
    let cfg = ExperimentConfig {
        dim: args.dim,
        trials: args.trials,
        rect: args
            .rect
            .as_deref()
            .map(parse_rect)
            .transpose()?
            .unwrap_or_default(),
        kappa_cutoff: args.kappa_cutoff,
        t_count: args.t_count,
        seed: args.seed,
        tol: Tolerances::default(),
    };
    let run = run_experiment(&cfg)?;
    for (i, e) in &run.failures {
        eprintln!("trial {i} invalid: {e}");
    }
    let stats = stats_json(&cfg, &run.stats)?;
    match &args.out_csv {
        Some(path) => write_records_csv(&run.records, create(path)?)?,
        None if args.out_json.is_some() => write_records_csv(&run.records, io::stdout().lock())?,
        None => {}
    }
    match &args.out_json {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{stats}")?;
            w.flush()?;
        }
        None => println!("{stats}"),
    }
    if let Some(path) = &args.curve_csv {
        let m = trial_matrices(&cfg, 0)?;
        let curve = norms_curve(&m, &rectangle_nodes(), cfg.t_count, &cfg.tol)?;
        write_curve_csv(&curve, create(path)?)?;
    }
    Ok(())
}

fn cmd_expm(args: &ExpmArgs) -> Result<(), Error> {
    let a = read_matrix_market(&args.matrix)?;
    let (e, info) = matrix_exp_info(&a)?;
    eprintln!(
        "pade degree {}, squarings {}",
        info.pade_degree, info.squarings
    );
    emit_matrix(&e, args.out.as_deref())
}

fn cmd_schur(args: &SchurArgs) -> Result<(), Error> {
    let tol = Tolerances::default();
    let a = read_matrix_market(&args.matrix)?;
    let s = schur_with(&a, &tol)?;
    write_matrix_market(&args.q_out, &s.q)?;
    write_matrix_market(&args.t_out, &s.t)?;
    let eigs: Vec<[f64; 2]> = s.t.diagonal().iter().map(|z| [z.re, z.im]).collect();
    print_json(&json!({ "dim": a.rows(), "eigenvalues": eigs }))
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    match &cli.command {
        Command::Interp(a) => cmd_interp(a).map(|_| true),
        Command::Bound(a) => cmd_bound(a),
        Command::ChebDemo(a) => cmd_cheb(a).map(|_| true),
        Command::Experiment(a) => cmd_experiment(a).map(|_| true),
        Command::Expm(a) => cmd_expm(a).map(|_| true),
        Command::Schur(a) => cmd_schur(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
