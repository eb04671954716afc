//! Argument handling and report rendering for the `cubic-dual` binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_dual::classify::{classify_rational, ClassificationReport, ClassifyConfig, Label};
use cubic_dual::families::{generate, FamilySpec, Lemma22Variant, DEFAULT_L};
use cubic_dual::field::{PrimeField, DEFAULT_PRIME};
use cubic_dual::loci::sampler::{parse_sidecar, Parameterization};
use cubic_dual::poly::{format_polynomial, parse_polynomial, MultiPoly};
use cubic_dual::Error;
use num_rational::BigRational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cubic-dual", version, about = "Dual defect and secant/join structure of cubic hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the invariants of a cubic: defect, cone and Hessian status, Sing(X) and Z.
    Analyze(RunArgs),
    /// Assign one of the labels Cone, DefectZero, I, II, III or Unresolved.
    Classify(RunArgs),
    /// Write the polynomial of a named family.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyName {
    PerazzoP4,
    JoinQuadrics,
    Det3Symmetric,
    Det3General,
    Fermat,
    ConeOver,
    Lemma22N3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    A,
    B,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Ambient dimension for `fermat`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Unused variables added by `cone_over`.
    #[arg(long, default_value_t = 1)]
    pub extra: usize,
    /// The family wrapped by `cone_over`.
    #[arg(long, value_enum)]
    pub inner: Option<FamilyName>,
    #[arg(long, value_enum, default_value = "a")]
    pub variant: VariantArg,
    /// Coefficients of the linear form l on x0..x3, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub l: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Polynomial file; omit when `--family` is given.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    pub params: FamilyArgs,
    #[arg(long, env = "CUBIC_DUAL_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub fibers: usize,
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
    /// Parameterizations of the components of Sing(X), one per line.
    #[arg(long)]
    pub sing: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Worker threads for fiber sampling; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    pub params: FamilyArgs,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// An input problem: message for the user, exit code 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

fn family_spec(name: FamilyName, a: &FamilyArgs) -> Result<FamilySpec, InputError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| InputError(format!("{name:?} needs --{flag}")));
    Ok(match name {
        FamilyName::PerazzoP4 => FamilySpec::PerazzoP4,
        FamilyName::JoinQuadrics => FamilySpec::JoinQuadrics { p: need(a.p, "p")?, q: need(a.q, "q")? },
        FamilyName::Det3Symmetric => FamilySpec::Det3Symmetric,
        FamilyName::Det3General => FamilySpec::Det3General,
        FamilyName::Fermat => FamilySpec::Fermat { n: need(a.n, "n")? },
        FamilyName::ConeOver => {
            let inner = a.inner.ok_or_else(|| InputError("cone_over needs --inner".into()))?;
            if inner == FamilyName::ConeOver {
                return Err(InputError("cone_over cannot wrap itself; raise --extra instead".into()));
            }
            FamilySpec::ConeOver { inner: Box::new(family_spec(inner, a)?), extra: a.extra }
        }
        FamilyName::Lemma22N3 => {
            let l = match &a.l {
                Some(v) => [v[0], v[1], v[2], v[3]],
                None => DEFAULT_L,
            };
            let variant = match a.variant {
                VariantArg::A => Lemma22Variant::A,
                VariantArg::B => Lemma22Variant::B,
            };
            FamilySpec::Lemma22N3 { variant, l }
        }
    })
}

fn read(path: &PathBuf) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// The polynomial, the known Sing components and a description of the input.
pub fn load_input(args: &RunArgs) -> Result<(MultiPoly<BigRational>, Vec<Parameterization>, String), InputError> {
    let (poly, mut components, what) = match (&args.input, args.family) {
        (Some(_), Some(_)) => return Err(InputError("give either an input file or --family, not both".into())),
        (None, None) => return Err(InputError("no input: give a polynomial file or --family".into())),
        (Some(path), None) => {
            let text = read(path)?;
            let poly = parse_polynomial(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            (poly, Vec::new(), path.display().to_string())
        }
        (None, Some(name)) => {
            let spec = family_spec(name, &args.params)?;
            let fam = generate(&spec)?;
            (fam.poly, fam.components, spec.to_string())
        }
    };
    if let Some(path) = &args.sing {
        let text = read(path)?;
        components = parse_sidecar(&text, poly.num_vars()).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok((poly, components, what))
}

pub fn run_config(args: &RunArgs) -> Result<ClassifyConfig, InputError> {
    if args.fibers < 3 {
        return Err(InputError(format!("--fibers must be at least 3, got {}", args.fibers)));
    }
    if args.trials == 0 {
        return Err(InputError("--trials must be positive".into()));
    }
    Ok(ClassifyConfig { seed: args.seed, fibers: args.fibers, trials: args.trials, ..ClassifyConfig::default() })
}

/// Runs the pipeline for `analyze` and `classify`.
pub fn report_for(args: &RunArgs) -> Result<(ClassificationReport, String), InputError> {
    let field = PrimeField::new(args.prime)?;
    let config = run_config(args)?;
    let (poly, components, what) = load_input(args)?;
    let report = classify_rational(&poly, &components, field, &config)?;
    Ok((report, what))
}

/// The JSON form of a report, with the input description added.
pub fn report_json(report: &ClassificationReport, input: &str) -> String {
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v.as_object_mut().unwrap().insert("input".into(), input.into());
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "?".to_string(), |x| x.to_string())
}

/// Human-readable invariants.
pub fn render_analysis(r: &ClassificationReport, input: &str, verbose: u8) -> String {
    let e = &r.evidence;
    let mut s = String::new();
    let _ = writeln!(s, "input: {input}");
    let _ = writeln!(s, "prime: {}  seed: {}", e.prime, e.seed);
    match &e.cone {
        Some(c) => {
            let _ = writeln!(s, "cone: yes (vertex space of dimension {}, vertex {:?})", c.vertex_dim, c.vertex);
        }
        None => {
            let _ = writeln!(s, "cone: no");
        }
    }
    let _ = writeln!(
        s,
        "Hessian: {} ({} trials, failure bound {:e})",
        if r.hessian_vanishes { "vanishes" } else { "nonzero" },
        e.hessian.trials,
        e.hessian.failure_bound
    );
    if let Some(d) = &e.defect {
        let _ = writeln!(s, "dual defect: {} (Hessian ranks {:?}, chart defect {})", d.delta, d.ranks, opt(d.chart_delta));
    }
    if let Some(sing) = &e.sing {
        let _ = writeln!(s, "dim Sing(X): {} ({}; per component {:?})", opt(sing.max), sing.method, sing.per_component);
        if let Some(en) = &sing.enumerated {
            let _ = writeln!(s, "  tiny-prime counts: {:?}", en.counts);
        }
    }
    if let Some(z) = &e.z {
        let _ = writeln!(
            s,
            "Z: {} samples from {} fibers, dim <Z> = {}, dim Z = {}, kappa = {} ({})",
            z.samples,
            z.fibers_used,
            z.span_dim,
            opt(z.est_dim),
            z.kappa,
            z.kappa_method
        );
        for fs in &z.forms {
            if !fs.modulo_span.is_empty() {
                let _ = writeln!(s, "  degree {} forms on <Z>: {}", fs.degree, fs.modulo_span.join("; "));
            }
        }
        for (i, c) in z.clusters.iter().enumerate().filter(|_| z.kappa > 1) {
            let _ = writeln!(
                s,
                "  cluster {i}: {} points, dim {}, span dim {}, quadrics {}",
                c.points,
                opt(c.dim),
                c.span_dim,
                c.reduced_quadrics.join("; ")
            );
        }
    }
    if verbose > 0 {
        for t in &e.terracini {
            let _ = writeln!(s, "  {}({}) has dimension {}", t.kind, t.sources.join(", "), t.dimension);
        }
        for w in &e.exclusivity {
            let _ = writeln!(s, "  not {:?}: {}", w.excludes, w.witness);
        }
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn render_label(r: &ClassificationReport) -> String {
    let mut s = format!("label: {:?}\n", r.label);
    let _ = writeln!(
        s,
        "delta: {}  dim Sing: {}  kappa: {}  dim <Z>: {}",
        opt(r.delta),
        opt(r.sing_dim),
        opt(r.kappa),
        opt(r.z_span_dim)
    );
    if let Some(reason) = &r.evidence.unresolved_reason {
        let _ = writeln!(s, "reason: {reason}");
    }
    s
}

fn exit_for(r: &ClassificationReport) -> i32 {
    if r.label == Label::Unresolved {
        EXIT_UNRESOLVED
    } else {
        EXIT_OK
    }
}

/// Executes a parsed command, writing to `out` and `err`; returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Analyze(args) | Command::Classify(args) => report_for(args).map(|(r, what)| {
            let text = if args.json {
                report_json(&r, &what)
            } else if matches!(cli.command, Command::Analyze(_)) {
                render_analysis(&r, &what, args.verbose)
            } else {
                let mut t = render_label(&r);
                if args.verbose > 0 {
                    t.push_str(&render_analysis(&r, &what, args.verbose));
                }
                t
            };
            (text, exit_for(&r))
        }),
        Command::Gen(g) => family_spec(g.family, &g.params)
            .and_then(|spec| Ok(format_polynomial(&generate(&spec)?.poly)))
            .and_then(|text| match &g.output {
                Some(path) => std::fs::write(path, &text)
                    .map(|_| (String::new(), EXIT_OK))
                    .map_err(|e| InputError(format!("{}: {e}", path.display()))),
                None => Ok((text, EXIT_OK)),
            }),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

/// Parses `args` (including the program name) and executes; clap usage
/// errors map to exit code 1.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            if let Command::Analyze(a) | Command::Classify(a) = &cli.command {
                if let Some(t) = a.threads {
                    // the global pool can only be set once per process
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
                }
            }
            execute(&cli, out, err)
        }
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            code
        }
    }
}
