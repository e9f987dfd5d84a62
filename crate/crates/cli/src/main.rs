use std::fmt::Display;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use extendlab::classify::{self, gallery, gallery_entry, riemann_eval};
use extendlab::extend::{self, OperatorKind};
use extendlab::pwfunc::FuncError;
use extendlab::retraction::{default_g, AnchorPolicy};
use extendlab::{parse_rational, ParseError, Rational, RationalFunc, RationalRetraction, RationalSet, Scalar};

const SCHEMA: &str = "extendlab.report/1";

#[derive(Parser)]
#[command(name = "extendlab", version, about = "Exact extension operators on finite unions of rational intervals")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Auto, global = true)]
    format: Format,
    /// Tolerance for irrational split points and norm enclosures.
    #[arg(long, env = "EXTENDLAB_EPS", default_value = "1/1000000000", global = true)]
    eps: String,
    /// Number of sample points for commands that sample.
    #[arg(long, default_value_t = 1000, global = true)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Auto,
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Set algebra and closed decompositions.
    #[command(subcommand)]
    Set(SetCmd),
    /// Piecewise-polynomial functions.
    #[command(subcommand)]
    Func(FuncCmd),
    /// The retraction onto a set.
    #[command(subcommand)]
    Retract(RetractCmd),
    /// Extension operators and their checks.
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Class reports and the example gallery.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Built-in symbolic examples.
    #[command(subcommand)]
    Demo(DemoCmd),
    /// CSV of (x, f(x)) on a uniform rational grid.
    Sample(SampleArgs),
}

#[derive(Subcommand)]
enum SetCmd {
    /// Print the canonical form.
    Canon {
        #[arg(long = "A")]
        a: String,
    },
    /// A boolean operation.
    Op {
        #[arg(value_enum)]
        op: SetOp,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: Option<String>,
    },
    /// The n-th closed set exhausting A, or its complement with --co.
    Decompose {
        #[arg(long = "A")]
        a: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        co: bool,
    },
    /// Membership, with the first cover index.
    Contains {
        #[arg(long = "A")]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SetOp {
    Union,
    Intersect,
    Difference,
    Complement,
    Closure,
    Interior,
}

#[derive(Subcommand)]
enum FuncCmd {
    Eval {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Supremum of |f| over a subset of the domain.
    Norm {
        #[arg(long)]
        f: String,
        #[arg(long)]
        over: Option<String>,
    },
    Preimage {
        #[arg(long)]
        f: String,
        #[arg(long)]
        target: String,
    },
    /// The n-th continuous approximant.
    Approx {
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: usize,
    },
    /// Pointwise max, min or absolute value.
    Lattice {
        #[arg(value_enum)]
        op: LatticeOp,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: Option<String>,
    },
    /// f o g.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Max,
    Min,
    Abs,
}

#[derive(Args)]
struct RetractionArgs {
    #[arg(long = "A")]
    a: String,
    /// Off-set map; defaults to the anchor policy.
    #[arg(long)]
    g: Option<String>,
    #[arg(long, value_enum, default_value_t = Policy::Nearest)]
    policy: Policy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Nearest,
    Midpoint,
}

#[derive(Subcommand)]
enum RetractCmd {
    Build(RetractionArgs),
    /// Preimage of a closed set, by the case formula and directly.
    Check {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long = "F")]
        closed: String,
    },
    /// H_n and the continuity of phi on it.
    Decompose {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long)]
        n: usize,
    },
    /// The continuous approximant phi_n.
    Approx {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    PhiStar,
    Constant,
}

#[derive(Subcommand)]
enum ExtendCmd {
    PhiStar {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long)]
        f: String,
    },
    Constant {
        #[arg(long)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Also report the preimage of this open set.
        #[arg(long = "U")]
        u: Option<String>,
    },
    /// Check extension, linearity, positivity, unity and isometry.
    Verify {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long, value_enum)]
        op: OpName,
        #[arg(long, required = true)]
        f: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
    },
    /// The closed-chain route to the preimage of an open set.
    Chain {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long)]
        f: String,
        #[arg(long = "U")]
        u: String,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// Continuous approximants of the extension and where samples settle.
    Baire {
        #[command(flatten)]
        r: RetractionArgs,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum ClassifyCmd {
    Report {
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    Gallery {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum DemoCmd {
    /// The Riemann function at rationals.
    Riemann {
        #[arg(long, allow_hyphen_values = true)]
        x: Vec<String>,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    f: String,
    /// Grid start; defaults to the domain's lower end.
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<String>,
}

enum CliError {
    /// Bad input: exit 2.
    Input(String),
    /// A check came out false: exit 1, after printing the report.
    Verification,
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.diagnostic())
    }
}

fn input(e: impl Display) -> CliError {
    CliError::Input(format!("error: {e}"))
}

struct Ctx {
    format: Format,
    eps: Rational,
    samples: usize,
}

impl Ctx {
    /// Prints `text` or the JSON envelope around `data`.
    fn emit(&self, command: &str, text: impl Display, data: impl Serialize) -> Result<(), CliError> {
        match self.format {
            Format::Json => {
                let doc = json!({ "schema": SCHEMA, "command": command, "result": data });
                println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            }
            Format::Csv => return Err(CliError::Input(format!("error: csv output is only available for `sample`, not `{command}`"))),
            Format::Auto | Format::Text => println!("{text}"),
        }
        Ok(())
    }

    fn verdict(&self, ok: bool) -> Result<(), CliError> {
        if ok {
            Ok(())
        } else {
            Err(CliError::Verification)
        }
    }
}

fn labelled<T>(flag: &str, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input(format!("{flag}: {}", e.diagnostic())))
}

fn set_arg(flag: &str, text: &str) -> Result<RationalSet, CliError> {
    labelled(flag, RationalSet::parse(text))
}

fn func_arg(flag: &str, text: &str) -> Result<RationalFunc, CliError> {
    labelled(flag, RationalFunc::parse(text))
}

fn num_arg(flag: &str, text: &str) -> Result<Rational, CliError> {
    labelled(flag, parse_rational(text))
}

fn retraction(args: &RetractionArgs) -> Result<RationalRetraction, CliError> {
    let a = set_arg("--A", &args.a)?;
    let policy = match args.policy {
        Policy::Nearest => AnchorPolicy::NearestMemberEndpoint,
        Policy::Midpoint => AnchorPolicy::MidpointFallback,
    };
    let g = match &args.g {
        Some(text) => func_arg("--g", text)?,
        None if a.is_real_line() => RationalFunc::empty(),
        None => default_g(&a, &policy).map_err(input)?,
    };
    RationalRetraction::build(&a, &g).map_err(input)
}

fn decimal(x: &Rational) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let eps = num_arg("--eps", &cli.eps)?;
    if eps <= Rational::from_int(0) {
        return Err(CliError::Input("error: --eps must be positive".into()));
    }
    if cli.samples < 1 {
        return Err(CliError::Input("error: --samples must be at least 1".into()));
    }
    let ctx = Ctx {
        format: cli.format,
        eps,
        samples: cli.samples,
    };
    match cli.command {
        Command::Set(cmd) => run_set(&ctx, cmd),
        Command::Func(cmd) => run_func(&ctx, cmd),
        Command::Retract(cmd) => run_retract(&ctx, cmd),
        Command::Extend(cmd) => run_extend(&ctx, cmd),
        Command::Classify(cmd) => run_classify(&ctx, cmd),
        Command::Demo(DemoCmd::Riemann { x }) => {
            let points: Vec<Rational> = if x.is_empty() {
                (1..=12).map(|k| Rational::ratio(k, 12)).collect()
            } else {
                x.iter().map(|t| num_arg("--x", t)).collect::<Result<_, _>>()?
            };
            let rows: Vec<(String, String)> = points.iter().map(|p| (p.to_string(), riemann_eval(p).to_string())).collect();
            let text = rows.iter().map(|(x, v)| format!("f({x}) = {v}")).collect::<Vec<_>>().join("\n");
            let data: Vec<Value> = rows.iter().map(|(x, v)| json!({ "x": x, "value": v })).collect();
            ctx.emit("demo riemann", text, json!({ "entry": gallery_entry("riemann"), "values": data }))
        }
        Command::Sample(args) => run_sample(&ctx, args),
    }
}

fn run_set(ctx: &Ctx, cmd: SetCmd) -> Result<(), CliError> {
    match cmd {
        SetCmd::Canon { a } => {
            let s = set_arg("--A", &a)?;
            ctx.emit("set canon", &s, json!({ "set": s, "closed": s.is_closed(), "open": s.is_open() }))
        }
        SetCmd::Op { op, a, b } => {
            let s = set_arg("--A", &a)?;
            let other = || -> Result<RationalSet, CliError> {
                let text = b.as_deref().ok_or_else(|| CliError::Input("error: this operation needs --B".into()))?;
                set_arg("--B", text)
            };
            let out = match op {
                SetOp::Union => s.union(&other()?),
                SetOp::Intersect => s.intersect(&other()?),
                SetOp::Difference => s.difference(&other()?),
                SetOp::Complement => s.complement(),
                SetOp::Closure => s.closure(),
                SetOp::Interior => s.interior(),
            };
            ctx.emit("set op", &out, json!({ "set": out }))
        }
        SetCmd::Decompose { a, n, co } => {
            let s = set_arg("--A", &a)?;
            let out = if co { s.gdelta_codecomposition(n) } else { s.fsigma_decomposition(n) }.map_err(input)?;
            ctx.emit("set decompose", &out, json!({ "n": n, "complement_side": co, "set": out }))
        }
        SetCmd::Contains { a, x } => {
            let s = set_arg("--A", &a)?;
            let x = num_arg("--x", &x)?;
            let inside = s.contains(&x);
            let index = if inside { s.first_cover_index(&x, ctx.samples) } else { None };
            let text = match (inside, index) {
                (true, Some(n)) => format!("{x} is in {s} (first closed set: n = {n})"),
                (true, None) => format!("{x} is in {s}"),
                (false, _) => format!("{x} is not in {s}"),
            };
            ctx.emit("set contains", text, json!({ "x": x.to_string(), "member": inside, "first_cover_index": index }))
        }
    }
}

fn run_func(ctx: &Ctx, cmd: FuncCmd) -> Result<(), CliError> {
    match cmd {
        FuncCmd::Eval { f, x } => {
            let f = func_arg("--f", &f)?;
            let x = num_arg("--x", &x)?;
            let v = f.eval(&x).map_err(input)?;
            ctx.emit("func eval", &v, json!({ "x": x.to_string(), "value": v.to_string(), "decimal": decimal(&v) }))
        }
        FuncCmd::Norm { f, over } => {
            let f = func_arg("--f", &f)?;
            let over = match over {
                Some(text) => set_arg("--over", &text)?,
                None => f.domain().clone(),
            };
            let n = f.sup_norm(&over, &ctx.eps).map_err(input)?;
            let text = match &n.exact {
                Some(v) => format!("{v} (exact, {})", if n.attained { "attained" } else { "not attained" }),
                None => format!("in [{}, {}]", n.lo, n.hi),
            };
            ctx.emit("func norm", text, &n)
        }
        FuncCmd::Preimage { f, target } => {
            let f = func_arg("--f", &f)?;
            let t = set_arg("--target", &target)?;
            let r = f.preimage_tol(&t, &ctx.eps);
            let text = if r.precision.is_exact() {
                format!("{} EXACT", r.set)
            } else {
                format!("{} APPROX (inner {})", r.set, r.inner)
            };
            ctx.emit("func preimage", text, &r)
        }
        FuncCmd::Approx { f, n } => {
            let f = func_arg("--f", &f)?;
            let out = f.continuous_approximation(n).map_err(input)?;
            ctx.emit("func approx", &out, json!({ "n": n, "function": out, "continuous": out.is_continuous() }))
        }
        FuncCmd::Lattice { op, f, g } => {
            let f = func_arg("--f", &f)?;
            let other = || -> Result<RationalFunc, CliError> {
                let text = g.as_deref().ok_or_else(|| CliError::Input("error: this operation needs --g".into()))?;
                func_arg("--g", text)
            };
            let out = match op {
                LatticeOp::Max => f.lattice_max_tol(&other()?, &ctx.eps),
                LatticeOp::Min => f.lattice_min_tol(&other()?, &ctx.eps),
                LatticeOp::Abs => Ok(f.abs_tol(&ctx.eps)),
            }
            .map_err(input)?;
            let mode = if out.precision.is_exact() { "EXACT" } else { "APPROX" };
            ctx.emit(
                "func lattice",
                format!("{} {mode}", out.func),
                json!({ "function": out.func, "precision": out.precision }),
            )
        }
        FuncCmd::Compose { f, g } => {
            let f = func_arg("--f", &f)?;
            let g = func_arg("--g", &g)?;
            let out = f.compose(&g).map_err(|e| match e {
                FuncError::RangeViolation { witness, value } => {
                    CliError::Input(format!("error: g({witness}) = {value} is outside the domain of f"))
                }
                other => input(other),
            })?;
            ctx.emit("func compose", &out, json!({ "function": out }))
        }
    }
}

fn run_retract(ctx: &Ctx, cmd: RetractCmd) -> Result<(), CliError> {
    match cmd {
        RetractCmd::Build(args) => {
            let r = retraction(&args)?;
            ctx.emit("retract build", format!("phi = {}", r.phi()), &r)
        }
        RetractCmd::Check { r, closed } => {
            let r = retraction(&r)?;
            let f = set_arg("--F", &closed)?;
            let out = r.flb_preimage(&f).map_err(input)?;
            let text = format!(
                "formula: {}\ndirect:  {}\n{}",
                out.formula,
                out.direct,
                if out.agree { "agree" } else { "DISAGREE" }
            );
            ctx.emit("retract check", text, &out)?;
            ctx.verdict(out.agree)
        }
        RetractCmd::Decompose { r, n } => {
            let r = retraction(&r)?;
            let w = r.pc_witness(n).map_err(input)?;
            let text = format!(
                "H_{n} = {}\nphi continuous on H_{n}: {}",
                w.on,
                if w.is_continuous() { "yes" } else { "no" }
            );
            ctx.emit("retract decompose", text, &w)?;
            ctx.verdict(w.is_continuous())
        }
        RetractCmd::Approx { r, n } => {
            let r = retraction(&r)?;
            let out = r.retraction_approx(n).map_err(input)?;
            ctx.emit("retract approx", &out, json!({ "n": n, "function": out, "continuous": out.is_continuous() }))
        }
    }
}

fn status_word(c: &extend::Check) -> String {
    let word = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    match &c.witness {
        Some(w) => format!("{word} ({w})"),
        None => word,
    }
}

fn run_extend(ctx: &Ctx, cmd: ExtendCmd) -> Result<(), CliError> {
    match cmd {
        ExtendCmd::PhiStar { r, f } => {
            let r = retraction(&r)?;
            let f = func_arg("--f", &f)?;
            let out = extend::phi_star(&f, &r).map_err(input)?;
            ctx.emit("extend phi-star", &out, json!({ "function": out }))
        }
        ExtendCmd::Constant { f, x0, u } => {
            let f = func_arg("--f", &f)?;
            let x0 = num_arg("--x0", &x0)?;
            let out = extend::constant_extend(&f, &x0).map_err(input)?;
            match u {
                None => ctx.emit("extend constant", &out, json!({ "function": out })),
                Some(u) => {
                    let u = set_arg("--U", &u)?;
                    let pre = extend::constant_extend_preimage(&f, &x0, &u).map_err(input)?;
                    let text = format!("{out}\ncase {}: preimage {}", pre.case, pre.formula);
                    ctx.emit("extend constant", text, json!({ "function": out, "preimage": pre }))?;
                    ctx.verdict(pre.agree)
                }
            }
        }
        ExtendCmd::Verify { r, op, f, x0 } => {
            let fs: Vec<RationalFunc> = f.iter().map(|t| func_arg("--f", t)).collect::<Result<_, _>>()?;
            let kind = match op {
                OpName::PhiStar => OperatorKind::PhiStar(retraction(&r)?),
                OpName::Constant => {
                    let a = set_arg("--A", &r.a)?;
                    let x0 = match x0 {
                        Some(t) => num_arg("--x0", &t)?,
                        None => a.sample_point().ok_or_else(|| CliError::Input("error: --A is empty".into()))?,
                    };
                    OperatorKind::constant_anchor(&a, x0).map_err(input)?
                }
            };
            let coeffs = vec![
                (Rational::from_int(2), Rational::from_int(-3)),
                (Rational::ratio(1, 2), Rational::from_int(5)),
            ];
            let report = extend::verify_operator(&kind, &fs, &coeffs, &ctx.eps).map_err(input)?;
            let mut text = format!("operator: {}\n", report.operator);
            for (name, c) in [
                ("extension", &report.extension),
                ("linear", &report.linear),
                ("positive", &report.positive),
                ("unity", &report.unity),
                ("isometry", &report.isometry),
            ] {
                text.push_str(&format!("{name:<10} {}\n", status_word(c)));
            }
            for pair in &report.norms {
                let show = |n: &extendlab::pwfunc::NormResult<Rational>| match &n.exact {
                    Some(v) => v.to_string(),
                    None => format!("[{}, {}]", n.lo, n.hi),
                };
                text.push_str(&format!("norm {}: {} on A, {} on R\n", pair.function, show(&pair.on_set), show(&pair.on_line)));
            }
            ctx.emit("extend verify", text.trim_end(), &report)?;
            ctx.verdict(report.passed())
        }
        ExtendCmd::Chain { r, f, u, steps } => {
            let r = retraction(&r)?;
            let f = func_arg("--f", &f)?;
            let u = set_arg("--U", &u)?;
            let trace = extend::phi_star_preimage_chain(&f, &r, &u, steps).map_err(input)?;
            let mut text = format!("f^-1(U) = {}\n", trace.preimage);
            for s in &trace.steps {
                text.push_str(&format!("n = {}: K = {}, union = {}\n", s.n, s.k, s.union));
            }
            for (i, s) in trace.stages.iter().enumerate() {
                text.push_str(&format!("stage {}: piece {} gives {}, union = {}\n", i + 1, s.piece, s.limit, s.union));
            }
            text.push_str(&format!("direct = {}\n", trace.direct));
            text.push_str(&match trace.stabilization_index {
                Some(n) => format!("stabilized at stage {n}"),
                None => "DID NOT STABILIZE to the direct preimage".into(),
            });
            ctx.emit("extend chain", text, &trace)?;
            ctx.verdict(trace.agrees())
        }
        ExtendCmd::Baire { r, f, n_max } => {
            let r = retraction(&r)?;
            let f = func_arg("--f", &f)?;
            let points = grid_over(&hull_of(r.set()), ctx.samples);
            let report = extend::baire_witness(&f, &r, n_max, &points).map_err(input)?;
            let settled = report.samples.iter().filter(|s| s.index.is_some()).count();
            let in_bound = report.samples.iter().filter(|s| s.within_bound()).count();
            let text = format!(
                "route: {}\napproximants with jumps: {:?}\nsamples settled by n = {n_max}: {settled}/{}\nwithin the distance bound: {in_bound}/{}\npending (bound beyond n = {n_max}): {}",
                serde_json::to_value(report.route).unwrap().as_str().unwrap_or_default(),
                report.discontinuous,
                report.samples.len(),
                report.samples.len(),
                report.pending()
            );
            ctx.emit("extend baire", text, &report)?;
            ctx.verdict(report.passed())
        }
    }
}

/// A bounded window around a set: its hull widened by one on each side.
fn hull_of(a: &RationalSet) -> (Rational, Rational) {
    let one = Rational::from_int(1);
    let lo = a.pieces().first().and_then(|p| p.lo().value().cloned());
    let hi = a.pieces().last().and_then(|p| p.hi().value().cloned());
    match (lo, hi) {
        (Some(lo), Some(hi)) => (lo - one.clone(), hi + one),
        (Some(lo), None) => (lo.clone() - one.clone(), lo + Rational::from_int(3)),
        (None, Some(hi)) => (hi.clone() - Rational::from_int(3), hi + one),
        (None, None) => (Rational::from_int(-2), Rational::from_int(2)),
    }
}

/// `count` evenly spaced rationals from `lo` to `hi`.
fn grid_over((lo, hi): &(Rational, Rational), count: usize) -> Vec<Rational> {
    if count == 1 {
        return vec![lo.clone()];
    }
    let step = (hi.clone() - lo.clone()) / Rational::from_int(count as i64 - 1);
    (0..count)
        .map(|k| lo.clone() + step.clone() * Rational::from_int(k as i64))
        .collect()
}

fn run_classify(ctx: &Ctx, cmd: ClassifyCmd) -> Result<(), CliError> {
    match cmd {
        ClassifyCmd::Report { f, levels } => {
            let f = func_arg("--f", &f)?;
            let report = classify::classify(&f, levels).map_err(input)?;
            let mut text = format!(
                "continuous: {}{}\n",
                report.continuity.continuous,
                if report.continuity.jumps.is_empty() {
                    String::new()
                } else {
                    format!(" (jumps at {})", join(&report.continuity.jumps))
                }
            );
            match &report.piecewise {
                Some(pc) => {
                    text.push_str(&format!("piecewise continuous: {}\n", pc.piecewise_continuous));
                    for level in &pc.levels {
                        text.push_str(&format!("  X_{} = {}\n", level.n, level.set));
                    }
                }
                None => text.push_str("piecewise continuous: not judged (domain is not the whole line)\n"),
            }
            text.push_str(&format!(
                "open preimages F_sigma: {} ({} witnessed)\nclosed preimages F_sigma: {} ({} witnessed)",
                report.fcb_witnessed,
                report.open_preimages.len(),
                report.flb_witnessed,
                report.closed_preimages.len()
            ));
            ctx.emit("classify report", text, &report)
        }
        ClassifyCmd::Gallery { name } => {
            let entries = match name {
                Some(n) => vec![gallery_entry(&n).ok_or_else(|| CliError::Input(format!("error: no gallery entry named {n:?}")))?],
                None => gallery(),
            };
            let mut text = String::new();
            for e in &entries {
                text.push_str(&format!("{}: {}\n", e.name, e.definition));
                for c in &e.classifications {
                    let verdict = if c.member { "yes" } else { "no" };
                    text.push_str(&format!("  {}: {verdict}; {}\n", c.class, c.reason));
                }
            }
            ctx.emit("classify gallery", text.trim_end(), &entries)
        }
    }
}

fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn run_sample(ctx: &Ctx, args: SampleArgs) -> Result<(), CliError> {
    let f = func_arg("--f", &args.f)?;
    let (dlo, dhi) = hull_of(f.domain());
    let lo = match &args.lo {
        Some(t) => num_arg("--lo", t)?,
        None => f.domain().pieces().first().and_then(|p| p.lo().value().cloned()).unwrap_or(dlo),
    };
    let hi = match &args.hi {
        Some(t) => num_arg("--hi", t)?,
        None => f.domain().pieces().last().and_then(|p| p.hi().value().cloned()).unwrap_or(dhi),
    };
    if lo > hi {
        return Err(CliError::Input(format!("error: --lo {lo} is above --hi {hi}")));
    }
    let rows: Vec<(Rational, Rational)> = grid_over(&(lo, hi), ctx.samples)
        .into_iter()
        .filter_map(|x| f.eval(&x).ok().map(|v| (x, v)))
        .collect();
    match ctx.format {
        Format::Json => {
            let data: Vec<Value> = rows
                .iter()
                .map(|(x, v)| json!({ "x": x.to_string(), "value": v.to_string() }))
                .collect();
            let doc = json!({ "schema": SCHEMA, "command": "sample", "result": data });
            println!("{}", serde_json::to_string_pretty(&doc).expect("rows serialize"));
        }
        _ => {
            println!("x_rational,x_decimal,value_rational,value_decimal");
            for (x, v) in &rows {
                println!("{x},{},{v},{}", decimal(x), decimal(v));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(1),
        Err(CliError::Input(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}
