use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use coxforge_core::arith::parse_rat;
use coxforge_core::blowup::{
    classify_minimal_projection, decompose_degree1, effective_decompose, enumerate_minimal, minimal_shape,
    project_class, BlowupContext, EffectiveCone, DEFAULT_SEARCH_BUDGET,
};
use coxforge_core::lattice::{anticanonical_class, degree};
use coxforge_core::nagata::{build_f, divisor_class_of, is_invariant, odd_subsets, torus_weight, NagataParams};
use coxforge_core::poly::MultiPoly;
use coxforge_core::roots::{
    degree_one_divisors, dynkin_label, is_finite_type, is_minuscule, simple_roots, weyl_orbit, DEFAULT_ORBIT_CAP,
};
use coxforge_core::sections::{
    form_space, generation_test, mult_along_curve, mult_at_point, section_of, GenerationCaps, PointConfig,
    DEFAULT_MONOMIAL_CAP, DEFAULT_MULTISET_CAP,
};
use coxforge_core::verify::{catalog, run_criterion, Profile};
use coxforge_core::{DivisorClass, Error, LatticeContext};

const EXIT_ERROR: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "coxforge", version, about = "Exact computations on Cox rings of blown-up projective spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Orbit and search cap.
    #[arg(long, global = true, env = "COXFORGE_CAP")]
    cap: Option<usize>,

    /// Cap on the number of monomials in a section space.
    #[arg(long, global = true, default_value_t = DEFAULT_MONOMIAL_CAP)]
    monomial_cap: usize,

    /// Seed for random point parameters; standard parameters 1..r when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Dynkin type, rank and anticanonical degree of ctx(a,b,c).
    Classify(SpaceArgs),
    /// Simple roots.
    Roots(SpaceArgs),
    /// Weyl orbit of a class, E_r by default.
    Orbit {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// All degree-one classes.
    DegreeOne(SpaceArgs),
    /// Whether the orbit of E_r is a full weight system.
    Minuscule(SpaceArgs),
    /// Minimal divisors on the blow-up of P^n in r points.
    Minimal { n: usize, r: usize },
    /// Projection from the first point.
    Project {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Table decomposition into hyperplane classes, or into degree-one
    /// classes with --degree-one.
    Decompose {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        degree_one: bool,
    },
    /// Effective cone membership with a violated inequality as certificate.
    Member {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Dimension of the space of sections.
    H0 {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// The unique section (up to scale) of a class with h0 = 1.
    Section {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Multiplicities of the section of a class at each point and along the curve.
    Mult {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Whether products of minimal-divisor sections span H0(D).
    CheckGeneration {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = DEFAULT_MULTISET_CAP)]
        multiset_cap: usize,
    },
    /// Determinantal invariants of the Nagata action.
    #[command(subcommand)]
    Invariant(InvariantCommand),
    /// Run the acceptance checks.
    Verify {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
    },
}

#[derive(Subcommand)]
enum InvariantCommand {
    /// F_I as a polynomial.
    Build(InvariantArgs),
    /// Invariance of F_I, or of every F_I with --all.
    Check {
        #[command(flatten)]
        args: InvariantArgs,
        #[arg(long)]
        all: bool,
    },
    /// Divisor class of F_I.
    Class(InvariantArgs),
}

#[derive(Args)]
struct InvariantArgs {
    /// Odd index set, 1-based.
    #[arg(short = 'I', long = "indices", value_delimiter = ',')]
    indices: Vec<usize>,
    /// Dimension n; the number of points is n + 3.
    #[arg(long, conflicts_with = "r")]
    n: Option<usize>,
    /// Number of points.
    #[arg(long)]
    r: Option<usize>,
    /// Point parameters a_1..a_r.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    params: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Args)]
struct SpaceArgs {
    /// Lattice context a,b,c.
    #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with_all = ["n", "r"])]
    ctx: Option<Vec<u32>>,
    /// Blow-up of P^n.
    #[arg(long)]
    n: Option<usize>,
    /// Number of points; at least n + 3, defaulting to that or the length of --m.
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Args)]
struct ClassArgs {
    /// Divisor class as JSON.
    #[arg(long, conflicts_with_all = ["h", "d", "m"])]
    class: Option<String>,
    /// Coefficients of H_1..H_{a-1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "d")]
    h: Option<Vec<BigInt>>,
    /// Coefficient of H when a = 2.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<BigInt>,
    /// Multiplicities m_1..m_r in D = sum h H - sum m E.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m: Option<Vec<BigInt>>,
}

#[derive(Args)]
struct PointArgs {
    /// Point parameters a_1..a_r as rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "points")]
    params: Option<Vec<String>>,
    /// Point configuration as JSON.
    #[arg(long)]
    points: Option<String>,
}

struct Output {
    json: Value,
    table: String,
}

impl Output {
    fn new(json: Value, table: impl Into<String>) -> Self {
        Self { json, table: table.into() }
    }

    fn classes(classes: &[DivisorClass]) -> Self {
        Self::new(
            Value::Array(classes.iter().map(DivisorClass::to_json).collect()),
            lines(classes.iter()),
        )
    }
}

enum Failure {
    Lib(Error),
    Checks(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = std::result::Result<Output, Failure>;

fn lines<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
}

fn parse_json(s: &str) -> Result<Value, Error> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

impl SpaceArgs {
    fn lattice(&self, m_len: Option<usize>) -> Result<Option<LatticeContext>, Error> {
        if let Some(abc) = &self.ctx {
            let [a, b, c] = abc[..] else {
                return Err(Error::Parse("--ctx takes three integers a,b,c".into()));
            };
            return LatticeContext::new(a, b, c).map(Some);
        }
        let Some(n) = self.n else {
            if self.r.is_some() {
                return Err(Error::Parse("--r needs --n".into()));
            }
            return Ok(None);
        };
        let r = self.r.unwrap_or_else(|| m_len.unwrap_or(0).max(n + 3));
        BlowupContext::new(n, r).map(|bc| Some(bc.lattice()))
    }
}

impl ClassArgs {
    fn given(&self) -> bool {
        self.class.is_some() || self.h.is_some() || self.d.is_some() || self.m.is_some()
    }

    fn resolve(&self, space: &SpaceArgs) -> Result<DivisorClass, Error> {
        if let Some(s) = &self.class {
            let d = DivisorClass::from_json(&parse_json(s)?)?;
            if let Some(ctx) = space.lattice(None)? {
                if *d.ctx() != ctx {
                    return Err(Error::ContextMismatch(d.ctx().to_string(), ctx.to_string()));
                }
            }
            return Ok(d);
        }
        let mut m = self.m.clone().unwrap_or_default();
        let ctx = space
            .lattice(Some(m.len()))?
            .ok_or_else(|| Error::Parse("give --ctx a,b,c or --n N".into()))?;
        if space.n.is_some() && space.r.is_none() {
            m.resize(ctx.r(), BigInt::from(0));
        }
        let h = match (&self.h, &self.d) {
            (Some(h), _) => h.clone(),
            (None, Some(d)) => vec![d.clone()],
            (None, None) => vec![BigInt::from(0); ctx.factors()],
        };
        DivisorClass::new(ctx, h, m)
    }

    fn required(&self, space: &SpaceArgs) -> Result<DivisorClass, Error> {
        if !self.given() {
            return Err(Error::Parse("a class is required: --class JSON or --d/--h with --m".into()));
        }
        self.resolve(space)
    }
}

fn blowup_of(ctx: &LatticeContext) -> Result<BlowupContext, Error> {
    if ctx.a() != 2 {
        return Err(Error::NotSingleFactor(ctx.a()));
    }
    BlowupContext::new(ctx.c() as usize - 1, ctx.r())
}

fn parse_params(ps: &[String]) -> Result<Vec<coxforge_core::arith::Rat>, Error> {
    ps.iter().map(|p| parse_rat(p)).collect()
}

impl PointArgs {
    fn config(&self, bc: &BlowupContext, seed: Option<u64>) -> Result<PointConfig, Error> {
        let cfg = if let Some(s) = &self.points {
            PointConfig::from_json(&parse_json(s)?)?
        } else if let Some(ps) = &self.params {
            PointConfig::new(bc.n(), bc.r(), parse_params(ps)?)?
        } else if let Some(seed) = seed {
            PointConfig::seeded(bc.n(), bc.r(), seed)?
        } else {
            PointConfig::standard(bc.n(), bc.r())?
        };
        if cfg.n() != bc.n() || cfg.r() != bc.r() {
            return Err(Error::ContextMismatch(cfg.blowup().to_string(), bc.to_string()));
        }
        Ok(cfg)
    }
}

fn required_ctx(space: &SpaceArgs) -> Result<LatticeContext, Error> {
    space
        .lattice(None)?
        .ok_or_else(|| Error::Parse("give --ctx a,b,c or --n N".into()))
}

impl InvariantArgs {
    fn params(&self, seed: Option<u64>) -> Result<NagataParams, Error> {
        if let Some(ps) = &self.params {
            let np = NagataParams::new(parse_params(ps)?)?;
            if self.r.is_some_and(|r| r != np.r()) || self.n.is_some_and(|n| n + 3 != np.r()) {
                return Err(Error::Shape("--params length disagrees with --n/--r".into()));
            }
            return Ok(np);
        }
        let r = match (self.n, self.r) {
            (Some(n), _) => n + 3,
            (None, Some(r)) => r,
            (None, None) => return Err(Error::Parse("give --n, --r or --params".into())),
        };
        match seed {
            Some(s) => NagataParams::seeded(r, s),
            None => NagataParams::standard(r),
        }
    }
}

fn poly_output(p: &MultiPoly) -> Output {
    Output::new(p.to_json(), p.to_string())
}

fn run(cli: &Cli) -> Run {
    let cap = cli.cap.unwrap_or(DEFAULT_ORBIT_CAP);
    let seed = cli.seed;
    let out = match &cli.command {
        Command::Classify(space) => {
            let ctx = required_ctx(space)?;
            let label = dynkin_label(ctx.a(), ctx.b(), ctx.c());
            let finite = is_finite_type(ctx.a(), ctx.b(), ctx.c());
            let deg = degree(&anticanonical_class(&ctx)).ok();
            let deg_str = deg.as_ref().map(coxforge_core::arith::format_rat);
            Output::new(
                json!({
                    "ctx": ctx.to_json(),
                    "dynkin": label.to_string(),
                    "finite": finite,
                    "rank": ctx.rank(),
                    "anticanonical_degree": deg_str,
                }),
                format!(
                    "ctx {ctx}\ntype {label}\nfinite {finite}\nrank {}\ndegree(-K) {}",
                    ctx.rank(),
                    deg_str.as_deref().unwrap_or("undefined")
                ),
            )
        }
        Command::Roots(space) => Output::classes(simple_roots(&required_ctx(space)?).simple_roots()),
        Command::Orbit { space, class } => {
            let d = if class.given() {
                class.resolve(space)?
            } else {
                let ctx = required_ctx(space)?;
                ctx.exceptional(ctx.r())
            };
            Output::classes(&weyl_orbit(&d, &simple_roots(d.ctx()), cap)?)
        }
        Command::DegreeOne(space) => Output::classes(&degree_one_divisors(&required_ctx(space)?, cap)?),
        Command::Minuscule(space) => {
            let ctx = required_ctx(space)?;
            let yes = is_minuscule(&ctx, cap)?;
            Output::new(json!({"ctx": ctx.to_json(), "minuscule": yes}), yes.to_string())
        }
        Command::Minimal { n, r } => Output::classes(&enumerate_minimal(&BlowupContext::new(*n, *r)?)),
        Command::Project { space, class } => {
            let d = class.required(space)?;
            let bc = blowup_of(d.ctx())?;
            if minimal_shape(&d, &bc).is_some() {
                let res = classify_minimal_projection(&d, &bc)?;
                Output::new(res.to_json(), format!("{} {}", res.case, res.target))
            } else {
                let t = project_class(&d, &bc)?;
                Output::new(json!({"target": t.to_json()}), t.to_string())
            }
        }
        Command::Decompose { space, class, degree_one } => {
            let d = class.required(space)?;
            if *degree_one {
                let budget = cli.cap.unwrap_or(DEFAULT_SEARCH_BUDGET);
                match decompose_degree1(&d, d.ctx(), budget)? {
                    Some(parts) => Output::classes(&parts),
                    None => Output::new(Value::Null, "no decomposition"),
                }
            } else {
                Output::classes(&effective_decompose(&d, &blowup_of(d.ctx())?)?)
            }
        }
        Command::Member { space, class } => {
            let d = class.required(space)?;
            let res = EffectiveCone::new(d.ctx(), cap)?.membership(&d)?;
            let table = match &res.certificate {
                Some(g) => format!("{} (violates {g})", res.member),
                None => res.member.to_string(),
            };
            Output::new(res.to_json(), table)
        }
        Command::H0 { space, class, points } => {
            let d = class.required(space)?;
            let cfg = points.config(&blowup_of(d.ctx())?, seed)?;
            let dim = form_space(&d, &cfg, cli.monomial_cap)?.map_or(0, |s| s.dim());
            Output::new(json!({"h0": dim}), dim.to_string())
        }
        Command::Section { space, class, points } => {
            let d = class.required(space)?;
            let cfg = points.config(&blowup_of(d.ctx())?, seed)?;
            poly_output(&section_of(&d, &cfg)?)
        }
        Command::Mult { space, class, points } => {
            let d = class.required(space)?;
            let cfg = points.config(&blowup_of(d.ctx())?, seed)?;
            let f = section_of(&d, &cfg)?;
            let at = (1..=cfg.r())
                .map(|i| mult_at_point(&f, &cfg.point(i)))
                .collect::<Result<Vec<_>, _>>()?;
            let along = mult_along_curve(&f)?;
            let at: Vec<u32> = at.into_iter().map(|x| x.expect("nonzero section")).collect();
            Output::new(
                json!({"points": at, "curve": along}),
                format!("points {}\ncurve {along}", lines(at.iter()).replace('\n', " ")),
            )
        }
        Command::CheckGeneration {
            space,
            class,
            points,
            multiset_cap,
        } => {
            let d = class.required(space)?;
            let cfg = points.config(&blowup_of(d.ctx())?, seed)?;
            let caps = GenerationCaps {
                monomials: cli.monomial_cap,
                multisets: *multiset_cap,
            };
            let rep = generation_test(&d, &cfg, caps)?;
            let table = format!(
                "h0 {}\nspan {}\ngenerated {}\nproducts {}",
                rep.h0, rep.span_dim, rep.generated, rep.products
            );
            Output::new(rep.to_json(), table)
        }
        Command::Invariant(inv) => return run_invariant(inv, seed),
        Command::Verify { profile } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let reports: Vec<_> = catalog().iter().map(|c| run_criterion(c, profile)).collect();
            let all = reports.iter().all(|r| r.passed);
            let out = Output::new(
                json!({"passed": all, "checks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()}),
                lines(reports.iter().map(|r| r.line())),
            );
            if !all {
                return Err(Failure::Checks(out));
            }
            out
        }
    };
    Ok(out)
}

fn run_invariant(inv: &InvariantCommand, seed: Option<u64>) -> Run {
    match inv {
        InvariantCommand::Build(args) => Ok(poly_output(&build_f(&args.indices, &args.params(seed)?)?)),
        InvariantCommand::Check { args, all } => {
            let np = args.params(seed)?;
            let sets = if *all {
                odd_subsets(np.r())
            } else if args.indices.is_empty() {
                return Err(Error::Parse("give -I or --all".into()).into());
            } else {
                vec![args.indices.clone()]
            };
            let mut failed = Vec::new();
            for set in &sets {
                if !is_invariant(&build_f(set, &np)?, &np)? {
                    failed.push(set.clone());
                }
            }
            let total = sets.len();
            let msg = if *all {
                format!("2^{} = {total} invariants verified", np.r() - 1)
            } else {
                format!("{total} invariant verified")
            };
            if failed.is_empty() {
                Ok(Output::new(json!({"verified": total, "message": msg}), msg))
            } else {
                let msg = format!("{} of {total} not invariant", failed.len());
                Err(Failure::Checks(Output::new(
                    json!({"verified": total - failed.len(), "failed": failed, "message": msg}),
                    msg,
                )))
            }
        }
        InvariantCommand::Class(args) => {
            let np = args.params(seed)?;
            let f = build_f(&args.indices, &np)?;
            let class = divisor_class_of(&f, &np)?;
            let tw = torus_weight(&f, &np)?;
            Ok(Output::new(
                json!({"class": class.to_json(), "weight": tw.to_json()}),
                class.to_string(),
            ))
        }
    }
}

fn emit(out: &Output, format: Format) {
    match format {
        Format::Json => println!("{}", out.json),
        Format::Table => println!("{}", out.table),
    }
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
    match run(&cli) {
        Ok(out) => {
            emit(&out, cli.format);
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(out)) => {
            emit(&out, cli.format);
            ExitCode::from(EXIT_ERROR)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(if e.is_cap() { EXIT_CAP } else { EXIT_ERROR })
        }
    }
}
