//! Subcommands of `starforge` and their JSON payloads.

use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use starforge_core::closed_form::{ActionDisplay, ActionValue};
use starforge_core::complex::{ExactComplex, Rational};
use starforge_core::functional::{
    action_eval, default_lambda_samples, eigencheck_bullet, eigencheck_star, negative_region, normalize_functional, positivity_check,
    FormalFunctional, FunctionalDisplay, StarState,
};
use starforge_core::json::{action_to_json, function_to_json, functional_to_json};
use starforge_core::phase::{GaussPoly, PhaseContext};
use starforge_core::scalar::LambdaBinding;
use starforge_core::series::{fs_eval_lambda, fs_integrate, function, FormalFunction, FunctionDisplay};
use starforge_core::star::{axiom_suite, star_commutator, star_mul, star_trace, Bullet, Moyal, StarFamily, Verdict};

use crate::lower::{lower, to_function, to_functional, to_scalar};
use crate::parse::parse_expression;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Product {
    Moyal,
    Bullet,
}

#[derive(Debug, Parser)]
#[command(name = "starforge", version, about = "Exact formal-series star products, traces and phase-space functionals")]
struct Cli {
    /// Number of canonical pairs (q1..qn, p1..pn; plain q, p when n = 1).
    #[arg(long, global = true, default_value_t = 1)]
    pairs: usize,

    /// Truncation order in lam.
    #[arg(long, global = true, allow_negative_numbers = true)]
    order: Option<i64>,

    /// Bind lam to this positive rational (strict mode).
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Product::Moyal)]
    product: Product,

    /// Emit series in the structured JSON schema instead of expression strings.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Degree bound for generators, test functions and random witnesses.
    #[arg(long, global = true)]
    degree: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// F * G for the selected product.
    Star { f: String, g: String },
    /// The pointwise product F • G.
    Bullet { f: String, g: String },
    /// F * G - G * F.
    Commutator { f: String, g: String },
    /// Tr F = lam^-n ∫ F.
    Trace { f: String },
    /// Run the deformation axiom suite on monomial generators.
    Axioms,
    /// ∫ F over phase space, coefficientwise.
    Integrate { f: String },
    /// Check ⟨T, conj(f) * f⟩ ≥ 0 on witnesses and lam samples.
    Positivity {
        functional: String,
        witnesses: Vec<String>,
        /// Add this many seeded random polynomial witnesses.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Rescale T so that ⟨T, 1⟩ = 1.
    Normalize { functional: String },
    /// Check ξ * T = a T against test monomials.
    Eigencheck {
        xi: String,
        eigenvalue: String,
        /// The functional T; omit when --wigner is given.
        state: Option<String>,
        /// Use the oscillator Wigner state of this level (strict mode only).
        #[arg(long)]
        wigner: Option<u32>,
    },
    /// Negative region of conj(f) * f for f = (q - q0) + I*a*(p - p0).
    Region { f: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Star { .. } => "star",
            Command::Bullet { .. } => "bullet",
            Command::Commutator { .. } => "commutator",
            Command::Trace { .. } => "trace",
            Command::Axioms => "axioms",
            Command::Integrate { .. } => "integrate",
            Command::Positivity { .. } => "positivity",
            Command::Normalize { .. } => "normalize",
            Command::Eigencheck { .. } => "eigencheck",
            Command::Region { .. } => "region",
        }
    }
}

/// Outcome of one invocation. `payload` is the whole JSON document.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub command: Option<String>,
    pub payload: Json,
    pub exit_code: i32,
    /// Help or version text, printed verbatim instead of the payload.
    pub text: Option<String>,
}

impl CommandResult {
    /// Compact JSON with sorted keys, byte-stable for identical input.
    pub fn render(&self) -> String {
        match &self.text {
            Some(t) => t.clone(),
            None => self.payload.to_string(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.exit_code == 2
    }

    fn error(command: Option<String>, e: &CliError) -> Self {
        let mut body = json!({ "kind": e.kind(), "message": e.to_string() });
        if let CliError::Parse(p) = e {
            body["offset"] = json!(p.offset);
            body["expected"] = json!(p.expected);
        }
        CommandResult { command, payload: json!({ "error": body }), exit_code: 2, text: None }
    }
}

struct Session {
    ctx: PhaseContext,
    family: Box<dyn StarFamily>,
    lambda: Option<Rational>,
    json: bool,
}

impl Session {
    fn function(&self, text: &str) -> Result<FormalFunction, CliError> {
        to_function(lower(&parse_expression(text, &self.ctx)?, &self.ctx)?)
    }

    fn functional(&self, text: &str) -> Result<FormalFunctional, CliError> {
        to_functional(lower(&parse_expression(text, &self.ctx)?, &self.ctx)?)
    }

    fn binding(&self) -> Result<LambdaBinding, CliError> {
        Ok(match &self.lambda {
            Some(l) => LambdaBinding::strict(l.clone())?,
            None => LambdaBinding::Formal,
        })
    }

    fn show_function(&self, f: &FormalFunction) -> Result<Json, CliError> {
        if let Some(l) = &self.lambda {
            LambdaBinding::strict(l.clone())?;
            return Ok(json!(fs_eval_lambda(f, l)?.to_string()));
        }
        Ok(if self.json { function_to_json(f) } else { json!(FunctionDisplay(f).to_string()) })
    }

    fn show_action(&self, v: &ActionValue) -> Result<Json, CliError> {
        if let Some(l) = &self.lambda {
            LambdaBinding::strict(l.clone())?;
            return Ok(json!(action_eval(v, l)?.to_string()));
        }
        Ok(if self.json { action_to_json(v) } else { json!(ActionDisplay(v).to_string()) })
    }

    fn show_functional(&self, t: &FormalFunctional) -> Json {
        if self.json {
            functional_to_json(t)
        } else {
            json!(FunctionalDisplay(t).to_string())
        }
    }
}

fn parse_lambda(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim()).map_err(|_| CliError::Usage(format!("--lambda expects a rational such as 1/3, got `{s}`")))
}

fn to_json<T: serde::Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

/// Seeded polynomial witnesses with small Gaussian-integer coefficients.
fn random_witnesses(ctx: &PhaseContext, count: usize, degree: u32, seed: u64) -> Vec<FormalFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monomials = ctx.monomials(degree);
    (0..count)
        .map(|_| {
            let mut g = GaussPoly::polynomial(Default::default());
            for m in &monomials {
                let c = ExactComplex::new(Rational::from_integer(rng.gen_range(-2..=2).into()), Rational::from_integer(rng.gen_range(-2..=2).into()));
                g = g.add(&m.scale(&c)).expect("polynomials share the decay rate");
            }
            function(g)
        })
        .collect()
}

fn execute(cli: &Cli) -> Result<(Json, i32), CliError> {
    let ctx = PhaseContext::new(cli.pairs)?;
    let family: Box<dyn StarFamily> = match cli.product {
        Product::Moyal => Box::new(Moyal::new(ctx)),
        Product::Bullet => Box::new(Bullet::new(ctx)),
    };
    let lambda = cli.lambda.as_deref().map(parse_lambda).transpose()?;
    let s = Session { ctx, family, lambda, json: cli.json };
    let fam = s.family.as_ref();
    let ok = |v: Json| Ok((v, 0));
    match &cli.command {
        Command::Star { f, g } => ok(s.show_function(&star_mul(fam, &s.function(f)?, &s.function(g)?, cli.order)?)?),
        Command::Bullet { f, g } => ok(s.show_function(&star_mul(&Bullet::new(ctx), &s.function(f)?, &s.function(g)?, cli.order)?)?),
        Command::Commutator { f, g } => ok(s.show_function(&star_commutator(fam, &s.function(f)?, &s.function(g)?, cli.order)?)?),
        Command::Trace { f } => ok(s.show_action(&star_trace(fam, &s.function(f)?)?)?),
        Command::Integrate { f } => ok(s.show_action(&fs_integrate(&s.function(f)?, &ctx)?)?),
        Command::Axioms => {
            let order = cli.order.unwrap_or(4);
            let order = usize::try_from(order).map_err(|_| CliError::Usage(format!("--order must be nonnegative for axioms, got {order}")))?;
            let report = axiom_suite(fam, cli.degree.unwrap_or(3), order);
            let failed = report.axioms.iter().any(|a| a.verdict == Verdict::Fail);
            Ok((to_json(&report), i32::from(failed)))
        }
        Command::Positivity { functional, witnesses, random } => {
            let t = s.functional(functional)?;
            let mut ws = witnesses.iter().map(|w| s.function(w)).collect::<Result<Vec<_>, _>>()?;
            let count = random.unwrap_or(if ws.is_empty() { 6 } else { 0 });
            ws.extend(random_witnesses(&ctx, count, cli.degree.unwrap_or(1), cli.seed.unwrap_or(0)));
            let samples = s.lambda.clone().map_or_else(default_lambda_samples, |l| vec![l]);
            let report = positivity_check(fam, &t, &ws, &samples, cli.order.unwrap_or(4))?;
            Ok((to_json(&report), i32::from(!report.positive)))
        }
        Command::Normalize { functional } => {
            let (factor, t) = normalize_functional(fam, &s.functional(functional)?, cli.order.unwrap_or(6))?;
            let factor = if s.json { action_to_json(&factor) } else { json!(ActionDisplay(&factor).to_string()) };
            ok(json!({ "factor": factor, "functional": s.show_functional(&t) }))
        }
        Command::Eigencheck { xi, eigenvalue, state, wigner } => {
            let xi = s.function(xi)?;
            let a = to_scalar(lower(&parse_expression(eigenvalue, &ctx)?, &ctx)?, &ctx)?;
            let degree = cli.degree.unwrap_or(2);
            let state = match (state, wigner) {
                (Some(t), None) => StarState::Fixed(s.functional(t)?),
                (None, Some(n)) => StarState::oscillator(ctx, *n),
                _ => return Err(CliError::Usage("eigencheck needs exactly one of a state expression and --wigner".into())),
            };
            let report = if fam.is_pointwise() {
                let StarState::Fixed(t) = &state else {
                    return Err(CliError::Usage("--wigner states are checked against the Moyal product".into()));
                };
                eigencheck_bullet(&xi, &a, t, &ctx, degree)?
            } else {
                eigencheck_star(fam, &xi, &a, &state, degree, cli.order.unwrap_or(4), &s.binding()?)?
            };
            Ok((to_json(&report), i32::from(!report.passed())))
        }
        Command::Region { f } => ok(to_json(&negative_region(&s.function(f)?, &s.binding()?, &ctx)?)),
    }
}

/// Parses `argv` (program name first) and runs one command.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    return CommandResult { command: None, payload: Json::Null, exit_code: 0, text: Some(e.render().to_string()) };
                }
                _ => 2,
            };
            let mut r = CommandResult::error(None, &CliError::Usage(e.render().to_string().trim_end().to_string()));
            r.exit_code = code;
            return r;
        }
    };
    let name = cli.command.name().to_string();
    match execute(&cli) {
        Ok((payload, exit_code)) => CommandResult { command: Some(name), payload: json!({ "result": payload }), exit_code, text: None },
        Err(e) => CommandResult::error(Some(name), &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use starforge_core::complex::fmt_rational;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("starforge").chain(args.iter().copied()))
    }

    #[test]
    fn commutator_of_coordinates() {
        let r = run_args(&["commutator", "q", "p"]);
        assert_eq!(r.render(), r#"{"result":"I*lam"}"#);
        assert_eq!(r.exit_code, 0);
    }

    #[test]
    fn strict_products_evaluate_lam() {
        let r = run_args(&["star", "q", "p", "--lambda", "2"]);
        assert_eq!(r.payload["result"], "I + q*p");
    }

    #[test]
    fn random_witnesses_are_seeded() {
        let ctx = PhaseContext::new(1).unwrap();
        assert_eq!(random_witnesses(&ctx, 4, 2, 9), random_witnesses(&ctx, 4, 2, 9));
        assert_ne!(random_witnesses(&ctx, 4, 2, 9), random_witnesses(&ctx, 4, 2, 10));
    }

    #[test]
    fn lambda_must_be_rational() {
        assert!(run_args(&["region", "q + I*p", "--lambda", "0.5"]).is_error());
        assert!(run_args(&["region", "q + I*p", "--lambda", "-1/2"]).is_error());
        assert_eq!(parse_lambda("2/6").unwrap(), Rational::new(1.into(), 3.into()));
        assert_eq!(fmt_rational(&parse_lambda(" 3 ").unwrap()), "3");
    }
}
