use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qctower::field::numtheory::{is_prime_u64, prime_factors_u64, FactorBudget};
use qctower::pgl2::{count_invariants, find_c, invariants_by_scan};
use qctower::{
    build_graph, build_qc, build_tower, conjecture_scan, enumerate_irreducibles, random_construct,
    recursive_construct, transform_probability, Error, FieldCtx, FieldElement, Pgl2Class, Poly, QcContext, TowerReport,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "qctower", version, about = "Irreducible polynomials from canonical rational transformations Q_c")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Cap on enumerated candidates (graph, counts, scans).
    #[arg(long, env = "QCTOWER_BUDGET", default_value_t = 1 << 24, global = true)]
    budget: u64,

    /// Trial-division limit when factoring group orders.
    #[arg(long, env = "QCTOWER_TRIAL_LIMIT", default_value_t = FactorBudget::default().trial_limit, global = true)]
    trial_limit: u64,

    /// Pollard rho iterations per split when factoring group orders.
    #[arg(long, env = "QCTOWER_RHO_ITERATIONS", default_value_t = FactorBudget::default().rho_iterations, global = true)]
    rho_iterations: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    /// Graphviz text; `graph` only.
    Graphtext,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConstructMethod {
    Recursive,
    Random,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field size, a prime or prime power.
    #[arg(long)]
    q: u64,
    /// The element c of A_c, as an integer index or `[d0,d1,...]`.
    #[arg(long)]
    c: Option<String>,
    /// Pick the least c with [A_c] of this order.
    #[arg(long)]
    order: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Least c with x^2 - x - c irreducible and [A_c] of the given order.
    FindC {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        order: u64,
    },
    /// Print D, g_c and h_c.
    Qc(FieldArgs),
    /// Monic Q_c-transform of a polynomial.
    Transform {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        poly: String,
    },
    /// Recursive or random construction of an irreducible f^{Q_c}.
    Construct {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        method: ConstructMethod,
        /// Seed polynomial (recursive).
        #[arg(long)]
        seed_poly: Option<String>,
        /// Seed degree (random).
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_trials: u64,
    },
    /// f_i = M(f_{i-1}^{Q_c}) up to the given depth.
    Tower {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        seed_poly: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Skip the irreducibility check of levels beyond the first.
        #[arg(long)]
        no_verify: bool,
    },
    /// Number of irreducibles of degree D*m fixed by [A_c].
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        m: u64,
        /// Also enumerate them by exhaustive scan.
        #[arg(long)]
        brute: bool,
    },
    /// Probability that a random degree-n irreducible has an irreducible transform.
    Prob {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: usize,
    },
    /// The functional graph G_n(Q_c).
    Graph {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: usize,
    },
    /// Tally how second transforms factor for odd n and D = 2 (mod 4).
    ScanConjecture {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        max_seeds: Option<usize>,
    },
}

/// Failure with a category token and exit code.
struct Failure {
    category: &'static str,
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.category() {
            "internal-consistency" => EXIT_INTERNAL,
            "invalid-input" | "parse" => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure {
            category: e.category(),
            message: e.to_string(),
            code,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        category: "usage",
        message: message.into(),
        code: EXIT_USAGE,
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// `F_q`, built from the least irreducible of degree `k` when `q = p^k`.
fn field(q: u64) -> Outcome<FieldCtx> {
    let factors = prime_factors_u64(q);
    match factors.as_slice() {
        [(p, 1)] => Ok(FieldCtx::prime(*p)?),
        [(p, k)] if is_prime_u64(*p) => {
            let base = FieldCtx::prime(*p)?;
            let modulus = enumerate_irreducibles(&base, *k as usize)?.remove(0);
            Ok(FieldCtx::extend(&base, &modulus)?)
        }
        _ => Err(usage(format!("q = {q} is not a prime power"))),
    }
}

fn element(ctx: &FieldCtx, text: &str) -> Outcome<FieldElement> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let digits: Result<Vec<u64>, _> = inner.split(',').map(|d| d.trim().parse::<u64>()).collect();
        let digits = digits.map_err(|_| usage(format!("bad element {text}")))?;
        return Ok(ctx.element_from_digits(&digits)?);
    }
    let index: u64 = text.parse().map_err(|_| usage(format!("bad element {text}")))?;
    if ctx.cardinality_u64().is_some_and(|q| index >= q) {
        return Err(usage(format!("element index {index} is out of range")));
    }
    Ok(ctx.element_from_index(index))
}

fn qc_context(args: &FieldArgs) -> Outcome<QcContext> {
    let ctx = field(args.q)?;
    let c = match (&args.c, args.order) {
        (Some(c), None) => element(&ctx, c)?,
        (None, Some(d)) => find_c(&ctx, d)?,
        (Some(_), Some(_)) => return Err(usage("give either --c or --order, not both")),
        (None, None) => return Err(usage("one of --c or --order is required")),
    };
    Ok(build_qc(&ctx, &c)?)
}

fn parse(ctx: &FieldCtx, text: &str) -> Outcome<Poly> {
    Ok(Poly::parse(ctx, text)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn report_text(r: &TowerReport) -> String {
    let mut out = format!("D = {}, g_c = {}, h_c = {}\n", r.qc.d, r.qc.g_c, r.qc.h_c);
    for s in &r.steps {
        let irr = match s.irreducible {
            Some(true) => "irreducible",
            Some(false) => "reducible",
            None => "unchecked",
        };
        let role = to_value(&s.role);
        out += &format!("{} (degree {}, {irr}): {}\n", role.as_str().unwrap_or("?"), s.degree, s.poly);
    }
    if let Some(b) = r.bound {
        out += &format!("iterations used {} of bound {b}, splits {}\n", r.iterations_used, r.splits);
    }
    if let Some(t) = r.trials {
        out += &format!("trials {t}\n");
    }
    out
}

/// Runs a command; returns its text rendering and structured value.
fn run(cli: &Cli) -> Outcome<(String, Value)> {
    let factors = FactorBudget {
        trial_limit: cli.trial_limit,
        rho_iterations: cli.rho_iterations,
    };
    if cli.format == Format::Graphtext && !matches!(cli.command, Command::Graph { .. }) {
        return Err(usage("--format graphtext applies to `graph` only"));
    }
    Ok(match &cli.command {
        Command::FindC { q, order } => {
            let c = find_c(&field(*q)?, *order)?;
            (format!("{c}\n"), json!({ "q": q, "D": order, "c": to_value(&c) }))
        }
        Command::Qc(args) => {
            let qc = qc_context(args)?;
            let s = qc.summary();
            (
                format!("c = {}\nD = {}\ng_c = {}\nh_c = {}\n", s.c, s.d, s.g_c, s.h_c),
                to_value(&s),
            )
        }
        Command::Transform { field, poly } => {
            let qc = qc_context(field)?;
            let f = parse(qc.ctx(), poly)?;
            let t = qc.transform_monic(&f)?;
            let irr = t.is_irreducible()?;
            (
                format!("{t}\ndegree {}, {}\n", t.degree().unwrap_or(0), if irr { "irreducible" } else { "reducible" }),
                json!({
                    "input": f.to_string(),
                    "transform": t.to_string(),
                    "degree": t.degree(),
                    "irreducible": irr,
                }),
            )
        }
        Command::Construct {
            field,
            method,
            seed_poly,
            degree,
            rng_seed,
            max_trials,
        } => {
            let qc = qc_context(field)?;
            let report = match method {
                ConstructMethod::Recursive => {
                    let seed = seed_poly.as_ref().ok_or_else(|| usage("--seed-poly is required"))?;
                    recursive_construct(&parse(qc.ctx(), seed)?, &qc, &factors)?
                }
                ConstructMethod::Random => {
                    let n = degree.ok_or_else(|| usage("--degree is required"))?;
                    let mut rng = ChaCha8Rng::seed_from_u64(*rng_seed);
                    let mut r = random_construct(qc.ctx(), n, &qc, &mut rng, *max_trials)?;
                    r.rng_seed = Some(*rng_seed);
                    r
                }
            };
            (report_text(&report), to_value(&report))
        }
        Command::Tower {
            field,
            seed_poly,
            depth,
            no_verify,
        } => {
            let qc = qc_context(field)?;
            let report = build_tower(&parse(qc.ctx(), seed_poly)?, &qc, *depth, !no_verify)?;
            (report_text(&report), to_value(&report))
        }
        Command::Count { q, order, m, brute } => {
            let ctx = field(*q)?;
            let formula = count_invariants(&BigUint::from(*q), *order, *m)?;
            let mut text = format!("|C(D m)| = {formula} for q = {q}, D = {order}, m = {m}\n");
            let mut value = json!({ "q": q, "D": order, "m": m, "formula": formula.to_string() });
            if *brute {
                let c = find_c(&ctx, *order)?;
                let a = Pgl2Class::a_c(&c)?;
                let listed = invariants_by_scan(&ctx, &a, (*order * *m) as usize, cli.budget)?;
                let agrees = BigUint::from(listed.len()) == formula;
                text += &format!("brute force: {} ({})\n", listed.len(), if agrees { "agrees" } else { "DISAGREES" });
                for f in &listed {
                    text += &format!("  {f}\n");
                }
                value["brute"] = json!(listed.len());
                value["agrees"] = json!(agrees);
                value["invariants"] = to_value(&listed);
                if !agrees {
                    return Err(Error::InternalConsistency(format!(
                        "count formula gives {formula}, enumeration finds {}",
                        listed.len()
                    ))
                    .into());
                }
            }
            (text, value)
        }
        Command::Prob { field, degree } => {
            let qc = qc_context(field)?;
            let r = transform_probability(*degree, &qc)?;
            (
                format!(
                    "p = {} ({:.6})\ntau = {:.6}\nlower bound = {:.6}\nexpected trials = {} ({:.4})\n",
                    r.p, r.p_approx, r.tau, r.lower_bound, r.expected_trials, r.expected_trials_approx
                ),
                to_value(&r),
            )
        }
        Command::Graph { field, degree } => {
            let qc = qc_context(field)?;
            let g = build_graph(qc.ctx(), *degree, &qc, cli.budget, &factors)?;
            let mut text = String::new();
            if cli.format == Format::Graphtext {
                text = g.to_dot();
            } else {
                for (i, f) in g.nodes.iter().enumerate() {
                    let to = g.successor(i).map(|j| g.nodes[j].to_string()).unwrap_or_else(|| "-".into());
                    let mark = if g.periodic[i] { " [periodic]" } else { "" };
                    text += &format!("{f} -> {to}{mark}\n");
                }
            }
            (text, to_value(&g))
        }
        Command::ScanConjecture {
            field,
            degree,
            max_seeds,
        } => {
            let qc = qc_context(field)?;
            let r = conjecture_scan(qc.ctx(), *degree, &qc, max_seeds.unwrap_or(usize::MAX))?;
            let mut text = format!(
                "scanned {}{}, eligible {}: two-way {}, irreducible {}, other {}\n",
                r.seeds_scanned,
                if r.partial { " (partial)" } else { "" },
                r.eligible,
                r.two_way,
                r.irreducible,
                r.other
            );
            for e in r.counterexamples() {
                text += &format!("counterexample candidate: seed {} first {}\n", e.seed, e.first);
            }
            (text, to_value(&r))
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::FindC { .. } => "find-c",
        Command::Qc(_) => "qc",
        Command::Transform { .. } => "transform",
        Command::Construct { .. } => "construct",
        Command::Tower { .. } => "tower",
        Command::Count { .. } => "count",
        Command::Prob { .. } => "prob",
        Command::Graph { .. } => "graph",
        Command::ScanConjecture { .. } => "scan-conjecture",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let structured = cli.format == Format::Structured;
    match outcome {
        Ok((text, value)) => {
            if structured {
                let doc = json!({
                    "command": command_name(&cli.command),
                    "status": "ok",
                    "result": value,
                    "elapsed_ms": elapsed_ms,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if structured {
                let doc = json!({
                    "command": command_name(&cli.command),
                    "status": "error",
                    "category": f.category,
                    "message": f.message,
                    "elapsed_ms": elapsed_ms,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("error[{}]: {}", f.category, f.message);
            ExitCode::from(f.code)
        }
    }
}
