//! Command-line front end: one subcommand per operation, reports as JSON,
//! CSV or text, and the `verify-all` acceptance driver.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use primepoly::density::{
    euler_product, local_density_brute, local_density_series, lseries_identity_check, p2_density, DensityKind, EulerKind, LSeriesVariant,
};
use primepoly::equidist::{delta_exact, lemma_checks};
use primepoly::report::RationalRepr;
use primepoly::sieve::{rho_prime, run_experiment_with_cutoff, BadSetSpec, ExperimentKind, DEFAULT_SERIES_CUTOFF};
use primepoly::verify::{self, Status, VerifyReport};
use primepoly::zpoly::{disc_valuation_class, DiscTag, discriminant, factor_int, is_maximal_at_p};
use primepoly::{BigZPoly, Budget, Error, PrimeField, Rational};

use output::Format;

#[derive(Parser, Serialize)]
#[command(name = "primepoly", version, about = "Local densities, discrepancies, Euler products and sieve experiments for polynomials with prime coefficients")]
struct Cli {
    #[command(subcommand)]
    #[serde(skip)]
    command: Command,
    /// Enumeration cap (evaluations get ten times this); overrides PRIMEPOLY_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(skip)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Local density of v_p(Δ) <= 1 or maximality over unit-coefficient monic polynomials.
    Density(DensityArgs),
    /// Euler-product constants.
    Constants(ConstantsArgs),
    /// Exact discrepancy δ_{n,p}(d) with its bounds.
    Delta(DeltaArgs),
    /// Doubly stochastic matrix lemmas over all G_u.
    LemmaCheck(LemmaArgs),
    /// Discriminant, valuation class and Dedekind maximality of a monic integer polynomial.
    Dedekind(DedekindArgs),
    /// Counts prime-coefficient tuples against the singular-series prediction.
    Experiment(ExperimentArgs),
    /// ρ′(p^N): residues mod p^N with unit entries lying in the bad set.
    Rho(RhoArgs),
    /// Möbius L-series partial sums against their closed forms.
    Lseries(LseriesArgs),
    /// Closed-form densities at p = 2.
    P2(P2Args),
    /// Runs the acceptance criteria.
    VerifyAll(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum RouteArg {
    Brute,
    Series,
    Both,
}

#[derive(Args, Serialize)]
struct DensityArgs {
    /// Degrees, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Primes, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<u64>,
    /// sqf, max or both comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "sqf")]
    kind: Vec<DensityKind>,
    #[arg(long, value_enum, default_value_t = RouteArg::Series)]
    route: RouteArg,
}

#[derive(Args, Serialize)]
struct ConstantsArgs {
    /// a4b3, sqf-limit, max-limit, yamamura or lenstra; all when omitted.
    #[arg(long)]
    kind: Option<EulerKind>,
    #[arg(long, default_value_t = 1_000_000)]
    cutoff: u64,
}

#[derive(Args, Serialize)]
struct DeltaArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    d: usize,
    /// Include the maximising (u, α).
    #[arg(long)]
    witness: bool,
}

#[derive(Args, Serialize)]
struct LemmaArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    dmax: usize,
    #[arg(long, default_value_t = 8)]
    nmax: u64,
}

#[derive(Args, Serialize)]
struct DedekindArgs {
    /// Monic polynomial such as "x^3+0*x^2-2*x+7".
    #[arg(long)]
    poly: String,
    /// Prime to test at; every p with p² | Δ when omitted.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args, Serialize)]
struct ExperimentArgs {
    /// a4b3, or sqf_monic, max_monic, sqf_allcoeff, max_allcoeff with --n (or written as name(n)).
    #[arg(long)]
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    /// Height bound X.
    #[arg(long = "x", visible_alias = "X")]
    x: f64,
    /// Ignore the power of 2 in the discriminant.
    #[arg(long)]
    odd_part: bool,
    /// Largest prime in the truncated singular series.
    #[arg(long, default_value_t = DEFAULT_SERIES_CUTOFF)]
    cutoff: u64,
    /// Write per-coordinate marginals as CSV here.
    #[arg(long)]
    marginals: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RhoArgs {
    /// Bad set name: sqf_disc_monic, max_monic, sqf_disc_allcoeff, max_allcoeff, a4b3 or empty.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    p: u64,
    /// Tuple length; 2 for a4b3.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Serialize)]
struct LseriesArgs {
    #[arg(long)]
    p: u64,
    /// no-x or no-x-no-c; both when omitted.
    #[arg(long)]
    variant: Option<LSeriesVariant>,
    /// Largest degree D in the partial sum.
    #[arg(long, default_value_t = 8)]
    degree: usize,
}

#[derive(Args, Serialize)]
struct P2Args {
    #[arg(long, default_value_t = 12)]
    n_max: usize,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Criterion ids to run, comma-separated; all when omitted.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

/// A finished command: JSON body, optional CSV/text rows, and whether its
/// checks held.
struct Outcome {
    body: Value,
    rows: Option<Vec<Value>>,
    ok: bool,
}

impl Outcome {
    fn new(body: impl Serialize) -> Result<Self, Error> {
        Ok(Self { body: to_value(body)?, rows: None, ok: true })
    }
}

fn to_value(v: impl Serialize) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match cli.budget {
        Some(limit) => Budget::from_env().with_limit(limit),
        None => Budget::from_env(),
    };
    let (name, inputs, result) = match &cli.command {
        Command::Density(a) => ("density", to_value(a), density(a, &budget)),
        Command::Constants(a) => ("constants", to_value(a), constants(a, &budget)),
        Command::Delta(a) => ("delta", to_value(a), delta(a, &budget)),
        Command::LemmaCheck(a) => ("lemma-check", to_value(a), lemma_check(a, cli.seed, &budget)),
        Command::Dedekind(a) => ("dedekind", to_value(a), dedekind(a, &budget)),
        Command::Experiment(a) => ("experiment", to_value(a), experiment(a, &budget)),
        Command::Rho(a) => ("rho", to_value(a), rho(a, &budget)),
        Command::Lseries(a) => ("lseries", to_value(a), lseries(a, &budget)),
        Command::P2(a) => ("p2", to_value(a), p2(a)),
        Command::VerifyAll(a) => ("verify-all", to_value(a), verify_all(a, cli.seed, &budget)),
    };
    let (inputs, mut outcome) = match inputs.and_then(|i| result.map(|o| (i, o))) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut echo = to_value(&cli).unwrap_or(Value::Null);
    if let (Value::Object(echo), Value::Object(inputs)) = (&mut echo, inputs) {
        echo.extend(inputs);
    }
    if let Value::Object(body) = &mut outcome.body {
        let mut with_inputs = serde_json::Map::new();
        with_inputs.insert("inputs".into(), echo);
        with_inputs.extend(std::mem::take(body));
        *body = with_inputs;
    }
    let text = match output::render(name, &outcome.body, outcome.rows.as_deref(), cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = output::emit(&text, cli.output.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn density(a: &DensityArgs, budget: &Budget) -> Result<Outcome, Error> {
    let mut reports = Vec::new();
    let mut agree = true;
    for &kind in &a.kind {
        for &p in &a.p {
            for &n in &a.n {
                let brute = matches!(a.route, RouteArg::Brute | RouteArg::Both).then(|| local_density_brute(n, p, kind, budget)).transpose()?;
                let series = matches!(a.route, RouteArg::Series | RouteArg::Both).then(|| local_density_series(n, p, kind, budget)).transpose()?;
                if let (Some(b), Some(s)) = (&brute, &series) {
                    agree &= b.exact == s.exact;
                }
                reports.extend(brute.into_iter().chain(series));
            }
        }
    }
    let rows = output::records(&reports);
    let routes_agree = (a.route == RouteArg::Both).then_some(agree);
    Ok(Outcome { body: json!({ "reports": rows, "routes_agree": routes_agree }), rows: Some(rows), ok: agree })
}

fn constants(a: &ConstantsArgs, budget: &Budget) -> Result<Outcome, Error> {
    let kinds = match &a.kind {
        Some(k) => vec![k.clone()],
        None => EulerKind::BUILTIN.to_vec(),
    };
    let products = kinds.iter().map(|k| euler_product(k, a.cutoff, budget)).collect::<Result<Vec<_>, _>>()?;
    let rows = output::records(&products);
    if products.len() == 1 {
        let mut o = Outcome::new(&products[0])?;
        o.rows = Some(rows);
        return Ok(o);
    }
    Ok(Outcome { body: json!({ "products": rows }), rows: Some(rows), ok: true })
}

fn delta(a: &DeltaArgs, budget: &Budget) -> Result<Outcome, Error> {
    let r = delta_exact(a.n, a.p, a.d, budget)?;
    let mut body = to_value(&r)?;
    if !a.witness {
        if let Value::Object(m) = &mut body {
            m.shift_remove("argmax_u");
            m.shift_remove("argmax_alpha");
        }
    }
    Ok(Outcome { body, rows: None, ok: r.within_bounds })
}

fn lemma_check(a: &LemmaArgs, seed: u64, budget: &Budget) -> Result<Outcome, Error> {
    let r = lemma_checks(a.p, a.dmax, a.nmax, seed, budget)?;
    Ok(Outcome { body: to_value(&r)?, rows: Some(output::records(&r.checks)), ok: r.all_passed })
}

#[derive(Serialize)]
struct DedekindReport {
    poly: String,
    disc: String,
    p: Option<u64>,
    maximal: Option<bool>,
    disc_class: Option<DiscTag>,
    witness: Option<(u32, String)>,
    /// Primes whose maximality was tested.
    tested_primes: Vec<String>,
    note: Option<String>,
}

fn dedekind(a: &DedekindArgs, budget: &Budget) -> Result<Outcome, Error> {
    let f = BigZPoly::parse(&a.poly)?;
    let disc = discriminant(&f)?;
    let mut out = DedekindReport {
        poly: f.to_string(),
        disc: disc.to_string(),
        p: a.p,
        maximal: None,
        disc_class: None,
        witness: None,
        tested_primes: Vec::new(),
        note: None,
    };
    match a.p {
        Some(p) => {
            let field = PrimeField::new(p)?;
            out.maximal = Some(is_maximal_at_p(&f, field, budget)?);
            out.tested_primes.push(p.to_string());
            match disc_valuation_class(&f, field, budget) {
                Ok(c) => {
                    out.disc_class = Some(c.tag);
                    out.witness = c.witness;
                }
                Err(Error::ValuationOneAtTwo) => out.note = Some(Error::ValuationOneAtTwo.to_string()),
                Err(e) => return Err(e),
            }
        }
        None => match factor_int(&disc, budget)?.square_divisors() {
            Some(qs) => {
                let mut maximal = true;
                for q in qs {
                    let q: u64 = (&q).try_into().map_err(|_| Error::OutOfRange(format!("prime {q} too large for Dedekind test")))?;
                    maximal &= is_maximal_at_p(&f, PrimeField::new(q)?, budget)?;
                    out.tested_primes.push(q.to_string());
                }
                out.maximal = Some(maximal);
            }
            None => out.note = Some("discriminant not fully factored within budget".into()),
        },
    }
    Outcome::new(out)
}

fn experiment(a: &ExperimentArgs, budget: &Budget) -> Result<Outcome, Error> {
    let kind = match a.n {
        Some(n) => ExperimentKind::with_degree(&a.kind, n)?,
        None => a.kind.parse::<ExperimentKind>()?,
    };
    let r = run_experiment_with_cutoff(kind, a.x, a.odd_part, a.cutoff, budget)?;
    if let Some(path) = &a.marginals {
        let csv = output::to_csv(&output::records(&r.marginals)).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, csv).map_err(|e| Error::OutOfRange(format!("cannot write {}: {e}", path.display())))?;
    }
    Outcome::new(&r)
}

fn rho(a: &RhoArgs, budget: &Budget) -> Result<Outcome, Error> {
    let spec = BadSetSpec::by_name(&a.spec)?;
    let n = a.n.or(spec.fixed_arity()).unwrap_or(2);
    PrimeField::new(a.p)?;
    let rho = rho_prime(a.p, &spec, n, budget)?;
    let modulus = u128::from(a.p).pow(spec.modulus_exponent);
    let total = (modulus / u128::from(a.p) * u128::from(a.p - 1)).pow(n as u32);
    let factor = Rational::new((total - rho).into(), total.into());
    Outcome::new(json!({
        "spec": spec.name,
        "p": a.p,
        "n": n,
        "modulus": modulus.to_string(),
        "rho_prime": rho.to_string(),
        "unit_tuples": total.to_string(),
        "local_factor": RationalRepr(&factor),
    }))
}

fn lseries(a: &LseriesArgs, budget: &Budget) -> Result<Outcome, Error> {
    let variants = match a.variant {
        Some(v) => vec![v],
        None => vec![LSeriesVariant::NoX, LSeriesVariant::NoXNoC],
    };
    let checks = variants.into_iter().map(|v| lseries_identity_check(a.p, v, a.degree, budget)).collect::<Result<Vec<_>, _>>()?;
    let ok = checks.iter().all(|c| c.holds);
    let rows = output::records(&checks);
    Ok(Outcome { body: json!({ "checks": rows, "all_hold": ok }), rows: Some(rows), ok })
}

fn p2(a: &P2Args) -> Result<Outcome, Error> {
    let rows = (1..=a.n_max)
        .map(|n| {
            let sqf = p2_density(n, DensityKind::Sqf)?;
            let max = p2_density(n, DensityKind::Max)?;
            to_value(json!({ "n": n, "sqf": RationalRepr(&sqf), "max": RationalRepr(&max) }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome { body: json!({ "densities": rows }), rows: Some(rows), ok: true })
}

fn verify_all(a: &VerifyArgs, seed: u64, budget: &Budget) -> Result<Outcome, Error> {
    let ids = verify::criterion_ids();
    if let Some(bad) = a.only.iter().find(|o| !ids.contains(&o.as_str())) {
        return Err(Error::Parse(format!("unknown criterion {bad:?}; expected one of {ids:?}")));
    }
    let mut criteria = Vec::new();
    for id in ids.into_iter().filter(|id| a.only.is_empty() || a.only.iter().any(|o| o == id)) {
        let c = verify::run_criterion(id, seed, budget).expect("id comes from the criterion table");
        eprintln!("{}", c.summary_line());
        criteria.push(c);
    }
    let failed: Vec<_> = criteria.iter().filter(|c| c.status == Status::Fail).map(|c| c.id).collect();
    let warnings = criteria.iter().filter(|c| c.status == Status::Warn).map(|c| c.id).collect();
    let report = VerifyReport { seed, passed: failed.is_empty(), criteria, failed, warnings };
    let rows = report
        .criteria
        .iter()
        .map(|c| to_value(json!({ "id": c.id, "status": c.status, "title": c.title, "details": c.details.join("; ") })))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outcome { body: to_value(&report)?, rows: Some(rows), ok: report.passed })
}
