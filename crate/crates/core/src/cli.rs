//! Command-line front end. [`dispatch`] does all the work so tests and the
//! C interface can drive it without a process.

use crate::bias::{self, Budget, Mode, DEFAULT_ENUM_CAP};
use crate::decompose::{self, PipelineConfig, PolyRank};
use crate::error::{Error, Result};
use crate::factor::{self, PolynomialFactor};
use crate::ffpoly::{parse_poly, parse_poly_list, MultiPoly};
use crate::field::FieldCtx;
use crate::linalg;
use crate::nullstellensatz::{self, DecidedBy, IdealSpec, DEFAULT_UNKNOWNS_CAP};
use crate::rmcode::{self, Centers, ProfileConfig, RMParams, SimplexFunction, DEFAULT_CODEWORD_CAP};
use crate::variety::{self, CountConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "polystruct/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    /// Exhaustive when the domain fits the enumeration cap, sampled otherwise.
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMode {
    Exact,
    Regularized,
    Sampled,
}

/// `--seed N` or `--seed random`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedArg {
    pub value: u64,
    pub from_entropy: bool,
}

fn parse_seed(s: &str) -> std::result::Result<SeedArg, String> {
    if s == "random" {
        return Ok(SeedArg {
            value: rand::random(),
            from_entropy: true,
        });
    }
    s.parse::<u64>()
        .map(|value| SeedArg {
            value,
            from_entropy: false,
        })
        .map_err(|e| format!("seed must be a 64-bit integer or 'random': {e}"))
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    p: u32,
    /// Number of variables; inferred from the inputs when omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "0", value_parser = parse_seed)]
    seed: SeedArg,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long = "cap-enum", default_value_t = DEFAULT_ENUM_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap_enum: u64,
    #[arg(long = "cap-codewords", default_value_t = DEFAULT_CODEWORD_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap_codewords: u64,
    #[arg(long = "cap-unknowns", default_value_t = DEFAULT_UNKNOWNS_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap_unknowns: u64,
    #[arg(long = "cap-retries", default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    cap_retries: u64,
    #[arg(long = "cap-search", default_value_t = factor::DEFAULT_SEARCH_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    cap_search: u64,
}

#[derive(Debug, Parser)]
#[command(name = "polystruct", version, about = "Structural analysis of low-degree polynomials over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// |E_x e(f(x))|
    Bias(BiasArgs),
    /// Gowers U^d norm
    Gowers(GowersArgs),
    /// Approximate or exact low-rank decomposition of a biased polynomial
    Decompose(DecomposeArgs),
    /// Rank of a quadratic via its symmetric matrix
    Rank2(PolyArgs),
    /// Refine a factor until it is regular
    Regularize(RegularizeArgs),
    /// Atom sizes of a factor
    Atoms(AtomsArgs),
    /// Certificate Q^r = sum R_i P_i
    Nss(NssArgs),
    /// Certificate 1 = sum R_i P_i
    #[command(name = "weak-nss")]
    WeakNss(WeakNssArgs),
    /// Radical membership of Q
    Radical(RadicalArgs),
    /// Common zeros of the generators
    Count(CountArgs),
    /// Exact count with structural lower bounds
    Profile(ProfileArgs),
    /// Reed-Muller experiments
    Rm(RmArgs),
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[command(flatten)]
    common: Common,
    /// Polynomial, or @file
    #[arg(long)]
    poly: String,
}

#[derive(Debug, Args)]
struct BiasArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    poly: String,
    #[arg(long, value_enum, default_value_t = EvalMode::Auto)]
    mode: EvalMode,
}

#[derive(Debug, Args)]
struct GowersArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    poly: String,
    /// Norm order
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, value_enum, default_value_t = EvalMode::Auto)]
    mode: EvalMode,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    poly: String,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long, default_value_t = 2)]
    t: u32,
    /// Run the exact pipeline (regularize and tabulate on atoms)
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Args)]
struct RegularizeArgs {
    #[command(flatten)]
    common: Common,
    /// `;`-separated polynomials, or @file with one per line
    #[arg(long)]
    gens: String,
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Debug, Args)]
struct AtomsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    /// Also count atoms outside p^-c +- p^-s
    #[arg(long)]
    s: Option<u32>,
}

#[derive(Debug, Args)]
struct NssArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long)]
    q: String,
    #[arg(long, default_value_t = 2)]
    dmax: u32,
    #[arg(long, default_value_t = 3)]
    rmax: u32,
}

#[derive(Debug, Args)]
struct WeakNssArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long, default_value_t = 2)]
    dmax: u32,
}

#[derive(Debug, Args)]
struct RadicalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long)]
    q: String,
    #[arg(long, default_value_t = 2)]
    dmax: u32,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long, value_enum, default_value_t = CountMode::Exact)]
    mode: CountMode,
    /// Base regularity level
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Relative accuracy p^-u for the regularized count
    #[arg(long)]
    u: Option<u32>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gens: String,
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Debug, Args)]
struct RmArgs {
    #[command(subcommand)]
    command: RmCommand,
}

#[derive(Debug, Subcommand)]
enum RmCommand {
    /// Minimum distance by enumeration
    Mindist(RmBase),
    /// Every codeword within a radius of a center
    Listdecode(RmListArgs),
    /// List sizes at radii 1 - e/p - p^-s
    Profile(RmProfileArgs),
    /// Simplex Fourier coefficients of a function
    Fourier(RmFourierArgs),
    /// Greedy weak regularity on the simplex
    Weakreg(RmWeakregArgs),
    /// Johnson radius and list cap
    Johnson(RmJohnsonArgs),
    /// Rank-threshold graph on a decoded list (d = 2)
    Rankgraph(RmRankgraphArgs),
}

#[derive(Debug, Args)]
struct RmBase {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: u32,
}

/// A function given as a polynomial or as a comma-separated value table.
#[derive(Debug, Args)]
struct FunctionArg {
    /// Center polynomial, or @file
    #[arg(long = "center-poly", conflicts_with = "center_table")]
    center_poly: Option<String>,
    /// Center values in lexicographic point order, comma-separated
    #[arg(long = "center-table")]
    center_table: Option<String>,
}

#[derive(Debug, Args)]
struct RmListArgs {
    #[command(flatten)]
    base: RmBase,
    #[command(flatten)]
    center: FunctionArg,
    #[arg(long)]
    radius: f64,
}

#[derive(Debug, Args)]
struct RmProfileArgs {
    #[command(flatten)]
    base: RmBase,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long = "random-centers", default_value_t = 100)]
    random_centers: usize,
    #[arg(long = "noisy-centers", default_value_t = 100)]
    noisy_centers: usize,
    #[arg(long, default_value_t = 0.2)]
    noise: f64,
    /// Scan every function F_p^n -> F_p as a center
    #[arg(long = "all-centers")]
    all_centers: bool,
    /// Constant C in the bound p^(C n^(d-e))
    #[arg(long = "bound-constant", default_value_t = 1.0)]
    bound_constant: f64,
}

#[derive(Debug, Args)]
struct RmFourierArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    g: FunctionArg,
}

#[derive(Debug, Args)]
struct RmWeakregArgs {
    #[command(flatten)]
    common: Common,
    /// phi = p(f) for this polynomial
    #[arg(long)]
    poly: String,
    /// Family members
    #[arg(long)]
    gens: String,
    #[arg(long)]
    eps: f64,
}

#[derive(Debug, Args)]
struct RmJohnsonArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    eps: f64,
}

#[derive(Debug, Args)]
struct RmRankgraphArgs {
    #[command(flatten)]
    base: RmBase,
    #[command(flatten)]
    center: FunctionArg,
    #[arg(long)]
    radius: f64,
    #[arg(long)]
    k: u32,
}

/// A command result: JSON fields plus an optional native CSV table.
struct Report {
    fields: Map<String, Value>,
    csv: Option<String>,
}

impl Report {
    fn new(body: Value) -> Self {
        let fields = match body {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Report { fields, csv: None }
    }

    fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

fn read_input(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn field(common: &Common) -> Result<FieldCtx> {
    FieldCtx::new(common.p)
}

fn one_poly(common: &Common, arg: &str) -> Result<MultiPoly> {
    parse_poly(field(common)?, read_input(arg)?.trim(), common.n)
}

fn poly_list(common: &Common, arg: &str) -> Result<Vec<MultiPoly>> {
    let list = parse_poly_list(field(common)?, &read_input(arg)?, common.n)?;
    if list.is_empty() {
        return Err(Error::input("no polynomials given"));
    }
    Ok(list)
}

/// Generators and query on a common arity.
fn system(common: &Common, gens: &str, q: &str) -> Result<(Vec<MultiPoly>, MultiPoly)> {
    let joined = format!("{};{}", read_input(gens)?, read_input(q)?.trim());
    let mut all = parse_poly_list(field(common)?, &joined, common.n)?;
    let q = all.pop().ok_or_else(|| Error::input("no query given"))?;
    if all.is_empty() {
        return Err(Error::input("no generators given"));
    }
    Ok((all, q))
}

fn pipeline(common: &Common, t: u32) -> PipelineConfig {
    PipelineConfig {
        t,
        seed: common.seed.value,
        retries: common.cap_retries as usize,
        enum_cap: common.cap_enum,
        samples: common.samples,
        search_cap: common.cap_search,
        ..Default::default()
    }
}

fn budget(common: &Common, mode: EvalMode, domain_exponent: usize) -> Result<Budget> {
    let exact_fits = field(common)?.size_f64(domain_exponent) <= common.cap_enum as f64;
    let mode = match mode {
        EvalMode::Exact => Mode::Exact,
        EvalMode::Sampled => Mode::Sampled,
        EvalMode::Auto if exact_fits => Mode::Exact,
        EvalMode::Auto => Mode::Sampled,
    };
    Ok(Budget {
        mode,
        enum_cap: common.cap_enum,
        samples: common.samples,
        seed: common.seed.value,
        workers: common.workers as usize,
    })
}

fn character_json(c: &bias::CharacterSum) -> Value {
    json!({
        "magnitude": c.magnitude(),
        "re": c.re,
        "im": c.im,
        "exact": c.is_exact(),
        "samples": c.sample_count,
    })
}

fn strings(polys: &[MultiPoly]) -> Vec<String> {
    polys.iter().map(MultiPoly::to_canonical_string).collect()
}

fn run_bias(a: &BiasArgs) -> Result<Report> {
    let f = one_poly(&a.common, &a.poly)?;
    let b = budget(&a.common, a.mode, f.n())?;
    let c = match b.mode {
        Mode::Exact => bias::exact_bias_with_workers(&f, b.enum_cap, b.workers)?,
        Mode::Sampled => bias::bias(&f, &b)?,
    };
    Ok(Report::new(json!({
        "poly": f.to_canonical_string(),
        "n": f.n(),
        "bias": character_json(&c),
        "magnitude": c.magnitude(),
    })))
}

fn run_gowers(a: &GowersArgs) -> Result<Report> {
    let f = one_poly(&a.common, &a.poly)?;
    let b = budget(&a.common, a.mode, f.n() * (a.d as usize + 1))?;
    let g = bias::gowers_norm(&f, a.d, &b)?;
    Ok(Report::new(json!({
        "poly": f.to_canonical_string(),
        "n": f.n(),
        "d": g.d,
        "norm": g.norm,
        "average": character_json(&g.average),
    })))
}

fn run_decompose(a: &DecomposeArgs) -> Result<Report> {
    let f = one_poly(&a.common, &a.poly)?;
    let cfg = pipeline(&a.common, a.t);
    let dec = if a.exact {
        decompose::exact_decompose(&f, a.s, &cfg)?
    } else {
        decompose::approx_decompose(&f, a.s, &cfg)?
    };
    let b = budget(&a.common, EvalMode::Auto, f.n())?;
    let measured = decompose::decomposition_error(&f, &dec, &b, cfg.decoder_cap)?;
    Ok(Report::new(json!({
        "poly": f.to_canonical_string(),
        "n": f.n(),
        "s": a.s,
        "t": a.t,
        "pipeline": if a.exact { "exact" } else { "approximate" },
        "measured_error": measured,
        "measured_exhaustively": b.mode == Mode::Exact,
        "decomposition": dec.to_json(),
    })))
}

fn run_rank2(a: &PolyArgs) -> Result<Report> {
    let f = one_poly(&a.common, &a.poly)?;
    let rank = decompose::quadratic_rank(&f)?;
    let matrix_rank = match rank {
        PolyRank::Finite(_) if f.functional_reduce().degree() == 2 => {
            let m = decompose::quadratic_form_matrix(&f.functional_reduce())?;
            Some(linalg::rank(f.ctx(), &m))
        }
        _ => None,
    };
    Ok(Report::new(json!({
        "poly": f.to_canonical_string(),
        "n": f.n(),
        "rank": rank,
        "matrix_rank": matrix_rank,
    })))
}

fn factor_of(common: &Common, gens: &str) -> Result<PolynomialFactor> {
    let polys = poly_list(common, gens)?;
    let n = polys[0].n();
    PolynomialFactor::new(field(common)?, n, polys)
}

fn run_regularize(a: &RegularizeArgs) -> Result<Report> {
    let base = factor_of(&a.common, &a.gens)?;
    let reg = factor::regularize(&base, a.s, &pipeline(&a.common, 2))?;
    let refines = factor::refines(&reg.factor, &base, a.common.cap_enum).ok();
    Ok(Report::new(json!({
        "n": base.n(),
        "s": a.s,
        "input": base.to_strings(),
        "factor": reg.factor.to_strings(),
        "degrees": reg.factor.degrees(),
        "complete": reg.complete,
        "iterations": reg.iterations,
        "replacements": reg.replacements,
        "dropped": reg.dropped,
        "refines_input": refines,
    })))
}

fn run_atoms(a: &AtomsArgs) -> Result<Report> {
    let fac = factor_of(&a.common, &a.gens)?;
    let hist = factor::atom_histogram(&fac, a.common.cap_enum)?;
    let total = field(&a.common)?.size_f64(fac.n());
    let mut csv = String::from("atom,count,frequency\n");
    let atoms: Vec<Value> = hist
        .iter()
        .map(|(k, &c)| {
            let label = k.0.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            csv.push_str(&format!("{label},{c},{}\n", c as f64 / total));
            json!({"atom": k.0, "count": c, "frequency": c as f64 / total})
        })
        .collect();
    let violations = match a.s {
        Some(s) => Some(factor::equidistribution_violations(&fac, s, a.common.cap_enum, a.common.cap_enum)?),
        None => None,
    };
    Ok(Report::new(json!({
        "n": fac.n(),
        "factor": fac.to_strings(),
        "nonempty_atoms": hist.len(),
        "atoms": atoms,
        "s": a.s,
        "equidistribution_violations": violations,
    }))
    .with_csv(csv))
}

fn run_nss(a: &NssArgs) -> Result<Report> {
    let (gens, q) = system(&a.common, &a.gens, &a.q)?;
    let spec = IdealSpec::new(gens, q)?;
    let cert = nullstellensatz::find_certificate(&spec, a.dmax, a.rmax, a.common.cap_unknowns as usize)?;
    Ok(Report::new(json!({
        "n": spec.n(),
        "generators": strings(spec.generators()),
        "query": spec.query().to_canonical_string(),
        "dmax": a.dmax,
        "rmax": a.rmax,
        "found": cert.is_some(),
        "certificate": cert.map(|c| c.to_json(&spec)),
    })))
}

fn run_weak_nss(a: &WeakNssArgs) -> Result<Report> {
    let gens = poly_list(&a.common, &a.gens)?;
    let found = nullstellensatz::weak_certificate(&gens, a.dmax, a.common.cap_unknowns as usize)?;
    Ok(Report::new(json!({
        "n": gens[0].n(),
        "generators": strings(&gens),
        "dmax": a.dmax,
        "found": found.is_some(),
        "empty_variety": found.is_some(),
        "certificate": found.map(|(spec, c)| c.to_json(&spec)),
    })))
}

fn run_radical(a: &RadicalArgs) -> Result<Report> {
    let (gens, q) = system(&a.common, &a.gens, &a.q)?;
    let spec = IdealSpec::new(gens, q)?;
    let r = nullstellensatz::radical_membership(&spec, a.dmax, a.common.cap_unknowns as usize, a.common.cap_enum)?;
    if !r.oracle_agrees {
        return Err(Error::Internal(
            "verified radical certificate contradicts the exhaustive oracle".into(),
        ));
    }
    Ok(Report::new(json!({
        "n": spec.n(),
        "generators": strings(spec.generators()),
        "query": spec.query().to_canonical_string(),
        "dmax": a.dmax,
        "member": r.member,
        "decided_by": match r.decided_by {
            DecidedBy::Certificate => "certificate",
            DecidedBy::Oracle => "oracle",
        },
        "oracle": r.oracle,
        "certificate": r.certificate.map(|(s, c)| {
            let mut v = c.to_json(&s);
            v["generators"] = json!(strings(s.generators()));
            v
        }),
    })))
}

fn count_config(common: &Common, s: u32, u: Option<u32>) -> CountConfig {
    CountConfig {
        s,
        accuracy_u: u,
        pipeline: pipeline(common, 2),
        ..Default::default()
    }
}

fn run_count(a: &CountArgs) -> Result<Report> {
    let gens = poly_list(&a.common, &a.gens)?;
    let ctx = field(&a.common)?;
    let n = gens[0].n();
    let r = match a.mode {
        CountMode::Exact => variety::count_points_exact(ctx, n, &gens, a.common.cap_enum)?,
        CountMode::Regularized => variety::count_points_regularized(ctx, n, &gens, &count_config(&a.common, a.s, a.u))?,
        CountMode::Sampled => variety::count_points_sampled(ctx, n, &gens, a.common.samples, a.common.seed.value)?,
    };
    let mut body = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
    body["generators"] = json!(strings(&gens));
    body["n"] = json!(n);
    Ok(Report::new(body))
}

fn run_profile(a: &ProfileArgs) -> Result<Report> {
    let gens = poly_list(&a.common, &a.gens)?;
    let n = gens[0].n();
    let cfg = count_config(&a.common, 1, None);
    let prof = variety::solution_profile(field(&a.common)?, n, &gens, a.s, &cfg)?;
    let mut body = serde_json::to_value(&prof).map_err(|e| Error::Internal(e.to_string()))?;
    body["generators"] = json!(strings(&gens));
    body["n"] = json!(n);
    Ok(Report::new(body))
}

fn rm_params(base: &RmBase) -> Result<RMParams> {
    let n = base
        .common
        .n
        .ok_or_else(|| Error::input("--n is required for Reed-Muller commands"))?;
    RMParams::new(base.common.p, n, base.d)
}

fn function_table(common: &Common, n: usize, arg: &FunctionArg) -> Result<Vec<u32>> {
    let ctx = field(common)?;
    match (&arg.center_poly, &arg.center_table) {
        (Some(poly), None) => {
            let f = parse_poly(ctx, read_input(poly)?.trim(), Some(n))?;
            ctx.domain_size(n, common.cap_enum, "domain p^n")?;
            Ok(f.truth_table())
        }
        (None, Some(table)) => {
            let values = read_input(table)?
                .split([',', ' ', '\n'])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|e| Error::input(format!("bad table entry '{t}': {e}"))))
                .collect::<Result<Vec<_>>>()?;
            crate::oracle::TruthTable::new(ctx.p(), n, values.clone())?;
            Ok(values)
        }
        _ => Err(Error::input("give exactly one of --center-poly or --center-table")),
    }
}

fn run_rm(cmd: &RmCommand) -> Result<Report> {
    match cmd {
        RmCommand::Mindist(b) => {
            let rm = rm_params(b)?;
            let m = rmcode::min_distance_empirical(&rm, b.common.cap_codewords, b.common.workers as usize)?;
            Ok(Report::new(json!({
                "n": rm.n,
                "d": rm.d,
                "min_distance": m.value,
                "nonzero_points": m.nonzero_points,
                "total_points": m.total_points,
                "formula": rm.min_distance_formula(),
                "matches_formula": m.matches_formula,
            })))
        }
        RmCommand::Listdecode(a) => {
            let rm = rm_params(&a.base)?;
            let center = function_table(&a.base.common, rm.n, &a.center)?;
            let l = rmcode::list_decode_brute(&rm, &center, a.radius, a.base.common.cap_codewords, a.base.common.workers as usize)?;
            let mut csv = String::from("index,poly,disagreements,distance\n");
            for e in &l.codewords {
                csv.push_str(&format!("{},{},{},{}\n", e.index, e.poly, e.disagreements, e.distance));
            }
            Ok(Report::new(json!({
                "n": rm.n,
                "d": rm.d,
                "radius": a.radius,
                "center": center,
                "list_size": l.len(),
                "codewords": l.codewords,
            }))
            .with_csv(csv))
        }
        RmCommand::Profile(a) => {
            let rm = rm_params(&a.base)?;
            let cfg = ProfileConfig {
                centers: if a.all_centers {
                    Centers::All
                } else {
                    Centers::Sampled {
                        random: a.random_centers,
                        noisy: a.noisy_centers,
                        noise: a.noise,
                    }
                },
                seed: a.base.common.seed.value,
                constant: a.bound_constant,
                codeword_cap: a.base.common.cap_codewords,
                ..Default::default()
            };
            let prof = rmcode::list_size_profile(&rm, a.s, &cfg)?;
            let csv = prof.to_csv();
            let body = serde_json::to_value(&prof).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Report::new(body).with_csv(csv))
        }
        RmCommand::Fourier(a) => {
            let n = a
                .common
                .n
                .ok_or_else(|| Error::input("--n is required for Reed-Muller commands"))?;
            let g = function_table(&a.common, n, &a.g)?;
            let four = rmcode::simplex_fourier(a.common.p, n, &g, a.common.cap_enum)?;
            let err = four
                .reconstruct()
                .max_abs_diff(&SimplexFunction::centered(a.common.p, n, &g)?);
            let p = a.common.p as usize;
            let mut csv = String::from("a,b,alpha\n");
            let mut nonzero = Vec::new();
            for (i, &alpha) in four.alpha.iter().enumerate() {
                let (ai, b) = (i / (p - 1), i % (p - 1) + 1);
                let av = crate::field::point_from_index(a.common.p, n, ai);
                let label = av.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                csv.push_str(&format!("{label},{b},{alpha}\n"));
                if alpha.abs() > 1e-12 {
                    nonzero.push(json!({"a": av, "b": b, "alpha": alpha}));
                }
            }
            Ok(Report::new(json!({
                "n": n,
                "coefficients": four.alpha.len(),
                "nonzero": nonzero,
                "reconstruction_error": err,
            }))
            .with_csv(csv))
        }
        RmCommand::Weakreg(a) => {
            let f = one_poly(&a.common, &a.poly)?;
            let family_polys = parse_poly_list(field(&a.common)?, &read_input(&a.gens)?, Some(f.n()))?;
            field(&a.common)?.domain_size(f.n(), a.common.cap_enum, "domain p^n")?;
            let family: Vec<Vec<u32>> = family_polys.iter().map(MultiPoly::truth_table).collect();
            let phi = SimplexFunction::embed(a.common.p, f.n(), &f.truth_table())?;
            let w = rmcode::weak_regularity(&phi, &family, a.eps)?;
            Ok(Report::new(json!({
                "n": f.n(),
                "eps": a.eps,
                "family": strings(&family_polys),
                "terms": w.terms.iter().map(|(i, al)| json!({"index": i, "alpha": al})).collect::<Vec<_>>(),
                "iterations": w.iterations,
                "iteration_bound": w.iteration_bound,
                "max_residual_correlation": w.max_residual_correlation,
            })))
        }
        RmCommand::Johnson(a) => {
            let j = rmcode::johnson_bound(a.common.p, a.eps)?;
            Ok(Report::new(json!({
                "eps": a.eps,
                "radius": j.radius,
                "list_cap": j.list_cap,
            })))
        }
        RmCommand::Rankgraph(a) => {
            let rm = rm_params(&a.base)?;
            let center = function_table(&a.base.common, rm.n, &a.center)?;
            let r = rmcode::rank_graph_reduction(&rm, &center, a.radius, a.k, a.base.common.cap_codewords)?;
            let mut body = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            body["n"] = json!(rm.n);
            body["radius"] = json!(a.radius);
            body["k"] = json!(a.k);
            Ok(Report::new(body))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Bias(_) => "bias",
        Command::Gowers(_) => "gowers",
        Command::Decompose(_) => "decompose",
        Command::Rank2(_) => "rank2",
        Command::Regularize(_) => "regularize",
        Command::Atoms(_) => "atoms",
        Command::Nss(_) => "nss",
        Command::WeakNss(_) => "weak-nss",
        Command::Radical(_) => "radical",
        Command::Count(_) => "count",
        Command::Profile(_) => "profile",
        Command::Rm(r) => match r.command {
            RmCommand::Mindist(_) => "rm mindist",
            RmCommand::Listdecode(_) => "rm listdecode",
            RmCommand::Profile(_) => "rm profile",
            RmCommand::Fourier(_) => "rm fourier",
            RmCommand::Weakreg(_) => "rm weakreg",
            RmCommand::Johnson(_) => "rm johnson",
            RmCommand::Rankgraph(_) => "rm rankgraph",
        },
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Bias(a) => &a.common,
        Command::Gowers(a) => &a.common,
        Command::Decompose(a) => &a.common,
        Command::Rank2(a) => &a.common,
        Command::Regularize(a) => &a.common,
        Command::Atoms(a) => &a.common,
        Command::Nss(a) => &a.common,
        Command::WeakNss(a) => &a.common,
        Command::Radical(a) => &a.common,
        Command::Count(a) => &a.common,
        Command::Profile(a) => &a.common,
        Command::Rm(r) => match &r.command {
            RmCommand::Mindist(b) => &b.common,
            RmCommand::Listdecode(a) => &a.base.common,
            RmCommand::Profile(a) => &a.base.common,
            RmCommand::Fourier(a) => &a.common,
            RmCommand::Weakreg(a) => &a.common,
            RmCommand::Johnson(a) => &a.common,
            RmCommand::Rankgraph(a) => &a.base.common,
        },
    }
}

fn run(c: &Command) -> Result<Report> {
    match c {
        Command::Bias(a) => run_bias(a),
        Command::Gowers(a) => run_gowers(a),
        Command::Decompose(a) => run_decompose(a),
        Command::Rank2(a) => run_rank2(a),
        Command::Regularize(a) => run_regularize(a),
        Command::Atoms(a) => run_atoms(a),
        Command::Nss(a) => run_nss(a),
        Command::WeakNss(a) => run_weak_nss(a),
        Command::Radical(a) => run_radical(a),
        Command::Count(a) => run_count(a),
        Command::Profile(a) => run_profile(a),
        Command::Rm(r) => run_rm(&r.command),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::DecompositionFailed { .. } => "decomposition_failed",
        Error::NotMeasurable { .. } => "not_measurable",
        Error::RegularizationFailed(_) => "regularization_failed",
        Error::Internal(_) => "internal",
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(format: Format, fields: &Map<String, Value>, csv: Option<&str>) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(fields).expect("maps always serialize");
            s.push('\n');
            s
        }
        Format::Text => fields
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", scalar_text(v)))
            .collect(),
        Format::Csv => match csv {
            // header lines carry the seed so the invocation stays reproducible
            Some(table) => format!(
                "# schema={SCHEMA} command={} seed={}\n{table}",
                scalar_text(&fields["command"]),
                fields["seed"]
            ),
            None => {
                let mut out = String::from("key,value\n");
                for (k, v) in fields {
                    out.push_str(&format!("{},{}\n", csv_field(k), csv_field(&scalar_text(v))));
                }
                out
            }
        },
    }
}

/// Parse `argv` (program name first), run the command and render its
/// output. Exit codes: 0 success, 1 domain/precondition, 2 resource cap,
/// 3 internal consistency.
pub fn dispatch<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 1 } else { 0 };
            return if code == 0 {
                CliOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CliOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let common = common_of(&cli.command);
    let mut fields = Map::new();
    fields.insert("schema".into(), json!(SCHEMA));
    fields.insert("command".into(), json!(command_name(&cli.command)));
    fields.insert("p".into(), json!(common.p));
    fields.insert("seed".into(), json!(common.seed.value));
    fields.insert("seed_source".into(), json!(if common.seed.from_entropy { "entropy" } else { "argv" }));
    match run(&cli.command) {
        Ok(report) => {
            for (k, v) in report.fields {
                fields.insert(k, v);
            }
            CliOutput {
                code: 0,
                stdout: render(common.format, &fields, report.csv.as_deref()),
                stderr: String::new(),
            }
        }
        Err(e) => {
            fields.insert(
                "error".into(),
                json!({"kind": error_kind(&e), "message": e.to_string(), "exit_code": e.exit_code()}),
            );
            CliOutput {
                code: e.exit_code(),
                stdout: render(common.format, &fields, None),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CliOutput {
        dispatch(std::iter::once("polystruct").chain(args.iter().copied()))
    }

    fn json_of(out: &CliOutput) -> Value {
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn bias_example() {
        let out = run(&["bias", "--p", "3", "--poly", "x1*x2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v = json_of(&out);
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["seed"], 0);
        assert!((v["magnitude"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn nss_example() {
        let out = run(&["nss", "--p", "3", "--gens", "x1;x1+1", "--q", "1", "--dmax", "1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v = json_of(&out);
        assert_eq!(v["found"], true);
        assert_eq!(v["certificate"]["verified"], true);
    }

    #[test]
    fn count_example() {
        let out = run(&["count", "--p", "3", "--gens", "x1*x2", "--n", "2", "--mode", "exact"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(json_of(&out)["exact_count"], 5);
    }

    #[test]
    fn unknown_subcommand_prints_usage() {
        let out = run(&["frobnicate"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("Usage"));
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(run(&["bias", "--p", "4", "--poly", "x1"]).code, 1);
        let out = run(&["count", "--p", "3", "--gens", "x1", "--n", "30"]);
        assert_eq!(out.code, 2);
        assert_eq!(json_of(&out)["error"]["kind"], "cap_exceeded");
    }

    #[test]
    fn identical_invocations_are_identical() {
        let args = ["bias", "--p", "5", "--poly", "x1*x2 + x3", "--mode", "sampled", "--seed", "9"];
        assert_eq!(run(&args), run(&args));
        let v = json_of(&run(&args));
        assert_eq!(v["seed"], 9);
    }

    #[test]
    fn entropy_seed_is_echoed() {
        let v = json_of(&run(&["bias", "--p", "3", "--poly", "x1", "--seed", "random"]));
        assert_eq!(v["seed_source"], "entropy");
        assert!(v["seed"].is_u64());
    }

    #[test]
    fn formats() {
        let out = run(&["rm", "profile", "--p", "3", "--n", "2", "--d", "1", "--format", "csv", "--random-centers", "3", "--noisy-centers", "2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let mut lines = out.stdout.lines();
        assert!(lines.next().unwrap().starts_with("# schema=polystruct/1"));
        assert_eq!(lines.next(), Some("radius,center_kind,list_size"));
        assert_eq!(lines.count(), 5);
        let out = run(&["rank2", "--p", "5", "--poly", "x1*x2 + x3*x4", "--format", "text"]);
        assert!(out.stdout.contains("rank: 2"));
        let out = run(&["rank2", "--p", "5", "--poly", "x1*x2", "--format", "csv"]);
        assert!(out.stdout.starts_with("key,value\n"));
    }

    #[test]
    fn rm_commands() {
        let v = json_of(&run(&["rm", "mindist", "--p", "5", "--n", "1", "--d", "2"]));
        assert_eq!(v["matches_formula"], true);
        let v = json_of(&run(&["rm", "listdecode", "--p", "3", "--n", "1", "--d", "1", "--center-table", "0,0,0", "--radius", "0.6667"]));
        assert_eq!(v["list_size"], 7);
        let v = json_of(&run(&["rm", "fourier", "--p", "3", "--n", "1", "--center-poly", "x1 + 1"]));
        assert!(v["reconstruction_error"].as_f64().unwrap() < 1e-9);
        let v = json_of(&run(&["rm", "weakreg", "--p", "3", "--poly", "2*x1", "--gens", "2*x1", "--eps", "0.5"]));
        assert_eq!(v["iterations"], 1);
        let v = json_of(&run(&["rm", "johnson", "--p", "3", "--eps", "0.04"]));
        assert!((v["list_cap"].as_f64().unwrap() - 625.0).abs() < 1e-9);
    }

    #[test]
    fn structural_commands() {
        for args in [
            vec!["gowers", "--p", "3", "--poly", "x1*x2"],
            vec!["decompose", "--p", "5", "--poly", "x1*x2"],
            vec!["decompose", "--p", "3", "--poly", "x1*x2 + x3*x4", "--s", "2", "--exact"],
            vec!["regularize", "--p", "3", "--gens", "x1*x2; x1*x2 + x3", "--s", "1"],
            vec!["atoms", "--p", "3", "--gens", "x1; x2", "--s", "1"],
            vec!["weak-nss", "--p", "3", "--gens", "x1; x1 + 1", "--dmax", "1"],
            vec!["radical", "--p", "3", "--gens", "x1^2", "--q", "x1", "--dmax", "2"],
            vec!["profile", "--p", "3", "--gens", "x1*x2 + x3*x4", "--s", "1"],
            vec!["count", "--p", "3", "--gens", "x1*x2", "--mode", "regularized", "--u", "1"],
        ] {
            let out = run(&args);
            assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        }
    }
}
