//! `sphsec`: run section constructions, braid computations, monodromy
//! tracking and feasibility queries from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sphere_sections::braid::{
    cable, cabled_relation_target, equal_in_artin, exponent_ledger, identity_suite, normal_form, permutation_of,
    relation_word, BraidWord, CablingVector,
};
use sphere_sections::elliptic::TorsionSpec;
use sphere_sections::feasibility::{cluster_modulus, decide, Recipe, Status};
use sphere_sections::io::{points_csv, read_configuration, read_path_spec};
use sphere_sections::mobius::{min_separation, set_distance, Configuration, MobiusMap, ProjectivePoint, Tolerances};
use sphere_sections::monodromy::{generator_loop, track, word_loop, ConfigPath, TrackOptions};
use sphere_sections::Error;

#[derive(Parser, Debug)]
#[command(name = "sphsec", version, about = "Sections of point configurations on the Riemann sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Minimum chordal separation for distinct points.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_sep: f64,
    /// Residual allowed in algebraic identities.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_eval: f64,
    /// Seed for random configurations and checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Auto,
    CrossRatio,
    Torsion,
    Planned,
    Spacelevel,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct m new points for a configuration of n points.
    Section {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Configuration JSON; a seeded random configuration when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Torsion order parameter for `--method torsion`.
        #[arg(long)]
        k: Option<usize>,
        /// Use points of exact order 4k with `--k`.
        #[arg(long)]
        primitive: bool,
    },
    /// Braid group computations on whitespace-separated signed generators.
    Braid {
        #[command(subcommand)]
        command: BraidCommand,
    },
    /// Follow a section's new points along a loop of configurations.
    Monodromy {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        primitive: bool,
        /// Basepoint configuration JSON; roots of unity when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Path spec JSON file.
        #[arg(long, conflicts_with_all = ["word", "generator"])]
        path: Option<PathBuf>,
        /// Braid word whose generator loops make up the path.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "generator")]
        word: Option<String>,
        #[arg(long)]
        generator: Option<usize>,
    },
    /// Report whether a section adding m points to n exists.
    Feasible {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BraidCommand {
    /// Garside normal form.
    Nf {
        #[arg(long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Decide equality of two words.
    Equal {
        #[arg(long)]
        n: usize,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Cable a word; `--lemma36` checks the cabled sphere relation instead.
    Cable {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(long)]
        lemma36: bool,
        #[arg(allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Per-strand twist exponents of a cabled word.
    Ledger {
        #[command(flatten)]
        vector: VectorArgs,
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Run the torsion identity suite.
    Identities {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct VectorArgs {
    #[arg(long)]
    n: usize,
    /// Cable width.
    #[arg(long)]
    k: usize,
    /// Cable braid on k strands; the sphere-compatible one when absent.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Twist exponents a_1..a_{n-1}, whitespace-separated; zeros when absent.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    c: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    t: i64,
}

/// Everything needed to rerun a command.
#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    parameters: Value,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    tolerances: Tolerances,
    seed: u64,
    version: &'static str,
}

/// Why a run stopped: library errors map onto exit codes, `Failed` is a
/// check that ran and came out negative.
enum Failure {
    Lib(Error),
    Io(String),
    Failed(Value),
    Infeasible(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<Emit, Failure>;

/// Output of a successful run.
enum Emit {
    Json(Value),
    Csv(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let out = cli.common.output.clone();
    match run(cli) {
        Ok(emit) => {
            let text = match emit {
                Emit::Json(v) => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Emit::Csv(s) => s,
            };
            match write(out, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(4)
                }
            }
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible { .. } => 2,
                e if e.is_numerical() => 3,
                _ => 4,
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Infeasible(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            eprintln!("error: no section for these parameters");
            ExitCode::from(2)
        }
        Err(Failure::Failed(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            eprintln!("error: check failed");
            ExitCode::from(3)
        }
    }
}

fn write(path: Option<PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Run {
    let common = cli.common;
    let tol = Tolerances {
        sep: common.tol_sep,
        eval: common.tol_eval,
    };
    if !(tol.sep > 0.0 && tol.eval > 0.0) {
        return Err(Error::InvalidArgument("tolerances must be positive".into()).into());
    }
    let manifest = |command, parameters: Value, input: Option<PathBuf>| RunManifest {
        command,
        parameters,
        input,
        output: common.output.clone(),
        tolerances: tol,
        seed: common.seed,
        version: env!("CARGO_PKG_VERSION"),
    };
    if common.format == Format::Csv && !matches!(cli.command, Command::Section { .. }) {
        return Err(Error::InvalidArgument("csv output is only available for section point clouds".into()).into());
    }
    match cli.command {
        Command::Section { n, m, input, method, k, primitive } => {
            let params = json!({"n": n, "m": m, "method": method, "k": k, "primitive": primitive});
            let config = load_config(n, input.as_ref(), common.seed, &tol)?;
            let verdict = decide(n, m)?;
            let recipe = choose_recipe(n, m, method, k, primitive)?;
            let Some(recipe) = recipe else {
                return Err(Failure::Infeasible(json!({
                    "manifest": manifest("section", params, input),
                    "verdict": verdict,
                })));
            };
            let out = recipe.run(&config, &tol)?;
            if out.new_points.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "{} gives {} points, not {m}",
                    recipe.name(),
                    out.new_points.len()
                ))
                .into());
            }
            if common.format == Format::Csv {
                return Ok(Emit::Csv(points_csv(&out.new_points, Some(&config))));
            }
            let report = out.report(&config, &tol);
            let equivariance = equivariance_residual(&recipe, &config, &out.new_points, common.seed, &tol);
            let verification = json!({
                "count": out.new_points.len(),
                "count_matches": report.count_matches,
                "min_separation": report.new_separation,
                "min_separation_to_old": report.old_separation,
                "equivariance_residual": equivariance,
                "valid": report.valid,
            });
            let body = json!({
                "manifest": manifest("section", params, input),
                "verdict": verdict,
                "configuration": config,
                "output": out,
                "verification": verification,
            });
            if report.valid {
                Ok(Emit::Json(body))
            } else {
                Err(Failure::Failed(body))
            }
        }
        Command::Feasible { n, m } => {
            let verdict = decide(n, m)?;
            Ok(Emit::Json(json!({
                "manifest": manifest("feasible", json!({"n": n, "m": m}), None),
                "verdict": verdict,
            })))
        }
        Command::Braid { command } => braid(command, &|c, p| manifest(c, p, None)),
        Command::Monodromy { n, m, method, k, primitive, input, path, word, generator } => {
            let params = json!({"n": n, "m": m, "method": method, "k": k, "primitive": primitive,
                "path": path, "word": word, "generator": generator});
            let base = match &input {
                Some(p) => read_configuration(&read(p)?, &tol)?,
                None => Configuration::roots_of_unity(n),
            };
            check_n(n, &base)?;
            let loop_path: ConfigPath = match (&path, &word, generator) {
                (Some(p), _, _) => read_path_spec(&read(p)?)?.build(&base, &tol)?,
                (_, Some(w), _) => word_loop(&base, BraidWord::parse(n, w)?.letters(), &tol)?,
                (_, _, Some(i)) => generator_loop(n, i, &base, &tol)?,
                _ => return Err(Error::InvalidArgument("give one of --path, --word or --generator".into()).into()),
            };
            if loop_path.n() != n {
                return Err(Error::InvalidArgument(format!("path moves {} points, expected {n}", loop_path.n())).into());
            }
            let Some(recipe) = choose_recipe(n, m, method, k, primitive)? else {
                return Err(Failure::Infeasible(json!({
                    "manifest": manifest("monodromy", params, input),
                    "verdict": decide(n, m)?,
                })));
            };
            let section = |c: &Configuration| Ok(recipe.run(c, &tol)?.new_points);
            let closed = loop_path.is_closed(&tol);
            let result = track(&section, &loop_path, &TrackOptions::default(), &tol)?;
            let body = json!({
                "manifest": manifest("monodromy", params, input),
                "closed_path": closed,
                "closes": result.closes(&tol),
                "tracking": result,
            });
            if closed && !result.closes(&tol) {
                Err(Failure::Failed(body))
            } else {
                Ok(Emit::Json(body))
            }
        }
    }
}

fn check_n(n: usize, config: &Configuration) -> Result<(), Failure> {
    if config.n() != n {
        return Err(Error::InvalidArgument(format!("configuration has {} points, --n is {n}", config.n())).into());
    }
    Ok(())
}

fn load_config(n: usize, input: Option<&PathBuf>, seed: u64, tol: &Tolerances) -> Result<Configuration, Failure> {
    let config = match input {
        Some(p) => read_configuration(&read(p)?, tol)?,
        None => random_config(&mut ChaCha8Rng::seed_from_u64(seed), n, tol)?,
    };
    check_n(n, &config)?;
    Ok(config)
}

fn random_point(rng: &mut impl Rng) -> ProjectivePoint {
    loop {
        let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-3 && r2 <= 1.0 {
            if let Ok(p) = ProjectivePoint::from_sphere(v) {
                return p;
            }
        }
    }
}

/// Uniform points on the sphere, redrawn until pairwise chordal distance
/// exceeds 0.1 (or a tenth of the typical spacing for large n).
fn random_config(rng: &mut impl Rng, n: usize, tol: &Tolerances) -> sphere_sections::Result<Configuration> {
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    let min_sep = (0.1f64).min(0.5 / (n as f64).sqrt());
    loop {
        let pts: Vec<ProjectivePoint> = (0..n).map(|_| random_point(rng)).collect();
        if min_separation(&pts) > min_sep {
            return Configuration::new(pts, tol);
        }
    }
}

/// The recipe for `method`, or `None` when `auto` finds no construction.
fn choose_recipe(n: usize, m: usize, method: Method, k: Option<usize>, primitive: bool) -> Result<Option<Recipe>, Failure> {
    let bad = |msg: String| Failure::Lib(Error::InvalidArgument(msg));
    let recipe = match method {
        Method::Auto => {
            let v = decide(n, m)?;
            return Ok(if v.status == Status::ExistsConstructive { v.recipe } else { None });
        }
        Method::CrossRatio => Recipe::CrossRatio { m },
        Method::Torsion => {
            let spec = match k {
                Some(k) => TorsionSpec { k, primitive },
                None => TorsionSpec::for_size(m).ok_or_else(|| bad(format!("no torsion construction of size {m}; give --k")))?,
            };
            spec.validate()?;
            Recipe::Torsion { spec }
        }
        Method::Planned => Recipe::Planned { m },
        Method::Spacelevel => {
            if n < 4 {
                return Err(Error::TooSmall { needed: 4, got: n }.into());
            }
            let q = cluster_modulus(n);
            if m == 0 || m % q != 0 {
                return Err(bad(format!("level sets give multiples of {q}, not {m}")));
            }
            Recipe::Spacelevel { levels: m / q }
        }
    };
    Ok(Some(recipe))
}

/// Distance between the section of a moved configuration and the moved
/// section, for a seeded random Möbius map.
fn equivariance_residual(
    recipe: &Recipe,
    config: &Configuration,
    points: &[ProjectivePoint],
    seed: u64,
    tol: &Tolerances,
) -> Option<f64> {
    if points.is_empty() {
        return Some(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let c = |r: &mut ChaCha8Rng| num_complex::Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
    for _ in 0..100 {
        let Ok(map) = MobiusMap::new(c(&mut rng), c(&mut rng), c(&mut rng), c(&mut rng)) else { continue };
        let fro: f64 = map.matrix().iter().flatten().map(|z| z.norm_sqr()).sum();
        if fro > 10.0 {
            continue;
        }
        let Ok(moved) = config.transform(&map, tol) else { continue };
        let Ok(out) = recipe.run(&moved, tol) else { continue };
        let expected: Vec<ProjectivePoint> = points.iter().map(|p| map.apply(p)).collect();
        return Some(set_distance(&out.new_points, &expected));
    }
    None
}

fn braid(command: BraidCommand, manifest: &dyn Fn(&'static str, Value) -> RunManifest) -> Run {
    match command {
        BraidCommand::Nf { n, word } => {
            let w = BraidWord::parse(n, &word)?;
            let nf = normal_form(&w);
            Ok(Emit::Json(json!({
                "manifest": manifest("braid nf", json!({"n": n, "word": word})),
                "normal_form": nf,
                "word": nf.to_word().to_string(),
                "permutation": permutation_of(&w),
            })))
        }
        BraidCommand::Equal { n, left, right } => {
            let (l, r) = (BraidWord::parse(n, &left)?, BraidWord::parse(n, &right)?);
            let equal = equal_in_artin(&l, &r)?;
            Ok(Emit::Json(json!({
                "manifest": manifest("braid equal", json!({"n": n, "left": left, "right": right})),
                "equal": equal,
                "verdict": if equal { "equal" } else { "not equal" },
            })))
        }
        BraidCommand::Cable { vector, lemma36, word } => {
            let v = cabling_vector(&vector)?;
            let params = json!({"vector": vector, "lemma36": lemma36, "word": word});
            if lemma36 {
                let r = relation_word(vector.n)?;
                let cabled = cable(&v, &r)?;
                let target = cabled_relation_target(vector.n, vector.k)?;
                let ledger = exponent_ledger(&v, &r)?;
                let equal = equal_in_artin(&cabled, &target)?;
                let body = json!({
                    "manifest": manifest("braid cable", params),
                    "vector": v,
                    "ledger": ledger,
                    "permutations_match": permutation_of(&cabled) == permutation_of(&target),
                    "equal_to_target": equal,
                    "strands": vector.n * vector.k,
                });
                return if equal { Ok(Emit::Json(body)) } else { Err(Failure::Failed(body)) };
            }
            let word = word.ok_or_else(|| Failure::Lib(Error::InvalidArgument("give a word or --lemma36".into())))?;
            let w = BraidWord::parse(vector.n, &word)?;
            let cabled = cable(&v, &w)?;
            Ok(Emit::Json(json!({
                "manifest": manifest("braid cable", params),
                "vector": v,
                "cabled": cabled.to_string(),
                "strands": cabled.strands(),
            })))
        }
        BraidCommand::Ledger { vector, word } => {
            let v = cabling_vector(&vector)?;
            let w = BraidWord::parse(vector.n, &word)?;
            Ok(Emit::Json(json!({
                "manifest": manifest("braid ledger", json!({"vector": vector, "word": word})),
                "ledger": exponent_ledger(&v, &w)?,
            })))
        }
        BraidCommand::Identities { n } => {
            let checks = identity_suite(n)?;
            let all = checks.iter().all(|c| c.holds);
            let body = json!({
                "manifest": manifest("braid identities", json!({"n": n})),
                "checks": checks,
                "all_hold": all,
            });
            if all {
                Ok(Emit::Json(body))
            } else {
                Err(Failure::Failed(body))
            }
        }
    }
}

fn cabling_vector(args: &VectorArgs) -> Result<CablingVector, Failure> {
    let n = args.n;
    if n < 3 {
        return Err(Error::TooSmall { needed: 3, got: n }.into());
    }
    let a: Vec<i64> = match &args.a {
        Some(text) => text
            .split_whitespace()
            .map(|s| s.parse().map_err(|e| Error::InvalidArgument(format!("twist exponent {s:?}: {e}"))))
            .collect::<Result<_, _>>()?,
        None => vec![0; n - 1],
    };
    if a.len() != n - 1 {
        return Err(Error::InvalidArgument(format!("expected {} twist exponents, got {}", n - 1, a.len())).into());
    }
    match &args.phi {
        Some(phi) => Ok(CablingVector::new(BraidWord::parse(args.k, phi)?, a, args.c, args.t)?),
        None => {
            let d = (n - 1) * (n - 2);
            if args.k < 2 || (args.k - 1) % d != 0 {
                return Err(Error::InvalidArgument(format!(
                    "without --phi, k must be 1 more than a positive multiple of {d}"
                ))
                .into());
            }
            Ok(CablingVector::sphere_compatible(n, (args.k - 1) / d, a)?)
        }
    }
}
