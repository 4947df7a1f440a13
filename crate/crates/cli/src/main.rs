use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use polarcode::constructions::{self as cons, CodeSpec, CombinationOutcome, ConstructionResult};
use polarcode::gfcode::{self, CodewordBody, GeometryDoc, IncidenceMatrix, ScanOptions, SCHEMA};
use polarcode::kleinmap::Klein;
use polarcode::polarspace::{bound_min_weight_dual, kspace_total, Family, PolarSpace};
use polarcode::verify;
use polarcode::Error;

/// Point counts up to which k-spaces are enumerated rather than counted by formula.
const ENUMERATION_LIMIT: usize = 5000;

/// Codes and codewords of classical polar spaces.
#[derive(Parser, Debug, Serialize, Deserialize)]
#[command(name = "polar-code-lab", version)]
struct Cli {
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write this run's configuration as JSON, for `replay`.
    #[arg(long, global = true)]
    #[serde(skip)]
    save_config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize, Deserialize)]
enum Command {
    /// Point and k-space counts of a polar space.
    Geometry(GeometryArgs),
    /// Build a named codeword and check it against its incidence matrix.
    Construct(ConstructArgs),
    /// Weight distribution of the dual code.
    Scan(ScanArgs),
    /// Write the incidence matrix as alist or JSON.
    Export(ExportArgs),
    /// Spread of Q(4,q) plus random lines: excess, good line, spread recovery.
    Cover(CoverArgs),
    /// Re-run a saved configuration.
    Replay {
        config: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SpaceArgs {
    /// Q, Qplus, Qminus, H or W.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Projective dimension of the ambient space.
    #[arg(long)]
    n: usize,
    /// Field order (its square root for H).
    #[arg(long)]
    q: u64,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct GeometryArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum ConstructionName {
    TwoReguli,
    TwoPencils,
    RegulusCombination,
    ComplementOvoid,
    RegulusSwitch,
    WqExample,
    HermitianPair,
    PerpCones,
    PolarPair,
    ComplementCone,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct ConstructArgs {
    name: ConstructionName,
    #[arg(long)]
    q: u64,
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Symbol alpha in GF(p).
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    /// Number of switched reguli pairs for regulus-switch.
    #[arg(long, default_value_t = 0)]
    i: u64,
    /// Number of shared lines for regulus-combination.
    #[arg(long, default_value_t = 0)]
    common: usize,
    /// affine, affine-plus-pair, ovoid-plus-pair (wq-example); curve, cone
    /// (hermitian-pair); nonsingular, point-radical (polar-pair);
    /// parabolic-hyperplane, tangent-cone, max-weight (complement-cone).
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct ScanArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Dimension of the k-spaces (default: generators).
    #[arg(long)]
    k: Option<usize>,
    /// Full scans run when p^nullity <= 2^max_nullity.
    #[arg(long, default_value_t = gfcode::DEFAULT_MAX_NULLITY)]
    max_nullity: u32,
    /// Fall back to combinations of at most this many basis vectors.
    #[arg(long)]
    partial: Option<usize>,
    #[arg(long)]
    min_weight: Option<u64>,
    #[arg(long)]
    max_weight: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum ExportTarget {
    Alist,
    Json,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct ExportArgs {
    #[arg(long)]
    target: ExportTarget,
    #[arg(long)]
    out: PathBuf,
    /// Re-export a geometry JSON file instead of building the space.
    #[arg(long, conflicts_with_all = ["family", "n", "q"])]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_family, required_unless_present = "input")]
    family: Option<Family>,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug, Serialize, Deserialize)]
struct CoverArgs {
    #[arg(long)]
    q: u64,
    /// Extra lines added to the spread.
    #[arg(long, default_value_t = 1)]
    r: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s.to_ascii_lowercase().as_str() {
        "q" | "parabolic" => Ok(Family::Parabolic),
        "q+" | "qplus" | "hyperbolic" => Ok(Family::Hyperbolic),
        "q-" | "qminus" | "elliptic" => Ok(Family::Elliptic),
        "h" | "hermitian" => Ok(Family::Hermitian),
        "w" | "symplectic" => Ok(Family::Symplectic),
        _ => Err(format!("unknown family {s:?}; use Q, Qplus, Qminus, H or W")),
    }
}

/// Failure of a run, carrying its exit code.
enum Failure {
    Verification(String),
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Lib(e) => match e {
                Error::Parameter(_) | Error::Domain(_) | Error::UnsupportedPolarity(_) => 2,
                Error::ScanRefused(_) => 3,
                Error::Io(_) | Error::Json(_) => 4,
                Error::Resource(_) | Error::NotFound(_) | Error::Inconsistency(_) => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Verification(m) | Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Run = Result<(), Failure>;

fn checksum(path: &Path) -> Result<String, Error> {
    let bytes = std::fs::read(path)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

fn level_name(k: usize) -> String {
    match k {
        0 => "points".into(),
        1 => "lines".into(),
        2 => "planes".into(),
        _ => format!("{k}-spaces"),
    }
}

fn space(a: &SpaceArgs) -> Result<PolarSpace, Error> {
    PolarSpace::new(a.family, a.n, a.q)
}

fn cmd_geometry(a: &GeometryArgs) -> Run {
    let ps = space(&a.space)?;
    let enumerate = ps.num_points() <= ENUMERATION_LIMIT;
    let mut parts = vec![format!("points: {}", ps.num_points())];
    let mut counts = Vec::new();
    for k in 1..=ps.gen_dim() {
        let formula = kspace_total(ps.family(), ps.n(), k, ps.q())?;
        let count = if enumerate {
            let c = ps.num_kspaces(k)? as u128;
            if c != formula {
                return Err(Failure::Verification(format!(
                    "{} enumerated, {formula} by formula",
                    level_name(k)
                )));
            }
            c
        } else {
            formula
        };
        parts.push(format!("{}: {count}", level_name(k)));
        counts.push((k, count));
    }
    println!("{}", ps.label());
    println!("{}", parts.join(", "));
    println!("generator dimension: {}", ps.gen_dim());
    if !enumerate {
        println!("(k-space counts from closed forms)");
    }
    if let Some(path) = &a.json {
        #[derive(Serialize)]
        struct Summary {
            schema: &'static str,
            label: String,
            points: usize,
            generator_dim: usize,
            kspaces: Vec<(usize, u128)>,
        }
        let doc = Summary {
            schema: SCHEMA,
            label: ps.label(),
            points: ps.num_points(),
            generator_dim: ps.gen_dim(),
            kspaces: counts,
        };
        gfcode::write_json(&doc, path)?;
        println!("sha256: {}", checksum(path)?);
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, what: &str, name: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{name} needs --{what}")))
}

fn variant<'a>(a: &'a ConstructArgs, default: &'a str) -> &'a str {
    a.variant.as_deref().unwrap_or(default)
}

fn build(a: &ConstructArgs) -> Result<ConstructionResult, Failure> {
    use ConstructionName as N;
    let q = a.q;
    let bad_variant = |v: &str| Failure::Usage(format!("unknown variant {v:?} for {:?}", a.name));
    let r = match a.name {
        N::TwoReguli => cons::two_reguli(&Klein::new(q)?, a.alpha)?,
        N::TwoPencils => cons::two_pencils(&Klein::new(q)?, a.alpha)?,
        N::RegulusSwitch => cons::regulus_switch(&Klein::new(q)?, a.i)?,
        N::RegulusCombination => match cons::regulus_combination(&Klein::new(q)?, a.common, a.alpha)? {
            CombinationOutcome::Found(r) => r,
            CombinationOutcome::NotFound { common, pairs_tried } => {
                return Err(Failure::Lib(Error::NotFound(format!(
                    "no two hyperbolic quadrics of PG(3,{q}) share exactly {common} lines \
                     ({pairs_tried} pairs tried)"
                ))))
            }
        },
        N::ComplementOvoid => {
            let fam = a.family.unwrap_or(Family::Parabolic);
            let n = if fam == Family::Hyperbolic { 5 } else { 4 };
            cons::complement_ovoid(&PolarSpace::new(fam, n, q)?, None)?
        }
        N::WqExample => {
            let v = match variant(a, "affine") {
                "affine" => cons::WqVariant::Affine,
                "affine-plus-pair" => cons::WqVariant::AffinePlusPair,
                "ovoid-plus-pair" => cons::WqVariant::OvoidPlusPair,
                other => return Err(bad_variant(other)),
            };
            cons::wq_example(&PolarSpace::new(Family::Symplectic, 3, q)?, v)?
        }
        N::HermitianPair => {
            let v = match variant(a, "curve") {
                "curve" => cons::HermitianVariant::CurvePair,
                "cone" => cons::HermitianVariant::ConePair,
                other => return Err(bad_variant(other)),
            };
            cons::hermitian_pair(&PolarSpace::new(Family::Hermitian, 5, q)?, v, a.alpha)?
        }
        N::PerpCones => {
            let fam = a.family.unwrap_or(Family::Elliptic);
            let n = if fam == Family::Hermitian { 4 } else { 5 };
            cons::disjoint_perp_cones(&PolarSpace::new(fam, n, q)?, a.alpha)?
        }
        N::PolarPair => {
            let fam = a.family.unwrap_or(Family::Hyperbolic);
            let n = need(a.n, "n", "polar-pair")?;
            let s = match variant(a, "nonsingular") {
                "nonsingular" => cons::PairSection::NonSingular,
                "point-radical" => cons::PairSection::PointRadical,
                other => return Err(bad_variant(other)),
            };
            cons::polar_pair(&PolarSpace::new(fam, n, q)?, s, a.alpha)?
        }
        N::ComplementCone => {
            let fam = need(a.family, "family", "complement-cone")?;
            let n = need(a.n, "n", "complement-cone")?;
            let k = a.k.unwrap_or(1);
            let spec = match variant(a, "max-weight") {
                "max-weight" => cons::ConeSpec::MaxWeight,
                "parabolic-hyperplane" => cons::ConeSpec::ParabolicHyperplane,
                "tangent-cone" => cons::ConeSpec::TangentCone,
                other => return Err(bad_variant(other)),
            };
            cons::complement_cone(&PolarSpace::new(fam, n, q)?, k, spec)?
        }
    };
    Ok(r)
}

#[derive(Serialize)]
struct ConstructionDoc<'a> {
    schema: &'static str,
    run: &'a Cli,
    name: &'a str,
    code: CodeSpec,
    weight: u64,
    predicted_weight: u64,
    formula: &'a str,
    witness: &'a str,
    dual_check: &'a str,
    codeword: CodewordBody,
}

fn cmd_construct(a: &ConstructArgs, cli: &Cli) -> Run {
    let r = build(a)?;
    let check = r.check()?;
    let verdict = if check.dual.passed() {
        "PASS".to_string()
    } else {
        format!("FAIL {:?}", check.dual)
    };
    let bound = bound_min_weight_dual(r.code.family, r.code.n, r.code.k, r.code.q)?;
    println!("{} in {}", r.name, r.code.label());
    println!("configuration: {}", r.witness);
    println!("weight: {}", check.weight);
    println!("predicted weight: {} ({})", r.predicted_weight, r.formula);
    println!("lower bound on minimum weight: {bound}");
    println!("dual codeword: {verdict}");
    if let Some(path) = &a.json {
        let doc = ConstructionDoc {
            schema: SCHEMA,
            run: cli,
            name: &r.name,
            code: r.code,
            weight: check.weight,
            predicted_weight: r.predicted_weight,
            formula: &r.formula,
            witness: &r.witness,
            dual_check: &verdict,
            codeword: gfcode::codeword_doc(&r.codeword).codeword,
        };
        gfcode::write_json(&doc, path)?;
        println!("sha256: {}", checksum(path)?);
    }
    if !check.passed() {
        return Err(Failure::Verification(format!(
            "weight {} vs predicted {}, dual check {verdict}",
            check.weight, r.predicted_weight
        )));
    }
    Ok(())
}

fn cmd_scan(a: &ScanArgs) -> Run {
    let ps = space(&a.space)?;
    let k = a.k.unwrap_or(ps.gen_dim());
    let m = gfcode::build_incidence(&ps, k)?;
    let window = match (a.min_weight, a.max_weight) {
        (None, None) => None,
        (lo, hi) => Some((lo.unwrap_or(0), hi.unwrap_or(u64::MAX))),
    };
    let opts = ScanOptions {
        max_nullity: a.max_nullity,
        window,
        partial_support: a.partial,
        ..ScanOptions::default()
    };
    let rep = gfcode::scan_dual_weights(&m, &opts)?;
    println!("{}", m.label);
    println!("mode: {}", rep.mode_label());
    println!("length: {}, rank: {}, nullity: {}", m.n_cols, rep.rank, rep.nullity);
    println!("vectors visited: {}", rep.visited);
    match rep.min_nonzero {
        Some(w) => println!("min nonzero weight: {w}"),
        None => println!("min nonzero weight: none"),
    }
    println!("max weight: {}", rep.max_weight);
    let all_even = rep.histogram.keys().all(|w| w % 2 == 0);
    println!("all weights even: {}", if all_even { "yes" } else { "no" });
    println!("weight distribution:");
    for (w, c) in &rep.histogram {
        println!("  {w:>6} {c}");
    }
    if let Some(path) = &a.json {
        gfcode::write_json(&rep, path)?;
        println!("sha256: {}", checksum(path)?);
    }
    Ok(())
}

fn cmd_export(a: &ExportArgs) -> Run {
    let (doc, matrix): (Option<GeometryDoc>, IncidenceMatrix) = match &a.input {
        Some(path) => {
            let doc: GeometryDoc = gfcode::read_json(path)?;
            let m = doc.to_matrix()?;
            (Some(doc), m)
        }
        None => {
            let args = SpaceArgs {
                family: need(a.family, "family", "export")?,
                n: need(a.n, "n", "export")?,
                q: need(a.q, "q", "export")?,
            };
            let ps = space(&args)?;
            let k = a.k.unwrap_or(ps.gen_dim());
            let m = gfcode::build_incidence(&ps, k)?;
            let doc = (a.target == ExportTarget::Json).then(|| gfcode::geometry_doc(&ps, &m));
            (doc, m)
        }
    };
    match a.target {
        ExportTarget::Alist => gfcode::export_alist(&matrix, &a.out)?,
        ExportTarget::Json => {
            let doc = doc.ok_or_else(|| Failure::Usage("JSON export needs a geometry".into()))?;
            gfcode::write_json(&doc, &a.out)?;
        }
    }
    println!("{}: {} rows, {} columns", matrix.label, matrix.n_rows(), matrix.n_cols);
    println!("wrote {}", a.out.display());
    println!("sha256: {}", checksum(&a.out)?);
    Ok(())
}

fn cmd_cover(a: &CoverArgs, seed: u64) -> Run {
    let q = a.q;
    let ps = PolarSpace::new(Family::Parabolic, 4, q)?;
    let spread = verify::spread_q4(&ps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cover = verify::spread_plus_lines(&ps, &spread, a.r, &mut rng)?;
    let prof = verify::excess_profile(&ps, &cover)?;
    let expected = a.r as u64 * (q + 1);
    println!("{}: spread of {} lines plus {} random lines (seed {seed})", ps.label(), spread.len(), a.r);
    println!("total excess: {} (r(q+1) = {expected})", prof.total);
    let mut ok = prof.total == expected;
    if a.r as u64 <= q {
        match verify::find_good_line(&ps, &cover)? {
            Some(l) => println!("good line: {l}"),
            None => {
                println!("good line: none");
                ok = false;
            }
        }
    }
    let recovered = verify::extract_spread(&ps, &cover)?;
    let same = recovered.as_deref() == Some(&spread[..]);
    println!(
        "extracted spread: {}",
        match &recovered {
            Some(_) if same => "the original spread",
            Some(_) => "a different spread",
            None => "none",
        }
    );
    if 6 * (a.r as u64) < q + 4 && !same {
        ok = false;
    }
    if !ok {
        return Err(Failure::Verification("cover checks failed".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> Run {
    if let Some(path) = &cli.save_config {
        gfcode::write_json(cli, path)?;
    }
    match &cli.command {
        Command::Geometry(a) => cmd_geometry(a),
        Command::Construct(a) => cmd_construct(a, cli),
        Command::Scan(a) => cmd_scan(a),
        Command::Export(a) => cmd_export(a),
        Command::Cover(a) => cmd_cover(a, cli.seed),
        Command::Replay { config } => {
            let saved: Cli = gfcode::read_json(config)?;
            if matches!(saved.command, Command::Replay { .. }) {
                return Err(Failure::Usage("a saved configuration cannot be a replay".into()));
            }
            run(&Cli {
                save_config: None,
                ..saved
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
