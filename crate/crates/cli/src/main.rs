use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use weightposet::grading::{delta1_poset, GradingError};
use weightposet::poset::{PosetError, PosetFile, DEFAULT_IDEAL_CAP};
use weightposet::rowmotion;
use weightposet::verify::{self, VerifyConfig, CSV_HEADER};
use weightposet::weyl;
use weightposet::{FinitePoset, OrbitReport, RootSystem, SimpleType, ZGrading};

const NUMBERING: &str = "\
Simple roots are numbered 1..n along the Dynkin diagram:
  A_n  1 - 2 - ... - n
  B_n  1 - ... - (n-1) => n      (alpha_n short)
  C_n  1 - ... - (n-1) <= n      (alpha_n long)
  D_n  1 - ... - (n-2) < (n-1), n
  E_n  1 - 2 - ... - (n-1), with n attached to n-3  (E6 highest root 1,2,3,2,1,2)
  F4   1 - 2 => 3 - 4             (alpha_1, alpha_2 long)
  G2   1 <= 2                    (alpha_2 long)
Root vectors are printed as coefficient lists in this basis.
Exit codes: 0 ok, 1 theorem check failed, 2 usage error, 3 enumeration cap exceeded.";

#[derive(Parser)]
#[command(name = "wposet", version, about = "Weight posets of Z-gradings of simple Lie algebras", after_help = NUMBERING)]
struct Cli {
    /// Maximum number of ideals or antichains enumerated for one poset.
    #[arg(long, global = true, env = "WPOSET_IDEAL_CAP", default_value_t = DEFAULT_IDEAL_CAP)]
    ideal_cap: usize,
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true, env = "WPOSET_PARALLELISM")]
    parallelism: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root system data.
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// Weyl group computations.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Z-gradings and their weight posets.
    Grading {
        #[command(subcommand)]
        cmd: GradingCmd,
    },
    /// Generic poset statistics.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Orbits of the reverse operator on antichains.
    Rowmotion {
        #[command(subcommand)]
        cmd: RowmotionCmd,
    },
    /// Machine checks; CHECK is `all`, `conjectures`, or a check name.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum RootsysCmd {
    Info {
        #[arg(long = "type")]
        stype: String,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Minimal-length coset representatives of W / W(0).
    Cosets(GradingArgs),
}

#[derive(Subcommand)]
enum GradingCmd {
    Build {
        #[command(flatten)]
        grading: GradingArgs,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Size, levels, rank profile, and both polynomials.
    Stats(PosetSource),
    /// Coefficients of the upper-ideal polynomial M(t).
    Mpoly(PosetSource),
    /// Coefficients of the antichain polynomial N(t).
    Npoly(PosetSource),
}

#[derive(Subcommand)]
enum RowmotionCmd {
    Orbits {
        #[command(flatten)]
        source: PosetSource,
        #[arg(long, value_enum, default_value_t = Emit::Json)]
        emit: Emit,
        /// Include the antichains of every orbit.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Args)]
struct GradingArgs {
    /// Type such as A3, E7, G2.
    #[arg(long = "type")]
    stype: String,
    /// Comma-separated nonnegative marks on the simple roots, in diagram order.
    #[arg(long)]
    marks: String,
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("source").required(true).args(["poset_file", "chains", "boolean", "stype"])))]
struct PosetSource {
    /// JSON file {size, covers: [[i,j],..], rank: [..]}.
    #[arg(long)]
    poset_file: Option<PathBuf>,
    /// Product of chains, e.g. 2,3,3.
    #[arg(long)]
    chains: Option<String>,
    /// Boolean algebra on n atoms.
    #[arg(long)]
    boolean: Option<usize>,
    /// Weight poset of a grading; requires --marks.
    #[arg(long = "type", requires = "marks")]
    stype: Option<String>,
    #[arg(long, requires = "stype")]
    marks: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(default_value = "all")]
    check: String,
    #[arg(long, default_value_t = 8)]
    max_rank: usize,
    /// Largest rank of the checks on the full positive root poset.
    #[arg(long, default_value_t = 8)]
    delta_plus_max_rank: usize,
    /// Largest rank of the sweeps over every standard grading.
    #[arg(long, default_value_t = 6)]
    all_standard_max_rank: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write one CSV row per check result.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Apply conjectures restricted to 1-standard gradings to every grading.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Csv,
    Dot,
}

enum Failure {
    Usage(String),
    Cap(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Cap(m) | Failure::Io(m) => m,
        }
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::CapExceeded(_) => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<GradingError> for Failure {
    fn from(e: GradingError) -> Self {
        match e {
            GradingError::Poset(p) => p.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn root_system(s: &str) -> Result<Arc<RootSystem>, Failure> {
    let t: SimpleType = s.parse().map_err(|e| Failure::Usage(format!("--type {s}: {e}")))?;
    RootSystem::new(t).map(Arc::new).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("--{flag}: bad entry {x:?}"))))
        .collect()
}

fn grading(stype: &str, marks: &str) -> Result<ZGrading, Failure> {
    let rs = root_system(stype)?;
    let marks = parse_list("marks", marks)?.into_iter().map(|m| m as u32).collect();
    Ok(ZGrading::new(rs, marks)?)
}

/// A poset together with its weight-poset context when built from a grading.
fn load(src: &PosetSource) -> Result<(FinitePoset, Option<weightposet::WeightPoset>), Failure> {
    if let Some(path) = &src.poset_file {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let file: PosetFile =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok((FinitePoset::from_file(&file)?, None));
    }
    if let Some(c) = &src.chains {
        return Ok((FinitePoset::chain_product(&parse_list("chains", c)?)?, None));
    }
    if let Some(n) = src.boolean {
        return Ok((FinitePoset::boolean_algebra(n)?, None));
    }
    let (Some(t), Some(m)) = (&src.stype, &src.marks) else {
        return Err(Failure::Usage("no poset source given".into()));
    };
    let wp = delta1_poset(&grading(t, m)?)?;
    Ok((wp.poset.clone(), Some(wp)))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn orbit_csv(report: &OrbitReport) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(["orbit", "size", "avg_antichain_num", "avg_antichain_den", "avg_ideal_num", "avg_ideal_den", "lagrangian"])
        .map_err(err)?;
    for (i, o) in report.per_orbit.iter().enumerate() {
        w.write_record([
            i.to_string(),
            o.size.to_string(),
            o.avg_antichain_size.numer().to_string(),
            o.avg_antichain_size.denom().to_string(),
            o.avg_ideal_size.numer().to_string(),
            o.avg_ideal_size.denom().to_string(),
            o.lagrangian_count.map(|c| c.to_string()).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Failure::Io(e.to_string()))?).map_err(|e| Failure::Io(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cap = cli.ideal_cap;
    match cli.command {
        Command::Rootsys { cmd: RootsysCmd::Info { stype } } => {
            let rs = root_system(&stype)?;
            print_json(&json!({
                "type": rs.stype().to_string(),
                "rank": rs.rank(),
                "num_positive_roots": rs.num_positive(),
                "theta": rs.theta(),
                "h": rs.h(),
                "h_star": rs.h_star(),
                "exponents": rs.exponents(),
                "long_simple": rs.long_simple_roots().iter().map(|i| i + 1).collect::<Vec<_>>(),
            }));
        }
        Command::Weyl { cmd: WeylCmd::Cosets(args) } => {
            let g = grading(&args.stype, &args.marks)?;
            let rs = g.root_system();
            let reps = weyl::coset_reps(&g).map_err(|e| Failure::Usage(e.to_string()))?;
            let out: Vec<Value> = reps
                .iter()
                .map(|r| {
                    json!({
                        "word": r.word.one_based(),
                        "length": r.length,
                        "inversion_set": r.inv_set.iter().map(|i| rs.root(i)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!(out));
        }
        Command::Grading { cmd: GradingCmd::Build { grading: args, emit } } => {
            let wp = delta1_poset(&grading(&args.stype, &args.marks)?)?;
            match emit {
                Emit::Json => print_json(&wp.to_json()),
                Emit::Dot => print!("{}", wp.to_dot()),
                Emit::Csv => return Err(Failure::Usage("grading build supports --emit json|dot".into())),
            }
        }
        Command::Poset { cmd } => match cmd {
            PosetCmd::Stats(src) => {
                let (p, _) = load(&src)?;
                let (m, n) = p.polynomials(cap)?;
                print_json(&json!({
                    "size": p.size(),
                    "covers": p.covers().len(),
                    "components": p.components().len(),
                    "level_sizes": p.level_sizes(),
                    "rank_profile": p.rank_profile(cap)?,
                    "num_ideals": m.eval(1),
                    "M": m,
                    "N": n,
                }));
            }
            PosetCmd::Mpoly(src) => print_json(&json!(load(&src)?.0.m_polynomial(cap)?)),
            PosetCmd::Npoly(src) => print_json(&json!(load(&src)?.0.n_polynomial(cap)?)),
        },
        Command::Rowmotion { cmd: RowmotionCmd::Orbits { source, emit, verbose } } => {
            let report = match load(&source)? {
                (_, Some(wp)) => rowmotion::weight_poset_orbits(&wp, cap)?,
                (p, None) => rowmotion::orbits(&p, cap)?,
            };
            match emit {
                Emit::Json if verbose => print_json(&report.verbose_json()),
                Emit::Json => print_json(&json!(report)),
                Emit::Csv => print!("{}", orbit_csv(&report)?),
                Emit::Dot => return Err(Failure::Usage("rowmotion orbits supports --emit json|csv".into())),
            }
        }
        Command::Verify(args) => return run_verify(args, cap),
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs, cap: usize) -> Result<u8, Failure> {
    let checks = verify::select(&args.check).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown check {:?}; expected all, conjectures, or one of: {}",
            args.check,
            verify::CHECK_NAMES.join(", ")
        ))
    })?;
    let cfg = VerifyConfig {
        max_rank: args.max_rank,
        ideal_cap: cap,
        delta_plus_max_rank: args.delta_plus_max_rank,
        all_standard_max_rank: args.all_standard_max_rank,
        force: args.force,
    };
    let report = verify::run(&cfg, &checks);
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    match &args.report {
        Some(path) => fs::write(path, text + "\n").map_err(|e| io_err(path, e))?,
        None => println!("{text}"),
    }
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
        w.write_record(CSV_HEADER).map_err(|e| io_err(path, e))?;
        for row in report.csv_records() {
            w.write_record(&row).map_err(|e| io_err(path, e))?;
        }
        w.flush().map_err(|e| io_err(path, e))?;
    }
    let failures = report.theorem_failures();
    let evidence_false = report.checks.iter().filter(|c| c.holds == Some(false)).count();
    eprintln!(
        "{} checks: {} pass, {} fail, {} evidence ({} not holding), {} skipped",
        report.checks.len(),
        report.count(verify::Status::Pass),
        failures.len(),
        report.count(verify::Status::Evidence),
        evidence_false,
        report.count(verify::Status::Skipped),
    );
    for f in &failures {
        eprintln!("FAIL {} [{}]", f.name, f.scope);
    }
    Ok(if !failures.is_empty() {
        1
    } else if report.cap_exceeded() {
        3
    } else {
        0
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallelism {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("marks", "1, 0,2").ok(), Some(vec![1, 0, 2]));
        assert!(matches!(parse_list("marks", "1,x"), Err(Failure::Usage(_))));
    }

    #[test]
    fn cap_errors_map_to_exit_3() {
        let f: Failure = PosetError::CapExceeded(5).into();
        assert_eq!(f.code(), 3);
    }
}
