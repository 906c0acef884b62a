use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use goodrep::constructions::borel_group;
use goodrep::descent::{DescentInput, GroupGaloisAction};
use goodrep::field::galois::GaloisExtension;
use goodrep::field::Field;
use goodrep::grouprep::{Mode, Representation};
use goodrep::io::{
    builtin_nt_module, builtin_rep, parse_group, parse_mode, parse_nt_module, parse_rep, parse_subspaces,
};
use goodrep::linalg::Subspace;
use goodrep::suite::{
    run_charp_freeness, run_charp_invariance, run_coinduce, run_descent, run_freeness, run_invariance, run_nt_witness,
    run_pgl2, run_suite, scenarios, suite_names, CertStatus, Certificate, CoinduceInput, Run, SuiteConfig,
};

/// Constructs representations and checks goodness properties exactly.
#[derive(Parser)]
#[command(name = "goodrep", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Certificate file (a directory for `suite`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Maximum number of group elements to enumerate.
    #[arg(long, global = true)]
    element_cap: Option<usize>,
    /// `exhaustive` or `sample:<n>`.
    #[arg(long, global = true, default_value = "exhaustive")]
    mode: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Galois descent of an upper-triangular action.
    Descend(DescendArgs),
    /// Set-theoretic freeness off the union of a family of subspaces.
    VerifyFree(RepArgs),
    /// Invariance of each subspace of a family.
    CheckInvariant(RepArgs),
    /// Non-properness certificate for an N(T)-module.
    NtWitness(NtArgs),
    /// Goodness of V plus a coinduced module (the running example by default).
    Coinduce(CoinduceArgs),
    /// Bundled examples.
    #[command(subcommand)]
    Example(Example),
    /// Runs a bundled scenario suite and writes one certificate per scenario.
    Suite {
        /// One of: upper-triangular, descent-gf9, nt-core, charp-sl2, pgl2, coinduce, all.
        name: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    RationalPoints,
    Entrywise,
}

#[derive(Args)]
struct DescendArgs {
    /// Top field of the extension over its prime field, e.g. `GF(3^2;modulus=[2,2,1])`.
    #[arg(long)]
    ext: String,
    /// Group/representation file, or `upper-triangular:n` for `B_n` over the top field.
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "rational-points")]
    action: Action,
    /// Number of seeded samples for the closed-image equations.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Args)]
struct RepArgs {
    /// Representation file, `upper-triangular:n` or `sl2-sym:d`.
    #[arg(long)]
    rep: String,
    /// Field for builtin representations.
    #[arg(long, default_value = "GF(3)")]
    field: String,
    /// Subspace list file; builtins default to their own family.
    #[arg(long)]
    subspaces: Option<PathBuf>,
}

#[derive(Args)]
struct NtArgs {
    /// Module file or `nt-blocks:{i:c,...};m0;m0p`.
    #[arg(long)]
    module: String,
    /// Field for `nt-blocks` modules.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Subspace list file; defaults to `{0}`.
    #[arg(long)]
    subspaces: Option<PathBuf>,
}

#[derive(Args)]
struct CoinduceArgs {
    /// Group G (a representation file; only its group is used).
    #[arg(long, requires_all = ["normal", "wrep", "m_family", "vrep", "v_family"])]
    group: Option<PathBuf>,
    /// Normal subgroup H (a representation file; only its group is used).
    #[arg(long)]
    normal: Option<PathBuf>,
    /// Representation W of H.
    #[arg(long)]
    wrep: Option<PathBuf>,
    /// Subspace list M_i of W.
    #[arg(long)]
    m_family: Option<PathBuf>,
    /// Representation V of G.
    #[arg(long)]
    vrep: Option<PathBuf>,
    /// Subspace list V_j of V.
    #[arg(long)]
    v_family: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Example {
    /// `B_n` by left multiplication on upper-triangular matrices.
    UpperTriangular {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "GF(3)")]
        field: String,
    },
    /// SL₂ on forms of degree 2p-2 plus the standard module.
    Sl2Charp {
        #[arg(long, default_value = "GF(3)")]
        field: String,
    },
    /// Fixed points of the swap generate V₂, V₄ and V₂ ⊕ V₄.
    Pgl2Invariants {
        #[arg(long, default_value = "GF(5)")]
        field: String,
    },
}

/// A usage or input problem, reported with exit code 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn capped(rep: Representation, cap: Option<usize>) -> Result<Representation> {
    match cap {
        None => Ok(rep),
        Some(c) => {
            Ok(Representation::new(&rep.group().clone().with_cap(c), rep.field(), rep.dim(), rep.images().to_vec())?)
        }
    }
}

fn load_rep(spec: &str, field: &str, cap: Option<usize>) -> Result<(Representation, Vec<Subspace>)> {
    let f = Field::parse(field)?;
    if let Some(b) = builtin_rep(spec, &f) {
        let b = b?;
        return Ok((capped(b.rep, cap)?, b.family));
    }
    Ok((parse_rep(&read(Path::new(spec))?, cap)?, Vec::new()))
}

fn load_family(path: &Option<PathBuf>, default: Vec<Subspace>) -> Result<Vec<Subspace>> {
    match path {
        Some(p) => Ok(parse_subspaces(&read(p)?)?),
        None => Ok(default),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn emit(cert: &Certificate, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(cert)? + "\n";
    match out {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_for(status: CertStatus) -> ExitCode {
    match status {
        CertStatus::Verified | CertStatus::Evidence => ExitCode::SUCCESS,
        CertStatus::Refuted => ExitCode::from(1),
        CertStatus::Error => ExitCode::from(2),
    }
}

fn single(cli: &Cli, mode: Mode) -> Result<Run, Usage> {
    let cap = cli.element_cap;
    let seed = cli.seed;
    Ok(match &cli.command {
        Command::Descend(a) => {
            let top = Field::parse(&a.ext)?;
            let ext = GaloisExtension::of(&top)?;
            let rep = match a.group.strip_prefix("upper-triangular:") {
                Some(n) => {
                    let n: usize = n.parse().map_err(|_| anyhow!("bad size in {:?}", a.group))?;
                    capped(Representation::natural(&borel_group(&top, n)), cap)?
                }
                None => parse_rep(&read(Path::new(&a.group))?, cap)?,
            };
            let action = match a.action {
                Action::RationalPoints => GroupGaloisAction::RationalPoints,
                Action::Entrywise => GroupGaloisAction::Entrywise,
            };
            run_descent(&DescentInput::new(ext, rep, action)?, a.samples, seed, mode)?
        }
        Command::VerifyFree(a) => {
            let (rep, default) = load_rep(&a.rep, &a.field, cap)?;
            run_freeness(&rep, &load_family(&a.subspaces, default)?, mode)?
        }
        Command::CheckInvariant(a) => {
            let (rep, default) = load_rep(&a.rep, &a.field, cap)?;
            run_invariance(&rep, &load_family(&a.subspaces, default)?)?
        }
        Command::NtWitness(a) => {
            let f = Field::parse(&a.field)?;
            let module = match builtin_nt_module(&a.module, &f) {
                Some(m) => m?,
                None => parse_nt_module(&read(Path::new(&a.module))?)?,
            };
            let zero = vec![Subspace::zero(module.field(), module.dim())];
            run_nt_witness(&module, &load_family(&a.subspaces, zero)?, seed)?
        }
        Command::Coinduce(a) => {
            let input = match &a.group {
                None => CoinduceInput::running_example(),
                Some(g) => {
                    let need = |p: &Option<PathBuf>| p.clone().ok_or_else(|| anyhow!("missing coinduce input file"));
                    CoinduceInput {
                        g: parse_group(&read(g)?, cap)?,
                        h: parse_group(&read(&need(&a.normal)?)?, cap)?,
                        wrep: parse_rep(&read(&need(&a.wrep)?)?, cap)?,
                        m_family: parse_subspaces(&read(&need(&a.m_family)?)?)?,
                        vrep: parse_rep(&read(&need(&a.vrep)?)?, cap)?,
                        v_family: parse_subspaces(&read(&need(&a.v_family)?)?)?,
                    }
                }
            };
            run_coinduce(&input, mode, seed)?
        }
        Command::Example(Example::UpperTriangular { n, field }) => {
            let (rep, family) = load_rep(&format!("upper-triangular:{n}"), field, cap)?;
            run_freeness(&rep, &family, mode)?
        }
        Command::Example(Example::Sl2Charp { field }) => {
            let f = Field::parse(field)?;
            if f.characteristic() == 0 {
                return Err(anyhow!("sl2-charp needs a finite field").into());
            }
            let inv = run_charp_invariance(std::slice::from_ref(&f))?;
            let mut free = run_charp_freeness(std::slice::from_ref(&f), mode, f.characteristic() != 2)?;
            free.payload = serde_json::json!({"invariance": inv.payload, "freeness": free.payload});
            free
        }
        Command::Example(Example::Pgl2Invariants { field }) => run_pgl2(&Field::parse(field)?)?,
        Command::Suite { .. } => unreachable!("suites are handled separately"),
    })
}

fn suite(cli: &Cli, name: &str, mode: Mode, argv: &[String]) -> Result<ExitCode, Usage> {
    if !suite_names().contains(&name) {
        return Err(anyhow!("unknown suite {name:?}; known: {}", suite_names().join(", ")).into());
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let cfg = SuiteConfig { seed: cli.seed, mode };
    let mut all_matched = true;
    let count = scenarios(name)?.len();
    let mut certs = Vec::with_capacity(count);
    for out in run_suite(name, &cfg, argv)? {
        let ok = out.matched();
        all_matched &= ok;
        eprintln!(
            "{} {:<28} expected {:<9} got {:<9} {:.2}s",
            if ok { "PASS" } else { "FAIL" },
            out.id,
            format!("{:?}", out.expected).to_lowercase(),
            format!("{:?}", out.certificate.status).to_lowercase(),
            out.certificate.wall_time_s
        );
        match &cli.out {
            Some(dir) => {
                let text = serde_json::to_string_pretty(&out.certificate)? + "\n";
                write_atomic(&dir.join(format!("{}.json", out.id)), &text)?;
            }
            None => certs.push(out.certificate),
        }
    }
    if cli.out.is_none() {
        println!("{}", serde_json::to_string_pretty(&certs)?);
    }
    Ok(if all_matched { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: &Cli, argv: &[String]) -> Result<ExitCode, Usage> {
    let mode = parse_mode(&cli.mode, cli.seed)?;
    if let Command::Suite { name } = &cli.command {
        return suite(cli, name, mode, argv);
    }
    let start = Instant::now();
    let run = single(cli, mode)?;
    let status = run.status;
    let cert = Certificate::from_run(argv.to_vec(), run, start.elapsed());
    emit(&cert, cli.out.as_deref())?;
    eprintln!("{}: {}", cert.claim, format!("{status:?}").to_lowercase());
    Ok(exit_for(status))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli, &argv) {
        Ok(code) => code,
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
