use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use locmod::resolution;
use locmod::schemes::{self, ChainSpec, ChartIdeal};
use locmod::toric::{self, CharacterData};
use locmod::verification::{self, SuiteConfig};
use locmod::Error;

/// Relative `--out` paths are resolved against this directory when set.
const OUT_DIR_ENV: &str = "LOCMOD_OUT_DIR";

#[derive(Parser)]
#[command(name = "locmod", version, about = "Exact computations on local-model equations, charts and toric data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Default)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long = "N")]
    big_n: Option<usize>,
    #[arg(long)]
    g: Option<usize>,
    /// Step sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    tau: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact path (.json; `verify run` also writes a .csv mirror).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Omit the timestamp (and zero timings) so artifacts are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
    /// Print the JSON artifact on stdout instead of the summary line.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// The matrix-equation scheme mu and its charts.
    #[command(subcommand)]
    Mu(MuCmd),
    /// The symplectic enhancement.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Local-model charts.
    #[command(subcommand)]
    Lm(LmCmd),
    /// Lattice-chain normal forms.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Index set, character and torus checks.
    #[command(subcommand)]
    Toric(ToricCmd),
    /// Blowups, t-saturation and the symplectic fibre census.
    #[command(subcommand)]
    Res(ResCmd),
    /// Symmetry checks.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Check suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum MuCmd {
    Build(Common),
    Chart {
        #[command(flatten)]
        c: Common,
        /// Index into the enumerated minor choices.
        #[arg(long, default_value_t = 0)]
        chart: usize,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    Build(Common),
}

#[derive(Subcommand)]
enum LmCmd {
    Build {
        #[command(flatten)]
        c: Common,
        /// Index into the enumerated pivot choices.
        #[arg(long, default_value_t = 0)]
        chart: usize,
    },
}

#[derive(Subcommand)]
enum ChainCmd {
    NormalForm {
        #[command(flatten)]
        c: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum ToricCmd {
    SSet(Common),
    Chi(Common),
    CheckTorus(Common),
    CheckQuotient(Common),
}

#[derive(Subcommand)]
enum ResCmd {
    Blowup {
        #[command(flatten)]
        c: Common,
        /// Ideal file (JSON ideal format).
        #[arg(long)]
        ideal: PathBuf,
        /// Center generators, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        center: Vec<String>,
        #[arg(long, default_value_t = 0)]
        chart: usize,
    },
    KillTorsion {
        #[command(flatten)]
        c: Common,
        #[arg(long)]
        ideal: PathBuf,
    },
    SigmaFiber(Common),
}

#[derive(Subcommand)]
enum SymCmd {
    CheckShift {
        #[command(flatten)]
        c: Common,
        /// Shift amount; all shifts when omitted.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<i64>,
    },
    CheckInvolution(Common),
}

#[derive(Subcommand)]
enum VerifyCmd {
    Run {
        #[command(flatten)]
        c: Common,
        /// Suite configuration; the built-in default suite when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Failure kinds mapped to exit codes.
enum Fail {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::InvalidInput(_) | Error::Parse(_) | Error::Config(_) | Error::ShapeViolation(_) => {
                Fail::Usage(e.to_string())
            }
            _ => Fail::Runtime(e.to_string()),
        }
    }
}

type Out = Result<(bool, String, Value), Fail>;

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Fail> {
    v.clone().ok_or_else(|| Fail::Usage(format!("missing --{flag}")))
}

fn unitary_spec(c: &Common) -> Result<ChainSpec, Fail> {
    let d = need(&c.d, "d")?;
    let n = c.n.unwrap_or_else(|| d.iter().sum());
    Ok(ChainSpec::unitary(n, need(&c.r, "r")?, d)?)
}

fn mu_params(c: &Common) -> Result<(usize, usize, usize), Fail> {
    Ok((need(&c.n, "n")?, need(&c.r, "r")?, need(&c.big_n, "N")?))
}

fn ideal_summary(ci: &ChartIdeal) -> String {
    format!("{}: {} variables, {} generators", ci.provenance, ci.ring().nvars(), ci.gens().len())
}

fn read_ideal(path: &PathBuf) -> Result<ChartIdeal, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    Ok(ChartIdeal::from_json(&v)?)
}

fn run(cmd: Cmd) -> Result<(bool, String, Value, Common), Fail> {
    let (c, res): (Common, Out) = match cmd {
        Cmd::Mu(MuCmd::Build(c)) => {
            let r = mu_params(&c).and_then(|(n, r, bn)| {
                let ci = schemes::mu_ideal(n, r, bn)?;
                Ok((true, ideal_summary(&ci), ci.to_json()))
            });
            (c, r)
        }
        Cmd::Mu(MuCmd::Chart { c, chart }) => {
            let r = (|| {
                let spec = unitary_spec(&c)?;
                let choices = schemes::mu_chart_choices(&spec);
                let ch = choices.get(chart).ok_or_else(|| Fail::Usage(format!("--chart must be < {}", choices.len())))?;
                let ci = schemes::mu_chart_ideal(&spec, ch)?;
                Ok((true, ideal_summary(&ci), ci.to_json()))
            })();
            (c, r)
        }
        Cmd::Sigma(SigmaCmd::Build(c)) => {
            let r = (|| {
                let ci = schemes::sigma_ideal(need(&c.g, "g")?, need(&c.big_n, "N")?)?;
                Ok((true, ideal_summary(&ci), ci.to_json()))
            })();
            (c, r)
        }
        Cmd::Lm(LmCmd::Build { c, chart }) => {
            let r = (|| {
                let spec = match c.g {
                    Some(g) => ChainSpec::symplectic(g, need(&c.d, "d")?)?,
                    None => unitary_spec(&c)?,
                };
                let choices = schemes::local_model_pivot_choices(&spec);
                let piv = choices.get(chart).ok_or_else(|| Fail::Usage(format!("--chart must be < {}", choices.len())))?;
                let ci = if spec.symplectic {
                    schemes::symplectic_local_model_ideal(&spec, piv)?
                } else {
                    schemes::local_model_ideal(&spec, piv)?
                };
                Ok((true, ideal_summary(&ci), ci.to_json()))
            })();
            (c, r)
        }
        Cmd::Chain(ChainCmd::NormalForm { c, trials }) => {
            let r = (|| {
                let spec = unitary_spec(&c)?;
                let q = need(&c.q, "q")?;
                let seed = need(&c.seed, "seed")?;
                let rep = verification::normal_form_round_trips(&spec, q, trials, seed)?;
                let ok = rep.successes == trials && rep.chart_members == trials;
                let v = json!({"spec": {"n": spec.n, "r": spec.r, "d": spec.d}, "seed": seed, "report": rep});
                Ok((ok, format!("{}/{} normal forms recovered", rep.successes, trials), v))
            })();
            (c, r)
        }
        Cmd::Toric(tc) => {
            let (c, which) = match tc {
                ToricCmd::SSet(c) => (c, 0),
                ToricCmd::Chi(c) => (c, 1),
                ToricCmd::CheckTorus(c) => (c, 2),
                ToricCmd::CheckQuotient(c) => (c, 3),
            };
            let r = (|| {
                let (n, r, bn) = mu_params(&c)?;
                let data = CharacterData::new(n as u32, r as u32, bn)?;
                let s: Vec<String> = data.s.iter().map(|e| e.to_string()).collect();
                let head = json!({"n": n, "r": r, "N": bn});
                Ok(match which {
                    0 => (true, s.len().to_string(), json!({"spec": head, "size": s.len(), "S": s})),
                    1 => {
                        let chi: Vec<String> = data.chi.iter().map(|x| x.to_string()).collect();
                        (true, format!("[{}]", chi.join(",")), json!({"spec": head, "S": s, "chi": chi}))
                    }
                    2 => {
                        let cert = toric::kernel_is_torus_check(&data)?;
                        let inv: Vec<String> = cert.snf.invariants.iter().map(|x| x.to_string()).collect();
                        let coords: Vec<String> = cert.coords.iter().map(|x| x.to_string()).collect();
                        let v = json!({"spec": head, "verdict": cert.verdict, "coords": coords, "snf_invariants": inv});
                        (cert.verdict, cert.verdict.to_string(), v)
                    }
                    _ => {
                        let cert = toric::quotient_by_subtorus_check(&data)?;
                        let inv: Vec<String> = cert.primitivity.snf.invariants.iter().map(|x| x.to_string()).collect();
                        let v = json!({"spec": head, "verdict": cert.verdict, "trivial_on_subtorus": cert.trivial_on_subtorus, "snf_invariants": inv});
                        (cert.verdict, cert.verdict.to_string(), v)
                    }
                })
            })();
            (c, r)
        }
        Cmd::Res(ResCmd::Blowup { c, ideal, center, chart }) => {
            let r = (|| {
                let base = read_ideal(&ideal)?;
                let ring = base.ring().clone();
                let fs = center.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>()?;
                let b = resolution::blowup_chart(&base, &fs, chart)?;
                let principal = b.principal_certificate()?;
                let v = json!({"chart": chart, "empty": b.empty, "principal": principal, "ideal": b.result.to_json()});
                let line = if b.empty { "empty chart".to_string() } else { format!("{} (principal: {principal})", ideal_summary(&b.result)) };
                Ok((principal, line, v))
            })();
            (c, r)
        }
        Cmd::Res(ResCmd::KillTorsion { c, ideal }) => {
            let r = (|| {
                let base = read_ideal(&ideal)?;
                let sat = resolution::kill_t_torsion(&base)?;
                let regular = resolution::t_regular(&sat)?;
                let basis: Vec<String> = sat.ideal.basis()?.iter().map(|p| p.to_string()).collect();
                let v = json!({"t_regular": regular, "basis": basis, "ideal": sat.to_json()});
                Ok((regular, format!("{} basis elements, t-regular: {regular}", basis.len()), v))
            })();
            (c, r)
        }
        Cmd::Res(ResCmd::SigmaFiber(c)) => {
            let r = (|| {
                let g = need(&c.g, "g")?;
                let rep = resolution::sigma_fiber_freecount(g)?;
                let ok = rep.consistent && rep.free_count == g * (3 * g - 1) / 2;
                let v = json!({"g": g, "free_count": rep.free_count, "counts": resolution::relation_log_table(&rep), "report": rep});
                Ok((ok, rep.free_count.to_string(), v))
            })();
            (c, r)
        }
        Cmd::Sym(SymCmd::CheckShift { c, s }) => {
            let r = (|| {
                let (n, r, bn) = mu_params(&c)?;
                let cfg = verification::CheckConfig {
                    check: "cyclic_shift".into(),
                    params: verification::CheckParams { n: Some(n), r: Some(r), big_n: Some(bn), s, ..Default::default() },
                    seed: None,
                    max_pairs: None,
                };
                let o = verification::run_check(&cfg)?;
                Ok((o.verdict, o.verdict.to_string(), json!({"spec": {"n": n, "r": r, "N": bn}, "shift": s, "verdict": o.verdict, "witness_digest": verification::digest(&o.witness)})))
            })();
            (c, r)
        }
        Cmd::Sym(SymCmd::CheckInvolution(c)) => {
            let r = (|| {
                let (g, bn) = (need(&c.g, "g")?, need(&c.big_n, "N")?);
                let cfg = verification::CheckConfig {
                    check: "symplectic_involution".into(),
                    params: verification::CheckParams { g: Some(g), big_n: Some(bn), ..Default::default() },
                    seed: None,
                    max_pairs: None,
                };
                let o = verification::run_check(&cfg)?;
                Ok((o.verdict, o.verdict.to_string(), json!({"spec": {"g": g, "N": bn}, "verdict": o.verdict, "witness_digest": verification::digest(&o.witness)})))
            })();
            (c, r)
        }
        Cmd::Verify(VerifyCmd::Run { c, config }) => {
            let r = (|| {
                let cfg = match &config {
                    Some(p) => {
                        let text = std::fs::read_to_string(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
                        SuiteConfig::from_json(&text)?
                    }
                    None => verification::default_config(),
                };
                let mut pool = rayon::ThreadPoolBuilder::new();
                if let Some(j) = c.jobs {
                    pool = pool.num_threads(j);
                }
                let pool = pool.build().map_err(|e| Fail::Runtime(e.to_string()))?;
                let mut rep = pool.install(|| verification::run_suite(&cfg))?;
                if c.no_timestamp {
                    for e in &mut rep.entries {
                        e.runtime_ms = 0;
                    }
                }
                if let Some(out) = &c.out {
                    let csv = resolve(out).with_extension("csv");
                    std::fs::write(&csv, rep.to_csv()?).map_err(|e| Fail::Runtime(format!("{}: {e}", csv.display())))?;
                }
                let failed = rep.entries.iter().filter(|e| !e.verdict).count();
                let line = format!("{} checks, {} failed", rep.entries.len(), failed);
                let v = serde_json::to_value(&rep).map_err(|e| Fail::Runtime(e.to_string()))?;
                Ok((rep.passed, line, v))
            })();
            (c, r)
        }
    };
    let (ok, line, v) = res?;
    Ok((ok, line, v, c))
}

fn resolve(p: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((ok, line, mut v, c)) => {
            if let Value::Object(m) = &mut v {
                if !c.no_timestamp {
                    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                    m.insert("generated_at".into(), json!(secs));
                }
            }
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            if let Some(out) = &c.out {
                let path = resolve(out);
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            if c.json {
                print!("{text}");
            } else {
                println!("{line}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
