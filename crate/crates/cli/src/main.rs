//! `hallcanon` command-line front end.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hallcanon::canonical::{bar_matrix, bundle, bundle_latex, canonical_basis, lusztig_solve, verify, CanonicalBasis};
use hallcanon::fqrep::cyclic::{CyclicFamily, Multisegment};
use hallcanon::fqrep::linear::{IntervalDesc, LinearFamily};
use hallcanon::fqrep::CensusBudget;
use hallcanon::hallalg::{latex_laurent, GenericAlgebra, KroneckerAlgebra, Symbol};
use hallcanon::hallpoly::{FitOptions, HallPolynomial, Store};
use hallcanon::pbw::{DiscreteSetting, KroneckerSetting, Setting};
use hallcanon::{Error, Laurent, Quiver, Result};

#[derive(Parser)]
#[command(name = "hallcanon", version, about = "Canonical bases of Ringel-Hall algebras over exact arithmetic")]
struct Cli {
    #[command(flatten)]
    cfg: Config,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Config {
    /// Sample primes for Hall-polynomial interpolation.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u32>>,
    /// Most graded subspaces enumerated per module.
    #[arg(long, global = true)]
    budget_subspaces: Option<u64>,
    /// Order of the `v⁻¹` expansion used for almost orthogonality.
    #[arg(long, global = true, default_value_t = 10)]
    series_order: usize,
    /// Hall-polynomial cache directory.
    #[arg(long, global = true, env = "HALLCANON_CACHE")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Recorded in the output; no computation here is randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Compute and verify the canonical basis in one dimension.
    Canonical {
        /// kronecker | cyclic:N | a:N[:ORIENT] | path to a quiver JSON file
        #[arg(long)]
        quiver: String,
        /// Dimension vector, e.g. 1,1.
        #[arg(long, value_delimiter = ',', required = true)]
        dim: Vec<usize>,
        /// Write the bundle here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the monomial/E transition matrices to this file.
        #[arg(long)]
        dump_transition: Option<PathBuf>,
    },
    /// Fit the Hall polynomial `g^L_{MN}` (M the quotient, N the sub).
    Hallpoly {
        /// jordan | cyclic:N | a:N[:ORIENT]
        #[arg(long)]
        quiver: String,
        l: String,
        m: String,
        n: String,
    },
    /// Re-check a bundle written by `canonical`.
    Verify { bundle: PathBuf },
    /// Inspect the Hall-polynomial cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Clone, Copy)]
enum CacheAction {
    List,
    Gc,
    Verify,
}

enum QuiverSpec {
    Kronecker,
    Cyclic(usize),
    Linear(Quiver),
}

fn parse_quiver(s: &str) -> Result<QuiverSpec> {
    let bad = || Error::InvalidArgument(format!("unknown quiver {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["kronecker"] => Ok(QuiverSpec::Kronecker),
        ["jordan"] => Ok(QuiverSpec::Cyclic(1)),
        ["cyclic", n] => Ok(QuiverSpec::Cyclic(n.parse().map_err(|_| bad())?)),
        ["a", n] | ["a", n, _] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            let orient = parts.get(2).map(|o| o.to_string()).unwrap_or_else(|| ">".repeat(n.saturating_sub(1)));
            Ok(QuiverSpec::Linear(Quiver::linear_an(n, &orient)?))
        }
        _ if s.ends_with(".json") => {
            let q = Quiver::from_json(&fs::read_to_string(s)?)?;
            if q.is_cyclic_orientation() {
                return Ok(QuiverSpec::Cyclic(q.n()));
            }
            Ok(QuiverSpec::Linear(q))
        }
        _ => Err(bad()),
    }
}

impl Config {
    fn budget(&self) -> CensusBudget {
        let mut b = CensusBudget::default();
        if let Some(s) = self.budget_subspaces {
            b.max_subspaces = s;
        }
        b
    }

    fn fit(&self) -> FitOptions {
        let mut o = FitOptions::default();
        if let Some(p) = &self.primes {
            o.primes = p.clone();
        }
        o
    }

    fn store(&self) -> Option<Store> {
        self.cache_dir.as_ref().map(Store::new)
    }

    fn record(&self) -> Value {
        json!({ "primes": self.fit().primes, "series_order": self.series_order, "seed": self.seed })
    }
}

/// Exit status: 0 success, 1 failed verification.
type Outcome = Result<u8>;

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn matrix_latex(m: &[Vec<Laurent>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(latex_laurent).collect::<Vec<_>>().join(" & ")).collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n"))
}

fn transition<I: Symbol>(cb: &CanonicalBasis<I>, format: Format) -> Result<String> {
    let labels: Vec<String> = cb.pbw.indices.iter().map(|i| i.to_string()).collect();
    Ok(match format {
        Format::Json => {
            let m = |x: &[Vec<Laurent>]| -> Vec<Vec<String>> {
                x.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect()
            };
            serde_json::to_string_pretty(&json!({
                "indices": labels,
                "monomial_over_E": m(&cb.pbw.t),
                "E_over_monomial": m(&cb.eta),
            }))?
        }
        Format::Latex => format!(
            "% rows and columns: {}\n% monomials over E\n{}\n% E over monomials\n{}\n",
            labels.join(", "),
            matrix_latex(&cb.pbw.t),
            matrix_latex(&cb.eta)
        ),
    })
}

fn run_canonical<S: Setting>(
    s: &S,
    nu: &[usize],
    cfg: &Config,
    out: Option<&PathBuf>,
    dump: Option<&PathBuf>,
) -> Outcome {
    let n = s.quiver().n();
    if nu.len() != n {
        return Err(Error::DimMismatch(format!("quiver has {n} vertices, dimension vector has {}", nu.len())));
    }
    let cb = canonical_basis(s, nu)?;
    let report = verify(s, &cb, cfg.series_order)?;
    if let Some(p) = dump {
        fs::write(p, transition(&cb, cfg.format)?)?;
    }
    let text = match cfg.format {
        Format::Json => {
            let mut b = bundle(s, &cb, &report)?;
            b["config"] = cfg.record();
            serde_json::to_string_pretty(&b)?
        }
        Format::Latex => bundle_latex(&cb, &report),
    };
    emit(out, &text)?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn canonical(cfg: &Config, quiver: &str, nu: &[usize], out: Option<&PathBuf>, dump: Option<&PathBuf>) -> Outcome {
    match parse_quiver(quiver)? {
        QuiverSpec::Kronecker => {
            let s = KroneckerSetting::new(KroneckerAlgebra::new(cfg.budget(), cfg.fit(), cfg.store()));
            run_canonical(&s, nu, cfg, out, dump)
        }
        QuiverSpec::Cyclic(k) => {
            let fam = Arc::new(CyclicFamily::new(k)?);
            let s = DiscreteSetting::new(GenericAlgebra::new(fam, cfg.budget(), cfg.fit(), cfg.store())?);
            run_canonical(&s, nu, cfg, out, dump)
        }
        QuiverSpec::Linear(q) => {
            let fam = Arc::new(LinearFamily::new(q)?);
            let s = DiscreteSetting::new(GenericAlgebra::new(fam, cfg.budget(), cfg.fit(), cfg.store())?);
            run_canonical(&s, nu, cfg, out, dump)
        }
    }
}

fn show_poly(cfg: &Config, quiver: &str, descs: [String; 3], p: &HallPolynomial) -> Result<String> {
    let [l, m, n] = descs;
    Ok(match cfg.format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "quiver": quiver,
            "L": l, "M": m, "N": n,
            "polynomial": p.to_string(),
            "coeffs": p.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "samples": p.samples.iter().map(|(q, c)| (q, c.to_string())).collect::<Vec<_>>(),
            "validations": p.validations.iter().map(|(q, c)| (q, c.to_string())).collect::<Vec<_>>(),
        }))?,
        Format::Latex => format!("g^{{{l}}}_{{{m},{n}}} = {p}"),
    })
}

fn hallpoly(cfg: &Config, quiver: &str, l: &str, m: &str, n: &str) -> Outcome {
    let (p, descs) = match parse_quiver(quiver)? {
        QuiverSpec::Kronecker => {
            return Err(Error::Unsupported(
                "Kronecker classes depend on the field; Hall polynomials are available through `canonical`".into(),
            ))
        }
        QuiverSpec::Cyclic(k) => {
            let fam = Arc::new(CyclicFamily::new(k)?);
            let alg = GenericAlgebra::new(fam, cfg.budget(), cfg.fit(), cfg.store())?;
            let d = |s: &str| Multisegment::parse(k as u32, s);
            let (l, m, n) = (d(l)?, d(m)?, d(n)?);
            (alg.hall(&l, &m, &n)?, [l.to_string(), m.to_string(), n.to_string()])
        }
        QuiverSpec::Linear(q) => {
            let k = q.n();
            let fam = Arc::new(LinearFamily::new(q)?);
            let alg = GenericAlgebra::new(fam, cfg.budget(), cfg.fit(), cfg.store())?;
            let d = |s: &str| IntervalDesc::parse(k, s);
            let (l, m, n) = (d(l)?, d(m)?, d(n)?);
            (alg.hall(&l, &m, &n)?, [l.to_string(), m.to_string(), n.to_string()])
        }
    };
    println!("{}", show_poly(cfg, quiver, descs, &p)?);
    Ok(0)
}

fn laurent_matrix(v: &Value, name: &str) -> Result<Vec<Vec<Laurent>>> {
    let bad = || Error::Parse(format!("bundle field {name:?} is not a matrix of strings"));
    v.get(name)
        .and_then(Value::as_array)
        .ok_or_else(bad)?
        .iter()
        .map(|r| r.as_array().ok_or_else(bad)?.iter().map(|c| c.as_str().ok_or_else(bad)?.parse()).collect())
        .collect()
}

/// Checks that need only the bundle: `ζ` and `g` follow from the recorded
/// transition matrix, and `C` is bar-invariant and unitriangular.
fn verify_bundle(path: &PathBuf) -> Outcome {
    let b: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let t = laurent_matrix(&b, "monomial_over_E")?;
    let zeta = laurent_matrix(&b, "zeta")?;
    let g = laurent_matrix(&b, "g")?;
    let n = t.len();
    if zeta.len() != n || g.len() != n || t.iter().chain(&zeta).chain(&g).any(|r| r.len() != n) {
        return Err(Error::DimMismatch("bundle matrices have inconsistent shapes".into()));
    }
    let (eta, z) = bar_matrix(&t);
    let zeta_ok = z == zeta;
    let g_ok = lusztig_solve(&zeta).map(|x| x == g).unwrap_or(false);
    let mut bar_ok = true;
    let mut tri_ok = true;
    for a in 0..n {
        for c in 0..n {
            let mut s = Laurent::zero();
            for bb in 0..n {
                s += &(&g[a][bb] * &eta[bb][c]);
            }
            bar_ok &= s.is_bar_invariant();
            let x = &g[a][c];
            tri_ok &= match c.cmp(&a) {
                std::cmp::Ordering::Equal => x.is_one(),
                std::cmp::Ordering::Less => x.in_vinv(),
                std::cmp::Ordering::Greater => x.is_zero(),
            };
        }
    }
    let recorded = b.pointer("/certificates").map(|c| {
        let all = |k: &str| c[k].as_array().is_some_and(|v| v.iter().all(|x| x.as_bool().unwrap_or(false)));
        let ao = c["almost_orthogonal"].as_array().is_some_and(|v| v.iter().all(|x| x[2].as_bool().unwrap_or(false)));
        all("bar_invariant") && all("unitriangular") && all("truncation_agrees") && ao
    });
    let ok = zeta_ok && g_ok && bar_ok && tri_ok && recorded == Some(true);
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "ok": ok,
            "zeta_matches_transition": zeta_ok,
            "g_solves_zeta": g_ok,
            "bar_invariant": bar_ok,
            "unitriangular": tri_ok,
            "recorded_certificates": recorded,
        }))?
    );
    Ok(if ok { 0 } else { 1 })
}

fn cache(cfg: &Config, action: CacheAction) -> Outcome {
    let store = cfg.store().ok_or_else(|| Error::InvalidArgument("no cache directory (--cache-dir or HALLCANON_CACHE)".into()))?;
    let rows = |v: Vec<(PathBuf, hallcanon::hallpoly::RecordStatus)>| -> Vec<Value> {
        v.into_iter().map(|(p, s)| json!({ "path": p.display().to_string(), "status": s })).collect()
    };
    match action {
        CacheAction::List => {
            println!("{}", serde_json::to_string_pretty(&rows(store.list()?))?);
            Ok(0)
        }
        CacheAction::Verify => {
            let bad = store.verify()?;
            let code = if bad.is_empty() { 0 } else { 1 };
            println!("{}", serde_json::to_string_pretty(&json!({ "ok": code == 0, "bad": rows(bad) }))?);
            Ok(code)
        }
        CacheAction::Gc => {
            let removed = store.gc()?;
            println!("{}", json!({ "removed": removed }));
            Ok(0)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let cfg = &cli.cfg;
    match &cli.cmd {
        Command::Canonical { quiver, dim, out, dump_transition } => {
            canonical(cfg, quiver, dim, out.as_ref(), dump_transition.as_ref())
        }
        Command::Hallpoly { quiver, l, m, n } => hallpoly(cfg, quiver, l, m, n),
        Command::Verify { bundle } => verify_bundle(bundle),
        Command::Cache { action } => cache(cfg, *action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || match cli.cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", json!({ "kind": e.kind(), "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
