//! Command-line front end: verification suites, computations and cache management.

mod compute;
mod report;
mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parking_lot::Mutex;
use serde::Serialize;

use crate::affine_weyl::{AffineWeyl, Parahoric};
use crate::basechange::BaseChangeContext;
use crate::error::{Error, Result};
use crate::hecke::{cache_summary, clear_cache, resolve_dir, HeckeAlgebra};
use crate::lattice::LatVec;
use crate::rootdata::{build_root_datum, DiagramAutomorphism, RootDatum};

pub use compute::{compute, ComputeTarget};
pub use report::{CheckResult, VerificationReport};
pub use suites::{run_suite, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

/// Everything a run depends on; echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(rename = "type")]
    pub type_tag: String,
    pub theta: String,
    pub r: usize,
    #[serde(rename = "J")]
    pub j: Option<String>,
    pub length_cutoff: usize,
    pub orbit_cutoff: i64,
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            type_tag: "A1".into(),
            theta: "id".into(),
            r: 1,
            j: None,
            length_cutoff: 8,
            orbit_cutoff: 3,
            samples: None,
            seed: 1,
            format: Format::Text,
            cache_dir: None,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn for_type(tag: &str) -> Self {
        RunConfig { type_tag: tag.into(), ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length_cutoff == 0 || self.orbit_cutoff <= 0 || self.r == 0 || self.samples == Some(0) {
            return Err(Error::Invalid("cutoffs, r and sample counts must be positive".into()));
        }
        Ok(())
    }

    pub fn echo(&self) -> String {
        format!(
            "type={} theta={} r={} J={} length-cutoff={} orbit-cutoff={} samples={} seed={}",
            self.type_tag,
            self.theta,
            self.r,
            self.j.as_deref().unwrap_or("all"),
            self.length_cutoff,
            self.orbit_cutoff,
            self.samples.map_or("default".to_string(), |s| s.to_string()),
            self.seed
        )
    }
}

/// Shared state of one invocation: the datum and every algebra whose products
/// go through the on-disk cache.
pub struct Session {
    pub cfg: RunConfig,
    datum: Arc<RootDatum>,
    theta: DiagramAutomorphism,
    cache_dir: Option<PathBuf>,
    algebra: Mutex<Option<Arc<HeckeAlgebra>>>,
    adopted: Mutex<Vec<Arc<HeckeAlgebra>>>,
}

impl Session {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let datum = Arc::new(build_root_datum(&cfg.type_tag)?);
        let theta = DiagramAutomorphism::parse(&datum, &cfg.theta, cfg.r)?;
        let cache_dir = resolve_dir(cfg.cache_dir.as_deref());
        Ok(Session { cfg, datum, theta, cache_dir, algebra: Mutex::new(None), adopted: Mutex::new(Vec::new()) })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn theta(&self) -> &DiagramAutomorphism {
        &self.theta
    }

    pub fn is_split(&self) -> bool {
        self.theta.is_identity()
    }

    /// Equal-parameter Iwahori–Hecke algebra of the datum.
    pub fn algebra(&self) -> Result<Arc<HeckeAlgebra>> {
        let mut slot = self.algebra.lock();
        if let Some(a) = slot.as_ref() {
            return Ok(a.clone());
        }
        let a = Arc::new(HeckeAlgebra::new(Arc::new(AffineWeyl::new(self.datum.clone()))));
        self.adopt(&a)?;
        *slot = Some(a.clone());
        Ok(a)
    }

    pub fn group(&self) -> Result<Arc<AffineWeyl>> {
        Ok(self.algebra()?.group().clone())
    }

    pub fn base_change(&self) -> Result<BaseChangeContext> {
        let ctx = BaseChangeContext::new(self.datum.clone(), self.theta.clone())?;
        self.adopt(ctx.e_algebra())?;
        if let Some(f) = ctx.f_algebra() {
            self.adopt(f)?;
        }
        Ok(ctx)
    }

    /// Loads cached products for `alg` and remembers it for saving.
    pub fn adopt(&self, alg: &Arc<HeckeAlgebra>) -> Result<()> {
        if let Some(dir) = &self.cache_dir {
            alg.load_cache(dir, false)?;
        }
        self.adopted.lock().push(alg.clone());
        Ok(())
    }

    /// Parahorics selected by `--J`, or all of them.
    pub fn parahorics(&self) -> Result<Vec<Parahoric>> {
        match &self.cfg.j {
            Some(s) => Ok(vec![Parahoric::parse(s, self.datum.rank())?]),
            None => Ok(Parahoric::all(self.datum.rank())),
        }
    }

    pub fn parse_vector(&self, s: &str) -> Result<LatVec> {
        let v = LatVec::parse(s).ok_or_else(|| Error::Parse(format!("bad lattice vector {s:?}")))?;
        if v.dim() != self.datum.dim() {
            return Err(Error::Invalid(format!("{s:?} has {} coordinates, expected {}", v.dim(), self.datum.dim())));
        }
        Ok(v)
    }

    /// Saves fresh products and reports cache traffic on stderr.
    pub fn finish(&self) -> Result<()> {
        let Some(dir) = &self.cache_dir else { return Ok(()) };
        let mut saved = 0;
        for a in self.adopted.lock().iter() {
            saved += a.save_cache(dir, self.cfg.length_cutoff)?;
            let s = a.cache().stats();
            eprintln!(
                "cache {}: {} entries, {} loaded, {} hits, {} misses",
                a.cache().tag(),
                s.entries,
                s.loaded,
                s.hits,
                s.misses
            );
        }
        eprintln!("cache: {saved} new records in {}", dir.display());
        Ok(())
    }
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Root datum tag: A1, A2, A3, B2, B3, C2, C3, G2, GL2, GL3, PGL2, with optional .sc/.ad.
    #[arg(long = "type", global = true, default_value = "A1")]
    pub type_tag: String,
    /// Diagram automorphism: id, flip, or a permutation such as 3,2,1.
    #[arg(long, global = true, default_value = "id")]
    pub theta: String,
    /// Degree of the unramified extension.
    #[arg(long, global = true, default_value_t = 1)]
    pub r: usize,
    /// Parahoric: iwahori, K, or simple affine reflections such as s0,s1.
    #[arg(long = "J", global = true)]
    pub j: Option<String>,
    /// Cocharacter (or ν for atiyah-bott), comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Standard parabolic: B, G, alphaK or a list of Levi simple roots.
    #[arg(long = "P", global = true)]
    pub p: Option<String>,
    #[arg(long, global = true, default_value_t = 8)]
    pub length_cutoff: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub orbit_cutoff: i64,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, env = "PARAHORIC_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl CommonArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            type_tag: self.type_tag.clone(),
            theta: self.theta.clone(),
            r: self.r,
            j: self.j.clone(),
            length_cutoff: self.length_cutoff,
            orbit_cutoff: self.orbit_cutoff,
            samples: self.samples,
            seed: self.seed,
            format: self.format,
            cache_dir: self.cache_dir.clone(),
            timing: self.timing,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "parahoric", version, about = "Parahoric Hecke algebras, Bernstein centers and base change")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Compute and print one object.
    Compute {
        #[arg(value_enum)]
        what: ComputeTarget,
    },
    /// Manage the structure-constant cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
    /// Shorthand for `compute bc`.
    Bc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CacheAction {
    Stat,
    Clear,
    Warm,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Integrity(_) | Error::Arithmetic(_) | Error::Io(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Runs `verify` and returns the report; cache state is saved afterwards.
pub fn verify(suite: Suite, cfg: RunConfig) -> Result<VerificationReport> {
    let session = Session::new(cfg)?;
    let start = Instant::now();
    let mut report = run_suite(suite, &session)?;
    if session.cfg.timing {
        report.millis = Some(start.elapsed().as_millis());
    }
    session.finish()?;
    Ok(report)
}

pub fn cache_command(action: CacheAction, cfg: RunConfig) -> Result<String> {
    let dir = resolve_dir(cfg.cache_dir.as_deref())
        .ok_or_else(|| Error::Invalid("no cache directory: pass --cache-dir or set PARAHORIC_CACHE_DIR".into()))?;
    match action {
        CacheAction::Stat => {
            let rows = cache_summary(&dir)?;
            let total: usize = rows.iter().map(|r| r.2).sum();
            let mut s = format!("entries: {total}\n");
            for (ty, p, n) in rows {
                s += &format!("{ty}\t{p}\t{n}\n");
            }
            Ok(s)
        }
        CacheAction::Clear => {
            let removed = clear_cache(&dir)?;
            Ok(if removed { "cleared\n".into() } else { "already empty\n".into() })
        }
        CacheAction::Warm => {
            let cutoff = cfg.length_cutoff;
            let session = Session::new(RunConfig { cache_dir: Some(dir.clone()), ..cfg })?;
            let alg = session.algebra()?;
            let n = alg.warm_cache(cutoff);
            let saved = alg.save_cache(&dir, cutoff)?;
            Ok(format!("warmed {n} products up to length {cutoff}; {saved} new records\n"))
        }
    }
}

/// Entry point shared by the binary and the tests. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = cli.common.config();
    let result = match cli.command {
        Command::Verify { suite } => verify(suite, cfg.clone()).map(|rep| {
            let code = if rep.passed() { EXIT_PASS } else { EXIT_FAIL };
            (rep.render(cfg.format), code)
        }),
        Command::Compute { what } => compute(what, &cli.common).map(|s| (s, EXIT_PASS)),
        Command::Bc => compute(ComputeTarget::Bc, &cli.common).map(|s| (s, EXIT_PASS)),
        Command::Cache { action } => cache_command(action, cfg).map(|s| (s, EXIT_PASS)),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Parses a clap value name such as "descent-cosets" or "json".
pub fn clap_value<T: ValueEnum>(s: &str) -> Result<T> {
    T::from_str(s, true).map_err(|_| Error::Parse(format!("unknown value {s:?}")))
}
