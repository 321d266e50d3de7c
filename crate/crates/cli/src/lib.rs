//! The `tautring` command line: relation generation, socle evaluation,
//! matrix export, verification suites and rank tables, with an optional
//! on-disk cache of rendered reports.

pub mod cache;
mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use cache::{Cache, CacheKey, CachedOutput, Lookup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad parameters; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// A computation or consistency check broke down; exit status 1.
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<tautring::Error> for CliError {
    fn from(e: tautring::Error) -> Self {
        use tautring::Error::*;
        match e {
            Domain(_) | Parse(_) | Dimension(_) => CliError::Usage(e.to_string()),
            Singular(_) | Inconsistent(_) | Infeasible(_) => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "M")]
    M,
    #[value(name = "Mhat")]
    Mhat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "det")]
    Det,
    #[value(name = "stable_plane_check")]
    StablePlane,
    #[value(name = "eigenvector_check")]
    Eigenvector,
    #[value(name = "exceptional_analysis")]
    Exceptional,
    #[value(name = "span_rank")]
    Span,
    #[value(name = "complement_block")]
    Complement,
    #[value(name = "upper_bound_solve")]
    UpperBound,
    #[value(name = "genus3_completeness")]
    Genus3,
    #[value(name = "bsz_in_pixton")]
    Bsz,
}

/// An inclusive range written `a..b`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointRange {
    pub start: usize,
    pub end: usize,
}

impl PointRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl std::fmt::Display for PointRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

fn parse_range(s: &str) -> Result<PointRange, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("'{t}' is not a non-negative integer"));
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if start > end {
        return Err(format!("empty range {s}"));
    }
    Ok(PointRange { start, end })
}

#[derive(Debug, Parser)]
#[command(name = "tautring", version, about = "Exact computations in the tautological ring of M_{g,n}")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Cache rendered reports in this directory.
    #[arg(long, global = true, env = "TAUTRING_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pixton's relations in one degree, grouped by family.
    Relations {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
    },
    /// A top-degree class on the basis ψ_1^{g-1}, ..., ψ_n^{g-1}.
    Socle {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        /// For example "k1*p1 + 2*p1*p2" or "k(1,1)".
        #[arg(long = "class")]
        class: String,
    },
    /// The genus-4 pairing matrix or its rescaled integer form.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "Mhat")]
        which: Which,
    },
    /// Runs a verification suite over a range of n.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, value_parser = parse_range)]
        n: PointRange,
    },
    /// Ranks of R^d(M_{g,n}) for d = 0..g-1.
    Ranks {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_parser = parse_range)]
        n: PointRange,
    },
}

impl Command {
    fn cache_key(&self, format: Format) -> CacheKey {
        let (op, params) = match self {
            Command::Relations { genus, n, degree } => ("relations", format!("g={genus} n={n} d={degree}")),
            Command::Socle { genus, n, class } => ("socle", format!("g={genus} n={n} class={class}")),
            Command::Matrix { n, which } => ("matrix", format!("n={n} which={which:?}")),
            Command::Verify { suite, n } => ("verify", format!("suite={suite:?} n={n}")),
            Command::Ranks { genus, n } => ("ranks", format!("g={genus} n={n}")),
        };
        CacheKey::new(op, format!("{params} format={format:?}"))
    }
}

fn compute(cli: &Cli) -> Result<CachedOutput, CliError> {
    let Some(dir) = &cli.cache_dir else {
        return commands::execute(&cli.command, cli.format);
    };
    let cache = Cache::new(dir);
    let key = cli.command.cache_key(cli.format);
    match cache.load(&key) {
        Lookup::Hit(out) => return Ok(out),
        Lookup::Miss => {}
        Lookup::Corrupt(why) => eprintln!("warning: discarding cache entry ({why}); recomputing"),
    }
    let out = commands::execute(&cli.command, cli.format)?;
    if let Err(e) = cache.store(&key, &out) {
        eprintln!("warning: could not write cache entry in {}: {e}", cache.dir().display());
    }
    Ok(out)
}

fn emit(cli: &Cli, out: &CachedOutput) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => cache::write_atomic(path, out.body.as_bytes())?,
        None => print!("{}", out.body),
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status: 0 success, 1 failed check, 2 usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = compute(&cli).and_then(|out| emit(&cli, &out).map(|()| out.failed));
    match result {
        Ok(false) => EXIT_OK,
        Ok(true) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Failure(_) | CliError::Io(_) => EXIT_FAILED,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..12"), Ok(PointRange { start: 1, end: 12 }));
        assert_eq!(parse_range("4"), Ok(PointRange { start: 4, end: 4 }));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn keys_include_format() {
        let c = Command::Matrix { n: 3, which: Which::Mhat };
        assert_ne!(c.cache_key(Format::Csv), c.cache_key(Format::Json));
    }
}
