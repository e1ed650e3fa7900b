use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use dirichlet_lattice::sums::DEFAULT_RADIUS_CAP;
use dirichlet_lattice::Complex64;

#[derive(Parser, Debug)]
#[command(
    name = "dlat",
    version,
    about = "Dirichlet characters, L-series, two-dimensional lattice sums and their closed forms",
    after_help = "Exit status: 0 on success, 1 if any check fails, 2 on invalid input."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, short = 'f', global = true, value_enum, default_value_t = Format::Table, alias = "report")]
    pub format: Format,

    /// Worker threads [default: all cores].
    #[arg(long, short = 'j', global = true, env = "DLAT_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    /// Include wall-clock timings in the output (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the Dirichlet characters of a modulus.
    Characters {
        #[arg(long, short = 'k', value_parser = clap::value_parser!(u64).range(1..=10_000))]
        modulus: u64,
    },
    /// Evaluate an L-series, or list the series of a modulus with exact special values.
    #[command(group(ArgGroup::new("which").required(true).args(["label", "modulus"])))]
    Lseries(LseriesArgs),
    /// Evaluate a lattice sum.
    #[command(subcommand)]
    Sum(SumCommand),
    /// Check catalogued identities against numerics.
    #[command(group(ArgGroup::new("select").required(true).multiple(true).args(["all", "id", "group"])))]
    Verify(VerifyArgs),
    /// Check the functional equation of T(r;s).
    Funceq {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        r: u64,
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
        tol: f64,
    },
    /// Fit the Laurent expansion of T(r;s) at s = 1.
    Pole {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        r: u64,
        #[arg(long, default_value_t = 1e-6, value_parser = parse_tol)]
        tol: f64,
    },
    /// Check the expansion of T(r;s) at s = 0.
    Zero {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        r: u64,
        #[arg(long, default_value_t = 1e-6, value_parser = parse_tol)]
        tol: f64,
    },
    /// Render the closed forms of T(r;s), r = 1..13, with a numerical check.
    Table1 {
        #[arg(long, default_value = "2", value_parser = parse_complex)]
        s: Complex64,
    },
}

#[derive(Args, Debug)]
pub struct LseriesArgs {
    /// Character label, e.g. L_-4, L_{5}, L_{-5}^{i}.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long, short = 'k', value_parser = clap::value_parser!(u64).range(1..=10_000))]
    pub modulus: Option<u64>,
    /// With --modulus: exact special values of the real primitive series.
    #[arg(long, requires = "modulus")]
    pub list: bool,
    #[arg(long, default_value = "2", value_parser = parse_complex)]
    pub s: Complex64,
    /// Integer points for --list.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4", value_parser = clap::value_parser!(u32).range(1..=31))]
    pub m: Vec<u32>,
}

#[derive(Subcommand, Debug)]
pub enum SumCommand {
    /// Q(a,b,c;s) = Σ' (am² + bmn + cn²)^{-s}.
    Q {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, allow_negative_numbers = true)]
        c: i64,
        #[command(flatten)]
        common: SumArgs,
    },
    /// S(p,r,j;s) = Σ [(m+p/j)² + (n+r/j)²]^{-s}.
    S {
        #[command(flatten)]
        pj: Displacement,
        #[command(flatten)]
        common: SumArgs,
    },
    /// σ(p,r,j;s) = Σ' e^{2πi(mp+nr)/j} (m² + n²)^{-s}.
    Sigma {
        #[command(flatten)]
        pj: Displacement,
        #[command(flatten)]
        common: SumArgs,
    },
    /// T(r;s) over the indefinite form m² − r²n².
    T {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
        r: u64,
        #[arg(long, value_parser = parse_complex)]
        s: Complex64,
        /// Direct summation (empirical error only) instead of the Hurwitz route.
        #[arg(long)]
        direct: bool,
        /// Radius for --direct.
        #[arg(long, default_value_t = 2000, requires = "direct")]
        cap: u64,
    },
}

#[derive(Args, Debug)]
pub struct Displacement {
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub r: i64,
    #[arg(long)]
    pub j: i64,
}

#[derive(Args, Debug)]
pub struct SumArgs {
    /// Exponent; direct sums need Re s > 1.
    #[arg(long, value_parser = parse_complex)]
    pub s: Complex64,
    /// Relative tolerance of the proven error bound.
    #[arg(long, default_value_t = 1e-8, value_parser = parse_tol)]
    pub tol: f64,
    /// Largest shell radius before giving up.
    #[arg(long, default_value_t = DEFAULT_RADIUS_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Every identity in the catalog.
    #[arg(long)]
    pub all: bool,
    /// Identity id; repeat for several (ids may contain commas).
    /// `table1.rN` is accepted for `t.rN`.
    #[arg(long)]
    pub id: Vec<String>,
    /// Every identity of a group; repeatable.
    #[arg(long, value_delimiter = ',')]
    pub group: Vec<String>,
    /// Evaluation points, e.g. 2,2.5,2+1i [default: per identity].
    #[arg(long, value_delimiter = ',', value_parser = parse_complex)]
    pub s_grid: Vec<Complex64>,
    /// Relative tolerance [default: 1e-6 with direct sums, else 1e-10].
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<f64>,
}

fn parse_tol(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(t) if t > 0.0 && t < 1.0 => Ok(t),
        Ok(t) => Err(format!("tolerance must lie in (0, 1), got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

/// `2`, `2.5`, `2+1i`, `0.3-0.2i`, `1i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read {text:?} as a number like 2, 2.5 or 2+1i");
    let value = if let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        // the imaginary part starts at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| {
                (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
            })
            .unwrap_or(0);
        let (re, im) = body.split_at(split);
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        let re = if re.is_empty() {
            0.0
        } else {
            re.parse::<f64>().map_err(|_| bad())?
        };
        Complex64::new(re, im)
    } else {
        Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
