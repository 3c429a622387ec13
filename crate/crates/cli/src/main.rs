use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use serde_json::json;

use rauzy_core::diagram::{explore, DiagramError, RauzyPath};
use rauzy_core::fg::{self, FgError, SampleOptions};
use rauzy_core::induction::{EdgeRecord, MoveWord, Reading};
use rauzy_core::linalg::{path_matrix, IntMatrix, LinalgError};
use rauzy_core::pa::{certify, PaError, Verdict};
use rauzy_core::penner::{self, PennerError};
use rauzy_core::perm::{LabeledPermutation, PermError};
use rauzy_core::rational::{parse_rational, to_decimal};
use rauzy_core::surface::GluedSurface;

#[derive(Parser)]
#[command(name = "rauzy", version, about = "Rauzy-Veech induction, path matrices and translation length bounds")]
struct Cli {
    /// Width of certified spectral brackets (decimal, scientific or p/q).
    #[arg(long, global = true, default_value = "1e-9")]
    tol: String,
    /// Maximum number of vertices explored in a diagram.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cap: usize,
    /// How move words are read: `rtl` (right to left, composition order) or `ltr`.
    #[arg(long, global = true, default_value = "rtl")]
    reading: Reading,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Describe a permutation: irreducibility, surface, unlabeled form.
    Perm {
        /// Two rows `top / bottom`, or `fg:G`, or `central:N`.
        spec: String,
    },
    /// Apply a move word and list every edge.
    Move(PathArgs),
    /// Explore the component of a permutation.
    Diagram {
        #[arg(long, conflicts_with = "start")]
        central: Option<usize>,
        #[arg(long)]
        start: Option<String>,
        /// Include flip edges.
        #[arg(long)]
        augmented: bool,
    },
    /// Check whether a path is allowed and print its matrix.
    Path(PathArgs),
    /// Certify the mapping class of an allowed path.
    Certify(PathArgs),
    /// The family f_g.
    Fg(FgArgs),
    /// The Penner-type family on genus g >= 3.
    Penner(PennerArgs),
    /// Check the power formula for [[1, b], [0, A]].
    HomologyCheck {
        /// Rows separated by `;`, entries by `,`, e.g. `1,2;0,1`.
        #[arg(long)]
        a: String,
        /// Entries separated by `,`.
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    start: String,
    #[arg(long)]
    moves: String,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct FgArgs {
    #[arg(long)]
    genus: Option<usize>,
    #[command(subcommand)]
    sub: Option<FgCommand>,
}

#[derive(Subcommand)]
enum FgCommand {
    /// CSV table over a genus range.
    Table {
        #[arg(long, default_value_t = 2)]
        gmin: usize,
        #[arg(long, default_value_t = 10)]
        gmax: usize,
    },
    /// Structural checks on the component of central(n).
    Central {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct PennerArgs {
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long)]
    n: Option<u64>,
    #[command(subcommand)]
    sub: Option<PennerCommand>,
}

#[derive(Subcommand)]
enum PennerCommand {
    /// CSV sweep over 3 <= g <= gmax, 1 <= n <= nmax.
    Sweep {
        #[arg(long, default_value_t = 6)]
        gmax: usize,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
    },
    /// The sequence with n = g^g.
    Hg {
        #[arg(long)]
        genus: usize,
        /// Largest admissible g^g.
        #[arg(long, default_value_t = 10_000_000)]
        size_cap: u64,
    },
}

/// A failure with a category prefix on standard error.
#[derive(Debug)]
struct Failure {
    prefix: &'static str,
    message: String,
}

impl Failure {
    fn new(prefix: &'static str, message: impl Into<String>) -> Failure {
        Failure { prefix, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.prefix, self.message)
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        Failure::new("perm", e.to_string())
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let prefix = match e {
            DiagramError::CapExceeded(_) => "cap",
            DiagramError::Induction(_) => "move",
            DiagramError::ReducibleSeed(_) => "perm",
            DiagramError::NotAllowed { .. } => "path",
        };
        Failure::new(prefix, e.to_string())
    }
}

impl From<LinalgError> for Failure {
    fn from(e: LinalgError) -> Self {
        Failure::new("numeric", e.to_string())
    }
}

impl From<PaError> for Failure {
    fn from(e: PaError) -> Self {
        match e {
            PaError::Linalg(e) => e.into(),
            e => Failure::new("certify", e.to_string()),
        }
    }
}

impl From<FgError> for Failure {
    fn from(e: FgError) -> Self {
        match e {
            FgError::Diagram(e) => e.into(),
            FgError::Pa(e) => e.into(),
            FgError::Perm(e) => e.into(),
            e => Failure::new("fg", e.to_string()),
        }
    }
}

impl From<PennerError> for Failure {
    fn from(e: PennerError) -> Self {
        match e {
            PennerError::Linalg(e) => e.into(),
            PennerError::SizeCap { .. } => Failure::new("cap", e.to_string()),
            e => Failure::new("penner", e.to_string()),
        }
    }
}

impl From<rauzy_core::induction::InductionError> for Failure {
    fn from(e: rauzy_core::induction::InductionError) -> Self {
        Failure::new("move", e.to_string())
    }
}

/// What a command produced: a document and the exit status to report.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

struct Config {
    tol: BigRational,
    cap: usize,
    reading: Reading,
    format: Option<Format>,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config, Failure> {
        let tol = parse_rational(&cli.tol).map_err(|e| Failure::new("numeric", format!("--tol: {e}")))?;
        if !tol.is_positive() {
            return Err(Failure::new("numeric", "--tol must be positive"));
        }
        if cli.cap == 0 {
            return Err(Failure::new("usage", "--cap must be positive"));
        }
        Ok(Config { tol, cap: cli.cap, reading: cli.reading, format: cli.format })
    }

    /// The requested format, checked against what the command can produce.
    fn format(&self, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(allowed[0]);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            let names: Vec<_> = allowed.iter().map(|f| f.name()).collect();
            Err(Failure::new("usage", format!("--format {} is not supported here (use {})", f.name(), names.join(" or "))))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Rows `top / bottom`, `fg:G` or `central:N`.
fn parse_start(spec: &str) -> Result<LabeledPermutation, Failure> {
    let number = |rest: &str, what: &str| {
        rest.trim().parse::<usize>().map_err(|_| Failure::new("perm", format!("bad {what} in `{spec}`")))
    };
    if let Some(rest) = spec.strip_prefix("fg:") {
        Ok(LabeledPermutation::fg_start(number(rest, "genus")?)?)
    } else if let Some(rest) = spec.strip_prefix("central:") {
        Ok(LabeledPermutation::central(number(rest, "size")?)?)
    } else {
        Ok(LabeledPermutation::parse(spec)?)
    }
}

fn build(args: &PathArgs, cfg: &Config) -> Result<RauzyPath, Failure> {
    let start = parse_start(&args.start)?;
    let word = MoveWord::parse(&args.moves, cfg.reading)?;
    Ok(RauzyPath::new(&start, word)?)
}

fn cmd_perm(spec: &str, cfg: &Config) -> Result<Output, Failure> {
    let p = parse_start(spec)?;
    if cfg.format(&[Format::Json, Format::Text])? == Format::Text {
        return Ok(Output::ok(format!("{p}\n")));
    }
    let s = GluedSurface::glue(&p);
    Ok(Output::ok(to_json(&json!({
        "permutation": p,
        "irreducible": p.is_irreducible(),
        "unlabeled": p.unlabeled().images(),
        "vertex_count": s.vertex_count(),
        "euler_characteristic": s.euler_char(),
        "genus": s.genus(),
        "warnings": s.warnings(),
    }))))
}

fn cmd_move(args: &PathArgs, cfg: &Config) -> Result<Output, Failure> {
    cfg.format(&[Format::Json])?;
    let path = build(args, cfg)?;
    let edges: Vec<EdgeRecord> = path.edges();
    Ok(Output::ok(to_json(&json!({
        "start": path.start(),
        "execution_order": path.word().execution_string(),
        "edges": edges,
        "end": path.end(),
    }))))
}

fn cmd_diagram(central: Option<usize>, start: Option<&str>, augmented: bool, cfg: &Config) -> Result<Output, Failure> {
    let format = cfg.format(&[Format::Json, Format::Dot])?;
    let seed = match (central, start) {
        (Some(n), None) => LabeledPermutation::central(n)?,
        (None, Some(s)) => parse_start(s)?,
        _ => return Err(Failure::new("usage", "give exactly one of --central and --start")),
    };
    let d = explore(&seed, augmented, cfg.cap)?;
    eprintln!("{} vertices, {} edges", d.len(), d.edges().len());
    Ok(Output::ok(match format {
        Format::Dot => d.to_dot(),
        _ => to_json(&d.to_json()),
    }))
}

fn cmd_path(args: &PathArgs, cfg: &Config) -> Result<Output, Failure> {
    cfg.format(&[Format::Json])?;
    let path = build(args, cfg)?;
    match path.clone().into_allowed() {
        Ok(allowed) => {
            let mut value = serde_json::to_value(&path).expect("serializable");
            value["matrix"] = serde_json::to_value(path_matrix(&allowed)).expect("serializable");
            Ok(Output::ok(to_json(&value)))
        }
        Err(e) => {
            eprintln!("{}", Failure::from(e));
            Ok(Output { text: to_json(&path), code: 1 })
        }
    }
}

fn cmd_certify(args: &PathArgs, cfg: &Config) -> Result<Output, Failure> {
    cfg.format(&[Format::Json])?;
    let path = build(args, cfg)?.into_allowed()?;
    eprintln!("execution order: {}", path.word().execution_string());
    let cert = certify(&path, &cfg.tol)?;
    for w in &cert.warnings {
        eprintln!("warning: {w}");
    }
    let code = match cert.verdict {
        Verdict::PseudoAnosov => 0,
        Verdict::Inconclusive => 2,
    };
    Ok(Output { text: to_json(&cert), code })
}

fn failed_checks(names: Vec<String>) -> u8 {
    if names.is_empty() {
        0
    } else {
        eprintln!("{}", Failure::new("check", format!("failed: {}", names.join(", "))));
        1
    }
}

fn decimal(r: &BigRational) -> String {
    to_decimal(r, 12)
}

fn cmd_fg(args: &FgArgs, cfg: &Config) -> Result<Output, Failure> {
    match &args.sub {
        None => {
            cfg.format(&[Format::Json])?;
            let g = args.genus.ok_or_else(|| Failure::new("usage", "fg needs --genus or a subcommand"))?;
            let r = fg::fg_report(g, &cfg.tol)?;
            let code = failed_checks(r.failures().iter().map(|c| c.name.clone()).collect());
            Ok(Output { text: to_json(&r), code })
        }
        Some(FgCommand::Table { gmin, gmax }) => {
            cfg.format(&[Format::Csv])?;
            let mut out = String::from("g,lambda_low,lambda_high,lc_upper,lc_lower_diagonal,lc_lower_exact\n");
            let mut failures = Vec::new();
            for g in *gmin..=*gmax {
                let r = fg::fg_report(g, &cfg.tol)?;
                failures.extend(r.failures().iter().map(|c| format!("g={g}: {}", c.name)));
                let c = &r.certificate;
                let lam = c.lambda.as_ref();
                let cell = |b: Option<&BigRational>| b.map(ToString::to_string).unwrap_or_default();
                out.push_str(&format!(
                    "{g},{},{},{},{},{}\n",
                    lam.map(|b| decimal(&b.low)).unwrap_or_default(),
                    lam.map(|b| decimal(&b.high)).unwrap_or_default(),
                    cell(c.lc_upper.as_ref().map(|u| &u.bound)),
                    cell(c.lc_lower_diagonal_cap.as_ref().map(|l| &l.bound)),
                    cell(c.lc_lower_exact.as_ref().map(|l| &l.bound)),
                ));
            }
            let code = failed_checks(failures);
            Ok(Output { text: out, code })
        }
        Some(FgCommand::Central { n, samples, max_len, seed }) => {
            cfg.format(&[Format::Json])?;
            let opts = SampleOptions { samples: *samples, max_len: *max_len, seed: *seed };
            let r = fg::central_checks(*n, cfg.cap, &opts)?;
            let code = failed_checks(r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect());
            Ok(Output { text: to_json(&r), code })
        }
    }
}

fn cmd_penner(args: &PennerArgs, cfg: &Config) -> Result<Output, Failure> {
    match &args.sub {
        None => {
            cfg.format(&[Format::Json])?;
            let (Some(g), Some(n)) = (args.genus, args.n) else {
                return Err(Failure::new("usage", "penner needs --genus and --n, or a subcommand"));
            };
            let matrices = penner::build(g, n)?;
            let identity = penner::verify_power_identity(g, n)?;
            let stretch = penner::stretch_bounds(g, n, &cfg.tol)?;
            let rotation = penner::lc_upper_rotation(g)?;
            let mut failures: Vec<String> =
                stretch.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
            if !identity {
                failures.push("power identity".into());
            }
            let code = failed_checks(failures);
            let text = to_json(&json!({
                "g": g,
                "n": n,
                "matrices": matrices,
                "power_identity": identity,
                "stretch": stretch,
                "lc_upper": rotation,
            }));
            Ok(Output { text, code })
        }
        Some(PennerCommand::Sweep { gmax, nmax }) => {
            cfg.format(&[Format::Csv])?;
            let mut out =
                String::from("g,n,min_row_sum_power,rho_low,rho_high,row_sum_root,teich_low,teich_high,lc_upper\n");
            let mut failures = Vec::new();
            for g in 3..=*gmax {
                let rotation = penner::lc_upper_rotation(g)?;
                for n in 1..=*nmax {
                    let r = penner::stretch_bounds(g, n, &cfg.tol)?;
                    failures.extend(r.checks.iter().filter(|c| !c.passed).map(|c| format!("g={g} n={n}: {}", c.name)));
                    out.push_str(&format!(
                        "{g},{n},{},{},{},{:.12},{:.12},{:.12},{}\n",
                        r.min_row_sum_power,
                        decimal(&r.rho.low),
                        decimal(&r.rho.high),
                        r.row_sum_root,
                        r.teich_length.0,
                        r.teich_length.1,
                        rotation.bound,
                    ));
                }
            }
            let code = failed_checks(failures);
            Ok(Output { text: out, code })
        }
        Some(PennerCommand::Hg { genus, size_cap }) => {
            cfg.format(&[Format::Json])?;
            let r = penner::hg_sequence(*genus, &cfg.tol, *size_cap)?;
            let code = failed_checks(r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect());
            Ok(Output { text: to_json(&r), code })
        }
    }
}

fn parse_ints(text: &str) -> Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<BigInt>().map_err(|_| Failure::new("numeric", format!("bad integer `{}`", s.trim()))))
        .collect()
}

fn cmd_homology(a: &str, b: &str, n: u64, cfg: &Config) -> Result<Output, Failure> {
    cfg.format(&[Format::Json])?;
    let rows = a.split(';').map(parse_ints).collect::<Result<Vec<_>, _>>()?;
    let a = IntMatrix::from_rows(&rows)?;
    let b = parse_ints(b)?;
    let r = penner::homology_power_check(&a, &b, n)?;
    let code = if r.matches {
        0
    } else {
        failed_checks(vec!["power formula".into()])
    };
    Ok(Output { text: to_json(&json!({ "n": n, "a": a, "b": b.iter().map(ToString::to_string).collect::<Vec<_>>(), "check": r })), code })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let cfg = Config::from_cli(cli)?;
    match &cli.command {
        Command::Perm { spec } => cmd_perm(spec, &cfg),
        Command::Move(args) => cmd_move(args, &cfg),
        Command::Diagram { central, start, augmented } => cmd_diagram(*central, start.as_deref(), *augmented, &cfg),
        Command::Path(args) => cmd_path(args, &cfg),
        Command::Certify(args) => cmd_certify(args, &cfg),
        Command::Fg(args) => cmd_fg(args, &cfg),
        Command::Penner(args) => cmd_penner(args, &cfg),
        Command::HomologyCheck { a, b, n } => cmd_homology(a, b, *n, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", Failure::new("usage", first));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rauzy_core::induction::Move;
    use rauzy_core::rational;

    #[test]
    fn start_shorthands() {
        assert_eq!(parse_start("fg:2").unwrap(), LabeledPermutation::fg_start(2).unwrap());
        assert_eq!(parse_start("central:4").unwrap(), LabeledPermutation::central(4).unwrap());
        assert_eq!(parse_start("fg:x").unwrap_err().prefix, "perm");
        assert_eq!(parse_start("A B / A").unwrap_err().prefix, "perm");
    }

    #[test]
    fn cap_errors_have_their_own_prefix() {
        let f = Failure::from(DiagramError::CapExceeded(3));
        assert_eq!(f.prefix, "cap");
        assert!(f.to_string().starts_with("error[cap]: "));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn moves_are_echoed_in_execution_order() {
        let args = PathArgs { start: "fg:2".into(), moves: "ftbb".into() };
        let cfg = Config { tol: rational::ratio(1, 1000), cap: 10, reading: Reading::Rtl, format: None };
        let path = build(&args, &cfg).unwrap();
        assert_eq!(path.word().execution_string(), "bbtf");
        assert_eq!(path.moves()[0], Move::Bottom);
    }
}
