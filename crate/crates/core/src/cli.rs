//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes onto exit codes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::digraph::{certify_kl, Digraph, KlVerdict};
use crate::error::{Error, Result};
use crate::formats::{
    self, digraph_payload, game_payload, haight_payload, rational_strings, CertificateEnvelope, Claim, Derivation,
    KlPayload, NonexistencePayload, WitnessPayload,
};
use crate::game::{CharWitness, WinLoseGame};
use crate::residues::{search_haight_set, ResidueSet, SearchMode, SearchOutcome, SearchSpec};
use crate::scalar::{parse_fraction_literal, parse_rational};
use crate::wsne::{check_wsne, exhaustive_search_parallel, ExhaustiveOutcome, MixedStrategy};
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_UNVERIFIED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "wsne-forge", version, about = "Build and certify win-lose games without small-support WSNE")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Randomized,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => SearchMode::Exhaustive,
            Mode::Randomized => SearchMode::Randomized,
        }
    }
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    /// Sums of fewer than this many elements must avoid zero.
    #[arg(long)]
    kappa: usize,
    #[arg(long, default_value_t = 1)]
    q_min: usize,
    #[arg(long)]
    q_max: usize,
    /// Maximum number of candidate sets evaluated.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Certificate destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ForgeArgs {
    /// Support bound the game must defeat.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = eps_arg)]
    eps: Rational,
    #[arg(long, default_value_t = 2)]
    q_min: usize,
    #[arg(long, default_value_t = 128)]
    q_max: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Mode::Randomized)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Game destination (stdout when absent).
    #[arg(long)]
    game_out: Option<PathBuf>,
    /// Certificate destination (stdout when absent).
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CertifyArgs {
    /// Digraph file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    l: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    game: PathBuf,
    /// A `wsne_witness` certificate, or two lines of rationals (p, then q).
    #[arg(long)]
    strategy: PathBuf,
    #[arg(long, value_parser = eps_arg)]
    eps: Rational,
}

#[derive(clap::Args, Debug)]
struct ExhaustArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    #[arg(long, value_parser = eps_arg)]
    eps: Rational,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct BipartifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CayleyArgs {
    #[arg(long)]
    q: usize,
    /// Comma-separated residues.
    #[arg(long, value_delimiter = ',')]
    set: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct PowerArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    t: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct ReverifyArgs {
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search Z_q for a set with Y - Y = Z_q and no zero sums shorter than kappa.
    Search(SearchArgs),
    /// Build a game with no eps-WSNE on supports of size at most k.
    Forge(ForgeArgs),
    /// Check girth and domination of a digraph.
    Certify(CertifyArgs),
    /// Check a strategy pair against a game.
    Check(CheckArgs),
    /// Enumerate all small support pairs of a game.
    Exhaust(ExhaustArgs),
    /// Turn a digraph into a win-lose game.
    Bipartify(BipartifyArgs),
    /// Build the Cayley digraph of a residue set.
    Cayley(CayleyArgs),
    /// Raise a digraph to a power.
    Power(PowerArgs),
    /// Re-run the checks recorded in a certificate.
    Reverify(ReverifyArgs),
}

fn eps_arg(text: &str) -> std::result::Result<Rational, String> {
    let eps: Rational = parse_fraction_literal(text).map_err(|e| e.to_string())?;
    if eps < Rational::from_integer(0.into()) {
        return Err("eps must be non-negative".into());
    }
    Ok(eps)
}

/// Why a command stopped with a nonzero exit code.
enum Failure {
    Usage(String),
    NotFound(String),
    Unverified(String),
    Other(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Other(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    replay: String,
}

impl Io<'_> {
    fn emit(&mut self, dest: Option<&Path>, text: &str) -> Result<()> {
        match dest {
            Some(path) => fs::write(path, text)?,
            None => self.out.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    fn note(&mut self, msg: impl AsRef<str>) {
        let _ = writeln!(self.err, "{}", msg.as_ref());
    }

    fn certificate(&mut self, dest: Option<&Path>, claim: Claim) -> Result<()> {
        let env = CertificateEnvelope::new(self.replay.clone(), claim);
        self.emit(dest, &formats::write_certificate(&env))
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

/// Parses `args` (without the program name), runs the command, and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let replay = std::iter::once("wsne-forge".to_string())
        .chain(args.iter().map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("wsne-forge")).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { out, err, replay };
    let result = match cli.command {
        Command::Search(a) => search(&mut io, a),
        Command::Forge(a) => forge(&mut io, a),
        Command::Certify(a) => certify(&mut io, a),
        Command::Check(a) => check(&mut io, a),
        Command::Exhaust(a) => exhaust(&mut io, a),
        Command::Bipartify(a) => bipartify(&mut io, a),
        Command::Cayley(a) => cayley(&mut io, a),
        Command::Power(a) => power(&mut io, a),
        Command::Reverify(a) => reverify(&mut io, a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            io.note(format!("error: {m}"));
            EXIT_USAGE
        }
        Err(Failure::NotFound(m)) => {
            io.note(format!("not found: {m}"));
            EXIT_NOT_FOUND
        }
        Err(Failure::Unverified(m)) => {
            io.note(format!("verification failed: {m}"));
            EXIT_UNVERIFIED
        }
        Err(Failure::Other(e)) => {
            io.note(format!("error: {e}"));
            match e {
                Error::Io(_) => EXIT_ERROR,
                Error::Parse { .. } | Error::Schema { .. } => EXIT_UNVERIFIED,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn workers(w: u64) -> usize {
    usize::try_from(w).unwrap_or(usize::MAX)
}

fn search(io: &mut Io, a: SearchArgs) -> Outcome {
    let spec = SearchSpec {
        kappa: a.kappa,
        q_min: a.q_min,
        q_max: a.q_max,
        budget: a.budget,
        seed: a.seed,
        mode: a.mode.into(),
        workers: workers(a.workers),
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    match search_haight_set(&spec)? {
        SearchOutcome::Found { certificate, evaluations } => {
            io.note(format!(
                "found {:?} in Z_{} after {evaluations} candidates",
                certificate.set().to_vec(),
                certificate.modulus()
            ));
            io.certificate(a.out.as_deref(), Claim::Haight(haight_payload(&certificate)))?;
            Ok(())
        }
        SearchOutcome::NotFound { evaluations } => Err(Failure::NotFound(format!(
            "no set for kappa {} with q in {}..={} after {evaluations} candidates",
            a.kappa, a.q_min, a.q_max
        ))),
    }
}

fn require_kl(d: &Digraph, k: usize, l: usize, what: &str) -> std::result::Result<(), Failure> {
    match certify_kl(d, k, l)? {
        KlVerdict::Verified(_) => Ok(()),
        KlVerdict::Failed(f) => Err(Failure::Unverified(format!("{what} is not a ({k}, {l})-digraph: {f:?}"))),
    }
}

fn forge(io: &mut Io, a: ForgeArgs) -> Outcome {
    let k = workers(a.k);
    if a.eps >= Rational::from_integer(1.into()) {
        return Err(Failure::Usage("eps must be below 1".into()));
    }
    let (base, base_k, haight) = if k == 1 {
        (Digraph::cycle(3), 3, None)
    } else {
        let kappa = 2 * k * (k - 1) + 1;
        let spec = SearchSpec {
            kappa,
            q_min: a.q_min,
            q_max: a.q_max,
            budget: a.budget,
            seed: a.seed,
            mode: a.mode.into(),
            workers: workers(a.workers),
        };
        spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        let outcome = search_haight_set(&spec)?;
        let Some(cert) = outcome.certificate() else {
            return Err(Failure::NotFound(format!(
                "no residue set for kappa {kappa} with q in {}..={} after {} candidates",
                a.q_min,
                a.q_max,
                outcome.evaluations()
            )));
        };
        io.note(format!("residue set {:?} in Z_{}", cert.set().to_vec(), cert.modulus()));
        (Digraph::cayley(cert.modulus(), cert.set())?, kappa, Some(haight_payload(cert)))
    };
    let base_l = if k == 1 { 1 } else { 2 };
    require_kl(&base, base_k, base_l, "base digraph")?;
    let top = if k == 1 { base.clone() } else { base.power(k - 1)? };
    require_kl(&top, 2 * k + 1, k, "powered digraph")?;
    let game = WinLoseGame::bipartify(&top);
    let witness = game.char_decision(k)?;
    if !witness.is_neither() {
        return Err(Failure::Unverified(format!("game has a small witness {witness:?}")));
    }
    let pairs_refuted = match exhaustive_search_parallel(&game, k, &a.eps, workers(a.workers))? {
        ExhaustiveOutcome::NoneExists { pairs_refuted } => pairs_refuted,
        ExhaustiveOutcome::Witness { supports, .. } => {
            return Err(Failure::Unverified(format!("WSNE found on supports {supports:?}")))
        }
    };
    io.note(format!(
        "{}x{} game, {pairs_refuted} support pairs refuted at eps {}",
        game.rows(),
        game.cols(),
        a.eps
    ));
    io.emit(a.game_out.as_deref(), &formats::write_game(&game))?;
    let claim = Claim::Nonexistence(NonexistencePayload {
        game: game_payload(&game),
        k,
        eps: a.eps.to_string(),
        pairs_refuted,
        characterization_checked: true,
        derivation: Some(Derivation {
            haight,
            base: digraph_payload(&base),
            base_k,
            base_l,
            power: k - 1,
        }),
    });
    io.certificate(a.cert_out.as_deref(), claim)?;
    Ok(())
}

fn certify(io: &mut Io, a: CertifyArgs) -> Outcome {
    let d = formats::read_digraph(&read(&a.input)?)?;
    let (k, l) = (workers(a.k), workers(a.l));
    if l > d.vertex_count() {
        return Err(Failure::Usage(format!("l = {l} exceeds {} vertices", d.vertex_count())));
    }
    match certify_kl(&d, k, l)? {
        KlVerdict::Verified(c) => {
            io.note(format!("({k}, {l})-digraph, girth {:?}", c.girth));
            let claim = Claim::KlDigraph(KlPayload {
                k,
                l,
                girth: c.girth.length(),
                digraph: digraph_payload(&d),
            });
            io.certificate(a.out.as_deref(), claim)?;
            Ok(())
        }
        KlVerdict::Failed(f) => Err(Failure::Unverified(format!("{f:?}"))),
    }
}

fn read_strategies(text: &str) -> Result<(MixedStrategy<Rational>, MixedStrategy<Rational>)> {
    if text.trim_start().starts_with('{') {
        let env = formats::read_certificate(text)?;
        let Claim::WsneWitness(w) = env.claim else {
            return Err(Error::Schema {
                path: "kind".into(),
                message: "expected a wsne_witness certificate".into(),
            });
        };
        let (_, p, q, _) = w.decode()?;
        return Ok((p, q));
    }
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let mut strategy = || -> Result<MixedStrategy<Rational>> {
        let (idx, line) = lines.next().ok_or(Error::Parse {
            line: text.lines().count() + 1,
            message: "expected a line of probabilities".into(),
        })?;
        let probs = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        MixedStrategy::new(probs)
    };
    Ok((strategy()?, strategy()?))
}

fn check(io: &mut Io, a: CheckArgs) -> Outcome {
    let game = formats::read_game(&read(&a.game)?)?;
    let (p, q) = read_strategies(&read(&a.strategy)?)?;
    if p.len() != game.rows() || q.len() != game.cols() {
        return Err(Failure::Usage(format!(
            "strategies have lengths {} and {}, game is {}x{}",
            p.len(),
            q.len(),
            game.rows(),
            game.cols()
        )));
    }
    let v = check_wsne(&game, &p, &q, &a.eps)?;
    let _ = writeln!(
        io.out,
        "{} eps={} min_slack={} tight={}",
        if v.valid { "valid" } else { "invalid" },
        a.eps,
        v.min_slack,
        v.is_tight()
    );
    for viol in &v.violations {
        let _ = writeln!(
            io.out,
            "violation {:?} strategy {} payoff {} shortfall {}",
            viol.player, viol.strategy, viol.payoff, viol.shortfall
        );
    }
    if v.valid {
        Ok(())
    } else {
        Err(Failure::Unverified(format!("not a {}-WSNE", a.eps)))
    }
}

fn exhaust(io: &mut Io, a: ExhaustArgs) -> Outcome {
    let game = formats::read_game(&read(&a.game)?)?;
    let k = workers(a.k);
    if k > game.rows().min(game.cols()) {
        return Err(Failure::Usage(format!("k = {k} exceeds the smaller game dimension")));
    }
    match exhaustive_search_parallel(&game, k, &a.eps, workers(a.workers))? {
        ExhaustiveOutcome::Witness {
            supports,
            p,
            q,
            pairs_examined,
        } => {
            let _ = writeln!(
                io.out,
                "witness rows={:?} cols={:?} p=[{}] q=[{}] pairs_examined={pairs_examined}",
                supports.rows,
                supports.cols,
                rational_strings(p.probs()).join(" "),
                rational_strings(q.probs()).join(" ")
            );
            if let Some(path) = a.out.as_deref() {
                let claim = Claim::WsneWitness(WitnessPayload {
                    game: game_payload(&game),
                    eps: a.eps.to_string(),
                    p: rational_strings(p.probs()),
                    q: rational_strings(q.probs()),
                });
                io.certificate(Some(path), claim)?;
            }
        }
        ExhaustiveOutcome::NoneExists { pairs_refuted } => {
            let _ = writeln!(io.out, "none pairs_refuted={pairs_refuted}");
            if let Some(path) = a.out.as_deref() {
                let characterization_checked = matches!(game.char_decision(k), Ok(CharWitness::Neither));
                let claim = Claim::Nonexistence(NonexistencePayload {
                    game: game_payload(&game),
                    k,
                    eps: a.eps.to_string(),
                    pairs_refuted,
                    characterization_checked,
                    derivation: None,
                });
                io.certificate(Some(path), claim)?;
            }
        }
    }
    Ok(())
}

fn bipartify(io: &mut Io, a: BipartifyArgs) -> Outcome {
    let d = formats::read_digraph(&read(&a.input)?)?;
    io.emit(a.out.as_deref(), &formats::write_game(&WinLoseGame::bipartify(&d)))?;
    Ok(())
}

fn cayley(io: &mut Io, a: CayleyArgs) -> Outcome {
    let set = ResidueSet::new(a.q, a.set.iter().copied()).map_err(|e| Failure::Usage(e.to_string()))?;
    io.emit(a.out.as_deref(), &formats::write_digraph(&Digraph::cayley(a.q, &set)?))?;
    Ok(())
}

fn power(io: &mut Io, a: PowerArgs) -> Outcome {
    let d = formats::read_digraph(&read(&a.input)?)?;
    io.emit(a.out.as_deref(), &formats::write_digraph(&d.power(workers(a.t))?))?;
    Ok(())
}

fn reverify(io: &mut Io, a: ReverifyArgs) -> Outcome {
    let env = formats::read_certificate(&read(&a.cert)?)?;
    let r = formats::reverify(&env)?;
    let _ = writeln!(
        io.out,
        "{} {}: {}",
        if r.verified { "verified" } else { "rejected" },
        env.claim.kind(),
        r.detail
    );
    if r.verified {
        Ok(())
    } else {
        Err(Failure::Unverified(r.detail))
    }
}
