//! Command-line front end: argument handling, input loading and dispatch.

mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use periodic_core::bayesian::{self, BayesianGame};
use periodic_core::io::{parse_bayes, parse_game, write_game};
use periodic_core::random::{random_bayesian, random_game};
use periodic_core::{Error, Game, Node, TiePolicy};

use report::Render;
pub use report::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "periodic", version, about = "Periodic strategies and related solution concepts for finite games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    ExAnte,
    Interim,
    InterimCorrelated,
}

#[derive(Debug, Args)]
struct Input {
    /// Game document (JSON). Omit when using --seed.
    file: Option<PathBuf>,

    /// Generate a random game from this seed instead of reading a file.
    #[arg(long)]
    seed: Option<u64>,

    /// Action counts of the generated game, e.g. 2x3x2.
    #[arg(long, default_value = "2x2", requires = "seed")]
    shape: String,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct GraphOpts {
    /// How to break ties between opponent profiles: strict or lex.
    #[arg(long, default_value = "lex")]
    tie_policy: TiePolicy,

    /// Longest cycle (in edges) to enumerate; defaults to the node count.
    #[arg(long)]
    max_len: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Periodic actions, dominance survivors, cycles and type counts.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        graph: GraphOpts,
    },
    /// Cycles of the periodicity graph, optionally through one node.
    Cycles {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        graph: GraphOpts,
        /// Only cycles through this node, written player:action.
        #[arg(long)]
        through: Option<String>,
    },
    /// Mixed periodic strategies of a two-player game.
    Mixed {
        #[command(flatten)]
        input: Input,
    },
    /// Mixed Nash equilibria of a two-player game.
    Nash {
        #[command(flatten)]
        input: Input,
    },
    /// Cooperative-competitive value of a two-player game.
    Coco {
        #[command(flatten)]
        input: Input,
    },
    /// Build a complete-information game from a Bayesian game document.
    Bayes {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Target::ExAnte)]
        to: Target,
    },
}

/// A failure together with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateArgmax { .. } => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_shape(s: &str) -> Result<Vec<usize>, Failure> {
    let shape: Vec<usize> = s
        .split('x')
        .map(|part| part.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("invalid --shape {s:?}; expected e.g. 2x3")))?;
    if shape.len() < 2 || shape.contains(&0) {
        return Err(Failure::usage(format!(
            "invalid --shape {s:?}; need at least two players with at least one action each"
        )));
    }
    Ok(shape)
}

fn read_file(input: &Input) -> Result<Option<String>, Failure> {
    match (&input.file, input.seed) {
        (Some(_), Some(_)) => Err(Failure::usage("give either a file or --seed, not both")),
        (None, None) => Err(Failure::usage("missing input file (or --seed)")),
        (None, Some(_)) => Ok(None),
        (Some(path), None) => std::fs::read_to_string(path).map(Some).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("cannot read {}: {e}", path.display()),
        }),
    }
}

fn load_game(input: &Input) -> Result<Game, Failure> {
    match read_file(input)? {
        Some(text) => Ok(parse_game(&text)?),
        None => {
            let shape = parse_shape(&input.shape)?;
            let seed = input.seed.expect("checked by read_file");
            Ok(random_game(&mut ChaCha8Rng::seed_from_u64(seed), &shape, -9, 9))
        }
    }
}

fn load_bayes(input: &Input) -> Result<BayesianGame, Failure> {
    match read_file(input)? {
        Some(text) => Ok(parse_bayes(&text)?),
        None => {
            let shape = parse_shape(&input.shape)?;
            let seed = input.seed.expect("checked by read_file");
            let types = vec![2; shape.len()];
            Ok(random_bayesian(&mut ChaCha8Rng::seed_from_u64(seed), &shape, &types, 2, -9, 9))
        }
    }
}

fn parse_node(game: &Game, text: &str) -> Result<Node, Failure> {
    let (player, action) = text
        .rsplit_once(':')
        .ok_or_else(|| Failure::usage(format!("--through expects player:action, got {text:?}")))?;
    let p = game.find_player(player)?;
    let a = game.find_action(p, action)?;
    Ok(Node::new(p, a))
}

fn no_dot(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::usage(format!("--format dot is not available for {command}")));
    }
    Ok(())
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Analyze { input, graph } => {
            let game = load_game(&input)?;
            let r = report::analyze(&game, graph.tie_policy, graph.max_len)?;
            Ok(r.render(input.format))
        }
        Command::Cycles { input, graph, through } => {
            let game = load_game(&input)?;
            let through = through.map(|s| parse_node(&game, &s)).transpose()?;
            let r = report::cycles(&game, graph.tie_policy, graph.max_len, through)?;
            Ok(r.render(input.format))
        }
        Command::Mixed { input } => {
            no_dot(input.format, "mixed")?;
            let game = load_game(&input)?;
            Ok(report::mixed(&game)?.render(input.format))
        }
        Command::Nash { input } => {
            no_dot(input.format, "nash")?;
            let game = load_game(&input)?;
            Ok(report::nash(&game)?.render(input.format))
        }
        Command::Coco { input } => {
            no_dot(input.format, "coco")?;
            let game = load_game(&input)?;
            Ok(report::coco(&game)?.render(input.format))
        }
        Command::Bayes { input, to } => {
            no_dot(input.format, "bayes")?;
            let bg = load_bayes(&input)?;
            let game = match to {
                Target::ExAnte => bayesian::ex_ante_game(&bg)?,
                Target::Interim => bayesian::interim_game(&bg)?,
                Target::InterimCorrelated => bayesian::interim_correlated_game(&bg)?,
            };
            Ok(write_game(&game))
        }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
