use std::fmt::Display;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coalgex::equivalence::{expr_equiv, LambdaOracle};
use coalgex::expr::{fischer_ladner, parse_wellformed};
use coalgex::format::{self, AnyCoalgebra, AnyFunctor, CoalgebraFile};
use coalgex::kleene::{extract, synthesize};
use coalgex::semantics::{eval_closed, eval_system, flatten};
use coalgex::{Functor, FunctorTag, WellFormed};

#[derive(Parser)]
#[command(name = "coalgex", version, about = "Fixpoint expressions over finite coalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FunctorArgs {
    /// dfa, lts, dist or mon
    #[arg(long, short)]
    functor: FunctorTag,
    /// Comma-separated alphabet (dfa)
    #[arg(long, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
    /// Comma-separated permitted labels (lts; any label if absent)
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Check an expression and print its α-canonical form
    Parse {
        expr: PathBuf,
        #[command(flatten)]
        functor: FunctorArgs,
        /// Print the flat equation system instead
        #[arg(long)]
        flat: bool,
        /// Print the Fischer-Ladner closure instead
        #[arg(long)]
        closure: bool,
    },
    /// Print the states of a coalgebra file satisfying an expression
    Eval {
        expr: PathBuf,
        coalgebra: PathBuf,
        /// Print every component of the flat system's greatest fixpoint
        #[arg(long)]
        flat: bool,
    },
    /// Print a coalgebra file whose initial state is described by an expression
    Synthesize {
        expr: PathBuf,
        #[command(flatten)]
        functor: FunctorArgs,
    },
    /// Print a characteristic expression for a state
    Extract {
        coalgebra: PathBuf,
        /// Defaults to the file's initial state
        #[arg(long)]
        state: Option<String>,
    },
    /// Decide whether two expressions are equivalent (exit 0 yes, 1 no, 2 error)
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        functor: FunctorArgs,
        /// Cross-check the verdict with the brute-force Λ-bisimulation oracle
        #[arg(long)]
        oracle: bool,
    },
}

struct Failure {
    message: String,
    code: u8,
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { message: e.to_string(), code: 1 }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(text)
}

fn read_expr<F: Functor>(path: &Path, f: &F) -> Result<WellFormed<F::Modality>, Failure> {
    let text = read_input(path)?;
    parse_wellformed(&text, f).map_err(|e| format!("{}:{e}", path.display()).into())
}

fn read_coalgebra(path: &Path) -> Result<CoalgebraFile, Failure> {
    format::read(&read_input(path)?).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Runs `$body` with `$f` bound to the concrete functor inside `$any`.
macro_rules! with_functor {
    ($any:expr, $f:ident => $body:expr) => {
        match $any {
            AnyFunctor::Dfa($f) => $body,
            AnyFunctor::Lts($f) => $body,
            AnyFunctor::Dist($f) => $body,
            AnyFunctor::Mon($f) => $body,
        }
    };
}

macro_rules! with_coalgebra {
    ($any:expr, $c:ident => $body:expr) => {
        match $any {
            AnyCoalgebra::Dfa($c) => $body,
            AnyCoalgebra::Lts($c) => $body,
            AnyCoalgebra::Dist($c) => $body,
            AnyCoalgebra::Mon($c) => $body,
        }
    };
}

fn functor(args: &FunctorArgs) -> Result<AnyFunctor, Failure> {
    Ok(AnyFunctor::from_options(args.functor, args.alphabet.clone(), args.labels.clone())?)
}

fn lines<I: IntoIterator<Item = S>, S: Display>(items: I) -> String {
    items.into_iter().map(|s| format!("{s}\n")).collect()
}

fn cmd_parse<F: Functor>(f: &F, path: &Path, flat: bool, closure: bool) -> Outcome {
    let e = read_expr(path, f)?;
    let out = if flat {
        flatten(&e).display(f).to_string()
    } else if closure {
        lines(fischer_ladner(&e.term()).iter().map(|t| t.to_expr().display(f).to_string()))
    } else {
        format!("{}\n", e.term().to_expr().display(f))
    };
    Ok((out, 0))
}

fn cmd_eval(expr: &Path, coalgebra: &Path, flat: bool) -> Outcome {
    let file = read_coalgebra(coalgebra)?;
    with_coalgebra!(file.coalgebra, c => {
        let e = read_expr(expr, c.functor())?;
        let out = if flat {
            let system = flatten(&e);
            let gfp = eval_system(&system, &c)?;
            lines(system.vars.iter().zip(&gfp).map(|(v, s)| {
                let names: Vec<&str> = s.names(c.carrier()).collect();
                format!("{v}: {}", names.join(" "))
            }))
        } else {
            lines(eval_closed(&e, &c)?.names(c.carrier()))
        };
        Ok((out, 0))
    })
}

fn cmd_synthesize<F: Functor>(f: &F, path: &Path) -> Outcome
where
    AnyCoalgebra: From<coalgex::Coalgebra<F>>,
{
    let e = read_expr(path, f)?;
    let model = synthesize(f, &e)?;
    let file = CoalgebraFile { coalgebra: model.coalgebra.into(), initial: Some(model.state) };
    Ok((format::write(&file), 0))
}

fn cmd_extract(path: &Path, state: Option<&str>) -> Outcome {
    let file = read_coalgebra(path)?;
    let carrier = file.coalgebra.carrier();
    let x = match (state, file.initial) {
        (Some(name), _) => carrier.lookup(name)?,
        (None, Some(x)) => x,
        (None, None) => return Err("no --state given and the file has no initial state".into()),
    };
    with_coalgebra!(&file.coalgebra, c => Ok((format!("{}\n", extract(c, x).expr().display(c.functor())), 0)))
}

fn cmd_equiv<F: Functor>(f: &F, first: &Path, second: &Path, oracle: bool) -> Outcome {
    let fail = |e: Failure| Failure { code: 2, ..e };
    let a = read_expr(first, f).map_err(fail)?;
    let b = read_expr(second, f).map_err(fail)?;
    let verdict = expr_equiv(f, &a, &b).map_err(|e| fail(e.into()))?;
    if oracle {
        let ma = synthesize(f, &a).map_err(|e| fail(e.into()))?;
        let mb = synthesize(f, &b).map_err(|e| fail(e.into()))?;
        let check = LambdaOracle::new(&ma.coalgebra, &mb.coalgebra).map_err(|e| fail(e.into()))?;
        let related = check.bisimilarity().contains(ma.state, mb.state);
        if related != verdict {
            return Err(Failure {
                message: format!("oracle disagrees: model checking says {verdict}, Λ-bisimilarity says {related}"),
                code: 2,
            });
        }
    }
    Ok(if verdict { ("equivalent\n".into(), 0) } else { ("inequivalent\n".into(), 1) })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { expr, functor: args, flat, closure } => {
            if flat && closure {
                return Err("--flat and --closure are exclusive".into());
            }
            with_functor!(functor(&args)?, f => cmd_parse(&f, &expr, flat, closure))
        }
        Command::Eval { expr, coalgebra, flat } => cmd_eval(&expr, &coalgebra, flat),
        Command::Synthesize { expr, functor: args } => with_functor!(functor(&args)?, f => cmd_synthesize(&f, &expr)),
        Command::Extract { coalgebra, state } => cmd_extract(&coalgebra, state.as_deref()),
        Command::Equiv { first, second, functor: args, oracle } => {
            let f = functor(&args).map_err(|e| Failure { code: 2, ..e })?;
            with_functor!(f, f => cmd_equiv(&f, &first, &second, oracle))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_equiv = matches!(cli.command, Command::Equiv { .. });
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure { message, code }) => {
            eprintln!("error: {message}");
            ExitCode::from(if is_equiv { 2 } else { code })
        }
    }
}
