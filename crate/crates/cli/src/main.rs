mod commands;
mod input;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use qcomb::leavitt::Mode;

use crate::input::Inputs;
use crate::report::{Report, Verdict};

#[derive(Parser, Debug)]
#[command(name = "qcomb", version, about = "Exact checks for coalgebras, quantum Boolean algebras, quivers and Leavitt path algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Leavitt relations at vertices with no live incoming edge: `standard` or `absolute`.
    #[arg(long, global = true, default_value = "standard")]
    mode: Mode,
    /// Use the literal printed forms of the quiver condition and the second de Morgan law.
    #[arg(long, global = true)]
    strict_paper: bool,
    /// Seed for sampled sweeps; echoed in the report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the report to this file.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check coassociativity, counit and star laws of a coalgebra.
    Validate { coalgebra: PathBuf },
    /// Enumerate group-like elements.
    Grouplikes { coalgebra: PathBuf },
    /// Basis of (g, h)-primitive elements, indexing group-likes in enumeration order.
    Primitives {
        coalgebra: PathBuf,
        #[arg(long, default_value_t = 0)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        h: usize,
    },
    /// Symmetry condition for the first two maps of a maps file, or a sampled sweep.
    Admissible {
        maps: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Paired map of two admissible maps, and associativity when three are given.
    Pair {
        maps: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Convolution products, admissibility and commutation of functionals.
    Conv { functionals: PathBuf },
    /// Orthogonal idempotent families of maps into linearized sets.
    Idempotents {
        maps: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Expectations and probabilities in a state.
    Expect {
        state: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Lattice axioms, complement, weak de Morgan and the negation probe for a Boolean table.
    QboolCheck { tables: PathBuf },
    /// Weak de Morgan identities for a Boolean table.
    Demorgan { tables: PathBuf },
    /// Compatibility of source and target maps of a quiver.
    QuiverCheck { quiver: PathBuf },
    /// Coassociativity and counit of a comodule over a coalgebra.
    ComoduleCheck { coalgebra: PathBuf, comodule: PathBuf },
    /// Normal form of a word such as `e e*` or of an element in text form.
    LpaNormalize { quiver: PathBuf, expr: String },
    /// Product of two words or elements.
    LpaMul { quiver: PathBuf, left: String, right: String },
    /// Closure of normal-form monomials under products and the multiplication table.
    LpaTable {
        quiver: PathBuf,
        #[arg(long, default_value_t = 120)]
        limit: usize,
    },
    /// Retraction and section equations of a stable representation.
    StableCheck { quiver: PathBuf, rep: PathBuf },
    /// Representation to module and back, with every defining relation checked.
    RepRoundtrip {
        quiver: PathBuf,
        rep: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Generators and relations of the algebra, each cross-checked against rewriting.
    CpAudit { quiver: PathBuf },
    /// Print a builtin coalgebra (`comatrix:2`, `linearize:a,b`, ...) in file format.
    Builtin { name: String },
}

pub struct Flags {
    pub mode: Mode,
    pub strict_paper: bool,
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let flags = Flags {
        mode: cli.mode,
        strict_paper: cli.strict_paper,
        seed: cli.seed,
    };
    let mut inputs = Inputs::default();
    let name = commands::name(&cli.command);
    let findings = match commands::run(&cli.command, &flags, &mut inputs) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = Report::new(&name, inputs.digests, findings, flags.seed);
    let text = report.to_json();
    let _ = writeln!(io::stdout(), "{text}");
    if let Some(path) = &cli.json {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    eprintln!("{name}: {:?} in {} ms", report.verdict, start.elapsed().as_millis());
    match report.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    }
}
