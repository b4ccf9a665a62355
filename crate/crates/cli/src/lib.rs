//! Command-line front end: argument types, the growth-table cache and one
//! function per subcommand. `run` never touches stdout so it can be driven
//! from tests.

pub mod args;
pub mod cache;
pub mod commands;
pub mod dixmier;

use std::path::Path;

use qgrowth_core::Error;

pub use args::{Command, DimFn, Dixmier, Format, RingArgs, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// What a command produced: the report body, an optional diagnostic line
/// for stderr, and the exit code (0, or 1 when a checked property failed).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
    pub note: Option<String>,
}

impl Outcome {
    pub fn new(code: i32, body: String) -> Self {
        Outcome {
            code,
            body,
            note: None,
        }
    }

    pub fn ok(body: String) -> Self {
        Self::new(EXIT_OK, body)
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Spec(String),
    Io(String),
}

impl CliError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_resource_cap() => EXIT_RESOURCE,
            CliError::Core(Error::Quadrature { .. }) => EXIT_RESOURCE,
            _ => EXIT_SPEC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Spec(s) | CliError::Io(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Growth { ring, n, dimfn } => commands::growth(cfg, ring, *n, *dimfn),
        Command::Dim {
            ring,
            n,
            dimfn,
            window,
            strict,
        } => commands::dim(cfg, ring, *n, *dimfn, *window, *strict),
        Command::Kac { ring, n } => commands::kac(cfg, ring, *n),
        Command::Validate { ring, samples } => commands::validate(cfg, ring, *samples),
        Command::FourierVerify { group, samples } => commands::fourier_verify(cfg, group, *samples),
        Command::Dixmier { experiment } => dixmier::run(cfg, experiment),
    }
}

/// Runs `cfg` and writes the body to `--out` or stdout. Returns the exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let outcome = match run(cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.body) {
                eprintln!("error: {}", CliError::io(path, e));
                return EXIT_SPEC;
            }
        }
        None => print!("{}", outcome.body),
    }
    outcome.code
}
