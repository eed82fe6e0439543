use std::fmt;
use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use dagproof::formula::{parse_formula, Formula, ParseError};
use serde::de::DeserializeOwned;

/// A failed invocation, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    /// Verdict negative (exit 1).
    Negative(String),
    /// Malformed input (exit 2).
    Input(anyhow::Error),
    /// Timeout or size cap reached (exit 3).
    Resource(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        match self {
            Failure::Negative(_) => ExitCode::from(1),
            Failure::Input(_) => ExitCode::from(2),
            Failure::Resource(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Negative(m) | Failure::Resource(m) => f.write_str(m),
            Failure::Input(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn input_error(message: impl fmt::Display) -> Failure {
    Failure::Input(anyhow::anyhow!("{message}"))
}

fn read_stdin() -> Outcome<String> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| input_error(format!("reading standard input: {e}")))?;
    Ok(text)
}

/// The contents of a file, or of standard input for `-`.
pub fn read_file(arg: &str) -> Outcome<String> {
    if arg == "-" {
        return read_stdin();
    }
    std::fs::read_to_string(arg).map_err(|e| input_error(format!("reading {arg}: {e}")))
}

/// Literal text, standard input for `-`, or the contents of an existing file.
pub fn read_text_or_file(arg: &str) -> Outcome<String> {
    if arg == "-" || Path::new(arg).is_file() {
        read_file(arg)
    } else {
        Ok(arg.to_string())
    }
}

/// Literal formula text, or standard input for `-`.
pub fn read_formula_arg(arg: &str) -> Outcome<Formula> {
    let text = if arg == "-" { read_stdin()? } else { arg.to_string() };
    parse_with_caret(text.trim())
}

pub fn parse_with_caret(text: &str) -> Outcome<Formula> {
    parse_formula(text).map_err(|e: ParseError| {
        let line = text.lines().next().unwrap_or("");
        let column = text[..e.offset.min(text.len())].chars().count();
        let caret = if e.offset <= line.len() {
            format!("\n  {line}\n  {}^", " ".repeat(column))
        } else {
            String::new()
        };
        input_error(format!("{e}{caret}"))
    })
}

/// Parse JSON without a nesting limit; proof documents nest as deep as the
/// proof is high.
pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let value = T::deserialize(&mut de)?;
    de.end()?;
    Ok(value)
}
