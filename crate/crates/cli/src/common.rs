//! Argument types, sequence acquisition and artifact writing shared by the subcommands.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use mhgale::rational::{parse_rational, Rational};
use mhgale::sequence::io::{decode_sequence, encode_sequence, SequenceHeader};
use mhgale::sequence::{BitSource, SymbolSequence};
use serde::Serialize;

/// Environment variable naming a directory for memoized generated sequences.
pub const CACHE_ENV: &str = "MHGALE_CACHE_DIR";

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// A flag value is unusable; exit status 2.
    Usage { flag: &'static str, message: String },
    /// Anything that went wrong while doing the work; exit status 2.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage { flag, message } => write!(f, "invalid value for {flag}: {message}"),
            CliError::Runtime(message) => write!(f, "{message}"),
        }
    }
}

pub fn usage(flag: &'static str, message: impl fmt::Display) -> CliError {
    CliError::Usage {
        flag,
        message: message.to_string(),
    }
}

pub fn runtime(message: impl fmt::Display) -> CliError {
    CliError::Runtime(message.to_string())
}

/// What a command concluded; verification failures map to exit status 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

impl Status {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::VerificationFailed
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Phi,
    F,
    Raw,
}

/// Family parameters shared by most subcommands.
#[derive(Debug, Clone, Args, Serialize)]
pub struct FamilyArgs {
    /// Number of heads `h` (`Φ_h` or `F_{h+1}`).
    #[arg(long, default_value_t = 2)]
    pub h: u32,
    /// Block width `L` in bits.
    #[arg(long = "L", default_value_t = 1)]
    #[serde(rename = "L")]
    pub block_bits: u32,
}

pub fn parse_eps(text: &str) -> Result<Rational, CliError> {
    let eps = parse_rational(text).map_err(|e| usage("--eps", e))?;
    let zero = parse_rational("0").expect("literal");
    let one = parse_rational("1").expect("literal");
    if eps <= zero || eps >= one {
        return Err(usage("--eps", format!("{text} is not in (0, 1)")));
    }
    Ok(eps)
}

/// Seeds as `N`, `A..B` (half open) or a comma list.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |e: std::num::ParseIntError| usage("--seeds", format!("{text:?}: {e}"));
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a >= b {
            return Err(usage("--seeds", format!("empty range {text}")));
        }
        return Ok((a..b).collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(bad)).collect()
}

fn header_path(body: &Path) -> PathBuf {
    let mut name = body.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Writes a body file plus its `<body>.json` header.
pub fn write_sequence(
    path: &Path,
    seq: &mut SymbolSequence,
    seed: Option<u64>,
    length: u64,
) -> Result<SequenceHeader, CliError> {
    let (header, body) = encode_sequence(seq, seed, length).map_err(runtime)?;
    fs::write(path, body).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    write_json(&header_path(path), &header)?;
    Ok(header)
}

pub fn read_sequence(path: &Path) -> Result<(SequenceHeader, SymbolSequence), CliError> {
    let head = header_path(path);
    let text = fs::read_to_string(&head).map_err(|e| usage("--seq", format!("{}: {e}", head.display())))?;
    let header: SequenceHeader =
        serde_json::from_str(&text).map_err(|e| usage("--seq", format!("{}: {e}", head.display())))?;
    let body = fs::read(path).map_err(|e| usage("--seq", format!("{}: {e}", path.display())))?;
    let seq = decode_sequence(&header, &body).map_err(|e| usage("--seq", e))?;
    Ok((header, seq))
}

pub fn generate(family: FamilyName, fam: &FamilyArgs, seed: u64) -> Result<SymbolSequence, CliError> {
    let bits = BitSource::seeded(seed);
    match family {
        FamilyName::Phi => SymbolSequence::phi(fam.h, fam.block_bits, bits),
        FamilyName::F => SymbolSequence::f(fam.h, bits),
        FamilyName::Raw => SymbolSequence::raw(fam.block_bits, bits),
    }
    .map_err(|e| usage("--h", e))
}

/// A generated sequence of at least `length` symbols, reused from the cache
/// directory when one is configured.
pub fn cached_sequence(
    family: FamilyName,
    fam: &FamilyArgs,
    seed: u64,
    length: u64,
) -> Result<SymbolSequence, CliError> {
    let Some(dir) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return generate(family, fam, seed);
    };
    let name = format!(
        "{}-h{}-L{}-seed{}-n{}.seq",
        serde_json::to_value(family)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        fam.h,
        fam.block_bits,
        seed,
        length
    );
    let path = dir.join(name);
    if path.exists() && header_path(&path).exists() {
        if let Ok((_, seq)) = read_sequence(&path) {
            return Ok(seq);
        }
    }
    fs::create_dir_all(&dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
    let mut seq = generate(family, fam, seed)?;
    write_sequence(&path, &mut seq, Some(seed), length)?;
    Ok(seq)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A JSON document carrying the config echo next to the result.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: &'a C,
    pub result: R,
}

pub fn emit_json<C: Serialize, R: Serialize>(
    out: Option<&Path>,
    command: &str,
    config: &C,
    result: R,
) -> Result<(), CliError> {
    let doc = Envelope {
        command,
        version: VERSION,
        config,
        result,
    };
    emit(out, &to_json(&doc))
}

/// Emits a CSV body and, when written to a file, a `<out>.json` sidecar.
pub fn emit_csv<C: Serialize, S: Serialize>(
    out: Option<&Path>,
    command: &str,
    config: &C,
    csv: &str,
    summary: S,
) -> Result<(), CliError> {
    emit(out, csv)?;
    if let Some(path) = out {
        let doc = Envelope {
            command,
            version: VERSION,
            config,
            result: summary,
        };
        write_json(&header_path(path), &doc)?;
    }
    Ok(())
}

/// Runs `task` for every item on scoped threads and returns results in input order.
pub fn fan_out<T: Sync, R: Send>(items: &[T], task: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let task = &task;
                scope.spawn(move || part.iter().map(task).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
