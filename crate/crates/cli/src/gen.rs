//! `gen`: materialize a sequence prefix to disk.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use crate::common::{generate, to_json, usage, write_sequence, CliError, FamilyArgs, FamilyName, Status};

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of symbols to write.
    #[arg(long)]
    pub length: u64,
    /// Body file; the header goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &GenArgs) -> Result<Status, CliError> {
    if args.length == 0 {
        return Err(usage("--length", "must be positive"));
    }
    let mut seq = generate(args.family, &args.fam, args.seed)?;
    let header = write_sequence(&args.out, &mut seq, Some(args.seed), args.length)?;
    eprint!("{}", to_json(&header));
    Ok(Status::Ok)
}
