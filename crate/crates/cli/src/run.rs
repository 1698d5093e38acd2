//! `run`: simulate one gambler over one sequence and write the checkpoint table.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use mhgale::engine::csv::trace_to_csv;
use mhgale::engine::{run, BoundaryFamily, Checkpoint, CheckpointSchedule, RunConfig};
use mhgale::model::Gambler;
use mhgale::sequence::{Family, SymbolSequence};
use serde::Serialize;

use crate::common::{
    cached_sequence, emit_csv, parse_eps, read_sequence, runtime, usage, CliError, FamilyArgs, FamilyName, Status,
};
use crate::gambler::{build_builtin, load_spec_file, Builtin};

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// Built-in gambler; mutually exclusive with `--spec`.
    #[arg(long, value_enum, conflicts_with = "spec", required_unless_present = "spec")]
    pub gambler: Option<Builtin>,
    /// Gambler in the textual spec format.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Sequence family; defaults to the one the built-in gambler targets.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    /// Sequence written by `gen`; mutually exclusive with `--seed`.
    #[arg(long, conflicts_with = "seed")]
    pub seq: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_max: u64,
    /// Comma-separated `s` values whose `log2 d^(s)` is tracked.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// `boundaries`, `geometric:R` or an explicit comma list.
    #[arg(long, default_value = "boundaries")]
    pub checkpoints: String,
    /// Bets counted as parity bets are those of the form `χ_a` under this `ε`.
    #[arg(long, default_value = "1/64")]
    pub eps: String,
    /// Carry an exact rational capital next to the log-domain one.
    #[arg(long)]
    pub exact: bool,
    /// CSV target; the sidecar goes to `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_checkpoints(text: &str) -> Result<CheckpointSchedule, CliError> {
    if text == "boundaries" {
        return Ok(CheckpointSchedule::Boundaries);
    }
    if let Some(r) = text.strip_prefix("geometric:") {
        let r: f64 = r
            .parse()
            .map_err(|e| usage("--checkpoints", format!("{text:?}: {e}")))?;
        return Ok(CheckpointSchedule::Geometric(r));
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|e| usage("--checkpoints", format!("{text:?}: {e}")))
        })
        .collect::<Result<Vec<u64>, _>>()
        .map(CheckpointSchedule::Explicit)
}

#[derive(Serialize)]
struct RunSummary {
    gambler: BTreeMap<String, String>,
    sequence: Family,
    sequence_source: String,
    schedule: String,
    rows: usize,
    last: Option<Checkpoint>,
}

pub fn execute(args: &RunArgs) -> Result<Status, CliError> {
    let eps = parse_eps(&args.eps)?;
    let schedule = parse_checkpoints(&args.checkpoints)?;
    let loaded = match (args.gambler, &args.spec) {
        (Some(which), _) => build_builtin(which, &args.fam, &eps)?,
        (None, Some(path)) => load_spec_file(path)?,
        (None, None) => return Err(usage("--gambler", "either --gambler or --spec is required")),
    };
    // Loaded and cached bodies decode as fixed strings; the family comes from the request or header.
    let (family, mut seq) = match &args.seq {
        Some(path) => {
            let (header, seq) = read_sequence(path)?;
            if header.length < args.n_max {
                return Err(usage(
                    "--n-max",
                    format!("{} holds only {} symbols", path.display(), header.length),
                ));
            }
            (header.family, seq)
        }
        None => {
            let name = args
                .family
                .or(args.gambler.map(Builtin::family))
                .ok_or_else(|| usage("--family", "needed with --spec unless --seq is given"))?;
            let family = match name {
                FamilyName::Phi => Family::Phi { h: args.fam.h },
                FamilyName::F => Family::F { h: args.fam.h },
                FamilyName::Raw => Family::Raw,
            };
            (
                family,
                cached_sequence(name, &args.fam, args.seed.unwrap_or(1), args.n_max)?,
            )
        }
    };
    let boundary = match family {
        Family::Phi { h } => Some(BoundaryFamily::Phi { h }),
        Family::F { h } => Some(BoundaryFamily::F { h }),
        _ => None,
    };
    let checkpoints = schedule
        .expand(boundary, args.n_max)
        .map_err(|e| usage("--checkpoints", e))?;
    let config = RunConfig {
        n_max: args.n_max,
        s_values: args.s.clone(),
        checkpoints,
        hedge: Some(eps),
        exact: args.exact,
    };
    let gambler: &dyn Gambler = loaded.gambler.as_ref();
    let trace = run(gambler, &mut seq as &mut SymbolSequence, &config).map_err(runtime)?;
    let summary = RunSummary {
        gambler: loaded.metadata,
        sequence: family,
        sequence_source: seq.source_label().to_string(),
        schedule: schedule.describe(),
        rows: trace.checkpoints.len(),
        last: trace.last().cloned(),
    };
    emit_csv(args.out.as_deref(), "run", args, &trace_to_csv(&trace), summary)?;
    Ok(Status::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_forms() {
        assert_eq!(parse_checkpoints("boundaries").unwrap(), CheckpointSchedule::Boundaries);
        assert_eq!(
            parse_checkpoints("geometric:2").unwrap(),
            CheckpointSchedule::Geometric(2.0)
        );
        assert_eq!(
            parse_checkpoints("5,10").unwrap(),
            CheckpointSchedule::Explicit(vec![5, 10])
        );
        assert!(parse_checkpoints("geometric:x").is_err());
    }
}
