//! `report`: tracker against both baselines at every boundary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use mhgale::engine::csv::format_float;
use mhgale::engine::stats::growth_rate;
use mhgale::engine::{run, BoundaryFamily, CheckpointSchedule, RunConfig, RunTrace};
use mhgale::sequence::phi_boundaries;
use mhgale::structure::bound_evaluators;
use serde::Serialize;

use crate::common::{
    cached_sequence, emit_csv, fan_out, parse_eps, runtime, usage, CliError, FamilyArgs, FamilyName, Status,
};
use crate::gambler::{build_builtin, Builtin};

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long, default_value_t = 6)]
    pub k_max: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "1/64")]
    pub eps: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const GAMBLERS: [Builtin; 3] = [Builtin::Phi, Builtin::BaselineOdd, Builtin::BaselineEven];

pub fn execute(args: &ReportArgs) -> Result<Status, CliError> {
    let h = args.fam.h;
    if h < 2 {
        return Err(usage("--h", format!("need h ≥ 2, got {h}")));
    }
    let eps = parse_eps(&args.eps)?;
    let (_, n_max) = phi_boundaries(h as u64, args.k_max).map_err(|e| usage("--k-max", e))?;
    let checkpoints = CheckpointSchedule::Boundaries
        .expand(Some(BoundaryFamily::Phi { h }), n_max)
        .map_err(runtime)?;
    let traces = fan_out(&GAMBLERS, |&which| -> Result<RunTrace, CliError> {
        let loaded = build_builtin(which, &args.fam, &eps)?;
        let mut seq = cached_sequence(FamilyName::Phi, &args.fam, args.seed, n_max)?;
        let config = RunConfig {
            n_max,
            s_values: vec![],
            checkpoints: checkpoints.clone(),
            hedge: Some(eps.clone()),
            exact: false,
        };
        run(loaded.gambler.as_ref(), &mut seq, &config).map_err(runtime)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("k,boundary,n,rho_tracker,growth_tracker,rho_odd,growth_odd,rho_even,growth_even\n");
    for k in 0..=args.k_max {
        let (s, t) = phi_boundaries(h as u64, k).map_err(runtime)?;
        for (which, n) in [("s", s), ("t", t)] {
            if n == 0 {
                continue;
            }
            write!(csv, "{k},{which},{n}").unwrap();
            for trace in &traces {
                let cp = trace.at(n).ok_or_else(|| runtime(format!("no checkpoint at {n}")))?;
                let growth = growth_rate(trace, n).map_err(runtime)?;
                write!(
                    csv,
                    ",{},{}",
                    format_float(cp.full_wins as f64 / n as f64),
                    format_float(growth)
                )
                .unwrap();
            }
            csv.push('\n');
        }
    }
    emit_csv(
        args.out.as_deref(),
        "report",
        args,
        &csv,
        bound_evaluators(h as u64, args.fam.block_bits),
    )?;
    Ok(Status::Ok)
}
