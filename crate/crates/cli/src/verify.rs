//! `verify`: multi-seed checks that exit 1 on any failure.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use mhgale::engine::{run_observed, PositionLog, RunConfig, StepObserver};
use mhgale::gamblers::{verify_tracking, TrackingLog, TrackingViolation};
use mhgale::rational::{format_rational, integer};
use mhgale::recon::{reconstruction_roundtrip, ReconstructionReport, ScenarioConfig, ScenarioKind};
use mhgale::structure::{
    closure, disjointness_check, hier_leaf_set, ratio_constants, u_adaptive, Disjointness, IndexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::common::{
    cached_sequence, emit_json, fan_out, parse_eps, parse_seeds, runtime, usage, CliError, FamilyArgs, FamilyName,
    Status,
};
use crate::gambler::{build_builtin, Builtin};

/// Violations listed per seed; the rest are only counted.
const VIOLATION_LIST_CAP: usize = 16;

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Head positions and bet targets of the tracker match the references.
    Tracking(TrackingArgs),
    /// Hidden parts of a `Φ_h` prefix are rebuilt exactly.
    Reconstruction(ReconstructionArgs),
    /// Some hierarchy closure avoids the window of the tracker's heads.
    Disjointness(DisjointnessArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TrackingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long, default_value = "1/64")]
    pub eps: String,
    /// Steps to simulate.
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value = "0..4")]
    pub seeds: String,
    /// Records from intervals `k < warmup_k` are not checked.
    #[arg(long, default_value_t = 1)]
    pub warmup_k: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReconstructionArgs {
    #[arg(long, value_parser = clap::value_parser!(ScenarioKind))]
    pub scenario: ScenarioKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    /// Withhold one more index; the run is then expected to fail.
    #[arg(long)]
    pub erase: Option<u64>,
    #[arg(long, default_value = "0..8")]
    pub seeds: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DisjointnessArgs {
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    /// Truncation depth of the leaf sets.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 200)]
    pub samples: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(cmd: VerifyCommand) -> Result<Status, CliError> {
    match cmd {
        VerifyCommand::Tracking(a) => tracking(&a),
        VerifyCommand::Reconstruction(a) => reconstruction(&a),
        VerifyCommand::Disjointness(a) => disjointness(&a),
    }
}

#[derive(Serialize)]
struct SeedTracking {
    seed: u64,
    checked: u64,
    violation_count: usize,
    violations: Vec<TrackingViolation>,
    parity_losses: u64,
}

#[derive(Serialize)]
struct Verdict<T> {
    ok: bool,
    runs: Vec<T>,
}

fn tracking(args: &TrackingArgs) -> Result<Status, CliError> {
    let eps = parse_eps(&args.eps)?;
    let seeds = parse_seeds(&args.seeds)?;
    if args.n == 0 {
        return Err(usage("--n", "must be positive"));
    }
    let loaded = build_builtin(Builtin::Phi, &args.fam, &eps)?;
    let h = args.fam.h as u64;
    let results = fan_out(&seeds, |&seed| -> Result<SeedTracking, CliError> {
        let mut seq = cached_sequence(FamilyName::Phi, &args.fam, seed, args.n)?;
        let config = RunConfig {
            n_max: args.n,
            s_values: vec![],
            checkpoints: vec![args.n],
            hedge: Some(eps.clone()),
            exact: false,
        };
        let mut log = TrackingLog::new(h);
        let trace = {
            let mut obs: [&mut dyn StepObserver; 1] = [&mut log];
            run_observed(loaded.gambler.as_ref(), &mut seq, &config, &mut obs).map_err(runtime)?
        };
        let mut report = verify_tracking(&log, &seq, h, args.warmup_k);
        let violation_count = report.violations.len();
        report.violations.truncate(VIOLATION_LIST_CAP);
        Ok(SeedTracking {
            seed,
            checked: report.checked,
            violation_count,
            violations: report.violations,
            parity_losses: trace.last().map_or(0, |c| c.parity_losses),
        })
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = runs.iter().all(|r| r.violation_count == 0 && r.checked > 0);
    emit_json(args.out.as_deref(), "verify tracking", args, Verdict { ok, runs })?;
    Ok(Status::from_ok(ok))
}

fn reconstruction(args: &ReconstructionArgs) -> Result<Status, CliError> {
    let seeds = parse_seeds(&args.seeds)?;
    let results = fan_out(&seeds, |&seed| -> Result<ReconstructionReport, CliError> {
        let mut cfg = ScenarioConfig::new(args.scenario, args.fam.h, args.fam.block_bits, seed, args.n);
        cfg.m = args.m;
        cfg.j = args.j;
        cfg.erase_extra = args.erase;
        reconstruction_roundtrip(&cfg).map_err(|e| usage("--n", e))
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ok = runs.iter().all(|r| r.exact() && r.hidden_avoids_overwritten);
    emit_json(args.out.as_deref(), "verify reconstruction", args, Verdict { ok, runs })?;
    Ok(Status::from_ok(ok))
}

#[derive(Serialize)]
struct Sample {
    m: u64,
    n: u64,
    window: u64,
    #[serde(flatten)]
    found: Disjointness,
}

#[derive(Serialize)]
struct DisjointnessResult {
    ok: bool,
    gamma: String,
    threshold_n: Option<u64>,
    found: usize,
    samples: Vec<Sample>,
}

fn disjointness(args: &DisjointnessArgs) -> Result<Status, CliError> {
    if args.h < 2 {
        return Err(usage("--h", format!("need h ≥ 2, got {}", args.h)));
    }
    let constants = ratio_constants(args.h, args.d);
    let threshold = constants
        .threshold_n()
        .ok_or_else(|| runtime("the ratio gap leaves no admissible n"))?
        .max(2);
    if threshold > args.n_max {
        return Err(usage("--n-max", format!("must be at least {threshold}")));
    }
    let fam = FamilyArgs {
        h: args.h as u32,
        block_bits: 1,
    };
    let loaded = build_builtin(Builtin::Phi, &fam, &mhgale::gamblers::PhiTrackerParams::default_hedge())?;
    let mut seq = cached_sequence(FamilyName::Phi, &fam, args.seed, args.n_max + 1)?;
    let config = RunConfig {
        n_max: args.n_max + 1,
        s_values: vec![],
        checkpoints: vec![args.n_max + 1],
        hedge: None,
        exact: false,
    };
    let mut log = PositionLog::new(args.h - 1);
    {
        let mut obs: [&mut dyn StepObserver; 1] = [&mut log];
        run_observed(loaded.gambler.as_ref(), &mut seq, &config, &mut obs).map_err(runtime)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let windows: Vec<(u64, u64)> = (0..args.samples)
        .map(|_| {
            let n = rng.gen_range(threshold..=args.n_max);
            let lo = (&constants.gamma * integer(n)).ceil().to_integer();
            let lo = u64::try_from(lo).expect("γn ≤ n").max(1);
            (rng.gen_range(lo..=n), n)
        })
        .collect();
    let samples = fan_out(&windows, |&(m, n)| -> Result<Sample, CliError> {
        let u = u_adaptive(m, n, &log).map_err(runtime)?;
        let closures = (1..=args.h)
            .map(|j| hier_leaf_set(args.h, args.d, m, n, j).map(|v| closure(&v, args.h, n)))
            .collect::<Result<Vec<IndexSet>, _>>()
            .map_err(runtime)?;
        Ok(Sample {
            m,
            n,
            window: u.len(),
            found: disjointness_check(&u, &closures),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let found = samples.iter().filter(|s| s.found.j.is_some()).count();
    let result = DisjointnessResult {
        ok: found == samples.len(),
        gamma: format_rational(&constants.gamma),
        threshold_n: constants.threshold_n(),
        found,
        samples,
    };
    let ok = result.ok;
    emit_json(args.out.as_deref(), "verify disjointness", args, result)?;
    Ok(Status::from_ok(ok))
}
