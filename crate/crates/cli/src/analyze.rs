//! `analyze`: closed forms, ratio sets and index-set reports that need no run,
//! plus the `ρ` convergence table of the tracker.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use mhgale::engine::csv::format_float;
use mhgale::engine::{run, BoundaryFamily, CheckpointSchedule, RunConfig};
use mhgale::rational::{format_rational, integer, to_f64, Rational};
use mhgale::recon::{leaf_expansion, DepFamily, DependencyGraph};
use mhgale::sequence::{phi_boundaries, phi_markers_upto};
use mhgale::structure::{
    beta, bound_evaluators, delta1, delta2, hier_leaf_set, overwritten_set_a, phi_epoch, phi_ref_sets, ratio_constants,
    residue_class, rho1, rho2, Claim, IndexSet, IndexSetReport,
};
use serde::Serialize;

use crate::common::{
    cached_sequence, emit_csv, emit_json, parse_eps, runtime, usage, CliError, FamilyArgs, FamilyName, Status,
};
use crate::gambler::{build_builtin, Builtin};

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Odd-interval density `β` at the boundaries against its two limits.
    Beta(BetaArgs),
    /// Full-win density of the tracker at the boundaries against its two limits.
    Rho(RhoArgs),
    /// Closed-form limits and dimension bounds.
    Bounds(BoundsArgs),
    /// Leaves of a dependency expansion.
    Leaves(LeavesArgs),
    /// Hierarchy leaf sets `V_i` over a window.
    LeafSet(LeafSetArgs),
    /// Ratio sets `T_i`, the gap `ζ` and the constant `γ`.
    Ratios(RatiosArgs),
    /// Overwritten, reference and residue sets of a `Φ_h` window, with their claims.
    Sets(SetsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BetaArgs {
    #[arg(long, default_value_t = 2)]
    pub h: u64,
    #[arg(long, default_value_t = 11)]
    pub k_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RhoArgs {
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

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFamily {
    Phi,
    F,
}

#[derive(Debug, Args, Serialize)]
pub struct LeavesArgs {
    #[arg(long, value_enum, default_value = "f")]
    pub family: GraphFamily,
    #[arg(long, default_value_t = 2)]
    pub h: u32,
    #[arg(long)]
    pub root: u64,
    #[arg(long, default_value_t = 2)]
    pub depth: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LeafSetArgs {
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    /// Only this `i`; all of `1..=h` otherwise.
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RatiosArgs {
    #[arg(long, default_value_t = 2)]
    pub h: usize,
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SetsArgs {
    #[arg(long, default_value_t = 2)]
    pub h: u64,
    #[arg(long)]
    pub n: u64,
    /// Defaults to `⌈9n/10⌉`.
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(cmd: AnalyzeCommand) -> Result<Status, CliError> {
    match cmd {
        AnalyzeCommand::Beta(a) => beta_table(&a),
        AnalyzeCommand::Rho(a) => rho_table(&a),
        AnalyzeCommand::Bounds(a) => {
            check_h(a.fam.h as u64)?;
            emit_json(
                a.out.as_deref(),
                "analyze bounds",
                &a,
                bound_evaluators(a.fam.h as u64, a.fam.block_bits),
            )?;
            Ok(Status::Ok)
        }
        AnalyzeCommand::Leaves(a) => leaves(&a),
        AnalyzeCommand::LeafSet(a) => leaf_set(&a),
        AnalyzeCommand::Ratios(a) => {
            if a.h == 0 {
                return Err(usage("--h", "must be positive"));
            }
            emit_json(
                a.out.as_deref(),
                "analyze ratios",
                &a,
                ratio_constants(a.h, a.d).summary(),
            )?;
            Ok(Status::Ok)
        }
        AnalyzeCommand::Sets(a) => sets(&a),
    }
}

fn check_h(h: u64) -> Result<(), CliError> {
    if h < 2 {
        return Err(usage("--h", format!("need h ≥ 2, got {h}")));
    }
    Ok(())
}

fn limit_row(out: &mut String, k: u32, which: &str, n: u64, value: f64, limit: &Rational) {
    let limit = to_f64(limit);
    writeln!(
        out,
        "{k},{which},{n},{},{},{}",
        format_float(value),
        format_float(limit),
        format_float((value - limit).abs())
    )
    .unwrap();
}

fn beta_table(args: &BetaArgs) -> Result<Status, CliError> {
    check_h(args.h)?;
    let scale = integer(args.h + 1);
    let mut csv = String::from("k,boundary,n,beta_scaled,limit,abs_error\n");
    // Inside odd intervals the scaled density peaks at `t_k` and bottoms out at `s_k`.
    for k in (1..=args.k_max).step_by(2) {
        let (s, t) = phi_boundaries(args.h, k).map_err(|e| usage("--k-max", e))?;
        limit_row(
            &mut csv,
            k,
            "s",
            s,
            to_f64(&(beta(args.h, s) / &scale)),
            &delta2(args.h),
        );
        limit_row(
            &mut csv,
            k,
            "t",
            t,
            to_f64(&(beta(args.h, t) / &scale)),
            &delta1(args.h),
        );
    }
    let summary = Limits {
        upper: format_rational(&delta1(args.h)),
        lower: format_rational(&delta2(args.h)),
    };
    emit_csv(args.out.as_deref(), "analyze beta", args, &csv, summary)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct Limits {
    upper: String,
    lower: String,
}

fn rho_table(args: &RhoArgs) -> Result<Status, CliError> {
    let h = args.fam.h;
    check_h(h as u64)?;
    let eps = parse_eps(&args.eps)?;
    let (_, n_max) = phi_boundaries(h as u64, args.k_max).map_err(|e| usage("--k-max", e))?;
    let loaded = build_builtin(Builtin::Phi, &args.fam, &eps)?;
    let mut seq = cached_sequence(FamilyName::Phi, &args.fam, args.seed, n_max)?;
    let config = RunConfig {
        n_max,
        s_values: vec![],
        checkpoints: CheckpointSchedule::Boundaries
            .expand(Some(BoundaryFamily::Phi { h }), n_max)
            .map_err(runtime)?,
        hedge: Some(eps),
        exact: false,
    };
    let trace = run(loaded.gambler.as_ref(), &mut seq, &config).map_err(runtime)?;
    let mut csv = String::from("k,boundary,n,rho,limit,abs_error\n");
    for k in 1..=args.k_max {
        let (s, t) = phi_boundaries(h as u64, k).map_err(runtime)?;
        for (which, n, limit) in [("s", s, rho2(h as u64)), ("t", t, rho1(h as u64))] {
            let cp = trace.at(n).ok_or_else(|| runtime(format!("no checkpoint at {n}")))?;
            limit_row(&mut csv, k, which, n, cp.full_wins as f64 / n as f64, &limit);
        }
    }
    let summary = Limits {
        upper: format_rational(&rho1(h as u64)),
        lower: format_rational(&rho2(h as u64)),
    };
    emit_csv(args.out.as_deref(), "analyze rho", args, &csv, summary)?;
    Ok(Status::Ok)
}

fn leaves(args: &LeavesArgs) -> Result<Status, CliError> {
    let family = match args.family {
        GraphFamily::Phi => {
            check_h(args.h as u64)?;
            DepFamily::Phi { h: args.h as u64 }
        }
        GraphFamily::F => {
            if args.h == 0 {
                return Err(usage("--h", "must be positive"));
            }
            DepFamily::F { h: args.h as usize }
        }
    };
    let graph = DependencyGraph::new(family);
    emit_json(
        args.out.as_deref(),
        "analyze leaves",
        args,
        leaf_expansion(&graph, args.root, args.depth),
    )?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct LeafSetEntry {
    i: usize,
    set: IndexSet,
}

fn leaf_set(args: &LeafSetArgs) -> Result<Status, CliError> {
    let which: Vec<usize> = match args.i {
        Some(i) => vec![i],
        None => (1..=args.h).collect(),
    };
    let entries = which
        .into_iter()
        .map(|i| {
            hier_leaf_set(args.h, args.d, args.m, args.n, i)
                .map(|set| LeafSetEntry { i, set })
                .map_err(|e| usage("--m", e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    emit_json(args.out.as_deref(), "analyze leaf-set", args, entries)?;
    Ok(Status::Ok)
}

/// Sets of a `Φ_h` window `[m, n]`: `A`, every `V_j`/`W_j`, the residue class
/// `B` and the rest of the tail `C`.
pub fn window_sets(h: u64, m: u64, n: u64) -> Result<IndexSetReport, CliError> {
    check_h(h)?;
    if m == 0 || m > n {
        return Err(usage("--m", format!("need 1 ≤ m ≤ n, got m={m} n={n}")));
    }
    let k = phi_epoch(h, n).ok_or_else(|| usage("--n", format!("{n} precedes the first interval")))?;
    let slot = h - (k as u64 % 2);
    let markers = IndexSet::from_points(phi_markers_upto(h, n));
    let tail = IndexSet::interval(m, n);
    let b = residue_class(h, m, n).difference(&markers);
    let c = tail.difference(&b).difference(&markers);
    let mut report = IndexSetReport::new();
    report
        .param("h", h)
        .param("m", m)
        .param("n", n)
        .param("k", k)
        .param("slot", slot);
    report.set("A", overwritten_set_a(h, n));
    for sets in phi_ref_sets(h, m, n, k).map_err(|e| usage("--n", e))? {
        report
            .set(&format!("V_{}", sets.j), sets.v)
            .set(&format!("W_{}", sets.j), sets.w);
    }
    if slot == h {
        // `V_h` sits outside `1..h`, so it is added on its own.
        let sets = mhgale::structure::phi_ref_set(h, m, n, k, slot).map_err(|e| usage("--n", e))?;
        report
            .set(&format!("V_{slot}"), sets.v)
            .set(&format!("W_{slot}"), sets.w);
    }
    report.set("B", b).set("C", c);
    report.claim(Claim::Disjoint {
        a: "A".into(),
        b: format!("V_{slot}"),
    });
    report.claim(Claim::Disjoint {
        a: "B".into(),
        b: "C".into(),
    });
    Ok(report)
}

fn sets(args: &SetsArgs) -> Result<Status, CliError> {
    let m = args.m.unwrap_or_else(|| (9 * args.n).div_ceil(10));
    let report = window_sets(args.h, m, args.n)?;
    let ok = report.all_hold();
    emit_json(args.out.as_deref(), "analyze sets", args, &report)?;
    Ok(Status::from_ok(ok))
}
