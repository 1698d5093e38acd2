//! Built-in gamblers and `gambler build`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use mhgale::gamblers::{build_baseline, build_f_parity, build_phi_tracker, BaselineParity, PhiTrackerParams};
use mhgale::model::{embed_oblivious, parse_spec, write_spec, Gambler, ValidationLimits};
use mhgale::rational::Rational;
use serde::Serialize;

use crate::common::{emit, parse_eps, runtime, usage, CliError, FamilyArgs, FamilyName, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// Adaptive `Φ_h` tracker.
    #[value(name = "builtin-phi")]
    #[serde(rename = "builtin-phi")]
    Phi,
    /// Oblivious `F_{h+1}` parity gambler.
    #[value(name = "builtin-f")]
    #[serde(rename = "builtin-f")]
    F,
    /// Oblivious `Φ_h` baseline at speed `h/(h+1)`.
    #[value(name = "builtin-baseline-even")]
    #[serde(rename = "builtin-baseline-even")]
    BaselineEven,
    /// Oblivious `Φ_h` baseline at speed `(h-1)/(h+1)`.
    #[value(name = "builtin-baseline-odd")]
    #[serde(rename = "builtin-baseline-odd")]
    BaselineOdd,
}

impl Builtin {
    /// The family whose sequences the gambler is built for.
    pub fn family(self) -> FamilyName {
        match self {
            Builtin::F => FamilyName::F,
            _ => FamilyName::Phi,
        }
    }
}

pub struct Loaded {
    pub gambler: Box<dyn Gambler>,
    pub metadata: BTreeMap<String, String>,
}

pub fn build_builtin(which: Builtin, fam: &FamilyArgs, eps: &Rational) -> Result<Loaded, CliError> {
    let params = PhiTrackerParams::new(fam.h, fam.block_bits, eps.clone());
    let bad = |e: mhgale::gamblers::GamblerError| usage("--h", e);
    let baseline = |parity| -> Result<Loaded, CliError> {
        let spec = build_baseline(&params, parity).map_err(bad)?;
        let table = embed_oblivious(&spec);
        Ok(Loaded {
            metadata: table.metadata().clone(),
            gambler: Box::new(table),
        })
    };
    match which {
        Builtin::Phi => {
            let g = build_phi_tracker(&params).map_err(bad)?;
            Ok(Loaded {
                metadata: g.metadata().clone(),
                gambler: Box::new(g),
            })
        }
        Builtin::F => {
            let table = embed_oblivious(&build_f_parity(fam.h, eps).map_err(bad)?);
            Ok(Loaded {
                metadata: table.metadata().clone(),
                gambler: Box::new(table),
            })
        }
        Builtin::BaselineEven => baseline(BaselineParity::Even),
        Builtin::BaselineOdd => baseline(BaselineParity::Odd),
    }
}

pub fn load_spec_file(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--spec", format!("{}: {e}", path.display())))?;
    let table = parse_spec(&text).map_err(|e| usage("--spec", format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        metadata: table.metadata().clone(),
        gambler: Box::new(table),
    })
}

#[derive(Debug, Subcommand)]
pub enum GamblerCommand {
    /// Write a built-in gambler in the textual spec format.
    Build(BuildArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildFamily {
    Phi,
    F,
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub family: BuildFamily,
    /// Build the oblivious baseline instead of the adaptive tracker (`phi` only).
    #[arg(long, value_parser = ["even", "odd"])]
    pub baseline: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub fam: FamilyArgs,
    #[arg(long, default_value = "1/64")]
    pub eps: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(cmd: GamblerCommand) -> Result<Status, CliError> {
    match cmd {
        GamblerCommand::Build(args) => build(&args),
    }
}

fn build(args: &BuildArgs) -> Result<Status, CliError> {
    let eps = parse_eps(&args.eps)?;
    let which = match (args.family, args.baseline.as_deref()) {
        (BuildFamily::Phi, None) => Builtin::Phi,
        (BuildFamily::Phi, Some("even")) => Builtin::BaselineEven,
        (BuildFamily::Phi, Some(_)) => Builtin::BaselineOdd,
        (BuildFamily::F, None) => Builtin::F,
        (BuildFamily::F, Some(_)) => return Err(usage("--baseline", "baselines exist only for --family phi")),
    };
    let loaded = build_builtin(which, &args.fam, &eps)?;
    let text = write_spec(loaded.gambler.as_ref(), &loaded.metadata, ValidationLimits::default()).map_err(runtime)?;
    emit(args.out.as_deref(), &text)?;
    Ok(Status::Ok)
}
