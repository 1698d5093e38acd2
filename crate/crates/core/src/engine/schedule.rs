use serde::{Deserialize, Serialize};

use crate::engine::EngineError;
use crate::sequence::fparity::FLayout;
use crate::sequence::phi_markers_upto;

/// Which prefix lengths get a checkpoint row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckpointSchedule {
    /// `s_k, t_k ≤ n_max` for Φ runs; powers of `p_{h+1}` for F runs.
    Boundaries,
    /// `⌈r^j⌉ ≤ n_max`, `r > 1`.
    Geometric(f64),
    Explicit(Vec<u64>),
}

/// Family context for [`CheckpointSchedule::Boundaries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryFamily {
    Phi { h: u32 },
    F { h: u32 },
}

impl CheckpointSchedule {
    /// Sorted, deduplicated checkpoints in `1..=n_max`.
    pub fn expand(&self, family: Option<BoundaryFamily>, n_max: u64) -> Result<Vec<u64>, EngineError> {
        let mut points: Vec<u64> = match self {
            CheckpointSchedule::Boundaries => match family {
                Some(BoundaryFamily::Phi { h }) => phi_markers_upto(h as u64, n_max),
                Some(BoundaryFamily::F { h }) => {
                    let p = FLayout::new(h as usize).modulus();
                    std::iter::successors(Some(p), |&x| x.checked_mul(p))
                        .take_while(|&x| x <= n_max)
                        .collect()
                }
                None => {
                    return Err(EngineError::Schedule(
                        "boundary checkpoints need a Φ or F family".into(),
                    ))
                }
            },
            CheckpointSchedule::Geometric(r) => {
                if !(r.is_finite() && *r > 1.0) {
                    return Err(EngineError::Schedule(format!("geometric ratio {r} must exceed 1")));
                }
                let mut out = Vec::new();
                let mut x = 1.0f64;
                while x.ceil() <= n_max as f64 {
                    out.push(x.ceil() as u64);
                    x *= r;
                }
                out
            }
            CheckpointSchedule::Explicit(list) => {
                if let Some(&bad) = list.iter().find(|&&x| x > n_max) {
                    return Err(EngineError::Schedule(format!("checkpoint {bad} beyond n_max {n_max}")));
                }
                list.clone()
            }
        };
        points.retain(|&x| x >= 1);
        points.sort_unstable();
        points.dedup();
        if points.is_empty() {
            return Err(EngineError::Schedule("no checkpoints in range".into()));
        }
        Ok(points)
    }

    pub fn describe(&self) -> String {
        match self {
            CheckpointSchedule::Boundaries => "boundaries".into(),
            CheckpointSchedule::Geometric(r) => format!("geometric {r}"),
            CheckpointSchedule::Explicit(list) => format!(
                "explicit {}",
                list.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            ),
        }
    }
}
