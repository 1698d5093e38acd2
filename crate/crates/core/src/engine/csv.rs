//! CSV rendering of run traces. Floats use nine fixed decimals; `-inf` marks zero capital.

use std::fmt::Write as _;

use crate::engine::RunTrace;

pub fn format_float(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.9}")
    }
}

pub fn header(trace: &RunTrace) -> Vec<String> {
    let mut cols = vec!["n".to_string(), "log2_capital".to_string()];
    cols.extend(trace.s_values.iter().map(|s| format!("log2_s_{s}")));
    cols.extend((1..trace.heads).map(|i| format!("pi_{i}")));
    cols.extend(["full_wins", "parity_bets", "parity_losses"].map(String::from));
    cols
}

pub fn trace_to_csv(trace: &RunTrace) -> String {
    let mut out = header(trace).join(",");
    out.push('\n');
    for cp in &trace.checkpoints {
        write!(out, "{},{}", cp.n, format_float(cp.log2_capital)).unwrap();
        for v in &cp.log2_s {
            write!(out, ",{}", format_float(*v)).unwrap();
        }
        for p in &cp.positions {
            write!(out, ",{p}").unwrap();
        }
        writeln!(out, ",{},{},{}", cp.full_wins, cp.parity_bets, cp.parity_losses).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Checkpoint;
    use crate::model::StateId;

    #[test]
    fn renders_rows() {
        let trace = RunTrace {
            heads: 3,
            alphabet_size: 3,
            n_max: 10,
            s_values: vec![0.57],
            hedge: None,
            checkpoints: vec![Checkpoint {
                n: 10,
                log2_capital: f64::NEG_INFINITY,
                log2_s: vec![1.5],
                positions: vec![3, 4],
                state: StateId(0),
                full_wins: 1,
                parity_bets: 2,
                parity_losses: 1,
                marker_misses: 0,
                exact_capital: None,
            }],
        };
        assert_eq!(
            trace_to_csv(&trace),
            "n,log2_capital,log2_s_0.57,pi_1,pi_2,full_wins,parity_bets,parity_losses\n\
             10,-inf,1.500000000,3,4,1,2,1\n"
        );
    }
}
