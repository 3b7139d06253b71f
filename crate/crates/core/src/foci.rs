//! Feature Ordering by Conditional Independence.
//!
//! Greedy forward selection driven by `T_n`: the first feature maximizes
//! `T_n(Y, X_j)`, each later one maximizes `T_n(Y, X_j | selected)`, and the
//! procedure stops at the first step whose best value is `<= 0`. That
//! feature is not added. If the very first best value is `<= 0` nothing is
//! selected; if no step stops, every feature is selected.
//!
//! Ties between candidate features go to the smallest index. Candidate `j`
//! at step `k` uses the generator `child_rng(split_seed(root, k), j)`, where
//! `root` is one `u64` drawn from the caller's generator, so the whole path
//! is reproducible and candidates can be evaluated in parallel.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::condep::{t_n, TripleSample};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::scalar::Scalar;
use crate::seed::{child_rng, split_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The best remaining candidate had `T_n <= 0`.
    NonpositiveT,
    /// Every feature was selected.
    ExhaustedFeatures,
    /// The best single feature already had `T_n <= 0`.
    EmptyFirstStep,
    /// `T_n` had a zero denominator at the stopping step.
    UndefinedT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FociReport {
    /// Selected feature indices (0-based columns of `X`) in selection order.
    pub selected: Vec<usize>,
    /// `T_n` of each selected feature at the step it was chosen.
    pub step_values: Vec<f64>,
    pub stop_reason: StopReason,
    /// Best value at the stopping step, when one was computed.
    pub stop_value: Option<f64>,
}

/// Runs FOCI for response `y` over the columns of `x`.
pub fn foci_select<T: Scalar, R: Rng + ?Sized>(
    y: &[T],
    x: &PointSet<T>,
    rng: &mut R,
) -> Result<FociReport> {
    let n = y.len();
    if x.len() != n {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: n,
        });
    }
    if n < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            actual: n,
        });
    }
    let p = x.dim();
    if p == 0 {
        return Err(Error::Params("FOCI needs at least one feature".into()));
    }
    let root = rng.next_u64();
    let columns: Vec<PointSet<T>> = (0..p).map(|j| x.select_columns(&[j])).collect();

    let mut selected: Vec<usize> = Vec::new();
    let mut step_values = Vec::new();
    for step in 0..p {
        let step_root = split_seed(root, step as u64);
        let given = x.select_columns(&selected);
        let remaining: Vec<usize> = (0..p).filter(|j| !selected.contains(j)).collect();
        let scored: Vec<Result<f64>> = remaining
            .par_iter()
            .map(|&j| {
                let sample = TripleSample::new(y, given.clone(), columns[j].clone())?;
                t_n(&sample, &mut child_rng(step_root, j as u64)).map(|t| t.value)
            })
            .collect();

        let mut best: Option<(usize, f64)> = None;
        for (&j, score) in remaining.iter().zip(scored) {
            let value = match score {
                Ok(v) => v,
                Err(Error::UndefinedT) => {
                    return Ok(FociReport {
                        selected,
                        step_values,
                        stop_reason: StopReason::UndefinedT,
                        stop_value: None,
                    });
                }
                Err(e) => return Err(e),
            };
            if best.is_none_or(|(_, b)| value > b) {
                best = Some((j, value));
            }
        }
        let (j, value) = best.expect("at least one remaining feature");
        if value <= 0.0 {
            let stop_reason = if selected.is_empty() {
                StopReason::EmptyFirstStep
            } else {
                StopReason::NonpositiveT
            };
            return Ok(FociReport {
                selected,
                step_values,
                stop_reason,
                stop_value: Some(value),
            });
        }
        selected.push(j);
        step_values.push(value);
    }

    Ok(FociReport {
        selected,
        step_values,
        stop_reason: StopReason::ExhaustedFeatures,
        stop_value: None,
    })
}
