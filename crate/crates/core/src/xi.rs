//! The xi rank correlation.
//!
//! For a sample rearranged so that `X_(1) <= ... <= X_(n)`,
//!
//! ```text
//! xi_n = 1 - n * sum_{i<n} |r_{i+1} - r_i| / (2 * sum_i l_i (n - l_i))
//! ```
//!
//! where `r_i` and `l_i` count responses `<=` and `>=` the `i`-th one. With
//! no ties among the responses the denominator reduces to `n (n^2 - 1) / 3`.
//! The value is not clamped: under independence it fluctuates around 0 and
//! may be negative.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rank::{rank_profile, PairedSample, RankProfile};
use crate::scalar::Scalar;

/// Which denominator formula the data admits. Both give the same number when
/// there are no response ties; the value is always computed from the
/// tie-aware sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenominatorKind {
    TieAware,
    ContinuousClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiResult {
    pub value: f64,
    pub n: usize,
    /// `n * sum |r_{i+1} - r_i|`.
    pub numerator: f64,
    /// `2 * sum l_i (n - l_i)`; always positive.
    pub denominator: f64,
    pub denominator_kind: DenominatorKind,
}

/// Integer parts of the xi ratio: `(n * sum |r_{i+1} - r_i|, 2 * sum l_i (n - l_i))`.
pub(crate) fn xi_counts(profile: &RankProfile) -> (u128, u128) {
    let n = profile.len() as u128;
    let jumps: u128 = profile
        .r
        .windows(2)
        .map(|w| w[0].abs_diff(w[1]) as u128)
        .sum();
    let spread: u128 = profile.l.iter().map(|&l| l as u128 * (n - l as u128)).sum();
    (n * jumps, 2 * spread)
}

/// xi from an already computed rank profile.
pub fn xi_from_profile(profile: &RankProfile) -> Result<XiResult> {
    let (num, den) = xi_counts(profile);
    if den == 0 {
        return Err(Error::DegenerateResponse);
    }
    let numerator = num as f64;
    let denominator = den as f64;
    let denominator_kind = if profile.has_y_ties() {
        DenominatorKind::TieAware
    } else {
        DenominatorKind::ContinuousClosedForm
    };
    Ok(XiResult {
        value: 1.0 - numerator / denominator,
        n: profile.len(),
        numerator,
        denominator,
        denominator_kind,
    })
}

/// `xi_n(X, Y)` for any sample with totally ordered keys and values.
///
/// Ties among the x keys are broken uniformly at random using `rng`, so on
/// tied data the result is itself random; fix the seed to reproduce it.
pub fn xi_n<K: Ord, V: Ord, R: Rng + ?Sized>(
    sample: &PairedSample<K, V>,
    rng: &mut R,
) -> Result<XiResult> {
    xi_from_profile(&rank_profile(sample, rng))
}

/// `xi_n` for two scalar slices.
pub fn xi_scalars<T: Scalar, R: Rng + ?Sized>(x: &[T], y: &[T], rng: &mut R) -> Result<XiResult> {
    xi_n(&PairedSample::from_scalars(x, y)?, rng)
}

/// `max(xi_n(X, Y), xi_n(Y, X))`. The second sample must be the transpose of
/// the first; the `X, Y` direction draws from `rng` first.
pub fn xi_symmetric<K: Ord, V: Ord, R: Rng + ?Sized>(
    sample_xy: &PairedSample<K, V>,
    sample_yx: &PairedSample<V, K>,
    rng: &mut R,
) -> Result<f64> {
    if sample_xy.len() != sample_yx.len() {
        return Err(Error::LengthMismatch {
            left: sample_xy.len(),
            right: sample_yx.len(),
        });
    }
    let forward = xi_n(sample_xy, rng)?.value;
    let backward = xi_n(sample_yx, rng)?.value;
    Ok(forward.max(backward))
}
