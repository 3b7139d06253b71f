//! Conditional xi coefficient for multivariate data,
//! `(xi_n(W, Y) - xi_n(X, Y)) / (1 - xi_n(X, Y))` with `W = (X, Z)`.
//!
//! `X` and `W` are always encoded (`W` as the concatenation `X` then `Z`),
//! `Y` is encoded only when it has more than one column. Both coefficients
//! draw their tie-breaking from children of one root seed: `xi_n(W, Y)` uses
//! stream 0 and `xi_n(X, Y)` stream 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keys::{order_keys, KeyPrecision};
use crate::points::PointSet;
use crate::rank::PairedSample;
use crate::scalar::Scalar;
use crate::seed::child_rng;
use crate::xi::xi_n;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CondXiResult {
    pub value: f64,
    pub xi_wy: f64,
    pub xi_xy: f64,
    pub n: usize,
}

pub fn cond_xi<T: Scalar, R: Rng + ?Sized>(
    x: &PointSet<T>,
    y: &PointSet<T>,
    z: &PointSet<T>,
    precision: KeyPrecision,
    rng: &mut R,
) -> Result<CondXiResult> {
    let n = y.len();
    for block in [x, z] {
        if block.len() != n {
            return Err(Error::LengthMismatch {
                left: block.len(),
                right: n,
            });
        }
    }
    if x.dim() == 0 || y.dim() == 0 || z.dim() == 0 {
        return Err(Error::Params(
            "X, Y and Z each need at least one column".into(),
        ));
    }
    let w = x.hconcat(z)?;
    let y_keys = order_keys(y, precision, false)?;
    let x_keys = order_keys(x, precision, true)?;
    let w_keys = order_keys(&w, precision, true)?;

    let root = rng.next_u64();
    let xi_wy = xi_n(
        &PairedSample::new(w_keys, y_keys.clone())?,
        &mut child_rng(root, 0),
    )?
    .value;
    let xi_xy = xi_n(&PairedSample::new(x_keys, y_keys)?, &mut child_rng(root, 1))?.value;
    let denom = 1.0 - xi_xy;
    if denom == 0.0 {
        return Err(Error::UndefinedConditional);
    }
    Ok(CondXiResult {
        value: (xi_wy - xi_xy) / denom,
        xi_wy,
        xi_xy,
        n,
    })
}
