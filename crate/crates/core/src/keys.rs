//! One ordered-key type for scalar and multivariate data.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::encode::{
    encode_sample, EncodedKey, EncodingParams, DEFAULT_FRAC_BITS, DEFAULT_INT_BITS,
};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::rank::PairedSample;
use crate::scalar::{Finite, Scalar};

/// Digit budget applied to every coordinate when encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyPrecision {
    pub int_bits: u32,
    pub frac_bits: u32,
}

impl Default for KeyPrecision {
    fn default() -> Self {
        Self {
            int_bits: DEFAULT_INT_BITS,
            frac_bits: DEFAULT_FRAC_BITS,
        }
    }
}

impl KeyPrecision {
    pub fn params(&self, dim: usize) -> Result<EncodingParams> {
        EncodingParams::new(dim, self.int_bits, self.frac_bits)
    }
}

/// A sample key: either a plain scalar or an encoded vector.
///
/// A sample should use one variant throughout; across variants scalars sort
/// first.
#[derive(Debug, Clone)]
pub enum OrderKey<T> {
    Scalar(Finite<T>),
    Encoded(EncodedKey),
}

impl<T: Scalar> Ord for OrderKey<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Scalar(a), Self::Scalar(b)) => a.cmp(b),
            (Self::Encoded(a), Self::Encoded(b)) => a.cmp(b),
            (Self::Scalar(_), Self::Encoded(_)) => Ordering::Less,
            (Self::Encoded(_), Self::Scalar(_)) => Ordering::Greater,
        }
    }
}

impl<T: Scalar> PartialEq for OrderKey<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for OrderKey<T> {}

impl<T: Scalar> PartialOrd for OrderKey<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Keys for every row of `points`.
///
/// One-column data is used as raw scalars unless `force_encode` is set;
/// anything wider is always encoded with `precision`.
pub fn order_keys<T: Scalar>(
    points: &PointSet<T>,
    precision: KeyPrecision,
    force_encode: bool,
) -> Result<Vec<OrderKey<T>>> {
    match points.dim() {
        0 => Err(Error::Params("cannot build keys from zero columns".into())),
        1 if !force_encode => Ok(points
            .rows()
            .map(|r| Finite::new(r[0]).map(OrderKey::Scalar))
            .collect::<Result<_>>()?),
        d => Ok(encode_sample(points, &precision.params(d)?)?
            .into_iter()
            .map(OrderKey::Encoded)
            .collect()),
    }
}

/// Paired keys for `xi_n(X, Y)` on possibly multivariate blocks. Blocks with
/// more than one column are encoded.
pub fn paired_keys<T: Scalar>(
    x: &PointSet<T>,
    y: &PointSet<T>,
    precision: KeyPrecision,
) -> Result<PairedSample<OrderKey<T>, OrderKey<T>>> {
    PairedSample::new(
        order_keys(x, precision, false)?,
        order_keys(y, precision, false)?,
    )
}
