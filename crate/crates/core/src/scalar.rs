//! Scalar abstraction shared by every statistic in the crate.
//!
//! Sample values and point coordinates are generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. The statistics themselves are built from
//! integer rank counts, so results are always reported as `f64`.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floating point type usable as a sample value or coordinate.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless widening to `f64`.
    fn to_f64_exact(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn to_f64_exact(self) -> f64 {
        f64::from(self)
    }
}

impl Scalar for f64 {
    #[inline]
    fn to_f64_exact(self) -> f64 {
        self
    }
}

/// A finite scalar with a total order.
///
/// Construction rejects NaN and infinities, so `Ord` is well defined.
/// `-0.0` and `0.0` compare equal.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Finite<T>(T);

impl<T: Scalar> Finite<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::NonFiniteInput)
        }
    }

    #[inline]
    pub fn get(self) -> T {
        self.0
    }

    /// Wraps a whole slice, failing on the first non-finite entry.
    pub fn wrap_all(values: &[T]) -> Result<Vec<Self>> {
        values.iter().map(|&v| Self::new(v)).collect()
    }
}

impl<T: Scalar> Eq for Finite<T> {}

impl<T: Scalar> Ord for Finite<T> {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        // Both sides are finite.
        self.0.partial_cmp(&other.0).unwrap_or(Ordering::Equal)
    }
}

impl<T: Scalar> PartialOrd for Finite<T> {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Debug> Debug for Finite<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: Display> Display for Finite<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
