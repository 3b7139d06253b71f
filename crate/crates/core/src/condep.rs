//! Conditional dependence coefficient `T_n(Y, Z | X)`.
//!
//! With `R_i = #{j : Y_j <= Y_i}`, `N(i)` the nearest neighbor of `X_i` and
//! `M(i)` the nearest neighbor of `(X_i, Z_i)`:
//!
//! ```text
//! p >= 1:  T_n = sum (min(R_i, R_M(i)) - min(R_i, R_N(i))) / sum (R_i - min(R_i, R_N(i)))
//! p == 0:  T_n = sum (n min(R_i, R_M(i)) - L_i^2) / sum L_i (n - L_i)
//! ```
//!
//! where for `p == 0`, `M(i)` is the nearest neighbor of `Z_i` and
//! `L_i = #{j : Y_j >= Y_i}`. Columns are used as given; rescale them first
//! if they live on very different scales. Finite-sample values are not
//! clamped to `[0, 1]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neighbors::nearest_neighbors;
use crate::points::PointSet;
use crate::rank::raw_ranks;
use crate::scalar::{Finite, Scalar};

/// Response `y`, conditioning block `x` (`p >= 0` columns) and candidate
/// block `z` (`q >= 1` columns), all with the same `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSample<T> {
    y: Vec<Finite<T>>,
    x: PointSet<T>,
    z: PointSet<T>,
}

impl<T: Scalar> TripleSample<T> {
    pub fn new(y: &[T], x: PointSet<T>, z: PointSet<T>) -> Result<Self> {
        let n = y.len();
        if n < 2 {
            return Err(Error::TooFewObservations {
                required: 2,
                actual: n,
            });
        }
        for block in [&x, &z] {
            if block.len() != n {
                return Err(Error::LengthMismatch {
                    left: block.len(),
                    right: n,
                });
            }
        }
        if z.dim() == 0 {
            return Err(Error::Params("Z must have at least one column".into()));
        }
        Ok(Self {
            y: Finite::wrap_all(y)?,
            x,
            z,
        })
    }

    /// No conditioning variables.
    pub fn unconditional(y: &[T], z: PointSet<T>) -> Result<Self> {
        Self::new(y, PointSet::empty(y.len()), z)
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.x.dim()
    }

    pub fn q(&self) -> usize {
        self.z.dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TResult {
    pub value: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

/// `T_n(Y, Z | X)`, or `T_n(Y, Z)` when `X` has no columns.
///
/// For `p >= 1` the neighbor map of `X` is drawn from `rng` before that of
/// `(X, Z)`.
pub fn t_n<T: Scalar, R: Rng + ?Sized>(sample: &TripleSample<T>, rng: &mut R) -> Result<TResult> {
    let n = sample.n();
    let (r, l) = raw_ranks(&sample.y);
    let ni = n as i128;

    let (num, den) = if sample.p() == 0 {
        let m = nearest_neighbors(&sample.z, rng)?.nn;
        let mut num = 0i128;
        let mut den = 0i128;
        for i in 0..n {
            let (ri, li) = (r[i] as i128, l[i] as i128);
            num += ni * ri.min(r[m[i]] as i128) - li * li;
            den += li * (ni - li);
        }
        (num, den)
    } else {
        let nx = nearest_neighbors(&sample.x, rng)?.nn;
        let joint = sample.x.hconcat(&sample.z)?;
        let m = nearest_neighbors(&joint, rng)?.nn;
        let mut num = 0i128;
        let mut den = 0i128;
        for i in 0..n {
            let ri = r[i] as i128;
            let via_n = ri.min(r[nx[i]] as i128);
            num += ri.min(r[m[i]] as i128) - via_n;
            den += ri - via_n;
        }
        (num, den)
    };

    if den == 0 {
        return Err(Error::UndefinedT);
    }
    Ok(TResult {
        value: num as f64 / den as f64,
        numerator: num as f64,
        denominator: den as f64,
        n,
        p: sample.p(),
        q: sample.q(),
    })
}

/// `T_n(Y, Z)` with no conditioning variables.
pub fn t_n_unconditional<T: Scalar, R: Rng + ?Sized>(
    y: &[T],
    z: &PointSet<T>,
    rng: &mut R,
) -> Result<TResult> {
    t_n(&TripleSample::unconditional(y, z.clone())?, rng)
}
