//! Rank counts consumed by every statistic.
//!
//! Ranks are the plain counts `#{j : Y_j <= Y_i}` and `#{j : Y_j >= Y_i}`,
//! never midranks. Ties among the x keys are broken by a uniformly random
//! shuffle drawn from the caller's generator.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{Finite, Scalar};

/// Aligned predictor keys and response values.
///
/// Keys and values only need a total order, so plain scalars (wrapped in
/// [`Finite`]) and encoded multivariate keys are handled alike.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample<K, V> {
    x: Vec<K>,
    y: Vec<V>,
}

impl<K: Ord, V: Ord> PairedSample<K, V> {
    pub fn new(x: Vec<K>, y: Vec<V>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::TooFewObservations {
                required: 2,
                actual: x.len(),
            });
        }
        Ok(Self { x, y })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.x.len()
    }

    /// Always false; a sample holds at least two pairs.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_keys(&self) -> &[K] {
        &self.x
    }

    pub fn y_values(&self) -> &[V] {
        &self.y
    }

    pub fn into_parts(self) -> (Vec<K>, Vec<V>) {
        (self.x, self.y)
    }
}

impl<K: Ord + Clone, V: Ord + Clone> PairedSample<K, V> {
    /// The sample with the roles of x and y exchanged.
    pub fn transposed(&self) -> PairedSample<V, K> {
        PairedSample {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }
}

impl<T: Scalar> PairedSample<Finite<T>, Finite<T>> {
    /// Pairs two scalar slices, rejecting non-finite entries.
    pub fn from_scalars(x: &[T], y: &[T]) -> Result<Self> {
        Self::new(Finite::wrap_all(x)?, Finite::wrap_all(y)?)
    }
}

/// All rank quantities for one sample.
///
/// Indices are 0-based. `perm[i]` is the raw index of the `i`-th smallest x.
/// `r` and `l` are in x-sorted order, `r_raw` and `l_raw` in raw order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub perm: Vec<usize>,
    /// `r[i] = #{j : Y_(j) <= Y_(i)}`.
    pub r: Vec<usize>,
    /// `l[i] = #{j : Y_(j) >= Y_(i)}`.
    pub l: Vec<usize>,
    /// `r_raw[i] = #{j : Y_j <= Y_i}`.
    pub r_raw: Vec<usize>,
    /// `l_raw[i] = #{j : Y_j >= Y_i}`.
    pub l_raw: Vec<usize>,
}

impl RankProfile {
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// True when some response value occurs more than once.
    pub fn has_y_ties(&self) -> bool {
        let n = self.len();
        self.r_raw
            .iter()
            .zip(&self.l_raw)
            .any(|(r, l)| r + l > n + 1)
    }
}

/// Permutation sorting `keys` non-decreasingly, with each run of equal keys
/// put in uniformly random order.
pub fn sort_keys<K: Ord, R: Rng + ?Sized>(keys: &[K], rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..keys.len()).collect();
    perm.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut start = 0;
    while start < perm.len() {
        let mut end = start + 1;
        while end < perm.len() && keys[perm[end]] == keys[perm[start]] {
            end += 1;
        }
        if end - start > 1 {
            perm[start..end].shuffle(rng);
        }
        start = end;
    }
    perm
}

/// Increasing rearrangement of the sample by x, ties broken at random.
pub fn sort_by_x<K: Ord, V: Ord, R: Rng + ?Sized>(
    sample: &PairedSample<K, V>,
    rng: &mut R,
) -> Vec<usize> {
    sort_keys(&sample.x, rng)
}

/// Raw-order counts `(#{j : v_j <= v_i}, #{j : v_j >= v_i})` in O(n log n).
pub fn raw_ranks<V: Ord>(values: &[V]) -> (Vec<usize>, Vec<usize>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| values[a].cmp(&values[b]));
    let mut le = vec![0; n];
    let mut ge = vec![0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        for &idx in &order[start..end] {
            le[idx] = end;
            ge[idx] = n - start;
        }
        start = end;
    }
    (le, ge)
}

/// Fills in every rank count for `sample` under the x-ordering `perm`.
pub fn compute_ranks<K: Ord, V: Ord>(sample: &PairedSample<K, V>, perm: &[usize]) -> RankProfile {
    debug_assert_eq!(perm.len(), sample.len());
    let (r_raw, l_raw) = raw_ranks(&sample.y);
    let r = perm.iter().map(|&i| r_raw[i]).collect();
    let l = perm.iter().map(|&i| l_raw[i]).collect();
    RankProfile {
        perm: perm.to_vec(),
        r,
        l,
        r_raw,
        l_raw,
    }
}

/// [`sort_by_x`] followed by [`compute_ranks`].
pub fn rank_profile<K: Ord, V: Ord, R: Rng + ?Sized>(
    sample: &PairedSample<K, V>,
    rng: &mut R,
) -> RankProfile {
    let perm = sort_by_x(sample, rng);
    compute_ranks(sample, &perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    fn brute_profile(x: &[i64], y: &[i64], perm: &[usize]) -> RankProfile {
        let n = y.len();
        let count = |pred: &dyn Fn(i64) -> bool| y.iter().filter(|&&v| pred(v)).count();
        let r_raw: Vec<usize> = (0..n).map(|i| count(&|v| v <= y[i])).collect();
        let l_raw: Vec<usize> = (0..n).map(|i| count(&|v| v >= y[i])).collect();
        let ys: Vec<i64> = perm.iter().map(|&i| y[i]).collect();
        let r = (0..n)
            .map(|i| ys.iter().filter(|&&v| v <= ys[i]).count())
            .collect();
        let l = (0..n)
            .map(|i| ys.iter().filter(|&&v| v >= ys[i]).count())
            .collect();
        assert!(perm.windows(2).all(|w| x[w[0]] <= x[w[1]]));
        RankProfile {
            perm: perm.to_vec(),
            r,
            l,
            r_raw,
            l_raw,
        }
    }

    #[test]
    fn sorts_distinct_keys() {
        let s = PairedSample::from_scalars(&[3.0, 1.0, 2.0], &[0.0, 0.0, 1.0]).unwrap();
        let perm = sort_by_x(&s, &mut rng_from_seed(1));
        assert_eq!(perm, vec![1, 2, 0]);
    }

    #[test]
    fn hand_counted_profile() {
        let s = PairedSample::from_scalars(&[1.0, 2.0, 3.0], &[10.0, 30.0, 20.0]).unwrap();
        let p = compute_ranks(&s, &[0, 1, 2]);
        assert_eq!(p.r_raw, vec![1, 3, 2]);
        assert_eq!(p.l_raw, vec![3, 1, 2]);
        assert_eq!(p.r, vec![1, 3, 2]);
        assert_eq!(p.l, vec![3, 1, 2]);
        assert!(!p.has_y_ties());
    }

    #[test]
    fn tied_responses_count_both_ways() {
        let s = PairedSample::from_scalars(&[1.0, 2.0], &[7.0, 7.0]).unwrap();
        let p = compute_ranks(&s, &[0, 1]);
        assert_eq!(p.r_raw, vec![2, 2]);
        assert_eq!(p.l_raw, vec![2, 2]);
        assert!(p.has_y_ties());
    }

    #[test]
    fn rejects_short_or_ragged() {
        assert!(matches!(
            PairedSample::from_scalars(&[1.0], &[1.0]),
            Err(Error::TooFewObservations { .. })
        ));
        assert!(matches!(
            PairedSample::from_scalars(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(PairedSample::from_scalars(&[1.0, f64::NAN], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn two_way_tie_is_fair() {
        let keys = [5, 5];
        let trials = 10_000;
        let first = (0..trials)
            .filter(|&s| sort_keys(&keys, &mut rng_from_seed(s))[0] == 0)
            .count();
        let freq = first as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.02, "freq {freq}");
    }

    #[test]
    fn four_way_tie_uniform_over_all_orders() {
        let keys = [1, 1, 1, 1];
        let trials = 100_000u64;
        let mut counts = std::collections::HashMap::new();
        for s in 0..trials {
            *counts
                .entry(sort_keys(&keys, &mut rng_from_seed(s)))
                .or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 24);
        for (perm, c) in counts {
            let f = c as f64 / trials as f64;
            assert!((f - 1.0 / 24.0).abs() < 0.01, "{perm:?}: {f}");
        }
    }

    #[test]
    fn sort_is_deterministic_given_seed() {
        let keys: Vec<i32> = (0..50).map(|i| i % 7).collect();
        assert_eq!(
            sort_keys(&keys, &mut rng_from_seed(9)),
            sort_keys(&keys, &mut rng_from_seed(9))
        );
    }

    #[test]
    fn matches_quadratic_counts_at_n_100() {
        let mut rng = rng_from_seed(100);
        let x: Vec<i64> = (0..100).map(|_| rng.random_range(0..1000)).collect();
        let y: Vec<i64> = (0..100).map(|_| rng.random_range(0..1000)).collect();
        let s = PairedSample::new(x.clone(), y.clone()).unwrap();
        let p = rank_profile(&s, &mut rng);
        assert_eq!(p, brute_profile(&x, &y, &p.perm));
    }

    proptest! {
        #[test]
        fn oracle_equivalence(
            pairs in prop::collection::vec((0i64..20, 0i64..20), 2..300),
            seed in any::<u64>(),
        ) {
            let (x, y): (Vec<i64>, Vec<i64>) = pairs.into_iter().unzip();
            let s = PairedSample::new(x.clone(), y.clone()).unwrap();
            let p = rank_profile(&s, &mut rng_from_seed(seed));
            let n = y.len();
            for i in 0..n {
                prop_assert!(p.r[i] >= 1 && p.r[i] <= n && p.l[i] >= 1 && p.l[i] <= n);
                prop_assert!(p.r[i] + p.l[i] > n);
                prop_assert_eq!(p.r[i], p.r_raw[p.perm[i]]);
            }
            prop_assert_eq!(p.clone(), brute_profile(&x, &y, &p.perm));
        }

        #[test]
        fn untied_left_ranks_are_a_permutation(n in 2usize..200, seed in any::<u64>()) {
            let mut rng = rng_from_seed(seed);
            let mut y: Vec<i64> = (0..n as i64).collect();
            y.shuffle(&mut rng);
            let x: Vec<i64> = (0..n).map(|_| rng.random_range(0..50)).collect();
            let s = PairedSample::new(x, y).unwrap();
            let p = rank_profile(&s, &mut rng);
            let mut l = p.l.clone();
            l.sort_unstable();
            prop_assert_eq!(l, (1..=n).collect::<Vec<_>>());
            let total: usize = p.l.iter().map(|&li| li * (n - li)).sum();
            prop_assert_eq!(total, n * (n * n - 1) / 6);
            prop_assert!(p.r.iter().zip(&p.l).all(|(r, l)| r + l == n + 1));
        }

        #[test]
        fn invariant_to_input_order(
            pairs in prop::collection::vec((0i64..30, 0i64..30), 2..100),
            seed in any::<u64>(),
        ) {
            let (x, y): (Vec<i64>, Vec<i64>) = pairs.into_iter().unzip();
            let s = PairedSample::new(x.clone(), y.clone()).unwrap();
            let p = rank_profile(&s, &mut rng_from_seed(seed));
            // Reverse the raw order and carry perm along.
            let n = x.len();
            let rev = |v: &[i64]| v.iter().rev().copied().collect::<Vec<_>>();
            let s2 = PairedSample::new(rev(&x), rev(&y)).unwrap();
            let perm2: Vec<usize> = p.perm.iter().map(|&i| n - 1 - i).collect();
            let p2 = compute_ranks(&s2, &perm2);
            prop_assert_eq!(&p.r, &p2.r);
            prop_assert_eq!(&p.l, &p2.l);
        }
    }
}
