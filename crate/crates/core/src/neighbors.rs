//! Exact Euclidean nearest neighbors with uniform random tie-breaking.
//!
//! Each point's neighbor is chosen among all other points at exactly the
//! minimal squared distance (no epsilon). When several candidates tie, query
//! `i` picks one uniformly with the generator `child_rng(root, i)`, choosing
//! from the candidates in increasing index order; `root` is one `u64` drawn
//! from the caller's generator. Duplicated points are at distance zero and are
//! legitimate neighbors of each other.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::scalar::Scalar;
use crate::seed::child_rng;

/// Dimensions above this use the exhaustive scan.
pub const MAX_TREE_DIM: usize = 15;
/// Point sets smaller than this use the exhaustive scan.
pub const MIN_TREE_POINTS: usize = 64;
const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborMap {
    /// `nn[i]` is the index of the chosen nearest neighbor of point `i`.
    pub nn: Vec<usize>,
    /// Number of co-minimal candidates at each point.
    pub tie_counts: Vec<usize>,
}

impl NeighborMap {
    pub fn len(&self) -> usize {
        self.nn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nn.is_empty()
    }
}

#[inline]
pub(crate) fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&u, &v)| acc + (u - v) * (u - v))
}

/// Running set of co-minimal candidates for one query.
struct Best<T> {
    dist: T,
    candidates: Vec<usize>,
}

impl<T: Scalar> Best<T> {
    fn new() -> Self {
        Self {
            dist: T::infinity(),
            candidates: Vec::new(),
        }
    }

    #[inline]
    fn offer(&mut self, j: usize, d: T) {
        if d < self.dist {
            self.dist = d;
            self.candidates.clear();
            self.candidates.push(j);
        } else if d == self.dist {
            self.candidates.push(j);
        }
    }
}

enum Node<T> {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: T,
        left: usize,
        right: usize,
    },
}

/// Median-split k-d tree over the rows of a [`PointSet`].
struct KdTree<'a, T> {
    points: &'a PointSet<T>,
    order: Vec<usize>,
    nodes: Vec<Node<T>>,
}

impl<'a, T: Scalar> KdTree<'a, T> {
    fn build(points: &'a PointSet<T>) -> Self {
        let mut tree = Self {
            points,
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        tree.build_range(0, points.len());
        tree
    }

    fn build_range(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { start, end });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let dim = self.points.dim();
        let (mut axis, mut spread) = (0, T::zero());
        for k in 0..dim {
            let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
            for &i in &self.order[start..end] {
                let c = self.points.row(i)[k];
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if hi - lo > spread {
                spread = hi - lo;
                axis = k;
            }
        }
        if spread <= T::zero() {
            return id;
        }
        let mid = start + (end - start) / 2;
        let points = self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points.row(a)[axis]
                .partial_cmp(&points.row(b)[axis])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let value = points.row(self.order[mid])[axis];
        let left = self.build_range(start, mid);
        let right = self.build_range(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    fn search(&self, node: usize, query: usize, best: &mut Best<T>) {
        let q = self.points.row(query);
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &j in &self.order[start..end] {
                    if j != query {
                        best.offer(j, sq_dist(q, self.points.row(j)));
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = q[axis] - value;
                let (near, far) = if diff <= T::zero() {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(near, query, best);
                // Not strict: points exactly at the best distance are ties.
                if diff * diff <= best.dist {
                    self.search(far, query, best);
                }
            }
        }
    }
}

fn brute_candidates<T: Scalar>(points: &PointSet<T>, query: usize) -> Best<T> {
    let q = points.row(query);
    let mut best = Best::new();
    for j in 0..points.len() {
        if j != query {
            best.offer(j, sq_dist(q, points.row(j)));
        }
    }
    best
}

/// Exact nearest neighbor of every point, ties broken uniformly at random.
pub fn nearest_neighbors<T: Scalar, R: Rng + ?Sized>(
    points: &PointSet<T>,
    rng: &mut R,
) -> Result<NeighborMap> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            actual: n,
        });
    }
    if points.dim() == 0 {
        return Err(Error::Params(
            "nearest neighbors need at least one dimension".into(),
        ));
    }
    let root = rng.next_u64();
    let tree =
        (points.dim() <= MAX_TREE_DIM && n >= MIN_TREE_POINTS).then(|| KdTree::build(points));

    let picks: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = match &tree {
                Some(t) => {
                    let mut b = Best::new();
                    t.search(0, i, &mut b);
                    b
                }
                None => brute_candidates(points, i),
            };
            let ties = best.candidates.len();
            let chosen = if ties == 1 {
                best.candidates[0]
            } else {
                best.candidates.sort_unstable();
                best.candidates[child_rng(root, i as u64).random_range(0..ties)]
            };
            (chosen, ties)
        })
        .collect();

    let (nn, tie_counts) = picks.into_iter().unzip();
    Ok(NeighborMap { nn, tie_counts })
}
