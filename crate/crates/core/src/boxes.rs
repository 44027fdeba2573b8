//! Enumeration of integer assignment boxes `[-B, B]^d`.
//!
//! Box points are ranked so that rank order is lexicographic order of the
//! value vectors: coordinate 0 is the most significant digit and digit `t`
//! stands for the value `t - B`. The rank space is cut into fixed-size
//! contiguous shards whose layout does not depend on the worker count.

use std::ops::Range;

use crate::error::{Error, Result};

/// Default cap on the number of box points a run may touch.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const SHARD_LEN: u64 = 1 << 13;

/// Knobs shared by the exhaustive runs.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub budget: u64,
    /// Run even when the box exceeds `budget`.
    pub allow_over_budget: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            allow_over_budget: false,
            jobs: None,
        }
    }
}

impl RunOptions {
    pub fn with_jobs(jobs: usize) -> Self {
        Self {
            jobs: Some(jobs),
            ..Self::default()
        }
    }

    /// Runs `f` on a pool of the configured size.
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.jobs {
            Some(jobs) => rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .expect("failed to build worker pool")
                .install(f),
            None => f(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignmentBox {
    dim: usize,
    bound: i64,
    size: u64,
}

impl AssignmentBox {
    /// The box `[-bound, bound]^dim`, refusing it if it exceeds the budget.
    pub fn new(dim: usize, bound: i64, opts: &RunOptions) -> Result<Self> {
        assert!(bound >= 0, "box bound must be non-negative");
        let side = 2 * bound as u128 + 1;
        let size = (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(side));
        let required = match size {
            Some(s) => s.to_string(),
            None => format!("({side})^{dim}"),
        };
        let size =
            size.and_then(|s| u64::try_from(s).ok())
                .ok_or_else(|| Error::BudgetExceeded {
                    required: required.clone(),
                    budget: opts.budget,
                })?;
        if size > opts.budget && !opts.allow_over_budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: opts.budget,
            });
        }
        Ok(Self { dim, bound, size })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Number of points, `(2B + 1)^dim`.
    pub fn size(&self) -> u64 {
        self.size
    }

    fn side(&self) -> u64 {
        2 * self.bound as u64 + 1
    }

    pub fn point(&self, mut rank: u64) -> Vec<i64> {
        let side = self.side();
        let mut xs = vec![0i64; self.dim];
        for slot in xs.iter_mut().rev() {
            *slot = (rank % side) as i64 - self.bound;
            rank /= side;
        }
        xs
    }

    /// Inverse of [`AssignmentBox::point`]; `None` if `xs` is outside the box.
    pub fn rank(&self, xs: &[i64]) -> Option<u64> {
        if xs.len() != self.dim {
            return None;
        }
        let side = self.side();
        xs.iter().try_fold(0u64, |acc, &v| {
            (-self.bound..=self.bound)
                .contains(&v)
                .then(|| acc * side + (v + self.bound) as u64)
        })
    }

    pub fn shards(&self) -> Vec<Range<u64>> {
        (0..self.size.div_ceil(SHARD_LEN))
            .map(|i| i * SHARD_LEN..((i + 1) * SHARD_LEN).min(self.size))
            .collect()
    }

    /// Calls `f(rank, point)` for every rank in `range`, in order.
    pub fn walk(&self, range: Range<u64>, mut f: impl FnMut(u64, &[i64])) {
        self.walk_until(range, |r, xs| {
            f(r, xs);
            None::<()>
        });
    }

    /// Like [`AssignmentBox::walk`] but stops at the first `Some`.
    pub fn walk_until<T>(
        &self,
        range: Range<u64>,
        mut f: impl FnMut(u64, &[i64]) -> Option<T>,
    ) -> Option<T> {
        if range.is_empty() {
            return None;
        }
        let mut xs = self.point(range.start);
        for rank in range {
            if let Some(t) = f(rank, &xs) {
                return Some(t);
            }
            // odometer increment, last coordinate fastest
            for v in xs.iter_mut().rev() {
                if *v < self.bound {
                    *v += 1;
                    break;
                }
                *v = -self.bound;
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_and_budget() {
        let opts = RunOptions::default();
        assert_eq!(AssignmentBox::new(4, 2, &opts).unwrap().size(), 625);
        assert_eq!(AssignmentBox::new(8, 2, &opts).unwrap().size(), 390_625);
        let err = AssignmentBox::new(16, 2, &opts).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: "152587890625".into(),
                budget: DEFAULT_BUDGET
            }
        );
        let forced = RunOptions {
            allow_over_budget: true,
            ..RunOptions::default()
        };
        assert_eq!(
            AssignmentBox::new(16, 2, &forced).unwrap().size(),
            152_587_890_625
        );
        assert!(AssignmentBox::new(64, 100, &forced).is_err());
    }

    #[test]
    fn rank_order_is_lexicographic() {
        let b = AssignmentBox::new(3, 1, &RunOptions::default()).unwrap();
        let mut prev: Option<Vec<i64>> = None;
        for r in 0..b.size() {
            let p = b.point(r);
            assert_eq!(b.rank(&p), Some(r));
            if let Some(q) = prev {
                assert!(q < p);
            }
            prev = Some(p);
        }
        assert_eq!(b.point(0), vec![-1, -1, -1]);
        assert_eq!(b.rank(&[0, 2, 0]), None);
    }

    #[test]
    fn walk_matches_point() {
        let b = AssignmentBox::new(4, 2, &RunOptions::default()).unwrap();
        for shard in b.shards() {
            b.walk(shard.clone(), |r, xs| assert_eq!(xs, b.point(r).as_slice()));
        }
        let total: u64 = b.shards().iter().map(|s| s.end - s.start).sum();
        assert_eq!(total, b.size());
        b.walk(17..40, |r, xs| assert_eq!(xs, b.point(r).as_slice()));
    }

    #[test]
    fn walk_until_stops_early() {
        let b = AssignmentBox::new(2, 1, &RunOptions::default()).unwrap();
        let mut seen = 0;
        let hit = b.walk_until(0..b.size(), |r, xs| {
            seen += 1;
            (xs == [0, 0]).then_some(r)
        });
        assert_eq!(hit, Some(4));
        assert_eq!(seen, 5);
    }
}
