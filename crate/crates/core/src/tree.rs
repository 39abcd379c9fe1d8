//! The semigroup tree: parent/children relations and exhaustive traversal.
//!
//! The parent of a non-trivial semigroup adjoins its Frobenius number, so the
//! children of `S` are `S \ {x}` for each minimal generator `x > F(S)`, and the
//! depth of a node equals its genus. The tree has no cross edges, so traversal
//! is a plain depth-first walk with an explicit stack.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::semigroup::{clear_bit, set_bit, test_bit, word_count, Semigroup, Words};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("the trivial semigroup is the root and has no parent")]
    RootHasNoParent,
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

/// How children's minimal generators are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildStrategy {
    /// Recompute the full generating set of each child bitmap from scratch.
    Naive,
    /// Derive the child's generators from the parent's: only `x + m` (and
    /// `x + m + 1` when the multiplicity moves) can become new generators.
    #[default]
    Incremental,
}

/// An edge of the tree, with endpoints given by canonical id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub parent_id: String,
    pub child_id: String,
    pub removed_generator: u32,
    /// The child lies on an infinite chain.
    pub highlighted: bool,
}

impl TreeEdge {
    pub fn new(parent: &Semigroup, removed_generator: u32, child: &Semigroup) -> Self {
        TreeEdge {
            parent_id: parent.canonical_id(),
            child_id: child.canonical_id(),
            removed_generator,
            highlighted: child.in_infinite_chain(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalReport {
    pub max_genus: u32,
    pub per_genus_counts: Vec<u64>,
    pub node_visit_count: u64,
    pub wall_time: Duration,
}

/// The parent `S ∪ {F(S)}`.
pub fn parent(s: &Semigroup) -> Result<Semigroup, TreeError> {
    if s.is_trivial() {
        return Err(TreeError::RootHasNoParent);
    }
    let f = s.frobenius() as u32;
    let mut members: Words = SmallVec::from_slice(s.member_words());
    set_bit(&mut members, f);
    let new_f = (1..f).rev().find(|&i| !test_bit(&members, i));
    match new_f {
        None => Ok(Semigroup::trivial()),
        Some(nf) => {
            members.truncate(word_count(nf + 2));
            let top = nf + 2;
            if top % 64 != 0 {
                let last = members.len() - 1;
                members[last] &= (1u64 << (top % 64)) - 1;
            }
            Ok(Semigroup::from_closed_bits(members, nf as i32))
        }
    }
}

/// Children in ascending order of removed generator.
pub fn children(s: &Semigroup) -> Vec<(u32, Semigroup)> {
    children_with(s, ChildStrategy::Naive)
}

pub fn children_with(s: &Semigroup, strategy: ChildStrategy) -> Vec<(u32, Semigroup)> {
    s.effective_generators()
        .map(|x| (x, remove_generator(s, x, strategy)))
        .collect()
}

/// `S \ {x}` for an effective generator `x`.
fn remove_generator(s: &Semigroup, x: u32, strategy: ChildStrategy) -> Semigroup {
    debug_assert!(x as i64 > s.frobenius() as i64);
    let old_conductor = s.conductor();
    let mut members: Words = SmallVec::from_elem(0, word_count(x + 2));
    let shared = s.member_words().len().min(members.len());
    members[..shared].copy_from_slice(&s.member_words()[..shared]);
    for i in old_conductor..=x + 1 {
        set_bit(&mut members, i);
    }
    clear_bit(&mut members, x);
    match strategy {
        ChildStrategy::Naive => Semigroup::from_closed_bits(members, x as i32),
        ChildStrategy::Incremental => {
            let m = if x == s.multiplicity() { x + 1 } else { s.multiplicity() };
            let contains = |n: u32| n > x + 1 || test_bit(&members, n);
            let minimal = |y: u32| !(m..=y / 2).any(|a| contains(a) && contains(y - a));
            let mut generators: Vec<u32> =
                s.minimal_generators().iter().copied().filter(|&g| g != x).collect();
            // new generators are x + a for a nonzero member a with x + a <= x + m
            for a in s.multiplicity()..=m {
                if s.contains(a) {
                    let y = x + a;
                    if generators.binary_search(&y).is_err() && minimal(y) {
                        let at = generators.partition_point(|&g| g < y);
                        generators.insert(at, y);
                    }
                }
            }
            Semigroup::from_raw_parts(members, x as i32, s.genus() + 1, m, generators)
        }
    }
}

/// Whether some child lies on an infinite chain.
pub fn has_infinite_child(s: &Semigroup) -> bool {
    children_with(s, ChildStrategy::Incremental)
        .iter()
        .any(|(_, c)| c.in_infinite_chain())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtreeSize {
    /// The walk terminated; the payload counts proper descendants.
    Finite(u64),
    BudgetExhausted,
}

/// Walks the whole subtree below `s` with no depth limit, giving up once more
/// than `node_budget` descendants have been seen.
pub fn subtree_is_finite(s: &Semigroup, node_budget: u64) -> SubtreeSize {
    let mut seen = 0u64;
    let mut stack = vec![s.clone()];
    while let Some(node) = stack.pop() {
        for (_, child) in children_with(&node, ChildStrategy::Incremental).into_iter().rev() {
            seen += 1;
            if seen > node_budget {
                return SubtreeSize::BudgetExhausted;
            }
            stack.push(child);
        }
    }
    SubtreeSize::Finite(seen)
}

/// Depth-bounded traversal of the tree from the root.
#[derive(Debug, Clone)]
pub struct Traversal {
    max_genus: u32,
    workers: usize,
    node_cap: Option<u64>,
    strategy: ChildStrategy,
    fan_out_depth: u32,
}

pub const DEFAULT_FAN_OUT_DEPTH: u32 = 8;

impl Traversal {
    pub fn new(max_genus: u32) -> Self {
        Traversal {
            max_genus,
            workers: 1,
            node_cap: None,
            strategy: ChildStrategy::default(),
            fan_out_depth: DEFAULT_FAN_OUT_DEPTH,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn node_cap(mut self, cap: Option<u64>) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn strategy(mut self, strategy: ChildStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn fan_out_depth(mut self, depth: u32) -> Self {
        self.fan_out_depth = depth;
        self
    }

    pub fn max_genus(&self) -> u32 {
        self.max_genus
    }

    /// Serial depth-first walk, children in ascending removed-generator
    /// order. The visitor sees every semigroup of genus at most `max_genus`
    /// exactly once, together with its depth.
    pub fn enumerate<F>(&self, mut visitor: F) -> Result<TraversalReport, TreeError>
    where
        F: FnMut(&Semigroup, u32),
    {
        let start = Instant::now();
        let mut counts = vec![0u64; self.max_genus as usize + 1];
        let mut visited = 0u64;
        let mut stack = vec![Semigroup::trivial()];
        while let Some(node) = stack.pop() {
            visited += 1;
            if let Some(cap) = self.node_cap {
                if visited > cap {
                    return Err(TreeError::BudgetExceeded(cap));
                }
            }
            let depth = node.genus();
            counts[depth as usize] += 1;
            visitor(&node, depth);
            if depth < self.max_genus {
                stack.extend(children_with(&node, self.strategy).into_iter().rev().map(|(_, c)| c));
            }
        }
        Ok(TraversalReport {
            max_genus: self.max_genus,
            per_genus_counts: counts,
            node_visit_count: visited,
            wall_time: start.elapsed(),
        })
    }

    /// Visits every node, possibly from several threads at once; visiting
    /// order is unspecified when more than one worker is configured.
    pub fn enumerate_parallel<F>(&self, visitor: F) -> Result<TraversalReport, TreeError>
    where
        F: Fn(&Semigroup, u32) + Sync,
    {
        let start = Instant::now();
        let counts = self.fold(
            || vec![0u64; self.max_genus as usize + 1],
            |acc, s, depth| {
                acc[depth as usize] += 1;
                visitor(s, depth);
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )?;
        Ok(TraversalReport {
            max_genus: self.max_genus,
            node_visit_count: counts.iter().sum(),
            per_genus_counts: counts,
            wall_time: start.elapsed(),
        })
    }

    /// Folds every node into per-worker accumulators and merges them. The
    /// merge must be commutative and associative for the result to be
    /// independent of the worker count.
    pub fn fold<A, I, F, M>(&self, init: I, fold: F, merge: M) -> Result<A, TreeError>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &Semigroup, u32) + Sync,
        M: Fn(A, A) -> A + Sync,
    {
        if self.workers == 1 {
            let mut acc = init();
            self.enumerate(|s, d| fold(&mut acc, s, d))?;
            return Ok(acc);
        }
        let visited = AtomicU64::new(0);
        let bump = |n: u64| -> Result<(), TreeError> {
            let seen = visited.fetch_add(n, Ordering::Relaxed) + n;
            match self.node_cap {
                Some(cap) if seen > cap => Err(TreeError::BudgetExceeded(cap)),
                _ => Ok(()),
            }
        };

        // serial walk down to the fan-out depth, collecting the frontier
        let split = self.fan_out_depth.min(self.max_genus);
        let mut head = init();
        let mut frontier = Vec::new();
        let mut stack = vec![Semigroup::trivial()];
        while let Some(node) = stack.pop() {
            if node.genus() == split {
                frontier.push(node);
                continue;
            }
            bump(1)?;
            fold(&mut head, &node, node.genus());
            stack.extend(children_with(&node, self.strategy).into_iter().map(|(_, c)| c));
        }

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| TreeError::Pool(e.to_string()))?;
        let tail = pool.install(|| {
            frontier
                .par_iter()
                .map(|root| {
                    let mut acc = init();
                    let mut local = 0u64;
                    let mut stack = vec![root.clone()];
                    while let Some(node) = stack.pop() {
                        local += 1;
                        if local == 4096 {
                            bump(local)?;
                            local = 0;
                        }
                        let depth = node.genus();
                        fold(&mut acc, &node, depth);
                        if depth < self.max_genus {
                            stack.extend(children_with(&node, self.strategy).into_iter().map(|(_, c)| c));
                        }
                    }
                    bump(local)?;
                    Ok(acc)
                })
                .try_reduce(&init, |a, b| Ok(merge(a, b)))
        })?;
        Ok(merge(head, tail))
    }
}

/// n_0, ..., n_max_genus, counted serially.
pub fn count_by_genus(max_genus: u32) -> Vec<u64> {
    count_by_genus_with(max_genus, 1).expect("uncapped serial traversal cannot fail")
}

pub fn count_by_genus_with(max_genus: u32, workers: usize) -> Result<Vec<u64>, TreeError> {
    Traversal::new(max_genus)
        .workers(workers)
        .enumerate_parallel(|_, _| {})
        .map(|r| r.per_genus_counts)
}

/// All edges of the tree down to `max_genus`, in serial depth-first order.
pub fn edges(max_genus: u32) -> Vec<TreeEdge> {
    let mut out = Vec::new();
    Traversal::new(max_genus)
        .enumerate(|s, depth| {
            if depth < max_genus {
                for (x, child) in children_with(s, ChildStrategy::Incremental) {
                    out.push(TreeEdge::new(s, x, &child));
                }
            }
        })
        .expect("uncapped serial traversal cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(gaps: &[u32]) -> Semigroup {
        Semigroup::from_gap_set(gaps.iter().copied()).unwrap()
    }

    #[test]
    fn parents() {
        assert_eq!(parent(&sg(&[1, 3])).unwrap(), sg(&[1]));
        assert_eq!(parent(&sg(&[1, 2, 5])).unwrap(), sg(&[1, 2]));
        assert_eq!(parent(&sg(&[1])).unwrap(), Semigroup::trivial());
        assert_eq!(parent(&Semigroup::trivial()), Err(TreeError::RootHasNoParent));
    }

    #[test]
    fn child_lists() {
        let root = children(&Semigroup::trivial());
        assert_eq!(root, vec![(1, sg(&[1]))]);
        assert_eq!(children(&sg(&[1])), vec![(2, sg(&[1, 2])), (3, sg(&[1, 3]))]);
        assert_eq!(children(&sg(&[1, 3])), vec![(5, sg(&[1, 3, 5]))]);
    }

    #[test]
    fn infinite_children() {
        assert!(has_infinite_child(&Semigroup::trivial()));
        assert!(has_infinite_child(&sg(&[1, 3])));
        assert!(!has_infinite_child(&sg(&[1, 2, 5])));
    }

    #[test]
    fn strategies_agree_on_small_tree() {
        Traversal::new(12)
            .enumerate(|s, _| {
                assert_eq!(
                    children_with(s, ChildStrategy::Naive),
                    children_with(s, ChildStrategy::Incremental),
                    "{s:?}"
                );
            })
            .unwrap();
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_by_genus(0), vec![1]);
        assert_eq!(count_by_genus(2), vec![1, 1, 2]);
        assert_eq!(count_by_genus(4), vec![1, 1, 2, 4, 7]);
    }

    #[test]
    fn node_cap() {
        let err = Traversal::new(10).node_cap(Some(50)).enumerate(|_, _| {});
        assert_eq!(err, Err(TreeError::BudgetExceeded(50)));
        let err = Traversal::new(14).workers(3).node_cap(Some(500)).enumerate_parallel(|_, _| {});
        assert_eq!(err, Err(TreeError::BudgetExceeded(500)));
        assert!(Traversal::new(4).node_cap(Some(15)).enumerate(|_, _| {}).is_ok());
    }

    #[test]
    fn subtree_sizes() {
        assert_eq!(subtree_is_finite(&Semigroup::trivial(), 1000), SubtreeSize::BudgetExhausted);
        // every generator of <3,4> lies below F = 5, so it is a leaf
        assert_eq!(subtree_is_finite(&sg(&[1, 2, 5]), 1_000_000), SubtreeSize::Finite(0));
        // <4,5,7> -> <4,5,11> -> <4,5>
        assert_eq!(subtree_is_finite(&sg(&[1, 2, 3, 6]), 10), SubtreeSize::Finite(2));
        // <3,5,7> has left elements {3} and sits on an infinite chain
        assert_eq!(subtree_is_finite(&sg(&[1, 2, 4]), 10_000), SubtreeSize::BudgetExhausted);
    }

    #[test]
    fn edges_down_to_two() {
        let e = edges(2);
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(|e| e.highlighted));
        assert_eq!(e[0].removed_generator, 1);
    }

    #[test]
    fn report_totals() {
        let r = Traversal::new(6).enumerate(|_, _| {}).unwrap();
        assert_eq!(r.per_genus_counts, vec![1, 1, 2, 4, 7, 12, 23]);
        assert_eq!(r.node_visit_count, 50);
        let p = Traversal::new(6).workers(4).fan_out_depth(2).enumerate_parallel(|_, _| {}).unwrap();
        assert_eq!(p.per_genus_counts, r.per_genus_counts);
    }
}
