//! Exact minimum set cover by branch and bound.
//!
//! Branching is on the uncovered element contained in the fewest sets;
//! candidate sets are tried by decreasing number of newly covered elements.
//! Sets contained in another set are dropped first. A node is pruned when
//! `chosen + max(fewest sets whose gains reach the uncovered count, packing
//! bound)` cannot beat the incumbent, which starts from the greedy cover.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Size budget for one set-cover instance. Exceeding it is an error, never
/// an approximate answer.
const DOMINANCE_MAX_SETS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_universe: usize,
    pub max_sets: usize,
    pub max_nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_universe: 1_000_000,
            max_sets: 100_000,
            max_nodes: 20_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Indices of the chosen sets, ascending.
    pub chosen: Vec<usize>,
    pub nodes: u64,
}

impl Solution {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }
}

/// Finds a minimum subfamily of `sets` whose union is `0..universe`.
pub fn solve(universe: usize, sets: &[FixedBitSet], limits: &Limits) -> Result<Solution> {
    if universe > limits.max_universe {
        return Err(Error::Resource(format!(
            "set cover universe of {universe} elements exceeds {}",
            limits.max_universe
        )));
    }
    if sets.len() > limits.max_sets {
        return Err(Error::Resource(format!(
            "set cover with {} sets exceeds {}",
            sets.len(),
            limits.max_sets
        )));
    }
    if universe == 0 {
        return Ok(Solution {
            chosen: Vec::new(),
            nodes: 0,
        });
    }
    let kept = undominated(sets);
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for &i in &kept {
        let s = &sets[i];
        for e in s.ones().filter(|&e| e < universe) {
            containing[e].push(i);
        }
    }
    if let Some(e) = containing.iter().position(Vec::is_empty) {
        return Err(Error::InvalidObservable(format!(
            "the family does not cover element {e}"
        )));
    }

    // every element in exactly one set: all nonempty sets are forced
    if containing.iter().all(|c| c.len() == 1) {
        let mut chosen: Vec<usize> = containing.iter().map(|c| c[0]).collect();
        chosen.sort_unstable();
        chosen.dedup();
        return Ok(Solution { chosen, nodes: 1 });
    }

    let mut solver = Solver {
        sets,
        kept: &kept,
        containing: &containing,
        best: greedy(universe, sets),
        nodes: 0,
        max_nodes: limits.max_nodes,
    };
    let mut uncovered = FixedBitSet::with_capacity(universe);
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    solver.search(&uncovered, &mut chosen)?;
    let mut best = solver.best;
    best.sort_unstable();
    Ok(Solution {
        chosen: best,
        nodes: solver.nodes,
    })
}

fn greedy(universe: usize, sets: &[FixedBitSet]) -> Vec<usize> {
    let mut uncovered = FixedBitSet::with_capacity(universe);
    uncovered.insert_range(..);
    let mut chosen = Vec::new();
    while !uncovered.is_clear() {
        let (best, _) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.intersection(&uncovered).count()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("feasible instance");
        uncovered.difference_with(&sets[best]);
        chosen.push(best);
    }
    chosen
}

/// Indices of the sets not strictly contained in another set; among equal
/// sets the first is kept. Large families are kept whole.
fn undominated(sets: &[FixedBitSet]) -> Vec<usize> {
    if sets.len() > DOMINANCE_MAX_SETS {
        return (0..sets.len()).collect();
    }
    let sizes: Vec<usize> = sets.iter().map(|s| s.count_ones(..)).collect();
    (0..sets.len())
        .filter(|&i| {
            !(0..sets.len()).any(|j| {
                j != i
                    && sets[i].is_subset(&sets[j])
                    && (sizes[j] > sizes[i] || j < i)
            })
        })
        .collect()
}

struct Solver<'a> {
    sets: &'a [FixedBitSet],
    kept: &'a [usize],
    containing: &'a [Vec<usize>],
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
}

impl Solver<'_> {
    fn search(&mut self, uncovered: &FixedBitSet, chosen: &mut Vec<usize>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Resource(format!(
                "set cover search exceeded {} nodes",
                self.max_nodes
            )));
        }
        let remaining = uncovered.count_ones(..);
        if remaining == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return Ok(());
        }
        if chosen.len() + self.lower_bound(uncovered, remaining) >= self.best.len() {
            return Ok(());
        }
        let pivot = uncovered
            .ones()
            .min_by_key(|&e| (self.containing[e].len(), e))
            .expect("nonempty");
        let mut candidates: Vec<(usize, usize)> = self.containing[pivot]
            .iter()
            .map(|&s| (s, self.sets[s].intersection(uncovered).count()))
            .collect();
        candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (s, _) in candidates {
            let mut next = uncovered.clone();
            next.difference_with(&self.sets[s]);
            chosen.push(s);
            self.search(&next, chosen)?;
            chosen.pop();
            if chosen.len() + 1 >= self.best.len() {
                break;
            }
        }
        Ok(())
    }

    fn lower_bound(&self, uncovered: &FixedBitSet, remaining: usize) -> usize {
        let mut gains: Vec<usize> = self
            .kept
            .iter()
            .map(|&s| self.sets[s].intersection(uncovered).count())
            .collect();
        // each element needs 1/(best gain among its sets) of a set
        let mut gain = vec![0usize; self.sets.len()];
        for (&s, &g) in self.kept.iter().zip(&gains) {
            gain[s] = g;
        }
        let fractional: f64 = uncovered
            .ones()
            .map(|e| 1.0 / self.containing[e].iter().map(|&s| gain[s]).max().unwrap_or(1) as f64)
            .sum();
        let by_element = (fractional - 1e-9).ceil() as usize;
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let mut by_gain = 0;
        let mut total = 0;
        for g in gains {
            if total >= remaining {
                break;
            }
            total += g;
            by_gain += 1;
        }
        // elements with pairwise disjoint set lists need distinct sets
        let mut used = FixedBitSet::with_capacity(self.sets.len());
        let mut packing = 0;
        for e in uncovered.ones() {
            if self.containing[e].iter().all(|&s| !used.contains(s)) {
                packing += 1;
                for &s in &self.containing[e] {
                    used.insert(s);
                }
            }
        }
        by_gain.max(packing).max(by_element)
    }
}
