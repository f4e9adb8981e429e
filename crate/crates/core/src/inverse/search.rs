//! Exact search over which relevant rows to force: plain enumeration of
//! subsets when there are few, depth-first branch and bound otherwise.
//!
//! Both walk subsets in lexicographic order and only accept a candidate that
//! beats the incumbent by more than [`IMPROVEMENT`], so ties resolve to the
//! lexicographically smallest subset either way.

use alloc::vec;
use alloc::vec::Vec;

use super::learner::InverseLearner;
use super::{InverseError, MilWeights};
use crate::combinatorics::{binomial, next_combination};

pub(super) const IMPROVEMENT: f64 = 1e-9;

/// Scalarized objective `a·D - b·|subset ∩ S|`.
pub(super) struct Scorer {
    a: f64,
    b: f64,
    preferred: Vec<bool>,
}

impl Scorer {
    pub(super) fn distance(m1: usize) -> Self {
        Self { a: 1.0, b: 0.0, preferred: vec![false; m1] }
    }

    pub(super) fn preferred(m1: usize, pref: &[usize], w: MilWeights, k: usize) -> Self {
        let mut preferred = vec![false; m1];
        for &j in pref {
            preferred[j] = true;
        }
        Self { a: w.omega1 / k as f64, b: w.omega2 / pref.len() as f64, preferred }
    }

    fn count(&self, rows: &[usize]) -> usize {
        rows.iter().filter(|&&j| self.preferred[j]).count()
    }

    fn score(&self, d: f64, rows: &[usize]) -> f64 {
        self.a * d - self.b * self.count(rows) as f64
    }
}

pub(super) struct Best {
    pub score: f64,
    pub subset: Vec<usize>,
    pub z: Vec<f64>,
}

/// Best subset `fixed ∪ C` with `C` drawn from `candidates` (ascending) and
/// `|C| = extra`. `None` when no such subset is feasible.
pub(super) fn best_extension(
    l: &InverseLearner,
    fixed: &[usize],
    candidates: &[usize],
    extra: usize,
    scorer: &Scorer,
) -> Result<Option<Best>, InverseError> {
    if extra > candidates.len() {
        return Ok(None);
    }
    if binomial(candidates.len(), extra) <= l.config().enum_budget {
        enumerate(l, fixed, candidates, extra, scorer)
    } else {
        let mut bb = BranchAndBound { l, fixed, candidates, extra, scorer, best: None, chosen: Vec::new() };
        if let Some((d, z)) = l.solve_forced(fixed)? {
            bb.node(0, d, &z)?;
        }
        Ok(bb.best)
    }
}

fn offer(best: &mut Option<Best>, score: f64, subset: Vec<usize>, z: Vec<f64>) {
    if best.as_ref().is_none_or(|b| score < b.score - IMPROVEMENT) {
        *best = Some(Best { score, subset, z });
    }
}

fn union(fixed: &[usize], chosen: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = fixed.iter().chain(chosen).copied().collect();
    s.sort_unstable();
    s
}

fn enumerate(
    l: &InverseLearner,
    fixed: &[usize],
    candidates: &[usize],
    extra: usize,
    scorer: &Scorer,
) -> Result<Option<Best>, InverseError> {
    let mut best = None;
    let mut idx: Vec<usize> = (0..extra).collect();
    loop {
        let chosen: Vec<usize> = idx.iter().map(|&i| candidates[i]).collect();
        let subset = union(fixed, &chosen);
        if let Some((d, z)) = l.solve_forced(&subset)? {
            offer(&mut best, scorer.score(d, &subset), subset, z);
        }
        if !next_combination(&mut idx, candidates.len()) {
            break;
        }
    }
    Ok(best)
}

struct BranchAndBound<'l, 'a> {
    l: &'l InverseLearner<'a>,
    fixed: &'l [usize],
    candidates: &'l [usize],
    extra: usize,
    scorer: &'l Scorer,
    best: Option<Best>,
    chosen: Vec<usize>,
}

impl BranchAndBound<'_, '_> {
    /// Decides `candidates[next..]`. `relax` and `z` solve the LP with only
    /// `fixed ∪ chosen` forced, a lower bound for every completion.
    fn node(&mut self, next: usize, relax: f64, z: &[f64]) -> Result<(), InverseError> {
        let need = self.extra - self.chosen.len();
        let subset = union(self.fixed, &self.chosen);
        if need == 0 {
            let score = self.scorer.score(relax, &subset);
            offer(&mut self.best, score, subset, z.to_vec());
            return Ok(());
        }
        let rest = &self.candidates[next..];
        if rest.len() < need {
            return Ok(());
        }
        let reachable = self.scorer.count(&subset) + need.min(self.scorer.count(rest));
        let bound = self.scorer.a * relax - self.scorer.b * reachable as f64;
        if let Some(b) = &self.best {
            if bound >= b.score - IMPROVEMENT {
                return Ok(());
            }
        }
        let j = self.candidates[next];
        self.chosen.push(j);
        let with_j = union(self.fixed, &self.chosen);
        if let Some((d, zj)) = self.l.solve_forced(&with_j)? {
            self.node(next + 1, d, &zj)?;
        }
        self.chosen.pop();
        self.node(next + 1, relax, z)
    }
}
