//! Greedy construction of `A` with `d(A + B) = α` for a finite `B`.
//!
//! `B` is first translated so that `min B = 0`. Elements are then chosen one
//! at a time: each candidate `a` is the least value above the previous element
//! such that adding it keeps `(A + B)(n) ≤ α·n` for every `n ≥ a`. Past
//! `a + max B` the count is constant and the ratio only falls, so only the
//! window `[max(a, 1), a + max B]` needs checking.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::DensityTarget;
use crate::sets::{FiniteSet, GroundSet};

/// `B − min B` together with the removed offset.
pub fn normalize(b: &FiniteSet) -> (FiniteSet, u64) {
    let offset = b.min();
    let shifted = b.elements().iter().map(|&x| x - offset).collect();
    (FiniteSet::new(shifted).expect("nonempty"), offset)
}

/// Diagnostics for one accepted element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyStep {
    /// 1-based index `m` of the element.
    pub index: u64,
    pub element: u64,
    /// Candidates rejected before this one was accepted.
    pub search_width: u64,
    /// Where `((A_{m-1} ∪ {a}) + B)(n)/n` peaks inside the checked window;
    /// `None` when the window is empty.
    pub window_argmax: Option<u64>,
}

/// The builder's running state: `A_m` and the counting function of `A_m + B'`.
#[derive(Clone, Debug)]
pub struct GreedyState {
    b_normalized: FiniteSet,
    offset: u64,
    alpha: DensityTarget,
    elements: Vec<u64>,
    covered: Vec<bool>,
    /// `sum_counts[n] = (A_m + B')(n)` for `n ≤ a_m + b`; constant afterwards.
    sum_counts: Vec<u64>,
}

enum Verdict {
    Accept { argmax: Option<u64> },
    Reject,
}

impl GreedyState {
    /// Requires `0 < α < 1`.
    pub fn new(b: &FiniteSet, alpha: DensityTarget) -> Result<Self> {
        if alpha.is_zero() || alpha.is_one() {
            return Err(Error::InvalidParameter(format!(
                "the greedy step needs 0 < alpha < 1, got {alpha}"
            )));
        }
        let (b_normalized, offset) = normalize(b);
        Ok(Self {
            b_normalized,
            offset,
            alpha,
            elements: Vec::new(),
            covered: vec![false],
            sum_counts: vec![0],
        })
    }

    pub fn b_normalized(&self) -> &FiniteSet {
        &self.b_normalized
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn alpha(&self) -> DensityTarget {
        self.alpha
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    fn count_at(&self, n: u64) -> u64 {
        let i = (n as usize).min(self.sum_counts.len() - 1);
        self.sum_counts[i]
    }

    fn is_covered(&self, x: u64) -> bool {
        self.covered.get(x as usize).copied().unwrap_or(false)
    }

    fn examine(&self, a: u64) -> Verdict {
        let (p, q) = (self.alpha.numer() as u128, self.alpha.denom() as u128);
        let b = self.b_normalized.elements();
        let mut fresh = b
            .iter()
            .map(|&s| a + s)
            .filter(|&x| x >= 1 && !self.is_covered(x))
            .peekable();
        let mut added = 0u64;
        let mut best: Option<(u64, u64)> = None;
        for n in a.max(1)..=a + self.b_normalized.b() {
            while fresh.next_if(|&x| x <= n).is_some() {
                added += 1;
            }
            let count = self.count_at(n) + added;
            if count as u128 * q > p * n as u128 {
                return Verdict::Reject;
            }
            if best.is_none_or(|(c, m)| count as u128 * m as u128 > c as u128 * n as u128) {
                best = Some((count, n));
            }
        }
        Verdict::Accept {
            argmax: best.map(|(_, n)| n),
        }
    }

    /// `a_{m+1}` (or `a_1` from the empty state), searching no further than `limit`.
    fn search(&self, limit: u64) -> Option<(u64, u64, Option<u64>)> {
        let start = self.elements.last().map_or(0, |&a| a + 1);
        for a in start..=limit {
            if let Verdict::Accept { argmax } = self.examine(a) {
                return Some((a, a - start, argmax));
            }
        }
        None
    }

    /// The next element, unbounded: existence is guaranteed, and it never
    /// exceeds `⌈k(m+1)/α⌉`.
    pub fn next_element(&self) -> u64 {
        self.search(u64::MAX)
            .expect("the greedy step always terminates")
            .0
    }

    /// Commits `a` as the next element.
    pub fn push(&mut self, a: u64) {
        debug_assert!(self.elements.last().is_none_or(|&last| a > last));
        let top = (a + self.b_normalized.b()) as usize;
        if self.covered.len() <= top {
            self.covered.resize(top + 1, false);
        }
        for &s in self.b_normalized.elements() {
            self.covered[(a + s) as usize] = true;
        }
        let last = *self.sum_counts.last().unwrap();
        self.sum_counts.resize(top + 1, last);
        for n in (a.max(1) as usize)..=top {
            self.sum_counts[n] = self.sum_counts[n - 1] + self.covered[n] as u64;
        }
        self.elements.push(a);
    }

    /// Upper bound `⌈k·m/α⌉` on the `m`-th element.
    pub fn element_bound(&self, m: u64) -> u64 {
        let k = self.b_normalized.k() as u128;
        let num = k * m as u128 * self.alpha.denom() as u128;
        num.div_ceil(self.alpha.numer() as u128) as u64
    }
}

/// First element of the greedy set for `B'` with `min B' = 0`.
pub fn first_element(b_normalized: &FiniteSet, alpha: DensityTarget) -> Result<u64> {
    if b_normalized.min() != 0 {
        return Err(Error::NonzeroMinimum(b_normalized.min()));
    }
    Ok(GreedyState::new(b_normalized, alpha)?.next_element())
}

/// Everything a greedy run produces.
#[derive(Clone, Debug)]
pub struct GreedyBuild {
    /// `A ∩ [0, N]`, translated back so that `A + B` is the target sumset.
    pub set: GroundSet,
    /// `A' ∩ [0, N + min B]`, built against `B' = B − min B`.
    pub normalized: GroundSet,
    pub b_normalized: FiniteSet,
    pub offset: u64,
    pub alpha: DensityTarget,
    pub steps: Vec<GreedyStep>,
}

/// `A ∩ [0, N]` with `d(A + B) = α`.
pub fn build_greedy(b: &FiniteSet, alpha: DensityTarget, horizon: u64) -> Result<GroundSet> {
    Ok(build_greedy_traced(b, alpha, horizon)?.set)
}

pub fn build_greedy_traced(
    b: &FiniteSet,
    alpha: DensityTarget,
    horizon: u64,
) -> Result<GreedyBuild> {
    let (b_normalized, offset) = normalize(b);
    let degenerate = |set: GroundSet| -> Result<GreedyBuild> {
        Ok(GreedyBuild {
            normalized: translate_up(&set, offset)?,
            set,
            b_normalized: b_normalized.clone(),
            offset,
            alpha,
            steps: Vec::new(),
        })
    };
    if alpha.is_zero() {
        let powers =
            std::iter::successors(Some(1u64), |x| x.checked_mul(2)).take_while(|&x| x <= horizon);
        return degenerate(GroundSet::from_elements(horizon, powers)?);
    }
    if alpha.is_one() {
        return degenerate(GroundSet::full(horizon));
    }

    let limit = horizon
        .checked_add(offset)
        .ok_or(Error::Overflow("horizon + min B"))?;
    let mut state = GreedyState::new(b, alpha)?;
    let mut steps = Vec::new();
    while let Some((a, width, argmax)) = state.search(limit) {
        state.push(a);
        steps.push(GreedyStep {
            index: state.elements.len() as u64,
            element: a,
            search_width: width,
            window_argmax: argmax,
        });
        if a == limit {
            break;
        }
    }
    let normalized = GroundSet::from_elements(limit, state.elements.iter().copied())?;
    let set = GroundSet::from_elements(
        horizon,
        state
            .elements
            .iter()
            .filter(|&&a| a >= offset)
            .map(|&a| a - offset),
    )?;
    Ok(GreedyBuild {
        set,
        normalized,
        b_normalized,
        offset,
        alpha,
        steps,
    })
}

fn translate_up(set: &GroundSet, offset: u64) -> Result<GroundSet> {
    GroundSet::from_elements(set.horizon() + offset, set.iter().map(|x| x + offset))
}

/// Elements `a > 1` of `A` where `(A+B)(a)/a < (A+B)(a−1)/(a−1)`. Always empty
/// when `0 ∈ B`: `a` itself joins `A + B`, so the count steps up at `a`.
pub fn check_ratio_monotone(a: &GroundSet, b: &FiniteSet) -> Result<Vec<u64>> {
    if b.min() != 0 {
        return Err(Error::NonzeroMinimum(b.min()));
    }
    let sums = a.sumset(b);
    let mut violations = Vec::new();
    for x in a.iter().filter(|&x| x > 1) {
        let here = sums.counting(x as i64)? as u128;
        let before = sums.counting(x as i64 - 1)? as u128;
        if here * (x as u128 - 1) < before * x as u128 {
            violations.push(x);
        }
    }
    Ok(violations)
}
