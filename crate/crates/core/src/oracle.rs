//! Slow reference implementations. They share no code with the packed-bit
//! kernels or the incremental greedy builder: plain sorted vectors, fresh
//! recounts, nothing cached.

use std::collections::BTreeSet;

/// `{a + b} ∩ [0, N]` by double loop.
pub fn naive_sumset(a: &[u64], b: &[u64], horizon: u64) -> Vec<u64> {
    let mut out = BTreeSet::new();
    for &x in a {
        for &y in b {
            if x + y <= horizon {
                out.insert(x + y);
            }
        }
    }
    out.into_iter().collect()
}

/// `jA ∩ [0, N]` by repeated [`naive_sumset`].
pub fn naive_jfold(a: &[u64], j: u32, horizon: u64) -> Vec<u64> {
    assert!(j >= 1);
    let base: Vec<u64> = a
        .iter()
        .copied()
        .filter(|&x| x <= horizon)
        .collect::<BTreeSet<u64>>()
        .into_iter()
        .collect();
    let mut acc = base.clone();
    for _ in 1..j {
        acc = naive_sumset(&acc, &base, horizon);
    }
    acc
}

fn count_up_to(sorted: &BTreeSet<u64>, n: u64) -> u64 {
    sorted.range(1..=n).count() as u64
}

/// The greedy set for `B` and `α = p/q`, following the element-by-element
/// definition literally: every candidate recomputes `(A ∪ {a}) + B'` from
/// scratch and scans `n` from `max(a, 1)` through `a + b + 1`, plus a guard of
/// `b + 1` more.
pub fn naive_greedy(b: &[u64], p: u64, q: u64, horizon: u64) -> Vec<u64> {
    assert!(!b.is_empty() && q > 0 && p <= q);
    if p == 0 {
        return std::iter::successors(Some(1u64), |x| Some(x * 2))
            .take_while(|&x| x <= horizon)
            .collect();
    }
    if p == q {
        return (0..=horizon).collect();
    }
    let shift = *b.iter().min().unwrap();
    let b_norm: Vec<u64> = b.iter().map(|&x| x - shift).collect();
    let b_max = *b_norm.iter().max().unwrap();
    let limit = horizon + shift;
    let guard = b_max + 1;

    let mut chosen: Vec<u64> = Vec::new();
    let mut a = 0u64;
    while a <= limit {
        let mut trial = chosen.clone();
        trial.push(a);
        let sums: BTreeSet<u64> = trial
            .iter()
            .flat_map(|&x| b_norm.iter().map(move |&y| x + y))
            .collect();
        let ok = (a.max(1)..=a + b_max + 1 + guard)
            .all(|n| count_up_to(&sums, n) as u128 * q as u128 <= p as u128 * n as u128);
        if ok {
            chosen.push(a);
        }
        a += 1;
    }
    chosen
        .into_iter()
        .filter(|&x| x >= shift)
        .map(|x| x - shift)
        .collect()
}
