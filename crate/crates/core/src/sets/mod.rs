//! Prefix representations of subsets of ℕ and the sumset kernels.
//!
//! A [`GroundSet`] is `X ∩ [0, N]` for an explicit horizon `N`. Because all
//! elements are nonnegative, `(A + B) ∩ [0, N]` and `(jA) ∩ [0, N]` depend only
//! on `A ∩ [0, N]`, so every kernel here is exact on its horizon.

mod io;
pub mod kernel;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{DensityTarget, Theta};
use kernel::{iter_bits, mask_tail, or_shifted, words_for, WORD_BITS};

/// `X ∩ [0, N]` as a packed bit array with a per-word rank directory.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSet {
    horizon: u64,
    words: Vec<u64>,
    /// `ranks[i]` = number of members below bit `64·i`.
    ranks: Vec<u64>,
}

impl GroundSet {
    pub(crate) fn from_words(horizon: u64, mut words: Vec<u64>) -> Self {
        words.resize(words_for(horizon), 0);
        mask_tail(&mut words, horizon);
        let mut ranks = Vec::with_capacity(words.len());
        let mut acc = 0u64;
        for w in &words {
            ranks.push(acc);
            acc += w.count_ones() as u64;
        }
        Self {
            horizon,
            words,
            ranks,
        }
    }

    pub fn empty(horizon: u64) -> Self {
        Self::from_words(horizon, Vec::new())
    }

    /// `[0, N]`.
    pub fn full(horizon: u64) -> Self {
        Self::from_words(horizon, vec![u64::MAX; words_for(horizon)])
    }

    pub fn from_elements<I: IntoIterator<Item = u64>>(horizon: u64, elements: I) -> Result<Self> {
        let mut words = vec![0u64; words_for(horizon)];
        for x in elements {
            if x > horizon {
                return Err(Error::BeyondHorizon { x, horizon });
            }
            words[x as usize / WORD_BITS] |= 1 << (x as usize % WORD_BITS);
        }
        Ok(Self::from_words(horizon, words))
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, x: u64) -> bool {
        x <= self.horizon && self.words[x as usize / WORD_BITS] >> (x as usize % WORD_BITS) & 1 == 1
    }

    /// Members in `[0, x]`.
    fn rank_inclusive(&self, x: u64) -> u64 {
        let i = x as usize / WORD_BITS;
        let bit = x as usize % WORD_BITS;
        let mask = if bit == WORD_BITS - 1 {
            u64::MAX
        } else {
            (1u64 << (bit + 1)) - 1
        };
        self.ranks[i] + (self.words[i] & mask).count_ones() as u64
    }

    /// The counting function `X(x) = |X ∩ [1, x]|`; zero for `x < 1`.
    pub fn counting(&self, x: i64) -> Result<u64> {
        if x < 1 {
            return Ok(0);
        }
        let x = x as u64;
        if x > self.horizon {
            return Err(Error::BeyondHorizon {
                x,
                horizon: self.horizon,
            });
        }
        Ok(self.rank_inclusive(x) - self.contains(0) as u64)
    }

    /// Number of members, including 0 if present.
    pub fn len(&self) -> usize {
        (self.ranks.last().copied().unwrap_or(0)
            + self.words.last().map_or(0, |w| w.count_ones() as u64)) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        iter_bits(&self.words)
    }

    pub fn elements(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// The same set on a shorter horizon.
    pub fn restrict(&self, horizon: u64) -> Result<Self> {
        if horizon > self.horizon {
            return Err(Error::BeyondHorizon {
                x: horizon,
                horizon: self.horizon,
            });
        }
        Ok(Self::from_words(
            horizon,
            self.words[..words_for(horizon)].to_vec(),
        ))
    }

    /// Members of `self` missing from `other` (members beyond `other`'s horizon count as missing).
    pub fn missing_from(&self, other: &GroundSet) -> Vec<u64> {
        self.iter().filter(|&x| !other.contains(x)).collect()
    }

    pub fn is_subset_of(&self, other: &GroundSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// `(A + B) ∩ [0, N]`: the union over `b ∈ B` of `A` shifted up by `b`.
    pub fn sumset(&self, b: &FiniteSet) -> GroundSet {
        let mut out = vec![0u64; self.words.len()];
        for &shift in b.elements() {
            if shift > self.horizon {
                break;
            }
            or_shifted(&mut out, &self.words, shift as usize);
        }
        Self::from_words(self.horizon, out)
    }

    /// `(A + B) ∩ [0, min(N_A, N_B)]` for two prefix sets.
    pub fn sum(&self, other: &GroundSet) -> GroundSet {
        let horizon = self.horizon.min(other.horizon);
        let len = words_for(horizon);
        let mut a = self.words[..len].to_vec();
        let mut b = other.words[..len].to_vec();
        mask_tail(&mut a, horizon);
        mask_tail(&mut b, horizon);
        Self::from_words(horizon, kernel::convolve_support(&a, &b, horizon))
    }

    /// `(jA) ∩ [0, N]` by `j − 1` successive folds.
    pub fn iterated_sumset(&self, j: u32) -> Result<GroundSet> {
        if j == 0 {
            return Err(Error::InvalidParameter("j must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..j {
            acc = acc.sum(self);
        }
        Ok(acc)
    }

    /// `θ·X = {⌊θa⌋ : a ∈ X}` on `[0, horizon]`. The horizon may not exceed
    /// `⌊θ·N_X⌋`, past which the image of `X ∩ [0, N_X]` is incomplete.
    pub fn floor_scale(&self, theta: &Theta, horizon: u64) -> Result<GroundSet> {
        if !theta.exceeds_one()? {
            return Err(Error::ThetaTooSmall);
        }
        let limit = theta.floor_mul(self.horizon)?;
        if horizon > limit {
            return Err(Error::BeyondHorizon {
                x: horizon,
                horizon: limit,
            });
        }
        let mut words = vec![0u64; words_for(horizon)];
        for a in self.iter() {
            let y = theta.floor_mul(a)?;
            if y > horizon {
                break;
            }
            words[y as usize / WORD_BITS] |= 1 << (y as usize % WORD_BITS);
        }
        Ok(Self::from_words(horizon, words))
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 16;
        let head: Vec<u64> = self.iter().take(SHOWN).collect();
        let more = if self.len() > SHOWN { ", …" } else { "" };
        write!(f, "GroundSet(horizon={}, {:?}{more})", self.horizon, head)
    }
}

/// An explicit finite set: the `B` of `A + B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteSet {
    elements: Vec<u64>,
}

impl FiniteSet {
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// `|B|`.
    pub fn k(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `max B`.
    pub fn b(&self) -> u64 {
        *self.elements.last().expect("nonempty")
    }

    pub fn min(&self) -> u64 {
        self.elements[0]
    }
}

impl FromStr for FiniteSet {
    type Err = Error;

    /// Comma-separated naturals, e.g. `"0,1,5"`.
    fn from_str(s: &str) -> Result<Self> {
        let elements = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Malformed(t.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elements)
    }
}

/// `⋃_{r ∈ residues} (M·ℕ + r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodicSet {
    modulus: u64,
    residues: Vec<u64>,
}

impl PeriodicSet {
    pub fn new(modulus: u64, mut residues: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        residues.sort_unstable();
        residues.dedup();
        if let Some(&r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(Error::InvalidParameter(format!(
                "residue {r} not below modulus {modulus}"
            )));
        }
        Ok(Self { modulus, residues })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn contains(&self, x: u64) -> bool {
        self.residues.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn materialize(&self, horizon: u64) -> GroundSet {
        let mut words = vec![0u64; words_for(horizon)];
        let mut base = 0u64;
        while base <= horizon {
            for &r in &self.residues {
                let x = base + r;
                if x > horizon {
                    break;
                }
                words[x as usize / WORD_BITS] |= 1 << (x as usize % WORD_BITS);
            }
            base += self.modulus;
        }
        GroundSet::from_words(horizon, words)
    }

    /// Closed-form `X(x)`: full periods plus the partial period, minus the element 0.
    pub fn counting(&self, x: i64) -> u64 {
        if x < 1 {
            return 0;
        }
        let x = x as u64;
        let periods = x / self.modulus;
        let rem = x % self.modulus;
        let partial = self.residues.partition_point(|&r| r <= rem) as u64;
        let zero = self.residues.first() == Some(&0);
        periods * self.residues.len() as u64 + partial - zero as u64
    }

    /// `|residues| / M`.
    pub fn exact_density(&self) -> DensityTarget {
        DensityTarget::new(self.residues.len() as u64, self.modulus).expect("residues ⊂ [0, M)")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::IrrationalNumber;

    fn set(horizon: u64, xs: &[u64]) -> GroundSet {
        GroundSet::from_elements(horizon, xs.iter().copied()).unwrap()
    }

    #[test]
    fn counting_examples() {
        assert_eq!(set(10, &[0]).counting(5).unwrap(), 0);
        assert_eq!(set(10, &[1, 3]).counting(2).unwrap(), 1);
        assert_eq!(set(10, &[2, 4, 6, 8, 10]).counting(7).unwrap(), 3);
        assert_eq!(set(10, &[1, 3]).counting(-4).unwrap(), 0);
        assert!(matches!(
            set(10, &[1]).counting(11),
            Err(Error::BeyondHorizon { .. })
        ));
    }

    #[test]
    fn counting_at_word_boundaries() {
        let x = GroundSet::full(200);
        for n in [63, 64, 65, 127, 128, 200] {
            assert_eq!(x.counting(n).unwrap(), n as u64);
        }
        assert_eq!(x.len(), 201);
    }

    #[test]
    fn rejects_elements_past_horizon() {
        assert!(GroundSet::from_elements(5, [6]).is_err());
    }

    #[test]
    fn sumset_examples() {
        let a = set(5, &[0, 2, 4]);
        let b: FiniteSet = "0,1".parse().unwrap();
        assert_eq!(a.sumset(&b).elements(), vec![0, 1, 2, 3, 4, 5]);
        let zero = FiniteSet::new(vec![0]).unwrap();
        assert_eq!(a.sumset(&zero), a);
    }

    #[test]
    fn iterated_sumset_examples() {
        let a = set(5, &[0, 1]);
        assert_eq!(a.iterated_sumset(1).unwrap(), a);
        assert_eq!(a.iterated_sumset(2).unwrap().elements(), vec![0, 1, 2]);
        assert!(a.iterated_sumset(0).is_err());

        let p = PeriodicSet::new(12, vec![0, 1, 3]).unwrap();
        let twice = p.materialize(120).iterated_sumset(2).unwrap();
        let mut residues: Vec<u64> = twice.iter().map(|x| x % 12).collect();
        residues.sort_unstable();
        residues.dedup();
        assert_eq!(residues, vec![0, 1, 2, 3, 4, 6]);
    }

    #[test]
    fn floor_scale_examples() {
        let theta = Theta::from(IrrationalNumber::sqrt(2).unwrap());
        let x = set(10, &[0, 1, 2]);
        assert_eq!(x.floor_scale(&theta, 14).unwrap().elements(), vec![0, 1, 2]);
        assert_eq!(
            set(10, &[5]).floor_scale(&theta, 14).unwrap().elements(),
            vec![7]
        );
        assert!(GroundSet::empty(10)
            .floor_scale(&theta, 14)
            .unwrap()
            .is_empty());
        // ⌊10√2⌋ = 14 is the last complete horizon.
        assert!(x.floor_scale(&theta, 15).is_err());
        let small = Theta::from(IrrationalNumber::new(0, 1, 2, 2).unwrap());
        assert_eq!(x.floor_scale(&small, 5), Err(Error::ThetaTooSmall));
    }

    #[test]
    fn materialize_examples() {
        let p = |m, r: &[u64]| PeriodicSet::new(m, r.to_vec()).unwrap();
        assert_eq!(p(2, &[0]).materialize(6).elements(), vec![0, 2, 4, 6]);
        assert_eq!(
            p(12, &[0, 1, 3]).materialize(13).elements(),
            vec![0, 1, 3, 12, 13]
        );
        assert_eq!(p(1, &[0]).materialize(4).elements(), vec![0, 1, 2, 3, 4]);
        assert!(PeriodicSet::new(4, vec![4]).is_err());
        assert!(PeriodicSet::new(0, vec![]).is_err());
    }

    #[test]
    fn periodic_counting_matches_materialized() {
        let p = PeriodicSet::new(12, vec![0, 1, 3, 7]).unwrap();
        let g = p.materialize(300);
        for x in -2..=300 {
            assert_eq!(p.counting(x), g.counting(x).unwrap(), "x = {x}");
        }
        assert_eq!(p.exact_density(), DensityTarget::new(1, 3).unwrap());
    }

    #[test]
    fn finite_set_parsing() {
        let b: FiniteSet = "5, 2,2".parse().unwrap();
        assert_eq!(b.elements(), &[2, 5]);
        assert_eq!((b.k(), b.b(), b.min()), (2, 5, 2));
        assert_eq!("".parse::<FiniteSet>(), Err(Error::EmptySet));
        assert!("1,x".parse::<FiniteSet>().is_err());
    }

    #[test]
    fn restrict_and_subset() {
        let a = set(100, &[1, 50, 99]);
        let r = a.restrict(60).unwrap();
        assert_eq!(r.elements(), vec![1, 50]);
        assert!(r.is_subset_of(&a));
        assert_eq!(a.missing_from(&r), vec![99]);
        assert!(a.restrict(101).is_err());
    }
}
