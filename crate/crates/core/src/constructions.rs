//! Explicit sets `A` with `d(jA) = jα/k` for every `1 ≤ j ≤ k`.
//!
//! Rational `α = m/n`: the periodic set `nk·ℕ + H` with `H = {0, …, m−2, m}`,
//! whose `j`-fold sums are `nk·ℕ + jH` and `jH = {0, …, jm−2, jm}`.
//!
//! Irrational `α = 1/θ`: the Beatty-type set `{⌊nθ⌋ : {nθ} < 1/k}`. Its `j`-fold
//! sums sit inside `T_j = {⌊mθ⌋ : {mθ} < j/k}`, and [`verify_case_b`] checks the
//! matching lower bound by rebuilding elements of `T_j` as explicit sums.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{DensityTarget, Theta};
use crate::sets::{GroundSet, PeriodicSet};

/// Parameters of the periodic construction for `α = m/n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalCaseParams {
    m: u64,
    n: u64,
    k: u64,
    residues: Vec<u64>,
}

impl RationalCaseParams {
    /// Requires `3 ≤ m ≤ n − 1` and `k ≥ 2`; `gcd(m, n) = 1` is not required.
    pub fn new(m: u64, n: u64, k: u64) -> Result<Self> {
        if m < 3 || m + 1 > n {
            return Err(Error::InvalidParameter(format!(
                "need 3 ≤ m ≤ n − 1, got m = {m}, n = {n}"
            )));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(format!("need k ≥ 2, got {k}")));
        }
        n.checked_mul(k).ok_or(Error::Overflow("modulus n·k"))?;
        let residues = (0..=m - 2).chain(std::iter::once(m)).collect();
        Ok(Self { m, n, k, residues })
    }

    /// Writes `α = m/n` and scales `m = 1` by 3 and `m = 2` by 2.
    pub fn from_target(alpha: DensityTarget, k: u64) -> Result<Self> {
        if alpha.is_zero() || alpha.is_one() {
            return Err(Error::InvalidParameter(format!(
                "need 0 < alpha < 1, got {alpha}"
            )));
        }
        let (m, n) = (alpha.numer(), alpha.denom());
        let scale = match m {
            1 => 3,
            2 => 2,
            _ => 1,
        };
        Self::new(m * scale, n * scale, k)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.n * self.k
    }

    /// `H = {0, …, m−2, m}`.
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn periodic_set(&self) -> PeriodicSet {
        PeriodicSet::new(self.modulus(), self.residues.clone()).expect("m < nk")
    }

    /// `jm/(nk)`, the density of `jA`.
    pub fn jfold_density(&self, j: u64) -> DensityTarget {
        DensityTarget::new(j * self.m, self.modulus()).expect("jm ≤ km < nk")
    }
}

pub fn rational_construction(alpha: DensityTarget, k: u64) -> Result<PeriodicSet> {
    Ok(RationalCaseParams::from_target(alpha, k)?.periodic_set())
}

/// `jH mod nk` by brute-force residue sums, checked against `{0, …, jm−2, jm}`.
pub fn jfold_residues(params: &RationalCaseParams, j: u64) -> Result<Vec<u64>> {
    if j < 1 || j > params.k {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ j ≤ {}, got {j}",
            params.k
        )));
    }
    let modulus = params.modulus();
    let mut sums: BTreeSet<u64> = BTreeSet::from([0]);
    for _ in 0..j {
        sums = sums
            .iter()
            .flat_map(|&s| params.residues.iter().map(move |&h| (s + h) % modulus))
            .collect();
    }
    let got: Vec<u64> = sums.into_iter().collect();
    let jm = j * params.m;
    let expected: Vec<u64> = (0..=jm - 2).chain(std::iter::once(jm)).collect();
    if got != expected {
        return Err(Error::ResidueIdentity { j, got });
    }
    Ok(got)
}

/// `jA` for the periodic construction, as a periodic set.
pub fn jfold_periodic(params: &RationalCaseParams, j: u64) -> Result<PeriodicSet> {
    PeriodicSet::new(params.modulus(), jfold_residues(params, j)?)
}

/// A half-open band `[lo, hi)` of fractional parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FracBand {
    pub lo: DensityTarget,
    pub hi: DensityTarget,
}

impl FracBand {
    pub fn new(lo: DensityTarget, hi: DensityTarget) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidParameter(format!("empty band [{lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    /// `[0, t)`.
    pub fn below(t: DensityTarget) -> Result<Self> {
        Self::new(DensityTarget::ZERO, t)
    }

    /// Whether `{nθ} ∈ [lo, hi)`, given `⌊nθ⌋`.
    fn contains(&self, theta: &Theta, n: u64, floor: &BigInt) -> Result<bool> {
        if !self.lo.is_zero() && theta.frac_compare_with_floor(n, floor, self.lo)? == Ordering::Less
        {
            return Ok(false);
        }
        Ok(self.hi.is_one() || theta.frac_compare_with_floor(n, floor, self.hi)? == Ordering::Less)
    }
}

/// `{⌊nθ⌋ : n ≥ 1, {nθ} ∈ band} ∩ [0, N]` for `θ > 1`.
pub fn band_set(theta: &Theta, band: FracBand, horizon: u64) -> Result<GroundSet> {
    if !theta.exceeds_one()? {
        return Err(Error::ThetaTooSmall);
    }
    let mut members = Vec::new();
    for n in 1u64.. {
        let floor = theta.floor_multiple(n)?;
        let value = floor.to_u64().ok_or(Error::Overflow("floor of n·theta"))?;
        if value > horizon {
            break;
        }
        if band.contains(theta, n, &floor)? {
            members.push(value);
        }
    }
    GroundSet::from_elements(horizon, members)
}

fn unit_fraction(j: u64, k: u64) -> Result<DensityTarget> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need k ≥ 2, got {k}")));
    }
    if j < 1 || j > k {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ j ≤ {k}, got {j}"
        )));
    }
    DensityTarget::new(j, k)
}

/// `A = {⌊nθ⌋ : n ≥ 1, {nθ} < 1/k} ∩ [0, N]`.
pub fn beatty_construction(theta: &Theta, k: u64, horizon: u64) -> Result<GroundSet> {
    band_set(theta, FracBand::below(unit_fraction(1, k)?)?, horizon)
}

/// `T_j = {⌊mθ⌋ : m ≥ 1, {mθ} < j/k} ∩ [0, N]`.
pub fn t_j_set(theta: &Theta, j: u64, k: u64, horizon: u64) -> Result<GroundSet> {
    band_set(theta, FracBand::below(unit_fraction(j, k)?)?, horizon)
}

pub const DEFAULT_WITNESS_CAP: u64 = 10_000_000;

/// `ε = 1/(8k)`.
pub fn default_epsilon(k: u64) -> DensityTarget {
    DensityTarget::new(1, 8 * k).expect("k ≥ 1")
}

/// The shift `m_i` of band `i`: `(j−1)·{m_i θ}` lies strictly between
/// `ε/2 + (i+1)ℓ/j − 1/k` and `ε/2 + iℓ/j`, where `ℓ = j/k − ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftWitness {
    pub band: u64,
    pub multiplier: u64,
    /// `⌊m_i θ⌋`.
    pub element: u64,
    pub epsilon: DensityTarget,
    /// Whether `⌊m_i θ⌋ ∈ A`.
    pub in_a: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSummary {
    pub band: u64,
    pub lo: DensityTarget,
    pub hi: DensityTarget,
    pub witness: Option<ShiftWitness>,
    /// Elements of `B_i` on the horizon.
    pub elements: u64,
    /// Elements `⌊Nθ⌋` with `N ≤ (j−1)m_i`, outside the claim.
    pub below_bound: u64,
    pub checked: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseBReport {
    pub j: u64,
    pub k: u64,
    pub epsilon: DensityTarget,
    /// `ℓ/j` with `ℓ = j/k − ε`.
    pub band_width: DensityTarget,
    pub horizon: u64,
    pub bands: Vec<BandSummary>,
    /// Elements of `B` beyond the witness bound that failed a check.
    pub violations: Vec<u64>,
    /// Some `m_i` was not found below the search cap.
    pub inconclusive: bool,
}

impl CaseBReport {
    pub fn passed(&self) -> bool {
        !self.inconclusive
            && self.violations.is_empty()
            && self
                .bands
                .iter()
                .all(|b| b.witness.as_ref().is_some_and(|w| w.in_a))
    }
}

type Q = Ratio<i128>;

fn to_target(x: Q) -> Result<DensityTarget> {
    let p = u64::try_from(*x.numer()).map_err(|_| Error::OutOfRange(x.to_string()))?;
    let q = u64::try_from(*x.denom()).map_err(|_| Error::Overflow("rational denominator"))?;
    DensityTarget::new(p, q)
}

fn target(t: DensityTarget) -> Q {
    Q::new(t.numer() as i128, t.denom() as i128)
}

/// Checks that every element `⌊Nθ⌋` of
/// `B = {⌊Nθ⌋ : ε/2 ≤ {Nθ} < j/k − ε/2}` on the horizon, past its band's
/// witness bound, splits as `⌊(N − (j−1)m_i)θ⌋ + (j−1)⌊m_iθ⌋` with both parts
/// in `A` and lies in `jA`.
pub fn verify_case_b(
    theta: &Theta,
    j: u64,
    k: u64,
    epsilon: DensityTarget,
    horizon: u64,
    witness_cap: u64,
) -> Result<CaseBReport> {
    if k < 2 || j < 2 || j > k {
        return Err(Error::InvalidParameter(format!(
            "need 2 ≤ j ≤ k, got j = {j}, k = {k}"
        )));
    }
    let eps = target(epsilon);
    if eps.is_zero() || eps * Q::from(4 * k as i128) >= Q::from(1) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < ε < 1/(4k), got {epsilon}"
        )));
    }
    if !theta.exceeds_one()? {
        return Err(Error::ThetaTooSmall);
    }
    let (jq, kq) = (j as i128, k as i128);
    let ell = Q::new(jq, kq) - eps;
    let width = ell / jq;
    let half_eps = eps / 2;
    let inv_k = Q::new(1, kq);

    let a = beatty_construction(theta, k, horizon)?;
    let ja = a.iterated_sumset(j as u32)?;
    let a_threshold = to_target(inv_k)?;

    let mut bands = Vec::with_capacity(j as usize);
    let mut frac_bands = Vec::with_capacity(j as usize);
    let mut inconclusive = false;
    for i in 0..j {
        let lo = half_eps + width * (i as i128);
        let hi = half_eps + width * (i as i128 + 1);
        frac_bands.push(FracBand::new(to_target(lo)?, to_target(hi)?)?);
        // (j−1){mθ} ∈ (hi − 1/k, lo)
        let lower = to_target((hi - inv_k) / (jq - 1))?;
        let upper = to_target(lo / (jq - 1))?;
        let mut witness = None;
        for m in 1..=witness_cap {
            let floor = theta.floor_multiple(m)?;
            if theta.frac_compare_with_floor(m, &floor, lower)? == Ordering::Greater
                && theta.frac_compare_with_floor(m, &floor, upper)? == Ordering::Less
            {
                let in_a = theta.frac_compare_with_floor(m, &floor, a_threshold)? == Ordering::Less;
                witness = Some(ShiftWitness {
                    band: i,
                    multiplier: m,
                    element: floor.to_u64().ok_or(Error::Overflow("witness element"))?,
                    epsilon,
                    in_a,
                });
                break;
            }
        }
        inconclusive |= witness.is_none();
        bands.push(BandSummary {
            band: i,
            lo: to_target(lo)?,
            hi: to_target(hi)?,
            witness,
            elements: 0,
            below_bound: 0,
            checked: 0,
        });
    }

    let mut violations = Vec::new();
    for n in 1u64.. {
        let floor = theta.floor_multiple(n)?;
        let value = floor.to_u64().ok_or(Error::Overflow("floor of n·theta"))?;
        if value > horizon {
            break;
        }
        let mut band_index = None;
        for (i, band) in frac_bands.iter().enumerate() {
            if band.contains(theta, n, &floor)? {
                band_index = Some(i);
                break;
            }
        }
        let Some(i) = band_index else { continue };
        let summary = &mut bands[i];
        summary.elements += 1;
        let Some(w) = &summary.witness else { continue };
        let shift = (j - 1) * w.multiplier;
        if n <= shift {
            summary.below_bound += 1;
            continue;
        }
        summary.checked += 1;
        let rest = n - shift;
        let rest_floor = theta.floor_multiple(rest)?;
        let offset = &floor - BigInt::from((j - 1) * w.element);
        // 0 < {nθ} − (j−1){m_iθ} < 1/k, i.e. offset < rest·θ < offset + 1/k.
        let gap_ok = theta.cmp_multiple(rest, &offset, &BigInt::from(1))? == Ordering::Greater
            && theta.cmp_multiple(rest, &(&offset * k + 1u32), &BigInt::from(k))? == Ordering::Less;
        let split_ok = rest_floor == offset;
        let rest_in_a = rest_floor.to_u64().is_some_and(|r| a.contains(r))
            && theta.frac_compare_with_floor(rest, &rest_floor, a_threshold)? == Ordering::Less;
        if !(gap_ok && split_ok && rest_in_a && a.contains(w.element) && ja.contains(value)) {
            violations.push(value);
        }
    }

    Ok(CaseBReport {
        j,
        k,
        epsilon,
        band_width: to_target(width)?,
        horizon,
        bands,
        violations,
        inconclusive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::IrrationalNumber;

    fn alpha(p: u64, q: u64) -> DensityTarget {
        DensityTarget::new(p, q).unwrap()
    }

    fn sqrt2() -> Theta {
        Theta::from(IrrationalNumber::sqrt(2).unwrap())
    }

    #[test]
    fn rational_examples() {
        let p = rational_construction(alpha(1, 2), 2).unwrap();
        assert_eq!((p.modulus(), p.residues()), (12, &[0, 1, 3][..]));
        let params = RationalCaseParams::from_target(alpha(1, 2), 2).unwrap();
        assert_eq!(params.jfold_density(1), alpha(1, 4));
        assert_eq!(params.jfold_density(2), alpha(1, 2));

        let params = RationalCaseParams::from_target(alpha(3, 7), 3).unwrap();
        assert_eq!((params.m(), params.n(), params.modulus()), (3, 7, 21));
        assert_eq!(params.jfold_density(3), alpha(3, 7));

        let params = RationalCaseParams::from_target(alpha(2, 5), 2).unwrap();
        assert_eq!(
            params.periodic_set(),
            PeriodicSet::new(20, vec![0, 1, 2, 4]).unwrap()
        );
        assert_eq!(params.jfold_density(2), alpha(2, 5));
    }

    #[test]
    fn rational_rejects() {
        assert!(rational_construction(DensityTarget::ONE, 2).is_err());
        assert!(rational_construction(DensityTarget::ZERO, 2).is_err());
        assert!(rational_construction(alpha(1, 2), 1).is_err());
        assert!(RationalCaseParams::new(2, 5, 2).is_err());
        assert!(RationalCaseParams::new(5, 5, 2).is_err());
    }

    #[test]
    fn jfold_residue_examples() {
        let params = RationalCaseParams::new(3, 6, 3).unwrap();
        assert_eq!(jfold_residues(&params, 1).unwrap(), vec![0, 1, 3]);
        assert_eq!(jfold_residues(&params, 2).unwrap(), vec![0, 1, 2, 3, 4, 6]);
        assert_eq!(
            jfold_residues(&params, 3).unwrap(),
            vec![0, 1, 2, 3, 4, 5, 6, 7, 9]
        );
        assert!(jfold_residues(&params, 4).is_err());
        assert!(jfold_residues(&params, 0).is_err());
    }

    #[test]
    fn beatty_examples() {
        let t = sqrt2();
        assert_eq!(
            beatty_construction(&t, 2, 10).unwrap().elements(),
            vec![1, 4, 7, 8]
        );
        // {√2} ≈ 0.414 exceeds 1/3, so n = 1 drops out along with n = 6.
        assert_eq!(
            beatty_construction(&t, 3, 10).unwrap().elements(),
            vec![4, 7]
        );
        assert!(beatty_construction(&t, 2, 0).unwrap().is_empty());
        let small = Theta::from(IrrationalNumber::new(0, 1, 2, 2).unwrap());
        assert_eq!(
            beatty_construction(&small, 2, 10),
            Err(Error::ThetaTooSmall)
        );
    }

    #[test]
    fn t_j_examples() {
        let t = sqrt2();
        let full: Vec<u64> = (1..=7).map(|n| (n as f64 * 2f64.sqrt()) as u64).collect();
        assert_eq!(t_j_set(&t, 3, 3, 10).unwrap().elements(), full);
        assert_eq!(
            t_j_set(&t, 1, 3, 10).unwrap(),
            beatty_construction(&t, 3, 10).unwrap()
        );
        let two_a = beatty_construction(&t, 3, 10)
            .unwrap()
            .iterated_sumset(2)
            .unwrap();
        assert!(two_a.is_subset_of(&t_j_set(&t, 2, 3, 10).unwrap()));
        assert!(t_j_set(&t, 4, 3, 10).is_err());
    }

    #[test]
    fn verify_case_b_small() {
        let report =
            verify_case_b(&sqrt2(), 2, 2, alpha(1, 10), 10_000, DEFAULT_WITNESS_CAP).unwrap();
        assert_eq!(report.band_width, alpha(9, 20));
        assert!(report.passed(), "{report:?}");
        assert!(report.bands.iter().all(|b| b.checked > 0));
    }

    #[test]
    fn verify_case_b_preconditions() {
        let t = sqrt2();
        assert!(verify_case_b(&t, 1, 2, alpha(1, 10), 100, 10).is_err());
        assert!(verify_case_b(&t, 3, 2, alpha(1, 10), 100, 10).is_err());
        assert!(verify_case_b(&t, 2, 2, alpha(1, 8), 100, 10).is_err());
        assert!(verify_case_b(&t, 2, 2, DensityTarget::ZERO, 100, 10).is_err());
    }

    #[test]
    fn verify_case_b_cap_is_inconclusive() {
        let report = verify_case_b(&sqrt2(), 3, 3, default_epsilon(3), 1000, 1).unwrap();
        assert!(report.inconclusive);
        assert!(!report.passed());
    }
}
