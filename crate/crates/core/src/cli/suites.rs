//! Verification suites behind `verify --suite <name>`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::{self, RationalCaseParams};
use crate::error::Result;
use crate::greedy;
use crate::numeric::{DensityTarget, IrrationalNumber, Theta};
use crate::oracle;
use crate::sets::{FiniteSet, GroundSet, PeriodicSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }
}

/// 0 when everything passed, 1 on any failure, otherwise 3.
pub fn exit_code(checks: &[Check]) -> i32 {
    if checks.iter().any(|c| c.status == Status::Fail) {
        1
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        3
    } else {
        0
    }
}

pub const CASE_A_MATRIX: [(u64, u64, u64); 5] =
    [(1, 2, 2), (1, 2, 3), (2, 5, 2), (3, 7, 3), (5, 6, 4)];

fn residues_mod(set: &GroundSet, modulus: u64) -> Vec<u64> {
    let mut r: Vec<u64> = set.iter().map(|x| x % modulus).collect();
    r.sort_unstable();
    r.dedup();
    r
}

pub fn case_a() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (p, q, k) in CASE_A_MATRIX {
        let alpha = DensityTarget::new(p, q)?;
        let params = RationalCaseParams::from_target(alpha, k)?;
        let modulus = params.modulus();
        let a = params.periodic_set().materialize(10 * modulus);
        for j in 1..=k {
            let name = format!("case-a alpha={alpha} k={k} j={j}");
            let residues = match constructions::jfold_residues(&params, j) {
                Ok(r) => r,
                Err(e) => {
                    checks.push(Check::new(name, false, e.to_string()));
                    continue;
                }
            };
            let density = params.jfold_density(j);
            let expected = DensityTarget::new(j * p, q * k)?;
            let ja = a.iterated_sumset(j as u32)?;
            let materialized = residues_mod(&ja, modulus);
            let count = ja.counting((10 * modulus) as i64)?;
            let ok = density == expected
                && materialized == residues
                && count == 10 * residues.len() as u64;
            checks.push(Check::new(
                name,
                ok,
                format!("density {density} (expect {expected}), |jH| = {}, count over 10 periods {count}", residues.len()),
            ));
        }
    }
    Ok(checks)
}

pub fn case_b(
    theta: &Theta,
    j: u64,
    k: u64,
    epsilon: DensityTarget,
    horizon: u64,
    cap: u64,
) -> Result<Vec<Check>> {
    let report = constructions::verify_case_b(theta, j, k, epsilon, horizon, cap)?;
    let mut checks = Vec::new();
    for band in &report.bands {
        let name = format!("case-b band {} [{}, {})", band.band, band.lo, band.hi);
        match &band.witness {
            None => checks.push(Check {
                name,
                status: Status::Inconclusive,
                detail: format!("no witness below cap {cap}"),
            }),
            Some(w) => checks.push(Check::new(
                name,
                w.in_a,
                format!(
                    "m_i = {}, floor(m_i theta) = {} in A: {}; {} checked, {} below bound",
                    w.multiplier, w.element, w.in_a, band.checked, band.below_bound
                ),
            )),
        }
    }
    checks.push(Check::new(
        format!("case-b decomposition j={j} k={k} eps={epsilon} N={horizon}"),
        report.violations.is_empty(),
        format!("{} violations", report.violations.len()),
    ));
    Ok(checks)
}

pub fn greedy_cell(b: &FiniteSet, alpha: DensityTarget, horizon: u64) -> Result<Vec<Check>> {
    let label = format!("greedy B={:?} alpha={alpha} N={horizon}", b.elements());
    let build = greedy::build_greedy_traced(b, alpha, horizon)?;
    let (p, q) = (alpha.numer() as u128, alpha.denom() as u128);
    let sums = build.set.sumset(b);

    let mut worst = None;
    for n in 1..=horizon {
        if sums.counting(n as i64)? as u128 * q > p * n as u128 {
            worst = Some(n);
            break;
        }
    }
    let mut checks = vec![Check::new(
        format!("{label} upper invariant"),
        worst.is_none(),
        worst.map_or("(A+B)(n)·q ≤ p·n for all n".into(), |n| {
            format!("fails at n = {n}")
        }),
    )];

    let (k, bn) = (build.b_normalized.k() as u128, b.b());
    let bound_failure = build
        .steps
        .iter()
        .find(|s| (s.element as u128) * p > k * s.index as u128 * q + (p - 1));
    checks.push(Check::new(
        format!("{label} element bounds"),
        bound_failure.is_none(),
        bound_failure.map_or(
            format!("{} steps within ⌈k·m/α⌉", build.steps.len()),
            |s| format!("a_{} = {} exceeds bound", s.index, s.element),
        ),
    ));

    let ratio = sums.counting(horizon as i64)? as f64 / horizon as f64;
    let floor = alpha.to_f64() - (b.k() + bn + 1) as f64 / (horizon as f64).sqrt();
    checks.push(Check::new(
        format!("{label} convergence"),
        ratio >= floor,
        format!("(A+B)(N)/N = {ratio:.6} ≥ {floor:.6}"),
    ));

    let violations = greedy::check_ratio_monotone(&build.normalized, &build.b_normalized)?;
    checks.push(Check::new(
        format!("{label} ratio monotone"),
        violations.is_empty(),
        format!("{} violations", violations.len()),
    ));
    Ok(checks)
}

pub fn greedy_matrix() -> (Vec<FiniteSet>, Vec<DensityTarget>) {
    let bs = [&[0u64][..], &[0, 1], &[0, 3], &[0, 1, 5], &[2, 5]]
        .iter()
        .map(|xs| FiniteSet::new(xs.to_vec()).unwrap())
        .collect();
    let alphas = [(1, 2), (1, 3), (11, 20)]
        .iter()
        .map(|&(p, q)| DensityTarget::new(p, q).unwrap())
        .collect();
    (bs, alphas)
}

pub fn oracle(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    const INSTANCES: usize = 200;
    for i in 0..INSTANCES {
        let horizon = rng.gen_range(1..=2000u64);
        let density = rng.gen_range(0.001..0.2);
        let a: Vec<u64> = (0..=horizon).filter(|_| rng.gen_bool(density)).collect();
        let b_len = rng.gen_range(1..=6);
        let b: Vec<u64> = (0..b_len)
            .map(|_| rng.gen_range(0..=horizon.min(300)))
            .collect();
        let j = rng.gen_range(1..=4u32);

        let set = GroundSet::from_elements(horizon, a.iter().copied())?;
        let bset = FiniteSet::new(b.clone())?;
        if set.sumset(&bset).elements() != oracle::naive_sumset(&a, &b, horizon) {
            mismatches.push(format!("instance {i}: sumset"));
        }
        if set.iterated_sumset(j)?.elements() != oracle::naive_jfold(&a, j, horizon) {
            mismatches.push(format!("instance {i}: {j}-fold"));
        }
    }
    let mut checks = vec![Check::new(
        format!("oracle kernels ({INSTANCES} random instances, seed {seed})"),
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "all agree".to_string()
        } else {
            mismatches.join("; ")
        },
    )];
    let (bs, alphas) = greedy_matrix();
    for b in &bs {
        for &alpha in &alphas {
            let fast = greedy::build_greedy(b, alpha, 500)?.elements();
            let slow = oracle::naive_greedy(b.elements(), alpha.numer(), alpha.denom(), 500);
            checks.push(Check::new(
                format!("oracle greedy B={:?} alpha={alpha} N=500", b.elements()),
                fast == slow,
                format!("{} elements", slow.len()),
            ));
        }
    }
    Ok(checks)
}

pub fn auxiliary(horizon: u64, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..100 {
        let n = rng.gen_range(10..=5000u64);
        let p = rng.gen_range(0.05..0.95);
        let set = GroundSet::from_elements(n, (0..=n).filter(|_| rng.gen_bool(p)))?;
        for (rank, a) in set.iter().filter(|&a| a >= 1).enumerate() {
            if set.counting(a as i64)? != rank as u64 + 1 {
                bad += 1;
            }
        }
    }
    checks.push(Check::new(
        "index/ratio agreement at elements (100 sets)",
        bad == 0,
        format!("{bad} mismatches"),
    ));

    let theta = Theta::from(IrrationalNumber::sqrt(2)?);
    let root2 = std::f64::consts::SQRT_2;
    let evens = PeriodicSet::new(2, vec![0])?.materialize(horizon);
    let scaled_horizon = theta.floor_mul(horizon)?;
    let scaled = evens.floor_scale(&theta, scaled_horizon)?;
    let ratio = scaled.counting(scaled_horizon as i64)? as f64 / scaled_horizon as f64;
    let target = 0.5 / root2;
    checks.push(Check::new(
        "floor scaling of the even numbers by sqrt 2",
        (ratio - target).abs() <= 1e-2,
        format!("{ratio:.6} vs {target:.6}"),
    ));

    for (lo, hi) in [((0, 1), (1, 2)), ((0, 1), (1, 3)), ((1, 4), (1, 2))] {
        let band = constructions::FracBand::new(
            DensityTarget::new(lo.0, lo.1)?,
            DensityTarget::new(hi.0, hi.1)?,
        )?;
        let set = constructions::band_set(&theta, band, horizon)?;
        let ratio = set.counting(horizon as i64)? as f64 / horizon as f64;
        let target = (band.hi.to_f64() - band.lo.to_f64()) / root2;
        checks.push(Check::new(
            format!("fractional band [{}, {}) for sqrt 2", band.lo, band.hi),
            (ratio - target).abs() <= 1e-2,
            format!("{ratio:.6} vs {target:.6}"),
        ));
    }
    Ok(checks)
}
