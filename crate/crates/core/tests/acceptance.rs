//! Acceptance criteria 1-7. Prints one line per criterion and exits nonzero
//! if any fails.

use std::time::{Duration, Instant};

use sumset_density::cli::suites::{self, Check, Status};
use sumset_density::constructions;
use sumset_density::greedy;
use sumset_density::{DensityTarget, FiniteSet, IrrationalNumber, Theta};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type RegressionCase = (&'static [u64], (u64, u64), u64, Vec<u64>);

fn summarize(checks: &[Check]) -> Outcome {
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| format!("{} [{}] {}", c.name, c.status, c.detail))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} checks", checks.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn within(elapsed: Duration, limit: Duration, ok: Outcome) -> Outcome {
    let detail = ok?;
    if elapsed > limit {
        Err(format!(
            "{detail}, but took {elapsed:.2?} (limit {limit:?})"
        ))
    } else {
        Ok(format!("{detail} in {elapsed:.2?}"))
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let checks = suites::case_a().map_err(|e| e.to_string())?;
    within(start.elapsed(), Duration::from_secs(1), summarize(&checks))
}

fn criterion_2() -> Outcome {
    const HORIZON: u64 = 1_000_000;
    const TOLERANCE: f64 = 2e-3;
    let start = Instant::now();
    let mut worst = 0f64;
    for theta in [
        IrrationalNumber::sqrt(2).unwrap(),
        IrrationalNumber::golden_ratio(),
    ] {
        let alpha = 1.0 / theta.to_f64();
        let theta = Theta::from(theta);
        for k in [2u64, 3] {
            let a = constructions::beatty_construction(&theta, k, HORIZON)
                .map_err(|e| e.to_string())?;
            let mut ja = a.clone();
            for j in 1..=k {
                if j > 1 {
                    ja = ja.sum(&a);
                }
                let ratio = ja.counting(HORIZON as i64).unwrap() as f64 / HORIZON as f64;
                let err = (ratio - j as f64 * alpha / k as f64).abs();
                worst = worst.max(err);
                if err > TOLERANCE {
                    return Err(format!(
                        "theta={theta} k={k} j={j}: ratio {ratio:.6}, error {err:.2e}"
                    ));
                }
                let t = constructions::t_j_set(&theta, j, k, HORIZON).map_err(|e| e.to_string())?;
                let outside = ja.missing_from(&t);
                if !outside.is_empty() {
                    return Err(format!(
                        "theta={theta} k={k} j={j}: {} elements of jA outside T_j",
                        outside.len()
                    ));
                }
            }
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(30),
        Ok(format!("max error {worst:.2e}")),
    )
}

fn criterion_3() -> Outcome {
    let theta = Theta::from(IrrationalNumber::sqrt(2).unwrap());
    let epsilon = DensityTarget::new(1, 10).unwrap();
    let checks = suites::case_b(
        &theta,
        2,
        2,
        epsilon,
        10_000,
        constructions::DEFAULT_WITNESS_CAP,
    )
    .map_err(|e| e.to_string())?;
    summarize(&checks)
}

fn criterion_4() -> Outcome {
    const HORIZON: u64 = 100_000;
    let (bs, alphas) = suites::greedy_matrix();
    let mut total = 0;
    let mut slowest = Duration::ZERO;
    for b in &bs {
        for &alpha in &alphas {
            let start = Instant::now();
            let checks = suites::greedy_cell(b, alpha, HORIZON).map_err(|e| e.to_string())?;
            let elapsed = start.elapsed();
            slowest = slowest.max(elapsed);
            total += checks.len();
            within(elapsed, Duration::from_secs(10), summarize(&checks))?;
        }
    }
    Ok(format!("{total} checks, slowest cell {slowest:.2?}"))
}

fn criterion_5() -> Outcome {
    let cases: [RegressionCase; 2] = [
        (&[0], (1, 2), 20, (0..=20).step_by(2).collect()),
        (&[0, 1], (1, 2), 12, vec![3, 7, 11]),
    ];
    for (b, (p, q), horizon, expected) in cases {
        let b = FiniteSet::new(b.to_vec()).unwrap();
        let got = greedy::build_greedy(&b, DensityTarget::new(p, q).unwrap(), horizon)
            .map_err(|e| e.to_string())?
            .elements();
        if got != expected {
            return Err(format!("B={:?} alpha={p}/{q}: got {got:?}", b.elements()));
        }
    }
    Ok("2 vectors".into())
}

fn criterion_6() -> Outcome {
    summarize(&suites::oracle(2019).map_err(|e| e.to_string())?)
}

fn criterion_7() -> Outcome {
    summarize(&suites::auxiliary(1_000_000, 2019).map_err(|e| e.to_string())?)
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 case A exact densities", criterion_1),
        ("2 case B convergence", criterion_2),
        ("3 case B decomposition", criterion_3),
        ("4 greedy invariants", criterion_4),
        ("5 regression vectors", criterion_5),
        ("6 oracle equivalence", criterion_6),
        ("7 auxiliary results", criterion_7),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
