//! Finite-horizon density estimates.
//!
//! Limits are not observable at a finite horizon, so a report only brackets
//! them: the min and max of `X(x)/x` over a tail window `[w·N, N]`, and the same
//! bracket for `k/a_k` taken at the elements in that window.

use std::cmp::Ordering;
use std::io::Write;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::DensityTarget;
use crate::sets::{GroundSet, PeriodicSet};

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.5;
pub const DEFAULT_GRID: usize = 1024;

/// One point `(x, X(x))` of the ratio curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RatioSample {
    pub x: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub horizon: u64,
    pub window_fraction: f64,
    pub ratio_curve: Vec<RatioSample>,
    pub tail_lower: f64,
    pub tail_upper: f64,
    pub index_lower: Option<f64>,
    pub index_upper: Option<f64>,
    pub exact_density: Option<DensityTarget>,
    /// Set when an exact density is known but falls outside the tail bracket.
    pub inconclusive: bool,
}

/// An exact ratio `num/den` with `den ≥ 1`.
#[derive(Clone, Copy, Debug)]
struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    fn cmp(&self, other: &Ratio) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }

    fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Default)]
struct Bracket {
    lower: Option<Ratio>,
    upper: Option<Ratio>,
}

impl Bracket {
    fn push(&mut self, r: Ratio) {
        if self.lower.is_none_or(|l| r.cmp(&l) == Ordering::Less) {
            self.lower = Some(r);
        }
        if self.upper.is_none_or(|u| r.cmp(&u) == Ordering::Greater) {
            self.upper = Some(r);
        }
    }
}

fn window_start(horizon: u64, window_fraction: f64) -> Result<u64> {
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "window fraction {window_fraction} not in (0, 1)"
        )));
    }
    if horizon < 1 {
        return Err(Error::InvalidParameter("empty tail window".into()));
    }
    Ok(((horizon as f64 * window_fraction).ceil() as u64).clamp(1, horizon))
}

/// Grid points `⌈i·N/grid⌉` for `i = 1..=grid`, deduplicated.
fn grid_points(horizon: u64, grid: usize) -> Vec<u64> {
    let mut xs: Vec<u64> = (1..=grid as u64)
        .map(|i| (i as u128 * horizon as u128).div_ceil(grid as u128) as u64)
        .filter(|&x| x >= 1)
        .collect();
    xs.dedup();
    xs
}

pub fn density_report(x: &GroundSet, window_fraction: f64, grid: usize) -> Result<DensityReport> {
    let horizon = x.horizon();
    let start = window_start(horizon, window_fraction)?;
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive".into()));
    }
    let ratio_curve = grid_points(horizon, grid)
        .into_iter()
        .map(|g| RatioSample {
            x: g,
            count: x.counting(g as i64).expect("grid within horizon"),
        })
        .collect();

    let mut tail = Bracket::default();
    let mut count = x.counting(start as i64 - 1)?;
    for n in start..=horizon {
        count += x.contains(n) as u64;
        tail.push(Ratio { num: count, den: n });
    }
    let (index_lower, index_upper) = match index_density(x, window_fraction) {
        Ok((lo, hi)) => (Some(lo), Some(hi)),
        Err(Error::TooFewElements(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(DensityReport {
        horizon,
        window_fraction,
        ratio_curve,
        tail_lower: tail.lower.expect("nonempty window").to_f64(),
        tail_upper: tail.upper.expect("nonempty window").to_f64(),
        index_lower,
        index_upper,
        exact_density: None,
        inconclusive: false,
    })
}

/// Report on `P ∩ [0, N]` carrying the exact density of `P`.
pub fn periodic_density_report(
    p: &PeriodicSet,
    horizon: u64,
    window_fraction: f64,
    grid: usize,
) -> Result<DensityReport> {
    let mut report = density_report(&p.materialize(horizon), window_fraction, grid)?;
    let exact = exact_density(p);
    report.inconclusive =
        !(report.tail_lower <= exact.to_f64() && exact.to_f64() <= report.tail_upper);
    report.exact_density = Some(exact);
    Ok(report)
}

/// Min and max of `k/a_k` over elements `a_k ≥ 1` in the tail window, `k`
/// being the 1-based rank among elements `≥ 1`.
pub fn index_density(x: &GroundSet, window_fraction: f64) -> Result<(f64, f64)> {
    let start = window_start(x.horizon(), window_fraction)?;
    let mut bracket = Bracket::default();
    let mut seen = 0usize;
    let before = x.counting(start as i64 - 1)?;
    for (rank, a) in (before + 1..).zip(x.iter().skip_while(|&a| a < start)) {
        seen += 1;
        bracket.push(Ratio { num: rank, den: a });
    }
    if seen < 2 {
        return Err(Error::TooFewElements(seen));
    }
    Ok((
        bracket.lower.unwrap().to_f64(),
        bracket.upper.unwrap().to_f64(),
    ))
}

pub fn exact_density(p: &PeriodicSet) -> DensityTarget {
    p.exact_density()
}

impl DensityReport {
    /// Ratio curve as CSV with header `x,count,ratio_num,ratio_den`; the ratio
    /// is `count/x` in lowest terms.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,count,ratio_num,ratio_den")?;
        for s in &self.ratio_curve {
            let g = s.count.gcd(&s.x);
            writeln!(out, "{},{},{},{}", s.x, s.count, s.count / g, s.x / g)?;
        }
        Ok(())
    }
}
