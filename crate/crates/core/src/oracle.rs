//! Brute-force exact checks.
//!
//! Every scan works on integer residues: for `q = p / D`,
//! `||q x|| = min(r, D - r) / D` with `r = p x mod D`, so minimising a
//! product of distances over `x` is a minimisation of an integer whose
//! denominator does not depend on `x`. Ties go to the smallest `x`, and the
//! parallel reductions order by `(value, x)` so the result does not depend
//! on scheduling.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fib::{fib_u64, fib_unchecked};
use crate::nest::{approximants, Certificate};
use crate::rat::Rat;
use crate::report::{BoundReport, Check};
use crate::surd::{Surd, REPORT_DIGITS};
use crate::{Error, Result};

/// Largest modulus any residue scan accepts (covers `n <= 30`).
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// Exact minimum of `||a x / F_n|| * ||a F_{n-1} x / F_n||` over `1 <= x < F_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinRecord {
    pub n: u32,
    #[serde(with = "crate::rat::biguint_str")]
    pub a: BigUint,
    /// smallest minimiser
    pub x_min: u64,
    pub value: Rat,
    /// `F_n * value`
    pub scaled: Rat,
}

/// Error accounting for a certified scan with approximated `alpha`, `beta`.
///
/// `per_x_error` bounds how far `||alpha x||` (and `||beta x||`) can move
/// from the proxy value for any `x <= x_max`; since both distances are at
/// most `1/2`, the product moves by at most `per_x_error` too.
/// `stage_product_error` is the same bound measured from the scanned
/// level's own approximants instead of the proxy's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub x_max: u64,
    pub per_x_error: Rat,
    pub product_error: Rat,
    pub stage_product_error: Rat,
}

fn scan_modulus(n: u32, cap: u64) -> Result<u64> {
    match fib_u64(n) {
        Some(f) if f <= cap => Ok(f),
        _ => Err(Error::ScanCapExceeded { n, cap }),
    }
}

pub fn min_product(n: u32, a: &BigUint) -> Result<MinRecord> {
    min_product_capped(n, a, DEFAULT_SCAN_CAP)
}

pub fn min_product_capped(n: u32, a: &BigUint, cap: u64) -> Result<MinRecord> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("min_product needs n >= 3, got {n}")));
    }
    let f = scan_modulus(n, cap)?;
    let fb = BigUint::from(f);
    if a.is_zero() || a >= &fb {
        return Err(Error::InvalidArgument(format!("need 1 <= a < F_{n} = {f}, got {a}")));
    }
    if !a.gcd(&fb).is_one() {
        return Err(Error::NotCoprime { n, a: a.to_string() });
    }
    let c1 = a.to_u64().expect("a < F_n");
    let c2 = ((c1 as u128 * fib_u64(n - 1).expect("fits") as u128) % f as u128) as u64;
    let dist = |c: u64, x: u64| {
        let r = (c as u128 * x as u128 % f as u128) as u64;
        r.min(f - r)
    };
    let (p, x_min) =
        (1..f).into_par_iter().map(|x| (dist(c1, x) as u128 * dist(c2, x) as u128, x)).min().expect("F_n >= 2");
    let p = BigUint::from(p);
    Ok(MinRecord { n, a: a.clone(), x_min, value: Rat::ratio(&p, &(&fb * &fb)), scaled: Rat::ratio(&p, &fb) })
}

/// `F_n * min >= 2/(3+sqrt5)`, compared exactly.
pub fn check_q5(n: u32, a: &BigUint) -> Result<BoundReport> {
    let rec = min_product(n, a)?;
    let phi2 = Surd::phi_squared();
    let implied = &Surd::from(rec.scaled.recip()?) - &phi2;
    let eps = if implied.is_nonnegative() { implied } else { Surd::default() };
    Ok(BoundReport::against_theorem_constant(format!("q5 n={n} a={a}"), Surd::from(rec.scaled.clone()))
        .with_witness([rec.x_min])
        .with_note(format!("min value {} at x={}", rec.value, rec.x_min))
        .with_note(format!("implied epsilon {}", eps.to_decimal(REPORT_DIGITS))))
}

/// Minimum of `x^2 |F_{n-1}/F_n - y/x|` over reduced `y/x` with
/// `1 <= x <= x_max`, `0 <= y <= x`, excluding `{F_{k-1}/F_k : 1 <= k <= n}`
/// (`F_0 = 0`); passes when it is at least `1/2`.
pub fn check_q1(n: u32, x_max: u64) -> Result<BoundReport> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("check_q1 needs n >= 3, got {n}")));
    }
    let f = fib_u64(n)
        .filter(|&f| f < 1 << 62)
        .ok_or_else(|| Error::InvalidArgument(format!("F_{n} too large for the q1 scan")))?;
    if x_max < 2 || x_max >= f {
        return Err(Error::InvalidArgument(format!("need 2 <= x_max < F_{n} = {f}, got {x_max}")));
    }
    if x_max > 1_000_000_000 {
        return Err(Error::InvalidArgument(format!("x_max {x_max} too large for the q1 scan")));
    }
    let theta_num = fib_u64(n - 1).expect("fits") as i128;
    let family: Vec<(u64, u64)> = (1..=n)
        .map(|k| {
            let prev = if k == 1 { 0 } else { fib_u64(k - 1).expect("fits") };
            (prev, fib_u64(k).expect("fits"))
        })
        .collect();
    let f = f as i128;
    // x^2 |theta - y/x| = x |F_{n-1} x - y F_n| / F_n; minimise the numerator
    let best = (1..=x_max)
        .into_par_iter()
        .filter_map(|x| {
            (0..=x)
                .filter(|&y| y.gcd(&x) == 1 && !family.contains(&(y, x)))
                .map(|y| {
                    let xi = x as i128;
                    (xi * (theta_num * xi - y as i128 * f).abs(), x, y)
                })
                .min()
        })
        .min();
    let Some((num, x, y)) = best else {
        let check = Check::new("vacuous", true, format!("no reduced fraction outside the family for x <= {x_max}"));
        return Ok(BoundReport::from_checks(format!("q1 n={n} x_max={x_max}"), vec![check]));
    };
    let lhs = Rat::new(BigInt::from(num), BigInt::from(f))?;
    Ok(BoundReport::compare(format!("q1 n={n} x_max={x_max}"), Surd::from(lhs), Surd::from(Rat::frac(1, 2)))
        .with_witness([format!("{y}/{x}")]))
}

/// `|F_{n-1}/F_n - F_{k-1}/F_k|` against `1 / (F_k^2 (phi + 1))`.
///
/// The exact subtraction is cross-checked against the closed form
/// `F_{n-k} / (F_n F_k)` in a `closed_form` check entry.
pub fn gap_convergents(n: u32, k: u32) -> Result<BoundReport> {
    if k < 2 || k >= n {
        return Err(Error::InvalidArgument(format!("need 2 <= k < n, got k={k}, n={n}")));
    }
    let (fn_, fk) = (fib_unchecked(n), fib_unchecked(k));
    let gap = (Rat::ratio(&fib_unchecked(n - 1), &fn_) - Rat::ratio(&fib_unchecked(k - 1), &fk)).abs();
    let closed = Rat::ratio(&fib_unchecked(n - k), &(&fn_ * &fk));
    let fk2 = Rat::from(fk.pow(2));
    // 1/(phi + 1) = phi^-2
    let rhs = &Surd::inv_phi_squared() * &fk2.recip()?;
    let implied = &Surd::from((&gap * &fk2).recip()?) - &Surd::phi_squared();
    let eps = if implied.is_nonnegative() { implied } else { Surd::default() };
    let mut report = BoundReport::compare(format!("q2 n={n} k={k}"), Surd::from(gap.clone()), rhs)
        .with_note(format!("implied epsilon {}", eps.to_decimal(REPORT_DIGITS)));
    report.checks.push(Check::new("closed_form", gap == closed, format!("{gap} = F_(n-k)/(F_n F_k) = {closed}")));
    Ok(report)
}

/// `Q * min_{1 <= x < Q} l_alpha(x) l_beta(x)` where
/// `l(x) = max(0, ||p x|| - x err)` lower-bounds `||t x||` for every `t`
/// within `err` of `p`. Returns the certified value and its minimiser.
pub fn certified_scan(q: u64, alpha: &Rat, beta: &Rat, err: &Rat) -> Result<(Rat, u64)> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("need Q >= 2, got {q}")));
    }
    if err.is_negative() {
        return Err(Error::InvalidArgument("negative error".into()));
    }
    let (pa, da) = (alpha.numer().mod_floor(alpha.denom()), alpha.denom().clone());
    let (pb, db) = (beta.numer().mod_floor(beta.denom()), beta.denom().clone());
    let (en, ed) = (err.numer().clone(), err.denom().clone());
    // l(x) = max(0, min(r, D - r) * ed - x * en * D) / (D * ed)
    let lower = |p: &BigInt, d: &BigInt, x: &BigInt| -> BigInt {
        let r = (p * x).mod_floor(d);
        let near = (d - &r).min(r);
        let v = near * &ed - x * &en * d;
        if v.is_negative() {
            BigInt::zero()
        } else {
            v
        }
    };
    let (num, x) = (1..q)
        .into_par_iter()
        .map(|x| {
            let xb = BigInt::from(x);
            (lower(&pa, &da, &xb) * lower(&pb, &db, &xb), x)
        })
        .min()
        .expect("Q >= 2");
    let denom = &da * &db * &ed * &ed;
    Ok((Rat::new(num * BigInt::from(q), denom)?, x))
}

/// Certified lower bound on the uniform Littlewood quantity at
/// `Q = F_{n_level}`, with `alpha`, `beta` replaced by the approximants of
/// a deeper `proxy_level` and the replacement error charged per `x`.
pub fn littlewood_lower_bound(cert: &Certificate, level: usize, proxy_level: usize) -> Result<BoundReport> {
    littlewood_lower_bound_capped(cert, level, proxy_level, DEFAULT_SCAN_CAP)
}

pub fn littlewood_lower_bound_capped(
    cert: &Certificate,
    level: usize,
    proxy_level: usize,
    cap: u64,
) -> Result<BoundReport> {
    let stages = cert.stages.len();
    if level == 0 || level >= stages || proxy_level <= level || proxy_level >= stages {
        return Err(Error::LevelOutOfRange { level: proxy_level.max(level), stages });
    }
    let stage = &cert.stages[level];
    let q = scan_modulus(stage.n, cap)?;
    let (pa, pb, err) = approximants(cert, proxy_level)?;
    let x_max = q - 1;
    let per_x_error = Rat::from(x_max as i64) * &err;
    if per_x_error >= Rat::frac(1, 2) {
        return Err(Error::ProxyTooShallow { proxy: proxy_level, budget: per_x_error.to_string() });
    }
    let (lhs, x) = certified_scan(q, &pa, &pb, &err)?;
    let budget = ErrorBudget {
        x_max,
        product_error: per_x_error.clone(),
        per_x_error,
        stage_product_error: Rat::from(x_max as i64) * stage.window(),
    };
    let mut report = BoundReport::against_theorem_constant(
        format!("littlewood level={level} proxy={proxy_level} Q={q}"),
        Surd::from(lhs),
    )
    .with_witness([x])
    .with_note(format!("alpha ~ {} , beta ~ {}, err {}", pa, pb, err));
    report.budget = Some(budget);
    Ok(report)
}

/// Star discrepancy of `{F_{n-1} x / F_n}`, `x = 1..count`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub n: u32,
    pub count: u64,
    pub dstar: Rat,
    /// `count * dstar`
    pub scaled: Rat,
    /// `count * dstar / ln(count + 1)`, floating point
    pub log_ratio: f64,
}

impl DiscrepancyRecord {
    /// Passes when `log_ratio <= cap`.
    pub fn report(&self, cap: &Rat) -> BoundReport {
        let ratio = Rat::from_f64(self.log_ratio).unwrap_or_else(|| Rat::from_int(i64::MAX));
        BoundReport::compare(
            format!("discrepancy n={} N={}", self.n, self.count),
            Surd::from(cap.clone()),
            Surd::from(ratio),
        )
        .with_note(format!("D* = {} ({})", self.dstar, self.dstar.to_decimal(12)))
        .with_note(format!("N D* = {}", self.scaled))
        .with_note(format!("N D* / ln(N+1) = {:.6}", self.log_ratio))
    }
}

pub fn star_discrepancy(n: u32, count: u64) -> Result<DiscrepancyRecord> {
    star_discrepancy_capped(n, count, DEFAULT_SCAN_CAP)
}

pub fn star_discrepancy_capped(n: u32, count: u64, cap: u64) -> Result<DiscrepancyRecord> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let f = scan_modulus(n, cap)?;
    if count == 0 || count >= f {
        return Err(Error::InvalidArgument(format!("need 1 <= N < F_{n} = {f}, got {count}")));
    }
    let c = fib_u64(n - 1).expect("fits") as u128;
    let mut residues: Vec<u128> = (1..=count as u128).map(|x| c * x % f as u128).collect();
    residues.par_sort_unstable();
    let (fw, nw) = (f as u128, count as u128);
    // over the common denominator F * N
    let worst = residues
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let i = i as u128;
            (r * nw).abs_diff(i * fw).max(((i + 1) * fw).abs_diff(r * nw))
        })
        .max()
        .expect("count >= 1");
    let dstar = Rat::new(BigInt::from(worst), BigInt::from(fw * nw))?;
    Ok(record(n, count, dstar))
}

fn record(n: u32, count: u64, dstar: Rat) -> DiscrepancyRecord {
    let scaled = &dstar * Rat::from(count as i64);
    let log_ratio = scaled.to_f64() / ((count + 1) as f64).ln();
    DiscrepancyRecord { n, count, dstar, scaled, log_ratio }
}

/// Star discrepancy of arbitrary points in `[0, 1)` by the sorted-points
/// formula `max_i max(|x_(i) - (i-1)/N|, |i/N - x_(i)|)`.
pub fn star_discrepancy_points(points: &[Rat]) -> Result<Rat> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no points".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    let count = Rat::from(sorted.len() as i64);
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let below = Rat::from(i as i64) / &count;
            let above = Rat::from(i as i64 + 1) / &count;
            (x - below).abs().max((above - x).abs())
        })
        .max()
        .expect("nonempty"))
}
