//! Coprime numerator search: given `n` and target windows `I`, `J`, find
//! `a` with `a/F_n in I`, `{F_{n-1} a / F_n} in J`, `1 <= a < F_n` and
//! `gcd(a, F_n) = 1`.
//!
//! Two strategies:
//! - `brute` scans every position in `I` in increasing order.
//! - `two_scale` looks for `a_0` in the left half of `I` whose rotation lands
//!   in the middle third of `J`, then shifts it by multiples of `F_{k*}` until
//!   it is coprime to `F_n`. Each shift moves the rotation by only
//!   `+-F_{n-k*}/F_n`, so the margins absorb the drift.
//!
//! Failure is an ordinary outcome (`Ok(None)`): the existence statement is
//! only asymptotic, so callers raise `n` and retry.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::fib::{fib_u64, fib_unchecked};
use crate::rat::{frac, Anchor, Rat, UnitInterval};
use crate::report::{BoundReport, Check};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Brute,
    TwoScale,
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Brute => "brute",
            Strategy::TwoScale => "two_scale",
            Strategy::Auto => "auto",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Strategy::Brute),
            "two_scale" | "two-scale" => Ok(Strategy::TwoScale),
            "auto" => Ok(Strategy::Auto),
            _ => Err(Error::Parse(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub strategy: Strategy,
    /// Largest candidate range `brute` will scan.
    pub brute_cap: u64,
    /// Largest shift count in the coprimality adjustment.
    pub j_max: u64,
    /// Exponent in `j = O(F_n^sigma)`; only used by [`SearchConfig::sized_for`].
    pub sigma_hint: Rat,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { strategy: Strategy::Auto, brute_cap: 10_000_000, j_max: 64, sigma_hint: Rat::frac(1, 4) }
    }
}

impl SearchConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SearchConfig { strategy, ..SearchConfig::default() }
    }

    /// Copy with `j_max = max(j_max, ceil(F_n^sigma))`.
    pub fn sized_for(&self, n: u32) -> SearchConfig {
        let bits = fib_unchecked(n).bits() as f64;
        let scaled = (bits * std::f64::consts::LN_2 * self.sigma_hint.to_f64()).exp().ceil();
        let j = if scaled.is_finite() { scaled as u64 } else { u64::MAX };
        SearchConfig { j_max: self.j_max.max(j), ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.brute_cap == 0 {
            return Err(Error::InvalidArgument("brute_cap must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaWitness {
    pub n: u32,
    pub a: BigUint,
    /// `a / F_n`
    pub alpha_n: Rat,
    /// `{F_{n-1} a / F_n}`
    pub beta_n: Rat,
    pub strategy_used: Strategy,
}

impl LemmaWitness {
    pub fn new(n: u32, a: BigUint, strategy_used: Strategy) -> Self {
        let (alpha_n, beta_n) = rotation_pair(n, &a);
        LemmaWitness { n, a, alpha_n, beta_n, strategy_used }
    }
}

/// `(a / F_n, {F_{n-1} a / F_n})`.
pub fn rotation_pair(n: u32, a: &BigUint) -> (Rat, Rat) {
    let f = fib_unchecked(n);
    let alpha = Rat::ratio(a, &f);
    let beta = if n >= 2 { frac(&Rat::ratio(&(fib_unchecked(n - 1) * a), &f)) } else { Rat::zero() };
    (alpha, beta)
}

/// `k` in `[2, n)` coprime to `n` and closest to `n/2`, ties to the larger.
pub fn select_kstar(n: u32) -> Result<u32> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("select_kstar needs n >= 4, got {n}")));
    }
    (2..n)
        .filter(|k| k.gcd(&n) == 1)
        // |k - n/2| compared as |2k - n|
        .min_by_key(|&k| ((2 * k as i64 - n as i64).abs(), std::cmp::Reverse(k)))
        .ok_or_else(|| Error::InvalidArgument(format!("no k coprime to {n}")))
}

/// Integer positions `a` with `a / F_n in iv`, clamped to `[1, F_n - 1]`.
fn position_range(f: &BigUint, iv: &UnitInterval) -> Option<(BigUint, BigUint)> {
    let fr = Rat::from(f.clone());
    let lo = (iv.lo() * &fr).ceil().to_biguint()?.max(BigUint::one());
    let hi = (iv.hi() * &fr).floor().to_biguint()?.min(f - 1u32);
    (lo <= hi && !f.is_zero()).then_some((lo, hi))
}

/// Residues `r` in `[0, F_n)` with `r / F_n in iv`.
fn residue_range(f: &BigUint, iv: &UnitInterval) -> Option<(BigUint, BigUint)> {
    let fr = Rat::from(f.clone());
    let lo = (iv.lo() * &fr).ceil().to_biguint()?;
    let hi = (iv.hi() * &fr).floor().to_biguint()?.min(f - 1u32);
    (lo <= hi).then_some((lo, hi))
}

/// Exhaustive scan of the positions in `i`, smallest qualifying `a` first.
pub fn find_brute(n: u32, i: &UnitInterval, j: &UnitInterval, cfg: &SearchConfig) -> Result<Option<LemmaWitness>> {
    cfg.validate()?;
    if n < 2 {
        return Ok(None);
    }
    let f = fib_unchecked(n);
    let (Some((lo, hi)), Some((rlo, rhi))) = (position_range(&f, i), residue_range(&f, j)) else {
        return Ok(None);
    };
    let count = &hi - &lo + 1u32;
    if count > BigUint::from(cfg.brute_cap) {
        return Err(Error::RangeTooLarge { count: count.to_string(), cap: cfg.brute_cap });
    }
    let a = match (fib_u64(n), fib_u64(n - 1)) {
        (Some(f64_), Some(c)) => scan_u64(f64_, c, &lo, &hi, &rlo, &rhi),
        _ => scan_big(&f, &fib_unchecked(n - 1), &lo, &hi, &rlo, &rhi),
    };
    Ok(a.map(|a| LemmaWitness::new(n, a, Strategy::Brute)))
}

fn scan_u64(f: u64, c: u64, lo: &BigUint, hi: &BigUint, rlo: &BigUint, rhi: &BigUint) -> Option<BigUint> {
    let as_u64 = |x: &BigUint| x.to_u64().expect("below F_n");
    let (lo, hi, rlo, rhi) = (as_u64(lo), as_u64(hi), as_u64(rlo), as_u64(rhi));
    let mut r = ((c as u128 * lo as u128) % f as u128) as u64;
    for a in lo..=hi {
        if (rlo..=rhi).contains(&r) && a.gcd(&f) == 1 {
            return Some(BigUint::from(a));
        }
        r = ((r as u128 + c as u128) % f as u128) as u64;
    }
    None
}

fn scan_big(f: &BigUint, c: &BigUint, lo: &BigUint, hi: &BigUint, rlo: &BigUint, rhi: &BigUint) -> Option<BigUint> {
    let mut r = (c * lo) % f;
    let mut a = lo.clone();
    while &a <= hi {
        if &r >= rlo && &r <= rhi && a.gcd(f).is_one() {
            return Some(a);
        }
        r += c;
        if &r >= f {
            r -= f;
        }
        a += 1u32;
    }
    None
}

/// Smallest `x >= 0` with `l <= (a x mod m) <= r`, for `0 <= l <= r < m`.
///
/// Euclidean descent on `(a, m)`; for `a = F_{n-1}`, `m = F_n` each level
/// steps one rung down the Fibonacci ladder.
fn first_hit(a: &BigUint, m: &BigUint, l: &BigUint, r: &BigUint) -> Option<BigUint> {
    if l.is_zero() {
        return Some(BigUint::zero());
    }
    let a = a % m;
    if a.is_zero() {
        return None;
    }
    let x = l.div_ceil(&a);
    if &(&a * &x) <= r {
        return Some(x);
    }
    // [l, r] sits strictly between consecutive multiples of a; solve for the
    // wrap count y of a*x = m*y + v, v in [l, r]
    let l2 = &a - (r % &a);
    let r2 = &a - (l % &a);
    let y = first_hit(&(m % &a), &a, &l2, &r2)?;
    Some((l + m * y).div_ceil(&a))
}

/// Smallest `t >= 0` with `(c t + b) mod m` in `[l, r]`.
fn first_hit_offset(c: &BigUint, b: &BigUint, m: &BigUint, l: &BigUint, r: &BigUint) -> Option<BigUint> {
    let b = b % m;
    let shift = |v: &BigUint| (v + m - &b) % m;
    let (ls, rs) = (shift(l), shift(r));
    if ls <= rs {
        first_hit(c, m, &ls, &rs)
    } else {
        // window wraps past zero
        let tail = first_hit(c, m, &ls, &(m - 1u32));
        let head = first_hit(c, m, &BigUint::zero(), &rs);
        match (tail, head) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Constructive search: middle third of `J` from the left half of `I`,
/// then coprimality by shifting along `F_{k*}`.
pub fn find_two_scale(n: u32, i: &UnitInterval, j: &UnitInterval, cfg: &SearchConfig) -> Result<Option<LemmaWitness>> {
    cfg.validate()?;
    let eta = i.len();
    if eta != j.len() || !eta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "two_scale needs equal positive lengths, got |I|={eta}, |J|={}",
            j.len()
        )));
    }
    if n < 2 {
        return Ok(None);
    }
    let f = fib_unchecked(n);
    let c = fib_unchecked(n - 1);
    let positions = i.trim(&Rat::frac(1, 2), Anchor::Left)?;
    let window = j.trim(&Rat::frac(1, 3), Anchor::Middle)?;
    let (Some((lo, hi)), Some((rlo, rhi))) = (position_range(&f, &positions), residue_range(&f, &window)) else {
        return Ok(None);
    };
    let start = (&c * &lo) % &f;
    let Some(t) = first_hit_offset(&c, &start, &f, &rlo, &rhi) else {
        return Ok(None);
    };
    let a0 = &lo + t;
    if a0 > hi {
        return Ok(None);
    }
    let accept = |a: &BigUint| {
        let w = LemmaWitness::new(n, a.clone(), Strategy::TwoScale);
        verify_witness(&w, i, j).pass.then_some(w)
    };
    if a0.gcd(&f).is_one() {
        return Ok(accept(&a0));
    }
    if n < 4 {
        return Err(Error::StageTwoExhausted { n, a0: a0.to_string(), j_max: 0 });
    }
    let step = fib_unchecked(select_kstar(n)?);
    let mut a = a0.clone();
    for _ in 1..=cfg.j_max {
        a += &step;
        if a >= f {
            break;
        }
        if a.gcd(&f).is_one() {
            if let Some(w) = accept(&a) {
                return Ok(Some(w));
            }
        }
    }
    Err(Error::StageTwoExhausted { n, a0: a0.to_string(), j_max: cfg.j_max })
}

/// Dispatch on `cfg.strategy`; `auto` scans when the range fits under
/// `brute_cap` and switches to `two_scale` otherwise.
pub fn find(n: u32, i: &UnitInterval, j: &UnitInterval, cfg: &SearchConfig) -> Result<Option<LemmaWitness>> {
    match cfg.strategy {
        Strategy::Brute => find_brute(n, i, j, cfg),
        Strategy::TwoScale => find_two_scale(n, i, j, cfg),
        Strategy::Auto => match find_brute(n, i, j, cfg) {
            Err(Error::RangeTooLarge { .. }) => find_two_scale(n, i, j, cfg),
            other => other,
        },
    }
}

/// Re-derive `alpha_n`, `beta_n` from `(n, a)` and check every condition.
pub fn verify_witness(w: &LemmaWitness, i: &UnitInterval, j: &UnitInterval) -> BoundReport {
    let f = fib_unchecked(w.n.max(1));
    let (alpha, beta) = rotation_pair(w.n.max(1), &w.a);
    let checks = vec![
        Check::new("range", w.n >= 2 && !w.a.is_zero() && w.a < f, format!("1 <= {} < F_{} = {}", w.a, w.n, f)),
        Check::new("coprime", w.a.gcd(&f).is_one(), format!("gcd({}, {}) = {}", w.a, f, w.a.gcd(&f))),
        Check::new("alpha_in_I", i.contains(&alpha), format!("{alpha} in {i}")),
        Check::new("beta_in_J", j.contains(&beta), format!("{beta} in {j}")),
        Check::new("alpha_matches", alpha == w.alpha_n, format!("stored {} vs derived {}", w.alpha_n, alpha)),
        Check::new("beta_matches", beta == w.beta_n, format!("stored {} vs derived {}", w.beta_n, beta)),
    ];
    BoundReport::from_checks("lemma_witness", checks).with_witness([w.a.clone()])
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> UnitInterval {
        UnitInterval::new(r(lo), r(hi)).unwrap()
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn kstar_examples() {
        assert_eq!(select_kstar(10).unwrap(), 7);
        assert_eq!(select_kstar(12).unwrap(), 7);
        assert_eq!(select_kstar(7).unwrap(), 4);
        assert!(select_kstar(3).is_err());
    }

    #[test]
    fn kstar_within_two_of_half() {
        // scanned maximum over 4..=10^4 is exactly 2
        for n in 4..=10_000u32 {
            let k = select_kstar(n).unwrap();
            assert_eq!(k.gcd(&n), 1);
            assert!((2..n).contains(&k));
            assert!((2 * k as i64 - n as i64).abs() <= 4, "n={n} k={k}");
        }
    }

    #[test]
    fn brute_examples() {
        let cfg = SearchConfig::default();
        let unit = UnitInterval::unit();
        let w = find_brute(6, &unit, &unit, &cfg).unwrap().unwrap();
        assert_eq!(w.a, u(1));
        assert_eq!((w.alpha_n.clone(), w.beta_n.clone()), (r("1/8"), r("5/8")));
        assert!(find_brute(6, &iv("1/4", "1/2"), &iv("0", "1/4"), &cfg).unwrap().is_none());
        assert!(find_brute(2, &unit, &unit, &cfg).unwrap().is_none());
    }

    #[test]
    fn brute_cap_signal() {
        let cfg = SearchConfig { brute_cap: 10, ..SearchConfig::default() };
        let unit = UnitInterval::unit();
        assert!(matches!(find_brute(10, &unit, &unit, &cfg), Err(Error::RangeTooLarge { .. })));
    }

    #[test]
    fn two_scale_examples() {
        let cfg = SearchConfig::default();
        let unit = UnitInterval::unit();
        let w = find_two_scale(6, &unit, &unit, &cfg).unwrap().unwrap();
        assert_eq!(w.a, u(1));

        // the brute oracle finds nothing in this window, so two_scale cannot either
        let i = UnitInterval::from_start(r("1/3"), &r("1/100")).unwrap();
        let j = UnitInterval::from_start(r("2/3"), &r("1/100")).unwrap();
        assert!(find_brute(20, &i, &j, &cfg).unwrap().is_none());
        assert!(find_two_scale(20, &i, &j, &cfg).unwrap().is_none());

        let tiny = r("1/1000000");
        let i = UnitInterval::from_start(r("1/3"), &tiny).unwrap();
        let j = UnitInterval::from_start(r("1/5"), &tiny).unwrap();
        assert!(find_two_scale(20, &i, &j, &cfg).unwrap().is_none());
    }

    #[test]
    fn two_scale_rejects_unequal_lengths() {
        let cfg = SearchConfig::default();
        assert!(find_two_scale(10, &iv("0", "1/2"), &iv("0", "1/3"), &cfg).is_err());
        assert!(find_two_scale(10, &iv("1/2", "1/2"), &iv("1/3", "1/3"), &cfg).is_err());
    }

    #[test]
    fn two_scale_deep_window() {
        // windows far too narrow for a scan: needs F_n ~ 10^23
        let len = r("1/100000000000");
        let i = UnitInterval::from_start(r("2/7"), &len).unwrap();
        let j = UnitInterval::from_start(r("3/11"), &len).unwrap();
        let cfg = SearchConfig::default();
        let w = (100..140)
            .find_map(|n| find_two_scale(n, &i, &j, &cfg).ok().flatten())
            .expect("two_scale witness below n = 140");
        assert!(verify_witness(&w, &i, &j).pass);
    }

    #[test]
    fn verify_examples() {
        let unit = UnitInterval::unit();
        let w = LemmaWitness::new(6, u(1), Strategy::Brute);
        assert!(verify_witness(&w, &unit, &unit).pass);

        let w2 = LemmaWitness::new(6, u(2), Strategy::Brute);
        let rep = verify_witness(&w2, &unit, &unit);
        assert!(!rep.pass);
        assert_eq!(rep.failed_checks().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["coprime"]);

        let rep = verify_witness(&w, &iv("1/2", "1"), &unit);
        assert_eq!(rep.failed_checks().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["alpha_in_I"]);
    }

    #[test]
    fn auto_switches_on_cap() {
        let cfg = SearchConfig { brute_cap: 5, ..SearchConfig::default() };
        let unit = UnitInterval::unit();
        let w = find(12, &unit, &unit, &cfg).unwrap().unwrap();
        assert_eq!(w.strategy_used, Strategy::TwoScale);
        assert!(verify_witness(&w, &unit, &unit).pass);
    }

    /// Linear scan reference for `first_hit_offset`.
    fn first_hit_naive(c: u64, b: u64, m: u64, l: u64, r: u64) -> Option<u64> {
        (0..m).find(|t| (l..=r).contains(&((c * t + b) % m)))
    }

    proptest! {
        #[test]
        fn first_hit_matches_scan(m in 1u64..400, c in 0u64..400, b in 0u64..400,
                                  x in 0u64..400, y in 0u64..400) {
            let (l, r) = ((x % m).min(y % m), (x % m).max(y % m));
            let got = first_hit_offset(&u(c), &u(b), &u(m), &u(l), &u(r));
            prop_assert_eq!(got, first_hit_naive(c, b, m, l, r).map(u));
        }

        #[test]
        fn brute_and_two_scale_agree_on_validity(n in 10u32..22, p in 0u32..800, q in 0u32..800,
                                                 len in 50u32..200) {
            let len = Rat::frac(len as i64, 1000);
            let i = UnitInterval::from_start(Rat::frac(p as i64, 1000), &len).unwrap();
            let j = UnitInterval::from_start(Rat::frac(q as i64, 1000), &len).unwrap();
            let cfg = SearchConfig::default();
            if let Some(w) = find_brute(n, &i, &j, &cfg).unwrap() {
                prop_assert!(verify_witness(&w, &i, &j).pass);
            }
            if let Ok(Some(w)) = find_two_scale(n, &i, &j, &cfg) {
                prop_assert!(verify_witness(&w, &i, &j).pass);
            }
        }
    }
}
