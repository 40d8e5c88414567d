//! Nested-interval construction of `(alpha, beta)`.
//!
//! Level `nu` fixes `alpha_nu = a_nu / F_{n_nu}` and
//! `beta_nu = {F_{n_nu - 1} a_nu / F_{n_nu}}` with windows
//! `I_nu = [alpha_nu, alpha_nu + delta_nu / F_{n_nu}^2]` (and `J_nu` alike).
//! The next level searches the left half of both windows, so the right half
//! is left as room for the next window. `alpha` and `beta` are the points
//! common to every level; a certificate pins them to within the deepest
//! window.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::fib::{fib_index_at_least, fib_unchecked};
use crate::lemma::{self, rotation_pair, SearchConfig};
use crate::rat::{Anchor, Rat, UnitInterval};
use crate::report::{BoundReport, Check};
use crate::{Error, Result};

/// How many indices past the first admissible one `build` tries per level.
pub const MAX_INDEX_INCREMENTS: u32 = 512;

/// `delta_nu = base^-nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaSchedule {
    base: u32,
}

impl DeltaSchedule {
    pub fn pow(base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("schedule base must be >= 2, got {base}")));
        }
        Ok(DeltaSchedule { base })
    }

    pub fn pow2() -> Self {
        DeltaSchedule { base: 2 }
    }

    pub fn delta(&self, nu: usize) -> Rat {
        Rat::ratio(&BigUint::one(), &BigUint::from(self.base).pow(nu as u32))
    }
}

impl fmt::Display for DeltaSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pow{}", self.base)
    }
}

impl FromStr for DeltaSchedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let base = s
            .strip_prefix("pow")
            .and_then(|b| b.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("unknown delta schedule {s:?}")))?;
        DeltaSchedule::pow(base)
    }
}

/// One level of the construction. Level 0 is the seed `I_0 = J_0 = [0, 1]`
/// with `n = 1`, `a = 0`, `delta = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub nu: usize,
    pub n: u32,
    #[serde(with = "crate::rat::biguint_str")]
    pub a: BigUint,
    pub delta: Rat,
    pub alpha: Rat,
    pub beta: Rat,
    #[serde(rename = "I")]
    pub i: UnitInterval,
    #[serde(rename = "J")]
    pub j: UnitInterval,
}

impl Stage {
    pub fn seed() -> Self {
        Stage {
            nu: 0,
            n: 1,
            a: BigUint::zero(),
            delta: Rat::one(),
            alpha: Rat::zero(),
            beta: Rat::zero(),
            i: UnitInterval::unit(),
            j: UnitInterval::unit(),
        }
    }

    /// `delta / F_n^2`, the common window length.
    pub fn window(&self) -> Rat {
        window(&self.delta, self.n)
    }

    fn from_witness(nu: usize, w: &lemma::LemmaWitness, delta: Rat) -> Result<Self> {
        let len = window(&delta, w.n);
        Ok(Stage {
            nu,
            n: w.n,
            a: w.a.clone(),
            i: UnitInterval::from_start(w.alpha_n.clone(), &len)?,
            j: UnitInterval::from_start(w.beta_n.clone(), &len)?,
            delta,
            alpha: w.alpha_n.clone(),
            beta: w.beta_n.clone(),
        })
    }
}

fn window(delta: &Rat, n: u32) -> Rat {
    delta / Rat::from(fib_unchecked(n).pow(2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schedule: String,
    pub policy: String,
    pub stages: Vec<Stage>,
}

impl Certificate {
    pub fn depth(&self) -> usize {
        self.stages.len().saturating_sub(1)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn policy_tag(cfg: &SearchConfig) -> String {
    format!("left-half-trim;strategy={}", cfg.strategy)
}

/// Run the construction for `depth` levels beyond the seed.
///
/// Level `nu + 1` starts at the smallest `n > n_nu` (and `>= n0`) with
/// `F_n >= 2 F_{n_nu}^2 / delta_nu`, and raises `n` until the search finds a
/// witness in the left halves whose own window fits in half the remaining
/// room.
pub fn build(depth: usize, schedule: DeltaSchedule, n0: u32, cfg: &SearchConfig) -> Result<Certificate> {
    if n0 < 4 {
        return Err(Error::InvalidArgument(format!("n0 must be >= 4, got {n0}")));
    }
    let half = Rat::frac(1, 2);
    let mut stages = vec![Stage::seed()];
    for nu in 0..depth {
        let prev = &stages[nu];
        let target_i = prev.i.trim(&half, Anchor::Left)?;
        let target_j = prev.j.trim(&half, Anchor::Left)?;
        let min_f = (Rat::from_int(2) / prev.window()).ceil().to_biguint().unwrap_or_default();
        let first = fib_index_at_least(&min_f).max(prev.n + 1).max(if nu == 0 { n0 } else { 0 });
        let next_delta = schedule.delta(nu + 1);
        let mut found = None;
        for n in first..first + MAX_INDEX_INCREMENTS {
            let w = match lemma::find(n, &target_i, &target_j, cfg) {
                Ok(Some(w)) => w,
                Ok(None) | Err(Error::RangeTooLarge { .. }) | Err(Error::StageTwoExhausted { .. }) => continue,
                Err(e) => return Err(e),
            };
            let len = window(&next_delta, n);
            let room_i = (prev.i.hi() - &w.alpha_n) * &half;
            let room_j = (prev.j.hi() - &w.beta_n) * &half;
            if len <= room_i && len <= room_j {
                found = Some(Stage::from_witness(nu + 1, &w, next_delta.clone())?);
                break;
            }
        }
        match found {
            Some(stage) => stages.push(stage),
            None => return Err(Error::DepthUnreachable { nu: nu + 1, last_n: first + MAX_INDEX_INCREMENTS - 1 }),
        }
    }
    Ok(Certificate { schedule: schedule.to_string(), policy: policy_tag(cfg), stages })
}

/// `(alpha_nu, beta_nu, delta_nu / F_{n_nu}^2)`: the limit point lies within
/// the returned error of the level's approximants.
pub fn approximants(cert: &Certificate, level: usize) -> Result<(Rat, Rat, Rat)> {
    if level == 0 || level >= cert.stages.len() {
        return Err(Error::LevelOutOfRange { level, stages: cert.stages.len() });
    }
    let s = &cert.stages[level];
    Ok((s.alpha.clone(), s.beta.clone(), s.window()))
}

/// Exact re-check of every stage and every pair of levels.
pub fn verify_certificate(cert: &Certificate) -> BoundReport {
    let mut checks = Vec::new();
    let schedule = cert.schedule.parse::<DeltaSchedule>().ok();
    checks.push(Check::new("schedule_known", schedule.is_some(), format!("schedule {:?}", cert.schedule)));

    for (idx, s) in cert.stages.iter().enumerate() {
        let tag = |what: &str| format!("stage{idx}.{what}");
        checks.push(Check::new(tag("index"), s.nu == idx, format!("nu = {}", s.nu)));
        if let Some(sched) = schedule {
            let expect = sched.delta(idx);
            checks.push(Check::new(
                tag("delta_schedule"),
                s.delta == expect,
                format!("delta {} vs schedule {}", s.delta, expect),
            ));
        }
        if idx == 0 {
            checks.push(Check::new(
                tag("seed"),
                s.n == 1
                    && s.a.is_zero()
                    && s.delta == Rat::one()
                    && s.i == UnitInterval::unit()
                    && s.j == UnitInterval::unit(),
                "I_0 = J_0 = [0,1], delta_0 = 1".to_string(),
            ));
            continue;
        }
        if s.n < 2 {
            checks.push(Check::new(tag("n"), false, format!("n = {} < 2", s.n)));
            continue;
        }
        let f = fib_unchecked(s.n);
        checks.push(Check::new(tag("range"), !s.a.is_zero() && s.a < f, format!("1 <= {} < {}", s.a, f)));
        checks.push(Check::new(
            tag("coprime"),
            s.a.gcd(&f).is_one(),
            format!("gcd({}, F_{}) = {}", s.a, s.n, s.a.gcd(&f)),
        ));
        let (alpha, beta) = rotation_pair(s.n, &s.a);
        checks.push(Check::new(tag("alpha"), alpha == s.alpha, format!("{} = a/F_n = {}", s.alpha, alpha)));
        checks.push(Check::new(tag("beta"), beta == s.beta, format!("{} = {{F_(n-1) a/F_n}} = {}", s.beta, beta)));
        let len = s.window();
        let want_i = UnitInterval::from_start(s.alpha.clone(), &len).ok();
        let want_j = UnitInterval::from_start(s.beta.clone(), &len).ok();
        checks.push(Check::new(tag("I_def"), want_i.as_ref() == Some(&s.i), format!("I = {}", s.i)));
        checks.push(Check::new(tag("J_def"), want_j.as_ref() == Some(&s.j), format!("J = {}", s.j)));

        let prev = &cert.stages[idx - 1];
        checks.push(Check::new(tag("n_increasing"), s.n > prev.n, format!("{} > {}", s.n, prev.n)));
        checks.push(Check::new(
            tag("delta_decreasing"),
            s.delta < prev.delta && s.delta.is_positive(),
            format!("0 < {} < {}", s.delta, prev.delta),
        ));
        for (mu, outer) in cert.stages[..idx].iter().enumerate() {
            checks.push(Check::new(
                format!("nest{mu}_{idx}"),
                outer.i.contains_interval(&s.i) && outer.j.contains_interval(&s.j),
                format!("I_{idx} in I_{mu}, J_{idx} in J_{mu}"),
            ));
            let bound = outer.window();
            let da = (&s.alpha - &outer.alpha).abs();
            let db = (&s.beta - &outer.beta).abs();
            checks.push(Check::new(
                format!("approx{mu}_{idx}"),
                da <= bound && db <= bound,
                format!("max({da}, {db}) <= {bound}"),
            ));
        }
    }
    BoundReport::from_checks("certificate", checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn schedule() {
        let s = DeltaSchedule::pow2();
        assert_eq!(s.delta(0), Rat::one());
        assert_eq!(s.delta(3), Rat::frac(1, 8));
        assert_eq!(s.to_string(), "pow2");
        assert_eq!("pow3".parse::<DeltaSchedule>().unwrap().delta(2), Rat::frac(1, 9));
        assert!("pow1".parse::<DeltaSchedule>().is_err());
        assert!("linear".parse::<DeltaSchedule>().is_err());
    }

    #[test]
    fn depth_zero_is_seed() {
        let c = build(0, DeltaSchedule::pow2(), 5, &SearchConfig::default()).unwrap();
        assert_eq!(c.stages, vec![Stage::seed()]);
        assert!(verify_certificate(&c).pass);
        assert!(approximants(&c, 0).is_err());
        assert!(approximants(&c, 1).is_err());
    }

    #[test]
    fn depth_one_matches_brute_oracle() {
        // first n >= 5 with a witness in ([0,1/2], [0,1/2]): n = 5, a = 2
        let c = build(1, DeltaSchedule::pow2(), 5, &SearchConfig::default()).unwrap();
        let s = &c.stages[1];
        assert_eq!((s.n, s.a.clone()), (5, u(2)));
        assert_eq!(s.alpha, Rat::frac(2, 5));
        assert_eq!(s.beta, Rat::frac(1, 5));
        assert_eq!(s.delta, Rat::frac(1, 2));
        assert_eq!(s.i, UnitInterval::new(Rat::frac(2, 5), Rat::frac(21, 50)).unwrap());
        assert!(verify_certificate(&c).pass);
    }

    #[test]
    fn rejects_small_n0() {
        assert!(build(1, DeltaSchedule::pow2(), 3, &SearchConfig::default()).is_err());
    }

    #[test]
    fn tampered_certificate_fails() {
        let c = build(2, DeltaSchedule::pow2(), 5, &SearchConfig::default()).unwrap();
        assert!(verify_certificate(&c).pass);
        let mut bad = c.clone();
        bad.stages[2].a += 1u32;
        let rep = verify_certificate(&bad);
        assert!(!rep.pass);
        assert!(rep.failed_checks().any(|c| c.name == "stage2.alpha"));

        let mut bad = c.clone();
        bad.stages[1].delta = Rat::frac(1, 3);
        assert!(!verify_certificate(&bad).pass);
    }

    #[test]
    fn json_round_trip() {
        let c = build(2, DeltaSchedule::pow2(), 5, &SearchConfig::default()).unwrap();
        let s = c.to_json().unwrap();
        assert!(s.contains("\"I\": ["));
        assert!(s.contains("\"a\": \"2\""));
        let back = Certificate::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json().unwrap(), s);
    }
}
