//! Fibonacci numbers (`F_1 = F_2 = 1`), the golden continued fraction
//! `F_{n-1}/F_n = [0; 1, ..., 1]`, Zeckendorf digits and the gcd identity.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::Rat;
use crate::{Error, Result};

fn table() -> &'static RwLock<Vec<BigUint>> {
    static TABLE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    // index 0 holds F_0 = 0 so that table[k] = F_k
    TABLE.get_or_init(|| RwLock::new(vec![BigUint::zero(), BigUint::one(), BigUint::one()]))
}

/// `F_k` with `F_1 = F_2 = 1`. Index 0 is rejected.
pub fn fib(k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("Fibonacci index must be >= 1".into()));
    }
    Ok(fib_unchecked(k))
}

pub(crate) fn fib_unchecked(k: u32) -> BigUint {
    let k = k as usize;
    {
        let t = table().read().expect("fib table poisoned");
        if let Some(v) = t.get(k) {
            return v.clone();
        }
    }
    let mut t = table().write().expect("fib table poisoned");
    while t.len() <= k {
        let next = &t[t.len() - 1] + &t[t.len() - 2];
        t.push(next);
    }
    t[k].clone()
}

/// `F_k` as `u64`, for indices where it fits (`k <= 93`).
pub(crate) fn fib_u64(k: u32) -> Option<u64> {
    u64::try_from(fib_unchecked(k)).ok()
}

/// Smallest `k >= 1` with `F_k >= bound`.
pub fn fib_index_at_least(bound: &BigUint) -> u32 {
    let mut k = 1;
    while &fib_unchecked(k) < bound {
        k += 1;
    }
    k
}

/// `F_{n-1} / F_n` in lowest terms; consecutive Fibonacci numbers are coprime.
pub fn golden_convergent(n: u32) -> Result<Rat> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("golden convergent needs n >= 2, got {n}")));
    }
    Ok(Rat::ratio(&fib_unchecked(n - 1), &fib_unchecked(n)))
}

/// Canonical continued fraction `[0; a_1, ..., a_m]` of `q` in `(0, 1)`,
/// with last quotient `>= 2` unless `m = 1`. Returns `a_1..a_m`.
pub fn cf_expand(q: &Rat) -> Result<Vec<BigUint>> {
    if !q.is_positive() || q >= &Rat::one() {
        return Err(Error::InvalidArgument(format!("continued fraction input {q} not in (0, 1)")));
    }
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    let mut quotients = Vec::new();
    // q = num/den with num < den; invert then peel integer parts
    while !num.is_zero() {
        let (a, r) = den.div_rem(&num);
        quotients.push(a.to_biguint().expect("positive quotient"));
        den = num;
        num = r;
    }
    Ok(quotients)
}

/// Rebuild `[0; a_1, ..., a_m]` exactly.
pub fn cf_value(quotients: &[BigUint]) -> Rat {
    let mut acc = Rat::zero();
    for a in quotients.iter().rev() {
        let denom = Rat::from(a.clone()) + acc;
        acc = denom.recip().expect("positive partial quotient");
    }
    acc
}

/// Zeckendorf representation: strictly decreasing, pairwise non-adjacent
/// Fibonacci indices `>= 2` whose `F_i` sum to the value.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZeckendorfRep {
    indices: Vec<u32>,
}

impl ZeckendorfRep {
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn value(&self) -> BigUint {
        self.indices.iter().map(|&i| fib_unchecked(i)).sum()
    }

    /// Checks ordering, the index floor and non-adjacency.
    pub fn is_canonical(&self) -> bool {
        self.indices.iter().all(|&i| i >= 2) && self.indices.windows(2).all(|w| w[0] > w[1] + 1)
    }
}

/// Greedy Zeckendorf digits of `m`.
pub fn zeckendorf(m: &BigUint) -> ZeckendorfRep {
    let mut rest = m.clone();
    let mut indices = Vec::new();
    if rest.is_zero() {
        return ZeckendorfRep { indices };
    }
    let mut k = fib_index_at_least(&rest).max(2);
    if fib_unchecked(k) > rest {
        k -= 1;
    }
    while !rest.is_zero() {
        let f = fib_unchecked(k);
        if f <= rest {
            rest -= f;
            indices.push(k);
            // the next digit is never adjacent
            k = k.saturating_sub(2);
        } else {
            k -= 1;
        }
        if k < 2 {
            break;
        }
    }
    debug_assert!(rest.is_zero());
    ZeckendorfRep { indices }
}

/// `gcd(F_m, F_n)`, computed from the values. Equals `F_{gcd(m, n)}`.
pub fn fib_gcd(m: u32, n: u32) -> Result<BigUint> {
    Ok(fib(m)?.gcd(&fib(n)?))
}

/// Residue of `F_{n-1} * F_k` modulo `F_n`, which is `F_{n-k}` for odd `k`
/// and `F_n - F_{n-k}` for even `k` (`2 <= k < n`). Stepping `a` by `F_k`
/// therefore moves `{F_{n-1} a / F_n}` by exactly `+-F_{n-k}/F_n`.
pub fn step_residue(n: u32, k: u32) -> Result<BigInt> {
    if k < 2 || k >= n {
        return Err(Error::InvalidArgument(format!("need 2 <= k < n, got k={k}, n={n}")));
    }
    let fnk = BigInt::from(fib_unchecked(n - k));
    Ok(if k % 2 == 1 { fnk } else { BigInt::from(fib_unchecked(n)) - fnk })
}
