//! Exact integer and rational arithmetic for bound formulas.
//!
//! Every bound in this crate is evaluated in arbitrary precision; there is
//! no floating point anywhere on a bound path.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;
/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("empty summation range: lo {lo} > hi {hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("field order must be at least 2, got {0}")]
    FieldOrderTooSmall(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// Binomial coefficient C(n, k) with the convention that out-of-range
/// indices give 0.
pub fn binom(n: u64, k: i64) -> Natural {
    if k < 0 || k as u64 > n {
        return Natural::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut result = Natural::one();
    for i in 0..k {
        result *= n - k + 1 + i;
        let d = Natural::from(i + 1);
        debug_assert!((&result % &d).is_zero());
        result /= d;
    }
    result
}

/// Sum of C(n, i) for lo <= i <= hi, with the zero convention for
/// out-of-range terms.
pub fn binom_sum(n: u64, lo: i64, hi: i64) -> Result<Natural, ArithError> {
    if lo > hi {
        return Err(ArithError::EmptyRange { lo, hi });
    }
    let mut sum = Natural::zero();
    for i in lo..=hi {
        sum += binom(n, i);
    }
    Ok(sum)
}

/// Parameters of a Gaussian binomial coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QBinomParams {
    pub n: u64,
    pub k: u64,
    pub q: u64,
}

impl QBinomParams {
    pub fn new(n: u64, k: u64, q: u64) -> Result<Self, ArithError> {
        check_prime_power(q)?;
        Ok(QBinomParams { n, k, q })
    }
}

/// Returns (p, e) with q = p^e when q is a prime power >= 2.
pub fn prime_power_base(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut rest = q;
    let mut e = 0u32;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest == 1 {
        Some((p, e))
    } else {
        None
    }
}

pub fn check_prime_power(q: u64) -> Result<(u64, u32), ArithError> {
    if q < 2 {
        return Err(ArithError::FieldOrderTooSmall(q));
    }
    prime_power_base(q).ok_or(ArithError::NotPrimePower(q))
}

fn q_pow_minus_one(q: u64, e: u64) -> Natural {
    Natural::from(q).pow(e as u32) - Natural::one()
}

/// Gaussian binomial coefficient [n choose k]_q, evaluated by the
/// telescoping product with an exact division after every factor pair.
/// Each partial product equals [n-k+j choose j]_q and so the division
/// must be exact; a nonzero remainder is an arithmetic bug.
pub fn qbinom(p: &QBinomParams) -> Result<Natural, ArithError> {
    check_prime_power(p.q)?;
    if p.k > p.n {
        return Ok(Natural::zero());
    }
    let mut result = Natural::one();
    for i in 1..=p.k {
        result *= q_pow_minus_one(p.q, p.n - p.k + i);
        let d = q_pow_minus_one(p.q, i);
        assert!(
            (&result % &d).is_zero(),
            "qbinom partial product not divisible: n={} k={} q={} step {}",
            p.n,
            p.k,
            p.q,
            i
        );
        result /= d;
    }
    Ok(result)
}

/// Sum of [n choose i]_q for lo <= i <= hi with the zero convention.
pub fn qbinom_sum(n: u64, lo: i64, hi: i64, q: u64) -> Result<Natural, ArithError> {
    if lo > hi {
        return Err(ArithError::EmptyRange { lo, hi });
    }
    check_prime_power(q)?;
    let mut sum = Natural::zero();
    for i in lo..=hi {
        if i >= 0 && (i as u64) <= n {
            sum += qbinom(&QBinomParams { n, k: i as u64, q })?;
        }
    }
    Ok(sum)
}

/// Floor of a nonnegative exact rational as a Natural.
pub fn rational_floor(r: &ExactRational) -> Natural {
    let f: BigInt = r.floor().to_integer();
    assert!(!f.is_negative(), "rational bound is negative");
    f.to_biguint().unwrap()
}

pub fn rational_from_natural(n: &Natural) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n.clone()))
}

/// Exact three-way comparison of a rational against a natural number,
/// by cross-multiplication inside BigRational.
pub fn cmp_rational_natural(r: &ExactRational, n: &Natural) -> std::cmp::Ordering {
    r.cmp(&rational_from_natural(n))
}

/// Convenience for small expected values in tests and reports.
pub fn nat(v: u64) -> Natural {
    Natural::from(v)
}

pub fn natural_to_u64(n: &Natural) -> Option<u64> {
    n.to_u64()
}
