//! Small finite fields GF(q) for q <= 16, as precomputed operation tables.
//!
//! Prime fields use modular arithmetic; proper prime powers use polynomial
//! arithmetic over GF(p) modulo a fixed irreducible polynomial, with an
//! element c0 + c1 x + ... encoded as the integer c0 + c1 p + ... . Every
//! table is checked against the field axioms at construction, so downstream
//! linear algebra can trust the arithmetic blindly.

use thiserror::Error;

use crate::exact::{check_prime_power, ArithError};

pub const MAX_FIELD_ORDER: u64 = 16;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    OrderTooLarge(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Irreducible polynomial used for GF(p^e), as coefficients of x^0..x^e.
/// These are the standard Conway-style choices for the supported orders.
fn modulus_poly(q: u64) -> &'static [u8] {
    match q {
        4 => &[1, 1, 1],          // x^2 + x + 1
        8 => &[1, 1, 0, 1],       // x^3 + x + 1
        9 => &[1, 0, 1],          // x^2 + 1
        16 => &[1, 1, 0, 0, 1],   // x^4 + x + 1
        _ => unreachable!("no modulus needed for prime q = {q}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    q: u64,
    p: u64,
    e: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, e) = check_prime_power(q)?;
        if q > MAX_FIELD_ORDER {
            return Err(FieldError::OrderTooLarge(q));
        }
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        if e == 1 {
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = ((a + b) % q) as u8;
                    mul[(a * q + b) as usize] = ((a * b) % q) as u8;
                }
            }
        } else {
            let digits = |mut v: u64| -> Vec<u64> {
                let mut d = vec![0u64; e as usize];
                for slot in d.iter_mut() {
                    *slot = v % p;
                    v /= p;
                }
                d
            };
            let pack = |d: &[u64]| -> u64 { d.iter().rev().fold(0u64, |acc, &c| acc * p + c) };
            let modulus: Vec<u64> = modulus_poly(q).iter().map(|&c| c as u64).collect();
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let sum: Vec<u64> =
                        da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = pack(&sum) as u8;
                    // polynomial product, then reduce by the modulus
                    let mut prod = vec![0u64; 2 * e as usize];
                    for (i, &x) in da.iter().enumerate() {
                        for (j, &y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for top in (e as usize..prod.len()).rev() {
                        let c = prod[top];
                        if c == 0 {
                            continue;
                        }
                        prod[top] = 0;
                        // x^e = -(modulus minus leading term), scaled by c
                        for (i, &m) in modulus[..e as usize].iter().enumerate() {
                            let sub = (c * m) % p;
                            prod[top - e as usize + i] =
                                (prod[top - e as usize + i] + p - sub) % p;
                        }
                    }
                    mul[(a * q + b) as usize] = pack(&prod[..e as usize]) as u8;
                }
            }
        }
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs)
                .find(|&b| add[a * qs + b] == 0)
                .expect("additive inverse exists") as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .expect("multiplicative inverse exists") as u8;
            }
        }
        let spec = FieldSpec { q, p, e, add, mul, neg, inv };
        spec.verify_axioms();
        Ok(spec)
    }

    /// Panics if any table violates the field axioms; run once at
    /// construction so every later operation is trusted.
    fn verify_axioms(&self) {
        let q = self.q as u8;
        for a in 0..q {
            assert_eq!(self.add(a, 0), a);
            assert_eq!(self.mul(a, 1), a);
            assert_eq!(self.mul(a, 0), 0);
            assert_eq!(self.add(a, self.neg(a)), 0);
            if a != 0 {
                assert_eq!(self.mul(a, self.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(self.add(a, b), self.add(b, a));
                assert_eq!(self.mul(a, b), self.mul(b, a));
                for c in 0..q {
                    assert_eq!(self.add(self.add(a, b), c), self.add(a, self.add(b, c)));
                    assert_eq!(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c)));
                    assert_eq!(
                        self.mul(a, self.add(b, c)),
                        self.add(self.mul(a, b), self.mul(a, c))
                    );
                }
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }
}
