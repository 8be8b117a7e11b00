//! Exact arithmetic in the prime field `F_p`.
//!
//! Everything downstream — gate outputs, operator exponents, modular state
//! indices — lives in `F_p`, so elements carry their modulus and refuse to
//! mix with elements of a different field.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("residue {value} out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
}

/// Deterministic primality by trial division. The library targets small
/// moduli (p <= 13), where this is both exact and instant.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A verified prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Prime, FieldError> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(FieldError::NotPrime(n))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The residue `v mod p` as a field element.
    pub fn felt(self, v: u64) -> Felt {
        Felt {
            value: v % self.0,
            modulus: self,
        }
    }

    /// Like [`Prime::felt`] but rejects values outside `0..p` instead of
    /// reducing them.
    pub fn felt_checked(self, v: u64) -> Result<Felt, FieldError> {
        if v < self.0 {
            Ok(Felt {
                value: v,
                modulus: self,
            })
        } else {
            Err(FieldError::OutOfRange {
                value: v,
                modulus: self.0,
            })
        }
    }

    pub fn zero(self) -> Felt {
        self.felt(0)
    }

    pub fn one(self) -> Felt {
        self.felt(1)
    }

    /// All residues `0, 1, ..., p-1` in order.
    pub fn elements(self) -> impl Iterator<Item = Felt> {
        (0..self.0).map(move |v| Felt {
            value: v,
            modulus: self,
        })
    }

    /// The nonzero residues `1, ..., p-1` in order.
    pub fn units(self) -> impl Iterator<Item = Felt> {
        (1..self.0).map(move |v| Felt {
            value: v,
            modulus: self,
        })
    }
}

impl TryFrom<u64> for Prime {
    type Error = FieldError;
    fn try_from(n: u64) -> Result<Self, Self::Error> {
        Prime::new(n)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A residue in `F_p`, tagged with its modulus.
///
/// The checked operations (`try_add`, `try_mul`, `inv`) return errors on
/// modulus mismatch; the operator impls panic instead and are meant for
/// call sites where a single modulus is structurally guaranteed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Felt {
    value: u64,
    modulus: Prime,
}

impl Felt {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn require_same(self, rhs: Felt) -> Result<(), FieldError> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(
                self.modulus.get(),
                rhs.modulus.get(),
            ))
        }
    }

    pub fn try_add(self, rhs: Felt) -> Result<Felt, FieldError> {
        self.require_same(rhs)?;
        Ok(self.modulus.felt(self.value + rhs.value))
    }

    pub fn try_sub(self, rhs: Felt) -> Result<Felt, FieldError> {
        self.require_same(rhs)?;
        Ok(self.modulus.felt(self.value + self.modulus.get() - rhs.value))
    }

    pub fn try_mul(self, rhs: Felt) -> Result<Felt, FieldError> {
        self.require_same(rhs)?;
        Ok(self.modulus.felt(self.value * rhs.value))
    }



    pub fn pow(self, mut e: u64) -> Felt {
        let mut base = self;
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(p-2) mod p`.
    pub fn inv(self) -> Result<Felt, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.modulus.get() - 2))
    }

    /// `self / rhs`, i.e. multiplication by the inverse.
    pub fn try_div(self, rhs: Felt) -> Result<Felt, FieldError> {
        self.require_same(rhs)?;
        self.try_mul(rhs.inv()?)
    }
}

impl std::ops::Neg for Felt {
    type Output = Felt;
    fn neg(self) -> Felt {
        self.modulus.felt(self.modulus.get() - self.value)
    }
}

impl std::ops::Add for Felt {
    type Output = Felt;
    fn add(self, rhs: Felt) -> Felt {
        self.try_add(rhs).expect("moduli must match")
    }
}

impl std::ops::Sub for Felt {
    type Output = Felt;
    fn sub(self, rhs: Felt) -> Felt {
        self.try_sub(rhs).expect("moduli must match")
    }
}

impl std::ops::Mul for Felt {
    type Output = Felt;
    fn mul(self, rhs: Felt) -> Felt {
        self.try_mul(rhs).expect("moduli must match")
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
