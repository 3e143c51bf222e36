// SPDX-License-Identifier: Apache-2.0

//! Arithmetic in the prime field `F_p` for odd primes `p`.
//!
//! Elements carry their modulus. Mixing elements of different fields is a
//! hard error through the `try_*` methods and a panic through the operator
//! impls; nothing is ever coerced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{value} is below the minimum prime {min} for this operation")]
    PrimeTooSmall { value: u64, min: u64 },
    #[error("operands live in different fields (F_{left} vs F_{right})")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
}

/// An odd prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self, FieldError> {
        if value.is_multiple_of(2) || !is_prime(value) {
            return Err(FieldError::NotOddPrime(value));
        }
        Ok(Prime(value))
    }

    /// Like [`Prime::new`] but also enforces a lower bound (constructions
    /// need `p >= 5`).
    pub fn at_least(value: u64, min: u64) -> Result<Self, FieldError> {
        let p = Self::new(value)?;
        if value < min {
            return Err(FieldError::PrimeTooSmall { value, min });
        }
        Ok(p)
    }

    #[inline]
    pub const fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn elem(self, value: i64) -> FieldElement {
        FieldElement::from_i64(value, self)
    }

    #[inline]
    pub fn zero(self) -> FieldElement {
        FieldElement {
            residue: 0,
            modulus: self,
        }
    }

    #[inline]
    pub fn one(self) -> FieldElement {
        FieldElement {
            residue: 1,
            modulus: self,
        }
    }

    /// All elements in residue order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.0).map(move |r| FieldElement {
            residue: r,
            modulus: self,
        })
    }

    /// Squares of `F_p`, zero included, sorted by residue.
    pub fn squares(self) -> Vec<FieldElement> {
        let mut hit = vec![false; self.0 as usize];
        for x in self.elements() {
            hit[(x * x).residue as usize] = true;
        }
        hit.iter()
            .enumerate()
            .filter(|(_, &h)| h)
            .map(|(r, _)| FieldElement {
                residue: r as u64,
                modulus: self,
            })
            .collect()
    }

    /// `chi(-1)`: +1 for `p = 1 mod 4`, -1 for `p = 3 mod 4`.
    pub fn chi_minus_one(self) -> i32 {
        legendre(self.elem(-1))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Deterministic primality by trial division over `6k +- 1`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Odd primes in `lo..=hi`.
pub fn odd_primes_in(lo: u64, hi: u64) -> impl Iterator<Item = Prime> {
    (lo.max(3)..=hi).filter_map(|n| Prime::new(n).ok())
}

/// A reduced residue modulo an odd prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: u64,
    modulus: Prime,
}

impl FieldElement {
    pub fn new(value: u64, modulus: Prime) -> Self {
        FieldElement {
            residue: value % modulus.0,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: Prime) -> Self {
        let p = modulus.0 as i128;
        let r = (value as i128).rem_euclid(p);
        FieldElement {
            residue: r as u64,
            modulus,
        }
    }

    #[inline]
    pub fn residue(self) -> u64 {
        self.residue
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    fn check(self, other: Self) -> Result<(), FieldError> {
        if self.modulus != other.modulus {
            return Err(FieldError::ModulusMismatch {
                left: self.modulus.0,
                right: other.modulus.0,
            });
        }
        Ok(())
    }

    pub fn try_add(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.modulus.0;
        let s = self.residue + other.residue;
        Ok(FieldElement {
            residue: if s >= p { s - p } else { s },
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.modulus.0;
        let r = if self.residue >= other.residue {
            self.residue - other.residue
        } else {
            self.residue + p - other.residue
        };
        Ok(FieldElement {
            residue: r,
            modulus: self.modulus,
        })
    }

    pub fn try_mul(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let r = (self.residue as u128 * other.residue as u128) % self.modulus.0 as u128;
        Ok(FieldElement {
            residue: r as u64,
            modulus: self.modulus,
        })
    }

    pub fn try_div(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(inv(other)?)
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = self.modulus.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn square(self) -> Self {
        self * self
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.residue.fmt(f)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.modulus.zero() - self
    }
}

/// Quadratic character via Euler's criterion: 0, +1 or -1.
pub fn legendre(a: FieldElement) -> i32 {
    if a.is_zero() {
        return 0;
    }
    let p = a.modulus.0;
    let e = a.pow((p - 1) / 2).residue;
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// Multiplicative inverse by Fermat's little theorem.
pub fn inv(a: FieldElement) -> Result<FieldElement, FieldError> {
    if a.is_zero() {
        return Err(FieldError::DivisionByZero(a.modulus.0));
    }
    Ok(a.pow(a.modulus.0 - 2))
}

/// Square roots of `a`.
///
/// Returns `Some([0])` for zero, `Some([r, p - r])` with `r < p - r` for a
/// nonzero square, `None` for a non-residue. Tonelli-Shanks, using the
/// smallest positive non-residue as the starting generator.
pub fn sqrt_mod(a: FieldElement) -> Option<Vec<FieldElement>> {
    if a.is_zero() {
        return Some(vec![a]);
    }
    if legendre(a) != 1 {
        return None;
    }
    let prime = a.modulus;
    let p = prime.0;

    // p - 1 = q * 2^s, q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }

    let root = if s == 1 {
        a.pow((p + 1) / 4)
    } else {
        let z = (2..p)
            .map(|v| FieldElement::new(v, prime))
            .find(|&v| legendre(v) == -1)
            .expect("an odd prime always has a non-residue");
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = a.pow(q);
        let mut r = a.pow(q.div_ceil(2));
        while t.residue != 1 {
            // least i with t^(2^i) = 1
            let mut i = 0u32;
            let mut t2 = t;
            while t2.residue != 1 {
                t2 = t2.square();
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b.square();
            t = t * c;
            r = r * b;
        }
        r
    };

    let other = -root;
    let (lo, hi) = if root.residue <= other.residue {
        (root, other)
    } else {
        (other, root)
    };
    Some(vec![lo, hi])
}
