//! Prime-field arithmetic, quadratic residues and prime scans.
//!
//! Only odd primes below 2^62 are supported. Products are formed in 128-bit
//! intermediates, so no arbitrary-precision arithmetic is needed here.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_integer::Integer;
use thiserror::Error;

/// Largest modulus accepted by [`Prime::new`].
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenPrime,
    #[error("modulus {0} exceeds the 62-bit limit")]
    TooLarge(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),
    #[error("residue class {a} mod {m} is not coprime")]
    NonCoprimeClass { a: u64, m: u64 },
    #[error("no prime in [3, {n}]{}", class_suffix(*.class))]
    NoPrimeInRange { n: u64, class: Option<(u64, u64)> },
}

fn class_suffix(class: Option<(u64, u64)>) -> String {
    match class {
        Some((a, m)) => format!(" congruent to {a} mod {m}"),
        None => String::new(),
    }
}

/// An odd prime below 2^62, certified by a deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self, FieldError> {
        if value >= MAX_MODULUS {
            return Err(FieldError::TooLarge(value));
        }
        if value == 2 {
            return Err(FieldError::EvenPrime);
        }
        if !is_prime(value) {
            return Err(FieldError::NotPrime(value));
        }
        Ok(Prime(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn reduce(self, v: i128) -> u64 {
        v.rem_euclid(self.0 as i128) as u64
    }

    /// Iterates over all elements of the field in residue order.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |r| FieldElement { residue: r, modulus: self })
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A residue modulo an odd prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    residue: u64,
    modulus: Prime,
}

impl FieldElement {
    pub fn new(value: u64, modulus: Prime) -> Self {
        FieldElement { residue: value % modulus.0, modulus }
    }

    pub fn from_i128(value: i128, modulus: Prime) -> Self {
        FieldElement { residue: modulus.reduce(value), modulus }
    }

    pub fn zero(modulus: Prime) -> Self {
        FieldElement { residue: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        FieldElement { residue: 1, modulus }
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

    /// Representative in `(-p/2, p/2]`, handy for display.
    pub fn symmetric(self) -> i64 {
        let p = self.modulus.0;
        if self.residue > p / 2 {
            self.residue as i64 - p as i64
        } else {
            self.residue as i64
        }
    }

    pub fn pow(self, exp: u64) -> Self {
        FieldElement { residue: pow_mod(self.residue, exp, self.modulus.0), modulus: self.modulus }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Self, FieldError> {
        let p = self.modulus.0;
        if self.residue == 0 {
            return Err(FieldError::DivisionByZero(p));
        }
        let ext = (self.residue as i128).extended_gcd(&(p as i128));
        debug_assert_eq!(ext.gcd, 1);
        Ok(FieldElement::from_i128(ext.x, self.modulus))
    }

    pub fn is_square(self) -> bool {
        self.residue == 0 || self.legendre() == 1
    }

    /// Euler's criterion.
    pub fn legendre(self) -> i8 {
        if self.residue == 0 {
            return 0;
        }
        let p = self.modulus.0;
        if pow_mod(self.residue, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    }

    #[inline]
    fn check(self, other: Self) {
        debug_assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Add for FieldElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        let p = self.modulus.0;
        let s = self.residue + rhs.residue;
        FieldElement { residue: if s >= p { s - p } else { s }, modulus: self.modulus }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        let p = self.modulus.0;
        let r = if self.residue >= rhs.residue {
            self.residue - rhs.residue
        } else {
            self.residue + p - rhs.residue
        };
        FieldElement { residue: r, modulus: self.modulus }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            residue: mul_mod(self.residue, rhs.residue, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

/// Panics on division by zero; use [`FieldElement::inv`] for a fallible path.
impl Div for FieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero")
    }
}

impl Neg for FieldElement {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        FieldElement::zero(self.modulus) - self
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Inverse of a nonzero element.
pub fn fp_inv(a: FieldElement) -> Result<FieldElement, FieldError> {
    a.inv()
}

/// Legendre symbol `(a / p)` for any integer `a`.
pub fn legendre_symbol(a: i128, p: Prime) -> i8 {
    FieldElement::from_i128(a, p).legendre()
}

pub fn is_square(a: FieldElement) -> bool {
    a.is_square()
}

/// Whether `delta` has a square root in `F_p`. Always true when
/// `p ≡ 1 (mod 4|delta|)`.
pub fn discriminant_root_exists(delta: i128, p: Prime) -> bool {
    debug_assert_ne!(delta, 0);
    FieldElement::from_i128(delta, p).is_square()
}

/// The largest odd prime `p ≤ n`, optionally restricted to `p ≡ a (mod m)`.
pub fn scan_prime_below(n: u64, class: Option<(u64, u64)>) -> Result<Prime, FieldError> {
    if let Some((a, m)) = class {
        if m == 0 || a.gcd(&m) != 1 {
            return Err(FieldError::NonCoprimeClass { a, m });
        }
    }
    let top = n.min(MAX_MODULUS - 1);
    if top < 3 {
        return Err(FieldError::NoPrimeInRange { n, class });
    }
    let candidates: Box<dyn Iterator<Item = u64>> = match class {
        None => Box::new((3..=top).rev()),
        Some((a, m)) => {
            let a = a % m;
            // largest value ≤ top in the class
            let Some(start) = top.checked_sub((top % m + m - a) % m) else {
                return Err(FieldError::NoPrimeInRange { n, class });
            };
            Box::new(
                std::iter::successors(Some(start), move |&v| v.checked_sub(m))
                    .take_while(|&v| v >= 3),
            )
        }
    };
    for c in candidates {
        if c % 2 == 1 && is_prime(c) {
            return Ok(Prime(c));
        }
    }
    Err(FieldError::NoPrimeInRange { n, class })
}
