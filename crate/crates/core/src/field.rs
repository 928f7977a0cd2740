//! Coefficient fields: exact rationals and word-sized prime fields.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, ScalarMatrix};

pub type Rational = BigRational;

/// 2^61 - 1, the default modulus for randomized identity tests.
pub const DEFAULT_MODULUS: u64 = (1u64 << 61) - 1;

/// A coefficient field. Elements carry enough context (the modulus, for prime
/// fields) that arithmetic never needs a side channel; constants are built
/// from an explicit [`Field::Ctx`].
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;
    /// Image of a rational in this field; `None` when the denominator is not invertible.
    fn from_rational(q: &Rational, ctx: &Self::Ctx) -> Option<Self>;
    fn ctx(&self) -> Self::Ctx;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Sign and magnitude for printing; fields without an order report no sign.
    fn signed_parts(&self) -> (bool, String) {
        (false, self.to_string())
    }

    fn mul_u64(&self, k: u64) -> Self {
        let ctx = self.ctx();
        let k = Self::from_rational(&Rational::from_integer(BigInt::from(k)), &ctx)
            .expect("integers always embed");
        self.mul(&k)
    }

    /// Row-reduce a matrix to reduced row echelon form. Pivots are chosen as the
    /// first nonzero entry in column order, ties broken by row order.
    fn row_reduce(m: &ScalarMatrix<Self>) -> Echelon<Self> {
        crate::linalg::gauss_jordan(m)
    }
}

impl Field for Rational {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }
    fn from_i64(n: i64, _: &()) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational, _: &()) -> Option<Self> {
        Some(q.clone())
    }
    fn ctx(&self) {}

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn mul_u64(&self, k: u64) -> Self {
        self * Rational::from_integer(BigInt::from(k))
    }
    fn signed_parts(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }

    fn row_reduce(m: &ScalarMatrix<Self>) -> Echelon<Self> {
        crate::linalg::bareiss_rref(m)
    }
}

/// A prime field `Z/pZ` with `2^60 < p < 2^64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus <= (1u64 << 60) {
            return Err(Error::InvalidModulus(modulus, "modulus must exceed 2^60"));
        }
        if !is_prime_u64(modulus) {
            return Err(Error::InvalidModulus(modulus, "modulus is not prime"));
        }
        Ok(PrimeField { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn element(&self, value: u64) -> Fp {
        Fp { value: value % self.modulus, modulus: self.modulus }
    }

    pub fn from_i64(&self, n: i64) -> Fp {
        let p = self.modulus as i128;
        let v = ((n as i128 % p) + p) % p;
        Fp { value: v as u64, modulus: self.modulus }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Fp {
        let p = BigInt::from(self.modulus);
        let r = n.mod_floor(&p);
        Fp { value: r.to_u64().expect("reduced below modulus"), modulus: self.modulus }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { modulus: DEFAULT_MODULUS }
    }
}

/// An element of a [`PrimeField`], always kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(&self, mut e: u64) -> Fp {
        let mut base = *self;
        let mut acc = Fp { value: 1 % self.modulus, modulus: self.modulus };
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn same_field(&self, other: &Fp) {
        assert_eq!(self.modulus, other.modulus, "mixed prime-field moduli");
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for Fp {
    type Ctx = PrimeField;

    fn zero(ctx: &PrimeField) -> Self {
        ctx.element(0)
    }
    fn one(ctx: &PrimeField) -> Self {
        ctx.element(1)
    }
    fn from_i64(n: i64, ctx: &PrimeField) -> Self {
        ctx.from_i64(n)
    }
    fn from_rational(q: &Rational, ctx: &PrimeField) -> Option<Self> {
        let num = ctx.from_bigint(q.numer());
        let den = ctx.from_bigint(q.denom());
        num.div(&den)
    }
    fn ctx(&self) -> PrimeField {
        PrimeField { modulus: self.modulus }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let s = self.value as u128 + other.value as u128;
        Fp { value: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }
    fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let v = if self.value >= other.value {
            self.value - other.value
        } else {
            self.modulus - (other.value - self.value)
        };
        Fp { value: v, modulus: self.modulus }
    }
    fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let prod = self.value as u128 * other.value as u128;
        Fp { value: (prod % self.modulus as u128) as u64, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        if self.value == 0 {
            *self
        } else {
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }
    fn mul_u64(&self, k: u64) -> Self {
        self.mul(&Fp { value: k % self.modulus, modulus: self.modulus })
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Parse a rational written as `a` or `a/b`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Content of a list of rationals: the positive rational `c` such that every
/// entry divided by `c` is an integer and the integers are coprime.
pub fn rational_content<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Option<Rational> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut any = false;
    for v in values {
        if Zero::is_zero(v) {
            continue;
        }
        any = true;
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if any {
        Some(Rational::new(num.abs(), den))
    } else {
        None
    }
}
