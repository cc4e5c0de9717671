//! Scalar rings and fields.
//!
//! Relations are parsed with integer coefficients and only mapped into a
//! field when an algebra is built. Gradings never look at coefficients, so
//! the default field is the rationals; the automorphism search needs finite
//! fields (`F2`, `F3`, `F4`, `F5`, `F7`).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with identity, used for coefficients.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
}

pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn kind() -> FieldKind;
}

/// A field with finitely many elements, enumerable by index.
///
/// `element(0)` is zero and `element(1)` is one.
pub trait FiniteField: Field {
    const ORDER: usize;
    fn element(index: usize) -> Self;
}

impl Ring for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_i64(n: i64) -> Self {
        n
    }
}

pub type Rational = BigRational;

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn kind() -> FieldKind {
        FieldKind::Q
    }
}

/// The prime field `Z/PZ` for a small prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u8>(u8);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

impl<const P: u8> Fp<P> {
    pub fn new(value: i64) -> Self {
        Fp(value.rem_euclid(P as i64) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl<const P: u8> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u8> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u8> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u16 + rhs.0 as u16) % P as u16) as u8)
    }
}

impl<const P: u8> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u16 + P as u16 - rhs.0 as u16) % P as u16) as u8)
    }
}

impl<const P: u8> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u16 * rhs.0 as u16) % P as u16) as u8)
    }
}

impl<const P: u8> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u8> Ring for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
}

impl<const P: u8> Field for Fp<P> {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        // a^(P-2) by Fermat
        let mut acc = Fp::<P>::one();
        for _ in 0..(P - 2) {
            acc = acc * *self;
        }
        acc
    }
    fn kind() -> FieldKind {
        match P {
            2 => FieldKind::F2,
            3 => FieldKind::F3,
            5 => FieldKind::F5,
            7 => FieldKind::F7,
            _ => unreachable!("unsupported prime {P}"),
        }
    }
}

impl<const P: u8> FiniteField for Fp<P> {
    const ORDER: usize = P as usize;
    fn element(index: usize) -> Self {
        assert!(index < P as usize);
        Fp(index as u8)
    }
}

/// The field with four elements, modelled as `F2[w]/(w^2 + w + 1)`.
///
/// Elements are stored as two bits `b1 b0` meaning `b1*w + b0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F4(u8);

const F4_MUL: [[u8; 4]; 4] = {
    // w^2 = w + 1
    let mut table = [[0u8; 4]; 4];
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            // carry-less product, then reduce bit 2 with w^2 = w + 1
            let mut prod = 0u8;
            if b & 1 != 0 {
                prod ^= a;
            }
            if b & 2 != 0 {
                prod ^= a << 1;
            }
            if prod & 4 != 0 {
                prod ^= 0b111;
            }
            table[a as usize][b as usize] = prod;
            b += 1;
        }
        a += 1;
    }
    table
};

impl F4 {
    pub const W: F4 = F4(2);

    pub fn bits(self) -> u8 {
        self.0
    }
}

impl Debug for F4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for F4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            1 => write!(f, "1"),
            2 => write!(f, "w"),
            _ => write!(f, "(w+1)"),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for F4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        F4(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for F4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        F4(self.0 ^ rhs.0)
    }
}

impl Mul for F4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        F4(F4_MUL[self.0 as usize][rhs.0 as usize])
    }
}

impl Neg for F4 {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl Ring for F4 {
    fn zero() -> Self {
        F4(0)
    }
    fn one() -> Self {
        F4(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn from_i64(n: i64) -> Self {
        F4((n.rem_euclid(2)) as u8)
    }
}

impl Field for F4 {
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        // the multiplicative group has order 3
        *self * *self
    }
    fn kind() -> FieldKind {
        FieldKind::F4
    }
}

impl FiniteField for F4 {
    const ORDER: usize = 4;
    fn element(index: usize) -> Self {
        assert!(index < 4);
        F4(index as u8)
    }
}

/// Which scalar field an algebra is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub enum FieldKind {
    #[default]
    Q,
    F2,
    F3,
    F4,
    F5,
    F7,
}

impl FieldKind {
    pub const ALL: [FieldKind; 6] = [
        FieldKind::Q,
        FieldKind::F2,
        FieldKind::F3,
        FieldKind::F4,
        FieldKind::F5,
        FieldKind::F7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Q => "Q",
            FieldKind::F2 => "F2",
            FieldKind::F3 => "F3",
            FieldKind::F4 => "F4",
            FieldKind::F5 => "F5",
            FieldKind::F7 => "F7",
        }
    }

    /// Number of elements, or `None` for the rationals.
    pub fn order(self) -> Option<usize> {
        match self {
            FieldKind::Q => None,
            FieldKind::F2 => Some(2),
            FieldKind::F3 => Some(3),
            FieldKind::F4 => Some(4),
            FieldKind::F5 => Some(5),
            FieldKind::F7 => Some(7),
        }
    }

    pub fn characteristic(self) -> u32 {
        match self {
            FieldKind::Q => 0,
            FieldKind::F2 | FieldKind::F4 => 2,
            FieldKind::F3 => 3,
            FieldKind::F5 => 5,
            FieldKind::F7 => 7,
        }
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown field `{0}` (expected one of Q, F2, F3, F4, F5, F7)")]
pub struct UnknownField(pub String);

impl FromStr for FieldKind {
    type Err = UnknownField;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownField(s.to_string()))
    }
}

/// Evaluates `$body` with the type alias `$F` bound to the field named by a
/// [`FieldKind`].
///
/// ```
/// use qga::field::{Field, FieldKind};
/// let kind = qga::with_field!(FieldKind::F4, F => F::kind());
/// assert_eq!(kind, FieldKind::F4);
/// ```
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $F:ident => $body:expr) => {
        match $kind {
            $crate::field::FieldKind::Q => {
                type $F = $crate::field::Rational;
                $body
            }
            $crate::field::FieldKind::F2 => {
                type $F = $crate::field::F2;
                $body
            }
            $crate::field::FieldKind::F3 => {
                type $F = $crate::field::F3;
                $body
            }
            $crate::field::FieldKind::F4 => {
                type $F = $crate::field::F4;
                $body
            }
            $crate::field::FieldKind::F5 => {
                type $F = $crate::field::F5;
                $body
            }
            $crate::field::FieldKind::F7 => {
                type $F = $crate::field::F7;
                $body
            }
        }
    };
}
