//! Scalar abstraction for the exact linear-algebra kernels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A commutative field with decidable equality.
///
/// `Rat` is the instantiation used by every algebraic module.
/// Floating-point types also satisfy the bounds and are accepted by the
/// generic matrix code, but the elimination routines test pivots with
/// exact `is_zero`, so they are only meaningful over exact scalars.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
{
}

impl<T> Field for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + AddAssign
        + SubAssign
{
}

/// The exact scalar type of the crate: an arbitrary-precision rational
/// with an allocation-free fast path for machine-word values.
///
/// Invariants: `S(n, d)` is reduced with `d > 0`; `B` holds a reduced
/// value whose numerator or denominator does not fit in `i64`, so equal
/// values always have equal representations.
#[derive(Clone)]
pub enum Rat {
    S(i64, i64),
    B(Box<BigRational>),
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rat {
    /// Reduced rational from a 128-bit fraction (`d` nonzero).
    fn from_i128(mut n: i128, mut d: i128) -> Rat {
        debug_assert!(d != 0);
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rat::S(0, 1);
        }
        let g = gcd128(n.unsigned_abs(), d as u128) as i128;
        n /= g;
        d /= g;
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(ns), Ok(ds)) => Rat::S(ns, ds),
            _ => Rat::B(Box::new(BigRational::new(n.into(), d.into()))),
        }
    }

    fn from_big(b: BigRational) -> Rat {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::S(n, d),
            _ => Rat::B(Box::new(b)),
        }
    }

    fn big(&self) -> BigRational {
        match self {
            Rat::S(n, d) => BigRational::new((*n).into(), (*d).into()),
            Rat::B(b) => (**b).clone(),
        }
    }

    /// Reduced rational `n / d`; panics when `d` is zero.
    pub fn new(n: BigInt, d: BigInt) -> Rat {
        Rat::from_big(BigRational::new(n, d))
    }

    pub fn from_integer(n: BigInt) -> Rat {
        Rat::from_big(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::S(n, _) => (*n).into(),
            Rat::B(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::S(_, d) => (*d).into(),
            Rat::B(b) => b.denom().clone(),
        }
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rat::S(a, b), Rat::S(c, d)) => a == c && b == d,
            (Rat::B(x), Rat::B(y)) => x == y,
            // canonical forms: a small value is never stored as `B`
            _ => false,
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Rat::S(a, b), Rat::S(c, d)) => {
                Some((*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)))
            }
            _ => self.big().partial_cmp(&other.big()),
        }
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat::S(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rat::S(0, _))
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat::S(1, 1)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::S(n, d) => {
                if n == i64::MIN {
                    Rat::from_i128(-(n as i128), d as i128)
                } else {
                    Rat::S(-n, d)
                }
            }
            Rat::B(b) => Rat::from_big(-*b),
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        match (&self, &rhs) {
            (Rat::S(a, b), Rat::S(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.big() + rhs.big()),
        }
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        match (&self, &rhs) {
            (Rat::S(a, b), Rat::S(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128 - *c as i128 * *b as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.big() - rhs.big()),
        }
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        match (&self, &rhs) {
            (Rat::S(a, b), Rat::S(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.big() * rhs.big()),
        }
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self, &rhs) {
            (Rat::S(a, b), Rat::S(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rat::from_big(self.big() / rhs.big()),
        }
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        let lhs = std::mem::replace(self, Rat::S(0, 1));
        *self = lhs + rhs;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        let lhs = std::mem::replace(self, Rat::S(0, 1));
        *self = lhs - rhs;
    }
}

impl std::ops::MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        let lhs = std::mem::replace(self, Rat::S(0, 1));
        *self = lhs * rhs;
    }
}

impl std::ops::DivAssign for Rat {
    fn div_assign(&mut self, rhs: Rat) {
        let lhs = std::mem::replace(self, Rat::S(0, 1));
        *self = lhs / rhs;
    }
}

impl Display for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rat::S(n, 1) => write!(f, "{n}"),
            Rat::S(n, d) => write!(f, "{n}/{d}"),
            Rat::B(b) => write!(f, "{b}"),
        }
    }
}

impl Debug for Rat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(self, f)
    }
}

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::S(n, 1)
}

/// `p/q` as a rational; `q` must be nonzero.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::from_i128(p as i128, q as i128)
}

/// Parses the `"p/q"` (or plain `"p"`) notation used in the JSON schemas.
pub fn parse_rat(s: &str) -> crate::Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational `{s}`")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| crate::Error::Parse(format!("bad rational `{s}`")))?;
    if q.is_zero() {
        return Err(crate::Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(p, q))
}

/// Renders a rational in the `"p/q"` schema form (`"p"` when integral).
pub fn rat_string(r: &Rat) -> String {
    format!("{r}")
}
