//! Exact arithmetic in a real quadratic extension Q(sqrt d) of the rationals.
//!
//! A [`QElem`] is `a + b*sqrt(d)` with rational `a`, `b` and a non-negative
//! rational radicand `d`. Elements are kept normalized: whenever `b == 0`
//! the radicand is reset to zero, and perfect-square radicands are folded
//! into the rational part, so derived equality is exact field equality.

pub mod matrix;

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::real::{rat_to_bigfloat, Real};

pub type Rat = BigRational;
pub type Int = BigInt;

/// Shorthand for building a rational from small integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QElem {
    a: Rat,
    b: Rat,
    d: Rat,
}

impl QElem {
    /// `a + b*sqrt(d)`, normalized.
    pub fn new(a: Rat, b: Rat, d: Rat) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::NegativeRadicand(d.to_string()));
        }
        Ok(Self::normalized(a, b, d))
    }

    fn normalized(a: Rat, b: Rat, d: Rat) -> Self {
        if b.is_zero() || d.is_zero() {
            return QElem { a, b: Rat::zero(), d: Rat::zero() };
        }
        match rat_sqrt(&d) {
            Some(root) => QElem { a: a + b * root, b: Rat::zero(), d: Rat::zero() },
            None => QElem { a, b, d },
        }
    }

    pub fn from_rat(a: Rat) -> Self {
        QElem { a, b: Rat::zero(), d: Rat::zero() }
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(i)))
    }

    /// `sqrt(d)` as a field element.
    pub fn sqrt(d: &Rat) -> Result<Self> {
        Self::new(Rat::zero(), Rat::one(), d.clone())
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// The radicand carried by this element; zero for rationals.
    pub fn radicand(&self) -> &Rat {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Re-express over radicand `d`, which succeeds when `d` and the current
    /// radicand differ by a rational square factor.
    pub fn with_radicand(&self, d: &Rat) -> Option<QElem> {
        if self.b.is_zero() || &self.d == d {
            return Some(self.clone());
        }
        if d.is_zero() {
            return None;
        }
        let scale = rat_sqrt(&(&self.d / d))?;
        Some(QElem::normalized(self.a.clone(), &self.b * scale, d.clone()))
    }

    fn joint_radicand(&self, other: &QElem) -> Result<Rat> {
        if self.b.is_zero() {
            Ok(other.d.clone())
        } else if other.b.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::MixedRadicals { expected: self.d.to_string(), found: other.d.to_string() })
        }
    }

    fn expect_radicand(&self, other: &QElem) -> Rat {
        match self.joint_radicand(other) {
            Ok(d) => d,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_add(&self, other: &QElem) -> Result<QElem> {
        let d = self.joint_radicand(other)?;
        Ok(QElem::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_mul(&self, other: &QElem) -> Result<QElem> {
        let d = self.joint_radicand(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QElem::normalized(a, b, d))
    }

    pub fn conjugate(&self) -> QElem {
        QElem { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `a^2 - b^2 d`, the product with the conjugate.
    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * &self.d
    }

    pub fn recip(&self) -> Result<QElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // norm is nonzero: d is not a rational square
        let n = self.norm();
        Ok(QElem::normalized(&self.a / &n, -&self.b / &n, self.d.clone()))
    }

    pub fn checked_div(&self, other: &QElem) -> Result<QElem> {
        let inv = other.recip()?;
        self.try_mul(&inv)
    }

    /// Exact sign of the real number `a + b*sqrt(d)`.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> QElem {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Embedding into a real type at `bits` of precision.
    pub fn to_real<R: Real>(&self, bits: usize) -> R {
        q_to_real(self, bits)
    }

    pub fn to_f64(&self) -> f64 {
        q_to_real(self, 53)
    }
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Real embedding of `x` at `bits` of precision. The value is computed with
/// 64 guard bits and rounded once, so it lies within one ulp of the exact
/// real number.
pub fn q_to_real<R: Real>(x: &QElem, bits: usize) -> R {
    let work = bits + 64;
    let mut v = rat_to_bigfloat(&x.a, work);
    if !x.b.is_zero() {
        let root = rat_to_bigfloat(&x.d, work).sqrt(work, astro_float::RoundingMode::ToEven);
        let term = rat_to_bigfloat(&x.b, work).mul(&root, work, astro_float::RoundingMode::ToEven);
        v = v.add(&term, work, astro_float::RoundingMode::ToEven);
    }
    R::from_bigfloat(&v, bits)
}

pub fn q_sign(x: &QElem) -> i8 {
    x.signum()
}

impl PartialOrd for QElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QElem {
    /// Exact real ordering. Panics if the operands carry different radicals.
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = format!("sqrt({})", self.d);
        let coef = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{coef}")
        } else if let Some(rest) = coef.strip_prefix('-') {
            write!(f, "{} - {rest}", self.a)
        } else {
            write!(f, "{} + {coef}", self.a)
        }
    }
}

impl From<Rat> for QElem {
    fn from(a: Rat) -> Self {
        QElem::from_rat(a)
    }
}

impl From<i64> for QElem {
    fn from(i: i64) -> Self {
        QElem::from_int(i)
    }
}

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        -&self
    }
}

impl Add<&QElem> for &QElem {
    type Output = QElem;
    fn add(self, o: &QElem) -> QElem {
        let d = self.expect_radicand(o);
        QElem::normalized(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl Sub<&QElem> for &QElem {
    type Output = QElem;
    fn sub(self, o: &QElem) -> QElem {
        let d = self.expect_radicand(o);
        QElem::normalized(&self.a - &o.a, &self.b - &o.b, d)
    }
}

impl Mul<&QElem> for &QElem {
    type Output = QElem;
    fn mul(self, o: &QElem) -> QElem {
        self.try_mul(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Div<&QElem> for &QElem {
    type Output = QElem;
    /// Panics on division by zero, like the rational types it wraps.
    fn div(self, o: &QElem) -> QElem {
        self.checked_div(o).unwrap_or_else(|e| panic!("{e}"))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<QElem> for QElem {
            type Output = QElem;
            fn $f(self, o: QElem) -> QElem { (&self).$f(&o) }
        }
        impl $tr<&QElem> for QElem {
            type Output = QElem;
            fn $f(self, o: &QElem) -> QElem { (&self).$f(o) }
        }
        impl $tr<QElem> for &QElem {
            type Output = QElem;
            fn $f(self, o: QElem) -> QElem { self.$f(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Sum for QElem {
    fn sum<I: Iterator<Item = QElem>>(iter: I) -> QElem {
        iter.fold(QElem::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a QElem> for QElem {
    fn sum<I: Iterator<Item = &'a QElem>>(iter: I) -> QElem {
        iter.fold(QElem::zero(), |acc, x| acc + x)
    }
}
