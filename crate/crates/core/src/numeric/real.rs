//! Scalar abstraction shared by the numeric kernels: hardware `f64` or a
//! software float with a chosen number of mantissa bits.

use std::cell::RefCell;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::field::Rat;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

pub trait Real:
    Clone
    + Send
    + Sync
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64, bits: usize) -> Self;
    /// Round a wide software float to this type at `bits` precision.
    fn from_bigfloat(v: &BigFloat, bits: usize) -> Self;
    fn to_f64(&self) -> f64;
    fn bits(&self) -> usize;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    /// Nearest integer, ties to even.
    fn round(&self) -> Self;
    fn pi(bits: usize) -> Self;

    fn zero(bits: usize) -> Self {
        Self::from_f64(0.0, bits)
    }

    fn one(bits: usize) -> Self {
        Self::from_f64(1.0, bits)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

pub fn rat_to_bigfloat(r: &Rat, bits: usize) -> BigFloat {
    let n = int_to_bigfloat(r.numer(), bits);
    let d = int_to_bigfloat(r.denom(), bits);
    n.div(&d, bits, RM)
}

fn int_to_bigfloat(i: &BigInt, bits: usize) -> BigFloat {
    if i.is_zero() {
        return BigFloat::from_word(0, bits);
    }
    let p = bits.max(i.bits() as usize + 64);
    let v = with_consts(|cc| BigFloat::parse(&i.to_string(), Radix::Dec, p, RM, cc));
    let mut v = v;
    v.set_precision(bits, RM).expect("valid precision");
    v
}

/// Correctly rounded conversion of a software float to `f64`: the top 64
/// mantissa bits with a sticky bit for the rest, then a single rounding.
/// `x * 2^e` without spurious overflow or underflow in the scale factor.
fn scale_by_pow2(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

fn bigfloat_to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _, sign, exp, _)) = v.as_raw_parts() else {
        return f64::NAN;
    };
    if words.iter().all(|&w| w == 0) {
        return 0.0;
    }
    let top = *words.last().unwrap();
    let sticky = words[..words.len() - 1].iter().any(|&w| w != 0);
    let w = if sticky { top | 1 } else { top };
    let mag = scale_by_pow2(w as f64, exp - 64);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

impl Real for f64 {
    fn from_f64(v: f64, _bits: usize) -> Self {
        v
    }
    fn from_bigfloat(v: &BigFloat, _bits: usize) -> Self {
        bigfloat_to_f64(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn bits(&self) -> usize {
        53
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn round(&self) -> Self {
        f64::round_ties_even(*self)
    }
    fn pi(_bits: usize) -> Self {
        std::f64::consts::PI
    }
}

/// Software float; astro-float rounds precision up to whole 64-bit words.
#[derive(Clone, Debug)]
pub struct SoftFloat {
    v: BigFloat,
    p: usize,
}

impl SoftFloat {
    pub fn inner(&self) -> &BigFloat {
        &self.v
    }
}

impl PartialEq for SoftFloat {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl PartialOrd for SoftFloat {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

macro_rules! soft_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for SoftFloat {
            type Output = SoftFloat;
            fn $f(self, o: SoftFloat) -> SoftFloat {
                let p = self.p.max(o.p);
                SoftFloat { v: self.v.$f(&o.v, p, RM), p }
            }
        }
    };
}
soft_binop!(Add, add);
soft_binop!(Sub, sub);
soft_binop!(Mul, mul);
soft_binop!(Div, div);

impl Neg for SoftFloat {
    type Output = SoftFloat;
    fn neg(self) -> SoftFloat {
        SoftFloat { v: self.v.neg(), p: self.p }
    }
}

impl Real for SoftFloat {
    fn from_f64(v: f64, bits: usize) -> Self {
        SoftFloat { v: BigFloat::from_f64(v, bits), p: bits }
    }
    fn from_bigfloat(v: &BigFloat, bits: usize) -> Self {
        let mut v = v.clone();
        v.set_precision(bits, RM).expect("valid precision");
        SoftFloat { v, p: bits }
    }
    fn to_f64(&self) -> f64 {
        bigfloat_to_f64(&self.v)
    }
    fn bits(&self) -> usize {
        self.p
    }
    fn sin(&self) -> Self {
        let v = with_consts(|cc| self.v.sin(self.p, RM, cc));
        SoftFloat { v, p: self.p }
    }
    fn cos(&self) -> Self {
        let v = with_consts(|cc| self.v.cos(self.p, RM, cc));
        SoftFloat { v, p: self.p }
    }
    fn sqrt(&self) -> Self {
        SoftFloat { v: self.v.sqrt(self.p, RM), p: self.p }
    }
    fn abs(&self) -> Self {
        SoftFloat { v: self.v.abs(), p: self.p }
    }
    fn round(&self) -> Self {
        SoftFloat { v: self.v.round(0, RM), p: self.p }
    }
    fn pi(bits: usize) -> Self {
        SoftFloat { v: with_consts(|cc| cc.pi(bits, RM)), p: bits }
    }
}
