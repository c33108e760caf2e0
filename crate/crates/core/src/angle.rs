//! Exact angles stored as rational multiples of π.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// An angle `(num/den)·π` kept in lowest terms with `den > 0`.
///
/// Every operation except [`AnglePi::to_radians`] and [`AnglePi::cis`] is exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AnglePi(Ratio<i64>);

/// Wire form of an angle: `{"num": p, "den": q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl AnglePi {
    pub const ZERO: AnglePi = AnglePi(Ratio::new_raw(0, 1));
    pub const PI: AnglePi = AnglePi(Ratio::new_raw(1, 1));
    pub const TWO_PI: AnglePi = AnglePi(Ratio::new_raw(2, 1));
    pub const HALF_PI: AnglePi = AnglePi(Ratio::new_raw(1, 2));

    /// `(num/den)·π`.
    ///
    /// # Panics
    /// If `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        AnglePi(Ratio::new(num, den))
    }

    /// Builds an angle from a wire fraction, rejecting a zero denominator.
    pub fn try_from_fraction(f: Fraction) -> Option<Self> {
        (f.den != 0).then(|| Self::new(f.num, f.den))
    }

    pub fn from_integer(k: i64) -> Self {
        AnglePi(Ratio::from_integer(k))
    }

    /// Multiplier of π as a reduced rational.
    pub fn pi_multiple(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn fraction(self) -> Fraction {
        Fraction {
            num: self.numer(),
            den: self.denom(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn scale(self, k: i64) -> Self {
        AnglePi(self.0 * k)
    }

    pub fn div_int(self, k: i64) -> Self {
        AnglePi(self.0 / k)
    }

    pub fn half(self) -> Self {
        self.div_int(2)
    }

    /// Representative in `[0, 2π)`.
    pub fn reduce(self) -> Self {
        let two = Ratio::from_integer(2);
        let mut r = self.0 % two;
        if r.is_negative() {
            r += two;
        }
        AnglePi(r)
    }

    /// Representative in `(-π, π]`.
    pub fn reduce_symmetric(self) -> Self {
        let r = self.reduce();
        if r.0 > Ratio::one() {
            AnglePi(r.0 - Ratio::from_integer(2))
        } else {
            r
        }
    }

    /// `true` iff the angle is an integer multiple of 2π.
    pub fn is_multiple_of_two_pi(self) -> bool {
        self.reduce().is_zero()
    }

    /// `ϑ / 2π` as an exact rational.
    pub fn turns(self) -> Ratio<i64> {
        self.0 / 2
    }

    /// `Some(k)` when the angle equals `2πk`.
    pub fn whole_turns(self) -> Option<i64> {
        let t = self.turns();
        t.is_integer().then(|| t.to_integer())
    }

    /// `true` iff the angle is `2πk` for an odd integer `k`.
    pub fn is_odd_multiple_of_two_pi(self) -> bool {
        matches!(self.whole_turns(), Some(k) if k.rem_euclid(2) == 1)
    }

    pub fn to_radians(self) -> f64 {
        let r = self.reduce_symmetric().0;
        // keep the whole-turn part out of the floating multiply
        (*r.numer() as f64 / *r.denom() as f64) * std::f64::consts::PI
    }

    /// `exp(i·angle)`, exact at multiples of π/2.
    pub fn cis<T: Real>(self) -> Complex<T> {
        let r = self.reduce().0;
        let (zero, one) = (T::zero(), T::one());
        if *r.denom() == 1 {
            return match r.numer() {
                0 => Complex::new(one, zero),
                _ => Complex::new(-one, zero),
            };
        }
        if *r.denom() == 2 {
            return match r.numer() {
                1 => Complex::new(zero, one),
                _ => Complex::new(zero, -one),
            };
        }
        let x = T::of(*r.numer() as f64) / T::of(*r.denom() as f64) * T::PI();
        Complex::new(x.cos(), x.sin())
    }
}

impl fmt::Debug for AnglePi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for AnglePi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}π", self.numer())
        } else {
            write!(f, "{}π/{}", self.numer(), self.denom())
        }
    }
}

impl Add for AnglePi {
    type Output = AnglePi;
    fn add(self, rhs: AnglePi) -> AnglePi {
        AnglePi(self.0 + rhs.0)
    }
}

impl AddAssign for AnglePi {
    fn add_assign(&mut self, rhs: AnglePi) {
        self.0 += rhs.0;
    }
}

impl Sub for AnglePi {
    type Output = AnglePi;
    fn sub(self, rhs: AnglePi) -> AnglePi {
        AnglePi(self.0 - rhs.0)
    }
}

impl SubAssign for AnglePi {
    fn sub_assign(&mut self, rhs: AnglePi) {
        self.0 -= rhs.0;
    }
}

impl Neg for AnglePi {
    type Output = AnglePi;
    fn neg(self) -> AnglePi {
        AnglePi(-self.0)
    }
}

impl Mul<i64> for AnglePi {
    type Output = AnglePi;
    fn mul(self, k: i64) -> AnglePi {
        self.scale(k)
    }
}

impl std::iter::Sum for AnglePi {
    fn sum<I: Iterator<Item = AnglePi>>(iter: I) -> AnglePi {
        iter.fold(AnglePi::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for AnglePi {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AnglePi {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}
