//! Real scalar types used by the tracker: hardware `f64` and a software
//! double-double (`Dd`, about 32 significant digits) for escalated retries.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Zero};

pub trait Real:
    Copy + Send + Sync + fmt::Debug + PartialOrd + Num + Neg<Output = Self> + 'static
{
    /// Unit roundoff of the format.
    const EPS: f64;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;

    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

pub fn cx<R: Real>(z: Complex64) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

pub fn to_c64<R: Real>(z: Complex<R>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn cabs<R: Real>(z: Complex<R>) -> R {
    z.norm_sqr().sqrt()
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, o: Dd) -> Dd {
        let q = (self / o).hi.trunc();
        self - o * Dd::new(q)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::new(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Dd::new)
    }
}

impl Real for Dd {
    const EPS: f64 = 4.93e-32;

    fn from_f64(v: f64) -> Self {
        Dd::new(v)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::zero();
        }
        let a = self.hi.sqrt();
        let s = Dd::new(a);
        let (p, e) = two_prod(a, a);
        let r = (self - Dd { hi: p, lo: e }).hi / (2.0 * a);
        s + Dd::new(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_carries_extra_digits() {
        let third = Dd::one() / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::one();
        assert!(back.to_f64().abs() < 1e-30);
        let tiny = Dd::new(1.0) + Dd::new(1e-20);
        assert_eq!((tiny - Dd::one()).to_f64(), 1e-20);
    }

    #[test]
    fn dd_sqrt_two() {
        let r = Dd::new(2.0).sqrt();
        let err = r * r - Dd::new(2.0);
        assert!(err.to_f64().abs() < 1e-30);
        assert_eq!(Dd::new(-1.0).sqrt(), Dd::zero());
    }

    #[test]
    fn dd_ordering_and_rem() {
        assert!(Dd::new(1.0) < Dd::new(1.0) + Dd::new(1e-25));
        let r = Dd::new(7.5) % Dd::new(2.0);
        assert_eq!(r.to_f64(), 1.5);
    }

    #[test]
    fn complex_dd_arithmetic() {
        let z: Complex<Dd> = cx(Complex64::new(1.0, 2.0));
        let w = z * z / z;
        assert!((to_c64(w) - Complex64::new(1.0, 2.0)).norm() < 1e-15);
        assert!((cabs(z).to_f64() - 5f64.sqrt()).abs() < 1e-15);
    }
}
