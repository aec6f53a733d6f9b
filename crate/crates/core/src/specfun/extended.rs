//! Double-double arithmetic: a value is an unevaluated sum hi + lo of two
//! f64 with |lo| <= ulp(hi)/2, giving about 32 significant digits.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Long division: two correction steps on the f64 quotient.
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * DoubleDouble::new(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * DoubleDouble::new(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}

/// A complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtendedComplex {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ExtendedComplex {
    pub fn norm_sqr(self) -> DoubleDouble {
        self.re * self.re + self.im * self.im
    }
}

pub fn extend(z: Complex64) -> ExtendedComplex {
    ExtendedComplex {
        re: z.re.into(),
        im: z.im.into(),
    }
}

pub fn contract(z: ExtendedComplex) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

impl Add for ExtendedComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ExtendedComplex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ExtendedComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ExtendedComplex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for ExtendedComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ExtendedComplex {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for ExtendedComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        ExtendedComplex {
            re: (self.re * rhs.re + self.im * rhs.im) / d,
            im: (self.im * rhs.re - self.re * rhs.im) / d,
        }
    }
}
