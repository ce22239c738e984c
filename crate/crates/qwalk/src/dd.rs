//! Double-double arithmetic: unevaluated sums of two `f64`s giving roughly
//! 31 significant decimal digits.
//!
//! The series-versus-closed-form consistency checks compare quantities that
//! agree to far below `f64` resolution (geometric tails of order `1e-24`),
//! so both sides are evaluated in this extended precision. Only the handful
//! of operations those checks need is provided: field arithmetic, square
//! roots, and the complex counterparts.
//!
//! Algorithms are the classical error-free transformations: Knuth's
//! `two_sum`, Dekker's `quick_two_sum`, and an FMA-based `two_prod`.

use num_complex::Complex64;

/// Errorless sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// Like [`two_sum`] but requires `|a| >= |b|` (or either being zero).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Errorless product via fused multiply-add: `a * b = p + e` exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// A double-double real number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

impl Dd {
    /// Renormalizing constructor: the parts may overlap.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Square root by one double-double Newton correction of the `f64` seed.
    ///
    /// The seed is accurate to 53 bits; a single corrected step reaches the
    /// full ~106 bits. Negative inputs return NaN parts, zero returns zero.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return ZERO;
        }
        if self.hi < 0.0 {
            return Dd::from_f64(f64::NAN);
        }
        let x0 = self.hi.sqrt();
        let x0dd = Dd::from_f64(x0);
        let residual = self - x0dd * x0dd;
        x0dd + residual / (x0dd + x0dd)
    }

    /// Multiplication by an exact `f64`.
    #[inline]
    pub fn scale(self, k: f64) -> Dd {
        let (p, e) = two_prod(self.hi, k);
        Dd::new(p, self.lo.mul_add(k, e))
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, rhs.hi);
        let (s2, e2) = two_sum(self.lo, rhs.lo);
        let (s, mut e) = quick_two_sum(s1, e1 + s2);
        e += e2;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let cross = self.hi.mul_add(rhs.lo, self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e + cross);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    /// Long division: three `f64` quotient digits, each reducing the residual.
    fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r1 = self - rhs.scale(q1);
        let q2 = r1.hi / rhs.hi;
        let r2 = r1 - rhs.scale(q2);
        let q3 = r2.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

/// A double-double complex number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

pub const C_ZERO: DdC = DdC { re: ZERO, im: ZERO };
pub const C_ONE: DdC = DdC { re: ONE, im: ZERO };

impl DdC {
    #[inline]
    pub fn new(re: Dd, im: Dd) -> DdC {
        DdC { re, im }
    }

    #[inline]
    pub fn from_f64s(re: f64, im: f64) -> DdC {
        DdC { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    #[inline]
    pub fn from_complex(z: Complex64) -> DdC {
        DdC::from_f64s(z.re, z.im)
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn conj(self) -> DdC {
        DdC { re: self.re, im: -self.im }
    }

    #[inline]
    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> Dd {
        self.norm_sqr().sqrt()
    }

    /// Principal square root: the branch with nonnegative real part.
    ///
    /// Uses the half-angle decomposition, splitting on the sign of the real
    /// part to keep the computed component well-conditioned. A negative real
    /// with `im == -0.0` lands on the lower branch cut side, as for `f64`.
    pub fn sqrt(self) -> DdC {
        let r = self.abs();
        if r.hi == 0.0 {
            return C_ZERO;
        }
        if self.re.hi >= 0.0 {
            let u = ((r + self.re).scale(0.5)).sqrt();
            let v = self.im / (u + u);
            DdC { re: u, im: v }
        } else {
            let t = ((r - self.re).scale(0.5)).sqrt();
            let t = if self.im.hi < 0.0 || (self.im.hi == 0.0 && self.im.hi.is_sign_negative()) {
                -t
            } else {
                t
            };
            let u = self.im / (t + t);
            DdC { re: u, im: t }
        }
    }

    #[inline]
    pub fn scale(self, k: Dd) -> DdC {
        DdC { re: self.re * k, im: self.im * k }
    }
}

impl std::ops::Neg for DdC {
    type Output = DdC;
    #[inline]
    fn neg(self) -> DdC {
        DdC { re: -self.re, im: -self.im }
    }
}

impl std::ops::Add for DdC {
    type Output = DdC;
    #[inline]
    fn add(self, rhs: DdC) -> DdC {
        DdC { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl std::ops::Sub for DdC {
    type Output = DdC;
    #[inline]
    fn sub(self, rhs: DdC) -> DdC {
        DdC { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl std::ops::Mul for DdC {
    type Output = DdC;
    #[inline]
    fn mul(self, rhs: DdC) -> DdC {
        DdC {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl std::ops::Div for DdC {
    type Output = DdC;
    /// Division through the conjugate; inputs here are O(1), so the naive
    /// `|w|^2` denominator cannot overflow.
    fn div(self, rhs: DdC) -> DdC {
        let n = rhs.norm_sqr();
        let num = self * rhs.conj();
        DdC { re: num.re / n, im: num.im / n }
    }
}
