//! Complex arithmetic primitives shared by every other module: the scheme
//! order, partial exponential sums, and the per-step amplification function
//! `f` of the linear test problem, in double precision and in exact
//! arbitrary-precision rational arithmetic.
//!
//! The per-step function has the form `f(t) = head + tail * t^(r+1)`, where
//! `head` is the degree-(r+1) partial exponential sum at `z` and
//! `tail = z^(r+2) / (r+1)!`.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A point z = λh in the complex plane, double precision.
pub type ComplexValue = Complex<f64>;

/// A point z = λh with exact rational components, stored in lowest terms
/// (num-rational keeps `Ratio` canonical after every operation, so equality
/// is structural).
pub type RationalComplex = Complex<BigRational>;

/// Largest supported scheme order. Keeps every factorial and power exact in
/// rational mode within practical memory; the double-precision path is
/// accurate well past the orders the region analysis uses (r <= 4) but
/// degrades beyond r ~ 16.
pub const MAX_ORDER: u32 = 32;

/// The scheme parameter r. The scheme combines a degree-(r+1) Taylor
/// polynomial with a randomized correction; the mean per-step factor is the
/// degree-(r+2) partial exponential sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(u32);

impl Order {
    pub fn new(r: u32) -> Result<Self> {
        if r > MAX_ORDER {
            return Err(Error::OrderTooLarge(r));
        }
        Ok(Order(r))
    }

    #[inline]
    pub fn r(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Factorials 0!..=(MAX_ORDER+2)! as exact big integers, converted to f64 on
// demand. Never accumulated via floating multiplication, so the double
// conversion is correctly rounded at every index.
static FACTORIALS: LazyLock<Vec<BigInt>> = LazyLock::new(|| {
    let mut v = Vec::with_capacity(MAX_ORDER as usize + 3);
    let mut acc = BigInt::one();
    v.push(acc.clone());
    for j in 1..=(MAX_ORDER + 2) {
        acc *= j;
        v.push(acc.clone());
    }
    v
});

/// j! as an exact big integer, for j <= MAX_ORDER + 2.
pub fn factorial(j: u32) -> &'static BigInt {
    &FACTORIALS[j as usize]
}

/// j! correctly rounded to f64.
pub fn factorial_f64(j: u32) -> f64 {
    use num_traits::ToPrimitive;
    FACTORIALS[j as usize].to_f64().expect("factorial fits f64")
}

/// Partial exponential sum Σ_{j=0}^{m} z^j / j!, double precision.
///
/// Powers are built by repeated multiplication ascending in j, each divided
/// by the exact factorial; no floating factorial accumulation.
pub fn exp_taylor_partial(z: ComplexValue, m: u32) -> ComplexValue {
    let mut sum = ComplexValue::new(1.0, 0.0);
    let mut pow = ComplexValue::new(1.0, 0.0);
    for j in 1..=m {
        pow *= z;
        sum += pow / factorial_f64(j);
    }
    sum
}

/// Partial exponential sum Σ_{j=0}^{m} z^j / j! over exact rationals.
pub fn exp_taylor_partial_exact(z: &RationalComplex, m: u32) -> RationalComplex {
    let mut sum = RationalComplex::one();
    let mut pow = RationalComplex::one();
    for j in 1..=m {
        pow *= z;
        let jf = BigRational::from_integer(factorial(j).clone());
        sum += pow.clone().scale(jf.recip());
    }
    sum
}

/// Coefficients of the per-step function `f(t) = head + tail * t^(r+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCoeffs {
    /// Degree-(r+1) partial exponential sum at z.
    pub head: ComplexValue,
    /// z^(r+2) / (r+1)!.
    pub tail: ComplexValue,
    r: u32,
}

impl StepCoeffs {
    /// Evaluate f(t) assuming t has already been validated.
    #[inline]
    pub fn eval(&self, t: f64) -> ComplexValue {
        self.head + self.tail * t.powi(self.r as i32 + 1)
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.r
    }
}

/// Exact-rational counterpart of [`StepCoeffs`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepCoeffsExact {
    pub head: RationalComplex,
    pub tail: RationalComplex,
    r: u32,
}

impl StepCoeffsExact {
    pub fn eval(&self, t: &BigRational) -> RationalComplex {
        let mut tp = BigRational::one();
        for _ in 0..=self.r {
            tp *= t;
        }
        self.head.clone() + self.tail.clone().scale(tp)
    }
}

/// Head and tail coefficients of `f` for the given order at z.
pub fn step_coeffs(r: Order, z: ComplexValue) -> StepCoeffs {
    let head = exp_taylor_partial(z, r.r() + 1);
    let tail = z.powu(r.r() + 2) / factorial_f64(r.r() + 1);
    StepCoeffs { head, tail, r: r.r() }
}

/// Exact-rational head and tail coefficients.
pub fn step_coeffs_exact(r: Order, z: &RationalComplex) -> StepCoeffsExact {
    let head = exp_taylor_partial_exact(z, r.r() + 1);
    let mut pow = RationalComplex::one();
    for _ in 0..(r.r() + 2) {
        pow *= z;
    }
    let tail = pow.scale(BigRational::from_integer(factorial(r.r() + 1).clone()).recip());
    StepCoeffsExact { head, tail, r: r.r() }
}

/// Evaluate the per-step function f(t) for t in [0, 1].
pub fn f_eval(r: Order, z: ComplexValue, t: f64) -> Result<ComplexValue> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(step_coeffs(r, z).eval(t))
}

/// Exact-rational evaluation of the per-step function.
pub fn f_eval_exact(r: Order, z: &RationalComplex, t: &BigRational) -> Result<RationalComplex> {
    if t < &BigRational::zero() || t > &BigRational::one() {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(step_coeffs_exact(r, z).eval(t))
}

/// Build a rational complex from integer numerator/denominator pairs.
pub fn rational_complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> RationalComplex {
    Complex::new(
        BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
    )
}

/// |w|^2 = re^2 + im^2 over exact rationals.
pub fn norm_sqr_exact(w: &RationalComplex) -> BigRational {
    &w.re * &w.re + &w.im * &w.im
}

/// Rational complex to double precision.
pub fn to_complex_value(w: &RationalComplex) -> ComplexValue {
    use num_traits::ToPrimitive;
    ComplexValue::new(w.re.to_f64().unwrap_or(f64::NAN), w.im.to_f64().unwrap_or(f64::NAN))
}
