//! Scalar forward-mode automatic differentiation.
//!
//! A [`Dual`] carries a value together with one directional derivative
//! (tangent). Seeding the tangent of a single distribution parameter with 1
//! and running a numerical CDF routine on duals yields the derivative of the
//! CDF with respect to that parameter in the same pass.
//!
//! The [`Scalar`] trait abstracts over plain floats and duals so the CDF
//! kernels in [`crate::special`] are written once and instantiated for
//! values (`f32`/`f64`) and for derivatives (`Dual<f32>`/`Dual<f64>`).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::special;

/// Floating point precision underlying a computation.
///
/// Two instantiations exist, `f32` and `f64`. Iteration budgets and stopping
/// tolerances for the iterative CDF kernels are part of the precision.
pub trait Real:
    num_traits::Float + num_traits::FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Hard cap on iterations of the incomplete-gamma series/continued fraction.
    const MAX_CDF_ITERS: usize;

    /// Stop an iteration once the running derivative changes by less than
    /// this (relative to `max(1, |derivative|)`).
    fn tan_tolerance() -> Self;

    /// Stop an iteration once the running value changes by less than this
    /// (relative).
    fn value_tolerance() -> Self;

    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;

    fn lgamma(self) -> Self;
    fn digamma(self) -> Self;
    fn trigamma(self) -> Self;
    fn erf(self) -> Self;
    fn erfc(self) -> Self;
}

impl Real for f64 {
    const MAX_CDF_ITERS: usize = 500;

    #[inline]
    fn tan_tolerance() -> Self {
        1e-15
    }
    #[inline]
    fn value_tolerance() -> Self {
        1e-15
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn lgamma(self) -> Self {
        special::lgamma(self)
    }
    #[inline]
    fn digamma(self) -> Self {
        special::digamma(self)
    }
    #[inline]
    fn trigamma(self) -> Self {
        special::trigamma(self)
    }
    #[inline]
    fn erf(self) -> Self {
        special::erf(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        special::erfc(self)
    }
}

impl Real for f32 {
    const MAX_CDF_ITERS: usize = 200;

    #[inline]
    fn tan_tolerance() -> Self {
        1e-7
    }
    #[inline]
    fn value_tolerance() -> Self {
        1e-7
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn lgamma(self) -> Self {
        special::lgamma(self)
    }
    #[inline]
    fn digamma(self) -> Self {
        special::digamma(self)
    }
    #[inline]
    fn trigamma(self) -> Self {
        special::trigamma(self)
    }
    #[inline]
    fn erf(self) -> Self {
        special::erf(self)
    }
    #[inline]
    fn erfc(self) -> Self {
        special::erfc(self)
    }
}

/// A value and the derivative of that value with respect to the single
/// active parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual<R: Real> {
    pub val: R,
    pub tan: R,
}

impl<R: Real> Dual<R> {
    #[inline]
    pub fn new(val: R, tan: R) -> Self {
        Dual { val, tan }
    }

    /// Lift a constant: the tangent is zero.
    #[inline]
    pub fn constant(val: R) -> Self {
        Dual {
            val,
            tan: R::zero(),
        }
    }

    /// Lift the active parameter: the tangent is one.
    #[inline]
    pub fn variable(val: R) -> Self {
        Dual { val, tan: R::one() }
    }
}

impl<R: Real> Add for Dual<R> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Dual::new(self.val + rhs.val, self.tan + rhs.tan)
    }
}

impl<R: Real> Sub for Dual<R> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Dual::new(self.val - rhs.val, self.tan - rhs.tan)
    }
}

impl<R: Real> Mul for Dual<R> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Dual::new(
            self.val * rhs.val,
            self.tan * rhs.val + self.val * rhs.tan,
        )
    }
}

impl<R: Real> Div for Dual<R> {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q = self.val / rhs.val;
        Dual::new(q, (self.tan - q * rhs.tan) / rhs.val)
    }
}

impl<R: Real> Neg for Dual<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Dual::new(-self.val, -self.tan)
    }
}

/// A scalar the CDF kernels can run on: either a plain float or a dual.
///
/// Branch decisions inside kernels are taken on [`Scalar::value`]; derivative
/// bookkeeping rides along in the tangent where present.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    type R: Real;

    fn constant(v: Self::R) -> Self;
    /// Constant from an `f64` literal, rounded to the working precision.
    fn lit(v: f64) -> Self;
    fn value(self) -> Self::R;
    /// Derivative with respect to the active parameter (zero for plain floats).
    fn tangent(self) -> Self::R;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn lgamma(self) -> Self;
    fn digamma(self) -> Self;
    fn erf(self) -> Self;
    fn erfc(self) -> Self;

    /// `self^p` through `exp(p ln self)`; requires a positive base.
    #[inline]
    fn powf(self, p: Self) -> Self {
        (p * self.ln()).exp()
    }

    #[inline]
    fn zero() -> Self {
        Self::constant(Self::R::zero())
    }
    #[inline]
    fn one() -> Self {
        Self::constant(Self::R::one())
    }

    /// Stopping rule for an iteration that just produced increment `delta`
    /// on running result `current`. Plain floats watch the value; duals
    /// watch the derivative, not the value.
    fn settled(delta: Self, current: Self) -> bool;
}

macro_rules! impl_scalar_for_real {
    ($t:ty) => {
        impl Scalar for $t {
            type R = $t;

            #[inline]
            fn constant(v: $t) -> Self {
                v
            }
            #[inline]
            fn lit(v: f64) -> Self {
                <$t as Real>::from_f64(v)
            }
            #[inline]
            fn value(self) -> $t {
                self
            }
            #[inline]
            fn tangent(self) -> $t {
                0.0
            }
            #[inline]
            fn exp(self) -> Self {
                self.exp()
            }
            #[inline]
            fn ln(self) -> Self {
                self.ln()
            }
            #[inline]
            fn sqrt(self) -> Self {
                self.sqrt()
            }
            #[inline]
            fn sin(self) -> Self {
                self.sin()
            }
            #[inline]
            fn cos(self) -> Self {
                self.cos()
            }
            #[inline]
            fn lgamma(self) -> Self {
                Real::lgamma(self)
            }
            #[inline]
            fn digamma(self) -> Self {
                Real::digamma(self)
            }
            #[inline]
            fn erf(self) -> Self {
                Real::erf(self)
            }
            #[inline]
            fn erfc(self) -> Self {
                Real::erfc(self)
            }
            #[inline]
            fn settled(delta: Self, current: Self) -> bool {
                delta.abs() <= <$t as Real>::value_tolerance() * current.abs()
            }
        }
    };
}

impl_scalar_for_real!(f32);
impl_scalar_for_real!(f64);

impl<R: Real> Scalar for Dual<R> {
    type R = R;

    #[inline]
    fn constant(v: R) -> Self {
        Dual::constant(v)
    }
    #[inline]
    fn lit(v: f64) -> Self {
        Dual::constant(R::from_f64(v))
    }
    #[inline]
    fn value(self) -> R {
        self.val
    }
    #[inline]
    fn tangent(self) -> R {
        self.tan
    }

    #[inline]
    fn exp(self) -> Self {
        let e = self.val.exp();
        Dual::new(e, e * self.tan)
    }
    #[inline]
    fn ln(self) -> Self {
        Dual::new(self.val.ln(), self.tan / self.val)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.val.sqrt();
        Dual::new(s, self.tan / (s + s))
    }
    #[inline]
    fn sin(self) -> Self {
        Dual::new(self.val.sin(), self.val.cos() * self.tan)
    }
    #[inline]
    fn cos(self) -> Self {
        Dual::new(self.val.cos(), -self.val.sin() * self.tan)
    }
    #[inline]
    fn lgamma(self) -> Self {
        Dual::new(Real::lgamma(self.val), Real::digamma(self.val) * self.tan)
    }
    #[inline]
    fn digamma(self) -> Self {
        Dual::new(Real::digamma(self.val), Real::trigamma(self.val) * self.tan)
    }
    #[inline]
    fn erf(self) -> Self {
        // erf'(x) = 2/sqrt(pi) exp(-x^2)
        let d = R::FRAC_2_SQRT_PI() * (-self.val * self.val).exp();
        Dual::new(Real::erf(self.val), d * self.tan)
    }
    #[inline]
    fn erfc(self) -> Self {
        let d = R::FRAC_2_SQRT_PI() * (-self.val * self.val).exp();
        Dual::new(Real::erfc(self.val), -d * self.tan)
    }
    #[inline]
    fn settled(delta: Self, current: Self) -> bool {
        // Per the stopping rule for differentiated kernels: watch the
        // derivative, not the value.
        delta.tan.abs() <= R::tan_tolerance() * current.tan.abs().max(R::one())
    }
}

/// Elementary operation kinds for the checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Exp,
    Log,
    Pow,
    Sqrt,
    Sin,
    Cos,
    Lgamma,
    Digamma,
}

/// Domain violation in a checked elementary operation.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainError {
    pub op: &'static str,
    pub arg: f64,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain error in {}: argument {}", self.op, self.arg)
    }
}

impl std::error::Error for DomainError {}

/// Checked elementary operation on duals with domain validation.
///
/// Binary kinds require `b`; unary kinds ignore it.
pub fn elementary<R: Real>(
    op: ElementaryOp,
    a: Dual<R>,
    b: Option<Dual<R>>,
) -> Result<Dual<R>, DomainError> {
    use ElementaryOp::*;
    let second = |op: &'static str| {
        b.ok_or(DomainError {
            op,
            arg: f64::NAN,
        })
    };
    if !a.val.is_finite() {
        return Err(DomainError {
            op: "operand",
            arg: a.val.to_f64(),
        });
    }
    match op {
        Add => Ok(a + second("add")?),
        Sub => Ok(a - second("sub")?),
        Mul => Ok(a * second("mul")?),
        Div => {
            let b = second("div")?;
            if b.val == R::zero() {
                return Err(DomainError {
                    op: "div",
                    arg: 0.0,
                });
            }
            Ok(a / b)
        }
        Neg => Ok(-a),
        Exp => Ok(a.exp()),
        Log => {
            if a.val <= R::zero() {
                return Err(DomainError {
                    op: "log",
                    arg: a.val.to_f64(),
                });
            }
            Ok(a.ln())
        }
        Pow => {
            let b = second("pow")?;
            if a.val <= R::zero() {
                return Err(DomainError {
                    op: "pow",
                    arg: a.val.to_f64(),
                });
            }
            Ok(a.powf(b))
        }
        Sqrt => {
            if a.val < R::zero() {
                return Err(DomainError {
                    op: "sqrt",
                    arg: a.val.to_f64(),
                });
            }
            Ok(a.sqrt())
        }
        Sin => Ok(a.sin()),
        Cos => Ok(a.cos()),
        Lgamma => {
            if a.val <= R::zero() {
                return Err(DomainError {
                    op: "lgamma",
                    arg: a.val.to_f64(),
                });
            }
            Ok(Scalar::lgamma(a))
        }
        Digamma => {
            if a.val <= R::zero() {
                return Err(DomainError {
                    op: "digamma",
                    arg: a.val.to_f64(),
                });
            }
            Ok(Scalar::digamma(a))
        }
    }
}
