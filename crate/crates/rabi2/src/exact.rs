//! Exact coefficient arithmetic: arbitrary-precision rationals, Gaussian
//! rationals (ℚ[i]), and dense univariate polynomials in the energy
//! indeterminate E over the Gaussian rationals.
//!
//! Every operation is exact and every zero test is decisive; there are no
//! epsilons anywhere in this module. The coefficient ring of a computation is
//! fixed once, through the [`Coeff`] type parameter: [`GaussianRational`] when
//! E is bound to a rational value, [`EPoly`] when E stays symbolic. Mixing
//! rings within one series is therefore unrepresentable.
//!
//! Rationals are kept canonical (gcd-reduced, positive denominator, zero is
//! 0/1) by construction; Gaussian rationals are canonical componentwise; an
//! [`EPoly`] stores ascending powers of E with trailing zeros trimmed, the
//! zero polynomial being the empty coefficient list.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Arbitrary-precision rational, canonical form enforced on construction.
pub type Rational = BigRational;

/// Element of ℚ[i]: rational real and imaginary parts.
pub type GaussianRational = Complex<Rational>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational (expected p or p/q)")]
    ParseRational(String),
    #[error("cannot parse {0:?} as a Gaussian rational (expected a, bi or a+bi)")]
    ParseGaussian(String),
    #[error("symbolic energy needs the polynomial coefficient ring; bind E to a rational or switch rings")]
    SymbolicEnergy,
}

/// The energy parameter E: either bound to an exact rational or left as the
/// polynomial indeterminate, in which case results are certified for every E
/// at once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Energy {
    Value(Rational),
    Symbolic,
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Energy::Value(v) => write!(f, "{}", v),
            Energy::Symbolic => write!(f, "symbolic"),
        }
    }
}

impl FromStr for Energy {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, ExactError> {
        if s.trim() == "symbolic" {
            Ok(Energy::Symbolic)
        } else {
            Ok(Energy::Value(parse_rational(s)?))
        }
    }
}

/// Parse "p" or "p/q" into a canonical rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    if t.split('/').nth(1).map(|d| d.trim() == "0").unwrap_or(false) {
        return Err(ExactError::DivisionByZero);
    }
    Rational::from_str(t).map_err(|_| ExactError::ParseRational(s.to_string()))
}

/// Parse "a", "bi", or "a+bi" (rational parts) into a Gaussian rational.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational, ExactError> {
    GaussianRational::from_str(s.trim()).map_err(|_| ExactError::ParseGaussian(s.to_string()))
}

/// Shorthand for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Real Gaussian rational.
pub fn gauss_real(r: Rational) -> GaussianRational {
    GaussianRational::new(r, Rational::zero())
}

/// The imaginary unit.
pub fn gauss_i() -> GaussianRational {
    GaussianRational::new(Rational::zero(), Rational::one())
}

// ---- Coefficient ring abstraction ----

/// Commutative ring with a ℚ-scalar action, an i-rotation, and an embedding of
/// the energy parameter. Implemented by [`GaussianRational`] (E bound) and
/// [`EPoly`] (E symbolic); series code is generic over this trait and the ring
/// choice is made exactly once per computation.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// Multiply by the rational scalar s.
    fn scalar_mul(&self, s: &Rational) -> Self;
    /// Divide by the rational scalar s; errors on s = 0.
    fn scalar_div(&self, s: &Rational) -> Result<Self, ExactError>;
    /// Multiply by iⁿ (period 4 in n).
    fn mul_i_pow(&self, n: usize) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_gaussian(c: &GaussianRational) -> Self;
    /// Embed the energy parameter. A bound value embeds into every ring; the
    /// symbolic indeterminate only into [`EPoly`].
    fn from_energy(e: &Energy) -> Result<Self, ExactError>;
    /// One-line exact rendering for reports.
    fn describe(&self) -> String;
}

impl Coeff for GaussianRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }

    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }

    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }

    fn ring_neg(&self) -> Self {
        -self
    }

    fn scalar_mul(&self, s: &Rational) -> Self {
        GaussianRational::new(&self.re * s, &self.im * s)
    }

    fn scalar_div(&self, s: &Rational) -> Result<Self, ExactError> {
        if s.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(GaussianRational::new(&self.re / s, &self.im / s))
    }

    fn mul_i_pow(&self, n: usize) -> Self {
        match n % 4 {
            0 => self.clone(),
            1 => GaussianRational::new(-self.im.clone(), self.re.clone()),
            2 => GaussianRational::new(-self.re.clone(), -self.im.clone()),
            _ => GaussianRational::new(self.im.clone(), -self.re.clone()),
        }
    }

    fn from_rational(r: &Rational) -> Self {
        gauss_real(r.clone())
    }

    fn from_gaussian(c: &GaussianRational) -> Self {
        c.clone()
    }

    fn from_energy(e: &Energy) -> Result<Self, ExactError> {
        match e {
            Energy::Value(v) => Ok(gauss_real(v.clone())),
            Energy::Symbolic => Err(ExactError::SymbolicEnergy),
        }
    }

    fn describe(&self) -> String {
        format_gaussian(self)
    }
}

/// Render a Gaussian rational as "a", "bi", or "a+bi" / "a-bi".
pub fn format_gaussian(c: &GaussianRational) -> String {
    if c.im.is_zero() {
        return format!("{}", c.re);
    }
    if c.re.is_zero() {
        return format!("{}i", c.im);
    }
    if c.im.is_negative() {
        format!("{}-{}i", c.re, -&c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

// ---- Polynomials in E ----

/// Dense univariate polynomial in the energy indeterminate E with Gaussian
/// rational coefficients, ascending powers, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct EPoly {
    coeffs: Vec<GaussianRational>,
}

impl EPoly {
    /// Canonicalize: drop trailing zero coefficients.
    pub fn from_coeffs(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        EPoly { coeffs }
    }

    pub fn constant(c: GaussianRational) -> Self {
        EPoly::from_coeffs(vec![c])
    }

    /// The indeterminate E itself.
    pub fn indeterminate() -> Self {
        EPoly {
            coeffs: vec![Zero::zero(), One::one()],
        }
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of E^k (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Horner evaluation at E = e.
    pub fn evaluate(&self, e: &GaussianRational) -> GaussianRational {
        let mut acc: GaussianRational = Zero::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * e + c;
        }
        acc
    }

    /// Exact printed coefficients, ascending powers of E.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_gaussian).collect()
    }
}

impl std::ops::Add for &EPoly {
    type Output = EPoly;

    fn add(self, rhs: &EPoly) -> EPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        EPoly::from_coeffs(out)
    }
}

impl std::ops::Sub for &EPoly {
    type Output = EPoly;

    fn sub(self, rhs: &EPoly) -> EPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        EPoly::from_coeffs(out)
    }
}

impl std::ops::Mul for &EPoly {
    type Output = EPoly;

    fn mul(self, rhs: &EPoly) -> EPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return EPoly { coeffs: vec![] };
        }
        let mut out: Vec<GaussianRational> =
            vec![Zero::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        EPoly::from_coeffs(out)
    }
}

impl std::ops::Neg for &EPoly {
    type Output = EPoly;

    fn neg(self) -> EPoly {
        EPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_gaussian(c))?,
                1 => write!(f, "({})*E", format_gaussian(c))?,
                _ => write!(f, "({})*E^{}", format_gaussian(c), k)?,
            }
        }
        Ok(())
    }
}

impl Coeff for EPoly {
    fn zero() -> Self {
        EPoly { coeffs: vec![] }
    }

    fn one() -> Self {
        EPoly::constant(One::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }

    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }

    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }

    fn ring_neg(&self) -> Self {
        -self
    }

    fn scalar_mul(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Coeff::zero();
        }
        EPoly {
            coeffs: self.coeffs.iter().map(|c| c.scalar_mul(s)).collect(),
        }
    }

    fn scalar_div(&self, s: &Rational) -> Result<Self, ExactError> {
        if s.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(EPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.scalar_div(s))
                .collect::<Result<_, _>>()?,
        })
    }

    fn mul_i_pow(&self, n: usize) -> Self {
        if n % 4 == 0 {
            return self.clone();
        }
        EPoly {
            coeffs: self.coeffs.iter().map(|c| c.mul_i_pow(n)).collect(),
        }
    }

    fn from_rational(r: &Rational) -> Self {
        EPoly::constant(gauss_real(r.clone()))
    }

    fn from_gaussian(c: &GaussianRational) -> Self {
        EPoly::constant(c.clone())
    }

    fn from_energy(e: &Energy) -> Result<Self, ExactError> {
        Ok(match e {
            Energy::Value(v) => EPoly::from_rational(v),
            Energy::Symbolic => EPoly::indeterminate(),
        })
    }

    fn describe(&self) -> String {
        format!("{}", self)
    }
}
