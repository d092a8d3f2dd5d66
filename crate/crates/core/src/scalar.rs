//! The ground field Q(zeta_N)(q): rational functions in a formal parameter
//! `q` with cyclotomic coefficients.
//!
//! `q` is transcendental, so no power `q^k` with `k != 0` is ever 1. Values
//! are kept as reduced fractions with a monic denominator; equality is
//! structural equality of that canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::cyclo::Cyclo;
use crate::field::Field;
use crate::poly::Poly;

pub type QPoly = Poly<Cyclo>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: QPoly,
    den: QPoly,
}

impl Scalar {
    /// Build `num / den` in canonical form.
    pub fn fraction(num: QPoly, den: QPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        Scalar::normalize_lead(num, den)
    }

    fn normalize_lead(num: QPoly, den: QPoly) -> Self {
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            return Scalar { num, den };
        }
        let li = lead.inv().expect("nonzero");
        Scalar {
            num: num.scale(&li),
            den: den.scale(&li),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::cyclo(Cyclo::integer(n))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::cyclo(Cyclo::rational(r))
    }

    pub fn ratio(p: i64, d: i64) -> Self {
        Scalar::from_int(p) / Scalar::from_int(d)
    }

    pub fn cyclo(c: Cyclo) -> Self {
        Scalar {
            num: QPoly::constant(c),
            den: QPoly::one(),
        }
    }

    /// The primitive `n`-th root of unity `z`.
    pub fn zeta(n: u32) -> Self {
        Scalar::cyclo(Cyclo::zeta(n))
    }

    pub fn q() -> Self {
        Scalar::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = QPoly::monomial(Cyclo::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Scalar { num: m, den: QPoly::one() }
        } else {
            Scalar { num: QPoly::one(), den: m }
        }
    }

    /// `c * q^k`
    pub fn monomial(c: Cyclo, k: i64) -> Self {
        Scalar::cyclo(c) * Scalar::q_pow(k)
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a cyclotomic constant, if it does not depend on `q`.
    pub fn as_constant(&self) -> Option<&Cyclo> {
        if self.is_zero() {
            return None;
        }
        (self.num.degree() == Some(0) && self.den.is_one()).then(|| &self.num.coeffs()[0])
    }

    /// Decompose as `c * q^k` when the value is a single Laurent monomial.
    pub fn as_q_monomial(&self) -> Option<(Cyclo, i64)> {
        let (dn, c) = self.num.as_monomial()?;
        let (dd, l) = self.den.as_monomial()?;
        debug_assert!(l.is_one());
        Some((c.clone(), dn as i64 - dd as i64))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &other.try_inv()?)
    }

    pub fn try_inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::normalize_lead(self.den.clone(), self.num.clone()))
    }

    pub fn pow_i(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        Ok(Field::pow(&base, e.unsigned_abs()))
    }

    /// `(q^n - q^-n) / (q - q^-1)`
    pub fn q_number(n: i64) -> Scalar {
        (Scalar::q_pow(n) - Scalar::q_pow(-n)) / (Scalar::q() - Scalar::q_pow(-1))
    }

    /// Substitute a concrete complex `q`; `z` becomes `exp(2 pi i / N)`.
    /// Only meant as a floating-point cross-check.
    pub fn eval_complex(&self, q: Complex64) -> Option<Complex64> {
        let eval = |p: &QPoly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, c| acc * q + c.to_complex())
        };
        let d = eval(&self.den);
        (d.norm() > 0.0).then(|| eval(&self.num) / d)
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }
    fn one() -> Self {
        Scalar::from_int(1)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::reduce(self.num.add(&other.num), self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let a = self.den.div_exact(&g);
        let b = other.den.div_exact(&g);
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        Scalar::reduce(num, a.mul(&other.den))
    }
    fn sub(&self, other: &Self) -> Self {
        Field::add(self, &Field::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1), other.den.div_exact(&g1))
        };
        let (n2, d1) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2), self.den.div_exact(&g2))
        };
        Scalar::normalize_lead(n1.mul(&n2), d1.mul(&d2))
    }
    fn neg(&self) -> Self {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        self.try_inv().ok()
    }
    fn complexity(&self) -> usize {
        self.num.complexity() + self.den.complexity()
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(&self, &rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $body(&self, rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Scalar, b: &Scalar| Field::add(a, b));
forward_binop!(Sub, sub, |a: &Scalar, b: &Scalar| Field::sub(a, b));
forward_binop!(Mul, mul, |a: &Scalar, b: &Scalar| Field::mul(a, b));
forward_binop!(Div, div, |a: &Scalar, b: &Scalar| a
    .checked_div(b)
    .expect("scalar division by zero"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Field::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn write_qpoly(f: &mut fmt::Formatter<'_>, p: &QPoly) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let qk = match k {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{k}"),
        };
        let (neg, body) = match c.as_rational() {
            Some(r) => {
                let neg = r.is_negative();
                let mag = r.abs();
                let body = match (Field::is_one(&mag), qk.is_empty()) {
                    (true, true) => "1".to_string(),
                    (true, false) => qk.clone(),
                    (false, true) => mag.to_string(),
                    (false, false) => format!("{mag}*{qk}"),
                };
                (neg, body)
            }
            None if qk.is_empty() => (false, format!("({c})")),
            None => (false, format!("({c})*{qk}")),
        };
        match (first, neg) {
            (true, true) => write!(f, "-{body}")?,
            (true, false) => write!(f, "{body}")?,
            (false, true) => write!(f, " - {body}")?,
            (false, false) => write!(f, " + {body}")?,
        }
        first = false;
    }
    Ok(())
}

/// Canonical text form, e.g. `(q^2 + (z)*q)/(q - 1)`; parseable by
/// [`crate::expr`].
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            let multi = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
            if multi {
                write!(f, "(")?;
                write_qpoly(f, &self.num)?;
                write!(f, ")")
            } else {
                write_qpoly(f, &self.num)
            }
        } else {
            write!(f, "(")?;
            write_qpoly(f, &self.num)?;
            write!(f, ")/(")?;
            write_qpoly(f, &self.den)?;
            write!(f, ")")
        }
    }
}
