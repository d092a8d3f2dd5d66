//! Elements of the cyclotomic field Q(z) = Q[z]/(Phi_N(z)).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::field::Field;
use crate::poly::Poly;

pub type RatPoly = Poly<BigRational>;

/// `Phi_n`, computed as `(z^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<RatPoly> {
    assert!(n >= 1, "cyclotomic order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<RatPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut acc = RatPoly::monomial(<BigRational as Field>::one(), n as usize).sub(&RatPoly::one());
    for d in (1..n).filter(|d| n % d == 0) {
        acc = acc.div_exact(&cyclotomic_polynomial(d));
    }
    let acc = Arc::new(acc);
    cache.lock().unwrap().insert(n, acc.clone());
    acc
}

pub fn euler_phi(n: u32) -> u32 {
    cyclotomic_polynomial(n).degree().unwrap() as u32
}

/// A cyclotomic number in the power basis `1, z, ..., z^(phi(N)-1)`.
///
/// Rational values are stored with order 1 so that they mix freely with any
/// cyclotomic field; combining two genuinely different orders panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<BigRational>,
}

fn common_order(a: u32, b: u32) -> u32 {
    match (a, b) {
        (1, o) | (o, 1) => o,
        (x, y) if x == y => x,
        (x, y) => panic!("mismatched cyclotomic orders {x} and {y}"),
    }
}

impl Cyclo {
    pub fn rational(r: BigRational) -> Self {
        Cyclo::from_poly(1, RatPoly::constant(r))
    }

    pub fn integer(n: i64) -> Self {
        Cyclo::rational(BigRational::from_i64(n))
    }

    /// The primitive root `z` of order `n`.
    pub fn zeta(n: u32) -> Self {
        Cyclo::from_poly(n, RatPoly::x())
    }

    /// Reduce `p(z)` modulo `Phi_order`.
    pub fn from_poly(order: u32, p: RatPoly) -> Self {
        let p = if p.degree().unwrap_or(0) >= euler_phi(order) as usize {
            p.div_rem(&cyclotomic_polynomial(order)).1
        } else {
            p
        };
        let coeffs = p.coeffs().to_vec();
        let order = if coeffs.len() <= 1 { 1 } else { order };
        Cyclo { order, coeffs }
    }

    /// Order of the ambient root of unity (1 for rational values).
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients in the power basis of `Q(zeta_n)`, padded to `phi(n)`.
    pub fn coeffs_in(&self, n: u32) -> Vec<BigRational> {
        let n = common_order(self.order, n);
        let mut out = self.coeffs.clone();
        out.resize(euler_phi(n) as usize, <BigRational as Field>::zero());
        out
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(<BigRational as Field>::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn poly(&self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.clone())
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.order as f64);
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
            acc * z + Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
        })
    }

    pub fn pow_i(&self, e: i64) -> Option<Cyclo> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Some(Field::pow(&base, e.unsigned_abs()))
    }
}

impl Field for Cyclo {
    fn zero() -> Self {
        Cyclo { order: 1, coeffs: Vec::new() }
    }
    fn one() -> Self {
        Cyclo::integer(1)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let order = common_order(self.order, other.order);
        Cyclo::from_poly(order, self.poly().add(&other.poly()))
    }
    fn sub(&self, other: &Self) -> Self {
        let order = common_order(self.order, other.order);
        Cyclo::from_poly(order, self.poly().sub(&other.poly()))
    }
    fn mul(&self, other: &Self) -> Self {
        let order = common_order(self.order, other.order);
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Cyclo::rational(a * b);
        }
        Cyclo::from_poly(order, self.poly().mul(&other.poly()))
    }
    fn neg(&self) -> Self {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Cyclo::rational(r.recip()));
        }
        let modulus = cyclotomic_polynomial(self.order);
        let (g, s, _) = self.poly().ext_gcd(&modulus);
        debug_assert!(g.is_one(), "cyclotomic polynomial is irreducible");
        Some(Cyclo::from_poly(self.order, s))
    }
    fn complexity(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| (c.numer().bits() + c.denom().bits()) as usize)
            .sum()
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Descending powers of `z`, e.g. `-1/2*z^2 + z - 3`.
impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if Field::is_zero(c) {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let z = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            match (Field::is_one(&mag), z.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{z}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{z}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &RatPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_powers() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let z = Cyclo::zeta(n);
            assert!(Field::pow(&z, n as u64).is_one(), "z^{n} != 1");
            let phi = cyclotomic_polynomial(n);
            let val = phi
                .coeffs()
                .iter()
                .rev()
                .fold(Cyclo::zero(), |acc, c| acc.mul(&z).add(&Cyclo::rational(c.clone())));
            assert!(val.is_zero());
        }
        let i = Cyclo::zeta(4);
        assert_eq!(i.mul(&i), Cyclo::integer(-1));
        assert_eq!(Cyclo::zeta(2), Cyclo::integer(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let z = Cyclo::zeta(6);
        let a = z.add(&Cyclo::integer(3)).mul(&z);
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn padded_coefficients() {
        assert_eq!(Cyclo::integer(2).coeffs_in(6).len(), 2);
        assert_eq!(Cyclo::zeta(12).coeffs_in(12).len(), 4);
    }
}
