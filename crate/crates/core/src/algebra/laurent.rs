use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::scalar::Scalar;

/// A Laurent polynomial `sum_b c_b K^b` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(c: Scalar, b: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(b, c);
        p
    }

    pub fn constant(c: Scalar) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// `f_m(K) = (K^m - K^-m) / (q - q^-1)`
    pub fn f_m(m: u32) -> Self {
        let d = (Scalar::q() - Scalar::q_pow(-1)).try_inv().expect("q - 1/q is nonzero");
        let mut p = LaurentPoly::monomial(d.clone(), m as i64);
        p.add_term(-(m as i64), -d);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (b, c) in terms {
            p.add_term(b, c);
        }
        p
    }

    pub fn add_term(&mut self, b: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coeff(&self, b: i64) -> Scalar {
        self.terms.get(&b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        LaurentPoly::from_terms(self.terms().map(|(b, c)| (b, c * s)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (b1, c1) in self.terms() {
            for (b2, c2) in other.terms() {
                out.add_term(b1 + b2, c1 * c2);
            }
        }
        out
    }

    /// Substitute `K -> q^s K`.
    pub fn shift_q(&self, s: i64) -> Self {
        LaurentPoly::from_terms(self.terms().map(|(b, c)| (b, c * Scalar::q_pow(s * b))))
    }

    /// Substitute `K -> beta`; `beta` must be nonzero when negative powers occur.
    pub fn eval(&self, beta: &Scalar) -> Scalar {
        self.terms().fold(Scalar::zero(), |acc, (b, c)| {
            acc + c * beta.pow_i(b).expect("evaluation point is nonzero")
        })
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(b, c)| match b {
                0 => c.to_string(),
                _ if c.is_one() => format!("K^{b}"),
                _ => format!("{c}*K^{b}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
