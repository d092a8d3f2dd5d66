//! Dense univariate polynomials over an exact field.

use crate::field::Field;

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c * x^deg`
    pub fn monomial(c: F, deg: usize) -> Self {
        let mut coeffs = vec![F::zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn x() -> Self {
        Poly::monomial(F::one(), 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, deg: usize) -> F {
        self.coeffs.get(deg).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Single nonzero term `(degree, coefficient)`, if that is all there is.
    pub fn as_monomial(&self) -> Option<(usize, &F)> {
        let v = self.valuation()?;
        (v + 1 == self.coeffs.len()).then(|| (v, &self.coeffs[v]))
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(F::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `x^k`; the caller guarantees divisibility.
    pub fn unshift(&self, k: usize) -> Self {
        debug_assert!(self.valuation().map_or(true, |v| v >= k));
        Poly {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some((d, c)) = other.as_monomial() {
            return self.scale(c).shift(d);
        }
        if let Some((d, c)) = self.as_monomial() {
            return other.scale(c).shift(d);
        }
        let mut coeffs = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.coeffs[dd]
            .inv()
            .expect("leading coefficient is nonzero");
        if let Some((k, c)) = divisor.as_monomial() {
            // Split at degree k.
            let c_inv = c.inv().expect("nonzero");
            let rem = Poly::from_coeffs(self.coeffs.iter().take(k).cloned().collect());
            let quo = Poly::from_coeffs(
                self.coeffs.iter().skip(k).map(|a| a.mul(&c_inv)).collect(),
            );
            return (quo, rem);
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![F::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = rem[i + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] = rem[i + j].sub(&c.mul(d));
                }
            }
            quo[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }

    /// Exact quotient; debug-checks that the remainder vanishes.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.make_monic();
        }
        if other.is_zero() {
            return self.make_monic();
        }
        // x^k against anything: the gcd is x^min(k, val).
        if let Some((k, _)) = self.as_monomial() {
            let v = other.valuation().unwrap();
            return Poly::monomial(F::one(), k.min(v));
        }
        if let Some((k, _)) = other.as_monomial() {
            let v = self.valuation().unwrap();
            return Poly::monomial(F::one(), k.min(v));
        }
        let mut a = self.make_monic();
        let mut b = other.make_monic();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.div_rem(&b).1.make_monic();
            a = b;
            b = r;
        }
        a
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let li = l.inv().expect("nonzero");
                (r0.scale(&li), s0.scale(&li), t0.scale(&li))
            }
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Compose `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul(other).add(&Poly::constant(c.clone())))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn complexity(&self) -> usize {
        self.coeffs.iter().map(|c| 1 + c.complexity()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(cs: &[i64]) -> Poly<BigRational> {
        Poly::from_coeffs(cs.iter().map(|&c| BigRational::from_i64(c)).collect())
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[1, 0, 3, -2, 5]);
        let b = p(&[2, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = p(&[-1, 1]); // x - 1
        let a = f.mul(&p(&[1, 1]));
        let b = f.mul(&p(&[2, 0, 1]));
        assert_eq!(a.gcd(&b), f);
        assert_eq!(p(&[0, 0, 3]).gcd(&p(&[0, 1, 1])), p(&[0, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[1, 2, 1]);
        let b = p(&[-1, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, p(&[1, 1]));
    }
}
