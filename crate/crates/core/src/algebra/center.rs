//! The Casimir element, the weight grading and the center `C[Omega]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::element::{Algebra, AlgebraElement, Monomial};
use super::laurent::LaurentPoly;
use super::AlgebraError;
use crate::field::Field;
use crate::scalar::Scalar;

/// `(q^{2m} - 1)(q - q^-1)`
fn casimir_denominator(m: u32) -> Scalar {
    (Scalar::q_pow(2 * m as i64) - Scalar::one()) * (Scalar::q() - Scalar::q_pow(-1))
}

/// The `K`-part of the Casimir: `Omega = FE + lambda(K)`,
/// `lambda(K) = (q^{2m} K^m + K^-m) / ((q^{2m} - 1)(q - q^-1))`.
pub fn casimir_k_part(m: u32) -> LaurentPoly {
    let d = casimir_denominator(m).try_inv().expect("nonzero");
    LaurentPoly::from_terms([
        (m as i64, Scalar::q_pow(2 * m as i64) * &d),
        (-(m as i64), d),
    ])
}

/// The Casimir `Omega = FE + lambda(K)` of `U_q(f_m(K))`.
pub fn casimir(alg: &Arc<Algebra>) -> Result<AlgebraElement, AlgebraError> {
    let m = alg.require_fm()?;
    Ok(&AlgebraElement::monomial(alg, Monomial::new(1, 0, 1), Scalar::one())
        + &AlgebraElement::laurent(alg, &casimir_k_part(m)))
}

/// The second printed form `EF + (K^m + q^{2m} K^-m) / ((q^{2m} - 1)(q - q^-1))`,
/// assembled by multiplication so that it goes through the rewriting rules.
pub fn casimir_from_ef(alg: &Arc<Algebra>) -> Result<AlgebraElement, AlgebraError> {
    let m = alg.require_fm()?;
    let d = casimir_denominator(m).try_inv().expect("nonzero");
    let tail = LaurentPoly::from_terms([
        (m as i64, d.clone()),
        (-(m as i64), Scalar::q_pow(2 * m as i64) * &d),
    ]);
    let ef = AlgebraElement::e(alg).try_mul(&AlgebraElement::f(alg))?;
    ef.try_add(&AlgebraElement::laurent(alg, &tail))
}

/// Components `u_n` with `K u_n = q^{2n} u_n K`; a monomial `F^a K^b E^c`
/// has weight `c - a`.
pub fn weight_decompose(u: &AlgebraElement) -> BTreeMap<i64, AlgebraElement> {
    let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
    for (m, c) in u.terms() {
        let slot = out
            .entry(m.weight())
            .or_insert_with(|| AlgebraElement::zero(u.algebra()));
        *slot = &*slot + &AlgebraElement::monomial(u.algebra(), *m, c.clone());
    }
    out
}

/// Check `K u = q^{2n} u K` by multiplication.
pub fn has_weight(u: &AlgebraElement, n: i64) -> bool {
    let k = AlgebraElement::k(u.algebra());
    let lhs = &k * u;
    let rhs = (u * &k).scale(&Scalar::q_pow(2 * n));
    lhs == rhs
}

/// A polynomial in `Omega` with Laurent coefficients in `K`:
/// `sum c_{p,i} Omega^p K^i`.
#[derive(Clone, PartialEq)]
pub struct OmegaPoly {
    terms: BTreeMap<(u32, i64), Scalar>,
}

impl OmegaPoly {
    pub fn zero() -> Self {
        OmegaPoly { terms: BTreeMap::new() }
    }

    fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = OmegaPoly::zero();
        for (b, c) in p.terms() {
            out.add_term(0, b, c.clone());
        }
        out
    }

    fn omega() -> Self {
        let mut out = OmegaPoly::zero();
        out.add_term(1, 0, Scalar::one());
        out
    }

    pub fn add_term(&mut self, p: u32, i: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, i)).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(p, i));
        }
    }

    /// `((p, i), c)` for each `c * Omega^p K^i`.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, i64), &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, p: u32, i: i64) -> Scalar {
        self.terms.get(&(p, i)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Highest power of `Omega` present.
    pub fn omega_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(p, _)| *p).max()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((p, i), c) in other.terms() {
            out.add_term(p, i, c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = OmegaPoly::zero();
        for ((p1, i1), c1) in self.terms() {
            for ((p2, i2), c2) in other.terms() {
                out.add_term(p1 + p2, i1 + i2, c1 * c2);
            }
        }
        out
    }

    fn scale(&self, s: &Scalar) -> Self {
        let mut out = OmegaPoly::zero();
        for ((p, i), c) in self.terms() {
            out.add_term(p, i, c * s);
        }
        out
    }

    /// Whether every term is `c * Omega^p` (no `K` dependence).
    pub fn is_polynomial_in_omega(&self) -> bool {
        self.terms.keys().all(|(_, i)| *i == 0)
    }

    /// Substitute the normal form of `Omega` and re-normalize.
    pub fn to_element(&self, alg: &Arc<Algebra>) -> Result<AlgebraElement, AlgebraError> {
        let omega = casimir(alg)?;
        let mut powers = vec![AlgebraElement::one(alg)];
        let mut acc = AlgebraElement::zero(alg);
        for ((p, i), c) in self.terms() {
            while powers.len() <= p as usize {
                let next = powers.last().unwrap().try_mul(&omega)?;
                powers.push(next);
            }
            let term = powers[p as usize]
                .try_mul(&AlgebraElement::k_pow(alg, i))?
                .scale(c);
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((p, i), c)| {
                let mut factors = Vec::new();
                match p {
                    0 => {}
                    1 => factors.push("Omega".to_string()),
                    _ => factors.push(format!("Omega^{p}")),
                }
                match i {
                    0 => {}
                    1 => factors.push("K".to_string()),
                    _ => factors.push(format!("K^{i}")),
                }
                match (factors.is_empty(), c.is_one()) {
                    (true, _) => c.to_string(),
                    (false, true) => factors.join("*"),
                    (false, false) => format!("{c}*{}", factors.join("*")),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rewrite a weight-0 element as `sum f_i(Omega) K^i`.
///
/// Uses `F^a K^b E^a = q^{2ab} K^b F^a E^a` and
/// `F^a E^a = prod_{r < a} (Omega - lambda(q^{2r} K))`, then checks the
/// result by substituting back.
pub fn express_in_omega(u: &AlgebraElement) -> Result<OmegaPoly, AlgebraError> {
    let alg = u.algebra();
    let m = alg.require_fm()?;
    if let Some((mono, _)) = u.terms().find(|(mono, _)| mono.e != mono.f) {
        return Err(AlgebraError::NotWeightZero(*mono));
    }
    let lambda = casimir_k_part(m);
    let mut fe_powers = vec![OmegaPoly::from_laurent(&LaurentPoly::constant(Scalar::one()))];
    let mut out = OmegaPoly::zero();
    for (mono, c) in u.terms() {
        let a = mono.f as usize;
        while fe_powers.len() <= a {
            let r = fe_powers.len() as i64 - 1;
            let factor = OmegaPoly::omega().add(&OmegaPoly::from_laurent(&lambda.shift_q(2 * r)).scale(&-Scalar::one()));
            let next = fe_powers.last().unwrap().mul(&factor);
            fe_powers.push(next);
        }
        let kb = OmegaPoly::from_laurent(&LaurentPoly::monomial(Scalar::one(), mono.k));
        let term = kb
            .mul(&fe_powers[a])
            .scale(&(c * Scalar::q_pow(2 * a as i64 * mono.k)));
        out = out.add(&term);
    }
    if out.to_element(alg)? != *u {
        return Err(AlgebraError::ReconstructionFailed);
    }
    Ok(out)
}

/// `[u, E] = [u, F] = [u, K] = 0`
pub fn is_central(u: &AlgebraElement) -> bool {
    let alg = u.algebra();
    [
        AlgebraElement::e(alg),
        AlgebraElement::f(alg),
        AlgebraElement::k(alg),
    ]
    .iter()
    .all(|g| u.commutator(g).map(|c| c.is_zero()).unwrap_or(false))
}

/// Central and expressible as a polynomial in `Omega` alone.
pub fn center_membership(u: &AlgebraElement) -> bool {
    is_central(u)
        && express_in_omega(u)
            .map(|p| p.is_polynomial_in_omega())
            .unwrap_or(false)
}

/// Number of monomials `F^a K^b E^c` with `a + |b| + c <= n`, i.e.
/// `(n + 1)(n + 2)(2n + 3) / 6`.
pub fn pbw_monomial_count(n: u64) -> u128 {
    let n = n as u128;
    (n + 1) * (n + 2) * (2 * n + 3) / 6
}

/// All monomials of total degree `<= n`, in monomial order.
pub fn pbw_monomials(n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=n {
        for c in 0..=(n - a) {
            let r = (n - a - c) as i64;
            for b in -r..=r {
                out.push(Monomial::new(a, b, c));
            }
        }
    }
    out.sort();
    out
}
