use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::laurent::LaurentPoly;
use super::AlgebraError;
use crate::field::Field;
use crate::scalar::Scalar;

/// The ordered monomial `F^f K^k E^e`.
///
/// The derived order is lexicographic in `(f, k, e)`, which is also the
/// rendering order of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub f: u32,
    pub k: i64,
    pub e: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { f: 0, k: 0, e: 0 };

    pub fn new(f: u32, k: i64, e: u32) -> Self {
        Monomial { f, k, e }
    }

    /// `a + |b| + c`
    pub fn degree(&self) -> u64 {
        self.f as u64 + self.k.unsigned_abs() + self.e as u64
    }

    /// The `n` with `K u = q^{2n} u K`.
    pub fn weight(&self) -> i64 {
        self.e as i64 - self.f as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.f {
            0 => {}
            1 => parts.push("F".to_string()),
            a => parts.push(format!("F^{a}")),
        }
        match self.k {
            0 => {}
            1 => parts.push("K".to_string()),
            b => parts.push(format!("K^{b}")),
        }
        match self.e {
            0 => {}
            1 => parts.push("E".to_string()),
            c => parts.push(format!("E^{c}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

type Expansion = Arc<Vec<(Monomial, Scalar)>>;

/// The algebra `U_q(f(K))`: generators `E, F, K^{+-1}` with
/// `KE = q^2 EK`, `KF = q^-2 FK` and `EF - FE = f(K)`.
pub struct Algebra {
    f: LaurentPoly,
    m: Option<u32>,
    ef_cache: Mutex<HashMap<(u32, u32), Expansion>>,
    shift_sums: Mutex<Vec<LaurentPoly>>,
}

impl Algebra {
    pub fn new(f: LaurentPoly) -> Arc<Self> {
        let m = f
            .terms()
            .map(|(b, _)| b)
            .max()
            .filter(|&b| b >= 1 && LaurentPoly::f_m(b as u32) == f)
            .map(|b| b as u32);
        Arc::new(Algebra {
            f,
            m,
            ef_cache: Mutex::default(),
            shift_sums: Mutex::new(vec![LaurentPoly::zero()]),
        })
    }

    /// The quantum-group case `f = f_m`.
    /// Shared per `m`, so product caches are reused across callers.
    pub fn fm(m: u32) -> Arc<Self> {
        assert!(m >= 1, "m must be positive");
        static SHARED: OnceLock<Mutex<HashMap<u32, Arc<Algebra>>>> = OnceLock::new();
        let shared = SHARED.get_or_init(Default::default);
        shared
            .lock()
            .unwrap()
            .entry(m)
            .or_insert_with(|| Algebra::new(LaurentPoly::f_m(m)))
            .clone()
    }

    pub fn f(&self) -> &LaurentPoly {
        &self.f
    }

    /// `Some(m)` when `f = f_m`.
    pub fn m(&self) -> Option<u32> {
        self.m
    }

    pub fn require_fm(&self) -> Result<u32, AlgebraError> {
        self.m.ok_or(AlgebraError::NotQuantumGroupCase)
    }

    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || (self.f == other.f && self.m == other.m)
    }

    /// `S_i(K) = sum_{t < i} f(q^{-2t} K)`, so that `E F^i = F^i E + F^{i-1} S_i(K)`.
    fn shift_sum(&self, i: u32) -> LaurentPoly {
        let mut sums = self.shift_sums.lock().unwrap();
        while sums.len() <= i as usize {
            let t = sums.len() as i64 - 1;
            let next = sums.last().unwrap().add(&self.f.shift_q(-2 * t));
            sums.push(next);
        }
        sums[i as usize].clone()
    }

    /// Normal form of `E^c F^d`, built as `E * (E^{c-1} F^d)`.
    fn e_pow_f_pow(&self, c: u32, d: u32) -> Expansion {
        if let Some(hit) = self.ef_cache.lock().unwrap().get(&(c, d)) {
            return hit.clone();
        }
        let result: Expansion = if c == 0 || d == 0 {
            Arc::new(vec![(Monomial::new(d, 0, c), Scalar::one())])
        } else {
            let prev = self.e_pow_f_pow(c - 1, d);
            let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
            for (mono, coef) in prev.iter() {
                // E F^i K^l E^j = q^{-2l} F^i K^l E^{j+1} + F^{i-1} S_i(K) K^l E^j
                let lead = Monomial::new(mono.f, mono.k, mono.e + 1);
                add_into(&mut acc, lead, coef * Scalar::q_pow(-2 * mono.k));
                if mono.f > 0 {
                    for (b, s) in self.shift_sum(mono.f).terms() {
                        let m2 = Monomial::new(mono.f - 1, mono.k + b, mono.e);
                        add_into(&mut acc, m2, coef * s);
                    }
                }
            }
            Arc::new(acc.into_iter().collect())
        };
        self.ef_cache.lock().unwrap().insert((c, d), result.clone());
        result
    }

    /// Normal form of the product of two ordered monomials.
    pub fn monomial_product(&self, x: Monomial, y: Monomial) -> Vec<(Monomial, Scalar)> {
        if x.e == 0 || y.f == 0 {
            // F^a K^b (E^c) (F^d) K^e E^g with one of c, d zero.
            let phase = -2 * (x.k * y.f as i64 + x.e as i64 * y.k);
            return vec![(
                Monomial::new(x.f + y.f, x.k + y.k, x.e + y.e),
                Scalar::q_pow(phase),
            )];
        }
        self.e_pow_f_pow(x.e, y.f)
            .iter()
            .map(|(mid, coef)| {
                // F^a K^b (F^i K^l E^j) K^e E^g
                let phase = -2 * (x.k * mid.f as i64 + mid.e as i64 * y.k);
                (
                    Monomial::new(x.f + mid.f, x.k + mid.k + y.k, mid.e + y.e),
                    coef * Scalar::q_pow(phase),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("f", &self.f)
            .field("m", &self.m)
            .finish()
    }
}

fn add_into(acc: &mut BTreeMap<Monomial, Scalar>, mono: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&mono) {
        Some(slot) => {
            *slot = &*slot + &c;
            if slot.is_zero() {
                acc.remove(&mono);
            }
        }
        None => {
            acc.insert(mono, c);
        }
    }
}

/// A finitely supported combination of ordered monomials `F^a K^b E^c`.
#[derive(Clone)]
pub struct AlgebraElement {
    alg: Arc<Algebra>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl AlgebraElement {
    pub fn zero(alg: &Arc<Algebra>) -> Self {
        AlgebraElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &Arc<Algebra>) -> Self {
        AlgebraElement::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: &Arc<Algebra>, s: Scalar) -> Self {
        AlgebraElement::monomial(alg, Monomial::ONE, s)
    }

    pub fn monomial(alg: &Arc<Algebra>, mono: Monomial, s: Scalar) -> Self {
        let mut out = AlgebraElement::zero(alg);
        add_into(&mut out.terms, mono, s);
        out
    }

    pub fn from_terms(
        alg: &Arc<Algebra>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut out = AlgebraElement::zero(alg);
        for (m, c) in terms {
            add_into(&mut out.terms, m, c);
        }
        out
    }

    pub fn e(alg: &Arc<Algebra>) -> Self {
        AlgebraElement::monomial(alg, Monomial::new(0, 0, 1), Scalar::one())
    }

    pub fn f(alg: &Arc<Algebra>) -> Self {
        AlgebraElement::monomial(alg, Monomial::new(1, 0, 0), Scalar::one())
    }

    pub fn k(alg: &Arc<Algebra>) -> Self {
        AlgebraElement::k_pow(alg, 1)
    }

    pub fn k_pow(alg: &Arc<Algebra>, b: i64) -> Self {
        AlgebraElement::monomial(alg, Monomial::new(0, b, 0), Scalar::one())
    }

    /// `p(K)` as an element.
    pub fn laurent(alg: &Arc<Algebra>, p: &LaurentPoly) -> Self {
        AlgebraElement::from_terms(alg, p.terms().map(|(b, c)| (Monomial::new(0, b, 0), c.clone())))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Largest `a + |b| + c` over the support; 0 for the zero element.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.alg.same_as(&other.alg) {
            Ok(())
        } else {
            Err(AlgebraError::MismatchedAlgebras)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, *m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        AlgebraElement::from_terms(&self.alg, self.terms.iter().map(|(m, c)| (*m, c * s)))
    }

    /// Normal form of `self * other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let cc = c1 * c2;
                for (m, c) in self.alg.monomial_product(*m1, *m2) {
                    add_into(&mut acc, m, &cc * &c);
                }
            }
        }
        Ok(AlgebraElement {
            alg: self.alg.clone(),
            terms: acc,
        })
    }

    /// `uv - vu`
    pub fn commutator(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(AlgebraElement::one(&self.alg), |acc, _| &acc * self)
    }

    /// Terms restricted to a predicate on monomials.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        AlgebraElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn map_terms(&self, f: impl Fn(&Monomial, &Scalar) -> (Monomial, Scalar)) -> Self {
        AlgebraElement::from_terms(&self.alg, self.terms.iter().map(|(m, c)| f(m, c)))
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_as(&other.alg) && self.terms == other.terms
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Terms in `(a, b, c)` order joined by ` + `, e.g. `(q^2)*F*E + K^-1`.
impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == Monomial::ONE {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! elem_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&AlgebraElement> for &AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                self.$inner(rhs).expect("operands from different algebras")
            }
        }
        impl std::ops::$tr<AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                self.$inner(&rhs).expect("operands from different algebras")
            }
        }
    };
}

elem_binop!(Add, add, try_add);
elem_binop!(Sub, sub, try_sub);
elem_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::neg(self)
    }
}
