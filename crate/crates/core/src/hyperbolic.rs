//! `U_q(f_m(K))` as a hyperbolic algebra `R{xi = EF, theta}` over the
//! commutative ring `R = C[EF, K^{+-1}]`, and the classification of its
//! character points `M_{alpha,beta} = (xi - alpha, K - beta)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraElement, AlgebraError, LaurentPoly};
use crate::cyclo::Cyclo;
use crate::field::Field;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("m must be at least 1")]
    ZeroM,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("algebra has m = {algebra} but the point has m = {point}")]
    MismatchedM { algebra: u32, point: u32 },
    /// `theta^shift(xi)` lies in `M` although neither boundary condition
    /// holds, so the point sits inside the orbit of a boundary point.
    #[error("theta^{shift}(xi) vanishes at the point; it lies on the orbit of a boundary point")]
    ReducibleOrbitPoint { shift: i64 },
}

/// `sum c_{ij} xi^i K^j`
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RElement {
    terms: BTreeMap<(u32, i64), Scalar>,
}

impl RElement {
    pub fn zero() -> Self {
        RElement::default()
    }

    pub fn one() -> Self {
        RElement::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RElement::monomial(0, 0, c)
    }

    pub fn xi() -> Self {
        RElement::monomial(1, 0, Scalar::one())
    }

    pub fn k_pow(j: i64) -> Self {
        RElement::monomial(0, j, Scalar::one())
    }

    pub fn monomial(i: u32, j: i64, c: Scalar) -> Self {
        let mut out = RElement::zero();
        out.add_term(i, j, c);
        out
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = RElement::zero();
        for (j, c) in p.terms() {
            out.add_term(0, j, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, i: u32, j: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Scalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i64), &Scalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, i: u32, j: i64) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), c) in other.terms() {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = RElement::zero();
        for ((i, j), c) in self.terms() {
            out.add_term(i, j, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = RElement::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in other.terms() {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(RElement::one(), |acc, _| acc.mul(self))
    }

    /// Image in `U_q(f(K))` with `xi -> EF`.
    pub fn to_algebra(&self, alg: &Arc<Algebra>) -> AlgebraElement {
        let ef = &AlgebraElement::e(alg) * &AlgebraElement::f(alg);
        let mut acc = AlgebraElement::zero(alg);
        for ((i, j), c) in self.terms() {
            acc = &acc + &(&ef.pow(i) * &AlgebraElement::k_pow(alg, j)).scale(c);
        }
        acc
    }
}

impl fmt::Debug for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|((i, j), c)| {
                let mut factors = Vec::new();
                match i {
                    0 => {}
                    1 => factors.push("xi".to_string()),
                    _ => factors.push(format!("xi^{i}")),
                }
                if j != 0 {
                    factors.push(format!("K^{j}"));
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

fn q_minus_qinv() -> Scalar {
    Scalar::q() - Scalar::q_pow(-1)
}

/// One step `theta^{+-1}`: `theta(xi) = xi + f_m(q^-2 K)`,
/// `theta^-1(xi) = xi - f_m(K)`, `theta^{+-1}(K) = q^{-+2} K`.
pub fn theta_step(r: &RElement, forward: bool, m: u32) -> RElement {
    let f = LaurentPoly::f_m(m);
    let (image_xi, s) = if forward {
        (RElement::xi().add(&RElement::from_laurent(&f.shift_q(-2))), -2)
    } else {
        (RElement::xi().sub(&RElement::from_laurent(&f)), 2)
    };
    substitute(r, &image_xi, s)
}

/// `xi -> image_xi`, `K^j -> q^{s j} K^j`.
fn substitute(r: &RElement, image_xi: &RElement, s: i64) -> RElement {
    let mut powers = vec![RElement::one()];
    let mut out = RElement::zero();
    for ((i, j), c) in r.terms() {
        while powers.len() <= i as usize {
            let next = powers.last().unwrap().mul(image_xi);
            powers.push(next);
        }
        let kj = RElement::monomial(0, j, c * Scalar::q_pow(s * j));
        out = out.add(&powers[i as usize].mul(&kj));
    }
    out
}

/// `theta^n` by `|n|` single steps.
pub fn theta_iterate(r: &RElement, n: i64, m: u32) -> RElement {
    (0..n.unsigned_abs()).fold(r.clone(), |acc, _| theta_step(&acc, n > 0, m))
}

/// Coefficients `(c_plus, c_minus)` with
/// `theta^n(xi) = xi + (c_plus K^m - c_minus K^-m) / (q - q^-1)`.
fn theta_xi_coeffs(n: i64, m: u32) -> (Scalar, Scalar) {
    let m = m as i64;
    let one = Scalar::one();
    let geo = |base: i64, len: i64| {
        (&one - Scalar::q_pow(base * len)) / (&one - Scalar::q_pow(base))
    };
    if n >= 0 {
        (
            Scalar::q_pow(-2 * m) * geo(-2 * m, n),
            Scalar::q_pow(2 * m) * geo(2 * m, n),
        )
    } else {
        let n = -n;
        (-geo(2 * m, n), -geo(-2 * m, n))
    }
}

/// Closed form of `theta^n(xi)`.
pub fn theta_xi(n: i64, m: u32) -> RElement {
    let (cp, cm) = theta_xi_coeffs(n, m);
    let d = q_minus_qinv().try_inv().expect("nonzero");
    let mut out = RElement::xi();
    out.add_term(0, m as i64, cp * &d);
    out.add_term(0, -(m as i64), -(cm * &d));
    out
}

/// `theta^n(r)`: closed form on `xi`, `q^{-2n}` scaling on `K`, extended
/// multiplicatively.
pub fn theta_apply(r: &RElement, n: i64, m: u32) -> RElement {
    if n == 0 {
        return r.clone();
    }
    substitute(r, &theta_xi(n, m), -2 * n)
}

/// A character `xi -> alpha`, `K -> beta` of `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterPoint {
    alpha: Scalar,
    beta: Scalar,
    m: u32,
}

impl CharacterPoint {
    pub fn new(alpha: Scalar, beta: Scalar, m: u32) -> Result<Self, HyperbolicError> {
        if beta.is_zero() {
            return Err(HyperbolicError::ZeroBeta);
        }
        if m == 0 {
            return Err(HyperbolicError::ZeroM);
        }
        Ok(CharacterPoint { alpha, beta, m })
    }

    /// Same point, checked against the algebra's `f`.
    pub fn in_algebra(
        alg: &Algebra,
        alpha: Scalar,
        beta: Scalar,
    ) -> Result<Self, HyperbolicError> {
        let m = alg.require_fm()?;
        CharacterPoint::new(alpha, beta, m)
    }

    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

pub fn evaluate(r: &RElement, p: &CharacterPoint) -> Scalar {
    r.terms().fold(Scalar::zero(), |acc, ((i, j), c)| {
        acc + c
            * Field::pow(&p.alpha, i as u64)
            * p.beta.pow_i(j).expect("beta is nonzero")
    })
}

/// `theta^n(M) != M` for `1 <= n <= big_n`, via `q^{2n} beta != beta`.
pub fn orbit_distinct(p: &CharacterPoint, big_n: u32) -> bool {
    (1..=big_n as i64).all(|n| Scalar::q_pow(2 * n) * &p.beta != p.beta)
}

/// Degree at `q = infinity`: `deg num - deg den`.
fn q_degree(s: &Scalar) -> Option<i64> {
    if s.is_zero() {
        return None;
    }
    Some(s.numer().degree()? as i64 - s.denom().degree()? as i64)
}

/// All `k` with `theta^k(xi) in M`.
///
/// Writing `x = q^{2km}`, membership is `a2 x^2 + a1 x + a0 = 0` with
/// `a2 = beta^-m u2`, `a1 = (q - q^-1) alpha + beta^m u1 - beta^-m u2`,
/// `a0 = -beta^m u1`, `u1 = q^-2m / (1 - q^-2m)`, `u2 = q^2m / (1 - q^2m)`.
/// A root needs the top `q`-degree attained twice, which leaves at most
/// three candidates; each is checked by direct evaluation.
pub fn orbit_zeros(p: &CharacterPoint) -> Vec<i64> {
    let m = p.m as i64;
    let one = Scalar::one();
    let u1 = Scalar::q_pow(-2 * m) / (&one - Scalar::q_pow(-2 * m));
    let u2 = Scalar::q_pow(2 * m) / (&one - Scalar::q_pow(2 * m));
    let bm = p.beta.pow_i(m).expect("beta is nonzero");
    let bmi = bm.try_inv().expect("beta is nonzero");
    let a2 = &bmi * &u2;
    let a1 = q_minus_qinv() * &p.alpha + &bm * &u1 - &bmi * &u2;
    let a0 = -(&bm * &u1);
    let d2 = q_degree(&a2).expect("nonzero");
    let d0 = q_degree(&a0).expect("nonzero");
    // deg(a2) + 4km, deg(a1) + 2km, deg(a0)
    let mut cands = Vec::new();
    let mut push = |num: i64, den: i64| {
        if num % den == 0 {
            cands.push(num / den);
        }
    };
    push(d0 - d2, 4 * m);
    if let Some(d1) = q_degree(&a1) {
        push(d1 - d2, 2 * m);
        push(d0 - d1, 2 * m);
    }
    cands.sort_unstable();
    cands.dedup();
    cands
        .into_iter()
        .filter(|&k| evaluate(&theta_xi(k, p.m), p).is_zero())
        .collect()
}

/// Least `n >= 0` with `beta^m = +-q^{mn}`, read off `beta = c q^j` with
/// `c^{2m} = 1`.
pub fn finite_shortcut(beta: &Scalar, m: u32) -> Option<u32> {
    let (c, j) = beta.as_q_monomial()?;
    if j < 0 {
        return None;
    }
    let c2m = Field::pow(&c, 2 * m as u64);
    c2m.is_one().then_some(j as u32)
}

/// The five point classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpectrumClass {
    TwoSided11,
    Finite1N(u32),
    HighestWeight1Inf,
    LowestWeightInf1,
    DenseInfInf,
}

impl SpectrumClass {
    /// Dimension of the quotient module, when finite.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            SpectrumClass::TwoSided11 => Some(1),
            SpectrumClass::Finite1N(n) => Some(*n as usize + 1),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.dimension().is_some()
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SpectrumClass::TwoSided11 => "TwoSided11",
            SpectrumClass::Finite1N(_) => "Finite1N",
            SpectrumClass::HighestWeight1Inf => "HighestWeight1Inf",
            SpectrumClass::LowestWeightInf1 => "LowestWeightInf1",
            SpectrumClass::DenseInfInf => "DenseInfInf",
        }
    }

    pub fn shift(&self) -> Option<u32> {
        match self {
            SpectrumClass::Finite1N(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumClass::Finite1N(n) => write!(f, "Finite1N({n})"),
            other => write!(f, "{}", other.tag()),
        }
    }
}

/// Classify `M_{alpha,beta}`.
///
/// Highest-weight side: `theta^-1(xi) in M`. Lowest-weight side: `xi in M`
/// with no `theta^-i(xi)`, `i >= 1`, in `M`. Dense: no `theta^k(xi)` in `M`
/// at all. Points outside these cases give `ReducibleOrbitPoint`.
pub fn classify_point(p: &CharacterPoint) -> Result<SpectrumClass, HyperbolicError> {
    let zeros = orbit_zeros(p);
    let highest = zeros.contains(&-1);
    let lowest = zeros.contains(&0);
    if highest && lowest {
        return Ok(SpectrumClass::TwoSided11);
    }
    if highest {
        let class = match finite_shortcut(&p.beta, p.m) {
            Some(n) => SpectrumClass::Finite1N(n),
            None => SpectrumClass::HighestWeight1Inf,
        };
        debug_assert_eq!(
            class.shift().map(i64::from),
            zeros.iter().copied().find(|&k| k >= 0)
        );
        return Ok(class);
    }
    // only the backward orbit matters on the lowest-weight side
    let blocking = |k: i64| if lowest { k < 0 } else { true };
    if let Some(&k) = zeros.iter().find(|&&k| blocking(k)) {
        return Err(HyperbolicError::ReducibleOrbitPoint { shift: k });
    }
    Ok(if lowest {
        SpectrumClass::LowestWeightInf1
    } else {
        SpectrumClass::DenseInfInf
    })
}

/// The lowest-weight non-vanishing expression
/// `((1 - q^{2nm})/(1 - q^{2m}) beta^m - (1 - q^{-2nm})/(1 - q^{-2m}) beta^-m) / (q - q^-1)`.
pub fn lowest_weight_expression(beta: &Scalar, m: u32, n: i64) -> Scalar {
    let (cp, cm) = theta_xi_coeffs(-n, m);
    let bm = beta.pow_i(m as i64).expect("beta is nonzero");
    (-(cp * &bm) + cm * bm.try_inv().expect("nonzero")) / q_minus_qinv()
}

/// `beta = c q^j` with `c` an `N`-th root of unity given as `z^k`.
pub fn root_of_unity_point(k: u32, order: u32, j: i64) -> Scalar {
    Scalar::monomial(Field::pow(&Cyclo::zeta(order), k as u64), j)
}

/// `alpha = f_m(beta)`, the highest-weight locus.
pub fn highest_weight_alpha(beta: &Scalar, m: u32) -> Scalar {
    LaurentPoly::f_m(m).eval(beta)
}

pub const CSV_HEADER: &str = "m,alpha,beta,class,n";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `m,alpha,beta,class,n` with canonical scalar strings.
pub fn csv_row(p: &CharacterPoint, class: &SpectrumClass) -> String {
    [
        p.m.to_string(),
        csv_field(&p.alpha.to_string()),
        csv_field(&p.beta.to_string()),
        class.tag().to_string(),
        class.shift().map(|n| n.to_string()).unwrap_or_default(),
    ]
    .join(",")
}
