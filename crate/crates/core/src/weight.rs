//! Irreducible weight modules of `U_q(f_m(K))`.
//!
//! Basis `v_i` with `K v_i = q^{-2i} beta v_i`, `F v_i = v_{i+1}` and
//! `E v_i = e_i v_{i-1}`, `e_i = chi(theta^{i-1}(xi))`. Index sets are
//! `{0..n}`, `{0, 1, ...}`, `{..., -1, 0}` or all of `Z`; the infinite ones
//! are evaluated on a finite window.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{casimir, Algebra, AlgebraElement, AlgebraError, LaurentPoly, Monomial};
use crate::cyclo::Cyclo;
use crate::field::Field;
use crate::hyperbolic::{
    classify_point, evaluate, highest_weight_alpha, theta_xi, CharacterPoint, HyperbolicError,
    SpectrumClass,
};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operation needs a finite-dimensional module")]
    NotFinite,
    #[error("truncation must be at least 1")]
    ZeroTruncation,
    #[error("action leaves the window at index {0}")]
    OutOfWindow(i64),
    #[error("Omega does not act by a scalar (basis index {0})")]
    NonScalarCasimir(i64),
    #[error("index {0} is not a basis index")]
    BadIndex(i64),
}

/// Sparse vector `sum c_i v_i`.
pub type WeightVector = BTreeMap<i64, Scalar>;

fn add_into(v: &mut WeightVector, i: i64, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(i).or_insert_with(Scalar::zero);
    *slot = &*slot + &c;
    if slot.is_zero() {
        v.remove(&i);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    K,
    KInv,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::E => "E",
            Generator::F => "F",
            Generator::K => "K",
            Generator::KInv => "K^-1",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    class: SpectrumClass,
    point: CharacterPoint,
    /// True bounds of the index set.
    lo: Option<i64>,
    hi: Option<i64>,
    /// Window actually materialized (equal to the index set when finite).
    wlo: i64,
    whi: i64,
    e: BTreeMap<i64, Scalar>,
}

/// Build the module attached to `p`; `truncation` sets the window for the
/// infinite classes.
pub fn construct_weight_module(
    p: &CharacterPoint,
    truncation: u32,
) -> Result<WeightModule, WeightError> {
    let class = classify_point(p)?;
    let t = truncation as i64;
    if !class.is_finite() && t == 0 {
        return Err(WeightError::ZeroTruncation);
    }
    let (lo, hi, wlo, whi) = match class {
        SpectrumClass::TwoSided11 => (Some(0), Some(0), 0, 0),
        SpectrumClass::Finite1N(n) => (Some(0), Some(n as i64), 0, n as i64),
        SpectrumClass::HighestWeight1Inf => (Some(0), None, 0, t),
        SpectrumClass::LowestWeightInf1 => (None, Some(0), -t, 0),
        SpectrumClass::DenseInfInf => (None, None, -t, t),
    };
    // e_i for every window index plus one past the top, so that E and F
    // compositions at the window edge can be detected
    let e = (wlo..=whi + 1)
        .map(|i| (i, evaluate(&theta_xi(i - 1, p.m()), p)))
        .collect();
    Ok(WeightModule {
        class,
        point: p.clone(),
        lo,
        hi,
        wlo,
        whi,
        e,
    })
}

impl WeightModule {
    pub fn class(&self) -> SpectrumClass {
        self.class
    }

    pub fn point(&self) -> &CharacterPoint {
        &self.point
    }

    pub fn m(&self) -> u32 {
        self.point.m()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.is_finite().then(|| (self.whi - self.wlo + 1) as usize)
    }

    /// Indices of the materialized window, ascending.
    pub fn indices(&self) -> Vec<i64> {
        (self.wlo..=self.whi).collect()
    }

    pub fn in_index_set(&self, i: i64) -> bool {
        self.lo.map_or(true, |l| i >= l) && self.hi.map_or(true, |h| i <= h)
    }

    fn in_window(&self, i: i64) -> bool {
        i >= self.wlo && i <= self.whi
    }

    /// Indices whose neighbours needed by degree-2 words stay inside the
    /// window (all indices when finite).
    pub fn interior(&self) -> Vec<i64> {
        self.indices()
            .into_iter()
            .filter(|&i| {
                let ok = |j: i64| self.in_window(j) || !self.in_index_set(j);
                ok(i - 1) && ok(i + 1)
            })
            .collect()
    }

    pub fn k_eigen(&self, i: i64) -> Scalar {
        Scalar::q_pow(-2 * i) * self.point.beta()
    }

    pub fn e_coeff(&self, i: i64) -> Scalar {
        self.e.get(&i).cloned().unwrap_or_else(|| {
            evaluate(&theta_xi(i - 1, self.m()), &self.point)
        })
    }

    /// Overwrite one `e_i`; used to build negative controls.
    pub fn with_e_coeff(mut self, i: i64, c: Scalar) -> Self {
        self.e.insert(i, c);
        self
    }

    /// Apply one generator to `v_i`.
    pub fn apply_generator(&self, g: Generator, i: i64) -> Result<WeightVector, WeightError> {
        let mut out = WeightVector::new();
        let (target, c) = match g {
            Generator::K => (i, self.k_eigen(i)),
            Generator::KInv => (i, self.k_eigen(i).try_inv().expect("beta is nonzero")),
            Generator::F => (i + 1, Scalar::one()),
            Generator::E => (i - 1, self.e_coeff(i)),
        };
        if c.is_zero() || !self.in_index_set(target) {
            return Ok(out);
        }
        if !self.in_window(target) {
            return Err(WeightError::OutOfWindow(target));
        }
        add_into(&mut out, target, c);
        Ok(out)
    }

    pub fn apply_generator_vec(
        &self,
        g: Generator,
        v: &WeightVector,
    ) -> Result<WeightVector, WeightError> {
        let mut out = WeightVector::new();
        for (&i, c) in v {
            for (j, d) in self.apply_generator(g, i)? {
                add_into(&mut out, j, c * &d);
            }
        }
        Ok(out)
    }

    /// Apply a word of generators, rightmost first.
    pub fn apply_word(&self, word: &[Generator], v: &WeightVector) -> Result<WeightVector, WeightError> {
        word.iter()
            .rev()
            .try_fold(v.clone(), |acc, &g| self.apply_generator_vec(g, &acc))
    }

    /// `F^a K^b E^c v` by successive generator actions.
    pub fn apply_monomial(&self, mono: &Monomial, v: &WeightVector) -> Result<WeightVector, WeightError> {
        let mut word = vec![Generator::F; mono.f as usize];
        let kg = if mono.k >= 0 { Generator::K } else { Generator::KInv };
        word.extend(std::iter::repeat(kg).take(mono.k.unsigned_abs() as usize));
        word.extend(std::iter::repeat(Generator::E).take(mono.e as usize));
        self.apply_word(&word, v)
    }

    pub fn act(&self, u: &AlgebraElement, v: &WeightVector) -> Result<WeightVector, WeightError> {
        let mut out = WeightVector::new();
        for (mono, c) in u.terms() {
            for (j, d) in self.apply_monomial(mono, v)? {
                add_into(&mut out, j, c * &d);
            }
        }
        Ok(out)
    }

    pub fn basis_vector(i: i64) -> WeightVector {
        WeightVector::from([(i, Scalar::one())])
    }

    /// Matrix of a generator on the window, in ascending index order; moves
    /// out of the window are dropped.
    pub fn generator_matrix(&self, g: Generator) -> Matrix<Scalar> {
        let idx = self.indices();
        let n = idx.len();
        let mut mat = Matrix::zeros(n, n);
        for (col, &i) in idx.iter().enumerate() {
            if let Ok(v) = self.apply_generator(g, i) {
                for (j, c) in v {
                    mat.set((j - self.wlo) as usize, col, c);
                }
            }
        }
        mat
    }

    pub fn to_matrix_module(&self) -> Result<MatrixModule, WeightError> {
        if !self.is_finite() {
            return Err(WeightError::NotFinite);
        }
        Ok(MatrixModule {
            m: self.m(),
            e: self.generator_matrix(Generator::E),
            f: self.generator_matrix(Generator::F),
            k: self.generator_matrix(Generator::K),
            kinv: self.generator_matrix(Generator::KInv),
        })
    }

    /// Stable JSON layout: metadata plus row-major scalar strings.
    pub fn to_json(&self) -> Value {
        let mat = |g| {
            let m = self.generator_matrix(g);
            Value::Array(
                m.to_rows()
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|c| Value::String(c.to_string())).collect()))
                    .collect(),
            )
        };
        json!({
            "m": self.m(),
            "class": self.class.to_string(),
            "alpha": self.point.alpha().to_string(),
            "beta": self.point.beta().to_string(),
            "dimension": self.dimension(),
            "indices": self.indices(),
            "E": mat(Generator::E),
            "F": mat(Generator::F),
            "K": mat(Generator::K),
            "K^-1": mat(Generator::KInv),
        })
    }
}

/// A failed relation at one basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationFailure {
    pub relation: &'static str,
    pub index: i64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RelationReport {
    pub checked: Vec<i64>,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn lin(terms: &[(Scalar, WeightVector)]) -> WeightVector {
    let mut out = WeightVector::new();
    for (c, v) in terms {
        for (&i, d) in v {
            add_into(&mut out, i, c * d);
        }
    }
    out
}

/// Check `EF - FE = f_m(K)`, `KE = q^2 EK`, `KF = q^-2 FK` and
/// `K K^-1 = K^-1 K = 1` on every interior basis vector, by composing
/// generator actions.
pub fn verify_relations(module: &WeightModule) -> RelationReport {
    use Generator::*;
    let mut report = RelationReport::default();
    let fm = LaurentPoly::f_m(module.m());
    let one = Scalar::one();
    for i in module.interior() {
        report.checked.push(i);
        let v = WeightModule::basis_vector(i);
        let w = |word: &[Generator]| module.apply_word(word, &v);
        let mut fail = |relation| report.failures.push(RelationFailure { relation, index: i });
        let fk = lin(&[(fm.eval(&module.k_eigen(i)), v.clone())]);
        match (w(&[E, F]), w(&[F, E])) {
            (Ok(ef), Ok(fe)) if lin(&[(one.clone(), ef.clone()), (-&one, fe.clone())]) == fk => {}
            _ => fail("EF - FE = f(K)"),
        }
        match (w(&[K, E]), w(&[E, K])) {
            (Ok(a), Ok(b)) if a == lin(&[(Scalar::q_pow(2), b.clone())]) => {}
            _ => fail("KE = q^2 EK"),
        }
        match (w(&[K, F]), w(&[F, K])) {
            (Ok(a), Ok(b)) if a == lin(&[(Scalar::q_pow(-2), b.clone())]) => {}
            _ => fail("KF = q^-2 FK"),
        }
        match (w(&[K, KInv]), w(&[KInv, K])) {
            (Ok(a), Ok(b)) if a == v && b == v => {}
            _ => fail("KK^-1 = 1"),
        }
    }
    report
}

/// `e_i != 0` for `1 <= i <= n`.
pub fn is_irreducible_finite(module: &WeightModule) -> Result<bool, WeightError> {
    if !module.is_finite() {
        return Err(WeightError::NotFinite);
    }
    Ok(module
        .indices()
        .into_iter()
        .filter(|&i| i > module.wlo)
        .all(|i| !module.e_coeff(i).is_zero()))
}

/// The `2m` modules of dimension `n`: `beta = z^k q^{n-1}`, `z` a primitive
/// `2m`-th root of unity, `alpha = f_m(beta)`.
pub fn enumerate_finite_irreps(n: u32, m: u32) -> Result<Vec<WeightModule>, WeightError> {
    assert!(n >= 1, "dimension must be positive");
    let z = Cyclo::zeta(2 * m);
    (0..2 * m)
        .map(|k| {
            let beta = Scalar::monomial(Field::pow(&z, k as u64), n as i64 - 1);
            let alpha = highest_weight_alpha(&beta, m);
            construct_weight_module(&CharacterPoint::new(alpha, beta, m)?, 1)
        })
        .collect()
}

/// The scalar by which `Omega` acts; checked on every interior index.
pub fn casimir_scalar(module: &WeightModule) -> Result<Scalar, WeightError> {
    let alg = Algebra::fm(module.m());
    let omega = casimir(&alg)?;
    let mut value: Option<Scalar> = None;
    for i in module.interior() {
        let out = module.act(&omega, &WeightModule::basis_vector(i))?;
        let c = match out.len() {
            0 => Scalar::zero(),
            1 if out.contains_key(&i) => out[&i].clone(),
            _ => return Err(WeightError::NonScalarCasimir(i)),
        };
        match &value {
            None => value = Some(c),
            Some(prev) if *prev == c => {}
            Some(_) => return Err(WeightError::NonScalarCasimir(i)),
        }
    }
    value.ok_or(WeightError::NotFinite)
}

fn same_multiset(a: &[Scalar], b: &[Scalar]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && b[j] == *x) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}

/// Equal dimension, `K`-spectrum and Casimir scalar.
pub fn are_isomorphic(a: &WeightModule, b: &WeightModule) -> Result<bool, WeightError> {
    let (Some(da), Some(db)) = (a.dimension(), b.dimension()) else {
        return Err(WeightError::NotFinite);
    };
    if da != db || a.m() != b.m() {
        return Ok(false);
    }
    let spectrum = |w: &WeightModule| w.indices().iter().map(|&i| w.k_eigen(i)).collect::<Vec<_>>();
    Ok(same_multiset(&spectrum(a), &spectrum(b)) && casimir_scalar(a)? == casimir_scalar(b)?)
}

/// `u F^i` modulo the left ideal generated by `E`, `K - beta` and
/// `F^{n+1}`, read in the basis `F^0, ..., F^n`.
pub fn quotient_oracle_action(
    u: &AlgebraElement,
    i: usize,
    p: &CharacterPoint,
    class: SpectrumClass,
) -> Result<Vec<Scalar>, WeightError> {
    let dim = class.dimension().ok_or(WeightError::NotFinite)?;
    if i >= dim {
        return Err(WeightError::BadIndex(i as i64));
    }
    let alg = u.algebra();
    let fi = AlgebraElement::monomial(alg, Monomial::new(i as u32, 0, 0), Scalar::one());
    let prod = u.try_mul(&fi)?;
    let mut out = vec![Scalar::zero(); dim];
    for (mono, c) in prod.terms() {
        if mono.e > 0 || mono.f as usize >= dim {
            continue;
        }
        let kb = p.beta().pow_i(mono.k).expect("beta is nonzero");
        out[mono.f as usize] = &out[mono.f as usize] + &(c * &kb);
    }
    Ok(out)
}

/// A finite-dimensional module given by explicit matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModule {
    pub m: u32,
    pub e: Matrix<Scalar>,
    pub f: Matrix<Scalar>,
    pub k: Matrix<Scalar>,
    pub kinv: Matrix<Scalar>,
}

fn block_diag(a: &Matrix<Scalar>, b: &Matrix<Scalar>) -> Matrix<Scalar> {
    let (n, k) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(n + k, n + k);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..k {
        for c in 0..k {
            out.set(n + r, n + c, b.get(r, c).clone());
        }
    }
    out
}

impl MatrixModule {
    pub fn dimension(&self) -> usize {
        self.k.rows()
    }

    pub fn direct_sum(&self, other: &MatrixModule) -> MatrixModule {
        assert_eq!(self.m, other.m, "modules over different algebras");
        MatrixModule {
            m: self.m,
            e: block_diag(&self.e, &other.e),
            f: block_diag(&self.f, &other.f),
            k: block_diag(&self.k, &other.k),
            kinv: block_diag(&self.kinv, &other.kinv),
        }
    }

    fn generators(&self) -> [&Matrix<Scalar>; 4] {
        [&self.e, &self.f, &self.k, &self.kinv]
    }

    /// Nonempty proper coordinate subsets stable under every generator.
    pub fn invariant_coordinate_subspaces(&self) -> Vec<Vec<usize>> {
        let n = self.dimension();
        assert!(n < 20, "subset search is exponential");
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) - 1 {
            let inside = |i: usize| mask & (1 << i) != 0;
            let stable = self.generators().iter().all(|g| {
                (0..n).filter(|&c| inside(c)).all(|c| {
                    (0..n).all(|r| inside(r) || g.get(r, c).is_zero())
                })
            });
            if stable {
                out.push((0..n).filter(|&i| inside(i)).collect());
            }
        }
        out
    }

    /// Irreducible when no coordinate subspace is invariant. Complete for
    /// modules where `K` is diagonal with distinct eigenvalues.
    pub fn is_irreducible_by_search(&self) -> bool {
        self.invariant_coordinate_subspaces().is_empty()
    }

    /// The matrix identities of the defining relations.
    pub fn satisfies_relations(&self) -> bool {
        let n = self.dimension();
        let fm = LaurentPoly::f_m(self.m);
        let kpow = |b: i64| {
            let base = if b >= 0 { &self.k } else { &self.kinv };
            (0..b.unsigned_abs()).fold(Matrix::identity(n), |acc, _| acc.mul(base))
        };
        let fk = fm
            .terms()
            .fold(Matrix::zeros(n, n), |acc, (b, c)| acc.add(&kpow(b).scale(c)));
        let id = Matrix::identity(n);
        self.e.mul(&self.f).sub(&self.f.mul(&self.e)) == fk
            && self.k.mul(&self.e) == self.e.mul(&self.k).scale(&Scalar::q_pow(2))
            && self.k.mul(&self.f) == self.f.mul(&self.k).scale(&Scalar::q_pow(-2))
            && self.k.mul(&self.kinv) == id
            && self.kinv.mul(&self.k) == id
    }

    /// Matrix of an algebra element.
    pub fn element_matrix(&self, u: &AlgebraElement) -> Matrix<Scalar> {
        let n = self.dimension();
        let pow = |m: &Matrix<Scalar>, e: u64| {
            (0..e).fold(Matrix::identity(n), |acc, _| acc.mul(m))
        };
        let mut acc = Matrix::zeros(n, n);
        for (mono, c) in u.terms() {
            let kb = if mono.k >= 0 { &self.k } else { &self.kinv };
            let term = pow(&self.f, mono.f as u64)
                .mul(&pow(kb, mono.k.unsigned_abs()))
                .mul(&pow(&self.e, mono.e as u64));
            acc = acc.add(&term.scale(c));
        }
        acc
    }
}
