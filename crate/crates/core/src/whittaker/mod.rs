//! Whittaker modules `V(g, eta) = U / (U g(Omega) + U (E - eta))`.
//!
//! Elements are kept in the basis `F^i K^j w`, `0 <= i < deg g`, at all
//! times. `g(Omega) w = 0` gives a relation whose leading term is
//! `eta^d F^d w`, which is used to rewrite every `F^a K^b w` with `a >= d`.

mod annihilator;
mod ideal;
mod lattice;
mod vectors;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::{casimir, Algebra, AlgebraElement, AlgebraError, Monomial};
use crate::field::Field;
use crate::poly::Poly;
use crate::scalar::Scalar;

pub use annihilator::{
    annihilator_slice_check, verify_freeness, AnnihilatorReport, FreenessReport,
};
pub use ideal::{omega_poly_string, CenterIdeal, OmegaPolynomial};
pub use lattice::{submodule_lattice, Submodule, SubmoduleLattice, Summand};
pub use vectors::{
    endomorphism_dimension, is_irreducible_whittaker, minimal_polynomial, whittaker_vectors,
    IrreducibilityCertificate,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WhittakerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("eta(E) must be nonzero")]
    SingularCharacter,
    #[error("g must be monic")]
    NotMonic,
    #[error("operation needs g != 0")]
    ZeroIdeal,
    #[error("element is not a polynomial in E")]
    NotEPolynomial,
    #[error("window {window} too small (need at least {needed})")]
    WindowTooSmall { window: u32, needed: u32 },
    #[error("result changes when the window is widened: {0}")]
    BoundarySensitive(String),
    #[error("g has factors that do not split over the ground field: {0}")]
    NotSplit(String),
    #[error("internal check failed: {0}")]
    CheckFailed(String),
}

/// Non-singular character of `C[E]`, fixed by `eta(E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerCharacter {
    eta: Scalar,
}

impl WhittakerCharacter {
    pub fn new(eta: Scalar) -> Result<Self, WhittakerError> {
        if eta.is_zero() {
            return Err(WhittakerError::SingularCharacter);
        }
        Ok(WhittakerCharacter { eta })
    }

    pub fn value(&self) -> &Scalar {
        &self.eta
    }

    /// `eta(x)` for `x` a polynomial in `E`.
    pub fn apply(&self, x: &AlgebraElement) -> Result<Scalar, WhittakerError> {
        x.terms().try_fold(Scalar::zero(), |acc, (mono, c)| {
            if mono.f != 0 || mono.k != 0 {
                return Err(WhittakerError::NotEPolynomial);
            }
            Ok(acc + c * Field::pow(&self.eta, mono.e as u64))
        })
    }
}

/// `u^eta`: substitute `E -> eta(E)` in the normal form.
pub fn pi_projection(u: &AlgebraElement, eta: &WhittakerCharacter) -> AlgebraElement {
    u.map_terms(|mono, c| {
        (
            Monomial::new(mono.f, mono.k, 0),
            c * Field::pow(eta.value(), mono.e as u64),
        )
    })
}

/// `x . v = (x v)^eta - eta(x) v` for `x` in `C[E]` and `v` free of `E`.
pub fn reduced_action(
    x: &AlgebraElement,
    v: &AlgebraElement,
    eta: &WhittakerCharacter,
) -> Result<AlgebraElement, WhittakerError> {
    let ex = eta.apply(x)?;
    let xv = x.try_mul(v)?;
    Ok(pi_projection(&xv, eta).try_sub(&v.scale(&ex))?)
}

/// Sparse element `sum c_{ij} F^i K^j w`.
pub type WVector = BTreeMap<(u32, i64), Scalar>;

pub(crate) fn add_into(v: &mut WVector, key: (u32, i64), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = v.entry(key).or_insert_with(Scalar::zero);
    *slot = &*slot + &c;
    if slot.is_zero() {
        v.remove(&key);
    }
}

pub(crate) fn add_scaled(acc: &mut WVector, v: &WVector, s: &Scalar) {
    for (k, c) in v {
        add_into(acc, *k, c * s);
    }
}

pub fn basis_element(i: u32, j: i64) -> WVector {
    WVector::from([((i, j), Scalar::one())])
}

pub fn vector_string(v: &WVector) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    v.iter()
        .map(|((i, j), c)| format!("({c})*F^{i}*K^{j}*w"))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub struct WhittakerModule {
    alg: Arc<Algebra>,
    m: u32,
    eta: WhittakerCharacter,
    ideal: CenterIdeal,
    /// `g(Omega)` in normal form.
    g_omega: AlgebraElement,
    /// Lower part of `pi(g(Omega))`: `(i, j) -> G_ij` for `i < d`.
    lower: Vec<((u32, i64), Scalar)>,
    cache: Mutex<HashMap<(u32, i64), Arc<WVector>>>,
}

impl fmt::Debug for WhittakerModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WhittakerModule")
            .field("m", &self.m)
            .field("eta", self.eta.value())
            .field("g", &self.ideal.to_string())
            .finish()
    }
}

/// Evaluate a polynomial in `Omega` inside the algebra.
pub fn omega_poly_element(
    alg: &Arc<Algebra>,
    p: &OmegaPolynomial,
) -> Result<AlgebraElement, WhittakerError> {
    let omega = casimir(alg)?;
    let mut acc = AlgebraElement::zero(alg);
    for c in p.coeffs().iter().rev() {
        acc = acc.try_mul(&omega)?.try_add(&AlgebraElement::scalar(alg, c.clone()))?;
    }
    Ok(acc)
}

/// Build `V(g, eta)`; the reduction relation is extracted from the normal
/// form of `pi(g(Omega))`.
pub fn make_whittaker_module(
    ideal: CenterIdeal,
    eta: WhittakerCharacter,
    m: u32,
) -> Result<WhittakerModule, WhittakerError> {
    let alg = Algebra::fm(m);
    let g_omega = omega_poly_element(&alg, ideal.poly())?;
    let mut lower = Vec::new();
    if let Some(d) = ideal.degree() {
        let pg = pi_projection(&g_omega, &eta);
        let d = d as u32;
        let lead = Field::pow(eta.value(), d as u64);
        for (mono, c) in pg.terms() {
            if mono.f > d || (mono.f == d && (mono.k != 0 || *c != lead)) {
                return Err(WhittakerError::CheckFailed(format!(
                    "unexpected leading term {c}*{mono} in pi(g(Omega))"
                )));
            }
            if mono.f < d {
                lower.push(((mono.f, mono.k), c.clone()));
            }
        }
    }
    Ok(WhittakerModule {
        alg,
        m,
        eta,
        ideal,
        g_omega,
        lower,
        cache: Mutex::default(),
    })
}

impl WhittakerModule {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eta(&self) -> &WhittakerCharacter {
        &self.eta
    }

    pub fn ideal(&self) -> &CenterIdeal {
        &self.ideal
    }

    /// `deg g`, or `None` for `g = 0`.
    pub fn degree(&self) -> Option<usize> {
        self.ideal.degree()
    }

    pub fn g_omega(&self) -> &AlgebraElement {
        &self.g_omega
    }

    /// The cyclic Whittaker vector `w`.
    pub fn w(&self) -> WVector {
        basis_element(0, 0)
    }

    /// `F^a K^b w` in the reduced basis.
    pub fn reduce_term(&self, a: u32, b: i64) -> Arc<WVector> {
        let d = match self.degree() {
            Some(d) => d as u32,
            None => return Arc::new(basis_element(a, b)),
        };
        if a < d {
            return Arc::new(basis_element(a, b));
        }
        if let Some(v) = self.cache.lock().unwrap().get(&(a, b)) {
            return v.clone();
        }
        // F^{a-d} K^b G w = 0 with G = eta^d F^d + sum_{i<d} G_ij F^i K^j
        let scale = -(Field::pow(self.eta.value(), d as u64).try_inv().expect("eta != 0")
            * Scalar::q_pow(2 * b * d as i64));
        let mut out = WVector::new();
        for ((i, j), c) in &self.lower {
            let coef = &scale * c * Scalar::q_pow(-2 * b * *i as i64);
            let sub = self.reduce_term(a - d + i, b + j);
            add_scaled(&mut out, &sub, &coef);
        }
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert((a, b), out.clone());
        out
    }

    /// Bring an arbitrary `sum c F^a K^b w` into the reduced basis.
    pub fn reduce(&self, v: &WVector) -> WVector {
        let mut out = WVector::new();
        for ((a, b), c) in v {
            add_scaled(&mut out, &self.reduce_term(*a, *b), c);
        }
        out
    }

    /// `u v`: normal-order `u F^i K^j`, let `E^c` act on `w` by `eta^c`,
    /// then reduce.
    pub fn act(&self, u: &AlgebraElement, v: &WVector) -> Result<WVector, WhittakerError> {
        if !u.algebra().same_as(&self.alg) {
            return Err(AlgebraError::MismatchedAlgebras.into());
        }
        let mut raw = WVector::new();
        for (mono, s) in u.terms() {
            for ((i, j), c) in v {
                let sc = s * c;
                for (p, t) in self.alg.monomial_product(*mono, Monomial::new(*i, *j, 0)) {
                    let coef = &sc * &t * Field::pow(self.eta.value(), p.e as u64);
                    add_into(&mut raw, (p.f, p.k), coef);
                }
            }
        }
        Ok(self.reduce(&raw))
    }

    pub fn act_monomial(&self, mono: Monomial, v: &WVector) -> WVector {
        self.act(&AlgebraElement::monomial(&self.alg, mono, Scalar::one()), v)
            .expect("same algebra")
    }

    /// Apply `p(Omega)`.
    pub fn act_omega_poly(
        &self,
        p: &OmegaPolynomial,
        v: &WVector,
    ) -> Result<WVector, WhittakerError> {
        let omega = casimir(&self.alg)?;
        let mut acc = WVector::new();
        for c in p.coeffs().iter().rev() {
            acc = self.act(&omega, &acc)?;
            add_scaled(&mut acc, v, c);
        }
        Ok(acc)
    }

    /// Basis vectors `F^i K^j w` with `i < deg g` and `|j| <= window`.
    pub fn slice(&self, window: u32) -> Result<Vec<(u32, i64)>, WhittakerError> {
        let d = self.degree().ok_or(WhittakerError::ZeroIdeal)? as u32;
        let w = window as i64;
        Ok((0..d)
            .flat_map(|i| (-w..=w).map(move |j| (i, j)))
            .collect())
    }
}

/// Columns of a linear map given by images of basis vectors, as a dense
/// matrix over the union of keys appearing. Returns the row keys as well.
pub(crate) fn images_to_matrix(
    images: &[WVector],
) -> (Vec<(u32, i64)>, crate::linalg::Matrix<Scalar>) {
    let mut keys: Vec<(u32, i64)> = images.iter().flat_map(|v| v.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let index: HashMap<(u32, i64), usize> =
        keys.iter().enumerate().map(|(n, k)| (*k, n)).collect();
    let mut mat = crate::linalg::Matrix::zeros(keys.len(), images.len());
    for (col, v) in images.iter().enumerate() {
        for (k, c) in v {
            mat.set(index[k], col, c.clone());
        }
    }
    (keys, mat)
}

pub(crate) fn combine(basis: &[WVector], coeffs: &[Scalar]) -> WVector {
    let mut out = WVector::new();
    for (v, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            add_scaled(&mut out, v, c);
        }
    }
    out
}

/// `Poly<Scalar>` in `Omega`, lowest degree first.
pub(crate) type OPoly = Poly<Scalar>;
