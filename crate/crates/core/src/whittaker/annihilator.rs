use std::collections::{BTreeMap, HashMap};

use super::{
    basis_element, make_whittaker_module, CenterIdeal, WVector, WhittakerCharacter,
    WhittakerError, WhittakerModule,
};
use crate::algebra::{casimir, pbw_monomials, AlgebraElement, Monomial};
use crate::linalg::{rank_of, Matrix};
use crate::field::Field;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorReport {
    /// Ambient filtration degree `D = d + deg g(Omega)`.
    pub degree: u32,
    pub ambient_dim: usize,
    /// Elements of degree `<= D` killing `F^i K^j w` for `|j| <= window`.
    pub killers: usize,
    /// Same with the window widened by `m`.
    pub killers_wider: usize,
    /// `dim (U g(Omega) cap U_{<= D})`.
    pub ideal_part: usize,
    /// Elements of degree `<= D` killing `w`.
    pub killers_of_w: usize,
    /// `dim ((U g(Omega) + U (E - eta)) cap U_{<= D})`.
    pub left_ideal_part: usize,
}

impl AnnihilatorReport {
    pub fn matches(&self) -> bool {
        self.killers == self.ideal_part
            && self.killers == self.killers_wider
            && self.killers_of_w == self.left_ideal_part
    }
}

/// Index of PBW monomials of degree `<= D`.
struct Coords {
    index: HashMap<Monomial, usize>,
    len: usize,
}

impl Coords {
    fn new(degree: u32) -> Self {
        let monos = pbw_monomials(degree);
        let len = monos.len();
        Coords {
            index: monos.into_iter().enumerate().map(|(n, x)| (x, n)).collect(),
            len,
        }
    }
}

/// `dim (span(gens) cap U_{<= D})`: kill the coordinates outside the
/// window, then take the rank of what remains.
fn span_in_window(gens: &[AlgebraElement], coords: &Coords) -> usize {
    let mut outside: HashMap<Monomial, usize> = HashMap::new();
    for g in gens {
        for (mono, _) in g.terms() {
            if !coords.index.contains_key(mono) {
                let n = outside.len();
                outside.entry(*mono).or_insert(n);
            }
        }
    }
    let mut out_mat = Matrix::zeros(outside.len(), gens.len());
    for (col, g) in gens.iter().enumerate() {
        for (mono, c) in g.terms() {
            if let Some(&r) = outside.get(mono) {
                out_mat.set(r, col, c.clone());
            }
        }
    }
    let combos = if outside.is_empty() {
        (0..gens.len())
            .map(|n| {
                let mut v = vec![Scalar::zero(); gens.len()];
                v[n] = Scalar::one();
                v
            })
            .collect()
    } else {
        out_mat.nullspace()
    };
    let vectors: Vec<Vec<Scalar>> = combos
        .iter()
        .map(|c| {
            let mut v = vec![Scalar::zero(); coords.len];
            for (g, s) in gens.iter().zip(c) {
                if s.is_zero() {
                    continue;
                }
                for (mono, t) in g.terms() {
                    if let Some(&r) = coords.index.get(mono) {
                        v[r] = &v[r] + &(s * t);
                    }
                }
            }
            v
        })
        .collect();
    rank_of(&vectors)
}

/// `dim {u in U_{<= D} : u b = 0 for b in probes}`, summed over the
/// weight components of `u`. The annihilator is stable under conjugation
/// by `K`, so this is still an upper bound for its dimension.
fn killers(mw: &WhittakerModule, monos: &[Monomial], probes: &[WVector]) -> usize {
    let mut by_weight: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for mono in monos {
        by_weight.entry(mono.weight()).or_default().push(*mono);
    }
    by_weight
        .values()
        .map(|block| {
            let images: Vec<WVector> = block
                .iter()
                .map(|mono| {
                    let mut stacked = WVector::new();
                    for (n, b) in probes.iter().enumerate() {
                        for ((i, j), c) in mw.act_monomial(*mono, b) {
                            // offset keeps the probes' images apart
                            stacked.insert((i + 1000 * n as u32, j), c);
                        }
                    }
                    stacked
                })
                .collect();
            let (_, mat) = super::images_to_matrix(&images);
            block.len() - mat.rank()
        })
        .sum()
}

/// Ungraded version, for the left ideal killing `w` alone.
fn killers_of(mw: &WhittakerModule, monos: &[Monomial], probe: &WVector) -> usize {
    let images: Vec<WVector> = monos.iter().map(|x| mw.act_monomial(*x, probe)).collect();
    let (_, mat) = super::images_to_matrix(&images);
    monos.len() - mat.rank()
}

/// Compare the elements of degree `<= d + deg g(Omega)` annihilating
/// `V(g, eta)` with `U g(Omega)`, and those annihilating `w` with
/// `U g(Omega) + U (E - eta)`. Multipliers range over degree
/// `<= d + extra`.
pub fn annihilator_slice_check(
    mw: &WhittakerModule,
    d: u32,
    window: u32,
    extra: u32,
) -> Result<AnnihilatorReport, WhittakerError> {
    let alg = mw.algebra();
    let g = mw.g_omega();
    let deg_g = g.degree() as u32;
    let big_d = d + deg_g;
    let coords = Coords::new(big_d);
    let monos = pbw_monomials(big_d);

    let probes_for = |w: u32| -> Result<Vec<WVector>, WhittakerError> {
        Ok(mw
            .slice(w)?
            .into_iter()
            .map(|(i, j)| basis_element(i, j))
            .collect())
    };
    let killers_v = killers(mw, &monos, &probes_for(window)?);
    let killers_wider = killers(mw, &monos, &probes_for(window + mw.m())?);
    let killers_w = killers_of(mw, &monos, &mw.w());

    let mut gens: Vec<AlgebraElement> = Vec::new();
    for mono in pbw_monomials(d + extra) {
        let x = AlgebraElement::monomial(alg, mono, Scalar::one());
        gens.push(x.try_mul(g)?);
    }
    let ideal_part = span_in_window(&gens, &coords);

    let e_eta = AlgebraElement::e(alg)
        .try_sub(&AlgebraElement::scalar(alg, mw.eta().value().clone()))?;
    for mono in pbw_monomials(big_d + extra - 1) {
        let x = AlgebraElement::monomial(alg, mono, Scalar::one());
        gens.push(x.try_mul(&e_eta)?);
    }
    let left_ideal_part = span_in_window(&gens, &coords);

    Ok(AnnihilatorReport {
        degree: big_d,
        ambient_dim: coords.len,
        killers: killers_v,
        killers_wider,
        ideal_part,
        killers_of_w: killers_w,
        left_ideal_part,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub n: u32,
    pub m: u32,
    /// `#{(l, p) : |l| + p m <= n m}`.
    pub family: usize,
    pub rank: usize,
    /// `#{(i, j) : i m + |j| <= n m}`.
    pub expected: usize,
    /// Every member is supported on `F^i K^j w` with `i m + |j| <= n m`.
    pub contained: bool,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.contained && self.rank == self.expected && self.family == self.expected
    }
}

/// `K^l Omega^p w = K^l pi(Omega)^p` for `|l| + p m <= n m` is a basis of
/// the degree `<= n m` part of `U_q(F, K^{+-1})`, with `F` of degree `m`.
pub fn verify_freeness(n: u32, eta: &Scalar, m: u32) -> Result<FreenessReport, WhittakerError> {
    let chi = WhittakerCharacter::new(eta.clone())?;
    let mw = make_whittaker_module(CenterIdeal::zero(), chi, m)?;
    let omega = casimir(mw.algebra())?;
    let top = (n * m) as i64;
    let mut family: Vec<WVector> = Vec::new();
    let mut power = mw.w();
    for p in 0..=n {
        if p > 0 {
            power = mw.act(&omega, &power)?;
        }
        let r = top - (p * m) as i64;
        for l in -r..=r {
            family.push(mw.act_monomial(Monomial::new(0, l, 0), &power));
        }
    }
    let expected = (0..=n)
        .map(|i| 2 * (top - (i * m) as i64) as usize + 1)
        .sum();
    let contained = family
        .iter()
        .flat_map(|v| v.keys())
        .all(|&(i, j)| (i * m) as i64 + j.abs() <= top);
    let (_, mat) = super::images_to_matrix(&family);
    Ok(FreenessReport {
        contained,
        n,
        m,
        family: family.len(),
        rank: mat.rank(),
        expected,
    })
}
