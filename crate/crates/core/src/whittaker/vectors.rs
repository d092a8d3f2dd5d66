use super::{
    add_scaled, basis_element, combine, images_to_matrix, OPoly, WVector, WhittakerError,
    WhittakerModule,
};
use crate::algebra::{casimir, AlgebraElement, Monomial};
use crate::scalar::Scalar;

fn e_minus_eta(mw: &WhittakerModule, v: &WVector) -> WVector {
    let mut out = mw.act_monomial(Monomial::new(0, 0, 1), v);
    add_scaled(&mut out, v, &-mw.eta().value().clone());
    out
}

fn check_window(mw: &WhittakerModule, window: u32) -> Result<(), WhittakerError> {
    let d = mw.degree().ok_or(WhittakerError::ZeroIdeal)? as u32;
    let needed = mw.m() * d.saturating_sub(1);
    if window < needed {
        return Err(WhittakerError::WindowTooSmall { window, needed });
    }
    Ok(())
}

/// Basis of `{v : E v = eta(E) v}` among vectors supported on the slice
/// `i < deg g`, `|j| <= window`.
pub fn whittaker_vectors(
    mw: &WhittakerModule,
    window: u32,
) -> Result<Vec<WVector>, WhittakerError> {
    check_window(mw, window)?;
    let slice = mw.slice(window)?;
    let basis: Vec<WVector> = slice.iter().map(|&(i, j)| basis_element(i, j)).collect();
    let images: Vec<WVector> = basis.iter().map(|b| e_minus_eta(mw, b)).collect();
    let (_, mat) = images_to_matrix(&images);
    let out: Vec<WVector> = mat
        .nullspace()
        .iter()
        .map(|c| combine(&basis, c))
        .collect();
    for v in &out {
        if !e_minus_eta(mw, v).is_empty() {
            return Err(WhittakerError::CheckFailed("Whittaker vector".into()));
        }
    }
    Ok(out)
}

/// Monic minimal polynomial of `Omega` acting on `x`, found by looking for
/// the first linear dependence among `x, Omega x, Omega^2 x, ...`.
pub fn minimal_polynomial(
    mw: &WhittakerModule,
    x: &WVector,
    max_degree: usize,
) -> Result<OPoly, WhittakerError> {
    let omega = casimir(mw.algebra())?;
    let mut powers = vec![x.clone()];
    loop {
        let (_, mat) = images_to_matrix(&powers);
        if let Some(rel) = mat.nullspace().into_iter().next() {
            let lead = rel.last().expect("nonempty").clone();
            if lead.is_zero() {
                return Err(WhittakerError::CheckFailed("minimal polynomial".into()));
            }
            let inv = lead.try_inv().expect("nonzero");
            return Ok(OPoly::from_coeffs(rel.iter().map(|c| c * &inv).collect()));
        }
        if powers.len() > max_degree {
            return Err(WhittakerError::CheckFailed(format!(
                "no relation of degree <= {max_degree}"
            )));
        }
        let next = mw.act(&omega, powers.last().expect("nonempty"))?;
        powers.push(next);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityCertificate {
    pub irreducible: bool,
    /// For irreducible modules: `u` with `u v = w` for the probe `v`.
    /// Otherwise `(Omega - a) w`, which spans a proper nonzero submodule.
    pub witness: AlgebraElement,
}

/// `V(g, eta)` is simple exactly when `deg g = 1`. For `deg g = 1` the
/// witness recovers `w` from `probe` by stripping the top `K`-term with
/// `E - eta q^{-2n}` until one term remains.
pub fn is_irreducible_whittaker(
    mw: &WhittakerModule,
    probe: &WVector,
) -> Result<IrreducibilityCertificate, WhittakerError> {
    let alg = mw.algebra().clone();
    let d = mw.degree().ok_or(WhittakerError::ZeroIdeal)?;
    if d > 1 {
        let a = match mw.ideal().roots().first() {
            Some((a, _)) => a.clone(),
            None => return Err(WhittakerError::NotSplit(mw.ideal().to_string())),
        };
        let u = casimir(&alg)?.try_sub(&AlgebraElement::scalar(&alg, a))?;
        let x = mw.act(&u, &mw.w())?;
        let mp = minimal_polynomial(mw, &x, d)?;
        // proper: the minimal polynomial of x has lower degree than g
        if x.is_empty() || mp.degree() >= Some(d) {
            return Err(WhittakerError::CheckFailed("proper submodule".into()));
        }
        return Ok(IrreducibilityCertificate {
            irreducible: false,
            witness: u,
        });
    }
    if probe.is_empty() {
        return Err(WhittakerError::CheckFailed("probe is zero".into()));
    }
    let e = AlgebraElement::e(&alg);
    let eta = mw.eta().value().clone();
    let mut u = AlgebraElement::one(&alg);
    let mut v = probe.clone();
    while v.len() > 1 {
        let &(_, n) = v.keys().next_back().expect("nonempty");
        let step = e.try_sub(&AlgebraElement::scalar(&alg, &eta * Scalar::q_pow(-2 * n)))?;
        v = mw.act(&step, &v)?;
        u = step.try_mul(&u)?;
    }
    let (&(_, j0), c) = v.iter().next().ok_or_else(|| {
        WhittakerError::CheckFailed("probe annihilated".into())
    })?;
    let fin = AlgebraElement::k_pow(&alg, -j0).scale(&c.try_inv().expect("nonzero"));
    let u = fin.try_mul(&u)?;
    if mw.act(&u, probe)? != mw.w() {
        return Err(WhittakerError::CheckFailed("cyclic witness".into()));
    }
    Ok(IrreducibilityCertificate {
        irreducible: true,
        witness: u,
    })
}

/// `Phi(x)` for `x` in the reduced basis, where `Phi(w) = v`.
fn apply_endo(mw: &WhittakerModule, v: &WVector, x: &WVector) -> WVector {
    let mut out = WVector::new();
    for ((i, j), c) in x {
        let fv = mw.act_monomial(Monomial::new(*i, *j, 0), v);
        add_scaled(&mut out, &fv, c);
    }
    out
}

/// `dim End_U(V(g, eta))`. An endomorphism is fixed by the image `v` of
/// `w`, which must satisfy `E v = eta v` (`g(Omega)` already acts by zero).
/// The count is confirmed unchanged when the window grows by `m`, and
/// every solution is checked to commute with `E`, `F`, `K^{+-1}`.
pub fn endomorphism_dimension(
    mw: &WhittakerModule,
    window: u32,
) -> Result<usize, WhittakerError> {
    let sols = whittaker_vectors(mw, window)?;
    let wider = whittaker_vectors(mw, window + mw.m())?;
    if sols.len() != wider.len() {
        return Err(WhittakerError::BoundarySensitive(format!(
            "{} vs {}",
            sols.len(),
            wider.len()
        )));
    }
    let alg = mw.algebra();
    let gens = [
        AlgebraElement::e(alg),
        AlgebraElement::f(alg),
        AlgebraElement::k_pow(alg, 1),
        AlgebraElement::k_pow(alg, -1),
    ];
    let probe = mw.slice(1)?;
    for v in &sols {
        for &(i, j) in &probe {
            let b = basis_element(i, j);
            let pb = apply_endo(mw, v, &b);
            for x in &gens {
                let lhs = apply_endo(mw, v, &mw.act(x, &b)?);
                let rhs = mw.act(x, &pb)?;
                if lhs != rhs {
                    return Err(WhittakerError::CheckFailed(format!(
                        "endomorphism fails to commute at F^{i}K^{j}w"
                    )));
                }
            }
        }
    }
    Ok(sols.len())
}

/// Polynomial in `Omega` evaluated on `w`: `p(Omega) w`.
pub(crate) fn omega_poly_on_w(
    mw: &WhittakerModule,
    p: &OPoly,
) -> Result<WVector, WhittakerError> {
    mw.act_omega_poly(p, &mw.w())
}
