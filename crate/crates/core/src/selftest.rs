//! Quick invariant suite behind `uqfk selftest`.

use crate::algebra::{casimir, casimir_from_ef, is_central, Algebra, AlgebraElement};
use crate::expr::parse_element;
use crate::field::Field;
use crate::hyperbolic::{theta_iterate, theta_xi, RElement};
use crate::scalar::Scalar;
use crate::weight::{are_isomorphic, enumerate_finite_irreps, is_irreducible_finite, verify_relations};
use crate::whittaker::{
    make_whittaker_module, submodule_lattice, whittaker_vectors, CenterIdeal, WhittakerCharacter,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, result: Result<(), String>) -> Check {
    let (passed, detail) = match result {
        Ok(()) => (true, String::new()),
        Err(e) => (false, e),
    };
    Check { name: name.into(), passed, detail }
}

fn ensure(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn relations(m: u32) -> Result<(), String> {
    let alg = Algebra::fm(m);
    let (e, f) = (AlgebraElement::e(&alg), AlgebraElement::f(&alg));
    let (k, ki) = (AlgebraElement::k_pow(&alg, 1), AlgebraElement::k_pow(&alg, -1));
    let q2 = Scalar::q_pow(2);
    ensure((&(&k * &e) - &(&e * &k).scale(&q2)).is_zero(), "KE = q^2 EK")?;
    ensure(
        (&(&k * &f) - &(&f * &k).scale(&q2.try_inv().expect("nonzero"))).is_zero(),
        "KF = q^-2 FK",
    )?;
    ensure((&k * &ki) == AlgebraElement::one(&alg), "K K^-1 = 1")?;
    let fm = parse_element(&format!("(K^{m} - K^-{m})/(q - q^-1)"), &alg)
        .map_err(|x| x.to_string())?;
    ensure((&(&e * &f) - &(&f * &e)) == fm, "EF - FE = f_m(K)")?;
    let omega = casimir(&alg).map_err(|x| x.to_string())?;
    ensure(casimir_from_ef(&alg).map_err(|x| x.to_string())? == omega, "two forms of Omega")?;
    ensure(is_central(&omega), "Omega central")?;
    let back = parse_element(&omega.to_string(), &alg).map_err(|x| x.to_string())?;
    ensure(back == omega, "Omega round trip")
}

fn theta(m: u32) -> Result<(), String> {
    for n in -10..=10 {
        ensure(theta_xi(n, m) == theta_iterate(&RElement::xi(), n, m), "closed form")?;
    }
    Ok(())
}

fn census(n: u32, m: u32) -> Result<(), String> {
    let mods = enumerate_finite_irreps(n, m).map_err(|x| x.to_string())?;
    ensure(mods.len() == 2 * m as usize, "2m modules")?;
    for (i, a) in mods.iter().enumerate() {
        ensure(verify_relations(a).ok(), "relations")?;
        ensure(is_irreducible_finite(a).map_err(|x| x.to_string())?, "irreducible")?;
        for b in &mods[i + 1..] {
            ensure(!are_isomorphic(a, b).map_err(|x| x.to_string())?, "non-isomorphic")?;
        }
    }
    Ok(())
}

fn whittaker(m: u32) -> Result<(), String> {
    let q = Scalar::q_pow;
    let chi = WhittakerCharacter::new(Scalar::one()).map_err(|x| x.to_string())?;
    let ideal = CenterIdeal::from_roots(&[(q(1), 2), (q(3), 1)]);
    let mw = make_whittaker_module(ideal, chi, m).map_err(|x| x.to_string())?;
    let vs = whittaker_vectors(&mw, 3 * m).map_err(|x| x.to_string())?;
    ensure(vs.len() == 3, "Whittaker vectors")?;
    let lat = submodule_lattice(&mw).map_err(|x| x.to_string())?;
    ensure(lat.len() == 6 && lat.summands.len() == 2, "lattice")
}

pub fn run_selftest() -> Vec<Check> {
    let mut out = Vec::new();
    for m in 1..=3 {
        out.push(check(format!("relations m={m}"), relations(m)));
        out.push(check(format!("theta m={m}"), theta(m)));
    }
    for m in 1..=2 {
        for n in 1..=3 {
            out.push(check(format!("irreps n={n} m={m}"), census(n, m)));
        }
        out.push(check(format!("whittaker m={m}"), whittaker(m)));
    }
    out
}
