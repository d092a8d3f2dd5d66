//! Ideals `(g(Omega))` of the center, stored expanded and factored.

use std::fmt;

use super::{OPoly, WhittakerError};
use crate::cyclo::Cyclo;
use crate::field::Field;
use crate::scalar::Scalar;

pub type OmegaPolynomial = OPoly;

/// A space outside every bracket means a top-level sum.
fn top_level_sum(s: &str) -> bool {
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ' ' if depth == 0 => return true,
            _ => {}
        }
    }
    false
}

fn needs_parens(s: &str) -> bool {
    s.starts_with('-') || top_level_sum(s)
}

/// E.g. `Omega^2 - 2*q*Omega + q^2`, highest power first.
pub fn omega_poly_string(p: &OmegaPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let om = match k {
            0 => String::new(),
            1 => "Omega".to_string(),
            _ => format!("Omega^{k}"),
        };
        let cs = c.to_string();
        parts.push(match (om.is_empty(), c.is_one()) {
            (true, _) => cs,
            (false, true) => om,
            (false, false) if top_level_sum(&cs) => format!("({cs})*{om}"),
            (false, false) => format!("{cs}*{om}"),
        });
    }
    let mut out = String::new();
    for (n, part) in parts.iter().enumerate() {
        match (n, part.strip_prefix('-')) {
            (0, _) => out.push_str(part),
            (_, Some(rest)) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            (_, None) => {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
    }
    out
}

fn linear(a: &Scalar) -> OPoly {
    OPoly::from_coeffs(vec![-a.clone(), Scalar::one()])
}

/// `(g(Omega))` with `g` monic or zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterIdeal {
    poly: OPoly,
    /// Distinct roots with multiplicities.
    roots: Vec<(Scalar, u32)>,
    /// Part that did not split into linear factors (monic, degree >= 2).
    rest: Option<OPoly>,
}

impl CenterIdeal {
    /// The zero ideal.
    pub fn zero() -> Self {
        CenterIdeal {
            poly: OPoly::zero(),
            roots: Vec::new(),
            rest: None,
        }
    }

    /// `prod (Omega - a)^e`; equal roots are merged.
    pub fn from_roots(roots: &[(Scalar, u32)]) -> Self {
        let mut merged: Vec<(Scalar, u32)> = Vec::new();
        for (a, e) in roots {
            if *e == 0 {
                continue;
            }
            match merged.iter_mut().find(|(b, _)| b == a) {
                Some(slot) => slot.1 += e,
                None => merged.push((a.clone(), *e)),
            }
        }
        let poly = merged
            .iter()
            .fold(OPoly::one(), |acc, (a, e)| acc.mul(&linear(a).pow(*e)));
        CenterIdeal {
            poly,
            roots: merged,
            rest: None,
        }
    }

    /// `Omega - a`
    pub fn maximal(a: Scalar) -> Self {
        CenterIdeal::from_roots(&[(a, 1)])
    }

    /// Take an expanded monic polynomial and split off the linear factors
    /// that can be found among `c z^k q^r`.
    pub fn from_poly(poly: OPoly) -> Result<Self, WhittakerError> {
        if poly.is_zero() {
            return Ok(CenterIdeal::zero());
        }
        if !poly.is_monic() {
            return Err(WhittakerError::NotMonic);
        }
        let (roots, rest) = split_linear(&poly);
        Ok(CenterIdeal {
            poly,
            roots,
            rest: rest.filter(|r| r.degree() != Some(0)),
        })
    }

    pub fn poly(&self) -> &OPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn roots(&self) -> &[(Scalar, u32)] {
        &self.roots
    }

    pub fn unsplit(&self) -> Option<&OPoly> {
        self.rest.as_ref()
    }

    pub fn is_split(&self) -> bool {
        self.rest.is_none()
    }

    /// Monic divisors as exponent vectors over `roots`.
    pub fn divisor_exponents(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for (_, e) in &self.roots {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=*e).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// `prod (Omega - a_i)^{k_i}`
    pub fn divisor_poly(&self, exps: &[u32]) -> OPoly {
        self.roots
            .iter()
            .zip(exps)
            .fold(OPoly::one(), |acc, ((a, _), k)| acc.mul(&linear(a).pow(*k)))
    }

    pub fn divisor_string(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = self
            .roots
            .iter()
            .zip(exps)
            .filter(|(_, k)| **k > 0)
            .map(|((a, _), k)| {
                let f = factor_string(a);
                if *k == 1 {
                    f
                } else {
                    format!("{f}^{k}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

fn factor_string(a: &Scalar) -> String {
    if a.is_zero() {
        return "Omega".to_string();
    }
    let s = a.to_string();
    if needs_parens(&s) {
        format!("(Omega - ({s}))")
    } else {
        format!("(Omega - {s})")
    }
}

impl fmt::Display for CenterIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let exps: Vec<u32> = self.roots.iter().map(|(_, e)| *e).collect();
        let mut s = self.divisor_string(&exps);
        if let Some(rest) = &self.rest {
            let r = format!("({})", omega_poly_string(rest));
            s = if s == "1" { r } else { format!("{s}*{r}") };
        }
        write!(f, "{s}")
    }
}

/// Candidate roots `c z^k q^r`: `c = +-a/b` with `a <= 6`, `b <= 3`, `r`
/// bounded by the `q`-degrees of the coefficients, `z` the root of unity
/// appearing in them.
fn candidates(p: &OPoly) -> Vec<Scalar> {
    let mut order = 1u32;
    let mut span = 0i64;
    for c in p.coeffs() {
        if c.is_zero() {
            continue;
        }
        for poly in [c.numer(), c.denom()] {
            span = span.max(poly.degree().unwrap_or(0) as i64);
            for x in poly.coeffs() {
                if x.order() > 1 {
                    order = x.order();
                }
            }
        }
    }
    let deg = p.degree().unwrap_or(1).max(1) as i64;
    let span = span * 2 / deg + 2;
    let mut rationals: Vec<Scalar> = Vec::new();
    for num in 1..=6i64 {
        for den in 1..=3i64 {
            for sign in [1, -1] {
                let r = Scalar::ratio(sign * num, den);
                if !rationals.contains(&r) {
                    rationals.push(r);
                }
            }
        }
    }
    let z = Cyclo::zeta(order.max(1));
    let mut out = vec![Scalar::zero()];
    for k in 0..order {
        let zk = Scalar::cyclo(Field::pow(&z, k as u64));
        for c in &rationals {
            for r in -span..=span {
                out.push(c * &zk * Scalar::q_pow(r));
            }
        }
    }
    out
}

/// Repeatedly divide out `Omega - a` for candidate roots `a`.
fn split_linear(p: &OPoly) -> (Vec<(Scalar, u32)>, Option<OPoly>) {
    let mut rest = p.clone();
    let mut roots: Vec<(Scalar, u32)> = Vec::new();
    for a in candidates(p) {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        loop {
            if rest.degree().unwrap_or(0) == 0 || !rest.eval(&a).is_zero() {
                break;
            }
            let (q, r) = rest.div_rem(&linear(&a));
            debug_assert!(r.is_zero());
            rest = q;
            match roots.iter_mut().find(|(b, _)| *b == a) {
                Some(slot) => slot.1 += 1,
                None => roots.push((a.clone(), 1)),
            }
        }
    }
    let rest = (rest.degree().unwrap_or(0) > 0).then_some(rest);
    (roots, rest)
}
