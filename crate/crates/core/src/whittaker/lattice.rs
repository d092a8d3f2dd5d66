//! Submodules of `V(g, eta)` for split `g`: one per monic divisor `d`,
//! namely `U d(Omega) w`.

use serde_json::{json, Value};

use super::ideal::omega_poly_string;
use super::vectors::{minimal_polynomial, omega_poly_on_w};
use crate::field::Field;
use crate::scalar::Scalar;

use super::{add_scaled, OPoly, WVector, WhittakerError, WhittakerModule};

#[derive(Clone, Debug)]
pub struct Submodule {
    /// Exponents of the divisor over the distinct roots of `g`.
    pub exponents: Vec<u32>,
    pub label: String,
    pub divisor: OPoly,
    pub generator: WVector,
    /// Minimal polynomial of `Omega` on the generator; equals `g / d`.
    pub annihilator: OPoly,
}

impl Submodule {
    /// Composition length of the submodule, `deg (g / d)`.
    pub fn length(&self) -> usize {
        self.annihilator.degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct Summand {
    pub root_index: usize,
    pub label: String,
    /// `e(Omega)` with `e = 1 mod p^k`, `e = 0 mod g / p^k`.
    pub idempotent: OPoly,
}

#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    pub ideal: String,
    pub submodules: Vec<Submodule>,
    /// Covering pairs `(smaller, larger)`.
    pub covers: Vec<(usize, usize)>,
    pub summands: Vec<Summand>,
    pub composition_length: usize,
    /// Maximal proper submodules of each primary component, by root.
    pub primary_maximal: Vec<Vec<usize>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl SubmoduleLattice {
    pub fn len(&self) -> usize {
        self.submodules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.submodules.is_empty()
    }

    /// Whether submodule `a` lies inside submodule `b`.
    pub fn contains(&self, b: usize, a: usize) -> bool {
        divides(&self.submodules[b].exponents, &self.submodules[a].exponents)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for (n, sm) in self.submodules.iter().enumerate() {
            s.push_str(&format!("  s{n} [label=\"U*{}*w\"];\n", sm.label));
        }
        for (a, b) in &self.covers {
            s.push_str(&format!("  s{a} -> s{b};\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "ideal: {}\nsubmodules: {}\nsummands: {}\ncomposition length: {}\n",
            self.ideal,
            self.submodules.len(),
            self.summands.len(),
            self.composition_length
        );
        for (n, sm) in self.submodules.iter().enumerate() {
            s.push_str(&format!("  [{n}] U*{}*w  length {}\n", sm.label, sm.length()));
        }
        for (a, b) in &self.covers {
            s.push_str(&format!("  [{a}] < [{b}]\n"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ideal": self.ideal,
            "submodules": self.submodules.iter().map(|sm| json!({
                "divisor": sm.label,
                "length": sm.length(),
                "annihilator": omega_poly_string(&sm.annihilator),
            })).collect::<Vec<_>>(),
            "covers": self.covers,
            "summands": self.summands.iter().map(|s| s.label.clone()).collect::<Vec<_>>(),
            "composition_length": self.composition_length,
            "primary_maximal": self.primary_maximal,
        })
    }
}

fn exact_quotient(a: &OPoly, b: &OPoly) -> Option<OPoly> {
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

/// Build the lattice and certify each piece:
/// the annihilator of `d(Omega) w` in `C[Omega]` is `g / d`, containments
/// are realised by explicit `h(Omega)`, summands come with idempotents
/// summing to 1 modulo `g`.
pub fn submodule_lattice(mw: &WhittakerModule) -> Result<SubmoduleLattice, WhittakerError> {
    let ideal = mw.ideal();
    let g = ideal.poly().clone();
    let deg = ideal.degree().ok_or(WhittakerError::ZeroIdeal)?;
    if !ideal.is_split() {
        return Err(WhittakerError::NotSplit(ideal.to_string()));
    }

    let mut submodules = Vec::new();
    for exps in ideal.divisor_exponents() {
        let divisor = ideal.divisor_poly(&exps);
        let generator = omega_poly_on_w(mw, &divisor)?;
        let expected = exact_quotient(&g, &divisor).expect("divisor");
        let annihilator = if generator.is_empty() {
            OPoly::one()
        } else {
            minimal_polynomial(mw, &generator, deg)?
        };
        if annihilator != expected {
            return Err(WhittakerError::CheckFailed(format!(
                "annihilator of {}",
                ideal.divisor_string(&exps)
            )));
        }
        submodules.push(Submodule {
            label: ideal.divisor_string(&exps),
            exponents: exps,
            divisor,
            generator,
            annihilator,
        });
    }

    // U d1 w inside U d2 w when d2 | d1: d1 w = (d1/d2)(Omega) d2 w
    let mut covers = Vec::new();
    for (a, sa) in submodules.iter().enumerate() {
        for (b, sb) in submodules.iter().enumerate() {
            if a == b || !divides(&sb.exponents, &sa.exponents) {
                continue;
            }
            let h = exact_quotient(&sa.divisor, &sb.divisor).expect("divides");
            if mw.act_omega_poly(&h, &sb.generator)? != sa.generator {
                return Err(WhittakerError::CheckFailed("containment".into()));
            }
            let gap: u32 = sa
                .exponents
                .iter()
                .zip(&sb.exponents)
                .map(|(x, y)| x - y)
                .sum();
            if gap == 1 {
                covers.push((a, b));
            }
        }
    }

    let roots = ideal.roots();
    let primary: Vec<OPoly> = roots
        .iter()
        .map(|(a, e)| OPoly::from_coeffs(vec![-a.clone(), Scalar::one()]).pow(*e))
        .collect();
    let mut summands = Vec::new();
    let mut total = WVector::new();
    for (n, p) in primary.iter().enumerate() {
        let cofactor = exact_quotient(&g, p).expect("factor");
        // s * cofactor + t * p = 1
        let (gcd, s, _) = cofactor.ext_gcd(p);
        if !gcd.is_one() {
            return Err(WhittakerError::CheckFailed("coprime factors".into()));
        }
        let idem = s.mul(&cofactor).div_rem(&g).1;
        let part = omega_poly_on_w(mw, &idem)?;
        add_scaled(&mut total, &part, &Scalar::one());
        let mut exps = vec![0; roots.len()];
        for (k, (_, e)) in roots.iter().enumerate() {
            if k != n {
                exps[k] = *e;
            }
        }
        summands.push(Summand {
            root_index: n,
            label: ideal.divisor_string(&exps),
            idempotent: idem,
        });
    }
    if total != mw.w() {
        return Err(WhittakerError::CheckFailed("idempotents".into()));
    }

    // primary component n: submodules whose divisor carries the full
    // multiplicity at every other root
    let mut primary_maximal = Vec::new();
    for (n, (_, e)) in roots.iter().enumerate() {
        let in_component: Vec<usize> = submodules
            .iter()
            .enumerate()
            .filter(|(_, sm)| {
                sm.exponents
                    .iter()
                    .enumerate()
                    .all(|(k, x)| k == n || *x == roots[k].1)
            })
            .map(|(i, _)| i)
            .collect();
        let proper: Vec<usize> = in_component
            .iter()
            .copied()
            .filter(|&i| submodules[i].exponents[n] > 0)
            .collect();
        let maximal: Vec<usize> = proper
            .iter()
            .copied()
            .filter(|&i| {
                !proper.iter().any(|&j| {
                    j != i && divides(&submodules[j].exponents, &submodules[i].exponents)
                })
            })
            .collect();
        debug_assert!(*e == 0 || !maximal.is_empty());
        primary_maximal.push(maximal);
    }

    Ok(SubmoduleLattice {
        ideal: ideal.to_string(),
        submodules,
        covers,
        summands,
        composition_length: roots.iter().map(|(_, e)| *e as usize).sum(),
        primary_maximal,
    })
}
