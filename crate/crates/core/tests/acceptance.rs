//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or overruns its time budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use uqfk::algebra::{
    casimir, casimir_from_ef, pbw_monomial_count, pbw_monomials, Algebra, AlgebraElement,
    LaurentPoly, Monomial,
};
use uqfk::hyperbolic::{theta_iterate, theta_xi, CharacterPoint, RElement};
use uqfk::linalg::{rank_of, Matrix};
use uqfk::weight::{
    are_isomorphic, enumerate_finite_irreps, is_irreducible_finite, quotient_oracle_action,
    verify_relations, MatrixModule, WeightModule,
};
use uqfk::whittaker::{
    annihilator_slice_check, endomorphism_dimension, make_whittaker_module, submodule_lattice,
    verify_freeness, whittaker_vectors, CenterIdeal, WVector, WhittakerCharacter,
    WhittakerModule,
};
use uqfk::{Field, Scalar};

fn q(n: i64) -> Scalar {
    Scalar::q_pow(n)
}

fn d() -> Scalar {
    q(1) - q(-1)
}

fn fm_at(x: &Scalar, m: u32) -> Scalar {
    let xm = x.pow_i(m as i64).unwrap();
    (&xm - xm.try_inv().unwrap()) / d()
}

fn mono(alg: &Arc<Algebra>, a: u32, b: i64, c: u32) -> AlgebraElement {
    AlgebraElement::monomial(alg, Monomial::new(a, b, c), Scalar::one())
}

/// `(q^{2m} K^m + K^{-m}) / ((q^{2m} - 1)(q - q^-1))` built by hand.
fn lambda(alg: &Arc<Algebra>, m: u32) -> AlgebraElement {
    let m = m as i64;
    let den = ((q(2 * m) - Scalar::one()) * d()).try_inv().unwrap();
    let p = LaurentPoly::from_terms([(m, q(2 * m) * &den), (-m, den)]);
    AlgebraElement::laurent(alg, &p)
}

fn c1_relations() {
    for m in 1..=3u32 {
        let alg = Algebra::fm(m);
        let (e, f) = (mono(&alg, 0, 0, 1), mono(&alg, 1, 0, 0));
        let (k, ki) = (mono(&alg, 0, 1, 0), mono(&alg, 0, -1, 0));
        let km = (&mono(&alg, 0, m as i64, 0) - &mono(&alg, 0, -(m as i64), 0))
            .scale(&d().try_inv().unwrap());
        assert!((&(&k * &e) - &(&e * &k).scale(&q(2))).is_zero(), "KE m={m}");
        assert!((&(&k * &f) - &(&f * &k).scale(&q(-2))).is_zero(), "KF m={m}");
        assert!((&(&k * &ki) - &AlgebraElement::one(&alg)).is_zero(), "KK^-1 m={m}");
        assert!((&(&(&e * &f) - &(&f * &e)) - &km).is_zero(), "EF-FE m={m}");

        let fe_form = &(&f * &e) + &lambda(&alg, m);
        let ef_form = &(&(&e * &f) - &km) + &lambda(&alg, m);
        let omega = casimir(&alg).unwrap();
        assert_eq!(omega, fe_form, "FE form m={m}");
        assert_eq!(casimir_from_ef(&alg).unwrap(), ef_form, "EF form m={m}");
        assert_eq!(fe_form, ef_form, "forms agree m={m}");
        for x in [&e, &f, &k, &ki] {
            assert!(omega.commutator(x).unwrap().is_zero(), "[Omega, {x}] m={m}");
        }
    }
}

/// `theta^n(xi)` at `(alpha, beta)` by summing one-step increments.
fn theta_value(alpha: &Scalar, beta: &Scalar, m: u32, n: i64) -> Scalar {
    let mut acc = alpha.clone();
    if n >= 0 {
        for t in 1..=n {
            acc = acc + fm_at(&(q(-2 * t) * beta), m);
        }
    } else {
        for t in 0..-n {
            acc = acc - fm_at(&(q(2 * t) * beta), m);
        }
    }
    acc
}

fn c2_theta() {
    let alpha = Scalar::ratio(2, 3) + q(5);
    let beta = Scalar::ratio(-3, 2) * q(3);
    for m in 1..=3u32 {
        let p = CharacterPoint::new(alpha.clone(), beta.clone(), m).unwrap();
        for n in -20..=20i64 {
            let closed = theta_xi(n, m);
            assert_eq!(closed, theta_iterate(&RElement::xi(), n, m), "m={m} n={n}");
            assert_eq!(
                uqfk::hyperbolic::evaluate(&closed, &p),
                theta_value(&alpha, &beta, m, n),
                "m={m} n={n}"
            );
        }
    }
}

fn mat_pow(a: &Matrix<Scalar>, n: u32) -> Matrix<Scalar> {
    (0..n).fold(Matrix::identity(a.rows()), |acc, _| acc.mul(a))
}

/// Relations checked on the matrices directly.
fn matrices_satisfy_relations(mm: &MatrixModule) -> bool {
    let m = mm.m;
    let n = mm.dimension();
    let fm = mat_pow(&mm.k, m)
        .sub(&mat_pow(&mm.kinv, m))
        .scale(&d().try_inv().unwrap());
    mm.k.mul(&mm.kinv) == Matrix::identity(n)
        && mm.k.mul(&mm.e) == mm.e.mul(&mm.k).scale(&q(2))
        && mm.k.mul(&mm.f) == mm.f.mul(&mm.k).scale(&q(-2))
        && mm.e.mul(&mm.f).sub(&mm.f.mul(&mm.e)) == fm
}

fn casimir_matrix(mm: &MatrixModule) -> Matrix<Scalar> {
    let m = mm.m;
    let den = ((q(2 * m as i64) - Scalar::one()) * d()).try_inv().unwrap();
    let lam = mat_pow(&mm.k, m)
        .scale(&q(2 * m as i64))
        .add(&mat_pow(&mm.kinv, m))
        .scale(&den);
    mm.f.mul(&mm.e).add(&lam)
}

/// `K` diagonal with distinct eigenvalues and `E`, `F` linking every pair
/// of neighbouring weight lines: no proper coordinate submodule exists.
fn chain_irreducible(mm: &MatrixModule) -> bool {
    let n = mm.dimension();
    let diag: Vec<Scalar> = (0..n).map(|i| mm.k.get(i, i).clone()).collect();
    let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || mm.k.get(r, c).is_zero()));
    let distinct = (0..n).all(|i| (i + 1..n).all(|j| diag[i] != diag[j]));
    let linked = |x: &Matrix<Scalar>| {
        (0..n.saturating_sub(1)).all(|i| !x.get(i, i + 1).is_zero() || !x.get(i + 1, i).is_zero())
    };
    diagonal && distinct && linked(&mm.e) && linked(&mm.f)
}

fn spectrum(mm: &MatrixModule) -> Vec<String> {
    let mut s: Vec<String> = (0..mm.dimension()).map(|i| mm.k.get(i, i).to_string()).collect();
    s.sort();
    s
}

fn c3_census() {
    for m in 1..=3u32 {
        for n in 1..=6u32 {
            let mods = enumerate_finite_irreps(n, m).unwrap();
            assert_eq!(mods.len(), 2 * m as usize, "m={m} n={n}");
            let mats: Vec<MatrixModule> =
                mods.iter().map(|w| w.to_matrix_module().unwrap()).collect();
            let mut invariants = Vec::new();
            for (w, mm) in mods.iter().zip(&mats) {
                assert_eq!(mm.dimension(), n as usize);
                assert!(verify_relations(w).ok(), "m={m} n={n}");
                assert!(matrices_satisfy_relations(mm), "m={m} n={n}");
                assert!(is_irreducible_finite(w).unwrap(), "m={m} n={n}");
                assert!(chain_irreducible(mm), "m={m} n={n}");
                let om = casimir_matrix(mm);
                let c = om.get(0, 0).clone();
                assert_eq!(om, Matrix::identity(mm.dimension()).scale(&c));
                invariants.push((spectrum(mm), c));
            }
            for i in 0..mods.len() {
                for j in i + 1..mods.len() {
                    assert!(!are_isomorphic(&mods[i], &mods[j]).unwrap());
                    assert_ne!(invariants[i], invariants[j], "m={m} n={n} {i}~{j}");
                }
            }
        }
    }
}

fn coords(v: &uqfk::weight::WeightVector, dim: usize) -> Vec<Scalar> {
    (0..dim as i64)
        .map(|i| v.get(&i).cloned().unwrap_or_else(Scalar::zero))
        .collect()
}

fn c4_oracle() {
    for m in 1..=2u32 {
        let alg = Algebra::fm(m);
        let spanning = pbw_monomials(3);
        for n in 1..=4u32 {
            for w in enumerate_finite_irreps(n, m).unwrap() {
                let dim = n as usize;
                for x in &spanning {
                    let u = AlgebraElement::monomial(&alg, *x, Scalar::one());
                    for i in 0..dim {
                        let closed = w.act(&u, &WeightModule::basis_vector(i as i64)).unwrap();
                        let oracle = quotient_oracle_action(&u, i, w.point(), w.class()).unwrap();
                        assert_eq!(coords(&closed, dim), oracle, "m={m} n={n} u={u} i={i}");
                    }
                }
            }
        }
    }
}

fn c5_sl2() {
    let mods = enumerate_finite_irreps(2, 1).unwrap();
    assert_eq!(mods.len(), 2);
    for w in &mods {
        let mm = w.to_matrix_module().unwrap();
        let lhs = mm.e.mul(&mm.f).sub(&mm.f.mul(&mm.e));
        let rhs = mm.k.sub(&mm.kinv).scale(&d().try_inv().unwrap());
        assert_eq!(lhs, rhs);
        assert!(matrices_satisfy_relations(&mm));
        // weights are +-q, +-q^-1 as for sl2
        let s = spectrum(&mm);
        let sign = mm.k.get(0, 0).clone() * q(-1);
        let mut want = vec![(sign.clone() * q(1)).to_string(), (sign * q(-1)).to_string()];
        want.sort();
        assert_eq!(s, want);
    }
}

fn module(roots: &[(Scalar, u32)], m: u32) -> WhittakerModule {
    let chi = WhittakerCharacter::new(Scalar::one()).unwrap();
    make_whittaker_module(CenterIdeal::from_roots(roots), chi, m).unwrap()
}

fn is_zero(v: &WVector) -> bool {
    v.values().all(|c| c.is_zero())
}

fn rank(vs: &[WVector]) -> usize {
    let mut keys: Vec<(u32, i64)> = vs.iter().flat_map(|v| v.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Scalar>> = vs
        .iter()
        .map(|v| keys.iter().map(|k| v.get(k).cloned().unwrap_or_else(Scalar::zero)).collect())
        .collect();
    rank_of(&rows)
}

fn shapes() -> Vec<(Vec<(Scalar, u32)>, usize)> {
    vec![
        (vec![(q(1), 1)], 1),
        (vec![(q(1), 2)], 2),
        (vec![(q(1), 1), (q(3), 1)], 2),
    ]
}

fn c6_whittaker_vectors() {
    for m in 1..=2u32 {
        for (roots, deg) in shapes() {
            let mw = module(&roots, m);
            let alg = mw.algebra().clone();
            let e_eta = &mono(&alg, 0, 0, 1) - &AlgebraElement::one(&alg);
            let vs = whittaker_vectors(&mw, m * deg as u32).unwrap();
            assert_eq!(vs.len(), deg, "m={m} roots={roots:?}");
            assert_eq!(rank(&vs), deg);
            for v in &vs {
                assert!(is_zero(&mw.act(&e_eta, v).unwrap()));
            }
            // Omega^k w, k < deg, are Whittaker vectors spanning the same space
            let omega = casimir(&alg).unwrap();
            let mut powers = vec![mw.w()];
            for _ in 1..deg {
                let next = mw.act(&omega, powers.last().unwrap()).unwrap();
                powers.push(next);
            }
            let mut all = vs.clone();
            all.extend(powers);
            assert_eq!(rank(&all), deg);
        }
    }
}

fn c7_lattice() {
    for m in 1..=2u32 {
        let mw = module(&[(q(1), 2), (q(3), 1)], m);
        let lat = submodule_lattice(&mw).unwrap();
        assert_eq!(lat.len(), 3 * 2, "divisors of (x-a)^2(x-b)");
        assert_eq!(lat.summands.len(), 2);
        assert_eq!(lat.composition_length, 3);
        assert_eq!(lat.covers.len(), 7);
        assert_eq!(lat.primary_maximal.len(), 2);
        for maxes in &lat.primary_maximal {
            assert_eq!(maxes.len(), 1, "unique maximal submodule per primary part");
        }
        for s in &lat.submodules {
            assert!(is_zero(&mw.act_omega_poly(&s.annihilator, &s.generator).unwrap()));
            let total: u32 = s.exponents.iter().sum();
            assert_eq!(s.length(), 3 - total as usize);
        }
    }
}

fn c8_freeness() {
    for m in 1..=2u32 {
        for n in 1..=4u32 {
            let r = verify_freeness(n, &Scalar::one(), m).unwrap();
            let top = (n * m) as i64;
            let mut target = 0;
            for i in 0..=n as i64 {
                for j in -top..=top {
                    if i * m as i64 + j.abs() <= top {
                        target += 1;
                    }
                }
            }
            assert_eq!(r.expected, target, "n={n} m={m}");
            assert_eq!(r.rank, target, "n={n} m={m}");
            assert!(r.is_free(), "n={n} m={m}");
        }
    }
}

fn c9_annihilator() {
    let mw = module(&[(q(1), 1)], 1);
    let r = annihilator_slice_check(&mw, 2, 4, 1).unwrap();
    assert_eq!(r.degree, 4);
    assert_eq!(r.ambient_dim, pbw_monomials(4).len());
    assert_eq!(r.killers, r.ideal_part, "{r:?}");
    assert_eq!(r.killers, r.killers_wider, "{r:?}");
    assert_eq!(r.killers_of_w, r.left_ideal_part, "{r:?}");
}

fn c10_endomorphisms() {
    for m in 1..=2u32 {
        for (roots, deg) in shapes() {
            let mw = module(&roots, m);
            assert_eq!(endomorphism_dimension(&mw, m * deg as u32).unwrap(), deg);
        }
    }
}

fn c11_growth() {
    for n in 0..=30u64 {
        let mut brute = 0u128;
        for a in 0..=n as i64 {
            for b in -(n as i64)..=n as i64 {
                for c in 0..=n as i64 {
                    if a + b.abs() + c <= n as i64 {
                        brute += 1;
                    }
                }
            }
        }
        let cubic = (n as u128 + 1) * (n as u128 + 2) * (2 * n as u128 + 3) / 6;
        assert_eq!(pbw_monomial_count(n), brute, "n={n}");
        assert_eq!(brute, cubic, "n={n}");
        if n <= 8 {
            assert_eq!(pbw_monomials(n as u32).len() as u128, brute);
        }
    }
}

type Criterion = (u32, &'static str, u64, fn());

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (1, "relations and Casimir", 5, c1_relations),
        (2, "theta closed forms", 5, c2_theta),
        (3, "irrep census", 30, c3_census),
        (4, "closed form vs quotient oracle", 60, c4_oracle),
        (5, "sl2 matrices", 1, c5_sl2),
        (6, "Whittaker vectors", 30, c6_whittaker_vectors),
        (7, "submodule lattice", 30, c7_lattice),
        (8, "freeness", 30, c8_freeness),
        (9, "annihilator slices", 120, c9_annihilator),
        (10, "endomorphism dimension", 30, c10_endomorphisms),
        (11, "growth count", 1, c11_growth),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(run)).is_ok();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        let note = if ok && !in_time { " over budget" } else { "" };
        println!(
            "{verdict} criterion {n}: {name} ({:.2}s, budget {budget}s){note}",
            took.as_secs_f64()
        );
        if verdict == "FAIL" {
            failed += 1;
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
