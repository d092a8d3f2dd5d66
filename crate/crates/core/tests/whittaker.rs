use std::collections::BTreeMap;

use proptest::prelude::*;

use uqfk::algebra::{casimir, Algebra, AlgebraElement, Monomial};
use uqfk::poly::Poly;
use uqfk::whittaker::*;
use uqfk::{Field, Scalar};

fn q(k: i64) -> Scalar {
    Scalar::q_pow(k)
}

/// `lambda` coefficients at `K^m` and `K^-m`.
fn lambda(m: u32) -> (Scalar, Scalar) {
    let den = (q(2 * m as i64) - Scalar::one()) * (q(1) - q(-1));
    (q(2 * m as i64) / &den, Scalar::one() / den)
}

fn module(roots: &[(Scalar, u32)], eta: i64, m: u32) -> WhittakerModule {
    let chi = WhittakerCharacter::new(Scalar::from_int(eta)).unwrap();
    make_whittaker_module(CenterIdeal::from_roots(roots), chi, m).unwrap()
}

fn vec_of(terms: &[((u32, i64), Scalar)]) -> WVector {
    let mut v = BTreeMap::new();
    for (k, c) in terms {
        if !c.is_zero() {
            v.insert(*k, c.clone());
        }
    }
    v
}

fn gens(alg: &std::sync::Arc<Algebra>) -> [AlgebraElement; 4] {
    [
        AlgebraElement::e(alg),
        AlgebraElement::f(alg),
        AlgebraElement::k_pow(alg, 1),
        AlgebraElement::k_pow(alg, -1),
    ]
}

#[test]
fn projection_of_casimir() {
    for m in 1..=3u32 {
        let alg = Algebra::fm(m);
        let eta = WhittakerCharacter::new(Scalar::from_int(3)).unwrap();
        let (lp, lm) = lambda(m);
        let expected = AlgebraElement::from_terms(
            &alg,
            [
                (Monomial::new(1, 0, 0), Scalar::from_int(3)),
                (Monomial::new(0, m as i64, 0), lp),
                (Monomial::new(0, -(m as i64), 0), lm),
            ],
        );
        assert_eq!(pi_projection(&casimir(&alg).unwrap(), &eta), expected);
    }
}

#[test]
fn reduced_action_of_e_on_k_powers() {
    let alg = Algebra::fm(2);
    let eta = WhittakerCharacter::new(q(1) + Scalar::one()).unwrap();
    let e = AlgebraElement::e(&alg);
    for j in -4..=4 {
        let kj = AlgebraElement::k_pow(&alg, j);
        let want = kj.scale(&(eta.value() * (q(-2 * j) - Scalar::one())));
        assert_eq!(reduced_action(&e, &kj, &eta).unwrap(), want);
    }
}

#[test]
fn rejects_singular_character() {
    assert_eq!(
        WhittakerCharacter::new(Scalar::zero()),
        Err(WhittakerError::SingularCharacter)
    );
}

#[test]
fn degree_one_explicit_action() {
    // F w = eta^-1 (a - lambda(K)) w and Omega acts by a
    for m in 1..=2u32 {
        let a = q(1);
        let mw = module(&[(a.clone(), 1)], 2, m);
        let alg = mw.algebra().clone();
        let (lp, lm) = lambda(m);
        let half = Scalar::ratio(1, 2);
        let fw = vec_of(&[
            ((0, 0), &a * &half),
            ((0, m as i64), -(&lp * &half)),
            ((0, -(m as i64)), -(&lm * &half)),
        ]);
        assert_eq!(mw.act(&AlgebraElement::f(&alg), &mw.w()).unwrap(), fw);
        let omega = casimir(&alg).unwrap();
        for j in -3..=3 {
            let b = basis_element(0, j);
            let mut ab = b.clone();
            ab.insert((0, j), a.clone());
            assert_eq!(mw.act(&omega, &b).unwrap(), ab);
        }
    }
}

#[test]
fn module_relations_hold() {
    for m in 1..=2u32 {
        let mw = module(&[(q(1), 2), (q(3), 1)], 1, m);
        let alg = mw.algebra().clone();
        let [e, f, k, kinv] = gens(&alg);
        let omega = casimir(&alg).unwrap();
        let g = mw.g_omega().clone();
        let fm = {
            let km = AlgebraElement::k_pow(&alg, m as i64);
            let kmi = AlgebraElement::k_pow(&alg, -(m as i64));
            km.try_sub(&kmi).unwrap().scale(&(q(1) - q(-1)).try_inv().unwrap())
        };
        let probes = [
            basis_element(0, 0),
            basis_element(2, -1),
            vec_of(&[((1, 2), q(3)), ((0, -2), Scalar::from_int(5))]),
        ];
        for v in &probes {
            let act = |x: &AlgebraElement, v: &WVector| mw.act(x, v).unwrap();
            let v = &mw.reduce(v);
            // E F - F E = f_m(K)
            let mut lhs = act(&e, &act(&f, v));
            for (key, c) in act(&f, &act(&e, v)) {
                let slot = lhs.entry(key).or_insert_with(Scalar::zero);
                *slot = &*slot - &c;
            }
            lhs.retain(|_, c| !c.is_zero());
            assert_eq!(lhs, act(&fm, v));
            // K E = q^2 E K, K F = q^-2 F K, K K^-1 = 1
            let ke = act(&k, &act(&e, v));
            let ek: WVector = act(&e, &act(&k, v))
                .into_iter()
                .map(|(key, c)| (key, c * q(2)))
                .collect();
            assert_eq!(ke, ek);
            let kf = act(&k, &act(&f, v));
            let fk: WVector = act(&f, &act(&k, v))
                .into_iter()
                .map(|(key, c)| (key, c * q(-2)))
                .collect();
            assert_eq!(kf, fk);
            assert_eq!(&act(&k, &act(&kinv, v)), v);
            // Omega central, g(Omega) kills everything
            for x in [&e, &f, &k] {
                assert_eq!(act(x, &act(&omega, v)), act(&omega, &act(x, v)));
            }
            assert!(act(&g, v).is_empty());
        }
    }
}

#[test]
fn action_agrees_with_stepwise_generators() {
    // u v computed at once equals applying u's letters one at a time
    let mw = module(&[(q(1), 1), (q(-1), 1)], 1, 1);
    let alg = mw.algebra().clone();
    let [e, f, k, _] = gens(&alg);
    let word = f.try_mul(&e).unwrap().try_mul(&k).unwrap().try_mul(&f).unwrap();
    let v = basis_element(1, 1);
    let stepwise = [&f, &k, &e, &f]
        .iter()
        .fold(v.clone(), |acc, x| mw.act(x, &acc).unwrap());
    assert_eq!(mw.act(&word, &v).unwrap(), stepwise);
}

fn family() -> Vec<Vec<(Scalar, u32)>> {
    vec![
        vec![(q(1), 1)],
        vec![(q(1), 2)],
        vec![(q(1), 1), (q(3), 1)],
    ]
}

#[test]
fn whittaker_vector_dimension_is_degree() {
    for m in 1..=2u32 {
        for roots in family() {
            let mw = module(&roots, 1, m);
            let d = mw.degree().unwrap();
            let vs = whittaker_vectors(&mw, m * d as u32).unwrap();
            assert_eq!(vs.len(), d, "m={m} g={}", mw.ideal());
            // they are the p(Omega) w with deg p < d
            let omega = casimir(mw.algebra()).unwrap();
            let mut x = mw.w();
            for _ in 0..d {
                let e = AlgebraElement::e(mw.algebra());
                let mut ex = mw.act(&e, &x).unwrap();
                for (key, c) in &x {
                    let slot = ex.entry(*key).or_insert_with(Scalar::zero);
                    *slot = &*slot - c;
                }
                ex.retain(|_, c| !c.is_zero());
                assert!(ex.is_empty());
                x = mw.act(&omega, &x).unwrap();
            }
        }
    }
}

#[test]
fn window_too_small_is_reported() {
    let mw = module(&[(q(1), 2)], 1, 2);
    assert_eq!(
        whittaker_vectors(&mw, 1),
        Err(WhittakerError::WindowTooSmall { window: 1, needed: 2 })
    );
}

#[test]
fn minimal_polynomial_of_w_is_g() {
    for roots in family() {
        let mw = module(&roots, 1, 1);
        let d = mw.degree().unwrap();
        assert_eq!(&minimal_polynomial(&mw, &mw.w(), d).unwrap(), mw.ideal().poly());
    }
}

#[test]
fn simplicity() {
    let mw = module(&[(q(1), 1)], 2, 1);
    let probe = vec_of(&[((0, -2), q(1)), ((0, 1), Scalar::from_int(3)), ((0, 4), q(-2))]);
    let cert = is_irreducible_whittaker(&mw, &probe).unwrap();
    assert!(cert.irreducible);
    assert_eq!(mw.act(&cert.witness, &probe).unwrap(), mw.w());

    let mw = module(&[(q(1), 2)], 1, 1);
    let cert = is_irreducible_whittaker(&mw, &mw.w()).unwrap();
    assert!(!cert.irreducible);
}

#[test]
fn lattice_of_square_times_linear() {
    let mw = module(&[(q(1), 2), (q(3), 1)], 1, 1);
    let lat = submodule_lattice(&mw).unwrap();
    assert_eq!(lat.len(), 6);
    assert_eq!(lat.summands.len(), 2);
    assert_eq!(lat.composition_length, 3);
    assert!(lat.primary_maximal.iter().all(|mx| mx.len() == 1));
    // Hasse diagram of divisors of a^2 b: 7 covering pairs
    assert_eq!(lat.covers.len(), 7);
    let dot = lat.to_dot();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 7);
}

#[test]
fn lattice_of_cube_is_a_chain() {
    let mw = module(&[(q(-1), 3)], 1, 1);
    let lat = submodule_lattice(&mw).unwrap();
    assert_eq!(lat.len(), 4);
    assert_eq!(lat.summands.len(), 1);
    assert_eq!(lat.composition_length, 3);
    assert_eq!(lat.covers.len(), 3);
}

#[test]
fn endomorphisms() {
    for m in 1..=2u32 {
        for roots in family() {
            let mw = module(&roots, 1, m);
            let d = mw.degree().unwrap();
            assert_eq!(endomorphism_dimension(&mw, m * d as u32).unwrap(), d);
        }
    }
}

#[test]
fn annihilator_of_maximal_quotient() {
    let mw = module(&[(q(1), 1)], 1, 1);
    let rep = annihilator_slice_check(&mw, 2, 4, 1).unwrap();
    assert_eq!(rep.degree, 4);
    assert!(rep.matches(), "{rep:?}");
    assert!(rep.killers > 0);
}

#[test]
fn freeness_small() {
    for m in 1..=2u32 {
        for n in 0..=2u32 {
            let rep = verify_freeness(n, &Scalar::one(), m).unwrap();
            assert!(rep.is_free(), "{rep:?}");
        }
    }
}

#[test]
fn ideal_factorization_round_trip() {
    let lin = |a: Scalar| Poly::from_coeffs(vec![-a, Scalar::one()]);
    let g = lin(q(1)).mul(&lin(q(1))).mul(&lin(q(3)));
    let ideal = CenterIdeal::from_poly(g.clone()).unwrap();
    assert!(ideal.is_split());
    assert_eq!(ideal, CenterIdeal::from_roots(&[(q(1), 2), (q(3), 1)]));
    assert_eq!(ideal.to_string(), "(Omega - q)^2*(Omega - q^3)");

    let irreducible = Poly::from_coeffs(vec![-q(1), Scalar::zero(), Scalar::one()]);
    let ideal = CenterIdeal::from_poly(irreducible).unwrap();
    assert!(!ideal.is_split());
    assert_eq!(ideal.degree(), Some(2));
    assert_eq!(
        CenterIdeal::from_poly(g.scale(&Scalar::from_int(2))),
        Err(WhittakerError::NotMonic)
    );
}

fn small_root() -> impl Strategy<Value = Scalar> {
    (-2i64..=2, prop::sample::select(vec![1i64, -1, 2])).prop_map(|(e, c)| Scalar::from_int(c) * q(e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reduced_basis_is_consistent(a in small_root(), b in small_root(), i in 0u32..5, j in -3i64..=3) {
        let mw = module(&[(a, 1), (b, 1)], 1, 1);
        let f = AlgebraElement::f(mw.algebra());
        let kj = AlgebraElement::k_pow(mw.algebra(), j);
        let direct = mw.reduce(&basis_element(i, j));
        // F applied i times to K^j w
        let mut v = basis_element(0, j);
        for _ in 0..i {
            v = mw.act(&f, &v).unwrap();
        }
        prop_assert_eq!(&direct, &v);
        // F^i K^j = q^{2ij} K^j F^i
        let mut x = mw.w();
        for _ in 0..i {
            x = mw.act(&f, &x).unwrap();
        }
        let scale = q(2 * j * i as i64);
        let kx: WVector = mw.act(&kj, &x).unwrap().into_iter().map(|(k, c)| (k, c * &scale)).collect();
        prop_assert_eq!(&direct, &kx);
    }
}
