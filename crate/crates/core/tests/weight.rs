use uqfk::algebra::{pbw_monomials, Algebra, AlgebraElement, LaurentPoly};
use uqfk::hyperbolic::{CharacterPoint, SpectrumClass};
use uqfk::linalg::Matrix;
use uqfk::weight::*;
use uqfk::{Cyclo, Field, Scalar};

fn d() -> Scalar {
    Scalar::q() - Scalar::q_pow(-1)
}

fn fm_at(x: &Scalar, m: u32) -> Scalar {
    let xm = x.pow_i(m as i64).unwrap();
    (&xm - xm.try_inv().unwrap()) / d()
}

fn module(alpha: Scalar, beta: Scalar, m: u32, t: u32) -> WeightModule {
    construct_weight_module(&CharacterPoint::new(alpha, beta, m).unwrap(), t).unwrap()
}

fn col(v: &WeightVector, dim: usize) -> Vec<Scalar> {
    (0..dim as i64)
        .map(|i| v.get(&i).cloned().unwrap_or_else(Scalar::zero))
        .collect()
}

#[test]
fn two_dimensional_m1() {
    let w = module(Scalar::one(), Scalar::q(), 1, 1);
    assert_eq!(w.class(), SpectrumClass::Finite1N(1));
    assert_eq!(w.dimension(), Some(2));
    assert_eq!(w.k_eigen(0), Scalar::q());
    assert_eq!(w.k_eigen(1), Scalar::q_pow(-1));
    assert_eq!(w.e_coeff(1), Scalar::one());
    assert!(w.e_coeff(0).is_zero());
    assert!(w.e_coeff(2).is_zero());
}

#[test]
fn trivial_module() {
    let w = module(Scalar::zero(), Scalar::one(), 1, 1);
    assert_eq!(w.dimension(), Some(1));
    let mm = w.to_matrix_module().unwrap();
    assert!(mm.e.is_zero() && mm.f.is_zero());
    assert_eq!(mm.k, Matrix::identity(1));
}

#[test]
fn three_dimensional_m2() {
    let beta = Scalar::q_pow(2);
    let w = module(fm_at(&beta, 2), beta, 2, 1);
    assert_eq!(w.dimension(), Some(3));
    let report = verify_relations(&w);
    assert!(report.ok(), "{report:?}");
    assert_eq!(report.checked, vec![0, 1, 2]);
    assert!(w.to_matrix_module().unwrap().satisfies_relations());
}

#[test]
fn corrupted_module_is_located() {
    let beta = Scalar::q_pow(2);
    let w = module(fm_at(&beta, 1), beta, 1, 1).with_e_coeff(2, Scalar::from_int(7));
    let report = verify_relations(&w);
    assert!(!report.ok());
    let bad: Vec<i64> = report.failures.iter().map(|f| f.index).collect();
    assert!(bad.contains(&1) && bad.contains(&2), "{report:?}");
    assert!(report.failures.iter().all(|f| f.relation == "EF - FE = f(K)"));
}

#[test]
fn infinite_windows_satisfy_relations() {
    for m in 1..=2 {
        let cases = [
            (Scalar::q_pow(7), Scalar::q_pow(3), SpectrumClass::DenseInfInf),
            (fm_at(&Scalar::q_pow(-2), m), Scalar::q_pow(-2), SpectrumClass::HighestWeight1Inf),
            (Scalar::zero(), Scalar::q_pow(2), SpectrumClass::LowestWeightInf1),
        ];
        for (a, b, class) in &cases {
            let w = module(a.clone(), b.clone(), m, 5);
            assert_eq!(w.class(), *class);
            let report = verify_relations(&w);
            assert!(report.ok(), "{class}: {report:?}");
            assert!(report.checked.len() >= 5);
            // K-eigenvalues pairwise distinct in the window
            let eig: Vec<Scalar> = w.indices().iter().map(|&i| w.k_eigen(i)).collect();
            for x in 0..eig.len() {
                for y in x + 1..eig.len() {
                    assert_ne!(eig[x], eig[y]);
                }
            }
            // stepping out of the window is reported, not silently dropped
            if *class == SpectrumClass::DenseInfInf {
                let top = *w.indices().last().unwrap();
                assert!(matches!(
                    w.apply_generator(Generator::F, top),
                    Err(WeightError::OutOfWindow(_))
                ));
            }
        }
    }
}

#[test]
fn highest_weight_has_no_interior_zero() {
    for m in 1..=3 {
        let beta = Scalar::from_int(3) * Scalar::q();
        let w = module(fm_at(&beta, m), beta, m, 12);
        assert!(w.e_coeff(0).is_zero());
        for i in 1..=12 {
            assert!(!w.e_coeff(i).is_zero());
        }
    }
}

#[test]
fn quotient_oracle_examples() {
    let alg = Algebra::fm(1);
    let beta = Scalar::q_pow(2);
    let alpha = fm_at(&beta, 1);
    let p = CharacterPoint::new(alpha.clone(), beta.clone(), 1).unwrap();
    let class = SpectrumClass::Finite1N(2);
    let e = AlgebraElement::e(&alg);
    let k = AlgebraElement::k(&alg);
    let ef = &e * &AlgebraElement::f(&alg);
    let zero = vec![Scalar::zero(); 3];
    assert_eq!(quotient_oracle_action(&e, 0, &p, class).unwrap(), zero);
    let mut want = zero.clone();
    want[1] = Scalar::q_pow(-2) * &beta;
    assert_eq!(quotient_oracle_action(&k, 1, &p, class).unwrap(), want);
    let mut want = zero;
    want[0] = alpha;
    assert_eq!(quotient_oracle_action(&ef, 0, &p, class).unwrap(), want);
    assert!(matches!(
        quotient_oracle_action(&e, 0, &p, SpectrumClass::DenseInfInf),
        Err(WeightError::NotFinite)
    ));
}

#[test]
fn closed_form_matches_quotient_oracle_small() {
    let alg = Algebra::fm(1);
    let spanning = pbw_monomials(2);
    for w in enumerate_finite_irreps(3, 1).unwrap() {
        for mono in &spanning {
            let u = AlgebraElement::monomial(&alg, *mono, Scalar::one());
            for i in 0..3usize {
                let closed = w.act(&u, &WeightModule::basis_vector(i as i64)).unwrap();
                let oracle = quotient_oracle_action(&u, i, w.point(), w.class()).unwrap();
                assert_eq!(col(&closed, 3), oracle, "u={u} i={i}");
            }
        }
    }
}

#[test]
fn irreducibility_matches_subspace_search() {
    for m in 1..=2 {
        for n in 1..=4 {
            for w in enumerate_finite_irreps(n, m).unwrap() {
                let mm = w.to_matrix_module().unwrap();
                assert!(is_irreducible_finite(&w).unwrap());
                assert!(mm.is_irreducible_by_search());
                if n >= 2 {
                    // killing one E-coefficient opens an invariant subspace
                    let broken = w.clone().with_e_coeff(1, Scalar::zero());
                    assert!(!is_irreducible_finite(&broken).unwrap());
                    assert!(!broken.to_matrix_module().unwrap().is_irreducible_by_search());
                }
            }
        }
    }
}

#[test]
fn direct_sum_is_reducible() {
    let a = module(Scalar::zero(), Scalar::one(), 1, 1).to_matrix_module().unwrap();
    let b = module(Scalar::zero(), Scalar::from_int(-1), 1, 1).to_matrix_module().unwrap();
    let s = a.direct_sum(&b);
    assert!(s.satisfies_relations());
    assert!(!s.is_irreducible_by_search());
    assert_eq!(s.invariant_coordinate_subspaces(), vec![vec![0], vec![1]]);
}

#[test]
fn census_examples() {
    let betas = |n, m| {
        enumerate_finite_irreps(n, m)
            .unwrap()
            .iter()
            .map(|w| w.point().beta().clone())
            .collect::<Vec<_>>()
    };
    assert_eq!(betas(1, 1), vec![Scalar::one(), Scalar::from_int(-1)]);
    assert_eq!(betas(2, 1), vec![Scalar::q(), -Scalar::q()]);
    let i = Scalar::cyclo(Cyclo::zeta(4));
    let got = betas(2, 2);
    for b in [Scalar::q(), -Scalar::q(), &i * Scalar::q(), -(&i * Scalar::q())] {
        assert!(got.contains(&b), "{b} missing");
    }
    for w in enumerate_finite_irreps(2, 1).unwrap() {
        // alpha = (beta - beta^-1) / (q - q^-1) = +-1
        let sign = if *w.point().beta() == Scalar::q() { 1 } else { -1 };
        assert_eq!(*w.point().alpha(), Scalar::from_int(sign));
    }
}

#[test]
fn isomorphism_examples() {
    let mods = enumerate_finite_irreps(2, 1).unwrap();
    assert!(are_isomorphic(&mods[0], &mods[0]).unwrap());
    assert!(!are_isomorphic(&mods[0], &mods[1]).unwrap());
    let again = module(mods[0].point().alpha().clone(), Scalar::q(), 1, 1);
    assert!(are_isomorphic(&mods[0], &again).unwrap());
}

#[test]
fn casimir_scalars() {
    let w = module(Scalar::zero(), Scalar::one(), 1, 1);
    let expect = (Scalar::q_pow(2) + Scalar::one())
        / ((Scalar::q_pow(2) - Scalar::one()) * d());
    assert_eq!(casimir_scalar(&w).unwrap(), expect);
    // scalar on both vectors of the 2-dim module; matrix form agrees
    let w = module(Scalar::one(), Scalar::q(), 1, 1);
    let c = casimir_scalar(&w).unwrap();
    let alg = Algebra::fm(1);
    let om = w
        .to_matrix_module()
        .unwrap()
        .element_matrix(&uqfk::algebra::casimir(&alg).unwrap());
    assert_eq!(om, Matrix::identity(2).scale(&c));
    // also on infinite windows
    let w = module(Scalar::q_pow(7), Scalar::q_pow(3), 1, 4);
    assert!(casimir_scalar(&w).is_ok());
}

#[test]
fn sl2_case() {
    for n in 1..=5 {
        for w in enumerate_finite_irreps(n, 1).unwrap() {
            let mm = w.to_matrix_module().unwrap();
            let lhs = mm.e.mul(&mm.f).sub(&mm.f.mul(&mm.e));
            let rhs = mm.k.sub(&mm.kinv).scale(&d().try_inv().unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

/// Dimension of `{T : T X_a = X_b T}` for the four generators.
fn intertwiner_dim(a: &MatrixModule, b: &MatrixModule) -> usize {
    let n = a.dimension();
    if n != b.dimension() {
        return 0;
    }
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for (xa, xb) in [(&a.e, &b.e), (&a.f, &b.f), (&a.k, &b.k), (&a.kinv, &b.kinv)] {
        for r in 0..n {
            for c in 0..n {
                // (T xa)_{rc} - (xb T)_{rc}
                let mut row = vec![Scalar::zero(); n * n];
                for t in 0..n {
                    row[var(r, t)] = &row[var(r, t)] + xa.get(t, c);
                    row[var(t, c)] = &row[var(t, c)] - xb.get(r, t);
                }
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows).nullspace().len()
}

#[test]
fn isomorphism_agrees_with_intertwiners() {
    for m in 1..=2 {
        for n in 1..=3 {
            let mods = enumerate_finite_irreps(n, m).unwrap();
            for x in &mods {
                for y in &mods {
                    let iso = are_isomorphic(x, y).unwrap();
                    let dim = intertwiner_dim(
                        &x.to_matrix_module().unwrap(),
                        &y.to_matrix_module().unwrap(),
                    );
                    assert_eq!(iso, dim == 1, "m={m} n={n}");
                }
            }
        }
    }
}

#[test]
fn json_golden() {
    let mods = enumerate_finite_irreps(2, 1).unwrap();
    let got = serde_json::to_string_pretty(&mods[0].to_json()).unwrap();
    let want = include_str!("golden/irrep_m1_dim2.json");
    assert_eq!(got.trim(), want.trim());
}

#[test]
fn non_fm_algebra_rejected() {
    let alg = Algebra::new(LaurentPoly::monomial(Scalar::one(), 1));
    assert!(CharacterPoint::in_algebra(&alg, Scalar::one(), Scalar::one()).is_err());
}
