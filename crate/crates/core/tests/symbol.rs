mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use valdiv::corpus::corpus_algebras;
use valdiv::fields::Field;
use valdiv::lattice::{qvec_frac, Lattice};
use valdiv::laurent::{Tower, TowerElement};
use valdiv::parse::parse_algebra;
use valdiv::ring::{charpoly, det, Ring};
use valdiv::symbol::SymbolAlgebra;
use valdiv::Error;

use common::{quaternion_norm, subset_det};

fn algebra(desc: &str) -> SymbolAlgebra {
    parse_algebra(desc).unwrap().build(16).unwrap()
}

fn small_algebras() -> Vec<SymbolAlgebra> {
    [
        "symbol(n=2, a=2, b=t) over F5((t))",
        "symbol(n=2, a=-1, b=-1) over Q",
        "symbol(n=2, a=x, b=y) over F3((x))((y))",
        "symbol(n=3, omega=2, a=x, b=y) over F7((x))((y))",
        "symbol(n=3, a=t, b=1+t) over F7((t))",
    ]
    .iter()
    .map(|d| algebra(d))
    .collect()
}

#[test]
fn defining_relations_hold() {
    for (name, alg) in corpus_algebras(16).unwrap() {
        let n = alg.degree() as u64;
        let (i, j) = (alg.i(), alg.j());
        assert!(i.pow(n).approx_eq(&alg.scalar(alg.a())), "{name}");
        assert!(j.pow(n).approx_eq(&alg.scalar(alg.b())), "{name}");
        let omega = TowerElement::Const(alg.omega().clone());
        assert!(j.mul(&i).approx_eq(&i.mul(&j).scale(&omega)), "{name}");
        alg.check_representation().unwrap();
    }
}

#[test]
fn broken_commutation_fails_its_check() {
    let alg = algebra("symbol(n=2, a=2, b=t) over F5((t))").with_broken_commutation();
    let omega = TowerElement::Const(alg.omega().clone());
    assert!(!alg.j().mul(&alg.i()).approx_eq(&alg.i().mul(&alg.j()).scale(&omega)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative_and_distributive(which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (alg.random(&mut rng, 3, 2), alg.random(&mut rng, 3, 2), alg.random(&mut rng, 3, 2));
        prop_assert!(x.mul(&y).mul(&z).approx_eq(&x.mul(&y.mul(&z))));
        prop_assert!(x.mul(&y.add(&z)).approx_eq(&x.mul(&y).add(&x.mul(&z))));
    }

    #[test]
    fn cayley_hamilton_and_inverses(which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = alg.random_nonzero(&mut rng, 3, 2);
        prop_assert!(x.eval_poly(&x.prd().unwrap()).is_zero());
        let n = alg.degree();
        let tr = x.trd().unwrap();
        let p = x.prd().unwrap();
        prop_assert!((&p[1] + &tr).is_zero());
        let sign = if n.is_multiple_of(2) { x.nrd().unwrap() } else { -&x.nrd().unwrap() };
        prop_assert!((&p[n] - &sign).is_zero());
        if let Ok(inv) = x.inverse() {
            prop_assert!(x.mul(&inv).approx_eq(&alg.one()));
            prop_assert!(inv.mul(&x).approx_eq(&alg.one()));
            match x.inverse_by_linear_system() {
                Ok(by_system) => prop_assert!(by_system.unwrap().approx_eq(&inv)),
                Err(Error::PrecisionExhausted) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn v_d_agrees_with_the_exact_norm(which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = alg.random_nonzero(&mut rng, 4, 3);
        let exact = alg.tower().valuation(&x.nrd().unwrap()).unwrap().unwrap();
        let n = BigInt::from(alg.degree());
        let expected: Vec<BigRational> = exact.into_iter().map(|e| BigRational::new(e.into(), n.clone())).collect();
        prop_assert_eq!(x.v_d().unwrap(), expected);
    }

    #[test]
    fn norm_is_multiplicative_and_restricts_to_powers(which in 0usize..5, seed in any::<u64>()) {
        let alg = &small_algebras()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (alg.random(&mut rng, 3, 2), alg.random(&mut rng, 3, 2));
        let lhs = x.mul(&y).nrd().unwrap();
        prop_assert!((&lhs - &(&x.nrd().unwrap() * &y.nrd().unwrap())).is_zero());
        let f = alg.tower().random_element(&mut rng, 3, 2);
        prop_assert!((&alg.scalar(&f).nrd().unwrap() - &f.pow(alg.degree() as u64)).is_zero());
    }
}

#[test]
fn quaternion_norm_matches_closed_form_and_left_regular_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alg in small_algebras().into_iter().filter(|a| a.degree() == 2) {
        for _ in 0..40 {
            let x = alg.random(&mut rng, 4, 2);
            let nrd = x.nrd().unwrap();
            assert!((&nrd - &quaternion_norm(&x)).is_zero(), "{x}");
            let full = subset_det(&x.left_regular_matrix(), &alg.tower().one());
            assert!((&full - &nrd.pow(2)).is_zero(), "{x}");
        }
    }
}

#[test]
fn hamilton_norm_is_sum_of_squares() {
    let alg = algebra("symbol(n=2, a=-1, b=-1) over Q");
    let q = alg.tower().base().clone();
    let coords = [3i64, -1, 4, 2];
    let c: Vec<TowerElement> = coords.iter().map(|&v| TowerElement::Const(q.from_i64(v))).collect();
    let x = alg.from_coeffs(c).unwrap();
    let expected = coords.iter().map(|v| v * v).sum::<i64>();
    assert_eq!(x.nrd().unwrap(), TowerElement::Const(q.from_i64(expected)));
}

#[test]
fn generic_symbols_have_value_group_one_over_n() {
    for (n, p) in [(2usize, 3u64), (3, 7), (4, 5)] {
        let tower = Tower::new(&Field::prime(p).unwrap(), &["x", "y"], 16).unwrap();
        let (x, y) = (tower.var("x").unwrap(), tower.var("y").unwrap());
        let alg = SymbolAlgebra::with_auto_omega(&tower, n, &x, &y).unwrap();
        let expected = Lattice::new(2, &[qvec_frac(&[1, 0], n as i64), qvec_frac(&[0, 1], n as i64)]).unwrap();
        assert_eq!(alg.value_group().unwrap(), expected);
        let report = alg.classify().unwrap();
        assert!(report.flags.is_tame && report.flags.is_totally_ramified, "{report:?}");
    }
}

#[test]
fn determinant_methods_agree() {
    let tower = Tower::new(&Field::prime(7).unwrap(), &["t"], 12).unwrap();
    let one = tower.one();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=7 {
        for _ in 0..5 {
            let m: Vec<Vec<TowerElement>> =
                (0..n).map(|_| (0..n).map(|_| tower.random_element(&mut rng, 2, 2)).collect()).collect();
            let cp = charpoly(&m, &one).unwrap();
            let from_cp = if n % 2 == 0 { cp[n].clone() } else { cp[n].neg() };
            let d = det(&m, &one).unwrap();
            assert!((&d - &from_cp).is_zero());
            assert!((&d - &subset_det(&m, &one)).is_zero());
        }
    }
}
