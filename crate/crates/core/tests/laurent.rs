use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use valdiv::fields::{Field, FieldElement};
use valdiv::laurent::{Tower, TowerElement};
use valdiv::ring::Ring;
use valdiv::Error;

type Terms = BTreeMap<Vec<i64>, FieldElement>;

/// Every nonzero term of an exact element, keyed by its exponent vector
/// (outermost variable first).
fn terms(x: &TowerElement, height: usize) -> Terms {
    fn walk(x: &TowerElement, height: usize, exps: &mut Vec<i64>, out: &mut Terms) {
        match x.as_series() {
            None => {
                let c = x.as_const().unwrap();
                if !c.is_zero() {
                    let slot = out.entry(exps.clone()).or_insert_with(|| c.field().zero());
                    *slot = &*slot + c;
                }
            }
            Some(s) => {
                assert!(s.is_exact());
                let slot = height - s.level().depth();
                for (k, c) in s.coeffs().iter().enumerate() {
                    let saved = exps[slot];
                    exps[slot] = s.start() + k as i64;
                    walk(c, height, exps, out);
                    exps[slot] = saved;
                }
            }
        }
    }
    let mut out = Terms::new();
    walk(x, height, &mut vec![0; height], &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

fn product_terms(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let prod = ca * cb;
            let slot = out.entry(e).or_insert_with(|| prod.field().zero());
            *slot = &*slot + &prod;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn towers() -> Vec<Tower> {
    let f7 = Field::prime(7).unwrap();
    vec![
        Tower::new(&f7, &["t"], 12).unwrap(),
        Tower::new(&f7, &["x", "y"], 12).unwrap(),
        Tower::new(&Field::rational(), &["x", "y"], 12).unwrap(),
        Tower::new(&Field::prime(3).unwrap(), &["x", "y", "z"], 8).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_products_match_term_convolution(which in 0usize..4, seed in any::<u64>(), n in 1usize..12) {
        let tower = &towers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = tower.random_element(&mut rng, n, 4);
        let b = tower.random_element(&mut rng, n, 4);
        let h = tower.height();
        prop_assert_eq!(terms(&(&a * &b), h), product_terms(&terms(&a, h), &terms(&b, h)));
        let mut sum = terms(&a, h);
        for (e, c) in terms(&b, h) {
            let slot = sum.entry(e).or_insert_with(|| c.field().zero());
            *slot = &*slot + &c;
        }
        sum.retain(|_, c| !c.is_zero());
        prop_assert_eq!(terms(&(&a + &b), h), sum);
    }

    #[test]
    fn valuation_is_additive_and_inverse_checks(which in 0usize..4, seed in any::<u64>()) {
        let tower = &towers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = tower.random_element(&mut rng, 4, 3);
        let b = tower.random_element(&mut rng, 4, 3);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (va, vb) = (tower.valuation(&a).unwrap().unwrap(), tower.valuation(&b).unwrap().unwrap());
        let vab = tower.valuation(&(&a * &b)).unwrap().unwrap();
        prop_assert_eq!(vab, va.iter().zip(&vb).map(|(x, y)| x + y).collect::<Vec<_>>());
        let inv = a.inv().unwrap();
        prop_assert!((&(&a * &inv) - &tower.one()).is_zero());
        let neg: Vec<i64> = va.iter().map(|x| -x).collect();
        prop_assert_eq!(tower.valuation(&inv).unwrap().unwrap(), neg);
    }

    #[test]
    fn truncation_keeps_leading_terms(which in 0usize..4, seed in any::<u64>(), rel in 1usize..6) {
        let tower = &towers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = tower.random_element(&mut rng, 6, 3);
        prop_assume!(!a.is_zero());
        let cut = a.truncated(rel);
        prop_assert!((&cut - &a).is_zero());
        prop_assert_eq!(tower.valuation(&cut).unwrap(), tower.valuation(&a).unwrap());
        prop_assert!(cut.is_exact() == (a.depth() == 0));
    }
}

#[test]
fn hensel_square_test_matches_residue_squaring() {
    for p in [3u64, 5, 7, 11] {
        let field = Field::prime(p).unwrap();
        let tower = Tower::new(&field, &["t"], 20).unwrap();
        let squares: Vec<FieldElement> = field.elements().unwrap().iter().map(|x| x * x).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..100 {
            let u = tower.random_unit(&mut rng, 5, 6);
            let expected = squares.contains(&tower.residue(&u).unwrap());
            match tower.sqrt_unit(&u).unwrap() {
                Some(r) => {
                    assert!(expected);
                    assert!((&(&r * &r) - &u).is_zero());
                }
                None => assert!(!expected, "missed square root of {u}"),
            }
        }
    }
}

#[test]
fn square_test_rejects_non_units_and_characteristic_two() {
    let tower = Tower::new(&Field::prime(5).unwrap(), &["t"], 10).unwrap();
    let t = tower.var("t").unwrap();
    assert!(matches!(tower.sqrt_unit(&t), Err(Error::NotAUnit)));
    let even = Tower::new(&Field::prime(2).unwrap(), &["t"], 10).unwrap();
    assert!(matches!(even.sqrt_unit(&even.one()), Err(Error::CharacteristicTwo)));
}

#[test]
fn inexact_zero_has_no_leading_term() {
    let tower = Tower::new(&Field::prime(5).unwrap(), &["t"], 10).unwrap();
    let t = tower.var("t").unwrap();
    let noisy = &t + &tower.big_o(1, 4).unwrap();
    let diff = &noisy - &t;
    assert!(diff.is_zero());
    assert!(!diff.is_exact_zero());
    assert!(matches!(tower.valuation(&diff), Err(Error::PrecisionExhausted)));
    assert_eq!(tower.valuation(&t).unwrap(), Some(vec![1]));
}

#[test]
fn monomials_follow_outermost_first_order() {
    let tower = Tower::new(&Field::prime(7).unwrap(), &["x", "y"], 10).unwrap();
    let c = tower.base().from_i64(3);
    let m = tower.monomial(&c, &[2, -1]).unwrap();
    assert_eq!(tower.valuation(&m).unwrap(), Some(vec![2, -1]));
    let y = tower.var("y").unwrap();
    let x = tower.var("x").unwrap();
    assert_eq!(tower.valuation(&y).unwrap(), Some(vec![1, 0]));
    assert_eq!(tower.valuation(&(&x * &y)).unwrap(), Some(vec![1, 1]));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let k: i64 = rng.gen_range(1..5);
    assert_eq!(tower.valuation(&x.powi(-k).unwrap()).unwrap(), Some(vec![0, -k]));
}
