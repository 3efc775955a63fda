use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use valdiv::corpus::corpus_algebras;
use valdiv::fields::{Field, FieldElement, Poly};
use valdiv::graded::GradedAlgebraView;
use valdiv::lattice::QVector;
use valdiv::parse::{parse_algebra, parse_profile};
use valdiv::ring::Ring;
use valdiv::sk1::{
    commutator, decompose_norm_one, generator_grades, hilbert90_decompose, kappa, random_norm_one,
    root_of_unity_exponent, verdict, AlgebraFacts, Conclusion, TheoremCase,
};
use valdiv::symbol::RamificationFlags;
use valdiv::Error;

#[test]
fn commutators_have_norm_one_and_match_explicit_inverses() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (name, alg) in corpus_algebras(16).unwrap() {
        for _ in 0..6 {
            let x = alg.random_nonzero(&mut rng, 2, 1);
            let y = alg.random_nonzero(&mut rng, 2, 1);
            let c = match commutator(&x, &y) {
                Ok(c) => c,
                Err(Error::NotAUnit) => continue,
                Err(e) => panic!("{name}: {e}"),
            };
            let (Ok(Some(xi)), Ok(Some(yi))) = (x.inverse_by_linear_system(), y.inverse_by_linear_system()) else {
                continue;
            };
            assert!(c.element().approx_eq(&x.mul(&y).mul(&xi).mul(&yi)), "{name}");
        }
    }
}

#[test]
fn hilbert_90_over_f9_covers_every_norm_one_element() {
    let f3 = Field::prime(3).unwrap();
    let f9 = Field::extension(&f3, &Poly::new(&f3, vec![f3.one(), f3.zero(), f3.one()]), "w").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sigma = |x: &FieldElement| -> valdiv::Result<FieldElement> { Ok(x.pow(3)) };
    let norm_one: Vec<FieldElement> = f9.elements().unwrap().into_iter().filter(|a| a.pow(4).is_one()).collect();
    assert_eq!(norm_one.len(), 4);
    for a in &norm_one {
        let mut draw = || f9.random(&mut rng);
        let c = hilbert90_decompose(a, &sigma, 2, &mut draw).unwrap();
        assert!(!c.is_zero());
        assert_eq!(&(a * &c.pow(3)), &c);
    }
    let not_norm_one = f9.elements().unwrap().into_iter().find(|a| !a.is_zero() && !a.pow(4).is_one()).unwrap();
    let mut draw = || f9.random(&mut rng);
    assert!(matches!(hilbert90_decompose(&not_norm_one, &sigma, 2, &mut draw), Err(Error::NotNormOne)));
}

#[test]
fn norm_one_elements_decompose_into_commutators() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for desc in ["symbol(n=2, a=-1, b=-1) over Q", "symbol(n=2, a=2, b=t) over F5((t))"] {
        let alg = parse_algebra(desc).unwrap().build(16).unwrap();
        for _ in 0..10 {
            let a = random_norm_one(&alg, &mut rng, 2).unwrap();
            let w = decompose_norm_one(&a, &mut rng).unwrap();
            assert!(w.verify().unwrap(), "{desc}: {w}");
            let mut acc = alg.one();
            for (x, y) in &w.factors {
                let xi = x.inverse_by_linear_system().unwrap().unwrap();
                let yi = y.inverse_by_linear_system().unwrap().unwrap();
                acc = acc.mul(x).mul(y).mul(&xi).mul(&yi);
            }
            assert!(acc.approx_eq(a.element()), "{desc}");
        }
    }
}

#[test]
fn kappa_is_alternating_and_kills_field_values() {
    for (name, alg) in corpus_algebras(16).unwrap() {
        let view = GradedAlgebraView::new(&alg).unwrap();
        let n = alg.degree();
        let (gi, gj) = generator_grades(&alg).unwrap();
        let forward = root_of_unity_exponent(kappa(&view, &gi, &gj).unwrap().element()).unwrap();
        let backward = root_of_unity_exponent(kappa(&view, &gj, &gi).unwrap().element()).unwrap();
        assert_eq!((forward + backward) % n, 0, "{name}");
        for g in [&gi, &gj] {
            assert_eq!(root_of_unity_exponent(kappa(&view, g, g).unwrap().element()), Some(0), "{name}");
            let unit: QVector = g.iter().map(|x| x * num_bigint::BigInt::from(n)).collect();
            assert_eq!(root_of_unity_exponent(kappa(&view, g, &unit).unwrap().element()), Some(0), "{name}");
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Bound {
    Exactly(u32),
    AtMost(u32),
    Infinite,
}

fn is_power(n: u64, q: u64) -> bool {
    let mut k = n;
    while k > 1 && k.is_multiple_of(q) {
        k /= q;
    }
    n > 1 && k == 1
}

fn square_free(n: u64) -> bool {
    (2..=n).all(|d| !n.is_multiple_of(d * d))
}

/// Decision table written directly from the statements of the criteria.
fn expected(bound: Bound, m: u32, pbar: u64, n: u64, q: u64, ramified: bool, division: Option<bool>) -> (Conclusion, Vec<TheoremCase>) {
    let primary = is_power(n, q);
    let usable = primary && q != pbar;
    let mut fired = Vec::new();
    let mut boundary = false;
    if usable {
        match bound {
            Bound::Exactly(k) if k + m == 3 && (1..=3).contains(&m) => fired.push(TheoremCase::Case1),
            Bound::Exactly(k) if k + m == 3 => {
                if ramified && division == Some(true) {
                    fired.push(TheoremCase::Case2)
                } else {
                    boundary = true
                }
            }
            _ => {}
        }
    }
    if square_free(n) {
        fired.push(TheoremCase::SquareFreeIndex);
    }
    if usable && matches!(bound, Bound::Exactly(k) | Bound::AtMost(k) if k + m <= 2) {
        fired.push(TheoremCase::CdAtMostTwo);
    }
    let conclusion = if !fired.is_empty() {
        Conclusion::Trivial
    } else if boundary {
        Conclusion::Unknown
    } else {
        Conclusion::NotApplicable
    };
    (conclusion, fired)
}

fn bound_strategy() -> impl Strategy<Value = Bound> {
    prop_oneof![(0u32..4).prop_map(Bound::Exactly), (0u32..4).prop_map(Bound::AtMost), Just(Bound::Infinite)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn verdict_matches_decision_table(
        bound in bound_strategy(),
        m in 0u32..4,
        pbar in prop::sample::select(vec![0u64, 2, 3, 5]),
        n in prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 9, 12, 16, 25, 27]),
        q in prop::sample::select(vec![2u64, 3, 5]),
        semi in any::<bool>(),
        total in any::<bool>(),
        division in prop::option::of(any::<bool>()),
    ) {
        let text = match bound {
            Bound::Exactly(k) => format!("cdq={k}"),
            Bound::AtMost(k) => format!("cdq<={k}"),
            Bound::Infinite => "cdq=inf".to_string(),
        };
        let tower: String = ["x", "y", "z"][..m as usize].iter().map(|v| format!("(({v}))")).collect();
        let profile = parse_profile(&format!("decl({text}, char={pbar}){tower}")).unwrap();
        let facts = AlgebraFacts {
            degree: n,
            flags: Some(RamificationFlags {
                is_defectless: true,
                is_totally_ramified: total,
                is_semiramified: semi,
                is_tame: true,
                is_inertial: !semi && !total,
            }),
            is_division: division,
            value_rank: Some(m as usize),
            class_name: None,
        };
        let v = verdict(&profile, &facts, q).unwrap();
        let (conclusion, fired) = expected(bound, m, pbar, n, q, semi || total, division);
        prop_assert_eq!(v.conclusion, conclusion, "{}", v.reasoning);
        match fired.split_first() {
            Some((first, rest)) => {
                prop_assert_eq!(v.case, *first);
                prop_assert_eq!(&v.also[..], rest);
            }
            None => prop_assert_eq!(v.case, TheoremCase::None),
        }
    }
}

#[test]
fn verdict_rejects_bad_inputs() {
    let p = parse_profile("F7((x))((y))").unwrap();
    assert!(matches!(verdict(&p, &AlgebraFacts::degree_only(3), 4), Err(Error::NotPrime(4))));
    assert!(verdict(&p, &AlgebraFacts::degree_only(0), 3).is_err());
    let mut facts = AlgebraFacts::degree_only(3);
    facts.value_rank = Some(1);
    assert!(verdict(&p, &facts, 3).is_err());
}
