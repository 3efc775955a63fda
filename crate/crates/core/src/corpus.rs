//! The worked examples: a profile-only field, a semiramified quaternion
//! algebra with a twisted series ring, and a tame totally ramified symbol
//! algebra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Field, Poly};
use crate::graded::GradedAlgebraView;
use crate::laurent::twisted::{Twist, TwistedRing};
use crate::laurent::Tower;
use crate::parse::{parse_algebra, parse_profile};
use crate::profile::FieldProfile;
use crate::sk1::{
    compute_zeta, decompose_norm_one, generator_grades, kappa, random_norm_one, verdict, AlgebraFacts,
    DiagramContext, Verdict,
};
use crate::symbol::{RamificationReport, SymbolAlgebra};

pub const EXAMPLE_1_PROFILE: &str = "decl(cdq<=2, char=7)((t))";
pub const EXAMPLE_2_ALGEBRA: &str = "symbol(n=2, a=2, b=t) over F5((t))";
pub const EXAMPLE_3_ALGEBRA: &str = "symbol(n=3, omega=2, a=x, b=y) over F7((x))((y))";

/// One decomposed norm-one element.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub element: String,
    pub witness: String,
    pub verified: bool,
}

/// A verdict for a variant of the example's field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantVerdict {
    pub profile: String,
    pub note: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedSummary {
    pub field: String,
    pub twist: String,
    pub center_generator: String,
    pub commutation_checks: usize,
    pub theta_is_frobenius: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleReport {
    pub example: u8,
    pub title: String,
    pub profile: String,
    pub q: u64,
    pub r_q: usize,
    pub cd_q: String,
    pub notes: Vec<String>,
    pub algebra: Option<String>,
    pub class: Option<String>,
    pub classification: Option<RamificationReport>,
    pub diagram: Option<DiagramContext>,
    pub kappa: Option<String>,
    pub verdict: Verdict,
    pub variants: Vec<VariantVerdict>,
    pub witnesses: Vec<WitnessRecord>,
    pub twisted: Option<TwistedSummary>,
}

impl ExampleReport {
    /// Every shipped witness verifies.
    pub fn all_verified(&self) -> bool {
        self.witnesses.iter().all(|w| w.verified)
    }
}

/// `count` norm-one elements `c·σ(c)⁻¹` and their commutator witnesses.
/// Case `k` draws from stream `k` of the seeded generator.
pub fn witness_records(alg: &SymbolAlgebra, count: usize, seed: u64) -> Result<Vec<WitnessRecord>> {
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let a = random_norm_one(alg, &mut rng, 2)?;
        let element = a.element().to_string();
        let rec = match decompose_norm_one(&a, &mut rng) {
            Ok(w) => WitnessRecord { element, witness: w.to_string(), verified: w.verify()? },
            Err(e) => WitnessRecord { element, witness: format!("error: {e}"), verified: false },
        };
        out.push(rec);
    }
    Ok(out)
}

/// Profile of the tower an algebra lives over.
pub fn profile_of(alg: &SymbolAlgebra) -> FieldProfile {
    FieldProfile::of_tower(alg.tower())
}

fn cd_text(profile: &FieldProfile, q: u64) -> String {
    match profile.cd_q(q) {
        Ok(c) => c.to_string(),
        Err(e) => format!("undefined ({e})"),
    }
}

fn algebra_fields(
    alg: &SymbolAlgebra,
) -> Result<(RamificationReport, DiagramContext, AlgebraFacts)> {
    let report = alg.classify()?;
    let diagram = compute_zeta(&report);
    let facts = AlgebraFacts::from(&report);
    Ok((report, diagram, facts))
}

fn example_1() -> Result<ExampleReport> {
    let q = 3;
    let profile = parse_profile(EXAMPLE_1_PROFILE)?;
    let facts = AlgebraFacts::degree_only(q * q);
    let asserted = profile.with_asserted_cd(q, 3)?;
    Ok(ExampleReport {
        example: 1,
        title: "completion of Qp(t) at a discrete rank-one valuation, p = 7".into(),
        profile: profile.to_string(),
        q,
        r_q: profile.r_q(q)?,
        cd_q: cd_text(&profile, q),
        notes: vec![
            "the residue field has cd_q <= 2, so only cd_q(F) <= 3 is known".into(),
            "no arithmetic over p-adic towers: the verdict is for any division algebra of degree q^2".into(),
        ],
        algebra: None,
        class: None,
        classification: None,
        diagram: None,
        kappa: None,
        verdict: verdict(&profile, &facts, q)?,
        variants: vec![VariantVerdict {
            profile: asserted.to_string(),
            note: format!("with cd_{q}(F) = 3 asserted"),
            verdict: verdict(&asserted, &facts, q)?,
        }],
        witnesses: Vec::new(),
        twisted: None,
    })
}

fn twisted_summary(seed: u64, precision: usize) -> Result<TwistedSummary> {
    let f3 = Field::prime(3)?;
    let e = Field::extension(&f3, &Poly::new(&f3, vec![f3.one(), f3.zero(), f3.one()]), "w")?;
    let ring = TwistedRing::new(&e, Twist::Frobenius, precision)?;
    let x = ring.central_indeterminate(&e.one(), 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = 16;
    for _ in 0..checks {
        let z = ring.random(&mut rng, 4, 3);
        if !x.commutes_with(&z)? {
            return Err(Error::RelationFailure("t^2 is not central".into()));
        }
    }
    let mut frob = true;
    for d in e.elements()? {
        frob &= ring.theta(1, &d)? == e.frobenius(&d)?;
    }
    Ok(TwistedSummary {
        field: e.to_string(),
        twist: "Frobenius".into(),
        center_generator: x.to_string(),
        commutation_checks: checks,
        theta_is_frobenius: frob,
    })
}

fn example_2(seed: u64, precision: usize, witnesses: usize) -> Result<ExampleReport> {
    let q = 2;
    let alg = parse_algebra(EXAMPLE_2_ALGEBRA)?.build(precision)?;
    let profile = profile_of(&alg);
    let (report, diagram, facts) = algebra_fields(&alg)?;
    let generic = parse_profile("decl(cdq=2)((t))")?;
    let generic_facts = AlgebraFacts { value_rank: Some(1), ..facts.clone() };
    Ok(ExampleReport {
        example: 2,
        title: "quaternion algebra (u, t) over k((t)) with k = F5, u = 2".into(),
        profile: profile.to_string(),
        q,
        r_q: profile.r_q(q)?,
        cd_q: cd_text(&profile, q),
        notes: vec![
            format!("u = 2 is not a square in F5, so (u, t) is a division algebra: {:?}", report.is_division),
            "D((t, σ)) over F9 with σ the Frobenius has center F3((t^2))".into(),
        ],
        algebra: Some(alg.to_string()),
        class: Some(report.class_name()),
        kappa: None,
        verdict: verdict(&profile, &facts, q)?,
        variants: vec![VariantVerdict {
            profile: generic.to_string(),
            note: "the same algebra over k((t)) for a residue field with cd_q(k) = 2".into(),
            verdict: verdict(&generic, &generic_facts, q)?,
        }],
        witnesses: witness_records(&alg, witnesses, seed)?,
        twisted: Some(twisted_summary(seed, precision)?),
        classification: Some(report),
        diagram: Some(diagram),
    })
}

fn example_3(seed: u64, precision: usize, witnesses: usize) -> Result<ExampleReport> {
    let q = 3;
    let alg = parse_algebra(EXAMPLE_3_ALGEBRA)?.build(precision)?;
    let profile = profile_of(&alg);
    let (report, diagram, facts) = algebra_fields(&alg)?;
    let view = GradedAlgebraView::new(&alg)?;
    let (gi, gj) = generator_grades(&alg)?;
    let k = kappa(&view, &gi, &gj)?;
    Ok(ExampleReport {
        example: 3,
        title: "symbol algebra (x, y) over k((x))((y)) with k = F7, n = 3, omega = 2".into(),
        profile: profile.to_string(),
        q,
        r_q: profile.r_q(q)?,
        cd_q: cd_text(&profile, q),
        notes: vec![format!("value group {}", report.value_group)],
        algebra: Some(alg.to_string()),
        class: Some(report.class_name()),
        kappa: Some(format!("kappa(v(i) ^ v(j)) = [i, j] = {}", k.element())),
        verdict: verdict(&profile, &facts, q)?,
        variants: Vec::new(),
        witnesses: witness_records(&alg, witnesses, seed)?,
        twisted: None,
        classification: Some(report),
        diagram: Some(diagram),
    })
}

/// End-to-end report for example 1, 2 or 3.
pub fn run_example(id: u8, seed: u64, precision: usize) -> Result<ExampleReport> {
    match id {
        1 => example_1(),
        2 => example_2(seed, precision, 3),
        3 => example_3(seed, precision, 3),
        _ => Err(Error::InvalidInput(format!("no example {id}; choose 1, 2 or 3"))),
    }
}

/// The symbol algebras used by the property suites.
pub fn corpus_algebras(precision: usize) -> Result<Vec<(String, SymbolAlgebra)>> {
    let mut out = Vec::new();
    for desc in [
        EXAMPLE_2_ALGEBRA,
        "symbol(n=2, a=-1, b=-1) over Q",
        "symbol(n=2, a=x, b=y) over F3((x))((y))",
        EXAMPLE_3_ALGEBRA,
        "symbol(n=4, a=x, b=y) over F5((x))((y))",
    ] {
        out.push((desc.to_string(), parse_algebra(desc)?.build(precision)?));
    }
    Ok(out)
}

/// The tower behind a corpus description, for callers that need it alone.
pub fn tower_of(desc: &str, precision: usize) -> Result<Tower> {
    parse_profile(desc)?.tower(precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sk1::{Conclusion, TheoremCase};

    #[test]
    fn example_three_is_case_one() {
        let r = run_example(3, 0, 16).unwrap();
        assert_eq!((r.r_q, r.cd_q.as_str()), (2, "3"));
        assert_eq!(r.class.as_deref(), Some("tame totally ramified"));
        assert_eq!(r.classification.as_ref().unwrap().index, 9);
        assert_eq!((r.verdict.conclusion, r.verdict.case), (Conclusion::Trivial, TheoremCase::Case1));
        assert!(r.all_verified());
    }

    #[test]
    fn example_two_uses_square_free_index() {
        let r = run_example(2, 0, 32).unwrap();
        assert_eq!(r.classification.as_ref().unwrap().is_division, Some(true));
        assert_eq!(r.class.as_deref(), Some("tame semiramified"));
        assert_eq!(r.verdict.case, TheoremCase::SquareFreeIndex);
        assert_eq!(r.variants[0].verdict.case, TheoremCase::Case1);
        assert!(r.twisted.as_ref().unwrap().theta_is_frobenius);
        assert!(r.all_verified());
    }

    #[test]
    fn example_one_needs_an_assertion() {
        let r = run_example(1, 0, 32).unwrap();
        assert_eq!((r.r_q, r.cd_q.as_str()), (1, "<=3"));
        assert_eq!(r.verdict.conclusion, Conclusion::NotApplicable);
        assert_eq!(r.variants[0].verdict.case, TheoremCase::Case1);
    }

    #[test]
    fn reports_are_stable_for_a_seed() {
        let a = serde_json::to_string(&run_example(3, 5, 16).unwrap()).unwrap();
        let b = serde_json::to_string(&run_example(3, 5, 16).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(run_example(4, 0, 16).is_err());
    }
}
