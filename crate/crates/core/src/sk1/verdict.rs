use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{is_prime, prime_factors};
use crate::profile::{CdValue, FieldProfile};
use crate::symbol::{RamificationFlags, RamificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Trivial,
    Unknown,
    NotApplicable,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Conclusion::Trivial => "trivial",
            Conclusion::Unknown => "unknown",
            Conclusion::NotApplicable => "not applicable",
        };
        write!(f, "{s}")
    }
}

/// The sufficient condition behind a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCase {
    /// `1 ≤ r_q ≤ 3` with `cd_q(F) = 3`.
    Case1,
    /// `r_q = 0`, `cd_q(F) = 3`, `D` semiramified or totally ramified.
    Case2,
    /// Square-free index.
    SquareFreeIndex,
    /// `q`-primary index with `cd_q(F) ≤ 2`.
    CdAtMostTwo,
    None,
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremCase::Case1 => "case 1 (1 <= r_q <= 3, cd_q(F) = 3)",
            TheoremCase::Case2 => "case 2 (r_q = 0, cd_q(F) = 3, semiramified or totally ramified)",
            TheoremCase::SquareFreeIndex => "square-free index",
            TheoremCase::CdAtMostTwo => "q-primary index with cd_q(F) <= 2",
            TheoremCase::None => "none",
        };
        write!(f, "{s}")
    }
}

/// What the verdict needs to know about the algebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraFacts {
    pub degree: u64,
    pub flags: Option<RamificationFlags>,
    pub is_division: Option<bool>,
    /// Rank of the ambient space of `Γ_D`, when known.
    pub value_rank: Option<usize>,
    pub class_name: Option<String>,
}

impl AlgebraFacts {
    /// Facts about an unspecified algebra of the given degree.
    pub fn degree_only(degree: u64) -> Self {
        AlgebraFacts { degree, flags: None, is_division: None, value_rank: None, class_name: None }
    }
}

impl From<&RamificationReport> for AlgebraFacts {
    fn from(r: &RamificationReport) -> Self {
        AlgebraFacts {
            degree: r.degree,
            flags: Some(r.flags),
            is_division: r.is_division,
            value_rank: Some(r.value_group.ambient_rank()),
            class_name: Some(r.class_name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    pub case: TheoremCase,
    /// Every other sufficient condition that also holds.
    pub also: Vec<TheoremCase>,
    pub q: u64,
    pub r_q: usize,
    pub cd_q: Option<String>,
    pub reasoning: String,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SK1: {} via {}; {}", self.conclusion, self.case, self.reasoning)
    }
}

fn is_square_free(n: u64) -> bool {
    let f = prime_factors(n);
    f.iter().all(|&p| !n.is_multiple_of(p * p))
}

fn is_power_of(n: u64, q: u64) -> bool {
    n > 1 && prime_factors(n).iter().all(|&p| p == q)
}

/// Evaluates the triviality criteria for `SK₁` on the given field and
/// algebra. Never concludes non-triviality.
pub fn verdict(profile: &FieldProfile, facts: &AlgebraFacts, q: u64) -> Result<Verdict> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if facts.degree == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    if let Some(r) = facts.value_rank {
        if r != profile.height() {
            return Err(Error::Inconsistent(format!(
                "value group of rank {r} over a profile with {} layers",
                profile.height()
            )));
        }
    }
    let n = facts.degree;
    let r = profile.r_q(q)?;
    let pbar = profile.residue_characteristic();
    let class = facts.class_name.clone().unwrap_or_else(|| "unclassified".into());
    let mut fired = Vec::new();
    let mut blockers: Vec<String> = Vec::new();
    let mut boundary = false;
    let mut cd_text = None;

    let primary = is_power_of(n, q);
    if !primary {
        blockers.push(format!("degree {n} is not a power of {q}"));
    }
    if q == pbar {
        blockers.push(format!("q = {q} is the residue characteristic"));
    } else {
        match profile.cd_q(q) {
            Ok(cd) => {
                cd_text = Some(cd.to_string());
                if primary {
                    match cd {
                        CdValue::Finite(c) | CdValue::AtMost(c) if c <= 2 => fired.push(TheoremCase::CdAtMostTwo),
                        CdValue::Finite(3) if (1..=3).contains(&r) => fired.push(TheoremCase::Case1),
                        CdValue::Finite(3) => {
                            let ramified = facts.flags.is_some_and(|f| f.is_semiramified || f.is_totally_ramified);
                            if r == 0 && ramified && facts.is_division == Some(true) {
                                fired.push(TheoremCase::Case2);
                            } else {
                                boundary = true;
                            }
                        }
                        CdValue::AtMost(3) => blockers.push(format!(
                            "only cd_{q}(F) <= 3 is known; assert cd_{q}(F) = 3 to apply the rank cases"
                        )),
                        other => blockers.push(format!("cd_{q}(F) = {other} exceeds 3")),
                    }
                }
            }
            Err(e) => blockers.push(e.to_string()),
        }
    }
    if is_square_free(n) {
        fired.push(TheoremCase::SquareFreeIndex);
    }
    let order = [TheoremCase::Case1, TheoremCase::Case2, TheoremCase::SquareFreeIndex, TheoremCase::CdAtMostTwo];
    fired.sort_by_key(|c| order.iter().position(|o| o == c));
    let inputs = format!(
        "degree {n}, q = {q}, r_q = {r}, cd_q(F) = {}, residue characteristic {pbar}, {class}",
        cd_text.as_deref().unwrap_or("undefined")
    );
    if let Some((&case, rest)) = fired.split_first() {
        let why = match case {
            TheoremCase::Case1 => {
                let mut s = format!("{r} lies in 1..=3 and cd_{q}(F) = 3");
                if facts.is_division != Some(true) {
                    s.push_str("; applied to the underlying division algebra, whose degree divides the given one");
                }
                s
            }
            TheoremCase::Case2 => "r_q = 0 and D is semiramified or totally ramified".to_string(),
            TheoremCase::SquareFreeIndex => format!("the index divides the square-free degree {n}"),
            TheoremCase::CdAtMostTwo => format!("the index is {q}-primary and cd_{q}(F) <= 2"),
            TheoremCase::None => unreachable!(),
        };
        return Ok(Verdict {
            conclusion: Conclusion::Trivial,
            case,
            also: rest.to_vec(),
            q,
            r_q: r,
            cd_q: cd_text,
            reasoning: format!("{why} ({inputs})"),
        });
    }
    let (conclusion, why) = if boundary {
        let mut s = String::from("no sufficient condition fires");
        if r == 0 {
            s.push_str(
                "; with r_q = 0, D is Brauer equivalent to an inertially split algebra S, and SK1 is trivial \
                 when the residue algebra of S is a field, which is not decided here",
            );
        } else {
            s.push_str(&format!("; r_q = {r} is outside 1..=3"));
        }
        (Conclusion::Unknown, s)
    } else {
        (Conclusion::NotApplicable, blockers.join("; "))
    };
    Ok(Verdict {
        conclusion,
        case: TheoremCase::None,
        also: Vec::new(),
        q,
        r_q: r,
        cd_q: cd_text,
        reasoning: format!("{why} ({inputs})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::profile::{CdBound, DeclaredBase, ResidueBase};

    fn decl(cd: CdBound, characteristic: u64, vars: &[&str]) -> FieldProfile {
        FieldProfile::new(
            ResidueBase::Declared(DeclaredBase { entries: Default::default(), wildcard: Some(cd), characteristic }),
            vars,
        )
        .unwrap()
    }

    fn flags(semi: bool, total: bool) -> RamificationFlags {
        RamificationFlags {
            is_defectless: true,
            is_totally_ramified: total,
            is_semiramified: semi,
            is_tame: true,
            is_inertial: !semi && !total,
        }
    }

    fn facts(degree: u64, semi: bool, total: bool, rank: usize) -> AlgebraFacts {
        AlgebraFacts {
            degree,
            flags: Some(flags(semi, total)),
            is_division: Some(true),
            value_rank: Some(rank),
            class_name: None,
        }
    }

    #[test]
    fn case_one_on_symbol_over_double_laurent() {
        let p = FieldProfile::new(ResidueBase::Exact(Field::prime(7).unwrap()), &["x", "y"]).unwrap();
        let v = verdict(&p, &facts(3, false, true, 2), 3).unwrap();
        assert_eq!((v.conclusion, v.case), (Conclusion::Trivial, TheoremCase::Case1));
        assert_eq!(v.also, vec![TheoremCase::SquareFreeIndex]);
        let v = verdict(&p, &facts(9, false, true, 2), 3).unwrap();
        assert_eq!(v.case, TheoremCase::Case1);
        assert!(v.also.is_empty());
    }

    #[test]
    fn quaternion_uses_square_free_index() {
        let p = FieldProfile::new(ResidueBase::Exact(Field::prime(5).unwrap()), &["t"]).unwrap();
        let v = verdict(&p, &facts(2, true, false, 1), 2).unwrap();
        assert_eq!((v.conclusion, v.case), (Conclusion::Trivial, TheoremCase::SquareFreeIndex));
        assert_eq!(v.also, vec![TheoremCase::CdAtMostTwo]);
    }

    #[test]
    fn boundary_is_unknown() {
        let p = decl(CdBound::Exactly(3), 0, &[]);
        let v = verdict(&p, &facts(9, false, false, 0), 3).unwrap();
        assert_eq!(v.conclusion, Conclusion::Unknown);
        assert!(v.reasoning.contains("inertially split"));
        let v = verdict(&p, &facts(9, true, false, 0), 3).unwrap();
        assert_eq!(v.case, TheoremCase::Case2);
    }

    #[test]
    fn hypotheses_failing() {
        let p = decl(CdBound::AtMost(2), 7, &["t"]);
        let v = verdict(&p, &AlgebraFacts::degree_only(9), 3).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
        assert!(v.reasoning.contains("assert"));
        let a = p.with_asserted_cd(3, 3).unwrap();
        assert_eq!(verdict(&a, &AlgebraFacts::degree_only(9), 3).unwrap().case, TheoremCase::Case1);
        let v = verdict(&p, &AlgebraFacts::degree_only(49), 7).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
        let v = verdict(&p, &AlgebraFacts::degree_only(12), 2).unwrap();
        assert_eq!(v.conclusion, Conclusion::NotApplicable);
        assert!(verdict(&p, &facts(9, false, true, 2), 3).is_err());
        let big = decl(CdBound::Exactly(3), 0, &["t"]);
        assert_eq!(verdict(&big, &AlgebraFacts::degree_only(4), 2).unwrap().conclusion, Conclusion::NotApplicable);
    }

    #[test]
    fn degree_one_is_trivial() {
        let p = decl(CdBound::Infinite, 0, &[]);
        assert_eq!(verdict(&p, &AlgebraFacts::degree_only(1), 2).unwrap().conclusion, Conclusion::Trivial);
    }
}
