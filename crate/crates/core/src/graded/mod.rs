//! The associated graded ring of the valuation filtration, viewed through
//! leading images of algebra elements.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{lex_compare, Lattice, QVector};
use crate::laurent::TowerElement;
use crate::symbol::{AlgebraElement, RamificationReport, SymbolAlgebra};

/// Image `x̃` of a nonzero element in `D_γ = D_{≥γ}/D_{>γ}`.
#[derive(Debug, Clone)]
pub struct HomogeneousElement {
    grade: QVector,
    rep: AlgebraElement,
}

pub fn format_grade(g: &[BigRational]) -> String {
    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn add_grades(a: &[BigRational], b: &[BigRational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_grades(a: &[BigRational], b: &[BigRational]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn map_undecided(e: Error) -> Error {
    match e {
        Error::PrecisionExhausted => Error::Undecided,
        other => other,
    }
}

/// Lex lower bound `(prefix, −∞, …)` on the value of a series that is zero
/// to its precision, outermost coordinate first; `None` for exact zero.
fn zero_bound(height: usize, x: &TowerElement) -> Option<Vec<i64>> {
    let s = x.as_series()?;
    let idx = height - s.level().depth();
    let mut best = s.abs_precision().map(|n| {
        let mut v = vec![0; idx + 1];
        v[idx] = n;
        v
    });
    for (off, c) in s.coeffs().iter().enumerate() {
        if let Some(mut sub) = zero_bound(height, c) {
            if sub.len() <= idx {
                sub.resize(idx + 1, 0);
            }
            sub[idx] += s.start() + off as i64;
            best = Some(match best {
                None => sub,
                Some(b) => lex_min(b, sub),
            });
        }
    }
    best
}

fn lex_min(a: Vec<i64>, b: Vec<i64>) -> Vec<i64> {
    for (x, y) in a.iter().zip(&b) {
        if x != y {
            return if x < y { a } else { b };
        }
    }
    if a.len() <= b.len() {
        a
    } else {
        b
    }
}

/// Whether every coefficient of an element that vanishes to precision is
/// certified to contribute only above `grade`, using that `i^k j^l` is a
/// valuation basis.
fn truncation_exceeds(e: &AlgebraElement, grade: &[BigRational]) -> Result<bool> {
    let alg = e.algebra();
    let n = alg.degree();
    let m = alg.tower().height();
    let vi = alg.i().v_d()?;
    let vj = alg.j().v_d()?;
    for (idx, c) in e.coeffs().iter().enumerate() {
        let Some(bound) = zero_bound(m, c) else { continue };
        let (k, l) = (idx / n, idx % n);
        let mut decided = false;
        for (s, b) in bound.iter().enumerate() {
            let total = BigRational::from_integer(BigInt::from(*b))
                + &vi[s] * BigInt::from(k)
                + &vj[s] * BigInt::from(l);
            match total.cmp(&grade[s]) {
                Ordering::Greater => {
                    decided = true;
                    break;
                }
                Ordering::Less => return Ok(false),
                Ordering::Equal => {}
            }
        }
        if !decided {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x̃` with grade `v_D(x)`.
pub fn tilde(e: &AlgebraElement) -> Result<HomogeneousElement> {
    let grade = e.v_d()?;
    Ok(HomogeneousElement { grade, rep: e.clone() })
}

/// Product in `D_γ × D_δ → D_{γ+δ}`.
pub fn homog_mul(h1: &HomogeneousElement, h2: &HomogeneousElement) -> Result<HomogeneousElement> {
    let rep = h1.rep.try_mul(&h2.rep)?;
    Ok(HomogeneousElement { grade: add_grades(&h1.grade, &h2.grade), rep })
}

impl HomogeneousElement {
    pub fn grade(&self) -> &QVector {
        &self.grade
    }

    pub fn representative(&self) -> &AlgebraElement {
        &self.rep
    }

    /// Equal grades and `v_D(rep₁ − rep₂) > γ`. Fails with
    /// [`Error::Undecided`] when the difference vanishes only to the working
    /// precision.
    pub fn equals(&self, other: &HomogeneousElement) -> Result<bool> {
        if self.rep.algebra() != other.rep.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if self.grade != other.grade {
            return Ok(false);
        }
        let diff = self.rep.sub(&other.rep);
        if diff.coeffs().iter().all(|c| c.is_exact_zero()) {
            return Ok(true);
        }
        if diff.is_zero() {
            return if truncation_exceeds(&diff, &self.grade)? { Ok(true) } else { Err(Error::Undecided) };
        }
        match diff.v_d() {
            Ok(v) => Ok(lex_compare(&v, &self.grade)? == Ordering::Greater),
            Err(Error::ZeroElement) => Ok(true),
            Err(e) => Err(map_undecided(e)),
        }
    }

    /// The homogeneous inverse, of grade `−γ`.
    pub fn inverse(&self) -> Result<HomogeneousElement> {
        let rep = self.rep.inverse()?;
        let grade = self.grade.iter().map(|x| -x).collect();
        Ok(HomogeneousElement { grade, rep })
    }

    /// `v(Nrd(rep)) = n·γ`.
    pub fn nrd_grade_check(&self) -> Result<bool> {
        let alg = self.rep.algebra();
        let nrd = self.rep.nrd()?;
        let v = alg.tower().valuation_q(&nrd)?.ok_or(Error::ZeroElement)?;
        let n = BigRational::from_integer(BigInt::from(alg.degree()));
        Ok(v.iter().zip(&self.grade).all(|(a, g)| *a == g * &n))
    }

    /// Terms of the representative whose own value equals the grade, each
    /// truncated to its leading monomial.
    pub fn leading_part(&self) -> Result<AlgebraElement> {
        let alg = self.rep.algebra();
        let tower = alg.tower();
        let n = alg.degree();
        let vi = alg.i().v_d()?;
        let vj = alg.j().v_d()?;
        let mut out = Vec::with_capacity(n * n);
        for (idx, c) in self.rep.coeffs().iter().enumerate() {
            let (k, l) = (idx / n, idx % n);
            let keep = match tower.leading_term(c) {
                Ok(Some(lead)) => {
                    let v = tower.valuation_q(&lead)?.expect("nonzero");
                    let total: QVector = (0..v.len())
                        .map(|s| &v[s] + &vi[s] * BigInt::from(k) + &vj[s] * BigInt::from(l))
                        .collect();
                    (total == self.grade).then_some(lead)
                }
                Ok(None) | Err(Error::PrecisionExhausted) => None,
                Err(e) => return Err(e),
            };
            out.push(keep.unwrap_or_else(|| tower.zero()));
        }
        alg.from_coeffs(out)
    }
}

impl fmt::Display for HomogeneousElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match self.leading_part() {
            Ok(p) if !p.is_zero() => p.to_string(),
            _ => self.rep.to_string(),
        };
        write!(f, "[grade={}] {body} + O(>grade)", format_grade(&self.grade))
    }
}

/// The graded structure of a symbol algebra: grade group `Γ_D`, degree-zero
/// component `D̄` and the canonical homomorphism `θ_D`.
#[derive(Debug, Clone)]
pub struct GradedAlgebraView {
    alg: SymbolAlgebra,
    report: RamificationReport,
    vi: QVector,
    vj: QVector,
}

impl GradedAlgebraView {
    pub fn new(alg: &SymbolAlgebra) -> Result<Self> {
        let report = alg.classify()?;
        Ok(GradedAlgebraView { alg: alg.clone(), report, vi: alg.i().v_d()?, vj: alg.j().v_d()? })
    }

    pub fn algebra(&self) -> &SymbolAlgebra {
        &self.alg
    }

    pub fn report(&self) -> &RamificationReport {
        &self.report
    }

    pub fn grade_group(&self) -> &Lattice {
        &self.report.value_group
    }

    /// `[D̄:F̄]`
    pub fn zero_component_degree(&self) -> u64 {
        self.report.residue_degree
    }

    /// `[gr(D):gr(F)] = [D̄:F̄]·|Γ_D:Γ_F|`
    pub fn graded_dimension(&self) -> u64 {
        self.report.graded_dimension()
    }

    fn check(&self, e: &AlgebraElement) -> Result<()> {
        if e.algebra() != &self.alg {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// `e ∈ O_D`, i.e. `v_D(e) ≥ 0`.
    pub fn in_valuation_ring(&self, e: &AlgebraElement) -> Result<bool> {
        self.sign_test(e, |o| o != Ordering::Less)
    }

    /// `e ∈ 𝔪_D`, i.e. `v_D(e) > 0`.
    pub fn in_maximal_ideal(&self, e: &AlgebraElement) -> Result<bool> {
        self.sign_test(e, |o| o == Ordering::Greater)
    }

    fn sign_test(&self, e: &AlgebraElement, pred: impl Fn(Ordering) -> bool) -> Result<bool> {
        self.check(e)?;
        if e.coeffs().iter().all(|c| c.is_exact_zero()) {
            return Ok(true);
        }
        let v = e.v_d().map_err(map_undecided)?;
        let zero = vec![BigRational::zero(); v.len()];
        Ok(pred(lex_compare(&v, &zero)?))
    }

    /// A monomial `i^k j^l · x^δ` of value `γ`.
    pub fn monomial_representative(&self, gamma: &[BigRational]) -> Result<AlgebraElement> {
        let n = self.alg.degree();
        let tower = self.alg.tower();
        if gamma.len() != tower.height() {
            return Err(Error::RankMismatch(gamma.len(), tower.height()));
        }
        for k in 0..n {
            for l in 0..n {
                let mut delta = gamma.to_vec();
                for s in 0..delta.len() {
                    delta[s] = &delta[s] - &self.vi[s] * BigInt::from(k) - &self.vj[s] * BigInt::from(l);
                }
                if delta.iter().all(|x| x.denom().is_one()) {
                    let exps: Vec<i64> = delta
                        .iter()
                        .map(|x| {
                            i64::try_from(x.numer().clone())
                                .map_err(|_| Error::InvalidInput("grade out of range".into()))
                        })
                        .collect::<Result<_>>()?;
                    let f = tower.monomial(&tower.base().one(), &exps)?;
                    return Ok(self.alg.monomial(&f, k, l));
                }
            }
        }
        Err(Error::NoRepresentative(format_grade(gamma)))
    }

    /// `θ_D(γ)(x̄) = (d x d⁻¹)~` for a monomial `d` of value `γ` and a unit `x`.
    pub fn theta(&self, gamma: &[BigRational], x: &AlgebraElement) -> Result<HomogeneousElement> {
        self.check(x)?;
        let hx = tilde(x)?;
        if hx.grade.iter().any(|g| !g.is_zero()) {
            return Err(Error::NotAUnit);
        }
        let d = self.monomial_representative(gamma)?;
        let y = d.mul(x).mul(&d.inverse()?);
        tilde(&y)
    }

    /// The residue-level image of a scalar, as a grade-zero element.
    pub fn scalar(&self, f: &TowerElement) -> Result<HomogeneousElement> {
        tilde(&self.alg.scalar(f))
    }

    /// Grade of `γ + δ` in the grade group.
    pub fn add(&self, gamma: &[BigRational], delta: &[BigRational]) -> QVector {
        add_grades(gamma, delta)
    }

    /// Grade of `γ − δ`.
    pub fn sub(&self, gamma: &[BigRational], delta: &[BigRational]) -> QVector {
        sub_grades(gamma, delta)
    }
}
