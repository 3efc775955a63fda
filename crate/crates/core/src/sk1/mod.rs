//! Norm-one elements, commutators and constructive commutator witnesses,
//! plus the `ζ` invariant and the triviality verdict.

mod verdict;

pub use verdict::{verdict, AlgebraFacts, Conclusion, TheoremCase, Verdict};

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{tilde, GradedAlgebraView};
use crate::lattice::{QVector, QuotientStructure};
use crate::laurent::{Tower, TowerElement};
use crate::ring::{self, Ring};
use crate::symbol::{AlgebraElement, RamificationReport, SymbolAlgebra};

pub const MAX_RETRIES: usize = 16;

/// An element of `D^(1)` together with its computed reduced norm.
#[derive(Debug, Clone)]
pub struct NormOneElement {
    element: AlgebraElement,
    nrd: TowerElement,
}

impl NormOneElement {
    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    pub fn certificate(&self) -> &TowerElement {
        &self.nrd
    }

    pub fn into_element(self) -> AlgebraElement {
        self.element
    }
}

/// `true` when `x − 1` is zero and its constant term is known.
fn certified_one(x: &TowerElement) -> Result<bool> {
    let d = x.sub(&x.one_like());
    if d.is_exact_zero() {
        return Ok(true);
    }
    if d.is_zero() {
        return match d.as_series().and_then(|s| s.abs_precision()) {
            Some(p) if p > 0 => Ok(true),
            _ => Err(Error::Undecided),
        };
    }
    Ok(false)
}

/// Accepts `e` only if `Nrd(e) = 1` to the certified precision.
pub fn certify_norm_one(e: &AlgebraElement) -> Result<NormOneElement> {
    let nrd = e.nrd()?;
    if certified_one(&nrd)? {
        Ok(NormOneElement { element: e.clone(), nrd })
    } else {
        Err(Error::NotNormOne)
    }
}

/// `x·y·x⁻¹·y⁻¹`.
pub fn commutator(x: &AlgebraElement, y: &AlgebraElement) -> Result<NormOneElement> {
    let xi = x.inverse()?;
    let yi = y.inverse()?;
    certify_norm_one(&x.try_mul(y)?.mul(&xi).mul(&yi))
}

/// `κ(γ ∧ δ) = [d_γ, d_δ]` for monomial representatives.
pub fn kappa(view: &GradedAlgebraView, gamma: &[num_rational::BigRational], delta: &[num_rational::BigRational]) -> Result<NormOneElement> {
    let dg = view.monomial_representative(gamma)?;
    let dd = view.monomial_representative(delta)?;
    let c = commutator(&dg, &dd)?;
    let grade = tilde(c.element())?;
    if grade.grade().iter().any(|g| !num_traits::Zero::is_zero(g)) {
        return Err(Error::Inconsistent("κ value is not of grade 0".into()));
    }
    Ok(c)
}

/// The exponent `k` with `e = ω^k·1`, if `e` is such a scalar.
pub fn root_of_unity_exponent(e: &AlgebraElement) -> Option<usize> {
    let f = e.as_scalar()?;
    let alg = e.algebra();
    let omega = alg.tower().base().embed(alg.omega()).ok()?;
    (0..alg.degree()).find(|&k| f.sub(&TowerElement::Const(omega.pow(k as u64))).is_zero())
}

/// Writes `a = c·σ(c)⁻¹` inside a cyclic extension with `σ` of order `m`:
/// `c = Σ_{i<m} a·σ(a)···σ^{i−1}(a)·σ^i(b)` for random `b`, retried until
/// `c ≠ 0`.
pub fn hilbert90_decompose<R: Ring>(
    a: &R,
    sigma: &dyn Fn(&R) -> Result<R>,
    m: usize,
    draw: &mut dyn FnMut() -> R,
) -> Result<R> {
    if m == 0 {
        return Err(Error::InvalidInput("the automorphism must have positive order".into()));
    }
    let mut norm = a.clone();
    let mut conj = a.clone();
    for _ in 1..m {
        conj = sigma(&conj)?;
        norm = norm.mul(&conj);
    }
    if !norm.sub(&a.one_like()).is_zero() {
        return Err(Error::NotNormOne);
    }
    for _ in 0..MAX_RETRIES {
        let b = draw();
        let mut c = b.clone();
        let mut prefix = a.clone();
        let mut sb = b.clone();
        let mut sa = a.clone();
        for i in 1..m {
            sb = sigma(&sb)?;
            c = c.add(&prefix.mul(&sb));
            if i + 1 < m {
                sa = sigma(&sa)?;
                prefix = prefix.mul(&sa);
            }
        }
        if c.is_zero() {
            continue;
        }
        if !a.mul(&sigma(&c)?).sub(&c).is_zero() {
            return Err(Error::RelationFailure("a·σ(c) ≠ c".into()));
        }
        return Ok(c);
    }
    Err(Error::RetriesExhausted("no b with nonzero Hilbert 90 sum".into()))
}

fn coords_to_element(alg: &SymbolAlgebra, v: &[TowerElement]) -> Result<AlgebraElement> {
    alg.from_coeffs(v.to_vec())
}

/// An invertible `x` with `x·k·x⁻¹ = target`, from the nullspace of
/// `x ↦ x·k − target·x`.
pub fn skolem_noether_conjugator<R: Rng + ?Sized>(
    k: &AlgebraElement,
    target: &AlgebraElement,
    rng: &mut R,
) -> Result<AlgebraElement> {
    let alg = k.algebra();
    if target.algebra() != alg {
        return Err(Error::AlgebraMismatch);
    }
    if k.approx_eq(target) {
        return Ok(alg.one());
    }
    let pk = k.prd()?;
    let pt = target.prd()?;
    if pk.iter().zip(&pt).any(|(x, y)| !x.sub(y).is_zero()) {
        return Err(Error::InvalidInput("k and target have different characteristic polynomials".into()));
    }
    let dim = alg.dimension();
    let n = alg.degree();
    let cols: Vec<Vec<TowerElement>> = (0..dim)
        .map(|b| {
            let e = alg.basis(b / n, b % n);
            e.mul(k).sub(&target.mul(&e)).coeffs().to_vec()
        })
        .collect();
    let m: Vec<Vec<TowerElement>> = (0..dim).map(|r| (0..dim).map(|b| cols[b][r].clone()).collect()).collect();
    let tower = alg.tower();
    let basis = ring::nullspace(&m, &tower.one())?;
    if basis.is_empty() {
        return Err(Error::RetriesExhausted("conjugation system has no solution".into()));
    }
    let accept = |x: AlgebraElement| -> Result<Option<AlgebraElement>> {
        let Ok(xi) = x.inverse() else { return Ok(None) };
        if x.mul(k).mul(&xi).approx_eq(target) {
            Ok(Some(x))
        } else {
            Ok(None)
        }
    };
    for v in &basis {
        if let Some(x) = accept(coords_to_element(alg, v)?)? {
            return Ok(x);
        }
    }
    for _ in 0..MAX_RETRIES {
        let mut comb = vec![tower.zero(); dim];
        for v in &basis {
            let c = TowerElement::Const(tower.base().random(rng));
            for (s, x) in comb.iter_mut().zip(v) {
                *s = &*s + &(&c * x);
            }
        }
        if let Some(x) = accept(coords_to_element(alg, &comb)?)? {
            return Ok(x);
        }
    }
    Err(Error::RetriesExhausted("no invertible conjugator found".into()))
}

/// `target = ∏ [x_k, y_k]`.
#[derive(Debug, Clone)]
pub struct CommutatorWitness {
    pub factors: Vec<(AlgebraElement, AlgebraElement)>,
    pub target: AlgebraElement,
}

impl CommutatorWitness {
    pub fn product(&self) -> Result<AlgebraElement> {
        let mut acc = self.target.algebra().one();
        for (x, y) in &self.factors {
            acc = acc.mul(commutator(x, y)?.element());
        }
        Ok(acc)
    }

    /// Multiplies the commutators back out and compares with the target.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.product()?.approx_eq(&self.target))
    }
}

impl fmt::Display for CommutatorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|(x, y)| format!("[{x}, {y}]")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

fn in_subalgebra(e: &AlgebraElement, gen_i: bool) -> bool {
    let n = e.algebra().degree();
    e.coeffs().iter().enumerate().all(|(idx, c)| {
        let (k, l) = (idx / n, idx % n);
        let inside = if gen_i { l == 0 } else { k == 0 };
        inside || c.is_zero()
    })
}

fn random_in_span<R: Rng + ?Sized>(tower: &Tower, powers: &[AlgebraElement], rng: &mut R) -> AlgebraElement {
    let alg = powers[0].algebra();
    let mut acc = alg.zero();
    for p in powers {
        let f = tower.random_element(rng, 2, 1);
        acc = acc.add(&p.scale(&f));
    }
    acc
}

/// Writes `c·(x c⁻¹ x⁻¹)` for `a` in the subfield spanned by `powers`, whose
/// generator `g` is moved to `target` by conjugation.
fn decompose_in_subfield<R: Rng + ?Sized>(
    a: &AlgebraElement,
    g: &AlgebraElement,
    target: &AlgebraElement,
    powers: &[AlgebraElement],
    rng: &mut R,
) -> Result<CommutatorWitness> {
    let alg = a.algebra();
    let x = skolem_noether_conjugator(g, target, rng)?;
    let xi = x.inverse()?;
    let sigma = |c: &AlgebraElement| -> Result<AlgebraElement> { Ok(x.mul(c).mul(&xi)) };
    let tower = alg.tower().clone();
    let mut draw = || random_in_span(&tower, powers, rng);
    let mut last = Error::RetriesExhausted("no invertible Hilbert 90 element".into());
    for _ in 0..MAX_RETRIES {
        let c = match hilbert90_decompose(a, &sigma, powers.len(), &mut draw) {
            Ok(c) => c,
            Err(e @ Error::RetriesExhausted(_)) => {
                last = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        if c.inverse().is_err() {
            continue;
        }
        let w = CommutatorWitness { factors: vec![(c, x.clone())], target: a.clone() };
        if w.verify()? {
            return Ok(w);
        }
        last = Error::RelationFailure("witness does not multiply back to the target".into());
    }
    Err(last)
}

/// A verified product of commutators equal to the norm-one element `a`.
pub fn decompose_norm_one<R: Rng + ?Sized>(a: &NormOneElement, rng: &mut R) -> Result<CommutatorWitness> {
    let e = a.element();
    let alg = e.algebra();
    let n = alg.degree();
    if e.approx_eq(&alg.one()) {
        return Ok(CommutatorWitness { factors: Vec::new(), target: e.clone() });
    }
    if e.as_scalar().is_some() {
        let k = root_of_unity_exponent(e)
            .ok_or_else(|| Error::Unsupported("central norm-one scalar that is not a power of ω".into()))?;
        let w = CommutatorWitness { factors: vec![(alg.i(), alg.j().pow((n - k) as u64))], target: e.clone() };
        return if w.verify()? { Ok(w) } else { Err(Error::RelationFailure("[i, j^m] ≠ ω^k".into())) };
    }
    let omega = TowerElement::Const(alg.tower().base().embed(alg.omega())?);
    for gen_i in [true, false] {
        if in_subalgebra(e, gen_i) {
            let g = if gen_i { alg.i() } else { alg.j() };
            let target = g.scale(&omega);
            let powers: Vec<AlgebraElement> = (0..n).map(|r| g.pow(r as u64)).collect();
            return decompose_in_subfield(e, &g, &target, &powers, rng);
        }
    }
    if n == 2 {
        let trd = e.trd()?;
        let conj = alg.scalar(&trd).sub(e);
        return decompose_in_subfield(e, e, &conj, &[alg.one(), e.clone()], rng);
    }
    Err(Error::Unsupported("norm-one element outside F(i) and F(j) in degree above 2".into()))
}

/// A norm-one element `c·σ(c)⁻¹` with `c` random in `F(i)` and `σ`
/// conjugation by `j`.
pub fn random_norm_one<R: Rng + ?Sized>(alg: &SymbolAlgebra, rng: &mut R, terms: usize) -> Result<NormOneElement> {
    let n = alg.degree();
    let tower = alg.tower();
    let powers: Vec<AlgebraElement> = (0..n).map(|r| alg.i().pow(r as u64)).collect();
    let j = alg.j();
    let ji = j.inverse()?;
    for _ in 0..MAX_RETRIES {
        let mut c = alg.zero();
        for p in &powers {
            c = c.add(&p.scale(&tower.random_element(rng, terms, 1)));
        }
        if c.is_zero() {
            continue;
        }
        let sc = j.mul(&c).mul(&ji);
        let Ok(sci) = sc.inverse() else { continue };
        return certify_norm_one(&c.mul(&sci));
    }
    Err(Error::RetriesExhausted("random elements of F(i) were not invertible".into()))
}

/// Invariants entering `ζ = ind(D)/(ind(D₀)·[Z(D₀):F₀])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagramContext {
    pub index: u64,
    pub residue_index: Option<u64>,
    pub residue_center_degree: Option<u64>,
    pub zeta: Option<u64>,
    /// `|Gal(Z(D̄)/F̄)|`, equal to the residue center degree.
    pub galois_order: Option<u64>,
    pub grade_quotient: QuotientStructure,
}

/// `ζ` from the ramification data. `D₀ = D̄` here; its index and center
/// degree are read off for the inertial, semiramified and totally ramified
/// shapes and left unknown otherwise.
pub fn compute_zeta(report: &RamificationReport) -> DiagramContext {
    let n = report.degree;
    let f = &report.flags;
    let residue = if n == 1 || f.is_totally_ramified {
        Some((1, 1))
    } else if f.is_semiramified {
        Some((1, n))
    } else if f.is_inertial && report.is_division == Some(true) {
        Some((n, 1))
    } else {
        None
    };
    DiagramContext {
        index: n,
        residue_index: residue.map(|r| r.0),
        residue_center_degree: residue.map(|r| r.1),
        zeta: residue.map(|(i, z)| n / (i * z)),
        galois_order: residue.map(|r| r.1),
        grade_quotient: report.quotient.clone(),
    }
}

/// `n`-th roots of unity check for a `κ` output: `ω^k·1` with `k` a unit
/// mod `n`.
pub fn is_primitive_root_scalar(e: &AlgebraElement) -> bool {
    let n = e.algebra().degree();
    match root_of_unity_exponent(e) {
        Some(k) => num_integer::gcd(k, n) == 1,
        None => false,
    }
}

/// The value `v_D` of each generator, handy for `κ(v_D(i) ∧ v_D(j))`.
pub fn generator_grades(alg: &SymbolAlgebra) -> Result<(QVector, QVector)> {
    Ok((alg.i().v_d()?, alg.j().v_d()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{Field, FieldElement, Poly};
    use crate::lattice::{qvec, qvec_frac};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quaternion_f5() -> SymbolAlgebra {
        let k = Tower::new(&Field::prime(5).unwrap(), &["t"], 32).unwrap();
        let t = k.gen(1).unwrap();
        SymbolAlgebra::with_auto_omega(&k, 2, &k.from_i64(2), &t).unwrap()
    }

    fn hamilton() -> SymbolAlgebra {
        let k = Tower::trivial(&Field::rational());
        let m1 = k.from_i64(-1);
        SymbolAlgebra::with_auto_omega(&k, 2, &m1, &m1).unwrap()
    }

    fn symbol_xy(n: usize, p: u64) -> SymbolAlgebra {
        let k = Tower::new(&Field::prime(p).unwrap(), &["x", "y"], 16).unwrap();
        let (x, y) = (k.var("x").unwrap(), k.var("y").unwrap());
        SymbolAlgebra::with_auto_omega(&k, n, &x, &y).unwrap()
    }

    fn rat(a: i64, b: i64) -> TowerElement {
        TowerElement::Const(Field::rational().from_rational(&BigRational::new(a.into(), b.into())).unwrap())
    }

    #[test]
    fn norm_one_certificates() {
        let d = symbol_xy(3, 7);
        assert!(certify_norm_one(&d.one()).is_ok());
        let w = d.scalar(&TowerElement::Const(d.omega().clone()));
        assert!(certify_norm_one(&w).is_ok());
        assert!(matches!(certify_norm_one(&d.i()), Err(Error::NotNormOne)));
    }

    #[test]
    fn commutator_of_generators_is_inverse_omega() {
        for n in [2usize, 3] {
            let d = symbol_xy(n, 7);
            let c = commutator(&d.i(), &d.j()).unwrap();
            assert_eq!(root_of_unity_exponent(c.element()), Some(n - 1));
            assert!(commutator(&d.i(), &d.i()).unwrap().element().approx_eq(&d.one()));
            let y = d.scalar(&d.tower().var("y").unwrap());
            assert!(commutator(&d.i(), &y).unwrap().element().approx_eq(&d.one()));
        }
    }

    #[test]
    fn hilbert90_over_gaussian_rationals() {
        let q = Field::rational();
        let k = Field::extension(&q, &Poly::new(&q, vec![q.one(), q.zero(), q.one()]), "i").unwrap();
        let i = k.generator().unwrap();
        let five_inv = k.from_i64(5).inv().unwrap();
        let a = &(&k.from_i64(3) + &(&k.from_i64(4) * &i)) * &five_inv;
        let sigma = |x: &FieldElement| k.quadratic_conjugate(x);
        let mut draw = || k.one();
        let c = hilbert90_decompose(&a, &sigma, 2, &mut draw).unwrap();
        let expected = &(&k.from_i64(8) + &(&k.from_i64(4) * &i)) * &five_inv;
        assert_eq!(c, expected);
        assert_eq!(&c * &sigma(&c).unwrap().inv().unwrap(), a);
        let bad = k.from_i64(2);
        assert_eq!(hilbert90_decompose(&bad, &sigma, 2, &mut draw), Err(Error::NotNormOne));
    }

    #[test]
    fn hilbert90_over_f25() {
        let f5 = Field::prime(5).unwrap();
        let k = Field::extension(&f5, &Poly::new(&f5, vec![f5.from_i64(-2), f5.zero(), f5.one()]), "s").unwrap();
        let g = (0..25u128)
            .map(|x| k.element_at(x).unwrap())
            .find(|x| crate::fields::has_exact_order(x, 24))
            .unwrap();
        let a = g.pow(4);
        let sigma = |x: &FieldElement| k.frobenius(x);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut draw = || k.random(&mut rng);
        let c = hilbert90_decompose(&a, &sigma, 2, &mut draw).unwrap();
        assert_eq!(&c * &sigma(&c).unwrap().inv().unwrap(), a);
    }

    #[test]
    fn skolem_noether_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = quaternion_f5();
        let x = skolem_noether_conjugator(&d.i(), &d.i().neg(), &mut rng).unwrap();
        assert!(x.mul(&d.i()).mul(&x.inverse().unwrap()).approx_eq(&d.i().neg()));
        assert!(skolem_noether_conjugator(&d.i(), &d.i(), &mut rng).unwrap().approx_eq(&d.one()));
        let d3 = symbol_xy(3, 7);
        let w = TowerElement::Const(d3.omega().clone());
        let target = d3.i().scale(&w);
        let x = skolem_noether_conjugator(&d3.i(), &target, &mut rng).unwrap();
        assert!(x.mul(&d3.i()).mul(&x.inverse().unwrap()).approx_eq(&target));
        assert!(skolem_noether_conjugator(&d.i(), &d.j(), &mut rng).is_err());
    }

    #[test]
    fn hamilton_worked_example() {
        let d = hamilton();
        let a = d.scalar(&rat(3, 5)).add(&d.i().scale(&rat(4, 5)));
        let a1 = certify_norm_one(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let w = decompose_norm_one(&a1, &mut rng).unwrap();
        assert!(w.verify().unwrap());
        let c = d.scalar(&rat(8, 5)).add(&d.i().scale(&rat(4, 5)));
        let manual = CommutatorWitness { factors: vec![(c, d.j())], target: a };
        assert!(manual.verify().unwrap());
    }

    #[test]
    fn decompose_covers_corpus_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = quaternion_f5();
        for _ in 0..5 {
            let a = random_norm_one(&d, &mut rng, 2).unwrap();
            assert!(decompose_norm_one(&a, &mut rng).unwrap().verify().unwrap());
        }
        let one = certify_norm_one(&d.one()).unwrap();
        assert!(decompose_norm_one(&one, &mut rng).unwrap().factors.is_empty());
        let m1 = certify_norm_one(&d.one().neg()).unwrap();
        assert!(decompose_norm_one(&m1, &mut rng).unwrap().verify().unwrap());
        let d3 = symbol_xy(3, 7);
        let a = random_norm_one(&d3, &mut rng, 2).unwrap();
        assert!(decompose_norm_one(&a, &mut rng).unwrap().verify().unwrap());
        let w2 = d3.scalar(&TowerElement::Const(d3.omega().pow(2)));
        let w2 = certify_norm_one(&w2).unwrap();
        assert!(decompose_norm_one(&w2, &mut rng).unwrap().verify().unwrap());
    }

    #[test]
    fn general_quaternion_norm_one() {
        let d = hamilton();
        let five = rat(1, 5);
        let a = d
            .scalar(&rat(1, 1))
            .add(&d.i().scale(&rat(2, 1)))
            .add(&d.j().scale(&rat(2, 1)))
            .add(&d.i().mul(&d.j()).scale(&rat(4, 1)))
            .scale(&five);
        let a1 = certify_norm_one(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(decompose_norm_one(&a1, &mut rng).unwrap().verify().unwrap());
    }

    #[test]
    fn kappa_on_symbol_algebras() {
        for (n, p) in [(2usize, 3u64), (3, 7), (4, 5)] {
            let d = symbol_xy(n, p);
            let view = GradedAlgebraView::new(&d).unwrap();
            let (gi, gj) = generator_grades(&d).unwrap();
            let k = kappa(&view, &gi, &gj).unwrap();
            assert!(is_primitive_root_scalar(k.element()));
            assert!(kappa(&view, &gi, &gi).unwrap().element().approx_eq(&d.one()));
            assert!(kappa(&view, &gi, &qvec(&[1, 0])).unwrap().element().approx_eq(&d.one()));
            assert!(kappa(&view, &qvec_frac(&[0, 1], 1), &gj).unwrap().element().approx_eq(&d.one()));
        }
    }

    #[test]
    fn zeta_from_reports() {
        let tr = compute_zeta(&symbol_xy(3, 7).classify().unwrap());
        assert_eq!(tr.zeta, Some(3));
        let sr = compute_zeta(&quaternion_f5().classify().unwrap());
        assert_eq!((sr.residue_index, sr.residue_center_degree, sr.zeta), (Some(1), Some(2), Some(1)));
    }
}
