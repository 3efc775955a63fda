//! Symbol algebras `(a, b)_{ω,n}` over a tower field: generators `i`, `j`
//! with `i^n = a`, `j^n = b` and `j·i = ω·i·j`.
//!
//! Reduced norms, traces and characteristic polynomials come from the
//! splitting representation into `n × n` matrices over the commutative ring
//! `F[α]/(α^n − a)`, where
//! `ρ(i) = diag(α, ωα, …, ω^{n−1}α)` and `ρ(j)` is the cyclic shift with `b`
//! in the corner.

mod classify;
mod kummer;

pub use classify::{quaternion_is_division, RamificationFlags, RamificationReport};
pub use kummer::KummerElement;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fields::{has_exact_order, primitive_root_of_unity, FieldElement};
use crate::lattice::{Lattice, QVector};
use crate::laurent::{Tower, TowerElement};
use crate::ring::{self, Ring};
use kummer::{mat_mul, KummerData};

#[derive(Debug)]
struct AlgData {
    tower: Tower,
    n: usize,
    omega: FieldElement,
    a: TowerElement,
    b: TowerElement,
    omega_pows: Vec<TowerElement>,
    kummer: Arc<KummerData>,
    commutation_broken: bool,
}

#[derive(Debug, Clone)]
pub struct SymbolAlgebra(Arc<AlgData>);

impl PartialEq for SymbolAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.tower == other.0.tower
                && self.0.n == other.0.n
                && self.0.omega == other.0.omega
                && self.0.a == other.0.a
                && self.0.b == other.0.b
                && self.0.commutation_broken == other.0.commutation_broken)
    }
}

impl SymbolAlgebra {
    pub fn new(tower: &Tower, n: usize, omega: &FieldElement, a: &TowerElement, b: &TowerElement) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("degree must be at least 1".into()));
        }
        let omega = tower.base().embed(omega)?;
        if !has_exact_order(&omega, n as u64) {
            return Err(Error::InvalidInput(format!("{omega} is not a primitive {n}-th root of unity")));
        }
        let p = tower.base().characteristic();
        if p != 0 && (n as u64).is_multiple_of(p) {
            return Err(Error::Unsupported(format!("residue characteristic {p} divides {n}")));
        }
        for (name, x) in [("a", a), ("b", b)] {
            if !tower.contains(x) {
                return Err(Error::InvalidInput(format!("{name} = {x} is not in {tower}")));
            }
            if tower.valuation(x)?.is_none() {
                return Err(Error::InvalidInput(format!("{name} must be nonzero")));
            }
        }
        let omega_pows = (0..n).map(|k| TowerElement::Const(omega.pow(k as u64))).collect();
        let kummer = Arc::new(KummerData { n, a: a.clone() });
        let alg = SymbolAlgebra(Arc::new(AlgData {
            tower: tower.clone(),
            n,
            omega,
            a: a.clone(),
            b: b.clone(),
            omega_pows,
            kummer,
            commutation_broken: false,
        }));
        alg.check_representation()?;
        Ok(alg)
    }

    /// Uses the smallest primitive `n`-th root of unity of the base field.
    pub fn with_auto_omega(tower: &Tower, n: usize, a: &TowerElement, b: &TowerElement) -> Result<Self> {
        let omega = primitive_root_of_unity(tower.base(), n as u64)?;
        if omega.field() != tower.base() {
            return Err(Error::Unsupported(format!(
                "no primitive {n}-th root of unity in {}; extend the base field first",
                tower.base()
            )));
        }
        SymbolAlgebra::new(tower, n, &omega, a, b)
    }

    /// A copy whose multiplication ignores the twist `j·i = ω·i·j`. Only
    /// useful for checking that the test suites notice a broken relation.
    #[doc(hidden)]
    pub fn with_broken_commutation(&self) -> Self {
        let d = &self.0;
        SymbolAlgebra(Arc::new(AlgData {
            tower: d.tower.clone(),
            n: d.n,
            omega: d.omega.clone(),
            a: d.a.clone(),
            b: d.b.clone(),
            omega_pows: d.omega_pows.clone(),
            kummer: d.kummer.clone(),
            commutation_broken: true,
        }))
    }

    pub fn tower(&self) -> &Tower {
        &self.0.tower
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn dimension(&self) -> usize {
        self.0.n * self.0.n
    }

    pub fn omega(&self) -> &FieldElement {
        &self.0.omega
    }

    pub fn a(&self) -> &TowerElement {
        &self.0.a
    }

    pub fn b(&self) -> &TowerElement {
        &self.0.b
    }

    fn make(&self, c: Vec<TowerElement>) -> AlgebraElement {
        AlgebraElement { alg: self.clone(), c }
    }

    pub fn zero(&self) -> AlgebraElement {
        self.make(vec![self.0.tower.zero(); self.dimension()])
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(&self.0.tower.one())
    }

    pub fn scalar(&self, f: &TowerElement) -> AlgebraElement {
        self.monomial(f, 0, 0)
    }

    /// `f·i^k·j^l` with `0 ≤ k, l < n`.
    pub fn monomial(&self, f: &TowerElement, k: usize, l: usize) -> AlgebraElement {
        let n = self.0.n;
        assert!(k < n && l < n, "exponents must be below the degree");
        let mut x = self.zero();
        x.c[k * n + l] = f.clone();
        x
    }

    pub fn basis(&self, k: usize, l: usize) -> AlgebraElement {
        self.monomial(&self.0.tower.one(), k, l)
    }

    pub fn i(&self) -> AlgebraElement {
        self.basis(1 % self.0.n, 0)
    }

    pub fn j(&self) -> AlgebraElement {
        self.basis(0, 1 % self.0.n)
    }

    /// Coefficients indexed `k·n + l` for `i^k j^l`.
    pub fn from_coeffs(&self, c: Vec<TowerElement>) -> Result<AlgebraElement> {
        if c.len() != self.dimension() {
            return Err(Error::InvalidInput(format!("expected {} coefficients", self.dimension())));
        }
        if let Some(x) = c.iter().find(|x| !self.0.tower.contains(x)) {
            return Err(Error::InvalidInput(format!("{x} is not in {}", self.0.tower)));
        }
        Ok(self.make(c))
    }

    /// Random element whose coefficients are Laurent polynomials with up to
    /// `terms` monomials each.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, spread: i64) -> AlgebraElement {
        let c = (0..self.dimension()).map(|_| self.0.tower.random_element(rng, terms, spread)).collect();
        self.make(c)
    }

    /// Random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, terms: usize, spread: i64) -> AlgebraElement {
        loop {
            let x = self.random(rng, terms.max(1), spread);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `ρ(i)`, `ρ(j)` satisfy the defining relations.
    pub fn check_representation(&self) -> Result<()> {
        let ri = self.i().splitting_rep();
        let rj = self.j().splitting_rep();
        let n = self.0.n;
        let k = &self.0.kummer;
        let scalar_mat = |x: &TowerElement| -> Vec<Vec<KummerElement>> {
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| KummerElement::monomial(k, if r == c { x.clone() } else { x.zero_like() }, 0))
                        .collect()
                })
                .collect()
        };
        let pow = |m: &Vec<Vec<KummerElement>>| (1..n).fold(m.clone(), |acc, _| mat_mul(&acc, m));
        let same = |x: &Vec<Vec<KummerElement>>, y: &Vec<Vec<KummerElement>>| {
            x.iter().flatten().zip(y.iter().flatten()).all(|(p, q)| p.sub(q).is_zero())
        };
        if !same(&pow(&ri), &scalar_mat(&self.0.a)) {
            return Err(Error::RelationFailure("ρ(i)^n ≠ a".into()));
        }
        if !same(&pow(&rj), &scalar_mat(&self.0.b)) {
            return Err(Error::RelationFailure("ρ(j)^n ≠ b".into()));
        }
        let ji = mat_mul(&rj, &ri);
        let ij = mat_mul(&ri, &rj);
        let w = KummerElement::monomial(k, TowerElement::Const(self.0.omega.clone()), 0);
        let wij: Vec<Vec<KummerElement>> = ij.iter().map(|r| r.iter().map(|x| w.mul(x)).collect()).collect();
        if !same(&ji, &wij) {
            return Err(Error::RelationFailure("ρ(j)ρ(i) ≠ ωρ(i)ρ(j)".into()));
        }
        Ok(())
    }

    /// Γ_D: generated by Γ_F = ℤ^m together with `v_D(i)` and `v_D(j)`.
    pub fn value_group(&self) -> Result<Lattice> {
        let m = self.0.tower.height();
        let mut gens: Vec<QVector> = self.0.tower.value_group().basis();
        gens.push(self.i().v_d()?);
        gens.push(self.j().v_d()?);
        let g = Lattice::new(m, &gens)?;
        if !g.contains_lattice(&self.0.tower.value_group())? {
            return Err(Error::Inconsistent("Γ_F ⊄ Γ_D".into()));
        }
        Ok(g)
    }

    pub fn classify(&self) -> Result<RamificationReport> {
        classify::classify(self)
    }
}

impl fmt::Display for SymbolAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symbol(n={}, omega={}, a={}, b={}) over {}",
            self.0.n, self.0.omega, self.0.a, self.0.b, self.0.tower
        )
    }
}

/// `Σ c_{kl} i^k j^l`.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    alg: SymbolAlgebra,
    c: Vec<TowerElement>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.c == other.c
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &SymbolAlgebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[TowerElement] {
        &self.c
    }

    pub fn coeff(&self, k: usize, l: usize) -> &TowerElement {
        &self.c[k * self.alg.0.n + l]
    }

    /// Zero to the certified precision.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Equality to the certified precision.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.sub(other).is_zero()
    }

    /// The central coefficient if every other coefficient vanishes.
    pub fn as_scalar(&self) -> Option<&TowerElement> {
        self.c[1..].iter().all(|x| x.is_zero()).then_some(&self.c[0])
    }

    /// `(f, k, l)` when the element is `f·i^k·j^l`.
    pub fn as_monomial(&self) -> Option<(&TowerElement, usize, usize)> {
        let n = self.alg.0.n;
        let mut nz = self.c.iter().enumerate().filter(|(_, x)| !x.is_exact_zero());
        let (idx, f) = nz.next()?;
        nz.next().is_none().then_some((f, idx / n, idx % n))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.alg == other.alg);
        self.alg.make(self.c.iter().zip(&other.c).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.alg == other.alg);
        self.alg.make(self.c.iter().zip(&other.c).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self) -> Self {
        self.alg.make(self.c.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, f: &TowerElement) -> Self {
        self.alg.make(self.c.iter().map(|x| x * f).collect())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Normal-form product using `j^l i^{k'} = ω^{l k'} i^{k'} j^l`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.alg == other.alg);
        let d = &self.alg.0;
        let n = d.n;
        let mut out = vec![d.tower.zero(); n * n];
        for (idx1, x) in self.c.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            let (k, l) = (idx1 / n, idx1 % n);
            for (idx2, y) in other.c.iter().enumerate() {
                if y.is_exact_zero() {
                    continue;
                }
                let (k2, l2) = (idx2 / n, idx2 % n);
                let mut t = x * y;
                if !d.commutation_broken {
                    t = &t * &d.omega_pows[(l * k2) % n];
                }
                let (mut kk, mut ll) = (k + k2, l + l2);
                if kk >= n {
                    kk -= n;
                    t = &t * &d.a;
                }
                if ll >= n {
                    ll -= n;
                    t = &t * &d.b;
                }
                let slot = &mut out[kk * n + ll];
                *slot = &*slot + &t;
            }
        }
        self.alg.make(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.alg.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// `ρ(e)`: row `r` of `ρ(i^k j^l)` has `ω^{rk} α^k` (times `b` on wrap)
    /// in column `r + l mod n`.
    pub fn splitting_rep(&self) -> Vec<Vec<KummerElement>> {
        let d = &self.alg.0;
        let n = d.n;
        let zero = KummerElement::new(&d.kummer, vec![d.tower.zero(); n]);
        let mut m = vec![vec![zero; n]; n];
        for (idx, x) in self.c.iter().enumerate() {
            if x.is_exact_zero() {
                continue;
            }
            let (k, l) = (idx / n, idx % n);
            for (r, row) in m.iter_mut().enumerate() {
                let mut e = x * &d.omega_pows[(r * k) % n];
                if r + l >= n {
                    e = &e * &d.b;
                }
                let col = (r + l) % n;
                let slot = &mut row[col].c[k];
                *slot = &*slot + &e;
            }
        }
        m
    }

    /// Reduced characteristic polynomial, monic, leading coefficient first.
    pub fn prd(&self) -> Result<Vec<TowerElement>> {
        let d = &self.alg.0;
        let one = KummerElement::monomial(&d.kummer, d.tower.one(), 0);
        let cp = ring::charpoly(&self.splitting_rep(), &one)?;
        cp.into_iter()
            .map(|c| {
                c.base_part()
                    .cloned()
                    .ok_or_else(|| Error::RelationFailure("reduced characteristic polynomial is not α-free".into()))
            })
            .collect()
    }

    /// Reduced norm `det ρ(e)`.
    pub fn nrd(&self) -> Result<TowerElement> {
        let d = &self.alg.0;
        let one = KummerElement::monomial(&d.kummer, d.tower.one(), 0);
        let det = ring::det(&self.splitting_rep(), &one)?;
        det.base_part()
            .cloned()
            .ok_or_else(|| Error::RelationFailure("reduced norm is not α-free".into()))
    }

    /// Reduced trace `tr ρ(e)`.
    pub fn trd(&self) -> Result<TowerElement> {
        let rep = self.splitting_rep();
        let tr = (1..rep.len()).fold(rep[0][0].clone(), |acc, r| acc.add(&rep[r][r]));
        tr.base_part()
            .cloned()
            .ok_or_else(|| Error::RelationFailure("reduced trace is not α-free".into()))
    }

    /// `p(e)` for a polynomial over `F` given leading coefficient first.
    pub fn eval_poly(&self, p: &[TowerElement]) -> Self {
        p.iter().fold(self.alg.zero(), |acc, c| acc.mul(self).add(&self.alg.scalar(c)))
    }

    /// Inverse through Cayley–Hamilton: only the reduced norm is inverted.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.alg.0.n;
        let p = self.prd()?;
        let pn = &p[n];
        if pn.is_exact_zero() {
            return Err(Error::NotAUnit);
        }
        let pn_inv = pn.inv()?;
        let mut acc = self.alg.one();
        for c in &p[1..n] {
            acc = acc.mul(self).add(&self.alg.scalar(c));
        }
        Ok(acc.scale(&(-&pn_inv)))
    }

    /// Matrix of left multiplication by `e` on the basis `i^k j^l`.
    pub fn left_regular_matrix(&self) -> Vec<Vec<TowerElement>> {
        let n = self.alg.0.n;
        let dim = n * n;
        let cols: Vec<Vec<TowerElement>> =
            (0..dim).map(|b| self.mul(&self.alg.basis(b / n, b % n)).c).collect();
        (0..dim).map(|r| (0..dim).map(|b| cols[b][r].clone()).collect()).collect()
    }

    /// Inverse from the linear system `e·x = 1`, `None` when singular.
    pub fn inverse_by_linear_system(&self) -> Result<Option<Self>> {
        let m = self.left_regular_matrix();
        let rhs = self.alg.one().c;
        match ring::solve(&m, &rhs) {
            Ok(x) => Ok(Some(self.alg.make(x))),
            Err(Error::NotAUnit) | Err(Error::DivisionByZero) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// `v_D(e) = v(Nrd(e)) / n`.
    pub fn v_d(&self) -> Result<QVector> {
        let d = &self.alg.0;
        let mut rel = 2;
        let v = loop {
            if rel > d.tower.precision() {
                break d.tower.valuation(&self.nrd()?)?.ok_or(Error::ZeroElement)?;
            }
            let approx = self.alg.make(self.c.iter().map(|c| c.truncated(rel)).collect());
            match approx.nrd().and_then(|x| d.tower.valuation(&x)) {
                Ok(Some(v)) => break v,
                Ok(None) | Err(Error::PrecisionExhausted) => rel *= 2,
                Err(e) => return Err(e),
            }
        };
        let n = BigInt::from(d.n);
        Ok(v.into_iter().map(|e| BigRational::new(e.into(), n.clone())).collect())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.alg.0.n;
        let mut terms: Vec<String> = Vec::new();
        for (idx, c) in self.c.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let (k, l) = (idx / n, idx % n);
            let mut mono = Vec::new();
            for (g, e) in [("i", k), ("j", l)] {
                match e {
                    0 => {}
                    1 => mono.push(g.to_string()),
                    _ => mono.push(format!("{g}^{e}")),
                }
            }
            let mono = mono.join("*");
            terms.push(if mono.is_empty() {
                c.to_string()
            } else if c.is_exact_one() {
                mono
            } else {
                let cs = c.to_string();
                if cs.contains(' ') || cs.contains('+') || cs[1..].contains('-') {
                    format!("({cs})*{mono}")
                } else {
                    format!("{cs}*{mono}")
                }
            });
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in terms.iter().enumerate() {
            match (i, t.strip_prefix('-')) {
                (0, _) => write!(f, "{t}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

impl Ring for AlgebraElement {
    fn zero_like(&self) -> Self {
        self.alg.zero()
    }

    fn one_like(&self) -> Self {
        self.alg.one()
    }

    fn add(&self, rhs: &Self) -> Self {
        AlgebraElement::add(self, rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        AlgebraElement::sub(self, rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        AlgebraElement::mul(self, rhs)
    }

    fn neg(&self) -> Self {
        AlgebraElement::neg(self)
    }

    fn is_zero(&self) -> bool {
        AlgebraElement::is_zero(self)
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(self, rhs)
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::sub(self, rhs)
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

impl std::ops::Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement::neg(self)
    }
}
